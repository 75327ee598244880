//! Superoperator representations of linear Hermiticity-preserving maps and
//! the conversions between them.
//!
//! The canonical internal representation is the transfer matrix `A` acting on
//! row-stacked density matrices: rho' = unvec(A vec(rho)). For a map from an
//! n-dimensional to an m-dimensional system, A is m^2 x n^2 with row index
//! r'*m + s' and column index r*n + s.
//!
//! The positivity matrix `B` is the reshuffle
//!     B[r'*n + r, s'*n + s] = A[r'*m + s', r*n + s],
//! which under these row-major conventions is entry-for-entry the same array
//! as the Choi block matrix sum_ij E(|i><j|) (x) |i><j|. The map is completely
//! positive exactly when B is positive semidefinite, and B's signed spectral
//! decomposition yields a signed operator-sum form.

use crate::matrix::{ComplexMatrix, MatrixError};
use num_complex::Complex64;
use std::sync::OnceLock;
use thiserror::Error;

/// Tolerance for the structural checks performed at construction time:
/// Hermiticity of B/Choi input and the conjugation symmetry of A.
pub const STRUCTURE_TOL: f64 = 1e-12;

/// Eigenvalues below this magnitude are dropped when extracting operator-sum
/// terms from B.
pub const KRAUS_CUTOFF: f64 = 1e-12;

#[derive(Debug, Clone, Error)]
pub enum ChannelError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not Hermitian: defect {defect:.3e} exceeds {tol:.3e}")]
    NonHermitianInput { defect: f64, tol: f64 },
    #[error("transfer matrix violates the conjugation symmetry: defect {defect:.3e} exceeds {tol:.3e}")]
    HermiticityViolation { defect: f64, tol: f64 },
    #[error("invalid operator-sum data: {0}")]
    InvalidKraus(String),
    #[error("unsupported size: {0}")]
    UnsupportedSize(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// One term of a signed operator-sum: eta * op rho op^dagger with eta = +-1.
#[derive(Clone, Debug)]
pub struct KrausTerm {
    pub eta: i8,
    pub op: ComplexMatrix,
}

/// The representation a channel was constructed from. Serialization repeats
/// this form so files round-trip without conversion noise.
#[derive(Clone, Debug)]
pub enum Rep {
    A(ComplexMatrix),
    B(ComplexMatrix),
    Choi(ComplexMatrix),
    Kraus(Vec<KrausTerm>),
}

impl Rep {
    pub fn kind(&self) -> &'static str {
        match self {
            Rep::A(_) => "a",
            Rep::B(_) => "b",
            Rep::Choi(_) => "choi",
            Rep::Kraus(_) => "kraus",
        }
    }
}

/// A linear Hermiticity-preserving map between density matrices, with
/// conversions between representations computed on demand and memoized.
#[derive(Clone, Debug)]
pub struct Channel {
    dim_in: usize,
    dim_out: usize,
    source: Rep,
    a: OnceLock<ComplexMatrix>,
    b: OnceLock<ComplexMatrix>,
    choi: OnceLock<ComplexMatrix>,
    kraus: OnceLock<Vec<KrausTerm>>,
    trace_preserving: OnceLock<bool>,
}

impl Channel {
    /// Builds a channel from its transfer matrix. The conjugation symmetry
    /// A[s'r', sr] = conj(A[r's', rs]) is required within 1e-12; trace
    /// preservation is checked and recorded but not required.
    pub fn from_a(a: ComplexMatrix, dim_in: usize, dim_out: usize) -> Result<Self, ChannelError> {
        check_dims(dim_in, dim_out)?;
        if a.rows() != dim_out * dim_out || a.cols() != dim_in * dim_in {
            return Err(ChannelError::DimensionMismatch(format!(
                "transfer matrix must be {}x{}, got {}x{}",
                dim_out * dim_out,
                dim_in * dim_in,
                a.rows(),
                a.cols()
            )));
        }
        let defect = a_conjugation_defect(&a, dim_in, dim_out);
        if defect > STRUCTURE_TOL {
            return Err(ChannelError::HermiticityViolation {
                defect,
                tol: STRUCTURE_TOL,
            });
        }
        let ch = Channel::empty(dim_in, dim_out, Rep::A(a.clone()));
        ch.a.set(a).ok();
        Ok(ch)
    }

    /// Builds a channel from its positivity (reshuffled) matrix, which must be
    /// Hermitian within 1e-12.
    pub fn from_b(b: ComplexMatrix, dim_in: usize, dim_out: usize) -> Result<Self, ChannelError> {
        Self::from_b_like(b, dim_in, dim_out, false)
    }

    /// Builds a channel from its Choi block matrix. Identical array content to
    /// the reshuffled form under this crate's conventions; kept separate so
    /// files and cross-checks can speak both dialects.
    pub fn from_choi(c: ComplexMatrix, dim_in: usize, dim_out: usize) -> Result<Self, ChannelError> {
        Self::from_b_like(c, dim_in, dim_out, true)
    }

    fn from_b_like(
        b: ComplexMatrix,
        dim_in: usize,
        dim_out: usize,
        is_choi: bool,
    ) -> Result<Self, ChannelError> {
        check_dims(dim_in, dim_out)?;
        let side = dim_in * dim_out;
        if b.rows() != side || b.cols() != side {
            return Err(ChannelError::DimensionMismatch(format!(
                "positivity matrix must be {side}x{side}, got {}x{}",
                b.rows(),
                b.cols()
            )));
        }
        let defect = b.hermitian_defect();
        if defect > STRUCTURE_TOL {
            return Err(ChannelError::NonHermitianInput {
                defect,
                tol: STRUCTURE_TOL,
            });
        }
        let source = if is_choi {
            Rep::Choi(b.clone())
        } else {
            Rep::B(b.clone())
        };
        let ch = Channel::empty(dim_in, dim_out, source);
        if is_choi {
            ch.choi.set(b.clone()).ok();
        }
        ch.b.set(b).ok();
        Ok(ch)
    }

    /// Builds a channel from signed operator-sum terms.
    pub fn from_kraus(
        terms: Vec<KrausTerm>,
        dim_in: usize,
        dim_out: usize,
    ) -> Result<Self, ChannelError> {
        check_dims(dim_in, dim_out)?;
        if terms.is_empty() {
            return Err(ChannelError::InvalidKraus("empty operator list".into()));
        }
        for (i, t) in terms.iter().enumerate() {
            if t.eta != 1 && t.eta != -1 {
                return Err(ChannelError::InvalidKraus(format!(
                    "term {i}: eta must be +1 or -1, got {}",
                    t.eta
                )));
            }
            if t.op.rows() != dim_out || t.op.cols() != dim_in {
                return Err(ChannelError::InvalidKraus(format!(
                    "term {i}: operator must be {dim_out}x{dim_in}, got {}x{}",
                    t.op.rows(),
                    t.op.cols()
                )));
            }
        }
        let ch = Channel::empty(dim_in, dim_out, Rep::Kraus(terms.clone()));
        ch.kraus.set(terms).ok();
        Ok(ch)
    }

    /// The identity channel on a d-dimensional system.
    pub fn identity(dim: usize) -> Self {
        Channel::from_a(ComplexMatrix::identity(dim * dim), dim, dim)
            .expect("identity transfer matrix is valid")
    }

    fn empty(dim_in: usize, dim_out: usize, source: Rep) -> Self {
        Channel {
            dim_in,
            dim_out,
            source,
            a: OnceLock::new(),
            b: OnceLock::new(),
            choi: OnceLock::new(),
            kraus: OnceLock::new(),
            trace_preserving: OnceLock::new(),
        }
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    /// The representation this channel was constructed from.
    pub fn source(&self) -> &Rep {
        &self.source
    }

    /// Transfer matrix, acting on row-stacked density matrices.
    pub fn a_matrix(&self) -> &ComplexMatrix {
        self.a.get_or_init(|| match &self.source {
            Rep::A(a) => a.clone(),
            Rep::B(_) | Rep::Choi(_) => {
                let b = self.b.get().expect("constructor stored b");
                reshuffle_b_to_a(b, self.dim_in, self.dim_out)
            }
            Rep::Kraus(terms) => {
                // rho' = sum eta E rho E^dag  <=>  A = sum eta E (x) conj(E).
                let mut a = ComplexMatrix::zeros(
                    self.dim_out * self.dim_out,
                    self.dim_in * self.dim_in,
                );
                for t in terms {
                    let term = t.op.kron(&t.op.conj()).scale_re(t.eta as f64);
                    a = &a + &term;
                }
                a
            }
        })
    }

    /// Positivity matrix: the reshuffle of the transfer matrix. Positive
    /// semidefinite exactly for completely positive maps.
    pub fn b_matrix(&self) -> &ComplexMatrix {
        self.b
            .get_or_init(|| reshuffle_a_to_b(self.a_matrix(), self.dim_in, self.dim_out))
    }

    /// Choi block matrix assembled by applying the map to every matrix unit:
    /// sum_ij E(|i><j|) (x) |i><j|. An independent route to the same array as
    /// `b_matrix`, used for cross-checks.
    pub fn choi_matrix(&self) -> &ComplexMatrix {
        self.choi.get_or_init(|| {
            let n = self.dim_in;
            let m = self.dim_out;
            let mut c = ComplexMatrix::zeros(m * n, m * n);
            for i in 0..n {
                for j in 0..n {
                    let mut unit = ComplexMatrix::zeros(n, n);
                    unit[(i, j)] = Complex64::new(1.0, 0.0);
                    let image = self
                        .apply_matrix(&unit)
                        .expect("matrix unit has the channel's input dimension");
                    for a in 0..m {
                        for b in 0..m {
                            c[(a * n + i, b * n + j)] = image[(a, b)];
                        }
                    }
                }
            }
            c
        })
    }

    /// Signed operator-sum terms from the spectral decomposition of the
    /// positivity matrix: op = sqrt(|gamma|) unvec(eigenvector), eta matching
    /// the eigenvalue sign. Eigenvalues of magnitude below 1e-12 are dropped.
    /// Terms come out ordered by descending eigenvalue.
    pub fn kraus(&self) -> &Vec<KrausTerm> {
        self.kraus.get_or_init(|| {
            let b = self.b_matrix();
            let eig = b.eigh().expect("positivity matrix is Hermitian by construction");
            let mut terms = Vec::new();
            for (k, &gamma) in eig.eigenvalues.iter().enumerate() {
                if gamma.abs() < KRAUS_CUTOFF {
                    continue;
                }
                let col = eig.eigenvectors.column(k).scale_re(gamma.abs().sqrt());
                let op = ComplexMatrix::unvectorize(&col, self.dim_out, self.dim_in)
                    .expect("eigenvector length matches dim_out*dim_in");
                terms.push(KrausTerm {
                    eta: if gamma >= 0.0 { 1 } else { -1 },
                    op,
                });
            }
            terms
        })
    }

    /// Whether sum_r' A[(r',r'), (s,r)] = delta_sr holds within 1e-12.
    /// Recorded, not enforced: intermediate objects are allowed to break it.
    pub fn is_trace_preserving(&self) -> bool {
        *self
            .trace_preserving
            .get_or_init(|| self.trace_preservation_defect() <= 1e-12)
    }

    /// Largest violation of the trace-preservation row-sum condition.
    pub fn trace_preservation_defect(&self) -> f64 {
        let a = self.a_matrix();
        let (n, m) = (self.dim_in, self.dim_out);
        let mut worst = 0.0f64;
        for s in 0..n {
            for r in 0..n {
                let mut sum = Complex64::new(0.0, 0.0);
                for rp in 0..m {
                    sum += a[(rp * m + rp, s * n + r)];
                }
                let want = if s == r { 1.0 } else { 0.0 };
                worst = worst.max((sum - want).norm());
            }
        }
        worst
    }

    /// Conjugation-symmetry defect of the transfer matrix.
    pub fn hermiticity_defect(&self) -> f64 {
        a_conjugation_defect(self.a_matrix(), self.dim_in, self.dim_out)
    }

    /// trace(B); equals dim_in for trace-preserving maps. Reported by the
    /// diagnostics but never enforced.
    pub fn b_trace(&self) -> f64 {
        self.b_matrix().trace().re
    }

    /// Complete-positivity verdict: smallest eigenvalue of the positivity
    /// matrix compared against -tol. Returns (verdict, min eigenvalue).
    pub fn is_cp(&self, tol: f64) -> (bool, f64) {
        let min = self
            .b_matrix()
            .min_eigenvalue()
            .expect("positivity matrix is Hermitian by construction");
        (min >= -tol, min)
    }

    /// Full spectrum of the positivity matrix, descending.
    pub fn b_spectrum(&self) -> Vec<f64> {
        self.b_matrix()
            .eigh()
            .expect("positivity matrix is Hermitian by construction")
            .eigenvalues
    }

    /// Applies the map to a raw matrix via unvec(A vec(rho)).
    pub fn apply_matrix(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix, ChannelError> {
        if rho.rows() != self.dim_in || rho.cols() != self.dim_in {
            return Err(ChannelError::DimensionMismatch(format!(
                "state must be {0}x{0}, got {1}x{2}",
                self.dim_in,
                rho.rows(),
                rho.cols()
            )));
        }
        let out = self.a_matrix() * &rho.vectorize();
        Ok(ComplexMatrix::unvectorize(&out, self.dim_out, self.dim_out)?)
    }

    /// Applies the map to a density matrix. The output is not re-validated:
    /// maps that are not trace preserving, and compositions probed outside
    /// their positivity domain, legitimately produce non-state outputs.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix, ChannelError> {
        let out = self.apply_matrix(rho.matrix())?;
        Ok(DensityMatrix::from_matrix_unchecked(out))
    }

    /// Applies the map through its operator-sum terms. Redundant with
    /// `apply_matrix` by construction; kept as an independent route for tests.
    pub fn apply_via_kraus(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix, ChannelError> {
        if rho.rows() != self.dim_in || rho.cols() != self.dim_in {
            return Err(ChannelError::DimensionMismatch(
                "state dimension does not match the channel input".into(),
            ));
        }
        let mut out = ComplexMatrix::zeros(self.dim_out, self.dim_out);
        for t in self.kraus() {
            let term = &(&t.op * rho) * &t.op.dagger();
            out = &out + &term.scale_re(t.eta as f64);
        }
        Ok(out)
    }
}

fn check_dims(dim_in: usize, dim_out: usize) -> Result<(), ChannelError> {
    if dim_in == 0 || dim_out == 0 {
        return Err(ChannelError::DimensionMismatch(
            "zero-dimensional system".into(),
        ));
    }
    if dim_in > 16 || dim_out > 16 {
        return Err(ChannelError::UnsupportedSize(format!(
            "dimensions above 16 are outside this crate's verified range (got {dim_in} -> {dim_out})"
        )));
    }
    Ok(())
}

/// max |A[(s',r'),(s,r)] - conj(A[(r',s'),(r,s)])|.
fn a_conjugation_defect(a: &ComplexMatrix, dim_in: usize, dim_out: usize) -> f64 {
    let (n, m) = (dim_in, dim_out);
    let mut worst = 0.0f64;
    for rp in 0..m {
        for sp in 0..m {
            for r in 0..n {
                for s in 0..n {
                    let lhs = a[(sp * m + rp, s * n + r)];
                    let rhs = a[(rp * m + sp, r * n + s)].conj();
                    worst = worst.max((lhs - rhs).norm());
                }
            }
        }
    }
    worst
}

/// B[r'*n + r, s'*n + s] = A[r'*m + s', r*n + s].
pub fn reshuffle_a_to_b(a: &ComplexMatrix, dim_in: usize, dim_out: usize) -> ComplexMatrix {
    let (n, m) = (dim_in, dim_out);
    let mut b = ComplexMatrix::zeros(m * n, m * n);
    for rp in 0..m {
        for r in 0..n {
            for sp in 0..m {
                for s in 0..n {
                    b[(rp * n + r, sp * n + s)] = a[(rp * m + sp, r * n + s)];
                }
            }
        }
    }
    b
}

/// Exact inverse of `reshuffle_a_to_b`; the reshuffle is an involution on
/// index pairs, so round trips are bitwise.
pub fn reshuffle_b_to_a(b: &ComplexMatrix, dim_in: usize, dim_out: usize) -> ComplexMatrix {
    let (n, m) = (dim_in, dim_out);
    let mut a = ComplexMatrix::zeros(m * m, n * n);
    for rp in 0..m {
        for r in 0..n {
            for sp in 0..m {
                for s in 0..n {
                    a[(rp * m + sp, r * n + s)] = b[(rp * n + r, sp * n + s)];
                }
            }
        }
    }
    a
}

/// Sequential composition: `outer` after `inner`. Transfer matrices multiply.
pub fn compose(outer: &Channel, inner: &Channel) -> Result<Channel, ChannelError> {
    if outer.dim_in() != inner.dim_out() {
        return Err(ChannelError::DimensionMismatch(format!(
            "composition mismatch: outer expects dimension {}, inner produces {}",
            outer.dim_in(),
            inner.dim_out()
        )));
    }
    let a = outer.a_matrix() * inner.a_matrix();
    Channel::from_a(a, inner.dim_in(), outer.dim_out())
}

/// Maps the global row-stacked index of a k-qubit system to the local
/// per-qubit stacking order. Global vec bits read (a_1..a_k b_1..b_k); local
/// bits read (a_1 b_1 a_2 b_2 ... a_k b_k), most significant first.
fn interleave_index(g: usize, k: usize) -> usize {
    let mut l = 0usize;
    for i in 0..k {
        let a = (g >> (2 * k - 1 - i)) & 1;
        let b = (g >> (k - 1 - i)) & 1;
        l |= a << (2 * k - 1 - 2 * i);
        l |= b << (2 * k - 2 - 2 * i);
    }
    l
}

/// Extends single-qubit channels to one channel on the joint system, acting
/// factor-by-factor. The raw Kronecker product of transfer matrices acts on
/// the wrong vectorization order, so it is conjugated by the permutation that
/// regroups global row-stacking into per-qubit row-stacking.
pub fn extend_local(channels: &[Channel]) -> Result<Channel, ChannelError> {
    let k = channels.len();
    if k == 0 || k > 3 {
        return Err(ChannelError::UnsupportedSize(format!(
            "local extension supports 1 to 3 qubit factors, got {k}"
        )));
    }
    for (i, ch) in channels.iter().enumerate() {
        if ch.dim_in() != 2 || ch.dim_out() != 2 {
            return Err(ChannelError::DimensionMismatch(format!(
                "factor {i} must be a single-qubit channel, got {} -> {}",
                ch.dim_in(),
                ch.dim_out()
            )));
        }
    }
    let mut tensor = channels[0].a_matrix().clone();
    for ch in &channels[1..] {
        tensor = tensor.kron(ch.a_matrix());
    }
    let dim = 1usize << k;
    let side = dim * dim;
    let a = ComplexMatrix::from_fn(side, side, |g, h| {
        tensor[(interleave_index(g, k), interleave_index(h, k))]
    });
    Channel::from_a(a, dim, dim)
}

/// The operator-sum route to the same extension: tensor every combination of
/// the factors' terms. Kept alongside the permutation route as a cross-check;
/// the permutation route is the canonical implementation.
pub fn extend_local_via_kraus(channels: &[Channel]) -> Result<Channel, ChannelError> {
    let k = channels.len();
    if k == 0 || k > 3 {
        return Err(ChannelError::UnsupportedSize(format!(
            "local extension supports 1 to 3 qubit factors, got {k}"
        )));
    }
    let dim = 1usize << k;
    let mut combos: Vec<KrausTerm> = vec![KrausTerm {
        eta: 1,
        op: ComplexMatrix::identity(1),
    }];
    for ch in channels {
        if ch.dim_in() != 2 || ch.dim_out() != 2 {
            return Err(ChannelError::DimensionMismatch(
                "all factors must be single-qubit channels".into(),
            ));
        }
        let mut next = Vec::with_capacity(combos.len() * ch.kraus().len());
        for base in &combos {
            for t in ch.kraus() {
                next.push(KrausTerm {
                    eta: base.eta * t.eta,
                    op: base.op.kron(&t.op),
                });
            }
        }
        combos = next;
    }
    Channel::from_kraus(combos, dim, dim)
}

/// A density matrix: square, unit trace and Hermitian within 1e-12.
/// Positivity is deliberately not enforced; maps with restricted positivity
/// domains are probed with states outside them, and channel outputs may have
/// negative eigenvalues.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    dim: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self, ChannelError> {
        if !matrix.is_square() {
            return Err(ChannelError::DimensionMismatch(
                "density matrix must be square".into(),
            ));
        }
        let tr = matrix.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > 1e-12 {
            return Err(ChannelError::DimensionMismatch(format!(
                "density matrix trace must be 1, got {tr}"
            )));
        }
        let defect = matrix.hermitian_defect();
        if defect > 1e-12 {
            return Err(ChannelError::NonHermitianInput {
                defect,
                tol: 1e-12,
            });
        }
        Ok(DensityMatrix {
            dim: matrix.rows(),
            matrix,
        })
    }

    /// Wraps a matrix with no validation. Used for channel outputs, which may
    /// be non-unit-trace (non-trace-preserving maps) or non-positive.
    pub fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        DensityMatrix {
            dim: matrix.rows(),
            matrix,
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix {
            dim,
            matrix: ComplexMatrix::identity(dim).scale_re(1.0 / dim as f64),
        }
    }

    /// |v><v| / <v|v>.
    pub fn pure_state(v: &[Complex64]) -> Result<Self, ChannelError> {
        let norm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if norm_sq == 0.0 {
            return Err(ChannelError::DimensionMismatch("zero state vector".into()));
        }
        let d = v.len();
        let m = ComplexMatrix::from_fn(d, d, |i, j| v[i] * v[j].conj() / norm_sq);
        Ok(DensityMatrix { dim: d, matrix: m })
    }

    /// |i><i| on a d-dimensional system.
    pub fn basis_projector(dim: usize, i: usize) -> Self {
        let mut m = ComplexMatrix::zeros(dim, dim);
        m[(i, i)] = Complex64::new(1.0, 0.0);
        DensityMatrix { dim, matrix: m }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// tr(rho^2), real part.
    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Transfer matrix of the transpose map: permutes vec components.
    fn transpose_a() -> ComplexMatrix {
        ComplexMatrix::from_real(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
        ])
    }

    #[test]
    fn identity_positivity_matrix_is_bell_projector() {
        let id = Channel::identity(2);
        let b = id.b_matrix();
        for i in 0..4 {
            for j in 0..4 {
                let want = if (i == 0 || i == 3) && (j == 0 || j == 3) {
                    1.0
                } else {
                    0.0
                };
                assert_eq!(b[(i, j)].re, want, "entry ({i},{j})");
            }
        }
        let spec = id.b_spectrum();
        assert!((spec[0] - 2.0).abs() < 1e-12);
        assert!(spec[1].abs() < 1e-12);
    }

    #[test]
    fn transpose_map_spectrum() {
        let t = Channel::from_a(transpose_a(), 2, 2).unwrap();
        let spec = t.b_spectrum();
        let want = [1.0, 1.0, 1.0, -1.0];
        for (got, want) in spec.iter().zip(want.iter()) {
            assert!((got - want).abs() < 1e-12);
        }
        let (cp, min) = t.is_cp(1e-10);
        assert!(!cp);
        assert!((min + 1.0).abs() < 1e-12);
        assert!(t.is_trace_preserving());
    }

    #[test]
    fn reshuffle_round_trip_is_bitwise() {
        let a = transpose_a();
        let b = reshuffle_a_to_b(&a, 2, 2);
        let back = reshuffle_b_to_a(&b, 2, 2);
        assert!(back == a);
    }

    #[test]
    fn choi_matches_reshuffle() {
        let t = Channel::from_a(transpose_a(), 2, 2).unwrap();
        assert!(t.choi_matrix().approx_eq(t.b_matrix(), 1e-14));
    }

    #[test]
    fn kraus_of_identity_is_identity_up_to_phase() {
        let id = Channel::identity(2);
        let terms = id.kraus();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].eta, 1);
        // op = phase * I2; op op^dag = I2 fixes the magnitude.
        let prod = &terms[0].op * &terms[0].op.dagger();
        assert!(prod.approx_eq(&ComplexMatrix::identity(2), 1e-12));
        let off = terms[0].op[(0, 1)].norm() + terms[0].op[(1, 0)].norm();
        assert!(off < 1e-12);
    }

    #[test]
    fn kraus_reconstructs_positivity_matrix() {
        let t = Channel::from_a(transpose_a(), 2, 2).unwrap();
        let mut rebuilt = ComplexMatrix::zeros(4, 4);
        for term in t.kraus() {
            let v = term.op.vectorize();
            let outer = &v * &v.dagger();
            rebuilt = &rebuilt + &outer.scale_re(term.eta as f64);
        }
        assert!(rebuilt.approx_eq(t.b_matrix(), 1e-10));
    }

    #[test]
    fn apply_routes_agree() {
        let t = Channel::from_a(transpose_a(), 2, 2).unwrap();
        let rho = ComplexMatrix::from_rows(&[
            vec![c(0.7, 0.0), c(0.1, 0.2)],
            vec![c(0.1, -0.2), c(0.3, 0.0)],
        ]);
        let via_a = t.apply_matrix(&rho).unwrap();
        let via_kraus = t.apply_via_kraus(&rho).unwrap();
        assert!(via_a.approx_eq(&via_kraus, 1e-12));
        assert!(via_a.approx_eq(&rho.transpose(), 1e-14));
    }

    #[test]
    fn compose_with_identity_is_identity_on_a() {
        let t = Channel::from_a(transpose_a(), 2, 2).unwrap();
        let id = Channel::identity(2);
        let left = compose(&id, &t).unwrap();
        let right = compose(&t, &id).unwrap();
        assert!(left.a_matrix().approx_eq(t.a_matrix(), 0.0));
        assert!(right.a_matrix().approx_eq(t.a_matrix(), 0.0));
    }

    #[test]
    fn compose_rejects_dimension_mismatch() {
        let id2 = Channel::identity(2);
        let id3 = Channel::identity(3);
        assert!(matches!(
            compose(&id2, &id3),
            Err(ChannelError::DimensionMismatch(_))
        ));
    }

    #[test]
    fn from_a_rejects_broken_conjugation_symmetry() {
        let mut a = ComplexMatrix::identity(4);
        a[(0, 1)] = c(0.5, 0.0); // row (0,0) must be conjugate-symmetric in its column pair
        assert!(matches!(
            Channel::from_a(a, 2, 2),
            Err(ChannelError::HermiticityViolation { .. })
        ));
    }

    #[test]
    fn from_b_rejects_non_hermitian() {
        let mut b = ComplexMatrix::identity(4);
        b[(0, 1)] = c(0.3, 0.0);
        assert!(matches!(
            Channel::from_b(b, 2, 2),
            Err(ChannelError::NonHermitianInput { .. })
        ));
    }

    #[test]
    fn extension_of_identities_is_identity() {
        let ext = extend_local(&[Channel::identity(2), Channel::identity(2)]).unwrap();
        assert!(ext.a_matrix().approx_eq(&ComplexMatrix::identity(16), 1e-14));
    }

    #[test]
    fn extension_routes_agree_on_mixed_factors() {
        let t = Channel::from_a(transpose_a(), 2, 2).unwrap();
        let sx = ComplexMatrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let flip = Channel::from_kraus(
            vec![KrausTerm { eta: 1, op: sx }],
            2,
            2,
        )
        .unwrap();
        let p = extend_local(&[t.clone(), flip.clone()]).unwrap();
        let k = extend_local_via_kraus(&[t, flip]).unwrap();
        assert!(p.a_matrix().approx_eq(k.a_matrix(), 1e-10));
    }

    #[test]
    fn extension_acts_factorwise_on_products() {
        // (transpose (x) id) on |+><+| (x) |1><1|.
        let t = Channel::from_a(transpose_a(), 2, 2).unwrap();
        let ext = extend_local(&[t, Channel::identity(2)]).unwrap();
        let plus = DensityMatrix::pure_state(&[c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        let one = DensityMatrix::basis_projector(2, 1);
        let joint = plus.matrix().kron(one.matrix());
        let out = ext.apply_matrix(&joint).unwrap();
        let want = plus.matrix().transpose().kron(one.matrix());
        assert!(out.approx_eq(&want, 1e-12));
    }

    #[test]
    fn density_matrix_validation() {
        let ok = DensityMatrix::new(ComplexMatrix::from_real(&[&[0.5, 0.0], &[0.0, 0.5]]));
        assert!(ok.is_ok());
        let bad_trace = DensityMatrix::new(ComplexMatrix::identity(2));
        assert!(bad_trace.is_err());
        let non_herm = DensityMatrix::new(ComplexMatrix::from_rows(&[
            vec![c(0.5, 0.0), c(0.1, 0.0)],
            vec![c(0.3, 0.0), c(0.5, 0.0)],
        ]));
        assert!(non_herm.is_err());
        // Negative eigenvalues are allowed by design.
        let neg = DensityMatrix::new(ComplexMatrix::from_real(&[&[1.5, 0.0], &[0.0, -0.5]]));
        assert!(neg.is_ok());
    }

    #[test]
    fn trace_preservation_recorded_not_enforced() {
        // Halving map: rho -> rho/2.
        let a = ComplexMatrix::identity(4).scale_re(0.5);
        let ch = Channel::from_a(a, 2, 2).unwrap();
        assert!(!ch.is_trace_preserving());
        assert!((ch.trace_preservation_defect() - 0.5).abs() < 1e-15);
        assert!((ch.b_trace() - 1.0).abs() < 1e-15);
    }
}

//! Operator-basis identities for the unnormalized maximally entangled
//! projector sum_ij |ii><jj|, and the qubit-permutation unitaries that merge
//! entangled pairs into one higher-dimensional entangled state.
//!
//! For n qubits the projector equals (1/d) sum over Pauli strings of
//! w * (string (x) string), d = 2^n, where the weight w is +1 for strings
//! with an even number of y factors and -1 otherwise. Equivalently each
//! factor enters as its transpose. A matching expansion holds for qutrits
//! over the scaled Gell-Mann basis, where the antisymmetric (imaginary)
//! generators carry the -1 weights.

use crate::matrix::ComplexMatrix;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum IsoError {
    #[error("unsupported size: {0}")]
    UnsupportedSize(String),
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// I, sigma_x, sigma_y, sigma_z.
pub fn pauli_matrices() -> [ComplexMatrix; 4] {
    [
        ComplexMatrix::identity(2),
        ComplexMatrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]),
        ComplexMatrix::from_rows(&[vec![c(0.0, 0.0), c(0.0, -1.0)], vec![c(0.0, 1.0), c(0.0, 0.0)]]),
        ComplexMatrix::from_real(&[&[1.0, 0.0], &[0.0, -1.0]]),
    ]
}

/// A tensor product of single-qubit Pauli factors, identified by indices into
/// {I, x, y, z}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PauliString {
    factors: Vec<u8>,
}

impl PauliString {
    pub fn new(factors: Vec<u8>) -> Self {
        assert!(factors.iter().all(|&f| f < 4), "factor indices are 0..=3");
        PauliString { factors }
    }

    /// Every string on n qubits, in lexicographic factor order.
    pub fn all(n: usize) -> Vec<PauliString> {
        let count = 4usize.pow(n as u32);
        (0..count)
            .map(|mut idx| {
                let mut factors = vec![0u8; n];
                for slot in (0..n).rev() {
                    factors[slot] = (idx % 4) as u8;
                    idx /= 4;
                }
                PauliString { factors }
            })
            .collect()
    }

    pub fn factors(&self) -> &[u8] {
        &self.factors
    }

    /// +1 for an even number of y factors, -1 for an odd number; the sign
    /// turning termwise transposition into a plain signed sum.
    pub fn weight(&self) -> i8 {
        let ys = self.factors.iter().filter(|&&f| f == 2).count();
        if ys % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn matrix(&self) -> ComplexMatrix {
        let paulis = pauli_matrices();
        let mut m = ComplexMatrix::identity(1);
        for &f in &self.factors {
            m = m.kron(&paulis[f as usize]);
        }
        m
    }
}

/// sum_ij |ii><jj| on a d-dimensional pair: 1 at every ((i,i), (j,j)) block
/// position, 0 elsewhere. Rank one with trace d.
pub fn bell_projector(d: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            m[(i * d + i, j * d + j)] = c(1.0, 0.0);
        }
    }
    m
}

/// The unnormalized maximally entangled column sum_i |ii> on a d*d space.
pub fn max_entangled_vec(d: usize) -> ComplexMatrix {
    let mut v = ComplexMatrix::zeros(d * d, 1);
    for i in 0..d {
        v[(i * d + i, 0)] = c(1.0, 0.0);
    }
    v
}

/// Signed Pauli-string expansion of the dic entangled projector:
/// (1/d) sum_s w(s) s (x) s over all 4^n strings, n in 1..=3.
pub fn pauli_form(n: usize) -> Result<ComplexMatrix, IsoError> {
    if !(1..=3).contains(&n) {
        return Err(IsoError::UnsupportedSize(format!(
            "pauli_form supports 1 to 3 qubits, got {n}"
        )));
    }
    let d = 1usize << n;
    let mut acc = ComplexMatrix::zeros(d * d, d * d);
    for s in PauliString::all(n) {
        let m = s.matrix();
        let term = m.kron(&m).scale_re(s.weight() as f64);
        acc = &acc + &term;
    }
    Ok(acc.scale_re(1.0 / d as f64))
}

/// Scaled Gell-Mann basis for one qutrit: lambda_0 = I/sqrt(3) and the eight
/// standard generators divided by sqrt(2), so that tr(g_i g_j) = delta_ij.
/// Indices 2, 5, 7 are the antisymmetric, purely imaginary generators.
pub fn gellmann_matrices() -> [ComplexMatrix; 9] {
    let s3 = 3.0f64.sqrt();
    let r = 1.0 / 2.0f64.sqrt();
    [
        ComplexMatrix::identity(3).scale_re(1.0 / s3),
        ComplexMatrix::from_real(&[&[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 0.0, 0.0]])
            .scale_re(r),
        ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 0.0)],
            vec![c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .scale_re(r),
        ComplexMatrix::from_real(&[&[1.0, 0.0, 0.0], &[0.0, -1.0, 0.0], &[0.0, 0.0, 0.0]])
            .scale_re(r),
        ComplexMatrix::from_real(&[&[0.0, 0.0, 1.0], &[0.0, 0.0, 0.0], &[1.0, 0.0, 0.0]])
            .scale_re(r),
        ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, -1.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .scale_re(r),
        ComplexMatrix::from_real(&[&[0.0, 0.0, 0.0], &[0.0, 0.0, 1.0], &[0.0, 1.0, 0.0]])
            .scale_re(r),
        ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, -1.0)],
            vec![c(0.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)],
        ])
        .scale_re(r),
        ComplexMatrix::from_real(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, -2.0]])
            .scale_re(r / s3),
    ]
}

/// Indices of the purely imaginary Gell-Mann generators, which carry weight -1.
const GELLMANN_IMAGINARY: [usize; 3] = [2, 5, 7];

/// A tensor product of scaled Gell-Mann factors on n qutrits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GellMannString {
    factors: Vec<u8>,
}

impl GellMannString {
    pub fn new(factors: Vec<u8>) -> Self {
        assert!(factors.iter().all(|&f| f < 9), "factor indices are 0..=8");
        GellMannString { factors }
    }

    pub fn all(n: usize) -> Vec<GellMannString> {
        let count = 9usize.pow(n as u32);
        (0..count)
            .map(|mut idx| {
                let mut factors = vec![0u8; n];
                for slot in (0..n).rev() {
                    factors[slot] = (idx % 9) as u8;
                    idx /= 9;
                }
                GellMannString { factors }
            })
            .collect()
    }

    pub fn weight(&self) -> i8 {
        let imag = self
            .factors
            .iter()
            .filter(|&&f| GELLMANN_IMAGINARY.contains(&(f as usize)))
            .count();
        if imag % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn matrix(&self) -> ComplexMatrix {
        let basis = gellmann_matrices();
        let mut m = ComplexMatrix::identity(1);
        for &f in &self.factors {
            m = m.kron(&basis[f as usize]);
        }
        m
    }
}

/// Signed Gell-Mann expansion of the qutrit entangled projector:
/// sum_s w(s) s (x) s over all 9^n strings, d = 3^n, n in 1..=2. No
/// prefactor: the rescaled basis is orthonormal, so string completeness
/// supplies the normalization (unlike the bare Pauli strings, which need 1/d).
pub fn gellmann_form(n: usize) -> Result<ComplexMatrix, IsoError> {
    if !(1..=2).contains(&n) {
        return Err(IsoError::UnsupportedSize(format!(
            "gellmann_form supports 1 or 2 qutrits, got {n}"
        )));
    }
    let d = 3usize.pow(n as u32);
    let mut acc = ComplexMatrix::zeros(d * d, d * d);
    for s in GellMannString::all(n) {
        let m = s.matrix();
        let term = m.kron(&m).scale_re(s.weight() as f64);
        acc = &acc + &term;
    }
    Ok(acc)
}

/// Unitary matrix for a relabeling of qubit wires: position p of the output
/// holds the input qubit `perm[p]` (0-indexed, qubit 0 is the most
/// significant bit of the basis index).
pub fn qubit_permutation_unitary(perm: &[usize]) -> ComplexMatrix {
    let n = perm.len();
    let dim = 1usize << n;
    let mut u = ComplexMatrix::zeros(dim, dim);
    for x in 0..dim {
        let mut y = 0usize;
        for p in 0..n {
            let bit = (x >> (n - 1 - perm[p])) & 1;
            y |= bit << (n - 1 - p);
        }
        u[(y, x)] = c(1.0, 0.0);
    }
    u
}

/// perm_total(p) = first(second(p)): apply `first`, then `second`.
fn compose_perms(first: &[usize], second: &[usize]) -> Vec<usize> {
    second.iter().map(|&p| first[p]).collect()
}

/// The wire permutation merging k two-qubit entangled pairs, laid out as
/// qubits (1,2), (3,4), ..., into one entangled state between the first k and
/// the last k qubits, for k in 2..=4.
///
/// Even k needs one round of disjoint swaps (2j <-> k+2j-1). Odd k first
/// cycles qubit k+1 to the end, then applies the same swaps.
pub fn ebit_merge_permutation(k: usize) -> Result<Vec<usize>, IsoError> {
    if !(2..=4).contains(&k) {
        return Err(IsoError::UnsupportedSize(format!(
            "pair merging supports k in 2..=4, got {k}"
        )));
    }
    let n = 2 * k;
    let mut perm: Vec<usize> = (0..n).collect();
    if k % 2 == 1 {
        // Move wire k (0-indexed) behind the others: (.., k, k+1, .., n-1)
        // becomes (.., k+1, .., n-1, k).
        let mut cycle: Vec<usize> = (0..n).collect();
        for p in k..n - 1 {
            cycle[p] = p + 1;
        }
        cycle[n - 1] = k;
        perm = cycle;
    }
    let mut swaps: Vec<usize> = (0..n).collect();
    let pairs = if k % 2 == 0 { k / 2 } else { (k - 1) / 2 };
    for j in 1..=pairs {
        // 1-indexed wires 2j and k + 2j - 1.
        let a = 2 * j - 1;
        let b = k + 2 * j - 2;
        swaps.swap(a, b);
    }
    Ok(compose_perms(&perm, &swaps))
}

/// Unitary merging k entangled qubit pairs into one 2^k-dimensional
/// entangled pair; a pure wire permutation.
pub fn ebit_merge_unitary(k: usize) -> Result<ComplexMatrix, IsoError> {
    Ok(qubit_permutation_unitary(&ebit_merge_permutation(k)?))
}

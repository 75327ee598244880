//! Disturbance and distance measures for single-qubit repair: the mean
//! depolarization strength M1, two Bloch-vector fidelities, the diagonal
//! Pauli-channel diamond distance, and linear entropy.

use crate::channel::{Channel, ChannelError, DensityMatrix};
use crate::maps::DepolarizerParams;
use crate::matrix::ComplexMatrix;
use num_complex::Complex64;
use thiserror::Error;

/// Radicands this far below zero are treated as numerical noise on the
/// Bloch-sphere boundary and clamped to 0; anything lower is a genuine
/// excursion outside the ball and raises `DomainError`.
pub const RADICAND_TOL: f64 = 1e-6;
/// Dead zone around zero snapped to exactly 0: a state pure up to a few
/// ulps leaves a ~1e-16 radicand that the square root would amplify to
/// ~1e-8 of spurious fidelity.
pub const RADICAND_SNAP: f64 = 1e-14;
/// Pauli-channel weight vectors must sum to 1 within this.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum MeasureError {
    #[error("fidelity radicand {radicand:.3e} below -{tol:.0e}: state lies outside the Bloch ball")]
    DomainError { radicand: f64, tol: f64 },
    #[error("Pauli weights sum to {sum} rather than 1 (tolerance {tol:.0e})")]
    WeightSumError { sum: f64, tol: f64 },
    #[error("defined for single qubits only: {0}")]
    NotSingleQubit(String),
    #[error("Bloch vector has norm {norm}, outside the unit ball")]
    BlochOutOfBall { norm: f64 },
    #[error(transparent)]
    Channel(#[from] ChannelError),
}

/// Real 3-vector of Pauli expectation values r_i = tr(rho sigma_i).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub r: [f64; 3],
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { r: [x, y, z] }
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        self.r[0] * other.r[0] + self.r[1] * other.r[1] + self.r[2] * other.r[2]
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Componentwise scaling by a diagonal depolarizer diag(d).
    pub fn scaled(&self, d: &[f64; 3]) -> Self {
        Self {
            r: [self.r[0] * d[0], self.r[1] * d[1], self.r[2] * d[2]],
        }
    }
}

/// Extraction is exact for Hermitian input: r_x = 2 Re rho_01 etc.
pub fn bloch_vector(rho: &DensityMatrix) -> Result<BlochVector, MeasureError> {
    bloch_of_matrix(rho.matrix())
}

/// Bloch vector of a raw 2x2 matrix; unlike [`bloch_vector`] this accepts
/// non-positive matrices, which NCP maps readily produce.
pub fn bloch_of_matrix(m: &ComplexMatrix) -> Result<BlochVector, MeasureError> {
    if m.rows() != 2 || m.cols() != 2 {
        return Err(MeasureError::NotSingleQubit(format!(
            "state is {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(BlochVector::new(
        m[(0, 1)].re + m[(1, 0)].re,
        m[(1, 0)].im - m[(0, 1)].im,
        m[(0, 0)].re - m[(1, 1)].re,
    ))
}

/// rho = (I + r.sigma)/2; rejects vectors outside the closed unit ball
/// (beyond 1e-12).
pub fn state_from_bloch(r: &BlochVector) -> Result<DensityMatrix, MeasureError> {
    let norm = r.norm();
    if norm > 1.0 + 1e-12 {
        return Err(MeasureError::BlochOutOfBall { norm });
    }
    let [x, y, z] = r.r;
    let m = ComplexMatrix::from_rows(&[
        vec![
            Complex64::new((1.0 + z) / 2.0, 0.0),
            Complex64::new(x / 2.0, -y / 2.0),
        ],
        vec![
            Complex64::new(x / 2.0, y / 2.0),
            Complex64::new((1.0 - z) / 2.0, 0.0),
        ],
    ]);
    Ok(DensityMatrix::new(m)?)
}

/// Mean absolute depolarization parameter, (1/3n) sum |c_i|; 1 means no
/// depolarization anywhere, 0 complete depolarization everywhere.
pub fn m1(params: &DepolarizerParams) -> f64 {
    let flat = params.flat();
    flat.iter().map(|c| c.abs()).sum::<f64>() / flat.len() as f64
}

fn clamped_factor(x: f64) -> Result<f64, MeasureError> {
    if x < -RADICAND_TOL {
        return Err(MeasureError::DomainError {
            radicand: x,
            tol: RADICAND_TOL,
        });
    }
    if x.abs() < RADICAND_SNAP {
        return Ok(0.0);
    }
    Ok(x.max(0.0))
}

fn single_qubit_triple(params: &DepolarizerParams) -> Result<[f64; 3], MeasureError> {
    if params.qubits() != 1 {
        return Err(MeasureError::NotSingleQubit(format!(
            "depolarizer acts on {} qubits",
            params.qubits()
        )));
    }
    Ok(params.triples()[0])
}

fn fidelity_setup(
    rho: &DensityMatrix,
    map: &Channel,
    adm_params: &DepolarizerParams,
) -> Result<(BlochVector, BlochVector, [f64; 3]), MeasureError> {
    let d = single_qubit_triple(adm_params)?;
    if map.dim_in() != 2 || map.dim_out() != 2 {
        return Err(MeasureError::NotSingleQubit(format!(
            "map is {}x{}-dimensional",
            map.dim_out(),
            map.dim_in()
        )));
    }
    let r = bloch_vector(rho)?;
    let out = map.apply_matrix(rho.matrix())?;
    let rp = bloch_of_matrix(&out)?;
    Ok((r, rp, d))
}

/// Closed-form qubit fidelity between the state with Bloch vector r and the
/// depolarized state D r_tilde, D = diag(d):
/// F = (1/2){1 + r.(D r_tilde) + sqrt[(1 - r.r)(1 - |D r_tilde|^2)]}.
/// Both radicands are clamped per `RADICAND_TOL`/`RADICAND_SNAP`.
pub fn bloch_fidelity(
    r: &BlochVector,
    r_tilde: &BlochVector,
    d: &[f64; 3],
) -> Result<f64, MeasureError> {
    let drt = r_tilde.scaled(d);
    let f1 = clamped_factor(1.0 - r.dot(r))?;
    let f2 = clamped_factor(1.0 - drt.dot(&drt))?;
    Ok(0.5 * (1.0 + r.dot(&drt) + (f1 * f2).sqrt()))
}

/// Fidelity between the input rho and the repaired output (L_adm after
/// map)(rho).
pub fn fidelity_vs_input(
    rho: &DensityMatrix,
    map: &Channel,
    adm_params: &DepolarizerParams,
) -> Result<f64, MeasureError> {
    let (r, rp, d) = fidelity_setup(rho, map, adm_params)?;
    bloch_fidelity(&r, &rp, &d)
}

/// Same closed form with the raw map output in both slots: how much the
/// repair stage alone disturbs what the map produced.
pub fn fidelity_vs_map_output(
    rho: &DensityMatrix,
    map: &Channel,
    adm_params: &DepolarizerParams,
) -> Result<f64, MeasureError> {
    let (_, rp, d) = fidelity_setup(rho, map, adm_params)?;
    bloch_fidelity(&rp, &rp, &d)
}

/// Mixing weights (kappa_0, kappa_x, kappa_y, kappa_z) of the diagonal
/// Pauli channel rho -> sum kappa_i sigma_i rho sigma_i.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliChannelWeights {
    pub kappa: [f64; 4],
}

impl PauliChannelWeights {
    pub fn sum(&self) -> f64 {
        self.kappa.iter().sum()
    }
}

/// Weights of the single-qubit depolarizer with scaling (alpha, beta, gamma):
/// kappa = (1 +/- alpha +/- beta +/- gamma)/4. Sums to 1 exactly.
pub fn pauli_weights(params: &DepolarizerParams) -> Result<PauliChannelWeights, MeasureError> {
    let [a, b, g] = single_qubit_triple(params)?;
    Ok(PauliChannelWeights {
        kappa: [
            (1.0 + a + b + g) / 4.0,
            (1.0 + a - b - g) / 4.0,
            (1.0 - a + b - g) / 4.0,
            (1.0 - a - b + g) / 4.0,
        ],
    })
}

/// Diamond distance between two diagonal Pauli channels: sum |dkappa_i|.
/// Valid only for this channel class, where the optimal discrimination
/// input is known in closed form.
pub fn pauli_diamond_distance(
    a: &PauliChannelWeights,
    b: &PauliChannelWeights,
) -> Result<f64, MeasureError> {
    for w in [a, b] {
        let sum = w.sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(MeasureError::WeightSumError {
                sum,
                tol: WEIGHT_SUM_TOL,
            });
        }
    }
    Ok((0..4).map(|i| (a.kappa[i] - b.kappa[i]).abs()).sum())
}

/// S_L = 1 - tr(rho^2); 0 for pure states, 1 - 1/d for maximally mixed.
pub fn linear_entropy(rho: &DensityMatrix) -> f64 {
    1.0 - rho.purity()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{adm, complete_depolarizer, translation, TranslationParams};

    const SQ23: f64 = 0.816496580927726; // sqrt(2/3)

    fn ex1_params() -> DepolarizerParams {
        DepolarizerParams::single(SQ23, SQ23, 2.0 / 3.0).unwrap()
    }

    fn pure_theta(theta: f64) -> DensityMatrix {
        state_from_bloch(&BlochVector::new(theta.sin(), 0.0, theta.cos())).unwrap()
    }

    #[test]
    fn m1_examples() {
        let sym = DepolarizerParams::symmetric(0.37, 1).unwrap();
        assert!((m1(&sym) - 0.37).abs() < 1e-15);
        let expect = (2.0 + 2.0 * 6.0_f64.sqrt()) / 9.0;
        assert!((m1(&ex1_params()) - expect).abs() < 1e-15);
        let axis = DepolarizerParams::single(0.0, 1.0, 0.0).unwrap();
        assert!((m1(&axis) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn m1_saturates_only_at_the_extremes() {
        assert_eq!(m1(&DepolarizerParams::identity(2)), 1.0);
        assert_eq!(m1(&DepolarizerParams::symmetric(0.0, 2).unwrap()), 0.0);
        let mixed = DepolarizerParams::single(-1.0, 1.0, -1.0).unwrap();
        assert_eq!(m1(&mixed), 1.0);
        let partial = DepolarizerParams::single(0.9, 1.0, 1.0).unwrap();
        assert!(m1(&partial) < 1.0);
    }

    #[test]
    fn bloch_round_trip() {
        let mut state = 0x2f0c_9d41_u64;
        let mut rng = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        for _ in 0..50 {
            let v = BlochVector::new(rng() * 0.57, rng() * 0.57, rng() * 0.57);
            let rho = state_from_bloch(&v).unwrap();
            let back = bloch_vector(&rho).unwrap();
            for i in 0..3 {
                assert!((back.r[i] - v.r[i]).abs() < 1e-15);
            }
        }
        assert!(matches!(
            state_from_bloch(&BlochVector::new(1.2, 0.0, 0.9)),
            Err(MeasureError::BlochOutOfBall { .. })
        ));
    }

    #[test]
    fn fidelity_is_one_for_identity_pipeline() {
        let id = Channel::identity(2);
        let no_repair = DepolarizerParams::identity(1);
        for theta in [0.0, 0.7, 2.0, std::f64::consts::PI] {
            let f = fidelity_vs_input(&pure_theta(theta), &id, &no_repair).unwrap();
            assert!((f - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn fidelity_curves_match_closed_forms() {
        // Shift toward +z by 1/2, repaired either asymmetrically or by the
        // best symmetric shrink: both curves are known in closed form, and
        // the asymmetric repair never does worse.
        let map = translation(&TranslationParams {
            offset: [0.0, 0.0, 0.5],
        });
        let asym = ex1_params();
        let sym = DepolarizerParams::symmetric(2.0 / 3.0, 1).unwrap();
        let s6 = 6.0_f64.sqrt();
        for k in 0..=180 {
            let theta = std::f64::consts::PI * k as f64 / 180.0;
            let rho = pure_theta(theta);
            let fa = fidelity_vs_input(&rho, &map, &asym).unwrap();
            let fs = fidelity_vs_input(&rho, &map, &sym).unwrap();
            let fa_want =
                (8.0 + s6 + 2.0 * theta.cos() + (2.0 - s6) * (2.0 * theta).cos()) / 12.0;
            let fs_want = (5.0 + theta.cos()) / 6.0;
            let gap_want = (s6 - 2.0) / 6.0 * theta.sin().powi(2);
            assert!((fa - fa_want).abs() < 1e-12, "theta {theta}: {fa} vs {fa_want}");
            assert!((fs - fs_want).abs() < 1e-12);
            assert!((fa - fs - gap_want).abs() < 1e-12);
            assert!(fa - fs > -1e-12);
        }
    }

    #[test]
    fn corner_state_fidelity_is_exact() {
        // Shift by (-sqrt2, 0, -sqrt2): exactly one state stays physical,
        // the Bloch corner (1,0,1)/sqrt2, and it lands on its antipode.
        let s = 2.0_f64.sqrt();
        let map = translation(&TranslationParams {
            offset: [-s, 0.0, -s],
        });
        let rho = state_from_bloch(&BlochVector::new(1.0 / s, 0.0, 1.0 / s)).unwrap();
        let repair = DepolarizerParams::single(0.245, 0.819, 0.245).unwrap();
        let f = fidelity_vs_input(&rho, &map, &repair).unwrap();
        assert!((f - 151.0 / 400.0).abs() < 1e-12);
    }

    #[test]
    fn map_output_fidelity_fixed_points() {
        let shrink = adm(&DepolarizerParams::single(0.5, 0.4, 0.3).unwrap());
        let no_repair = DepolarizerParams::identity(1);
        let f = fidelity_vs_map_output(&pure_theta(1.1), &shrink, &no_repair).unwrap();
        assert!((f - 1.0).abs() < 1e-12);

        // A map whose output is always I/2 is untouched by any repair.
        let erase = complete_depolarizer();
        let full = DepolarizerParams::symmetric(0.0, 1).unwrap();
        let f = fidelity_vs_map_output(&pure_theta(0.3), &erase, &full).unwrap();
        assert!((f - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unrepaired_translation_output_leaves_the_ball() {
        let map = translation(&TranslationParams {
            offset: [0.0, 0.0, 0.5],
        });
        let rho = pure_theta(0.0);
        let no_repair = DepolarizerParams::identity(1);
        assert!(matches!(
            fidelity_vs_input(&rho, &map, &no_repair),
            Err(MeasureError::DomainError { .. })
        ));
        // The repair shrinks the image back inside: radicand hits 0 at the
        // pole but not below the clamp window.
        assert!(fidelity_vs_input(&rho, &map, &ex1_params()).is_ok());
    }

    #[test]
    fn pauli_weight_examples() {
        let w = pauli_weights(&DepolarizerParams::identity(1)).unwrap();
        assert_eq!(w.kappa, [1.0, 0.0, 0.0, 0.0]);
        let w = pauli_weights(&DepolarizerParams::symmetric(0.0, 1).unwrap()).unwrap();
        assert_eq!(w.kappa, [0.25, 0.25, 0.25, 0.25]);
        let tau = 0.6;
        let p = 1.0 - tau;
        let w = pauli_weights(&DepolarizerParams::symmetric(tau, 1).unwrap()).unwrap();
        assert!((w.kappa[0] - (1.0 - 3.0 * p / 4.0)).abs() < 1e-15);
        for i in 1..4 {
            assert!((w.kappa[i] - p / 4.0).abs() < 1e-15);
        }
        assert!((w.sum() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn diamond_distance_examples() {
        let a = pauli_weights(&ex1_params()).unwrap();
        assert!((pauli_diamond_distance(&a, &a).unwrap()).abs() < 1e-15);
        let s = pauli_weights(&DepolarizerParams::symmetric(2.0 / 3.0, 1).unwrap()).unwrap();
        let want = (6.0_f64.sqrt() - 2.0) / 3.0;
        assert!((pauli_diamond_distance(&a, &s).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn diamond_distance_closed_form_on_random_params() {
        // Independent route: expand both weight vectors symbolically,
        // d = (1/4)(|a+b+g-3t| + |a-b-g+t| + |a-b+g-t| + |a+b-g-t|).
        let mut state = 0x5eed_1234_u64;
        let mut rng = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        for _ in 0..100 {
            let (a, b, g, t) = (rng(), rng(), rng(), rng());
            let wa = pauli_weights(&DepolarizerParams::single(a, b, g).unwrap()).unwrap();
            let wt = pauli_weights(&DepolarizerParams::symmetric(t, 1).unwrap()).unwrap();
            let got = pauli_diamond_distance(&wa, &wt).unwrap();
            let want = 0.25
                * ((a + b + g - 3.0 * t).abs()
                    + (a - b - g + t).abs()
                    + (a - b + g - t).abs()
                    + (a + b - g - t).abs());
            assert!((got - want).abs() < 1e-13);
        }
    }

    #[test]
    fn diamond_distance_is_a_metric() {
        let mut state = 0xd1a0_0a1d_u64;
        let mut rng = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        let mut random_weights = move || {
            let raw = [rng(), rng(), rng(), rng()];
            let shift = (raw.iter().sum::<f64>() - 1.0) / 4.0;
            PauliChannelWeights {
                kappa: [
                    raw[0] - shift,
                    raw[1] - shift,
                    raw[2] - shift,
                    raw[3] - shift,
                ],
            }
        };
        for _ in 0..50 {
            let (a, b, c) = (random_weights(), random_weights(), random_weights());
            let dab = pauli_diamond_distance(&a, &b).unwrap();
            let dba = pauli_diamond_distance(&b, &a).unwrap();
            assert_eq!(dab, dba);
            assert!(pauli_diamond_distance(&a, &a).unwrap() == 0.0);
            let dac = pauli_diamond_distance(&a, &c).unwrap();
            let dcb = pauli_diamond_distance(&c, &b).unwrap();
            assert!(dab <= dac + dcb + 1e-15);
            if dab == 0.0 {
                for i in 0..4 {
                    assert!((a.kappa[i] - b.kappa[i]).abs() == 0.0);
                }
            }
        }
    }

    #[test]
    fn weight_sum_is_enforced() {
        let bad = PauliChannelWeights {
            kappa: [0.5, 0.5, 0.5, 0.5],
        };
        let good = PauliChannelWeights {
            kappa: [1.0, 0.0, 0.0, 0.0],
        };
        assert!(matches!(
            pauli_diamond_distance(&bad, &good),
            Err(MeasureError::WeightSumError { .. })
        ));
    }

    #[test]
    fn linear_entropy_reference_points() {
        assert!(linear_entropy(&pure_theta(0.9)).abs() < 1e-15);
        assert!((linear_entropy(&DensityMatrix::maximally_mixed(2)) - 0.5).abs() < 1e-15);
        assert!((linear_entropy(&DensityMatrix::maximally_mixed(4)) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn single_qubit_guards() {
        let two = DepolarizerParams::symmetric(0.5, 2).unwrap();
        assert!(matches!(
            pauli_weights(&two),
            Err(MeasureError::NotSingleQubit(_))
        ));
        let rho = DensityMatrix::maximally_mixed(2);
        let id4 = Channel::identity(4);
        assert!(matches!(
            fidelity_vs_input(&rho, &id4, &DepolarizerParams::identity(1)),
            Err(MeasureError::NotSingleQubit(_))
        ));
    }
}

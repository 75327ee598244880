//! Constructors for the named map families: asymmetric and symmetric
//! depolarizers, Bloch-vector translations, and the all-rows map used for
//! robustness studies.
//!
//! A single-qubit asymmetric depolarizer with scale factors (alpha, beta,
//! gamma) multiplies the Bloch components (x, y, z) by those factors. It is
//! completely positive exactly when |gamma +- alpha| <= 1 +- beta, and its
//! positivity-matrix eigenvalues are twice the mixing weights
//! (1 +- alpha +- beta +- gamma)/4 that appear in its operator-sum form.

use crate::channel::{compose, extend_local, Channel, ChannelError};
use crate::matrix::ComplexMatrix;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum MapError {
    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),
    #[error(transparent)]
    Channel(#[from] ChannelError),
}

/// Per-qubit depolarizer scale factors. One (alpha, beta, gamma) triple per
/// qubit; multi-qubit parameter sets describe the tensor product of local
/// depolarizers.
#[derive(Clone, Debug, PartialEq)]
pub struct DepolarizerParams {
    per_qubit: Vec<[f64; 3]>,
}

impl DepolarizerParams {
    /// Validates every factor into [-1, 1].
    pub fn new(per_qubit: Vec<[f64; 3]>) -> Result<Self, MapError> {
        if per_qubit.is_empty() || per_qubit.len() > 3 {
            return Err(MapError::ParamOutOfRange(format!(
                "1 to 3 qubit triples supported, got {}",
                per_qubit.len()
            )));
        }
        for (q, t) in per_qubit.iter().enumerate() {
            for (i, v) in t.iter().enumerate() {
                if !v.is_finite() || v.abs() > 1.0 {
                    return Err(MapError::ParamOutOfRange(format!(
                        "qubit {q} component {i}: {v} lies outside [-1, 1]"
                    )));
                }
            }
        }
        Ok(DepolarizerParams { per_qubit })
    }

    /// Accepts factors of any magnitude. Maps built from such parameters are
    /// generally not completely positive and may not even satisfy the
    /// positivity conditions with |factor| > 1; callers opt in deliberately.
    pub fn new_unchecked(per_qubit: Vec<[f64; 3]>) -> Self {
        assert!(
            !per_qubit.is_empty() && per_qubit.len() <= 3,
            "1 to 3 qubit triples supported"
        );
        DepolarizerParams { per_qubit }
    }

    pub fn single(alpha: f64, beta: f64, gamma: f64) -> Result<Self, MapError> {
        Self::new(vec![[alpha, beta, gamma]])
    }

    /// Equal factors tau on every axis of every qubit.
    pub fn symmetric(tau: f64, qubits: usize) -> Result<Self, MapError> {
        Self::new(vec![[tau, tau, tau]; qubits])
    }

    pub fn identity(qubits: usize) -> Self {
        DepolarizerParams {
            per_qubit: vec![[1.0, 1.0, 1.0]; qubits],
        }
    }

    pub fn qubits(&self) -> usize {
        self.per_qubit.len()
    }

    pub fn triples(&self) -> &[[f64; 3]] {
        &self.per_qubit
    }

    /// All factors flattened qubit-major: (a1, b1, g1, a2, b2, g2, ...).
    pub fn flat(&self) -> Vec<f64> {
        self.per_qubit.iter().flatten().copied().collect()
    }

    pub fn from_flat(flat: &[f64]) -> Result<Self, MapError> {
        if flat.len() % 3 != 0 {
            return Err(MapError::ParamOutOfRange(
                "flat parameter list length must be a multiple of 3".into(),
            ));
        }
        Self::new(flat.chunks(3).map(|c| [c[0], c[1], c[2]]).collect())
    }

    pub fn from_flat_unchecked(flat: &[f64]) -> Self {
        assert!(flat.len() % 3 == 0 && !flat.is_empty());
        DepolarizerParams {
            per_qubit: flat.chunks(3).map(|c| [c[0], c[1], c[2]]).collect(),
        }
    }

    pub fn in_standard_range(&self) -> bool {
        self.flat().iter().all(|v| v.abs() <= 1.0)
    }
}

/// Single-qubit depolarizer transfer matrix for one (alpha, beta, gamma)
/// triple.
fn adm_single_a(t: &[f64; 3]) -> ComplexMatrix {
    let [al, be, ga] = *t;
    ComplexMatrix::from_real(&[
        &[(1.0 + ga) / 2.0, 0.0, 0.0, (1.0 - ga) / 2.0],
        &[0.0, (al + be) / 2.0, (al - be) / 2.0, 0.0],
        &[0.0, (al - be) / 2.0, (al + be) / 2.0, 0.0],
        &[(1.0 - ga) / 2.0, 0.0, 0.0, (1.0 + ga) / 2.0],
    ])
}

/// Asymmetric depolarizer for the given parameters; local tensor product when
/// more than one qubit triple is present.
pub fn adm(params: &DepolarizerParams) -> Channel {
    let singles: Vec<Channel> = params
        .triples()
        .iter()
        .map(|t| {
            Channel::from_a(adm_single_a(t), 2, 2)
                .expect("depolarizer transfer matrix is structurally valid")
        })
        .collect();
    if singles.len() == 1 {
        singles.into_iter().next().unwrap()
    } else {
        extend_local(&singles).expect("1 to 3 single-qubit factors")
    }
}

/// Symmetric single-qubit depolarizer: all three factors equal to tau.
pub fn symmetric_depolarizer(tau: f64) -> Result<Channel, MapError> {
    if !(0.0..=1.0).contains(&tau) {
        return Err(MapError::ParamOutOfRange(format!(
            "symmetric depolarizer needs tau in [0, 1], got {tau}"
        )));
    }
    Ok(adm(&DepolarizerParams::single(tau, tau, tau)?))
}

/// Single-qubit map sending every state to the maximally mixed state.
pub fn complete_depolarizer() -> Channel {
    adm(&DepolarizerParams::new_unchecked(vec![[0.0, 0.0, 0.0]]))
}

/// Complete-positivity condition for one triple: |gamma +- alpha| <= 1 +- beta.
/// The boundary is inclusive up to rounding slack so exact-boundary triples
/// classify the same way as the spectral B-matrix verdict.
fn fa_single(t: &[f64; 3]) -> bool {
    const SLACK: f64 = 1e-12;
    let [al, be, ga] = *t;
    (ga + al).abs() <= 1.0 + be + SLACK && (ga - al).abs() <= 1.0 - be + SLACK
}

/// Whether every per-qubit triple satisfies the depolarizer positivity
/// conditions, which for products of local depolarizers is equivalent to
/// complete positivity of the whole map.
pub fn fujiwara_algoet_valid(params: &DepolarizerParams) -> bool {
    params.triples().iter().all(fa_single)
}

/// Bloch-vector translation offset.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TranslationParams {
    pub offset: [f64; 3],
}

/// Single-qubit map shifting the Bloch vector by a constant offset:
/// (x, y, z) -> (x + x0, y + y0, z + z0). Trace preserving, and not
/// completely positive for any nonzero offset.
pub fn translation(params: &TranslationParams) -> Channel {
    let [x0, y0, z0] = params.offset;
    let h = 0.5;
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let a = ComplexMatrix::from_rows(&[
        vec![c((2.0 + z0) * h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(z0 * h, 0.0)],
        vec![
            c(x0 * h, -y0 * h),
            c(1.0, 0.0),
            c(0.0, 0.0),
            c(x0 * h, -y0 * h),
        ],
        vec![
            c(x0 * h, y0 * h),
            c(0.0, 0.0),
            c(1.0, 0.0),
            c(x0 * h, y0 * h),
        ],
        vec![c(-z0 * h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c((2.0 - z0) * h, 0.0)],
    ]);
    Channel::from_a(a, 2, 2).expect("translation transfer matrix is structurally valid")
}

/// The kappa-parameterized map whose transfer matrix mixes every component of
/// the input into every output entry. Trace preserving for all kappa; not
/// completely positive once kappa exceeds (3 - sqrt(5))/2, and the benchmark
/// for how much symmetric depolarization a repair needs as kappa grows.
pub fn robust_map(kappa: f64) -> Result<Channel, MapError> {
    if !kappa.is_finite() || kappa <= 0.0 {
        return Err(MapError::ParamOutOfRange(format!(
            "robust map needs kappa > 0, got {kappa}"
        )));
    }
    let k = kappa;
    let a = ComplexMatrix::from_real(&[
        &[k, k, k, k],
        &[k, 0.0, k, 0.0],
        &[k, k, 0.0, 0.0],
        &[1.0 - k, -k, -k, 1.0 - k],
    ]);
    Ok(Channel::from_a(a, 2, 2)?)
}

/// Inverse map: the channel whose transfer matrix is A^-1. Exists whenever A
/// is nonsingular; makes no positivity promise whatsoever.
pub fn invert(channel: &Channel) -> Result<Channel, MapError> {
    if channel.dim_in() != channel.dim_out() {
        return Err(MapError::Channel(ChannelError::DimensionMismatch(
            "only square maps can be inverted".into(),
        )));
    }
    let inv = channel.a_matrix().inverse().map_err(ChannelError::from)?;
    Ok(Channel::from_a(inv, channel.dim_in(), channel.dim_out())?)
}

/// Depolarizer composition stays inside the family: factors multiply
/// componentwise. Convenience used by tests and the search routines.
pub fn compose_depolarizers(
    p: &DepolarizerParams,
    q: &DepolarizerParams,
) -> Result<Channel, MapError> {
    Ok(compose(&adm(p), &adm(q))?)
}

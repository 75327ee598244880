//! Representations, diagnostics, and repair of not-completely-positive
//! qubit maps.
//!
//! A linear qubit map is held in any of four interchangeable forms — the
//! transfer matrix acting on vectorized states, its reshuffle, the
//! corresponding bipartite operator, and a signed operator-sum — with
//! conversions between them and positivity diagnostics on top. The repair
//! question the crate answers: given a map whose reshuffle has negative
//! eigenvalues, how little extra depolarizing noise makes the composition
//! completely positive, and what does that cost in output quality.

pub mod channel;
pub mod files;
pub mod iso;
pub mod maps;
pub mod matrix;
pub mod measures;
pub mod optimizer;
pub mod scenarios;

pub use channel::{Channel, ChannelError, DensityMatrix, KrausTerm, Rep};
pub use maps::{DepolarizerParams, MapError};
pub use matrix::{ComplexMatrix, EigenResult, MatrixError};
pub use measures::{BlochVector, MeasureError, PauliChannelWeights};
pub use optimizer::{
    ConstraintMode, ObjectiveKind, OptimizationResult, OptimizerError, SearchConfig, SignMode,
};

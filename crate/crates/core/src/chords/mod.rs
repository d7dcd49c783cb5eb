//! Binormal chords of unions of round spheres in Euclidean space, found as
//! critical points of the smoothed broken-path length `L_r`.

mod critical;
mod descent;
mod manifold;
mod path;
mod spectrum;

pub use critical::{newton_critical, CriticalPair};
pub use descent::{descend, ChordConfig, DescentOutcome, MONOTONE_SLACK};
pub use manifold::{
    builtin_config, seed_params, tangent_basis, BuiltinLink, ComponentSpec, ManifoldSpec, ParamSubmanifold,
    SphereComponent,
};
pub use path::{
    binormality_residual, l_r_difference, l_r_gradient, l_r_value, length_from_smoothed, max_segment_value, refine, sigma_r,
    sigma_r_prime, step, BrokenPath, PathGradient,
};
pub use spectrum::{
    chord_sum_spectrum, find_spectrum, ChordResult, SpectrumReport, ACCEPT_RESIDUAL, REFINE_TOL,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ChordError {
    #[error("invalid submanifold: {0}")]
    InvalidManifold(String),
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("smoothing parameter must be positive, got {0}")]
    InvalidSmoothing(f64),
    #[error("segment {index} has length {length:e}, too short for a residual")]
    DegenerateSegment { index: usize, length: f64 },
    #[error("invalid chord configuration: {0}")]
    InvalidConfig(String),
}

//! Attractor geometry, SNR decomposition and effective dimension.

pub mod cover;
pub mod morph;
pub mod snr;
pub mod spectrum;

pub use cover::{cover_comparison, CoverRow};
pub use morph::{
    barrier_height, effective_potential_profile, morph_experiment, morph_state, slowdown_profile,
    uniform_grid, MorphConfig, MorphPoint, MorphResult, MorphTrial, PotentialPoint, SlowdownPoint,
};
pub use snr::{snr_analysis, snr_components, SnrResult};
pub use spectrum::{eigen_spectrum, gram_spectrum, participation_ratio, SpectrumResult};

//! Pattern sources, file formats, seeding and experiment orchestration.

pub mod embeddings;
pub mod manifest;
pub mod model_io;
pub mod output;
pub mod patterns;
pub mod rng;
pub mod sweep;

pub use embeddings::{binarize_embeddings, load_embeddings, EmbeddingSet};
pub use manifest::ExperimentManifest;
pub use model_io::{load_model, save_model};
pub use patterns::{gen_random_patterns, read_patterns, write_patterns};
pub use sweep::{capacity_sweep, run_sweep, CapacityResult, SweepConfig, TrialRecord};

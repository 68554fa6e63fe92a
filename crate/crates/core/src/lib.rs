//! Hopfield associative memories trained with kernel logistic regression.
//!
//! Patterns `ξ^μ ∈ {−1,+1}^N` are stored through dual weights `α_{μi}`; the
//! local field of neuron `i` is `h_i(s) = Σ_μ α_{μi} K(s, ξ^μ)` with the RBF
//! kernel `K(x, y) = exp(−γ‖x − y‖²)`, and states evolve synchronously as
//! `s_i ← sign(h_i(s))`.
//!
//! - [`kernel`], [`model`]: kernel, Gram matrix, local field, pseudo-energy.
//! - [`training`]: per-neuron KLR by gradient descent, auto or sequence mode.
//! - [`dynamics`]: retrieval, noisy recall and the sequence-recall protocol.
//! - [`analysis`]: morphing, effective potential, slowing down, SNR, `D_eff`.
//! - [`harness`]: pattern generation, file formats, seeding, sweeps.
//! - [`cli`]: the `klr-hopfield` command line.

pub mod analysis;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod harness;
pub mod kernel;
pub mod model;
pub mod pattern;
pub mod training;

pub use error::{Error, Result};
pub use kernel::{gram_matrix, rbf_kernel, KernelConfig};
pub use model::{local_field, overlap, pseudo_energy, DualWeights, TrainingMode};
pub use pattern::{NetworkState, PatternSet, Probe};
pub use training::{train_klr, TrainingConfig};

//! Gaussian beta-ensemble transfer matrices and their Gaussian field limit.
//!
//! The Gaussian beta-ensemble is the point process on the real line with
//! density proportional to `exp(-beta N sum lambda_i^2) prod |lambda_i -
//! lambda_j|^beta`; in this scaling its spectrum fills the semicircle on
//! [-1, 1]. It is realized here through the tridiagonal model (Gaussian
//! diagonal, chi off-diagonal), whose characteristic polynomial obeys a
//! 2x2 transfer-matrix recurrence. This crate implements that machinery
//! end to end:
//!
//! - [`sampling`]: seeded, splittable generation of the model, its
//!   normalized noise, and truncation events;
//! - [`transfer`]: the recurrence itself, overflow-safe scaling, the
//!   deterministic Hermite counterpart, and the hyperbolic factorization
//!   into independent scalars times near-projector matrices;
//! - [`expansion`]: the perturbative expansion of transfer products by the
//!   number of noise factors, with a brute-force subset oracle and the
//!   projector-collapse deviation harness;
//! - [`field`]: Brownian paths, the stochastic integral W_t(z), the
//!   Gaussian analytic function it pulls back to, covariance closed forms,
//!   and the coupling diagnostics between the polynomial and the field;
//! - [`asymptotics`]: a Sturm-sequence eigensolver, the g-function route to
//!   Plancherel-Rotach asymptotics, the Airy turning-point window, and the
//!   central limit theorem for linear eigenvalue statistics;
//! - [`cli`]: every experiment as a reproducible subcommand.
//!
//! Start with the `examples/` directory: each file exercises one capability
//! end to end.

pub mod asymptotics;
pub mod cli;
pub mod error;
pub mod expansion;
pub mod field;
pub mod mat2;
pub mod numeric;
pub mod rng;
pub mod sampling;
pub mod stats;
pub mod transfer;

pub use error::{Error, Result};
pub use sampling::{EnsembleConfig, NoiseSequence, TridiagonalModel, TruncationConfig};
pub use transfer::{FactoredStep, HyperbolicWindow, Regime, ScaledPair, SpectralPoint};

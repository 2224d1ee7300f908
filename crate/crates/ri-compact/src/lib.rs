//! Rearrangement-invariant norm calculus on the interval (0,1), the kernel
//! operators that govern higher-order Sobolev-type embeddings, isoperimetric
//! profiles of model domains, numerical compactness probes, and a symbolic
//! compactness classifier.
//!
//! Everything operates on nonnegative piecewise-constant functions
//! ([`StepFunction`]); norms are the Lebesgue / Lorentz / Lorentz–Zygmund
//! family ([`SpaceSpec`]). The numerical side (norms, operators, probes)
//! and the symbolic side (the classifier's decision tables) cross-validate
//! each other; see the `selftest` CLI subcommand and the acceptance tests.

pub mod classify;
pub mod cli;
mod error;
pub mod isoperimetry;
pub mod kernelops;
pub mod probes;
mod quad;
pub mod rinorm;
pub(crate) mod search;
pub mod stepfn;

pub use error::Error;
pub use stepfn::{Grid, GridKind, StepFunction};
pub use rinorm::{Exactness, NormValue, SpaceSpec};
pub use kernelops::{OperatorSpec, ProfileJ};
pub use isoperimetry::{DomainSpec, IsoProfile, PhiSpec};
pub use classify::{EmbeddingQuery, Verdict};
pub use probes::{ProbeConfig, ProbeCurve};

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

//! Uncertainty quantities of quantum channels and the lower bounds relating
//! them.
//!
//! The crate computes, for a state `rho` and channels given by explicit Kraus
//! lists, the symmetrized rho-absolute variance `|V°|(Φ)`, the modified
//! Wigner-Yanase skew information sums `Ĩ(Φ)` and `J̃(Φ)`, and the
//! interpolating quantity `|U|(Φ) = sqrt(Ĩ J̃)`. On top of those,
//! [`bounds`] evaluates the product and sum uncertainty bounds for channel
//! pairs together with the classical observable relations they generalize.
//!
//! All quantities depend on the Kraus list that was supplied, not only on the
//! channel it represents.

pub mod bounds;
pub mod cli;
pub mod ensembles;
pub mod error;
pub mod examples;
pub mod linalg;
pub mod measures;
pub mod quantum;
pub mod serial;

pub use bounds::{bound_report, BoundReport, FineGrainedTerms};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, SpectralDecomposition};
pub use measures::{channel_measures, MeasureSet};
pub use quantum::{DensityMatrix, KrausChannel};

//! Analysis of interlaboratory key comparisons.
//!
//! The crate computes the key comparison reference value (KCRV) as an
//! inverse-variance weighted mean, the unilateral and bilateral degrees of
//! equivalence, and a χ² consistency check. It also simulates comparisons
//! under three laboratory-effect measurement models (no effect, random
//! effect, systematic effect) with per-laboratory true values, and checks the
//! closed-form expectations and uncertainties against seeded Monte Carlo
//! moments.
//!
//! ```
//! use keycomp::{Comparison, EffectModel, LabResult};
//!
//! let comparison = Comparison::new(
//!     vec![
//!         LabResult::new("A", 10.1, 0.1),
//!         LabResult::new("B", 9.9, 0.2),
//!         LabResult::new("C", 10.4, 0.4),
//!     ],
//!     EffectModel::NoneEffect,
//! )
//! .validate()
//! .unwrap();
//! let kcrv = keycomp::compute_kcrv(&comparison).unwrap();
//! assert!((kcrv.value - 10.0762).abs() < 1e-4);
//! ```

pub mod doe;
pub mod error;
pub mod io;
pub mod kcrv;
pub mod model;
pub mod simulate;
mod sum;

pub use doe::{
    analyze, bilateral_doe, expected_doe, unilateral_doe, unilateral_doe_with, AnalysisOptions,
    AnalysisReport, DeviationMode, DoeBilateral, DoeReport, DoeUnilateral, ExpectedDoe,
};
pub use error::{Error, Result, ValidationErrors, ValidationIssue};
pub use kcrv::{compute_kcrv, consistency_check, ConsistencyResult, KcrvEstimate};
pub use model::{total_variance, Comparison, EffectModel, LabResult, UncertaintyBudget};
pub use simulate::{
    draw_comparison, run_simulation, verify_model, verify_outcome, CheckKind, Distribution,
    LabMoments, Predictions, SimLab, SimOutcome, SimSpec, VerificationCheck, VerificationReport,
};

/// Default coverage factor for expanded uncertainties.
pub const DEFAULT_COVERAGE_FACTOR: f64 = 2.0;
/// Default significance level of the consistency check.
pub const DEFAULT_ALPHA: f64 = 0.05;
/// Default number of standard errors allowed by statistical checks.
pub const DEFAULT_Z: f64 = 4.0;

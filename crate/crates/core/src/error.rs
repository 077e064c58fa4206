use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A single violated invariant found while validating a [`Comparison`](crate::Comparison).
///
/// `index` is the zero-based position of the laboratory in the comparison.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValidationIssue {
    #[error("comparison has no laboratories")]
    NoLabs,
    #[error("laboratory #{index} has an empty lab_id")]
    EmptyLabId { index: usize },
    #[error("duplicate lab_id {lab_id:?} at positions {first} and {index}")]
    DuplicateLabId {
        lab_id: String,
        first: usize,
        index: usize,
    },
    #[error("lab {lab_id:?}: uncertainty must be > 0, got {value}")]
    NonPositiveUncertainty {
        index: usize,
        lab_id: String,
        value: f64,
    },
    #[error("lab {lab_id:?}: {field} must be finite, got {value}")]
    NonFiniteValue {
        index: usize,
        lab_id: String,
        field: &'static str,
        value: f64,
    },
    #[error("lab {lab_id:?}: budget component {field} must be >= 0, got {value}")]
    NegativeBudgetComponent {
        index: usize,
        lab_id: String,
        field: &'static str,
        value: f64,
    },
    #[error("lab {lab_id:?}: {field} is required by the {model} model")]
    MissingEffectField {
        index: usize,
        lab_id: String,
        field: &'static str,
        model: crate::EffectModel,
    },
    #[error(
        "lab {lab_id:?}: budget total variance {budget_variance} does not match u_x^2 = {reported_variance}"
    )]
    BudgetMismatch {
        index: usize,
        lab_id: String,
        budget_variance: f64,
        reported_variance: f64,
    },
}

impl ValidationIssue {
    /// Position of the offending laboratory, if the issue concerns one.
    pub fn index(&self) -> Option<usize> {
        match self {
            ValidationIssue::NoLabs => None,
            ValidationIssue::EmptyLabId { index }
            | ValidationIssue::DuplicateLabId { index, .. }
            | ValidationIssue::NonPositiveUncertainty { index, .. }
            | ValidationIssue::NonFiniteValue { index, .. }
            | ValidationIssue::NegativeBudgetComponent { index, .. }
            | ValidationIssue::MissingEffectField { index, .. }
            | ValidationIssue::BudgetMismatch { index, .. } => Some(*index),
        }
    }
}

/// Every invariant violation found in one validation pass.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationErrors(pub Vec<ValidationIssue>);

impl ValidationErrors {
    pub fn issues(&self) -> &[ValidationIssue] {
        &self.0
    }
}

impl fmt::Display for ValidationErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} validation error(s)", self.0.len())?;
        for issue in &self.0 {
            write!(f, "\n  - {issue}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationErrors {}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Validation(#[from] ValidationErrors),
    #[error("comparison has no laboratories")]
    EmptyComparison,
    #[error("lab {lab_id:?} has non-positive total variance {variance}")]
    NonPositiveVariance { lab_id: String, variance: f64 },
    #[error("consistency check needs at least 2 laboratories, got {n}")]
    InsufficientLabs { n: usize },
    #[error("{field} is required by the {model} model (lab {lab_id:?})")]
    MissingEffectField {
        lab_id: String,
        field: &'static str,
        model: crate::EffectModel,
    },
    #[error("lab {lab_id:?} has no uncertainty budget")]
    MissingBudget { lab_id: String },
    #[error("u^2(x_i) - u^2(x_K) is negative ({value}) for lab {lab_id:?}; KCRV does not belong to this comparison")]
    NegativeVarianceOfDeviation { lab_id: String, value: f64 },
    #[error("KCRV estimate does not match the comparison: {0}")]
    KcrvMismatch(String),
    #[error("invalid simulation spec: {0}")]
    InvalidSpec(String),
}

//! Domain types for a key comparison and their validation.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, ValidationErrors, ValidationIssue};

/// Relative tolerance between a budget's total variance and the reported `u_x²`.
pub const BUDGET_RELATIVE_TOLERANCE: f64 = 1e-9;

/// How a laboratory's own effect enters its measured value.
///
/// With true values `Yᵢ` (mean `Y`, variance `s²(Yᵢ)`) and measurement error
/// `eᵢ`:
///
/// * `NoneEffect`: `xᵢ = Yᵢ + eᵢ`
/// * `RandomEffect`: `xᵢ = Yᵢ + bᵢ + eᵢ` with `bᵢ` zero-mean, variance `s²(bᵢ)`
/// * `SystematicEffect`: `xᵢ = Yᵢ + bᵢ + eᵢ` with `bᵢ` a fixed constant
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EffectModel {
    #[serde(rename = "none")]
    NoneEffect,
    #[serde(rename = "random")]
    RandomEffect,
    #[serde(rename = "systematic")]
    SystematicEffect,
}

impl EffectModel {
    pub const ALL: [EffectModel; 3] = [
        EffectModel::NoneEffect,
        EffectModel::RandomEffect,
        EffectModel::SystematicEffect,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EffectModel::NoneEffect => "none",
            EffectModel::RandomEffect => "random",
            EffectModel::SystematicEffect => "systematic",
        }
    }
}

impl fmt::Display for EffectModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for EffectModel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "none" => Ok(EffectModel::NoneEffect),
            "random" => Ok(EffectModel::RandomEffect),
            "systematic" => Ok(EffectModel::SystematicEffect),
            other => Err(format!(
                "unknown model {other:?}, expected none, random or systematic"
            )),
        }
    }
}

/// Decomposition of a laboratory's uncertainty into its effect components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyBudget {
    /// Standard deviation of the true values `Yᵢ`.
    #[serde(rename = "s_Y")]
    pub true_value_sd: f64,
    /// Standard uncertainty of the random measurement error `eᵢ`.
    #[serde(rename = "u_e")]
    pub error_u: f64,
    /// Standard deviation of a random laboratory effect (random model only).
    #[serde(rename = "s_b", default, skip_serializing_if = "Option::is_none")]
    pub lab_effect_sd: Option<f64>,
    /// Fixed laboratory effect (systematic model only).
    #[serde(rename = "b", default, skip_serializing_if = "Option::is_none")]
    pub lab_effect: Option<f64>,
}

impl UncertaintyBudget {
    pub fn new(true_value_sd: f64, error_u: f64) -> Self {
        UncertaintyBudget {
            true_value_sd,
            error_u,
            lab_effect_sd: None,
            lab_effect: None,
        }
    }

    pub fn with_lab_effect_sd(mut self, sd: f64) -> Self {
        self.lab_effect_sd = Some(sd);
        self
    }

    pub fn with_lab_effect(mut self, b: f64) -> Self {
        self.lab_effect = Some(b);
        self
    }

    /// Variance of `xᵢ` under `model`. See [`total_variance`].
    pub fn total_variance(&self, model: EffectModel) -> Result<f64> {
        total_variance(self, model)
    }

    fn require(&self, model: EffectModel) -> std::result::Result<(), &'static str> {
        match model {
            EffectModel::NoneEffect => Ok(()),
            EffectModel::RandomEffect if self.lab_effect_sd.is_none() => Err("s_b"),
            EffectModel::SystematicEffect if self.lab_effect.is_none() => Err("b"),
            _ => Ok(()),
        }
    }
}

/// Model-specific variance of a measured value.
///
/// `s_Y² + u_e²` for the no-effect and systematic models, `s_Y² + s_b² + u_e²`
/// for the random model. A systematic effect shifts the expectation only, so
/// `b` never enters the variance.
pub fn total_variance(budget: &UncertaintyBudget, model: EffectModel) -> Result<f64> {
    budget
        .require(model)
        .map_err(|field| Error::MissingEffectField {
            lab_id: String::new(),
            field,
            model,
        })?;
    let base = budget.true_value_sd.powi(2) + budget.error_u.powi(2);
    Ok(match model {
        EffectModel::NoneEffect | EffectModel::SystematicEffect => base,
        EffectModel::RandomEffect => {
            let s_b = budget.lab_effect_sd.unwrap_or(0.0);
            budget.true_value_sd.powi(2) + s_b * s_b + budget.error_u.powi(2)
        }
    })
}

/// One laboratory's reported result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabResult {
    pub lab_id: String,
    /// Measured value `xᵢ`.
    #[serde(rename = "x")]
    pub value: f64,
    /// Combined standard uncertainty `u(xᵢ)`.
    #[serde(rename = "u_x")]
    pub uncertainty: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<UncertaintyBudget>,
}

impl LabResult {
    pub fn new(lab_id: impl Into<String>, value: f64, uncertainty: f64) -> Self {
        LabResult {
            lab_id: lab_id.into(),
            value,
            uncertainty,
            budget: None,
        }
    }

    /// Attach a budget; the reported uncertainty is set to the budget's total
    /// standard uncertainty under `model`.
    pub fn with_budget(
        lab_id: impl Into<String>,
        value: f64,
        budget: UncertaintyBudget,
        model: EffectModel,
    ) -> Result<Self> {
        let lab_id = lab_id.into();
        let variance = total_variance(&budget, model).map_err(|e| match e {
            Error::MissingEffectField { field, model, .. } => Error::MissingEffectField {
                lab_id: lab_id.clone(),
                field,
                model,
            },
            other => other,
        })?;
        Ok(LabResult {
            lab_id,
            value,
            uncertainty: variance.sqrt(),
            budget: Some(budget),
        })
    }
}

/// The set of results of one comparison and the laboratory-effect model used
/// to interpret them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub results: Vec<LabResult>,
    pub model: EffectModel,
    /// Nominal expectation `Y` of the true values, when known.
    #[serde(rename = "Y", default, skip_serializing_if = "Option::is_none")]
    pub true_value: Option<f64>,
}

impl Comparison {
    pub fn new(results: Vec<LabResult>, model: EffectModel) -> Self {
        Comparison {
            results,
            model,
            true_value: None,
        }
    }

    pub fn len(&self) -> usize {
        self.results.len()
    }

    pub fn is_empty(&self) -> bool {
        self.results.is_empty()
    }

    /// Checks every invariant and returns the comparison unchanged if all hold.
    pub fn validate(self) -> std::result::Result<Comparison, ValidationErrors> {
        let issues = self.issues();
        if issues.is_empty() {
            Ok(self)
        } else {
            Err(ValidationErrors(issues))
        }
    }

    /// All invariant violations, in laboratory order.
    pub fn issues(&self) -> Vec<ValidationIssue> {
        let mut issues = Vec::new();
        if self.results.is_empty() {
            issues.push(ValidationIssue::NoLabs);
        }
        let mut seen: HashMap<&str, usize> = HashMap::new();
        for (index, lab) in self.results.iter().enumerate() {
            let lab_id = || lab.lab_id.clone();
            if lab.lab_id.trim().is_empty() {
                issues.push(ValidationIssue::EmptyLabId { index });
            } else if let Some(&first) = seen.get(lab.lab_id.as_str()) {
                issues.push(ValidationIssue::DuplicateLabId {
                    lab_id: lab_id(),
                    first,
                    index,
                });
            } else {
                seen.insert(&lab.lab_id, index);
            }

            for (field, value) in [("x", lab.value), ("u_x", lab.uncertainty)] {
                if !value.is_finite() {
                    issues.push(ValidationIssue::NonFiniteValue {
                        index,
                        lab_id: lab_id(),
                        field,
                        value,
                    });
                }
            }
            if lab.uncertainty.is_finite() && lab.uncertainty <= 0.0 {
                issues.push(ValidationIssue::NonPositiveUncertainty {
                    index,
                    lab_id: lab_id(),
                    value: lab.uncertainty,
                });
            }

            let Some(budget) = &lab.budget else { continue };
            let mut budget_ok = true;
            let components = [
                ("s_Y", Some(budget.true_value_sd), true),
                ("u_e", Some(budget.error_u), true),
                ("s_b", budget.lab_effect_sd, true),
                ("b", budget.lab_effect, false),
            ];
            for (field, value, non_negative) in components {
                let Some(value) = value else { continue };
                if !value.is_finite() {
                    budget_ok = false;
                    issues.push(ValidationIssue::NonFiniteValue {
                        index,
                        lab_id: lab_id(),
                        field,
                        value,
                    });
                } else if non_negative && value < 0.0 {
                    budget_ok = false;
                    issues.push(ValidationIssue::NegativeBudgetComponent {
                        index,
                        lab_id: lab_id(),
                        field,
                        value,
                    });
                }
            }
            if let Err(field) = budget.require(self.model) {
                budget_ok = false;
                issues.push(ValidationIssue::MissingEffectField {
                    index,
                    lab_id: lab_id(),
                    field,
                    model: self.model,
                });
            }
            if budget_ok && lab.uncertainty.is_finite() && lab.uncertainty > 0.0 {
                let budget_variance = budget.total_variance(self.model).unwrap_or(f64::NAN);
                let reported_variance = lab.uncertainty * lab.uncertainty;
                let scale = budget_variance.abs().max(reported_variance);
                let agrees = (budget_variance - reported_variance).abs()
                    <= BUDGET_RELATIVE_TOLERANCE * scale;
                if !agrees {
                    issues.push(ValidationIssue::BudgetMismatch {
                        index,
                        lab_id: lab_id(),
                        budget_variance,
                        reported_variance,
                    });
                }
            }
        }
        issues
    }

    /// Total variance `vᵢ` of one laboratory: the budget's model-specific
    /// total when a budget is present, else `u_x²`.
    pub fn lab_variance(&self, index: usize) -> Result<f64> {
        let lab = &self.results[index];
        match &lab.budget {
            Some(budget) => total_variance(budget, self.model).map_err(|e| match e {
                Error::MissingEffectField { field, model, .. } => Error::MissingEffectField {
                    lab_id: lab.lab_id.clone(),
                    field,
                    model,
                },
                other => other,
            }),
            None => Ok(lab.uncertainty * lab.uncertainty),
        }
    }

    /// [`lab_variance`](Self::lab_variance) for every laboratory, in order.
    pub fn variances(&self) -> Result<Vec<f64>> {
        (0..self.results.len())
            .map(|i| self.lab_variance(i))
            .collect()
    }

    pub fn values(&self) -> Vec<f64> {
        self.results.iter().map(|r| r.value).collect()
    }

    pub fn lab_ids(&self) -> Vec<String> {
        self.results.iter().map(|r| r.lab_id.clone()).collect()
    }
}

//! Degrees of equivalence.
//!
//! Unilateral: `dᵢ = xᵢ − x_K` with `u²(dᵢ) = u²(xᵢ) − u²(x_K)`.
//! Bilateral: `dᵢⱼ = xᵢ − xⱼ` with `u²(dᵢⱼ) = u²(xᵢ) + u²(xⱼ)`.
//!
//! [`expected_doe`] gives the model expectations of those deviations: zero
//! for the no-effect and random-effect models, and `bᵢ − Σⱼ wⱼbⱼ` (weights
//! normalized) for the systematic model.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kcrv::{self, compute_kcrv, consistency_check, ConsistencyResult, KcrvEstimate};
use crate::model::{total_variance, Comparison, EffectModel, UncertaintyBudget};

/// Relative slack below zero tolerated in `u²(xᵢ) − u²(x_K)` before the
/// mismatch is treated as an error instead of rounding.
const NEGATIVE_VARIANCE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoeUnilateral {
    pub lab_id: String,
    /// `dᵢ = xᵢ − x_K`.
    #[serde(rename = "d")]
    pub deviation: f64,
    #[serde(rename = "u_d")]
    pub uncertainty: f64,
    /// `k · u_d`.
    #[serde(rename = "U_d")]
    pub expanded: f64,
    #[serde(rename = "k")]
    pub coverage_factor: f64,
    /// `|d| ≤ U_d`; the boundary counts as equivalent.
    pub equivalent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoeBilateral {
    pub lab_i: String,
    pub lab_j: String,
    /// `dᵢⱼ = xᵢ − xⱼ`.
    #[serde(rename = "d_ij")]
    pub deviation: f64,
    #[serde(rename = "u_dij")]
    pub uncertainty: f64,
    #[serde(rename = "U_dij")]
    pub expanded: f64,
    pub equivalent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoeReport {
    pub kcrv: KcrvEstimate,
    pub unilateral: Vec<DoeUnilateral>,
    /// Full `N × N` matrix, row `i` column `j` holding `dᵢⱼ`.
    pub bilateral: Vec<Vec<DoeBilateral>>,
}

/// How `u(dᵢ)` combines `u(xᵢ)` and `u(x_K)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeviationMode {
    /// The laboratory contributed to the KCRV: `u²(xᵢ) − u²(x_K)`.
    #[default]
    Included,
    /// The laboratory did not contribute to the KCRV: `u²(xᵢ) + u²(x_K)`.
    Excluded,
}

pub fn unilateral_doe(
    comparison: &Comparison,
    kcrv: &KcrvEstimate,
    k: f64,
) -> Result<Vec<DoeUnilateral>> {
    unilateral_doe_with(comparison, kcrv, k, DeviationMode::Included)
}

pub fn unilateral_doe_with(
    comparison: &Comparison,
    kcrv: &KcrvEstimate,
    k: f64,
    mode: DeviationMode,
) -> Result<Vec<DoeUnilateral>> {
    if mode == DeviationMode::Included {
        kcrv::check_matches(comparison, kcrv)?;
    }
    let variances = comparison.variances()?;
    let kcrv_variance = kcrv.variance();
    comparison
        .results
        .iter()
        .zip(&variances)
        .map(|(lab, &v)| {
            let variance = match mode {
                DeviationMode::Included => {
                    let diff = v - kcrv_variance;
                    if diff >= 0.0 {
                        diff
                    } else if diff >= -NEGATIVE_VARIANCE_SLACK * v {
                        0.0
                    } else {
                        return Err(Error::NegativeVarianceOfDeviation {
                            lab_id: lab.lab_id.clone(),
                            value: diff,
                        });
                    }
                }
                DeviationMode::Excluded => v + kcrv_variance,
            };
            let deviation = lab.value - kcrv.value;
            let uncertainty = variance.sqrt();
            let expanded = k * uncertainty;
            Ok(DoeUnilateral {
                lab_id: lab.lab_id.clone(),
                deviation,
                uncertainty,
                expanded,
                coverage_factor: k,
                equivalent: deviation.abs() <= expanded,
            })
        })
        .collect()
}

pub fn bilateral_doe(comparison: &Comparison, k: f64) -> Result<Vec<Vec<DoeBilateral>>> {
    let variances = comparison.variances()?;
    let labs = &comparison.results;
    Ok(labs
        .iter()
        .zip(&variances)
        .map(|(a, &va)| {
            labs.iter()
                .zip(&variances)
                .map(|(b, &vb)| {
                    let deviation = a.value - b.value;
                    let uncertainty = (va + vb).sqrt();
                    let expanded = k * uncertainty;
                    DoeBilateral {
                        lab_i: a.lab_id.clone(),
                        lab_j: b.lab_id.clone(),
                        deviation,
                        uncertainty,
                        expanded,
                        equivalent: deviation.abs() <= expanded,
                    }
                })
                .collect()
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalysisOptions {
    /// Coverage factor `k`.
    pub coverage_factor: f64,
    /// Significance level of the consistency check.
    pub alpha: f64,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            coverage_factor: crate::DEFAULT_COVERAGE_FACTOR,
            alpha: crate::DEFAULT_ALPHA,
        }
    }
}

/// Everything `analyze` produces for one comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub model: EffectModel,
    pub doe: DoeReport,
    /// Absent for single-laboratory comparisons.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub consistency: Option<ConsistencyResult>,
}

pub fn analyze(comparison: &Comparison, options: &AnalysisOptions) -> Result<AnalysisReport> {
    let kcrv = compute_kcrv(comparison)?;
    let unilateral = unilateral_doe(comparison, &kcrv, options.coverage_factor)?;
    let bilateral = bilateral_doe(comparison, options.coverage_factor)?;
    let consistency = if comparison.len() >= 2 {
        Some(consistency_check(comparison, &kcrv, options.alpha)?)
    } else {
        None
    };
    Ok(AnalysisReport {
        model: comparison.model,
        doe: DoeReport {
            kcrv,
            unilateral,
            bilateral,
        },
        consistency,
    })
}

/// Model expectations of the unilateral and bilateral deviations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectedDoe {
    pub model: EffectModel,
    pub lab_ids: Vec<String>,
    /// `E(dᵢ)`, in laboratory order.
    pub deviations: Vec<f64>,
    /// `E(dᵢⱼ)`, row `i` column `j`.
    pub pairwise: Vec<Vec<f64>>,
}

pub fn expected_doe(comparison: &Comparison) -> Result<ExpectedDoe> {
    let budgets = comparison
        .results
        .iter()
        .map(|lab| {
            lab.budget.ok_or_else(|| Error::MissingBudget {
                lab_id: lab.lab_id.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let lab_ids = comparison.lab_ids();
    let (deviations, pairwise) = expected_deviations(&budgets, &lab_ids, comparison.model)?;
    Ok(ExpectedDoe {
        model: comparison.model,
        lab_ids,
        deviations,
        pairwise,
    })
}

/// Expected deviations from budgets alone; `lab_ids` only names laboratories
/// in errors.
pub(crate) fn expected_deviations(
    budgets: &[UncertaintyBudget],
    lab_ids: &[String],
    model: EffectModel,
) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = budgets.len();
    if n == 0 {
        return Err(Error::EmptyComparison);
    }
    let variances = budgets
        .iter()
        .enumerate()
        .map(|(i, b)| {
            total_variance(b, model).map_err(|e| match e {
                Error::MissingEffectField { field, model, .. } => Error::MissingEffectField {
                    lab_id: lab_ids.get(i).cloned().unwrap_or_default(),
                    field,
                    model,
                },
                other => other,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    match model {
        EffectModel::NoneEffect | EffectModel::RandomEffect => {
            Ok((vec![0.0; n], vec![vec![0.0; n]; n]))
        }
        EffectModel::SystematicEffect => {
            let effects: Vec<f64> = budgets
                .iter()
                .map(|b| b.lab_effect.expect("checked by total_variance"))
                .collect();
            // E(x_K) − Y is the same weighted combination of the effects as
            // x_K is of the values.
            let weights = kcrv::weighted_mean(&effects, &variances).weights;
            let shift = crate::sum::neumaier(weights.iter().zip(&effects).map(|(w, b)| w * b));
            let deviations = effects.iter().map(|b| b - shift).collect();
            let pairwise = effects
                .iter()
                .map(|bi| effects.iter().map(|bj| bi - bj).collect())
                .collect();
            Ok((deviations, pairwise))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::LabResult;
    use approx::assert_relative_eq;

    fn comparison(labs: &[(f64, f64)]) -> Comparison {
        Comparison::new(
            labs.iter()
                .enumerate()
                .map(|(i, &(x, u))| LabResult::new(format!("L{i}"), x, u))
                .collect(),
            EffectModel::NoneEffect,
        )
    }

    fn systematic(effects: &[f64], s_y: &[f64], u_e: &[f64]) -> Comparison {
        let model = EffectModel::SystematicEffect;
        Comparison::new(
            effects
                .iter()
                .enumerate()
                .map(|(i, &b)| {
                    let budget = UncertaintyBudget::new(s_y[i], u_e[i]).with_lab_effect(b);
                    LabResult::with_budget(format!("L{i}"), 10.0 + b, budget, model).unwrap()
                })
                .collect(),
            model,
        )
    }

    #[test]
    fn single_lab_has_zero_deviation() {
        let c = comparison(&[(3.0, 0.5)]);
        let k = compute_kcrv(&c).unwrap();
        let d = unilateral_doe(&c, &k, 2.0).unwrap();
        assert_eq!(d[0].deviation, 0.0);
        assert_eq!(d[0].uncertainty, 0.0);
        assert!(d[0].equivalent);
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn two_lab_unilateral_by_direct_substitution() {
        let c = comparison(&[(1.0, 1.0), (3.0, 1.0)]);
        let k = compute_kcrv(&c).unwrap();
        let d = unilateral_doe(&c, &k, 2.0).unwrap();
        // x_K = 2, u²(x_K) = 1/2 → d₁ = −1, u(d₁) = √(1 − 1/2).
        let u = (1.0f64 - 0.5).sqrt();
        assert_relative_eq!(d[0].deviation, -1.0, max_relative = 1e-15);
        assert_relative_eq!(d[0].uncertainty, u, max_relative = 1e-15);
        assert_relative_eq!(d[0].uncertainty, 0.70711, epsilon = 5e-6);
        assert_relative_eq!(d[0].expanded, 1.41421, epsilon = 5e-6);
        assert!(d[0].equivalent);
        assert_relative_eq!(d[1].deviation, 1.0, max_relative = 1e-15);
    }

    #[test]
    fn equal_values_are_all_equivalent() {
        let c = comparison(&[(2.5, 0.1), (2.5, 0.2), (2.5, 0.3)]);
        let k = compute_kcrv(&c).unwrap();
        for d in unilateral_doe(&c, &k, 2.0).unwrap() {
            assert_eq!(d.deviation, 0.0);
            assert!(d.equivalent);
        }
    }

    #[test]
    fn boundary_counts_as_equivalent() {
        // Budgets give vᵢ = 2 exactly, so u²(x_K) = 1 and u(dᵢ) = 1; with
        // x = (0, 2) the deviation is −1 and k = 1 puts it on the boundary.
        let model = EffectModel::NoneEffect;
        let budget = UncertaintyBudget::new(1.0, 1.0);
        let c = Comparison::new(
            vec![
                LabResult::with_budget("A", 0.0, budget, model).unwrap(),
                LabResult::with_budget("B", 2.0, budget, model).unwrap(),
            ],
            model,
        );
        let k = compute_kcrv(&c).unwrap();
        let d = unilateral_doe(&c, &k, 1.0).unwrap();
        assert_eq!(d[0].deviation, -1.0);
        assert_eq!(d[0].expanded, 1.0);
        assert!(d[0].equivalent);
        let d = unilateral_doe(&c, &k, 0.999).unwrap();
        assert!(!d[0].equivalent);
    }

    #[test]
    fn excluded_mode_adds_kcrv_variance() {
        let c = comparison(&[(1.0, 1.0), (3.0, 1.0)]);
        let k = compute_kcrv(&c).unwrap();
        let d = unilateral_doe_with(&c, &k, 2.0, DeviationMode::Excluded).unwrap();
        assert_relative_eq!(d[0].uncertainty, 1.5f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn foreign_kcrv_is_detected() {
        let c = comparison(&[(1.0, 1.0), (3.0, 1.0)]);
        let mut k = compute_kcrv(&c).unwrap();
        k.uncertainty = 2.0;
        assert!(matches!(
            unilateral_doe(&c, &k, 2.0),
            Err(Error::NegativeVarianceOfDeviation { .. })
        ));
        k.weights.pop();
        assert!(matches!(
            unilateral_doe(&c, &k, 2.0),
            Err(Error::KcrvMismatch(_))
        ));
    }

    #[test]
    fn bilateral_three_four_five() {
        let c = comparison(&[(1.0, 0.3), (1.0, 0.4)]);
        let m = bilateral_doe(&c, 2.0).unwrap();
        assert_eq!(m[0][1].deviation, 0.0);
        assert_relative_eq!(
            m[0][1].uncertainty,
            (0.09f64 + 0.16).sqrt(),
            max_relative = 1e-15
        );
        assert_relative_eq!(m[0][1].uncertainty, 0.5, max_relative = 1e-15);
    }

    #[test]
    fn bilateral_direct_substitution() {
        let c = comparison(&[(0.0, 1.0), (5.0, 1.0)]);
        let m = bilateral_doe(&c, 2.0).unwrap();
        assert_eq!(m[0][1].deviation, -5.0);
        assert_relative_eq!(
            m[0][1].uncertainty,
            std::f64::consts::SQRT_2,
            max_relative = 1e-15
        );
        assert!(!m[0][1].equivalent);
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn bilateral_diagonal_and_symmetry() {
        let c = comparison(&[(0.3, 0.1), (1.7, 0.25), (-2.0, 0.6)]);
        let m = bilateral_doe(&c, 2.0).unwrap();
        for i in 0..3 {
            assert_eq!(m[i][i].deviation, 0.0);
            assert_relative_eq!(
                m[i][i].uncertainty,
                std::f64::consts::SQRT_2 * c.results[i].uncertainty,
                max_relative = 1e-15
            );
            for j in 0..3 {
                assert_eq!(m[i][j].deviation, -m[j][i].deviation);
                assert_eq!(m[i][j].uncertainty, m[j][i].uncertainty);
            }
        }
    }

    #[test]
    fn analyze_skips_consistency_for_single_lab() {
        let r = analyze(&comparison(&[(1.0, 0.1)]), &AnalysisOptions::default()).unwrap();
        assert!(r.consistency.is_none());
        assert_eq!(r.doe.bilateral.len(), 1);
    }

    #[test]
    fn random_model_expectations_are_exactly_zero() {
        let model = EffectModel::RandomEffect;
        let c = Comparison::new(
            [(0.1, 0.2, 0.3), (0.5, 0.1, 0.0), (0.0, 1.0, 2.0)]
                .iter()
                .enumerate()
                .map(|(i, &(s_y, u_e, s_b))| {
                    let b = UncertaintyBudget::new(s_y, u_e).with_lab_effect_sd(s_b);
                    LabResult::with_budget(format!("L{i}"), i as f64, b, model).unwrap()
                })
                .collect(),
            model,
        );
        let e = expected_doe(&c).unwrap();
        assert!(e.deviations.iter().all(|&d| d == 0.0));
        assert!(e.pairwise.iter().flatten().all(|&d| d == 0.0));
    }

    #[test]
    fn systematic_equal_effects_give_zero() {
        let e = expected_doe(&systematic(
            &[0.4, 0.4, 0.4],
            &[0.1, 0.2, 0.0],
            &[0.3, 0.1, 0.5],
        ))
        .unwrap();
        for d in e.deviations {
            assert_relative_eq!(d, 0.0, epsilon = 1e-15);
        }
        assert!(e.pairwise.iter().flatten().all(|&d| d == 0.0));
    }

    #[test]
    fn systematic_equal_weights_subtract_arithmetic_mean() {
        let b = [0.3, -0.1, 0.0];
        let e = expected_doe(&systematic(&b, &[0.1; 3], &[0.2; 3])).unwrap();
        let mean = b.iter().sum::<f64>() / 3.0;
        for (d, bi) in e.deviations.iter().zip(b) {
            assert_relative_eq!(*d, bi - mean, epsilon = 1e-15);
        }
        assert_relative_eq!(e.deviations[0], 0.23333, epsilon = 5e-6);
        assert_relative_eq!(e.deviations[1], -0.16667, epsilon = 5e-6);
        assert_relative_eq!(e.deviations[2], -0.06667, epsilon = 5e-6);
        assert_relative_eq!(e.pairwise[0][1], 0.4, epsilon = 1e-15);
    }

    #[test]
    fn expected_doe_needs_budgets() {
        assert!(matches!(
            expected_doe(&comparison(&[(1.0, 1.0)])),
            Err(Error::MissingBudget { .. })
        ));
    }

    #[test]
    fn expected_doe_names_lab_with_missing_effect() {
        let mut c = systematic(&[0.1, 0.2], &[0.1; 2], &[0.1; 2]);
        c.results[1].budget.as_mut().unwrap().lab_effect = None;
        match expected_doe(&c) {
            Err(Error::MissingEffectField { lab_id, field, .. }) => {
                assert_eq!(lab_id, "L1");
                assert_eq!(field, "b");
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}

//! Key comparison reference value and the χ² consistency check.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::model::{Comparison, EffectModel};
use crate::sum::neumaier;

/// Inverse-variance weighted mean of the participants' values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KcrvEstimate {
    /// Reference value `x_K`.
    #[serde(rename = "x_K")]
    pub value: f64,
    /// Standard uncertainty `u(x_K)`.
    #[serde(rename = "u_xK")]
    pub uncertainty: f64,
    /// Normalized weights `wᵢ`, in laboratory order.
    pub weights: Vec<f64>,
    pub model: EffectModel,
}

impl KcrvEstimate {
    pub fn variance(&self) -> f64 {
        self.uncertainty * self.uncertainty
    }
}

/// Outcome of the χ² test of the results against the reference value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyResult {
    pub chi2_obs: f64,
    pub dof: usize,
    /// Upper-tail probability of `chi2_obs` under χ²(`dof`).
    pub p_value: f64,
    pub alpha: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct WeightedMean {
    pub value: f64,
    pub variance: f64,
    pub weights: Vec<f64>,
}

/// Inverse-variance weights `1/vᵢ` for a fixed set of variances, reusable
/// across many value vectors.
///
/// Variances must be finite and non-negative. If some are zero the limit of
/// vanishing variances is taken: the zero-variance values share the weight
/// equally and the variance of the mean is zero. Only the simulator reaches
/// that branch; validated comparisons always have positive variances.
#[derive(Debug, Clone)]
pub(crate) struct InverseVarianceWeights {
    inverse: Vec<f64>,
    sum_inverse: f64,
    exact: usize,
    pub variance: f64,
    pub weights: Vec<f64>,
}

impl InverseVarianceWeights {
    pub(crate) fn new(variances: &[f64]) -> Self {
        debug_assert!(!variances.is_empty());
        let exact = variances.iter().filter(|&&v| v == 0.0).count();
        if exact > 0 {
            let share = 1.0 / exact as f64;
            return InverseVarianceWeights {
                inverse: variances
                    .iter()
                    .map(|&v| if v == 0.0 { 1.0 } else { 0.0 })
                    .collect(),
                sum_inverse: exact as f64,
                exact,
                variance: 0.0,
                weights: variances
                    .iter()
                    .map(|&v| if v == 0.0 { share } else { 0.0 })
                    .collect(),
            };
        }
        let inverse: Vec<f64> = variances.iter().map(|v| 1.0 / v).collect();
        let sum_inverse = neumaier(inverse.iter().copied());
        let min_variance = variances.iter().copied().fold(f64::INFINITY, f64::min);
        InverseVarianceWeights {
            weights: inverse.iter().map(|w| w / sum_inverse).collect(),
            // Rounding can push 1/Σ(1/vᵢ) just above the smallest vᵢ.
            variance: (1.0 / sum_inverse).min(min_variance),
            inverse,
            sum_inverse,
            exact: 0,
        }
    }

    /// `Σ(xᵢ/vᵢ) / Σ(1/vᵢ)`, clamped to the range of `values`.
    pub(crate) fn mean(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.inverse.len());
        if self.exact > 0 {
            let total = neumaier(
                values
                    .iter()
                    .zip(&self.inverse)
                    .filter(|(_, &w)| w != 0.0)
                    .map(|(&x, _)| x),
            );
            return total / self.exact as f64;
        }
        let weighted = neumaier(values.iter().zip(&self.inverse).map(|(x, w)| x * w));
        let (lo, hi) = values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
                (lo.min(x), hi.max(x))
            });
        (weighted / self.sum_inverse).clamp(lo, hi)
    }
}

pub(crate) fn weighted_mean(values: &[f64], variances: &[f64]) -> WeightedMean {
    let weights = InverseVarianceWeights::new(variances);
    WeightedMean {
        value: weights.mean(values),
        variance: weights.variance,
        weights: weights.weights,
    }
}

/// Reference value `x_K = Σ(xᵢ/vᵢ) / Σ(1/vᵢ)` with `u(x_K) = 1/√Σ(1/vᵢ)`.
///
/// `vᵢ` is the model-specific total variance from the laboratory's budget,
/// or `u(xᵢ)²` when no budget was given. Sums are compensated and run in
/// laboratory order.
pub fn compute_kcrv(comparison: &Comparison) -> Result<KcrvEstimate> {
    if comparison.is_empty() {
        return Err(Error::EmptyComparison);
    }
    let variances = comparison.variances()?;
    for (lab, &variance) in comparison.results.iter().zip(&variances) {
        if !(variance > 0.0 && variance.is_finite()) {
            return Err(Error::NonPositiveVariance {
                lab_id: lab.lab_id.clone(),
                variance,
            });
        }
    }
    let mean = weighted_mean(&comparison.values(), &variances);
    Ok(KcrvEstimate {
        value: mean.value,
        uncertainty: mean.variance.sqrt(),
        weights: mean.weights,
        model: comparison.model,
    })
}

pub(crate) fn check_matches(comparison: &Comparison, kcrv: &KcrvEstimate) -> Result<()> {
    if kcrv.weights.len() != comparison.len() {
        return Err(Error::KcrvMismatch(format!(
            "{} weights for {} laboratories",
            kcrv.weights.len(),
            comparison.len()
        )));
    }
    if kcrv.model != comparison.model {
        return Err(Error::KcrvMismatch(format!(
            "KCRV computed under the {} model, comparison uses {}",
            kcrv.model, comparison.model
        )));
    }
    Ok(())
}

/// χ² test of `Σ (xᵢ − x_K)²/vᵢ` on `N − 1` degrees of freedom. Passes when
/// the upper-tail probability is at least `alpha`.
pub fn consistency_check(
    comparison: &Comparison,
    kcrv: &KcrvEstimate,
    alpha: f64,
) -> Result<ConsistencyResult> {
    let n = comparison.len();
    if n < 2 {
        return Err(Error::InsufficientLabs { n });
    }
    check_matches(comparison, kcrv)?;
    let variances = comparison.variances()?;
    let chi2_obs = neumaier(
        comparison
            .results
            .iter()
            .zip(&variances)
            .map(|(lab, v)| (lab.value - kcrv.value).powi(2) / v),
    );
    let dof = n - 1;
    let p_value = chi_squared_upper_tail(chi2_obs, dof);
    Ok(ConsistencyResult {
        chi2_obs,
        dof,
        p_value,
        alpha,
        pass: p_value >= alpha,
    })
}

fn chi_squared_upper_tail(x: f64, dof: usize) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    ChiSquared::new(dof as f64).expect("dof >= 1").sf(x)
}

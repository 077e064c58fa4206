//! Monte Carlo simulation of comparisons under the three laboratory-effect
//! models, and verification of the closed-form expectations and uncertainty
//! formulas against the simulated moments.
//!
//! Each replication draws from its own ChaCha8 stream: the generator is seeded
//! with the spec's seed and switched to stream `rep_index`. Replications are
//! grouped into chunks of [`CHUNK_SIZE`]; chunk sums are reduced in chunk
//! order, so the outcome does not depend on how many threads ran the chunks.
//!
//! Moments are computed in two passes. The first pass yields the means; the
//! second regenerates every replication and accumulates central moments about
//! those means, up to fourth order, from which the standard errors of the
//! variance and covariance estimates follow without a distributional
//! assumption.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::doe::expected_deviations;
use crate::error::{Error, Result};
use crate::kcrv::InverseVarianceWeights;
use crate::model::{total_variance, Comparison, EffectModel, LabResult, UncertaintyBudget};
use crate::sum::NeumaierSum;

/// Replications per reduction chunk. Changing it changes the low-order bits
/// of the outcome.
pub const CHUNK_SIZE: u64 = 1024;

/// Family used for the true values, laboratory effects and errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Distribution {
    #[default]
    Gaussian,
}

impl Distribution {
    /// A draw with zero mean and unit variance.
    fn standard(self, rng: &mut ChaCha8Rng) -> f64 {
        match self {
            Distribution::Gaussian => StandardNormal.sample(rng),
        }
    }
}

/// One simulated laboratory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimLab {
    pub lab_id: String,
    #[serde(flatten)]
    pub budget: UncertaintyBudget,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimSpec {
    /// Common expectation `Y` of the true values.
    #[serde(rename = "Y")]
    pub true_value: f64,
    pub labs: Vec<SimLab>,
    pub model: EffectModel,
    /// One true-value draw per replication shared by every laboratory, instead
    /// of an independent draw per laboratory.
    pub shared_true_value: bool,
    pub n_reps: u64,
    pub seed: u64,
    #[serde(default)]
    pub distribution: Distribution,
}

impl SimSpec {
    pub fn new(
        true_value: f64,
        budgets: Vec<UncertaintyBudget>,
        model: EffectModel,
        n_reps: u64,
        seed: u64,
    ) -> Self {
        SimSpec {
            true_value,
            labs: budgets
                .into_iter()
                .enumerate()
                .map(|(i, budget)| SimLab {
                    lab_id: format!("L{}", i + 1),
                    budget,
                })
                .collect(),
            model,
            shared_true_value: true,
            n_reps,
            seed,
            distribution: Distribution::Gaussian,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Err(Error::InvalidSpec(msg));
        if self.n_reps == 0 {
            return invalid("n_reps must be at least 1".into());
        }
        if self.labs.is_empty() {
            return invalid("at least one laboratory is required".into());
        }
        if !self.true_value.is_finite() {
            return invalid(format!("Y must be finite, got {}", self.true_value));
        }
        let mut seen = std::collections::HashSet::new();
        for lab in &self.labs {
            if lab.lab_id.trim().is_empty() {
                return invalid("empty lab_id".into());
            }
            if !seen.insert(lab.lab_id.as_str()) {
                return invalid(format!("duplicate lab_id {:?}", lab.lab_id));
            }
            let b = &lab.budget;
            for (field, value) in [
                ("s_Y", Some(b.true_value_sd)),
                ("u_e", Some(b.error_u)),
                ("s_b", b.lab_effect_sd),
            ] {
                match value {
                    Some(v) if !(v.is_finite() && v >= 0.0) => {
                        return invalid(format!(
                            "lab {:?}: {field} must be finite and >= 0, got {v}",
                            lab.lab_id
                        ))
                    }
                    _ => {}
                }
            }
            if let Some(v) = b.lab_effect.filter(|v| !v.is_finite()) {
                return invalid(format!("lab {:?}: b must be finite, got {v}", lab.lab_id));
            }
            total_variance(b, self.model).map_err(|_| {
                Error::InvalidSpec(format!(
                    "lab {:?}: the {} model requires {}",
                    lab.lab_id,
                    self.model,
                    if self.model == EffectModel::RandomEffect {
                        "s_b"
                    } else {
                        "b"
                    }
                ))
            })?;
        }
        if self.shared_true_value {
            let first = self.labs[0].budget.true_value_sd;
            if self.labs.iter().any(|l| l.budget.true_value_sd != first) {
                return invalid(
                    "a shared true value requires the same s_Y for every laboratory".into(),
                );
            }
        }
        Ok(())
    }

    pub fn budgets(&self) -> Vec<UncertaintyBudget> {
        self.labs.iter().map(|l| l.budget).collect()
    }

    pub fn lab_ids(&self) -> Vec<String> {
        self.labs.iter().map(|l| l.lab_id.clone()).collect()
    }

    /// Model total variance of each laboratory; this is also the variance the
    /// simulated laboratories report.
    pub fn variances(&self) -> Result<Vec<f64>> {
        self.labs
            .iter()
            .map(|l| total_variance(&l.budget, self.model))
            .collect()
    }

    fn rng(&self, rep_index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(rep_index);
        rng
    }

    /// Fills `out` with the measured values of replication `rep_index`.
    ///
    /// Draw order within a replication: the shared true value (if any), then
    /// per laboratory its own true value (if not shared), its random effect
    /// (random model) and its error.
    fn draw_values(&self, rep_index: u64, out: &mut [f64]) {
        let mut rng = self.rng(rep_index);
        let dist = self.distribution;
        let shared = if self.shared_true_value {
            let sd = self.labs[0].budget.true_value_sd;
            Some(self.true_value + sd * dist.standard(&mut rng))
        } else {
            None
        };
        for (lab, x) in self.labs.iter().zip(out.iter_mut()) {
            let b = &lab.budget;
            let true_value = match shared {
                Some(y) => y,
                None => self.true_value + b.true_value_sd * dist.standard(&mut rng),
            };
            let effect = match self.model {
                EffectModel::NoneEffect => 0.0,
                EffectModel::RandomEffect => {
                    b.lab_effect_sd.unwrap_or(0.0) * dist.standard(&mut rng)
                }
                EffectModel::SystematicEffect => b.lab_effect.unwrap_or(0.0),
            };
            let error = b.error_u * dist.standard(&mut rng);
            *x = true_value + effect + error;
        }
    }
}

/// The comparison produced by replication `rep_index` of `spec`.
///
/// Each laboratory reports its model total standard uncertainty and carries
/// its budget. The result is not validated: a spec with zero-variance
/// laboratories yields zero reported uncertainties.
pub fn draw_comparison(spec: &SimSpec, rep_index: u64) -> Result<Comparison> {
    spec.validate()?;
    let variances = spec.variances()?;
    let mut values = vec![0.0; spec.labs.len()];
    spec.draw_values(rep_index, &mut values);
    let results = spec
        .labs
        .iter()
        .zip(values)
        .zip(variances)
        .map(|((lab, value), v)| LabResult {
            lab_id: lab.lab_id.clone(),
            value,
            uncertainty: v.sqrt(),
            budget: Some(lab.budget),
        })
        .collect();
    Ok(Comparison {
        results,
        model: spec.model,
        true_value: Some(spec.true_value),
    })
}

/// Empirical moments of one laboratory across replications.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabMoments {
    pub lab_id: String,
    pub mean_d: f64,
    pub se_mean_d: f64,
    pub var_d: f64,
    pub se_var_d: f64,
    /// Sample covariance of `xᵢ` and `x_K`.
    #[serde(rename = "cov_x_xK")]
    pub cov_x_kcrv: f64,
    #[serde(rename = "se_cov_x_xK")]
    pub se_cov_x_kcrv: f64,
}

/// Moments of the reference value and the deviations over all replications.
///
/// Variances and covariances use the `n − 1` divisor and are reported as zero
/// when `n_reps = 1`. Every `se_*` field is the standard error of the
/// corresponding estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimOutcome {
    pub model: EffectModel,
    pub shared_true_value: bool,
    pub n_reps: u64,
    pub seed: u64,
    #[serde(rename = "mean_xK")]
    pub mean_kcrv: f64,
    #[serde(rename = "se_mean_xK")]
    pub se_mean_kcrv: f64,
    #[serde(rename = "var_xK")]
    pub var_kcrv: f64,
    #[serde(rename = "se_var_xK")]
    pub se_var_kcrv: f64,
    pub labs: Vec<LabMoments>,
    /// Mean of `dᵢⱼ`, row `i` column `j`.
    pub mean_dij: Vec<Vec<f64>>,
    pub se_mean_dij: Vec<Vec<f64>>,
}

impl SimOutcome {
    pub fn lab_ids(&self) -> Vec<String> {
        self.labs.iter().map(|l| l.lab_id.clone()).collect()
    }
}

/// Per-replication quantities: `x_K`, then `xᵢ`, then `dᵢ`.
struct Replication<'a> {
    spec: &'a SimSpec,
    weights: &'a InverseVarianceWeights,
    values: Vec<f64>,
    deviations: Vec<f64>,
}

impl<'a> Replication<'a> {
    fn new(spec: &'a SimSpec, weights: &'a InverseVarianceWeights) -> Self {
        let n = spec.labs.len();
        Replication {
            spec,
            weights,
            values: vec![0.0; n],
            deviations: vec![0.0; n],
        }
    }

    fn draw(&mut self, rep_index: u64) -> f64 {
        self.spec.draw_values(rep_index, &mut self.values);
        let kcrv = self.weights.mean(&self.values);
        for (d, x) in self.deviations.iter_mut().zip(&self.values) {
            *d = x - kcrv;
        }
        kcrv
    }
}

/// First-pass sums: `x_K`, then `xᵢ`, then `dᵢ`.
fn first_pass_chunk(spec: &SimSpec, weights: &InverseVarianceWeights, chunk: u64) -> Vec<f64> {
    let n = spec.labs.len();
    let mut rep = Replication::new(spec, weights);
    let mut sums = vec![NeumaierSum::default(); 1 + 2 * n];
    for r in chunk_range(spec.n_reps, chunk) {
        let kcrv = rep.draw(r);
        sums[0].add(kcrv);
        for i in 0..n {
            sums[1 + i].add(rep.values[i]);
            sums[1 + n + i].add(rep.deviations[i]);
        }
    }
    sums.iter().map(NeumaierSum::value).collect()
}

/// Central-moment sums about the first-pass means.
#[derive(Clone)]
struct SecondPass {
    n: usize,
    /// `Σa²`, `Σa⁴` with `a = x_K − mean`.
    kcrv: [f64; 2],
    /// `Σ pᵢa` and `Σ (pᵢa)²` with `pᵢ = xᵢ − mean`.
    cross: Vec<[f64; 2]>,
    /// `Σ qᵢ⁴` with `qᵢ = dᵢ − mean`.
    fourth: Vec<f64>,
    /// `Σ qᵢqⱼ`, row-major `n × n`.
    comoment: Vec<f64>,
}

impl SecondPass {
    fn new(n: usize) -> Self {
        SecondPass {
            n,
            kcrv: [0.0; 2],
            cross: vec![[0.0; 2]; n],
            fourth: vec![0.0; n],
            comoment: vec![0.0; n * n],
        }
    }

    fn flat(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(2 + 3 * self.n + self.n * self.n);
        out.extend_from_slice(&self.kcrv);
        for c in &self.cross {
            out.extend_from_slice(c);
        }
        out.extend_from_slice(&self.fourth);
        out.extend_from_slice(&self.comoment);
        out
    }

    fn from_flat(n: usize, flat: &[f64]) -> Self {
        let mut s = SecondPass::new(n);
        s.kcrv = [flat[0], flat[1]];
        for i in 0..n {
            s.cross[i] = [flat[2 + 2 * i], flat[3 + 2 * i]];
        }
        let base = 2 + 2 * n;
        s.fourth.copy_from_slice(&flat[base..base + n]);
        s.comoment.copy_from_slice(&flat[base + n..]);
        s
    }
}

fn second_pass_chunk(
    spec: &SimSpec,
    weights: &InverseVarianceWeights,
    means: &[f64],
    chunk: u64,
) -> Vec<f64> {
    let n = spec.labs.len();
    let mut rep = Replication::new(spec, weights);
    let mut acc = SecondPass::new(n);
    let mut q = vec![0.0; n];
    for r in chunk_range(spec.n_reps, chunk) {
        let a = rep.draw(r) - means[0];
        let a2 = a * a;
        acc.kcrv[0] += a2;
        acc.kcrv[1] += a2 * a2;
        for i in 0..n {
            let pa = (rep.values[i] - means[1 + i]) * a;
            acc.cross[i][0] += pa;
            acc.cross[i][1] += pa * pa;
            q[i] = rep.deviations[i] - means[1 + n + i];
            acc.fourth[i] += q[i].powi(4);
        }
        for i in 0..n {
            for j in i..n {
                acc.comoment[i * n + j] += q[i] * q[j];
            }
        }
    }
    acc.flat()
}

fn chunk_range(n_reps: u64, chunk: u64) -> std::ops::Range<u64> {
    let start = chunk * CHUNK_SIZE;
    start..(start + CHUNK_SIZE).min(n_reps)
}

/// Runs `f` on every chunk index and sums the returned vectors elementwise in
/// chunk order.
fn reduce_chunks<F>(n_reps: u64, len: usize, f: F) -> Vec<f64>
where
    F: Fn(u64) -> Vec<f64> + Sync + Send,
{
    let chunks = n_reps.div_ceil(CHUNK_SIZE);
    #[cfg(feature = "parallel")]
    let partials: Vec<Vec<f64>> = {
        use rayon::prelude::*;
        (0..chunks).into_par_iter().map(&f).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let partials: Vec<Vec<f64>> = (0..chunks).map(&f).collect();

    let mut totals = vec![NeumaierSum::default(); len];
    for partial in &partials {
        for (t, v) in totals.iter_mut().zip(partial) {
            t.add(*v);
        }
    }
    totals.iter().map(NeumaierSum::value).collect()
}

/// Standard error of a sample variance from its second and fourth central
/// moment sums.
fn se_of_variance(sum2: f64, sum4: f64, n: f64) -> f64 {
    let m2 = sum2 / n;
    let m4 = sum4 / n;
    ((m4 - m2 * m2).max(0.0) / n).sqrt()
}

/// Simulates `spec.n_reps` comparisons and collects the moments of `x_K`,
/// `dᵢ`, `dᵢⱼ` and `cov(xᵢ, x_K)`.
pub fn run_simulation(spec: &SimSpec) -> Result<SimOutcome> {
    spec.validate()?;
    let n = spec.labs.len();
    let weights = InverseVarianceWeights::new(&spec.variances()?);
    let reps = spec.n_reps as f64;

    let sums = reduce_chunks(spec.n_reps, 1 + 2 * n, |c| {
        first_pass_chunk(spec, &weights, c)
    });
    let means: Vec<f64> = sums.iter().map(|s| s / reps).collect();

    let flat_len = SecondPass::new(n).flat().len();
    let second = SecondPass::from_flat(
        n,
        &reduce_chunks(spec.n_reps, flat_len, |c| {
            second_pass_chunk(spec, &weights, &means, c)
        }),
    );

    let single = spec.n_reps < 2;
    let unbiased = |sum: f64| if single { 0.0 } else { sum / (reps - 1.0) };
    let se_mean = |var: f64| (var / reps).sqrt();
    let se_var = |s2: f64, s4: f64| {
        if single {
            0.0
        } else {
            se_of_variance(s2, s4, reps)
        }
    };

    let var_kcrv = unbiased(second.kcrv[0]);
    let comoment = |i: usize, j: usize| second.comoment[i.min(j) * n + i.max(j)];

    let labs = spec
        .labs
        .iter()
        .enumerate()
        .map(|(i, lab)| {
            let var_d = unbiased(comoment(i, i));
            let [cross, cross_sq] = second.cross[i];
            let se_cov = if single {
                0.0
            } else {
                let mean_p = cross / reps;
                ((cross_sq / reps - mean_p * mean_p).max(0.0) / reps).sqrt()
            };
            LabMoments {
                lab_id: lab.lab_id.clone(),
                mean_d: means[1 + n + i],
                se_mean_d: se_mean(var_d),
                var_d,
                se_var_d: se_var(comoment(i, i), second.fourth[i]),
                cov_x_kcrv: unbiased(cross),
                se_cov_x_kcrv: se_cov,
            }
        })
        .collect();

    let mean_dij = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        0.0
                    } else {
                        means[1 + i] - means[1 + j]
                    }
                })
                .collect()
        })
        .collect();
    let se_mean_dij = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let var = unbiased(comoment(i, i) + comoment(j, j) - 2.0 * comoment(i, j));
                    se_mean(var.max(0.0))
                })
                .collect()
        })
        .collect();

    Ok(SimOutcome {
        model: spec.model,
        shared_true_value: spec.shared_true_value,
        n_reps: spec.n_reps,
        seed: spec.seed,
        mean_kcrv: means[0],
        se_mean_kcrv: se_mean(var_kcrv),
        var_kcrv,
        se_var_kcrv: se_var(second.kcrv[0], second.kcrv[1]),
        labs,
        mean_dij,
        se_mean_dij,
    })
}

/// Closed-form values a simulation is checked against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Predictions {
    /// `E(dᵢ)`.
    pub mean_d: Vec<f64>,
    /// `E(dᵢⱼ)`.
    pub mean_dij: Vec<Vec<f64>>,
    /// `u²(x_K) = 1/Σ(1/vᵢ)`.
    pub var_kcrv: f64,
    /// `u²(xᵢ) − u²(x_K)`.
    pub var_d: Vec<f64>,
    /// `cov(xᵢ, x_K) = u²(x_K)`.
    pub cov_x_kcrv: Vec<f64>,
}

impl Predictions {
    pub fn from_spec(spec: &SimSpec) -> Result<Self> {
        spec.validate()?;
        let variances = spec.variances()?;
        let var_kcrv = InverseVarianceWeights::new(&variances).variance;
        let (mean_d, mean_dij) = expected_deviations(&spec.budgets(), &spec.lab_ids(), spec.model)?;
        Ok(Predictions {
            mean_d,
            mean_dij,
            var_kcrv,
            var_d: variances.iter().map(|v| v - var_kcrv).collect(),
            cov_x_kcrv: vec![var_kcrv; variances.len()],
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// Mean of `dᵢ` against `E(dᵢ)`.
    MeanDeviation,
    /// Mean of `dᵢⱼ` against `E(dᵢⱼ)`.
    MeanPairDeviation,
    /// Variance of `x_K` against `u²(x_K)`.
    KcrvVariance,
    /// Variance of `dᵢ` against `u²(xᵢ) − u²(x_K)`.
    DeviationVariance,
    /// Covariance of `xᵢ` and `x_K` against `u²(x_K)`.
    KcrvCovariance,
}

impl CheckKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckKind::MeanDeviation => "mean_d",
            CheckKind::MeanPairDeviation => "mean_dij",
            CheckKind::KcrvVariance => "var_xK",
            CheckKind::DeviationVariance => "var_d",
            CheckKind::KcrvCovariance => "cov_x_xK",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationCheck {
    pub kind: CheckKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lab_i: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lab_j: Option<String>,
    pub observed: f64,
    pub predicted: f64,
    pub std_error: f64,
    /// Largest accepted `|observed − predicted|`.
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub model: EffectModel,
    pub shared_true_value: bool,
    pub n_reps: u64,
    pub seed: u64,
    pub z: f64,
    pub all_pass: bool,
    pub checks: Vec<VerificationCheck>,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &VerificationCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

/// Simulates `spec` and checks every closed-form prediction to within `z`
/// standard errors.
pub fn verify_model(spec: &SimSpec, z: f64) -> Result<VerificationReport> {
    if spec.n_reps < 2 {
        return Err(Error::InvalidSpec(
            "verification needs n_reps >= 2 for finite standard errors".into(),
        ));
    }
    let predictions = Predictions::from_spec(spec)?;
    let outcome = run_simulation(spec)?;
    Ok(verify_outcome(spec, &outcome, &predictions, z))
}

/// Compares `outcome` with `predictions`. A check passes when
/// `|observed − predicted| ≤ z·SE` plus a rounding floor scaled to the
/// magnitude of the simulated values.
pub fn verify_outcome(
    spec: &SimSpec,
    outcome: &SimOutcome,
    predictions: &Predictions,
    z: f64,
) -> VerificationReport {
    let scale = 1.0
        + spec.true_value.abs()
        + spec
            .labs
            .iter()
            .map(|l| {
                let b = &l.budget;
                b.lab_effect.unwrap_or(0.0).abs()
                    + b.true_value_sd
                    + b.error_u
                    + b.lab_effect_sd.unwrap_or(0.0)
            })
            .fold(0.0, f64::max);
    let floor_mean = 1e-12 * scale;
    let floor_var = 1e-12 * scale * scale;

    let ids = outcome.lab_ids();
    let mut checks = Vec::new();
    let mut push = |kind,
                    lab_i: Option<usize>,
                    lab_j: Option<usize>,
                    observed: f64,
                    predicted: f64,
                    std_error: f64,
                    floor: f64| {
        let tolerance = z * std_error + floor;
        checks.push(VerificationCheck {
            kind,
            lab_i: lab_i.map(|i| ids[i].clone()),
            lab_j: lab_j.map(|j| ids[j].clone()),
            observed,
            predicted,
            std_error,
            tolerance,
            pass: (observed - predicted).abs() <= tolerance,
        });
    };

    for (i, lab) in outcome.labs.iter().enumerate() {
        push(
            CheckKind::MeanDeviation,
            Some(i),
            None,
            lab.mean_d,
            predictions.mean_d[i],
            lab.se_mean_d,
            floor_mean,
        );
    }
    let n = outcome.labs.len();
    for i in 0..n {
        for j in i + 1..n {
            push(
                CheckKind::MeanPairDeviation,
                Some(i),
                Some(j),
                outcome.mean_dij[i][j],
                predictions.mean_dij[i][j],
                outcome.se_mean_dij[i][j],
                floor_mean,
            );
        }
    }
    push(
        CheckKind::KcrvVariance,
        None,
        None,
        outcome.var_kcrv,
        predictions.var_kcrv,
        outcome.se_var_kcrv,
        floor_var,
    );
    for (i, lab) in outcome.labs.iter().enumerate() {
        push(
            CheckKind::DeviationVariance,
            Some(i),
            None,
            lab.var_d,
            predictions.var_d[i],
            lab.se_var_d,
            floor_var,
        );
    }
    for (i, lab) in outcome.labs.iter().enumerate() {
        push(
            CheckKind::KcrvCovariance,
            Some(i),
            None,
            lab.cov_x_kcrv,
            predictions.cov_x_kcrv[i],
            lab.se_cov_x_kcrv,
            floor_var,
        );
    }

    VerificationReport {
        model: outcome.model,
        shared_true_value: outcome.shared_true_value,
        n_reps: outcome.n_reps,
        seed: outcome.seed,
        z,
        all_pass: checks.iter().all(|c| c.pass),
        checks,
    }
}

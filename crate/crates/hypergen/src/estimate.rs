//! Property functionals and the self-normalised importance sampling
//! (SNIS) estimator with its effective sample size.
//!
//! The generation algorithm draws edge sequences with known
//! probability P(E), not uniformly over hypergraphs, so population
//! means are estimated by weighting each sample by 1/P(E) ("paper"
//! mode, the cancellation used in the SNIS derivation) or by
//! 1/(P(E) * c(E)) ("exact" mode, which keeps the edge-sequence
//! equivalence-class size c(E) that varies when parallel edges occur).
//! The two modes coincide whenever no sample has parallel edges.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::generate::{hypergraph_multiplicity, GenTrace};
use crate::hypergraph::Hypergraph;
use crate::Error;

/// How importance weights are formed from a sample's ingredients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightMode {
    /// w ∝ 1 / P(E)
    Paper,
    /// w ∝ 1 / (P(E) · c(E)), correcting for edge-ordering multiplicity
    Exact,
}

impl std::fmt::Display for WeightMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WeightMode::Paper => write!(f, "paper"),
            WeightMode::Exact => write!(f, "exact"),
        }
    }
}

impl std::str::FromStr for WeightMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(WeightMode::Paper),
            "exact" => Ok(WeightMode::Exact),
            other => Err(Error::invalid(format!(
                "unknown weight mode '{other}' (expected 'paper' or 'exact')"
            ))),
        }
    }
}

/// One generated sample reduced to its SNIS ingredients.
#[derive(Debug, Clone, Copy)]
pub struct WeightedSample {
    /// log P(E) of the generating edge sequence; <= 0.
    pub log_prob: f64,
    /// log c(E), the log edge-ordering multiplicity; >= 0.
    pub log_multiplicity: f64,
    /// The evaluated hypergraph property f(H(E)).
    pub property_value: f64,
}

impl WeightedSample {
    /// Evaluates `property` on the trace's hypergraph and packages the
    /// weight ingredients.
    pub fn from_trace<F>(trace: &GenTrace, n_vertices: usize, property: F) -> Result<Self>
    where
        F: Fn(&Hypergraph) -> f64,
    {
        let h = trace.to_hypergraph(n_vertices)?;
        Ok(WeightedSample {
            log_prob: trace.log_prob(),
            log_multiplicity: hypergraph_multiplicity(&h),
            property_value: property(&h),
        })
    }
}

/// SNIS estimate with its diagnostics.
#[derive(Debug, Clone)]
pub struct EstimateReport {
    pub estimate: f64,
    /// Weights normalised to sum 1, in sample order.
    pub normalised_weights: Vec<f64>,
    pub ess: f64,
    pub n_samples: usize,
    pub weight_mode: WeightMode,
}

/// Average clustering coefficient of the clique-expansion projection.
///
/// A vertex of projected degree `d >= 2` contributes
/// `2 * triangles(v) / (d * (d - 1))`; vertices of degree 0 or 1
/// contribute 0. The mean is taken over all vertices, so estimates
/// from samples with differing isolated-vertex counts stay comparable.
pub fn avg_clustering_coefficient(h: &Hypergraph) -> f64 {
    let n = h.n_vertices();
    if n == 0 {
        return 0.0;
    }
    let g = h.project_to_simple_graph();
    let mut total = 0.0;
    for v in 0..n {
        let nb = g.neighbors(v);
        let d = nb.len();
        if d < 2 {
            continue;
        }
        let mut triangles = 0usize;
        for (i, &u) in nb.iter().enumerate() {
            for &w in &nb[i + 1..] {
                if g.has_edge(u, w) {
                    triangles += 1;
                }
            }
        }
        total += 2.0 * triangles as f64 / (d * (d - 1)) as f64;
    }
    total / n as f64
}

fn log_weight(sample: &WeightedSample, mode: WeightMode) -> f64 {
    match mode {
        WeightMode::Paper => -sample.log_prob,
        WeightMode::Exact => -sample.log_prob - sample.log_multiplicity,
    }
}

/// Kahan-compensated sum; plain summation of 10^5+ weights drifts past
/// the 1e-12 normalisation contract.
fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let y = v - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Normalised SNIS weights, computed in log space. Returns one weight
/// per sample, summing to 1 (within 1e-12); empty input yields an
/// empty vector.
pub fn snis_weights(samples: &[WeightedSample], mode: WeightMode) -> Vec<f64> {
    if samples.is_empty() {
        return Vec::new();
    }
    let logs: Vec<f64> = samples.iter().map(|s| log_weight(s, mode)).collect();
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut weights: Vec<f64> = logs.iter().map(|lw| (lw - max).exp()).collect();
    let sum = compensated_sum(weights.iter().copied());
    for w in &mut weights {
        *w /= sum;
    }
    debug_assert!((compensated_sum(weights.iter().copied()) - 1.0).abs() < 1e-12);
    weights
}

/// SNIS effective sample size of a normalised weight vector:
/// `1 / sum w_i^2`. Lies in `[1, n]`.
pub fn snis_ess(normalised_weights: &[f64]) -> f64 {
    1.0 / compensated_sum(normalised_weights.iter().map(|w| w * w))
}

/// The SNIS estimate of the sampled property: the weighted mean of the
/// property values under the normalised weights.
pub fn snis_estimate(samples: &[WeightedSample], mode: WeightMode) -> Result<EstimateReport> {
    if samples.is_empty() {
        return Err(Error::invalid(
            "SNIS estimation needs at least one sample".to_string(),
        ));
    }
    let weights = snis_weights(samples, mode);
    let estimate =
        compensated_sum(weights.iter().zip(samples).map(|(w, s)| w * s.property_value));
    let ess = snis_ess(&weights);
    Ok(EstimateReport {
        estimate,
        ess,
        n_samples: samples.len(),
        normalised_weights: weights,
        weight_mode: mode,
    })
}

/// Bootstrap standard error of the SNIS estimate: resamples the sample
/// set with replacement `resamples` times and returns the standard
/// deviation of the re-estimates.
pub fn bootstrap_std_error(
    samples: &[WeightedSample],
    mode: WeightMode,
    resamples: usize,
    seed: u64,
) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::invalid(
            "bootstrap needs at least one sample".to_string(),
        ));
    }
    if resamples < 2 {
        return Err(Error::invalid("bootstrap needs at least 2 resamples".to_string()));
    }
    let n = samples.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut estimates = Vec::with_capacity(resamples);
    let mut scratch = Vec::with_capacity(n);
    for _ in 0..resamples {
        scratch.clear();
        for _ in 0..n {
            scratch.push(samples[rng.gen_range(0..n)]);
        }
        estimates.push(snis_estimate(&scratch, mode)?.estimate);
    }
    let mean = estimates.iter().sum::<f64>() / resamples as f64;
    let var = estimates.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>()
        / (resamples - 1) as f64;
    Ok(var.sqrt())
}

//! Gap sequences of Cantor cut-out sets.
//!
//! Every sequence here is level-constant: the `2^{k-1}` gaps removed at
//! construction step `k` share one length `g_k`. A sequence is described
//! either by its per-level scale ratios `s_k / s_{k-1}` (ternary,
//! uniform-ratio and the two-block example family) or by an explicit list of
//! level gaps.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest uniform-ratio dimension accepted: `d = 1` would mean
/// `s_k / s_{k-1} = 1/2` and zero gaps.
const MAX_RATIO_DIM: f64 = 1.0;

/// Serialized form of a gap sequence, one JSON document per sequence.
///
/// ```text
/// {"kind": "ternary"}
/// {"kind": "uniform-ratio", "d": 0.5}
/// {"kind": "example", "alpha": 0.4, "beta": 0.6, "growth": "default"}
/// {"kind": "explicit", "levels": [0.5, 0.1, 0.02]}
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GapSpec {
    Ternary,
    UniformRatio { d: f64 },
    Example {
        alpha: f64,
        beta: f64,
        #[serde(default)]
        growth: GrowthRule,
    },
    Explicit { levels: Vec<f64> },
}

impl GapSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidGaps(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("gap spec serializes")
    }
}

/// Rule producing the block boundaries `l_1 < l_2 < ...` of the example
/// family.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrowthRule {
    /// `l_1 = 1`, `l_{i+1} = max(2 l_i + i + 1, i · l_i)`.
    #[default]
    Default,
}

impl GrowthRule {
    /// Block boundaries `l_1, l_2, ...` up to and including the first one
    /// exceeding `limit`.
    pub fn boundaries(self, limit: usize) -> Vec<usize> {
        match self {
            GrowthRule::Default => {
                let mut out = vec![1usize];
                let mut i = 1usize;
                while *out.last().unwrap() <= limit {
                    let l = *out.last().unwrap();
                    let next = (2 * l + i + 1).max(i.saturating_mul(l));
                    out.push(next);
                    i += 1;
                }
                out
            }
        }
    }
}

/// Which ratio a level of the example family carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Block {
    Alpha,
    Beta,
}

#[derive(Clone, Debug, PartialEq)]
enum Rule {
    /// Constant ratio `s_k / s_{k-1} = exp(log_ratio)`.
    Constant { log_ratio: f64, relative_gap: f64 },
    Example { alpha: f64, beta: f64, growth: GrowthRule },
    /// `log g_k` for `k = 1..=levels`, normalized so `sum 2^{k-1} g_k = 1`.
    Explicit { log_levels: Vec<f64> },
}

/// A validated, level-constant gap sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct GapSequence {
    spec: GapSpec,
    rule: Rule,
}

impl GapSequence {
    pub fn ternary() -> Self {
        Self {
            spec: GapSpec::Ternary,
            rule: Rule::Constant { log_ratio: -(3f64.ln()), relative_gap: 1.0 / 3.0 },
        }
    }

    /// Constant ratio `s_k / s_{k-1} = 2^{-1/d}`.
    pub fn uniform_ratio(d: f64) -> Result<Self> {
        if !(d > 0.0 && d < MAX_RATIO_DIM) {
            return Err(Error::InvalidGaps(format!(
                "uniform-ratio requires 0 < d < 1 so that s_(k+1)/s_k < 1/2, got d = {d}"
            )));
        }
        let ratio = (-(2f64.ln()) / d).exp();
        Ok(Self {
            spec: GapSpec::UniformRatio { d },
            rule: Rule::Constant { log_ratio: -(2f64.ln()) / d, relative_gap: 1.0 - 2.0 * ratio },
        })
    }

    /// The two-block family: ratio `2^{-1/β}` on β-blocks
    /// `{l_i, ..., l_{i+1} - i - 1}` and `2^{-1/α}` on α-blocks
    /// `{l_{i+1} - i, ..., l_{i+1} - 1}`.
    ///
    /// `alpha == beta` is accepted and degenerates to `uniform_ratio(alpha)`.
    pub fn example(alpha: f64, beta: f64, growth: GrowthRule) -> Result<Self> {
        let cap = 2f64.ln() / 3f64.ln();
        if !(alpha > 0.0) {
            return Err(Error::InvalidGaps(format!("require α > 0, got {alpha}")));
        }
        if alpha > beta {
            return Err(Error::InvalidGaps(format!("require α < β, got α = {alpha}, β = {beta}")));
        }
        if !(beta < cap) {
            return Err(Error::InvalidGaps(format!("require β < log2/log3, got {beta}")));
        }
        Ok(Self {
            spec: GapSpec::Example { alpha, beta, growth },
            rule: Rule::Example { alpha, beta, growth },
        })
    }

    /// Explicit level gaps `g_1, g_2, ...`, renormalized so the gaps sum to 1.
    pub fn explicit(levels: Vec<f64>) -> Result<Self> {
        Self::explicit_with(levels, true)
    }

    /// Explicit level gaps taken as given. Building a cut-out from an
    /// unnormalized list fails.
    pub fn explicit_unnormalized(levels: Vec<f64>) -> Result<Self> {
        Self::explicit_with(levels, false)
    }

    fn explicit_with(levels: Vec<f64>, normalize: bool) -> Result<Self> {
        if levels.len() < 2 {
            return Err(Error::InvalidGaps("explicit sequence needs at least two levels".into()));
        }
        if let Some(bad) = levels.iter().find(|&&g| !(g > 0.0 && g.is_finite())) {
            return Err(Error::InvalidGaps(format!("gap {bad} must be positive")));
        }
        if levels.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::InvalidGaps("gaps must be non-increasing".into()));
        }
        let mut log_levels: Vec<f64> = levels.iter().map(|g| g.ln()).collect();
        if normalize {
            let log_total = log_sum_exp(
                log_levels.iter().enumerate().map(|(i, lg)| i as f64 * 2f64.ln() + lg),
            );
            for lg in &mut log_levels {
                *lg -= log_total;
            }
        }
        let spec = GapSpec::Explicit { levels: log_levels.iter().map(|lg| lg.exp()).collect() };
        Ok(Self { spec, rule: Rule::Explicit { log_levels } })
    }

    pub fn from_spec(spec: &GapSpec) -> Result<Self> {
        match spec {
            GapSpec::Ternary => Ok(Self::ternary()),
            GapSpec::UniformRatio { d } => Self::uniform_ratio(*d),
            GapSpec::Example { alpha, beta, growth } => Self::example(*alpha, *beta, *growth),
            GapSpec::Explicit { levels } => Self::explicit(levels.clone()),
        }
    }

    pub fn spec(&self) -> &GapSpec {
        &self.spec
    }

    /// Largest `K` for which `s_K > 0`, if finite.
    pub fn max_horizon(&self) -> Option<usize> {
        match &self.rule {
            Rule::Explicit { log_levels } => Some(log_levels.len() - 1),
            _ => None,
        }
    }

    /// Block of level `k` in the example family; `None` for other kinds.
    pub fn block(&self, k: usize) -> Option<Block> {
        match &self.rule {
            Rule::Example { growth, .. } => Some(example_block(*growth, k)),
            _ => None,
        }
    }

    /// `log(g_k / s_{k-1})`'s linear value `d_k`, the fraction of a level
    /// `k-1` interval removed at step `k`. Needs `log s_{k-1}` and `log s_k`
    /// for explicit sequences.
    pub(crate) fn relative_gap(&self, k: usize, log_s_prev: f64, log_s: f64) -> f64 {
        match &self.rule {
            Rule::Constant { relative_gap, .. } => *relative_gap,
            Rule::Example { .. } => 1.0 - 2.0 * (log_s - log_s_prev).exp(),
            Rule::Explicit { log_levels } => (log_levels[k - 1] - log_s_prev).exp(),
        }
    }

    /// `log s_k` for `k = 0..=horizon`, with `s_0 = 1`.
    pub fn log_scales(&self, horizon: usize) -> Result<Vec<f64>> {
        match &self.rule {
            Rule::Constant { log_ratio, .. } => {
                Ok((0..=horizon).map(|k| k as f64 * log_ratio).collect())
            }
            Rule::Example { alpha, beta, growth } => {
                let bounds = growth.boundaries(horizon + 1);
                let ln2 = 2f64.ln();
                let (mut n_alpha, mut n_beta) = (0usize, 0usize);
                let mut out = Vec::with_capacity(horizon + 1);
                out.push(0.0);
                for k in 1..=horizon {
                    match block_from_bounds(&bounds, k) {
                        Block::Alpha => n_alpha += 1,
                        Block::Beta => n_beta += 1,
                    }
                    out.push(-ln2 * (n_alpha as f64 / alpha + n_beta as f64 / beta));
                }
                Ok(out)
            }
            Rule::Explicit { log_levels } => {
                let levels = log_levels.len();
                if horizon >= levels {
                    return Err(Error::HorizonTooSmall { needed: horizon + 1, horizon: levels - 1 });
                }
                let ln2 = 2f64.ln();
                // tail[n] = log sum_{k > n} 2^{k-1} g_k
                let mut tail = vec![f64::NEG_INFINITY; levels + 1];
                for n in (0..levels).rev() {
                    tail[n] = log_add_exp(tail[n + 1], n as f64 * ln2 + log_levels[n]);
                }
                let total = tail[0].exp();
                if (total - 1.0).abs() > 1e-12 {
                    return Err(Error::Unnormalized(total));
                }
                Ok((0..=horizon).map(|n| -(n as f64) * ln2 + tail[n]).collect())
            }
        }
    }
}

fn example_block(growth: GrowthRule, k: usize) -> Block {
    block_from_bounds(&growth.boundaries(k + 1), k)
}

fn block_from_bounds(bounds: &[usize], k: usize) -> Block {
    // i (1-based) with l_i <= k < l_{i+1}
    let idx = bounds.partition_point(|&l| l <= k);
    debug_assert!(idx >= 1 && idx < bounds.len());
    let i = idx;
    let next = bounds[idx];
    if k >= next - i {
        Block::Alpha
    } else {
        Block::Beta
    }
}

fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

fn log_sum_exp(terms: impl Iterator<Item = f64>) -> f64 {
    terms.fold(f64::NEG_INFINITY, log_add_exp)
}

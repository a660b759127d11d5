//! Cantor cut-out sets and their exact dimension formulas.
//!
//! Step `k+1` of the construction removes gap `A_{2^k+j-1}` from the basic
//! interval `I_j^(k)`, leaving `I_{2j-1}^(k+1)` and `I_{2j}^(k+1)`. For
//! level-constant gaps every level-`k` interval has length exactly `s_k`, so
//! the gap is removed from the middle.
//!
//! All scale arithmetic is done on `log s_k`; horizons far beyond the
//! underflow point of `s_k` itself are fine.

mod gaps;

use crate::error::{Error, Result};
use crate::metric_cover::{Ball, IntervalUnion, BOUNDARY_TOL};

pub use gaps::{Block, GapSequence, GapSpec, GrowthRule};

/// Smallest interval length or gap for which a level is materialized in
/// linear coordinates.
pub const MIN_FEATURE: f64 = 1e-9;

/// Largest construction depth that is materialized.
pub const MAX_DEPTH: usize = 22;

/// `log(s_{k+1}/s_k)` below this counts as "not uniformly perfect"
/// (ratio under 1e-200).
pub const PERFECTNESS_LOG_FLOOR: f64 = -460.0;

/// θ closer than this to 0 or 1 is rejected.
pub const THETA_MARGIN: f64 = 1e-6;

/// Relative slack when comparing `log s_{k+n}` to `(1/θ) log s_k`.
const LOG_COMPARE_TOL: f64 = 1e-12;

/// Finite stand-in for `liminf_{k→∞}`: the minimum over `k_min..=k_max`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct LiminfWindow {
    pub k_min: usize,
    pub k_max: usize,
}

impl LiminfWindow {
    pub fn new(k_min: usize, k_max: usize) -> Result<Self> {
        if k_min >= 1 && k_min < k_max {
            Ok(Self { k_min, k_max })
        } else {
            Err(Error::InvalidParameter(format!(
                "window requires 1 <= k_min < k_max, got {k_min}:{k_max}"
            )))
        }
    }

    /// `[max(1, k_max/10), k_max]`.
    pub fn tail(k_max: usize) -> Result<Self> {
        Self::new((k_max / 10).max(1), k_max)
    }

    pub fn levels(&self) -> std::ops::RangeInclusive<usize> {
        self.k_min..=self.k_max
    }
}

/// Whether `count_basic_intervals` counts intervals inside the ball or
/// meeting it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountMode {
    Contained,
    Intersecting,
}

pub(crate) fn check_theta(theta: f64) -> Result<()> {
    if theta > THETA_MARGIN && theta < 1.0 - THETA_MARGIN {
        Ok(())
    } else {
        Err(Error::Theta(theta))
    }
}

/// A cut-out set: basic intervals up to a depth and `log s_k` up to a
/// horizon.
#[derive(Clone, Debug)]
pub struct CutoutSet {
    gaps: GapSequence,
    depth: usize,
    horizon: usize,
    log_s: Vec<f64>,
    levels: Vec<Vec<(f64, f64)>>,
    min_log_ratio: f64,
}

/// Builds the cut-out set with basic intervals to `depth` and scales to
/// `horizon`.
pub fn build_cutout(gaps: GapSequence, depth: usize, horizon: usize) -> Result<CutoutSet> {
    CutoutSet::build(gaps, depth, horizon)
}

impl CutoutSet {
    pub fn build(gaps: GapSequence, depth: usize, horizon: usize) -> Result<Self> {
        if depth < 1 {
            return Err(Error::InvalidParameter("depth must be at least 1".into()));
        }
        if horizon < depth || horizon < 2 {
            return Err(Error::InvalidParameter(format!(
                "horizon {horizon} must be at least the depth {depth} and at least 2"
            )));
        }
        let log_s = gaps.log_scales(horizon)?;
        let min_log_ratio = log_s
            .windows(2)
            .skip(1)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);

        let mut levels = vec![vec![(0.0, 1.0)]];
        for k in 1..=depth.min(MAX_DEPTH) {
            let s = log_s[k].exp();
            let gap = gaps.relative_gap(k, log_s[k - 1], log_s[k]) * log_s[k - 1].exp();
            if s < MIN_FEATURE || gap < MIN_FEATURE {
                break;
            }
            let parent = levels.last().unwrap();
            let mut next = Vec::with_capacity(parent.len() * 2);
            for &(l, r) in parent {
                next.push((l, l + s));
                next.push((r - s, r));
            }
            levels.push(next);
        }
        Ok(Self { gaps, depth, horizon, log_s, levels, min_log_ratio })
    }

    pub fn gaps(&self) -> &GapSequence {
        &self.gaps
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// Deepest level materialized in linear coordinates (at most `depth`).
    pub fn resolvable_depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn log_scales(&self) -> &[f64] {
        &self.log_s
    }

    /// `log s_k`.
    pub fn scale(&self, k: usize) -> Result<f64> {
        self.log_s
            .get(k)
            .copied()
            .ok_or(Error::HorizonTooSmall { needed: k, horizon: self.horizon })
    }

    /// Basic intervals of one level; level 0 is `[0, 1]`.
    pub fn basic_intervals(&self, level: usize) -> Result<&[(f64, f64)]> {
        self.levels
            .get(level)
            .map(Vec::as_slice)
            .ok_or(Error::LevelOutOfRange { level, depth: self.resolvable_depth() })
    }

    /// `∪_j I_j^(level)` as an interval union.
    pub fn approximation(&self, level: usize) -> Result<IntervalUnion> {
        IntervalUnion::new(self.basic_intervals(level)?.to_vec())
    }

    /// Length of gap `A_n` (`n >= 1`).
    pub fn gap(&self, n: usize) -> Result<f64> {
        if n == 0 {
            return Err(Error::InvalidParameter("gaps are indexed from 1".into()));
        }
        let k = (usize::BITS - n.leading_zeros()) as usize;
        if k > self.horizon {
            return Err(Error::HorizonTooSmall { needed: k, horizon: self.horizon });
        }
        let prev = self.log_s[k - 1];
        Ok(self.gaps.relative_gap(k, prev, self.log_s[k]) * prev.exp())
    }

    /// `inf_{1 <= k < K} s_{k+1}/s_k`.
    pub fn uniform_perfectness_ratio(&self) -> f64 {
        self.min_log_ratio.exp()
    }

    fn require_uniformly_perfect(&self) -> Result<()> {
        if self.min_log_ratio < PERFECTNESS_LOG_FLOOR {
            Err(Error::NotUniformlyPerfect(self.min_log_ratio.exp()))
        } else {
            Ok(())
        }
    }

    /// `l(k, θ) = max { n >= 0 : s_{k+n} >= s_k^{1/θ} }`.
    pub fn l_of(&self, k: usize, theta: f64) -> Result<usize> {
        check_theta(theta)?;
        let base = self.scale(k)?;
        let target = base / theta;
        let thr = target - LOG_COMPARE_TOL * target.abs().max(1.0);
        let tail = &self.log_s[k..];
        let count = tail.partition_point(|&v| v >= thr);
        if count == tail.len() {
            return Err(Error::HorizonTooSmall { needed: self.horizon + 1, horizon: self.horizon });
        }
        Ok(count - 1)
    }

    /// `l(k, θ)` plus the fractional level at which the piecewise-linear
    /// interpolation of `log s` crosses `(1/θ) log s_k`.
    pub fn crossing_level(&self, k: usize, theta: f64) -> Result<f64> {
        let l = self.l_of(k, theta)?;
        let target = self.log_s[k] / theta;
        let above = self.log_s[k + l];
        let below = self.log_s[k + l + 1];
        let frac = ((above - target) / (above - below)).clamp(0.0, 1.0);
        Ok(l as f64 + frac)
    }

    /// Largest `k` whose `l(k, θ)` fits in the horizon.
    pub fn admissible_level(&self, theta: f64) -> Result<usize> {
        check_theta(theta)?;
        // k + l(k, θ) is non-decreasing in k
        if self.l_of(1, theta).is_err() {
            return Err(Error::HorizonTooSmall { needed: 2, horizon: self.horizon });
        }
        let (mut lo, mut hi) = (1usize, self.horizon);
        while lo < hi {
            let mid = lo + (hi - lo).div_ceil(2);
            if self.l_of(mid, theta).is_ok() {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        Ok(lo)
    }

    /// Default window for θ: the tail of the admissible levels.
    pub fn auto_window(&self, theta: f64) -> Result<LiminfWindow> {
        let k = self.admissible_level(theta)?;
        LiminfWindow::tail(k.max(2))
    }

    fn check_window(&self, window: &LiminfWindow) -> Result<()> {
        if window.k_max > self.horizon {
            return Err(Error::HorizonTooSmall { needed: window.k_max, horizon: self.horizon });
        }
        Ok(())
    }

    /// Lower Assouad spectrum at θ from `l(k, θ) log 2 / ((1 - 1/θ) log s_k)`,
    /// minimized over the window, with `l(k, θ)` refined to its fractional
    /// crossing level.
    pub fn exact_lower_spectrum(&self, theta: f64, window: &LiminfWindow) -> Result<f64> {
        self.spectrum_min(theta, window, |k| self.crossing_level(k, theta))
    }

    /// The same formula with the integer `l(k, θ)`.
    pub fn lower_spectrum_floor(&self, theta: f64, window: &LiminfWindow) -> Result<f64> {
        self.spectrum_min(theta, window, |k| self.l_of(k, theta).map(|l| l as f64))
    }

    fn spectrum_min(
        &self,
        theta: f64,
        window: &LiminfWindow,
        levels_down: impl Fn(usize) -> Result<f64>,
    ) -> Result<f64> {
        check_theta(theta)?;
        self.require_uniformly_perfect()?;
        self.check_window(window)?;
        let ln2 = 2f64.ln();
        let factor = 1.0 - 1.0 / theta;
        let mut best = f64::INFINITY;
        for k in window.levels() {
            let value = levels_down(k)? * ln2 / (factor * self.log_s[k]);
            best = best.min(value);
        }
        Ok(best)
    }

    /// `min_{m in [window.k_min, m_max]} inf_{1 <= k <= window.k_max}
    /// m log 2 / (log s_k - log s_{k+m})`.
    pub fn exact_lower_assouad(&self, m_max: usize, window: &LiminfWindow) -> Result<f64> {
        self.require_uniformly_perfect()?;
        if m_max < window.k_min {
            return Err(Error::InvalidParameter(format!(
                "m_max {m_max} is below the tail start {}",
                window.k_min
            )));
        }
        let needed = window.k_max + m_max;
        if needed > self.horizon {
            return Err(Error::HorizonTooSmall { needed, horizon: self.horizon });
        }
        let ln2 = 2f64.ln();
        let mut best = f64::INFINITY;
        for m in window.k_min..=m_max {
            for k in 1..=window.k_max {
                let drop = self.log_s[k] - self.log_s[k + m];
                best = best.min(m as f64 * ln2 / drop);
            }
        }
        Ok(best)
    }

    /// Spectrum along a schedule increasing to 1; the value is the one at the
    /// last point. Without a window each θ uses [`CutoutSet::auto_window`].
    pub fn quasi_lower(&self, schedule: &[f64], window: Option<&LiminfWindow>) -> Result<QuasiLower> {
        if schedule.is_empty() || schedule.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter("schedule must be strictly increasing".into()));
        }
        let last = *schedule.last().unwrap();
        if last < 0.99 {
            return Err(Error::InvalidParameter(format!("schedule must reach 0.99, ends at {last}")));
        }
        let mut values = Vec::with_capacity(schedule.len());
        for &theta in schedule {
            let w = match window {
                Some(w) => *w,
                None => self.auto_window(theta)?,
            };
            values.push((theta, self.exact_lower_spectrum(theta, &w)?));
        }
        Ok(QuasiLower { value: values.last().unwrap().1, values })
    }

    /// Number of level-`level` basic intervals inside, or meeting, an open
    /// ball.
    pub fn count_basic_intervals(&self, ball: &Ball, level: usize, mode: CountMode) -> Result<usize> {
        let ivs = self.basic_intervals(level)?;
        let reach = ball.radius - BOUNDARY_TOL;
        if reach <= 0.0 {
            return Ok(0);
        }
        let (lo, hi) = (ball.center - reach, ball.center + reach);
        let start = ivs.partition_point(|&(_, r)| r <= lo);
        let meeting = ivs[start..].iter().take_while(|&&(l, _)| l < hi);
        Ok(match mode {
            CountMode::Intersecting => meeting.count(),
            CountMode::Contained => meeting.filter(|&&(l, r)| l > lo && r < hi).count(),
        })
    }

    /// Level `k` with `s_{k+1} <= r < s_k`, for `r < 1`.
    pub fn level_of_radius(&self, r: f64) -> Result<usize> {
        let lr = r.ln();
        // number of levels with s_k > r
        let idx = self.log_s.partition_point(|&v| v > lr);
        if idx == 0 {
            return Err(Error::InvalidParameter(format!("radius {r} is not below s_0 = 1")));
        }
        if idx > self.horizon {
            return Err(Error::HorizonTooSmall { needed: idx, horizon: self.horizon });
        }
        Ok(idx - 1)
    }

    /// Level offset `N` bracketing `R^{1/θ}` around `s_{k+l(k,θ)}`:
    /// `N = 1 + ceil((1/θ) log2(1/c*))` with `c*` the perfectness ratio.
    pub fn bracket_offset(&self, theta: f64) -> Result<usize> {
        check_theta(theta)?;
        self.require_uniformly_perfect()?;
        let bits = -self.min_log_ratio / 2f64.ln() / theta;
        Ok(1 + bits.ceil() as usize)
    }

    /// Checks `s_{k+l+N} <= R^{1/θ} < s_{k+l}` when `s_{k+1} <= R < s_k`, and
    /// `s_{k+l+1} <= R^{1/θ} < s_{k+l-N}` when `s_k <= R < s_{k-1}`, where
    /// `l = l(k, θ)`. `log_r` is `log R`.
    pub fn check_bracket(&self, k: usize, log_r: f64, theta: f64) -> Result<BracketCheck> {
        let n = self.bracket_offset(theta)?;
        let l = self.l_of(k, theta)?;
        let fine = log_r / theta;
        let s = |j: usize| self.scale(j);
        let upper_part = s(k + 1)? <= log_r && log_r < s(k)?;
        let lower_part = k >= 1 && s(k)? <= log_r && log_r < s(k - 1)?;
        if upper_part {
            let holds = s(k + l + n)? <= fine && fine < s(k + l)?;
            Ok(BracketCheck { case: 1, holds, offset: n })
        } else if lower_part {
            // below level 0 the upper bound is s_0 = 1
            let holds = s(k + l + 1)? <= fine && fine < s((k + l).saturating_sub(n))?;
            Ok(BracketCheck { case: 2, holds, offset: n })
        } else {
            Err(Error::ScaleOrdering(format!("log R = {log_r} is outside [log s_(k+1), log s_(k-1))")))
        }
    }

    /// `|log(s_{k+l}/s_k)/log s_k - (1/θ - 1)|` and its bound
    /// `|log c*| / |log s_k|`.
    pub fn crossing_deviation(&self, k: usize, theta: f64) -> Result<(f64, f64)> {
        let l = self.l_of(k, theta)?;
        let base = self.scale(k)?;
        let ratio = (self.log_s[k + l] - base) / base;
        Ok(((ratio - (1.0 / theta - 1.0)).abs(), self.min_log_ratio.abs() / base.abs()))
    }
}

/// Result of [`CutoutSet::quasi_lower`].
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiLower {
    pub value: f64,
    pub values: Vec<(f64, f64)>,
}

/// Result of [`CutoutSet::check_bracket`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BracketCheck {
    pub case: u8,
    pub holds: bool,
    pub offset: usize,
}

/// Convenience wrappers mirroring the method names.
pub fn scale(set: &CutoutSet, k: usize) -> Result<f64> {
    set.scale(k)
}

pub fn l_of(set: &CutoutSet, k: usize, theta: f64) -> Result<usize> {
    set.l_of(k, theta)
}

pub fn exact_lower_spectrum(set: &CutoutSet, theta: f64, window: &LiminfWindow) -> Result<f64> {
    set.exact_lower_spectrum(theta, window)
}

pub fn exact_lower_assouad(set: &CutoutSet, m_max: usize, window: &LiminfWindow) -> Result<f64> {
    set.exact_lower_assouad(m_max, window)
}

pub fn uniform_perfectness_ratio(set: &CutoutSet) -> f64 {
    set.uniform_perfectness_ratio()
}

pub fn example_gap_sequence(alpha: f64, beta: f64, growth: GrowthRule) -> Result<GapSequence> {
    GapSequence::example(alpha, beta, growth)
}

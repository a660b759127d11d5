//! Spectrum curves, empirical estimators and the dimension report.
//!
//! Exact values come from the cut-out formulas; empirical values come from
//! the covering oracle on a finite approximation of the set.

mod verify;

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cutout::{check_theta, CutoutSet, LiminfWindow};
use crate::error::{Error, Result};
use crate::metric_cover::{covering_number, restrict, Ball, IntervalUnion};

pub use verify::{
    run_suite, verify_cor33, verify_lemma51, verify_prop31, verify_theorem1, verify_theorem2,
    verify_theorem3, Check, SuiteConfig, Tolerances, VerificationOutcome,
};

const LN2: f64 = std::f64::consts::LN_2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Exact,
    Empirical,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Exact => "exact",
            Provenance::Empirical => "empirical",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub theta: f64,
    pub value: f64,
    pub window: Option<LiminfWindow>,
}

/// θ ↦ spectrum value, with the window behind each exact value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumCurve {
    points: Vec<CurvePoint>,
    provenance: Provenance,
}

impl SpectrumCurve {
    pub fn new(points: Vec<CurvePoint>, provenance: Provenance) -> Result<Self> {
        if points.windows(2).any(|w| w[1].theta <= w[0].theta) {
            return Err(Error::InvalidParameter("curve thetas must be strictly increasing".into()));
        }
        if let Some(p) = points.iter().find(|p| !(p.value >= 0.0)) {
            return Err(Error::InvalidParameter(format!("negative value {} at θ = {}", p.value, p.theta)));
        }
        Ok(Self { points, provenance })
    }

    /// Exact spectrum over `thetas`; without a window each θ uses its
    /// automatic window.
    pub fn exact(set: &CutoutSet, thetas: &[f64], window: Option<LiminfWindow>) -> Result<Self> {
        let points = thetas
            .par_iter()
            .map(|&theta| {
                let w = match window {
                    Some(w) => w,
                    None => set.auto_window(theta)?,
                };
                let value = set.exact_lower_spectrum(theta, &w)?;
                Ok(CurvePoint { theta, value, window: Some(w) })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(points, Provenance::Exact)
    }

    pub fn points(&self) -> &[CurvePoint] {
        &self.points
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn thetas(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.theta).collect()
    }

    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.value).collect()
    }

    /// `θ ↦ min_{θ' <= θ} value(θ')` along the grid.
    pub fn running_min(&self) -> Vec<f64> {
        let mut best = f64::INFINITY;
        self.points
            .iter()
            .map(|p| {
                best = best.min(p.value);
                best
            })
            .collect()
    }

    /// CSV with columns `theta,value,k_min,k_max,provenance` followed by any
    /// extra numeric columns.
    pub fn to_csv_with(&self, extra: &[(&str, Vec<f64>)]) -> Result<String> {
        if let Some((name, _)) = extra.iter().find(|(_, col)| col.len() != self.points.len()) {
            return Err(Error::InvalidParameter(format!("column {name} has the wrong length")));
        }
        let mut out = String::from("theta,value,k_min,k_max,provenance");
        for (name, _) in extra {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        for (i, p) in self.points.iter().enumerate() {
            let (lo, hi) = match p.window {
                Some(w) => (w.k_min.to_string(), w.k_max.to_string()),
                None => (String::new(), String::new()),
            };
            out.push_str(&format!(
                "{},{},{lo},{hi},{}",
                format_sig(p.theta),
                format_sig(p.value),
                self.provenance
            ));
            for (_, col) in extra {
                out.push(',');
                out.push_str(&format_sig(col[i]));
            }
            out.push('\n');
        }
        Ok(out)
    }

    pub fn to_csv(&self) -> String {
        self.to_csv_with(&[]).expect("no extra columns")
    }
}

/// Formats with 9 significant digits, `%g` style, `.` as decimal point.
pub fn format_sig(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.') } else { &s };
        s.to_string()
    } else {
        format!("{x:.8e}")
    }
}

/// `start, start + step, …` up to `stop` inclusive.
pub fn theta_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidParameter(format!("grid step must be positive, got {step}")));
    }
    if !(start > 0.0 && start <= stop && stop < 1.0) {
        return Err(Error::InvalidParameter(format!("grid requires 0 < start <= stop < 1, got {start}:{stop}")));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| round12(start + i as f64 * step)).collect())
}

fn round12(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

/// A window valid for every θ of `thetas` at once.
pub fn common_window(set: &CutoutSet, thetas: &[f64]) -> Result<LiminfWindow> {
    let smallest = thetas
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if !smallest.is_finite() {
        return Err(Error::InvalidParameter("empty θ grid".into()));
    }
    set.auto_window(smallest)
}

/// Two-scale spectrum: the minimum over `k` in the window and `m >= l(k, θ)`
/// of `m log 2 / (log s_k - log s_{k+m})`, `k + m <= K_max`, with the
/// fractional crossing level standing in for `m = l(k, θ)`.
pub fn two_scale_spectrum(set: &CutoutSet, theta: f64, window: &LiminfWindow) -> Result<f64> {
    let pinned = set.exact_lower_spectrum(theta, window)?;
    let depth: Vec<f64> = set.log_scales().iter().map(|v| -v).collect();
    let horizon = set.horizon();

    // For fixed k the best m maximizes the slope from (k, L_k) to (j, L_j),
    // j >= k + l + 1; that is a tangent to the upper hull of the points to
    // the right, built leftwards as k decreases.
    let mut hull: Vec<usize> = Vec::new();
    let mut next = horizon;
    let mut best_slope = f64::NEG_INFINITY;
    for k in window.levels().rev() {
        let first = k + set.l_of(k, theta)? + 1;
        while next >= first {
            push_left(&mut hull, &depth, next);
            if next == 0 {
                break;
            }
            next -= 1;
        }
        if hull.is_empty() {
            continue;
        }
        best_slope = best_slope.max(tangent_slope(&hull, &depth, k));
    }
    Ok(pinned.min(LN2 / best_slope))
}

fn slope(depth: &[f64], a: usize, b: usize) -> f64 {
    (depth[b] - depth[a]) / (b - a) as f64
}

// `hull` holds indices in decreasing order; the last one is leftmost.
fn push_left(hull: &mut Vec<usize>, depth: &[f64], q: usize) {
    while hull.len() >= 2 {
        let a = hull[hull.len() - 1];
        let b = hull[hull.len() - 2];
        if slope(depth, q, a) <= slope(depth, a, b) {
            hull.pop();
        } else {
            break;
        }
    }
    hull.push(q);
}

fn tangent_slope(hull: &[usize], depth: &[f64], k: usize) -> f64 {
    let at = |t: usize| hull[hull.len() - 1 - t];
    let (mut lo, mut hi) = (0usize, hull.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if slope(depth, k, at(mid + 1)) > slope(depth, k, at(mid)) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    slope(depth, k, at(lo))
}

/// A finite interval union with the finest scale it faithfully represents.
#[derive(Clone, Debug)]
pub struct Approximation {
    pub union: IntervalUnion,
    pub resolution: f64,
}

impl Approximation {
    /// The level-`level` approximation of a cut-out set, resolving scales
    /// down to `2 s_level`.
    pub fn of(set: &CutoutSet, level: usize) -> Result<Self> {
        Ok(Self { union: set.approximation(level)?, resolution: 2.0 * set.scale(level)?.exp() })
    }

    /// A union that is the set itself, exact at every scale.
    pub fn exact(union: IntervalUnion) -> Self {
        Self { union, resolution: 0.0 }
    }

    fn check(&self, scale: f64) -> Result<()> {
        if scale < self.resolution * (1.0 - 1e-12) {
            Err(Error::Resolution { scale, resolution: self.resolution })
        } else {
            Ok(())
        }
    }
}

/// `min_{x, R} log N_{R^{1/θ}}(B(x,R) ∩ E) / log R^{1-1/θ}` from the covering
/// oracle.
pub fn empirical_spectrum_point(
    approx: &Approximation,
    theta: f64,
    radii: &[f64],
    centers: &[f64],
) -> Result<f64> {
    check_theta(theta)?;
    if approx.union.is_empty() {
        return Err(Error::EmptySet);
    }
    if radii.is_empty() || centers.is_empty() {
        return Err(Error::InvalidParameter("empty radius grid or center sample".into()));
    }
    for &r in radii {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::InvalidParameter(format!("radius {r} must lie in (0, 1)")));
        }
        approx.check(r.powf(1.0 / theta))?;
    }
    if let Some(&x) = centers.iter().find(|&&x| !approx.union.contains(x)) {
        return Err(Error::CenterNotInSet(x));
    }
    let mut best = f64::INFINITY;
    for &big in radii {
        let small = big.powf(1.0 / theta);
        let denom = (1.0 - 1.0 / theta) * big.ln();
        for &x in centers {
            let local = restrict(&approx.union, &Ball { center: x, radius: big });
            let n = covering_number(&local, small).max(1);
            best = best.min((n as f64).ln() / denom);
        }
    }
    Ok(best)
}

/// `min_δ log N_δ(E) / (-log δ)` over the grid; 0 for the empty set.
pub fn lower_box_dimension(approx: &Approximation, deltas: &[f64]) -> Result<f64> {
    if deltas.is_empty() {
        return Err(Error::InvalidParameter("empty δ grid".into()));
    }
    for &d in deltas {
        if !(d > 0.0 && d < 1.0) {
            return Err(Error::InvalidParameter(format!("δ = {d} must lie in (0, 1)")));
        }
        approx.check(d)?;
    }
    if approx.union.is_empty() {
        return Ok(0.0);
    }
    Ok(deltas
        .iter()
        .map(|&d| (covering_number(&approx.union, d) as f64).ln() / -d.ln())
        .fold(f64::INFINITY, f64::min))
}

/// Settings for [`full_report`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportConfig {
    /// Window for the spectrum and two-scale values; automatic when absent.
    pub window: Option<LiminfWindow>,
    pub quasi_schedule: Vec<f64>,
    /// Range of block lengths `m` for the lower Assouad formula.
    pub assouad_m: (usize, usize),
    pub tol_chain: f64,
}

impl Default for ReportConfig {
    fn default() -> Self {
        Self { window: None, quasi_schedule: vec![0.9, 0.95, 0.99], assouad_m: (2, 8), tol_chain: 0.05 }
    }
}

/// The five dimensions at one θ*. Exact values are absent when the formulas
/// do not apply (see `error`); the lower box value is always empirical.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimensionReport {
    pub theta_star: f64,
    pub lower_assouad: Option<f64>,
    pub quasi_lower: Option<f64>,
    pub two_scale: Option<f64>,
    pub spectrum_at: Option<f64>,
    pub lower_box: f64,
    pub chain_ok: bool,
    pub error: Option<String>,
}

impl DimensionReport {
    pub fn values(&self) -> [Option<f64>; 5] {
        [self.lower_assouad, self.quasi_lower, self.two_scale, self.spectrum_at, Some(self.lower_box)]
    }

    /// Flat `key = value` text.
    pub fn to_text(&self) -> String {
        let show = |v: Option<f64>| v.map(format_sig).unwrap_or_else(|| "unavailable".into());
        let mut out = format!(
            "theta_star = {}\nlower_assouad = {}\nquasi_lower = {}\ntwo_scale = {}\nspectrum_at = {}\nlower_box = {}\nchain_ok = {}\n",
            format_sig(self.theta_star),
            show(self.lower_assouad),
            show(self.quasi_lower),
            show(self.two_scale),
            show(self.spectrum_at),
            format_sig(self.lower_box),
            self.chain_ok
        );
        if let Some(e) = &self.error {
            out.push_str(&format!("error = {e}\n"));
        }
        out
    }
}

/// Whether `v_0 <= v_1 <= … <= v_4`, each step with slack `tol`.
pub fn chain_holds(values: &[f64], tol: f64) -> bool {
    values.windows(2).all(|w| w[0] <= w[1] + tol)
}

/// Populates the dimension chain at `theta_star`. The lower box value uses
/// the deepest resolvable approximation and the deepest third of its levels.
pub fn full_report(set: &CutoutSet, theta_star: f64, config: &ReportConfig) -> Result<DimensionReport> {
    check_theta(theta_star)?;
    let lower_box = report_lower_box(set)?;
    let exact = || -> Result<[f64; 4]> {
        let (m_lo, m_hi) = config.assouad_m;
        let assouad_window = LiminfWindow::new(m_lo, set.horizon().saturating_sub(m_hi).max(m_lo + 1))?;
        let lower_assouad = set.exact_lower_assouad(m_hi, &assouad_window)?;
        let quasi_lower = set.quasi_lower(&config.quasi_schedule, None)?.value;
        let window = match config.window {
            Some(w) => w,
            None => set.auto_window(theta_star)?,
        };
        let spectrum_at = set.exact_lower_spectrum(theta_star, &window)?;
        let two_scale = two_scale_spectrum(set, theta_star, &window)?;
        Ok([lower_assouad, quasi_lower, two_scale, spectrum_at])
    };
    Ok(match exact() {
        Ok([a, q, t, s]) => DimensionReport {
            theta_star,
            lower_assouad: Some(a),
            quasi_lower: Some(q),
            two_scale: Some(t),
            spectrum_at: Some(s),
            lower_box,
            chain_ok: chain_holds(&[a, q, t, s, lower_box], config.tol_chain),
            error: None,
        },
        Err(e @ Error::NotUniformlyPerfect(_)) => DimensionReport {
            theta_star,
            lower_assouad: None,
            quasi_lower: None,
            two_scale: None,
            spectrum_at: None,
            lower_box,
            chain_ok: false,
            error: Some(e.to_string()),
        },
        Err(e) => return Err(e),
    })
}

fn report_lower_box(set: &CutoutSet) -> Result<f64> {
    let level = set.resolvable_depth();
    if level < 2 {
        return Err(Error::Resolution { scale: set.scale(1)?.exp(), resolution: 2.0 * set.scale(level)?.exp() });
    }
    let approx = Approximation::of(set, level)?;
    let first = (2 * level).div_ceil(3).min(level - 1);
    let deltas: Vec<f64> = (first..level).map(|k| set.scale(k).map(f64::exp)).collect::<Result<_>>()?;
    lower_box_dimension(&approx, &deltas)
}

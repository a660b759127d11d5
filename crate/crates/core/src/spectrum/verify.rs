use std::cell::RefCell;
use std::collections::HashMap;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{common_window, theta_grid, two_scale_spectrum, Approximation, SpectrumCurve};
use crate::cutout::{check_theta, CountMode, CutoutSet, LiminfWindow};
use crate::error::{Error, Result};
use crate::metric_cover::{
    cover_report, doubling_constant, verify_comparable_packing_with, verify_cover_product,
    verify_packing_product, Ball, IntervalUnion,
};

/// Slacks for the asymptotic checks.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub thm1: f64,
    pub thm2: f64,
    pub thm3: f64,
    pub chain: f64,
    pub mono: f64,
    pub prop31: f64,
    pub osc: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { thm1: 0.05, thm2: 0.01, thm3: 0.05, chain: 0.05, mono: 0.01, prop31: 0.01, osc: 0.1 }
    }
}

impl Tolerances {
    pub const NAMES: [&'static str; 7] = ["thm1", "thm2", "thm3", "chain", "mono", "prop31", "osc"];

    pub fn zero() -> Self {
        Self { thm1: 0.0, thm2: 0.0, thm3: 0.0, chain: 0.0, mono: 0.0, prop31: 0.0, osc: 0.0 }
    }

    /// Sets one tolerance by name; `all` sets every one.
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !(value >= 0.0 && value.is_finite()) {
            return Err(Error::Config(format!("tolerance {name} must be non-negative, got {value}")));
        }
        let slot = match name {
            "all" => {
                *self = Self { thm1: value, thm2: value, thm3: value, chain: value, mono: value, prop31: value, osc: value };
                return Ok(());
            }
            "thm1" => &mut self.thm1,
            "thm2" => &mut self.thm2,
            "thm3" => &mut self.thm3,
            "chain" => &mut self.chain,
            "mono" => &mut self.mono,
            "prop31" => &mut self.prop31,
            "osc" => &mut self.osc,
            other => {
                return Err(Error::Config(format!(
                    "unknown tolerance {other:?}; expected one of {} or all",
                    Self::NAMES.join(", ")
                )))
            }
        };
        *slot = value;
        Ok(())
    }
}

/// Result of one check: `passed ⇔ lhs <= rhs + slack_used`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationOutcome {
    pub name: String,
    pub passed: bool,
    pub lhs: f64,
    pub rhs: f64,
    pub slack_used: f64,
    pub witnesses: Vec<(String, f64)>,
}

impl VerificationOutcome {
    fn new(name: &str, lhs: f64, rhs: f64, slack: f64) -> Self {
        Self { name: name.into(), passed: lhs <= rhs + slack, lhs, rhs, slack_used: slack, witnesses: Vec::new() }
    }

    fn with(mut self, key: &str, value: f64) -> Self {
        self.witnesses.push((key.into(), value));
        self
    }

    fn margin(&self) -> f64 {
        self.rhs + self.slack_used - self.lhs
    }

    /// `name passed lhs rhs slack`.
    pub fn line(&self) -> String {
        use super::format_sig as f;
        format!("{} {} {} {} {}", self.name, self.passed, f(self.lhs), f(self.rhs), f(self.slack_used))
    }
}

/// Folds many instances into the one with the smallest margin.
fn aggregate(name: &str, instances: Vec<VerificationOutcome>) -> Result<VerificationOutcome> {
    let total = instances.len();
    let failures = instances.iter().filter(|o| !o.passed).count();
    let worst = instances
        .into_iter()
        .min_by(|a, b| a.margin().total_cmp(&b.margin()))
        .ok_or_else(|| Error::InvalidParameter(format!("{name}: no admissible instances")))?;
    let mut out = VerificationOutcome { name: name.into(), passed: failures == 0, ..worst };
    out.witnesses.insert(0, ("instances".into(), total as f64));
    out.witnesses.insert(1, ("failures".into(), failures as f64));
    Ok(out)
}

/// Exact spectrum values with a fixed or automatic window, memoized by θ.
struct Spectra<'a> {
    set: &'a CutoutSet,
    window: Option<LiminfWindow>,
    cache: RefCell<HashMap<u64, f64>>,
}

impl<'a> Spectra<'a> {
    fn new(set: &'a CutoutSet, window: Option<&LiminfWindow>) -> Self {
        Self { set, window: window.copied(), cache: RefCell::new(HashMap::new()) }
    }

    fn at(&self, theta: f64) -> Result<f64> {
        if let Some(&v) = self.cache.borrow().get(&theta.to_bits()) {
            return Ok(v);
        }
        let w = match self.window {
            Some(w) => w,
            None => self.set.auto_window(theta)?,
        };
        let v = self.set.exact_lower_spectrum(theta, &w)?;
        self.cache.borrow_mut().insert(theta.to_bits(), v);
        Ok(v)
    }

    fn min_over(&self, thetas: &[f64]) -> Result<(f64, f64)> {
        let mut best = (f64::INFINITY, f64::NAN);
        for &t in thetas {
            let v = self.at(t)?;
            if v < best.0 {
                best = (v, t);
            }
        }
        Ok(best)
    }
}

/// `|two_scale(θ) - min_{θ' in grid} dim^θ'| <= tol`. The grid must cover
/// `(0.01, θ]` with steps at most 0.01; without a window both sides share
/// one valid for the whole grid.
pub fn verify_theorem1(
    set: &CutoutSet,
    theta: f64,
    grid: &[f64],
    window: Option<&LiminfWindow>,
    tol: f64,
) -> Result<VerificationOutcome> {
    check_theta(theta)?;
    let eps = 1e-9;
    let sorted = grid.windows(2).all(|w| w[0] < w[1]);
    let covers = !grid.is_empty()
        && grid[0] <= 0.01 + eps
        && (grid[grid.len() - 1] - theta).abs() <= eps
        && grid.windows(2).all(|w| w[1] - w[0] <= 0.01 + eps);
    if !(sorted && covers) {
        return Err(Error::InvalidParameter(format!(
            "θ' grid must increase from at most 0.01 to θ = {theta} in steps of at most 0.01"
        )));
    }
    let window = match window {
        Some(w) => *w,
        None => common_window(set, grid)?,
    };
    let spectra = Spectra::new(set, Some(&window));
    let two = two_scale_spectrum(set, theta, &window)?;
    let (grid_min, argmin) = spectra.min_over(grid)?;
    Ok(VerificationOutcome::new("theorem1", (two - grid_min).abs(), 0.0, tol)
        .with("theta", theta)
        .with("two_scale", two)
        .with("grid_min", grid_min)
        .with("argmin", argmin)
        .with("k_min", window.k_min as f64)
        .with("k_max", window.k_max as f64))
}

/// Largest adjacent jump of the running-minimum curve against
/// `K·h + tol_formula`, `K = 3 max / (a (1 - b))` on the curve's range `[a, b]`.
pub fn verify_theorem2(curve: &SpectrumCurve, tol_formula: f64) -> Result<VerificationOutcome> {
    let thetas = curve.thetas();
    if thetas.len() < 2 {
        return Err(Error::InvalidParameter("curve needs at least two points".into()));
    }
    let (a, b) = (thetas[0], thetas[thetas.len() - 1]);
    let h = thetas.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    if !(a > 0.05 && b < 0.95 && h <= 0.01 + 1e-9) {
        return Err(Error::InvalidParameter(format!(
            "curve must lie in (0.05, 0.95) with step <= 0.01, got [{a}, {b}] step {h}"
        )));
    }
    let rmin = curve.running_min();
    let (jump, at) = rmin
        .windows(2)
        .enumerate()
        .map(|(i, w)| ((w[1] - w[0]).abs(), thetas[i]))
        .fold((0.0, a), |acc, x| if x.0 > acc.0 { x } else { acc });
    let max_value = curve.values().into_iter().fold(0.0, f64::max);
    let lipschitz = 3.0 * max_value / (a * (1.0 - b));
    Ok(VerificationOutcome::new("theorem2", jump, lipschitz * h, tol_formula)
        .with("jump_at", at)
        .with("step", h)
        .with("lipschitz", lipschitz))
}

/// The infimum route to the quasi-lower value (running minimum over a 0.01
/// grid and the schedule) against the spectrum at the last schedule point.
pub fn verify_theorem3(
    set: &CutoutSet,
    schedule: &[f64],
    window: Option<&LiminfWindow>,
    tol: f64,
) -> Result<VerificationOutcome> {
    let spectra = Spectra::new(set, window);
    theorem3_with(&spectra, schedule, tol)
}

fn theorem3_with(spectra: &Spectra, schedule: &[f64], tol: f64) -> Result<VerificationOutcome> {
    let last = match schedule.last() {
        Some(&t) if t >= 0.99 && schedule.windows(2).all(|w| w[0] < w[1]) => t,
        _ => return Err(Error::InvalidParameter("schedule must increase to at least 0.99".into())),
    };
    let mut thetas = theta_grid(0.01, last, 0.01)?;
    thetas.extend_from_slice(schedule);
    let (inf, argmin) = spectra.min_over(&thetas)?;
    let at_last = spectra.at(last)?;
    Ok(VerificationOutcome::new("theorem3", (inf - at_last).abs(), 0.0, tol)
        .with("theta_last", last)
        .with("inf_route", inf)
        .with("argmin", argmin)
        .with("spectrum_last", at_last))
}

/// `dim^θ1 >= (θ2-θ1)/(1-θ1) dim^(θ1/θ2) + (1-θ2)/(1-θ1) dim^θ2 - tol`.
pub fn verify_prop31(
    set: &CutoutSet,
    theta1: f64,
    theta2: f64,
    window: Option<&LiminfWindow>,
    tol: f64,
) -> Result<VerificationOutcome> {
    prop31_with(&Spectra::new(set, window), theta1, theta2, tol)
}

fn prop31_with(spectra: &Spectra, theta1: f64, theta2: f64, tol: f64) -> Result<VerificationOutcome> {
    check_theta(theta1)?;
    check_theta(theta2)?;
    if theta1 >= theta2 {
        return Err(Error::InvalidParameter(format!("require θ1 < θ2, got {theta1}, {theta2}")));
    }
    let w1 = (theta2 - theta1) / (1.0 - theta1);
    let w2 = (1.0 - theta2) / (1.0 - theta1);
    let lhs = spectra.at(theta1)?;
    let combo = w1 * spectra.at(theta1 / theta2)? + w2 * spectra.at(theta2)?;
    Ok(VerificationOutcome::new("prop31", combo, lhs, tol).with("theta1", theta1).with("theta2", theta2))
}

/// `dim^θ >= dim^(θ^(1/n)) - tol`.
pub fn verify_cor33(
    set: &CutoutSet,
    theta: f64,
    n: u32,
    window: Option<&LiminfWindow>,
    tol: f64,
) -> Result<VerificationOutcome> {
    cor33_with(&Spectra::new(set, window), theta, n, tol)
}

fn cor33_with(spectra: &Spectra, theta: f64, n: u32, tol: f64) -> Result<VerificationOutcome> {
    check_theta(theta)?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let root = theta.powf(1.0 / n as f64);
    let lhs = spectra.at(root)?;
    let rhs = spectra.at(theta)?;
    Ok(VerificationOutcome::new("cor33", lhs, rhs, tol).with("theta", theta).with("n", n as f64))
}

/// Oscillation of the spectrum on each endpoint grid is at most `tol`.
pub fn verify_lemma51(
    set: &CutoutSet,
    near_zero: &[f64],
    near_one: &[f64],
    window: Option<&LiminfWindow>,
    tol: f64,
) -> Result<VerificationOutcome> {
    lemma51_with(&Spectra::new(set, window), near_zero, near_one, tol)
}

fn lemma51_with(spectra: &Spectra, near_zero: &[f64], near_one: &[f64], tol: f64) -> Result<VerificationOutcome> {
    let osc = |grid: &[f64]| -> Result<f64> {
        if grid.is_empty() {
            return Err(Error::InvalidParameter("empty endpoint grid".into()));
        }
        let vals = grid.iter().map(|&t| spectra.at(t)).collect::<Result<Vec<_>>>()?;
        let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
        Ok(hi - lo)
    };
    let (low, high) = (osc(near_zero)?, osc(near_one)?);
    Ok(VerificationOutcome::new("lemma51", low.max(high), 0.0, tol)
        .with("oscillation_near_0", low)
        .with("oscillation_near_1", high))
}

/// The checks run by [`run_suite`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Check {
    Sandwich,
    CoverProduct,
    PackingProduct,
    ComparablePacking,
    Prop31,
    Cor33,
    Theorem1,
    Theorem2,
    Theorem3,
    Lemma51,
    Lemma61,
    Lemma62,
    Lemma63,
}

impl Check {
    pub const ALL: [Check; 13] = [
        Check::Sandwich,
        Check::CoverProduct,
        Check::PackingProduct,
        Check::ComparablePacking,
        Check::Prop31,
        Check::Cor33,
        Check::Theorem1,
        Check::Theorem2,
        Check::Theorem3,
        Check::Lemma51,
        Check::Lemma61,
        Check::Lemma62,
        Check::Lemma63,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Sandwich => "sandwich",
            Check::CoverProduct => "cover-product",
            Check::PackingProduct => "packing-product",
            Check::ComparablePacking => "comparable-packing",
            Check::Prop31 => "prop31",
            Check::Cor33 => "cor33",
            Check::Theorem1 => "theorem1",
            Check::Theorem2 => "theorem2",
            Check::Theorem3 => "theorem3",
            Check::Lemma51 => "lemma51",
            Check::Lemma61 => "lemma61",
            Check::Lemma62 => "lemma62",
            Check::Lemma63 => "lemma63",
        }
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown check {s:?}")))
    }
}

/// Grids, sample sizes and tolerances for [`run_suite`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub window: Option<LiminfWindow>,
    pub tolerances: Tolerances,
    pub seed: u64,
    pub theorem1_thetas: Vec<f64>,
    /// `(start, stop, step)` of the exact curve for the continuity check.
    pub theorem2_grid: (f64, f64, f64),
    pub schedule: Vec<f64>,
    pub prop31_pairs: usize,
    pub cor33_grid: (f64, f64, f64),
    pub cor33_max_n: u32,
    pub lemma51_near_zero: Vec<f64>,
    pub lemma51_near_one: Vec<f64>,
    /// Level of the interval-union approximation for the covering checks.
    pub approximation_level: usize,
    pub cover_queries: usize,
    pub structure_queries: usize,
    pub bracket_thetas: Vec<f64>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            window: None,
            tolerances: Tolerances::default(),
            seed: 0,
            theorem1_thetas: vec![0.3, 0.6, 0.9],
            theorem2_grid: (0.1, 0.9, 0.005),
            schedule: vec![0.9, 0.95, 0.99],
            prop31_pairs: 100,
            cor33_grid: (0.01, 0.99, 0.01),
            cor33_max_n: 5,
            lemma51_near_zero: (2..=10).map(|i| i as f64 / 100.0).collect(),
            lemma51_near_one: (90..=99).map(|i| i as f64 / 100.0).collect(),
            approximation_level: 12,
            cover_queries: 200,
            structure_queries: 500,
            bracket_thetas: vec![0.3, 0.5, 0.7],
        }
    }
}

/// Stable stream for the pair `(seed, check)`.
pub(crate) fn check_rng(seed: u64, check: &str) -> ChaCha8Rng {
    // FNV-1a over the seed bytes and the name
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in seed.to_le_bytes().iter().chain(check.as_bytes()) {
        h ^= *b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(h)
}

/// Runs the selected checks; outcomes come back in the order of [`Check::ALL`].
pub fn run_suite(set: &CutoutSet, config: &SuiteConfig, checks: &[Check]) -> Result<Vec<VerificationOutcome>> {
    let mut selected: Vec<Check> = checks.to_vec();
    selected.sort();
    selected.dedup();
    selected.par_iter().map(|&c| run_check(set, config, c)).collect()
}

fn run_check(set: &CutoutSet, config: &SuiteConfig, check: Check) -> Result<VerificationOutcome> {
    let tol = &config.tolerances;
    let mut rng = check_rng(config.seed, check.name());
    let spectra = Spectra::new(set, config.window.as_ref());
    match check {
        Check::Sandwich => {
            let approx = approximation(set, config)?;
            sandwich_check(&approx, config.cover_queries, &mut rng)
        }
        Check::CoverProduct => {
            let approx = approximation(set, config)?;
            cover_product_check(&approx, config.cover_queries, &mut rng)
        }
        Check::PackingProduct => {
            let approx = approximation(set, config)?;
            packing_product_check(&approx, config.cover_queries, &mut rng)
        }
        Check::ComparablePacking => {
            let approx = approximation(set, config)?;
            comparable_packing_check(&approx, config.cover_queries, &mut rng)
        }
        Check::Prop31 => {
            let mut out = Vec::with_capacity(config.prop31_pairs);
            for _ in 0..config.prop31_pairs {
                let a: f64 = rng.random_range(0.01..0.99);
                let b: f64 = rng.random_range(0.01..0.99);
                if (a - b).abs() < 1e-3 {
                    continue;
                }
                out.push(prop31_with(&spectra, a.min(b), a.max(b), tol.prop31)?);
            }
            aggregate("prop31", out)
        }
        Check::Cor33 => {
            let (a, b, h) = config.cor33_grid;
            let mut out = Vec::new();
            for theta in theta_grid(a, b, h)? {
                for n in 1..=config.cor33_max_n {
                    out.push(cor33_with(&spectra, theta, n, tol.mono)?);
                }
            }
            aggregate("cor33", out)
        }
        Check::Theorem1 => {
            let mut out = Vec::new();
            for &theta in &config.theorem1_thetas {
                let grid = theta_grid(0.01, theta, 0.01)?;
                let mut grid = grid;
                if (grid[grid.len() - 1] - theta).abs() > 1e-9 {
                    grid.push(theta);
                }
                out.push(verify_theorem1(set, theta, &grid, config.window.as_ref(), tol.thm1)?);
            }
            aggregate("theorem1", out)
        }
        Check::Theorem2 => {
            let (a, b, h) = config.theorem2_grid;
            let curve = SpectrumCurve::exact(set, &theta_grid(a, b, h)?, config.window)?;
            verify_theorem2(&curve, tol.thm2)
        }
        Check::Theorem3 => theorem3_with(&spectra, &config.schedule, tol.thm3),
        Check::Lemma51 => lemma51_with(&spectra, &config.lemma51_near_zero, &config.lemma51_near_one, tol.osc),
        Check::Lemma61 => lemma61_check(set, config.structure_queries, &mut rng),
        Check::Lemma62 => lemma62_check(set, config.structure_queries, &mut rng),
        Check::Lemma63 => lemma63_check(set, &config.bracket_thetas, config.structure_queries, &mut rng),
    }
}

fn approximation(set: &CutoutSet, config: &SuiteConfig) -> Result<Approximation> {
    let level = config.approximation_level.min(set.resolvable_depth());
    if level < 2 {
        return Err(Error::Resolution { scale: 1.0, resolution: 2.0 * set.scale(level)?.exp() });
    }
    Approximation::of(set, level)
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        return lo;
    }
    rng.random_range(lo.ln()..=hi.ln()).exp()
}

/// A uniformly chosen component, then a uniform point of it.
fn point_of(set: &IntervalUnion, rng: &mut ChaCha8Rng) -> f64 {
    let ivs = set.intervals();
    let (a, b) = ivs[rng.random_range(0..ivs.len())];
    if b > a {
        rng.random_range(a..=b)
    } else {
        a
    }
}

fn sandwich_check(approx: &Approximation, queries: usize, rng: &mut ChaCha8Rng) -> Result<VerificationOutcome> {
    let floor = approx.resolution.max(1e-9);
    let mut out = Vec::with_capacity(queries);
    for _ in 0..queries {
        let center = rng.random_range(0.0..=1.0);
        let radius = log_uniform(rng, 1e-4, 1.0);
        let r = log_uniform(rng, floor, radius);
        let rep = cover_report(&approx.union, Some(Ball::new(center, radius)?), r);
        let excess = (rep.m_pack_4r as f64 - rep.n_cover as f64).max(rep.n_cover as f64 - rep.m_pack as f64);
        out.push(
            VerificationOutcome::new("sandwich", excess, 0.0, 0.0)
                .with("center", center)
                .with("radius", radius)
                .with("r", r),
        );
    }
    aggregate("sandwich", out)
}

fn cover_product_check(approx: &Approximation, queries: usize, rng: &mut ChaCha8Rng) -> Result<VerificationOutcome> {
    let floor = approx.resolution.max(1e-9);
    let mut out = Vec::with_capacity(queries);
    while out.len() < queries {
        let center = point_of(&approx.union, rng);
        let radius = log_uniform(rng, 1e-3, 0.5);
        if radius / 5.0 < floor {
            continue;
        }
        let r = log_uniform(rng, floor, radius / 5.0);
        let check = verify_cover_product(&approx.union, &Ball::new(center, radius)?, r)?;
        out.push(
            VerificationOutcome::new("cover-product", check.lhs, check.rhs, 0.0)
                .with("center", center)
                .with("radius", radius)
                .with("r", r),
        );
    }
    aggregate("cover-product", out)
}

fn packing_product_check(approx: &Approximation, queries: usize, rng: &mut ChaCha8Rng) -> Result<VerificationOutcome> {
    let floor = approx.resolution.max(1e-9);
    let mut out = Vec::with_capacity(queries);
    while out.len() < queries {
        let center = point_of(&approx.union, rng);
        let radius = log_uniform(rng, 1e-3, 1.0);
        if radius / 4.0 < 4.0 * floor {
            continue;
        }
        let r2 = log_uniform(rng, 4.0 * floor, radius / 4.0);
        let r1 = log_uniform(rng, floor, r2 / 4.0);
        let check = verify_packing_product(&approx.union, &Ball::new(center, radius)?, r1, r2)?;
        // the packing inequality reads lhs >= rhs
        out.push(
            VerificationOutcome::new("packing-product", check.rhs, check.lhs, 0.0)
                .with("center", center)
                .with("radius", radius)
                .with("r1", r1)
                .with("r2", r2),
        );
    }
    aggregate("packing-product", out)
}

fn comparable_packing_check(
    approx: &Approximation,
    queries: usize,
    rng: &mut ChaCha8Rng,
) -> Result<VerificationOutcome> {
    let floor = approx.resolution.max(1e-9);
    let mut scales = Vec::new();
    let mut rho = floor;
    while rho < 1.0 {
        scales.push(rho);
        rho *= 2.0;
    }
    let doubling = doubling_constant(&approx.union, &scales)?;
    let mut out = Vec::with_capacity(queries);
    let mut attempts = 0;
    while out.len() < queries {
        attempts += 1;
        if attempts > 100 * queries {
            break;
        }
        let theta: f64 = rng.random_range(0.3..0.9);
        // need 4 R^(1/θ) < R/4 and (R/4)^(1/θ) resolved
        let top = 16f64.powf(-theta / (1.0 - theta)) * 0.999;
        let bottom = 4.0 * floor.powf(theta);
        if bottom >= top {
            continue;
        }
        let radius = log_uniform(rng, bottom, top);
        let x = point_of(&approx.union, rng);
        let check = verify_comparable_packing_with(&approx.union, x, radius, theta, doubling)?;
        out.push(
            VerificationOutcome::new("comparable-packing", check.rhs, check.lhs, 0.0)
                .with("x", x)
                .with("radius", radius)
                .with("theta", theta)
                .with("doubling", doubling),
        );
    }
    aggregate("comparable-packing", out)
}

fn lemma61_check(set: &CutoutSet, queries: usize, rng: &mut ChaCha8Rng) -> Result<VerificationOutcome> {
    let depth = set.resolvable_depth();
    if depth < 3 {
        return Err(Error::LevelOutOfRange { level: 3, depth });
    }
    let endpoints = set.approximation(depth)?.endpoints();
    let mut out = Vec::with_capacity(queries);
    for _ in 0..queries {
        let x = endpoints[rng.random_range(0..endpoints.len())];
        let k = rng.random_range(1..=depth - 2);
        let lo = set.scale(k + 1)?.exp();
        let hi = set.scale(k)?.exp();
        let r = rng.random_range(lo..hi);
        let ball = Ball::new(x, r)?;
        let inner = set.count_basic_intervals(&ball, k + 2, CountMode::Contained)? as f64;
        let outer = set.count_basic_intervals(&ball, k - 1, CountMode::Intersecting)? as f64;
        // both conditions as one margin: 1 <= inner and outer <= 4
        let excess = (1.0 - inner).max(outer - 4.0);
        out.push(
            VerificationOutcome::new("lemma61", excess, 0.0, 0.0)
                .with("x", x)
                .with("r", r)
                .with("k", k as f64)
                .with("contained", inner)
                .with("intersecting", outer),
        );
    }
    aggregate("lemma61", out)
}

fn lemma62_check(set: &CutoutSet, queries: usize, rng: &mut ChaCha8Rng) -> Result<VerificationOutcome> {
    let mut out = Vec::with_capacity(queries);
    while out.len() < queries {
        let theta: f64 = rng.random_range(0.05..0.95);
        let top = set.admissible_level(theta)?;
        let k = rng.random_range(1..=top);
        let (dev, bound) = set.crossing_deviation(k, theta)?;
        out.push(
            VerificationOutcome::new("lemma62", dev, bound, 1e-12)
                .with("k", k as f64)
                .with("theta", theta),
        );
    }
    aggregate("lemma62", out)
}

fn lemma63_check(
    set: &CutoutSet,
    thetas: &[f64],
    queries: usize,
    rng: &mut ChaCha8Rng,
) -> Result<VerificationOutcome> {
    let mut out = Vec::with_capacity(queries * thetas.len());
    for &theta in thetas {
        let offset = set.bracket_offset(theta)?;
        let top = set.admissible_level(theta)?.saturating_sub(offset + 1);
        if top < 2 {
            return Err(Error::HorizonTooSmall { needed: offset + 3, horizon: set.horizon() });
        }
        for _ in 0..queries {
            let k = rng.random_range(2..=top);
            let log_r = rng.random_range(set.scale(k + 1)?..set.scale(k - 1)?);
            let check = set.check_bracket(k, log_r, theta)?;
            out.push(
                VerificationOutcome::new("lemma63", if check.holds { 0.0 } else { 1.0 }, 0.0, 0.0)
                    .with("theta", theta)
                    .with("k", k as f64)
                    .with("log_r", log_r)
                    .with("offset", check.offset as f64),
            );
        }
    }
    aggregate("lemma63", out)
}

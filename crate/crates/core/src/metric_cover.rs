//! Covering and packing numbers of finite unions of closed intervals.
//!
//! `N_r(E)` is the least number of open balls of radius `r` (open intervals
//! of length `2r`) covering `E`; `M_r(E)` is the largest cardinality of an
//! `r`-discrete subset of `E`. On the line both are computed exactly by a
//! left-to-right greedy sweep.
//!
//! Open-ball boundaries are resolved with an absolute tolerance
//! [`BOUNDARY_TOL`]: a point at distance `>= R - BOUNDARY_TOL` from a center is
//! outside the ball, and two points closer than `r - BOUNDARY_TOL` are not
//! `r`-separated. Both sweeps use the same stepping rule, so the sandwich
//! `M_{4r} <= N_r <= M_r` holds exactly in floating point.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance used on every open-ball boundary.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Slack subtracted from greedy step lengths. Shrinks with `r` so that tiny
/// scales keep a positive step.
fn slack(r: f64) -> f64 {
    BOUNDARY_TOL.min(r * 1e-6)
}

/// Closed intervals, sorted and pairwise disjoint.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct IntervalUnion {
    intervals: Vec<(f64, f64)>,
}

impl IntervalUnion {
    pub fn new(intervals: Vec<(f64, f64)>) -> Result<Self> {
        let mut total = 0.0;
        for (i, &(l, r)) in intervals.iter().enumerate() {
            if !(l.is_finite() && r.is_finite()) {
                return Err(Error::InvalidIntervals(format!("non-finite endpoint in interval {i}")));
            }
            if l > r {
                return Err(Error::InvalidIntervals(format!("interval {i} has left {l} > right {r}")));
            }
            if i > 0 && intervals[i - 1].1 >= l {
                return Err(Error::InvalidIntervals(
                    "intervals must be disjoint and sorted ascending".into(),
                ));
            }
            total += r - l;
        }
        if total > 1.0 + 1e-9 {
            return Err(Error::InvalidIntervals(format!("total length {total} exceeds 1")));
        }
        Ok(Self { intervals })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// A finite set of points, each as a degenerate interval.
    pub fn from_points(points: &[f64]) -> Result<Self> {
        let mut pts = points.to_vec();
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        Self::new(pts.into_iter().map(|p| (p, p)).collect())
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Number of connected components.
    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn total_length(&self) -> f64 {
        self.intervals.iter().map(|&(l, r)| r - l).sum()
    }

    pub fn diameter(&self) -> f64 {
        match (self.intervals.first(), self.intervals.last()) {
            (Some(first), Some(last)) => last.1 - first.0,
            _ => 0.0,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        let idx = self.intervals.partition_point(|&(_, r)| r < x - BOUNDARY_TOL);
        self.intervals
            .get(idx)
            .is_some_and(|&(l, _)| l <= x + BOUNDARY_TOL)
    }

    /// Component endpoints followed by component midpoints. These are the
    /// placements used to approximate suprema and infima over centers.
    pub fn sample_centers(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.intervals.len() * 3);
        for &(l, r) in &self.intervals {
            out.push(l);
            if r > l {
                out.push(r);
            }
        }
        for &(l, r) in &self.intervals {
            if r > l {
                out.push(0.5 * (l + r));
            }
        }
        out
    }

    pub fn endpoints(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.intervals.len() * 2);
        for &(l, r) in &self.intervals {
            out.push(l);
            if r > l {
                out.push(r);
            }
        }
        out
    }
}

/// Open ball `B(center, radius)` on the line.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: f64,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: f64, radius: f64) -> Result<Self> {
        if radius > 0.0 && radius.is_finite() && center.is_finite() {
            Ok(Self { center, radius })
        } else {
            Err(Error::InvalidBall(radius))
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        (x - self.center).abs() < self.radius - BOUNDARY_TOL
    }

    /// Closed interval of points treated as inside the ball.
    fn clip_bounds(&self) -> Option<(f64, f64)> {
        let reach = self.radius - BOUNDARY_TOL;
        (reach > 0.0).then_some((self.center - reach, self.center + reach))
    }
}

/// `B(x, R) ∩ E`, returned as the closure of the tolerance-shrunk
/// intersection.
pub fn restrict(set: &IntervalUnion, ball: &Ball) -> IntervalUnion {
    let Some((lo, hi)) = ball.clip_bounds() else {
        return IntervalUnion::empty();
    };
    let start = set.intervals.partition_point(|&(_, r)| r < lo);
    let intervals = set.intervals[start..]
        .iter()
        .take_while(|&&(l, _)| l <= hi)
        .map(|&(l, r)| (l.max(lo), r.min(hi)))
        .collect();
    IntervalUnion { intervals }
}

/// Places points left to right: each new point is the first point of the set
/// at or beyond the previous one plus `step`. Returns the number of points.
fn greedy_sweep(set: &IntervalUnion, step: f64, mut visit: impl FnMut(f64)) -> usize {
    debug_assert!(step > 0.0);
    let mut count = 0;
    let mut reach = f64::NEG_INFINITY;
    for &(a, b) in &set.intervals {
        if b < reach {
            continue;
        }
        let mut p = a.max(reach);
        loop {
            count += 1;
            visit(p);
            reach = p + step;
            if reach > b {
                break;
            }
            p = reach;
        }
    }
    count
}

fn check_scale(r: f64) {
    assert!(r > 0.0 && r.is_finite(), "scale must be positive and finite, got {r}");
}

/// Exact `N_r(E)`.
///
/// Panics if `r` is not positive.
pub fn covering_number(set: &IntervalUnion, r: f64) -> usize {
    check_scale(r);
    greedy_sweep(set, 2.0 * r - slack(r), |_| {})
}

/// Left edges of the greedy optimal cover; ball `i` is `B(edge_i + r, r)`.
pub fn cover_left_edges(set: &IntervalUnion, r: f64) -> Vec<f64> {
    check_scale(r);
    let mut out = Vec::new();
    greedy_sweep(set, 2.0 * r - slack(r), |p| out.push(p));
    out
}

/// Exact `M_r(E)`.
///
/// Panics if `r` is not positive.
pub fn packing_number(set: &IntervalUnion, r: f64) -> usize {
    check_scale(r);
    greedy_sweep(set, r - slack(r), |_| {})
}

/// A maximum `r`-discrete subset, leftmost placement.
pub fn packing_points(set: &IntervalUnion, r: f64) -> Vec<f64> {
    check_scale(r);
    let mut out = Vec::new();
    greedy_sweep(set, r - slack(r), |p| out.push(p));
    out
}

/// `N_r`, `M_r` and `M_{4r}` of a set, optionally restricted to a ball.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverReport {
    pub n_cover: usize,
    pub m_pack: usize,
    pub m_pack_4r: usize,
    pub r: f64,
    pub restricted_to: Option<Ball>,
}

impl CoverReport {
    pub fn sandwich_ok(&self) -> bool {
        self.m_pack_4r <= self.n_cover && self.n_cover <= self.m_pack
    }
}

pub fn cover_report(set: &IntervalUnion, ball: Option<Ball>, r: f64) -> CoverReport {
    let restricted;
    let target = match &ball {
        Some(b) => {
            restricted = restrict(set, b);
            &restricted
        }
        None => set,
    };
    CoverReport {
        n_cover: covering_number(target, r),
        m_pack: packing_number(target, r),
        m_pack_4r: packing_number(target, 4.0 * r),
        r,
        restricted_to: ball,
    }
}

/// Empirical doubling constant: the largest `N_ρ(B(x, 2ρ) ∩ E)` over sampled
/// centers `x` of the set and the given scales.
pub fn doubling_constant(set: &IntervalUnion, scales: &[f64]) -> Result<f64> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    if scales.is_empty() {
        return Err(Error::InvalidParameter("empty scale grid".into()));
    }
    if let Some(&bad) = scales.iter().find(|&&s| !(s > 0.0 && s.is_finite())) {
        return Err(Error::InvalidParameter(format!("scale {bad} must be positive")));
    }
    let centers = set.sample_centers();
    let mut best = 0usize;
    for &rho in scales {
        for &x in &centers {
            let ball = Ball { center: x, radius: 2.0 * rho };
            best = best.max(covering_number(&restrict(set, &ball), rho));
        }
    }
    Ok(best as f64)
}

/// Outcome of one of the two-scale product inequalities.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LemmaCheck {
    pub passed: bool,
    pub lhs: f64,
    pub rhs: f64,
}

impl LemmaCheck {
    fn trivial() -> Self {
        Self { passed: true, lhs: 0.0, rhs: 0.0 }
    }
}

/// `N_r(B∩E) <= N_{4r}(B∩E) · sup_y N_r(B(y,4r)∩E)`.
///
/// The supremum runs over the sampled centers of `set` together with the
/// centers of the greedy `4r`-cover of `B∩E`.
pub fn verify_cover_product(set: &IntervalUnion, ball: &Ball, r: f64) -> Result<LemmaCheck> {
    if !(r > 0.0) {
        return Err(Error::ScaleOrdering(format!("require r > 0, got {r}")));
    }
    if set.is_empty() || 4.0 * r >= ball.radius {
        return Ok(LemmaCheck::trivial());
    }
    let local = restrict(set, ball);
    let lhs = covering_number(&local, r);
    let coarse = covering_number(&local, 4.0 * r);
    let mut centers = set.sample_centers();
    centers.extend(cover_left_edges(&local, 4.0 * r).into_iter().map(|p| p + 4.0 * r));
    let sup = centers
        .iter()
        .map(|&y| covering_number(&restrict(set, &Ball { center: y, radius: 4.0 * r }), r))
        .max()
        .unwrap_or(0);
    let rhs = coarse * sup;
    Ok(LemmaCheck { passed: lhs <= rhs, lhs: lhs as f64, rhs: rhs as f64 })
}

/// `M_{r1}(B(x,R)∩E) >= M_{r2}(B(x,R/4)∩E) · inf_{y∈E} M_{r1}(B(y,r2/4)∩E)`.
///
/// The infimum runs over the sampled centers of `set` together with the
/// greedy `r2`-packing of `B(x,R/4)∩E`.
pub fn verify_packing_product(
    set: &IntervalUnion,
    ball: &Ball,
    r1: f64,
    r2: f64,
) -> Result<LemmaCheck> {
    if !(r1 > 0.0 && r1 <= r2 / 4.0 && r2 <= ball.radius / 4.0) {
        return Err(Error::ScaleOrdering(format!(
            "require 0 < r1 <= r2/4 and r2 <= R/4 (r1 = {r1}, r2 = {r2}, R = {})",
            ball.radius
        )));
    }
    if set.is_empty() {
        return Ok(LemmaCheck::trivial());
    }
    if !set.contains(ball.center) {
        return Err(Error::CenterNotInSet(ball.center));
    }
    let lhs = packing_number(&restrict(set, ball), r1);
    let quarter = restrict(set, &Ball { center: ball.center, radius: ball.radius / 4.0 });
    let coarse = packing_number(&quarter, r2);
    let mut centers = set.sample_centers();
    centers.extend(packing_points(&quarter, r2));
    let inf = centers
        .iter()
        .map(|&y| packing_number(&restrict(set, &Ball { center: y, radius: r2 / 4.0 }), r1))
        .min()
        .unwrap_or(0);
    let rhs = coarse * inf;
    Ok(LemmaCheck { passed: lhs >= rhs, lhs: lhs as f64, rhs: rhs as f64 })
}

/// The constant `C(θ) = C1(θ) · C2` for a doubling constant `doubling`.
///
/// `C1` covers a ball of radius `4R^{1/θ}` by balls of radius
/// `(R/4)^{1/θ}`, a radius ratio of `4·4^{1/θ}` reached by halving
/// `ceil(2 + 2/θ)` times; `C2 = doubling^3`.
pub fn comparable_packing_constant(doubling: f64, theta: f64) -> f64 {
    let halvings = (2.0 + 2.0 / theta).ceil();
    doubling.powf(halvings) * doubling.powi(3)
}

fn comparable_packing_scales(radius: f64, theta: f64) -> Vec<f64> {
    let lo = 0.25 * (radius / 4.0).powf(1.0 / theta);
    let hi = 4.0 * radius.powf(1.0 / theta);
    let mut out = Vec::new();
    let mut rho = lo;
    while rho <= hi * (1.0 + 1e-12) {
        out.push(rho);
        rho *= 2.0;
    }
    out
}

/// `M_{4R^{1/θ}}(B(x,R/4)∩E) >= C(θ)^{-1} · M_{(R/4)^{1/θ}}(B(x,R/4)∩E)`,
/// with `C(θ)` built from an empirical doubling constant.
pub fn verify_comparable_packing(
    set: &IntervalUnion,
    x: f64,
    radius: f64,
    theta: f64,
) -> Result<LemmaCheck> {
    check_comparable_preconditions(set, x, radius, theta)?;
    if set.is_empty() {
        return Ok(LemmaCheck::trivial());
    }
    let doubling = doubling_constant(set, &comparable_packing_scales(radius, theta))?;
    verify_comparable_packing_with(set, x, radius, theta, doubling)
}

/// As [`verify_comparable_packing`] with a precomputed doubling constant.
pub fn verify_comparable_packing_with(
    set: &IntervalUnion,
    x: f64,
    radius: f64,
    theta: f64,
    doubling: f64,
) -> Result<LemmaCheck> {
    check_comparable_preconditions(set, x, radius, theta)?;
    if set.is_empty() {
        return Ok(LemmaCheck::trivial());
    }
    let quarter = restrict(set, &Ball { center: x, radius: radius / 4.0 });
    let lhs = packing_number(&quarter, 4.0 * radius.powf(1.0 / theta)) as f64;
    let fine = packing_number(&quarter, (radius / 4.0).powf(1.0 / theta)) as f64;
    let rhs = fine / comparable_packing_constant(doubling.max(1.0), theta);
    Ok(LemmaCheck { passed: lhs >= rhs, lhs, rhs })
}

fn check_comparable_preconditions(set: &IntervalUnion, x: f64, radius: f64, theta: f64) -> Result<()> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::Theta(theta));
    }
    if !(radius > 0.0 && 4.0 * radius.powf(1.0 / theta) < radius / 4.0) {
        return Err(Error::ScaleOrdering(format!(
            "require 4R^(1/θ) < R/4 (R = {radius}, θ = {theta})"
        )));
    }
    if !set.is_empty() && !set.contains(x) {
        return Err(Error::CenterNotInSet(x));
    }
    Ok(())
}

/// Finite metric space fallback with greedy (2-approximate) counts.
///
/// `greedy_cover_count(r)` centers balls at set points, so it lies between
/// `N_r` and `M_r`; `greedy_packing_count(r)` is a maximal, not necessarily
/// maximum, `r`-discrete subset.
pub struct FinitePointSet<P, D> {
    points: Vec<P>,
    dist: D,
}

impl<P, D: Fn(&P, &P) -> f64> FinitePointSet<P, D> {
    pub fn new(points: Vec<P>, dist: D) -> Self {
        Self { points, dist }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn greedy_cover_count(&self, r: f64) -> usize {
        let mut covered = vec![false; self.points.len()];
        let mut count = 0;
        for i in 0..self.points.len() {
            if covered[i] {
                continue;
            }
            count += 1;
            for (j, flag) in covered.iter_mut().enumerate().skip(i) {
                if (self.dist)(&self.points[i], &self.points[j]) < r {
                    *flag = true;
                }
            }
        }
        count
    }

    pub fn greedy_packing_count(&self, r: f64) -> usize {
        let mut chosen: Vec<usize> = Vec::new();
        for i in 0..self.points.len() {
            if chosen.iter().all(|&c| (self.dist)(&self.points[c], &self.points[i]) >= r) {
                chosen.push(i);
            }
        }
        chosen.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_thirds() -> IntervalUnion {
        IntervalUnion::new(vec![(0.0, 1.0 / 3.0), (2.0 / 3.0, 1.0)]).unwrap()
    }

    fn ternary_level(level: u32) -> IntervalUnion {
        let mut ivs = vec![(0.0f64, 1.0f64)];
        for _ in 0..level {
            ivs = ivs
                .iter()
                .flat_map(|&(l, r)| {
                    let t = (r - l) / 3.0;
                    [(l, l + t), (r - t, r)]
                })
                .collect();
        }
        IntervalUnion::new(ivs).unwrap()
    }

    #[test]
    fn rejects_overlap_and_reversed() {
        assert!(IntervalUnion::new(vec![(0.0, 0.5), (0.4, 0.6)]).is_err());
        assert!(IntervalUnion::new(vec![(0.0, 0.5), (0.5, 0.6)]).is_err());
        assert!(IntervalUnion::new(vec![(0.3, 0.2)]).is_err());
        assert!(IntervalUnion::new(vec![(0.0, 2.0)]).is_err());
        assert!(Ball::new(0.0, 0.0).is_err());
    }

    #[test]
    fn restrict_clips_to_open_ball() {
        let set = two_thirds();
        let got = restrict(&set, &Ball::new(0.0, 0.5).unwrap());
        assert_eq!(got.len(), 1);
        assert_eq!(got.intervals()[0].0, 0.0);
        assert!((got.intervals()[0].1 - 1.0 / 3.0).abs() < 1e-15);

        assert!(restrict(&IntervalUnion::empty(), &Ball::new(0.3, 1.0).unwrap()).is_empty());
        let unit = IntervalUnion::new(vec![(0.0, 1.0)]).unwrap();
        assert!(restrict(&unit, &Ball::new(2.0, 0.5).unwrap()).is_empty());
        // the boundary point 1.0 of (1.5 - 0.5, ...) is excluded
        assert!(restrict(&unit, &Ball::new(1.5, 0.5).unwrap()).is_empty());
    }

    #[test]
    fn covering_examples() {
        assert_eq!(covering_number(&two_thirds(), 1.0 / 3.0), 2);
        let unit = IntervalUnion::new(vec![(0.0, 1.0)]).unwrap();
        assert_eq!(covering_number(&unit, 1.0), 1);
        assert_eq!(covering_number(&ternary_level(3), 1.0 / 27.0), 8);
        assert_eq!(covering_number(&IntervalUnion::empty(), 0.1), 0);
        // an interval of length exactly 2r needs two open balls
        assert_eq!(covering_number(&unit, 0.5), 2);
    }

    #[test]
    fn packing_examples() {
        assert_eq!(packing_number(&two_thirds(), 1.0 / 3.0), 4);
        assert_eq!(packing_points(&two_thirds(), 1.0 / 3.0).len(), 4);
        let point = IntervalUnion::from_points(&[0.25]).unwrap();
        assert_eq!(packing_number(&point, 0.01), 1);
        assert_eq!(packing_number(&point, 10.0), 1);
        assert_eq!(packing_number(&two_thirds(), 4.0 / 3.0), 1);
        assert_eq!(packing_number(&IntervalUnion::empty(), 0.1), 0);
    }

    #[test]
    fn cover_report_sandwich() {
        let rep = cover_report(&two_thirds(), None, 1.0 / 3.0);
        assert_eq!((rep.n_cover, rep.m_pack, rep.m_pack_4r), (2, 4, 1));
        assert!(rep.sandwich_ok());
        let empty = cover_report(&IntervalUnion::empty(), None, 0.2);
        assert_eq!((empty.n_cover, empty.m_pack, empty.m_pack_4r), (0, 0, 0));
    }

    #[test]
    fn doubling_constant_cases() {
        let unit = IntervalUnion::new(vec![(0.0, 1.0)]).unwrap();
        // the midpoint center sees the open interval (0, 1): three open
        // quarter-radius balls are needed
        assert_eq!(doubling_constant(&unit, &[0.25]).unwrap(), 3.0);
        assert_eq!(doubling_constant(&IntervalUnion::empty(), &[0.25]), Err(Error::EmptySet));
        assert!(doubling_constant(&unit, &[]).is_err());
        let t6 = ternary_level(6);
        let d = doubling_constant(&t6, &[1.0 / 9.0, 1.0 / 27.0, 1.0 / 81.0]).unwrap();
        assert!((2.0..=4.0).contains(&d), "{d}");
    }

    #[test]
    fn cover_product_examples() {
        let t8 = ternary_level(8);
        let ball = Ball::new(0.0, 1.0 / 3.0).unwrap();
        assert!(verify_cover_product(&t8, &ball, 1.0 / 81.0).unwrap().passed);
        assert!(verify_cover_product(&t8, &ball, 0.1).unwrap().passed);
        assert!(verify_cover_product(&IntervalUnion::empty(), &ball, 0.01).unwrap().passed);
    }

    #[test]
    fn packing_product_examples() {
        let t10 = ternary_level(10);
        let ball = Ball::new(0.0, 1.0 / 3.0).unwrap();
        let r2 = 3f64.powi(-4);
        let check = verify_packing_product(&t10, &ball, 3f64.powi(-7), r2).unwrap();
        assert!(check.passed, "{check:?}");

        let single = IntervalUnion::new(vec![(0.0, 0.5)]).unwrap();
        let ball = Ball::new(0.25, 0.16).unwrap();
        let r1 = ball.radius / 16.0;
        assert!(verify_packing_product(&single, &ball, r1, 4.0 * r1).unwrap().passed);

        assert!(matches!(
            verify_packing_product(&t10, &Ball::new(0.0, 1.0 / 3.0).unwrap(), 0.01, 0.02),
            Err(Error::ScaleOrdering(_))
        ));
        assert!(matches!(
            verify_packing_product(&t10, &Ball::new(0.5, 1.0 / 3.0).unwrap(), 1e-4, 1e-2),
            Err(Error::CenterNotInSet(_))
        ));
    }

    #[test]
    fn comparable_packing_examples() {
        let t12 = ternary_level(12);
        assert!(verify_comparable_packing(&t12, 0.0, 1.0 / 27.0, 0.5).unwrap().passed);
        assert!(verify_comparable_packing(&t12, 1.0, 1.0 / 27.0, 0.4).unwrap().passed);
        assert!(matches!(
            verify_comparable_packing(&t12, 0.0, 0.9, 0.5),
            Err(Error::ScaleOrdering(_))
        ));
        assert!(matches!(verify_comparable_packing(&t12, 0.0, 0.1, 1.0), Err(Error::Theta(_))));
    }

    #[test]
    fn finite_point_fallback_brackets_exact_counts() {
        let pts: Vec<f64> = (0..40).map(|i| (i as f64 / 40.0).powi(2)).collect();
        let space = FinitePointSet::new(pts.clone(), |a: &f64, b: &f64| (a - b).abs());
        let union = IntervalUnion::from_points(&pts).unwrap();
        for r in [0.01, 0.05, 0.2] {
            let greedy = space.greedy_cover_count(r);
            assert!(covering_number(&union, r) <= greedy);
            assert!(greedy <= packing_number(&union, r));
            assert!(space.greedy_packing_count(r) <= packing_number(&union, r));
        }
        assert_eq!(space.len(), 40);
    }
}

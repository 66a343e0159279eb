//! Level sets `D¹_S(w) = {t : S(t,w) = 1}` and `D⁰_T(w) = {t : T(t,w) = 0}`
//! and the strong existence / uniqueness predicates built on their intersection.

use std::fmt;

use crate::error::Result;
use crate::grid::Grid;
use crate::ops::{check_first_coordinate_continuity, BinaryOp, Kind, Regime};
use crate::verdict::{TriState, Witness};
use crate::EPS;

const BISECTION_STEPS: usize = 60;

/// A possibly empty subinterval of `[0,1]` with open or closed endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeInterval {
    pub lower: f64,
    pub upper: f64,
    pub lower_closed: bool,
    pub upper_closed: bool,
    pub empty: bool,
}

impl DegreeInterval {
    pub fn new(lower: f64, upper: f64, lower_closed: bool, upper_closed: bool) -> Self {
        if lower > upper || (lower == upper && !(lower_closed && upper_closed)) {
            return Self::empty();
        }
        DegreeInterval {
            lower,
            upper,
            lower_closed,
            upper_closed,
            empty: false,
        }
    }

    pub fn closed(lower: f64, upper: f64) -> Self {
        Self::new(lower, upper, true, true)
    }

    pub fn point(value: f64) -> Self {
        Self::closed(value, value)
    }

    pub fn unit() -> Self {
        Self::closed(0.0, 1.0)
    }

    pub fn empty() -> Self {
        DegreeInterval {
            lower: 0.0,
            upper: 0.0,
            lower_closed: false,
            upper_closed: false,
            empty: true,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.empty
    }

    pub fn is_singleton(&self) -> bool {
        !self.empty && self.lower == self.upper
    }

    pub fn contains(&self, t: f64) -> bool {
        if self.empty {
            return false;
        }
        let above = if self.lower_closed {
            t >= self.lower
        } else {
            t > self.lower
        };
        let below = if self.upper_closed {
            t <= self.upper
        } else {
            t < self.upper
        };
        above && below
    }

    pub fn intersect(&self, other: &DegreeInterval) -> DegreeInterval {
        if self.empty || other.empty {
            return Self::empty();
        }
        let (lower, lower_closed) = match self.lower.total_cmp(&other.lower) {
            std::cmp::Ordering::Greater => (self.lower, self.lower_closed),
            std::cmp::Ordering::Less => (other.lower, other.lower_closed),
            std::cmp::Ordering::Equal => (self.lower, self.lower_closed && other.lower_closed),
        };
        let (upper, upper_closed) = match self.upper.total_cmp(&other.upper) {
            std::cmp::Ordering::Less => (self.upper, self.upper_closed),
            std::cmp::Ordering::Greater => (other.upper, other.upper_closed),
            std::cmp::Ordering::Equal => (self.upper, self.upper_closed && other.upper_closed),
        };
        Self::new(lower, upper, lower_closed, upper_closed)
    }

    /// Two distinct members when the interval has more than one point.
    pub fn two_members(&self) -> Option<(f64, f64)> {
        if self.empty || self.lower == self.upper {
            return None;
        }
        let mid = 0.5 * (self.lower + self.upper);
        let first = if self.lower_closed { self.lower } else { mid };
        let second = if self.lower_closed {
            mid
        } else {
            0.5 * (mid + self.upper)
        };
        Some((first, second))
    }
}

impl fmt::Display for DegreeInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.empty {
            return f.write_str("∅");
        }
        if self.lower == self.upper {
            return write!(f, "{{{}}}", self.lower);
        }
        write!(
            f,
            "{}{}, {}{}",
            if self.lower_closed { '[' } else { '(' },
            self.lower,
            self.upper,
            if self.upper_closed { ']' } else { ')' }
        )
    }
}

/// `D¹_S(w)`. Closed forms for built-ins, bisection for custom conorms.
pub fn one_interval(s: &BinaryOp, w: f64) -> Result<DegreeInterval> {
    s.expect_kind(Kind::Conorm)?;
    if w >= 1.0 {
        return Ok(DegreeInterval::unit());
    }
    Ok(match s.regime() {
        Regime::Min | Regime::Product | Regime::SsNegative(_) | Regime::Hamacher(_) | Regime::OrdinalSum => {
            DegreeInterval::point(1.0)
        }
        Regime::Lukasiewicz => DegreeInterval::closed(1.0 - w, 1.0),
        Regime::SsPositive(l) => DegreeInterval::closed(ss_one_lower(l, w), 1.0),
        Regime::Drastic => {
            if w == 0.0 {
                DegreeInterval::point(1.0)
            } else {
                DegreeInterval::new(0.0, 1.0, false, true)
            }
        }
        Regime::Custom => one_interval_numeric(s, w),
    })
}

/// `D⁰_T(w)`. Closed forms for built-ins, bisection for custom norms.
pub fn zero_interval(t: &BinaryOp, w: f64) -> Result<DegreeInterval> {
    t.expect_kind(Kind::Norm)?;
    if w <= 0.0 {
        return Ok(DegreeInterval::unit());
    }
    Ok(match t.regime() {
        Regime::Min | Regime::Product | Regime::SsNegative(_) | Regime::Hamacher(_) | Regime::OrdinalSum => {
            DegreeInterval::point(0.0)
        }
        Regime::Lukasiewicz => DegreeInterval::closed(0.0, 1.0 - w),
        Regime::SsPositive(l) => DegreeInterval::closed(0.0, ss_zero_upper(l, w)),
        Regime::Drastic => {
            if w == 1.0 {
                DegreeInterval::point(0.0)
            } else {
                DegreeInterval::new(0.0, 1.0, true, false)
            }
        }
        Regime::Custom => zero_interval_numeric(t, w),
    })
}

fn ss_one_lower(lambda: f64, w: f64) -> f64 {
    1.0 - ss_zero_upper(lambda, 1.0 - w)
}

fn ss_zero_upper(lambda: f64, w: f64) -> f64 {
    (1.0 - w.powf(lambda)).max(0.0).powf(1.0 / lambda)
}

fn snap(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

/// Bisection for the boundary of a monotone predicate. `true_side_high`
/// says whether the predicate holds above the boundary. Returns the endpoint
/// and whether it belongs to the set.
fn bisect_boundary(pred: impl Fn(f64) -> bool, true_side_high: bool) -> (f64, bool) {
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let inside = pred(mid);
        if inside == true_side_high {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let s = snap(if true_side_high { hi } else { lo });
    if s >= lo && s <= hi {
        (s, pred(s))
    } else {
        (if true_side_high { hi } else { lo }, true)
    }
}

/// `D¹_S(w)` by bisection on `t ↦ S(t,w) = 1`; endpoint membership by direct evaluation.
pub fn one_interval_numeric(s: &BinaryOp, w: f64) -> DegreeInterval {
    let pred = |t: f64| s.eval(t, w) == 1.0;
    if !pred(1.0) {
        return DegreeInterval::empty();
    }
    if pred(0.0) {
        return DegreeInterval::unit();
    }
    let (lower, closed) = bisect_boundary(pred, true);
    DegreeInterval::new(lower, 1.0, closed, true)
}

/// `D⁰_T(w)` by bisection on `t ↦ T(t,w) = 0`; endpoint membership by direct evaluation.
pub fn zero_interval_numeric(t: &BinaryOp, w: f64) -> DegreeInterval {
    let pred = |x: f64| t.eval(x, w) == 0.0;
    if !pred(0.0) {
        return DegreeInterval::empty();
    }
    if pred(1.0) {
        return DegreeInterval::unit();
    }
    let (upper, closed) = bisect_boundary(pred, false);
    DegreeInterval::new(0.0, upper, true, closed)
}

/// `D¹_S(w) ∩ D⁰_T(w)`.
pub fn divisor_intersection(t: &BinaryOp, s: &BinaryOp, w: f64) -> Result<DegreeInterval> {
    Ok(one_interval(s, w)?.intersect(&zero_interval(t, w)?))
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum ZeroSet {
    ZeroOnly,
    AllButOne,
    Curve(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum OneSet {
    OneOnly,
    AllButZero,
    Curve(f64),
}

fn zero_set(t: &BinaryOp) -> Option<ZeroSet> {
    match t.regime() {
        Regime::Min | Regime::Product | Regime::SsNegative(_) | Regime::Hamacher(_) | Regime::OrdinalSum => {
            Some(ZeroSet::ZeroOnly)
        }
        Regime::Drastic => Some(ZeroSet::AllButOne),
        Regime::Lukasiewicz => Some(ZeroSet::Curve(1.0)),
        Regime::SsPositive(l) => Some(ZeroSet::Curve(l)),
        Regime::Custom => None,
    }
}

fn one_set(s: &BinaryOp) -> Option<OneSet> {
    match s.regime() {
        Regime::Min | Regime::Product | Regime::SsNegative(_) | Regime::Hamacher(_) | Regime::OrdinalSum => {
            Some(OneSet::OneOnly)
        }
        Regime::Drastic => Some(OneSet::AllButZero),
        Regime::Lukasiewicz => Some(OneSet::Curve(1.0)),
        Regime::SsPositive(l) => Some(OneSet::Curve(l)),
        Regime::Custom => None,
    }
}

/// Shape of the intersection over all `w ∈ (0,1)` for built-in pairs.
enum Shape {
    /// Empty at the given `w`.
    Empty(f64),
    /// Singleton for every `w`.
    Singleton,
    /// Non-empty everywhere, with more than one point at the given `w`.
    Wide(f64),
    /// Needs a grid sweep.
    Sweep,
}

fn analytic_shape(t: &BinaryOp, s: &BinaryOp) -> Option<Shape> {
    let (z, o) = (zero_set(t)?, one_set(s)?);
    Some(match (z, o) {
        (ZeroSet::ZeroOnly, _) | (_, OneSet::OneOnly) => Shape::Empty(0.5),
        (ZeroSet::AllButOne, _) | (_, OneSet::AllButZero) => Shape::Wide(0.5),
        (ZeroSet::Curve(a), OneSet::Curve(b)) => {
            if a == 1.0 && b == 1.0 {
                Shape::Singleton
            } else if a >= 1.0 && b >= 1.0 {
                Shape::Wide(0.5)
            } else if a <= 1.0 && b <= 1.0 {
                Shape::Empty(0.5)
            } else {
                Shape::Sweep
            }
        }
    })
}

fn empty_witness(t: &BinaryOp, s: &BinaryOp, w: f64) -> Result<TriState> {
    let d1 = one_interval(s, w)?;
    let d0 = zero_interval(t, w)?;
    Ok(TriState::Fails(Witness::degrees(
        vec![w],
        format!("D¹_S({w}) = {d1} and D⁰_T({w}) = {d0} do not intersect"),
    )))
}

fn wide_witness(t: &BinaryOp, s: &BinaryOp, w: f64) -> Result<TriState> {
    let both = divisor_intersection(t, s, w)?;
    let (a, b) = both
        .two_members()
        .ok_or_else(|| crate::Error::Internal(format!("expected a non-degenerate intersection at w = {w}")))?;
    Ok(TriState::Fails(Witness::degrees(
        vec![w, a, b],
        format!("D¹_S({w}) ∩ D⁰_T({w}) = {both} contains {a} and {b}"),
    )))
}

/// Sweeps the grid; returns the first empty and first wide `w`.
fn sweep(t: &BinaryOp, s: &BinaryOp, grid: &Grid) -> Result<(Option<f64>, Option<f64>)> {
    let mut wide = None;
    for &w in grid.points() {
        let both = divisor_intersection(t, s, w)?;
        if both.is_empty() {
            return Ok((Some(w), wide));
        }
        if wide.is_none() && both.upper - both.lower > EPS {
            wide = Some(w);
        }
    }
    Ok((None, wide))
}

/// Strong decompositions exist for every relation iff `S` is continuous in
/// the first coordinate and `D¹_S(w) ∩ D⁰_T(w) ≠ ∅` for every `w`.
///
/// Built-in pairs are decided analytically over all `w`; custom operators
/// and mixed Schweizer–Sklar parameters are swept over `grid`.
pub fn strong_existence(t: &BinaryOp, s: &BinaryOp, grid: &Grid) -> Result<TriState> {
    t.expect_kind(Kind::Norm)?;
    s.expect_kind(Kind::Conorm)?;
    let continuity = check_first_coordinate_continuity(s, 1000);
    if continuity.fails() {
        return Ok(continuity);
    }
    match analytic_shape(t, s) {
        Some(Shape::Empty(w)) => empty_witness(t, s, w),
        Some(Shape::Singleton | Shape::Wide(_)) => Ok(continuity.and(TriState::Holds)),
        Some(Shape::Sweep) | None => {
            let (empty, _) = sweep(t, s, grid)?;
            match empty {
                Some(w) => empty_witness(t, s, w),
                None => Ok(TriState::UnknownSampled),
            }
        }
    }
}

/// Strong decompositions are unique for every relation iff they exist and
/// every intersection `D¹_S(w) ∩ D⁰_T(w)` is a single point.
pub fn strong_uniqueness(t: &BinaryOp, s: &BinaryOp, grid: &Grid) -> Result<TriState> {
    let existence = strong_existence(t, s, grid)?;
    if existence.fails() {
        return Ok(existence);
    }
    match analytic_shape(t, s) {
        Some(Shape::Singleton) => Ok(existence),
        Some(Shape::Wide(w)) => wide_witness(t, s, w),
        Some(Shape::Empty(w)) => empty_witness(t, s, w),
        Some(Shape::Sweep) | None => match sweep(t, s, grid)?.1 {
            Some(w) => wide_witness(t, s, w),
            None => Ok(TriState::UnknownSampled),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::BinaryOp;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12
    }

    #[test]
    fn lukasiewicz_one_interval() {
        let d = one_interval(&BinaryOp::lukasiewicz(Kind::Conorm), 0.3).unwrap();
        assert!(close(d.lower, 0.7) && d.upper == 1.0 && d.lower_closed && d.upper_closed);
    }

    #[test]
    fn max_one_interval_is_point() {
        let d = one_interval(&BinaryOp::max(), 0.5).unwrap();
        assert_eq!(d, DegreeInterval::point(1.0));
        assert_eq!(one_interval(&BinaryOp::max(), 1.0).unwrap(), DegreeInterval::unit());
    }

    #[test]
    fn drastic_one_interval_is_half_open() {
        let d = one_interval(&BinaryOp::drastic(Kind::Conorm), 0.5).unwrap();
        assert_eq!(d.to_string(), "(0, 1]");
        assert!(!d.contains(0.0) && d.contains(1e-9));
    }

    #[test]
    fn zero_intervals() {
        let d = zero_interval(&BinaryOp::lukasiewicz(Kind::Norm), 0.3).unwrap();
        assert!(d.lower == 0.0 && close(d.upper, 0.7));
        assert_eq!(
            zero_interval(&BinaryOp::min(), 0.4).unwrap(),
            DegreeInterval::point(0.0)
        );
        assert_eq!(
            zero_interval(&BinaryOp::drastic(Kind::Norm), 1.0).unwrap(),
            DegreeInterval::point(0.0)
        );
        assert_eq!(
            zero_interval(&BinaryOp::drastic(Kind::Norm), 0.5).unwrap().to_string(),
            "[0, 1)"
        );
    }

    #[test]
    fn wrong_kind_is_rejected() {
        assert!(one_interval(&BinaryOp::min(), 0.5).is_err());
        assert!(zero_interval(&BinaryOp::max(), 0.5).is_err());
    }

    #[test]
    fn numeric_matches_drastic_openness() {
        let d = one_interval_numeric(&BinaryOp::drastic(Kind::Conorm), 0.5);
        assert_eq!(d.to_string(), "(0, 1]");
        let d = zero_interval_numeric(&BinaryOp::drastic(Kind::Norm), 0.5);
        assert_eq!(d.to_string(), "[0, 1)");
    }

    #[test]
    fn numeric_matches_ss_closed_form() {
        let s = BinaryOp::schweizer_sklar(Kind::Conorm, 2.0);
        for k in 0..=10 {
            let w = k as f64 / 10.0;
            let a = one_interval(&s, w).unwrap();
            let b = one_interval_numeric(&s, w);
            assert!((a.lower - b.lower).abs() <= 1e-9, "w={w}: {a} vs {b}");
        }
    }

    #[test]
    fn intersection_rules() {
        let a = DegreeInterval::closed(0.5, 1.0);
        let b = DegreeInterval::new(0.0, 1.0, true, false);
        assert_eq!(a.intersect(&b).to_string(), "[0.5, 1)");
        assert!(DegreeInterval::point(1.0)
            .intersect(&DegreeInterval::point(0.0))
            .is_empty());
        assert!(DegreeInterval::new(0.3, 0.3, true, false).is_empty());
    }

    #[test]
    fn existence_examples() {
        let g = Grid::uniform(100);
        let tl = BinaryOp::lukasiewicz(Kind::Norm);
        let sl = BinaryOp::lukasiewicz(Kind::Conorm);
        assert!(strong_existence(&tl, &sl, &g).unwrap().holds());
        let v = strong_existence(&BinaryOp::min(), &BinaryOp::max(), &g).unwrap();
        assert_eq!(v.witness().unwrap().degrees, vec![0.5]);
        assert!(strong_existence(&BinaryOp::drastic(Kind::Norm), &sl, &g)
            .unwrap()
            .holds());
    }

    #[test]
    fn uniqueness_examples() {
        let g = Grid::uniform(100);
        let tl = BinaryOp::lukasiewicz(Kind::Norm);
        let sl = BinaryOp::lukasiewicz(Kind::Conorm);
        assert!(strong_uniqueness(&tl, &sl, &g).unwrap().holds());
        let v = strong_uniqueness(&BinaryOp::drastic(Kind::Norm), &sl, &g).unwrap();
        let d = &v.witness().unwrap().degrees;
        assert_eq!(d[0], 0.5);
        assert!(d[1] != d[2]);
        let both = divisor_intersection(&BinaryOp::drastic(Kind::Norm), &sl, 0.5).unwrap();
        assert!(both.contains(d[1]) && both.contains(d[2]));
        let t1 = BinaryOp::schweizer_sklar(Kind::Norm, 1.0);
        let s1 = BinaryOp::schweizer_sklar(Kind::Conorm, 1.0);
        assert!(strong_uniqueness(&t1, &s1, &g).unwrap().holds());
    }

    #[test]
    fn endpoints_always_present() {
        let ops = [
            BinaryOp::max(),
            BinaryOp::probabilistic_sum(),
            BinaryOp::lukasiewicz(Kind::Conorm),
            BinaryOp::drastic(Kind::Conorm),
            BinaryOp::schweizer_sklar(Kind::Conorm, 0.5),
        ];
        for s in &ops {
            for k in 0..=20 {
                let w = k as f64 / 20.0;
                assert!(one_interval(s, w).unwrap().contains(1.0));
                assert!(zero_interval(&s.dual().unwrap(), w).unwrap().contains(0.0));
            }
        }
    }
}

//! Residual operator, canonical decompositions, verification and a
//! brute-force enumerator of decompositions on a degree grid.

use std::fmt;
use std::str::FromStr;

use crate::divisors::strong_existence;
use crate::error::{Error, Result};
use crate::ops::{check_first_coordinate_continuity, BinaryOp, Kind, Regime};
use crate::relation::FuzzyRelation;
use crate::verdict::{TriState, Witness};
use crate::EPS;

const BISECTION_STEPS: usize = 60;

/// Largest number of candidate decompositions `enumerate_decompositions` will build.
pub const ENUMERATION_LIMIT: u128 = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Strong,
    Weak,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Strong => "strong",
            Mode::Weak => "weak",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "strong" => Ok(Mode::Strong),
            "weak" => Ok(Mode::Weak),
            other => Err(Error::Precondition(format!(
                "mode must be `strong` or `weak`, got `{other}`"
            ))),
        }
    }
}

/// Value of `i ↘_S r = inf{t : S(t,i) ≥ r}` and whether the infimum reconstructs `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    pub value: f64,
    pub attained: bool,
}

impl Residual {
    fn exact(value: f64) -> Self {
        Residual { value, attained: true }
    }
}

/// `inf{t ∈ [0,1] : S(t,i) ≥ r}`. Closed forms for built-in conorms,
/// bisection otherwise. An empty set yields `1`, flagged unattained.
pub fn residual(s: &BinaryOp, i: f64, r: f64) -> Residual {
    if i >= r {
        return Residual::exact(0.0);
    }
    match s.regime() {
        Regime::Min => Residual::exact(r),
        Regime::Lukasiewicz => Residual::exact((r - i).max(0.0)),
        Regime::Product => Residual::exact((r - i) / (1.0 - i)),
        Regime::Drastic => {
            if i == 0.0 {
                Residual::exact(r)
            } else {
                Residual {
                    value: 0.0,
                    attained: false,
                }
            }
        }
        Regime::OrdinalSum => {
            if r <= 0.5 {
                Residual::exact(r - i)
            } else {
                Residual::exact(r)
            }
        }
        _ => residual_bisection(s, i, r),
    }
}

/// The residual by bisection alone, for any conorm.
pub fn residual_bisection(s: &BinaryOp, i: f64, r: f64) -> Residual {
    let reaches = |t: f64| s.eval(t, i) >= r;
    if reaches(0.0) {
        return Residual::exact(0.0);
    }
    if !reaches(1.0) {
        return Residual {
            value: 1.0,
            attained: false,
        };
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if reaches(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let snapped = (hi * 1e12).round() / 1e12;
    let value = if snapped >= lo && snapped <= hi { snapped } else { hi };
    Residual {
        value,
        attained: s.eval(value, i) >= r - EPS,
    }
}

/// A pair `(P, I)` together with the operators it was built for.
#[derive(Debug, Clone)]
pub struct Decomposition {
    strict: FuzzyRelation,
    indifference: FuzzyRelation,
    conorm: BinaryOp,
    norm: Option<BinaryOp>,
    mode: Mode,
}

impl Decomposition {
    /// Checks that `P` is asymmetric, `I` symmetric, and that strong mode has a norm.
    pub fn new(
        strict: FuzzyRelation,
        indifference: FuzzyRelation,
        conorm: BinaryOp,
        norm: Option<BinaryOp>,
        mode: Mode,
    ) -> Result<Self> {
        strict.require_same_universe(&indifference)?;
        conorm.expect_kind(Kind::Conorm)?;
        if let Some(t) = &norm {
            t.expect_kind(Kind::Norm)?;
        }
        if !strict.is_asymmetric() {
            return Err(Error::Precondition("strict part must be asymmetric".into()));
        }
        if !indifference.is_symmetric() {
            return Err(Error::Precondition("indifference part must be symmetric".into()));
        }
        if mode == Mode::Strong && norm.is_none() {
            return Err(Error::Precondition("strong decompositions need a t-norm".into()));
        }
        Ok(Decomposition {
            strict,
            indifference,
            conorm,
            norm,
            mode,
        })
    }

    pub fn strict(&self) -> &FuzzyRelation {
        &self.strict
    }

    pub fn indifference(&self) -> &FuzzyRelation {
        &self.indifference
    }

    pub fn conorm(&self) -> &BinaryOp {
        &self.conorm
    }

    pub fn norm(&self) -> Option<&BinaryOp> {
        self.norm.as_ref()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// `S(P, I)` pointwise.
    pub fn reconstruct(&self) -> FuzzyRelation {
        self.strict
            .combine(&self.indifference, &self.conorm)
            .expect("parts share a universe")
    }
}

/// `I = min(R, Rᵗ)`.
pub fn min_indifference(r: &FuzzyRelation) -> FuzzyRelation {
    FuzzyRelation::from_fn(r.labels().to_vec(), |i, j| r.get(i, j).min(r.get(j, i)))
}

/// `I = min(R, Rᵗ)`, `P = I ↘_S R`.
///
/// Refuses conorms that are not continuous in the first coordinate, and any
/// pair whose residual infimum does not reconstruct `R`.
pub fn canonical_decompose(r: &FuzzyRelation, s: &BinaryOp) -> Result<Decomposition> {
    s.expect_kind(Kind::Conorm)?;
    if let TriState::Fails(w) = check_first_coordinate_continuity(s, 1000) {
        let (t, x) = (
            w.degrees.first().copied().unwrap_or(0.0),
            w.degrees.get(1).copied().unwrap_or(0.0),
        );
        return Err(Error::Discontinuous { op: s.spec(), t, w: x });
    }
    let indifference = min_indifference(r);
    let n = r.size();
    let mut strict = FuzzyRelation::zeros(r.labels().to_vec());
    for x in 0..n {
        for y in 0..n {
            let (i, target) = (indifference.get(x, y), r.get(x, y));
            let res = residual(s, i, target);
            if !res.attained {
                return Err(Error::Unattained {
                    row: x + 1,
                    column: y + 1,
                    target,
                });
            }
            if (s.eval(res.value, i) - target).abs() > EPS {
                return Err(Error::Discontinuous {
                    op: s.spec(),
                    t: res.value,
                    w: i,
                });
            }
            strict.set(x, y, res.value)?;
        }
    }
    Decomposition::new(strict, indifference, s.clone(), None, Mode::Weak)
}

/// Canonical decomposition certified as strong for `(T, S)`.
pub fn strong_decompose(r: &FuzzyRelation, t: &BinaryOp, s: &BinaryOp) -> Result<Decomposition> {
    t.expect_kind(Kind::Norm)?;
    let existence = strong_existence(t, s, &s.default_grid())?;
    if let TriState::Fails(w) = existence {
        return Err(Error::NoStrongDecomposition {
            norm: t.spec(),
            conorm: s.spec(),
            reason: w.to_string(),
        });
    }
    let weak = canonical_decompose(r, s)?;
    let d = Decomposition::new(
        weak.strict,
        weak.indifference,
        weak.conorm,
        Some(t.clone()),
        Mode::Strong,
    )?;
    match verify_strong(r, &d, t)? {
        TriState::Fails(w) => Err(Error::Internal(format!("canonical decomposition is not strong: {w}"))),
        _ => Ok(d),
    }
}

fn structural_checks(r: &FuzzyRelation, d: &Decomposition) -> Result<Option<TriState>> {
    r.require_same_universe(&d.strict)?;
    r.require_same_universe(&d.indifference)?;
    let n = r.size();
    let (p, i) = (&d.strict, &d.indifference);
    for x in 0..n {
        for y in 0..n {
            if p.get(x, y) > 0.0 && p.get(y, x) > 0.0 {
                return Ok(Some(TriState::Fails(Witness::elements(
                    vec![x, y],
                    format!(
                        "P({x},{y}) = {} and P({y},{x}) = {} are both positive",
                        p.get(x, y),
                        p.get(y, x)
                    ),
                ))));
            }
            if i.get(x, y) != i.get(y, x) {
                return Ok(Some(TriState::Fails(Witness::elements(
                    vec![x, y],
                    format!("I({x},{y}) = {} differs from I({y},{x}) = {}", i.get(x, y), i.get(y, x)),
                ))));
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            let rebuilt = d.conorm.eval(p.get(x, y), i.get(x, y));
            if (rebuilt - r.get(x, y)).abs() > EPS {
                return Ok(Some(TriState::Fails(Witness::elements(
                    vec![x, y],
                    format!(
                        "S(P({x},{y}), I({x},{y})) = S({}, {}) = {rebuilt} but R({x},{y}) = {}",
                        p.get(x, y),
                        i.get(x, y),
                        r.get(x, y)
                    ),
                ))));
            }
        }
    }
    Ok(None)
}

/// `P` asymmetric, `I` symmetric, `S(P,I) = R` and `T(P,I) = 0`.
pub fn verify_strong(r: &FuzzyRelation, d: &Decomposition, t: &BinaryOp) -> Result<TriState> {
    t.expect_kind(Kind::Norm)?;
    if let Some(failure) = structural_checks(r, d)? {
        return Ok(failure);
    }
    let (p, i) = (&d.strict, &d.indifference);
    for (x, y) in r.pairs() {
        let v = t.eval(p.get(x, y), i.get(x, y));
        if v > EPS {
            return Ok(TriState::Fails(Witness::elements(
                vec![x, y],
                format!("T({}, {}) = {v} ≠ 0", p.get(x, y), i.get(x, y)),
            )));
        }
    }
    Ok(TriState::Holds)
}

/// `P` asymmetric, `I` symmetric, `S(P,I) = R` and `I = 1 ⇒ P = 0`.
pub fn verify_weak(r: &FuzzyRelation, d: &Decomposition) -> Result<TriState> {
    if let Some(failure) = structural_checks(r, d)? {
        return Ok(failure);
    }
    let (p, i) = (&d.strict, &d.indifference);
    for (x, y) in r.pairs() {
        if i.get(x, y) == 1.0 && p.get(x, y) != 0.0 {
            return Ok(TriState::Fails(Witness::elements(
                vec![x, y],
                format!("I({x},{y}) = 1 but P({x},{y}) = {}", p.get(x, y)),
            )));
        }
    }
    Ok(TriState::Holds)
}

/// Every decomposition with `I = min(R, Rᵗ)` and `P` on the grid of step
/// `grid_step` that passes the weak check (and `T(P,I) = 0` when `t` is given).
///
/// Results are sorted lexicographically by the row-major `P` matrix.
pub fn enumerate_decompositions(
    r: &FuzzyRelation,
    s: &BinaryOp,
    t: Option<&BinaryOp>,
    grid_step: f64,
) -> Result<Vec<Decomposition>> {
    s.expect_kind(Kind::Conorm)?;
    if let Some(t) = t {
        t.expect_kind(Kind::Norm)?;
    }
    if !(0.01 - 1e-12..=1.0).contains(&grid_step) {
        return Err(Error::Precondition(format!(
            "grid step {grid_step} must lie in [0.01, 1]"
        )));
    }
    let divisions = (1.0 / grid_step).round() as usize;
    let values: Vec<f64> = (0..=divisions).map(|k| k as f64 / divisions as f64).collect();
    let indifference = min_indifference(r);
    let n = r.size();

    let admissible = |x: usize, y: usize, p: f64| {
        let i = indifference.get(x, y);
        (s.eval(p, i) - r.get(x, y)).abs() <= EPS && !(i == 1.0 && p != 0.0) && t.is_none_or(|t| t.eval(p, i) <= EPS)
    };

    let mut pairs = Vec::new();
    let mut per_pair: Vec<Vec<(f64, f64)>> = Vec::new();
    let mut total: u128 = 1;
    for x in 0..n {
        if !admissible(x, x, 0.0) {
            return Ok(Vec::new());
        }
        for y in x + 1..n {
            let mut options = Vec::new();
            if admissible(x, y, 0.0) && admissible(y, x, 0.0) {
                options.push((0.0, 0.0));
            }
            for &c in values.iter().skip(1) {
                if admissible(x, y, c) && admissible(y, x, 0.0) {
                    options.push((c, 0.0));
                }
                if admissible(x, y, 0.0) && admissible(y, x, c) {
                    options.push((0.0, c));
                }
            }
            total = total.saturating_mul(options.len() as u128);
            if total > ENUMERATION_LIMIT {
                return Err(Error::TooLarge {
                    candidates: total,
                    limit: ENUMERATION_LIMIT,
                });
            }
            pairs.push((x, y));
            per_pair.push(options);
        }
    }
    if per_pair.iter().any(Vec::is_empty) {
        return Ok(Vec::new());
    }

    let mode = if t.is_some() { Mode::Strong } else { Mode::Weak };
    let mut out = Vec::with_capacity(total as usize);
    let mut choice = vec![0usize; pairs.len()];
    loop {
        let mut p = FuzzyRelation::zeros(r.labels().to_vec());
        for (k, &(x, y)) in pairs.iter().enumerate() {
            let (a, b) = per_pair[k][choice[k]];
            p.set(x, y, a)?;
            p.set(y, x, b)?;
        }
        out.push(Decomposition::new(
            p,
            indifference.clone(),
            s.clone(),
            t.cloned(),
            mode,
        )?);
        // odometer increment
        let mut k = pairs.len();
        loop {
            if k == 0 {
                out.sort_by(|a, b| lexicographic(a.strict.degrees(), b.strict.degrees()));
                return Ok(out);
            }
            k -= 1;
            choice[k] += 1;
            if choice[k] < per_pair[k].len() {
                break;
            }
            choice[k] = 0;
        }
    }
}

fn lexicographic(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

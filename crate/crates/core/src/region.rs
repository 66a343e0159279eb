//! Sets of value pairs `(R(x,y), R(y,x))` that admit a decomposition,
//! rasterised on a square grid, and restricted-domain checks built on them.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::decompose::{canonical_decompose, residual, verify_weak};
use crate::divisors::divisor_intersection;
use crate::error::{Error, Result};
use crate::grid::{random_relation, SampleSpec};
use crate::ops::{check_first_coordinate_continuity, BinaryOp, Kind};
use crate::relation::FuzzyRelation;
use crate::verdict::{TriState, Witness};
use crate::EPS;

pub const MAX_DIVISIONS: usize = 2000;

/// Membership of the grid points `(j/n, k/n)` in a decomposability region.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionGrid {
    divisions: usize,
    membership: Vec<bool>,
}

impl RegionGrid {
    fn build(divisions: usize, member: impl Fn(f64, f64) -> bool + Sync) -> Result<Self> {
        if divisions == 0 || divisions > MAX_DIVISIONS {
            return Err(Error::Precondition(format!(
                "resolution must be between 1 and {MAX_DIVISIONS} divisions, got {divisions}"
            )));
        }
        let side = divisions + 1;
        let membership = (0..side * side)
            .into_par_iter()
            .map(|k| {
                let (a, b) = (k / side, k % side);
                member(a as f64 / divisions as f64, b as f64 / divisions as f64)
            })
            .collect();
        Ok(RegionGrid { divisions, membership })
    }

    pub fn divisions(&self) -> usize {
        self.divisions
    }

    /// Grid step `1/n`.
    pub fn resolution(&self) -> f64 {
        1.0 / self.divisions as f64
    }

    /// Points per side, `n + 1`.
    pub fn side(&self) -> usize {
        self.divisions + 1
    }

    pub fn value(&self, index: usize) -> f64 {
        index as f64 / self.divisions as f64
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.membership[a * self.side() + b]
    }

    /// `(a_index, b_index, member)` in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, bool)> + '_ {
        let side = self.side();
        self.membership
            .iter()
            .enumerate()
            .map(move |(k, &m)| (k / side, k % side, m))
    }

    pub fn count(&self) -> usize {
        self.membership.iter().filter(|&&m| m).count()
    }

    pub fn is_full(&self) -> bool {
        self.membership.iter().all(|&m| m)
    }

    /// Every member of `self` is a member of `other`.
    pub fn is_subset_of(&self, other: &RegionGrid) -> bool {
        self.divisions == other.divisions && self.membership.iter().zip(&other.membership).all(|(&a, &b)| !a || b)
    }

    /// `a,b,member` rows after a header, member written as 0 or 1.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.membership.len() * 16);
        out.push_str("a,b,member\n");
        for (a, b, m) in self.cells() {
            let _ = writeln!(out, "{},{},{}", self.value(a), self.value(b), u8::from(m));
        }
        out
    }
}

/// `R(x,y) = a`, `R(y,x) = b` has a weak decomposition: some `t` gives
/// `S(t, min) = max`, with `t = 0` forced when `min = 1`.
pub fn weak_member(s: &BinaryOp, a: f64, b: f64) -> bool {
    let (i, r) = (a.min(b), a.max(b));
    if i == r || r == 1.0 {
        return true;
    }
    reconstructing_value(s, i, r).is_some()
}

/// Smallest `t` found with `S(t,i) = r` within `EPS`.
fn reconstructing_value(s: &BinaryOp, i: f64, r: f64) -> Option<f64> {
    let res = residual(s, i, r);
    if (s.eval(res.value, i) - r).abs() <= EPS {
        return Some(res.value);
    }
    // the infimum may be missed while points just above it reconstruct r
    let probe = res.value + 1e-12;
    ((s.eval(probe, i) - r).abs() <= EPS).then_some(probe)
}

/// `R(x,y) = a`, `R(y,x) = b` has a strong decomposition: some `t` gives
/// `S(t, min) = max` and `T(t, min) = 0`.
pub fn strong_member(t: &BinaryOp, s: &BinaryOp, a: f64, b: f64) -> bool {
    let (i, r) = (a.min(b), a.max(b));
    if i == r {
        return true;
    }
    if r == 1.0 {
        return divisor_intersection(t, s, i).is_ok_and(|d| !d.is_empty());
    }
    reconstructing_value(s, i, r).is_some_and(|v| t.eval(v, i) <= EPS)
}

/// Weak decomposability region of `S` on an `n × n` grid.
pub fn weak_region(s: &BinaryOp, divisions: usize) -> Result<RegionGrid> {
    s.expect_kind(Kind::Conorm)?;
    RegionGrid::build(divisions, |a, b| weak_member(s, a, b))
}

/// Strong decomposability region of `(T, S)` on an `n × n` grid.
pub fn strong_region(t: &BinaryOp, s: &BinaryOp, divisions: usize) -> Result<RegionGrid> {
    t.expect_kind(Kind::Norm)?;
    s.expect_kind(Kind::Conorm)?;
    RegionGrid::build(divisions, |a, b| strong_member(t, s, a, b))
}

/// Every grid cell with `S′(a,b) = 1` lies in the (weak or strong) region.
pub fn restricted_decomposability(
    s_prime: &BinaryOp,
    s: &BinaryOp,
    t: Option<&BinaryOp>,
    divisions: usize,
) -> Result<TriState> {
    s_prime.expect_kind(Kind::Conorm)?;
    let region = match t {
        Some(t) => strong_region(t, s, divisions)?,
        None => weak_region(s, divisions)?,
    };
    for (ia, ib, member) in region.cells() {
        let (a, b) = (region.value(ia), region.value(ib));
        if s_prime.eval(a, b) >= 1.0 - EPS && !member {
            return Ok(TriState::Fails(Witness::degrees(
                vec![a, b],
                format!("S′({a}, {b}) = 1 but the pair is not decomposable"),
            )));
        }
    }
    Ok(TriState::Holds)
}

fn relation_decomposes(s: &BinaryOp, r: &FuzzyRelation) -> bool {
    r.pairs().all(|(x, y)| weak_member(s, r.get(x, y), r.get(y, x)))
}

/// Restricting to `T′`-transitive relations leaves the weak decomposability
/// verdict of `S` unchanged. Sampled, so a pass is `UnknownSampled`.
pub fn transitivity_preserves_verdict(t_prime: &BinaryOp, s: &BinaryOp, spec: &SampleSpec) -> Result<TriState> {
    t_prime.expect_kind(Kind::Norm)?;
    s.expect_kind(Kind::Conorm)?;
    let all_decompose = check_first_coordinate_continuity(s, 1000).not_refuted();

    let mut rng = spec.rng();
    for k in 0..spec.count {
        let r = random_relation(&mut rng, spec.size, spec.levels).t_transitive_closure(t_prime)?;
        if !r.is_t_transitive(t_prime)? {
            return Err(Error::Internal(format!("closure of sample {k} is not transitive")));
        }
        if all_decompose {
            let ok = canonical_decompose(&r, s)
                .and_then(|d| verify_weak(&r, &d))
                .is_ok_and(|v| v.not_refuted());
            if !ok || !relation_decomposes(s, &r) {
                return Ok(TriState::Fails(Witness::degrees(
                    r.degrees().to_vec(),
                    format!("sample {k} is {}-transitive but does not decompose", t_prime.spec()),
                )));
            }
        }
    }

    if !all_decompose {
        // reflexive two-element relations are transitive for every t-norm
        let region = weak_region(s, 100)?;
        let Some((a, b)) = region
            .cells()
            .find(|&(_, _, m)| !m)
            .map(|(a, b, _)| (region.value(a), region.value(b)))
        else {
            return Ok(TriState::Fails(Witness::degrees(
                Vec::new(),
                "conorm is discontinuous but no non-decomposable pair was found".to_string(),
            )));
        };
        let r = FuzzyRelation::from_rows(vec![vec![1.0, a], vec![b, 1.0]])?;
        if !r.is_t_transitive(t_prime)? || relation_decomposes(s, &r) {
            return Ok(TriState::Fails(Witness::degrees(
                vec![a, b],
                "expected a transitive relation without decomposition".to_string(),
            )));
        }
    }
    Ok(TriState::UnknownSampled)
}

//! Fuzzy preference triplets, the FP1–FP6 audit and decomposition rules.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decompose::{
    canonical_decompose, min_indifference, strong_decompose, verify_strong, verify_weak, Decomposition, Mode,
};
use crate::divisors::{strong_existence, strong_uniqueness};
use crate::error::{Error, Result};
use crate::grid::SampleSpec;
use crate::ops::{
    check_collapse_implies_absorption, check_first_coordinate_continuity, collapse_witness_sweep, BinaryOp, Family,
    Kind, Regime,
};
use crate::relation::FuzzyRelation;
use crate::verdict::{TriState, Witness};
use crate::EPS;

/// Universes up to this size get an exhaustive FP6 check.
pub const FP6_EXHAUSTIVE_MAX: usize = 6;
/// Number of random quadruples drawn for FP6 on larger universes.
pub const FP6_SAMPLES: usize = 100_000;
/// Seed of the FP6 sampler used by `audit_fp`.
pub const FP6_SEED: u64 = 0xf6f6;

/// A weak preference `R` with a candidate strict part `P` and indifference `I`.
#[derive(Debug, Clone, PartialEq)]
pub struct PreferenceTriplet {
    pub weak: FuzzyRelation,
    pub strict: FuzzyRelation,
    pub indifference: FuzzyRelation,
}

impl PreferenceTriplet {
    pub fn new(weak: FuzzyRelation, strict: FuzzyRelation, indifference: FuzzyRelation) -> Result<Self> {
        weak.require_same_universe(&strict)?;
        weak.require_same_universe(&indifference)?;
        Ok(PreferenceTriplet {
            weak,
            strict,
            indifference,
        })
    }

    pub fn from_decomposition(weak: &FuzzyRelation, d: &Decomposition) -> Result<Self> {
        Self::new(weak.clone(), d.strict().clone(), d.indifference().clone())
    }
}

/// Outcome of the six preference axioms; `None` means the axiom passed.
#[derive(Debug, Clone, PartialEq)]
pub struct FpReport {
    results: [Option<Witness>; 6],
    fp6_sampled: bool,
}

impl FpReport {
    /// Witness for axiom `k` (1-based), `None` when it passed.
    pub fn failure(&self, k: usize) -> Option<&Witness> {
        self.results[k - 1].as_ref()
    }

    pub fn passes(&self, k: usize) -> bool {
        self.results[k - 1].is_none()
    }

    /// Axiom numbers that failed.
    pub fn failed(&self) -> Vec<usize> {
        (1..=6).filter(|&k| !self.passes(k)).collect()
    }

    pub fn overall(&self) -> bool {
        self.results.iter().all(Option::is_none)
    }

    /// FP6 was checked on random quadruples instead of exhaustively.
    pub fn fp6_sampled(&self) -> bool {
        self.fp6_sampled
    }
}

impl fmt::Display for FpReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, r) in self.results.iter().enumerate() {
            match r {
                None => writeln!(f, "FP{} pass", k + 1)?,
                Some(w) => writeln!(f, "FP{} fail: {w}", k + 1)?,
            }
        }
        if self.fp6_sampled {
            writeln!(f, "(FP6 checked on {FP6_SAMPLES} random quadruples)")?;
        }
        write!(f, "overall: {}", if self.overall() { "pass" } else { "fail" })
    }
}

/// Evaluates FP1–FP6. Strict inequalities and zero tests are exact, `≤` and
/// equalities allow `EPS`. The witness of each axiom is the first failing
/// tuple in lexicographic order.
pub fn audit_fp(t: &PreferenceTriplet) -> Result<FpReport> {
    audit_fp_seeded(t, FP6_SEED)
}

/// `audit_fp` with an explicit seed for the FP6 sampler on large universes.
pub fn audit_fp_seeded(t: &PreferenceTriplet, seed: u64) -> Result<FpReport> {
    t.weak.require_same_universe(&t.strict)?;
    t.weak.require_same_universe(&t.indifference)?;
    let (r, p, i) = (&t.weak, &t.strict, &t.indifference);
    let pairs: Vec<(usize, usize)> = r.pairs().collect();
    let first = |test: &dyn Fn(usize, usize) -> Option<String>| {
        pairs
            .iter()
            .find_map(|&(x, y)| test(x, y).map(|reason| Witness::elements(vec![x, y], reason)))
    };

    let fp1 = first(&|x, y| {
        (p.get(x, y) > 0.0 && p.get(y, x) != 0.0)
            .then(|| format!("P({x},{y}) = {} > 0 but P({y},{x}) = {}", p.get(x, y), p.get(y, x)))
    });
    let fp2 = first(&|x, y| {
        ((i.get(x, y) - i.get(y, x)).abs() > EPS)
            .then(|| format!("I({x},{y}) = {} but I({y},{x}) = {}", i.get(x, y), i.get(y, x)))
    });
    let fp3 = first(&|x, y| {
        (p.get(x, y) > r.get(x, y) + EPS)
            .then(|| format!("P({x},{y}) = {} > R({x},{y}) = {}", p.get(x, y), r.get(x, y)))
    });
    let fp4 = first(&|x, y| {
        let dominates = r.get(x, y) > r.get(y, x);
        let positive = p.get(x, y) > 0.0;
        (dominates != positive).then(|| {
            if dominates {
                format!(
                    "R({x},{y}) = {} > R({y},{x}) = {} but P({x},{y}) = 0",
                    r.get(x, y),
                    r.get(y, x)
                )
            } else {
                format!(
                    "P({x},{y}) = {} > 0 but R({x},{y}) = {} is not above R({y},{x}) = {}",
                    p.get(x, y),
                    r.get(x, y),
                    r.get(y, x)
                )
            }
        })
    });
    let fp5 = first(&|x, y| {
        (p.get(x, y) == 0.0 && (r.get(x, y) - i.get(x, y)).abs() > EPS).then(|| {
            format!(
                "P({x},{y}) = 0 but R({x},{y}) = {} ≠ I({x},{y}) = {}",
                r.get(x, y),
                i.get(x, y)
            )
        })
    });

    let fp6_fails = |a: (usize, usize), b: (usize, usize)| {
        i.get(a.0, a.1) <= i.get(b.0, b.1)
            && p.get(a.0, a.1) <= p.get(b.0, b.1)
            && r.get(a.0, a.1) > r.get(b.0, b.1) + EPS
    };
    let fp6_witness = |a: (usize, usize), b: (usize, usize)| {
        Witness::elements(
            vec![a.0, a.1, b.0, b.1],
            format!(
                "I and P at ({},{}) are below those at ({},{}) but R({},{}) = {} > R({},{}) = {}",
                a.0,
                a.1,
                b.0,
                b.1,
                a.0,
                a.1,
                r.get(a.0, a.1),
                b.0,
                b.1,
                r.get(b.0, b.1)
            ),
        )
    };
    let sampled = r.size() > FP6_EXHAUSTIVE_MAX;
    let fp6 = if !sampled {
        pairs
            .iter()
            .flat_map(|&a| pairs.iter().map(move |&b| (a, b)))
            .find(|&(a, b)| fp6_fails(a, b))
            .map(|(a, b)| fp6_witness(a, b))
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut best: Option<((usize, usize), (usize, usize))> = None;
        for _ in 0..FP6_SAMPLES {
            let a = pairs[rng.gen_range(0..pairs.len())];
            let b = pairs[rng.gen_range(0..pairs.len())];
            if fp6_fails(a, b) && best.is_none_or(|c| (a, b) < c) {
                best = Some((a, b));
            }
        }
        best.map(|(a, b)| fp6_witness(a, b))
    };

    Ok(FpReport {
        results: [fp1, fp2, fp3, fp4, fp5, fp6],
        fp6_sampled: sampled,
    })
}

/// The canonical decomposition rule of a conorm (weak) or of a `(T, S)` pair (strong).
#[derive(Debug, Clone)]
pub struct DecompositionRule {
    conorm: BinaryOp,
    norm: Option<BinaryOp>,
}

impl DecompositionRule {
    pub fn mode(&self) -> Mode {
        if self.norm.is_some() {
            Mode::Strong
        } else {
            Mode::Weak
        }
    }

    pub fn conorm(&self) -> &BinaryOp {
        &self.conorm
    }

    pub fn norm(&self) -> Option<&BinaryOp> {
        self.norm.as_ref()
    }

    pub fn apply(&self, r: &FuzzyRelation) -> Result<Decomposition> {
        match &self.norm {
            Some(t) => strong_decompose(r, t, &self.conorm),
            None => canonical_decompose(r, &self.conorm),
        }
    }
}

/// Builds the canonical rule; fails for conorms with a first-coordinate jump.
pub fn make_rule(s: &BinaryOp, t: Option<&BinaryOp>) -> Result<DecompositionRule> {
    s.expect_kind(Kind::Conorm)?;
    if let Some(t) = t {
        t.expect_kind(Kind::Norm)?;
    }
    if let TriState::Fails(w) = check_first_coordinate_continuity(s, 1000) {
        return Err(Error::Discontinuous {
            op: s.spec(),
            t: w.degrees.first().copied().unwrap_or(0.0),
            w: w.degrees.get(1).copied().unwrap_or(0.0),
        });
    }
    Ok(DecompositionRule {
        conorm: s.clone(),
        norm: t.cloned(),
    })
}

/// `x ≻ y` with degree `R(x,y)` on strict dominance and on ties below 1.
/// Ties are assigned to the pair with the smaller first index so that `P`
/// stays asymmetric. This rule satisfies every axiom except the converse of FP4.
pub fn tie_split_rule(r: &FuzzyRelation) -> Result<Decomposition> {
    let strict = FuzzyRelation::from_fn(r.labels().to_vec(), |x, y| {
        let (a, b) = (r.get(x, y), r.get(y, x));
        if a > b || (x < y && a == b && a < 1.0) {
            a
        } else {
            0.0
        }
    });
    Decomposition::new(strict, min_indifference(r), BinaryOp::max(), None, Mode::Weak)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleVerdict {
    /// Some relation has no decomposition, or the canonical one is not a preference.
    NotCompatible,
    /// A compatible rule exists but several decompositions are preferences.
    Compatible,
    /// The decomposition is the only one that forms a preference.
    Induced,
    /// Not settled by the available results.
    Undetermined,
}

impl RuleVerdict {
    pub fn symbol(self) -> &'static str {
        match self {
            RuleVerdict::NotCompatible => "∄",
            RuleVerdict::Compatible => "∃CR",
            RuleVerdict::Induced => "IDR",
            RuleVerdict::Undetermined => "?",
        }
    }
}

impl fmt::Display for RuleVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RuleVerdict::NotCompatible => "not compatible",
            RuleVerdict::Compatible => "compatible rule exists",
            RuleVerdict::Induced => "induced rule",
            RuleVerdict::Undetermined => "undetermined",
        })
    }
}

/// Verdict of `classify_rule` with its supporting evidence.
#[derive(Debug, Clone)]
pub struct Classification {
    pub verdict: RuleVerdict,
    pub witness: Option<Witness>,
    pub notes: Vec<String>,
    /// For open cells: what the computation would say, never authoritative.
    pub speculative: Option<RuleVerdict>,
}

impl Classification {
    fn new(verdict: RuleVerdict, witness: Option<Witness>, note: impl Into<String>) -> Self {
        Classification {
            verdict,
            witness,
            notes: vec![note.into()],
            speculative: None,
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.verdict)?;
        for n in &self.notes {
            write!(f, "\n  {n}")?;
        }
        if let Some(w) = &self.witness {
            write!(f, "\n  witness: {w}")?;
        }
        Ok(())
    }
}

fn ss_positive(op: &BinaryOp) -> Option<f64> {
    match op.regime() {
        Regime::SsPositive(l) if op.family() == Family::SchweizerSklar => Some(l),
        _ => None,
    }
}

/// Pairs for which no result settles the existence of an induced rule.
///
/// * drastic norm with Schweizer–Sklar conorm, `0 < λ < ∞`
/// * Łukasiewicz norm with Schweizer–Sklar conorm, `0 < λ < ∞`
/// * Schweizer–Sklar norm and conorm with the same `1 ≤ λ < ∞`
/// * weak mode with Schweizer–Sklar conorm, `0 < λ < ∞`
pub fn is_open_case(s: &BinaryOp, t: Option<&BinaryOp>) -> bool {
    let Some(ls) = ss_positive(s) else {
        return false;
    };
    match t {
        None => true,
        Some(t) => match t.regime() {
            Regime::Drastic | Regime::Lukasiewicz => true,
            _ => ss_positive(t).is_some_and(|lt| lt == ls && lt >= 1.0),
        },
    }
}

/// Classifies the canonical rule of `S` (weak) or `(T, S)` (strong).
///
/// Existence is decided by first-coordinate continuity (weak) or the divisor
/// intersection test (strong). Canonical outputs on sampled relations must
/// pass the preference audit. A rule that passes is induced when no collapse
/// `S(t,w) = S(s,w) > w` exists (restricted to `T(t,w) = T(s,w) = 0` in strong
/// mode); otherwise a two-decomposition counterexample is built and checked.
pub fn classify_rule(s: &BinaryOp, t: Option<&BinaryOp>, spec: &SampleSpec) -> Result<Classification> {
    s.expect_kind(Kind::Conorm)?;
    if let Some(t) = t {
        t.expect_kind(Kind::Norm)?;
    }
    let computed = classify_computed(s, t, spec)?;
    if is_open_case(s, t) {
        let mut c = Classification::new(
            RuleVerdict::Undetermined,
            None,
            "open case: no known result decides this pair",
        );
        c.speculative = Some(computed.verdict);
        c.notes.push(format!(
            "non-authoritative oracle evidence: {} ({})",
            computed.verdict,
            computed.notes.join("; ")
        ));
        return Ok(c);
    }
    Ok(computed)
}

fn classify_computed(s: &BinaryOp, t: Option<&BinaryOp>, spec: &SampleSpec) -> Result<Classification> {
    let grid = s.default_grid();
    let existence = match t {
        None => check_first_coordinate_continuity(s, 1000),
        Some(t) => strong_existence(t, s, &grid)?,
    };
    if let TriState::Fails(w) = existence {
        return Ok(Classification::new(
            RuleVerdict::NotCompatible,
            Some(w),
            "some relations admit no decomposition",
        ));
    }

    let rule = make_rule(s, t)?;
    for (k, r) in spec.relations().iter().enumerate() {
        let d = match rule.apply(r) {
            Ok(d) => d,
            Err(Error::Unattained { row, column, .. }) => {
                return Ok(Classification::new(
                    RuleVerdict::NotCompatible,
                    Some(Witness::elements(
                        vec![row - 1, column - 1],
                        format!("sample {k}: residual not attained"),
                    )),
                    "canonical rule undefined on a sampled relation",
                ))
            }
            Err(e) => return Err(e),
        };
        let report = audit_fp(&PreferenceTriplet::from_decomposition(r, &d)?)?;
        if !report.overall() {
            let axiom = report.failed()[0];
            let mut w = report.failure(axiom).cloned().unwrap_or_default();
            w.reason = format!("sample {k}, FP{axiom}: {}", w.reason);
            return Ok(Classification::new(
                RuleVerdict::NotCompatible,
                Some(w),
                "canonical decomposition is not a preference",
            ));
        }
    }

    let collapse = match t {
        None => check_collapse_implies_absorption(s, 100)?,
        Some(t) => restricted_collapse(t, s)?,
    };
    match collapse {
        TriState::Holds => Ok(Classification::new(
            RuleVerdict::Induced,
            None,
            "no collapse S(t,w) = S(s,w) > w; the canonical decomposition is the only preference",
        )),
        TriState::UnknownSampled => Ok(Classification::new(
            RuleVerdict::Undetermined,
            None,
            "compatible on all samples, collapse condition only sampled",
        )),
        TriState::Fails(w) => {
            let (x, a, b) = (w.degrees[0], w.degrees[1], w.degrees[2]);
            let (r, d1, d2) = mj_counterexample(s, x, a, b)?;
            for d in [&d1, &d2] {
                let ok = match t {
                    None => verify_weak(&r, d)?,
                    Some(t) => verify_strong(&r, d, t)?,
                };
                let report = audit_fp(&PreferenceTriplet::from_decomposition(&r, d)?)?;
                if ok.fails() || !report.overall() {
                    return Err(Error::Internal(format!(
                        "collapse witness {w} does not give two preferences"
                    )));
                }
            }
            Ok(Classification::new(
                RuleVerdict::Compatible,
                Some(w),
                "two distinct decompositions of the same relation are preferences",
            ))
        }
    }
}

/// Collapse `S(t,w) = S(s,w) > w` with both `t, s ∈ D⁰_T(w)`.
fn restricted_collapse(t: &BinaryOp, s: &BinaryOp) -> Result<TriState> {
    if !t.is_custom() && !s.is_custom() {
        let unique = strong_uniqueness(t, s, &s.default_grid())?;
        if let TriState::Fails(w) = &unique {
            if w.degrees.len() == 3 {
                let (x, a, b) = (w.degrees[0], w.degrees[1], w.degrees[2]);
                return Ok(TriState::Fails(Witness::degrees(
                    vec![x, a, b],
                    format!("S({a}, {x}) = S({b}, {x}) = 1 with T({a}, {x}) = T({b}, {x}) = 0"),
                )));
            }
        }
        if unique.holds() {
            return Ok(TriState::Holds);
        }
    }
    let admit = |a: f64, w: f64| t.eval(a, w) <= EPS;
    Ok(match collapse_witness_sweep(s, 100, Some(&admit)) {
        Some((w, a, b)) => TriState::Fails(Witness::degrees(
            vec![w, a, b],
            format!("S({a}, {w}) = S({b}, {w}) > {w} with T vanishing at both"),
        )),
        None => TriState::UnknownSampled,
    })
}

/// Two-element relation `R(a,b) = S(t,w)`, `R(b,a) = w`, diagonal 1, with the
/// decompositions `P(a,b) = t` and `P′(a,b) = s` sharing `I = min(R, Rᵗ)`.
pub fn mj_counterexample(
    s_op: &BinaryOp,
    w: f64,
    t: f64,
    s: f64,
) -> Result<(FuzzyRelation, Decomposition, Decomposition)> {
    s_op.expect_kind(Kind::Conorm)?;
    let (vt, vs) = (s_op.eval(t, w), s_op.eval(s, w));
    if t == s || (vt - vs).abs() > EPS || vt <= w + EPS {
        return Err(Error::Precondition(format!(
            "(w, t, s) = ({w}, {t}, {s}) is not a collapse: S(t,w) = {vt}, S(s,w) = {vs}"
        )));
    }
    let labels = vec!["a".to_string(), "b".to_string()];
    let r = FuzzyRelation::new(labels.clone(), vec![vec![1.0, vt], vec![w, 1.0]])?;
    let i = min_indifference(&r);
    let part = |v: f64| FuzzyRelation::new(labels.clone(), vec![vec![0.0, v], vec![0.0, 0.0]]);
    let d1 = Decomposition::new(part(t)?, i.clone(), s_op.clone(), None, Mode::Weak)?;
    let d2 = Decomposition::new(part(s)?, i, s_op.clone(), None, Mode::Weak)?;
    Ok((r, d1, d2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triplet(r: &FuzzyRelation, d: &Decomposition) -> PreferenceTriplet {
        PreferenceTriplet::from_decomposition(r, d).unwrap()
    }

    #[test]
    fn probabilistic_canonical_passes() {
        let spec = SampleSpec {
            count: 100,
            ..SampleSpec::default()
        };
        for r in spec.relations() {
            let d = canonical_decompose(&r, &BinaryOp::probabilistic_sum()).unwrap();
            assert!(audit_fp(&triplet(&r, &d)).unwrap().overall());
        }
    }

    #[test]
    fn tie_split_fails_only_fp4() {
        let r = FuzzyRelation::from_rows(vec![vec![1.0, 0.5], vec![0.5, 1.0]]).unwrap();
        let d = tie_split_rule(&r).unwrap();
        assert!(verify_weak(&r, &d).unwrap().holds());
        let report = audit_fp(&triplet(&r, &d)).unwrap();
        assert_eq!(report.failed(), vec![4]);
        assert_eq!(report.failure(4).unwrap().elements, vec![0, 1]);
    }

    #[test]
    fn crisp_preorder_passes() {
        let r = FuzzyRelation::from_rows(vec![vec![1.0, 1.0, 1.0], vec![0.0, 1.0, 1.0], vec![0.0, 1.0, 1.0]]).unwrap();
        let (p, i) = r.crisp_decompose().unwrap();
        let t = PreferenceTriplet::new(r, p, i).unwrap();
        assert!(audit_fp(&t).unwrap().overall());
    }

    #[test]
    fn universe_mismatch() {
        let a = FuzzyRelation::from_rows(vec![vec![1.0; 2]; 2]).unwrap();
        let b = FuzzyRelation::new(vec!["p".into(), "q".into()], vec![vec![1.0; 2]; 2]).unwrap();
        assert!(matches!(
            PreferenceTriplet::new(a.clone(), b, a),
            Err(Error::UniverseMismatch)
        ));
    }

    #[test]
    fn rules_match_closed_forms() {
        let r = FuzzyRelation::from_rows(vec![vec![1.0, 0.9], vec![0.4, 1.0]]).unwrap();
        let p = |s: BinaryOp| make_rule(&s, None).unwrap().apply(&r).unwrap().strict().get(0, 1);
        assert_eq!(p(BinaryOp::max()), 0.9);
        assert!((p(BinaryOp::probabilistic_sum()) - 0.5 / 0.6).abs() < 1e-12);
        assert!((p(BinaryOp::lukasiewicz(Kind::Conorm)) - 0.5).abs() < 1e-12);
        assert!(make_rule(&BinaryOp::drastic(Kind::Conorm), None).is_err());
    }

    #[test]
    fn classify_examples() {
        let spec = SampleSpec::default();
        let v = |s: BinaryOp, t: Option<BinaryOp>| classify_rule(&s, t.as_ref(), &spec).unwrap().verdict;
        assert_eq!(v(BinaryOp::max(), None), RuleVerdict::Induced);
        assert_eq!(v(BinaryOp::lukasiewicz(Kind::Conorm), None), RuleVerdict::Compatible);
        assert_eq!(v(BinaryOp::drastic(Kind::Conorm), None), RuleVerdict::NotCompatible);
        assert_eq!(
            v(
                BinaryOp::lukasiewicz(Kind::Conorm),
                Some(BinaryOp::lukasiewicz(Kind::Norm))
            ),
            RuleVerdict::Induced
        );
        assert_eq!(
            v(BinaryOp::lukasiewicz(Kind::Conorm), Some(BinaryOp::drastic(Kind::Norm))),
            RuleVerdict::Compatible
        );
        let open = classify_rule(&BinaryOp::schweizer_sklar(Kind::Conorm, 0.5), None, &spec).unwrap();
        assert_eq!(open.verdict, RuleVerdict::Undetermined);
        assert!(open.speculative.is_some());
    }

    #[test]
    fn mj_examples() {
        let s = BinaryOp::lukasiewicz(Kind::Conorm);
        let (r, d1, d2) = mj_counterexample(&s, 0.5, 0.6, 0.7).unwrap();
        assert_eq!(r.get(0, 1), 1.0);
        assert_eq!(r.get(1, 0), 0.5);
        for d in [&d1, &d2] {
            assert!(verify_weak(&r, d).unwrap().holds());
            assert!(audit_fp(&triplet(&r, d)).unwrap().overall());
        }
        assert!(mj_counterexample(&BinaryOp::max(), 0.5, 0.2, 0.3).is_err());
        let o = BinaryOp::ordinal_sum(Kind::Conorm);
        let (r, d1, d2) = mj_counterexample(&o, 0.3, 0.4, 0.45).unwrap();
        assert_eq!(r.get(0, 1), 0.5);
        assert_ne!(d1.strict(), d2.strict());
    }
}

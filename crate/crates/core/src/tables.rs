//! Regeneration of the decomposability table (existence / uniqueness of
//! decompositions) and the decomposition-rule table, with a cell-by-cell
//! comparison against the published values.
//!
//! Parameterised cells are evaluated on a list of λ samples. A qualified
//! regime such as `0<λ<1` uses the samples inside it; `±∞` are only used by
//! regimes that name them. Unqualified cells use every Schweizer–Sklar sample
//! and the finite Hamacher samples. Schweizer–Sklar against itself and
//! Hamacher against itself share one λ; other pairs of parameterised
//! families are sampled independently.

use std::fmt::{self, Write as _};

use rayon::prelude::*;

use crate::divisors::{strong_existence, strong_uniqueness};
use crate::error::{Error, Result};
use crate::grid::SampleSpec;
use crate::ops::{
    check_first_coordinate_continuity, check_strictly_increasing_first, make_family, BinaryOp, Family, Kind, Lambda,
};
use crate::preference::{classify_rule, RuleVerdict};
use crate::verdict::TriState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TableKind {
    /// Existence and uniqueness of decompositions.
    Decompositions,
    /// Compatible and induced decomposition rules.
    Rules,
}

impl TableKind {
    pub fn number(self) -> u8 {
        match self {
            TableKind::Decompositions => 1,
            TableKind::Rules => 2,
        }
    }

    pub fn from_number(n: u8) -> Result<Self> {
        match n {
            1 => Ok(TableKind::Decompositions),
            2 => Ok(TableKind::Rules),
            _ => Err(Error::Precondition(format!("table must be 1 or 2, got {n}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DecompositionVerdict {
    NotExists,
    Exists,
    ExistsUnique,
    /// Only sampled evidence was available.
    Inconclusive,
}

impl DecompositionVerdict {
    pub fn symbol(self) -> &'static str {
        match self {
            DecompositionVerdict::NotExists => "∄",
            DecompositionVerdict::Exists => "∃",
            DecompositionVerdict::ExistsUnique => "∃!",
            DecompositionVerdict::Inconclusive => "~",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellVerdict {
    Decomposition(DecompositionVerdict),
    Rule(RuleVerdict),
}

impl CellVerdict {
    pub fn symbol(self) -> &'static str {
        match self {
            CellVerdict::Decomposition(v) => v.symbol(),
            CellVerdict::Rule(v) => v.symbol(),
        }
    }
}

impl fmt::Display for CellVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Table rows: a t-norm family, or weak decompositions (no t-norm).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RowKind {
    Norm(Family),
    Weak,
}

pub const ROWS: [RowKind; 7] = [
    RowKind::Norm(Family::Drastic),
    RowKind::Norm(Family::Minimum),
    RowKind::Norm(Family::Lukasiewicz),
    RowKind::Norm(Family::Product),
    RowKind::Norm(Family::SchweizerSklar),
    RowKind::Norm(Family::Hamacher),
    RowKind::Weak,
];

pub const COLUMNS: [Family; 6] = [
    Family::Drastic,
    Family::Minimum,
    Family::Lukasiewicz,
    Family::Product,
    Family::SchweizerSklar,
    Family::Hamacher,
];

pub fn row_name(row: RowKind) -> &'static str {
    match row {
        RowKind::Weak => "Weak decomposition",
        RowKind::Norm(f) => match f {
            Family::Drastic => "Drastic",
            Family::Minimum => "Minimum",
            Family::Lukasiewicz => "Łukasiewicz",
            Family::Product => "Product",
            Family::SchweizerSklar => "Schweizer-Sklar",
            Family::Hamacher => "Hamacher",
            _ => "?",
        },
    }
}

pub fn column_name(col: Family) -> &'static str {
    match col {
        Family::Drastic => "Drastic",
        Family::Minimum => "Maximum",
        Family::Lukasiewicz => "Łukasiewicz",
        Family::Product => "Probabilistic",
        Family::SchweizerSklar => "Schweizer-Sklar",
        Family::Hamacher => "Hamacher",
        _ => "?",
    }
}

/// A λ range with optional endpoints; `±∞` belong to it only when named.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaRange {
    pub label: &'static str,
    lo: f64,
    lo_closed: bool,
    hi: f64,
    hi_closed: bool,
}

impl LambdaRange {
    const fn new(label: &'static str, lo: f64, lo_closed: bool, hi: f64, hi_closed: bool) -> Self {
        LambdaRange {
            label,
            lo,
            lo_closed,
            hi,
            hi_closed,
        }
    }

    pub fn contains(&self, l: f64) -> bool {
        let above = if self.lo_closed { l >= self.lo } else { l > self.lo };
        let below = if self.hi_closed { l <= self.hi } else { l < self.hi };
        above && below
    }
}

const INF: f64 = f64::INFINITY;
const LE_ZERO: LambdaRange = LambdaRange::new("λ≤0", -INF, false, 0.0, true);
const FINITE_LE_ZERO: LambdaRange = LambdaRange::new("−∞<λ≤0", -INF, false, 0.0, true);
const POSITIVE_FINITE: LambdaRange = LambdaRange::new("0<λ<+∞", 0.0, false, INF, false);
const POS_INF: LambdaRange = LambdaRange::new("λ=+∞", INF, true, INF, true);
const NEG_INF: LambdaRange = LambdaRange::new("λ=−∞", -INF, true, -INF, true);
const BELOW_ONE: LambdaRange = LambdaRange::new("λ<1", -INF, false, 1.0, false);
const ZERO_TO_ONE: LambdaRange = LambdaRange::new("0<λ<1", 0.0, false, 1.0, false);
const ONE: LambdaRange = LambdaRange::new("λ=1", 1.0, true, 1.0, true);
const ABOVE_ONE: LambdaRange = LambdaRange::new("λ>1", 1.0, false, INF, false);
const FINITE: LambdaRange = LambdaRange::new("λ<+∞", -INF, false, INF, false);

type Expected = Vec<(Option<LambdaRange>, CellVerdict)>;

fn expected_table1() -> Vec<Vec<Expected>> {
    use DecompositionVerdict::*;
    let u = |v| vec![(None, CellVerdict::Decomposition(v))];
    let q = |items: &[(LambdaRange, DecompositionVerdict)]| {
        items
            .iter()
            .map(|&(r, v)| (Some(r), CellVerdict::Decomposition(v)))
            .collect::<Expected>()
    };
    let none = || (0..6).map(|_| u(NotExists)).collect::<Vec<_>>();
    vec![
        vec![
            u(NotExists),
            u(NotExists),
            u(Exists),
            u(NotExists),
            q(&[(LE_ZERO, NotExists), (POSITIVE_FINITE, Exists), (POS_INF, NotExists)]),
            u(NotExists),
        ],
        none(),
        vec![
            u(NotExists),
            u(NotExists),
            u(ExistsUnique),
            u(NotExists),
            q(&[
                (LE_ZERO, NotExists),
                (ZERO_TO_ONE, Exists),
                (ONE, ExistsUnique),
                (ABOVE_ONE, NotExists),
            ]),
            u(NotExists),
        ],
        none(),
        vec![
            u(NotExists),
            u(NotExists),
            q(&[(BELOW_ONE, NotExists), (ONE, ExistsUnique), (ABOVE_ONE, Exists)]),
            u(NotExists),
            q(&[
                (BELOW_ONE, NotExists),
                (ONE, ExistsUnique),
                (ABOVE_ONE, Exists),
                (POS_INF, NotExists),
            ]),
            u(NotExists),
        ],
        none(),
        vec![
            u(NotExists),
            u(Exists),
            u(Exists),
            u(ExistsUnique),
            q(&[
                (NEG_INF, Exists),
                (FINITE_LE_ZERO, ExistsUnique),
                (POSITIVE_FINITE, Exists),
                (POS_INF, NotExists),
            ]),
            q(&[(FINITE, ExistsUnique), (POS_INF, NotExists)]),
        ],
    ]
}

fn expected_table2() -> Vec<Vec<Expected>> {
    use RuleVerdict::*;
    let u = |v| vec![(None, CellVerdict::Rule(v))];
    let q = |items: &[(LambdaRange, RuleVerdict)]| {
        items
            .iter()
            .map(|&(r, v)| (Some(r), CellVerdict::Rule(v)))
            .collect::<Expected>()
    };
    let none = || (0..6).map(|_| u(NotCompatible)).collect::<Vec<_>>();
    vec![
        vec![
            u(NotCompatible),
            u(NotCompatible),
            u(Compatible),
            u(NotCompatible),
            q(&[
                (LE_ZERO, NotCompatible),
                (POSITIVE_FINITE, Undetermined),
                (POS_INF, NotCompatible),
            ]),
            u(NotCompatible),
        ],
        none(),
        vec![
            u(NotCompatible),
            u(NotCompatible),
            u(Induced),
            u(NotCompatible),
            q(&[
                (LE_ZERO, NotCompatible),
                (ZERO_TO_ONE, Undetermined),
                (ONE, Undetermined),
                (ABOVE_ONE, Undetermined),
            ]),
            u(NotCompatible),
        ],
        none(),
        vec![
            u(NotCompatible),
            u(NotCompatible),
            q(&[(BELOW_ONE, NotCompatible), (ONE, Induced), (ABOVE_ONE, Compatible)]),
            u(NotCompatible),
            q(&[
                (BELOW_ONE, NotCompatible),
                (ONE, Undetermined),
                (ABOVE_ONE, Undetermined),
                (POS_INF, NotCompatible),
            ]),
            u(NotCompatible),
        ],
        none(),
        vec![
            u(NotCompatible),
            u(Induced),
            u(Compatible),
            u(Induced),
            q(&[
                (NEG_INF, Induced),
                (FINITE_LE_ZERO, NotCompatible),
                (POSITIVE_FINITE, Undetermined),
                (POS_INF, NotCompatible),
            ]),
            q(&[(FINITE, Induced), (POS_INF, NotCompatible)]),
        ],
    ]
}

/// The published table, row-major over [`ROWS`] × [`COLUMNS`].
pub fn expected(kind: TableKind) -> Vec<Vec<(Option<LambdaRange>, CellVerdict)>> {
    let rows = match kind {
        TableKind::Decompositions => expected_table1(),
        TableKind::Rules => expected_table2(),
    };
    rows.into_iter().flatten().collect()
}

/// `{−∞, −2, −1, −0.5, 0, 0.5, 1, 2, 5, +∞}`.
pub fn default_lambda_samples() -> Vec<Lambda> {
    [-INF, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 5.0, INF]
        .into_iter()
        .map(Lambda::new)
        .collect()
}

/// One evaluated parameter combination.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleOutcome {
    pub norm: Option<String>,
    pub conorm: String,
    pub verdict: CellVerdict,
    /// Oracle verdict behind an `Undetermined` answer.
    pub speculative: Option<CellVerdict>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegimeResult {
    pub regime: Option<LambdaRange>,
    pub expected: CellVerdict,
    /// `None` when samples in the regime disagree.
    pub computed: Option<CellVerdict>,
    pub samples: Vec<SampleOutcome>,
}

impl RegimeResult {
    pub fn matches(&self) -> bool {
        self.computed == Some(self.expected)
    }

    pub fn label(&self) -> &'static str {
        self.regime.map_or("", |r| r.label)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableCell {
    pub row: RowKind,
    pub column: Family,
    pub regimes: Vec<RegimeResult>,
}

impl TableCell {
    pub fn matches(&self) -> bool {
        self.regimes.iter().all(RegimeResult::matches)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub kind: TableKind,
    pub cells: Vec<TableCell>,
}

impl Table {
    pub fn cell(&self, row: RowKind, column: Family) -> Option<&TableCell> {
        self.cells.iter().find(|c| c.row == row && c.column == column)
    }

    /// Regimes whose computed verdict differs from the published one.
    pub fn mismatches(&self) -> Vec<(&TableCell, &RegimeResult)> {
        self.cells
            .iter()
            .flat_map(|c| c.regimes.iter().filter(|r| !r.matches()).map(move |r| (c, r)))
            .collect()
    }

    /// Number of compared entries (one per unqualified cell, one per λ regime).
    pub fn entry_count(&self) -> usize {
        self.cells.iter().map(|c| c.regimes.len()).sum()
    }

    /// Human-readable rendering with a diff section and a mismatch count.
    pub fn to_text(&self, speculate: bool) -> String {
        let mut out = String::new();
        let title = match self.kind {
            TableKind::Decompositions => "Decompositions (rows: t-norm, columns: t-conorm)",
            TableKind::Rules => "Decomposition rules (rows: t-norm, columns: t-conorm)",
        };
        let _ = writeln!(out, "{title}");
        for cell in &self.cells {
            let head = format!("{} × {}", row_name(cell.row), column_name(cell.column));
            if cell.regimes.len() == 1 && cell.regimes[0].regime.is_none() {
                let r = &cell.regimes[0];
                let _ = writeln!(out, "{head}: {}{}", computed_text(r), flag(r));
            } else {
                let _ = writeln!(out, "{head}:");
                for r in &cell.regimes {
                    let _ = writeln!(out, "    {}: {}{}", r.label(), computed_text(r), flag(r));
                }
            }
            if speculate {
                for r in &cell.regimes {
                    for s in r.samples.iter().filter(|s| s.speculative.is_some()) {
                        let _ = writeln!(
                            out,
                            "    [speculative, not authoritative] T={} S={}: {}",
                            s.norm.as_deref().unwrap_or("-"),
                            s.conorm,
                            s.speculative.map_or("", |v| v.symbol())
                        );
                    }
                }
            }
        }
        let mismatches = self.mismatches();
        if !mismatches.is_empty() {
            let _ = writeln!(out, "\ndiff against the published table:");
            for (c, r) in &mismatches {
                let _ = writeln!(
                    out,
                    "  {} × {}{}{}: published {}, computed {}",
                    row_name(c.row),
                    column_name(c.column),
                    if r.regime.is_some() { ", " } else { "" },
                    r.label(),
                    r.expected,
                    computed_text(r)
                );
                for s in &r.samples {
                    let _ = writeln!(
                        out,
                        "      T={} S={} -> {}",
                        s.norm.as_deref().unwrap_or("-"),
                        s.conorm,
                        s.verdict
                    );
                }
            }
        }
        let _ = writeln!(
            out,
            "\n{} entries compared, {} mismatches",
            self.entry_count(),
            mismatches.len()
        );
        out
    }

    /// `row,column,regime,expected,computed,match`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("row,column,regime,expected,computed,match\n");
        for c in &self.cells {
            for r in &c.regimes {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    row_name(c.row),
                    column_name(c.column),
                    r.label(),
                    r.expected,
                    computed_text(r),
                    r.matches()
                );
            }
        }
        out
    }
}

fn computed_text(r: &RegimeResult) -> String {
    match r.computed {
        Some(v) => v.symbol().to_string(),
        None => {
            let mut seen: Vec<&str> = r.samples.iter().map(|s| s.verdict.symbol()).collect();
            seen.dedup();
            format!("inconsistent ({})", seen.join("/"))
        }
    }
}

fn flag(r: &RegimeResult) -> &'static str {
    if r.matches() {
        ""
    } else {
        "   <-- MISMATCH"
    }
}

fn parameterised(f: Family) -> bool {
    f.has_parameter()
}

fn in_family_range(f: Family, l: Lambda) -> bool {
    match f {
        Family::Hamacher => l.value() >= 0.0,
        _ => true,
    }
}

/// λ values for one family inside `regime` (or for an unqualified cell).
fn samples_for(f: Family, regime: Option<LambdaRange>, samples: &[Lambda]) -> Vec<Lambda> {
    samples
        .iter()
        .copied()
        .filter(|&l| in_family_range(f, l))
        .filter(|&l| match regime {
            Some(r) => r.contains(l.value()),
            None => f != Family::Hamacher || l.value().is_finite(),
        })
        .collect()
}

fn build(kind: Kind, f: Family, l: Option<Lambda>) -> Result<BinaryOp> {
    make_family(kind, f, if parameterised(f) { l } else { None })
}

/// Operator pairs `(T, S)` to evaluate for one regime of a cell.
fn combinations(
    row: RowKind,
    col: Family,
    regime: Option<LambdaRange>,
    samples: &[Lambda],
) -> Result<Vec<(Option<BinaryOp>, BinaryOp)>> {
    let row_family = match row {
        RowKind::Norm(f) => Some(f),
        RowKind::Weak => None,
    };
    let row_param = row_family.is_some_and(parameterised);
    let col_param = parameterised(col);
    let norm = |l: Option<Lambda>| row_family.map(|f| build(Kind::Norm, f, l)).transpose();

    let mut out = Vec::new();
    if row_param && col_param && row_family != Some(col) {
        let rf = row_family.unwrap_or(col);
        for lr in samples_for(rf, regime, samples) {
            for lc in samples_for(col, regime, samples) {
                out.push((norm(Some(lr))?, build(Kind::Conorm, col, Some(lc))?));
            }
        }
    } else if row_param || col_param {
        let f = if col_param { col } else { row_family.unwrap_or(col) };
        for l in samples_for(f, regime, samples) {
            out.push((norm(Some(l))?, build(Kind::Conorm, col, Some(l))?));
        }
    } else {
        if regime.is_some() {
            return Err(Error::Internal(format!(
                "{} × {} has a λ regime but no parameter",
                row_name(row),
                column_name(col)
            )));
        }
        out.push((norm(None)?, build(Kind::Conorm, col, None)?));
    }
    if out.is_empty() {
        return Err(Error::Precondition(format!(
            "no λ sample falls in regime {} of {} × {}",
            regime.map_or("(all)", |r| r.label),
            row_name(row),
            column_name(col)
        )));
    }
    Ok(out)
}

/// Existence / uniqueness verdict for one operator pair.
pub fn decomposition_verdict(t: Option<&BinaryOp>, s: &BinaryOp) -> Result<DecompositionVerdict> {
    use DecompositionVerdict::*;
    Ok(match t {
        None => {
            if check_first_coordinate_continuity(s, 1000).fails() {
                NotExists
            } else {
                match check_strictly_increasing_first(s, 1000) {
                    TriState::Holds => ExistsUnique,
                    TriState::Fails(_) => Exists,
                    TriState::UnknownSampled => Inconclusive,
                }
            }
        }
        Some(t) => {
            let grid = s.default_grid();
            match strong_existence(t, s, &grid)? {
                TriState::Fails(_) => NotExists,
                TriState::UnknownSampled => Inconclusive,
                TriState::Holds => match strong_uniqueness(t, s, &grid)? {
                    TriState::Holds => ExistsUnique,
                    TriState::Fails(_) => Exists,
                    TriState::UnknownSampled => Inconclusive,
                },
            }
        }
    })
}

fn evaluate(kind: TableKind, t: Option<&BinaryOp>, s: &BinaryOp, spec: &SampleSpec) -> Result<SampleOutcome> {
    let (verdict, speculative) = match kind {
        TableKind::Decompositions => (CellVerdict::Decomposition(decomposition_verdict(t, s)?), None),
        TableKind::Rules => {
            let c = classify_rule(s, t, spec)?;
            (CellVerdict::Rule(c.verdict), c.speculative.map(CellVerdict::Rule))
        }
    };
    Ok(SampleOutcome {
        norm: t.map(BinaryOp::spec),
        conorm: s.spec(),
        verdict,
        speculative,
    })
}

/// Computes every cell of the chosen table and compares it with the published one.
pub fn generate_table(kind: TableKind, samples: &[Lambda], spec: &SampleSpec) -> Result<Table> {
    let expected = expected(kind);
    let layout: Vec<(RowKind, Family)> = ROWS
        .iter()
        .flat_map(|&r| COLUMNS.iter().map(move |&c| (r, c)))
        .collect();
    let cells = layout
        .par_iter()
        .zip(expected.par_iter())
        .map(|(&(row, column), entries)| {
            let regimes = entries
                .iter()
                .map(|&(regime, want)| {
                    let outcomes = combinations(row, column, regime, samples)?
                        .iter()
                        .map(|(t, s)| evaluate(kind, t.as_ref(), s, spec))
                        .collect::<Result<Vec<_>>>()?;
                    let first = outcomes[0].verdict;
                    let computed = outcomes.iter().all(|o| o.verdict == first).then_some(first);
                    Ok(RegimeResult {
                        regime,
                        expected: want,
                        computed,
                        samples: outcomes,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(TableCell { row, column, regimes })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table { kind, cells })
}

/// The decomposability table on the given λ samples.
pub fn generate_table1(samples: &[Lambda]) -> Result<Table> {
    generate_table(TableKind::Decompositions, samples, &SampleSpec::default())
}

/// The decomposition-rule table on the given λ samples.
pub fn generate_table2(samples: &[Lambda], spec: &SampleSpec) -> Result<Table> {
    generate_table(TableKind::Rules, samples, spec)
}

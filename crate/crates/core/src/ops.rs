//! Triangular norms and conorms.
//!
//! Built-in families carry analytically known answers for the properties the
//! decomposition theory depends on (continuity in the first coordinate, strict
//! monotonicity, collapse behaviour). Custom operators get the same checks by
//! sampling, and never receive a `Holds` verdict from them.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::verdict::{TriState, Witness};
use crate::EPS;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Norm,
    Conorm,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Norm => "norm",
            Kind::Conorm => "conorm",
        }
    }

    pub fn dual(self) -> Kind {
        match self {
            Kind::Norm => Kind::Conorm,
            Kind::Conorm => Kind::Norm,
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `min` as a norm, `max` as a conorm.
    Minimum,
    /// Product norm, probabilistic sum conorm.
    Product,
    Lukasiewicz,
    Drastic,
    SchweizerSklar,
    Hamacher,
    /// Łukasiewicz conorm rescaled onto `[0, 0.5]`, `max` elsewhere (and its dual norm).
    OrdinalSumLukasiewiczHalf,
    Custom,
}

impl Family {
    pub fn id(self) -> &'static str {
        match self {
            Family::Minimum => "minimum",
            Family::Product => "product",
            Family::Lukasiewicz => "lukasiewicz",
            Family::Drastic => "drastic",
            Family::SchweizerSklar => "schweizer_sklar",
            Family::Hamacher => "hamacher",
            Family::OrdinalSumLukasiewiczHalf => "ordinal_sum_lukasiewicz_half",
            Family::Custom => "custom",
        }
    }

    /// Resolves a family name or alias. Aliases such as `max` or
    /// `probabilistic` also pin the operator kind.
    pub fn lookup(name: &str) -> Result<(Family, Option<Kind>)> {
        let key = name.trim().to_ascii_lowercase().replace('-', "_");
        let found = match key.as_str() {
            "minimum" => (Family::Minimum, None),
            "min" => (Family::Minimum, Some(Kind::Norm)),
            "max" | "maximum" => (Family::Minimum, Some(Kind::Conorm)),
            "product" | "prod" => (Family::Product, None),
            "probabilistic" | "prob" | "probabilistic_sum" => (Family::Product, Some(Kind::Conorm)),
            "lukasiewicz" | "luk" | "łukasiewicz" => (Family::Lukasiewicz, None),
            "drastic" => (Family::Drastic, None),
            "schweizer_sklar" | "ss" => (Family::SchweizerSklar, None),
            "hamacher" => (Family::Hamacher, None),
            "ordinal_sum_lukasiewicz_half" | "ordinal_sum" => (Family::OrdinalSumLukasiewiczHalf, None),
            "custom" => (Family::Custom, None),
            _ => return Err(Error::UnknownFamily(name.to_string())),
        };
        Ok(found)
    }

    pub fn has_parameter(self) -> bool {
        matches!(self, Family::SchweizerSklar | Family::Hamacher)
    }
}

/// Extended-real family parameter. Values within `1e-12` of 0 snap to 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lambda(f64);

impl Lambda {
    pub const NEG_INF: Lambda = Lambda(f64::NEG_INFINITY);
    pub const POS_INF: Lambda = Lambda(f64::INFINITY);

    pub fn new(value: f64) -> Self {
        if value.abs() < 1e-12 {
            Lambda(0.0)
        } else {
            Lambda(value)
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_pos_inf(self) -> bool {
        self.0 == f64::INFINITY
    }

    pub fn is_neg_inf(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }
}

impl fmt::Display for Lambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_pos_inf() {
            f.write_str("+inf")
        } else if self.is_neg_inf() {
            f.write_str("-inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl FromStr for Lambda {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        match t.as_str() {
            "+inf" | "inf" | "infinity" | "+infinity" | "∞" | "+∞" => Ok(Lambda::POS_INF),
            "-inf" | "-infinity" | "-∞" => Ok(Lambda::NEG_INF),
            _ => t
                .parse::<f64>()
                .ok()
                .filter(|v| !v.is_nan())
                .map(Lambda::new)
                .ok_or_else(|| Error::BadOpSpec {
                    spec: s.to_string(),
                    reason: "lambda must be a number, +inf or -inf".into(),
                }),
        }
    }
}

/// Closed-form behaviour class of a built-in operator. Schweizer–Sklar and
/// Hamacher members that coincide with a basic operator map onto it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Regime {
    Min,
    Product,
    Lukasiewicz,
    Drastic,
    /// Schweizer–Sklar with `0 < λ < ∞`: nilpotent.
    SsPositive(f64),
    /// Schweizer–Sklar with `-∞ < λ < 0`: strict.
    SsNegative(f64),
    /// Hamacher with `0 ≤ λ < ∞`: strict.
    Hamacher(f64),
    OrdinalSum,
    Custom,
}

type EvalFn = dyn Fn(f64, f64) -> f64 + Send + Sync;

#[derive(Clone)]
struct CustomEval {
    name: String,
    f: Arc<EvalFn>,
    breakpoints: Vec<f64>,
}

/// A binary operator on `[0,1]` tagged as a t-norm or t-conorm.
#[derive(Clone)]
pub struct BinaryOp {
    kind: Kind,
    family: Family,
    lambda: Option<Lambda>,
    custom: Option<CustomEval>,
}

impl fmt::Debug for BinaryOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BinaryOp")
            .field("kind", &self.kind)
            .field("family", &self.family)
            .field("lambda", &self.lambda)
            .field("custom", &self.custom.as_ref().map(|c| c.name.as_str()))
            .finish()
    }
}

impl fmt::Display for BinaryOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.spec(), self.kind)
    }
}

/// Builds a built-in operator, checking the parameter against the family's range.
pub fn make_family(kind: Kind, family: Family, lambda: Option<Lambda>) -> Result<BinaryOp> {
    let out_of_range = |expected: &'static str, l: Option<Lambda>| Error::ParameterOutOfRange {
        family: family.id().to_string(),
        lambda: l.map(|l| l.to_string()).unwrap_or_else(|| "none".into()),
        expected,
    };
    match family {
        Family::Custom => {
            return Err(Error::BadOpSpec {
                spec: "custom".into(),
                reason: "custom operators are built from a closure or a table".into(),
            })
        }
        Family::SchweizerSklar => {
            if lambda.is_none() {
                return Err(out_of_range("lambda in [-inf, +inf] is required", lambda));
            }
        }
        Family::Hamacher => match lambda {
            Some(l) if l.value() >= 0.0 => {}
            _ => return Err(out_of_range("lambda in [0, +inf] is required", lambda)),
        },
        _ => {
            if lambda.is_some() {
                return Err(out_of_range("this family takes no parameter", lambda));
            }
        }
    }
    Ok(BinaryOp {
        kind,
        family,
        lambda,
        custom: None,
    })
}

/// Parses `<family>[:lambda=<value|+inf|-inf>]` or `custom:table=<path>`.
///
/// `kind` is the role the caller needs; aliases that imply the other kind
/// (`max` passed as a norm, say) are rejected.
pub fn parse_op_spec(spec: &str, kind: Kind) -> Result<BinaryOp> {
    let bad = |reason: &str| Error::BadOpSpec {
        spec: spec.to_string(),
        reason: reason.to_string(),
    };
    let mut parts = spec.splitn(2, ':');
    let name = parts.next().unwrap_or_default();
    let (family, implied) = Family::lookup(name)?;
    if let Some(k) = implied {
        if k != kind {
            return Err(Error::WrongKind {
                expected: kind.name(),
                found: k.name(),
            });
        }
    }
    let mut lambda = None;
    let mut table = None;
    if let Some(rest) = parts.next() {
        for item in rest.split(',').filter(|s| !s.trim().is_empty()) {
            let (key, value) = item.split_once('=').ok_or_else(|| bad("expected key=value"))?;
            match key.trim() {
                "lambda" | "λ" => lambda = Some(value.parse::<Lambda>()?),
                "table" if family == Family::Custom => table = Some(value.trim().to_string()),
                other => return Err(bad(&format!("unknown option `{other}`"))),
            }
        }
    }
    if family == Family::Custom {
        let path = table.ok_or_else(|| bad("custom operators need table=<path>"))?;
        let text = std::fs::read_to_string(&path).map_err(|e| bad(&format!("cannot read table {path}: {e}")))?;
        let rows = parse_table(&text)?;
        return BinaryOp::from_table(kind, &format!("custom:table={path}"), rows);
    }
    make_family(kind, family, lambda)
}

/// Whitespace/comma separated square matrix, one row per line, `#` comments.
pub fn parse_table(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row_idx = rows.len() + 1;
        let row = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .enumerate()
            .map(|(col, tok)| {
                tok.parse::<f64>().map_err(|_| Error::Parse {
                    line: lineno + 1,
                    row: Some(row_idx),
                    column: Some(col + 1),
                    message: format!("`{tok}` is not a number"),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

impl BinaryOp {
    pub fn norm(family: Family) -> Result<Self> {
        make_family(Kind::Norm, family, None)
    }

    pub fn conorm(family: Family) -> Result<Self> {
        make_family(Kind::Conorm, family, None)
    }

    pub fn min() -> Self {
        Self::norm(Family::Minimum).unwrap()
    }

    pub fn max() -> Self {
        Self::conorm(Family::Minimum).unwrap()
    }

    pub fn product() -> Self {
        Self::norm(Family::Product).unwrap()
    }

    pub fn probabilistic_sum() -> Self {
        Self::conorm(Family::Product).unwrap()
    }

    pub fn lukasiewicz(kind: Kind) -> Self {
        make_family(kind, Family::Lukasiewicz, None).unwrap()
    }

    pub fn drastic(kind: Kind) -> Self {
        make_family(kind, Family::Drastic, None).unwrap()
    }

    pub fn schweizer_sklar(kind: Kind, lambda: f64) -> Self {
        make_family(kind, Family::SchweizerSklar, Some(Lambda::new(lambda))).unwrap()
    }

    pub fn hamacher(kind: Kind, lambda: f64) -> Result<Self> {
        make_family(kind, Family::Hamacher, Some(Lambda::new(lambda)))
    }

    /// The ordinal sum with a Łukasiewicz summand on `[0, 0.5]` (dual norm for `Kind::Norm`).
    pub fn ordinal_sum(kind: Kind) -> Self {
        make_family(kind, Family::OrdinalSumLukasiewiczHalf, None).unwrap()
    }

    /// Wraps an arbitrary closure. Outputs are clamped into `[0,1]`.
    pub fn custom<F>(kind: Kind, name: impl Into<String>, f: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        BinaryOp {
            kind,
            family: Family::Custom,
            lambda: None,
            custom: Some(CustomEval {
                name: name.into(),
                f: Arc::new(f),
                breakpoints: Vec::new(),
            }),
        }
    }

    /// Tabulated operator: `rows[i][j]` is the value at `(i/(n-1), j/(n-1))`,
    /// bilinear interpolation in between.
    pub fn from_table(kind: Kind, name: &str, rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n < 2 {
            return Err(Error::BadOpSpec {
                spec: name.into(),
                reason: "table needs at least 2 rows".into(),
            });
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Parse {
                    line: i + 1,
                    row: Some(i + 1),
                    column: None,
                    message: format!("expected {n} values, found {}", row.len()),
                });
            }
            for (j, v) in row.iter().enumerate() {
                if !(0.0..=1.0).contains(v) {
                    return Err(Error::DegreeOutOfRange {
                        row: i + 1,
                        column: j + 1,
                        value: *v,
                    });
                }
            }
        }
        let breakpoints = (0..n).map(|k| k as f64 / (n - 1) as f64).collect();
        let cells = n - 1;
        let f = move |x: f64, y: f64| {
            let fx = x * cells as f64;
            let fy = y * cells as f64;
            let i = (fx.floor() as usize).min(cells - 1);
            let j = (fy.floor() as usize).min(cells - 1);
            let (dx, dy) = (fx - i as f64, fy - j as f64);
            let v00 = rows[i][j];
            let v10 = rows[i + 1][j];
            let v01 = rows[i][j + 1];
            let v11 = rows[i + 1][j + 1];
            v00 * (1.0 - dx) * (1.0 - dy) + v10 * dx * (1.0 - dy) + v01 * (1.0 - dx) * dy + v11 * dx * dy
        };
        let mut op = BinaryOp::custom(kind, name, f);
        if let Some(c) = op.custom.as_mut() {
            c.breakpoints = breakpoints;
        }
        Ok(op)
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn lambda(&self) -> Option<Lambda> {
        self.lambda
    }

    pub fn is_custom(&self) -> bool {
        self.family == Family::Custom
    }

    /// Canonical spec string, e.g. `schweizer_sklar:lambda=2`.
    pub fn spec(&self) -> String {
        match (&self.custom, self.lambda) {
            (Some(c), _) => c.name.clone(),
            (None, Some(l)) => format!("{}:lambda={}", self.family.id(), l),
            (None, None) => match (self.family, self.kind) {
                (Family::Minimum, Kind::Norm) => "min".into(),
                (Family::Minimum, Kind::Conorm) => "max".into(),
                (Family::Product, Kind::Conorm) => "probabilistic".into(),
                (f, _) => f.id().into(),
            },
        }
    }

    pub(crate) fn expect_kind(&self, kind: Kind) -> Result<()> {
        if self.kind == kind {
            Ok(())
        } else {
            Err(Error::WrongKind {
                expected: kind.name(),
                found: self.kind.name(),
            })
        }
    }

    /// Points where a piecewise definition may change branch.
    pub fn breakpoints(&self) -> Vec<f64> {
        match (&self.custom, self.family) {
            (Some(c), _) => c.breakpoints.clone(),
            (None, Family::OrdinalSumLukasiewiczHalf) => vec![0.5],
            _ => Vec::new(),
        }
    }

    /// Step 1/1000 grid with this operator's breakpoints.
    pub fn default_grid(&self) -> Grid {
        Grid::standard().with_breakpoints(&self.breakpoints())
    }

    pub(crate) fn regime(&self) -> Regime {
        let lambda = self.lambda.map(Lambda::value);
        match (self.family, lambda) {
            (Family::Minimum, _) => Regime::Min,
            (Family::Product, _) => Regime::Product,
            (Family::Lukasiewicz, _) => Regime::Lukasiewicz,
            (Family::Drastic, _) => Regime::Drastic,
            (Family::OrdinalSumLukasiewiczHalf, _) => Regime::OrdinalSum,
            (Family::Custom, _) => Regime::Custom,
            (Family::SchweizerSklar, Some(l)) => {
                if l == f64::NEG_INFINITY {
                    Regime::Min
                } else if l == 0.0 {
                    Regime::Product
                } else if l == f64::INFINITY {
                    Regime::Drastic
                } else if l > 0.0 {
                    Regime::SsPositive(l)
                } else {
                    Regime::SsNegative(l)
                }
            }
            (Family::Hamacher, Some(l)) if l == f64::INFINITY => Regime::Drastic,
            (Family::Hamacher, Some(l)) => Regime::Hamacher(l),
            (_, None) => unreachable!("parameterised family without lambda"),
        }
    }

    /// The dual operator `1 - op(1-x, 1-y)`; built-ins only.
    pub fn dual(&self) -> Option<BinaryOp> {
        if self.is_custom() {
            return None;
        }
        Some(BinaryOp {
            kind: self.kind.dual(),
            ..self.clone()
        })
    }

    /// Evaluates the operator; the result always lies in `[0,1]`.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        if let Some(c) = &self.custom {
            let v = (c.f)(x, y);
            return if v.is_nan() { 0.0 } else { v.clamp(0.0, 1.0) };
        }
        let v = match self.kind {
            Kind::Norm => {
                if x == 0.0 || y == 0.0 {
                    return 0.0;
                }
                if x == 1.0 {
                    return y;
                }
                if y == 1.0 {
                    return x;
                }
                self.norm_interior(x, y)
            }
            Kind::Conorm => {
                if x == 1.0 || y == 1.0 {
                    return 1.0;
                }
                if x == 0.0 {
                    return y;
                }
                if y == 0.0 {
                    return x;
                }
                self.conorm_interior(x, y)
            }
        };
        v.clamp(0.0, 1.0)
    }

    fn norm_interior(&self, x: f64, y: f64) -> f64 {
        match self.regime() {
            Regime::Min => x.min(y),
            Regime::Product => x * y,
            Regime::Lukasiewicz => (x + y - 1.0).max(0.0),
            Regime::Drastic => 0.0,
            Regime::SsPositive(l) | Regime::SsNegative(l) => (x.powf(l) + y.powf(l) - 1.0).max(0.0).powf(1.0 / l),
            Regime::Hamacher(l) => x * y / (l + (1.0 - l) * (x + y - x * y)),
            Regime::OrdinalSum => {
                if x >= 0.5 && y >= 0.5 {
                    (x + y - 1.0).max(0.5)
                } else {
                    x.min(y)
                }
            }
            Regime::Custom => unreachable!(),
        }
    }

    fn conorm_interior(&self, x: f64, y: f64) -> f64 {
        match self.regime() {
            Regime::Min => x.max(y),
            Regime::Product => x + y - x * y,
            Regime::Lukasiewicz => (x + y).min(1.0),
            Regime::Drastic => 1.0,
            Regime::SsPositive(l) | Regime::SsNegative(l) => {
                1.0 - ((1.0 - x).powf(l) + (1.0 - y).powf(l) - 1.0).max(0.0).powf(1.0 / l)
            }
            Regime::Hamacher(l) => (x + y - x * y - (1.0 - l) * x * y) / (1.0 - (1.0 - l) * x * y),
            Regime::OrdinalSum => {
                if x <= 0.5 && y <= 0.5 {
                    (x + y).min(0.5)
                } else {
                    x.max(y)
                }
            }
            Regime::Custom => unreachable!(),
        }
    }
}

// ---------------------------------------------------------------------------
// property checks

fn eq_deg(a: f64, b: f64) -> bool {
    (a - b).abs() <= EPS
}

/// Boundary, monotonicity, commutativity and associativity on a grid.
///
/// Associativity is checked on a thinned copy of the grid (at most 101 points)
/// to keep the triple loop bounded. Built-ins that pass get `Holds`; custom
/// operators that pass get `UnknownSampled`.
pub fn check_norm_axioms(op: &BinaryOp, grid: &Grid) -> TriState {
    let pts = grid.points();
    let f = |x, y| op.eval(x, y);
    for &x in pts {
        let (ok, expect_one, expect_zero) = match op.kind {
            Kind::Norm => (
                eq_deg(f(x, 1.0), x) && eq_deg(f(1.0, x), x) && f(x, 0.0) == 0.0 && f(0.0, x) == 0.0,
                x,
                0.0,
            ),
            Kind::Conorm => (
                eq_deg(f(x, 0.0), x) && eq_deg(f(0.0, x), x) && f(x, 1.0) == 1.0 && f(1.0, x) == 1.0,
                1.0,
                x,
            ),
        };
        if !ok {
            // report the first failing boundary identity
            let cands = [
                (x, 1.0, expect_one),
                (1.0, x, expect_one),
                (x, 0.0, expect_zero),
                (0.0, x, expect_zero),
            ];
            let (a, b, want) = cands
                .into_iter()
                .find(|&(a, b, want)| !eq_deg(f(a, b), want))
                .unwrap_or((x, 1.0, expect_one));
            return TriState::Fails(Witness::degrees(
                vec![a, b],
                format!("boundary: op({a}, {b}) = {} but must be {want}", f(a, b)),
            ));
        }
    }
    for (i, &x) in pts.iter().enumerate() {
        for (j, &y) in pts.iter().enumerate() {
            let v = f(x, y);
            if let Some(&xn) = pts.get(i + 1) {
                if f(xn, y) < v - EPS {
                    return TriState::Fails(Witness::degrees(
                        vec![x, xn, y],
                        format!("monotonicity: op({x}, {y}) = {v} > op({xn}, {y}) = {}", f(xn, y)),
                    ));
                }
            }
            if let Some(&yn) = pts.get(j + 1) {
                if f(x, yn) < v - EPS {
                    return TriState::Fails(Witness::degrees(
                        vec![x, y, yn],
                        format!("monotonicity: op({x}, {y}) = {v} > op({x}, {yn}) = {}", f(x, yn)),
                    ));
                }
            }
            if !eq_deg(v, f(y, x)) {
                return TriState::Fails(Witness::degrees(
                    vec![x, y],
                    format!("commutativity: op({x}, {y}) = {v} but op({y}, {x}) = {}", f(y, x)),
                ));
            }
        }
    }
    let coarse = grid.thinned(101);
    let cp = coarse.points();
    for &x in cp {
        for &y in cp {
            let xy = f(x, y);
            for &z in cp {
                let left = f(x, f(y, z));
                let right = f(xy, z);
                if !eq_deg(left, right) {
                    return TriState::Fails(Witness::degrees(
                        vec![x, y, z],
                        format!("associativity: op({x}, op({y}, {z})) = {left} but op(op({x}, {y}), {z}) = {right}"),
                    ));
                }
            }
        }
    }
    if op.is_custom() {
        TriState::UnknownSampled
    } else {
        TriState::Holds
    }
}

/// Continuity of `t ↦ op(t, w)` for every `w`.
///
/// Custom operators: adjacent grid values differing by more than 0.05 are
/// refined by bisection; a gap that survives 60 halvings is reported as a jump.
pub fn check_first_coordinate_continuity(op: &BinaryOp, divisions: usize) -> TriState {
    match op.regime() {
        Regime::Drastic => {
            let (t, w) = match op.kind {
                Kind::Conorm => (0.0, 0.5),
                Kind::Norm => (1.0, 0.5),
            };
            TriState::Fails(Witness::degrees(vec![t, w], format!("jump of op(·, {w}) at t = {t}")))
        }
        Regime::Custom => sampled_continuity(op, divisions),
        _ => TriState::Holds,
    }
}

fn sampled_continuity(op: &BinaryOp, divisions: usize) -> TriState {
    let grid = Grid::uniform(divisions).with_breakpoints(&op.breakpoints());
    let pts = grid.points();
    for &w in pts {
        for pair in pts.windows(2) {
            let (mut a, mut b) = (pair[0], pair[1]);
            if (op.eval(b, w) - op.eval(a, w)).abs() <= 0.05 {
                continue;
            }
            for _ in 0..60 {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                let left = (op.eval(m, w) - op.eval(a, w)).abs();
                let right = (op.eval(b, w) - op.eval(m, w)).abs();
                if left >= right {
                    b = m;
                } else {
                    a = m;
                }
            }
            let gap = (op.eval(b, w) - op.eval(a, w)).abs();
            if gap > 0.025 {
                return TriState::Fails(Witness::degrees(
                    vec![a, w],
                    format!("op(·, {w}) jumps by {gap} between t = {a} and t = {b}"),
                ));
            }
        }
    }
    TriState::UnknownSampled
}

/// Strict increase of the first argument: on `[0,1]` with `w < 1` for conorms,
/// on `(0,1]` with `w > 0` for norms. Witness `(t, s, w)` with `t < s` and
/// `op(t, w) = op(s, w)`.
pub fn check_strictly_increasing_first(op: &BinaryOp, divisions: usize) -> TriState {
    let fail = |t: f64, s: f64, w: f64| {
        TriState::Fails(Witness::degrees(
            vec![t, s, w],
            format!("op({t}, {w}) = op({s}, {w}) = {}", op.eval(t, w)),
        ))
    };
    match (op.regime(), op.kind) {
        (Regime::Product | Regime::SsNegative(_) | Regime::Hamacher(_), _) => TriState::Holds,
        (Regime::Min, Kind::Conorm) => fail(0.2, 0.3, 0.5),
        (Regime::Min, Kind::Norm) => fail(0.5, 0.6, 0.3),
        (Regime::Lukasiewicz, Kind::Conorm) => fail(0.8, 0.9, 0.5),
        (Regime::Lukasiewicz, Kind::Norm) => fail(0.1, 0.2, 0.5),
        (Regime::Drastic, Kind::Conorm) => fail(0.3, 0.6, 0.5),
        (Regime::Drastic, Kind::Norm) => fail(0.2, 0.4, 0.5),
        (Regime::OrdinalSum, Kind::Conorm) => fail(0.2, 0.3, 0.7),
        (Regime::OrdinalSum, Kind::Norm) => fail(0.6, 0.7, 0.3),
        (Regime::SsPositive(l), Kind::Conorm) => {
            let (w, t, s) = ss_saturation_witness(l);
            fail(t, s, w)
        }
        (Regime::SsPositive(l), Kind::Norm) => {
            // dual of the conorm witness
            let (w, t, s) = ss_saturation_witness(l);
            fail(1.0 - s, 1.0 - t, 1.0 - w)
        }
        (Regime::Custom, kind) => {
            let grid = Grid::uniform(divisions).with_breakpoints(&op.breakpoints());
            let pts = grid.points();
            for &w in pts {
                let admissible = match kind {
                    Kind::Conorm => w < 1.0,
                    Kind::Norm => w > 0.0,
                };
                if !admissible {
                    continue;
                }
                for pair in pts.windows(2) {
                    let (t, s) = (pair[0], pair[1]);
                    if kind == Kind::Norm && t == 0.0 {
                        continue;
                    }
                    if op.eval(t, w) >= op.eval(s, w) {
                        return fail(t, s, w);
                    }
                }
            }
            TriState::UnknownSampled
        }
    }
}

/// A `(w, t, s)` with `t < s < 1` where the SS conorm with parameter `λ > 0`
/// is saturated at 1. For `λ` close to 0 the saturated region shrinks below
/// double resolution; the largest representable candidate is returned then.
fn ss_saturation_witness(lambda: f64) -> (f64, f64, f64) {
    let op = BinaryOp::schweizer_sklar(Kind::Conorm, lambda);
    let mut last = (0.5, 0.9, 0.95);
    for w in [0.5_f64, 0.9, 0.99, 0.999, 0.999_999, 0.999_999_999] {
        let lower = 1.0 - (1.0 - (1.0 - w).powf(lambda)).powf(1.0 / lambda);
        let t = lower + (1.0 - lower) / 3.0;
        let s = lower + 2.0 * (1.0 - lower) / 3.0;
        last = (w, t, s);
        if t < s && s < 1.0 && op.eval(t, w) == 1.0 && op.eval(s, w) == 1.0 {
            return last;
        }
    }
    last
}

/// First adjacent pair `(t, s)` on the grid where `op(·, w)` is flat above `w`.
/// `admit(t, w)` restricts the candidate arguments.
pub fn collapse_witness_sweep(
    op: &BinaryOp,
    divisions: usize,
    admit: Option<&dyn Fn(f64, f64) -> bool>,
) -> Option<(f64, f64, f64)> {
    let grid = Grid::uniform(divisions).with_breakpoints(&op.breakpoints());
    let pts = grid.points();
    for &w in pts {
        for pair in pts.windows(2) {
            let (t, s) = (pair[0], pair[1]);
            if let Some(admit) = admit {
                if !admit(t, w) || !admit(s, w) {
                    continue;
                }
            }
            let (a, b) = (op.eval(t, w), op.eval(s, w));
            if eq_deg(a, b) && a > w + EPS {
                return Some((w, t, s));
            }
        }
    }
    None
}

/// For a conorm: whenever `S(t,w) = S(s,w)` with `t ≠ s`, the common value is `w`.
pub fn check_collapse_implies_absorption(op: &BinaryOp, divisions: usize) -> Result<TriState> {
    op.expect_kind(Kind::Conorm)?;
    let fail = |w: f64, t: f64, s: f64| {
        TriState::Fails(Witness::degrees(
            vec![w, t, s],
            format!("S({t}, {w}) = S({s}, {w}) = {} > {w}", op.eval(t, w)),
        ))
    };
    Ok(match op.regime() {
        Regime::Min | Regime::Product | Regime::SsNegative(_) | Regime::Hamacher(_) => TriState::Holds,
        Regime::Lukasiewicz => fail(0.5, 0.6, 0.7),
        Regime::Drastic => fail(0.5, 0.3, 0.6),
        Regime::OrdinalSum => fail(0.3, 0.4, 0.45),
        Regime::SsPositive(l) => {
            let (w, t, s) = ss_saturation_witness(l);
            fail(w, t, s)
        }
        Regime::Custom => match collapse_witness_sweep(op, divisions, None) {
            Some((w, t, s)) => fail(w, t, s),
            None => TriState::UnknownSampled,
        },
    })
}

/// For a conorm: every `w < 1` has a neighbourhood of 0 on which `S(·, w)`
/// is strictly increasing. Witness `(w, t, s)` with small `t < s` and equal values.
pub fn check_strict_near_zero(op: &BinaryOp, divisions: usize) -> Result<TriState> {
    op.expect_kind(Kind::Conorm)?;
    let fail = |w: f64, t: f64, s: f64| {
        TriState::Fails(Witness::degrees(
            vec![w, t, s],
            format!("S({t}, {w}) = S({s}, {w}) = {}", op.eval(t, w)),
        ))
    };
    Ok(match op.regime() {
        Regime::Lukasiewicz | Regime::Product | Regime::SsPositive(_) | Regime::SsNegative(_) | Regime::Hamacher(_) => {
            TriState::Holds
        }
        Regime::Min | Regime::Drastic | Regime::OrdinalSum => fail(0.5, 1e-3, 2e-3),
        Regime::Custom => {
            let grid = Grid::uniform(divisions).with_breakpoints(&op.breakpoints());
            let step = 1.0 / divisions.max(1) as f64 / 10.0;
            for &w in grid.points().iter().filter(|&&w| w < 1.0) {
                let vals = [op.eval(0.0, w), op.eval(step, w), op.eval(2.0 * step, w)];
                if !(vals[0] < vals[1] && vals[1] < vals[2]) {
                    let (t, s) = if vals[0] >= vals[1] {
                        (0.0, step)
                    } else {
                        (step, 2.0 * step)
                    };
                    return Ok(fail(w, t, s));
                }
            }
            TriState::UnknownSampled
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn witness_reproduces_equal(op: &BinaryOp, v: &TriState, order: [usize; 3]) {
        let w = v.witness().expect("expected a failure");
        let d = &w.degrees;
        let (t, s, x) = (d[order[0]], d[order[1]], d[order[2]]);
        assert!(t != s);
        assert_eq!(op.eval(t, x), op.eval(s, x), "{w}");
    }

    #[test]
    fn lukasiewicz_conorm_saturates() {
        let s = BinaryOp::lukasiewicz(Kind::Conorm);
        assert_eq!(s.eval(0.3, 0.9), 1.0);
    }

    #[test]
    fn ss_zero_is_product() {
        let t = BinaryOp::schweizer_sklar(Kind::Norm, 0.0);
        assert_eq!(t.eval(0.5, 0.5), 0.25);
        assert_eq!(t.regime(), Regime::Product);
    }

    #[test]
    fn drastic_conorm_boundary() {
        let s = BinaryOp::drastic(Kind::Conorm);
        assert_eq!(s.eval(0.4, 0.0), 0.4);
        assert_eq!(s.eval(0.4, 0.1), 1.0);
    }

    #[test]
    fn lambda_snaps_to_zero() {
        assert_eq!(Lambda::new(1e-13).value(), 0.0);
        assert_eq!("+inf".parse::<Lambda>().unwrap(), Lambda::POS_INF);
        assert_eq!("-inf".parse::<Lambda>().unwrap(), Lambda::NEG_INF);
        assert!("abc".parse::<Lambda>().is_err());
    }

    #[test]
    fn hamacher_corners() {
        let t = BinaryOp::hamacher(Kind::Norm, 0.0).unwrap();
        let s = BinaryOp::hamacher(Kind::Conorm, 0.0).unwrap();
        assert_eq!(t.eval(0.0, 0.0), 0.0);
        assert_eq!(s.eval(1.0, 1.0), 1.0);
        assert_eq!(s.eval(0.0, 0.0), 0.0);
        assert!(BinaryOp::hamacher(Kind::Norm, -1.0).is_err());
        assert_eq!(
            BinaryOp::hamacher(Kind::Conorm, f64::INFINITY).unwrap().regime(),
            Regime::Drastic
        );
    }

    #[test]
    fn spec_parsing() {
        let op = parse_op_spec("schweizer_sklar:lambda=2", Kind::Conorm).unwrap();
        assert_eq!(op.lambda(), Some(Lambda::new(2.0)));
        assert_eq!(op.spec(), "schweizer_sklar:lambda=2");
        let op = parse_op_spec("ss:lambda=-inf", Kind::Norm).unwrap();
        assert_eq!(op.regime(), Regime::Min);
        assert_eq!(parse_op_spec("max", Kind::Conorm).unwrap().spec(), "max");
        assert!(matches!(parse_op_spec("max", Kind::Norm), Err(Error::WrongKind { .. })));
        assert!(matches!(
            parse_op_spec("frank:lambda=2", Kind::Norm),
            Err(Error::UnknownFamily(_))
        ));
        assert!(matches!(
            parse_op_spec("hamacher:lambda=-2", Kind::Norm),
            Err(Error::ParameterOutOfRange { .. })
        ));
        assert!(parse_op_spec("schweizer_sklar", Kind::Norm).is_err());
        assert!(parse_op_spec("lukasiewicz:lambda=2", Kind::Norm).is_err());
        assert!(parse_op_spec("lukasiewicz:foo=2", Kind::Norm).is_err());
    }

    #[test]
    fn custom_boundary_violation_is_caught() {
        let op = BinaryOp::custom(Kind::Conorm, "xy", |x, y| x * y);
        let v = check_norm_axioms(&op, &Grid::uniform(10));
        let w = v.witness().unwrap();
        let (a, b) = (w.degrees[0], w.degrees[1]);
        assert!(a == 1.0 || b == 1.0);
        assert_ne!(op.eval(a, b), 1.0);
    }

    #[test]
    fn max_passes_axioms() {
        assert_eq!(
            check_norm_axioms(&BinaryOp::max(), &Grid::uniform(100)),
            TriState::Holds
        );
    }

    #[test]
    fn hamacher_two_passes_axioms() {
        let t = BinaryOp::hamacher(Kind::Norm, 2.0).unwrap();
        assert_eq!(check_norm_axioms(&t, &Grid::uniform(50)), TriState::Holds);
    }

    #[test]
    fn custom_product_is_only_sampled() {
        let op = BinaryOp::custom(Kind::Norm, "xy", |x, y| x * y);
        assert_eq!(check_norm_axioms(&op, &Grid::uniform(20)), TriState::UnknownSampled);
    }

    #[test]
    fn continuity_verdicts() {
        let sd = BinaryOp::drastic(Kind::Conorm);
        let v = check_first_coordinate_continuity(&sd, 100);
        let w = v.witness().unwrap();
        let (t, x) = (w.degrees[0], w.degrees[1]);
        assert!(x > 0.0 && x < 1.0);
        assert!((sd.eval(t + 1e-12, x) - sd.eval(t, x)).abs() > 0.4);
        assert!(check_first_coordinate_continuity(&BinaryOp::max(), 100).holds());
        assert!(check_first_coordinate_continuity(&BinaryOp::ordinal_sum(Kind::Conorm), 100).holds());
        assert!(
            check_first_coordinate_continuity(&BinaryOp::schweizer_sklar(Kind::Conorm, f64::INFINITY), 100).fails()
        );
    }

    #[test]
    fn sampled_continuity_finds_jump() {
        let jumpy = BinaryOp::custom(Kind::Conorm, "drastic-copy", |x, y| {
            if x == 0.0 {
                y
            } else if y == 0.0 {
                x
            } else {
                1.0
            }
        });
        assert!(check_first_coordinate_continuity(&jumpy, 50).fails());
        let smooth = BinaryOp::custom(Kind::Conorm, "prob-copy", |x, y| x + y - x * y);
        assert_eq!(check_first_coordinate_continuity(&smooth, 50), TriState::UnknownSampled);
    }

    #[test]
    fn strictness_verdicts() {
        assert!(check_strictly_increasing_first(&BinaryOp::probabilistic_sum(), 100).holds());
        let max = BinaryOp::max();
        let v = check_strictly_increasing_first(&max, 100);
        assert_eq!(v.witness().unwrap().degrees, vec![0.2, 0.3, 0.5]);
        witness_reproduces_equal(&max, &v, [0, 1, 2]);
        let luk = BinaryOp::lukasiewicz(Kind::Conorm);
        let v = check_strictly_increasing_first(&luk, 100);
        assert_eq!(v.witness().unwrap().degrees, vec![0.8, 0.9, 0.5]);
        witness_reproduces_equal(&luk, &v, [0, 1, 2]);
        for op in [
            BinaryOp::drastic(Kind::Conorm),
            BinaryOp::drastic(Kind::Norm),
            BinaryOp::min(),
            BinaryOp::lukasiewicz(Kind::Norm),
            BinaryOp::ordinal_sum(Kind::Conorm),
            BinaryOp::ordinal_sum(Kind::Norm),
            BinaryOp::schweizer_sklar(Kind::Conorm, 2.0),
            BinaryOp::schweizer_sklar(Kind::Norm, 2.0),
            BinaryOp::schweizer_sklar(Kind::Conorm, 0.5),
        ] {
            let v = check_strictly_increasing_first(&op, 100);
            witness_reproduces_equal(&op, &v, [0, 1, 2]);
        }
        let custom = BinaryOp::custom(Kind::Conorm, "max-copy", f64::max);
        assert!(check_strictly_increasing_first(&custom, 20).fails());
    }

    #[test]
    fn collapse_verdicts() {
        let luk = BinaryOp::lukasiewicz(Kind::Conorm);
        let v = check_collapse_implies_absorption(&luk, 100).unwrap();
        assert_eq!(v.witness().unwrap().degrees, vec![0.5, 0.6, 0.7]);
        for op in [
            luk,
            BinaryOp::drastic(Kind::Conorm),
            BinaryOp::ordinal_sum(Kind::Conorm),
            BinaryOp::schweizer_sklar(Kind::Conorm, 3.0),
        ] {
            let v = check_collapse_implies_absorption(&op, 100).unwrap();
            let d = &v.witness().unwrap().degrees;
            let (w, t, s) = (d[0], d[1], d[2]);
            assert_eq!(op.eval(t, w), op.eval(s, w));
            assert!(op.eval(t, w) > w);
        }
        assert!(check_collapse_implies_absorption(&BinaryOp::max(), 100)
            .unwrap()
            .holds());
        assert!(check_collapse_implies_absorption(&BinaryOp::probabilistic_sum(), 100)
            .unwrap()
            .holds());
        assert!(check_collapse_implies_absorption(&BinaryOp::min(), 100).is_err());
    }

    #[test]
    fn probabilistic_sum_sweep_finds_no_collapse() {
        assert_eq!(collapse_witness_sweep(&BinaryOp::probabilistic_sum(), 100, None), None);
        assert_eq!(collapse_witness_sweep(&BinaryOp::max(), 100, None), None);
        assert!(collapse_witness_sweep(&BinaryOp::lukasiewicz(Kind::Conorm), 100, None).is_some());
    }

    #[test]
    fn strict_near_zero_verdicts() {
        let v = check_strict_near_zero(&BinaryOp::max(), 100).unwrap();
        let d = &v.witness().unwrap().degrees;
        assert_eq!(d[0], 0.5);
        assert_eq!(BinaryOp::max().eval(d[1], 0.5), 0.5);
        assert_eq!(BinaryOp::max().eval(d[2], 0.5), 0.5);
        assert!(check_strict_near_zero(&BinaryOp::lukasiewicz(Kind::Conorm), 100)
            .unwrap()
            .holds());
        assert!(check_strict_near_zero(&BinaryOp::probabilistic_sum(), 100)
            .unwrap()
            .holds());
        let custom = BinaryOp::custom(Kind::Conorm, "prob", |x, y| x + y - x * y);
        assert_eq!(check_strict_near_zero(&custom, 50).unwrap(), TriState::UnknownSampled);
        let custom_max = BinaryOp::custom(Kind::Conorm, "max", f64::max);
        assert!(check_strict_near_zero(&custom_max, 50).unwrap().fails());
    }

    #[test]
    fn table_operator_interpolates() {
        let rows = vec![vec![0.0, 0.5, 1.0], vec![0.5, 0.5, 1.0], vec![1.0, 1.0, 1.0]];
        let op = BinaryOp::from_table(Kind::Conorm, "t", rows).unwrap();
        assert_eq!(op.eval(0.0, 0.5), 0.5);
        assert_eq!(op.eval(0.25, 0.0), 0.25);
        assert!(BinaryOp::from_table(Kind::Conorm, "t", vec![vec![0.0, 2.0], vec![1.0, 1.0]]).is_err());
        assert!(BinaryOp::from_table(Kind::Conorm, "t", vec![vec![0.0, 1.0], vec![1.0]]).is_err());
    }
}

//! Finite fuzzy binary relations and the `fuzzrel` text format.
//!
//! ```text
//! fuzzrel 1
//! # comments start with '#'
//! universe x y
//! degrees
//! 1   1
//! 0.5 1
//! ```
//!
//! Rows are the first argument, columns the second. Degrees may be separated
//! by whitespace or commas.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::ops::{BinaryOp, Kind};
use crate::EPS;

pub const FORMAT_HEADER: &str = "fuzzrel 1";

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyRelation {
    labels: Vec<String>,
    degrees: Vec<f64>,
}

fn check_degree(row: usize, column: usize, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::DegreeOutOfRange {
            row: row + 1,
            column: column + 1,
            value,
        })
    }
}

impl FuzzyRelation {
    /// Builds a relation from labels and a square matrix.
    pub fn new(labels: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = labels.len();
        if rows.len() != n {
            return Err(Error::Precondition(format!(
                "expected {n} rows for {n} labels, found {}",
                rows.len()
            )));
        }
        let mut degrees = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::Precondition(format!(
                    "row {} has {} values, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
            for (j, v) in row.into_iter().enumerate() {
                check_degree(i, j, v)?;
                degrees.push(v);
            }
        }
        Ok(FuzzyRelation { labels, degrees })
    }

    /// Labels `x1..xn` and a row-major degree vector.
    pub fn with_default_labels(n: usize, degrees: Vec<f64>) -> Result<Self> {
        if degrees.len() != n * n {
            return Err(Error::Precondition(format!(
                "expected {} degrees, found {}",
                n * n,
                degrees.len()
            )));
        }
        for (k, &v) in degrees.iter().enumerate() {
            check_degree(k / n.max(1), k % n.max(1), v)?;
        }
        Ok(FuzzyRelation {
            labels: default_labels(n),
            degrees,
        })
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(default_labels(rows.len()), rows)
    }

    /// Builds a relation by evaluating `f(i, j)`; values are clamped into `[0,1]`.
    pub fn from_fn(labels: Vec<String>, f: impl Fn(usize, usize) -> f64) -> Self {
        let n = labels.len();
        let degrees = (0..n * n).map(|k| f(k / n, k % n).clamp(0.0, 1.0)).collect();
        FuzzyRelation { labels, degrees }
    }

    pub fn zeros(labels: Vec<String>) -> Self {
        Self::from_fn(labels, |_, _| 0.0)
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.degrees[i * self.size() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) -> Result<()> {
        check_degree(i, j, value)?;
        let n = self.size();
        self.degrees[i * n + j] = value;
        Ok(())
    }

    /// Row-major degrees.
    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.degrees.chunks(self.size().max(1)).map(<[f64]>::to_vec).collect()
    }

    pub fn same_universe(&self, other: &FuzzyRelation) -> bool {
        self.labels == other.labels
    }

    pub(crate) fn require_same_universe(&self, other: &FuzzyRelation) -> Result<()> {
        if self.same_universe(other) {
            Ok(())
        } else {
            Err(Error::UniverseMismatch)
        }
    }

    pub fn transpose(&self) -> FuzzyRelation {
        FuzzyRelation::from_fn(self.labels.clone(), |i, j| self.get(j, i))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> {
        let n = self.size();
        (0..n).flat_map(move |i| (0..n).map(move |j| (i, j)))
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairs().all(|(i, j)| self.get(i, j) == self.get(j, i))
    }

    pub fn is_asymmetric(&self) -> bool {
        self.pairs()
            .all(|(i, j)| self.get(i, j) == 0.0 || self.get(j, i) == 0.0)
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.size()).all(|i| self.get(i, i) == 1.0)
    }

    pub fn is_crisp(&self) -> bool {
        self.degrees.iter().all(|&v| v == 0.0 || v == 1.0)
    }

    /// `R(x,z) ≥ T(R(x,y), R(y,z)) − ε` for all triples.
    pub fn is_t_transitive(&self, t: &BinaryOp) -> Result<bool> {
        t.expect_kind(Kind::Norm)?;
        let n = self.size();
        Ok((0..n)
            .all(|x| (0..n).all(|y| (0..n).all(|z| self.get(x, z) >= t.eval(self.get(x, y), self.get(y, z)) - EPS))))
    }

    /// `S(R(x,y), R(y,x)) ≥ 1 − ε` for all pairs, including the diagonal.
    pub fn is_s_connected(&self, s: &BinaryOp) -> Result<bool> {
        s.expect_kind(Kind::Conorm)?;
        Ok(self
            .pairs()
            .all(|(i, j)| s.eval(self.get(i, j), self.get(j, i)) >= 1.0 - EPS))
    }

    /// Strict part `R ∧ ¬Rᵗ` and symmetric part `R ∧ Rᵗ` of a crisp relation.
    pub fn crisp_decompose(&self) -> Result<(FuzzyRelation, FuzzyRelation)> {
        if let Some((k, &v)) = self.degrees.iter().enumerate().find(|(_, &v)| v != 0.0 && v != 1.0) {
            let n = self.size();
            return Err(Error::NotCrisp {
                row: k / n + 1,
                column: k % n + 1,
                value: v,
            });
        }
        let p = FuzzyRelation::from_fn(self.labels.clone(), |i, j| {
            if self.get(i, j) == 1.0 && self.get(j, i) == 0.0 {
                1.0
            } else {
                0.0
            }
        });
        let i = FuzzyRelation::from_fn(self.labels.clone(), |a, b| self.get(a, b).min(self.get(b, a)));
        Ok((p, i))
    }

    /// Pointwise `op(self, other)`.
    pub fn combine(&self, other: &FuzzyRelation, op: &BinaryOp) -> Result<FuzzyRelation> {
        self.require_same_universe(other)?;
        Ok(FuzzyRelation::from_fn(self.labels.clone(), |i, j| {
            op.eval(self.get(i, j), other.get(i, j))
        }))
    }

    /// Repeats `R ← max(R, T(R∘R))` (sup-T composition) until nothing changes by more than ε.
    pub fn t_transitive_closure(&self, t: &BinaryOp) -> Result<FuzzyRelation> {
        t.expect_kind(Kind::Norm)?;
        let n = self.size();
        let mut current = self.clone();
        for _ in 0..=n * n + 1 {
            let mut changed = false;
            let mut next = current.clone();
            for x in 0..n {
                for z in 0..n {
                    let mut best = current.get(x, z);
                    for y in 0..n {
                        best = best.max(t.eval(current.get(x, y), current.get(y, z)));
                    }
                    if best > current.get(x, z) + EPS {
                        changed = true;
                    }
                    next.degrees[x * n + z] = best;
                }
            }
            current = next;
            if !changed {
                break;
            }
        }
        Ok(current)
    }

    /// Parses the `fuzzrel` text format.
    pub fn parse(text: &str) -> Result<Self> {
        let perr = |line: usize, row: Option<usize>, column: Option<usize>, message: String| Error::Parse {
            line,
            row,
            column,
            message,
        };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());

        let (line, header) = lines
            .next()
            .ok_or_else(|| perr(1, None, None, format!("empty input, expected `{FORMAT_HEADER}`")))?;
        if header.split_whitespace().collect::<Vec<_>>() != ["fuzzrel", "1"] {
            return Err(perr(
                line,
                None,
                None,
                format!("expected header `{FORMAT_HEADER}`, found `{header}`"),
            ));
        }

        let (line, universe) = lines
            .next()
            .ok_or_else(|| perr(line, None, None, "missing `universe` line".into()))?;
        let mut tokens = universe.split_whitespace();
        if tokens.next() != Some("universe") {
            return Err(perr(
                line,
                None,
                None,
                format!("expected `universe <labels>`, found `{universe}`"),
            ));
        }
        let labels: Vec<String> = tokens.map(str::to_string).collect();
        if labels.is_empty() {
            return Err(perr(line, None, None, "universe has no elements".into()));
        }
        for (k, l) in labels.iter().enumerate() {
            if labels[..k].contains(l) {
                return Err(perr(line, None, Some(k + 1), format!("duplicate label `{l}`")));
            }
        }
        let n = labels.len();

        let (line, marker) = lines
            .next()
            .ok_or_else(|| perr(line, None, None, "missing `degrees` line".into()))?;
        if marker != "degrees" {
            return Err(perr(line, None, None, format!("expected `degrees`, found `{marker}`")));
        }

        let mut degrees = Vec::with_capacity(n * n);
        let mut last_line = line;
        for row in 0..n {
            let (line, content) = lines.next().ok_or_else(|| {
                perr(
                    last_line,
                    Some(row + 1),
                    None,
                    format!("expected {n} rows, found {row}"),
                )
            })?;
            last_line = line;
            let values: Vec<&str> = content
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .collect();
            if values.len() != n {
                return Err(perr(
                    line,
                    Some(row + 1),
                    None,
                    format!("expected {n} values, found {}", values.len()),
                ));
            }
            for (col, tok) in values.into_iter().enumerate() {
                let v: f64 = tok
                    .parse()
                    .map_err(|_| perr(line, Some(row + 1), Some(col + 1), format!("`{tok}` is not a number")))?;
                if !(0.0..=1.0).contains(&v) {
                    return Err(perr(
                        line,
                        Some(row + 1),
                        Some(col + 1),
                        format!("degree {tok} is outside [0, 1]"),
                    ));
                }
                degrees.push(v);
            }
        }
        if let Some((line, extra)) = lines.next() {
            return Err(perr(
                line,
                None,
                None,
                format!("unexpected content after the matrix: `{extra}`"),
            ));
        }
        Ok(FuzzyRelation { labels, degrees })
    }

    /// Serialises in the `fuzzrel` format; degrees round-trip bit for bit.
    pub fn to_text(&self) -> String {
        let mut out = format!("{FORMAT_HEADER}\nuniverse {}\ndegrees\n", self.labels.join(" "));
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|&v| format_degree(v)).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Shortest decimal form that parses back to the same `f64`.
pub fn format_degree(v: f64) -> String {
    format!("{v}")
}

pub fn default_labels(n: usize) -> Vec<String> {
    (1..=n).map(|k| format!("x{k}")).collect()
}

impl FromStr for FuzzyRelation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FuzzyRelation::parse(s)
    }
}

impl fmt::Display for FuzzyRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::BinaryOp;

    fn rel(rows: Vec<Vec<f64>>) -> FuzzyRelation {
        FuzzyRelation::from_rows(rows).unwrap()
    }

    #[test]
    fn symmetry() {
        assert!(rel(vec![vec![1.0, 0.5], vec![0.5, 1.0]]).is_symmetric());
        assert!(!rel(vec![vec![1.0, 1.0], vec![0.5, 1.0]]).is_symmetric());
        assert!(rel(vec![vec![0.0, 0.0], vec![0.0, 0.0]]).is_symmetric());
    }

    #[test]
    fn asymmetry() {
        assert!(rel(vec![vec![0.0, 1.0], vec![0.0, 0.0]]).is_asymmetric());
        assert!(!rel(vec![vec![0.0, 0.5], vec![0.1, 0.0]]).is_asymmetric());
        assert!(rel(vec![vec![0.0, 0.0], vec![0.0, 0.0]]).is_asymmetric());
        assert!(!rel(vec![vec![1.0, 0.0], vec![0.0, 0.0]]).is_asymmetric());
    }

    #[test]
    fn transitivity() {
        let c = rel(vec![vec![0.4; 3]; 3]);
        assert!(c.is_t_transitive(&BinaryOp::min()).unwrap());
        let r = rel(vec![vec![1.0, 1.0, 0.3], vec![0.0, 1.0, 1.0], vec![0.0, 0.0, 1.0]]);
        assert!(!r.is_t_transitive(&BinaryOp::min()).unwrap());
        // crisp total preorder x1 ≥ x2 ≥ x3
        let p = rel(vec![vec![1.0, 1.0, 1.0], vec![0.0, 1.0, 1.0], vec![0.0, 0.0, 1.0]]);
        assert!(p.is_t_transitive(&BinaryOp::product()).unwrap());
        assert!(p.is_t_transitive(&BinaryOp::max()).is_err());
    }

    #[test]
    fn connectedness() {
        let r = rel(vec![vec![1.0, 0.6], vec![0.5, 1.0]]);
        assert!(r.is_s_connected(&BinaryOp::lukasiewicz(Kind::Conorm)).unwrap());
        let r = rel(vec![vec![1.0, 0.6], vec![0.3, 1.0]]);
        assert!(!r.is_s_connected(&BinaryOp::max()).unwrap());
        let r = rel(vec![vec![1.0, 1.0], vec![0.2, 1.0]]);
        assert!(r.is_s_connected(&BinaryOp::max()).unwrap());
    }

    #[test]
    fn crispness() {
        assert!(rel(vec![vec![1.0; 2]; 2]).is_crisp());
        assert!(!rel(vec![vec![0.5; 2]; 2]).is_crisp());
        assert!(rel(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).is_crisp());
    }

    #[test]
    fn crisp_decomposition() {
        let (p, i) = rel(vec![vec![1.0; 2]; 2]).crisp_decompose().unwrap();
        assert!(p.degrees().iter().all(|&v| v == 0.0));
        assert!(i.degrees().iter().all(|&v| v == 1.0));
        let (p, i) = rel(vec![vec![0.0, 1.0], vec![0.0, 0.0]]).crisp_decompose().unwrap();
        assert_eq!(p.degrees(), &[0.0, 1.0, 0.0, 0.0]);
        assert!(i.degrees().iter().all(|&v| v == 0.0));
        let (p, i) = rel(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).crisp_decompose().unwrap();
        assert!(p.degrees().iter().all(|&v| v == 0.0));
        assert_eq!(i.degrees(), &[1.0, 0.0, 0.0, 1.0]);
        assert!(matches!(
            rel(vec![vec![0.5; 2]; 2]).crisp_decompose(),
            Err(Error::NotCrisp { row: 1, column: 1, .. })
        ));
    }

    #[test]
    fn parse_and_round_trip() {
        let text = "fuzzrel 1\n# example\nuniverse x y\ndegrees\n1 1\n0.5, 1\n";
        let r = FuzzyRelation::parse(text).unwrap();
        assert_eq!(r.labels(), &["x".to_string(), "y".to_string()]);
        assert_eq!(r.get(1, 0), 0.5);
        let odd = rel(vec![vec![0.1 + 0.2, 1.0 / 3.0], vec![1e-300, 0.7]]);
        let back = FuzzyRelation::parse(&odd.to_text()).unwrap();
        assert_eq!(back, odd);
    }

    #[test]
    fn parse_errors_carry_position() {
        let bad = "fuzzrel 1\nuniverse a b\ndegrees\n1 0.5\n0.2 abc\n";
        match FuzzyRelation::parse(bad) {
            Err(Error::Parse { line, row, column, .. }) => {
                assert_eq!((line, row, column), (5, Some(2), Some(2)));
            }
            other => panic!("unexpected {other:?}"),
        }
        let range = "fuzzrel 1\nuniverse a b\ndegrees\n1 1.5\n0 1\n";
        assert!(matches!(
            FuzzyRelation::parse(range),
            Err(Error::Parse {
                row: Some(1),
                column: Some(2),
                ..
            })
        ));
        assert!(FuzzyRelation::parse("fuzzrel 2\n").is_err());
        assert!(FuzzyRelation::parse("fuzzrel 1\nuniverse a\ndegrees\n").is_err());
        assert!(FuzzyRelation::parse("fuzzrel 1\nuniverse a\ndegrees\n1\n1\n").is_err());
        assert!(FuzzyRelation::parse("fuzzrel 1\nuniverse a a\ndegrees\n1 1\n1 1\n").is_err());
    }

    #[test]
    fn closure_is_transitive() {
        let r = rel(vec![vec![1.0, 0.8, 0.0], vec![0.0, 1.0, 0.6], vec![0.1, 0.0, 1.0]]);
        for t in [BinaryOp::min(), BinaryOp::product(), BinaryOp::lukasiewicz(Kind::Norm)] {
            let c = r.t_transitive_closure(&t).unwrap();
            assert!(c.is_t_transitive(&t).unwrap());
            assert!(c.pairs().all(|(i, j)| c.get(i, j) >= r.get(i, j)));
        }
    }
}

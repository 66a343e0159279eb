use std::fmt;

/// Evidence attached to a failed universally quantified claim.
///
/// `degrees` carries the pair/triple of degrees at which the property fails,
/// `elements` the universe indices when the claim is about a relation.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Witness {
    pub degrees: Vec<f64>,
    pub elements: Vec<usize>,
    pub reason: String,
}

impl Witness {
    pub fn degrees(degrees: impl Into<Vec<f64>>, reason: impl Into<String>) -> Self {
        Witness {
            degrees: degrees.into(),
            elements: Vec::new(),
            reason: reason.into(),
        }
    }

    pub fn elements(elements: impl Into<Vec<usize>>, reason: impl Into<String>) -> Self {
        Witness {
            degrees: Vec::new(),
            elements: elements.into(),
            reason: reason.into(),
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.degrees.is_empty() {
            let d: Vec<String> = self.degrees.iter().map(|v| format!("{v}")).collect();
            write!(f, "({}) ", d.join(", "))?;
        }
        if !self.elements.is_empty() {
            let e: Vec<String> = self.elements.iter().map(|v| v.to_string()).collect();
            write!(f, "[{}] ", e.join(", "))?;
        }
        f.write_str(&self.reason)
    }
}

/// Verdict for a claim that is checked analytically where possible and
/// numerically otherwise.
#[derive(Debug, Clone, PartialEq)]
pub enum TriState {
    Holds,
    Fails(Witness),
    /// Every sampled instance passed, but the claim is universal.
    UnknownSampled,
}

impl TriState {
    pub fn holds(&self) -> bool {
        matches!(self, TriState::Holds)
    }

    pub fn fails(&self) -> bool {
        matches!(self, TriState::Fails(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            TriState::Fails(w) => Some(w),
            _ => None,
        }
    }

    /// Holds or UnknownSampled.
    pub fn not_refuted(&self) -> bool {
        !self.fails()
    }

    /// Conjunction: the first failure wins, any sampled verdict downgrades Holds.
    pub fn and(self, other: TriState) -> TriState {
        match (self, other) {
            (TriState::Fails(w), _) | (_, TriState::Fails(w)) => TriState::Fails(w),
            (TriState::Holds, TriState::Holds) => TriState::Holds,
            _ => TriState::UnknownSampled,
        }
    }
}

impl fmt::Display for TriState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TriState::Holds => f.write_str("holds"),
            TriState::Fails(w) => write!(f, "fails: {w}"),
            TriState::UnknownSampled => f.write_str("unknown (all samples passed)"),
        }
    }
}

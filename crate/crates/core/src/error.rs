use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown operator family `{0}`")]
    UnknownFamily(String),

    #[error("parameter {lambda} out of range for {family}: {expected}")]
    ParameterOutOfRange {
        family: String,
        lambda: String,
        expected: &'static str,
    },

    #[error("malformed operator spec `{spec}`: {reason}")]
    BadOpSpec { spec: String, reason: String },

    #[error("expected a t-{expected}, got a t-{found}")]
    WrongKind {
        expected: &'static str,
        found: &'static str,
    },

    #[error("degree {value} at row {row}, column {column} is outside [0,1]")]
    DegreeOutOfRange { row: usize, column: usize, value: f64 },

    #[error("line {line}{}: {message}", position_suffix(*.row, *.column))]
    Parse {
        line: usize,
        row: Option<usize>,
        column: Option<usize>,
        message: String,
    },

    #[error("relations have different universes")]
    UniverseMismatch,

    #[error("relation is not crisp: degree {value} at ({row}, {column})")]
    NotCrisp { row: usize, column: usize, value: f64 },

    #[error("conorm `{op}` is not continuous in the first coordinate (jump near t={t}, w={w}); decompositions need not exist")]
    Discontinuous { op: String, t: f64, w: f64 },

    #[error("residual infimum not attained at pair ({row}, {column}): no t reconstructs {target}")]
    Unattained { row: usize, column: usize, target: f64 },

    #[error("strong decompositions do not exist for ({norm}, {conorm}): {reason}")]
    NoStrongDecomposition {
        norm: String,
        conorm: String,
        reason: String,
    },

    #[error("search space of {candidates} candidate decompositions exceeds the limit of {limit}")]
    TooLarge { candidates: u128, limit: u128 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal consistency error: {0}")]
    Internal(String),
}

fn position_suffix(row: Option<usize>, column: Option<usize>) -> String {
    match (row, column) {
        (Some(r), Some(c)) => format!(" (row {r}, column {c})"),
        (Some(r), None) => format!(" (row {r})"),
        _ => String::new(),
    }
}

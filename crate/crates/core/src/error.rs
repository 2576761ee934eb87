use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid convolutional code spec: {0}")]
    InvalidSpec(String),

    #[error("observations are inconsistent with every trellis path (section {section})")]
    InfeasibleObservation { section: usize },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("invalid ensemble parameters: {0}")]
    InvalidParams(String),

    #[error("coupling-bit criterion could not be satisfied: {0}")]
    CriterionInfeasible(String),

    #[error("area theorem has no solution: integral of the EXIT curve over [0,1] is {total}, below rate {rate}")]
    NoAreaSolution { total: f64, rate: f64 },

    #[error("outside the scope of the capacity bound: {0}")]
    OutOfTheoremScope(String),

    #[error("malformed transfer table: {0}")]
    TableFormat(String),
}

impl Error {
    /// Stable snake_case tag for machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidSpec(_) => "invalid_spec",
            Error::InfeasibleObservation { .. } => "infeasible_observation",
            Error::LengthMismatch { .. } => "length_mismatch",
            Error::InvalidParams(_) => "invalid_params",
            Error::CriterionInfeasible(_) => "criterion_infeasible",
            Error::NoAreaSolution { .. } => "no_area_solution",
            Error::OutOfTheoremScope(_) => "out_of_theorem_scope",
            Error::TableFormat(_) => "table_format",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

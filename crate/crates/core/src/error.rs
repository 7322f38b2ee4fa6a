use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("linear program is not in equality form")]
    NotEqualityForm,
    #[error("LP relaxation is unbounded")]
    UnboundedRelaxation,
    #[error("LP relaxation is infeasible")]
    InfeasibleRelaxation,
    #[error("enumeration of {points} points exceeds the cap of {cap}")]
    TooLarge { points: u128, cap: u128 },
    #[error("Jeroslow instances need an odd variable count, got {0}")]
    EvenN(usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("degenerate cut (f0 = 0){}", .index.map(|i| format!(" at position {i}")).unwrap_or_default())]
    DegenerateCut { index: Option<usize> },
    #[error("variable {0} is integral at the LP optimum")]
    IntegralCoordinate(usize),
    #[error("augmented system is singular")]
    SingularAugmentedSystem,
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

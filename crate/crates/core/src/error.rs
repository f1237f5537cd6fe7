use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlexusError {
    #[error("serial number needs more than the {budget}-bit budget (exponent {exponent})")]
    BudgetExceeded { budget: u64, exponent: String },

    #[error("rank/stage {requested} exceeds the supported maximum {max}")]
    RankTooLarge { requested: usize, max: usize },

    #[error("stage mismatch: {left} vs {right}")]
    StageMismatch { left: usize, right: usize },

    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("plane is non-compact: the spin generator squares to +1")]
    NonCompactPlane,

    #[error("operator is not a complex structure: its square is not -1")]
    NotAComplexStructure,

    #[error("tensor realization too large: {cells} cells (maximum {max})")]
    TooLarge { cells: usize, max: usize },

    #[error("contraction sweep is empty")]
    EmptySweep,

    #[error("not enough sweep points for a fit: {got} (need {need})")]
    TooFewPoints { got: usize, need: usize },

    #[error("chirality operator squares to -1 under signature {0}; no real chiral split")]
    NoRealChiralSplit(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = PlexusError> = std::result::Result<T, E>;

//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid prime configuration: {0}")]
    InvalidConfig(String),

    #[error("values belong to different prime configurations")]
    ContextMismatch,

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("element is not a unit")]
    NonUnit,

    #[error("matrix determinant is not a unit")]
    NonUnitDeterminant,

    #[error("requested {requested} Teichmuller units but only {available} nonzero residues exist")]
    TeichmullerCount { requested: usize, available: usize },

    #[error("decision depends on a valuation only known as a lower bound: {0}")]
    IndeterminatePrecision(String),

    #[error("operation needs series data beyond truncation degree {trunc}: {needed}")]
    TruncationExceeded { trunc: u32, needed: String },

    #[error("inner series has a nonzero constant term")]
    NonzeroConstantTerm,

    #[error("evaluation point component {0} does not have positive valuation")]
    NonPositiveValuation(usize),

    #[error("reduced curve is singular: discriminant is not a unit")]
    SingularReduction,

    #[error("component {0} has no unit-coefficient monomial up to the truncation degree")]
    InfiniteHeightComponent(usize),

    #[error("component {component} has minimal unit degree {degree}, which is not a power of p")]
    NonPPowerDegree { component: usize, degree: u32 },

    #[error("series has no unit coefficient up to the truncation degree")]
    NoUnitCoefficient,

    #[error("not an Eisenstein polynomial: {0}")]
    InvalidEisenstein(String),

    #[error("polynomial hint does not evaluate to the element")]
    HintMismatch,

    #[error("embedding image is not a root to working precision (residual valuation {residual})")]
    EmbeddingResidual { residual: String },

    #[error("enumeration budget exceeded: search space {space} exceeds budget {budget}")]
    EnumerationBudget { space: u128, budget: u128 },

    #[error("linear transform collapses component {0} modulo p")]
    TransformCollapsed(usize),

    #[error("formal group is not strict")]
    NotStrict,

    #[error("root analysis unsupported for non-product groups of dimension {0}")]
    UnsupportedDimension(usize),

    #[error("Newton lift diverged: no starting residue met the descent criterion")]
    LiftDiverged,
}

pub type Result<T> = std::result::Result<T, Error>;

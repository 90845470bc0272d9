use thiserror::Error;

use crate::label::Label;
use crate::rational::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the engine when a construction or operation receives
/// inputs that violate its contract.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid atomic label {0:?}")]
    InvalidLabel(String),
    #[error("tuple labels need at least two components, got {0}")]
    TupleArity(usize),
    #[error("duplicate outcome label {0}")]
    DuplicateLabel(Label),
    #[error("outcome {label} has non-positive mass {mass}")]
    NonPositiveMass { label: Label, mass: Rational },
    #[error("masses sum to {0}, not 1")]
    MassNotNormalized(Rational),
    #[error("a scheme needs at least one outcome")]
    EmptySupport,
    #[error("expected {expected} entries, got {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("no value given for outcome {0}")]
    MissingValue(Label),
    #[error("empty sequence where at least one element is required")]
    EmptySequence,
    #[error("operands live on different schemes")]
    DomainMismatch,
    #[error("unknown outcome label {0}")]
    UnknownLabel(Label),
    #[error("bundle misses base outcome {0}")]
    NotSurjective(Label),
    #[error("fiber over {label} has mass {fiber_mass}, base mass is {base_mass}")]
    NotMeasurePreserving {
        label: Label,
        fiber_mass: Box<Rational>,
        base_mass: Box<Rational>,
    },
    #[error("schemes do not match for composition")]
    SchemeMismatch,
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("block is not a block of the partition")]
    UnknownBlock,
    #[error("conditioning event is empty")]
    EmptyConditioningEvent,
    #[error("function table has no entry for value {0}")]
    IncompleteTable(Rational),
    #[error("first partition does not refine the second")]
    NotARefinement,
    #[error("partition blocks have unequal sizes")]
    UnequalBlockSizes,
    #[error("scheme is not uniform")]
    NonUniformScheme,
    #[error("regressor has zero variance")]
    DegenerateRegressor,
    #[error("epsilon must be positive, got {0}")]
    NonPositiveEpsilon(Rational),
    #[error("inputs {0} and {1} are correlated")]
    CorrelatedInputs(usize, usize),
    #[error("variance of input {index} is {variance}, above the bound {bound}")]
    VarianceBoundViolated {
        index: usize,
        variance: Box<Rational>,
        bound: Box<Rational>,
    },
    #[error("bundles do not share a base scheme")]
    BaseMismatch,
    #[error("tower bundles do not compose")]
    CompositionMismatch,
    #[error("bundles do not have the shape of a fiber-product chain")]
    ShapeMismatch,
    #[error("a chain needs at least two random functions, got {0}")]
    TooShort(usize),
    #[error("marginals of pair scheme {0} and its successor disagree")]
    MarginalMismatch(usize),
    #[error("outcome {0} is not a pair label")]
    NotAPairScheme(Label),
}

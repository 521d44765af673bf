use thiserror::Error;

/// Errors shared by the series engine, transform pipeline and matrix models.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("division by a series with zero constant term")]
    DivisionByZeroConstant,
    #[error("inner series of a composition must have zero constant term")]
    NonzeroInnerConstant,
    #[error("series reversion requires a nonzero linear coefficient")]
    ZeroLinearCoefficient,
    #[error("series square root requires a positive constant term")]
    NonpositiveConstant,
    #[error("product of two half-power series would carry a z^-1 factor")]
    DoubleHalfPower,
    #[error("moments are not available to order {0}")]
    UnsupportedOrder(usize),
    #[error("input does not carry enough moments for this push-forward")]
    InsufficientOrder,
    #[error("measure must be supported in (0, infinity)")]
    NegativeSupport,
    #[error("invalid distribution parameters: {0}")]
    InvalidParams(String),
    #[error("no closed-form S-transform for this family")]
    NoClosedForm,
    #[error("this family has no density")]
    NoDensity,
    #[error("first moment must be nonzero")]
    ZeroFirstMoment,
    #[error("convolution power {0} below 1 requires a free-infinitely-divisible input")]
    InvalidExponent(f64),
    #[error("expected a symmetric distribution")]
    AsymmetricInput,
    #[error("mixing measure atoms must have positive scale")]
    NegativeScale,
    #[error("sequence too short for a Hankel test")]
    TooShort,
    #[error("closed-form evaluation failed at t = {0}")]
    EvaluationFailure(f64),
    #[error("matrix dimension must be at least 2")]
    InvalidDimension,
    #[error("no matrix model is available for this spec: {0}")]
    ModelUnavailable(String),
    #[error("invalid spec: {0}")]
    SpecValidation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("differentiation order {0} exceeds the supported maximum of 3")]
    OrderTooHigh(usize),
    #[error("non-finite component (evaluation at or near a singular locus)")]
    NonFinite,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("degenerate metric: conditioning proxy {0:e} exceeds 1e12")]
    DegenerateMetric(f64),
    #[error("slot {slot} out of range for a rank-{rank} tensor")]
    SlotOutOfRange { slot: usize, rank: usize },
    #[error("slots {a} and {b} cannot be paired without a metric of matching variance")]
    VarianceMismatch { a: usize, b: usize },
    #[error("the Weyl tensor needs dimension at least 3, got {0}")]
    WeylDimension(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("point lies outside the solution domain")]
    OutsideDomain,
    #[error("no in-domain sample points")]
    EmptySample,
    #[error("F² vanishes at the point, so the (para-)complex structure is undefined")]
    NullStructure,
    #[error("field depends on the Kaluza-Klein coordinate (∂_d ĝ = {0:e})")]
    DependsOnExtraCoordinate(f64),
    #[error("{0}")]
    Unsupported(String),
}

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{op}: dimension mismatch {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("symplectic membership needs even size, got {0}")]
    OddSize(usize),
    #[error("lower right entry does not vanish (|corner| = {magnitude:e})")]
    CornerNotVanishing { magnitude: f64 },
    #[error("corner reduction failed at probe point {point:?}: |corner| = {magnitude:e}")]
    ReductionInapplicable { point: Vec<f64>, magnitude: f64 },
    #[error("{name} = {value} outside [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("cylinder ends are not constant (residual {residual:e})")]
    EndpointNotConstant { residual: f64 },
    #[error("map is not symplectic-valued (residual {residual:e})")]
    NotSymplectic { residual: f64 },
    #[error("point within {distance:e} of the chart pole")]
    PoleProximity { distance: f64 },
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("unknown map {0:?}")]
    UnknownMap(String),
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error("sample budget {samples} below the minimum {minimum}")]
    InsufficientBudget { samples: usize, minimum: usize },
    #[error("non-finite Jacobian density at {bad} of {samples} samples")]
    NonFiniteDensity { bad: usize, samples: usize },
    #[error("target is not a regular value (|Jacobian| = {jacobian:e}); pick another target")]
    NonRegularTarget { jacobian: f64 },
    #[error("preimage counts disagree between targets ({first} vs {second}); insufficient starts")]
    InsufficientStarts { first: i64, second: i64 },
    #[error("invalid point: {0}")]
    InvalidPoint(String),
}

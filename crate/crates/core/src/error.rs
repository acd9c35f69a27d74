use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid interval [{lo}, {hi}]: need lo < hi")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("interval [{lo}, {hi}] is not contained in domain [{dlo}, {dhi}]")]
    DomainViolation { lo: f64, hi: f64, dlo: f64, dhi: f64 },
    #[error("derivative order {0} exceeds the supported maximum of 4")]
    OrderTooHigh(usize),
    #[error("grid with {n} samples is too small (need at least {need})")]
    GridTooSmall { n: usize, need: usize },
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter { name: &'static str, value: f64, reason: &'static str },
    #[error("power-law fit needs positive inputs; got ({scale}, {value})")]
    NonPositiveFitInput { scale: f64, value: f64 },
    #[error("power-law fit needs {need}+ points spanning a scale ratio of at least {ratio}")]
    DegenerateSpan { need: usize, ratio: f64 },
    #[error("function is significantly negative: f({x}) = {value}")]
    NegativeFunction { x: f64, value: f64 },
    #[error("monotonicity hypothesis violated at x = {x} (value {value})")]
    MonotonicityViolation { x: f64, value: f64 },
    #[error("positivity hypothesis violated: f({x}) = {value}")]
    PositivityViolation { x: f64, value: f64 },
    #[error("branch precondition violated at x = {x}: f(x) = {f}, x^4 = {x4}")]
    BranchPrecondition { x: f64, f: f64, x4: f64 },
    #[error("expected a zero of f at {x}: f = {f}, f' = {fp}")]
    NotAZero { x: f64, f: f64, fp: f64 },
    #[error("one-sided limits of u_xx at {x} disagree: left {left}, right {right}, extension {ext}")]
    LimitMismatch { x: f64, left: f64, right: f64, ext: f64 },
    #[error("field is not radially symmetric at r = {r}: k(r,0) = {a}, other ray gives {b}")]
    NotRadial { r: f64, a: f64, b: f64 },
    #[error("partial derivative of order ({0}, {1}) is not available")]
    MissingPartial(usize, usize),
    #[error("direction ({l}, {m}) is not a unit vector")]
    UnnormalizedDirection { l: f64, m: f64 },
    #[error("u_x is not monotone in x at ({x}, {y})")]
    NotMonotone { x: f64, y: f64 },
    #[error("mollifier radius {tau} leaves no interior nodes")]
    TauTooLarge { tau: f64 },
    #[error("convexity violated at ({x}, {y}): second difference {value}")]
    NotConvex { x: f64, y: f64, value: f64 },
    #[error("residual {residual} at r = {r} exceeds tolerance {tol}")]
    ResidualTooLarge { r: f64, residual: f64, tol: f64 },
    #[error("family `{family}` does not have the declared trait {name}")]
    TraitMismatch { family: String, name: String },
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Malformed(e.to_string())
    }
}

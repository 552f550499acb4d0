use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("frequency vector must contain at least one entry")]
    EmptyFrequencies,

    #[error("frequency {index} is not finite")]
    NonFiniteFrequency { index: usize },

    #[error("expected real frequencies, entry {index} has imaginary part {imag:e}")]
    ComplexFrequency { index: usize, imag: f64 },

    #[error("frequency sum has imaginary part {imag:e}; the fundamental function is not real-valued")]
    NonRealFrequencySum { imag: f64 },

    #[error("result is not real: imaginary residue {imag:e} exceeds tolerance for value {value:e}")]
    NonRealResult { value: f64, imag: f64 },

    #[error("argument x*max|lambda| too large: scaling exponent {exponent} exceeds 60")]
    Overflow { exponent: u32 },

    #[error("frequencies {i} and {j} are closer than {min_gap:e}; partial fractions are ill-conditioned")]
    ConfluentFrequencies { i: usize, j: usize, min_gap: f64 },

    #[error("Taylor series tail bound {tail:e} did not fall below the target after {terms} terms")]
    TaylorNotConverged { terms: usize, tail: f64 },

    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("polynomial degree {degree} exceeds order {n}")]
    DegreeTooHigh { degree: usize, n: usize },

    #[error("Hankel half-order {k} requires derivative order 2k={twice} <= {top}")]
    HankelOrder { k: usize, twice: usize, top: usize },

    #[error("denominator {denominator:e} too close to zero")]
    NearZeroDenominator { denominator: f64 },

    #[error("quadrature did not converge: estimated error {error:e} after {evaluations} evaluations")]
    QuadratureNotConverged { error: f64, evaluations: usize },

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("Hankel matrix of the moment sequence is indefinite (pivot {pivot:e} at index {index})")]
    IndefiniteHankel { index: usize, pivot: f64 },

    #[error("recovered atom at {location} lies outside [0, {length}]")]
    AtomOutsideSupport { location: f64, length: f64 },

    #[error("recovered measure does not reproduce moment {index}: residual {residual:e}")]
    MomentMismatch { index: usize, residual: f64 },

    #[error("eigenvalue iteration did not converge")]
    EigenNotConverged,
}

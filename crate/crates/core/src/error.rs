use core::fmt;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An operation that needs mass was handed the zero measure.
    EmptyMeasure,
    /// An argument lies outside the domain of the operation.
    Domain(&'static str),
    /// A set, measure, Krein function or model failed validation.
    Invalid(&'static str),
    /// The atom constructor was asked for a point where the divergent-integral
    /// criterion rules out atoms.
    NoAtomPossible,
    /// A Krein function was expected to equal one half on a set.
    NotHalfOnSet { at: f64, value: f64 },
    /// A linear system or resolvent solve was numerically singular.
    Singular(&'static str),
    /// A sampled grid is too coarse for the requested operation.
    Resolution(&'static str),
    /// A computed density went negative beyond tolerance.
    NegativeDensity { at: f64, value: f64 },
    /// An internal consistency check failed; indicates a bug.
    Internal(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyMeasure => f.write_str("empty measure"),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Invalid(msg) => write!(f, "invalid input: {msg}"),
            Error::NoAtomPossible => f.write_str("inverse-distance integral diverges: no atom possible"),
            Error::NotHalfOnSet { at, value } => {
                write!(f, "Krein function equals {value} at {at}, expected 1/2 on the set")
            }
            Error::Singular(msg) => write!(f, "singular system: {msg}"),
            Error::Resolution(msg) => write!(f, "insufficient resolution: {msg}"),
            Error::NegativeDensity { at, value } => {
                write!(f, "density {value} < 0 at {at}")
            }
            Error::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

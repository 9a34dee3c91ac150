use core::fmt;

/// Domain errors shared by every module.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Covariance model parameters out of range (negative PSD entry,
    /// Hurst outside (0,1), non-PSD construction).
    InvalidModel(&'static str),
    /// Operand dimensions do not agree.
    DimMismatch { expected: usize, got: usize },
    /// Basis columns are not orthonormal.
    InvalidBasis,
    /// Real input required but imaginary parts found.
    InvalidInput(&'static str),
    /// Zero operator where a nonzero one is required.
    DegenerateInput,
    /// Wavelet fails the admissibility condition (nonzero mean).
    NotAdmissible,
    /// Requested scale cannot be resolved on the sample grid.
    ScaleOutOfRange { scale: f64, min: f64, max: f64 },
    /// Generator basis is linearly dependent.
    SingularGram,
    /// An eigenvalue came out more negative than roundoff allows.
    NumericalFailure(&'static str),
    /// Descriptor frequency above the Nyquist rate of the coarsest grid.
    Aliasing { freq: f64, nyquist: f64 },
    /// Signal has too much energy at the window or band edges for
    /// discrete moments to be meaningful.
    EdgeEnergy { fraction: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidModel(msg) => write!(f, "invalid model: {msg}"),
            Error::DimMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::InvalidBasis => write!(f, "basis is not orthonormal"),
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::DegenerateInput => write!(f, "degenerate (zero) operand"),
            Error::NotAdmissible => write!(f, "wavelet is not admissible"),
            Error::ScaleOutOfRange { scale, min, max } => {
                write!(f, "scale {scale} outside resolvable range [{min}, {max}]")
            }
            Error::SingularGram => write!(f, "generator basis is rank deficient"),
            Error::NumericalFailure(msg) => write!(f, "numerical failure: {msg}"),
            Error::Aliasing { freq, nyquist } => {
                write!(f, "frequency {freq} above Nyquist {nyquist}")
            }
            Error::EdgeEnergy { fraction } => {
                write!(f, "edge energy fraction {fraction:e} exceeds precondition")
            }
        }
    }
}

impl Error {
    /// Stable short name, used by the CLI for its diagnostic stream.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidModel(_) => "InvalidModel",
            Error::DimMismatch { .. } => "DimError",
            Error::InvalidBasis => "InvalidBasis",
            Error::InvalidInput(_) => "InvalidInput",
            Error::DegenerateInput => "DegenerateInput",
            Error::NotAdmissible => "NotAdmissible",
            Error::ScaleOutOfRange { .. } => "ScaleOutOfRange",
            Error::SingularGram => "SingularGram",
            Error::NumericalFailure(_) => "NumericalFailure",
            Error::Aliasing { .. } => "Aliasing",
            Error::EdgeEnergy { .. } => "EdgeEnergy",
        }
    }
}

use num_complex::Complex64;
use thiserror::Error;

/// Errors produced by the library.
///
/// Two broad classes matter to callers: parameter/usage errors (bad inputs
/// that no computation was attempted for) and numeric domain errors (the
/// requested point sits on a cut, a turning point, or outside a regime).
/// The CLI maps the former to exit code 2 and the latter to exit code 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// The transfer step at index `k` is (numerically) parabolic: the two
    /// eigenvalues of the deterministic step coincide and the factorization
    /// is undefined there. We refuse to regularize.
    #[error("parabolic transfer step at k = {k} (z = {z}): eigenvalues coincide")]
    ParabolicStep { k: usize, z: Complex64 },

    #[error("point {point} lies on or too close to the cut [-{half_width}, {half_width}]")]
    CutViolation { point: Complex64, half_width: f64 },

    #[error("z = {z} is outside {domain}")]
    DomainViolation { z: Complex64, domain: &'static str },

    #[error(
        "|q| = {abs_q:.6} needs {required} series terms for the tail budget, sample has {terms}"
    )]
    SeriesRadius {
        abs_q: f64,
        terms: usize,
        required: usize,
    },

    #[error("coincident boundary points x = y = {x}")]
    CoincidentPoints { x: f64 },

    #[error("subset sum over {span} indices exceeds the brute-force guard of {max}")]
    OracleGuard { span: usize, max: usize },

    #[error("Ai(-k) = {value:.3e} is too close to zero for a stable ratio")]
    AiryConditioning { value: f64 },

    #[error("(n, N) = ({n}, {n_dim}) at z = {z} is not in the {expected} regime")]
    RegimeViolation {
        n: usize,
        n_dim: usize,
        z: Complex64,
        expected: &'static str,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// CLI exit code: 2 for usage errors, 3 for numeric domain violations.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter { .. } | Error::OracleGuard { .. } | Error::Io(_) => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

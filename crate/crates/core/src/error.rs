use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("root finder did not converge after {iterations} iterations (max residual {residual:e})")]
    NonConvergence {
        iterations: usize,
        residual: f64,
        best: Vec<Complex64>,
    },

    #[error("contour passes too close to a zero (min |f| = {min_abs_f:e}, winding estimates {coarse} vs {fine})")]
    BoundaryTooClose {
        min_abs_f: f64,
        coarse: f64,
        fine: f64,
    },

    /// `Ai(z) = ai·e^{exponent}` does not fit in a double.
    #[error("Airy function overflows at this argument (exponent {exponent})")]
    AiryOverflow {
        ai: Complex64,
        aip: Complex64,
        exponent: Complex64,
    },

    #[error("quadrature did not converge (value {partial}, error estimate {estimate:e})")]
    QuadratureNonConvergence { partial: Complex64, estimate: f64 },

    #[error("singular discrete system at z = {z}; shift z away from the discrete spectrum")]
    SingularSystem { z: Complex64 },

    #[error("truncation dominates: tail carries {tail_fraction:.3e} of the norm at J = {j_trunc}; increase J_trunc")]
    Truncation { tail_fraction: f64, j_trunc: usize },

    #[error("resonance list incomplete: l_max = {l_max} but |λ| ≤ {r} needs l_max ≥ {required}")]
    Incomplete { l_max: usize, required: usize, r: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

//! The Airy function on the complex plane and the objects built from it.

mod eigen;
mod eval;
mod poisson;
mod zeros;

pub use eigen::NeumannEigenfunction;
pub use eval::{
    airy_ai, airy_ai_scaled, airy_asymptotic, airy_continued, airy_series, zeta, ScaledAiry,
    ASYMPTOTIC_RADIUS, SERIES_RADIUS,
};
pub use poisson::{easy_poisson_function, poisson_function, poisson_function_norm, PoissonFunction};
pub use zeros::{
    asymptotic_zero_ai, asymptotic_zero_ai_prime, build_zero_table, AiryZeroTable,
};

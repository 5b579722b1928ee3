//! Numerical laboratory for the band structure of scattering resonances of
//! smooth strictly convex obstacles.
//!
//! The crate is organised bottom-up:
//!
//! * [`complexmath`]: polynomial root finding, argument-principle zero
//!   counting and Gauss quadrature shared by everything else.
//! * [`airy`]: Ai/Ai′ on the complex plane, the zero table ζ_j, ζ′_j, the
//!   normalised Neumann eigenfunctions e_j and the Poisson functions f_λ.
//! * [`grushin`]: the model Grushin problem for
//!   `e^{-2πi/3}(D_t² + μt) + λ - z` with a Neumann boundary operator, solved
//!   exactly in the basis `{f, e_1, e_2, …}`, plus the interval toy model.
//! * [`geometry`]: curvature extremes of spheres and ellipsoids and the band
//!   constants κ, K.
//! * [`bands`]: resonance-free gaps and resonance bands as predicates on
//!   complex numbers, in the λ-plane and in the rescaled z-plane.
//! * [`sphere`]: exact sphere resonances from spherical Hankel functions,
//!   gap verification and Weyl counting.
//! * [`export`]: CSV/JSON artifacts consumed by the command-line tool.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod airy;
pub mod bands;
pub mod complexmath;
pub mod error;
pub mod export;
pub mod geometry;
pub mod grushin;
pub mod sphere;

pub use num_complex::Complex64;

pub use airy::{airy_ai, airy_ai_scaled, build_zero_table, AiryZeroTable, NeumannEigenfunction};
pub use bands::{classify_lambda, classify_rescaled, BandAssignment, RescaledFrame};
pub use complexmath::{
    count_zeros_in_rectangle, find_all_roots, integrate, ComplexPolynomial, QuadratureRule,
    Rectangle, Root,
};
pub use error::{Error, Result};
pub use geometry::{band_constants, curvature_extremes, BandConstants, ObstacleModel};
pub use grushin::{
    effective_hamiltonian, interval_toy_e_minus_plus, solve_model, verify_wellposedness,
    EffectiveHamiltonian, GrushinModel, GrushinSolution, ModelParameters,
};
pub use sphere::{
    compute_resonances, hankel_condition, verify_gaps, weyl_count, BoundaryCondition,
    HankelCondition, ResonanceRecord, ResonanceSet, WeylCount,
};

/// The cube root of unity `e^{2πi/3}`.
pub(crate) fn omega() -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::FRAC_PI_3)
}

/// Japanese bracket `⟨x⟩ = (1 + x²)^{1/2}`.
pub fn japanese_bracket(x: f64) -> f64 {
    x.hypot(1.0)
}

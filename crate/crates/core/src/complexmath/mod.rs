//! Complex-analysis utilities: polynomial roots, zero counting, quadrature.

mod contour;
mod fixed;
mod linalg;
mod poly;
mod quadrature;

pub use fixed::FixedComplex;
pub use linalg::determinant;
pub use contour::{
    count_zeros_in_rectangle, count_zeros_mirrored, count_zeros_with_derivative, winding_number, winding_number_mirrored,
    winding_number_with_derivative, Rectangle, Winding,
};
pub use poly::{find_all_roots, ComplexPolynomial, Root};
pub use quadrature::{
    composite_gauss_legendre, gauss_legendre_nodes, integrate, Integral, QuadratureKind,
    QuadratureRule,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::eval::airy_ai;
use super::zeros::AiryZeroTable;
use crate::error::{Error, Result};

/// `e_{j,μ,Λ}(t) = μ^{1/6} Λ^{1/2} e_j(μ^{1/3} Λ t)` with
/// `e_j(s) = Ai(s - ζ'_j) / ‖Ai‖_{L²(-ζ'_j,∞)}`, the L²-normalised Neumann
/// eigenfunction of `D_t² + μt` on the half-line (eigenvalue `μ^{2/3} ζ'_j`
/// when `Λ = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NeumannEigenfunction {
    pub j: usize,
    pub mu: f64,
    pub lambda_scale: f64,
    pub zeta_prime: f64,
    pub norm: f64,
}

impl NeumannEigenfunction {
    pub fn new(table: &AiryZeroTable, j: usize, mu: f64, lambda_scale: f64) -> Result<Self> {
        if j == 0 || j > table.count() {
            return Err(Error::invalid(format!("eigenfunction index {j} outside 1..={}", table.count())));
        }
        if !(mu > 0.0 && lambda_scale > 0.0) {
            return Err(Error::invalid("μ and Λ must be positive"));
        }
        Ok(Self { j, mu, lambda_scale, zeta_prime: table.zeta_prime(j), norm: table.norm(j) })
    }

    fn rate(&self) -> f64 {
        self.mu.cbrt() * self.lambda_scale
    }

    fn amplitude(&self) -> f64 {
        self.mu.powf(1.0 / 6.0) * self.lambda_scale.sqrt() / self.norm
    }

    /// Eigenvalue of `D_t² + μt` (for `Λ = 1`).
    pub fn eigenvalue(&self) -> f64 {
        self.mu.powf(2.0 / 3.0) * self.zeta_prime
    }

    /// `(e(t), e'(t))`.
    pub fn eval(&self, t: f64) -> (f64, f64) {
        let k = self.rate();
        let (a, d) = airy_ai(Complex64::new(k * t - self.zeta_prime, 0.0))
            .unwrap_or((Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)));
        let amp = self.amplitude();
        (amp * a.re, amp * k * d.re)
    }

    pub fn value(&self, t: f64) -> f64 {
        self.eval(t).0
    }

    /// `e''(t) = k²(kt - ζ'_j) e(t)` with `k = μ^{1/3} Λ`.
    pub fn second_derivative(&self, t: f64) -> f64 {
        let k = self.rate();
        k * k * (k * t - self.zeta_prime) * self.value(t)
    }

    /// Point beyond which `|e|` is below `1e-17` of its amplitude.
    pub fn support_end(&self) -> f64 {
        (self.zeta_prime + 15.0) / self.rate()
    }
}

use num_complex::Complex64;

use super::eval::{airy_ai_scaled, zeta};
use crate::error::{Error, Result};
use crate::complexmath::gauss_legendre_nodes;
use crate::omega;

/// The solution of `e^{-2πi/3}(D_t² + μt) f + λ f = 0` on the half-line with
/// `f'(0) = 1` that decays at infinity:
/// `f(t) = Ai(μ^{1/3} t + c) / (μ^{1/3} Ai'(c))`, `c = μ^{-2/3} e^{2πi/3} λ`.
///
/// Evaluated through the scaled Airy pair, so large `λ` does not overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonFunction {
    pub lambda: f64,
    pub mu: f64,
    c: Complex64,
    aip_c: Complex64,
    zeta_c: Complex64,
}

pub fn poisson_function(lambda: f64, mu: f64) -> Result<PoissonFunction> {
    if !(mu > 0.0 && lambda.is_finite()) {
        return Err(Error::invalid("Poisson function needs μ > 0 and finite λ"));
    }
    let c = omega() * lambda / mu.powf(2.0 / 3.0);
    let s = airy_ai_scaled(c);
    Ok(PoissonFunction { lambda, mu, c, aip_c: s.aip, zeta_c: zeta(c) })
}

impl PoissonFunction {
    /// `(f(t), f'(t))`.
    pub fn eval(&self, t: f64) -> (Complex64, Complex64) {
        let k = self.mu.cbrt();
        let w = self.c + k * t;
        let s = airy_ai_scaled(w);
        // ζ(c) - ζ(w) = exponent(w) - exponent(c)
        let e = (self.zeta_c + s.exponent).exp();
        let ratio = e / self.aip_c;
        (s.ai * ratio / k, s.aip * ratio)
    }

    pub fn value(&self, t: f64) -> Complex64 {
        self.eval(t).0
    }

    /// `f'' = (μt + e^{2πi/3} λ) f`.
    pub fn second_derivative(&self, t: f64) -> Complex64 {
        (self.mu * t + omega() * self.lambda) * self.value(t)
    }

    /// Decay length of `|f|` near the origin.
    pub fn length_scale(&self) -> f64 {
        1.0 / (self.lambda.abs().sqrt() + self.mu.cbrt()).max(1e-3)
    }

    /// `‖f‖_{L²(0,∞)}` by adaptive composite Gauss–Legendre quadrature on
    /// geometrically growing panels.
    pub fn l2_norm(&self) -> Result<f64> {
        let (x, w) = gauss_legendre_nodes(20);
        let (xc, wc) = gauss_legendre_nodes(10);
        let panel = |a: f64, b: f64, x: &[f64], w: &[f64]| -> f64 {
            let half = 0.5 * (b - a);
            x.iter().zip(w).map(|(xi, wi)| wi * half * self.value(a + half * (xi + 1.0)).norm_sqr()).sum()
        };
        let mut a = 0.0;
        let mut width = 0.25 * self.length_scale();
        let mut total = 0.0;
        let mut err = 0.0;
        for _ in 0..2000 {
            let b = a + width;
            let fine = panel(a, b, &x, &w);
            err += (fine - panel(a, b, &xc, &wc)).abs();
            total += fine;
            if fine <= 1e-20 * total && self.value(b).norm_sqr() * width <= 1e-20 * total {
                break;
            }
            a = b;
            width *= 1.15;
        }
        if !(total.is_finite()) || err > 1e-10 * total {
            return Err(Error::QuadratureNonConvergence {
                partial: Complex64::new(total.sqrt(), 0.0),
                estimate: err,
            });
        }
        Ok(total.sqrt())
    }
}

/// `‖f_λ‖` for `μ = 1`, signed by `λ` so that the map is odd in `λ`.
pub fn poisson_function_norm(lambda: f64) -> Result<f64> {
    let n = poisson_function(lambda, 1.0)?.l2_norm()?;
    Ok(if lambda < 0.0 { -n } else { n })
}

/// Solution of the constant-coefficient problem `e^{-2πi/3} D_t² f + λ f = 0`,
/// `f'(0) = 1`, decaying at infinity:
/// `f(t) = -(e^{2πi/3}λ)^{-1/2} exp(-(e^{2πi/3}λ)^{1/2} t)` (principal root).
pub fn easy_poisson_function(lambda: Complex64, t: f64) -> Result<Complex64> {
    let s = (omega() * lambda).sqrt();
    if s.re <= 0.0 {
        return Err(Error::Domain(format!("no decaying solution for λ = {lambda}")));
    }
    Ok(-(-s * t).exp() / s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_the_equation() {
        for &(lambda, mu) in &[(0.0, 1.0), (3.0, 1.0), (40.0, 0.5), (-5.0, 2.0), (200.0, 1.0)] {
            let f = poisson_function(lambda, mu).unwrap();
            assert!((f.eval(0.0).1 - 1.0).norm() < 1e-12);
            for &t in &[0.01, 0.1, 0.5] {
                let (v, _) = f.eval(t);
                // finite-difference check of f'' against the equation
                let h = 1e-4;
                let fd = (f.value(t + h) - 2.0 * v + f.value(t - h)) / (h * h);
                let scale = f.second_derivative(t).norm().max(1e-300);
                assert!((fd - f.second_derivative(t)).norm() < 1e-5 * scale.max(v.norm()), "λ={lambda} t={t}");
            }
        }
    }

    #[test]
    fn easy_model_matches_ode() {
        let lambda = Complex64::new(9.0, 0.0);
        let h = 1e-4;
        let t = 0.3;
        let f = |t| easy_poisson_function(lambda, t).unwrap();
        let d2 = (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h);
        let lhs = omega().conj() * d2 * -1.0 + lambda * f(t);
        assert!(lhs.norm() < 1e-6);
        let d1 = (f(h) - f(-h)) / (2.0 * h);
        assert!((d1 - 1.0).norm() < 1e-7);
        // ‖f‖² = λ^{-3/2}
        let s = (omega() * lambda).sqrt();
        let norm2 = 1.0 / (s.norm_sqr() * 2.0 * s.re);
        assert!((norm2 - 9f64.powf(-1.5)).abs() < 1e-15);
    }

    #[test]
    fn norm_decay_rate() {
        // λ^{3/4} ‖f_λ‖ → 1
        let n = poisson_function_norm(256.0).unwrap();
        assert!((n * 256f64.powf(0.75) - 1.0).abs() < 1e-3);
        assert!(poisson_function_norm(-4.0).unwrap() < 0.0);
    }
}

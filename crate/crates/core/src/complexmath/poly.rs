use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MAX_ABERTH_ITERATIONS: usize = 500;
const MERGE_DISTANCE: f64 = 1e-7;

/// Polynomial with complex coefficients, constant term first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexPolynomial {
    coeffs: Vec<Complex64>,
}

/// A root together with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub value: Complex64,
    pub multiplicity: usize,
}

impl ComplexPolynomial {
    /// Trailing zero coefficients are dropped. The zero polynomial is rejected.
    pub fn new(mut coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::invalid("polynomial coefficients must be finite"));
        }
        while coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::invalid("the zero polynomial has no well-defined roots"));
        }
        Ok(Self { coeffs })
    }

    /// Monic polynomial `∏ (x - r)`.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
            for (k, &c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= r * c;
            }
            coeffs = next;
        }
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs[self.degree()]
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// `(p(z), p'(z))` by Horner's scheme.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// Newton correction `p(z)/p'(z)`. Outside the unit disk it is evaluated on
    /// the reversed polynomial so that high degrees do not overflow.
    pub fn newton_correction(&self, z: Complex64) -> Complex64 {
        if z.norm() <= 1.0 {
            let (p, dp) = self.eval_with_derivative(z);
            return p / dp;
        }
        let w = z.inv();
        let n = self.degree() as f64;
        // q(w) = w^n p(1/w) has the coefficients in reverse order.
        let mut q = Complex64::new(0.0, 0.0);
        let mut dq = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter() {
            dq = dq * w + q;
            q = q * w + c;
        }
        // p'/p = w (n - w q'/q)
        let log_deriv = w * (n - w * dq / q);
        log_deriv.inv()
    }

    /// `ln |p(z)|`, safe against overflow for large `|z|`.
    pub fn log_abs(&self, z: Complex64) -> f64 {
        if z.norm() <= 1.0 {
            return self.eval(z).norm().ln();
        }
        let w = z.inv();
        let q = self
            .coeffs
            .iter()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * w + c);
        q.norm().ln() + self.degree() as f64 * z.norm().ln()
    }

    /// Largest `|a_k / a_n|^{1/(n-k)}`, a scale for the root moduli.
    fn root_scale(&self) -> f64 {
        let n = self.degree();
        let lead = self.leading().norm();
        (0..n)
            .filter(|&k| self.coeffs[k].norm() > 0.0)
            .map(|k| (self.coeffs[k].norm() / lead).powf(1.0 / (n - k) as f64))
            .fold(0.0, f64::max)
    }

    /// Whether `|p(z)|` is below the rounding error of Horner's rule, so that
    /// `z` is an exact root of a nearby polynomial.
    fn at_noise_level(&self, z: Complex64) -> bool {
        let n = self.degree() as f64;
        if z.norm() <= 1.0 {
            let r = z.norm();
            let bound = self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm());
            self.eval(z).norm() <= 4.0 * n * f64::EPSILON * bound
        } else {
            let w = z.inv();
            let r = w.norm();
            let bound = self.coeffs.iter().fold(0.0, |acc, c| acc * r + c.norm());
            let q = self.coeffs.iter().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * w + c);
            q.norm() <= 4.0 * n * f64::EPSILON * bound
        }
    }

    fn max_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// All roots of `p` by the Aberth–Ehrlich iteration, polished with Newton's
/// method. Roots closer than `1e-7 (1 + |r|)` are merged and reported with
/// their multiplicity.
///
/// `tol` is the relative step size at which the simultaneous iteration stops,
/// and must lie in `(0, 1e-6]`.
pub fn find_all_roots(p: &ComplexPolynomial, tol: f64) -> Result<Vec<Root>> {
    if !(tol > 0.0 && tol <= 1e-6) {
        return Err(Error::invalid(format!("tolerance {tol} outside (0, 1e-6]")));
    }
    let n = p.degree();
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        let c = p.coeffs();
        return Ok(vec![Root { value: -c[0] / c[1], multiplicity: 1 }]);
    }

    let radius = 1.0 + p.root_scale();
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 0.4 + std::f64::consts::TAU * k as f64 / n as f64))
        .collect();
    let mut done = vec![false; n];
    let mut iterations = 0;
    while iterations < MAX_ABERTH_ITERATIONS && done.iter().any(|d| !d) {
        iterations += 1;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let w = p.newton_correction(z[i]);
            let s: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = w / (Complex64::new(1.0, 0.0) - w * s);
            if !step.re.is_finite() || !step.im.is_finite() {
                // Landed on a root exactly, or on another iterate.
                done[i] = true;
                continue;
            }
            z[i] -= step;
            if step.norm() <= tol * (1.0 + z[i].norm()) || p.at_noise_level(z[i]) {
                done[i] = true;
            }
        }
    }

    for zi in z.iter_mut() {
        polish(p, zi);
    }

    let log_bound = |r: Complex64| {
        tol.ln() + p.max_coeff().ln() + n as f64 * (1.0 + r.norm()).ln()
    };
    let failed: Vec<f64> = z
        .iter()
        .filter(|r| !(p.log_abs(**r) <= log_bound(**r)))
        .map(|r| p.log_abs(*r) - log_bound(*r))
        .collect();
    if done.iter().any(|d| !d) || !failed.is_empty() {
        let residual = failed.iter().cloned().fold(f64::NEG_INFINITY, f64::max).exp();
        return Err(Error::NonConvergence {
            iterations,
            residual: if residual.is_finite() { residual } else { f64::INFINITY },
            best: z,
        });
    }

    Ok(merge(z))
}

fn polish(p: &ComplexPolynomial, z: &mut Complex64) {
    let mut last = f64::INFINITY;
    for _ in 0..20 {
        let step = p.newton_correction(*z);
        let size = step.norm();
        if !size.is_finite() || size >= last {
            break;
        }
        *z -= step;
        last = size;
        if size <= 2.0 * f64::EPSILON * z.norm() {
            break;
        }
    }
}

fn merge(mut z: Vec<Complex64>) -> Vec<Root> {
    z.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    'outer: for r in z {
        for (centre, count) in clusters.iter_mut() {
            let mean = *centre / *count as f64;
            if (mean - r).norm() <= MERGE_DISTANCE * (1.0 + r.norm()) {
                *centre += r;
                *count += 1;
                continue 'outer;
            }
        }
        clusters.push((r, 1));
    }
    clusters
        .into_iter()
        .map(|(sum, count)| Root { value: sum / count as f64, multiplicity: count })
        .collect()
}

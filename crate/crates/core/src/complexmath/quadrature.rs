use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_NODES: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum QuadratureKind {
    /// `∫_a^b`.
    GaussLegendre { a: f64, b: f64 },
    /// `∫_a^∞` for integrands decaying roughly like `e^{-decay (t-a)}`.
    GaussLaguerre { a: f64, decay: f64 },
}

/// Nodes and weights with `∫ f ≈ Σ w_i f(t_i)`. For the Laguerre kind the
/// exponential weight is folded into `w_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    pub kind: QuadratureKind,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: Complex64,
    pub error_estimate: f64,
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre_nodes(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                p1 = ((2 * j + 1) as f64 * z * p2 - j as f64 * p3) / (j + 1) as f64;
            }
            pp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Gauss–Laguerre nodes and weights for `∫_0^∞ e^{-x} g(x) dx`.
fn gauss_laguerre_nodes(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    let mut z = 0.0;
    for i in 0..n {
        z = match i {
            0 => 3.0 / (1.0 + 2.4 * nf),
            1 => z + 15.0 / (1.0 + 2.5 * nf),
            _ => {
                let ai = (i - 1) as f64;
                z + (1.0 + 2.55 * ai) / (1.9 * ai) * (z - x[i - 2])
            }
        };
        let (mut p1, mut p2, mut pp) = (1.0, 0.0, 1.0);
        for _ in 0..200 {
            p1 = 1.0;
            p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                p1 = ((2 * j + 1) as f64 - z) * p2 / (j + 1) as f64 - j as f64 * p3 / (j + 1) as f64;
            }
            pp = nf * (p1 - p2) / z;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 * z.abs() {
                break;
            }
        }
        let _ = p1;
        x[i] = z;
        w[i] = -1.0 / (pp * nf * p2);
    }
    (x, w)
}

impl QuadratureRule {
    pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Result<Self> {
        if n == 0 || n > 4 * MAX_NODES {
            return Err(Error::invalid(format!("Gauss-Legendre order {n} out of range")));
        }
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::invalid("Gauss-Legendre interval must be finite with a < b"));
        }
        let (x, w) = gauss_legendre_nodes(n);
        let half = 0.5 * (b - a);
        Ok(Self {
            kind: QuadratureKind::GaussLegendre { a, b },
            nodes: x.iter().map(|xi| a + half * (xi + 1.0)).collect(),
            weights: w.iter().map(|wi| half * wi).collect(),
        })
    }

    pub fn gauss_laguerre(n: usize, a: f64, decay: f64) -> Result<Self> {
        if n == 0 || n > MAX_NODES {
            return Err(Error::invalid(format!("Gauss-Laguerre order {n} exceeds {MAX_NODES}")));
        }
        if !(decay > 0.0 && decay.is_finite() && a.is_finite()) {
            return Err(Error::invalid("Gauss-Laguerre needs a finite start and positive decay"));
        }
        let (x, w) = gauss_laguerre_nodes(n);
        Ok(Self {
            kind: QuadratureKind::GaussLaguerre { a, decay },
            nodes: x.iter().map(|xi| a + xi / decay).collect(),
            weights: x.iter().zip(&w).map(|(xi, wi)| wi * xi.exp() / decay).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn apply<F: Fn(f64) -> Complex64>(&self, f: F) -> Complex64 {
        self.nodes.iter().zip(&self.weights).map(|(&t, &w)| f(t) * w).sum()
    }

    fn halved(&self) -> Result<Self> {
        let n = (self.len() / 2).max(1);
        match self.kind {
            QuadratureKind::GaussLegendre { a, b } => Self::gauss_legendre(n, a, b),
            QuadratureKind::GaussLaguerre { a, decay } => Self::gauss_laguerre(n, a, decay),
        }
    }
}

/// Applies `rule` and estimates the error by comparison with the rule of half
/// the order.
pub fn integrate<F: Fn(f64) -> Complex64>(f: F, rule: &QuadratureRule) -> Result<Integral> {
    let value = rule.apply(&f);
    let coarse = rule.halved()?.apply(&f);
    let error_estimate = (value - coarse).norm();
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::QuadratureNonConvergence { partial: value, estimate: f64::INFINITY });
    }
    Ok(Integral { value, error_estimate })
}

/// Composite Gauss–Legendre over the panels `breaks[k]..breaks[k+1]`, with
/// `order` nodes each. Returns `(nodes, weights)`.
pub fn composite_gauss_legendre(breaks: &[f64], order: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre_nodes(order);
    let mut nodes = Vec::with_capacity(order * breaks.len());
    let mut weights = Vec::with_capacity(order * breaks.len());
    for pair in breaks.windows(2) {
        let half = 0.5 * (pair[1] - pair[0]);
        for (xi, wi) in x.iter().zip(&w) {
            nodes.push(pair[0] + half * (xi + 1.0));
            weights.push(half * wi);
        }
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_polynomial_exactness() {
        let rule = QuadratureRule::gauss_legendre(10, 0.0, 2.0).unwrap();
        // exact for degree 19
        let v = rule.apply(|t| Complex64::new(t.powi(19), 0.0));
        assert!((v.re - 2f64.powi(20) / 20.0).abs() < 1e-9 * 2f64.powi(20));
    }

    #[test]
    fn legendre_oscillatory() {
        let rule = QuadratureRule::gauss_legendre(64, 0.0, 10.0).unwrap();
        let r = integrate(|t| Complex64::new(0.0, 3.0 * t).exp(), &rule).unwrap();
        let exact = (Complex64::new(0.0, 30.0).exp() - 1.0) / Complex64::new(0.0, 3.0);
        assert!((r.value - exact).norm() < 1e-13);
        assert!(r.error_estimate < 1e-6);
    }

    #[test]
    fn laguerre_moments() {
        let rule = QuadratureRule::gauss_laguerre(40, 1.0, 2.0).unwrap();
        // ∫_1^∞ e^{-2(t-1)} t dt = 1/2 + 1/4
        let v = rule.apply(|t| Complex64::new((-2.0 * (t - 1.0)).exp() * t, 0.0));
        assert!((v.re - 0.75).abs() < 1e-13, "{v}");
        let rule = QuadratureRule::gauss_laguerre(MAX_NODES, 0.0, 1.0).unwrap();
        let v = rule.apply(|t| Complex64::new((-t).exp() / (1.0 + t * t), 0.0));
        // ∫_0^∞ e^{-t}/(1+t²) dt = 0.6214496242358134
        assert!((v.re - 0.621_449_624_235_813_4).abs() < 1e-6, "{v}");
    }

    #[test]
    fn caps_node_count() {
        assert!(QuadratureRule::gauss_laguerre(MAX_NODES + 1, 0.0, 1.0).is_err());
    }
}

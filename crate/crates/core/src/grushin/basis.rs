use num_complex::Complex64;
use rayon::prelude::*;

use crate::airy::{poisson_function, AiryZeroTable, NeumannEigenfunction, PoissonFunction};
use crate::complexmath::composite_gauss_legendre;
use crate::error::{Error, Result};

const PANEL_ORDER: usize = 16;

/// Sampled basis `{f, e_{1,μ}, …, e_{J,μ}}` on a Gauss–Legendre grid of the
/// half-line, with the Gram matrices needed for the `B`-norm.
///
/// Index 0 is the Poisson function `f`, index `j ≥ 1` is `e_{j,μ}`.
#[derive(Debug, Clone)]
pub struct ModelBasis {
    pub lambda: f64,
    pub mu: f64,
    pub j_trunc: usize,
    pub poisson: PoissonFunction,
    pub eigenfunctions: Vec<NeumannEigenfunction>,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// `φ_a(t_i)`, `φ_a'(t_i)` and `D_t² φ_a(t_i)`.
    pub values: Vec<Vec<Complex64>>,
    pub derivatives: Vec<Vec<Complex64>>,
    pub d2: Vec<Vec<Complex64>>,
    /// `e_{j,μ}(0)`, 0-based in `j`.
    pub boundary_values: Vec<f64>,
    /// `f_j = ⟨f, e_{j,μ}⟩` by quadrature, 0-based in `j`.
    pub f_coeffs: Vec<Complex64>,
    /// `⟨φ_a, φ_b⟩`, `⟨D_t²φ_a, D_t²φ_b⟩`, `⟨tφ_a, tφ_b⟩`.
    pub gram: Vec<Vec<Complex64>>,
    pub gram_d2: Vec<Vec<Complex64>>,
    pub gram_t: Vec<Vec<Complex64>>,
}

impl ModelBasis {
    pub fn new(table: &AiryZeroTable, lambda: f64, mu: f64, j_trunc: usize) -> Result<Self> {
        if j_trunc == 0 || j_trunc > table.count() {
            return Err(Error::invalid(format!(
                "J_trunc = {j_trunc} must lie in 1..={} (zero table size)",
                table.count()
            )));
        }
        let poisson = poisson_function(lambda, mu)?;
        let eigenfunctions = (1..=j_trunc)
            .map(|j| NeumannEigenfunction::new(table, j, mu, 1.0))
            .collect::<Result<Vec<_>>>()?;

        let last = eigenfunctions[j_trunc - 1];
        let end = last.support_end();
        let w_max = (1.5 / last.zeta_prime.sqrt()).min(0.5) / mu.cbrt();
        let mut breaks = vec![0.0];
        let mut w = (0.1 * poisson.length_scale()).min(w_max);
        let mut x = 0.0;
        while x < end {
            x += w;
            breaks.push(x);
            w = (w * 1.25).min(w_max);
        }
        let (nodes, weights) = composite_gauss_legendre(&breaks, PANEL_ORDER);

        let omega = crate::omega();
        let mut values = Vec::with_capacity(j_trunc + 1);
        let mut derivatives = Vec::with_capacity(j_trunc + 1);
        let mut d2 = Vec::with_capacity(j_trunc + 1);
        {
            let (v, d): (Vec<_>, Vec<_>) = nodes.par_iter().map(|&t| poisson.eval(t)).unzip();
            // D_t² f = -f'' = -(μt + e^{2πi/3}λ) f
            d2.push(nodes.iter().zip(&v).map(|(&t, &f)| -(mu * t + omega * lambda) * f).collect());
            values.push(v);
            derivatives.push(d);
        }
        let sampled: Vec<(Vec<Complex64>, Vec<Complex64>, Vec<Complex64>)> = eigenfunctions
            .par_iter()
            .map(|e| {
                let mut v = Vec::with_capacity(nodes.len());
                let mut d = Vec::with_capacity(nodes.len());
                let mut s = Vec::with_capacity(nodes.len());
                for &t in &nodes {
                    let (a, b) = e.eval(t);
                    v.push(Complex64::new(a, 0.0));
                    d.push(Complex64::new(b, 0.0));
                    // D_t² e = (μ^{2/3} ζ'_j - μt) e
                    s.push(Complex64::new((e.eigenvalue() - mu * t) * a, 0.0));
                }
                (v, d, s)
            })
            .collect();
        for (v, d, s) in sampled {
            values.push(v);
            derivatives.push(d);
            d2.push(s);
        }

        let boundary_values: Vec<f64> = eigenfunctions.iter().map(|e| e.value(0.0)).collect();
        let tv: Vec<Vec<Complex64>> = values
            .iter()
            .map(|v| v.iter().zip(&nodes).map(|(x, &t)| x * t).collect())
            .collect();
        let gram = gram_matrix(&values, &weights);
        let gram_d2 = gram_matrix(&d2, &weights);
        let gram_t = gram_matrix(&tv, &weights);
        let f_coeffs = (1..=j_trunc).map(|j| gram[0][j]).collect();

        Ok(Self {
            lambda,
            mu,
            j_trunc,
            poisson,
            eigenfunctions,
            nodes,
            weights,
            values,
            derivatives,
            d2,
            boundary_values,
            f_coeffs,
            gram,
            gram_d2,
            gram_t,
        })
    }

    pub fn len(&self) -> usize {
        self.j_trunc + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `μ^{2/3} ζ'_j`, 1-based.
    pub fn eigenvalue(&self, j: usize) -> f64 {
        self.eigenfunctions[j - 1].eigenvalue()
    }

    /// Samples of `Σ c_a φ_a` on the grid, from one of the stored tables.
    pub fn synthesize(&self, table: &[Vec<Complex64>], c: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.nodes.len()];
        for (ca, col) in c.iter().zip(table) {
            if *ca == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (o, x) in out.iter_mut().zip(col) {
                *o += ca * x;
            }
        }
        out
    }

    /// `∫ |g|²` for grid samples `g`.
    pub fn norm_sqr(&self, g: &[Complex64]) -> f64 {
        g.iter().zip(&self.weights).map(|(x, w)| w * x.norm_sqr()).sum()
    }

    /// `∫ g h̄` for grid samples.
    pub fn inner(&self, g: &[Complex64], h: &[Complex64]) -> Complex64 {
        g.iter().zip(h).zip(&self.weights).map(|((a, b), w)| a * b.conj() * *w).sum()
    }
}

/// `G_ab = ∫ φ_a φ̄_b`.
fn gram_matrix(samples: &[Vec<Complex64>], weights: &[f64]) -> Vec<Vec<Complex64>> {
    let n = samples.len();
    let rows: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|a| {
            (0..n)
                .map(|b| {
                    samples[a]
                        .iter()
                        .zip(&samples[b])
                        .zip(weights)
                        .map(|((x, y), w)| x * y.conj() * *w)
                        .sum()
                })
                .collect()
        })
        .collect();
    rows
}

/// `Σ_ab c_a c̄_b G_ab`, the squared norm of `Σ c_a φ_a`.
pub fn quadratic_form(g: &[Vec<Complex64>], c: &[Complex64]) -> Complex64 {
    let mut s = Complex64::new(0.0, 0.0);
    for (a, ca) in c.iter().enumerate() {
        for (b, cb) in c.iter().enumerate() {
            s += ca * cb.conj() * g[a][b];
        }
    }
    s
}

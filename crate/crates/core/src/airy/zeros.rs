use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::eval::airy_ai;
use crate::complexmath::gauss_legendre_nodes;
use crate::error::{Error, Result};

/// Right end of the norm integrals; `Ai(15)² ≈ 1e-34`.
const NORM_CUTOFF: f64 = 15.0;
const PANEL_ORDER: usize = 24;
const MAX_NEWTON: usize = 60;
/// Largest accepted `|Ai(-ζ_j)|` (resp. `|Ai'(-ζ'_j)|`).
pub const ZERO_RESIDUAL_TOLERANCE: f64 = 1e-12;

/// The first `count` zeros `-ζ_j` of Ai and `-ζ'_j` of Ai′, together with the
/// Neumann eigenfunction data `e_j(0)` and `‖Ai‖_{L²(-ζ'_j, ∞)}`.
///
/// Indices are 1-based in the accessors; the vectors are 0-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AiryZeroTable {
    pub zeros_ai: Vec<f64>,
    pub zeros_ai_prime: Vec<f64>,
    pub boundary_values: Vec<f64>,
    pub norms: Vec<f64>,
    /// `|Ai(-ζ_j)|` and `|Ai'(-ζ'_j)|` at the returned zeros.
    pub residuals_ai: Vec<f64>,
    pub residuals_ai_prime: Vec<f64>,
}

impl AiryZeroTable {
    pub fn count(&self) -> usize {
        self.zeros_ai.len()
    }

    /// `ζ_j`, 1-based.
    pub fn zeta(&self, j: usize) -> f64 {
        self.zeros_ai[j - 1]
    }

    /// `ζ'_j`, 1-based.
    pub fn zeta_prime(&self, j: usize) -> f64 {
        self.zeros_ai_prime[j - 1]
    }

    /// `e_j(0) = Ai(-ζ'_j) / ‖Ai‖`, 1-based.
    pub fn boundary_value(&self, j: usize) -> f64 {
        self.boundary_values[j - 1]
    }

    pub fn norm(&self, j: usize) -> f64 {
        self.norms[j - 1]
    }

    /// `ζ'_j` from the table when available, otherwise from the asymptotic
    /// expansion.
    pub fn zeta_prime_or_asymptotic(&self, j: usize) -> f64 {
        if j <= self.count() {
            self.zeta_prime(j)
        } else {
            asymptotic_zero_ai_prime(j)
        }
    }
}

/// Asymptotic approximation of `ζ_j`.
pub fn asymptotic_zero_ai(j: usize) -> f64 {
    let t = 3.0 * std::f64::consts::PI / 8.0 * (4.0 * j as f64 - 1.0);
    let t2 = t.powi(-2);
    t.powf(2.0 / 3.0) * (1.0 + 5.0 / 48.0 * t2 - 5.0 / 36.0 * t2 * t2)
}

/// Asymptotic approximation of `ζ'_j`.
pub fn asymptotic_zero_ai_prime(j: usize) -> f64 {
    let t = 3.0 * std::f64::consts::PI / 8.0 * (4.0 * j as f64 - 3.0);
    let t2 = t.powi(-2);
    t.powf(2.0 / 3.0) * (1.0 - 7.0 / 48.0 * t2 + 35.0 / 288.0 * t2 * t2)
}

fn ai_real(x: f64) -> (f64, f64) {
    let (a, d) = airy_ai(Complex64::new(x, 0.0)).expect("real arguments used here do not overflow");
    (a.re, d.re)
}

/// Newton's method on `g` inside `[lo, hi]`, falling back to bisection when an
/// iterate leaves the bracket.
fn refine<G>(g: G, seed: f64, lo: f64, hi: f64) -> Result<f64>
where
    G: Fn(f64) -> (f64, f64),
{
    let (mut lo, mut hi) = (lo, hi);
    let (glo, ghi) = (g(lo).0, g(hi).0);
    if glo.signum() == ghi.signum() {
        return Err(Error::invalid(format!("no sign change in [{lo}, {hi}]")));
    }
    let lo_sign = glo.signum();
    let mut t = seed.clamp(lo, hi);
    for _ in 0..MAX_NEWTON {
        let (v, d) = g(t);
        if v == 0.0 {
            return Ok(t);
        }
        if v.signum() == lo_sign {
            lo = t;
        } else {
            hi = t;
        }
        let next = t - v / d;
        let next = if next > lo && next < hi && d != 0.0 { next } else { 0.5 * (lo + hi) };
        let step = (next - t).abs();
        t = next;
        if step <= 4.0 * f64::EPSILON * t.abs() {
            return Ok(t);
        }
    }
    Ok(t)
}

/// Zeros of Ai and Ai′ for `j = 1..=count` with eigenfunction data.
pub fn build_zero_table(count: usize) -> Result<AiryZeroTable> {
    if count == 0 {
        return Err(Error::invalid("zero table needs count ≥ 1"));
    }
    let seeds = |f: fn(usize) -> f64| -> Vec<f64> { (0..=count + 1).map(|j| if j == 0 { 0.0 } else { f(j) }).collect() };
    let s_ai = seeds(asymptotic_zero_ai);
    let s_aip = seeds(asymptotic_zero_ai_prime);

    let mut zeros_ai = Vec::with_capacity(count);
    let mut zeros_aip = Vec::with_capacity(count);
    let mut res_ai = Vec::with_capacity(count);
    let mut res_aip = Vec::with_capacity(count);
    for j in 1..=count {
        let lo = 0.5 * (s_ai[j - 1] + s_ai[j]);
        let hi = 0.5 * (s_ai[j] + s_ai[j + 1]);
        let lo = if j == 1 { 0.0 } else { lo };
        let t = refine(
            |t| {
                let (a, d) = ai_real(-t);
                (a, -d)
            },
            s_ai[j],
            lo,
            hi,
        )?;
        let r = ai_real(-t).0.abs();
        if r > ZERO_RESIDUAL_TOLERANCE {
            return Err(Error::NonConvergence { iterations: MAX_NEWTON, residual: r, best: vec![Complex64::new(-t, 0.0)] });
        }
        zeros_ai.push(t);
        res_ai.push(r);

        let lo = 0.5 * (s_aip[j - 1] + s_aip[j]);
        let hi = 0.5 * (s_aip[j] + s_aip[j + 1]);
        let lo = if j == 1 { 0.0 } else { lo };
        let t = refine(
            |t| {
                let (a, d) = ai_real(-t);
                (d, t * a)
            },
            s_aip[j],
            lo,
            hi,
        )?;
        let r = ai_real(-t).1.abs();
        if r > ZERO_RESIDUAL_TOLERANCE {
            return Err(Error::NonConvergence { iterations: MAX_NEWTON, residual: r, best: vec![Complex64::new(-t, 0.0)] });
        }
        zeros_aip.push(t);
        res_aip.push(r);
    }

    let norms = cumulative_norms(&zeros_aip);
    let boundary_values = zeros_aip
        .iter()
        .zip(&norms)
        .map(|(&t, &n)| ai_real(-t).0 / n)
        .collect();
    Ok(AiryZeroTable {
        zeros_ai,
        zeros_ai_prime: zeros_aip,
        boundary_values,
        norms,
        residuals_ai: res_ai,
        residuals_ai_prime: res_aip,
    })
}

/// `‖Ai‖_{L²(-ζ'_j, ∞)}` for every `j`, accumulating Gauss–Legendre panels
/// between consecutive zeros of Ai′.
fn cumulative_norms(zeros_aip: &[f64]) -> Vec<f64> {
    let (x, w) = gauss_legendre_nodes(PANEL_ORDER);
    let panel = |a: f64, b: f64| -> f64 {
        let half = 0.5 * (b - a);
        x.iter()
            .zip(&w)
            .map(|(xi, wi)| {
                let v = ai_real(a + half * (xi + 1.0)).0;
                wi * half * v * v
            })
            .sum()
    };
    let mut acc: f64 = (0..NORM_CUTOFF as usize).map(|k| panel(k as f64, k as f64 + 1.0)).sum();
    let mut prev = 0.0;
    zeros_aip
        .iter()
        .map(|&t| {
            acc += panel(-t, -prev);
            prev = t;
            acc.sqrt()
        })
        .collect()
}

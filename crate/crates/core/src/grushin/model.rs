use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::basis::{quadratic_form, ModelBasis};
use crate::airy::{asymptotic_zero_ai_prime, AiryZeroTable};
use crate::complexmath::determinant;
use crate::error::{Error, Result};
use crate::japanese_bracket;

pub const MU_RANGE: (f64, f64) = (0.1, 10.0);
/// Extra eigenfunctions kept above the band count by default.
pub const DEFAULT_EXTRA_MODES: usize = 60;
const TRUNCATION_FRACTION: f64 = 0.01;
const TAIL_TERMS: usize = 20_000;

fn wbar() -> Complex64 {
    crate::omega().conj()
}

/// Parameters of `e^{-2πi/3}(D_t² + μt) + λ - z` on the half-line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParameters {
    pub lambda: f64,
    pub z: Complex64,
    pub mu: f64,
    pub c1: f64,
    /// Number of eigenvalues `e^{-2πi/3} μ^{2/3} ζ'_j` with `|Im| ≤ C₁`.
    pub n: usize,
}

/// Largest `n` with `sin(2π/3) μ^{2/3} ζ'_n ≤ C₁`.
pub fn band_count(table: &AiryZeroTable, mu: f64, c1: f64) -> Result<usize> {
    let s = (2.0 * std::f64::consts::FRAC_PI_3).sin() * mu.powf(2.0 / 3.0);
    let n = table.zeros_ai_prime.iter().take_while(|&&z| s * z <= c1).count();
    if n == table.count() {
        return Err(Error::invalid("C₁ too large for the zero table"));
    }
    Ok(n)
}

impl ModelParameters {
    pub fn new(table: &AiryZeroTable, lambda: f64, z: Complex64, mu: f64, c1: f64) -> Result<Self> {
        if !(mu >= MU_RANGE.0 && mu <= MU_RANGE.1) {
            return Err(Error::invalid(format!("μ = {mu} outside [{}, {}]", MU_RANGE.0, MU_RANGE.1)));
        }
        if !(c1 > 0.0) {
            return Err(Error::invalid("C₁ must be positive"));
        }
        if !(z.im.abs() < c1) || !lambda.is_finite() || !z.re.is_finite() {
            return Err(Error::invalid(format!("need |Im z| < C₁, got z = {z}, C₁ = {c1}")));
        }
        Ok(Self { lambda, z, mu, c1, n: band_count(table, mu, c1)? })
    }

    pub fn with_z(&self, z: Complex64) -> Self {
        Self { z, ..*self }
    }

    /// `⟨λ - Re z⟩`.
    pub fn bracket(&self) -> f64 {
        japanese_bracket(self.lambda - self.z.re)
    }

    pub fn eta_of(&self, eigenvalue: f64) -> Complex64 {
        wbar() * eigenvalue + self.lambda - self.z
    }

    /// The zeros `λ + e^{-2πi/3} μ^{2/3} ζ'_j`, `j ≤ N`, of `det E₋₊`.
    pub fn predicted_zeros(&self, table: &AiryZeroTable) -> Vec<Complex64> {
        (1..=self.n)
            .map(|j| self.lambda + wbar() * self.mu.powf(2.0 / 3.0) * table.zeta_prime(j))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrushinSolution {
    pub u0: Complex64,
    pub u_coeffs: Vec<Complex64>,
    pub u_minus: Vec<Complex64>,
    /// Largest residual over the four equation groups.
    pub residual: f64,
    /// Estimated `B`-norm of the coefficients beyond `J_trunc`.
    pub tail_estimate: f64,
}

impl GrushinSolution {
    /// `(u0, u_1, …, u_J)`.
    pub fn coefficients(&self) -> Vec<Complex64> {
        std::iter::once(self.u0).chain(self.u_coeffs.iter().copied()).collect()
    }
}

/// The model Grushin problem at fixed `(λ, μ)`; `z` may be changed cheaply
/// with [`GrushinModel::at`] since the sampled basis does not depend on it.
#[derive(Debug, Clone)]
pub struct GrushinModel {
    pub params: ModelParameters,
    pub basis: Arc<ModelBasis>,
}

impl GrushinModel {
    pub fn new(params: ModelParameters, table: &AiryZeroTable, j_trunc: usize) -> Result<Self> {
        if j_trunc <= params.n {
            return Err(Error::invalid(format!("J_trunc = {j_trunc} must exceed N = {}", params.n)));
        }
        let basis = ModelBasis::new(table, params.lambda, params.mu, j_trunc)?;
        Ok(Self { params, basis: Arc::new(basis) })
    }

    pub fn at(&self, z: Complex64) -> Self {
        Self { params: self.params.with_z(z), basis: Arc::clone(&self.basis) }
    }

    pub fn j_trunc(&self) -> usize {
        self.basis.j_trunc
    }

    /// `η_j`, 1-based.
    pub fn eta(&self, j: usize) -> Complex64 {
        self.params.eta_of(self.basis.eigenvalue(j))
    }

    /// Solves the system
    ///
    /// ```text
    /// (P - z) u + R₋ u₋ = v,   γ₁ u = v₀,   R₊ u = v₊
    /// ```
    ///
    /// with `u = u₀ f + Σ u_j e_j`, `R₊u = (⟨u, e_j⟩)_{j≤N}`, `R₋u₋ = Σ u₋(j) e_j`.
    pub fn solve(&self, v: &[Complex64], v0: Complex64, v_plus: &[Complex64]) -> Result<GrushinSolution> {
        let p = &self.params;
        let jt = self.j_trunc();
        if v.len() > jt {
            return Err(Error::invalid(format!("{} coefficients given for J_trunc = {jt}", v.len())));
        }
        if v_plus.len() != p.n {
            return Err(Error::invalid(format!("v₊ has length {}, expected N = {}", v_plus.len(), p.n)));
        }
        let zero = Complex64::new(0.0, 0.0);
        let vj = |j: usize| v.get(j - 1).copied().unwrap_or(zero);
        let b = &self.basis;
        let w = wbar();

        let u0 = v0;
        let mut u = Vec::with_capacity(jt);
        let mut u_minus = Vec::with_capacity(p.n);
        for j in 1..=jt {
            let fj = b.f_coeffs[j - 1];
            let e0 = b.boundary_values[j - 1];
            let eta = self.eta(j);
            if j <= p.n {
                u.push(v_plus[j - 1] - fj * v0);
                u_minus.push(vj(j) - w * e0 * v0 - eta * v_plus[j - 1]);
            } else {
                u.push((vj(j) - w * e0 * v0) / eta - fj * v0);
            }
        }

        // Substitute back into the four equation groups.
        let mut residual = (u0 - v0).norm();
        for j in 1..=jt {
            let fj = b.f_coeffs[j - 1];
            let proj = u0 * fj + u[j - 1];
            let mut r = w * b.boundary_values[j - 1] * u0 + self.eta(j) * proj - vj(j);
            if j <= p.n {
                r += u_minus[j - 1];
                residual = residual.max((proj - v_plus[j - 1]).norm());
            }
            residual = residual.max(r.norm());
        }

        let tail_estimate = self.tail_norm(u0);
        Ok(GrushinSolution { u0, u_coeffs: u, u_minus, residual, tail_estimate })
    }

    /// Like [`GrushinModel::solve`] but fails when the coefficients dropped
    /// beyond `J_trunc` carry more than 1% of `‖u‖_B`.
    pub fn solve_checked(&self, v: &[Complex64], v0: Complex64, v_plus: &[Complex64]) -> Result<GrushinSolution> {
        let s = self.solve(v, v0, v_plus)?;
        let norm = self.norm_b(&s.coefficients());
        if s.tail_estimate > TRUNCATION_FRACTION * norm {
            return Err(Error::Truncation { tail_fraction: s.tail_estimate / norm, j_trunc: self.j_trunc() });
        }
        Ok(s)
    }

    /// Beyond `J_trunc` (where `v_j = 0`) the exact coefficients are
    /// `u_j = -u₀ z e^{-2πi/3} e_j(0) / (η_j (η_j + z))`; this bounds their
    /// `B`-norm using `‖D_t² e_j‖ + ‖t e_j‖ ≲ 2 μ^{2/3} ζ'_j`.
    fn tail_norm(&self, u0: Complex64) -> f64 {
        let p = &self.params;
        if u0 == Complex64::new(0.0, 0.0) || p.z == Complex64::new(0.0, 0.0) {
            return 0.0;
        }
        let m23 = p.mu.powf(2.0 / 3.0);
        let (mut s0, mut s1) = (0.0, 0.0);
        for j in self.j_trunc() + 1..=self.j_trunc() + TAIL_TERMS {
            let zp = asymptotic_zero_ai_prime(j);
            let eta = p.eta_of(m23 * zp);
            let e0sq = p.mu.cbrt() / zp;
            let c = (u0 * p.z).norm_sqr() * e0sq / (eta * (eta + p.z)).norm_sqr();
            s0 += c;
            s1 += c * (m23 * zp).powi(2);
        }
        p.bracket() * s0.sqrt() + 2.0 * s1.sqrt()
    }

    /// `‖u‖_B = ⟨λ - Re z⟩‖u‖ + ‖D_t² u‖ + ‖t u‖` for `u = Σ c_a φ_a`.
    pub fn norm_b(&self, c: &[Complex64]) -> f64 {
        let b = &self.basis;
        let l2 = quadratic_form(&b.gram, c).re.max(0.0).sqrt();
        let d2 = quadratic_form(&b.gram_d2, c).re.max(0.0).sqrt();
        let t = quadratic_form(&b.gram_t, c).re.max(0.0).sqrt();
        self.params.bracket() * l2 + d2 + t
    }

    /// `‖v‖ + ⟨λ - Re z⟩^{1/4}|v₀| + ⟨λ - Re z⟩|v₊|`.
    pub fn data_norm(&self, v: &[Complex64], v0: Complex64, v_plus: &[Complex64]) -> f64 {
        let br = self.params.bracket();
        l2(v) + br.powf(0.25) * v0.norm() + br * l2(v_plus)
    }

    /// `⟨(P_λ - z) u, u⟩` using `(P_λ - z) f = -z f`, `(P_λ - z) e_j = η_j e_j`.
    pub fn pairing(&self, c: &[Complex64]) -> Complex64 {
        let g = &self.basis.gram;
        let scaled: Vec<Complex64> = c
            .iter()
            .enumerate()
            .map(|(a, ca)| if a == 0 { -self.params.z * ca } else { self.eta(a) * ca })
            .collect();
        let mut s = Complex64::new(0.0, 0.0);
        for (a, sa) in scaled.iter().enumerate() {
            for (b, cb) in c.iter().enumerate() {
                s += sa * cb.conj() * g[a][b];
            }
        }
        s
    }

    /// `E₋₊` read off from the solver: column `k` is `u₋` for `v₊ = δ_k`,
    /// `v = 0`, `v₀ = 0`.
    pub fn effective_hamiltonian(&self) -> Result<EffectiveHamiltonian> {
        let n = self.params.n;
        let mut entries = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        for k in 0..n {
            let mut vp = vec![Complex64::new(0.0, 0.0); n];
            vp[k] = Complex64::new(1.0, 0.0);
            let s = self.solve(&[], Complex64::new(0.0, 0.0), &vp)?;
            for (j, row) in entries.iter_mut().enumerate() {
                row[k] = s.u_minus[j];
            }
        }
        let eta = (1..=n).map(|j| self.eta(j)).collect();
        Ok(EffectiveHamiltonian { entries, eta })
    }

    /// Zeros of `z ↦ det E₋₊(z)` by Newton's method from each start point.
    pub fn determinant_zeros(&self, starts: &[Complex64]) -> Result<Vec<Complex64>> {
        let det = |z: Complex64| -> Result<Complex64> { Ok(self.at(z).effective_hamiltonian()?.determinant()) };
        starts
            .iter()
            .map(|&z0| {
                let mut z = z0;
                for _ in 0..50 {
                    let h = 1e-6 * (1.0 + z.norm());
                    let d = (det(z + h)? - det(z - h)?) / (2.0 * h);
                    let step = det(z)? / d;
                    z -= step;
                    if step.norm() <= 1e-15 * (1.0 + z.norm()) {
                        break;
                    }
                }
                Ok(z)
            })
            .collect()
    }
}

fn l2(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Builds the model and solves it once.
pub fn solve_model(
    params: ModelParameters,
    table: &AiryZeroTable,
    v: &[Complex64],
    v0: Complex64,
    v_plus: &[Complex64],
    j_trunc: usize,
) -> Result<GrushinSolution> {
    GrushinModel::new(params, table, j_trunc)?.solve(v, v0, v_plus)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectiveHamiltonian {
    pub entries: Vec<Vec<Complex64>>,
    pub eta: Vec<Complex64>,
}

impl EffectiveHamiltonian {
    pub fn determinant(&self) -> Complex64 {
        determinant(&self.entries)
    }

    /// `∏ (-η_j)`.
    pub fn diagonal_product(&self) -> Complex64 {
        self.eta.iter().map(|e| -e).product()
    }

    pub fn max_off_diagonal(&self) -> f64 {
        let mut m: f64 = 0.0;
        for (j, row) in self.entries.iter().enumerate() {
            for (k, x) in row.iter().enumerate() {
                if j != k {
                    m = m.max(x.norm());
                }
            }
        }
        m
    }
}

/// `E₋₊ = diag(-η_j)`, straight from the definition of `η_j`.
pub fn effective_hamiltonian(params: &ModelParameters, table: &AiryZeroTable) -> EffectiveHamiltonian {
    let m23 = params.mu.powf(2.0 / 3.0);
    let eta: Vec<Complex64> = (1..=params.n).map(|j| params.eta_of(m23 * table.zeta_prime(j))).collect();
    let n = eta.len();
    let mut entries = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for j in 0..n {
        entries[j][j] = -eta[j];
    }
    EffectiveHamiltonian { entries, eta }
}

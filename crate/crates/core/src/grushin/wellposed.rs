use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::model::{GrushinModel, ModelParameters};
use crate::airy::AiryZeroTable;
use crate::error::{Error, Result};

pub const MIN_TRIALS: usize = 100;
/// Growth threshold for the log-ratio slope across a λ-sweep.
pub const SLOPE_THRESHOLD: f64 = 0.1;

/// Independent random stream for one trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

fn unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..n).map(|_| complex_gaussian(rng)).collect();
    let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    v
}

/// Random data `(v, v₀, v₊)` with weighted norm one: each block points in a
/// random direction and the unit norm is split between the blocks at random.
pub fn random_data<R: Rng + ?Sized>(
    rng: &mut R,
    model: &GrushinModel,
) -> (Vec<Complex64>, Complex64, Vec<Complex64>) {
    let br = model.params.bracket();
    let split: [f64; 3] = [Exp1.sample(rng), Exp1.sample(rng), Exp1.sample(rng)];
    let total: f64 = split.iter().sum();
    let [a, b, c] = split.map(|s| s / total);
    let v: Vec<Complex64> = unit_vector(rng, model.j_trunc()).into_iter().map(|x| x * a).collect();
    let v0 = unit_vector(rng, 1)[0] * (b / br.powf(0.25));
    let n = model.params.n;
    let v_plus = if n == 0 {
        Vec::new()
    } else {
        unit_vector(rng, n).into_iter().map(|x| x * (c / br)).collect()
    };
    (v, v0, v_plus)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WellposednessEstimate {
    pub lambda: f64,
    pub z: Complex64,
    pub mu: f64,
    pub n: usize,
    pub j_trunc: usize,
    pub trials: usize,
    /// Largest `(‖u‖_B + |u₋|) / (‖v‖ + ⟨·⟩^{1/4}|v₀| + ⟨·⟩|v₊|)`.
    pub max_ratio: f64,
    pub mean_ratio: f64,
    /// Largest constant `C` needed in the coercivity inequality on the
    /// same number of random truncated `u`.
    pub coercivity_constant: f64,
    pub max_residual: f64,
}

/// Random-data estimate of the solution operator norm at one parameter point.
pub fn verify_wellposedness(
    params: ModelParameters,
    table: &AiryZeroTable,
    trials: usize,
    j_trunc: usize,
    seed: u64,
) -> Result<WellposednessEstimate> {
    if trials < MIN_TRIALS {
        return Err(Error::invalid(format!("need at least {MIN_TRIALS} trials")));
    }
    let model = GrushinModel::new(params, table, j_trunc)?;
    estimate_with_model(&model, trials, seed)
}

pub fn estimate_with_model(model: &GrushinModel, trials: usize, seed: u64) -> Result<WellposednessEstimate> {
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial as u64);
            let (v, v0, vp) = random_data(&mut rng, model);
            let s = model.solve_checked(&v, v0, &vp)?;
            let lhs = model.norm_b(&s.coefficients())
                + s.u_minus.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            let ratio = lhs / model.data_norm(&v, v0, &vp);
            let coercive = coercivity_ratio(model, &mut rng);
            Ok((ratio, coercive, s.residual))
        })
        .collect::<Result<Vec<_>>>()?;
    let p = model.params;
    Ok(WellposednessEstimate {
        lambda: p.lambda,
        z: p.z,
        mu: p.mu,
        n: p.n,
        j_trunc: model.j_trunc(),
        trials,
        max_ratio: outcomes.iter().map(|o| o.0).fold(0.0, f64::max),
        mean_ratio: outcomes.iter().map(|o| o.0).sum::<f64>() / trials as f64,
        coercivity_constant: outcomes.iter().map(|o| o.1).fold(0.0, f64::max),
        max_residual: outcomes.iter().map(|o| o.2).fold(0.0, f64::max),
    })
}

/// `⟨λ - Re z⟩‖u‖² / (|⟨(P_λ - z)u, u⟩| + ⟨λ - Re z⟩^{-1/2}|γ₁u|²)` for a
/// random `u = u₀ f + Σ u_j e_j`.
pub fn coercivity_ratio<R: Rng + ?Sized>(model: &GrushinModel, rng: &mut R) -> f64 {
    let c = unit_vector(rng, model.j_trunc() + 1);
    let br = model.params.bracket();
    let l2 = super::basis::quadratic_form(&model.basis.gram, &c).re;
    let lhs = model.pairing(&c).norm() + c[0].norm_sqr() / br.sqrt();
    br * l2 / lhs
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WellposednessReport {
    pub lambda_sweep: Vec<f64>,
    pub max_ratio: Vec<f64>,
    /// Least-squares slope of `ln max_ratio` against `ln ⟨λ - Re z⟩`.
    pub slope: f64,
    pub pass: bool,
    pub estimates: Vec<WellposednessEstimate>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSettings {
    pub z: Complex64,
    pub mu: f64,
    pub c1: f64,
    pub trials: usize,
    /// Eigenfunctions kept beyond `N`.
    pub extra_modes: usize,
    pub seed: u64,
}

impl Default for SweepSettings {
    fn default() -> Self {
        Self {
            z: Complex64::new(0.0, 0.0),
            mu: 1.0,
            c1: 6.0,
            trials: 200,
            extra_modes: super::model::DEFAULT_EXTRA_MODES,
            seed: 0,
        }
    }
}

pub fn wellposedness_sweep(
    lambdas: &[f64],
    settings: &SweepSettings,
    table: &AiryZeroTable,
) -> Result<WellposednessReport> {
    let estimates = lambdas
        .iter()
        .map(|&lambda| {
            let p = ModelParameters::new(table, lambda, settings.z, settings.mu, settings.c1)?;
            verify_wellposedness(p, table, settings.trials, p.n + settings.extra_modes, settings.seed)
        })
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = lambdas
        .iter()
        .map(|l| crate::japanese_bracket(l - settings.z.re).ln())
        .collect();
    let ys: Vec<f64> = estimates.iter().map(|e| e.max_ratio.ln()).collect();
    let slope = fit_slope(&xs, &ys);
    Ok(WellposednessReport {
        lambda_sweep: lambdas.to_vec(),
        max_ratio: estimates.iter().map(|e| e.max_ratio).collect(),
        slope,
        pass: slope < SLOPE_THRESHOLD,
        estimates,
    })
}

/// Least-squares slope of `y` against `x`.
pub fn fit_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// `Σ_{j>N} |η_j|^{-2} |e_{j,μ}(0)|²`, the quantity controlling the
/// boundary contribution of the high modes. Terms are summed exactly from
/// the table, then from the asymptotic zeros up to `j = 10⁵`, and the rest is
/// added in closed form.
pub fn tail_sum(params: &ModelParameters, table: &AiryZeroTable) -> f64 {
    const LAST: usize = 100_000;
    let m23 = params.mu.powf(2.0 / 3.0);
    let mut s = 0.0;
    for j in params.n + 1..=LAST {
        let zp = table.zeta_prime_or_asymptotic(j);
        s += params.mu.cbrt() / zp / params.eta_of(m23 * zp).norm_sqr();
    }
    // |η_j|² ~ μ^{4/3} ζ'_j², ζ'_j ~ (3π/2 (j - 3/4))^{2/3}
    let k = 1.5 * std::f64::consts::PI;
    s + 1.0 / (params.mu * k * k * (LAST as f64 - 0.25))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailSumFit {
    pub slope: f64,
    pub sums: [f64; 4],
}

/// Fit of `ln Σ_{j>N} |η_j|^{-2}|e_j(0)|²` against `ln ⟨λ - Re z⟩`.
pub fn tail_sum_slope(
    lambdas: [f64; 4],
    z: Complex64,
    mu: f64,
    c1: f64,
    table: &AiryZeroTable,
) -> Result<TailSumFit> {
    let mut sums = [0.0; 4];
    for (s, &l) in sums.iter_mut().zip(&lambdas) {
        *s = tail_sum(&ModelParameters::new(table, l, z, mu, c1)?, table);
    }
    let xs: Vec<f64> = lambdas.iter().map(|l| crate::japanese_bracket(l - z.re).ln()).collect();
    let ys: Vec<f64> = sums.iter().map(|s| s.ln()).collect();
    Ok(TailSumFit { slope: fit_slope(&xs, &ys), sums })
}

/// Terms of the half-line identities for `u = Σ c_a φ_a` on the basis grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityTerms {
    /// `‖(D_t² + μt) u‖²`
    pub airy_sq: f64,
    pub d2_sq: f64,
    /// `‖μ t u‖²`
    pub t_sq: f64,
    /// `‖√t D_t u‖²`
    pub sqrt_t_d1_sq: f64,
    pub d1_sq: f64,
    pub l2_sq: f64,
    pub gamma0: Complex64,
    pub gamma1: Complex64,
}

impl IdentityTerms {
    /// `‖(D²+μt)u‖² - (‖D²u‖² + ‖μtu‖² + 2μ‖√t D_t u‖² - μ|γ₀u|²)`, relative.
    pub fn airy_identity_defect(&self, mu: f64) -> f64 {
        let rhs = self.d2_sq + self.t_sq + 2.0 * mu * self.sqrt_t_d1_sq - mu * self.gamma0.norm_sqr();
        (self.airy_sq - rhs).abs() / self.airy_sq.max(f64::MIN_POSITIVE)
    }

    /// `‖D_t u‖ / ((√2 + 1)‖D_t² u‖^{1/2}‖u‖^{1/2})`, at most one.
    pub fn interpolation_ratio(&self) -> f64 {
        self.d1_sq.sqrt() / ((2f64.sqrt() + 1.0) * (self.d2_sq * self.l2_sq).powf(0.25))
    }
}

pub fn identity_terms(model: &GrushinModel, c: &[Complex64]) -> IdentityTerms {
    let b = &model.basis;
    let mu = model.params.mu;
    let u = b.synthesize(&b.values, c);
    let du = b.synthesize(&b.derivatives, c);
    let d2u = b.synthesize(&b.d2, c);
    let tu: Vec<Complex64> = u.iter().zip(&b.nodes).map(|(x, &t)| x * (mu * t)).collect();
    let airy: Vec<Complex64> = d2u.iter().zip(&tu).map(|(a, b)| a + b).collect();
    let sqrt_t_d1: f64 = du
        .iter()
        .zip(&b.nodes)
        .zip(&b.weights)
        .map(|((d, &t), w)| w * t * d.norm_sqr())
        .sum();
    // γ₁u = u'(0) = c_0 since f'(0) = 1 and e_j'(0) = 0
    let gamma0 = c[0] * b.poisson.value(0.0)
        + c[1..].iter().zip(&b.boundary_values).map(|(ca, e)| ca * *e).sum::<Complex64>();
    IdentityTerms {
        airy_sq: b.norm_sqr(&airy),
        d2_sq: b.norm_sqr(&d2u),
        t_sq: b.norm_sqr(&tu),
        sqrt_t_d1_sq: sqrt_t_d1,
        d1_sq: b.norm_sqr(&du),
        l2_sq: b.norm_sqr(&u),
        gamma0,
        gamma1: c[0],
    }
}

/// Random coefficients for the identity checks; the `f` component is always
/// present so that both boundary traces are nonzero.
pub fn random_truncated<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<Complex64> {
    let active = rng.random_range(1..len);
    let mut c = vec![Complex64::new(0.0, 0.0); len];
    c[0] = complex_gaussian(rng);
    for x in c.iter_mut().take(active + 1).skip(1) {
        *x = complex_gaussian(rng);
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::airy::build_zero_table;

    #[test]
    fn per_trial_streams_are_reproducible() {
        let a: f64 = trial_rng(7, 3).random();
        let b: f64 = trial_rng(7, 3).random();
        let c: f64 = trial_rng(7, 4).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn random_data_has_unit_weighted_norm() {
        let t = build_zero_table(40).unwrap();
        let p = ModelParameters::new(&t, 40.0, Complex64::new(0.0, 0.0), 1.0, 6.0).unwrap();
        let m = GrushinModel::new(p, &t, 20).unwrap();
        let mut rng = trial_rng(1, 0);
        for _ in 0..20 {
            let (v, v0, vp) = random_data(&mut rng, &m);
            assert!((m.data_norm(&v, v0, &vp) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ratio_finite_at_origin() {
        let t = build_zero_table(80).unwrap();
        let p = ModelParameters::new(&t, 0.0, Complex64::new(0.0, 0.0), 1.0, 6.0).unwrap();
        let e = verify_wellposedness(p, &t, 100, 40, 0).unwrap();
        assert!(e.max_ratio.is_finite() && e.max_ratio > 0.0);
        assert!(e.max_residual < 1e-10);
    }

    #[test]
    fn identities_on_random_functions() {
        let t = build_zero_table(40).unwrap();
        let p = ModelParameters::new(&t, 10.0, Complex64::new(0.0, 0.0), 1.0, 6.0).unwrap();
        let m = GrushinModel::new(p, &t, 30).unwrap();
        let mut rng = trial_rng(2, 0);
        for _ in 0..50 {
            let c = random_truncated(&mut rng, 31);
            let terms = identity_terms(&m, &c);
            assert!(terms.airy_identity_defect(1.0) < 1e-6, "{terms:?}");
            assert!(terms.interpolation_ratio() <= 1.0);
        }
    }

    #[test]
    fn slope_of_exact_power_law() {
        let x = [0.0, 1.0, 2.0];
        let y = [1.0, -0.5, -2.0];
        assert!((fit_slope(&x, &y) + 1.5).abs() < 1e-15);
    }
}

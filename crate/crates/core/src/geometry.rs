//! Curvature data of convex obstacles and the band constants κ, K.

use serde::{Deserialize, Serialize};

use crate::airy::AiryZeroTable;
use crate::error::{Error, Result};

/// Axis ratio beyond which ellipsoid results carry a conditioning warning.
pub const DEGENERACY_RATIO: f64 = 1e3;
pub const MIN_ELLIPSOID_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ObstacleModel {
    Sphere {
        radius: f64,
    },
    Ellipsoid {
        semi_axes: [f64; 3],
    },
    Explicit {
        q_min: f64,
        q_max: f64,
        surface_area: f64,
        #[serde(default = "default_dimension")]
        dimension: usize,
    },
}

fn default_dimension() -> usize {
    3
}

impl ObstacleModel {
    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            ObstacleModel::Sphere { radius } => *radius > 0.0 && radius.is_finite(),
            ObstacleModel::Ellipsoid { semi_axes } => semi_axes.iter().all(|a| *a > 0.0 && a.is_finite()),
            ObstacleModel::Explicit { q_min, q_max, surface_area, dimension } => {
                *q_min > 0.0 && q_min <= q_max && q_max.is_finite() && *surface_area > 0.0 && *dimension >= 2
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::invalid(format!("not a strictly convex obstacle: {self:?}")))
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            ObstacleModel::Explicit { dimension, .. } => *dimension,
            _ => 3,
        }
    }

    /// The same obstacle dilated by `s`.
    pub fn dilated(&self, s: f64) -> Self {
        match self.clone() {
            ObstacleModel::Sphere { radius } => ObstacleModel::Sphere { radius: radius * s },
            ObstacleModel::Ellipsoid { semi_axes } => ObstacleModel::Ellipsoid { semi_axes: semi_axes.map(|a| a * s) },
            ObstacleModel::Explicit { q_min, q_max, surface_area, dimension } => ObstacleModel::Explicit {
                q_min: q_min / s,
                q_max: q_max / s,
                surface_area: surface_area * s.powi(dimension as i32 - 1),
                dimension,
            },
        }
    }

    /// `vol(∂O)`.
    pub fn surface_area(&self) -> f64 {
        match self {
            ObstacleModel::Sphere { radius } => 4.0 * std::f64::consts::PI * radius * radius,
            ObstacleModel::Ellipsoid { semi_axes } => ellipsoid_area(*semi_axes),
            ObstacleModel::Explicit { surface_area, .. } => *surface_area,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureExtremes {
    pub q_min: f64,
    pub q_max: f64,
    /// Change of the extremes during local refinement of the sampled values;
    /// zero for exact models.
    pub error_bound: f64,
    pub warning: Option<String>,
}

/// Extremes of the second fundamental form over unit tangent vectors.
pub fn curvature_extremes(model: &ObstacleModel, n_samples: usize) -> Result<CurvatureExtremes> {
    model.validate()?;
    match model {
        ObstacleModel::Sphere { radius } => Ok(CurvatureExtremes {
            q_min: 1.0 / radius,
            q_max: 1.0 / radius,
            error_bound: 0.0,
            warning: None,
        }),
        ObstacleModel::Explicit { q_min, q_max, .. } => Ok(CurvatureExtremes {
            q_min: *q_min,
            q_max: *q_max,
            error_bound: 0.0,
            warning: None,
        }),
        ObstacleModel::Ellipsoid { semi_axes } => {
            if n_samples < MIN_ELLIPSOID_SAMPLES {
                return Err(Error::invalid(format!("ellipsoid sampling needs at least {MIN_ELLIPSOID_SAMPLES} points")));
            }
            Ok(ellipsoid_extremes(*semi_axes, n_samples))
        }
    }
}

fn ellipsoid_point(axes: [f64; 3], theta: f64, phi: f64) -> [f64; 3] {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    [axes[0] * st * cp, axes[1] * st * sp, axes[2] * ct]
}

/// Principal curvatures at a surface point of `Σ x_i²/a_i² = 1`.
pub fn ellipsoid_principal_curvatures(axes: [f64; 3], x: [f64; 3]) -> (f64, f64) {
    let a = axes.map(|s| 1.0 / (s * s));
    let g = [a[0] * x[0], a[1] * x[1], a[2] * x[2]];
    let gn = (g[0] * g[0] + g[1] * g[1] + g[2] * g[2]).sqrt();
    let n = g.map(|c| c / gn);
    // orthonormal tangent basis
    let helper = if n[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let dot = |u: [f64; 3], v: [f64; 3]| u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
    let d = dot(helper, n);
    let mut e1 = [helper[0] - d * n[0], helper[1] - d * n[1], helper[2] - d * n[2]];
    let l = dot(e1, e1).sqrt();
    e1 = e1.map(|c| c / l);
    let e2 = [
        n[1] * e1[2] - n[2] * e1[1],
        n[2] * e1[0] - n[0] * e1[2],
        n[0] * e1[1] - n[1] * e1[0],
    ];
    let form = |u: [f64; 3], v: [f64; 3]| (a[0] * u[0] * v[0] + a[1] * u[1] * v[1] + a[2] * u[2] * v[2]) / gn;
    let (s11, s12, s22) = (form(e1, e1), form(e1, e2), form(e2, e2));
    let mean = 0.5 * (s11 + s22);
    let rad = (0.25 * (s11 - s22).powi(2) + s12 * s12).sqrt();
    (mean - rad, mean + rad)
}

fn ellipsoid_extremes(semi_axes: [f64; 3], n_samples: usize) -> CurvatureExtremes {
    let side = (n_samples as f64).sqrt().ceil() as usize;
    let k = |theta: f64, phi: f64| ellipsoid_principal_curvatures(semi_axes, ellipsoid_point(semi_axes, theta, phi));
    let mut best_min = (f64::INFINITY, 0.0, 0.0);
    let mut best_max = (f64::NEG_INFINITY, 0.0, 0.0);
    for i in 0..side {
        let theta = std::f64::consts::PI * (i as f64 + 0.5) / side as f64;
        for j in 0..side {
            let phi = std::f64::consts::TAU * j as f64 / side as f64;
            let (lo, hi) = k(theta, phi);
            if lo < best_min.0 {
                best_min = (lo, theta, phi);
            }
            if hi > best_max.0 {
                best_max = (hi, theta, phi);
            }
        }
    }
    let step = std::f64::consts::PI / side as f64;
    let refined_min = refine(|t, p| k(t, p).0, best_min, step, 1.0);
    let refined_max = refine(|t, p| k(t, p).1, best_max, step, -1.0);
    let ratio = semi_axes.iter().cloned().fold(0.0, f64::max) / semi_axes.iter().cloned().fold(f64::INFINITY, f64::min);
    CurvatureExtremes {
        q_min: refined_min,
        q_max: refined_max,
        error_bound: (best_min.0 - refined_min).abs().max((best_max.0 - refined_max).abs()),
        warning: (ratio > DEGENERACY_RATIO).then(|| format!("semi-axis ratio {ratio:.3e} exceeds {DEGENERACY_RATIO:e}; curvature extremes are ill-conditioned")),
    }
}

/// Compass search minimising `sign · f` from a sampled start.
fn refine<F: Fn(f64, f64) -> f64>(f: F, start: (f64, f64, f64), step: f64, sign: f64) -> f64 {
    let (mut best, mut t, mut p) = (sign * start.0, start.1, start.2);
    let mut h = step;
    while h > 1e-12 {
        let mut moved = false;
        for (dt, dp) in [(h, 0.0), (-h, 0.0), (0.0, h), (0.0, -h)] {
            let (nt, np) = ((t + dt).clamp(0.0, std::f64::consts::PI), p + dp);
            let v = sign * f(nt, np);
            if v < best {
                best = v;
                t = nt;
                p = np;
                moved = true;
            }
        }
        if !moved {
            h *= 0.5;
        }
    }
    sign * best
}

/// Surface area by Gauss–Legendre in θ and the periodic trapezoidal rule in φ.
fn ellipsoid_area(axes: [f64; 3]) -> f64 {
    let (x, w) = crate::complexmath::gauss_legendre_nodes(200);
    let m = 400;
    let [a, b, c] = axes;
    let mut total = 0.0;
    for (xi, wi) in x.iter().zip(&w) {
        let theta = 0.5 * std::f64::consts::PI * (xi + 1.0);
        let (st, ct) = theta.sin_cos();
        let mut ring = 0.0;
        for k in 0..m {
            let phi = std::f64::consts::TAU * k as f64 / m as f64;
            let (sp, cp) = phi.sin_cos();
            // |r_θ × r_φ|
            let n = [b * c * st * st * cp, a * c * st * st * sp, a * b * st * ct];
            ring += (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        }
        total += wi * ring * std::f64::consts::TAU / m as f64;
    }
    total * 0.5 * std::f64::consts::PI
}

/// `κ`, `K` of the band estimates and the pinched-curvature index `j₀`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandConstants {
    pub kappa: f64,
    pub k_const: f64,
    /// Largest `j` such that `Q_max/Q_min < (ζ'_{i+1}/ζ'_i)^{3/2}` for all `i ≤ j`.
    pub j0: usize,
    pub q_min: f64,
    pub q_max: f64,
    /// The per-index predicate `Q_max/Q_min < (ζ'_{j+1}/ζ'_j)^{3/2}`, for
    /// `j = 1..count-1` (entry `j - 1`).
    pub pinched: Vec<bool>,
}

/// `2^{-1/3} cos(π/6) Q^{2/3}`.
pub fn band_coefficient(q: f64) -> f64 {
    2f64.powf(-1.0 / 3.0) * std::f64::consts::FRAC_PI_6.cos() * q.powf(2.0 / 3.0)
}

impl BandConstants {
    pub fn from_extremes(q_min: f64, q_max: f64, table: &AiryZeroTable) -> Result<Self> {
        if !(q_min > 0.0 && q_min <= q_max) {
            return Err(Error::invalid("need 0 < Q_min ≤ Q_max"));
        }
        let ratio = q_max / q_min;
        let pinched: Vec<bool> = (1..table.count())
            .map(|j| ratio < (table.zeta_prime(j + 1) / table.zeta_prime(j)).powf(1.5))
            .collect();
        let j0 = pinched.iter().take_while(|&&p| p).count();
        Ok(Self {
            kappa: band_coefficient(q_min),
            k_const: band_coefficient(q_max),
            j0,
            q_min,
            q_max,
            pinched,
        })
    }

    /// Constants of the single-curvature frame `Q = μ/2`, where `κ = K`.
    pub fn from_mu(mu: f64, table: &AiryZeroTable) -> Result<Self> {
        Self::from_extremes(0.5 * mu, 0.5 * mu, table)
    }
}

pub fn band_constants(model: &ObstacleModel, table: &AiryZeroTable) -> Result<BandConstants> {
    let ex = curvature_extremes(model, 40_000)?;
    BandConstants::from_extremes(ex.q_min, ex.q_max, table)
}

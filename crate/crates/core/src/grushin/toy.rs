use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_GRID: usize = 64;

/// Discrete solution of the interval problem on `[0, π]`:
///
/// ```text
/// -u'' - z u + u₋/π = v,   u'(0) = v₀,   u'(π) = 0,   (1/π)∫u = v₊
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToySolution {
    pub u: Vec<Complex64>,
    pub u_minus: Complex64,
}

/// Second-order finite differences on `grid_n` cells: central differences
/// inside, one-sided second-order stencils for the Neumann data and the
/// trapezoidal rule for the mean.
pub fn solve_interval_toy<V>(z: Complex64, grid_n: usize, v: V, v0: Complex64, v_plus: Complex64) -> Result<ToySolution>
where
    V: Fn(f64) -> Complex64,
{
    if grid_n < MIN_GRID {
        return Err(Error::invalid(format!("grid_n must be at least {MIN_GRID}")));
    }
    if !(z.re < 1.0) {
        return Err(Error::invalid("the interval model needs Re z < 1"));
    }
    let n = grid_n;
    let h = std::f64::consts::PI / n as f64;
    let h2 = h * h;
    let zero = Complex64::new(0.0, 0.0);
    // Tridiagonal system in u_0..u_n after folding the third entry of the
    // one-sided boundary rows into the neighbouring interior row.
    let mut lower = vec![zero; n + 1];
    let mut diag = vec![zero; n + 1];
    let mut upper = vec![zero; n + 1];
    let mut rhs_p = vec![zero; n + 1];
    let mut rhs_h = vec![zero; n + 1];
    let inv_pi = 1.0 / std::f64::consts::PI;
    for i in 1..n {
        lower[i] = Complex64::new(-1.0 / h2, 0.0);
        diag[i] = 2.0 / h2 - z;
        upper[i] = Complex64::new(-1.0 / h2, 0.0);
        rhs_p[i] = v(i as f64 * h);
        rhs_h[i] = Complex64::new(inv_pi, 0.0);
    }
    // (-3u_0 + 4u_1 - u_2)/(2h) = v0, plus (-h/2)·(row 1) to drop u_2
    diag[0] = -3.0 / (2.0 * h) - (h / 2.0) * lower[1];
    upper[0] = 4.0 / (2.0 * h) - (h / 2.0) * diag[1];
    rhs_p[0] = v0 - (h / 2.0) * rhs_p[1];
    rhs_h[0] = -(h / 2.0) * rhs_h[1];
    // (3u_n - 4u_{n-1} + u_{n-2})/(2h) = 0, plus (h/2)·(row n-1) to drop u_{n-2}
    diag[n] = 3.0 / (2.0 * h) + (h / 2.0) * upper[n - 1];
    lower[n] = -4.0 / (2.0 * h) + (h / 2.0) * diag[n - 1];
    rhs_p[n] = (h / 2.0) * rhs_p[n - 1];
    rhs_h[n] = (h / 2.0) * rhs_h[n - 1];

    let up = thomas(&lower, &diag, &upper, &rhs_p).ok_or(Error::SingularSystem { z })?;
    let uh = thomas(&lower, &diag, &upper, &rhs_h).ok_or(Error::SingularSystem { z })?;
    // u = up - u₋ uh, and (1/π) T(u) = v₊
    let trap = |u: &[Complex64]| -> Complex64 {
        h * (u[1..n].iter().sum::<Complex64>() + 0.5 * (u[0] + u[n]))
    };
    let th = trap(&uh);
    if th.norm() < 1e-12 {
        return Err(Error::SingularSystem { z });
    }
    let u_minus = (trap(&up) - std::f64::consts::PI * v_plus) / th;
    let u = up.iter().zip(&uh).map(|(p, q)| p - u_minus * q).collect();
    Ok(ToySolution { u, u_minus })
}

fn thomas(a: &[Complex64], b: &[Complex64], c: &[Complex64], d: &[Complex64]) -> Option<Vec<Complex64>> {
    let n = b.len();
    let mut cp = vec![Complex64::new(0.0, 0.0); n];
    let mut dp = vec![Complex64::new(0.0, 0.0); n];
    let mut m = b[0];
    if m.norm() == 0.0 {
        return None;
    }
    cp[0] = c[0] / m;
    dp[0] = d[0] / m;
    for i in 1..n {
        m = b[i] - a[i] * cp[i - 1];
        if m.norm() < 1e-300 {
            return None;
        }
        cp[i] = c[i] / m;
        dp[i] = (d[i] - a[i] * dp[i - 1]) / m;
    }
    let mut x = dp;
    for i in (0..n - 1).rev() {
        let next = x[i + 1];
        x[i] -= cp[i] * next;
    }
    Some(x)
}

/// `E₋₊(z)`: the map `v₊ ↦ u₋` at `v = 0`, `v₀ = 0`. Tends to `πz` as
/// `O(grid_n^{-2})`.
pub fn interval_toy_e_minus_plus(z: Complex64, grid_n: usize) -> Result<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    Ok(solve_interval_toy(z, grid_n, |_| zero, zero, Complex64::new(1.0, 0.0))?.u_minus)
}

/// `|E₋₊(z) - πz|` on the grids `grid_n · 2^k`, `k = 0..=doublings`.
///
/// The discrete solution for `v = 0, v₀ = 0` is the constant `v₊`, which
/// every consistent stencil reproduces, so these errors sit at round-off.
pub fn toy_errors(z: Complex64, grid_n: usize, doublings: usize) -> Result<Vec<f64>> {
    let exact = std::f64::consts::PI * z;
    (0..=doublings)
        .map(|k| Ok((interval_toy_e_minus_plus(z, grid_n << k)? - exact).norm()))
        .collect()
}

/// Errors of the full discrete solution map against
/// `u₋ = -v₀ + πz v₊ + ∫v` for the smooth forcing `v(x) = cos 3x + x²`,
/// `v₀ = 0.3`, `v₊ = 1`, on the grids `grid_n · 2^k`.
pub fn toy_forced_errors(z: Complex64, grid_n: usize, doublings: usize) -> Result<Vec<f64>> {
    let pi = std::f64::consts::PI;
    let v = |x: f64| Complex64::new((3.0 * x).cos() + x * x, 0.0);
    let (v0, vp) = (Complex64::new(0.3, 0.0), Complex64::new(1.0, 0.0));
    let exact = -v0 + pi * z * vp + pi.powi(3) / 3.0;
    (0..=doublings)
        .map(|k| Ok((solve_interval_toy(z, grid_n << k, v, v0, vp)?.u_minus - exact).norm()))
        .collect()
}

/// `log₂(e_n / e_{2n})` for successive entries.
pub fn observed_orders(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

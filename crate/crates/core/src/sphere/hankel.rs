use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::complexmath::{ComplexPolynomial, FixedComplex};
use crate::error::{Error, Result};

pub const MAX_L: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "eta", rename_all = "snake_case")]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
    /// `∂_r u + η u = 0` with constant `η`.
    Robin(f64),
}

impl BoundaryCondition {
    /// Neumann and Robin bands sit at the zeros of Ai′, Dirichlet ones at
    /// the zeros of Ai.
    pub fn uses_ai_prime_zeros(&self) -> bool {
        !matches!(self, BoundaryCondition::Dirichlet)
    }

    pub fn tag(&self) -> String {
        match self {
            BoundaryCondition::Dirichlet => "dirichlet".into(),
            BoundaryCondition::Neumann => "neumann".into(),
            BoundaryCondition::Robin(eta) => format!("robin({eta})"),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        match t.as_str() {
            "dirichlet" => Ok(BoundaryCondition::Dirichlet),
            "neumann" => Ok(BoundaryCondition::Neumann),
            _ => t
                .strip_prefix("robin(")
                .and_then(|r| r.strip_suffix(')'))
                .and_then(|v| v.parse::<f64>().ok())
                .filter(|v| v.is_finite())
                .map(BoundaryCondition::Robin)
                .ok_or_else(|| Error::invalid(format!("unknown boundary condition '{s}'"))),
        }
    }
}

/// The outgoing-wave condition at `r = a` for angular momentum `l`, reduced
/// to a polynomial in `x = λa`.
///
/// With `h_l^{(1)}(x) = (-i)^{l+1} e^{ix} x^{-l-1} P_l(x)` and
/// `P_l(x) = Σ_m i^m (l+m)!/(m!(l-m)! 2^m) x^{l-m}`, the conditions are
/// `P_l = 0` (Dirichlet), `ixP_l + xP_l' - (l+1)P_l = 0` (Neumann) and the
/// Neumann numerator plus `ηa P_l` (Robin).
///
/// The stored polynomial is in `y = x / variable_scale`, normalised so the
/// largest coefficient has modulus one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HankelCondition {
    pub l: usize,
    pub bc: BoundaryCondition,
    pub radius: f64,
    pub variable_scale: f64,
    pub polynomial: ComplexPolynomial,
}

fn ln_factorial(n: usize) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

pub fn hankel_condition(l: usize, bc: BoundaryCondition, radius: f64) -> Result<HankelCondition> {
    if l > MAX_L {
        return Err(Error::invalid(format!("l = {l} exceeds {MAX_L}")));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::invalid("radius must be positive"));
    }
    let s = l as f64 + 1.0;
    // coefficient of y^k in P_l(s y): i^{l-k} (2l-k)!/((l-k)! k! 2^{l-k}) s^k
    let lf: Vec<f64> = (0..=2 * l).map(ln_factorial).collect();
    let logs: Vec<f64> = (0..=l)
        .map(|k| lf[2 * l - k] - lf[l - k] - lf[k] - (l - k) as f64 * 2f64.ln() + k as f64 * s.ln())
        .collect();
    let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let i = Complex64::new(0.0, 1.0);
    let p: Vec<Complex64> = logs
        .iter()
        .enumerate()
        .map(|(k, lg)| i.powu(((l - k) % 4) as u32) * (lg - top).exp())
        .collect();
    let coeffs = match bc {
        BoundaryCondition::Dirichlet => p,
        BoundaryCondition::Neumann | BoundaryCondition::Robin(_) => {
            let eta_a = match bc {
                BoundaryCondition::Robin(eta) => eta * radius,
                _ => 0.0,
            };
            // x = s y: i x P + x P' - (l+1) P + ηa P
            (0..=l + 1)
                .map(|k| {
                    let pk = p.get(k).copied().unwrap_or_default();
                    let prev = if k > 0 { p[k - 1] } else { Complex64::new(0.0, 0.0) };
                    i * s * prev + (k as f64 - l as f64 - 1.0 + eta_a) * pk
                })
                .collect()
        }
    };
    let m = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let polynomial = ComplexPolynomial::new(coeffs.into_iter().map(|c| c / m).collect())?;
    Ok(HankelCondition { l, bc, radius, variable_scale: s, polynomial })
}

impl HankelCondition {
    pub fn degree(&self) -> usize {
        self.polynomial.degree()
    }

    /// The condition and its `x`-derivative at `x = λa`, up to a constant
    /// factor, from the three-term recurrence of the reverse Bessel
    /// polynomials `θ_n(y) = (2n-1)θ_{n-1}(y) + y²θ_{n-2}(y)`,
    /// `P_l(x) = i^l θ_l(-ix)`. Everything is scaled by `s^{-n}` to stay in
    /// range.
    pub fn eval(&self, x: Complex64) -> (Complex64, Complex64) {
        let s = self.variable_scale;
        let l = self.l;
        let i = Complex64::new(0.0, 1.0);
        let w = -i * x / s;
        // φ_n = θ_n(sw)/s^n and its first two w-derivatives
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let (mut f0, mut d0, mut e0) = (one, zero, zero);
        let (mut f1, mut d1, mut e1) = (w + 1.0 / s, one, zero);
        if l == 0 {
            (f1, d1, e1) = (f0, d0, e0);
        } else {
            for n in 2..=l {
                let a = (2 * n - 1) as f64 / s;
                let f2 = a * f1 + w * w * f0;
                let d2 = a * d1 + 2.0 * w * f0 + w * w * d0;
                let e2 = a * e1 + 2.0 * f0 + 4.0 * w * d0 + w * w * e0;
                (f0, d0, e0) = (f1, d1, e1);
                (f1, d1, e1) = (f2, d2, e2);
            }
        }
        // P = φ, P' = (-i/s) φ', P'' = -φ''/s² (common factor i^l s^l dropped)
        let p = f1;
        let dp = -i / s * d1;
        let ddp = -e1 / (s * s);
        match self.bc {
            BoundaryCondition::Dirichlet => (p, dp),
            BoundaryCondition::Neumann | BoundaryCondition::Robin(_) => {
                let c = match self.bc {
                    BoundaryCondition::Robin(eta) => eta * self.radius,
                    _ => 0.0,
                } - (l as f64 + 1.0);
                let g = i * x * p + x * dp + c * p;
                let dg = i * p + i * x * dp + dp + x * ddp + c * dp;
                (g, dg)
            }
        }
    }

    /// Newton refinement of a root `x` with the recurrence form.
    pub fn polish(&self, mut x: Complex64) -> Complex64 {
        let mut last = f64::INFINITY;
        for _ in 0..30 {
            let (g, dg) = self.eval(x);
            let step = g / dg;
            let size = step.norm();
            if !size.is_finite() || size >= last {
                break;
            }
            x -= step;
            last = size;
            if size <= 4.0 * f64::EPSILON * x.norm() {
                break;
            }
        }
        x
    }
}

/// Sweeps of the refinement before giving up.
const MAX_REFINE_SWEEPS: usize = 60;

impl HankelCondition {
    /// The condition and its derivative at `x` in fixed point with `bits`
    /// fractional bits, up to a common factor. The recurrence coefficients,
    /// the Robin constant and `x` enter exactly.
    pub(crate) fn precise_pair(&self, x: Complex64, bits: u32) -> (FixedComplex, FixedComplex) {
        let l = self.l as i64;
        let s = l + 1;
        let y = FixedComplex::from_complex(Complex64::new(x.im, -x.re), bits);
        let w = y.div_int(s);
        let one = FixedComplex::from_real(1.0, bits);
        let (p, dp) = if l == 0 {
            (one, FixedComplex::zero(bits))
        } else {
            let w2 = &w * &w;
            let mut f0 = one.clone();
            let mut f1 = &w + &one.div_int(s);
            for n in 2..=l {
                let f2 = &f1.scale_int(2 * n - 1).div_int(s) + &(&w2 * &f0);
                f0 = std::mem::replace(&mut f1, f2);
            }
            // P' = -i(φ_l - wφ_{l-1})
            let dp = (&f1 - &(&w * &f0)).times_i();
            (f1, -&dp)
        };
        match self.bc {
            BoundaryCondition::Dirichlet => (p, dp),
            BoundaryCondition::Neumann | BoundaryCondition::Robin(_) => {
                let xf = FixedComplex::from_complex(x, bits);
                let mut c = FixedComplex::from_real(-(s as f64), bits);
                if let BoundaryCondition::Robin(eta) = self.bc {
                    let eta_a = &FixedComplex::from_real(eta, bits) * &FixedComplex::from_real(self.radius, bits);
                    c = &c + &eta_a;
                }
                // g = ixP + xP' + cP, g' = i(1+2l)P + (1 + c + 2l - ix)P'
                let g = &(&(&xf * &p).times_i() + &(&xf * &dp)) + &(&c * &p);
                let k = &(&c + &FixedComplex::from_real((1 + 2 * l) as f64, bits)) - &xf.times_i();
                let dg = &p.times_i().scale_int(1 + 2 * l) + &(&k * &dp);
                (g, dg)
            }
        }
    }

    /// Newton correction `g/g'` at `x`; only the final quotient is rounded.
    pub fn precise_correction(&self, x: Complex64, bits: u32) -> Complex64 {
        let (g, dg) = self.precise_pair(x, bits);
        g.ratio(&dg)
    }

    /// The condition at `x` up to a positive factor, and its logarithmic
    /// derivative, for phase tracking away from the roots.
    pub fn precise_direction(&self, x: Complex64) -> (Complex64, Complex64) {
        let (g, dg) = self.precise_pair(x, self.contour_bits(x));
        (g.normalized(), dg.ratio(&g))
    }

    /// Cheaper than [`Self::working_bits`]: off the roots only the phase is
    /// needed.
    fn contour_bits(&self, x: Complex64) -> u32 {
        self.working_bits(x) - (1.2 * x.im.abs()) as u32
    }

    /// Fractional bits needed at `x`: the size of the recurrence terms plus
    /// the loss `e^{2|Im x|}` observed for this representation.
    pub fn working_bits(&self, x: Complex64) -> u32 {
        let s = self.variable_scale;
        let w = Complex64::new(x.im, -x.re) / s;
        let (mut f0, mut f1) = (Complex64::new(1.0, 0.0), w + 1.0 / s);
        let mut big = f0.norm().max(f1.norm());
        for n in 2..=self.l {
            let f2 = (2 * n - 1) as f64 / s * f1 + w * w * f0;
            (f0, f1) = (f1, f2);
            big = big.max(f1.norm());
        }
        let size = if big.is_finite() { big.log2().max(0.0) } else { 2048.0 };
        96 + size.ceil() as u32 + (2.9 * x.im.abs()).ceil() as u32
    }

    /// Refines approximate roots `x_k` simultaneously (Aberth–Ehrlich) with
    /// fixed-point Newton corrections. A root is accepted once its correction
    /// is below `1e-14 (1 + |x|)` and agrees with a recomputation at 64 more
    /// bits. Precision is raised by 64 bits whenever small steps stop
    /// shrinking.
    pub fn refine_roots(&self, seeds: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = seeds.len();
        let mut x = seeds.to_vec();
        let mut bits: Vec<u32> = x.iter().map(|&z| self.working_bits(z)).collect();
        let mut done = vec![false; n];
        let mut last = vec![f64::INFINITY; n];
        let mut worst = f64::INFINITY;
        for sweep in 0..MAX_REFINE_SWEEPS {
            worst = 0.0;
            for i in 0..n {
                if done[i] {
                    continue;
                }
                let corr = self.precise_correction(x[i], bits[i]);
                let repulsion: Complex64 = (0..n).filter(|&j| j != i).map(|j| (x[i] - x[j]).inv()).sum();
                let step = corr / (1.0 - corr * repulsion);
                if !(step.re.is_finite() && step.im.is_finite()) {
                    return Err(Error::Domain(format!("l = {}: refinement broke down at {}", self.l, x[i])));
                }
                x[i] -= step;
                let scale = 1.0 + x[i].norm();
                worst = worst.max(step.norm() / scale);
                if step.norm() <= 1e-14 * scale {
                    let check = self.precise_correction(x[i], bits[i] + 64);
                    if check.norm() <= 1e-13 * scale {
                        done[i] = true;
                    } else {
                        bits[i] += 64;
                    }
                } else if (step.norm() <= 1e-6 * scale && step.norm() > 0.25 * last[i]) || (sweep >= 8 && sweep % 4 == 0) {
                    // steps stopped shrinking, or convergence is slow: assume
                    // rounding noise rather than a bad start
                    bits[i] += 64;
                }
                last[i] = step.norm();
                bits[i] = bits[i].max(self.working_bits(x[i]));
            }
            if done.iter().all(|&d| d) {
                return Ok(x);
            }
        }
        Err(Error::NonConvergence { iterations: MAX_REFINE_SWEEPS, residual: worst, best: x })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roots(h: &HankelCondition) -> Vec<Complex64> {
        crate::complexmath::find_all_roots(&h.polynomial, 1e-12)
            .unwrap()
            .iter()
            .map(|r| h.polish(r.value * h.variable_scale))
            .collect()
    }

    #[test]
    fn low_order_roots() {
        let mi = Complex64::new(0.0, -1.0);
        let h = hankel_condition(0, BoundaryCondition::Dirichlet, 1.0).unwrap();
        assert_eq!(h.degree(), 0);
        let h = hankel_condition(0, BoundaryCondition::Neumann, 1.0).unwrap();
        let r = roots(&h);
        assert_eq!(r.len(), 1);
        assert!((r[0] - mi).norm() < 1e-14);
        assert!(h.eval(mi).0.norm() < 1e-12);
        let h = hankel_condition(1, BoundaryCondition::Dirichlet, 1.0).unwrap();
        let r = roots(&h);
        assert!((r[0] - mi).norm() < 1e-14);
        let h = hankel_condition(1, BoundaryCondition::Neumann, 1.0).unwrap();
        let mut r = roots(&h);
        r.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((r[0] - Complex64::new(-1.0, -1.0)).norm() < 1e-13);
        assert!((r[1] - Complex64::new(1.0, -1.0)).norm() < 1e-13);
    }

    #[test]
    fn recurrence_matches_polynomial() {
        for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Neumann, BoundaryCondition::Robin(0.5)] {
            let h = hankel_condition(7, bc, 1.3).unwrap();
            let x1 = Complex64::new(3.0, -1.0);
            let x2 = Complex64::new(-2.0, -4.0);
            let ratio = |x: Complex64| h.polynomial.eval(x / h.variable_scale) / h.eval(x).0;
            assert!((ratio(x1) - ratio(x2)).norm() < 1e-10 * ratio(x1).norm());
            let (_, dg) = h.eval(x1);
            let step = 1e-6;
            let fd = (h.eval(x1 + step).0 - h.eval(x1 - step).0) / (2.0 * step);
            assert!((fd - dg).norm() < 1e-7 * dg.norm());
        }
    }

    #[test]
    fn large_l_is_finite() {
        let h = hankel_condition(400, BoundaryCondition::Neumann, 1.0).unwrap();
        assert_eq!(h.degree(), 401);
        assert!(h.polynomial.coeffs().iter().all(|c| c.re.is_finite() && c.im.is_finite()));
    }

    #[test]
    fn parse_tags() {
        assert_eq!(BoundaryCondition::parse("Neumann").unwrap(), BoundaryCondition::Neumann);
        assert_eq!(BoundaryCondition::parse("robin(0.5)").unwrap(), BoundaryCondition::Robin(0.5));
        assert_eq!(BoundaryCondition::parse(&BoundaryCondition::Robin(-1.5).tag()).unwrap(), BoundaryCondition::Robin(-1.5));
        assert!(BoundaryCondition::parse("mixed").is_err());
    }
}

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::omega;

/// Below this modulus the Maclaurin series is summed directly.
pub const SERIES_RADIUS: f64 = 2.5;
/// At and above this modulus the large-argument expansion is used.
pub const ASYMPTOTIC_RADIUS: f64 = 10.0;

const AI0: f64 = 0.355_028_053_887_817_2;
const AIP0: f64 = -0.258_819_403_792_806_8;
const TAYLOR_STEP: f64 = 0.5;
const OVERFLOW_EXPONENT: f64 = 700.0;

/// `Ai(z) = ai · e^{exponent}` and `Ai'(z) = aip · e^{exponent}`, with
/// `exponent = -ζ(z)` where `ζ = (2/3) z^{3/2}` on the principal branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledAiry {
    pub ai: Complex64,
    pub aip: Complex64,
    pub exponent: Complex64,
}

impl ScaledAiry {
    fn conj(self) -> Self {
        Self { ai: self.ai.conj(), aip: self.aip.conj(), exponent: self.exponent.conj() }
    }

    fn from_plain(ai: Complex64, aip: Complex64, z: Complex64) -> Self {
        let zt = zeta(z);
        let s = zt.exp();
        Self { ai: ai * s, aip: aip * s, exponent: -zt }
    }

    /// The unscaled pair; `None` if it does not fit in a double.
    pub fn unscaled(&self) -> Option<(Complex64, Complex64)> {
        if self.exponent.re.abs() > OVERFLOW_EXPONENT {
            return None;
        }
        let e = self.exponent.exp();
        Some((self.ai * e, self.aip * e))
    }
}

/// `ζ(z) = (2/3) z^{3/2}`, principal branch.
pub fn zeta(z: Complex64) -> Complex64 {
    z * z.sqrt() * (2.0 / 3.0)
}

/// `(Ai(z), Ai'(z))`. Fails with [`Error::AiryOverflow`] when the values leave
/// the double range; the error carries the scaled pair.
pub fn airy_ai(z: Complex64) -> Result<(Complex64, Complex64)> {
    let s = airy_ai_scaled(z);
    s.unscaled().ok_or(Error::AiryOverflow { ai: s.ai, aip: s.aip, exponent: s.exponent })
}

/// Exponentially scaled Airy pair; valid for every finite `z`.
pub fn airy_ai_scaled(z: Complex64) -> ScaledAiry {
    if z.im < 0.0 {
        return upper_half(z.conj()).conj();
    }
    upper_half(Complex64::new(z.re, 0.0f64.max(z.im)))
}

fn upper_half(z: Complex64) -> ScaledAiry {
    let r = z.norm();
    if r <= SERIES_RADIUS {
        let (ai, aip) = airy_series(z);
        return ScaledAiry::from_plain(ai, aip, z);
    }
    if r >= ASYMPTOTIC_RADIUS {
        return large(z);
    }
    let (ai, aip) = airy_continued(z);
    ScaledAiry::from_plain(ai, aip, z)
}

fn large(z: Complex64) -> ScaledAiry {
    if z.arg().abs() <= 2.0 * std::f64::consts::FRAC_PI_3 {
        return airy_asymptotic(z).expect("inside the asymptotic sector");
    }
    // Ai(z) = -ω Ai(ωz) - ω² Ai(ω²z)
    let w = omega();
    let w2 = w * w;
    let a1 = airy_asymptotic(w * z).expect("rotated into the sector");
    let a2 = airy_asymptotic(w2 * z).expect("rotated into the sector");
    let zt = zeta(z);
    let e1 = (zt + a1.exponent).exp();
    let e2 = (zt + a2.exponent).exp();
    ScaledAiry {
        ai: -w * a1.ai * e1 - w2 * a2.ai * e2,
        aip: -w2 * a1.aip * e1 - w * a2.aip * e2,
        exponent: -zt,
    }
}

/// Maclaurin series `Ai = Ai(0) f - |Ai'(0)| g` and its derivative.
pub fn airy_series(z: Complex64) -> (Complex64, Complex64) {
    let z3 = z * z * z;
    let one = Complex64::new(1.0, 0.0);
    let (mut f, mut tf) = (one, one);
    let (mut g, mut tg) = (z, z);
    let (mut fp, mut tfp) = (z * z * 0.5, z * z * 0.5);
    let (mut gp, mut tgp) = (one, one);
    for k in 1..200 {
        let k = k as f64;
        tf = tf * z3 / ((3.0 * k - 1.0) * 3.0 * k);
        tg = tg * z3 / (3.0 * k * (3.0 * k + 1.0));
        tgp = tgp * z3 / (3.0 * k * (3.0 * k - 2.0));
        f += tf;
        g += tg;
        gp += tgp;
        if k >= 2.0 {
            tfp = tfp * z3 / ((3.0 * k - 1.0) * (3.0 * k - 3.0));
            fp += tfp;
        }
        let small = |t: Complex64, s: Complex64| t.norm() <= 1e-17 * s.norm().max(1e-300);
        if k >= 3.0 && small(tf, f) && small(tg, g) && small(tfp, fp) && small(tgp, gp) {
            break;
        }
    }
    (AI0 * f + AIP0 * g, AI0 * fp + AIP0 * gp)
}

/// Large-argument expansion, scaled. `None` outside `|arg z| ≤ 2π/3`.
pub fn airy_asymptotic(z: Complex64) -> Option<ScaledAiry> {
    if z.arg().abs() > 2.0 * std::f64::consts::FRAC_PI_3 + 1e-12 || z.norm() == 0.0 {
        return None;
    }
    let zt = zeta(z);
    let inv = zt.inv();
    let mut u = 1.0;
    let mut su = Complex64::new(1.0, 0.0);
    let mut sv = Complex64::new(1.0, 0.0);
    let mut pw = Complex64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
        pw *= -inv;
        let tu = pw * u;
        let tv = pw * v;
        if tu.norm() > last {
            break;
        }
        last = tu.norm();
        su += tu;
        sv += tv;
        if last < 1e-17 {
            break;
        }
    }
    let c = 0.5 / std::f64::consts::PI.sqrt();
    let q = z.sqrt().sqrt();
    Some(ScaledAiry { ai: c * su / q, aip: -c * q * sv, exponent: -zt })
}

/// Values for `SERIES_RADIUS < |z| < ASYMPTOTIC_RADIUS` by Taylor-series
/// integration of `y'' = z y` along the ray through `z`. In the sector where Ai
/// decays outward the march starts from the large-argument expansion and runs
/// inward; elsewhere it starts from the Maclaurin series and runs outward.
pub fn airy_continued(z: Complex64) -> (Complex64, Complex64) {
    let dir = z / z.norm();
    if z.arg().abs() < std::f64::consts::FRAC_PI_3 {
        let z0 = dir * ASYMPTOTIC_RADIUS;
        let s = airy_asymptotic(z0).expect("start point in sector");
        let e = s.exponent.exp();
        march(z0, s.ai * e, s.aip * e, z)
    } else {
        let z0 = dir * SERIES_RADIUS;
        let (ai, aip) = airy_series(z0);
        march(z0, ai, aip, z)
    }
}

fn march(
    mut z0: Complex64,
    mut y: Complex64,
    mut yp: Complex64,
    target: Complex64,
) -> (Complex64, Complex64) {
    let steps = ((target - z0).norm() / TAYLOR_STEP).ceil().max(1.0) as usize;
    let h = (target - z0) / steps as f64;
    for _ in 0..steps {
        (y, yp) = taylor_step(z0, y, yp, h);
        z0 += h;
    }
    (y, yp)
}

/// One step of the power series of `y'' = z y` about `z0`:
/// `c_{k+2} = (z0 c_k + c_{k-1}) / ((k+1)(k+2))`.
fn taylor_step(z0: Complex64, y: Complex64, yp: Complex64, h: Complex64) -> (Complex64, Complex64) {
    let mut cm1 = Complex64::new(0.0, 0.0);
    let mut c0 = y;
    let mut c1 = yp;
    let mut hk = h; // h^{k}, k = 1
    let mut val = y + yp * h;
    let mut der = yp;
    let scale = y.norm() + yp.norm() * h.norm();
    let mut quiet = 0;
    for k in 0..200usize {
        let kf = k as f64;
        let c2 = (z0 * c0 + cm1) / ((kf + 1.0) * (kf + 2.0));
        // c2 is the coefficient of h^{k+2}
        let dv = c2 * hk * h;
        let dd = c2 * hk * (kf + 2.0);
        val += dv;
        der += dd;
        hk *= h;
        cm1 = c0;
        c0 = c1;
        c1 = c2;
        if dv.norm() <= 1e-18 * scale && dd.norm() * h.norm() <= 1e-18 * scale {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    (val, der)
}

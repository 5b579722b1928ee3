//! Resonance-free gaps and resonance bands as predicates on complex numbers.
//!
//! With `R = Re λ` and `s = -Im λ`, band `j` is
//! `κζ_j R^{1/3} - C ≤ s ≤ Kζ_j R^{1/3} + C` and gap `j ≥ 1` is the open strip
//! between band `j` and band `j + 1`. Gap 0 lies between the real axis and
//! band 1. Points on a boundary belong to the band. Here `ζ_j` stands for the
//! zeros attached to the boundary condition: `ζ'_j` for Neumann and Robin,
//! `ζ_j` for Dirichlet.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::BandConstants;
use crate::airy::AiryZeroTable;

pub const DEFAULT_C_MARGIN: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "index", rename_all = "snake_case")]
pub enum BandAssignment {
    Gap(usize),
    Band(usize),
    /// Deeper than the last band covered by the zero table.
    BelowAxisUnclassified,
    /// `Re λ < C`, outside the region where the estimates apply.
    TooSmallRe,
}

impl BandAssignment {
    pub fn kind(&self) -> &'static str {
        match self {
            BandAssignment::Gap(_) => "gap",
            BandAssignment::Band(_) => "band",
            BandAssignment::BelowAxisUnclassified => "below_axis_unclassified",
            BandAssignment::TooSmallRe => "too_small_re",
        }
    }

    pub fn index(&self) -> Option<usize> {
        match self {
            BandAssignment::Gap(j) | BandAssignment::Band(j) => Some(*j),
            _ => None,
        }
    }

    pub fn from_parts(kind: &str, index: Option<usize>) -> Option<Self> {
        Some(match (kind, index) {
            ("gap", Some(j)) => BandAssignment::Gap(j),
            ("band", Some(j)) => BandAssignment::Band(j),
            ("below_axis_unclassified", _) => BandAssignment::BelowAxisUnclassified,
            ("too_small_re", _) => BandAssignment::TooSmallRe,
            _ => return None,
        })
    }
}

/// Classifies `s = -Im` against bands whose edges are
/// `lo_j = κζ_j·scale - margin`, `hi_j = Kζ_j·scale + margin`.
fn partition(s: f64, kappa: f64, k_const: f64, zeros: &[f64], scale: f64, margin: f64) -> BandAssignment {
    let lo = |j: usize| kappa * zeros[j - 1] * scale - margin;
    let hi = |j: usize| k_const * zeros[j - 1] * scale + margin;
    if zeros.is_empty() {
        return BandAssignment::BelowAxisUnclassified;
    }
    if s < lo(1) {
        return BandAssignment::Gap(0);
    }
    for j in 1..=zeros.len() {
        if s <= hi(j) {
            // bands may overlap for small scale; the lowest band containing s wins
            if s >= lo(j) {
                return BandAssignment::Band(j);
            }
            return BandAssignment::Gap(j - 1);
        }
        if j < zeros.len() && s < lo(j + 1) {
            return BandAssignment::Gap(j);
        }
    }
    BandAssignment::BelowAxisUnclassified
}

/// Classification in the λ-plane against arbitrary band zeros.
pub fn classify_with(lambda: Complex64, kappa: f64, k_const: f64, zeros: &[f64], c_margin: f64) -> Result<BandAssignment> {
    if lambda.im > 0.0 {
        return Err(Error::Domain(format!("resonances lie in the closed lower half-plane, got {lambda}")));
    }
    if !(c_margin >= 0.0) {
        return Err(Error::invalid("C_margin must be non-negative"));
    }
    if lambda.re < c_margin || lambda.re <= 0.0 {
        return Ok(BandAssignment::TooSmallRe);
    }
    Ok(partition(-lambda.im, kappa, k_const, zeros, lambda.re.cbrt(), c_margin))
}

/// Classification against the Neumann bands `ζ'_j`.
pub fn classify_lambda(lambda: Complex64, constants: &BandConstants, table: &AiryZeroTable, c_margin: f64) -> Result<BandAssignment> {
    classify_with(lambda, constants.kappa, constants.k_const, &table.zeros_ai_prime, c_margin)
}

/// `h = 1/Re λ` and `z = h^{-2/3}(h²λ² - 1)`, so that `-Im z = -2h^{1/3} Im λ`.
pub fn rescale(lambda: Complex64) -> Result<(Complex64, f64)> {
    if !(lambda.re > 0.0) {
        return Err(Error::Domain("rescaling needs Re λ > 0".into()));
    }
    let h = 1.0 / lambda.re;
    Ok((h.powf(-2.0 / 3.0) * (h * h * lambda * lambda - 1.0), h))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RescaledFrame {
    pub h: f64,
    pub c_margin: f64,
    /// Cap on `|Re z|`.
    pub re_cap: f64,
}

/// Classification in the rescaled plane. The band edges become
/// `2κζ_j - 2Ch^{1/3}` and `2Kζ_j + 2Ch^{1/3}` in `-Im z`; the factor 2 on the
/// margin keeps the result identical to [`classify_with`] under [`rescale`].
pub fn classify_rescaled_with(z: Complex64, kappa: f64, k_const: f64, zeros: &[f64], frame: &RescaledFrame) -> Result<BandAssignment> {
    let RescaledFrame { h, c_margin, re_cap } = *frame;
    if !(h > 0.0 && h < 1.0) {
        return Err(Error::invalid(format!("h = {h} outside (0, 1)")));
    }
    if z.re.abs() > re_cap {
        return Err(Error::invalid(format!("|Re z| = {} exceeds the cap {re_cap}", z.re.abs())));
    }
    if z.im > 0.0 {
        return Err(Error::Domain(format!("resonances lie in the closed lower half-plane, got z = {z}")));
    }
    if h * c_margin > 1.0 {
        return Ok(BandAssignment::TooSmallRe);
    }
    Ok(partition(-z.im, 2.0 * kappa, 2.0 * k_const, zeros, 1.0, 2.0 * c_margin * h.cbrt()))
}

/// Rescaled classification at a single curvature `μ = 2Q`, where `κ = K`,
/// against the Neumann zeros.
pub fn classify_rescaled(z: Complex64, mu: f64, table: &AiryZeroTable, c_margin: f64, h: f64) -> Result<BandAssignment> {
    let k = BandConstants::from_mu(mu, table)?.kappa;
    let frame = RescaledFrame { h, c_margin, re_cap: f64::INFINITY };
    classify_rescaled_with(z, k, k, &table.zeros_ai_prime, &frame)
}

/// Band edges `(j, lower, upper)` in `-Im λ` at one value of `Re λ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandCurveRow {
    pub re_lambda: f64,
    pub edges: Vec<(f64, f64)>,
}

pub fn band_curves(constants: &BandConstants, zeros: &[f64], c_margin: f64, re_values: &[f64], j_max: usize) -> Vec<BandCurveRow> {
    re_values
        .iter()
        .map(|&r| BandCurveRow {
            re_lambda: r,
            edges: zeros
                .iter()
                .take(j_max)
                .map(|z| {
                    (
                        constants.kappa * z * r.cbrt() - c_margin,
                        constants.k_const * z * r.cbrt() + c_margin,
                    )
                })
                .collect(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::airy::build_zero_table;

    fn setup() -> (AiryZeroTable, BandConstants) {
        let t = build_zero_table(20).unwrap();
        let c = BandConstants::from_extremes(1.0, 1.0, &t).unwrap();
        (t, c)
    }

    #[test]
    fn examples() {
        let (t, c) = setup();
        let cl = |l: Complex64, m: f64| classify_lambda(l, &c, &t, m).unwrap();
        assert_eq!(cl(Complex64::new(100.0, -0.1), 2.0), BandAssignment::Gap(0));
        let on = c.kappa * t.zeta_prime(1) * 100f64.cbrt();
        assert_eq!(cl(Complex64::new(100.0, -on), 1.0), BandAssignment::Band(1));
        let mid = 0.5 * (t.zeta_prime(1) + t.zeta_prime(2)) * c.kappa * 100f64.cbrt();
        assert_eq!(cl(Complex64::new(100.0, -mid), 1.0), BandAssignment::Gap(1));
        assert_eq!(cl(Complex64::new(0.5, -0.1), 1.0), BandAssignment::TooSmallRe);
        assert!(classify_lambda(Complex64::new(10.0, 0.1), &c, &t, 1.0).is_err());
        let deep = Complex64::new(100.0, -1e4);
        assert_eq!(cl(deep, 1.0), BandAssignment::BelowAxisUnclassified);
    }

    #[test]
    fn boundary_goes_to_band() {
        let (t, c) = setup();
        let r: f64 = 8.0;
        let edge = c.kappa * t.zeta_prime(2) * r.cbrt() - 1.0;
        assert_eq!(classify_lambda(Complex64::new(r, -edge), &c, &t, 1.0).unwrap(), BandAssignment::Band(2));
    }

    #[test]
    fn rescaled_band_curve_and_symbol_zero() {
        let (t, _) = setup();
        let mu = 2.0;
        let k = BandConstants::from_mu(mu, &t).unwrap().kappa;
        let h = 1e-3;
        let z = Complex64::new(0.0, -2.0 * k * t.zeta_prime(2));
        assert_eq!(classify_rescaled(z, mu, &t, 1.0, h).unwrap(), BandAssignment::Band(2));
        // z = λ + e^{-2πi/3} μ^{2/3} ζ'_j with λ real
        let w = crate::omega().conj();
        for j in 1..4 {
            let z = 0.7 + w * mu.powf(2.0 / 3.0) * t.zeta_prime(j);
            assert_eq!(classify_rescaled(z, mu, &t, 1.0, h).unwrap(), BandAssignment::Band(j));
        }
    }

    #[test]
    fn cubic_curve_invariant() {
        let (t, c) = setup();
        for j in 1..=5 {
            let k3 = (c.kappa * t.zeta_prime(j)).powi(3);
            for i in 0..100 {
                let r = 1.0 + 10.0 * i as f64;
                let s = c.kappa * t.zeta_prime(j) * f64::cbrt(r);
                assert!((s.powi(3) / r - k3).abs() < 1e-12 * k3);
            }
        }
    }

    #[test]
    fn gap_opens_beyond_predicted_radius() {
        let t = build_zero_table(20).unwrap();
        let c = BandConstants::from_extremes(1.0, 2.0, &t).unwrap();
        let cm = 1.0;
        let width = c.kappa * t.zeta_prime(2) - c.k_const * t.zeta_prime(1);
        assert!(width > 0.0);
        let r0 = (2.0 * cm / width).powi(3);
        let mid = |r: f64| 0.5 * (c.k_const * t.zeta_prime(1) + c.kappa * t.zeta_prime(2)) * r.cbrt();
        let at = |r: f64| classify_lambda(Complex64::new(r, -mid(r)), &c, &t, cm).unwrap();
        assert_eq!(at(1.05 * r0), BandAssignment::Gap(1));
        assert_ne!(at(0.95 * r0), BandAssignment::Gap(1));
    }
}

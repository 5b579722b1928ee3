use serde::{Deserialize, Serialize};

use super::resonances::ResonanceRecord;
use crate::bands::{classify_with, BandAssignment};
use crate::error::{Error, Result};
use crate::geometry::BandConstants;
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapViolation {
    pub l: usize,
    pub lambda: Complex64,
    pub gap: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub c_margin: f64,
    pub re_min: f64,
    /// Gaps `0..=max_gap` were checked.
    pub max_gap: usize,
    pub checked: usize,
    pub violations: Vec<GapViolation>,
    /// Every margin above this leaves the checked gaps empty; at the value
    /// itself the deepest record is still on the gap side.
    pub min_empirical_c: f64,
    pub passed: bool,
}

/// Checks that no record with `Re λ ≥ re_min` lies in `Gap(j)` for
/// `j ≤ min(max_gap, j₀)`. `zeros` are the band zeros (`ζ'_j` for the
/// Neumann bands).
pub fn verify_gaps(
    records: &[ResonanceRecord],
    constants: &BandConstants,
    zeros: &[f64],
    c_margin: f64,
    re_min: f64,
    max_gap: usize,
) -> Result<GapReport> {
    let max_gap = max_gap.min(constants.j0).min(zeros.len().saturating_sub(1));
    let (kappa, k) = (constants.kappa, constants.k_const);
    let mut violations = Vec::new();
    let mut checked = 0;
    let mut min_c: f64 = 0.0;
    for r in records.iter().filter(|r| r.lambda.re >= re_min) {
        checked += 1;
        if let BandAssignment::Gap(j) = classify_with(r.lambda, kappa, k, zeros, c_margin)? {
            if j <= max_gap {
                violations.push(GapViolation { l: r.l, lambda: r.lambda, gap: j });
            }
        }
        let (re, s) = (r.lambda.re, -r.lambda.im);
        let scale = re.cbrt();
        for j in 0..=max_gap {
            let upper = kappa * zeros[j] * scale - s;
            let depth = if j == 0 { upper } else { upper.min(s - k * zeros[j - 1] * scale) };
            if depth > 0.0 {
                min_c = min_c.max(depth.min(re));
            }
        }
    }
    Ok(GapReport {
        c_margin,
        re_min,
        max_gap,
        checked,
        passed: violations.is_empty(),
        violations,
        min_empirical_c: min_c,
    })
}

/// `(2π)^{1-n} vol(B^{n-1}) area r^{n-1}`.
pub fn weyl_prediction(n: usize, area: f64, r: f64) -> f64 {
    use std::f64::consts::PI;
    let m = (n - 1) as f64;
    let ball = PI.powf(m / 2.0) / gamma_half_integer(n + 1);
    (2.0 * PI).powf(-m) * ball * area * r.powf(m)
}

/// `Γ(k/2)` for integer `k ≥ 1`.
fn gamma_half_integer(k: usize) -> f64 {
    let mut g = if k.is_multiple_of(2) { 1.0 } else { std::f64::consts::PI.sqrt() };
    let mut x = if k.is_multiple_of(2) { 1.0 } else { 0.5 };
    while x < k as f64 / 2.0 {
        g *= x;
        x += 1.0;
    }
    g
}

/// Smallest `l_max` for which all sphere resonances with `|λ| ≤ r` are present.
pub fn completeness_l_max(r: f64, radius: f64) -> usize {
    (1.5 * r * radius).ceil() as usize
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeylCount {
    pub r: f64,
    pub j: usize,
    pub count: u64,
    pub predicted: f64,
    pub ratio: f64,
}

/// Counts band-`j` records with `|λ| ≤ r`, weighted by multiplicity, and
/// compares with the leading Weyl term for a sphere of the given radius.
#[allow(clippy::too_many_arguments)]
pub fn weyl_count(
    records: &[ResonanceRecord],
    l_max: usize,
    radius: f64,
    r: f64,
    j: usize,
    constants: &BandConstants,
    zeros: &[f64],
    c_margin: f64,
) -> Result<WeylCount> {
    if !(r > 0.0) || !(radius > 0.0) {
        return Err(Error::invalid("r and the radius must be positive"));
    }
    if j == 0 || j > zeros.len() {
        return Err(Error::invalid(format!("band index {j} outside 1..={}", zeros.len())));
    }
    let predicted = weyl_prediction(3, 4.0 * std::f64::consts::PI * radius * radius, r);
    if records.is_empty() {
        return Ok(WeylCount { r, j, count: 0, predicted, ratio: 0.0 });
    }
    let needed = completeness_l_max(r, radius);
    if l_max < needed {
        return Err(Error::Incomplete { l_max, required: needed, r });
    }
    let mut count = 0u64;
    for rec in records.iter().filter(|rec| rec.lambda.norm() <= r) {
        if classify_with(rec.lambda, constants.kappa, constants.k_const, zeros, c_margin)? == BandAssignment::Band(j) {
            count += rec.multiplicity as u64;
        }
    }
    Ok(WeylCount { r, j, count, predicted, ratio: count as f64 / predicted })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::BoundaryCondition;

    #[test]
    fn unit_sphere_prediction_is_r_squared() {
        let p = weyl_prediction(3, 4.0 * std::f64::consts::PI, 7.0);
        assert!((p - 49.0).abs() < 1e-12);
        // n = 2: (2π)^{-1}·2·length·r
        assert!((weyl_prediction(2, 1.0, 1.0) - 1.0 / std::f64::consts::PI).abs() < 1e-15);
    }

    fn record(l: usize, lambda: Complex64) -> ResonanceRecord {
        ResonanceRecord { lambda, l, bc: BoundaryCondition::Neumann, multiplicity: 2 * l + 1, band: BandAssignment::TooSmallRe }
    }

    fn constants() -> BandConstants {
        let k = crate::geometry::band_coefficient(1.0);
        BandConstants { kappa: k, k_const: k, j0: 5, q_min: 1.0, q_max: 1.0, pinched: vec![true; 5] }
    }

    #[test]
    fn gap_report() {
        let zeros = [1.0, 3.0, 4.5, 6.0];
        let c = constants();
        // s = 0.1 at Re 100 sits deep in the j = 0 gap
        let recs = vec![record(99, Complex64::new(100.0, -0.1))];
        let rep = verify_gaps(&recs, &c, &zeros, 1.0, 10.0, 1).unwrap();
        assert_eq!(rep.violations.len(), 1);
        let depth = c.kappa * 100f64.cbrt() - 0.1;
        assert!((rep.min_empirical_c - depth).abs() < 1e-12);
        let at = verify_gaps(&recs, &c, &zeros, rep.min_empirical_c, 10.0, 1).unwrap();
        assert!(!at.passed);
        let above = verify_gaps(&recs, &c, &zeros, rep.min_empirical_c + 1e-9, 10.0, 1).unwrap();
        assert!(above.passed);
        let rep = verify_gaps(&recs, &c, &zeros, 1.0, 200.0, 1).unwrap();
        assert!(rep.passed && rep.checked == 0);
    }

    #[test]
    fn weyl_counts() {
        let zeros = [1.0, 3.0];
        let c = constants();
        assert_eq!(weyl_count(&[], 0, 1.0, 10.0, 1, &c, &zeros, 1.0).unwrap().count, 0);
        let s = c.kappa * 5f64.cbrt();
        let recs = vec![record(4, Complex64::new(5.0, -s)), record(40, Complex64::new(50.0, -1.0))];
        assert!(matches!(weyl_count(&recs, 5, 1.0, 10.0, 1, &c, &zeros, 1.0), Err(Error::Incomplete { .. })));
        let w = weyl_count(&recs, 15, 1.0, 10.0, 1, &c, &zeros, 1.0).unwrap();
        assert_eq!(w.count, 9);
        assert!((w.predicted - 100.0).abs() < 1e-9);
    }
}

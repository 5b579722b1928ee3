use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::hankel::{hankel_condition, BoundaryCondition, HankelCondition, MAX_L};
use crate::airy::{build_zero_table, AiryZeroTable};
use crate::bands::{classify_with, BandAssignment, DEFAULT_C_MARGIN};
use crate::complexmath::{count_zeros_mirrored, find_all_roots, Rectangle};
use crate::error::{Error, Result};
use crate::geometry::band_coefficient;

/// Zero-table size used for the classification stored with each record.
const CLASSIFICATION_ZEROS: usize = 40;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonanceRecord {
    pub lambda: Complex64,
    pub l: usize,
    pub bc: BoundaryCondition,
    /// `2l + 1` times the multiplicity of the root.
    pub multiplicity: usize,
    pub band: BandAssignment,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonanceSet {
    pub bc: BoundaryCondition,
    pub radius: f64,
    pub l_max: usize,
    pub c_margin: f64,
    pub records: Vec<ResonanceRecord>,
    /// Angular momenta whose roots could not be certified, with the reason.
    pub failures: Vec<(usize, String)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepOptions {
    pub tol: f64,
    pub c_margin: f64,
    /// Cross-check the root count of every `l` with the argument principle.
    pub verify_count: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self { tol: 1e-10, c_margin: DEFAULT_C_MARGIN, verify_count: true }
    }
}

/// All sphere resonances for `0 ≤ l ≤ l_max`.
pub fn compute_resonances(bc: BoundaryCondition, radius: f64, l_max: usize, tol: f64) -> Result<ResonanceSet> {
    let table = build_zero_table(CLASSIFICATION_ZEROS)?;
    compute_resonances_with(bc, radius, l_max, &SweepOptions { tol, ..Default::default() }, &table)
}

pub fn compute_resonances_with(
    bc: BoundaryCondition,
    radius: f64,
    l_max: usize,
    options: &SweepOptions,
    table: &AiryZeroTable,
) -> Result<ResonanceSet> {
    if l_max > MAX_L {
        return Err(Error::invalid(format!("l_max = {l_max} exceeds {MAX_L}")));
    }
    if !(options.tol > 0.0 && options.tol <= 1e-6) {
        return Err(Error::invalid(format!("tolerance {} outside (0, 1e-6]", options.tol)));
    }
    let mut records = Vec::new();
    let mut failures = Vec::new();
    // roots of the last two successful l, used to seed the next one
    let mut history: Vec<(usize, Vec<Complex64>)> = Vec::new();
    for l in 0..=l_max {
        match roots_for_l(l, bc, radius, options, &history) {
            Ok(roots) => {
                for &x in &roots {
                    records.push(ResonanceRecord {
                        lambda: x / radius,
                        l,
                        bc,
                        multiplicity: 2 * l + 1,
                        band: BandAssignment::TooSmallRe,
                    });
                }
                history.push((l, roots));
                if history.len() > 2 {
                    history.remove(0);
                }
            }
            Err(e) => failures.push((l, e.to_string())),
        }
    }
    let mut set = ResonanceSet { bc, radius, l_max, c_margin: options.c_margin, records, failures };
    reclassify(&mut set, table, options.c_margin)?;
    Ok(set)
}

/// Recomputes the stored band of every record for the sphere constants
/// `κ = K = 2^{-1/3} cos(π/6) a^{-2/3}` and the zeros of the record's family.
pub fn reclassify(set: &mut ResonanceSet, table: &AiryZeroTable, c_margin: f64) -> Result<()> {
    let k = band_coefficient(1.0 / set.radius);
    let zeros = if set.bc.uses_ai_prime_zeros() { &table.zeros_ai_prime } else { &table.zeros_ai };
    for r in set.records.iter_mut() {
        r.band = classify_with(r.lambda, k, k, zeros, c_margin)?;
    }
    set.c_margin = c_margin;
    Ok(())
}

/// Angular momenta up to which double-precision root finding gives usable
/// seeds. Beyond this the monomial form is too ill-conditioned and the roots
/// of the previous `l` are continued instead.
const DIRECT_SEED_MAX_L: usize = 16;

/// Starting points for the refinement at `l`, from the roots of earlier
/// angular momenta (most recent last) when available.
fn seeds_for_l(h: &HankelCondition, tol: f64, history: &[(usize, Vec<Complex64>)]) -> Result<Vec<Complex64>> {
    let n = h.degree();
    let s = h.variable_scale;
    match history.last() {
        Some((l1, r1)) if h.l > DIRECT_SEED_MAX_L && !r1.is_empty() => {
            // in u = x/(l+1) the roots move slowly along a fixed curve; the
            // extra roots enter at its bottom near the imaginary axis
            let s1 = *l1 as f64 + 1.0;
            let mut seeds: Vec<Complex64> = match history.len() {
                2 if history[0].0 + 1 == *l1 && *l1 + 1 == h.l => {
                    let (l0, r0) = &history[0];
                    let s0 = *l0 as f64 + 1.0;
                    r1.iter()
                        .map(|x1| {
                            let u1 = x1 / s1;
                            let u0 = r0
                                .iter()
                                .map(|x0| x0 / s0)
                                .min_by(|a, b| (a - u1).norm().total_cmp(&(b - u1).norm()))
                                .unwrap_or(u1);
                            (2.0 * u1 - u0) * s
                        })
                        .collect()
                }
                _ => r1.iter().map(|x| x * (s / s1)).collect(),
            };
            let depth = seeds.iter().map(|x| -x.im).fold(0.0, f64::max);
            let extra = n.saturating_sub(seeds.len());
            for k in 0..extra {
                let offset = (k as f64 - 0.5 * (extra as f64 - 1.0)) * 1.3;
                seeds.push(Complex64::new(offset, -depth - 0.7));
            }
            seeds.truncate(n);
            Ok(seeds)
        }
        _ => match find_all_roots(&h.polynomial, tol) {
            Ok(raw) => Ok(raw
                .iter()
                .flat_map(|r| std::iter::repeat_n(r.value * s, r.multiplicity))
                .collect()),
            Err(Error::NonConvergence { best, .. }) => Ok(best.iter().map(|y| y * s).collect()),
            Err(e) => Err(e),
        },
    }
}

/// Refined, checked roots `x = λa` of the condition at one `l`, nearest to
/// the real axis first.
pub fn roots_for_l(
    l: usize,
    bc: BoundaryCondition,
    radius: f64,
    options: &SweepOptions,
    history: &[(usize, Vec<Complex64>)],
) -> Result<Vec<Complex64>> {
    let h = hankel_condition(l, bc, radius)?;
    if h.degree() == 0 {
        return Ok(Vec::new());
    }
    let seeds = seeds_for_l(&h, options.tol, history)?;
    let mut roots = h.refine_roots(&seeds)?;
    if let Some(x) = roots.iter().find(|x| !(x.im < 0.0)) {
        return Err(Error::Domain(format!("l = {l}: root {x} not in the lower half-plane")));
    }
    for (i, a) in roots.iter().enumerate() {
        if roots[..i].iter().any(|b| (a - b).norm() <= 1e-8 * (1.0 + a.norm())) {
            return Err(Error::Domain(format!("l = {l}: refinement produced the root {a} twice")));
        }
    }
    if options.verify_count {
        verify_count(&h, &roots)?;
    }
    roots.sort_by(|a, b| (-a.im).total_cmp(&-b.im).then(a.re.total_cmp(&b.re)));
    Ok(roots)
}

/// Argument-principle count of the condition on a rectangle enclosing all
/// roots with a margin, compared with the polynomial degree.
fn verify_count(h: &HankelCondition, roots: &[Complex64]) -> Result<()> {
    let (mut re0, mut re1, mut im0, mut im1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for x in roots {
        re0 = re0.min(x.re);
        re1 = re1.max(x.re);
        im0 = im0.min(x.im);
        im1 = im1.max(x.im);
    }
    // the condition is real in -ix, so the root set is mirrored in Re x = 0
    let margin = 0.5 + 0.25 * h.variable_scale;
    let half = re0.abs().max(re1.abs()) + margin;
    let rect = Rectangle::new(-half, half, im0 - margin, im1 + margin)?;
    let n_boundary = ((rect.perimeter() / margin) as usize).max(32);
    let count = count_zeros_mirrored(|x| h.precise_direction(x), &rect, n_boundary)?;
    let expected = roots.len();
    if count != h.degree() || expected != h.degree() {
        return Err(Error::Domain(format!(
            "l = {}: argument principle counts {count} zeros, refinement found {expected}, degree {}",
            h.l,
            h.degree()
        )));
    }
    Ok(())
}

impl ResonanceSet {
    /// Records of one angular momentum, nearest to the real axis first.
    pub fn for_l(&self, l: usize) -> impl Iterator<Item = &ResonanceRecord> {
        self.records.iter().filter(move |r| r.l == l)
    }

    /// Largest deviation from the symmetry `λ ↦ -λ̄` over all records.
    pub fn conjugate_symmetry_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in &self.records {
            let mirror = -r.lambda.conj();
            let d = self
                .for_l(r.l)
                .map(|o| (o.lambda - mirror).norm() / (1.0 + mirror.norm()))
                .fold(f64::INFINITY, f64::min);
            worst = worst.max(d);
        }
        worst
    }
}

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Axis-aligned rectangle in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rectangle {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Rectangle {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        if !(re_min < re_max && im_min < im_max) {
            return Err(Error::invalid("rectangle must have positive width and height"));
        }
        Ok(Self { re_min, re_max, im_min, im_max })
    }

    /// Square of half-width `r` around `centre`.
    pub fn around(centre: Complex64, r: f64) -> Self {
        Self {
            re_min: centre.re - r,
            re_max: centre.re + r,
            im_min: centre.im - r,
            im_max: centre.im + r,
        }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re > self.re_min && z.re < self.re_max && z.im > self.im_min && z.im < self.im_max
    }

    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.re_min, self.im_min),
            Complex64::new(self.re_max, self.im_min),
            Complex64::new(self.re_max, self.im_max),
            Complex64::new(self.re_min, self.im_max),
        ]
    }

    pub fn perimeter(&self) -> f64 {
        2.0 * ((self.re_max - self.re_min) + (self.im_max - self.im_min))
    }
}

/// Phase steps larger than this are subdivided.
const MAX_PHASE_STEP: f64 = std::f64::consts::FRAC_PI_4;
const MAX_DEPTH: u32 = 40;

/// Winding of `f` around the rectangle boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Winding {
    /// Total change of `arg f` divided by `2π`.
    pub turns: f64,
    /// Smallest `|f|` met on the boundary.
    pub min_abs: f64,
    /// False when some boundary piece could not be refined until the phase
    /// steps were small, which happens when a zero lies on or very near it.
    pub resolved: bool,
}

/// Change of `arg f` around the rectangle, from roughly `n_boundary` starting
/// nodes. Steps whose phase change exceeds π/4 are bisected, so the result is
/// insensitive to how fast `|f|` varies along the contour.
pub fn winding_number<F>(f: &F, rect: &Rectangle, n_boundary: usize) -> Winding
where
    F: Fn(Complex64) -> Complex64,
{
    let spacing = rect.perimeter() / n_boundary.max(8) as f64;
    let corners = rect.corners();
    let mut w = Winding { turns: 0.0, min_abs: f64::INFINITY, resolved: true };
    let mut phase = 0.0;
    for k in 0..4 {
        let a = corners[k];
        let b = corners[(k + 1) % 4];
        let m = (((b - a).norm() / spacing).ceil() as usize).max(2);
        let dz = (b - a) / m as f64;
        let mut za = a;
        let mut fa = f(za);
        for i in 1..=m {
            let zb = if i == m { b } else { a + dz * i as f64 };
            let fb = f(zb);
            phase += phase_change(f, za, fa, zb, fb, 0, &mut w);
            za = zb;
            fa = fb;
        }
    }
    w.turns = phase / std::f64::consts::TAU;
    w
}

fn phase_change<F>(f: &F, za: Complex64, fa: Complex64, zb: Complex64, fb: Complex64, depth: u32, w: &mut Winding) -> f64
where
    F: Fn(Complex64) -> Complex64,
{
    w.min_abs = w.min_abs.min(fa.norm()).min(fb.norm());
    let step = (fb / fa).arg();
    if !step.is_finite() {
        w.resolved = false;
        return 0.0;
    }
    if step.abs() <= MAX_PHASE_STEP {
        return step;
    }
    if depth >= MAX_DEPTH {
        w.resolved = false;
        return step;
    }
    let zm = 0.5 * (za + zb);
    let fm = f(zm);
    phase_change(f, za, fa, zm, fm, depth + 1, w) + phase_change(f, zm, fm, zb, fb, depth + 1, w)
}

/// Winding of `f` from values and logarithmic derivatives: `fd(z)` returns
/// `f(z)` (any positive rescaling is allowed) and `f'(z)/f(z)`. A boundary
/// step is subdivided until `|dz f'/f| ≤ 1/2` at both ends, so no zero can
/// slip between two nodes unnoticed however sparse the starting nodes are.
pub fn winding_number_with_derivative<F>(fd: &F, rect: &Rectangle, n_boundary: usize) -> Winding
where
    F: Fn(Complex64) -> (Complex64, Complex64),
{
    let spacing = rect.perimeter() / n_boundary.max(8) as f64;
    let c = rect.corners();
    let mut w = Winding { turns: 0.0, min_abs: f64::INFINITY, resolved: true };
    let phase = trace_path(fd, &[c[0], c[1], c[2], c[3], c[0]], spacing, &mut w);
    w.turns = phase / std::f64::consts::TAU;
    w
}

/// As [`winding_number_with_derivative`] for `f` with the mirror symmetry
/// `f(-z̄) = c·conj(f(z))`, `|c| = 1`, on a rectangle centred on `Re z = 0`.
/// Only the right half of the boundary is traced; the left half contributes
/// the same phase.
pub fn winding_number_mirrored<F>(fd: &F, rect: &Rectangle, n_boundary: usize) -> Result<Winding>
where
    F: Fn(Complex64) -> (Complex64, Complex64),
{
    if (rect.re_min + rect.re_max).abs() > 1e-12 * rect.re_max.abs().max(1.0) {
        return Err(Error::invalid("mirrored winding needs a rectangle centred on Re z = 0"));
    }
    let spacing = rect.perimeter() / n_boundary.max(8) as f64;
    let c = rect.corners();
    let path = [Complex64::new(0.0, rect.im_min), c[1], c[2], Complex64::new(0.0, rect.im_max)];
    let mut w = Winding { turns: 0.0, min_abs: f64::INFINITY, resolved: true };
    let phase = trace_path(fd, &path, spacing, &mut w);
    w.turns = phase / std::f64::consts::PI;
    Ok(w)
}

fn trace_path<F>(fd: &F, path: &[Complex64], spacing: f64, w: &mut Winding) -> f64
where
    F: Fn(Complex64) -> (Complex64, Complex64),
{
    let mut phase = 0.0;
    for seg in path.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        let m = (((b - a).norm() / spacing).ceil() as usize).max(2);
        let dz = (b - a) / m as f64;
        let mut node = (a, fd(a));
        for i in 1..=m {
            let zb = if i == m { b } else { a + dz * i as f64 };
            let next = (zb, fd(zb));
            phase += guarded_phase_change(fd, node, next, 0, w);
            node = next;
        }
    }
    phase
}

type Node = (Complex64, (Complex64, Complex64));

fn guarded_phase_change<F>(fd: &F, a: Node, b: Node, depth: u32, w: &mut Winding) -> f64
where
    F: Fn(Complex64) -> (Complex64, Complex64),
{
    let (za, (fa, la)) = a;
    let (zb, (fb, lb)) = b;
    let dz = (zb - za).norm();
    w.min_abs = w.min_abs.min(fa.norm()).min(fb.norm());
    let step = (fb / fa).arg();
    if !(step.is_finite() && la.norm().is_finite() && lb.norm().is_finite()) {
        w.resolved = false;
        return 0.0;
    }
    if dz * la.norm().max(lb.norm()) <= 0.5 && step.abs() <= MAX_PHASE_STEP {
        return step;
    }
    if depth >= MAX_DEPTH {
        w.resolved = false;
        return step;
    }
    let zm = 0.5 * (za + zb);
    let m = (zm, fd(zm));
    guarded_phase_change(fd, a, m, depth + 1, w) + guarded_phase_change(fd, m, b, depth + 1, w)
}

/// Zero count from [`winding_number_with_derivative`]. The guard already
/// bounds every step, so a single pass is made; failures are reported as in
/// [`count_zeros_in_rectangle`].
pub fn count_zeros_with_derivative<F>(fd: F, rect: &Rectangle, n_boundary: usize) -> Result<usize>
where
    F: Fn(Complex64) -> (Complex64, Complex64),
{
    if n_boundary < 16 {
        return Err(Error::invalid("need at least 16 boundary nodes"));
    }
    let w = winding_number_with_derivative(&fd, rect, n_boundary);
    settle(w, w)
}

/// Zero count from [`winding_number_mirrored`].
pub fn count_zeros_mirrored<F>(fd: F, rect: &Rectangle, n_boundary: usize) -> Result<usize>
where
    F: Fn(Complex64) -> (Complex64, Complex64),
{
    if n_boundary < 16 {
        return Err(Error::invalid("need at least 16 boundary nodes"));
    }
    let w = winding_number_mirrored(&fd, rect, n_boundary)?;
    settle(w, w)
}

fn settle(fine: Winding, coarse: Winding) -> Result<usize> {
    let bad = |w: &Winding| !w.resolved || !w.turns.is_finite() || (w.turns - w.turns.round()).abs() > 0.05;
    if fine.min_abs == 0.0 || bad(&fine) || bad(&coarse) || fine.turns.round() != coarse.turns.round() {
        return Err(Error::BoundaryTooClose {
            min_abs_f: fine.min_abs,
            coarse: coarse.turns,
            fine: fine.turns,
        });
    }
    let n = fine.turns.round();
    if n < 0.0 {
        return Err(Error::Domain("negative winding number: f has poles inside".into()));
    }
    Ok(n as usize)
}

/// Number of zeros (with multiplicity) of an analytic `f` inside `rect`.
///
/// The winding number is computed from `n_boundary` starting nodes and again
/// from half as many. If either run hits an unresolvable boundary piece, is
/// not close to an integer, or the two disagree, a zero sits too close to the
/// boundary and [`Error::BoundaryTooClose`] is returned.
pub fn count_zeros_in_rectangle<F>(f: F, rect: &Rectangle, n_boundary: usize) -> Result<usize>
where
    F: Fn(Complex64) -> Complex64,
{
    if n_boundary < 16 {
        return Err(Error::invalid("need at least 16 boundary nodes"));
    }
    let fine = winding_number(&f, rect, n_boundary);
    let coarse = winding_number(&f, rect, n_boundary / 2);
    settle(fine, coarse)
}

//! Complex fixed-point numbers on top of big integers, for evaluations whose
//! cancellation exceeds double precision.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

/// `(re + i im) / 2^bits`. Operands of one computation share `bits`.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedComplex {
    re: BigInt,
    im: BigInt,
    bits: u32,
}

fn int_from_f64(x: f64, bits: u32) -> BigInt {
    assert!(x.is_finite(), "non-finite value in fixed-point conversion");
    if x == 0.0 {
        return BigInt::zero();
    }
    // x = m 2^e exactly, with |m| < 2^53
    let e = x.abs().log2().floor() as i64 - 52;
    let m = (x / 2f64.powi(e as i32)).round() as i64;
    let shift = e + bits as i64;
    let m = BigInt::from(m);
    if shift >= 0 {
        m << shift as usize
    } else {
        m >> (-shift) as usize
    }
}

fn int_to_f64(v: &BigInt, bits: u32) -> f64 {
    let n = v.bits() as i64;
    if n <= 62 {
        return v.to_i64().unwrap() as f64 * 2f64.powi(-(bits as i32));
    }
    let drop = n - 62;
    let top = (v >> drop as usize).to_i64().unwrap() as f64;
    top * 2f64.powf((drop - bits as i64) as f64)
}

impl FixedComplex {
    pub fn from_complex(z: Complex64, bits: u32) -> Self {
        Self { re: int_from_f64(z.re, bits), im: int_from_f64(z.im, bits), bits }
    }

    pub fn from_real(x: f64, bits: u32) -> Self {
        Self::from_complex(Complex64::new(x, 0.0), bits)
    }

    pub fn zero(bits: u32) -> Self {
        Self { re: BigInt::zero(), im: BigInt::zero(), bits }
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(int_to_f64(&self.re, self.bits), int_to_f64(&self.im, self.bits))
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Multiplication by a small integer, exact.
    pub fn scale_int(&self, k: i64) -> Self {
        Self { re: &self.re * k, im: &self.im * k, bits: self.bits }
    }

    /// Division by a small integer, truncated to the last bit.
    pub fn div_int(&self, k: i64) -> Self {
        Self { re: &self.re / k, im: &self.im / k, bits: self.bits }
    }

    /// Multiplication by `i`.
    pub fn times_i(&self) -> Self {
        Self { re: -&self.im, im: self.re.clone(), bits: self.bits }
    }

    /// `self` times a power of two, with the larger component of modulus in
    /// `[1/2, 1)`. Zero stays zero.
    pub fn normalized(&self) -> Complex64 {
        let n = self.re.bits().max(self.im.bits()) as i64;
        let drop = (n - 62).max(0) as usize;
        let z = Complex64::new(int_to_f64(&(&self.re >> drop), 0), int_to_f64(&(&self.im >> drop), 0));
        let m = z.re.abs().max(z.im.abs());
        if m == 0.0 {
            z
        } else {
            z / 2f64.powi(m.log2().floor() as i32 + 1)
        }
    }

    /// The quotient `self / other`, rounded to double precision.
    pub fn ratio(&self, other: &Self) -> Complex64 {
        // shift both so that the larger component of `other` has 62 bits
        let n = other.re.bits().max(other.im.bits()) as i64;
        let drop = (n - 62).max(0) as usize;
        let f = |v: &BigInt| int_to_f64(&(v >> drop), 0);
        Complex64::new(f(&self.re), f(&self.im)) / Complex64::new(f(&other.re), f(&other.im))
    }
}

impl Add for &FixedComplex {
    type Output = FixedComplex;
    fn add(self, o: &FixedComplex) -> FixedComplex {
        debug_assert_eq!(self.bits, o.bits);
        FixedComplex { re: &self.re + &o.re, im: &self.im + &o.im, bits: self.bits }
    }
}

impl Sub for &FixedComplex {
    type Output = FixedComplex;
    fn sub(self, o: &FixedComplex) -> FixedComplex {
        debug_assert_eq!(self.bits, o.bits);
        FixedComplex { re: &self.re - &o.re, im: &self.im - &o.im, bits: self.bits }
    }
}

impl Neg for &FixedComplex {
    type Output = FixedComplex;
    fn neg(self) -> FixedComplex {
        FixedComplex { re: -&self.re, im: -&self.im, bits: self.bits }
    }
}

impl Mul for &FixedComplex {
    type Output = FixedComplex;
    fn mul(self, o: &FixedComplex) -> FixedComplex {
        debug_assert_eq!(self.bits, o.bits);
        let b = self.bits as usize;
        FixedComplex {
            re: (&self.re * &o.re - &self.im * &o.im) >> b,
            im: (&self.re * &o.im + &self.im * &o.re) >> b,
            bits: self.bits,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_products() {
        let a = Complex64::new(1.25e-3, -7.5e4);
        let b = Complex64::new(-3.0, 0.1);
        let fa = FixedComplex::from_complex(a, 200);
        let fb = FixedComplex::from_complex(b, 200);
        assert_eq!(fa.to_complex(), a);
        assert!(((&fa * &fb).to_complex() - a * b).norm() < 1e-15 * (a * b).norm());
        assert!((fa.ratio(&fb) - a / b).norm() < 1e-15 * (a / b).norm());
        assert_eq!((&fa - &fa).to_complex(), Complex64::new(0.0, 0.0));
        assert_eq!(fa.times_i().to_complex(), a * Complex64::i());
    }

    #[test]
    fn resolves_cancellation() {
        // (1 + 2^-80) - 1 is lost in f64 but not at 120 bits
        let bits = 120;
        let one = FixedComplex::from_real(1.0, bits);
        let tiny = FixedComplex::from_real(2f64.powi(-80), bits);
        let d = &(&one + &tiny) - &one;
        assert_eq!(d.to_complex().re, 2f64.powi(-80));
    }
}

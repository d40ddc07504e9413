//! Complex fixed-point numbers `(re + i im) / 2^BITS` over big integers.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};

use crate::scalar::Rational;

pub const BITS: usize = 192;

fn scale() -> BigInt {
    BigInt::from(1) << BITS
}

fn from_rational(r: &Rational) -> BigInt {
    (r.numer() << BITS) / r.denom()
}

fn to_f64(v: &BigInt) -> f64 {
    let shift = v.bits().saturating_sub(60) as usize;
    let top = (v >> shift).to_f64().unwrap_or(f64::NAN);
    top * 2f64.powi(shift as i32 - BITS as i32)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cfx {
    pub re: BigInt,
    pub im: BigInt,
}

impl Cfx {
    pub fn zero() -> Self {
        Cfx { re: BigInt::zero(), im: BigInt::zero() }
    }

    pub fn one() -> Self {
        Cfx { re: scale(), im: BigInt::zero() }
    }

    pub fn from_rational(r: &Rational) -> Self {
        Cfx { re: from_rational(r), im: BigInt::zero() }
    }

    pub fn from_complex(z: Complex64) -> Self {
        let conv = |x: f64| from_rational(&Rational::from_f64(x).unwrap_or_else(Rational::zero));
        Cfx { re: conv(z.re), im: conv(z.im) }
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(to_f64(&self.re), to_f64(&self.im))
    }

    pub fn abs(&self) -> f64 {
        self.to_complex().norm()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Cfx::one(), |acc, _| &acc * self)
    }

    /// `None` when the divisor is exactly zero.
    pub fn div(&self, other: &Cfx) -> Option<Cfx> {
        let den = &other.re * &other.re + &other.im * &other.im;
        if den.is_zero() {
            return None;
        }
        let re = &self.re * &other.re + &self.im * &other.im;
        let im = &self.im * &other.re - &self.re * &other.im;
        Some(Cfx { re: (re << BITS) / &den, im: (im << BITS) / &den })
    }

    /// Largest of `|re|`, `|im|` as a raw integer; used for step sizes.
    pub fn magnitude_raw(&self) -> BigInt {
        self.re.abs().max(self.im.abs())
    }
}

impl Add for &Cfx {
    type Output = Cfx;
    fn add(self, o: &Cfx) -> Cfx {
        Cfx { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl Sub for &Cfx {
    type Output = Cfx;
    fn sub(self, o: &Cfx) -> Cfx {
        Cfx { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl Mul for &Cfx {
    type Output = Cfx;
    fn mul(self, o: &Cfx) -> Cfx {
        let re = &self.re * &o.re - &self.im * &o.im;
        let im = &self.re * &o.im + &self.im * &o.re;
        Cfx { re: re >> BITS, im: im >> BITS }
    }
}

impl Neg for &Cfx {
    type Output = Cfx;
    fn neg(self) -> Cfx {
        Cfx { re: -&self.re, im: -&self.im }
    }
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
pub fn solve(mut a: Vec<Vec<Cfx>>, mut b: Vec<Cfx>) -> Option<Vec<Cfx>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].is_zero() {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col].div(&a[col][col])?;
            #[allow(clippy::needless_range_loop)]
            for k in col..n {
                let t = &factor * &a[col][k];
                a[row][k] = &a[row][k] - &t;
            }
            let t = &factor * &b[col];
            b[row] = &b[row] - &t;
        }
    }
    let mut x = vec![Cfx::zero(); n];
    for row in (0..n).rev() {
        let mut acc = b[row].clone();
        for k in row + 1..n {
            acc = &acc - &(&a[row][k] * &x[k]);
        }
        x[row] = acc.div(&a[row][row])?;
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn arithmetic_round_trip() {
        let a = Cfx::from_rational(&rat(1, 3));
        let b = Cfx::from_complex(Complex64::new(0.0, 2.0));
        let p = &a * &b;
        assert!((p.to_complex() - Complex64::new(0.0, 2.0 / 3.0)).norm() < 1e-15);
        let q = p.div(&b).unwrap();
        assert!((&q - &a).magnitude_raw() < BigInt::from(1u64 << 8));
        assert!(a.div(&Cfx::zero()).is_none());
        assert_eq!(Cfx::one().pow(5), Cfx::one());
    }

    #[test]
    fn small_system() {
        let c = |x: f64, y: f64| Cfx::from_complex(Complex64::new(x, y));
        let a = vec![vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(2.0, 0.0), c(0.0, 1.0)]];
        let x = solve(a, vec![c(3.0, 0.0), c(4.0, 3.0)]).unwrap();
        assert!((x[0].to_complex() - Complex64::new(2.0, 0.0)).norm() < 1e-15);
        assert!((x[1].to_complex() - Complex64::new(3.0, 0.0)).norm() < 1e-15);
    }
}

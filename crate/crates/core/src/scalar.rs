//! Exact scalars: arbitrary-precision rationals, the quadratic extension used
//! for cyclotomic and square-root certificates, and memoized combinatorics.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Reduced fraction with positive denominator.
pub type Rational = BigRational;

/// Coefficient field for polynomials and certificates.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn from_rational(r: &Rational) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&int(v))
    }

    fn from_bigint(v: &BigInt) -> Self {
        Self::from_rational(&Rational::from_integer(v.clone()))
    }

    /// Magnitude used for residual reporting.
    fn magnitude(&self) -> f64;
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn magnitude(&self) -> f64 {
        to_f64(self).abs()
    }
}

impl Scalar for f64 {
    fn from_rational(r: &Rational) -> Self {
        to_f64(r)
    }

    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Scalar for num_complex::Complex64 {
    fn from_rational(r: &Rational) -> Self {
        num_complex::Complex64::new(to_f64(r), 0.0)
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `num/den` as a reduced rational. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Very large numerators overflow the direct conversion; fall back to
        // a scaled quotient.
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Parses `"-3/7"`, `"5"` or `"+2/4"` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational `{s}`"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num.strip_prefix('+').unwrap_or(num)).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{s}`")));
    }
    Ok(Rational::new(num, den))
}

/// Canonical `num/den` rendering; integers keep the `/1` so every scalar in a
/// report has the same shape.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Serde adapter storing a [`Rational`] as a `"num/den"` string.
pub mod rational_str {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rational>`.
pub mod rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter().map(|s| parse_rational(s).map_err(serde::de::Error::custom)).collect()
    }
}

fn factorial_table() -> &'static Mutex<Vec<BigInt>> {
    static TABLE: OnceLock<Mutex<Vec<BigInt>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(vec![BigInt::one()]))
}

pub fn factorial(n: usize) -> BigInt {
    let mut table = factorial_table().lock().expect("factorial table poisoned");
    while table.len() <= n {
        let k = table.len();
        let next = &table[k - 1] * BigInt::from(k);
        table.push(next);
    }
    table[n].clone()
}

/// Binomial coefficient with the usual conventions: zero when `k < 0` or
/// `k > n` for `n >= 0`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let (n, k) = (n as usize, k as usize);
    factorial(n) / (factorial(k) * factorial(n - k))
}

pub fn binomial_u64(n: i64, k: i64) -> u64 {
    binomial(n, k).to_u64().expect("binomial exceeds u64")
}

/// Least common multiple of the denominators.
pub fn denominator_lcm<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

pub fn is_perfect_square(v: &BigInt) -> Option<BigInt> {
    if v.is_negative() {
        return None;
    }
    let root = v.sqrt();
    (&root * &root == *v).then_some(root)
}

/// Exact square root of a rational when it exists.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    let n = is_perfect_square(r.numer())?;
    let d = is_perfect_square(r.denom())?;
    Some(Rational::new(n, d))
}

/// Minimal polynomial `t^2 + p t + q` of the adjoined root.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MinPoly {
    #[serde(with = "rational_str")]
    pub p: Rational,
    #[serde(with = "rational_str")]
    pub q: Rational,
}

impl MinPoly {
    /// `t^2 + t + 1`, whose roots are the primitive cube roots of unity.
    pub fn cyclotomic3() -> Self {
        MinPoly { p: int(1), q: int(1) }
    }

    /// `t^2 - r`, adjoining a square root of `r`.
    pub fn sqrt_of(r: Rational) -> Self {
        MinPoly { p: Rational::zero(), q: -r }
    }

    pub fn discriminant(&self) -> Rational {
        &self.p * &self.p - int(4) * &self.q
    }
}

/// Element `a + b t` of `Q(t)` with `t^2 + p t + q = 0`.
///
/// A value with `b = 0` is a plain rational and carries no field; it combines
/// with elements of any extension. Combining two irrational elements of
/// different extensions is a contract violation and panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadExt {
    #[serde(with = "rational_str")]
    a: Rational,
    #[serde(with = "rational_str")]
    b: Rational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    field: Option<MinPoly>,
}

impl QuadExt {
    pub fn new(a: Rational, b: Rational, field: MinPoly) -> Self {
        if b.is_zero() {
            QuadExt { a, b, field: None }
        } else {
            QuadExt { a, b, field: Some(field) }
        }
    }

    /// The adjoined root `t` itself.
    pub fn root(field: MinPoly) -> Self {
        QuadExt::new(Rational::zero(), Rational::one(), field)
    }

    pub fn rational(a: Rational) -> Self {
        QuadExt { a, b: Rational::zero(), field: None }
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn field(&self) -> Option<&MinPoly> {
        self.field.as_ref()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.b.is_zero().then_some(&self.a)
    }

    fn join(x: &Option<MinPoly>, y: &Option<MinPoly>) -> Option<MinPoly> {
        match (x, y) {
            (Some(f), Some(g)) => {
                assert_eq!(f, g, "arithmetic across different quadratic extensions");
                Some(f.clone())
            }
            (Some(f), None) | (None, Some(f)) => Some(f.clone()),
            (None, None) => None,
        }
    }

    fn pq(&self) -> (Rational, Rational) {
        match &self.field {
            Some(f) => (f.p.clone(), f.q.clone()),
            None => (Rational::zero(), Rational::zero()),
        }
    }

    fn build(a: Rational, b: Rational, field: Option<MinPoly>) -> Self {
        match field {
            Some(f) => QuadExt::new(a, b, f),
            None => {
                debug_assert!(b.is_zero());
                QuadExt::rational(a)
            }
        }
    }

    /// Image under the automorphism swapping the two roots of the minimal
    /// polynomial: `t -> -p - t`.
    pub fn conjugate(&self) -> Self {
        let (p, _) = self.pq();
        QuadExt::build(&self.a - &p * &self.b, -self.b.clone(), self.field.clone())
    }

    /// `x * conj(x) = a^2 - p a b + q b^2`.
    pub fn norm(&self) -> Rational {
        let (p, q) = self.pq();
        &self.a * &self.a - &p * &self.a * &self.b + &q * &self.b * &self.b
    }

    /// `x + conj(x) = 2a - p b`.
    pub fn trace(&self) -> Rational {
        let (p, _) = self.pq();
        int(2) * &self.a - p * &self.b
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        let c = self.conjugate();
        Some(QuadExt::build(c.a / &n, c.b / &n, c.field))
    }

    /// Complex embedding sending `t` to the root `(-p + sqrt(disc)) / 2`.
    pub fn to_complex(&self) -> num_complex::Complex64 {
        let (p, q) = self.pq();
        let disc = to_f64(&(&p * &p - int(4) * &q));
        let sq = num_complex::Complex64::new(disc, 0.0).sqrt();
        let t = (num_complex::Complex64::new(-to_f64(&p), 0.0) + sq) / 2.0;
        num_complex::Complex64::new(to_f64(&self.a), 0.0) + t * to_f64(&self.b)
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        write!(f, "{} + ({})*t", self.a, self.b)
    }
}

impl Add for QuadExt {
    type Output = QuadExt;
    fn add(self, o: QuadExt) -> QuadExt {
        let field = QuadExt::join(&self.field, &o.field);
        QuadExt::build(self.a + o.a, self.b + o.b, field)
    }
}

impl Sub for QuadExt {
    type Output = QuadExt;
    fn sub(self, o: QuadExt) -> QuadExt {
        let field = QuadExt::join(&self.field, &o.field);
        QuadExt::build(self.a - o.a, self.b - o.b, field)
    }
}

impl Mul for QuadExt {
    type Output = QuadExt;
    fn mul(self, o: QuadExt) -> QuadExt {
        let field = QuadExt::join(&self.field, &o.field);
        let (p, q) = match &field {
            Some(f) => (f.p.clone(), f.q.clone()),
            None => (Rational::zero(), Rational::zero()),
        };
        let bb = &self.b * &o.b;
        let a = &self.a * &o.a - &q * &bb;
        let b = &self.a * &o.b + &o.a * &self.b - &p * &bb;
        QuadExt::build(a, b, field)
    }
}

impl Div for QuadExt {
    type Output = QuadExt;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: QuadExt) -> QuadExt {
        self * o.inverse().expect("division by zero in quadratic extension")
    }
}

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt::build(-self.a, -self.b, self.field)
    }
}

impl Zero for QuadExt {
    fn zero() -> Self {
        QuadExt::rational(Rational::zero())
    }

    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for QuadExt {
    fn one() -> Self {
        QuadExt::rational(Rational::one())
    }
}

impl Scalar for QuadExt {
    fn from_rational(r: &Rational) -> Self {
        QuadExt::rational(r.clone())
    }

    fn magnitude(&self) -> f64 {
        self.to_complex().norm()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn small_rat() -> impl Strategy<Value = Rational> {
        (-20i64..20, 1i64..9).prop_map(|(n, d)| rat(n, d))
    }

    fn quad(field: MinPoly) -> impl Strategy<Value = QuadExt> {
        (small_rat(), small_rat()).prop_map(move |(a, b)| QuadExt::new(a, b, field.clone()))
    }

    #[test]
    fn rational_strings() {
        assert_eq!(parse_rational("-6/14").unwrap(), rat(-3, 7));
        assert_eq!(format_rational(&rat(-3, 7)), "-3/7");
        assert_eq!(format_rational(&int(5)), "5/1");
        assert_eq!(parse_rational(" 4 ").unwrap(), int(4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn canonical_zero() {
        let z = parse_rational("0/-5").unwrap();
        assert_eq!(z.numer(), &BigInt::zero());
        assert_eq!(z.denom(), &BigInt::one());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(5, -1), BigInt::zero());
        assert_eq!(binomial(3, 4), BigInt::zero());
        assert_eq!(factorial(6), BigInt::from(720));
    }

    #[test]
    fn cube_root_of_unity() {
        let xi = QuadExt::root(MinPoly::cyclotomic3());
        let cube = xi.clone() * xi.clone() * xi.clone();
        assert_eq!(cube, QuadExt::one());
        assert_eq!(xi.clone() * xi.clone() + xi.clone() + QuadExt::one(), QuadExt::zero());
        assert_eq!(xi.conjugate(), xi.clone() * xi);
    }

    #[test]
    #[should_panic(expected = "different quadratic extensions")]
    fn mixing_extensions_panics() {
        let s2 = QuadExt::root(MinPoly::sqrt_of(int(2)));
        let s3 = QuadExt::root(MinPoly::sqrt_of(int(3)));
        let _ = s2 + s3;
    }

    proptest! {
        #[test]
        fn conjugation_is_a_ring_automorphism(x in quad(MinPoly::cyclotomic3()), y in quad(MinPoly::cyclotomic3())) {
            prop_assert_eq!((x.clone() * y.clone()).conjugate(), x.conjugate() * y.conjugate());
            prop_assert_eq!((x.clone() + y.clone()).conjugate(), x.conjugate() + y.conjugate());
        }

        #[test]
        fn norm_is_multiplicative(x in quad(MinPoly::sqrt_of(int(-7))), y in quad(MinPoly::sqrt_of(int(-7)))) {
            prop_assert_eq!((x.clone() * y.clone()).norm(), x.norm() * y.norm());
        }

        #[test]
        fn division_inverts_multiplication(x in quad(MinPoly::cyclotomic3()), y in quad(MinPoly::cyclotomic3())) {
            prop_assume!(!y.is_zero());
            prop_assert_eq!((x.clone() * y.clone()) / y, x);
        }
    }
}

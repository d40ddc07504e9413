//! Sparse multivariate polynomials over the primal ring `S = k[x_1..x_n]`
//! and its dual `E = k[X_1..X_n]`, with the contraction action of `S` on `E`.
//!
//! Terms are kept in graded lexicographic order with `x_1 > ... > x_n`,
//! largest monomial first. The ring is a type parameter, so multiplying a
//! primal polynomial by a dual one does not compile:
//!
//! ```compile_fail
//! use symapolar::poly::{PrimalPolynomial, DualPolynomial};
//! let f = PrimalPolynomial::var(2, 0);
//! let g = DualPolynomial::var(2, 0);
//! let _ = &f * &g;
//! ```

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::Hash;
use std::marker::PhantomData;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{factorial, format_rational, parse_rational, Rational, Scalar};

/// Marker for the ring a polynomial lives in.
pub trait Ring: Copy + Clone + fmt::Debug + Default + PartialEq + Eq + Hash + Send + Sync + 'static {
    /// Variable name used when printing.
    const SYMBOL: &'static str;
}

/// `S = k[x_1..x_n]`, the ring of differential operators.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Primal;

/// `E = k[X_1..X_n]`, the inverse system on which `S` acts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Dual;

/// Polynomials in free parameters (orbit-map coordinates).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Param;

impl Ring for Primal {
    const SYMBOL: &'static str = "x";
}

impl Ring for Dual {
    const SYMBOL: &'static str = "X";
}

impl Ring for Param {
    const SYMBOL: &'static str = "a";
}

/// Exponent vector `(i_1, ..., i_n)`.
///
/// `Ord` puts graded-lex larger monomials first, so sorted containers list
/// `x_1^d` before `x_n^d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial(Vec<u16>);

impl Monomial {
    pub fn new(exponents: Vec<u16>) -> Self {
        Monomial(exponents)
    }

    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        self.0.iter().zip(&other.0).map(|(&a, &b)| a.checked_sub(b)).collect::<Option<Vec<_>>>().map(Monomial)
    }

    /// `i_1! i_2! ... i_n!`.
    pub fn factorial_product(&self) -> BigInt {
        self.0.iter().fold(BigInt::one(), |acc, &e| acc * factorial(e as usize))
    }

    pub fn swap(&self, i: usize, j: usize) -> Monomial {
        let mut e = self.0.clone();
        e.swap(i, j);
        Monomial(e)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other.degree().cmp(&self.degree()).then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials of degree `d` in `n` variables, graded-lex descending, with
/// a reverse index.
#[derive(Debug)]
pub struct MonomialBasis {
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl MonomialBasis {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn get(&self, i: usize) -> &Monomial {
        &self.monomials[i]
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }
}

fn enumerate_exponents(n: usize, d: usize) -> Vec<Vec<u16>> {
    fn rec(n: usize, d: usize, prefix: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if n == 1 {
            prefix.push(d as u16);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e as u16);
            rec(n - 1, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(n, d, &mut Vec::with_capacity(n), &mut out);
    out
}

type BasisCache = Mutex<HashMap<(usize, usize), Arc<MonomialBasis>>>;

/// Cached monomial basis of the degree-`d` piece in `n` variables.
pub fn monomial_basis(n: usize, d: usize) -> Arc<MonomialBasis> {
    static CACHE: OnceLock<BasisCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(b) = cache.lock().expect("basis cache poisoned").get(&(n, d)) {
        return b.clone();
    }
    let monomials: Vec<Monomial> = enumerate_exponents(n, d).into_iter().map(Monomial).collect();
    let index = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let basis = Arc::new(MonomialBasis { monomials, index });
    cache.lock().expect("basis cache poisoned").insert((n, d), basis.clone());
    basis
}

/// `dim k[x_1..x_n]_d = C(n-1+d, d)`.
pub fn graded_dimension(n: usize, d: usize) -> usize {
    if n == 0 {
        return usize::from(d == 0);
    }
    crate::scalar::binomial_u64((n - 1 + d) as i64, d as i64) as usize
}

/// Sparse polynomial in `n` variables over `K`, tagged with its ring.
#[derive(Clone, PartialEq)]
pub struct Polynomial<K: Scalar, R: Ring> {
    n: usize,
    terms: BTreeMap<Monomial, K>,
    ring: PhantomData<R>,
}

pub type PrimalPolynomial = Polynomial<Rational, Primal>;
pub type DualPolynomial = Polynomial<Rational, Dual>;
pub type ParamPolynomial = Polynomial<Rational, Param>;

impl<K: Scalar, R: Ring> Polynomial<K, R> {
    pub fn zero(n: usize) -> Self {
        Polynomial { n, terms: BTreeMap::new(), ring: PhantomData }
    }

    pub fn constant(n: usize, c: K) -> Self {
        Self::monomial(Monomial::one(n), c)
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, K::one())
    }

    /// The `i`-th variable (0-based).
    pub fn var(n: usize, i: usize) -> Self {
        Self::monomial(Monomial::var(n, i), K::one())
    }

    pub fn monomial(m: Monomial, c: K) -> Self {
        let mut p = Self::zero(m.n());
        p.add_term(m, c);
        p
    }

    /// Linear form `sum_i c_i * var_i`.
    pub fn linear(coeffs: &[K]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(n, i), c.clone());
        }
        p
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Monomial, K)>) -> Self {
        let mut p = Self::zero(n);
        for (m, c) in terms {
            assert_eq!(m.n(), n, "monomial has wrong variable count");
            p.add_term(m, c);
        }
        p
    }

    /// Adds `c * m`, dropping the term if it cancels.
    pub fn add_term(&mut self, m: Monomial, c: K) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &K)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> K {
        self.terms.get(m).cloned().unwrap_or_else(K::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next().map(Monomial::degree)
    }

    /// Degree if every term has the same degree; `None` for zero or mixed.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let d = self.degree()?;
        self.terms.keys().all(|m| m.degree() == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    pub fn homogeneous_part(&self, d: usize) -> Self {
        Self::from_terms(
            self.n,
            self.terms.iter().filter(|(m, _)| m.degree() == d).map(|(m, c)| (m.clone(), c.clone())),
        )
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        Self::from_terms(self.n, self.terms.iter().map(|(m, v)| (m.clone(), v.clone() * c.clone())))
    }

    pub fn map_coeffs<K2: Scalar>(&self, f: impl Fn(&K) -> K2) -> Polynomial<K2, R> {
        Polynomial::from_terms(self.n, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::VariableMismatch { left: self.n, right: other.n });
        }
        let mut out = Self::zero(self.n);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1.clone() * c2.clone());
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::VariableMismatch { left: self.n, right: other.n });
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::one(self.n);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Ordinary partial derivative in variable `i`.
    pub fn partial(&self, i: usize) -> Self {
        Self::from_terms(
            self.n,
            self.terms.iter().filter(|(m, _)| m.0[i] > 0).map(|(m, c)| {
                let mut e = m.0.clone();
                let k = e[i];
                e[i] -= 1;
                (Monomial(e), c.clone() * K::from_i64(k as i64))
            }),
        )
    }

    /// Substitutes zero for the last variable (keeps `n`).
    pub fn restrict_last_to_zero(&self) -> Self {
        let last = self.n.saturating_sub(1);
        Self::from_terms(
            self.n,
            self.terms.iter().filter(|(m, _)| self.n == 0 || m.0[last] == 0).map(|(m, c)| (m.clone(), c.clone())),
        )
    }

    /// Exchanges variables `i` and `j`.
    pub fn swap_variables(&self, i: usize, j: usize) -> Self {
        Self::from_terms(self.n, self.terms.iter().map(|(m, c)| (m.swap(i, j), c.clone())))
    }

    /// Invariance under all adjacent transpositions.
    pub fn is_symmetric(&self) -> bool {
        (0..self.n.saturating_sub(1)).all(|i| self.swap_variables(i, i + 1) == *self)
    }

    pub fn evaluate(&self, point: &[K]) -> K {
        assert_eq!(point.len(), self.n, "evaluation point has wrong length");
        let mut total = K::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                for _ in 0..e {
                    t = t * x.clone();
                }
            }
            total = total + t;
        }
        total
    }

    /// Coefficients of a linear form, `None` if the polynomial is not linear.
    pub fn linear_coefficients(&self) -> Option<Vec<K>> {
        if self.terms.keys().any(|m| m.degree() != 1) {
            return None;
        }
        Some((0..self.n).map(|i| self.coeff(&Monomial::var(self.n, i))).collect())
    }

    /// Largest coefficient magnitude; zero for the zero polynomial.
    pub fn max_magnitude(&self) -> f64 {
        self.terms.values().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    /// Coefficient vector in the graded-lex monomial basis of degree `d`.
    pub fn coefficient_vector(&self, d: usize) -> Vec<K> {
        let basis = monomial_basis(self.n, d);
        let mut v = vec![K::zero(); basis.len()];
        for (m, c) in &self.terms {
            if let Some(i) = basis.index_of(m) {
                v[i] = c.clone();
            }
        }
        v
    }

    pub fn from_coefficient_vector(n: usize, d: usize, v: &[K]) -> Self {
        let basis = monomial_basis(n, d);
        assert_eq!(basis.len(), v.len(), "coefficient vector has wrong length");
        Self::from_terms(n, basis.monomials().iter().cloned().zip(v.iter().cloned()))
    }

    /// Complete symmetric polynomial `h_d` (every degree-`d` monomial with
    /// coefficient one).
    pub fn complete_symmetric(n: usize, d: usize) -> Self {
        Self::from_terms(n, monomial_basis(n, d).monomials().iter().map(|m| (m.clone(), K::one())))
    }

    /// Power sum `p_d = sum_i var_i^d`; `p_0 = n`.
    pub fn power_sum(n: usize, d: usize) -> Self {
        if d == 0 {
            return Self::constant(n, K::from_i64(n as i64));
        }
        Self::from_terms(
            n,
            (0..n).map(|i| {
                let mut e = vec![0u16; n];
                e[i] = d as u16;
                (Monomial(e), K::one())
            }),
        )
    }
}

impl<K: Scalar, R: Ring> fmt::Debug for Polynomial<K, R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial<{}>[n={}]", R::SYMBOL, self.n)?;
        f.debug_map().entries(self.terms.iter().map(|(m, c)| (&m.0, c))).finish()
    }
}

impl<R: Ring> fmt::Display for Polynomial<Rational, R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c < &Rational::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let vars: Vec<String> =
                m.0.iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| {
                        if e == 1 {
                            format!("{}{}", R::SYMBOL, i + 1)
                        } else {
                            format!("{}{}^{}", R::SYMBOL, i + 1, e)
                        }
                    })
                    .collect();
            if vars.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{abs}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl<'a, K: Scalar, R: Ring> Add<&'a Polynomial<K, R>> for &'a Polynomial<K, R> {
    type Output = Polynomial<K, R>;
    fn add(self, rhs: &'a Polynomial<K, R>) -> Polynomial<K, R> {
        self.try_add(rhs).expect("polynomial addition")
    }
}

impl<K: Scalar, R: Ring> Add for Polynomial<K, R> {
    type Output = Polynomial<K, R>;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<'a, K: Scalar, R: Ring> Sub<&'a Polynomial<K, R>> for &'a Polynomial<K, R> {
    type Output = Polynomial<K, R>;
    fn sub(self, rhs: &'a Polynomial<K, R>) -> Polynomial<K, R> {
        self.try_add(&-rhs).expect("polynomial subtraction")
    }
}

impl<K: Scalar, R: Ring> Sub for Polynomial<K, R> {
    type Output = Polynomial<K, R>;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<'a, K: Scalar, R: Ring> Mul<&'a Polynomial<K, R>> for &'a Polynomial<K, R> {
    type Output = Polynomial<K, R>;
    fn mul(self, rhs: &'a Polynomial<K, R>) -> Polynomial<K, R> {
        self.try_mul(rhs).expect("polynomial multiplication")
    }
}

impl<K: Scalar, R: Ring> Mul for Polynomial<K, R> {
    type Output = Polynomial<K, R>;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<K: Scalar, R: Ring> Neg for &Polynomial<K, R> {
    type Output = Polynomial<K, R>;
    fn neg(self) -> Polynomial<K, R> {
        Polynomial::from_terms(self.n, self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())))
    }
}

impl<K: Scalar, R: Ring> Neg for Polynomial<K, R> {
    type Output = Polynomial<K, R>;
    fn neg(self) -> Self {
        -&self
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exp: Vec<u16>,
    coef: String,
}

impl<R: Ring> Serialize for Polynomial<Rational, R> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.terms.iter().map(|(m, c)| TermRepr { exp: m.0.clone(), coef: format_rational(c) }))
    }
}

impl<'de, R: Ring> Deserialize<'de> for Polynomial<Rational, R> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<TermRepr>::deserialize(d)?;
        let n = terms.first().map_or(0, |t| t.exp.len());
        let mut p = Polynomial::zero(n);
        for t in terms {
            if t.exp.len() != n {
                return Err(serde::de::Error::custom("terms have inconsistent variable counts"));
            }
            let c = parse_rational(&t.coef).map_err(serde::de::Error::custom)?;
            p.add_term(Monomial(t.exp), c);
        }
        Ok(p)
    }
}

/// Falling factorial `b (b-1) ... (b-a+1)`.
fn falling(b: u16, a: u16) -> i64 {
    (0..a).fold(1i64, |acc, t| acc * (b - t) as i64)
}

/// Contraction `f ∘ G`: `x^a ∘ X^b = prod b_i!/(b_i-a_i)! X^(b-a)` when
/// `a <= b`, zero otherwise; extended bilinearly.
pub fn try_contract<K: Scalar>(f: &Polynomial<K, Primal>, g: &Polynomial<K, Dual>) -> Result<Polynomial<K, Dual>> {
    if f.n != g.n {
        return Err(Error::VariableMismatch { left: f.n, right: g.n });
    }
    let mut out = Polynomial::zero(g.n);
    for (a, ca) in &f.terms {
        for (b, cb) in &g.terms {
            let Some(rest) = b.checked_div(a) else { continue };
            let w = a.0.iter().zip(&b.0).fold(BigInt::one(), |acc, (&ai, &bi)| acc * falling(bi, ai));
            out.add_term(rest, ca.clone() * cb.clone() * K::from_bigint(&w));
        }
    }
    Ok(out)
}

/// Panicking form of [`try_contract`] for callers that already matched `n`.
pub fn contract<K: Scalar>(f: &Polynomial<K, Primal>, g: &Polynomial<K, Dual>) -> Polynomial<K, Dual> {
    try_contract(f, g).expect("contraction")
}

/// Constant term of `f ∘ G`, i.e. `Σ_m f_m G_m m!`; for `deg f = deg G` this
/// is the full contraction.
pub fn pairing<K: Scalar>(f: &Polynomial<K, Primal>, g: &Polynomial<K, Dual>) -> K {
    assert_eq!(f.n, g.n, "pairing across different variable counts");
    let (small, large_has) = if f.terms.len() <= g.terms.len() { (&f.terms, true) } else { (&g.terms, false) };
    let mut total = K::zero();
    for (m, c) in small {
        let other = if large_has { g.terms.get(m) } else { f.terms.get(m) };
        if let Some(o) = other {
            total = total + c.clone() * o.clone() * K::from_bigint(&m.factorial_product());
        }
    }
    total
}

/// `Φ(x^i) = i_1! ... i_n! X^i`.
pub fn phi(f: &PrimalPolynomial) -> DualPolynomial {
    Polynomial::from_terms(
        f.n,
        f.terms.iter().map(|(m, c)| (m.clone(), c * Rational::from_integer(m.factorial_product()))),
    )
}

pub fn phi_inverse(g: &DualPolynomial) -> PrimalPolynomial {
    Polynomial::from_terms(
        g.n,
        g.terms.iter().map(|(m, c)| (m.clone(), c / Rational::from_integer(m.factorial_product()))),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetricKind {
    Complete,
    PowerSum,
}

pub fn symmetric_generator(n: usize, d: usize, kind: SymmetricKind) -> DualPolynomial {
    match kind {
        SymmetricKind::Complete => DualPolynomial::complete_symmetric(n, d),
        SymmetricKind::PowerSum => DualPolynomial::power_sum(n, d),
    }
}

/// Multinomial expansion of `L^d` for a linear form `L`.
pub fn expand_linear_power<K: Scalar, R: Ring>(l: &Polynomial<K, R>, d: usize) -> Result<Polynomial<K, R>> {
    let coeffs = l.linear_coefficients().ok_or(Error::NotLinear)?;
    let n = l.n;
    let support: Vec<usize> = (0..n).filter(|&i| !coeffs[i].is_zero()).collect();
    if support.is_empty() {
        return Ok(if d == 0 { Polynomial::one(n) } else { Polynomial::zero(n) });
    }
    // Powers c_i^k for each support variable.
    let powers: Vec<Vec<K>> = support
        .iter()
        .map(|&i| {
            let mut row = Vec::with_capacity(d + 1);
            let mut acc = K::one();
            for _ in 0..=d {
                row.push(acc.clone());
                acc = acc * coeffs[i].clone();
            }
            row
        })
        .collect();
    let dfact = factorial(d);
    let mut out = Polynomial::zero(n);
    for exps in enumerate_exponents(support.len(), d) {
        let denom = exps.iter().fold(BigInt::one(), |acc, &e| acc * factorial(e as usize));
        let mut c = K::from_bigint(&(&dfact / denom));
        let mut full = vec![0u16; n];
        for (k, &e) in exps.iter().enumerate() {
            c = c * powers[k][e as usize].clone();
            full[support[k]] = e;
        }
        out.add_term(Monomial(full), c);
    }
    Ok(out)
}

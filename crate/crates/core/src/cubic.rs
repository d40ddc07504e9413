//! Symmetric cubics `F = a_0 p_1^3 + a_1 n p_1 p_2 + a_2 n^2 p_3`: the plane
//! of coefficients, the cuspidal cubic `𝒞`, the lines `ℓ_1, ℓ_2, ℓ_3`, and
//! the rank, resolution and certificate data attached to each point.

use std::collections::BTreeSet;
use std::fmt;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::apolarity::{contains_in_annihilator, generator_degrees, hilbert_function, ideal_degree, HilbertFunction};
use crate::betti::BettiTable;
use crate::certificate::{PowerSumCertificate, PowerSumTerm};
use crate::error::{Error, Result};
use crate::inverse::InverseSystem;
use crate::lefschetz::{search_sl_element, sl_element_for_cubic};
use crate::linalg::Matrix;
use crate::poly::{contract, DualPolynomial, Monomial, Polynomial, PrimalPolynomial, Ring};
use crate::scalar::{binomial, int, parse_rational, rational_sqrt, to_f64, MinPoly, QuadExt, Rational};

/// Projective point `(a_0 : a_1 : a_2)`, stored as coprime integers whose
/// first nonzero entry is positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PlanePoint {
    #[serde(with = "crate::scalar::rational_str")]
    a0: Rational,
    #[serde(with = "crate::scalar::rational_str")]
    a1: Rational,
    #[serde(with = "crate::scalar::rational_str")]
    a2: Rational,
}

impl PlanePoint {
    pub fn new(a0: Rational, a1: Rational, a2: Rational) -> Result<Self> {
        let coords = [a0, a1, a2];
        let Some(first) = coords.iter().find(|c| !c.is_zero()).cloned() else {
            return Err(Error::ZeroPoint);
        };
        let lcm = coords.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = coords.iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
        let gcd = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        let sign = if first.is_negative() { -BigInt::one() } else { BigInt::one() };
        let norm: Vec<Rational> = ints.into_iter().map(|v| Rational::from_integer(v / &gcd * &sign)).collect();
        let [a0, a1, a2]: [Rational; 3] = norm.try_into().expect("three coordinates");
        Ok(PlanePoint { a0, a1, a2 })
    }

    pub fn from_ints(a0: i64, a1: i64, a2: i64) -> Result<Self> {
        Self::new(int(a0), int(a1), int(a2))
    }

    /// Parses `"a0,a1,a2"` with integer or `num/den` entries.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("expected three coordinates `a0,a1,a2`, got `{s}`")));
        }
        let v: Vec<Rational> = parts.iter().map(|p| parse_rational(p)).collect::<Result<_>>()?;
        let [a0, a1, a2]: [Rational; 3] = v.try_into().expect("three coordinates");
        Self::new(a0, a1, a2)
    }

    pub fn cusp() -> Self {
        Self::from_ints(1, 0, 0).expect("nonzero")
    }

    pub fn flex() -> Self {
        Self::from_ints(2, -3, 1).expect("nonzero")
    }

    pub fn coords(&self) -> [Rational; 3] {
        [self.a0.clone(), self.a1.clone(), self.a2.clone()]
    }

    /// `a_0 p_1^3 + a_1 n p_1 p_2 + a_2 n^2 p_3` in the normalized coordinates.
    pub fn form(&self, n: usize) -> DualPolynomial {
        let p = |k| DualPolynomial::power_sum(n, k);
        let nn = int(n as i64);
        let p1 = p(1);
        &(&p1.pow(3).scale(&self.a0) + &(&p1 * &p(2)).scale(&(&self.a1 * &nn))) + &p(3).scale(&(&self.a2 * &nn * &nn))
    }

    /// Affine coordinates `(a_1/a_0, a_2/a_0)`, if `a_0 ≠ 0`.
    pub fn chart(&self) -> Option<(Rational, Rational)> {
        if self.a0.is_zero() {
            None
        } else {
            Some((&self.a1 / &self.a0, &self.a2 / &self.a0))
        }
    }
}

impl fmt::Display for PlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{}:{})", self.a0, self.a1, self.a2)
    }
}

/// `27 a_0 a_2^2 − 9 a_1^2 a_2 − a_1^3`.
pub fn curve_eval(p: &PlanePoint) -> Rational {
    let [a0, a1, a2] = p.coords();
    int(27) * &a0 * &a2 * &a2 - int(9) * &a1 * &a1 * &a2 - &a1 * &a1 * &a1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Memberships {
    pub on_c: bool,
    pub is_p: bool,
    pub is_q: bool,
    /// `a_1 + 3 a_2 = 0`.
    pub on_l1: bool,
    /// `a_2 = 0`.
    pub on_l2: bool,
    /// `a_0 + a_1 + a_2 = 0`.
    pub on_l3: bool,
}

pub fn memberships(p: &PlanePoint) -> Memberships {
    let [a0, a1, a2] = p.coords();
    Memberships {
        on_c: curve_eval(p).is_zero(),
        is_p: *p == PlanePoint::cusp(),
        is_q: *p == PlanePoint::flex(),
        on_l1: (&a1 + int(3) * &a2).is_zero(),
        on_l2: a2.is_zero(),
        on_l3: (&a0 + &a1 + &a2).is_zero(),
    }
}

/// `(3αβ^2 + β^3 : 3α^2 β : α^3)`.
pub fn gamma(alpha: &Rational, beta: &Rational) -> Result<PlanePoint> {
    PlanePoint::new(
        int(3) * alpha * beta * beta + beta * beta * beta,
        int(3) * alpha * alpha * beta,
        alpha * alpha * alpha,
    )
}

/// `(α : β)` normalized like a plane point.
fn normalize_pair(a: Rational, b: Rational) -> (Rational, Rational) {
    let p = PlanePoint::new(a, b, Rational::zero()).expect("nonzero pair");
    let [a, b, _] = p.coords();
    (a, b)
}

/// Inverse of [`gamma`] on `𝒞`: `(3c_2 : c_1)`, and `(0 : 1)` at the cusp.
pub fn gamma_inverse(c: &PlanePoint) -> Result<(Rational, Rational)> {
    if !curve_eval(c).is_zero() {
        return Err(Error::NotOnCurve(c.to_string()));
    }
    let [_, c1, c2] = c.coords();
    if c1.is_zero() && c2.is_zero() {
        return Ok((Rational::zero(), Rational::one()));
    }
    Ok(normalize_pair(int(3) * c2, c1))
}

/// The eight resolution types of `S/I_X`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BettiCase {
    I,
    Ii,
    Iii,
    Iv,
    V,
    Vi,
    Vii,
    Viii,
}

impl BettiCase {
    pub const ALL: [BettiCase; 8] = [
        BettiCase::I,
        BettiCase::Ii,
        BettiCase::Iii,
        BettiCase::Iv,
        BettiCase::V,
        BettiCase::Vi,
        BettiCase::Vii,
        BettiCase::Viii,
    ];

    pub fn label(self) -> &'static str {
        match self {
            BettiCase::I => "i",
            BettiCase::Ii => "ii",
            BettiCase::Iii => "iii",
            BettiCase::Iv => "iv",
            BettiCase::V => "v",
            BettiCase::Vi => "vi",
            BettiCase::Vii => "vii",
            BettiCase::Viii => "viii",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')').to_ascii_lowercase();
        BettiCase::ALL
            .into_iter()
            .find(|c| c.label() == t)
            .ok_or_else(|| Error::Parse(format!("unknown resolution case `{s}`")))
    }

    /// Whether the case can occur for `n` variables.
    pub fn valid_for(self, n: usize) -> bool {
        match self {
            BettiCase::Ii | BettiCase::Iv => n == 3,
            BettiCase::Iii | BettiCase::V => n > 3,
            _ => n >= 3,
        }
    }
}

impl fmt::Display for BettiCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.label())
    }
}

pub fn betti_case(n: usize, m: &Memberships) -> BettiCase {
    if m.is_p {
        BettiCase::I
    } else if m.is_q {
        if n == 3 {
            BettiCase::Ii
        } else {
            BettiCase::Iii
        }
    } else if m.on_l1 {
        if n == 3 {
            BettiCase::Iv
        } else {
            BettiCase::V
        }
    } else if m.on_c {
        BettiCase::Vi
    } else if m.on_l2 {
        BettiCase::Vii
    } else {
        BettiCase::Viii
    }
}

/// `(1,1,1,1)` at `𝒫`, `(1,n−1,n−1,1)` at `𝒬`, `(1,n,n,1)` elsewhere.
pub fn predicted_hilbert(n: usize, m: &Memberships) -> HilbertFunction {
    let mid = if m.is_p {
        1
    } else if m.is_q {
        n - 1
    } else {
        n
    };
    HilbertFunction(vec![1, mid, mid, 1])
}

pub fn waring_rank(n: usize, m: &Memberships) -> usize {
    if m.is_p {
        1
    } else if m.is_q && n == 3 {
        2
    } else if m.on_c || (n == 3 && m.on_l1) {
        n
    } else if m.on_l2 {
        2 * (n - 1)
    } else {
        n + 1
    }
}

pub const FLEX_CACTUS_FLAG: &str = "cactus-rank-at-flex: the cactus-rank statement places the flex in its \
    `n+1 otherwise` clause, but wr = n and HF (1,n-1,n-1,1) force cr = n; reporting n";

/// Cactus rank and the flex discrepancy flag (raised exactly at `𝒬`, `n ≥ 4`).
pub fn cactus_rank(n: usize, m: &Memberships) -> (usize, Option<&'static str>) {
    if m.is_p {
        (1, None)
    } else if m.is_q {
        if n == 3 {
            (2, None)
        } else {
            (n, Some(FLEX_CACTUS_FLAG))
        }
    } else if m.on_c || (n == 3 && m.on_l1) {
        (n, None)
    } else {
        (n + 1, None)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlWitness {
    pub name: String,
    #[serde(with = "crate::scalar::rational_vec")]
    pub coefficients: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub n: usize,
    pub point: PlanePoint,
    #[serde(with = "crate::scalar::rational_str")]
    pub curve_value: Rational,
    pub memberships: Memberships,
    pub hilbert: HilbertFunction,
    pub hilbert_computed: HilbertFunction,
    pub waring_rank: usize,
    pub cactus_rank: usize,
    pub rs_lower_bound: usize,
    pub betti_case: BettiCase,
    pub predicted_betti: BettiTable,
    pub sl_element: Option<SlWitness>,
    pub discrepancy_flags: Vec<String>,
}

const SL_NAMES: [&str; 3] = ["sum x_i", "x_1", "n x_1 - sum x_i"];

pub fn classify(n: usize, point: &PlanePoint) -> Result<ClassificationReport> {
    if n < 3 {
        return Err(Error::UnsupportedSize { n, reason: "symmetric cubics are classified for n >= 3".into() });
    }
    let m = memberships(point);
    let f = point.form(n);
    let hilbert = predicted_hilbert(n, &m);
    let hilbert_computed = hilbert_function(&f)?;
    let mut flags = Vec::new();
    if hilbert != hilbert_computed {
        flags.push(format!("hilbert-mismatch: predicted {:?}, computed {:?}", hilbert.0, hilbert_computed.0));
    }
    let (cr, flag) = cactus_rank(n, &m);
    if let Some(flag) = flag {
        flags.push(flag.to_string());
    }
    let case = betti_case(n, &m);
    let sl_element = sl_element_for_cubic(n, point)?.map(|(idx, ell)| SlWitness {
        name: SL_NAMES[idx].to_string(),
        coefficients: ell.linear_coefficients().expect("linear"),
    });
    let sl_element = match sl_element {
        Some(w) => Some(w),
        None => {
            let found = search_sl_element(&f, 2)?;
            flags.push(format!(
                "no-sl-candidate: none of sum x_i, x_1, n x_1 - sum x_i is a strong Lefschetz element; search {}",
                if found.is_some() { "found one" } else { "found none with coefficients in [-2, 2]" }
            ));
            found.map(|ell| SlWitness {
                name: "search".into(),
                coefficients: ell.linear_coefficients().expect("linear"),
            })
        }
    };
    Ok(ClassificationReport {
        n,
        point: point.clone(),
        curve_value: curve_eval(point),
        memberships: m,
        hilbert,
        hilbert_computed,
        waring_rank: waring_rank(n, &m),
        cactus_rank: cr,
        rs_lower_bound: rs_lower_bound(&f)?,
        betti_case: case,
        predicted_betti: predicted_betti(n, case)?,
        sl_element,
        discrepancy_flags: flags,
    })
}

/// `⌈deg ann(F) / (max generator degree)⌉`.
pub fn rs_lower_bound(f: &DualPolynomial) -> Result<usize> {
    let degree = ideal_degree(f)?;
    let top = generator_degrees(f)?.iter().map(|&(j, _)| j).max().unwrap_or(1);
    Ok(degree.div_ceil(top))
}

/// Rational completing-the-square decomposition `q = Σ c_i L_i^2` with
/// rank-many terms; each entry is `(c_i, coefficients of L_i)`.
pub fn quadric_diagonalize<R: Ring>(q: &Polynomial<Rational, R>) -> Result<Vec<(Rational, Vec<Rational>)>> {
    if !q.is_zero() && q.homogeneous_degree() != Some(2) {
        return Err(Error::NotHomogeneous);
    }
    let n = q.n();
    let mut a = crate::lefschetz::quadric_matrix(q);
    let mut out = Vec::new();
    let half = Rational::new(1.into(), 2.into());
    loop {
        if let Some(i) = (0..n).find(|&i| !a.get(i, i).is_zero()) {
            let c = a.get(i, i).clone();
            let l: Vec<Rational> = (0..n).map(|j| a.get(i, j) / &c).collect();
            a = Matrix::from_fn(n, n, |r, s| a.get(r, s) - &c * &l[r] * &l[s]);
            out.push((c, l));
            continue;
        }
        let Some((i, j)) = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).find(|&(i, j)| !a.get(i, j).is_zero())
        else {
            break;
        };
        // Hyperbolic pair: q − (2/b) u v with u, v the i-th and j-th rows.
        let b = a.get(i, j).clone();
        let u: Vec<Rational> = (0..n).map(|k| a.get(i, k).clone()).collect();
        let v: Vec<Rational> = (0..n).map(|k| a.get(j, k).clone()).collect();
        a = Matrix::from_fn(n, n, |r, s| a.get(r, s) - (&u[r] * &v[s] + &v[r] * &u[s]) / &b);
        let c = &half / &b;
        out.push((c.clone(), u.iter().zip(&v).map(|(x, y)| x + y).collect()));
        out.push((-c, u.iter().zip(&v).map(|(x, y)| x - y).collect()));
    }
    Ok(out)
}

fn q_rational(r: Rational) -> QuadExt {
    QuadExt::rational(r)
}

fn cyclotomic_pair(coef: Rational) -> Vec<PowerSumTerm> {
    let xi = QuadExt::root(MinPoly::cyclotomic3());
    let xi2 = xi.clone() * xi.clone();
    let one = QuadExt::rational(Rational::one());
    vec![
        PowerSumTerm::new(q_rational(coef.clone()), vec![one.clone(), xi.clone(), xi2.clone()], 3),
        PowerSumTerm::new(q_rational(coef), vec![one, xi2, xi], 3),
    ]
}

/// `(1/(27 n a_2^2)) Σ_i (3 a_2 n X_i + a_1 p_1)^3`, which equals `F` on `𝒞`.
fn curve_terms(n: usize, a1: &Rational, a2: &Rational) -> Vec<PowerSumTerm> {
    let nn = int(n as i64);
    let coef = Rational::one() / (int(27) * &nn * a2 * a2);
    (0..n)
        .map(|i| {
            let mut lin = vec![a1.clone(); n];
            lin[i] += int(3) * a2 * &nn;
            PowerSumTerm::rational(coef.clone(), &lin, 3)
        })
        .collect()
}

/// Pairs `λ_i ((p_1 + s_i M_i)^3 + (p_1 − s_i M_i)^3)` over a diagonalization
/// `a_1 (n p_2 − p_1^2) = Σ c_i M_i^2`, with `6 λ_i s_i^2 = c_i` and
/// `Σ 2 λ_i = a_0 + a_1`. All `s_i` are rational except one square root.
fn tangent_line_terms(n: usize, a0: &Rational, a1: &Rational) -> Result<Vec<PowerSumTerm>> {
    let nn = int(n as i64);
    let p1 = DualPolynomial::power_sum(n, 1);
    let quad = &DualPolynomial::power_sum(n, 2).scale(&(a1 * &nn)) - &p1.pow(2).scale(a1);
    let diag = quadric_diagonalize(&quad)?;
    let m = diag.len();
    if m < 2 {
        return Err(Error::UnsupportedSize { n, reason: "needs n >= 3".into() });
    }
    let target = int(3) * (a0 + a1);
    let mut u: Vec<Rational> = vec![Rational::one(); m];
    let rest = |u: &[Rational]| -> Rational {
        &target - diag.iter().zip(u).skip(1).map(|((c, _), ui)| c * ui * ui).fold(Rational::zero(), |s, x| s + x)
    };
    let mut r = rest(&u);
    while r.is_zero() {
        u[1] += Rational::one();
        r = rest(&u);
    }
    let six = int(6);
    let ones = vec![Rational::one(); n];
    let mut terms = Vec::with_capacity(2 * m);
    let mut push_pair = |lambda: Rational, s: QuadExt, dir: &[Rational]| {
        for sign in [1i64, -1] {
            let lin: Vec<QuadExt> = ones
                .iter()
                .zip(dir)
                .map(|(o, d)| QuadExt::rational(o.clone()) + s.clone() * QuadExt::rational(d * int(sign)))
                .collect();
            terms.push(PowerSumTerm::new(QuadExt::rational(lambda.clone()), lin, 3));
        }
    };
    let (c0, dir0) = &diag[0];
    let s_sq = c0 / &r;
    let s0 = match rational_sqrt(&s_sq) {
        Some(s) => QuadExt::rational(s),
        None => QuadExt::root(MinPoly::sqrt_of(s_sq)),
    };
    push_pair(&r / &six, s0, dir0);
    for ((c, dir), ui) in diag.iter().zip(&u).skip(1) {
        push_pair(c * ui * ui / &six, QuadExt::rational(Rational::one() / ui), dir);
    }
    Ok(terms)
}

/// Explicit Waring decomposition with as many terms as [`waring_rank`]
/// predicts (scalar multiples of cubes).
pub fn waring_certificate(n: usize, point: &PlanePoint) -> Result<PowerSumCertificate> {
    if n < 3 {
        return Err(Error::UnsupportedSize { n, reason: "symmetric cubics are classified for n >= 3".into() });
    }
    let m = memberships(point);
    let [a0, a1, a2] = point.coords();
    let ones = vec![Rational::one(); n];
    let terms = if m.is_p {
        vec![PowerSumTerm::rational(a0.clone(), &ones, 3)]
    } else if m.is_q && n == 3 {
        cyclotomic_pair(a2.clone())
    } else if n == 3 && m.on_l1 {
        let mut t = vec![PowerSumTerm::rational(&a0 - int(2) * &a2, &ones, 3)];
        t.extend(cyclotomic_pair(a2.clone()));
        t
    } else if m.on_c {
        curve_terms(n, &a1, &a2)
    } else if m.on_l2 {
        tangent_line_terms(n, &a0, &a1)?
    } else {
        let mut t = curve_terms(n, &a1, &a2);
        t.push(PowerSumTerm::rational(curve_eval(point) / (int(27) * &a2 * &a2), &ones, 3));
        t
    };
    Ok(PowerSumCertificate::new(point.form(n), terms))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CactusCertificate {
    pub n: usize,
    pub point: PlanePoint,
    /// `(x_i − x_j)(x_i + x_j − 2 x_k)` for `i ≠ k`, `j ≠ k`, `i < j`.
    pub generators: Vec<PrimalPolynomial>,
    pub contained: bool,
    /// Hilbert function of the artinian reduction in `x_1 − x_2, …, x_1 − x_n`.
    pub scheme_hilbert: Vec<usize>,
    pub length: usize,
    /// `(3a_0 + (n+2)a_1) p_1^2 − 3n(a_0 + a_1) p_2`.
    pub q: PrimalPolynomial,
    pub q_annihilates: bool,
    #[serde(with = "crate::scalar::rational_str")]
    pub q_at_ones: Rational,
    #[serde(with = "crate::scalar::rational_str")]
    pub q_at_ones_expected: Rational,
    pub ok: bool,
}

/// Rewrites a form in `x_1..x_n` that lives in `k[x_1 − x_2, …, x_1 − x_n]`
/// in the variables `y_i = x_1 − x_{i+1}` (substituting `x_1 = 0`,
/// `x_{i+1} = −y_i`).
fn to_difference_variables(f: &PrimalPolynomial) -> PrimalPolynomial {
    let n = f.n();
    let mut out = PrimalPolynomial::zero(n - 1);
    for (mono, c) in f.terms() {
        let e = mono.exponents();
        if e[0] != 0 {
            continue;
        }
        let deg: usize = e[1..].iter().map(|&x| x as usize).sum();
        let sign = if deg % 2 == 0 { c.clone() } else { -c.clone() };
        out.add_term(Monomial::new(e[1..].to_vec()), sign);
    }
    out
}

/// Scheme certificate for `cr(F) ≤ n + 1` on `ℓ_2 ∖ {𝒫}`.
pub fn cactus_certificate(n: usize, point: &PlanePoint) -> Result<CactusCertificate> {
    let m = memberships(point);
    if !m.on_l2 || m.is_p {
        return Err(Error::NotOnTangentLine(point.to_string()));
    }
    if n < 3 {
        return Err(Error::UnsupportedSize { n, reason: "symmetric cubics are classified for n >= 3".into() });
    }
    let [a0, a1, _] = point.coords();
    let f = point.form(n);
    let x = |i| PrimalPolynomial::var(n, i);
    let mut generators = Vec::new();
    for k in 0..n {
        for i in 0..n {
            for j in i + 1..n {
                if i == k || j == k {
                    continue;
                }
                let g = &(&x(i) - &x(j)) * &(&(&x(i) + &x(j)) - &x(k).scale(&int(2)));
                generators.push(g);
            }
        }
    }
    let contained = contains_in_annihilator(&generators, &f);
    let reduced: Vec<PrimalPolynomial> = generators.iter().map(to_difference_variables).collect();
    let scheme_hilbert = InverseSystem::of_ideal(n - 1, &reduced)?.hilbert_function();
    let length = scheme_hilbert.iter().sum();
    let nn = int(n as i64);
    let p = |k| PrimalPolynomial::power_sum(n, k);
    let q = &p(1).pow(2).scale(&(int(3) * &a0 + (&nn + int(2)) * &a1)) - &p(2).scale(&(int(3) * &nn * (&a0 + &a1)));
    let q_annihilates = contract(&q, &f).is_zero();
    let q_at_ones = q.evaluate(&vec![Rational::one(); n]);
    let q_at_ones_expected = &a1 * &nn * &nn * (&nn - int(1));
    let ok = contained
        && scheme_hilbert == vec![1, n - 1, 1]
        && length == n + 1
        && q_annihilates
        && q_at_ones == q_at_ones_expected
        && !q_at_ones.is_zero();
    Ok(CactusCertificate {
        n,
        point: point.clone(),
        generators,
        contained,
        scheme_hilbert,
        length,
        q,
        q_annihilates,
        q_at_ones,
        q_at_ones_expected,
        ok,
    })
}

fn rational_betti(v: Rational) -> Result<u64> {
    if !v.is_integer() || v.is_negative() {
        return Err(Error::NonIntegral(v.to_string()));
    }
    u64::try_from(v.to_integer()).map_err(|_| Error::NonIntegral(v.to_string()))
}

fn brat(n: usize, k: usize) -> Rational {
    Rational::from_integer(binomial(n as i64, k as i64))
}

/// `i (n−1−i)/n · C(n+1, i+1)`.
fn almost_linear(n: usize, i: usize) -> Rational {
    Rational::new(BigInt::from(i * (n - 1 - i)), BigInt::from(n)) * brat(n + 1, i + 1)
}

/// `β(S/I_X)` from the closed forms of each case.
pub fn scheme_betti(n: usize, case: BettiCase) -> Result<BettiTable> {
    if !case.valid_for(n) {
        return Err(Error::InvalidCase { case: case.to_string(), n });
    }
    let mut t = BettiTable::new();
    t.set(0, 0, 1);
    match case {
        BettiCase::I => {
            for i in 0..n {
                t.set(i, i, rational_betti(brat(n - 1, i))?);
            }
        }
        BettiCase::Ii => {
            t.set(1, 1, 1);
            t.set(1, 2, 1);
            t.set(2, 3, 1);
        }
        BettiCase::Iii => {
            t.set(1, 1, 1);
            for i in 1..=n - 2 {
                let a = Rational::new(BigInt::from(i * (n - 2 - i)), BigInt::from(n - 1)) * brat(n, i + 1);
                let b = Rational::new(BigInt::from((i - 1) * (n - 1 - i)), BigInt::from(n - 1)) * brat(n, i);
                t.add(i, i + 1, rational_betti(a + b)?);
            }
            t.add(n - 2, n, 1);
            t.add(n - 1, n + 1, 1);
        }
        BettiCase::Iv => {
            t.set(1, 2, 3);
            t.set(2, 3, 2);
        }
        BettiCase::V => {
            for i in 1..=n - 2 {
                t.add(i, i + 1, rational_betti(almost_linear(n, i))?);
            }
            t.add(n - 2, n, 1);
            t.add(n - 1, n + 1, 1);
        }
        BettiCase::Vi => {
            for i in 1..n {
                t.set(i, i + 1, rational_betti(Rational::from_integer(BigInt::from(i)) * brat(n, i + 1))?);
            }
        }
        BettiCase::Vii | BettiCase::Viii => {
            for i in 1..=n - 2 {
                t.add(i, i + 1, rational_betti(almost_linear(n, i))?);
            }
            t.add(n - 1, n + 1, 1);
        }
    }
    Ok(t)
}

/// `β_{i,j}(S/ann F) = β_{i,j}(S/I_X) + β_{n−i, 3+n−j}(S/I_X)`.
pub fn predicted_betti(n: usize, case: BettiCase) -> Result<BettiTable> {
    let x = scheme_betti(n, case)?;
    let mut out = BettiTable::new();
    for (i, j, b) in x.entries() {
        out.add(i, j, b);
        if i <= n && j <= n + 3 {
            out.add(n - i, n + 3 - j, b);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BettiComparison {
    pub n: usize,
    pub point: PlanePoint,
    pub case: BettiCase,
    pub predicted: BettiTable,
    pub computed: BettiTable,
    /// `(i, j, predicted, computed)` for every differing cell.
    pub mismatches: Vec<(usize, usize, u64, u64)>,
    pub equal: bool,
}

/// Koszul Betti numbers of `S/ann F` against the case formula.
pub fn verify_betti_formula(n: usize, point: &PlanePoint) -> Result<BettiComparison> {
    if !(3..=crate::betti::MAX_KOSZUL_VARIABLES).contains(&n) {
        return Err(Error::UnsupportedSize { n, reason: "Betti verification runs for 3 <= n <= 5".into() });
    }
    let case = betti_case(n, &memberships(point));
    let predicted = predicted_betti(n, case)?;
    let computed = crate::betti::koszul_betti(&point.form(n))?;
    let mismatches = predicted.diff(&computed);
    let equal = mismatches.is_empty();
    Ok(BettiComparison { n, point: point.clone(), case, predicted, computed, mismatches, equal })
}

/// Integer points of `[−r, r]^3`, normalized and deduplicated.
pub fn grid_points(radius: i64) -> Vec<PlanePoint> {
    let mut set = BTreeSet::new();
    for a in -radius..=radius {
        for b in -radius..=radius {
            for c in -radius..=radius {
                if let Ok(p) = PlanePoint::from_ints(a, b, c) {
                    set.insert(p);
                }
            }
        }
    }
    set.into_iter().collect()
}

/// Grid points plus curve points `γ(α, β)`, points on each line and both
/// special points; sorted and deduplicated.
pub fn sweep_points(radius: i64) -> Vec<PlanePoint> {
    let mut set: BTreeSet<PlanePoint> = grid_points(radius).into_iter().collect();
    for a in -4..=4i64 {
        for b in -4..=4i64 {
            if let Ok(p) = gamma(&int(a), &int(b)) {
                set.insert(p);
            }
        }
    }
    for t in -5..=5i64 {
        for u in [1i64, 2, 3] {
            // ℓ_1: (t : −3u : u), ℓ_2: (t : u : 0), ℓ_3: (t : u : −t−u).
            for p in [
                PlanePoint::from_ints(t, -3 * u, u),
                PlanePoint::from_ints(t, u, 0),
                PlanePoint::from_ints(t, u, -t - u),
            ]
            .into_iter()
            .flatten()
            {
                set.insert(p);
            }
        }
    }
    set.insert(PlanePoint::cusp());
    set.insert(PlanePoint::flex());
    set.into_iter().collect()
}

/// Visible window of the affine chart `a_0 = 1`, coordinates `(a_1, a_2)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Viewport {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub width: u32,
    pub height: u32,
}

impl Default for Viewport {
    fn default() -> Self {
        Viewport { x_min: -3.0, x_max: 1.5, y_min: -1.5, y_max: 1.5, width: 540, height: 360 }
    }
}

impl Viewport {
    pub fn to_pixels(&self, x: f64, y: f64) -> (f64, f64) {
        let px = (x - self.x_min) / (self.x_max - self.x_min) * self.width as f64;
        let py = self.height as f64 - (y - self.y_min) / (self.y_max - self.y_min) * self.height as f64;
        (px, py)
    }

    fn contains(&self, x: f64, y: f64) -> bool {
        let mx = (self.x_max - self.x_min) * 0.5;
        let my = (self.y_max - self.y_min) * 0.5;
        x >= self.x_min - mx && x <= self.x_max + mx && y >= self.y_min - my && y <= self.y_max + my
    }
}

fn polyline(points: &[(f64, f64)], stroke: &str, id: &str) -> String {
    let coords: Vec<String> = points.iter().map(|(x, y)| format!("{x:.3},{y:.3}")).collect();
    format!(
        "  <polyline id=\"{id}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"2\" points=\"{}\"/>\n",
        coords.join(" ")
    )
}

/// The cuspidal cubic, the three lines and the points `𝒫`, `𝒬` in the chart
/// `a_0 = 1`.
pub fn plot_atlas_svg(n: usize, view: &Viewport) -> String {
    let mut out = String::new();
    let (w, h) = (view.width, view.height);
    let _ = writeln!(out, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">"
    );
    let _ = writeln!(out, "  <title>Symmetric cubics, n = {n}: chart a0 = 1, axes (a1, a2)</title>");
    let _ = writeln!(out, "  <rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>");

    // Parametrization γ(α, 1) in the chart: (3α^2, α^3) / (3α + 1).
    let mut segments: Vec<Vec<(f64, f64)>> = vec![Vec::new()];
    let steps = 1600;
    for s in 0..=steps {
        let alpha = -4.0 + 8.0 * s as f64 / steps as f64;
        let den = 3.0 * alpha + 1.0;
        let (x, y) = (3.0 * alpha * alpha / den, alpha * alpha * alpha / den);
        let current = segments.last_mut().expect("segment");
        if den.abs() < 1e-9 || !view.contains(x, y) {
            if !current.is_empty() {
                segments.push(Vec::new());
            }
            continue;
        }
        current.push(view.to_pixels(x, y));
    }
    for (k, seg) in segments.iter().filter(|s| s.len() > 1).enumerate() {
        out.push_str(&polyline(seg, "black", &format!("curve-{k}")));
    }

    let line = |f: &dyn Fn(f64) -> f64| {
        vec![view.to_pixels(view.x_min, f(view.x_min)), view.to_pixels(view.x_max, f(view.x_max))]
    };
    out.push_str(&polyline(&line(&|x| -x / 3.0), "#1f77b4", "l1"));
    out.push_str(&polyline(&line(&|_| 0.0), "#2ca02c", "l2"));
    out.push_str(&polyline(&line(&|x| -1.0 - x), "#d62728", "l3"));

    for (label, p) in [("P", PlanePoint::cusp()), ("Q", PlanePoint::flex())] {
        let (x, y) = p.chart().expect("affine");
        let (px, py) = view.to_pixels(to_f64(&x), to_f64(&y));
        let _ = writeln!(out, "  <circle id=\"{label}\" cx=\"{px:.3}\" cy=\"{py:.3}\" r=\"4\" fill=\"black\"/>");
        let _ = writeln!(
            out,
            "  <text x=\"{:.3}\" y=\"{:.3}\" font-family=\"sans-serif\" font-size=\"14\">{label}</text>",
            px + 6.0,
            py - 6.0
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use proptest::prelude::*;

    fn pt(a: i64, b: i64, c: i64) -> PlanePoint {
        PlanePoint::from_ints(a, b, c).unwrap()
    }

    #[test]
    fn normalization() {
        assert_eq!(pt(-4, 6, -2), pt(2, -3, 1));
        assert_eq!(PlanePoint::new(rat(1, 2), rat(-3, 4), rat(1, 4)).unwrap(), pt(2, -3, 1));
        assert_eq!(PlanePoint::parse("0, -2/3, 4").unwrap(), pt(0, 1, -6));
        assert_eq!(PlanePoint::from_ints(0, 0, 0), Err(Error::ZeroPoint));
        assert!(PlanePoint::parse("1,2").is_err());
    }

    #[test]
    fn curve_and_lines() {
        let q = PlanePoint::flex();
        assert!(curve_eval(&q).is_zero());
        let m = memberships(&q);
        assert!(m.is_q && m.on_l1 && m.on_l3 && m.on_c && !m.on_l2);
        let m = memberships(&PlanePoint::cusp());
        assert!(m.is_p && m.on_c && m.on_l1 && m.on_l2);
        assert_eq!(curve_eval(&pt(1, 1, 1)), int(17));
        let m = memberships(&pt(1, 1, 1));
        assert!(!m.on_c && !m.on_l1 && !m.on_l2 && !m.on_l3);
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma(&int(0), &int(1)).unwrap(), PlanePoint::cusp());
        assert_eq!(gamma(&int(1), &int(-1)).unwrap(), PlanePoint::flex());
        assert_eq!(gamma_inverse(&PlanePoint::flex()).unwrap(), (int(1), int(-1)));
        assert_eq!(gamma_inverse(&PlanePoint::cusp()).unwrap(), (int(0), int(1)));
        assert!(matches!(gamma_inverse(&pt(1, 1, 1)), Err(Error::NotOnCurve(_))));
    }

    #[test]
    fn classification_examples() {
        let r = classify(5, &PlanePoint::cusp()).unwrap();
        assert_eq!(
            (r.hilbert.0.clone(), r.waring_rank, r.cactus_rank, r.betti_case),
            (vec![1, 1, 1, 1], 1, 1, BettiCase::I)
        );
        let r = classify(3, &PlanePoint::flex()).unwrap();
        assert_eq!((r.waring_rank, r.cactus_rank, r.betti_case), (2, 2, BettiCase::Ii));
        let r = classify(4, &pt(1, 1, 0)).unwrap();
        assert_eq!((r.waring_rank, r.cactus_rank, r.betti_case), (6, 5, BettiCase::Vii));
        let r = classify(3, &pt(1, 1, 1)).unwrap();
        assert_eq!(
            (r.hilbert.0.clone(), r.waring_rank, r.cactus_rank, r.betti_case),
            (vec![1, 3, 3, 1], 4, 4, BettiCase::Viii)
        );
        assert!(r.discrepancy_flags.is_empty());
        let r = classify(4, &PlanePoint::flex()).unwrap();
        assert_eq!(r.cactus_rank, 4);
        assert_eq!(r.discrepancy_flags, vec![FLEX_CACTUS_FLAG.to_string()]);
        assert!(classify(2, &pt(1, 1, 1)).is_err());
        let r = classify(3, &pt(0, 3, -1)).unwrap();
        assert_eq!(r.sl_element.unwrap().name, "search");
        assert!(r.discrepancy_flags[0].starts_with("no-sl-candidate"));
    }

    #[test]
    fn waring_examples() {
        let c = waring_certificate(3, &pt(0, 0, 1)).unwrap();
        assert_eq!(c.len(), 3);
        assert!(c.verdict.is_exact());
        let c = waring_certificate(3, &pt(1, 1, 1)).unwrap();
        assert_eq!(c.len(), 4);
        assert!(c.verdict.is_exact());
        let c = waring_certificate(3, &PlanePoint::flex()).unwrap();
        assert_eq!(c.len(), 2);
        assert!(c.verdict.is_exact());
        let c = waring_certificate(3, &pt(0, 1, 0)).unwrap();
        assert_eq!(c.len(), 4);
        assert!(c.verdict.residual() < 1e-9);
    }

    #[test]
    fn certificates_match_claimed_ranks() {
        for n in 3..=5 {
            for p in [
                PlanePoint::cusp(),
                PlanePoint::flex(),
                pt(1, 1, 1),
                pt(1, -3, 1),
                pt(5, -3, 1),
                pt(1, 1, 0),
                pt(1, -1, 0),
                pt(0, 1, 0),
                pt(1, -2, 1),
                gamma(&int(2), &int(1)).unwrap(),
                gamma(&int(-1), &int(3)).unwrap(),
            ] {
                let c = waring_certificate(n, &p).unwrap();
                assert!(c.verdict.is_exact(), "n={n} p={p}");
                assert_eq!(c.len(), waring_rank(n, &memberships(&p)), "n={n} p={p}");
            }
        }
    }

    #[test]
    fn diagonalize_examples() {
        let x = |i| PrimalPolynomial::var(2, i);
        let q = &(&x(0).pow(2) + &(&x(0) * &x(1))) + &x(1).pow(2);
        let d = quadric_diagonalize(&q).unwrap();
        assert_eq!(d, vec![(int(1), vec![int(1), rat(1, 2)]), (rat(3, 4), vec![int(0), int(1)])]);
        assert_eq!(quadric_diagonalize(&x(0).pow(2)).unwrap().len(), 1);
        let h = DualPolynomial::complete_symmetric(3, 2);
        let d = quadric_diagonalize(&h).unwrap();
        assert_eq!(d.len(), 3);
        let back =
            d.iter().fold(DualPolynomial::zero(3), |acc, (c, l)| &acc + &DualPolynomial::linear(l).pow(2).scale(c));
        assert_eq!(back, h);
        let xy = &x(0) * &x(1);
        let d = quadric_diagonalize(&xy).unwrap();
        let back =
            d.iter().fold(PrimalPolynomial::zero(2), |acc, (c, l)| &acc + &PrimalPolynomial::linear(l).pow(2).scale(c));
        assert_eq!(back, xy);
    }

    #[test]
    fn cactus_examples() {
        let c = cactus_certificate(4, &pt(0, 1, 0)).unwrap();
        assert!(c.ok, "{c:?}");
        assert_eq!(c.length, 5);
        let c = cactus_certificate(3, &pt(1, 1, 0)).unwrap();
        assert_eq!(c.q_at_ones, int(18));
        assert!(c.ok);
        assert!(cactus_certificate(3, &pt(1, 1, 1)).is_err());
        assert!(cactus_certificate(3, &PlanePoint::cusp()).is_err());
        let f = pt(1, 1, 0).form(5);
        assert_eq!(rs_lower_bound(&f).unwrap(), 6);
    }

    #[test]
    fn rs_examples() {
        assert_eq!(rs_lower_bound(&pt(1, 1, 1).form(4)).unwrap(), 5);
        assert_eq!(rs_lower_bound(&PlanePoint::cusp().form(4)).unwrap(), 1);
        assert_eq!(rs_lower_bound(&PlanePoint::flex().form(3)).unwrap(), 2);
    }

    #[test]
    fn predicted_betti_examples() {
        let x = scheme_betti(3, BettiCase::I).unwrap();
        assert_eq!(x.entries().collect::<Vec<_>>(), vec![(0, 0, 1), (1, 1, 2), (2, 2, 1)]);
        let x = scheme_betti(4, BettiCase::Vi).unwrap();
        assert_eq!((x.get(1, 2), x.get(2, 3), x.get(3, 4)), (6, 8, 3));
        let x = scheme_betti(3, BettiCase::Viii).unwrap();
        assert_eq!((x.get(0, 0), x.get(2, 4), x.get(1, 2)), (1, 1, 2));
        assert!(scheme_betti(4, BettiCase::Ii).is_err());
        assert!(scheme_betti(3, BettiCase::V).is_err());
        assert_eq!(BettiCase::parse("(vii)").unwrap(), BettiCase::Vii);
    }

    #[test]
    fn betti_formula_examples() {
        assert!(verify_betti_formula(4, &PlanePoint::cusp()).unwrap().equal);
        assert!(verify_betti_formula(4, &pt(0, 1, 0)).unwrap().equal);
        assert!(verify_betti_formula(3, &pt(1, 1, 1)).unwrap().equal);
    }

    #[test]
    fn svg_is_deterministic() {
        let v = Viewport::default();
        let a = plot_atlas_svg(4, &v);
        assert_eq!(a, plot_atlas_svg(4, &v));
        assert!(a.contains("id=\"P\"") && a.contains("id=\"Q\"") && a.contains("id=\"l1\""));
        // ℓ_1 passes through both special points in the chart.
        for p in [PlanePoint::cusp(), PlanePoint::flex()] {
            let (x, y) = p.chart().unwrap();
            assert_eq!(&x + int(3) * &y, int(0));
        }
    }

    #[test]
    fn sweep_is_large_enough() {
        let pts = sweep_points(3);
        assert!(pts.len() >= 200);
        let ms: Vec<Memberships> = pts.iter().map(memberships).collect();
        assert!(ms.iter().filter(|m| m.on_c && !m.is_p && !m.is_q).count() > 5);
        assert!(ms.iter().filter(|m| m.on_l2 && !m.is_p).count() > 5);
    }

    proptest! {
        #[test]
        fn gamma_round_trip(a in -20i64..=20, b in -20i64..=20) {
            prop_assume!(a != 0 || b != 0);
            let p = gamma(&int(a), &int(b)).unwrap();
            prop_assert!(curve_eval(&p).is_zero());
            let (x, y) = gamma_inverse(&p).unwrap();
            prop_assert_eq!(gamma(&x, &y).unwrap(), p);
            prop_assert_eq!((x, y), normalize_pair(int(a), int(b)));
        }
    }
}

//! Orbit power-sum families for symmetric forms of degree 3, 4 and 5, their
//! coordinates in the `p_λ` basis, Jacobian identities and the preimage of
//! `h_{n,4}`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::certificate::PowerSumTerm;
use crate::error::{Error, Result};
use crate::fixed::{self, Cfx};
use crate::linalg::Matrix;
use crate::poly::{expand_linear_power, Dual, DualPolynomial, ParamPolynomial, Polynomial};
use crate::scalar::{binomial, int, Rational};
use crate::symmetric::{partitions, power_sum_product, to_power_sum_basis, PowerSumCoordinates};

/// How the `h_1^d` term enters: `α_0^d h_1^d` or a free scalar `c_0 h_1^d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Leading {
    Power,
    Free,
}

/// Coordinates of the orbit family as polynomials in the parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitMap {
    pub degree: usize,
    pub n: usize,
    pub leading: Leading,
    pub partitions: Vec<Vec<usize>>,
    pub coordinates: Vec<ParamPolynomial>,
}

/// Number of parameters `α_0, …` of the degree-`d` family.
pub fn parameter_count(d: usize) -> Result<usize> {
    match d {
        3 => Ok(3),
        4 => Ok(5),
        5 => Ok(7),
        _ => Err(Error::DegreeOutOfRange(d)),
    }
}

/// Number of `d`-th powers in the family.
pub fn orbit_term_count(d: usize, n: usize) -> Result<usize> {
    let pairs = n * n.saturating_sub(1) / 2;
    match d {
        3 => Ok(1 + n),
        4 => Ok(1 + n + pairs),
        5 => Ok(1 + 2 * n + pairs),
        _ => Err(Error::DegreeOutOfRange(d)),
    }
}

type PExpr = BTreeMap<Vec<usize>, ParamPolynomial>;

fn add_into(acc: &mut PExpr, lambda: Vec<usize>, c: ParamPolynomial) {
    let entry = acc.entry(lambda).or_insert_with(|| ParamPolynomial::zero(c.n()));
    *entry = &*entry + &c;
}

fn merge(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut v: Vec<usize> = a.iter().chain(b).copied().collect();
    v.sort_unstable_by(|x, y| y.cmp(x));
    v
}

/// `P_k` with `P_0 = n`, as a constant combination of `p_λ`.
fn p_single(n: usize, k: usize) -> Vec<(Vec<usize>, Rational)> {
    if k == 0 {
        vec![(vec![], int(n as i64))]
    } else {
        vec![(vec![k], Rational::one())]
    }
}

/// `Σ_{i<j} (X_i + X_j)^k = (Σ_m C(k,m) P_m P_{k−m} − 2^k P_k) / 2`.
fn p_pair(n: usize, k: usize) -> Vec<(Vec<usize>, Rational)> {
    let mut acc: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
    let half = Rational::new(1.into(), 2.into());
    for m in 0..=k {
        let c = Rational::from_integer(binomial(k as i64, m as i64)) * &half;
        for (a, ca) in p_single(n, m) {
            for (b, cb) in p_single(n, k - m) {
                *acc.entry(merge(&a, &b)).or_insert_with(Rational::zero) += &c * &ca * &cb;
            }
        }
    }
    for (a, ca) in p_single(n, k) {
        *acc.entry(a).or_insert_with(Rational::zero) -= Rational::from_integer(BigInt::from(1u64 << k)) * ca * &half;
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// `Σ_orbit (a h_1 + b Σ_{i∈σ} X_i)^d` with `σ` running over singletons or pairs.
fn orbit_sum(n: usize, d: usize, a: &ParamPolynomial, b: &ParamPolynomial, pairs: bool, out: &mut PExpr) {
    for k in 0..=d {
        let coef = (&a.pow(d - k) * &b.pow(k)).scale(&Rational::from_integer(binomial(d as i64, k as i64)));
        if coef.is_zero() {
            continue;
        }
        let orbit = if pairs {
            if k == 0 {
                vec![(vec![], int((n * (n - 1) / 2) as i64))]
            } else {
                p_pair(n, k)
            }
        } else {
            p_single(n, k)
        };
        for (lambda, c) in orbit {
            add_into(out, merge(&lambda, &vec![1; d - k]), coef.scale(&c));
        }
    }
}

impl OrbitMap {
    pub fn new(d: usize, n: usize, leading: Leading) -> Result<Self> {
        let k = parameter_count(d)?;
        if n < 2 {
            return Err(Error::UnsupportedSize { n, reason: "orbit families need n >= 2".into() });
        }
        let a = |i| ParamPolynomial::var(k, i);
        let mut expr = PExpr::new();
        let lead = match leading {
            Leading::Power => a(0).pow(d),
            Leading::Free => a(0),
        };
        add_into(&mut expr, vec![1; d], lead);
        orbit_sum(n, d, &a(1), &a(2), false, &mut expr);
        if d >= 4 {
            orbit_sum(n, d, &a(3), &a(4), true, &mut expr);
        }
        if d == 5 {
            orbit_sum(n, d, &a(5), &a(6), false, &mut expr);
        }
        let parts = partitions(d);
        let coordinates =
            parts.iter().map(|lambda| expr.get(lambda).cloned().unwrap_or_else(|| ParamPolynomial::zero(k))).collect();
        Ok(OrbitMap { degree: d, n, leading, partitions: parts, coordinates })
    }

    pub fn parameter_count(&self) -> usize {
        parameter_count(self.degree).expect("validated degree")
    }

    pub fn evaluate(&self, params: &[Rational]) -> Result<PowerSumCoordinates> {
        if params.len() != self.parameter_count() {
            return Err(Error::Parse(format!(
                "degree {} needs {} parameters, got {}",
                self.degree,
                self.parameter_count(),
                params.len()
            )));
        }
        Ok(PowerSumCoordinates {
            degree: self.degree,
            partitions: self.partitions.clone(),
            coefficients: self.coordinates.iter().map(|c| c.evaluate(params)).collect(),
        })
    }

    /// `J[i][j] = ∂F_j / ∂α_i` evaluated at `params`.
    pub fn jacobian(&self, params: &[Rational]) -> Matrix {
        let k = self.parameter_count();
        Matrix::from_fn(k, self.coordinates.len(), |i, j| self.coordinates[j].partial(i).evaluate(params))
    }
}

/// Exact `p_λ` coordinates of the family (with `α_0^d h_1^d`) at `params`.
pub fn orbit_map_coordinates(d: usize, n: usize, params: &[Rational]) -> Result<PowerSumCoordinates> {
    OrbitMap::new(d, n, Leading::Power)?.evaluate(params)
}

/// The individual powers of the family, with `c_0 = α_0^d` or free.
pub fn orbit_terms(d: usize, n: usize, params: &[Rational], leading: Leading) -> Result<Vec<PowerSumTerm>> {
    let k = parameter_count(d)?;
    if params.len() != k {
        return Err(Error::Parse(format!("degree {d} needs {k} parameters, got {}", params.len())));
    }
    let ones = vec![Rational::one(); n];
    let mut terms = match leading {
        Leading::Power => vec![PowerSumTerm::rational(Rational::one(), &vec![params[0].clone(); n], d)],
        Leading::Free => vec![PowerSumTerm::rational(params[0].clone(), &ones, d)],
    };
    let single = |a: &Rational, b: &Rational, terms: &mut Vec<PowerSumTerm>| {
        for i in 0..n {
            let mut lin = vec![a.clone(); n];
            lin[i] += b;
            terms.push(PowerSumTerm::rational(Rational::one(), &lin, d));
        }
    };
    single(&params[1], &params[2], &mut terms);
    if d >= 4 {
        for i in 0..n {
            for j in i + 1..n {
                let mut lin = vec![params[3].clone(); n];
                lin[i] += &params[4];
                lin[j] += &params[4];
                terms.push(PowerSumTerm::rational(Rational::one(), &lin, d));
            }
        }
    }
    if d == 5 {
        single(&params[5], &params[6], &mut terms);
    }
    Ok(terms)
}

/// Expands every power with the polynomial kernel and converts the sum to
/// the `p_λ` basis.
pub fn orbit_map_by_expansion(d: usize, n: usize, params: &[Rational]) -> Result<PowerSumCoordinates> {
    let terms = orbit_terms(d, n, params, Leading::Power)?;
    let mut f = DualPolynomial::zero(n);
    for t in &terms {
        let lin: Vec<Rational> = t.linear.iter().map(|c| c.as_rational().expect("rational").clone()).collect();
        f = &f + &expand_linear_power(&DualPolynomial::linear(&lin), d).expect("linear");
    }
    if f.is_zero() {
        return crate::symmetric::power_sum_coordinates_of_degree(&f, d);
    }
    to_power_sum_basis(&f)
}

fn pw(x: &Rational, k: usize) -> Rational {
    num_traits::pow(x.clone(), k)
}

/// Hand-expanded coordinates of the three families, in partition order.
pub fn closed_form_coordinates(d: usize, n: usize, a: &[Rational]) -> Result<Vec<Rational>> {
    if a.len() != parameter_count(d)? {
        return Err(Error::Parse(format!("degree {d} needs {} parameters", parameter_count(d)?)));
    }
    let nn = int(n as i64);
    let c = |v: i64| int(v);
    let cn2 = Rational::from_integer(binomial(n as i64, 2));
    Ok(match d {
        3 => vec![
            pw(&a[2], 3),
            c(3) * &a[1] * pw(&a[2], 2),
            pw(&a[0], 3) + &nn * pw(&a[1], 3) + c(3) * pw(&a[1], 2) * &a[2],
        ],
        4 => vec![
            pw(&a[2], 4) + (&nn - c(8)) * pw(&a[4], 4),
            c(4) * &a[1] * pw(&a[2], 3) + c(4) * (&nn - c(4)) * &a[3] * pw(&a[4], 3) + c(4) * pw(&a[4], 4),
            c(3) * pw(&a[4], 4),
            c(6) * pw(&a[1], 2) * pw(&a[2], 2)
                + c(6) * (&nn - c(2)) * pw(&a[3], 2) * pw(&a[4], 2)
                + c(12) * &a[3] * pw(&a[4], 3),
            pw(&a[0], 4)
                + &nn * pw(&a[1], 4)
                + c(4) * pw(&a[1], 3) * &a[2]
                + &cn2 * pw(&a[3], 4)
                + c(4) * (&nn - c(1)) * pw(&a[3], 3) * &a[4]
                + c(6) * pw(&a[3], 2) * pw(&a[4], 2),
        ],
        5 => vec![
            pw(&a[2], 5) + (&nn - c(16)) * pw(&a[4], 5) + pw(&a[6], 5),
            c(5) * &a[1] * pw(&a[2], 4)
                + c(5) * (&nn - c(8)) * &a[3] * pw(&a[4], 4)
                + c(5) * pw(&a[4], 5)
                + c(5) * &a[5] * pw(&a[6], 4),
            c(10) * pw(&a[4], 5),
            c(10) * pw(&a[1], 2) * pw(&a[2], 3)
                + c(10) * (&nn - c(4)) * pw(&a[3], 2) * pw(&a[4], 3)
                + c(20) * &a[3] * pw(&a[4], 4)
                + c(10) * pw(&a[5], 2) * pw(&a[6], 3),
            c(15) * &a[3] * pw(&a[4], 4),
            c(10) * pw(&a[1], 3) * pw(&a[2], 2)
                + c(10) * (&nn - c(2)) * pw(&a[3], 3) * pw(&a[4], 2)
                + c(30) * pw(&a[3], 2) * pw(&a[4], 3)
                + c(10) * pw(&a[5], 3) * pw(&a[6], 2),
            pw(&a[0], 5)
                + &nn * pw(&a[1], 5)
                + c(5) * pw(&a[1], 4) * &a[2]
                + c(5) * (&nn - c(1)) * pw(&a[3], 4) * &a[4]
                + c(10) * pw(&a[3], 3) * pw(&a[4], 2)
                + &nn * pw(&a[5], 5)
                + c(5) * pw(&a[5], 4) * &a[6]
                + &cn2 * pw(&a[3], 5),
        ],
        _ => return Err(Error::DegreeOutOfRange(d)),
    })
}

/// Closed form of the Jacobian determinant of the degree-`d` family.
pub fn jacobian_closed_form(d: usize, n: usize, a: &[Rational]) -> Result<Rational> {
    if a.len() != parameter_count(d)? {
        return Err(Error::Parse(format!("degree {d} needs {} parameters", parameter_count(d)?)));
    }
    let nn = int(n as i64);
    Ok(match d {
        3 => int(27) * pw(&a[0], 2) * pw(&a[2], 4),
        4 => {
            int(1024 * 9)
                * pw(&a[0], 3)
                * pw(&a[2], 5)
                * pw(&a[4], 5)
                * ((&nn - int(2)) * &a[2] * &a[3] - (&nn - int(4)) * &a[1] * &a[4] + &a[2] * &a[4])
        }
        5 => {
            int(8 * 3)
                * Rational::from_integer(num_traits::pow(BigInt::from(5), 9))
                * pw(&a[0], 4)
                * pw(&a[2], 4)
                * pw(&a[4], 8)
                * pw(&a[6], 4)
                * pw(&(&a[1] * &a[6] - &a[2] * &a[5]), 4)
        }
        _ => return Err(Error::DegreeOutOfRange(d)),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JacobianCheck {
    pub degree: usize,
    pub n: usize,
    #[serde(with = "crate::scalar::rational_vec")]
    pub params: Vec<Rational>,
    pub matrix: Matrix,
    #[serde(with = "crate::scalar::rational_str")]
    pub determinant: Rational,
    #[serde(with = "crate::scalar::rational_str")]
    pub closed_form: Rational,
    pub equal: bool,
    /// `det = −closed form`.
    pub equal_up_to_sign: bool,
}

/// Exact determinant of `(∂F_j/∂α_i)` against the closed form.
pub fn jacobian_det_check(d: usize, n: usize, params: &[Rational]) -> Result<JacobianCheck> {
    let map = OrbitMap::new(d, n, Leading::Power)?;
    if params.len() != map.parameter_count() {
        return Err(Error::Parse(format!("degree {d} needs {} parameters", map.parameter_count())));
    }
    let matrix = map.jacobian(params);
    let determinant = matrix.det();
    let closed_form = jacobian_closed_form(d, n, params)?;
    let equal = determinant == closed_form;
    let equal_up_to_sign = equal || determinant == -closed_form.clone();
    Ok(JacobianCheck {
        degree: d,
        n,
        params: params.to_vec(),
        matrix,
        determinant,
        closed_form,
        equal,
        equal_up_to_sign,
    })
}

/// `(p(d), p(d) − 1)`: affine and projective dimension of symmetric forms
/// of degree `d` in at least `d` variables.
pub fn symmetric_dimension(d: usize) -> Result<(usize, usize)> {
    if d == 0 {
        return Err(Error::DegreeOutOfRange(d));
    }
    let p = partitions(d).len();
    Ok((p, p - 1))
}

/// `⌈C(n+3, 4) / n⌉`, the expected generic rank of quartics in `n` variables.
pub fn quartic_expected_rank(n: usize) -> usize {
    let total = binomial(n as i64 + 3, 4);
    let (q, r) = total.div_rem(&BigInt::from(n));
    let q: usize = q.try_into().expect("small");
    if r.is_zero() {
        q
    } else {
        q + 1
    }
}

/// Numeric value as `[re, im]`.
pub type ComplexPair = [f64; 2];

fn pair(z: &Cfx) -> ComplexPair {
    let c = z.to_complex();
    [c.re, c.im]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct H4Solution {
    pub n: usize,
    /// `α_1, α_2, α_3, α_4`.
    pub alphas: Vec<ComplexPair>,
    pub c0: ComplexPair,
    pub newton_steps: usize,
    pub converged: bool,
    /// Largest deviation of the `p_λ` coordinates from those of `24 h_{n,4}`.
    pub coordinate_residual: f64,
    /// Largest deviation of the expanded monomial coefficients.
    pub monomial_residual: f64,
    pub residual: f64,
    /// Exact check at `n = 13` with `(c_0, α) = (−16, 1, 1, 0, 1)`.
    pub exact_identity: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct H4Report {
    pub n: usize,
    pub tolerance: f64,
    pub precision_bits: usize,
    /// `α_2^4 = 14 − n` forces `α_2 = 0`.
    pub alpha2_degenerate: bool,
    pub note: Option<String>,
    pub solution: Option<H4Solution>,
    pub orbit_terms: usize,
    pub expected_quartic_rank: usize,
    pub ok: bool,
}

/// `24 h_{n,4} = 6p_4 + 8p_3p_1 + 3p_2^2 + 6p_2p_1^2 + p_1^4`.
fn h4_target() -> Vec<Rational> {
    [6, 8, 3, 6, 1].into_iter().map(int).collect()
}

fn eval_cfx(p: &ParamPolynomial, x: &[Cfx]) -> Cfx {
    let mut total = Cfx::zero();
    for (m, c) in p.terms() {
        let mut t = Cfx::from_rational(c);
        for (xi, &e) in x.iter().zip(m.exponents()) {
            if e > 0 {
                t = &t * &xi.pow(e as usize);
            }
        }
        total = &total + &t;
    }
    total
}

/// Seeds `(α_1, α_2, α_3, α_4)` from the elimination quadratic
/// `(8n−12) α_3^2 + (36−4n) α_3 + (n−13) = 0` with `α_4 = 1`,
/// `α_2^4 = 14 − n`.
fn h4_seeds(n: usize) -> Vec<[Complex64; 4]> {
    let nf = n as f64;
    let (qa, qb, qc) = (8.0 * nf - 12.0, 36.0 - 4.0 * nf, nf - 13.0);
    let disc = Complex64::new(qb * qb - 4.0 * qa * qc, 0.0).sqrt();
    let mut roots = [(-qb + disc) / (2.0 * qa), (-qb - disc) / (2.0 * qa)];
    roots.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
    let base = Complex64::new(14.0 - nf, 0.0).powf(0.25);
    let mut out = Vec::new();
    for k in 0..4 {
        let a2 = base * Complex64::i().powi(k);
        for &a3 in &roots {
            let a1 = (Complex64::new(1.0, 0.0) - (nf - 4.0) * a3) / a2.powi(3);
            out.push([a1, a2, a3, Complex64::new(1.0, 0.0)]);
        }
    }
    out
}

fn newton(map: &OrbitMap, target: &[Cfx], seed: [Complex64; 4]) -> (Vec<Cfx>, usize, bool) {
    // Unknowns are α_1..α_4; c_0 (slot 0) only enters the last coordinate.
    let eqs: Vec<&ParamPolynomial> = map.coordinates[..4].iter().collect();
    let partials: Vec<Vec<ParamPolynomial>> = eqs.iter().map(|e| (1..5).map(|v| e.partial(v)).collect()).collect();
    let mut x: Vec<Cfx> = seed.iter().map(|z| Cfx::from_complex(*z)).collect();
    let tiny = num_bigint::BigInt::from(1) << (fixed::BITS - 150);
    for step in 1..=80 {
        let mut full = vec![Cfx::zero()];
        full.extend(x.iter().cloned());
        let g: Vec<Cfx> = eqs.iter().zip(target).map(|(e, t)| &eval_cfx(e, &full) - t).collect();
        let j: Vec<Vec<Cfx>> = partials.iter().map(|row| row.iter().map(|p| eval_cfx(p, &full)).collect()).collect();
        let Some(delta) = fixed::solve(j, g) else {
            return (x, step, false);
        };
        let size = delta.iter().map(Cfx::magnitude_raw).max().unwrap_or_default();
        x = x.iter().zip(&delta).map(|(a, b)| a - b).collect();
        if size < tiny {
            return (x, step, true);
        }
    }
    (x, 80, false)
}

/// Complex expansion of the family in monomials, against `24 h_{n,4}`.
fn monomial_residual(n: usize, c0: Complex64, a: &[Complex64]) -> f64 {
    type C = Polynomial<Complex64, Dual>;
    let one = Complex64::new(1.0, 0.0);
    let power = |lin: &[Complex64]| expand_linear_power(&C::linear(lin), 4).expect("linear");
    let mut f = power(&vec![one; n]).scale(&c0);
    for i in 0..n {
        let mut lin = vec![a[0]; n];
        lin[i] += a[1];
        f = &f + &power(&lin);
    }
    for i in 0..n {
        for j in i + 1..n {
            let mut lin = vec![a[2]; n];
            lin[i] += a[3];
            lin[j] += a[3];
            f = &f + &power(&lin);
        }
    }
    let h: C =
        DualPolynomial::complete_symmetric(n, 4).map_coeffs(|c| Complex64::new(24.0 * crate::scalar::to_f64(c), 0.0));
    (&f - &h).max_magnitude()
}

/// Exact identity `24 h_{13,4} = −16 h_1^4 + Σ (h_1 + X_i)^4 + Σ (X_i + X_j)^4`.
pub fn h4_identity_13() -> Result<bool> {
    let params: Vec<Rational> = [-16, 1, 1, 0, 1].into_iter().map(int).collect();
    let coords = OrbitMap::new(4, 13, Leading::Free)?.evaluate(&params)?;
    Ok(coords.coefficients == h4_target())
}

/// Solves the preimage system of `24 h_{n,4}` under the quartic family with
/// a free `h_1^4` coefficient.
pub fn solve_h4_preimage(n: usize, tol: f64) -> Result<H4Report> {
    if n < 3 {
        return Err(Error::UnsupportedSize { n, reason: "needs n >= 3".into() });
    }
    let orbit_terms = orbit_term_count(4, n)?;
    let expected_quartic_rank = quartic_expected_rank(n);
    let mut report = H4Report {
        n,
        tolerance: tol,
        precision_bits: fixed::BITS,
        alpha2_degenerate: false,
        note: None,
        solution: None,
        orbit_terms,
        expected_quartic_rank,
        ok: false,
    };
    if n == 14 {
        report.alpha2_degenerate = true;
        report.note = Some(
            "alpha_2^4 = 14 - n forces alpha_2 = 0; then alpha_3 = 1/10 and the p2p1^2 equation reads 9/5 = 6, so no preimage"
                .into(),
        );
        report.ok = true;
        return Ok(report);
    }
    let map = OrbitMap::new(4, n, Leading::Free)?;
    let target: Vec<Cfx> = h4_target().iter().map(Cfx::from_rational).collect();
    let mut best: Option<H4Solution> = None;
    for seed in h4_seeds(n) {
        if seed.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            continue;
        }
        let (x, steps, converged) = newton(&map, &target, seed);
        let mut full = vec![Cfx::zero()];
        full.extend(x.iter().cloned());
        // c_0 from the p_1^4 equation.
        let rest = eval_cfx(&map.coordinates[4], &full);
        let c0 = &target[4] - &rest;
        full[0] = c0.clone();
        let coordinate_residual =
            map.coordinates.iter().zip(&target).map(|(c, t)| (&eval_cfx(c, &full) - t).abs()).fold(0.0, f64::max);
        let alphas: Vec<Complex64> = x.iter().map(Cfx::to_complex).collect();
        let monomial_residual = monomial_residual(n, c0.to_complex(), &alphas);
        let residual = coordinate_residual.max(monomial_residual);
        let candidate = H4Solution {
            n,
            alphas: x.iter().map(pair).collect(),
            c0: pair(&c0),
            newton_steps: steps,
            converged,
            coordinate_residual,
            monomial_residual,
            residual,
            exact_identity: None,
        };
        let better =
            best.as_ref().is_none_or(|b| !(b.converged && b.residual < tol) && candidate.residual < b.residual);
        if better {
            best = Some(candidate);
        }
        if best.as_ref().is_some_and(|b| b.converged && b.residual < tol) {
            break;
        }
    }
    if let Some(sol) = best.as_mut() {
        if n == 13 {
            sol.exact_identity = Some(h4_identity_13()?);
        }
        report.ok = sol.converged && sol.residual < tol && sol.exact_identity != Some(false);
    }
    if !report.ok {
        report.note = Some("Newton iteration did not reach the residual tolerance".into());
    }
    report.solution = best;
    Ok(report)
}

/// `p_λ` products in `n` variables for the degree-`d` basis, in order.
pub fn basis_forms(d: usize, n: usize) -> Vec<DualPolynomial> {
    partitions(d).iter().map(|l| power_sum_product(n, l)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().copied().map(int).collect()
    }

    #[test]
    fn cubic_examples() {
        // α = 1, β = 0 in the cubic family means (α_0, α_1, α_2) = (0, 0, 1).
        let c = orbit_map_coordinates(3, 5, &ints(&[0, 0, 1])).unwrap();
        assert_eq!(c.coefficients, ints(&[1, 0, 0]));
        let c = orbit_map_coordinates(3, 4, &ints(&[1, 2, 3])).unwrap();
        assert_eq!(c.coefficients, ints(&[27, 54, 1 + 32 + 36]));
    }

    #[test]
    fn displayed_coefficients() {
        let c = orbit_map_coordinates(4, 6, &ints(&[0, 0, 0, 0, 1])).unwrap();
        assert_eq!(c.coefficient(&[2, 2]), Some(&int(3)));
        let c = orbit_map_coordinates(5, 6, &ints(&[0, 0, 0, 0, 1, 0, 0])).unwrap();
        assert_eq!(c.coefficient(&[3, 2]), Some(&int(10)));
        assert_eq!(c.coefficient(&[5]), Some(&int(6 - 16)));
    }

    #[test]
    fn symbolic_matches_expansion_and_closed_form() {
        let params = [
            ints(&[1, 2, 3, -1, 2, 1, -2]),
            vec![rat(1, 2), rat(-2, 3), int(1), rat(3, 5), rat(-1, 4), int(2), rat(1, 7)],
        ];
        for d in 3..=5 {
            for n in d..=6 {
                for p in &params {
                    let p = &p[..parameter_count(d).unwrap()];
                    let sym = orbit_map_coordinates(d, n, p).unwrap();
                    assert_eq!(sym, orbit_map_by_expansion(d, n, p).unwrap(), "d={d} n={n}");
                    assert_eq!(sym.coefficients, closed_form_coordinates(d, n, p).unwrap(), "d={d} n={n}");
                }
            }
        }
    }

    #[test]
    fn jacobian_examples() {
        let r = jacobian_det_check(3, 4, &ints(&[1, 1, 1])).unwrap();
        assert_eq!(r.closed_form, int(27));
        assert_eq!(r.determinant, int(-27));
        assert!(r.equal_up_to_sign && !r.equal);
        let r = jacobian_det_check(4, 5, &ints(&[1, 1, 1, 1, 1])).unwrap();
        assert!(r.equal);
        assert_eq!(r.determinant, int(1024 * 9 * (3 - 1 + 1)));
        let r = jacobian_det_check(5, 6, &ints(&[1, 2, 4, 1, 1, 1, 2])).unwrap();
        assert_eq!(r.determinant, int(0));
        assert!(r.equal);
        let r = jacobian_det_check(5, 7, &ints(&[1, 2, 1, 1, 1, 3, 2])).unwrap();
        assert!(r.equal && !r.determinant.is_zero());
    }

    #[test]
    fn dimensions() {
        assert_eq!(symmetric_dimension(6).unwrap(), (11, 10));
        assert_eq!(symmetric_dimension(3).unwrap(), (3, 2));
        assert_eq!(symmetric_dimension(1).unwrap(), (1, 0));
        assert!(symmetric_dimension(0).is_err());
        assert_eq!(quartic_expected_rank(14), 170);
    }

    #[test]
    fn term_counts() {
        for n in 3..=9 {
            assert_eq!(
                orbit_term_count(4, n).unwrap() as i64,
                i64::try_from(binomial(n as i64 + 2, 2)).unwrap() - n as i64
            );
            assert_eq!(orbit_term_count(5, n).unwrap() as i64, i64::try_from(binomial(n as i64 + 2, 2)).unwrap());
            assert_eq!(
                orbit_terms(5, n, &ints(&[1; 7]), Leading::Power).unwrap().len(),
                orbit_term_count(5, n).unwrap()
            );
        }
    }

    #[test]
    fn h4_thirteen_is_exact() {
        assert!(h4_identity_13().unwrap());
        let r = solve_h4_preimage(13, 1e-9).unwrap();
        let s = r.solution.unwrap();
        assert!(r.ok && s.residual < 1e-9);
        assert_eq!(s.exact_identity, Some(true));
        assert!((s.c0[0] + 16.0).abs() < 1e-9);
    }

    #[test]
    fn h4_small_and_degenerate() {
        let r = solve_h4_preimage(6, 1e-9).unwrap();
        assert!(r.ok, "{r:?}");
        let s = r.solution.unwrap();
        assert!(s.alphas[3][0].abs() > 0.5);
        let r = solve_h4_preimage(14, 1e-9).unwrap();
        assert!(r.alpha2_degenerate && r.solution.is_none());
        assert!(solve_h4_preimage(2, 1e-9).is_err());
    }
}

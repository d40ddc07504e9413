//! The forms `F_a = ∏ (X_i − X_n)^{a_i}`, the spaces `M_d = Φ⁻¹(span F_a)`,
//! the annihilator of `h_{n,e}` and its power-sum decompositions.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::apolarity::{ann_graded_basis, contains_in_annihilator, hilbert_function};
use crate::certificate::{PowerSumCertificate, PowerSumTerm};
use crate::error::{Error, Result};
use crate::inverse::InverseSystem;
use crate::linalg::{EchelonSpan, Matrix};
use crate::poly::{
    contract, expand_linear_power, monomial_basis, pairing, phi_inverse, DualPolynomial, Monomial, PrimalPolynomial,
};
use crate::scalar::{binomial, factorial, int, Rational};

/// `F_a = (X_1 − X_n)^{a_1} ⋯ (X_{n−1} − X_n)^{a_{n−1}}` with `n = len(a) + 1`.
pub fn build_fa_dual(a: &[usize]) -> DualPolynomial {
    let n = a.len() + 1;
    a.iter().enumerate().fold(DualPolynomial::one(n), |acc, (i, &ai)| {
        let diff = &DualPolynomial::var(n, i) - &DualPolynomial::var(n, n - 1);
        &acc * &diff.pow(ai)
    })
}

/// `f_a = Φ⁻¹(F_a)`.
pub fn build_fa(a: &[usize]) -> PrimalPolynomial {
    phi_inverse(&build_fa_dual(a))
}

/// All reduced tuples `a ∈ N^{n−1}` with `|a| = d`, graded-lex descending.
pub fn reduced_tuples(n: usize, d: usize) -> Vec<Vec<usize>> {
    if n < 2 {
        return Vec::new();
    }
    monomial_basis(n - 1, d).monomials().iter().map(|m| m.exponents().iter().map(|&e| e as usize).collect()).collect()
}

/// Basis `{f_a : |a| = d}` of `M_d`.
pub fn m_space_basis(n: usize, d: usize) -> Vec<PrimalPolynomial> {
    reduced_tuples(n, d).iter().map(|a| build_fa(a)).collect()
}

/// `ℓ = x_1 + ... + x_n`.
pub fn ell(n: usize) -> PrimalPolynomial {
    PrimalPolynomial::linear(&vec![Rational::one(); n])
}

/// `G_{m,a} = Σ_{|i|=m} ∏_{k<n} C(a_k+i_k, i_k) · C(|a|+i_n, i_n) X^i`.
pub fn g_form(a: &[usize], m: usize) -> DualPolynomial {
    let n = a.len() + 1;
    let total: usize = a.iter().sum();
    DualPolynomial::from_terms(
        n,
        monomial_basis(n, m).monomials().iter().map(|mono| {
            let e = mono.exponents();
            let mut c = binomial((total + e[n - 1] as usize) as i64, e[n - 1] as i64);
            for k in 0..n - 1 {
                c *= binomial((a[k] + e[k] as usize) as i64, e[k] as i64);
            }
            (mono.clone(), Rational::from_integer(c))
        }),
    )
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FaContraction {
    pub a: Vec<usize>,
    pub h_degree: usize,
    pub value: DualPolynomial,
    pub expected: DualPolynomial,
    pub matches: bool,
}

/// `f_a ∘ h_{n,i}` against its closed form: `0` for `i < 2|a|`, `F_a` for
/// `i = 2|a|`, `F_a · G_{i−2|a|, a}` beyond.
pub fn fa_contract_h(a: &[usize], i: usize) -> FaContraction {
    let n = a.len() + 1;
    let d: usize = a.iter().sum();
    let value = contract(&build_fa(a), &DualPolynomial::complete_symmetric(n, i));
    let expected = if i < 2 * d {
        DualPolynomial::zero(n)
    } else if i == 2 * d {
        build_fa_dual(a)
    } else {
        &build_fa_dual(a) * &g_form(a, i - 2 * d)
    };
    let matches = value == expected;
    FaContraction { a: a.to_vec(), h_degree: i, value, expected, matches }
}

/// `f_a ∘ F_b = ∏ C(a_i + b_i, a_i)` for `|a| = |b|`.
pub fn fa_fb_closed_form(a: &[usize], b: &[usize]) -> Rational {
    Rational::from_integer(a.iter().zip(b).map(|(&x, &y)| binomial((x + y) as i64, x as i64)).product())
}

/// Basis `ℓ^i · f_a`, `|a| = d − i`, of `ℓ^i M_{d−i}`.
pub fn ell_power_basis(n: usize, i: usize, d: usize) -> Vec<PrimalPolynomial> {
    let li = ell(n).pow(i);
    m_space_basis(n, d - i).iter().map(|f| &li * f).collect()
}

/// Gram matrix of `⟨f, g⟩ = (fg) ∘ h_{n,2d}` on `ℓ^i M_{d−i} × ℓ^j M_{d−j}`.
pub fn pairing_gram(n: usize, i: usize, j: usize, d: usize) -> Result<Matrix> {
    if n < 2 {
        return Err(Error::UnsupportedSize { n, reason: "M_d needs n >= 2".into() });
    }
    if i > d || j > d {
        return Err(Error::DegreeOutOfRange(i.max(j)));
    }
    let h = DualPolynomial::complete_symmetric(n, 2 * d);
    let rows = ell_power_basis(n, i, d);
    let cols = ell_power_basis(n, j, d);
    Ok(Matrix::from_fn(rows.len(), cols.len(), |r, c| pairing(&(&rows[r] * &cols[c]), &h)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnStructureReport {
    pub n: usize,
    pub e: usize,
    /// `dim [ann h_e]_{d+1}`.
    pub ann_dim: usize,
    pub m_dim: usize,
    /// `dim ℓ M_d` (even) or `dim ℓ² M_d` (odd) as spanned inside `S_{d+1}`
    /// resp. `S_{d+2}`.
    pub ell_part_dim: usize,
    /// `C(n+d−1, n−2) + C(n+d−2, n−2)` for even `e`, `C(n+d−1, n−2)` for odd.
    pub expected_generators: usize,
    pub generators_annihilate: bool,
    /// Even: `M_{d+1} ∩ ℓ M_d = 0`. Odd: always true.
    pub direct_sum: bool,
    /// Even: the sum spans `[ann]_{d+1}`. Odd: `M_{d+1}` spans it.
    pub span_equal: bool,
    /// Odd only: Hilbert functions of `S/(M_{d+1} + ℓ² M_d)` and `S/ann h_e`
    /// through degree `2d+2`.
    pub ideal_hilbert: Option<Vec<usize>>,
    pub ann_hilbert: Vec<usize>,
    pub ok: bool,
}

fn span_of(polys: &[PrimalPolynomial], degree: usize, span: &mut EchelonSpan) {
    for p in polys {
        span.insert_rational(&p.coefficient_vector(degree));
    }
}

/// Checks `ann(h_{2d}) = (M_{d+1} ⊕ ℓ M_d)` or `ann(h_{2d+1}) = (M_{d+1} + ℓ² M_d)`.
pub fn ann_structure_check(n: usize, e: usize) -> Result<AnnStructureReport> {
    if n < 2 {
        return Err(Error::UnsupportedSize { n, reason: "M_d needs n >= 2".into() });
    }
    if e < 2 {
        return Err(Error::DegreeOutOfRange(e));
    }
    let d = e / 2;
    let h = DualPolynomial::complete_symmetric(n, e);
    let ann = ann_graded_basis(&h, d + 1)?;
    let m_next = m_space_basis(n, d + 1);
    let dim_s = monomial_basis(n, d + 1).len();
    let binom = |top: usize| binomial(top as i64, n as i64 - 2).try_into().unwrap_or(usize::MAX);

    let mut m_span = EchelonSpan::new(dim_s);
    span_of(&m_next, d + 1, &mut m_span);
    let mut ann_span = EchelonSpan::new(dim_s);
    span_of(&ann.basis, d + 1, &mut ann_span);
    let ann_hilbert = hilbert_function(&h)?.0;

    if e % 2 == 0 {
        let lm: Vec<PrimalPolynomial> = m_space_basis(n, d).iter().map(|f| &ell(n) * f).collect();
        let mut lm_span = EchelonSpan::new(dim_s);
        span_of(&lm, d + 1, &mut lm_span);
        let mut sum = m_span.clone();
        span_of(&lm, d + 1, &mut sum);
        let expected_generators = binom(n + d - 1) + binom(n + d - 2);
        let gens: Vec<PrimalPolynomial> = m_next.iter().chain(&lm).cloned().collect();
        let generators_annihilate = contains_in_annihilator(&gens, &h);
        let direct_sum = sum.rank() == m_span.rank() + lm_span.rank();
        let span_equal = sum == ann_span;
        let ok = generators_annihilate
            && direct_sum
            && span_equal
            && sum.rank() == expected_generators
            && ann.dim() == expected_generators;
        Ok(AnnStructureReport {
            n,
            e,
            ann_dim: ann.dim(),
            m_dim: m_span.rank(),
            ell_part_dim: lm_span.rank(),
            expected_generators,
            generators_annihilate,
            direct_sum,
            span_equal,
            ideal_hilbert: None,
            ann_hilbert,
            ok,
        })
    } else {
        let l2 = ell(n).pow(2);
        let l2m: Vec<PrimalPolynomial> = m_space_basis(n, d).iter().map(|f| &l2 * f).collect();
        let mut l2m_span = EchelonSpan::new(monomial_basis(n, d + 2).len());
        span_of(&l2m, d + 2, &mut l2m_span);
        let expected_generators = binom(n + d - 1);
        let gens: Vec<PrimalPolynomial> = m_next.iter().chain(&l2m).cloned().collect();
        let generators_annihilate = contains_in_annihilator(&gens, &h);
        let span_equal = m_span == ann_span;
        let ideal = InverseSystem::of_ideal_through(n, &gens, 2 * d + 2)?;
        let mut ideal_hilbert = ideal.hilbert_function();
        ideal_hilbert.resize(2 * d + 3, 0);
        let mut padded = ann_hilbert.clone();
        padded.resize(2 * d + 3, 0);
        let ok = generators_annihilate && span_equal && m_span.rank() == expected_generators && ideal_hilbert == padded;
        Ok(AnnStructureReport {
            n,
            e,
            ann_dim: ann.dim(),
            m_dim: m_span.rank(),
            ell_part_dim: l2m_span.rank(),
            expected_generators,
            generators_annihilate,
            direct_sum: true,
            span_equal,
            ideal_hilbert: Some(ideal_hilbert),
            ann_hilbert,
            ok,
        })
    }
}

/// Multisets `1 <= i_1 <= ... <= i_k <= n` (0-based), lexicographic.
pub fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, start: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == k {
            out.push(prefix.clone());
            return;
        }
        for i in start..n {
            prefix.push(i);
            rec(n, k, i, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, 0, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Coefficients of `h_1 + 2(X_{i_1} + ... + X_{i_k})`.
fn orbit_linear(n: usize, multiset: &[usize]) -> Vec<Rational> {
    let mut c = vec![Rational::one(); n];
    for &i in multiset {
        c[i] += int(2);
    }
    c
}

fn binom_rat(top: i64, k: i64) -> Rational {
    Rational::from_integer(binomial(top, k))
}

fn sign(k: usize) -> Rational {
    if k % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Unnormalized weight of the `k`-th orbit sum for `h_{n,e}`.
fn orbit_weight(n: usize, e: usize, k: usize) -> Rational {
    let d = e / 2;
    let (n, d2, dk) = (n as i64, d as i64, (d - k) as i64);
    let w = if e % 2 == 1 {
        binom_rat(n + 2 * d2, dk)
    } else {
        binom_rat(n + 2 * d2 - 1, dk) - binom_rat(n + 2 * d2 - 1, dk - 1)
    };
    sign(d - k) * w
}

/// `2^{2d} e!` with `d = ⌊e/2⌋`.
fn normalizer(e: usize) -> Rational {
    Rational::from_integer(num_bigint::BigInt::from(4).pow((e / 2) as u32) * factorial(e))
}

/// Power-sum decomposition of `h_{n,e}` by orbit sums of
/// `(h_1 + 2 Σ_j X_{i_j})^e` over multisets of size `k = 0..⌊e/2⌋`.
pub fn decompose_h(n: usize, e: usize) -> Result<PowerSumCertificate> {
    if n == 0 || e == 0 {
        return Err(Error::DegreeOutOfRange(e));
    }
    let norm = normalizer(e);
    let mut terms = Vec::new();
    for k in 0..=e / 2 {
        let coef = orbit_weight(n, e, k) / &norm;
        if coef.is_zero() {
            continue;
        }
        for ms in multisets(n, k) {
            terms.push(PowerSumTerm::rational(coef.clone(), &orbit_linear(n, &ms), e));
        }
    }
    Ok(PowerSumCertificate::new(DualPolynomial::complete_symmetric(n, e), terms))
}

/// `S_{n,k,j} = Σ_{multisets of size k} (h_1 + 2 Σ X_{i})^j`.
pub fn orbit_power_sum(n: usize, k: usize, j: usize) -> DualPolynomial {
    multisets(n, k).iter().fold(DualPolynomial::zero(n), |acc, ms| {
        let l = DualPolynomial::linear(&orbit_linear(n, ms));
        &acc + &expand_linear_power(&l, j).expect("linear form")
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AbmSum {
    pub n: usize,
    pub d: usize,
    pub m: usize,
    /// `A_{n,d,m} = Σ_k (−1)^{d−k} C(n+2d, d−k) S_{n,k,2m+1}`.
    pub a: DualPolynomial,
    /// `B_{n,d,m}`, the even analogue built from `S_{n,k,2m}`.
    pub b: DualPolynomial,
    pub a_expected: DualPolynomial,
    pub b_expected: DualPolynomial,
}

impl AbmSum {
    pub fn holds(&self) -> bool {
        self.a == self.a_expected && self.b == self.b_expected
    }
}

/// Evaluates `A_{n,d,m}` and `B_{n,d,m}` by direct expansion next to their
/// closed values (`0` for `m < d`, `2^{2d}(2d+1)! h_{2d+1}` resp.
/// `2^{2d}(2d)! h_{2d}` for `m = d`).
pub fn abm_sum(n: usize, d: usize, m: usize) -> Result<AbmSum> {
    if m > d {
        return Err(Error::DegreeOutOfRange(m));
    }
    let mut a = DualPolynomial::zero(n);
    let mut b = DualPolynomial::zero(n);
    for k in 0..=d {
        a = &a + &orbit_power_sum(n, k, 2 * m + 1).scale(&orbit_weight(n, 2 * d + 1, k));
        b = &b + &orbit_power_sum(n, k, 2 * m).scale(&orbit_weight(n, 2 * d, k));
    }
    let (a_expected, b_expected) = if m < d {
        (DualPolynomial::zero(n), DualPolynomial::zero(n))
    } else {
        (
            DualPolynomial::complete_symmetric(n, 2 * d + 1).scale(&normalizer(2 * d + 1)),
            DualPolynomial::complete_symmetric(n, 2 * d).scale(&normalizer(2 * d)),
        )
    };
    Ok(AbmSum { n, d, m, a, b, a_expected, b_expected })
}

/// `h_{13,4} = −(2/3) h_1^4 + (1/24) Σ_i (h_1 + X_i)^4 + (1/24) Σ_{i<j} (X_i + X_j)^4`.
pub fn quartic_identity_13() -> PowerSumCertificate {
    let n = 13;
    let one = Rational::one();
    let mut terms = vec![PowerSumTerm::rational(Rational::new((-2).into(), 3.into()), &vec![one.clone(); n], 4)];
    let w = Rational::new(1.into(), 24.into());
    for i in 0..n {
        let mut c = vec![one.clone(); n];
        c[i] = int(2);
        terms.push(PowerSumTerm::rational(w.clone(), &c, 4));
    }
    for i in 0..n {
        for j in i + 1..n {
            let mut c = vec![Rational::zero(); n];
            c[i] = one.clone();
            c[j] = one.clone();
            terms.push(PowerSumTerm::rational(w.clone(), &c, 4));
        }
    }
    PowerSumCertificate::new(DualPolynomial::complete_symmetric(n, 4), terms)
}

/// `f|_{X_n = 0} = 0` and `ℓ ∘ f = 0`; true exactly for `f = 0`.
pub fn diffrestrict_zero_test(f: &DualPolynomial) -> bool {
    f.restrict_last_to_zero().is_zero() && contract(&ell(f.n()), f).is_zero()
}

/// Exponent tuple helper for tests and reports.
pub fn tuple_monomial(a: &[usize]) -> Monomial {
    Monomial::new(a.iter().map(|&x| x as u16).collect())
}

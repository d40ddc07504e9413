//! Power-sum certificates `F = Σ c_i L_i^{e_i}` with exact verification.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::poly::{expand_linear_power, Dual, DualPolynomial, Polynomial};
use crate::scalar::{format_rational, parse_rational, MinPoly, QuadExt, Rational, Scalar};

/// Scalars print as `"num/den"` when rational and as `{a, b, field}` objects
/// otherwise.
mod scalar_repr {
    use super::*;

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    #[allow(clippy::large_enum_variant)]
    enum Repr {
        Plain(String),
        Ext(QuadExt),
    }

    fn to_repr(q: &QuadExt) -> Repr {
        match q.as_rational() {
            Some(r) => Repr::Plain(format_rational(r)),
            None => Repr::Ext(q.clone()),
        }
    }

    fn from_repr<E: serde::de::Error>(r: Repr) -> Result<QuadExt, E> {
        match r {
            Repr::Plain(s) => parse_rational(&s).map(QuadExt::rational).map_err(E::custom),
            Repr::Ext(q) => Ok(q),
        }
    }

    pub fn serialize<S: Serializer>(q: &QuadExt, s: S) -> Result<S::Ok, S::Error> {
        to_repr(q).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<QuadExt, D::Error> {
        from_repr(Repr::deserialize(d)?)
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(v: &[QuadExt], s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(v.iter().map(to_repr))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<QuadExt>, D::Error> {
            Vec::<Repr>::deserialize(d)?.into_iter().map(from_repr).collect()
        }
    }
}

/// One term `coef · (Σ linear_i X_i)^exp`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerSumTerm {
    #[serde(with = "scalar_repr")]
    pub coef: QuadExt,
    #[serde(with = "scalar_repr::vec")]
    pub linear: Vec<QuadExt>,
    pub exp: usize,
}

impl PowerSumTerm {
    pub fn new(coef: QuadExt, linear: Vec<QuadExt>, exp: usize) -> Self {
        PowerSumTerm { coef, linear, exp }
    }

    pub fn rational(coef: Rational, linear: &[Rational], exp: usize) -> Self {
        PowerSumTerm {
            coef: QuadExt::rational(coef),
            linear: linear.iter().cloned().map(QuadExt::rational).collect(),
            exp,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.coef.as_rational().is_some() && self.linear.iter().all(|c| c.as_rational().is_some())
    }

    /// The single quadratic field this term lives in, if any.
    fn field(&self) -> Option<MinPoly> {
        std::iter::once(&self.coef).chain(&self.linear).find_map(|c| c.field().cloned())
    }

    fn expand_rational(&self) -> Option<DualPolynomial> {
        let coef = self.coef.as_rational()?.clone();
        let linear: Option<Vec<Rational>> = self.linear.iter().map(|c| c.as_rational().cloned()).collect();
        let l = DualPolynomial::linear(&linear?);
        Some(expand_linear_power(&l, self.exp).expect("linear form").scale(&coef))
    }

    fn expand(&self) -> Polynomial<QuadExt, Dual> {
        let l = Polynomial::<QuadExt, Dual>::linear(&self.linear);
        expand_linear_power(&l, self.exp).expect("linear form").scale(&self.coef)
    }

    fn expand_complex(&self) -> Polynomial<Complex64, Dual> {
        let lin: Vec<Complex64> = self.linear.iter().map(QuadExt::to_complex).collect();
        let l = Polynomial::<Complex64, Dual>::linear(&lin);
        expand_linear_power(&l, self.exp).expect("linear form").scale(&self.coef.to_complex())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    ExactEqual,
    /// Largest coefficient of `Σ terms − target` in absolute value.
    Residual(f64),
}

impl Verdict {
    pub fn is_exact(&self) -> bool {
        matches!(self, Verdict::ExactEqual)
    }

    pub fn residual(&self) -> f64 {
        match self {
            Verdict::ExactEqual => 0.0,
            Verdict::Residual(r) => *r,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerSumCertificate {
    pub target: DualPolynomial,
    pub terms: Vec<PowerSumTerm>,
    pub verdict: Verdict,
}

impl PowerSumCertificate {
    /// Builds the certificate and computes its verdict.
    pub fn new(target: DualPolynomial, terms: Vec<PowerSumTerm>) -> Self {
        let verdict = verify(&target, &terms);
        PowerSumCertificate { target, terms, verdict }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The certificate with term `i` removed, re-verified.
    pub fn without_term(&self, i: usize) -> Self {
        let mut terms = self.terms.clone();
        terms.remove(i);
        PowerSumCertificate::new(self.target.clone(), terms)
    }
}

/// Exact check first (terms grouped by their quadratic field, each group's
/// irrational part must cancel); otherwise the complex residual.
pub fn verify(target: &DualPolynomial, terms: &[PowerSumTerm]) -> Verdict {
    let n = target.n();
    if terms.iter().any(|t| t.linear.len() != n) {
        return Verdict::Residual(f64::INFINITY);
    }
    let mut rational_sum = DualPolynomial::zero(n);
    let mut groups: BTreeMap<String, Vec<&PowerSumTerm>> = BTreeMap::new();
    for t in terms {
        match t.expand_rational() {
            Some(p) => rational_sum = &rational_sum + &p,
            None => {
                let key = t.field().map(|f| format!("{}|{}", f.p, f.q)).unwrap_or_default();
                groups.entry(key).or_default().push(t);
            }
        }
    }
    let mut exact = true;
    for group in groups.values() {
        let sum = group.iter().fold(Polynomial::<QuadExt, Dual>::zero(n), |acc, t| &acc + &t.expand());
        for (m, c) in sum.terms() {
            if !c.b().is_zero() {
                exact = false;
                break;
            }
            rational_sum.add_term(m.clone(), c.a().clone());
        }
        if !exact {
            break;
        }
    }
    if exact && rational_sum == *target {
        return Verdict::ExactEqual;
    }
    let approx = terms.iter().fold(Polynomial::<Complex64, Dual>::zero(n), |acc, t| &acc + &t.expand_complex());
    let target_c: Polynomial<Complex64, Dual> = target.map_coeffs(Complex64::from_rational);
    let r = (&approx - &target_c).max_magnitude();
    // An exact mismatch must never read as zero.
    Verdict::Residual(if r.is_zero() { f64::MIN_POSITIVE } else { r })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    #[test]
    fn cube_roots_of_unity_pair_is_exact() {
        let xi = QuadExt::root(MinPoly::cyclotomic3());
        let one = QuadExt::rational(int(1));
        let xi2 = xi.clone() * xi.clone();
        let terms = vec![
            PowerSumTerm::new(one.clone(), vec![one.clone(), xi.clone(), xi2.clone()], 3),
            PowerSumTerm::new(one.clone(), vec![one.clone(), xi2, xi], 3),
        ];
        let p = |k| DualPolynomial::power_sum(3, k);
        let target = &(&p(1).pow(3).scale(&int(2)) - &(&p(1) * &p(2)).scale(&int(9))) + &p(3).scale(&int(9));
        let cert = PowerSumCertificate::new(target, terms);
        assert_eq!(cert.verdict, Verdict::ExactEqual);
        let dropped = cert.without_term(0);
        assert!(dropped.verdict.residual() > 0.5);
    }

    #[test]
    fn rational_mismatch_reports_residual() {
        let target = DualPolynomial::power_sum(2, 2);
        let terms = vec![PowerSumTerm::rational(int(1), &[int(1), int(0)], 2)];
        let v = verify(&target, &terms);
        assert!((v.residual() - 1.0).abs() < 1e-12);
        let terms = vec![
            PowerSumTerm::rational(int(1), &[int(1), int(0)], 2),
            PowerSumTerm::rational(int(1), &[int(0), int(1)], 2),
        ];
        assert!(verify(&target, &terms).is_exact());
    }

    #[test]
    fn irrational_parts_must_cancel() {
        let t = QuadExt::root(MinPoly::sqrt_of(int(2)));
        let one = QuadExt::rational(int(1));
        // (X1 + √2 X2)^2 + (X1 − √2 X2)^2 = 2 X1^2 + 4 X2^2.
        let target = DualPolynomial::from_terms(
            2,
            [(crate::poly::Monomial::new(vec![2, 0]), int(2)), (crate::poly::Monomial::new(vec![0, 2]), int(4))],
        );
        let plus = PowerSumTerm::new(one.clone(), vec![one.clone(), t.clone()], 2);
        let minus = PowerSumTerm::new(one.clone(), vec![one.clone(), -t], 2);
        assert!(verify(&target, &[plus.clone(), minus]).is_exact());
        assert!(!verify(&target, &[plus.clone(), plus]).is_exact());
    }

    #[test]
    fn json_shape() {
        let cert = PowerSumCertificate::new(
            DualPolynomial::var(1, 0).pow(2).scale(&rat(1, 2)),
            vec![PowerSumTerm::rational(rat(1, 2), &[int(1)], 2)],
        );
        let v = serde_json::to_value(&cert).unwrap();
        assert_eq!(v["verdict"], "exact-equal");
        assert_eq!(v["terms"][0]["coef"], "1/2");
        assert_eq!(v["terms"][0]["linear"][0], "1/1");
        assert_eq!(v["terms"][0]["exp"], 2);
        let back: PowerSumCertificate = serde_json::from_value(v).unwrap();
        assert_eq!(back, cert);

        let xi = QuadExt::root(MinPoly::cyclotomic3());
        let t = PowerSumTerm::new(xi.clone(), vec![xi], 1);
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(serde_json::from_str::<PowerSumTerm>(&s).unwrap(), t);
    }
}

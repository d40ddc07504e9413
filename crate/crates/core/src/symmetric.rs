//! Partitions and the power-sum basis of symmetric forms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::{monomial_basis, Dual, Monomial, Polynomial, Ring};
use crate::scalar::{int, Rational, Scalar};

/// Largest degree accepted by [`to_power_sum_basis`].
pub const MAX_POWER_SUM_DEGREE: usize = 6;

/// Partitions of `d` with parts in non-increasing order, listed in reverse
/// lexicographic order: `(d), (d-1, 1), ...`.
pub fn partitions(d: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            prefix.push(part);
            rec(rest - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, d, &mut Vec::new(), &mut out);
    out
}

/// `p_λ = p_{λ_1} p_{λ_2} ...` in `n` variables.
pub fn power_sum_product<K: Scalar, R: Ring>(n: usize, lambda: &[usize]) -> Polynomial<K, R> {
    lambda.iter().fold(Polynomial::one(n), |acc, &k| &acc * &Polynomial::power_sum(n, k))
}

/// Human-readable name such as `p3p1` or `p2^2`.
pub fn partition_label(lambda: &[usize]) -> String {
    let mut out = String::new();
    let mut i = 0;
    while i < lambda.len() {
        let part = lambda[i];
        let run = lambda[i..].iter().take_while(|&&p| p == part).count();
        out.push_str(&format!("p{part}"));
        if run > 1 {
            out.push_str(&format!("^{run}"));
        }
        i += run;
    }
    out
}

/// Coordinates of a symmetric form in the basis `{p_λ : λ ⊢ d}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerSumCoordinates {
    pub degree: usize,
    pub partitions: Vec<Vec<usize>>,
    #[serde(with = "crate::scalar::rational_vec")]
    pub coefficients: Vec<Rational>,
}

impl PowerSumCoordinates {
    pub fn coefficient(&self, lambda: &[usize]) -> Option<&Rational> {
        self.partitions.iter().position(|p| p == lambda).map(|i| &self.coefficients[i])
    }
}

/// Number of ways to send each part of `lambda` to one variable so that the
/// variable loads equal the (nonzero) exponents in `mu`: the coefficient of
/// `X^mu` in `p_lambda`.
fn assignment_count(lambda: &[usize], mu: &[usize]) -> i64 {
    fn rec(parts: &[usize], load: &mut [usize]) -> i64 {
        let Some((&first, rest)) = parts.split_first() else {
            return i64::from(load.iter().all(|&l| l == 0));
        };
        let mut total = 0;
        for v in 0..load.len() {
            if load[v] >= first {
                load[v] -= first;
                total += rec(rest, load);
                load[v] += first;
            }
        }
        total
    }
    let mut load = mu.to_vec();
    rec(lambda, &mut load)
}

fn partition_monomial(n: usize, mu: &[usize]) -> Monomial {
    let mut e = vec![0u16; n];
    for (i, &m) in mu.iter().enumerate() {
        e[i] = m as u16;
    }
    Monomial::new(e)
}

/// Expresses a symmetric form of degree `d <= 6` in the power-sum basis.
///
/// Requires `n >= d`, so that the `p_λ` are linearly independent.
pub fn to_power_sum_basis(f: &Polynomial<Rational, Dual>) -> Result<PowerSumCoordinates> {
    let d = match f.homogeneous_degree() {
        Some(d) => d,
        None if f.is_zero() => return Err(Error::ZeroForm),
        None => return Err(Error::NotHomogeneous),
    };
    power_sum_coordinates_of_degree(f, d)
}

/// As [`to_power_sum_basis`], with the degree given explicitly so that the
/// zero form is accepted.
pub fn power_sum_coordinates_of_degree<R: Ring>(f: &Polynomial<Rational, R>, d: usize) -> Result<PowerSumCoordinates> {
    let n = f.n();
    if d > MAX_POWER_SUM_DEGREE {
        return Err(Error::DegreeOutOfRange(d));
    }
    if n < d {
        return Err(Error::DependentBasis { n, degree: d });
    }
    if !f.is_zero() && f.homogeneous_degree() != Some(d) {
        return Err(Error::NotHomogeneous);
    }
    if !f.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let parts = partitions(d);
    // Rows: monomials X^mu indexed by partitions mu, columns: p_lambda.
    let transition = Matrix::from_fn(parts.len(), parts.len(), |i, j| int(assignment_count(&parts[j], &parts[i])));
    let rhs: Vec<Rational> = parts.iter().map(|mu| f.coeff(&partition_monomial(n, mu))).collect();
    let coefficients = solve_square(&transition, &rhs);
    Ok(PowerSumCoordinates { degree: d, partitions: parts, coefficients })
}

/// Solves `a x = b` for an invertible square `a`.
pub(crate) fn solve_square(a: &Matrix, b: &[Rational]) -> Vec<Rational> {
    let n = a.rows();
    let augmented = Matrix::from_fn(n, n + 1, |i, j| if j < n { a.get(i, j).clone() } else { b[i].clone() });
    let (rows, pivots) = augmented.rref();
    assert!(pivots.len() == n && pivots.iter().enumerate().all(|(i, &p)| i == p), "singular linear system");
    rows.iter().map(|r| r[n].clone()).collect()
}

/// Inverse of [`to_power_sum_basis`]: `Σ c_λ p_λ` in `n` variables.
pub fn from_power_sum_basis<R: Ring>(n: usize, coords: &PowerSumCoordinates) -> Polynomial<Rational, R> {
    coords
        .partitions
        .iter()
        .zip(&coords.coefficients)
        .fold(Polynomial::zero(n), |acc, (lambda, c)| &acc + &power_sum_product::<Rational, R>(n, lambda).scale(c))
}

/// Monomial symmetric sum over the orbit of a partition; used to build
/// random symmetric forms.
pub fn monomial_symmetric<R: Ring>(n: usize, mu: &[usize]) -> Polynomial<Rational, R> {
    let d: usize = mu.iter().sum();
    let mut sorted = mu.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    Polynomial::from_terms(
        n,
        monomial_basis(n, d)
            .monomials()
            .iter()
            .filter(|m| {
                let mut e: Vec<usize> = m.exponents().iter().map(|&x| x as usize).filter(|&x| x > 0).collect();
                e.sort_unstable_by(|a, b| b.cmp(a));
                e == sorted
            })
            .map(|m| (m.clone(), Rational::from_integer(1.into()))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::DualPolynomial;
    use crate::scalar::rat;
    use proptest::prelude::*;

    #[test]
    fn partition_counts_and_order() {
        let counts: Vec<usize> = (0..=8).map(|d| partitions(d).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22]);
        assert_eq!(partitions(4), vec![vec![4], vec![3, 1], vec![2, 2], vec![2, 1, 1], vec![1, 1, 1, 1]]);
        assert_eq!(partition_label(&[2, 2]), "p2^2");
        assert_eq!(partition_label(&[3, 1, 1]), "p3p1^2");
    }

    #[test]
    fn complete_quartic_in_power_sums() {
        for n in 4..=7 {
            let c = to_power_sum_basis(&DualPolynomial::complete_symmetric(n, 4)).unwrap();
            let expected: Vec<Rational> = [6, 8, 3, 6, 1].iter().map(|&k| rat(k, 24)).collect();
            assert_eq!(c.coefficients, expected);
        }
    }

    #[test]
    fn p2_squared_is_a_basis_vector() {
        let f: DualPolynomial = power_sum_product(5, &[2, 2]);
        let c = to_power_sum_basis(&f).unwrap();
        assert_eq!(c.coefficients, vec![rat(0, 1), rat(0, 1), rat(1, 1), rat(0, 1), rat(0, 1)]);
    }

    /// Oracle for the cubic: solve the 3x3 system by matching three
    /// coefficients of the expanded forms in four variables.
    #[test]
    fn complete_cubic_matches_hand_solved_system() {
        let n = 4;
        let h = DualPolynomial::complete_symmetric(n, 3);
        let basis: Vec<DualPolynomial> =
            [vec![3], vec![2, 1], vec![1, 1, 1]].iter().map(|l| power_sum_product(n, l)).collect();
        let probes =
            [Monomial::new(vec![3, 0, 0, 0]), Monomial::new(vec![2, 1, 0, 0]), Monomial::new(vec![1, 1, 1, 0])];
        let a = Matrix::from_fn(3, 3, |i, j| basis[j].coeff(&probes[i]));
        let b: Vec<Rational> = probes.iter().map(|m| h.coeff(m)).collect();
        let oracle = solve_square(&a, &b);
        assert_eq!(oracle, vec![rat(2, 6), rat(3, 6), rat(1, 6)]);
        assert_eq!(to_power_sum_basis(&h).unwrap().coefficients, oracle);
    }

    #[test]
    fn rejects_bad_inputs() {
        let x1 = DualPolynomial::var(3, 0).pow(2);
        assert_eq!(to_power_sum_basis(&x1), Err(Error::NotSymmetric));
        let h = DualPolynomial::complete_symmetric(3, 4);
        assert_eq!(to_power_sum_basis(&h), Err(Error::DependentBasis { n: 3, degree: 4 }));
        assert_eq!(to_power_sum_basis(&DualPolynomial::zero(3)), Err(Error::ZeroForm));
    }

    proptest! {
        #[test]
        fn round_trip(d in 1usize..=6, extra in 0usize..2, seed in proptest::collection::vec(-5i64..=5, 11)) {
            let n = d + extra;
            let parts = partitions(d);
            let coords = PowerSumCoordinates {
                degree: d,
                partitions: parts.clone(),
                coefficients: parts.iter().enumerate().map(|(i, _)| rat(seed[i], 1 + i as i64)).collect(),
            };
            let f: DualPolynomial = from_power_sum_basis(n, &coords);
            let back = power_sum_coordinates_of_degree(&f, d).unwrap();
            prop_assert_eq!(back, coords);
        }

        #[test]
        fn random_symmetric_forms_round_trip(seed in proptest::collection::vec(-4i64..=4, 7)) {
            let n = 5;
            let f = partitions(5).iter().zip(&seed).fold(DualPolynomial::zero(n), |acc, (mu, &c)| {
                &acc + &monomial_symmetric::<Dual>(n, mu).scale(&int(c))
            });
            let coords = power_sum_coordinates_of_degree(&f, 5).unwrap();
            prop_assert_eq!(from_power_sum_basis::<Dual>(n, &coords), f);
        }
    }
}

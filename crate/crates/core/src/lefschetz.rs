//! Ranks of `×ℓ^k` on `S/ann(F)` and weak/strong Lefschetz verdicts.

use serde::{Deserialize, Serialize};

use crate::apolarity::{catalecticant, hilbert_function, HilbertFunction};
use crate::cubic::PlanePoint;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::{contract, DualPolynomial, Monomial, PrimalPolynomial};
use crate::scalar::{int, Rational};

fn homogeneous_degree(f: &DualPolynomial) -> Result<usize> {
    match f.homogeneous_degree() {
        Some(e) => Ok(e),
        None if f.is_zero() => Err(Error::ZeroForm),
        None => Err(Error::NotHomogeneous),
    }
}

/// Rank of `×ℓ^{j−i} : A_i → A_j`, read off the bilinear form
/// `(f, g) ↦ (f ℓ^{j−i} g) ∘ F` on `S_i × S_{e−j}`, which is the catalecticant
/// of `ℓ^{j−i} ∘ F` in degree `i`.
pub fn mult_rank(f: &DualPolynomial, ell: &PrimalPolynomial, i: usize, j: usize) -> Result<usize> {
    if ell.homogeneous_degree() != Some(1) {
        return Err(Error::NotLinear);
    }
    let e = homogeneous_degree(f)?;
    if i > j || j > e {
        return Err(Error::DegreeOutOfRange(j));
    }
    let g = contract(&ell.pow(j - i), f);
    if g.is_zero() {
        return Ok(0);
    }
    Ok(catalecticant(&g, i)?.rank())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankEntry {
    pub i: usize,
    pub j: usize,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LefschetzReport {
    /// Coefficients of the witness `ℓ`.
    #[serde(with = "crate::scalar::rational_vec")]
    pub ell: Vec<Rational>,
    pub hilbert: HilbertFunction,
    pub ranks: Vec<RankEntry>,
    pub wlp: bool,
    pub slp: bool,
}

/// Every `×ℓ^{e−2i} : A_i → A_{e−i}`, `i ≤ e/2`, has rank `h_i`.
pub fn has_slp(f: &DualPolynomial, ell: &PrimalPolynomial) -> Result<bool> {
    let e = homogeneous_degree(f)?;
    let hf = hilbert_function(f)?;
    for i in 0..=e / 2 {
        if mult_rank(f, ell, i, e - i)? != hf.values()[i] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every `×ℓ : A_i → A_{i+1}` has maximal rank.
pub fn has_wlp(f: &DualPolynomial, ell: &PrimalPolynomial) -> Result<bool> {
    let e = homogeneous_degree(f)?;
    let hf = hilbert_function(f)?;
    let h = hf.values();
    for i in 0..e {
        if mult_rank(f, ell, i, i + 1)? != h[i].min(h[i + 1]) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Full rank table for `0 ≤ i ≤ j ≤ e` with both verdicts.
pub fn lefschetz_report(f: &DualPolynomial, ell: &PrimalPolynomial) -> Result<LefschetzReport> {
    let e = homogeneous_degree(f)?;
    let coeffs = ell.linear_coefficients().ok_or(Error::NotLinear)?;
    let hilbert = hilbert_function(f)?;
    let mut ranks = Vec::new();
    for i in 0..=e {
        for j in i..=e {
            ranks.push(RankEntry { i, j, rank: mult_rank(f, ell, i, j)? });
        }
    }
    let h = hilbert.values();
    let rank_of = |i: usize, j: usize| ranks.iter().find(|r| r.i == i && r.j == j).map_or(0, |r| r.rank);
    let wlp = (0..e).all(|i| rank_of(i, i + 1) == h[i].min(h[i + 1]));
    let slp = (0..=e / 2).all(|i| rank_of(i, e - i) == h[i]);
    Ok(LefschetzReport { ell: coeffs, hilbert, ranks, wlp, slp })
}

/// The three candidates `Σ x_i`, `x_1`, `n x_1 − Σ x_i`, in that order.
pub fn cubic_sl_candidates(n: usize) -> Vec<PrimalPolynomial> {
    let sum = PrimalPolynomial::linear(&vec![int(1); n]);
    let x1 = PrimalPolynomial::var(n, 0);
    let third = &x1.scale(&int(n as i64)) - &sum;
    vec![sum, x1, third]
}

/// First candidate that is a strong Lefschetz element for the symmetric
/// cubic at `point`, with its index in [`cubic_sl_candidates`].
pub fn sl_element_for_cubic(n: usize, point: &PlanePoint) -> Result<Option<(usize, PrimalPolynomial)>> {
    let f = point.form(n);
    for (idx, ell) in cubic_sl_candidates(n).into_iter().enumerate() {
        if has_slp(&f, &ell)? {
            return Ok(Some((idx, ell)));
        }
    }
    Ok(None)
}

/// First linear form with integer coefficients in `[−bound, bound]` (leading
/// nonzero coefficient positive, ordered by height) that is a strong
/// Lefschetz element for `f`.
pub fn search_sl_element(f: &DualPolynomial, bound: i64) -> Result<Option<PrimalPolynomial>> {
    let n = f.n();
    for height in 1..=bound {
        let mut coeffs = vec![-height; n];
        loop {
            let leading = coeffs.iter().find(|&&c| c != 0).copied();
            let max = coeffs.iter().map(|c| c.abs()).max().unwrap_or(0);
            if leading.is_some_and(|c| c > 0) && max == height {
                let ell = PrimalPolynomial::linear(&coeffs.iter().map(|&c| int(c)).collect::<Vec<_>>());
                if has_slp(f, &ell)? {
                    return Ok(Some(ell));
                }
            }
            // Odometer over [−height, height]^n.
            let Some(pos) = coeffs.iter().rposition(|&c| c < height) else {
                break;
            };
            coeffs[pos] += 1;
            for c in &mut coeffs[pos + 1..] {
                *c = -height;
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MqDetCheck {
    pub n: usize,
    pub point: PlanePoint,
    /// `ℓ ∘ F` equals `(3a_0+2a_1) n p_1^2 + (a_1+3a_2) n^2 p_2`.
    pub quadric_matches: bool,
    pub matrix: Matrix,
    #[serde(with = "crate::scalar::rational_str")]
    pub determinant: Rational,
    /// `3 n^{2n} (a_1+3a_2)^{n−1} (a_0+a_1+a_2)`.
    #[serde(with = "crate::scalar::rational_str")]
    pub formula: Rational,
    pub equal: bool,
}

/// Symmetric matrix `M` with `q = X^T M X`.
pub fn quadric_matrix<R: crate::poly::Ring>(q: &crate::poly::Polynomial<Rational, R>) -> Matrix {
    let n = q.n();
    let half = Rational::new(1.into(), 2.into());
    Matrix::from_fn(n, n, |i, j| {
        let m = Monomial::var(n, i).mul(&Monomial::var(n, j));
        let c = q.coeff(&m);
        if i == j {
            c
        } else {
            c * &half
        }
    })
}

/// Builds `M_q` from `q = (Σ x_i) ∘ F` and compares `det M_q` with the
/// closed form.
pub fn mq_det_check(n: usize, point: &PlanePoint) -> Result<MqDetCheck> {
    if n < 2 {
        return Err(Error::UnsupportedSize { n, reason: "needs n >= 2".into() });
    }
    let [a0, a1, a2] = point.coords();
    let nn = int(n as i64);
    let f = point.form(n);
    let ell = PrimalPolynomial::linear(&vec![int(1); n]);
    let q = contract(&ell, &f);
    let p = |k| DualPolynomial::power_sum(n, k);
    let c = (int(3) * &a0 + int(2) * &a1) * &nn;
    let dcoef = (&a1 + int(3) * &a2) * &nn * &nn;
    let closed = &p(1).pow(2).scale(&c) + &p(2).scale(&dcoef);
    let quadric_matches = q == closed;
    let matrix = quadric_matrix(&q);
    let determinant = matrix.det();
    let formula =
        int(3) * num_traits::pow(nn.clone(), 2 * n) * num_traits::pow(&a1 + int(3) * &a2, n - 1) * (&a0 + &a1 + &a2);
    let equal = determinant == formula;
    Ok(MqDetCheck { n, point: point.clone(), quadric_matches, matrix, determinant, formula, equal })
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
    fn compressed_h3_full_rank() {
        let h = DualPolynomial::complete_symmetric(3, 3);
        let ell = PrimalPolynomial::linear(&[int(1), int(1), int(1)]);
        assert_eq!(mult_rank(&h, &ell, 1, 2).unwrap(), 3);
        assert_eq!(mult_rank(&DualPolynomial::var(1, 0).pow(3), &PrimalPolynomial::var(1, 0), 0, 3).unwrap(), 1);
    }

    #[test]
    fn rank_drops_on_l3() {
        let f = pt(1, -2, 1).form(3);
        let ell = PrimalPolynomial::linear(&[int(1), int(1), int(1)]);
        assert!(mult_rank(&f, &ell, 1, 2).unwrap() < 3);
        assert!(!has_slp(&f, &ell).unwrap());
    }

    #[test]
    fn rejects_nonlinear() {
        let h = DualPolynomial::complete_symmetric(2, 2);
        assert_eq!(mult_rank(&h, &PrimalPolynomial::var(2, 0).pow(2), 0, 1), Err(Error::NotLinear));
    }

    #[test]
    fn complete_symmetric_has_slp() {
        for n in 1..=4 {
            let ell = PrimalPolynomial::linear(&vec![int(1); n]);
            for e in 1..=5 {
                let h = DualPolynomial::complete_symmetric(n, e);
                assert!(has_slp(&h, &ell).unwrap(), "n={n} e={e}");
                assert!(has_wlp(&h, &ell).unwrap(), "n={n} e={e}");
            }
        }
    }

    #[test]
    fn cube_and_general_cubic() {
        let f = pt(1, 0, 0).form(3);
        assert!(has_slp(&f, &PrimalPolynomial::var(3, 0)).unwrap());
        let g = pt(1, 1, 1).form(3);
        assert!(has_slp(&g, &PrimalPolynomial::linear(&[int(1), int(1), int(1)])).unwrap());
    }

    #[test]
    fn sl_element_examples() {
        assert_eq!(sl_element_for_cubic(4, &pt(1, 1, 1)).unwrap().unwrap().0, 0);
        assert_eq!(sl_element_for_cubic(5, &pt(1, 0, 0)).unwrap().unwrap().0, 0);
        let (idx, _) = sl_element_for_cubic(3, &pt(1, -2, 1)).unwrap().unwrap();
        assert!(idx == 1 || idx == 2);
    }

    #[test]
    fn candidates_can_all_fail() {
        // On ℓ_1 with F(e_1) = 0: x_1^3 kills F, the other two drop rank.
        for (n, p) in [(3, pt(0, 3, -1)), (4, pt(4, 3, -1))] {
            assert!(sl_element_for_cubic(n, &p).unwrap().is_none());
            let f = p.form(n);
            assert!(contract(&PrimalPolynomial::var(n, 0).pow(3), &f).is_zero());
            let ell = search_sl_element(&f, 2).unwrap().unwrap();
            assert!(has_slp(&f, &ell).unwrap());
        }
    }

    #[test]
    fn mq_examples() {
        for n in 3..=6 {
            let r = mq_det_check(n, &pt(1, -3, 1)).unwrap();
            assert!(r.equal && r.quadric_matches);
            assert_eq!(r.determinant, int(0));
            assert_eq!(mq_det_check(n, &pt(1, -2, 1)).unwrap().determinant, int(0));
        }
        let r = mq_det_check(3, &pt(1, 1, 1)).unwrap();
        assert_eq!(r.determinant, int(3 * 729 * 16 * 3));
        assert!(r.equal);
    }

    #[test]
    fn report_is_consistent() {
        let h = DualPolynomial::complete_symmetric(3, 4);
        let r = lefschetz_report(&h, &PrimalPolynomial::linear(&[int(1), int(1), int(1)])).unwrap();
        assert!(r.slp && r.wlp);
        let e = 4;
        for entry in &r.ranks {
            let h = r.hilbert.values();
            assert!(entry.rank <= h[entry.i].min(h[entry.j]));
            let mirror = r.ranks.iter().find(|m| m.i == e - entry.j && m.j == e - entry.i).unwrap();
            assert_eq!(mirror.rank, entry.rank);
        }
        assert_eq!(r.ell, vec![rat(1, 1); 3]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn mq_closed_form(n in 3usize..=6, a in proptest::array::uniform3((-9i64..=9, 1i64..=5))) {
            prop_assume!(a.iter().any(|&(x, _)| x != 0));
            let p = PlanePoint::new(rat(a[0].0, a[0].1), rat(a[1].0, a[1].1), rat(a[2].0, a[2].1)).unwrap();
            let r = mq_det_check(n, &p).unwrap();
            prop_assert!(r.quadric_matches);
            prop_assert!(r.equal);
        }
    }
}

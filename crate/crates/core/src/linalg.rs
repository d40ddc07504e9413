//! Exact linear algebra over the rationals.
//!
//! Rank and determinant use fraction-free Bareiss elimination on integer
//! matrices obtained by clearing row denominators. Incremental span
//! computations use [`EchelonSpan`], a fully reduced integer echelon form.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::scalar::{denominator_lcm, format_rational, Rational};

/// Dense rational matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix shapes do not compose");
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(Rational::zero(), |acc, k| acc + self.get(i, k) * other.get(k, j))
        })
    }

    /// Rows scaled to primitive integer vectors, plus the product of the
    /// scale factors used (so `det(self) = det(int) / factor`).
    fn integer_rows(&self) -> (Vec<Vec<BigInt>>, Rational) {
        let mut factor = Rational::one();
        let rows = (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let l = denominator_lcm(row);
                factor *= Rational::from_integer(l.clone());
                row.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect()
            })
            .collect();
        (rows, factor)
    }

    pub fn rank(&self) -> usize {
        let (mut a, _) = self.integer_rows();
        bareiss_in_place(&mut a, self.cols).0
    }

    pub fn det(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        if self.rows == 0 {
            return Rational::one();
        }
        let (mut a, factor) = self.integer_rows();
        let (rank, sign, last) = bareiss_in_place(&mut a, self.cols);
        if rank < self.rows {
            return Rational::zero();
        }
        let d = if sign { -last } else { last };
        Rational::from_integer(d) / factor
    }

    /// Reduced row-echelon form: nonzero rows with pivot columns.
    pub fn rref(&self) -> (Vec<Vec<Rational>>, Vec<usize>) {
        let mut span = EchelonSpan::new(self.cols);
        for i in 0..self.rows {
            span.insert_rational(self.row(i));
        }
        (span.rational_rows(), span.pivots())
    }

    /// Basis of the right kernel `{v : self * v = 0}`, one vector per free
    /// column, with a 1 in that column.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let (rows, pivots) = self.rref();
        kernel_from_rref(&rows, &pivots, self.cols)
    }

    /// Basis of the left kernel `{v : v * self = 0}`.
    pub fn left_kernel(&self) -> Vec<Vec<Rational>> {
        self.transpose().kernel()
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| self.row(i).iter().map(format_rational).collect()).collect()
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| crate::scalar::parse_rational(s)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        Ok(Matrix::from_rows(parsed))
    }
}

/// Fraction-free elimination. Returns (rank, odd number of row swaps, last
/// pivot). For square full-rank input the last pivot is the determinant up
/// to the swap sign.
fn bareiss_in_place(a: &mut [Vec<BigInt>], cols: usize) -> (usize, bool, BigInt) {
    let rows = a.len();
    let mut prev = BigInt::one();
    let mut rank = 0;
    let mut swaps = false;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else { continue };
        if p != rank {
            a.swap(p, rank);
            swaps = !swaps;
        }
        let (top, below) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        for row in below.iter_mut() {
            let factor = row[c].clone();
            for k in c + 1..cols {
                let v = &pivot_row[c] * &row[k] - &factor * &pivot_row[k];
                row[k] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        // Rows above the pivot keep their entries; only the trailing block
        // participates in later steps.
        prev = pivot_row[c].clone();
        rank += 1;
    }
    (rank, swaps, prev)
}

/// Right kernel from a reduced echelon form.
pub fn kernel_from_rref(rows: &[Vec<Rational>], pivots: &[usize], cols: usize) -> Vec<Vec<Rational>> {
    let mut is_pivot = vec![false; cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Rational::zero(); cols];
            v[free] = Rational::one();
            for (row, &p) in rows.iter().zip(pivots) {
                v[p] = -row[free].clone();
            }
            v
        })
        .collect()
}

fn make_primitive(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return;
    }
    let lead_negative = v.iter().find(|x| !x.is_zero()).is_some_and(Signed::is_negative);
    let g = if lead_negative { -g } else { g };
    if !g.is_one() {
        for x in v.iter_mut() {
            *x = &*x / &g;
        }
    }
}

/// Incrementally maintained, fully reduced integer row-echelon form.
///
/// Rows are primitive with positive pivots and every pivot column is zero
/// in all other rows, so the span has a canonical representation that is
/// independent of insertion order up to the final rational scaling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EchelonSpan {
    cols: usize,
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl EchelonSpan {
    pub fn new(cols: usize) -> Self {
        EchelonSpan { cols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.pivots.clone()
    }

    pub fn integer_rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    fn reduce(&self, v: &mut [BigInt]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let a = row[p].clone();
            let b = v[p].clone();
            let g = a.gcd(&b);
            let (ma, mb) = (&a / &g, &b / &g);
            for (x, r) in v.iter_mut().zip(row) {
                *x = &*x * &ma - r * &mb;
            }
            make_primitive(v);
        }
    }

    /// True if `v` lies in the span.
    pub fn contains(&self, v: &[BigInt]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(Zero::is_zero)
    }

    pub fn contains_rational(&self, v: &[Rational]) -> bool {
        self.contains(&to_integer_vector(v))
    }

    /// Adds `v`; returns whether the rank grew.
    pub fn insert(&mut self, v: Vec<BigInt>) -> bool {
        assert_eq!(v.len(), self.cols, "vector length does not match span");
        let mut w = v;
        make_primitive(&mut w);
        self.reduce(&mut w);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else { return false };
        for (row, &q) in self.rows.iter_mut().zip(&self.pivots) {
            let _ = q;
            if row[p].is_zero() {
                continue;
            }
            let a = w[p].clone();
            let b = row[p].clone();
            let g = a.gcd(&b);
            let (ma, mb) = (&a / &g, &b / &g);
            for (x, r) in row.iter_mut().zip(&w) {
                *x = &*x * &ma - r * &mb;
            }
            make_primitive(row);
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, w);
        true
    }

    pub fn insert_rational(&mut self, v: &[Rational]) -> bool {
        self.insert(to_integer_vector(v))
    }

    /// Rows normalized so each pivot entry is one.
    pub fn rational_rows(&self) -> Vec<Vec<Rational>> {
        self.rows
            .iter()
            .zip(&self.pivots)
            .map(|(row, &p)| {
                let lead = row[p].clone();
                row.iter().map(|x| Rational::new(x.clone(), lead.clone())).collect()
            })
            .collect()
    }

    /// Coordinates of `v` in the basis [`Self::rational_rows`], if `v` is in
    /// the span. For a reduced echelon basis these are the entries of `v` at
    /// the pivot columns.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        if !self.contains_rational(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }
}

/// Scales a rational vector to a primitive integer vector with the same span.
pub fn to_integer_vector(v: &[Rational]) -> Vec<BigInt> {
    let l = denominator_lcm(v);
    let mut w: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect();
    make_primitive(&mut w);
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    /// Cofactor expansion, used as an independent determinant.
    fn laplace(a: &Matrix) -> Rational {
        let n = a.rows();
        if n == 0 {
            return Rational::one();
        }
        let mut total = Rational::zero();
        for j in 0..n {
            let minor = Matrix::from_fn(n - 1, n - 1, |r, c| a.get(r + 1, if c < j { c } else { c + 1 }).clone());
            let term = a.get(0, j) * laplace(&minor);
            total = if j % 2 == 0 { total + term } else { total - term };
        }
        total
    }

    #[test]
    fn small_determinants() {
        assert_eq!(m(&[&[2, 1], &[1, 3]]).det(), int(5));
        assert_eq!(m(&[&[0, 1], &[1, 0]]).det(), int(-1));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).det(), int(0));
        let frac = Matrix::from_rows(vec![vec![rat(1, 2), rat(1, 3)], vec![rat(1, 4), rat(1, 5)]]);
        assert_eq!(frac.det(), rat(1, 10) - rat(1, 12));
    }

    #[test]
    fn rank_and_kernel() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let k = a.kernel();
        assert_eq!(k.len(), 1);
        for i in 0..3 {
            let s: Rational = (0..3).map(|j| a.get(i, j) * &k[0][j]).sum();
            assert!(s.is_zero());
        }
        assert_eq!(Matrix::zeros(3, 4).rank(), 0);
    }

    #[test]
    fn echelon_is_canonical() {
        let mut s1 = EchelonSpan::new(3);
        s1.insert_rational(&[int(1), int(1), int(0)]);
        s1.insert_rational(&[int(0), int(1), int(1)]);
        let mut s2 = EchelonSpan::new(3);
        s2.insert_rational(&[int(1), int(2), int(1)]);
        s2.insert_rational(&[int(1), int(0), int(-1)]);
        assert_eq!(s1.rational_rows(), s2.rational_rows());
        assert_eq!(s1.pivots(), vec![0, 1]);
        assert!(!s1.insert_rational(&[int(2), int(3), int(1)]));
        assert_eq!(s1.coordinates(&[int(3), int(5), int(2)]), Some(vec![int(3), int(5)]));
    }

    proptest! {
        #[test]
        fn bareiss_matches_cofactor_expansion(entries in proptest::collection::vec(-6i64..=6, 16)) {
            let a = Matrix::from_fn(4, 4, |i, j| rat(entries[i * 4 + j], 1 + (i as i64 + j as i64) % 3));
            prop_assert_eq!(a.det(), laplace(&a));
        }

        #[test]
        fn rank_nullity(entries in proptest::collection::vec(-2i64..=2, 20)) {
            let a = Matrix::from_fn(4, 5, |i, j| int(entries[i * 5 + j]));
            prop_assert_eq!(a.rank() + a.kernel().len(), 5);
            prop_assert_eq!(a.rank(), a.transpose().rank());
        }

        #[test]
        fn product_rule(x in proptest::collection::vec(-4i64..=4, 9), y in proptest::collection::vec(-4i64..=4, 9)) {
            let a = Matrix::from_fn(3, 3, |i, j| int(x[i * 3 + j]));
            let b = Matrix::from_fn(3, 3, |i, j| int(y[i * 3 + j]));
            prop_assert_eq!(a.mul(&b).det(), a.det() * b.det());
        }
    }
}

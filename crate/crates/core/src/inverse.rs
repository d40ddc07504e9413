//! Graded inverse systems `I^⊥ ⊂ E` of homogeneous ideals `I ⊂ S`.
//!
//! The degree-`k` piece `V_k = {D ∈ E_k : g ∘ D = 0 for all g ∈ I_k}` is
//! dual to `[S/I]_k`, and multiplication by `x_v` on the quotient is the
//! transpose of contraction by `x_v` on `V`.
//!
//! For an ideal given by generators, `V_k` is obtained from `V_{k-1}` by
//! lifting: every `D ∈ V_k` is determined by its partials
//! `w_v = x_v ∘ D ∈ V_{k-1}`, which must satisfy `x_u ∘ w_v = x_v ∘ w_u`,
//! and conversely such a tuple integrates to `D = (1/k) Σ X_v w_v`. The
//! unknowns are therefore `n · dim V_{k-1}` scalars instead of `dim S_k`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{kernel_from_rref, EchelonSpan, Matrix};
use crate::poly::{contract, monomial_basis, pairing, DualPolynomial, PrimalPolynomial};
use crate::scalar::Rational;

/// One graded piece `V_k`, stored as a reduced echelon basis in the
/// graded-lex monomial coordinates of `E_k`.
#[derive(Clone, Debug)]
pub struct InversePiece {
    degree: usize,
    n: usize,
    span: EchelonSpan,
}

impl InversePiece {
    fn from_vectors(n: usize, degree: usize, vectors: impl IntoIterator<Item = Vec<Rational>>) -> Self {
        let mut span = EchelonSpan::new(monomial_basis(n, degree).len());
        for v in vectors {
            span.insert_rational(&v);
        }
        InversePiece { degree, n, span }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.span.rank()
    }

    pub fn basis(&self) -> Vec<DualPolynomial> {
        self.span
            .rational_rows()
            .iter()
            .map(|row| DualPolynomial::from_coefficient_vector(self.n, self.degree, row))
            .collect()
    }

    /// Coordinates of `d` in [`Self::basis`]; `None` if `d ∉ V_k`.
    pub fn coordinates(&self, d: &DualPolynomial) -> Option<Vec<Rational>> {
        self.span.coordinates(&d.coefficient_vector(self.degree))
    }
}

/// Inverse system of a homogeneous ideal through a finite degree.
#[derive(Clone, Debug)]
pub struct InverseSystem {
    n: usize,
    pieces: Vec<InversePiece>,
}

impl InverseSystem {
    /// `V_k = S_{e-k} ∘ F`, the inverse system of `ann(F)`.
    pub fn of_form(f: &DualPolynomial) -> Result<Self> {
        let e = homogeneous_nonzero_degree(f)?;
        let n = f.n();
        let pieces = (0..=e)
            .map(|k| {
                let vectors = monomial_basis(n, e - k)
                    .monomials()
                    .iter()
                    .map(|m| {
                        contract(&PrimalPolynomial::monomial(m.clone(), Rational::from_integer(1.into())), f)
                            .coefficient_vector(k)
                    })
                    .collect::<Vec<_>>();
                InversePiece::from_vectors(n, k, vectors)
            })
            .collect();
        Ok(InverseSystem { n, pieces })
    }

    /// Inverse system of the ideal generated by homogeneous `generators`,
    /// computed until it vanishes. Fails if it has not vanished by the
    /// degree where every artinian ideal with these generator degrees must.
    pub fn of_ideal(n: usize, generators: &[PrimalPolynomial]) -> Result<Self> {
        let mut max_gen = 0;
        for g in generators {
            if g.n() != n {
                return Err(Error::VariableMismatch { left: n, right: g.n() });
            }
            match g.homogeneous_degree() {
                Some(d) => max_gen = max_gen.max(d),
                None if g.is_zero() => {}
                None => return Err(Error::NotHomogeneous),
            }
        }
        let live: Vec<&PrimalPolynomial> = generators.iter().filter(|g| !g.is_zero()).collect();
        if live.is_empty() {
            return Err(Error::NotArtinian(0));
        }
        // A complete intersection of forms of degree D has socle degree n(D-1).
        let cap = n * max_gen.saturating_sub(1) + 1;
        let sys = Self::of_ideal_through(n, generators, cap)?;
        if sys.pieces.last().is_some_and(|p| p.dim() > 0) {
            return Err(Error::NotArtinian(cap));
        }
        Ok(sys.truncated())
    }

    /// Inverse system of the ideal generated by `generators`, degrees
    /// `0..=max_degree` (stopping early once a piece vanishes).
    pub fn of_ideal_through(n: usize, generators: &[PrimalPolynomial], max_degree: usize) -> Result<Self> {
        let gen_degrees: Vec<Option<usize>> = generators.iter().map(|g| g.homogeneous_degree()).collect();
        let gens_in = |k: usize| -> Vec<&PrimalPolynomial> {
            generators.iter().zip(&gen_degrees).filter(|(_, d)| **d == Some(k)).map(|(g, _)| g).collect()
        };
        let one = DualPolynomial::one(n);
        let base: Vec<Vec<Rational>> = if gens_in(0).iter().any(|g| !pairing(g, &one).is_zero()) {
            Vec::new()
        } else {
            vec![vec![Rational::from_integer(1.into())]]
        };
        let mut pieces = vec![InversePiece::from_vectors(n, 0, base)];
        for k in 1..=max_degree {
            let prev = pieces.last().expect("degree zero piece").basis();
            let gens = gens_in(k);
            let next = lift(n, k, &prev, &gens);
            let piece = InversePiece::from_vectors(n, k, next.iter().map(|d| d.coefficient_vector(k)));
            let vanished = piece.dim() == 0;
            pieces.push(piece);
            if vanished {
                break;
            }
        }
        Ok(InverseSystem { n, pieces })
    }

    fn truncated(mut self) -> Self {
        while self.pieces.len() > 1 && self.pieces.last().is_some_and(|p| p.dim() == 0) {
            self.pieces.pop();
        }
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Largest degree stored.
    pub fn top_degree(&self) -> usize {
        self.pieces.len() - 1
    }

    pub fn piece(&self, k: usize) -> Option<&InversePiece> {
        self.pieces.get(k)
    }

    /// `dim [S/I]_k` for the stored degrees.
    pub fn hilbert_function(&self) -> Vec<usize> {
        self.pieces.iter().map(InversePiece::dim).collect()
    }

    /// Matrix of `×x_v : [S/I]_k → [S/I]_{k+1}` in the bases dual to the
    /// stored inverse-system bases (shape `dim V_{k+1} × dim V_k`).
    pub fn multiplication_matrix(&self, k: usize, v: usize) -> Matrix {
        let source = self.pieces.get(k);
        let target = self.pieces.get(k + 1);
        let (Some(source), Some(target)) = (source, target) else {
            let rows = target.map_or(0, InversePiece::dim);
            let cols = source.map_or(0, InversePiece::dim);
            return Matrix::zeros(rows, cols);
        };
        let xv = PrimalPolynomial::var(self.n, v);
        let columns: Vec<Vec<Rational>> = target
            .basis()
            .iter()
            .map(|d| source.coordinates(&contract(&xv, d)).expect("inverse system is closed under contraction"))
            .collect();
        // Contraction V_{k+1} → V_k has these as columns; multiplication is
        // its transpose, so they become rows.
        Matrix::from_fn(target.dim(), source.dim(), |i, j| columns[i][j].clone())
    }
}

pub(crate) fn homogeneous_nonzero_degree(f: &DualPolynomial) -> Result<usize> {
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    f.homogeneous_degree().ok_or(Error::NotHomogeneous)
}

/// Basis of `{D ∈ E_k : x_v ∘ D ∈ span(prev) ∀v, g ∘ D = 0 ∀g ∈ gens}`
/// where `prev` spans a subspace of `E_{k-1}` and every `g` has degree `k`.
pub(crate) fn lift(n: usize, k: usize, prev: &[DualPolynomial], gens: &[&PrimalPolynomial]) -> Vec<DualPolynomial> {
    let m = prev.len();
    let unknowns = n * m;
    if unknowns == 0 {
        return Vec::new();
    }
    let col = |v: usize, r: usize| v * m + r;
    let mut eqs = EchelonSpan::new(unknowns);

    if k >= 2 {
        let below = monomial_basis(n, k - 2);
        // partial[u][r] = x_u ∘ prev[r] in E_{k-2} coordinates.
        let partial: Vec<Vec<Vec<Rational>>> = (0..n)
            .map(|u| {
                let xu = PrimalPolynomial::var(n, u);
                prev.iter().map(|b| contract(&xu, b).coefficient_vector(k - 2)).collect()
            })
            .collect();
        'pairs: for u in 0..n {
            for v in u + 1..n {
                #[allow(clippy::needless_range_loop)]
                for mono in 0..below.len() {
                    let mut row = vec![Rational::zero(); unknowns];
                    for r in 0..m {
                        row[col(v, r)] += &partial[u][r][mono];
                        row[col(u, r)] -= &partial[v][r][mono];
                    }
                    if row.iter().any(|x| !x.is_zero()) {
                        eqs.insert_rational(&row);
                        if eqs.rank() == unknowns {
                            break 'pairs;
                        }
                    }
                }
            }
        }
    }

    if eqs.rank() < unknowns && !gens.is_empty() {
        // lifted[v][r] = X_v · prev[r], a candidate antiderivative piece.
        let lifted: Vec<Vec<DualPolynomial>> = (0..n)
            .map(|v| {
                let xv = DualPolynomial::var(n, v);
                prev.iter().map(|b| &xv * b).collect()
            })
            .collect();
        for g in gens {
            let mut row = vec![Rational::zero(); unknowns];
            for v in 0..n {
                for r in 0..m {
                    row[col(v, r)] = pairing(g, &lifted[v][r]);
                }
            }
            eqs.insert_rational(&row);
        }
    }

    let kernel = kernel_from_rref(&eqs.rational_rows(), &eqs.pivots(), unknowns);
    kernel
        .iter()
        .map(|c| {
            let mut d = DualPolynomial::zero(n);
            for v in 0..n {
                let xv = DualPolynomial::var(n, v);
                for r in 0..m {
                    if !c[col(v, r)].is_zero() {
                        d = &d + &(&xv * &prev[r]).scale(&c[col(v, r)]);
                    }
                }
            }
            d
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn x(n: usize, i: usize) -> PrimalPolynomial {
        PrimalPolynomial::var(n, i)
    }

    #[test]
    fn complete_intersection_of_squares() {
        let n = 3;
        let gens: Vec<PrimalPolynomial> = (0..n).map(|i| x(n, i).pow(2)).collect();
        let sys = InverseSystem::of_ideal(n, &gens).unwrap();
        assert_eq!(sys.hilbert_function(), vec![1, 3, 3, 1]);
    }

    #[test]
    fn single_power_in_one_variable() {
        let sys = InverseSystem::of_ideal(1, &[x(1, 0).pow(4)]).unwrap();
        assert_eq!(sys.hilbert_function(), vec![1, 1, 1, 1]);
    }

    #[test]
    fn non_artinian_is_rejected() {
        let err = InverseSystem::of_ideal(2, &[x(2, 0)]).unwrap_err();
        assert!(matches!(err, Error::NotArtinian(_)));
        assert!(matches!(InverseSystem::of_ideal(2, &[]), Err(Error::NotArtinian(0))));
    }

    #[test]
    fn form_and_ideal_agree() {
        let f = DualPolynomial::complete_symmetric(3, 3);
        let from_form = InverseSystem::of_form(&f).unwrap();
        assert_eq!(from_form.hilbert_function(), vec![1, 3, 3, 1]);
        // The inverse system of ann(F) computed by lifting from its
        // quadric generators agrees degree by degree.
        let gens: Vec<PrimalPolynomial> = crate::apolarity::ann_graded_basis(&f, 2).unwrap().basis;
        let lifted = InverseSystem::of_ideal_through(3, &gens, 3).unwrap();
        for k in 0..=2 {
            assert_eq!(lifted.piece(k).unwrap().dim(), from_form.piece(k).unwrap().dim());
        }
    }

    #[test]
    fn multiplication_matches_contraction_pairing() {
        // [S/ann X1^3] in one variable: x·1 = x, x·x = x^2, both nonzero.
        let f = DualPolynomial::var(1, 0).pow(3);
        let sys = InverseSystem::of_form(&f).unwrap();
        for k in 0..3 {
            let m = sys.multiplication_matrix(k, 0);
            assert_eq!((m.rows(), m.cols()), (1, 1));
            assert_ne!(*m.get(0, 0), int(0));
        }
        assert_eq!(sys.multiplication_matrix(3, 0).rows(), 0);
    }
}

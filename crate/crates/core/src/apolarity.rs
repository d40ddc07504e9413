//! Catalecticants, Hilbert functions and annihilator pieces of `S/ann(F)`.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inverse::{homogeneous_nonzero_degree, lift, InverseSystem};
use crate::linalg::{EchelonSpan, Matrix};
use crate::poly::{contract, monomial_basis, DualPolynomial, PrimalPolynomial};
use crate::scalar::Rational;

/// Matrix of `(m_r, m_c) ↦ (m_r m_c) ∘ F` on monomial bases of `S_a × S_{e-a}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Catalecticant {
    pub degree: usize,
    pub form_degree: usize,
    pub matrix: Matrix,
}

impl Catalecticant {
    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }
}

pub fn catalecticant(f: &DualPolynomial, a: usize) -> Result<Catalecticant> {
    let e = match f.homogeneous_degree() {
        Some(e) => e,
        None if f.is_zero() => return Err(Error::ZeroForm),
        None => return Err(Error::NotHomogeneous),
    };
    if a > e {
        return Err(Error::DegreeOutOfRange(a));
    }
    let n = f.n();
    let rows = monomial_basis(n, a);
    let cols = monomial_basis(n, e - a);
    // x^b ∘ X^b = b!, so the entry is coef_F(m_r m_c) · (m_r m_c)!.
    let matrix = Matrix::from_fn(rows.len(), cols.len(), |i, j| {
        let m = rows.get(i).mul(cols.get(j));
        let c = f.coeff(&m);
        if c.is_zero() {
            c
        } else {
            c * Rational::from_integer(m.factorial_product())
        }
    });
    Ok(Catalecticant { degree: a, form_degree: e, matrix })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HilbertFunction(pub Vec<usize>);

impl HilbertFunction {
    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn is_palindromic(&self) -> bool {
        self.0.iter().eq(self.0.iter().rev())
    }

    /// Length of the algebra, `Σ h_i`.
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

pub fn hilbert_function(f: &DualPolynomial) -> Result<HilbertFunction> {
    let e = homogeneous_nonzero_degree(f)?;
    (0..=e).map(|a| catalecticant(f, a).map(|c| c.rank())).collect::<Result<Vec<_>>>().map(HilbertFunction)
}

/// Basis of `[ann F]_a` in reduced echelon form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GradedIdealPiece {
    pub degree: usize,
    pub basis: Vec<PrimalPolynomial>,
}

impl GradedIdealPiece {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Left kernel of the catalecticant, echelonized so the basis is canonical.
pub fn ann_graded_basis(f: &DualPolynomial, a: usize) -> Result<GradedIdealPiece> {
    let cat = catalecticant(f, a)?;
    let n = f.n();
    let mut span = EchelonSpan::new(cat.matrix.rows());
    for v in cat.matrix.left_kernel() {
        span.insert_rational(&v);
    }
    let basis = span.rational_rows().iter().map(|row| PrimalPolynomial::from_coefficient_vector(n, a, row)).collect();
    Ok(GradedIdealPiece { degree: a, basis })
}

/// Minimal generator counts `(j, β_{1,j})` of `ann F`, nonzero entries only.
///
/// `β_{1,j} = dim [ann F]_j - dim(S_1 · [ann F]_{j-1})`. The second term is
/// evaluated through the inverse system: `(S_1 · I_{j-1})^⊥` in `E_j` is the
/// set of forms whose first partials lie in `I_{j-1}^⊥ = S_{e-j+1} ∘ F`,
/// hence `β_{1,j} = dim{lifts of V_{j-1}} - h_j`.
pub fn generator_degrees(f: &DualPolynomial) -> Result<Vec<(usize, usize)>> {
    let e = homogeneous_nonzero_degree(f)?;
    let sys = InverseSystem::of_form(f)?;
    let n = f.n();
    let mut out = Vec::new();
    for j in 1..=e + 1 {
        let prev = sys.piece(j - 1).expect("piece below socle degree").basis();
        let lifted = lift(n, j, &prev, &[]).len();
        let h_j = sys.piece(j).map_or(0, |p| p.dim());
        let beta = lifted - h_j;
        if beta > 0 {
            out.push((j, beta));
        }
    }
    Ok(out)
}

/// Length of `S/ann F`.
pub fn ideal_degree(f: &DualPolynomial) -> Result<usize> {
    hilbert_function(f).map(|h| h.total())
}

/// Whether every generator annihilates `F` (equivalently, the ideal they
/// generate lies in `ann F`).
pub fn contains_in_annihilator(generators: &[PrimalPolynomial], f: &DualPolynomial) -> bool {
    generators.iter().all(|g| contract(g, f).is_zero())
}

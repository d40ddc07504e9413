//! Exact apolarity computations for complete symmetric polynomials and
//! symmetric cubics.

pub mod apolarity;
pub mod betti;
pub mod certificate;
pub mod cubic;
pub mod error;
pub mod fixed;
pub mod generic_rank;
pub mod inverse;
pub mod lefschetz;
pub mod linalg;
pub mod poly;
pub mod scalar;
pub mod symmetric;
pub mod symstruct;

pub use certificate::{PowerSumCertificate, PowerSumTerm, Verdict};
pub use error::{Error, Result};
pub use linalg::{EchelonSpan, Matrix};
pub use poly::{
    contract, phi, phi_inverse, Dual, DualPolynomial, Monomial, Param, ParamPolynomial, Polynomial, Primal,
    PrimalPolynomial, Ring,
};
pub use scalar::{QuadExt, Rational, Scalar};

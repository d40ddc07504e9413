//! Inputs shared by the benchmarks in `benches/`.

use symapolar::cubic::PlanePoint;
use symapolar::scalar::int;
use symapolar::{DualPolynomial, Rational};

/// A point on the tangent line away from the cusp.
pub fn tangent_point() -> PlanePoint {
    PlanePoint::from_ints(1, 1, 0).expect("nonzero")
}

/// A point off the curve and all three lines.
pub fn general_point() -> PlanePoint {
    PlanePoint::from_ints(2, 1, 1).expect("nonzero")
}

pub fn h(n: usize, d: usize) -> DualPolynomial {
    DualPolynomial::complete_symmetric(n, d)
}

/// Fixed parameters for the orbit map of degree `d`.
pub fn orbit_params(d: usize) -> Vec<Rational> {
    (1..=(2 * d - 3) as i64).map(|k| int(k) / int(k + 1)).collect()
}

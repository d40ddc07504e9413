use proptest::prelude::*;
use symapolar::apolarity::hilbert_function;
use symapolar::cubic::{
    cactus_certificate, classify, curve_eval, gamma, memberships, plot_atlas_svg, quadric_diagonalize,
    waring_certificate, waring_rank, ClassificationReport, PlanePoint, Viewport,
};
use symapolar::scalar::{int, rat, Rational};
use symapolar::DualPolynomial;

fn pt(a: i64, b: i64, c: i64) -> PlanePoint {
    PlanePoint::from_ints(a, b, c).unwrap()
}

#[test]
fn report_round_trips_through_json() {
    let r = classify(4, &pt(1, 1, 0)).unwrap();
    let s = serde_json::to_string(&r).unwrap();
    let back: ClassificationReport = serde_json::from_str(&s).unwrap();
    assert_eq!(back, r);
    let v: serde_json::Value = serde_json::from_str(&s).unwrap();
    assert_eq!(v["point"]["a0"], "1/1");
    assert_eq!(v["betti_case"], "vii");
}

#[test]
fn tangent_line_certificates_along_the_line() {
    for n in 3..=5 {
        for t in -3i64..=3 {
            let p = pt(t, 1, 0);
            let c = waring_certificate(n, &p).unwrap();
            assert_eq!(c.len(), 2 * (n - 1), "n={n} p={p}");
            assert!(c.verdict.is_exact(), "n={n} p={p}");
            let cc = cactus_certificate(n, &p).unwrap();
            assert!(cc.ok, "n={n} p={p}");
            assert_eq!(cc.length, n + 1);
        }
    }
}

#[test]
fn dropping_a_term_breaks_every_certificate() {
    for p in [pt(1, 1, 1), pt(1, 1, 0), gamma(&int(1), &int(2)).unwrap(), PlanePoint::flex()] {
        let c = waring_certificate(4, &p).unwrap();
        for i in 0..c.len() {
            assert!(!c.without_term(i).verdict.is_exact(), "p={p} term {i}");
        }
    }
}

#[test]
fn atlas_svg_marks_special_points() {
    let v = Viewport::default();
    let svg = plot_atlas_svg(5, &v);
    assert!(svg.starts_with("<?xml"));
    assert!(svg.trim_end().ends_with("</svg>"));
    let (px, py) = v.to_pixels(-1.5, 0.5);
    assert!(svg.contains(&format!("cx=\"{px:.3}\" cy=\"{py:.3}\"")));
    assert!(svg.matches("<polyline").count() >= 4);
}

fn arb_point() -> impl Strategy<Value = PlanePoint> {
    proptest::array::uniform3((-9i64..=9, 1i64..=4))
        .prop_filter("nonzero", |a| a.iter().any(|&(x, _)| x != 0))
        .prop_map(|a| PlanePoint::new(rat(a[0].0, a[0].1), rat(a[1].0, a[1].1), rat(a[2].0, a[2].1)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn certificates_are_exact_with_claimed_length(n in 3usize..=5, p in arb_point()) {
        let c = waring_certificate(n, &p).unwrap();
        prop_assert!(c.verdict.is_exact());
        prop_assert_eq!(c.len(), waring_rank(n, &memberships(&p)));
    }

    #[test]
    fn ranks_are_ordered(n in 3usize..=5, p in arb_point()) {
        let r = classify(n, &p).unwrap();
        prop_assert!(r.rs_lower_bound <= r.cactus_rank);
        prop_assert!(r.cactus_rank <= r.waring_rank);
        prop_assert_eq!(r.hilbert.clone(), r.hilbert_computed.clone());
        prop_assert!(r.sl_element.is_some());
    }

    #[test]
    fn curve_points_have_rank_at_most_n(n in 3usize..=5, a in -8i64..=8, b in -8i64..=8) {
        prop_assume!(a != 0 || b != 0);
        let p = gamma(&int(a), &int(b)).unwrap();
        prop_assert_eq!(curve_eval(&p), Rational::from_integer(0.into()));
        prop_assert!(waring_rank(n, &memberships(&p)) <= n);
        let hf = hilbert_function(&p.form(n)).unwrap();
        prop_assert!(hf.values()[1] <= n);
    }

    #[test]
    fn diagonalization_reconstructs(coeffs in proptest::collection::vec(-4i64..=4, 6)) {
        let basis = symapolar::poly::monomial_basis(3, 2);
        let c: Vec<Rational> = coeffs.into_iter().map(int).collect();
        let q = DualPolynomial::from_coefficient_vector(3, 2, &c);
        prop_assume!(!q.is_zero());
        let d = quadric_diagonalize(&q).unwrap();
        let back = d.iter().fold(DualPolynomial::zero(3), |acc, (c, l)| &acc + &DualPolynomial::linear(l).pow(2).scale(c));
        prop_assert_eq!(back, q);
        prop_assert!(d.len() <= basis.len());
    }
}

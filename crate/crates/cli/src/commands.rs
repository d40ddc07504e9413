//! One function per subcommand.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use symapolar::apolarity::hilbert_function;
use symapolar::betti::{hilbert_numerator, koszul_betti, BettiTable};
use symapolar::cubic::{
    cactus_certificate, classify, plot_atlas_svg, sweep_points, verify_betti_formula, waring_certificate,
    BettiComparison, ClassificationReport, PlanePoint, Viewport,
};
use symapolar::generic_rank::{
    jacobian_det_check, orbit_term_count, parameter_count, quartic_expected_rank, solve_h4_preimage,
    symmetric_dimension, JacobianCheck,
};
use symapolar::lefschetz::{lefschetz_report, sl_element_for_cubic, LefschetzReport};
use symapolar::scalar::format_rational;
use symapolar::symstruct::{ann_structure_check, decompose_h, quartic_identity_13};
use symapolar::{PowerSumCertificate, PrimalPolynomial, Rational};

use crate::input::{parse_list, parse_point, require_n, FormSpec};
use crate::output::{join, key_values, Report, Table};
use crate::{Global, UsageError};

/// Largest `--grid` radius.
pub const MAX_GRID: i64 = 6;

fn form_spec(g: &Global) -> Result<FormSpec, UsageError> {
    let s = g.form.as_deref().ok_or_else(|| UsageError("--form is required".into()))?;
    FormSpec::parse(s)
}

fn degree(g: &Global) -> Result<usize, UsageError> {
    g.degree.ok_or_else(|| UsageError("--degree is required".into()))
}

fn point(g: &Global) -> Result<PlanePoint, UsageError> {
    let s = g.point.as_deref().ok_or_else(|| UsageError("--point is required".into()))?;
    parse_point(s)
}

/// `--grid R` sweep, or the single `--point`.
fn points(g: &Global) -> Result<Option<Vec<PlanePoint>>, UsageError> {
    match (g.grid, &g.point) {
        (Some(_), Some(_)) => Err(UsageError("--grid and --point are exclusive".into())),
        (Some(r), None) if !(0..=MAX_GRID).contains(&r) => {
            Err(UsageError(format!("--grid {r} is outside 0..={MAX_GRID}")))
        }
        (Some(r), None) => Ok(Some(sweep_points(r))),
        (None, _) => Ok(None),
    }
}

fn sum_of_variables(n: usize) -> PrimalPolynomial {
    PrimalPolynomial::linear(&vec![Rational::from_integer(1.into()); n])
}

fn rationals(v: &[Rational]) -> String {
    join(&v.iter().map(format_rational).collect::<Vec<_>>(), ",")
}

fn with_fault(mut cert: PowerSumCertificate, fault: bool) -> PowerSumCertificate {
    if fault && !cert.is_empty() {
        cert = cert.without_term(cert.len() - 1);
    }
    cert
}

fn certificate_report(cert: &PowerSumCertificate) -> Report {
    let mut table = Table::new(&["coef", "linear", "exp"]);
    let mut text = format!("verdict  {}\nterms    {}\n", verdict_label(cert), cert.len());
    for t in &cert.terms {
        let lin = join(&t.linear, ",");
        text.push_str(&format!("  {} * ({lin})^{}\n", t.coef, t.exp));
        table.push(vec![t.coef.to_string(), lin, t.exp.to_string()]);
    }
    Report::new(cert).text(text).csv(table).falsified(!cert.verdict.is_exact())
}

fn verdict_label(cert: &PowerSumCertificate) -> String {
    if cert.verdict.is_exact() {
        "exact-equal".into()
    } else {
        format!("residual {:e}", cert.verdict.residual())
    }
}

#[derive(Serialize)]
struct Hf {
    hf: Vec<usize>,
}

pub fn hilbert(g: &Global) -> Result<Report, UsageError> {
    let f = form_spec(g)?.build(g.n)?;
    let hf = hilbert_function(&f)?.0;
    let mut table = Table::new(&["i", "h"]);
    for (i, h) in hf.iter().enumerate() {
        table.push(vec![i.to_string(), h.to_string()]);
    }
    let text = join(&hf, " ");
    Ok(Report::new(&Hf { hf }).text(text).csv(table).falsified(g.inject_fault))
}

pub fn slp(g: &Global, ell: Option<&str>) -> Result<Report, UsageError> {
    let spec = form_spec(g)?;
    let f = spec.build(g.n)?;
    let n = f.n();
    let (ell, claimed) = match (ell, &spec) {
        (Some(s), _) => {
            let c = parse_list(s)?;
            if c.len() != n {
                return Err(UsageError(format!("--ell needs {n} coefficients, got {}", c.len())));
            }
            (PrimalPolynomial::linear(&c), false)
        }
        (None, FormSpec::Cubic(p)) if n >= 3 => match sl_element_for_cubic(n, p)? {
            Some((_, l)) => (l, true),
            None => (sum_of_variables(n), true),
        },
        (None, FormSpec::Complete(_)) => (sum_of_variables(n), true),
        (None, _) => (sum_of_variables(n), false),
    };
    let report: LefschetzReport = lefschetz_report(&f, &ell)?;
    let mut table = Table::new(&["i", "j", "rank"]);
    for r in &report.ranks {
        table.push(vec![r.i.to_string(), r.j.to_string(), r.rank.to_string()]);
    }
    let mut text = key_values(&[
        ("ell", rationals(&report.ell)),
        ("hilbert", join(report.hilbert.values(), " ")),
        ("wlp", report.wlp.to_string()),
        ("slp", report.slp.to_string()),
    ]);
    for r in &report.ranks {
        text.push_str(&format!("  x^{} : A_{} -> A_{}  rank {}\n", r.j - r.i, r.i, r.j, r.rank));
    }
    let falsified = (claimed && !report.slp) || g.inject_fault;
    Ok(Report::new(&report).text(text).csv(table).falsified(falsified))
}

pub fn ann_structure(g: &Global) -> Result<Report, UsageError> {
    let n = require_n(g.n)?;
    let mut r = ann_structure_check(n, degree(g)?)?;
    if g.inject_fault {
        r.expected_generators += 1;
        r.ok = false;
    }
    let text = key_values(&[
        ("n", r.n.to_string()),
        ("e", r.e.to_string()),
        ("ann dim", r.ann_dim.to_string()),
        ("M dim", r.m_dim.to_string()),
        ("ell part dim", r.ell_part_dim.to_string()),
        ("expected generators", r.expected_generators.to_string()),
        ("annihilate", r.generators_annihilate.to_string()),
        ("direct sum", r.direct_sum.to_string()),
        ("span equal", r.span_equal.to_string()),
        ("ok", r.ok.to_string()),
    ]);
    Ok(Report::new(&r).text(text).falsified(!r.ok))
}

pub fn verify_decomposition(g: &Global) -> Result<Report, UsageError> {
    let n = require_n(g.n)?;
    let cert = with_fault(decompose_h(n, degree(g)?)?, g.inject_fault);
    Ok(certificate_report(&cert))
}

pub fn quartic13(g: &Global) -> Result<Report, UsageError> {
    Ok(certificate_report(&with_fault(quartic_identity_13(), g.inject_fault)))
}

fn classification_row(r: &ClassificationReport) -> Vec<String> {
    vec![
        r.n.to_string(),
        r.point.to_string(),
        format_rational(&r.curve_value),
        r.betti_case.label().to_string(),
        join(r.hilbert.values(), " "),
        r.waring_rank.to_string(),
        r.cactus_rank.to_string(),
        r.rs_lower_bound.to_string(),
        r.sl_element.as_ref().map_or(String::new(), |w| w.name.clone()),
        r.discrepancy_flags.join("; "),
    ]
}

const CLASSIFICATION_HEADER: [&str; 10] =
    ["n", "point", "curve_value", "case", "hilbert", "waring_rank", "cactus_rank", "rs_bound", "sl_element", "flags"];

fn classification_falsified(r: &ClassificationReport) -> bool {
    r.discrepancy_flags.iter().any(|f| f == "hilbert-mismatch" || f.starts_with("no-sl-candidate"))
}

pub fn classify_cubic(g: &Global) -> Result<Report, UsageError> {
    let n = require_n(g.n)?;
    let pts = match points(g)? {
        Some(pts) => pts,
        None => vec![point(g)?],
    };
    let reports = pts.iter().map(|p| classify(n, p)).collect::<Result<Vec<_>, _>>()?;
    let mut table = Table::new(&CLASSIFICATION_HEADER);
    let mut text = String::new();
    for r in &reports {
        table.push(classification_row(r));
        text.push_str(&key_values(&[
            ("point", r.point.to_string()),
            ("case", r.betti_case.to_string()),
            ("hilbert", join(r.hilbert.values(), " ")),
            ("waring rank", r.waring_rank.to_string()),
            ("cactus rank", r.cactus_rank.to_string()),
            ("sl element", r.sl_element.as_ref().map_or("none".into(), |w| w.name.clone())),
            ("flags", r.discrepancy_flags.join("; ")),
        ]));
    }
    let falsified = reports.iter().any(classification_falsified) || g.inject_fault;
    let report = if g.grid.is_some() { Report::new(&reports) } else { Report::new(&reports[0]) };
    Ok(report.text(text).csv(table).falsified(falsified))
}

pub fn waring_cert(g: &Global) -> Result<Report, UsageError> {
    let cert = waring_certificate(require_n(g.n)?, &point(g)?)?;
    Ok(certificate_report(&with_fault(cert, g.inject_fault)))
}

pub fn cactus_cert(g: &Global) -> Result<Report, UsageError> {
    let mut c = cactus_certificate(require_n(g.n)?, &point(g)?)?;
    if g.inject_fault {
        c.q_at_ones_expected += Rational::from_integer(1.into());
        c.ok = false;
    }
    let text = key_values(&[
        ("point", c.point.to_string()),
        ("generators", c.generators.len().to_string()),
        ("contained", c.contained.to_string()),
        ("scheme hilbert", join(&c.scheme_hilbert, " ")),
        ("length", c.length.to_string()),
        ("q", c.q.to_string()),
        ("q annihilates", c.q_annihilates.to_string()),
        ("q(1,...,1)", format_rational(&c.q_at_ones)),
        ("expected", format_rational(&c.q_at_ones_expected)),
        ("ok", c.ok.to_string()),
    ]);
    Ok(Report::new(&c).text(text).falsified(!c.ok))
}

fn betti_table(t: &BettiTable) -> Table {
    let mut table = Table::new(&["i", "j", "b"]);
    for (i, j, b) in t.entries() {
        table.push(vec![i.to_string(), j.to_string(), b.to_string()]);
    }
    table
}

pub fn betti(g: &Global) -> Result<Report, UsageError> {
    let f = match (&g.form, &g.point) {
        (Some(_), Some(_)) => return Err(UsageError("--form and --point are exclusive".into())),
        (None, Some(_)) => point(g)?.form(require_n(g.n)?),
        _ => form_spec(g)?.build(g.n)?,
    };
    let mut table = koszul_betti(&f)?;
    if g.inject_fault {
        table.add(0, 0, 1);
    }
    let hf = hilbert_function(&f)?;
    let numerator = hilbert_numerator(f.n(), hf.values());
    let mut euler = table.euler_characteristic();
    euler.resize(numerator.len().max(euler.len()), 0);
    let mut expected = numerator.clone();
    expected.resize(euler.len(), 0);
    let consistent = euler == expected;
    Ok(Report::new(&table).text(table.diagram()).csv(betti_table(&table)).falsified(!consistent))
}

fn comparison_text(c: &BettiComparison) -> String {
    let mut s = key_values(&[
        ("n", c.n.to_string()),
        ("point", c.point.to_string()),
        ("case", c.case.to_string()),
        ("equal", c.equal.to_string()),
    ]);
    s.push_str("predicted\n");
    s.push_str(&c.predicted.diagram());
    s.push_str("computed\n");
    s.push_str(&c.computed.diagram());
    for (i, j, p, k) in &c.mismatches {
        s.push_str(&format!("mismatch beta_{i},{j}: predicted {p}, computed {k}\n"));
    }
    s
}

pub fn verify_betti(g: &Global) -> Result<Report, UsageError> {
    let n = require_n(g.n)?;
    let pts = match points(g)? {
        Some(pts) => pts,
        None => vec![point(g)?],
    };
    let mut comparisons = pts.iter().map(|p| verify_betti_formula(n, p)).collect::<Result<Vec<_>, _>>()?;
    if g.inject_fault {
        let c = &mut comparisons[0];
        c.predicted.add(0, 0, 1);
        c.mismatches = c.predicted.diff(&c.computed);
        c.equal = c.mismatches.is_empty();
    }
    let mut table = Table::new(&["n", "point", "case", "equal", "mismatches"]);
    let mut text = String::new();
    for c in &comparisons {
        let cells = join(&c.mismatches.iter().map(|(i, j, p, k)| format!("{i}:{j}:{p}:{k}")).collect::<Vec<_>>(), " ");
        table.push(vec![c.n.to_string(), c.point.to_string(), c.case.label().into(), c.equal.to_string(), cells]);
        text.push_str(&comparison_text(c));
    }
    let falsified = comparisons.iter().any(|c| !c.equal);
    let report = if g.grid.is_some() { Report::new(&comparisons) } else { Report::new(&comparisons[0]) };
    Ok(report.text(text).csv(table).falsified(falsified))
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=5).into())
}

#[derive(Serialize)]
struct GenericRankReport {
    degree: usize,
    n: usize,
    seed: u64,
    parameter_count: usize,
    orbit_terms: usize,
    checks: Vec<JacobianCheck>,
    all_equal: bool,
}

pub fn generic_rank(g: &Global, params: Option<&str>, samples: usize) -> Result<Report, UsageError> {
    let n = require_n(g.n)?;
    let d = degree(g)?;
    let count = parameter_count(d)?;
    let param_sets = match params {
        Some(s) => vec![parse_list(s)?],
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
            (0..samples).map(|_| (0..count).map(|_| random_rational(&mut rng)).collect()).collect()
        }
    };
    let mut checks = param_sets.iter().map(|p| jacobian_det_check(d, n, p)).collect::<Result<Vec<_>, _>>()?;
    if g.inject_fault {
        if let Some(c) = checks.first_mut() {
            c.closed_form += Rational::from_integer(1.into());
            c.equal = c.determinant == c.closed_form;
        }
    }
    let all_equal = checks.iter().all(|c| c.equal);
    let mut table = Table::new(&["params", "determinant", "closed_form", "equal", "equal_up_to_sign"]);
    let mut text = key_values(&[
        ("degree", d.to_string()),
        ("n", n.to_string()),
        ("orbit terms", orbit_term_count(d, n)?.to_string()),
        ("all equal", all_equal.to_string()),
    ]);
    for c in &checks {
        table.push(vec![
            rationals(&c.params),
            format_rational(&c.determinant),
            format_rational(&c.closed_form),
            c.equal.to_string(),
            c.equal_up_to_sign.to_string(),
        ]);
        text.push_str(&format!(
            "  ({})  det {}  closed {}  {}\n",
            rationals(&c.params),
            format_rational(&c.determinant),
            format_rational(&c.closed_form),
            if c.equal { "equal" } else { "differ" }
        ));
    }
    let report = GenericRankReport {
        degree: d,
        n,
        seed: g.seed,
        parameter_count: count,
        orbit_terms: orbit_term_count(d, n)?,
        checks,
        all_equal,
    };
    Ok(Report::new(&report).text(text).csv(table).falsified(!all_equal))
}

pub fn solve_h4(g: &Global) -> Result<Report, UsageError> {
    let n = require_n(g.n)?;
    if g.tol.is_nan() || g.tol <= 0.0 {
        return Err(UsageError(format!("--tol {} must be positive", g.tol)));
    }
    let mut r = solve_h4_preimage(n, g.tol)?;
    if g.inject_fault {
        r.ok = false;
    }
    let mut pairs = vec![
        ("n", r.n.to_string()),
        ("alpha2 degenerate", r.alpha2_degenerate.to_string()),
        ("orbit terms", r.orbit_terms.to_string()),
        ("expected quartic rank", r.expected_quartic_rank.to_string()),
        ("ok", r.ok.to_string()),
    ];
    if let Some(note) = &r.note {
        pairs.push(("note", note.clone()));
    }
    if let Some(s) = &r.solution {
        let fmt = |z: &[f64; 2]| format!("{:.12}{:+.12}i", z[0], z[1]);
        pairs.push(("alphas", s.alphas.iter().map(fmt).collect::<Vec<_>>().join(", ")));
        pairs.push(("c0", fmt(&s.c0)));
        pairs.push(("residual", format!("{:e}", s.residual)));
        pairs.push(("newton steps", s.newton_steps.to_string()));
    }
    let ok = r.ok;
    Ok(Report::new(&r).text(key_values(&pairs)).falsified(!ok))
}

pub fn atlas_plot(g: &Global) -> Result<Report, UsageError> {
    let n = g.n.unwrap_or(4);
    if !(3..=crate::input::MAX_N).contains(&n) {
        return Err(UsageError(format!("--n {n} is outside 3..={}", crate::input::MAX_N)));
    }
    let view = Viewport::default();
    let mut report = Report::new(&view).falsified(g.inject_fault);
    report.svg = Some(plot_atlas_svg(n, &view));
    Ok(report)
}

#[derive(Serialize)]
struct Dims {
    degree: usize,
    affine: usize,
    projective: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    orbit_terms: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    expected_quartic_rank: Option<usize>,
}

pub fn dims(g: &Global) -> Result<Report, UsageError> {
    let d = degree(g)?;
    let (affine, projective) = symmetric_dimension(d)?;
    let n = g.n.map(|n| require_n(Some(n))).transpose()?;
    let orbit_terms = match n {
        Some(n) if (3..=5).contains(&d) => Some(orbit_term_count(d, n)?),
        _ => None,
    };
    let expected_quartic_rank = n.filter(|_| d == 4).map(quartic_expected_rank);
    let dims = Dims { degree: d, affine, projective, n, orbit_terms, expected_quartic_rank };
    let mut pairs =
        vec![("degree", d.to_string()), ("affine", affine.to_string()), ("projective", projective.to_string())];
    if let Some(t) = orbit_terms {
        pairs.push(("orbit terms", t.to_string()));
    }
    if let Some(r) = expected_quartic_rank {
        pairs.push(("expected quartic rank", r.to_string()));
    }
    let mut table = Table::new(&["degree", "affine", "projective"]);
    table.push(vec![d.to_string(), affine.to_string(), projective.to_string()]);
    Ok(Report::new(&dims).text(key_values(&pairs)).csv(table).falsified(g.inject_fault))
}

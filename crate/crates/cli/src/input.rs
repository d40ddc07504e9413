//! Form specs, points and parameter lists from the command line.

use std::fs;

use symapolar::cubic::PlanePoint;
use symapolar::scalar::parse_rational;
use symapolar::{DualPolynomial, Rational};

use crate::UsageError;

/// Largest variable count accepted for explicit forms.
pub const MAX_N: usize = 16;

#[derive(Clone, Debug, PartialEq)]
pub enum FormSpec {
    /// `h:<d>`
    Complete(usize),
    /// `p:<c0,c1,c2>`
    Cubic(PlanePoint),
    /// `raw:@file.json`
    Raw(DualPolynomial),
}

impl FormSpec {
    pub fn parse(s: &str) -> Result<Self, UsageError> {
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| UsageError(format!("form `{s}` must look like h:<d>, p:<c0,c1,c2> or raw:@file.json")))?;
        match kind {
            "h" => rest
                .trim()
                .parse()
                .map(FormSpec::Complete)
                .map_err(|_| UsageError(format!("degree `{rest}` in `{s}` is not a nonnegative integer"))),
            "p" => PlanePoint::parse(rest).map(FormSpec::Cubic).map_err(|e| UsageError(e.to_string())),
            "raw" => {
                let path = rest
                    .strip_prefix('@')
                    .ok_or_else(|| UsageError(format!("raw form `{s}` must name a file as raw:@path")))?;
                let text = fs::read_to_string(path).map_err(|e| UsageError(format!("cannot read `{path}`: {e}")))?;
                let f: DualPolynomial = serde_json::from_str(&text)
                    .map_err(|e| UsageError(format!("`{path}` is not a polynomial term list: {e}")))?;
                Ok(FormSpec::Raw(f))
            }
            other => Err(UsageError(format!("unknown form kind `{other}` (expected h, p or raw)"))),
        }
    }

    /// The dual form in `n` variables (`n` may be implied by a raw form).
    pub fn build(&self, n: Option<usize>) -> Result<DualPolynomial, UsageError> {
        match self {
            FormSpec::Raw(f) => {
                if let Some(n) = n {
                    if n != f.n() {
                        return Err(UsageError(format!(
                            "--n {n} disagrees with the {} variables of the raw form",
                            f.n()
                        )));
                    }
                }
                if f.is_zero() {
                    return Err(UsageError("raw form is zero".into()));
                }
                Ok(f.clone())
            }
            FormSpec::Complete(d) => Ok(DualPolynomial::complete_symmetric(require_n(n)?, *d)),
            FormSpec::Cubic(p) => Ok(p.form(require_n(n)?)),
        }
    }
}

pub fn require_n(n: Option<usize>) -> Result<usize, UsageError> {
    let n = n.ok_or_else(|| UsageError("--n is required".into()))?;
    if n == 0 || n > MAX_N {
        return Err(UsageError(format!("--n {n} is outside the supported range 1..={MAX_N}")));
    }
    Ok(n)
}

pub fn parse_list(s: &str) -> Result<Vec<Rational>, UsageError> {
    s.split(',').map(|t| parse_rational(t).map_err(|e| UsageError(e.to_string()))).collect()
}

pub fn parse_point(s: &str) -> Result<PlanePoint, UsageError> {
    PlanePoint::parse(s).map_err(|e| UsageError(e.to_string()))
}

//! Canonical text forms for the scalar tower.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{exp_decompose, GRat, HbarSeries, PiPoly, Rat, Scalar};
use crate::error::{Error, Result};

/// Parse `a` or `a/b` with integer `a`, `b`; decimal and exponent forms are
/// rejected so that every input is exact.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    if t.contains(['.', 'e', 'E']) {
        return Err(Error::Parse(format!("inexact literal `{s}`")));
    }
    let int = |x: &str| -> Result<BigInt> {
        let x = x.strip_prefix('+').unwrap_or(x);
        if x.is_empty() || x.starts_with('+') {
            return Err(Error::Parse(format!("bad integer in `{s}`")));
        }
        BigInt::from_str(x).map_err(|_| Error::Parse(format!("bad integer in `{s}`")))
    };
    match t.split_once('/') {
        None => Ok(Rat::from_integer(int(&t)?)),
        Some((a, b)) => {
            let d = int(b)?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Ok(Rat::new(int(a)?, d))
        }
    }
}

/// Parse a Gaussian rational such as `1/2-3/4 i`, `i`, `-2i`, `3`.
pub fn parse_grat(s: &str) -> Result<GRat> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.contains(['.', 'e', 'E']) {
        return Err(Error::Parse(format!("inexact literal `{s}`")));
    }
    let Some(body) = t.strip_suffix('i') else {
        return Ok(GRat::real(parse_rat(&t)?));
    };
    let split = body.char_indices().filter(|&(k, c)| k > 0 && (c == '+' || c == '-')).map(|(k, _)| k).next_back();
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let im = match im {
        "" | "+" => Rat::one(),
        "-" => -Rat::one(),
        x => parse_rat(x.strip_suffix('*').unwrap_or(x))?,
    };
    let re = if re.is_empty() { Rat::zero() } else { parse_rat(re)? };
    Ok(GRat::new(re, im))
}

fn monomial(k: u32, j: usize) -> String {
    let mut parts = Vec::new();
    match k {
        0 => {}
        1 => parts.push("pi".to_string()),
        _ => parts.push(format!("pi^{k}")),
    }
    match j {
        0 => {}
        1 => parts.push("h".to_string()),
        _ => parts.push(format!("h^{j}")),
    }
    parts.join("*")
}

fn term(c: &GRat, k: u32, j: usize) -> String {
    let m = monomial(k, j);
    if m.is_empty() {
        if !c.re.is_zero() && !c.im.is_zero() {
            format!("({c})")
        } else {
            c.to_string()
        }
    } else if c.is_one() {
        m
    } else if (-c).is_one() {
        format!("-{m}")
    } else {
        format!("({c})*{m}")
    }
}

fn series_terms(s: &HbarSeries) -> Vec<String> {
    let mut out = Vec::new();
    for (j, p) in s.coeffs().iter().enumerate() {
        for (k, c) in p.terms() {
            out.push(term(c, k, j));
        }
    }
    out
}

/// `1 + pi^2*h + (1/2)*pi^4*h^2`; `0` for the zero series.
pub fn render_series(s: &HbarSeries) -> String {
    let t = series_terms(s);
    if t.is_empty() {
        "0".into()
    } else {
        t.join(" + ")
    }
}

pub fn render_pipoly(p: &PiPoly) -> String {
    render_series(&HbarSeries::constant(1, p.clone()))
}

/// Polynomial form, prefixed by `exp(pi*i*q)*` when the unit is nontrivial.
pub fn render_scalar(s: &Scalar) -> String {
    let terms = series_terms(s.series());
    let body = match terms.len() {
        0 => return "0".into(),
        1 => terms[0].clone(),
        _ => terms.join(" + "),
    };
    if s.unit().is_one() {
        body
    } else if terms.len() == 1 && !body.starts_with('-') {
        format!("{}*{}", s.unit(), body)
    } else {
        format!("{}*({})", s.unit(), body)
    }
}

/// `exp(pi*i*q)*r*exp(log)` when the scalar is a unit, else the polynomial form.
pub fn render_scalar_exp(s: &Scalar) -> String {
    let Ok(d) = exp_decompose(s) else {
        return render_scalar(s);
    };
    let mut parts = Vec::new();
    if !d.phase.is_one() {
        parts.push(d.phase.to_string());
    }
    if !d.modulus.is_one() {
        parts.push(term(&d.modulus, 0, 0));
    }
    if !d.log.is_zero() {
        parts.push(format!("exp({})", render_series(&d.log)));
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

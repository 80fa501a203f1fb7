//! Text forms for exponential sums.
//!
//! Canonical form: `(1 + h)*E[pi*(1,0|0,0)+pi*(1/2)]` with slot-grouped
//! coefficient vectors, terms joined by ` + `, `0` for the zero sum. The
//! parser also accepts named variables inside `E[...]` (`E[pi*(q+p)]`) and
//! `exp(...)` of constants (`exp(pi^2*h)`, `exp(pi*i*1/3)`).

use std::sync::Arc;

use num_traits::{Signed, Zero};

use super::{ExpSum, ExpTerm, LinForm, SlotSpec};
use crate::coeff::text::{render_scalar, render_scalar_exp};
use crate::coeff::{GRat, HbarSeries, PiPoly, Rat, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Style {
    /// Write exponents with variable names instead of coefficient vectors.
    pub named: bool,
    /// Write unit coefficients as `phase*modulus*exp(log)`.
    pub exp_coeffs: bool,
}

fn named_coeff(c: &GRat, var: &str) -> String {
    if c.is_one() {
        var.to_string()
    } else if (-c).is_one() {
        format!("-{var}")
    } else if c.is_real() {
        format!("{}*{var}", c.re)
    } else {
        format!("({c})*{var}")
    }
}

fn render_exponent(e: &LinForm, spec: &SlotSpec, named: bool) -> String {
    let mut groups = Vec::new();
    if named {
        let mut s = String::new();
        for (c, v) in e.coeffs.iter().zip(spec.var_names()) {
            if c.is_zero() {
                continue;
            }
            let t = named_coeff(c, v);
            if !s.is_empty() && !t.starts_with('-') {
                s.push('+');
            }
            s.push_str(&t);
        }
        if s.is_empty() && spec.dim() > 0 {
            s.push('0');
        }
        if !s.is_empty() {
            groups.push(format!("pi*({s})"));
        }
    } else if spec.dim() > 0 {
        let parts: Vec<String> = (0..spec.slots().len())
            .map(|k| e.coeffs[spec.slot_range(k)].iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        groups.push(format!("pi*({})", parts.join("|")));
    }
    if !e.pi_const.is_zero() {
        groups.push(format!("pi*({})", e.pi_const));
    }
    format!("E[{}]", groups.join("+"))
}

fn has_top_level_sum(s: &str) -> bool {
    let mut depth = 0i32;
    let b = s.as_bytes();
    for (k, &ch) in b.iter().enumerate() {
        match ch {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' if depth == 0 && k > 0 && b[k - 1] == b' ' => return true,
            _ => {}
        }
    }
    false
}

pub fn render_term(t: &ExpTerm, spec: &SlotSpec, style: Style) -> String {
    let c = if style.exp_coeffs { render_scalar_exp(&t.coeff) } else { render_scalar(&t.coeff) };
    if t.exponent.is_zero() {
        return c;
    }
    let e = render_exponent(&t.exponent, spec, style.named);
    match c.as_str() {
        "1" => e,
        "-1" => format!("-{e}"),
        _ if has_top_level_sum(&c) => format!("({c})*{e}"),
        _ => format!("{c}*{e}"),
    }
}

pub fn render_with(f: &ExpSum, style: Style) -> String {
    if f.is_zero() {
        return "0".into();
    }
    f.terms().map(|t| render_term(&t, f.space(), style)).collect::<Vec<_>>().join(" + ")
}

/// Canonical rendering.
pub fn render(f: &ExpSum) -> String {
    render_with(f, Style::default())
}

impl std::fmt::Display for ExpSum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", render(self))
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rat),
    Ident(String),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    let digits = |k: &mut usize| {
        let st = *k;
        while *k < cs.len() && cs[*k].is_ascii_digit() {
            *k += 1;
        }
        cs[st..*k].iter().collect::<String>()
    };
    while k < cs.len() {
        let c = cs[k];
        if c.is_whitespace() {
            k += 1;
        } else if c.is_ascii_digit() {
            let a = digits(&mut k);
            if k < cs.len() && (cs[k] == '.' || cs[k] == 'e' && k + 1 < cs.len() && cs[k + 1].is_ascii_digit()) {
                return Err(Error::Parse(format!("inexact literal near `{a}{}`", cs[k])));
            }
            let mut text = a;
            if k + 1 < cs.len() && cs[k] == '/' && cs[k + 1].is_ascii_digit() {
                k += 1;
                text = format!("{text}/{}", digits(&mut k));
            }
            out.push(Tok::Num(crate::coeff::text::parse_rat(&text)?));
        } else if c.is_alphabetic() || c == '_' {
            let st = k;
            while k < cs.len() && (cs[k].is_alphanumeric() || cs[k] == '_') {
                k += 1;
            }
            out.push(Tok::Ident(cs[st..k].iter().collect()));
        } else if "+-*^()[],|".contains(c) {
            out.push(Tok::Sym(c));
            k += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    space: &'a Arc<SlotSpec>,
    order: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::Parse(format!("expected `{c}` at token {}", self.pos)))
        }
    }

    fn constant(&self, c: PiPoly) -> ExpSum {
        ExpSum::constant(self.space.clone(), Scalar::from_series(HbarSeries::constant(self.order, c)))
    }

    fn expr(&mut self) -> Result<ExpSum> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?)?;
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<ExpSum> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.factor()?)?;
            } else if matches!(self.peek(), Some(Tok::Ident(s)) if s == "i") {
                // `3/4 i`
                acc = acc.mul(&self.factor()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<ExpSum> {
        if self.eat('-') {
            return Ok(self.factor()?.neg());
        }
        if self.eat('+') {
            return self.factor();
        }
        let base = self.atom()?;
        if self.eat('^') {
            let Some(Tok::Num(k)) = self.peek().cloned() else {
                return Err(Error::Parse("expected exponent".into()));
            };
            self.pos += 1;
            if !k.is_integer() || k.is_negative() {
                return Err(Error::Parse("exponent must be a nonnegative integer".into()));
            }
            let k: usize = k.to_integer().try_into().map_err(|_| Error::Parse("exponent too large".into()))?;
            let mut acc = ExpSum::one(self.space.clone(), self.order);
            for _ in 0..k {
                acc = acc.mul(&base)?;
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ExpSum> {
        match self.peek().cloned() {
            Some(Tok::Num(r)) => {
                self.pos += 1;
                Ok(self.constant(PiPoly::constant(GRat::real(r))))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Ident(id)) => {
                self.pos += 1;
                match id.as_str() {
                    "i" => Ok(self.constant(PiPoly::constant(GRat::i()))),
                    "pi" => Ok(self.constant(PiPoly::pi_pow(1))),
                    "h" => Ok(ExpSum::constant(self.space.clone(), Scalar::from_series(HbarSeries::hbar(self.order)))),
                    "exp" => {
                        self.expect('(')?;
                        let arg = self.expr()?;
                        self.expect(')')?;
                        self.exp_of_constant(&arg)
                    }
                    "E" => {
                        self.expect('[')?;
                        let t = self.exponent()?;
                        self.expect(']')?;
                        ExpSum::from_term(self.space.clone(), t)
                    }
                    _ => Err(Error::Parse(format!("unknown name `{id}` outside E[...]"))),
                }
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }

    fn exp_of_constant(&self, arg: &ExpSum) -> Result<ExpSum> {
        let dim = self.space.dim();
        let mut series = HbarSeries::zero(self.order);
        for t in arg.terms() {
            if !t.exponent.is_zero() || !t.coeff.unit().is_one() {
                return Err(Error::Parse("exp(...) takes a polynomial in pi, i and h".into()));
            }
            series = series.try_add(t.coeff.series())?;
        }
        let p0 = series.coeff(0).clone();
        if p0.terms().any(|(k, _)| k != 1) {
            return Err(Error::Parse("the h^0 part of exp(...) must be a multiple of pi".into()));
        }
        let rest = series.try_sub(&HbarSeries::constant(self.order, p0.clone()))?;
        let t = ExpTerm::from_parts(Scalar::one(self.order), vec![GRat::zero(); dim], &p0.coeff(1), Some(&rest))?;
        ExpSum::from_term(self.space.clone(), t)
    }

    /// `pi*(...)` groups joined by `+`.
    fn exponent(&mut self) -> Result<ExpTerm> {
        let dim = self.space.dim();
        let mut coeffs = vec![GRat::zero(); dim];
        let mut konst = GRat::zero();
        let mut first = true;
        loop {
            match self.peek() {
                Some(Tok::Ident(s)) if s == "pi" => self.pos += 1,
                _ => return Err(Error::Parse("expected `pi*(...)` in E[...]".into())),
            }
            self.expect('*')?;
            let entries = if self.eat('(') {
                let e = self.linear_list()?;
                self.expect(')')?;
                e
            } else {
                vec![vec![self.linear_term()?]]
            };
            let is_vector = first
                && dim > 0
                && entries.len() == dim
                && entries.iter().all(|e| e.iter().all(|(_, v)| v.is_none()))
                && (dim > 1 || entries.len() == 1);
            if is_vector {
                for (c, e) in coeffs.iter_mut().zip(&entries) {
                    for (x, _) in e {
                        *c += x;
                    }
                }
            } else {
                if entries.len() != 1 {
                    return Err(Error::Parse(format!("coefficient vector needs {dim} entries")));
                }
                for (x, v) in &entries[0] {
                    match v {
                        None => konst += x,
                        Some(name) => {
                            let k = self
                                .space
                                .var_index(name)
                                .ok_or_else(|| Error::Parse(format!("unknown variable `{name}`")))?;
                            coeffs[k] += x;
                        }
                    }
                }
            }
            first = false;
            if !self.eat('+') {
                break;
            }
        }
        ExpTerm::from_parts(Scalar::one(self.order), coeffs, &konst, None)
    }

    /// Entries separated by `,` or `|`; each a list of (coefficient, variable).
    fn linear_list(&mut self) -> Result<Vec<Vec<(GRat, Option<String>)>>> {
        let mut out = vec![self.linear()?];
        while self.eat(',') || self.eat('|') {
            out.push(self.linear()?);
        }
        Ok(out)
    }

    fn linear(&mut self) -> Result<Vec<(GRat, Option<String>)>> {
        let mut out = Vec::new();
        let mut sign = GRat::one();
        if self.eat('-') {
            sign = GRat::int(-1);
        } else {
            self.eat('+');
        }
        loop {
            let (c, v) = self.linear_term()?;
            out.push((&sign * &c, v));
            if self.eat('+') {
                sign = GRat::one();
            } else if self.eat('-') {
                sign = GRat::int(-1);
            } else {
                return Ok(out);
            }
        }
    }

    fn linear_term(&mut self) -> Result<(GRat, Option<String>)> {
        let mut c = GRat::one();
        let mut var: Option<String> = None;
        loop {
            match self.peek().cloned() {
                Some(Tok::Num(r)) => {
                    self.pos += 1;
                    c *= &GRat::real(r);
                }
                Some(Tok::Ident(s)) if s == "i" => {
                    self.pos += 1;
                    c *= &GRat::i();
                }
                Some(Tok::Ident(s)) => {
                    if var.is_some() {
                        return Err(Error::Parse("exponent must be linear".into()));
                    }
                    self.pos += 1;
                    var = Some(s);
                }
                Some(Tok::Sym('(')) => {
                    self.pos += 1;
                    let inner = self.linear()?;
                    self.expect(')')?;
                    let mut s = GRat::zero();
                    for (x, v) in inner {
                        if v.is_some() {
                            return Err(Error::Parse("variables inside a coefficient".into()));
                        }
                        s += &x;
                    }
                    c *= &s;
                }
                Some(Tok::Sym('-')) => {
                    self.pos += 1;
                    c = -c;
                    continue;
                }
                _ => return Err(Error::Parse("expected a coefficient or variable".into())),
            }
            if !self.eat('*') && !matches!(self.peek(), Some(Tok::Ident(s)) if s == "i") {
                return Ok((c, var));
            }
        }
    }
}

/// Parse an expression over `space` at truncation order `order`.
pub fn parse(text: &str, space: &Arc<SlotSpec>, order: usize) -> Result<ExpSum> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0, space, order };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expalg::{darboux, Orientation, Slot};

    fn two_slots() -> Arc<SlotSpec> {
        Arc::new(
            SlotSpec::new(vec![
                Slot::poisson("V", &["q", "p"], darboux(), Orientation::Normal),
                Slot::commutative("W", &["u", "w"]),
            ])
            .unwrap(),
        )
    }

    #[test]
    fn canonical_roundtrip() {
        let s = two_slots();
        for text in [
            "E[pi*(1,0|0,0)]",
            "(1 + h)*E[pi*(1,0|0,1/2-3/4 i)]",
            "exp(pi*i*1/3)*(1 + pi^2*h)*E[pi*(0,1|0,0)+pi*(-1/2)]",
            "-E[pi*(0,1|0,0)] + E[pi*(1,0|0,0)]",
            "(1+i)",
            "0",
        ] {
            let f = parse(text, &s, 3).unwrap();
            assert_eq!(render(&f), text, "input {text}");
        }
    }

    #[test]
    fn named_and_exp_forms() {
        let s = two_slots();
        let f = parse("exp(pi^2*h)*E[pi*(q+p)]", &s, 3).unwrap();
        let g = parse("E[pi*q]", &s, 3).unwrap().star(&parse("E[pi*p]", &s, 3).unwrap()).unwrap();
        assert_eq!(f, g);
        let style = Style { named: true, exp_coeffs: true };
        assert_eq!(render_with(&g, style), "exp(pi^2*h)*E[pi*(q+p)]");
        let h = parse("E[pi*(2*q-(1/2)*p+i*u+1/3)]", &s, 2).unwrap();
        assert_eq!(render(&h), "E[pi*(2,-1/2|i,0)+pi*(1/3)]");
        assert_eq!(parse(&render_with(&h, style), &s, 2).unwrap(), h);
    }

    #[test]
    fn errors() {
        let s = two_slots();
        assert!(parse("E[pi*(x)]", &s, 2).is_err());
        assert!(parse("0.5", &s, 2).is_err());
        assert!(parse("exp(1)", &s, 2).is_err());
        assert!(parse("E[pi*(q*p)]", &s, 2).is_err());
    }
}

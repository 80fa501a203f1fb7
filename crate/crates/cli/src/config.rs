//! Run configuration: JSON with exact numeric entries.
//!
//! Entries are JSON integers or strings in the Gaussian rational syntax
//! (`"1/2"`, `"-3 i"`, `"1/2-3/4 i"`); JSON floats are rejected.

use std::fmt;

use nct::coeff::text::{parse_grat, parse_rat};
use nct::coeff::{CircleConst, GRat, Rat};
use nct::picard::{NsData, QahData, Semicharacter};
use nct::torus::{validate_torus, Torus, TorusData};
use serde_json::Value;

pub const SUITES: [&str; 8] = ["torus", "quantizable", "qpic", "poincare", "convolution", "gerbe", "fm", "cohomology"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

type Res<T> = std::result::Result<T, ConfigError>;

fn err<T>(path: &str, message: impl Into<String>) -> Res<T> {
    Err(ConfigError { path: path.into(), message: message.into() })
}

#[derive(Debug, Clone)]
pub struct BundleSpec {
    pub name: String,
    pub ns: NsData,
    /// Semicharacter angles `q` (value `exp(pi i q)`) on the generators.
    pub chi: Semicharacter,
    pub l: Vec<Vec<GRat>>,
    pub expect_quantizable: Option<bool>,
}

impl BundleSpec {
    pub fn qah(&self) -> QahData {
        QahData::new(self.ns.clone(), self.chi.clone(), self.l.clone())
    }
}

#[derive(Debug, Clone)]
pub struct SectionSpec {
    pub s: Vec<GRat>,
    pub l: Vec<Vec<GRat>>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub name: String,
    pub torus: TorusData,
    pub window: i64,
    pub bundles: Vec<BundleSpec>,
    pub checks: Vec<String>,
    pub sections: Vec<SectionSpec>,
}

fn number(v: &Value, path: &str) -> Res<GRat> {
    match v {
        Value::Number(n) => match n.as_i64() {
            Some(k) => Ok(GRat::int(k)),
            None => err(path, format!("inexact numeric literal {n}; write it as a string fraction")),
        },
        Value::String(s) => parse_grat(s).or_else(|e| err(path, e.to_string())),
        _ => err(path, "expected a number or a string"),
    }
}

fn rational(v: &Value, path: &str) -> Res<Rat> {
    match v {
        Value::String(s) => parse_rat(s).or_else(|e| err(path, e.to_string())),
        _ => {
            let g = number(v, path)?;
            if !g.is_real() {
                return err(path, "expected a real number");
            }
            Ok(g.re)
        }
    }
}

fn array<'a>(v: &'a Value, path: &str) -> Res<&'a Vec<Value>> {
    v.as_array().map_or_else(|| err(path, "expected an array"), Ok)
}

fn vector(v: &Value, path: &str, len: usize) -> Res<Vec<GRat>> {
    let a = array(v, path)?;
    if a.len() != len {
        return err(path, format!("expected {len} entries, found {}", a.len()));
    }
    a.iter().enumerate().map(|(i, x)| number(x, &format!("{path}[{i}]"))).collect()
}

fn matrix(v: &Value, path: &str, rows: usize, cols: usize) -> Res<Vec<Vec<GRat>>> {
    let a = array(v, path)?;
    if a.len() != rows {
        return err(path, format!("expected {rows} rows, found {}", a.len()));
    }
    a.iter().enumerate().map(|(i, r)| vector(r, &format!("{path}[{i}]"), cols)).collect()
}

fn vectors(v: Option<&Value>, path: &str, len: usize) -> Res<Vec<Vec<GRat>>> {
    match v {
        None => Ok(Vec::new()),
        Some(v) => array(v, path)?.iter().enumerate().map(|(i, x)| vector(x, &format!("{path}[{i}]"), len)).collect(),
    }
}

fn positive(v: Option<&Value>, path: &str, default: i64) -> Res<i64> {
    match v {
        None => Ok(default),
        Some(Value::Number(n)) if n.as_i64().is_some_and(|k| k >= 0) => Ok(n.as_i64().unwrap()),
        Some(_) => err(path, "expected a nonnegative integer"),
    }
}

const KEYS: [&str; 9] = ["name", "g", "lattice", "poisson", "order", "window", "bundles", "checks", "sections"];

pub fn parse_config(text: &str) -> Res<RunConfig> {
    let root: Value = serde_json::from_str(text)
        .or_else(|e| err("", format!("invalid JSON at line {} column {}: {e}", e.line(), e.column())))?;
    let obj = root.as_object().map_or_else(|| err("", "expected a JSON object"), Ok)?;
    if let Some(k) = obj.keys().find(|k| !KEYS.contains(&k.as_str())) {
        return err(k, "unknown field");
    }
    let g = match obj.get("g") {
        Some(Value::Number(n)) if n.as_u64().is_some_and(|k| (1..=4).contains(&k)) => n.as_u64().unwrap() as usize,
        Some(_) => return err("g", "expected an integer between 1 and 4"),
        None => return err("g", "missing"),
    };
    let lattice = matrix(obj.get("lattice").unwrap_or(&Value::Null), "lattice", 2 * g, g)?;
    let poisson = match obj.get("poisson") {
        Some(v) => matrix(v, "poisson", g, g)?,
        None => vec![vec![GRat::zero(); g]; g],
    };
    let order = positive(obj.get("order"), "order", 4)? as usize;
    if order < 2 {
        return err("order", "truncation order must be at least 2");
    }
    let window = positive(obj.get("window"), "window", 1)?;
    let torus = TorusData { g, lattice, poisson, order };
    validate_torus(&torus).or_else(|e| err("lattice", e.to_string()))?;
    let t = Torus::new(torus.clone()).or_else(|e| err("lattice", e.to_string()))?;

    let mut bundles = Vec::new();
    if let Some(v) = obj.get("bundles") {
        for (i, b) in array(v, "bundles")?.iter().enumerate() {
            bundles.push(parse_bundle(b, &format!("bundles[{i}]"), &t)?);
        }
    }
    let checks = match obj.get("checks") {
        None => SUITES.iter().map(|s| s.to_string()).collect(),
        Some(v) => {
            let mut out = Vec::new();
            for (i, c) in array(v, "checks")?.iter().enumerate() {
                let p = format!("checks[{i}]");
                let name = c.as_str().map_or_else(|| err(&p, "expected a suite name"), Ok)?;
                if !SUITES.contains(&name) {
                    return err(&p, format!("unknown suite `{name}`"));
                }
                out.push(name.to_string());
            }
            out
        }
    };
    let mut sections = Vec::new();
    if let Some(v) = obj.get("sections") {
        for (i, s) in array(v, "sections")?.iter().enumerate() {
            let p = format!("sections[{i}]");
            let o = s.as_object().map_or_else(|| err(&p, "expected an object"), Ok)?;
            sections.push(SectionSpec {
                s: vector(o.get("s").unwrap_or(&Value::Null), &format!("{p}.s"), g)?,
                l: vectors(o.get("l"), &format!("{p}.l"), g)?,
            });
        }
    }
    let name = obj.get("name").and_then(Value::as_str).unwrap_or("unnamed").to_string();
    Ok(RunConfig { name, torus, window, bundles, checks, sections })
}

fn parse_bundle(v: &Value, path: &str, t: &Torus) -> Res<BundleSpec> {
    let g = t.g();
    let o = v.as_object().map_or_else(|| err(path, "expected an object"), Ok)?;
    let name = o.get("name").and_then(Value::as_str).unwrap_or(path).to_string();
    let ns = NsData { h: matrix(o.get("H").unwrap_or(&Value::Null), &format!("{path}.H"), g, g)? };
    if !ns.is_hermitian() {
        return err(&format!("{path}.H"), "not Hermitian");
    }
    if ns.im_matrix(t).is_none() {
        return err(&format!("{path}.H"), "Im H is not integral on the lattice");
    }
    let chi = match o.get("chi") {
        None => Semicharacter::trivial(2 * g),
        Some(c) => {
            let a = array(c, &format!("{path}.chi"))?;
            if a.len() != 2 * g {
                return err(&format!("{path}.chi"), format!("expected {} angles", 2 * g));
            }
            let values = a
                .iter()
                .enumerate()
                .map(|(i, x)| rational(x, &format!("{path}.chi[{i}]")).map(CircleConst::new))
                .collect::<Res<_>>()?;
            Semicharacter { values }
        }
    };
    let l = vectors(o.get("l"), &format!("{path}.l"), g)?;
    if l.len() >= t.order() {
        return err(&format!("{path}.l"), format!("at most {} vectors at this truncation", t.order() - 1));
    }
    let expect_quantizable = match o.get("expect_quantizable") {
        None => None,
        Some(Value::Bool(b)) => Some(*b),
        Some(_) => return err(&format!("{path}.expect_quantizable"), "expected a boolean"),
    };
    Ok(BundleSpec { name, ns, chi, l, expect_quantizable })
}

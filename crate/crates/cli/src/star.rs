//! `nct star`: the normalized star product of two expressions with a
//! Taylor-oracle cross-check.

use std::sync::Arc;

use nct::coeff::text::parse_grat;
use nct::coeff::GRat;
use nct::expalg::text::{parse, render_with, Style};
use nct::expalg::{taylor_expand, taylor_star_oracle, Orientation, Slot, SlotKind, SlotSpec};

/// Parses `NAME:vars:kind` slots separated by `;`, where `kind` is `comm`,
/// `pi=M` or `opp=M` with `M` written as `[[a,b],[c,d]]`.
pub fn parse_slots(text: &str) -> Result<SlotSpec, String> {
    let mut slots = Vec::new();
    for part in text.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let mut it = part.splitn(3, ':');
        let (Some(name), Some(vars), Some(kind)) = (it.next(), it.next(), it.next()) else {
            return Err(format!("slot `{part}`: expected NAME:vars:kind"));
        };
        let vars: Vec<String> = vars.split(',').map(|v| v.trim().to_string()).collect();
        let kind = match kind.trim() {
            "comm" => SlotKind::Commutative,
            k => {
                let (orientation, m) = if let Some(m) = k.strip_prefix("pi=") {
                    (Orientation::Normal, m)
                } else if let Some(m) = k.strip_prefix("opp=") {
                    (Orientation::Opposite, m)
                } else {
                    return Err(format!("slot `{name}`: unknown kind `{k}`"));
                };
                SlotKind::Poisson { matrix: parse_matrix(m).map_err(|e| format!("slot `{name}`: {e}"))?, orientation }
            }
        };
        slots.push(Slot { name: name.trim().to_string(), vars, kind });
    }
    SlotSpec::new(slots).map_err(|e| e.to_string())
}

fn parse_matrix(text: &str) -> Result<Vec<Vec<GRat>>, String> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = t
        .strip_prefix("[[")
        .and_then(|x| x.strip_suffix("]]"))
        .ok_or_else(|| format!("matrix `{text}` must look like [[a,b],[c,d]]"))?;
    inner.split("],[").map(|row| row.split(',').map(|x| parse_grat(x).map_err(|e| e.to_string())).collect()).collect()
}

#[derive(Debug)]
pub struct StarOutcome {
    pub product: String,
    pub oracle_ok: bool,
}

pub const ORACLE_DEGREE: u32 = 4;

pub fn star_repl(lhs: &str, rhs: &str, slots: &str, order: usize) -> Result<StarOutcome, String> {
    let spec = Arc::new(parse_slots(slots)?);
    let f = parse(lhs, &spec, order).map_err(|e| format!("left operand: {e}"))?;
    let g = parse(rhs, &spec, order).map_err(|e| format!("right operand: {e}"))?;
    let p = f.star(&g).map_err(|e| e.to_string())?;
    let closed = taylor_expand(&p, ORACLE_DEGREE).map_err(|e| e.to_string())?;
    let oracle = taylor_star_oracle(&f, &g, ORACLE_DEGREE).map_err(|e| e.to_string())?;
    Ok(StarOutcome { product: render_with(&p, Style { named: true, exp_coeffs: true }), oracle_ok: closed == oracle })
}

#[cfg(test)]
mod tests {
    use super::*;

    const QP: &str = "V:q,p:pi=[[0,1],[-1,0]]";

    #[test]
    fn exponential_law() {
        let out = star_repl("E[pi*q]", "E[pi*p]", QP, 3).unwrap();
        assert_eq!(out.product, "exp(pi^2*h)*E[pi*(q+p)]");
        assert!(out.oracle_ok);
    }

    #[test]
    fn unit_and_commutative() {
        let f = "(1+h)*E[pi*(q-p)] + 2*E[pi*(q-(1/2)*p)]";
        let unit = star_repl("1", f, QP, 3).unwrap();
        assert_eq!(unit.product, star_repl(f, "1", QP, 3).unwrap().product);
        let comm = "V:q,p:comm";
        let a = star_repl("E[pi*q]", "E[pi*p]", comm, 3).unwrap();
        assert_eq!(a.product, "E[pi*(q+p)]");
        assert!(a.oracle_ok);
    }

    #[test]
    fn slot_errors() {
        assert!(parse_slots("V:q,p").is_err());
        assert!(parse_slots("V:q,p:pi=[[0,1]]").is_err());
        assert!(parse_slots("V:q,p:weird").is_err());
        let s = parse_slots("A:a1,a2:pi=[[0,1/2],[-1/2,0]]; C:c:comm; B:b1,b2:opp=[[0,1],[-1,0]]").unwrap();
        assert_eq!(s.dim(), 5);
    }
}

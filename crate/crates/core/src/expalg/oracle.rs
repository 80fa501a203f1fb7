//! Independent check of the closed-form product: expand the exponentials as
//! polynomials and apply the bidifferential operator term by term.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;

use super::{ExpSum, ExpTerm, LinForm, SlotSpec};
use crate::coeff::{GRat, HbarSeries, PiPoly, Rat, Scalar};
use crate::error::{Error, Result};

type Monomial = Vec<u32>;
type Pairs = BTreeMap<(Monomial, Monomial), GRat>;

/// Polynomial in the slot variables with `h`-series coefficients that may
/// still carry constant exponentials; coefficients are sums over the empty
/// layout.
pub type TaylorPoly = BTreeMap<Monomial, ExpSum>;

fn inv_factorial(k: u32) -> GRat {
    let f: BigInt = (1..=k as u64).map(BigInt::from).product();
    GRat::real(Rat::new(BigInt::from(1), f))
}

/// Powers `a^alpha` for `|alpha| <= max_deg`: the coefficient of the
/// divided power `x^alpha / alpha!` in `E(a.x)`.
fn divided_powers(a: &[GRat], max_deg: u32) -> BTreeMap<Monomial, GRat> {
    let mut out = BTreeMap::new();
    let mut alpha = vec![0u32; a.len()];
    fn rec(a: &[GRat], k: usize, left: u32, c: GRat, alpha: &mut Vec<u32>, out: &mut BTreeMap<Monomial, GRat>) {
        if k == a.len() {
            out.insert(alpha.clone(), c);
            return;
        }
        if a[k].is_zero() {
            alpha[k] = 0;
            rec(a, k + 1, left, c, alpha, out);
            return;
        }
        let mut p = c;
        for e in 0..=left {
            alpha[k] = e;
            rec(a, k + 1, left - e, p.clone(), alpha, out);
            p = &p * &a[k];
        }
        alpha[k] = 0;
    }
    rec(a, 0, max_deg, GRat::one(), &mut alpha, &mut out);
    out
}

fn factorial_inv(m: &[u32]) -> GRat {
    m.iter().fold(GRat::one(), |acc, &e| &acc * &inv_factorial(e))
}

fn degree(m: &[u32]) -> u32 {
    m.iter().sum()
}

/// Whether `(alpha, beta)` can still reach total degree `<= d` with at most
/// `left` further applications of `P`, each lowering both sides by one.
fn alive(al: &[u32], be: &[u32], d: u32, left: u32) -> bool {
    let (a, b) = (degree(al), degree(be));
    a + b <= d + 2 * a.min(b).min(left)
}

/// One application of `P = sum Pi^{ij} <-d_i ->d_j` in the divided-power
/// basis (where a derivative is an index shift), keeping the pairs that can
/// still contribute. `P` does not change the power of `pi`.
fn apply_p(b: &Pairs, pi: &[Vec<GRat>], d: u32, left: u32) -> Pairs {
    let mut out = Pairs::new();
    let nz: Vec<(usize, usize, &GRat)> = pi
        .iter()
        .enumerate()
        .flat_map(|(i, r)| r.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(j, c)| (i, j, c)))
        .collect();
    for ((al, be), c) in b {
        for &(i, j, p) in &nz {
            if al[i] == 0 || be[j] == 0 {
                continue;
            }
            let mut a2 = al.clone();
            let mut b2 = be.clone();
            a2[i] -= 1;
            b2[j] -= 1;
            if !alive(&a2, &b2, d, left) {
                continue;
            }
            *out.entry((a2, b2)).or_default() += &(c * p);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn constant_part(t: &ExpTerm, order: usize) -> ExpSum {
    let empty = Arc::new(SlotSpec::empty());
    let term =
        ExpTerm { coeff: t.coeff.clone(), exponent: LinForm { coeffs: vec![], pi_const: t.exponent.pi_const.clone() } };
    ExpSum::from_term(empty, term).expect("empty layout").scale(&Scalar::one(order)).expect("same order")
}

fn accumulate(out: &mut TaylorPoly, m: Monomial, c: ExpSum) -> Result<()> {
    match out.get_mut(&m) {
        Some(x) => {
            *x = x.add(&c)?;
            if x.is_zero() {
                out.remove(&m);
            }
        }
        None => {
            if !c.is_zero() {
                out.insert(m, c);
            }
        }
    }
    Ok(())
}

/// Taylor expansion of `f` to total degree `d`.
pub fn taylor_expand(f: &ExpSum, d: u32) -> Result<TaylorPoly> {
    let mut out = TaylorPoly::new();
    for t in f.terms() {
        let base = constant_part(&t, f.order());
        for (m, c) in divided_powers(&t.exponent.coeffs, d) {
            let c = PiPoly::monomial(degree(&m), &c * &factorial_inv(&m));
            let s = Scalar::from_series(HbarSeries::constant(f.order(), c));
            accumulate(&mut out, m, base.scale(&s)?)?;
        }
    }
    Ok(out)
}

/// `f exp(h P) g` on the Taylor polynomials of `f` and `g`, truncated at
/// total degree `d` and modulo `h^N`.
pub fn taylor_star_oracle(f: &ExpSum, g: &ExpSum, d: u32) -> Result<TaylorPoly> {
    if f.space() != g.space() {
        return Err(Error::SlotMismatch);
    }
    if f.order() != g.order() {
        return Err(Error::OrderMismatch(f.order(), g.order()));
    }
    let n = f.order();
    let pi = f.space().effective_bivector();
    let top = d + 2 * (n as u32 - 1);
    let mut out = TaylorPoly::new();
    for s in f.terms() {
        let fs = divided_powers(&s.exponent.coeffs, top);
        for t in g.terms() {
            let gt = divided_powers(&t.exponent.coeffs, top);
            let mut b = Pairs::new();
            for (al, x) in &fs {
                for (be, y) in &gt {
                    if alive(al, be, d, n as u32 - 1) {
                        b.insert((al.clone(), be.clone()), x * y);
                    }
                }
            }
            let mut by_monomial: BTreeMap<Monomial, Vec<PiPoly>> = BTreeMap::new();
            for k in 0..n {
                if k > 0 {
                    b = apply_p(&b, &pi, d, (n - 1 - k) as u32);
                }
                let w = inv_factorial(k as u32);
                for ((al, be), c) in &b {
                    let m: Monomial = al.iter().zip(be).map(|(x, y)| x + y).collect();
                    let dm = degree(&m);
                    if dm > d {
                        continue;
                    }
                    let slot = by_monomial.entry(m).or_insert_with(|| vec![PiPoly::zero(); n]);
                    let c = &(c * &w) * &(&factorial_inv(al) * &factorial_inv(be));
                    slot[k].add_term(dm + 2 * k as u32, &c);
                }
            }
            let base = constant_part(&s, n).mul(&constant_part(&t, n))?;
            for (m, cs) in by_monomial {
                let series = Scalar::from_series(HbarSeries::from_coeffs(n, cs));
                accumulate(&mut out, m, base.scale(&series)?)?;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expalg::{darboux, Orientation, Slot};

    fn qp() -> Arc<SlotSpec> {
        Arc::new(SlotSpec::new(vec![Slot::poisson("V", &["q", "p"], darboux(), Orientation::Normal)]).unwrap())
    }

    #[test]
    fn one_times_one() {
        let s = qp();
        let one = ExpSum::one(s.clone(), 3);
        let r = taylor_star_oracle(&one, &one, 4).unwrap();
        assert_eq!(r, taylor_expand(&one, 4).unwrap());
        assert_eq!(r.len(), 1);
    }

    #[test]
    fn q_star_p_matches_closed_form() {
        let s = qp();
        let n = 4;
        let f = ExpSum::from_term(s.clone(), ExpTerm::exp_linear(vec![GRat::one(), GRat::zero()], n)).unwrap();
        let g = ExpSum::from_term(s.clone(), ExpTerm::exp_linear(vec![GRat::zero(), GRat::one()], n)).unwrap();
        let lhs = taylor_star_oracle(&f, &g, 6).unwrap();
        assert_eq!(lhs, taylor_expand(&f.star(&g).unwrap(), 6).unwrap());
        assert_ne!(lhs, taylor_expand(&f.mul(&g).unwrap(), 6).unwrap());
    }

    #[test]
    fn zero_bivector_is_plain_product() {
        let s = Arc::new(SlotSpec::new(vec![Slot::commutative("V", &["q", "p"])]).unwrap());
        let f = ExpSum::from_term(s.clone(), ExpTerm::exp_linear(vec![GRat::ints(1, 1), GRat::int(2)], 3)).unwrap();
        let g = ExpSum::from_term(s.clone(), ExpTerm::exp_linear(vec![GRat::int(-1), GRat::frac(1, 2)], 3)).unwrap();
        assert_eq!(taylor_star_oracle(&f, &g, 5).unwrap(), taylor_expand(&f.mul(&g).unwrap(), 5).unwrap());
    }
}

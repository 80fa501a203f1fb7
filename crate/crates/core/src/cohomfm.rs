//! Cohomological Fourier-Mukai transform on the exterior-algebra model of
//! `H^*(X x X^dual, Q)`.
//!
//! Generators: `e_1..e_2g` dual to the lattice basis of `X`, `f_1..f_2g`
//! dual to the dual-lattice basis of `X^dual`. A monomial is a bitmask with
//! `e_k` at bit `k` and `f_k` at bit `2g + k`, always read in increasing bit
//! order. Fiber integration over `X` reads the coefficient of
//! `e_1 ^ ... ^ e_2g` placed on the left, and over `X^dual` that of
//! `f_1 ^ ... ^ f_2g` placed on the left.

use std::collections::BTreeMap;

use num_traits::Signed;

use crate::coeff::{GRat, Rat};
use crate::torus::Torus;

/// Fixed basis and orientation convention, recorded in reports.
pub const BASIS_CONVENTION: &str =
    "e_k dual to lattice generators, f_k dual to dual-lattice generators; monomials in increasing order e_1..e_2g f_1..f_2g; fiber integration reads the top form on the left";

/// An element of the exterior algebra on `4g` generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtClass {
    pub g: usize,
    pub terms: BTreeMap<u64, GRat>,
}

/// Sign of `A ^ B` relative to the sorted monomial `A | B`; zero if they share
/// a generator.
fn wedge_sign(a: u64, b: u64) -> i64 {
    if a & b != 0 {
        return 0;
    }
    // each generator of b passes the generators of a above it
    let mut inversions = 0u32;
    let mut rest = b;
    while rest != 0 {
        let k = rest.trailing_zeros();
        inversions += (a >> k).count_ones();
        rest &= rest - 1;
    }
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

impl ExtClass {
    pub fn zero(g: usize) -> Self {
        ExtClass { g, terms: BTreeMap::new() }
    }

    pub fn monomial(g: usize, mask: u64, c: GRat) -> Self {
        let mut r = ExtClass::zero(g);
        r.add_term(mask, &c);
        r
    }

    pub fn one(g: usize) -> Self {
        ExtClass::monomial(g, 0, GRat::one())
    }

    pub fn e(_g: usize, k: usize) -> u64 {
        1 << k
    }

    pub fn f(g: usize, k: usize) -> u64 {
        1 << (2 * g + k)
    }

    pub fn e_mask(g: usize) -> u64 {
        (1u64 << (2 * g)) - 1
    }

    pub fn f_mask(g: usize) -> u64 {
        ExtClass::e_mask(g) << (2 * g)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, mask: u64, c: &GRat) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(mask).or_insert_with(GRat::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&mask);
        }
    }

    pub fn add(&self, o: &ExtClass) -> ExtClass {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(*m, c);
        }
        r
    }

    pub fn scale(&self, c: &GRat) -> ExtClass {
        let mut r = ExtClass::zero(self.g);
        for (m, x) in &self.terms {
            r.add_term(*m, &(x * c));
        }
        r
    }

    pub fn wedge(&self, o: &ExtClass) -> ExtClass {
        let mut r = ExtClass::zero(self.g);
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                let s = wedge_sign(*a, *b);
                if s != 0 {
                    r.add_term(a | b, &(x * y).scale(&Rat::from_integer(s.into())));
                }
            }
        }
        r
    }

    /// Part of total degree `d`.
    pub fn degree_part(&self, d: u32) -> ExtClass {
        let terms = self.terms.iter().filter(|(m, _)| m.count_ones() == d).map(|(m, c)| (*m, c.clone())).collect();
        ExtClass { g: self.g, terms }
    }

    /// Interior product with the vector field whose values on the
    /// generators are `values[k]` (bit `k`).
    pub fn contract(&self, values: &[GRat]) -> ExtClass {
        let mut r = ExtClass::zero(self.g);
        for (m, c) in &self.terms {
            let mut rest = *m;
            let mut pos = 0i64;
            while rest != 0 {
                let k = rest.trailing_zeros() as usize;
                if !values[k].is_zero() {
                    let sign = Rat::from_integer(if pos % 2 == 0 { 1 } else { -1 }.into());
                    r.add_term(m & !(1 << k), &(c * &values[k]).scale(&sign));
                }
                pos += 1;
                rest &= rest - 1;
            }
        }
        r
    }

    pub fn exp(&self) -> ExtClass {
        let mut acc = ExtClass::one(self.g);
        let mut power = ExtClass::one(self.g);
        for k in 1..=(4 * self.g) {
            power = power.wedge(self).scale(&GRat::real(Rat::new(1.into(), (k as i64).into())));
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power);
        }
        acc
    }
}

/// `c_1 = sum M_ij e_i ^ f_j` with `M_ij = Im <xi_j, lambda_i>`.
pub fn c1_poincare(torus: &Torus) -> ExtClass {
    let (g, rank) = (torus.g(), torus.rank());
    let mut r = ExtClass::zero(g);
    for i in 0..rank {
        for j in 0..rank {
            let ei: Vec<i64> = (0..rank).map(|k| i64::from(k == i)).collect();
            let xj: Vec<i64> = (0..rank).map(|k| i64::from(k == j)).collect();
            let m = torus.im_pairing_int(&xj, &ei);
            if m != 0 {
                r = r.add(&ExtClass::monomial(g, ExtClass::e(g, i) | ExtClass::f(g, j), GRat::int(m)));
            }
        }
    }
    r
}

/// Keeps the terms containing all of `top` and strips it, reading it on the left.
fn integrate(beta: &ExtClass, top: u64) -> ExtClass {
    let mut r = ExtClass::zero(beta.g);
    for (m, c) in &beta.terms {
        if m & top == top {
            let rest = m & !top;
            // m = sorted(top | rest); top ^ rest = sign * m
            let s = wedge_sign(top, rest);
            r.add_term(rest, &c.scale(&Rat::from_integer(s.into())));
        }
    }
    r
}

/// `alpha -> p_*(exp(c_1) ^ p^* alpha)` from `X` to `X^dual`.
pub fn fm_transform(alpha: &ExtClass, torus: &Torus) -> ExtClass {
    integrate(&c1_poincare(torus).exp().wedge(alpha), ExtClass::e_mask(torus.g()))
}

/// The transform in the other direction, from `X^dual` back to `X`.
pub fn fm_transform_dual(beta: &ExtClass, torus: &Torus) -> ExtClass {
    integrate(&c1_poincare(torus).exp().wedge(beta), ExtClass::f_mask(torus.g()))
}

/// Composite `S_dual . S` compared with pullback by `-1` (`(-1)^d` on
/// degree `d`) up to one sign per degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FmSquareTable {
    pub g: usize,
    /// `signs[d]`: the composite equals `signs[d] * (-1)^d` on degree `d`,
    /// or `None` if no single rational factor fits.
    pub signs: Vec<Option<Rat>>,
    pub passed: bool,
    pub convention: String,
}

pub fn fm_square_table(torus: &Torus) -> FmSquareTable {
    let g = torus.g();
    let mut signs = Vec::with_capacity(2 * g + 1);
    for d in 0..=(2 * g as u32) {
        let mut factor: Option<Option<Rat>> = None;
        for mask in 0..=ExtClass::e_mask(g) {
            if mask.count_ones() != d {
                continue;
            }
            let alpha = ExtClass::one(g).wedge(&ExtClass::monomial(g, mask, GRat::one()));
            let comp = fm_transform_dual(&fm_transform(&alpha, torus), torus);
            let parity = if d % 2 == 0 { Rat::from_integer(1.into()) } else { Rat::from_integer((-1).into()) };
            let this = match comp.terms.iter().collect::<Vec<_>>().as_slice() {
                [(m, c)] if **m == mask && c.is_real() => Some(&c.re * &parity),
                _ => None,
            };
            factor = Some(match factor {
                None => this,
                Some(prev) if prev == this => prev,
                Some(_) => None,
            });
        }
        signs.push(factor.flatten());
    }
    let one = Rat::from_integer(1.into());
    let passed = signs.iter().all(|s| s.as_ref().is_some_and(|x| x.abs() == one));
    FmSquareTable { g, signs, passed, convention: BASIS_CONVENTION.into() }
}

/// Transport of a bivector: contract `Pi = sum_{a<b} Pi^{ab} d_a ^ d_b` into
/// `exp(c_1)` as `iota_a iota_b` with `e_k(d_a) = conj(xi_{k,a})`, and read
/// the pure `f` part of degree 2 as an antisymmetric matrix on the dual basis.
pub fn fm_hh2(poisson: &[Vec<GRat>], torus: &Torus) -> Vec<Vec<GRat>> {
    let (g, rank) = (torus.g(), torus.rank());
    let exp_c1 = c1_poincare(torus).exp();
    let field = |a: usize| -> Vec<GRat> {
        let mut v = vec![GRat::zero(); 4 * g];
        for (k, xi) in torus.dual.vectors.iter().enumerate() {
            v[k] = xi[a].conj();
        }
        v
    };
    let mut total = ExtClass::zero(g);
    for a in 0..g {
        for b in (a + 1)..g {
            if poisson[a][b].is_zero() {
                continue;
            }
            let t = exp_c1.contract(&field(b)).contract(&field(a));
            total = total.add(&t.scale(&poisson[a][b]));
        }
    }
    let mut m = vec![vec![GRat::zero(); rank]; rank];
    for (mask, c) in &total.degree_part(2).terms {
        if mask & ExtClass::e_mask(g) != 0 {
            continue;
        }
        let k = (mask.trailing_zeros() as usize) - 2 * g;
        let l = (63 - mask.leading_zeros() as usize) - 2 * g;
        m[k][l] = c.clone();
        m[l][k] = -c;
    }
    m
}

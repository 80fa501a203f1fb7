use std::sync::Arc;

use super::{ExpSum, ExpTerm, LinForm, SlotSpec};
use crate::coeff::GRat;
use crate::error::{Error, Result};

/// Affine map `y -> x = M y + t` from the target layout's coordinates to the
/// source layout's coordinates; functions pull back along it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    pub target: Arc<SlotSpec>,
    /// `source_dim` rows, `target_dim` columns.
    pub matrix: Vec<Vec<GRat>>,
    pub shift: Vec<GRat>,
}

impl AffineMap {
    pub fn linear(target: Arc<SlotSpec>, matrix: Vec<Vec<GRat>>) -> Self {
        let shift = vec![GRat::zero(); matrix.len()];
        AffineMap { target, matrix, shift }
    }

    pub fn identity(space: Arc<SlotSpec>) -> Self {
        let d = space.dim();
        let matrix =
            (0..d).map(|i| (0..d).map(|j| if i == j { GRat::one() } else { GRat::zero() }).collect()).collect();
        AffineMap::linear(space, matrix)
    }

    pub fn source_dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn apply_term(&self, t: &ExpTerm) -> Result<ExpTerm> {
        if t.dim() != self.source_dim() {
            return Err(Error::DimensionMismatch { expected: self.source_dim(), got: t.dim() });
        }
        let td = self.target.dim();
        let mut coeffs = vec![GRat::zero(); td];
        for (a, row) in t.exponent.coeffs.iter().zip(&self.matrix) {
            if a.is_zero() {
                continue;
            }
            if row.len() != td {
                return Err(Error::DimensionMismatch { expected: td, got: row.len() });
            }
            for (c, m) in coeffs.iter_mut().zip(row) {
                if !m.is_zero() {
                    *c += &(a * m);
                }
            }
        }
        let mut r =
            ExpTerm { coeff: t.coeff.clone(), exponent: LinForm { coeffs, pi_const: t.exponent.pi_const.clone() } };
        r.absorb_pi_const(&t.exponent.eval_linear(&self.shift));
        Ok(r)
    }
}

/// Pull `f` back along `map`: `E(l) -> E(l o map)`, normalized.
pub fn substitute(f: &ExpSum, map: &AffineMap) -> Result<ExpSum> {
    let mut r = ExpSum::zero(map.target.clone(), f.order());
    for t in f.terms() {
        r.add_term(map.apply_term(&t)?)?;
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::grat::rat;
    use crate::expalg::Slot;

    #[test]
    fn identity_and_shift() {
        let s = Arc::new(SlotSpec::new(vec![Slot::commutative("V", &["x", "y"])]).unwrap());
        let f = ExpSum::from_term(s.clone(), ExpTerm::exp_linear(vec![GRat::one(), GRat::i()], 2)).unwrap();
        assert_eq!(substitute(&f, &AffineMap::identity(s.clone())).unwrap(), f);
        let mut m = AffineMap::identity(s.clone());
        m.shift = vec![GRat::frac(1, 2), GRat::one()];
        let g = substitute(&f, &m).unwrap();
        let t = g.single_term().unwrap();
        assert_eq!(t.exponent.pi_const, rat(1, 2));
        // pi * (1/2 + i): real part stays symbolic, exp(pi i) = -1
        assert_eq!(t.coeff, crate::coeff::Scalar::from_grat(2, GRat::int(-1)));
        assert_eq!(g, f.translate_all(&m.shift).unwrap());
    }
}

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{ExpTerm, LinForm, SlotSpec};
use crate::coeff::{CircleConst, GRat, HbarSeries, Scalar};
use crate::error::{Error, Result};

/// Finite sum of `ExpTerm`s over a slot layout, keyed by normalized exponent
/// and circle constant; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpSum {
    space: Arc<SlotSpec>,
    order: usize,
    terms: BTreeMap<(LinForm, CircleConst), HbarSeries>,
}

impl ExpSum {
    pub fn zero(space: Arc<SlotSpec>, order: usize) -> Self {
        ExpSum { space, order, terms: BTreeMap::new() }
    }

    pub fn one(space: Arc<SlotSpec>, order: usize) -> Self {
        let dim = space.dim();
        ExpSum::from_term(space, ExpTerm::one(dim, order)).expect("dimensions agree")
    }

    pub fn from_term(space: Arc<SlotSpec>, t: ExpTerm) -> Result<Self> {
        let mut s = ExpSum::zero(space, t.order());
        s.add_term(t)?;
        Ok(s)
    }

    pub fn from_terms(space: Arc<SlotSpec>, order: usize, ts: impl IntoIterator<Item = ExpTerm>) -> Result<Self> {
        let mut s = ExpSum::zero(space, order);
        for t in ts {
            s.add_term(t)?;
        }
        Ok(s)
    }

    pub fn constant(space: Arc<SlotSpec>, c: Scalar) -> Self {
        let dim = space.dim();
        ExpSum::from_term(space, ExpTerm::constant(dim, c)).expect("dimensions agree")
    }

    pub fn space(&self) -> &Arc<SlotSpec> {
        &self.space
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        *self == ExpSum::one(self.space.clone(), self.order)
    }

    pub fn terms(&self) -> impl Iterator<Item = ExpTerm> + '_ {
        self.terms.iter().map(|((e, u), s)| ExpTerm { coeff: Scalar::new(u.clone(), s.clone()), exponent: e.clone() })
    }

    /// The unique term, if there is exactly one.
    pub fn single_term(&self) -> Option<ExpTerm> {
        if self.terms.len() == 1 {
            self.terms().next()
        } else {
            None
        }
    }

    pub fn add_term(&mut self, t: ExpTerm) -> Result<()> {
        if t.dim() != self.space.dim() {
            return Err(Error::DimensionMismatch { expected: self.space.dim(), got: t.dim() });
        }
        if t.order() != self.order {
            return Err(Error::OrderMismatch(self.order, t.order()));
        }
        if t.coeff.is_zero() {
            return Ok(());
        }
        let key = (t.exponent, t.coeff.unit().clone());
        let series = t.coeff.series().clone();
        match self.terms.get_mut(&key) {
            Some(s) => {
                *s = s.try_add(&series)?;
                if s.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, series);
            }
        }
        Ok(())
    }

    fn check(&self, o: &ExpSum) -> Result<()> {
        if self.space != o.space {
            return Err(Error::SlotMismatch);
        }
        if self.order != o.order {
            return Err(Error::OrderMismatch(self.order, o.order));
        }
        Ok(())
    }

    pub fn add(&self, o: &ExpSum) -> Result<ExpSum> {
        self.check(o)?;
        let mut r = self.clone();
        for t in o.terms() {
            r.add_term(t)?;
        }
        Ok(r)
    }

    pub fn neg(&self) -> ExpSum {
        self.scale_grat(&GRat::int(-1))
    }

    pub fn sub(&self, o: &ExpSum) -> Result<ExpSum> {
        self.add(&o.neg())
    }

    pub fn scale_grat(&self, c: &GRat) -> ExpSum {
        if c.is_zero() {
            return ExpSum::zero(self.space.clone(), self.order);
        }
        ExpSum {
            space: self.space.clone(),
            order: self.order,
            terms: self.terms.iter().map(|(k, s)| (k.clone(), s.scale(c))).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Result<ExpSum> {
        let mut r = ExpSum::zero(self.space.clone(), self.order);
        for t in self.terms() {
            r.add_term(t.scale(c)?)?;
        }
        Ok(r)
    }

    fn bilinear(&self, o: &ExpSum, f: impl Fn(&ExpTerm, &ExpTerm) -> Result<ExpTerm>) -> Result<ExpSum> {
        self.check(o)?;
        let mut r = ExpSum::zero(self.space.clone(), self.order);
        let rhs: Vec<ExpTerm> = o.terms().collect();
        for a in self.terms() {
            for b in &rhs {
                r.add_term(f(&a, b)?)?;
            }
        }
        Ok(r)
    }

    /// Pointwise (commutative) product.
    pub fn mul(&self, o: &ExpSum) -> Result<ExpSum> {
        self.bilinear(o, |a, b| a.mul(b))
    }

    /// Moyal product with the Poisson structure of the slot layout.
    pub fn star(&self, o: &ExpSum) -> Result<ExpSum> {
        let spec = self.space.clone();
        self.bilinear(o, |a, b| a.star(b, &spec))
    }

    /// Inverse of a single-term sum (the same for both products).
    pub fn star_inverse(&self) -> Result<ExpSum> {
        let t = self.single_term().ok_or(Error::NotInvertible)?;
        ExpSum::from_term(self.space.clone(), t.star_inverse()?)
    }

    /// `h^1` coefficient of `f * g - g * f`, as a function.
    pub fn commutator_coefficient(&self, o: &ExpSum) -> Result<ExpSum> {
        let c = self.star(o)?.sub(&o.star(self)?)?;
        Ok(c.hbar_coefficient(1))
    }

    /// `{f, g} = Pi(df, dg)`, computed termwise as `pi^2 <a, Pi b> E(l1 + l2)`.
    pub fn poisson_bracket(&self, o: &ExpSum) -> Result<ExpSum> {
        let spec = self.space.clone();
        self.bilinear(o, |a, b| {
            let p = spec.pairing(&a.exponent.coeffs, &b.exponent.coeffs);
            let factor = Scalar::from_series(HbarSeries::constant(a.order(), crate::coeff::PiPoly::monomial(2, p)));
            a.mul(b)?.scale(&factor)
        })
    }

    /// The function multiplying `h^j`, as an `h`-constant sum.
    pub fn hbar_coefficient(&self, j: usize) -> ExpSum {
        let mut r = ExpSum::zero(self.space.clone(), self.order);
        for ((e, u), s) in &self.terms {
            let c = HbarSeries::constant(self.order, s.coeff(j).clone());
            r.add_term(ExpTerm { coeff: Scalar::new(u.clone(), c), exponent: e.clone() }).expect("same layout");
        }
        r
    }

    /// Pull back along `x -> x + t` on the whole coordinate vector.
    pub fn translate_all(&self, t: &[GRat]) -> Result<ExpSum> {
        let mut r = ExpSum::zero(self.space.clone(), self.order);
        for term in self.terms() {
            r.add_term(term.translate(t)?)?;
        }
        Ok(r)
    }

    /// Pull back along `v -> v + t` on one slot.
    pub fn translate(&self, slot: usize, t: &[GRat]) -> Result<ExpSum> {
        let range = self.space.slot_range(slot);
        if t.len() != range.len() {
            return Err(Error::DimensionMismatch { expected: range.len(), got: t.len() });
        }
        let mut full = vec![GRat::zero(); self.space.dim()];
        full[range].clone_from_slice(t);
        self.translate_all(&full)
    }

    /// Same terms viewed over another layout with the same dimension.
    pub fn with_space(&self, space: Arc<SlotSpec>) -> Result<ExpSum> {
        if space.dim() != self.space.dim() {
            return Err(Error::DimensionMismatch { expected: self.space.dim(), got: space.dim() });
        }
        Ok(ExpSum { space, order: self.order, terms: self.terms.clone() })
    }
}

/// Free-function forms of the products.
pub fn mul(f: &ExpSum, g: &ExpSum) -> Result<ExpSum> {
    f.mul(g)
}

pub fn star(f: &ExpSum, g: &ExpSum) -> Result<ExpSum> {
    f.star(g)
}

pub fn translate(f: &ExpSum, slot: usize, t: &[GRat]) -> Result<ExpSum> {
    f.translate(slot, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::grat::rat;
    use crate::expalg::{darboux, Orientation, Slot};

    fn space() -> Arc<SlotSpec> {
        Arc::new(
            SlotSpec::new(vec![
                Slot::poisson("V", &["q", "p"], darboux(), Orientation::Normal),
                Slot::commutative("W", &["u"]),
            ])
            .unwrap(),
        )
    }

    fn e(a: i64, b: i64, c: i64) -> ExpTerm {
        ExpTerm::exp_linear(vec![GRat::int(a), GRat::int(b), GRat::int(c)], 3)
    }

    #[test]
    fn half_turns_fold_into_sign() {
        let s = space();
        let mut t = ExpTerm::one(3, 3);
        t.absorb_pi_const(&GRat::new(rat(0, 1), rat(1, 2)));
        let f = ExpSum::from_term(s.clone(), t).unwrap();
        let r = f.mul(&f).unwrap();
        assert_eq!(r, ExpSum::constant(s, Scalar::from_grat(3, GRat::int(-1))));
    }

    #[test]
    fn sums_merge_and_cancel() {
        let s = space();
        let f = ExpSum::from_terms(s.clone(), 3, [e(1, 0, 0), e(0, 1, 0)]).unwrap();
        let g = ExpSum::from_term(s.clone(), e(0, 0, 1)).unwrap();
        let fg = f.mul(&g).unwrap();
        assert_eq!(fg, ExpSum::from_terms(s.clone(), 3, [e(1, 0, 1), e(0, 1, 1)]).unwrap());
        assert!(f.sub(&f).unwrap().is_zero());
    }

    #[test]
    fn commutative_slot_is_pointwise() {
        let s = space();
        let f = ExpSum::from_term(s.clone(), e(0, 0, 2)).unwrap();
        let g = ExpSum::from_term(s.clone(), e(1, 1, 3)).unwrap();
        assert_eq!(f.star(&g).unwrap(), f.mul(&g).unwrap());
    }

    #[test]
    fn commutator_is_twice_bracket() {
        let s = space();
        let f = ExpSum::from_terms(s.clone(), 3, [e(1, 0, 0), e(2, -1, 1)]).unwrap();
        let g = ExpSum::from_term(s.clone(), e(0, 1, 0)).unwrap();
        let c = f.commutator_coefficient(&g).unwrap();
        let b = f.poisson_bracket(&g).unwrap();
        assert_eq!(c, b.scale_grat(&GRat::int(2)));
    }

    #[test]
    fn mismatches_are_errors() {
        let s = space();
        let f = ExpSum::one(s.clone(), 3);
        assert_eq!(f.mul(&ExpSum::one(s.clone(), 2)), Err(Error::OrderMismatch(3, 2)));
        assert_eq!(f.mul(&ExpSum::one(Arc::new(SlotSpec::empty()), 3)), Err(Error::SlotMismatch));
    }
}

use num_traits::Zero;

use super::SlotSpec;
use crate::coeff::{CircleConst, GRat, HbarSeries, Rat, Scalar};
use crate::error::{Error, Result};

/// Normalized exponent `pi * (a . x) + pi * r` with `r` real rational.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinForm {
    pub coeffs: Vec<GRat>,
    pub pi_const: Rat,
}

impl LinForm {
    pub fn zero(dim: usize) -> Self {
        LinForm { coeffs: vec![GRat::zero(); dim], pi_const: Rat::zero() }
    }

    pub fn linear(coeffs: Vec<GRat>) -> Self {
        LinForm { coeffs, pi_const: Rat::zero() }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.pi_const.is_zero() && self.coeffs.iter().all(GRat::is_zero)
    }

    pub fn add(&self, o: &LinForm) -> LinForm {
        LinForm {
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect(),
            pi_const: &self.pi_const + &o.pi_const,
        }
    }

    pub fn neg(&self) -> LinForm {
        LinForm { coeffs: self.coeffs.iter().map(|a| -a).collect(), pi_const: -self.pi_const.clone() }
    }

    /// `a . t` for a point `t` (the factor of `pi`).
    pub fn eval_linear(&self, t: &[GRat]) -> GRat {
        self.coeffs.iter().zip(t).filter(|(a, _)| !a.is_zero()).map(|(a, x)| a * x).sum()
    }
}

/// `coeff * E(exponent)`, `E` the exponential.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExpTerm {
    pub coeff: Scalar,
    pub exponent: LinForm,
}

impl ExpTerm {
    pub fn one(dim: usize, n: usize) -> Self {
        ExpTerm { coeff: Scalar::one(n), exponent: LinForm::zero(dim) }
    }

    pub fn constant(dim: usize, coeff: Scalar) -> Self {
        ExpTerm { coeff, exponent: LinForm::zero(dim) }
    }

    /// `E(pi * a.x)`.
    pub fn exp_linear(coeffs: Vec<GRat>, n: usize) -> Self {
        ExpTerm { coeff: Scalar::one(n), exponent: LinForm::linear(coeffs) }
    }

    /// `coeff * E(pi * a.x + pi * c + h_const)`, normalized: the `h`-divisible
    /// constant is exponentiated into the series, `Im c` becomes a circle
    /// constant and `Re c` stays in the exponent.
    pub fn from_parts(
        coeff: Scalar,
        coeffs: Vec<GRat>,
        pi_const: &GRat,
        hbar_const: Option<&HbarSeries>,
    ) -> Result<Self> {
        let mut coeff = coeff;
        if let Some(h) = hbar_const {
            coeff = coeff.mul_series(&h.exp()?)?;
        }
        let mut t = ExpTerm { coeff, exponent: LinForm::linear(coeffs) };
        t.absorb_pi_const(pi_const);
        Ok(t)
    }

    pub fn dim(&self) -> usize {
        self.exponent.dim()
    }

    pub fn order(&self) -> usize {
        self.coeff.order()
    }

    pub fn is_one(&self) -> bool {
        self.exponent.is_zero() && self.coeff.is_one()
    }

    /// Multiply by `E(pi * c)` for a constant `c`.
    pub fn absorb_pi_const(&mut self, c: &GRat) {
        if !c.im.is_zero() {
            self.coeff = self.coeff.mul_unit(&CircleConst::new(c.im.clone()));
        }
        self.exponent.pi_const += &c.re;
    }

    pub fn scale(&self, s: &Scalar) -> Result<Self> {
        Ok(ExpTerm { coeff: self.coeff.try_mul(s)?, exponent: self.exponent.clone() })
    }

    fn check(&self, o: &ExpTerm) -> Result<()> {
        if self.dim() != o.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: o.dim() });
        }
        if self.order() != o.order() {
            return Err(Error::OrderMismatch(self.order(), o.order()));
        }
        Ok(())
    }

    /// Pointwise product.
    pub fn mul(&self, o: &ExpTerm) -> Result<Self> {
        self.check(o)?;
        Ok(ExpTerm { coeff: self.coeff.try_mul(&o.coeff)?, exponent: self.exponent.add(&o.exponent) })
    }

    /// Moyal product: `E(l1) * E(l2) = exp(h {l1, l2}) E(l1 + l2)`.
    pub fn star(&self, o: &ExpTerm, spec: &SlotSpec) -> Result<Self> {
        self.check(o)?;
        if spec.dim() != self.dim() {
            return Err(Error::SlotMismatch);
        }
        let p = spec.pairing(&self.exponent.coeffs, &o.exponent.coeffs);
        let mut coeff = self.coeff.try_mul(&o.coeff)?;
        if !p.is_zero() {
            coeff = coeff.try_mul(&Scalar::exp_hbar_pi2(self.order(), &p))?;
        }
        Ok(ExpTerm { coeff, exponent: self.exponent.add(&o.exponent) })
    }

    /// Inverse for both products: `{l, -l} = 0`, so it is `c^{-1} E(-l)`.
    pub fn star_inverse(&self) -> Result<Self> {
        Ok(ExpTerm { coeff: self.coeff.inverse()?, exponent: self.exponent.neg() })
    }

    /// Pull back along `x -> x + t`.
    pub fn translate(&self, t: &[GRat]) -> Result<Self> {
        if t.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: t.len() });
        }
        let mut r = self.clone();
        r.absorb_pi_const(&self.exponent.eval_linear(t));
        Ok(r)
    }
}

/// `star_inverse` as a free function.
pub fn star_inverse(t: &ExpTerm) -> Result<ExpTerm> {
    t.star_inverse()
}

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;

use super::{GRat, PiPoly, Rat};
use crate::error::{Error, Result};

/// Power series in `h` truncated modulo `h^N`, with `PiPoly` coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HbarSeries {
    coeffs: Vec<PiPoly>,
}

impl HbarSeries {
    /// Zero series of truncation order `n` (must be positive).
    pub fn zero(n: usize) -> Self {
        assert!(n > 0, "truncation order must be positive");
        HbarSeries { coeffs: vec![PiPoly::zero(); n] }
    }

    pub fn one(n: usize) -> Self {
        HbarSeries::constant(n, PiPoly::one())
    }

    pub fn constant(n: usize, c: PiPoly) -> Self {
        HbarSeries::monomial(n, 0, c)
    }

    pub fn from_grat(n: usize, c: GRat) -> Self {
        HbarSeries::constant(n, PiPoly::constant(c))
    }

    /// `c * h^j`, zero when `j >= n`.
    pub fn monomial(n: usize, j: usize, c: PiPoly) -> Self {
        let mut s = HbarSeries::zero(n);
        if j < n {
            s.coeffs[j] = c;
        }
        s
    }

    /// The series `h`.
    pub fn hbar(n: usize) -> Self {
        HbarSeries::monomial(n, 1, PiPoly::one())
    }

    /// Build from a coefficient list, truncating or padding to order `n`.
    pub fn from_coeffs(n: usize, cs: Vec<PiPoly>) -> Self {
        let mut s = HbarSeries::zero(n);
        for (j, c) in cs.into_iter().enumerate().take(n) {
            s.coeffs[j] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, j: usize) -> &PiPoly {
        &self.coeffs[j]
    }

    pub fn coeffs(&self) -> &[PiPoly] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(PiPoly::is_zero)
    }

    pub fn is_one(&self) -> bool {
        *self == HbarSeries::one(self.order())
    }

    /// The `h^0` coefficient when it is a plain Gaussian rational.
    pub fn constant_term(&self) -> Option<GRat> {
        self.coeffs[0].as_constant()
    }

    fn check(&self, o: &HbarSeries) -> Result<()> {
        if self.order() != o.order() {
            return Err(Error::OrderMismatch(self.order(), o.order()));
        }
        Ok(())
    }

    pub fn try_add(&self, o: &HbarSeries) -> Result<HbarSeries> {
        self.check(o)?;
        Ok(HbarSeries { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() })
    }

    pub fn try_sub(&self, o: &HbarSeries) -> Result<HbarSeries> {
        self.check(o)?;
        Ok(HbarSeries { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect() })
    }

    pub fn try_mul(&self, o: &HbarSeries) -> Result<HbarSeries> {
        self.check(o)?;
        let n = self.order();
        let mut coeffs = vec![PiPoly::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(n - i) {
                if !b.is_zero() {
                    coeffs[i + j].add_assign(&(a * b));
                }
            }
        }
        Ok(HbarSeries { coeffs })
    }

    pub fn scale(&self, c: &GRat) -> HbarSeries {
        HbarSeries { coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect() }
    }

    pub fn scale_poly(&self, c: &PiPoly) -> HbarSeries {
        HbarSeries { coeffs: self.coeffs.iter().map(|p| p * c).collect() }
    }

    pub fn conj(&self) -> HbarSeries {
        HbarSeries { coeffs: self.coeffs.iter().map(PiPoly::conj).collect() }
    }

    /// Multiplicative inverse; the `h^0` coefficient must be a nonzero constant.
    pub fn inverse(&self) -> Result<HbarSeries> {
        let a0 = self.constant_term().ok_or(Error::NotInvertible)?;
        let a0_inv = a0.inv().ok_or(Error::NotInvertible)?;
        let n = self.order();
        let mut b: Vec<PiPoly> = Vec::with_capacity(n);
        b.push(PiPoly::constant(a0_inv.clone()));
        for k in 1..n {
            let mut acc = PiPoly::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc.add_assign(&(&self.coeffs[j] * &b[k - j]));
                }
            }
            b.push(acc.scale(&-&a0_inv));
        }
        Ok(HbarSeries { coeffs: b })
    }

    /// `exp(a)` for `a` without constant term: `k E_k = sum_j j a_j E_{k-j}`.
    pub fn exp(&self) -> Result<HbarSeries> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let n = self.order();
        let mut e: Vec<PiPoly> = Vec::with_capacity(n);
        e.push(PiPoly::one());
        for k in 1..n {
            let mut acc = PiPoly::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc.add_assign(&(&self.coeffs[j] * &e[k - j]).scale(&GRat::int(j as i64)));
                }
            }
            e.push(acc.scale(&inv_int(k)));
        }
        Ok(HbarSeries { coeffs: e })
    }

    /// `log(u)` for `u` with constant term 1: `k L_k = k u_k - sum_{j<k} j L_j u_{k-j}`.
    pub fn log(&self) -> Result<HbarSeries> {
        if !self.coeffs[0].as_constant().is_some_and(|c| c.is_one()) {
            return Err(Error::NotUnipotent);
        }
        let n = self.order();
        let mut l: Vec<PiPoly> = Vec::with_capacity(n);
        l.push(PiPoly::zero());
        for k in 1..n {
            let mut acc = self.coeffs[k].scale(&GRat::int(k as i64));
            for j in 1..k {
                if !l[j].is_zero() {
                    acc.add_assign(&-(&l[j] * &self.coeffs[k - j]).scale(&GRat::int(j as i64)));
                }
            }
            l.push(acc.scale(&inv_int(k)));
        }
        Ok(HbarSeries { coeffs: l })
    }

    /// Multiplication by `h^k`.
    pub fn shift(&self, k: usize) -> HbarSeries {
        let n = self.order();
        let mut s = HbarSeries::zero(n);
        for j in 0..n.saturating_sub(k) {
            s.coeffs[j + k] = self.coeffs[j].clone();
        }
        s
    }
}

fn inv_int(k: usize) -> GRat {
    GRat::real(Rat::new(BigInt::from(1), BigInt::from(k)))
}

/// `exp(a)`; see [`HbarSeries::exp`].
pub fn series_exp(a: &HbarSeries) -> Result<HbarSeries> {
    a.exp()
}

/// `log(u)`; see [`HbarSeries::log`].
pub fn series_log(u: &HbarSeries) -> Result<HbarSeries> {
    u.log()
}

impl Neg for &HbarSeries {
    type Output = HbarSeries;
    fn neg(self) -> HbarSeries {
        HbarSeries { coeffs: self.coeffs.iter().map(|p| -p).collect() }
    }
}

impl Neg for HbarSeries {
    type Output = HbarSeries;
    fn neg(self) -> HbarSeries {
        -&self
    }
}

macro_rules! panicking_op {
    ($tr:ident, $m:ident, $try:ident) => {
        impl $tr<&HbarSeries> for &HbarSeries {
            type Output = HbarSeries;
            /// Panics on mixed truncation orders; use the `try_` form to get an error.
            fn $m(self, o: &HbarSeries) -> HbarSeries {
                self.$try(o).expect("truncation order mismatch")
            }
        }
        impl $tr<HbarSeries> for HbarSeries {
            type Output = HbarSeries;
            fn $m(self, o: HbarSeries) -> HbarSeries {
                (&self).$m(&o)
            }
        }
    };
}

panicking_op!(Add, add, try_add);
panicking_op!(Sub, sub, try_sub);
panicking_op!(Mul, mul, try_mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::grat::rat;

    fn pi2() -> PiPoly {
        PiPoly::pi_pow(2)
    }

    #[test]
    fn exp_of_pi_squared_h() {
        let a = HbarSeries::monomial(3, 1, pi2());
        let e = series_exp(&a).unwrap();
        assert_eq!(e.coeff(0), &PiPoly::one());
        assert_eq!(e.coeff(1), &pi2());
        assert_eq!(e.coeff(2), &PiPoly::monomial(4, GRat::frac(1, 2)));
    }

    #[test]
    fn mercator() {
        let u = HbarSeries::one(3) + HbarSeries::hbar(3);
        let l = series_log(&u).unwrap();
        assert_eq!(l, HbarSeries::hbar(3) + HbarSeries::monomial(3, 2, PiPoly::constant(GRat::frac(-1, 2))));
        assert_eq!(series_exp(&l).unwrap(), u);
    }

    #[test]
    fn errors() {
        assert_eq!(series_exp(&HbarSeries::one(2)), Err(Error::NonzeroConstantTerm));
        assert_eq!(series_log(&HbarSeries::hbar(2)), Err(Error::NotUnipotent));
        assert_eq!(HbarSeries::one(2).try_mul(&HbarSeries::one(3)), Err(Error::OrderMismatch(2, 3)));
        assert_eq!(HbarSeries::hbar(3).inverse(), Err(Error::NotInvertible));
    }

    #[test]
    fn inverse_pair() {
        let a =
            HbarSeries::from_coeffs(4, vec![PiPoly::constant(GRat::new(rat(2, 1), rat(1, 3))), pi2(), PiPoly::one()]);
        assert!((&a * &a.inverse().unwrap()).is_one());
    }
}

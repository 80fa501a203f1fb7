use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::Zero;

use super::circle::mod_rat;
use super::{CircleConst, GRat, HbarSeries, PiPoly, Rat};
use crate::error::{Error, Result};

/// `exp(pi i q) * series`.
///
/// The stored angle is kept in `[0, 1/2)`: any multiple of `i` is absorbed
/// into the series, so equal values have equal representations whenever the
/// series part can carry the difference.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scalar {
    unit: CircleConst,
    series: HbarSeries,
}

impl Scalar {
    pub fn new(unit: CircleConst, series: HbarSeries) -> Self {
        if series.is_zero() {
            return Scalar { unit: CircleConst::one(), series };
        }
        let half = Rat::new(BigInt::from(1), BigInt::from(2));
        let q = unit.angle();
        let reduced = mod_rat(q, &half);
        let k: i64 =
            ((q - &reduced) * Rat::from_integer(BigInt::from(2))).to_integer().try_into().expect("angle in [0,2)");
        let series = if k == 0 { series } else { series.scale(&GRat::one().mul_i_pow(k)) };
        Scalar { unit: CircleConst::new(reduced), series }
    }

    pub fn from_series(series: HbarSeries) -> Self {
        Scalar::new(CircleConst::one(), series)
    }

    pub fn from_grat(n: usize, c: GRat) -> Self {
        Scalar::from_series(HbarSeries::from_grat(n, c))
    }

    pub fn from_unit(n: usize, unit: CircleConst) -> Self {
        Scalar::new(unit, HbarSeries::one(n))
    }

    pub fn one(n: usize) -> Self {
        Scalar::from_series(HbarSeries::one(n))
    }

    pub fn zero(n: usize) -> Self {
        Scalar::from_series(HbarSeries::zero(n))
    }

    /// `1 + h`, the non-trivial central sample used by the windows.
    pub fn one_plus_hbar(n: usize) -> Self {
        Scalar::from_series(&HbarSeries::one(n) + &HbarSeries::hbar(n))
    }

    pub fn unit(&self) -> &CircleConst {
        &self.unit
    }

    pub fn series(&self) -> &HbarSeries {
        &self.series
    }

    pub fn order(&self) -> usize {
        self.series.order()
    }

    pub fn is_zero(&self) -> bool {
        self.series.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.unit.is_one() && self.series.is_one()
    }

    pub fn try_mul(&self, o: &Scalar) -> Result<Scalar> {
        Ok(Scalar::new(self.unit.mul(&o.unit), self.series.try_mul(&o.series)?))
    }

    pub fn scale(&self, c: &GRat) -> Scalar {
        Scalar::new(self.unit.clone(), self.series.scale(c))
    }

    pub fn mul_series(&self, s: &HbarSeries) -> Result<Scalar> {
        Ok(Scalar::new(self.unit.clone(), self.series.try_mul(s)?))
    }

    pub fn mul_unit(&self, u: &CircleConst) -> Scalar {
        Scalar::new(self.unit.mul(u), self.series.clone())
    }

    pub fn inverse(&self) -> Result<Scalar> {
        Ok(Scalar::new(self.unit.inv(), self.series.inverse()?))
    }

    pub fn pow(&self, k: i64) -> Result<Scalar> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Scalar::one(self.order());
        for _ in 0..k.unsigned_abs() {
            acc = acc.try_mul(&base)?;
        }
        Ok(acc)
    }

    /// The value as a plain series when the unit is trivial.
    pub fn as_series(&self) -> Option<&HbarSeries> {
        self.unit.is_one().then_some(&self.series)
    }

    /// `exp(h * pi^2 * b)` for a Gaussian rational `b`.
    pub fn exp_hbar_pi2(n: usize, b: &GRat) -> Scalar {
        let a = HbarSeries::monomial(n, 1, PiPoly::monomial(2, b.clone()));
        Scalar::from_series(a.exp().expect("h-divisible"))
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    /// Panics on mixed truncation orders; see [`Scalar::try_mul`].
    fn mul(self, o: &Scalar) -> Scalar {
        self.try_mul(o).expect("truncation order mismatch")
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        &self * &o
    }
}

/// `(a, b) -> a * b`.
pub fn scalar_mul(a: &Scalar, b: &Scalar) -> Result<Scalar> {
    a.try_mul(b)
}

/// A unit written as `phase * modulus * exp(log)`.
///
/// When the `h^0` coefficient is `r * i^k` with `r > 0` rational, the
/// `i^k` goes into `phase` and `modulus = r`; otherwise `modulus` is the raw
/// `h^0` coefficient and `phase` is the stored unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpDecomposition {
    pub phase: CircleConst,
    pub modulus: GRat,
    pub log: HbarSeries,
}

impl ExpDecomposition {
    pub fn is_polar(&self) -> bool {
        self.modulus.is_real() && self.modulus.re > Rat::zero()
    }

    pub fn recompose(&self) -> Scalar {
        let series = self.log.exp().expect("log has no constant term").scale(&self.modulus);
        Scalar::new(self.phase.clone(), series)
    }
}

/// Split an invertible scalar into its constant and exponential parts.
pub fn exp_decompose(u: &Scalar) -> Result<ExpDecomposition> {
    let a0 = u.series().constant_term().ok_or(Error::NotInvertible)?;
    let a0_inv = a0.inv().ok_or(Error::NotInvertible)?;
    let log = u.series().scale(&a0_inv).log()?;
    let (phase, modulus) = match a0.polar() {
        Some((r, k)) => {
            let quarter_turns = Rat::new(BigInt::from(k), BigInt::from(2));
            (u.unit().mul(&CircleConst::new(quarter_turns)), GRat::real(r))
        }
        None => (u.unit().clone(), a0),
    };
    Ok(ExpDecomposition { phase, modulus, log })
}

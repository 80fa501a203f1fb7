use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::Rat;

/// Gaussian rational `re + im i`; both parts are kept reduced by `BigRational`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GRat {
    pub re: Rat,
    pub im: Rat,
}

impl GRat {
    pub fn new(re: Rat, im: Rat) -> Self {
        GRat { re, im }
    }

    pub fn real(re: Rat) -> Self {
        GRat { re, im: Rat::zero() }
    }

    pub fn int(n: i64) -> Self {
        GRat::real(Rat::from_integer(BigInt::from(n)))
    }

    /// `a + b i` from small integers.
    pub fn ints(a: i64, b: i64) -> Self {
        GRat::new(rat(a, 1), rat(b, 1))
    }

    /// `a/b` with `b != 0`.
    pub fn frac(a: i64, b: i64) -> Self {
        GRat::real(rat(a, b))
    }

    pub fn zero() -> Self {
        GRat::default()
    }

    pub fn one() -> Self {
        GRat::int(1)
    }

    pub fn i() -> Self {
        GRat::ints(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GRat::new(self.re.clone(), -self.im.clone())
    }

    /// `|z|^2`.
    pub fn norm_sqr(&self) -> Rat {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(GRat::new(&self.re / &n, -(&self.im / &n)))
    }

    pub fn scale(&self, r: &Rat) -> Self {
        GRat::new(&self.re * r, &self.im * r)
    }

    /// Multiplication by `i^k`.
    pub fn mul_i_pow(&self, k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => self.clone(),
            1 => GRat::new(-self.im.clone(), self.re.clone()),
            2 => -self.clone(),
            _ => GRat::new(self.im.clone(), -self.re.clone()),
        }
    }

    /// If `self = r * i^k` with `r > 0` rational, returns `(r, k)`.
    pub fn polar(&self) -> Option<(Rat, i64)> {
        if self.im.is_zero() && !self.re.is_zero() {
            Some(if self.re.is_positive() { (self.re.clone(), 0) } else { (-self.re.clone(), 2) })
        } else if self.re.is_zero() && !self.im.is_zero() {
            Some(if self.im.is_positive() { (self.im.clone(), 1) } else { (-self.im.clone(), 3) })
        } else {
            None
        }
    }
}

pub fn rat(a: i64, b: i64) -> Rat {
    Rat::new(BigInt::from(a), BigInt::from(b))
}

impl From<i64> for GRat {
    fn from(n: i64) -> Self {
        GRat::int(n)
    }
}

impl From<Rat> for GRat {
    fn from(r: Rat) -> Self {
        GRat::real(r)
    }
}

impl Neg for GRat {
    type Output = GRat;
    fn neg(self) -> GRat {
        GRat::new(-self.re, -self.im)
    }
}

impl Neg for &GRat {
    type Output = GRat;
    fn neg(self) -> GRat {
        GRat::new(-self.re.clone(), -self.im.clone())
    }
}

impl Add<&GRat> for &GRat {
    type Output = GRat;
    fn add(self, o: &GRat) -> GRat {
        GRat::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub<&GRat> for &GRat {
    type Output = GRat;
    fn sub(self, o: &GRat) -> GRat {
        GRat::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul<&GRat> for &GRat {
    type Output = GRat;
    fn mul(self, o: &GRat) -> GRat {
        if self.im.is_zero() && o.im.is_zero() {
            return GRat::real(&self.re * &o.re);
        }
        GRat::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }
}

impl Div<&GRat> for &GRat {
    type Output = GRat;
    /// Panics on division by zero, like the rational division it wraps.
    fn div(self, o: &GRat) -> GRat {
        self * &o.inv().expect("division by zero Gaussian rational")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<GRat> for GRat {
            type Output = GRat;
            fn $m(self, o: GRat) -> GRat {
                (&self).$m(&o)
            }
        }
        impl $tr<&GRat> for GRat {
            type Output = GRat;
            fn $m(self, o: &GRat) -> GRat {
                (&self).$m(o)
            }
        }
        impl $tr<GRat> for &GRat {
            type Output = GRat;
            fn $m(self, o: GRat) -> GRat {
                self.$m(&o)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&GRat> for GRat {
    fn add_assign(&mut self, o: &GRat) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&GRat> for GRat {
    fn sub_assign(&mut self, o: &GRat) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl MulAssign<&GRat> for GRat {
    fn mul_assign(&mut self, o: &GRat) {
        *self = &*self * o;
    }
}

impl std::iter::Sum for GRat {
    fn sum<I: Iterator<Item = GRat>>(iter: I) -> GRat {
        iter.fold(GRat::zero(), |acc, x| acc + x)
    }
}

impl fmt::Display for GRat {
    /// `1/2`, `3/4 i`, `1/2-3/4 i`, `i`, `-i`, `1+i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        let im_abs = self.im.abs();
        let im_txt = if im_abs.is_one() { "i".to_string() } else { format!("{} i", im_abs) };
        let sign = if self.im.is_negative() { "-" } else { "+" };
        if self.re.is_zero() {
            if self.im.is_negative() {
                write!(f, "-{}", im_txt)
            } else {
                write!(f, "{}", im_txt)
            }
        } else {
            write!(f, "{}{}{}", self.re, sign, im_txt)
        }
    }
}

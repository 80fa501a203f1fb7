use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{GRat, Rat};

/// `exp(pi i q)` with `q` reduced to `[0, 2)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct CircleConst {
    q: Rat,
}

impl CircleConst {
    pub fn new(q: Rat) -> Self {
        CircleConst { q: mod_rat(&q, &Rat::from_integer(BigInt::from(2))) }
    }

    pub fn one() -> Self {
        CircleConst::default()
    }

    pub fn minus_one() -> Self {
        CircleConst::new(Rat::one())
    }

    pub fn i() -> Self {
        CircleConst::new(Rat::new(1.into(), 2.into()))
    }

    /// The angle `q` in `[0, 2)`.
    pub fn angle(&self) -> &Rat {
        &self.q
    }

    pub fn is_one(&self) -> bool {
        self.q.is_zero()
    }

    pub fn mul(&self, o: &CircleConst) -> CircleConst {
        CircleConst::new(&self.q + &o.q)
    }

    pub fn inv(&self) -> CircleConst {
        CircleConst::new(-self.q.clone())
    }

    pub fn pow(&self, k: i64) -> CircleConst {
        CircleConst::new(&self.q * Rat::from_integer(BigInt::from(k)))
    }

    /// The value as a Gaussian rational when `q` is a multiple of 1/2.
    pub fn as_grat(&self) -> Option<GRat> {
        let twice = &self.q * Rat::from_integer(BigInt::from(2));
        if !twice.is_integer() {
            return None;
        }
        let k: i64 = twice.to_integer().try_into().ok()?;
        Some(GRat::one().mul_i_pow(k))
    }

    /// Order of the root of unity.
    pub fn order(&self) -> BigInt {
        // exp(pi i a/b) has order 2b / gcd(a, 2b).
        let two_b = self.q.denom() * BigInt::from(2);
        &two_b / self.q.numer().gcd(&two_b)
    }
}

/// `x mod m` in `[0, m)` for rational `x` and positive rational `m`.
pub(crate) fn mod_rat(x: &Rat, m: &Rat) -> Rat {
    let k = (x / m).floor();
    x - k * m
}

impl fmt::Display for CircleConst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            write!(f, "1")
        } else {
            write!(f, "exp(pi*i*{})", self.q)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::grat::rat;

    #[test]
    fn normalization() {
        assert!(CircleConst::new(rat(2, 1)).is_one());
        assert_eq!(CircleConst::minus_one().mul(&CircleConst::minus_one()), CircleConst::one());
        assert_eq!(CircleConst::new(rat(-1, 3)).angle(), &rat(5, 3));
        assert_eq!(CircleConst::minus_one().as_grat(), Some(GRat::int(-1)));
        assert_eq!(CircleConst::new(rat(3, 2)).as_grat(), Some(-GRat::i()));
        assert_eq!(CircleConst::new(rat(1, 3)).as_grat(), None);
        assert_eq!(CircleConst::new(rat(1, 3)).order(), BigInt::from(6));
        assert_eq!(CircleConst::minus_one().order(), BigInt::from(2));
        assert_eq!(CircleConst::one().order(), BigInt::from(1));
    }
}

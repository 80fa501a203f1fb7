use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use super::GRat;

/// Polynomial in the formal symbol `pi` with Gaussian rational coefficients.
/// Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PiPoly {
    coeffs: BTreeMap<u32, GRat>,
}

impl PiPoly {
    pub fn zero() -> Self {
        PiPoly::default()
    }

    pub fn one() -> Self {
        PiPoly::constant(GRat::one())
    }

    pub fn constant(c: GRat) -> Self {
        PiPoly::monomial(0, c)
    }

    /// `c * pi^k`.
    pub fn monomial(k: u32, c: GRat) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(k, c);
        }
        PiPoly { coeffs }
    }

    pub fn pi_pow(k: u32) -> Self {
        PiPoly::monomial(k, GRat::one())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: u32) -> GRat {
        self.coeffs.get(&k).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &GRat)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    /// The degree-0 value when the polynomial is constant.
    pub fn as_constant(&self) -> Option<GRat> {
        match self.degree() {
            None => Some(GRat::zero()),
            Some(0) => Some(self.coeff(0)),
            _ => None,
        }
    }

    pub fn scale(&self, c: &GRat) -> Self {
        if c.is_zero() {
            return PiPoly::zero();
        }
        PiPoly { coeffs: self.coeffs.iter().map(|(k, v)| (*k, v * c)).collect() }
    }

    /// Multiplication by `pi^k`.
    pub fn shift(&self, k: u32) -> Self {
        PiPoly { coeffs: self.coeffs.iter().map(|(d, v)| (d + k, v.clone())).collect() }
    }

    pub fn conj(&self) -> Self {
        PiPoly { coeffs: self.coeffs.iter().map(|(k, v)| (*k, v.conj())).collect() }
    }

    pub fn add_term(&mut self, k: u32, c: &GRat) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(k).or_default();
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn add_assign(&mut self, o: &PiPoly) {
        for (k, c) in &o.coeffs {
            self.add_term(*k, c);
        }
    }
}

impl From<GRat> for PiPoly {
    fn from(c: GRat) -> Self {
        PiPoly::constant(c)
    }
}

impl Neg for &PiPoly {
    type Output = PiPoly;
    fn neg(self) -> PiPoly {
        PiPoly { coeffs: self.coeffs.iter().map(|(k, v)| (*k, -v)).collect() }
    }
}

impl Neg for PiPoly {
    type Output = PiPoly;
    fn neg(self) -> PiPoly {
        -&self
    }
}

impl Add<&PiPoly> for &PiPoly {
    type Output = PiPoly;
    fn add(self, o: &PiPoly) -> PiPoly {
        let mut r = self.clone();
        r.add_assign(o);
        r
    }
}

impl Sub<&PiPoly> for &PiPoly {
    type Output = PiPoly;
    fn sub(self, o: &PiPoly) -> PiPoly {
        let mut r = self.clone();
        r.add_assign(&-o);
        r
    }
}

impl Mul<&PiPoly> for &PiPoly {
    type Output = PiPoly;
    fn mul(self, o: &PiPoly) -> PiPoly {
        let mut r = PiPoly::zero();
        for (a, x) in &self.coeffs {
            for (b, y) in &o.coeffs {
                r.add_term(a + b, &(x * y));
            }
        }
        r
    }
}

impl Add for PiPoly {
    type Output = PiPoly;
    fn add(self, o: PiPoly) -> PiPoly {
        &self + &o
    }
}

impl Sub for PiPoly {
    type Output = PiPoly;
    fn sub(self, o: PiPoly) -> PiPoly {
        &self - &o
    }
}

impl Mul for PiPoly {
    type Output = PiPoly;
    fn mul(self, o: PiPoly) -> PiPoly {
        &self * &o
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_drops_zeros() {
        let p = PiPoly::pi_pow(2) + PiPoly::one();
        let q = &p - &PiPoly::pi_pow(2);
        assert_eq!(q, PiPoly::one());
        assert_eq!((&p * &p).coeff(2), GRat::int(2));
        assert!((&p - &p).is_zero());
        assert_eq!(p.as_constant(), None);
    }
}

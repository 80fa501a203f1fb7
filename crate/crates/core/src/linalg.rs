//! Gaussian elimination over exact fields.

use num_traits::{One, Zero};

use crate::coeff::{GRat, Rat};

pub trait Field: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn inv(&self) -> Option<Self>;
}

impl Field for Rat {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
}

impl Field for GRat {
    fn zero() -> Self {
        GRat::zero()
    }
    fn one() -> Self {
        GRat::one()
    }
    fn is_zero(&self) -> bool {
        GRat::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn inv(&self) -> Option<Self> {
        GRat::inv(self)
    }
}

pub type Matrix<F> = Vec<Vec<F>>;

/// Row-reduce in place; returns (rank, determinant sign/scale of the square part).
fn eliminate<F: Field>(m: &mut Matrix<F>, cols: usize) -> (usize, F) {
    let rows = m.len();
    let mut rank = 0;
    let mut det = F::one();
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            det = F::zero();
            continue;
        };
        if p != rank {
            m.swap(p, rank);
            det = F::zero().sub(&det);
        }
        let pivot = m[rank][c].clone();
        det = det.mul(&pivot);
        let inv = pivot.inv().expect("nonzero pivot");
        for x in m[rank].iter_mut() {
            *x = x.mul(&inv);
        }
        for r in 0..rows {
            if r != rank && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for k in 0..m[r].len() {
                    let v = m[rank][k].mul(&f);
                    m[r][k] = m[r][k].sub(&v);
                }
            }
        }
        rank += 1;
        if rank == rows {
            if c + 1 < cols {
                det = F::zero();
            }
            break;
        }
    }
    (rank, det)
}

pub fn rank<F: Field>(m: &Matrix<F>) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut a = m.clone();
    eliminate(&mut a, cols).0
}

pub fn det<F: Field>(m: &Matrix<F>) -> F {
    let n = m.len();
    let mut a = m.clone();
    let (r, d) = eliminate(&mut a, n);
    if r < n {
        F::zero()
    } else {
        d
    }
}

pub fn inverse<F: Field>(m: &Matrix<F>) -> Option<Matrix<F>> {
    let n = m.len();
    let mut a: Matrix<F> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { F::one() } else { F::zero() }));
            r
        })
        .collect();
    let (r, _) = eliminate(&mut a, n);
    if r < n {
        return None;
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Solve `m x = b` for square invertible `m`.
pub fn solve<F: Field>(m: &Matrix<F>, b: &[F]) -> Option<Vec<F>> {
    let inv = inverse(m)?;
    Some(mat_vec(&inv, b))
}

pub fn mat_vec<F: Field>(m: &Matrix<F>, v: &[F]) -> Vec<F> {
    m.iter().map(|row| row.iter().zip(v).fold(F::zero(), |acc, (a, x)| acc.add(&a.mul(x)))).collect()
}

pub fn mat_mul<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols).map(|j| row.iter().zip(b).fold(F::zero(), |acc, (x, brow)| acc.add(&x.mul(&brow[j])))).collect()
        })
        .collect()
}

pub fn transpose<F: Field>(m: &Matrix<F>) -> Matrix<F> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::grat::rat;

    fn q(rows: &[&[i64]]) -> Matrix<Rat> {
        rows.iter().map(|r| r.iter().map(|&x| rat(x, 1)).collect()).collect()
    }

    #[test]
    fn det_and_inverse() {
        let m = q(&[&[2, 1], &[5, 3]]);
        assert_eq!(det(&m), rat(1, 1));
        let inv = inverse(&m).unwrap();
        assert_eq!(inv, q(&[&[3, -1], &[-5, 2]]));
        assert_eq!(det(&q(&[&[0, 1], &[1, 0]])), rat(-1, 1));
        assert_eq!(det(&q(&[&[1, 2], &[2, 4]])), rat(0, 1));
        assert!(inverse(&q(&[&[1, 2], &[2, 4]])).is_none());
        assert_eq!(rank(&q(&[&[1, 2, 3], &[2, 4, 6]])), 1);
        assert_eq!(det(&q(&[&[1, 2, 3], &[0, 1, 4], &[5, 6, 0]])), rat(1, 1));
    }

    #[test]
    fn gaussian_entries() {
        let m = vec![vec![GRat::i(), GRat::one()], vec![GRat::one(), GRat::zero()]];
        assert_eq!(det(&m), GRat::int(-1));
        let inv = inverse(&m).unwrap();
        assert_eq!(mat_mul(&m, &inv), vec![vec![GRat::one(), GRat::zero()], vec![GRat::zero(), GRat::one()]]);
    }
}

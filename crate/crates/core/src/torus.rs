//! Complex tori `V / Lambda` with Gaussian rational periods, their dual
//! lattices and the B-field of a constant Poisson bivector.

use num_traits::{Signed, Zero};

use crate::coeff::{GRat, Rat};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

/// Raw torus description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusData {
    pub g: usize,
    /// `2g` lattice generators, each a vector in `C^g`.
    pub lattice: Vec<Vec<GRat>>,
    /// `g x g` antisymmetric bivector `Pi`.
    pub poisson: Vec<Vec<GRat>>,
    pub order: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusReport {
    pub g: usize,
    pub poisson_rank: usize,
    pub period_det: Rat,
}

/// Basis of `Lambda^dual = { xi : Im <xi, lambda> in Z }`; each `xi` is the
/// coefficient vector of `v -> sum a_i conj(v_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualLatticeBasis {
    pub vectors: Vec<Vec<GRat>>,
}

/// Alternating form on `Lambda^dual`, as its matrix on the dual basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BForm {
    pub matrix: Vec<Vec<GRat>>,
}

impl BForm {
    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(GRat::is_zero)
    }

    /// `B(sum n_k xi_k, sum m_l xi_l)`.
    pub fn eval(&self, n: &[i64], m: &[i64]) -> GRat {
        let mut acc = GRat::zero();
        for (k, &a) in n.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (l, &b) in m.iter().enumerate() {
                if b != 0 && !self.matrix[k][l].is_zero() {
                    acc += &self.matrix[k][l].scale(&Rat::from_integer((a * b).into()));
                }
            }
        }
        acc
    }

    /// Rational-bilinear extension to real dual coordinates.
    pub fn eval_real(&self, s: &[Rat], t: &[Rat]) -> GRat {
        let mut acc = GRat::zero();
        for (k, a) in s.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (l, b) in t.iter().enumerate() {
                if !b.is_zero() && !self.matrix[k][l].is_zero() {
                    acc += &self.matrix[k][l].scale(&(a * b));
                }
            }
        }
        acc
    }
}

/// `<xi, v> = sum a_i conj(v_i)`.
pub fn pairing(xi: &[GRat], v: &[GRat]) -> GRat {
    xi.iter().zip(v).filter(|(a, _)| !a.is_zero()).map(|(a, x)| a * &x.conj()).sum()
}

/// `Pi(conj a, conj b) = sum Pi^{ij} conj(a_i) conj(b_j)`.
pub fn bivector_pairing(poisson: &[Vec<GRat>], a: &[GRat], b: &[GRat]) -> GRat {
    let mut acc = GRat::zero();
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() && !poisson[i][j].is_zero() {
                acc += &(&(&x.conj() * &poisson[i][j]) * &y.conj());
            }
        }
    }
    acc
}

/// Columns `(Re v, Im v)` of the real period matrix.
fn real_period_matrix(lattice: &[Vec<GRat>], g: usize) -> Matrix<Rat> {
    (0..2 * g)
        .map(|r| lattice.iter().map(|v| if r < g { v[r].re.clone() } else { v[r - g].im.clone() }).collect())
        .collect()
}

/// Row `j` maps `(Re a, Im a)` to `Im <a, lambda_j>`.
fn im_pairing_matrix(lattice: &[Vec<GRat>], g: usize) -> Matrix<Rat> {
    lattice
        .iter()
        .map(|l| {
            let mut row = Vec::with_capacity(2 * g);
            row.extend(l.iter().map(|x| -x.im.clone()));
            row.extend(l.iter().map(|x| x.re.clone()));
            row
        })
        .collect()
}

fn check_shape(d: &TorusData) -> Result<()> {
    if d.g == 0 {
        return Err(Error::Invalid("dimension must be positive".into()));
    }
    if d.lattice.len() != 2 * d.g {
        return Err(Error::DimensionMismatch { expected: 2 * d.g, got: d.lattice.len() });
    }
    if let Some(v) = d.lattice.iter().find(|v| v.len() != d.g) {
        return Err(Error::DimensionMismatch { expected: d.g, got: v.len() });
    }
    if d.poisson.len() != d.g || d.poisson.iter().any(|r| r.len() != d.g) {
        return Err(Error::DimensionMismatch { expected: d.g, got: d.poisson.len() });
    }
    if d.order == 0 {
        return Err(Error::Invalid("truncation order must be positive".into()));
    }
    Ok(())
}

pub fn validate_torus(d: &TorusData) -> Result<TorusReport> {
    check_shape(d)?;
    let det = linalg::det(&real_period_matrix(&d.lattice, d.g));
    if det.is_zero() {
        return Err(Error::Invalid("lattice generators are linearly dependent over R".into()));
    }
    for i in 0..d.g {
        for j in 0..d.g {
            if d.poisson[i][j] != -&d.poisson[j][i] {
                return Err(Error::Invalid("Poisson bivector is not antisymmetric".into()));
            }
        }
    }
    Ok(TorusReport { g: d.g, poisson_rank: linalg::rank(&d.poisson), period_det: det })
}

fn from_real(y: &[Rat], g: usize) -> Vec<GRat> {
    (0..g).map(|i| GRat::new(y[i].clone(), y[g + i].clone())).collect()
}

pub fn dual_lattice(d: &TorusData) -> Result<DualLatticeBasis> {
    validate_torus(d)?;
    let m = im_pairing_matrix(&d.lattice, d.g);
    let inv = linalg::inverse(&m).ok_or_else(|| Error::Invalid("degenerate lattice".into()))?;
    let cols = linalg::transpose(&inv);
    let vectors: Vec<Vec<GRat>> = cols.iter().map(|y| from_real(y, d.g)).collect();
    for (k, xi) in vectors.iter().enumerate() {
        for (j, l) in d.lattice.iter().enumerate() {
            let want = if j == k { Rat::from_integer(1.into()) } else { Rat::zero() };
            if pairing(xi, l).im != want {
                return Err(Error::Invalid("dual basis failed its congruences".into()));
            }
        }
    }
    Ok(DualLatticeBasis { vectors })
}

pub fn bfield(d: &TorusData, dual: &DualLatticeBasis) -> BForm {
    let n = dual.vectors.len();
    let matrix = (0..n)
        .map(|k| (0..n).map(|l| bivector_pairing(&d.poisson, &dual.vectors[k], &dual.vectors[l])).collect())
        .collect();
    BForm { matrix }
}

/// A validated torus with its dual lattice and B-field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Torus {
    pub data: TorusData,
    pub dual: DualLatticeBasis,
    pub bform: BForm,
    im_pairing: Matrix<Rat>,
    period_inv: Matrix<Rat>,
}

impl Torus {
    pub fn new(data: TorusData) -> Result<Self> {
        let dual = dual_lattice(&data)?;
        let bform = bfield(&data, &dual);
        let im_pairing = im_pairing_matrix(&data.lattice, data.g);
        let period_inv = linalg::inverse(&real_period_matrix(&data.lattice, data.g)).expect("validated");
        Ok(Torus { data, dual, bform, im_pairing, period_inv })
    }

    pub fn g(&self) -> usize {
        self.data.g
    }

    pub fn order(&self) -> usize {
        self.data.order
    }

    pub fn rank(&self) -> usize {
        2 * self.data.g
    }

    pub fn poisson(&self) -> &[Vec<GRat>] {
        &self.data.poisson
    }

    /// Same torus with another bivector.
    pub fn with_poisson(&self, poisson: Vec<Vec<GRat>>) -> Result<Torus> {
        Torus::new(TorusData { poisson, ..self.data.clone() })
    }

    pub fn with_order(&self, order: usize) -> Torus {
        let mut t = self.clone();
        t.data.order = order;
        t
    }

    fn combine(basis: &[Vec<GRat>], n: &[i64], g: usize) -> Vec<GRat> {
        let mut v = vec![GRat::zero(); g];
        for (b, &k) in basis.iter().zip(n) {
            if k == 0 {
                continue;
            }
            let s = Rat::from_integer(k.into());
            for (x, y) in v.iter_mut().zip(b) {
                *x += &y.scale(&s);
            }
        }
        v
    }

    pub fn lattice_vector(&self, n: &[i64]) -> Vec<GRat> {
        Torus::combine(&self.data.lattice, n, self.g())
    }

    pub fn dual_vector(&self, n: &[i64]) -> Vec<GRat> {
        Torus::combine(&self.dual.vectors, n, self.g())
    }

    /// Real coordinates of `v` in the lattice basis.
    pub fn lattice_coords(&self, v: &[GRat]) -> Vec<Rat> {
        let y: Vec<Rat> = v.iter().map(|x| x.re.clone()).chain(v.iter().map(|x| x.im.clone())).collect();
        linalg::mat_vec(&self.period_inv, &y)
    }

    /// Real coordinates of a functional in the dual basis.
    pub fn dual_coords(&self, w: &[GRat]) -> Vec<Rat> {
        let y: Vec<Rat> = w.iter().map(|x| x.re.clone()).chain(w.iter().map(|x| x.im.clone())).collect();
        linalg::mat_vec(&self.im_pairing, &y)
    }

    /// `Im <xi, lambda>` for integer coordinates; an integer by construction.
    pub fn im_pairing_int(&self, xi: &[i64], lambda: &[i64]) -> i64 {
        let r = pairing(&self.dual_vector(xi), &self.lattice_vector(lambda)).im;
        r.to_integer().try_into().expect("small pairing")
    }

    /// `B` on arbitrary functionals via the bivector.
    pub fn b_direct(&self, a: &[GRat], b: &[GRat]) -> GRat {
        bivector_pairing(&self.data.poisson, a, b)
    }

    /// Whether the real coordinates are all integers.
    pub fn is_integral(coords: &[Rat]) -> bool {
        coords.iter().all(|c| c.is_integer())
    }

    /// Largest absolute coordinate, used for window bookkeeping.
    pub fn sup_norm(coords: &[Rat]) -> Rat {
        coords.iter().map(|c| c.abs()).max().unwrap_or_else(Rat::zero)
    }
}

/// Gaussian lattice `e_1, i e_1, ..., e_g, i e_g` scaled by `s`.
pub fn gaussian_lattice(g: usize, s: &GRat) -> Vec<Vec<GRat>> {
    let mut out = Vec::new();
    for k in 0..g {
        for unit in [GRat::one(), GRat::i()] {
            let mut v = vec![GRat::zero(); g];
            v[k] = &unit * s;
            out.push(v);
        }
    }
    out
}

/// `d/dz_a ^ d/dz_b` as a `g x g` matrix.
pub fn elementary_bivector(g: usize, a: usize, b: usize) -> Vec<Vec<GRat>> {
    let mut m = vec![vec![GRat::zero(); g]; g];
    m[a][b] = GRat::one();
    m[b][a] = GRat::int(-1);
    m
}

pub fn zero_bivector(g: usize) -> Vec<Vec<GRat>> {
    vec![vec![GRat::zero(); g]; g]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::grat::rat;

    fn gaussian(g: usize, poisson: Vec<Vec<GRat>>) -> TorusData {
        TorusData { g, lattice: gaussian_lattice(g, &GRat::one()), poisson, order: 3 }
    }

    #[test]
    fn validation() {
        let r = validate_torus(&gaussian(1, zero_bivector(1))).unwrap();
        assert_eq!(r.poisson_rank, 0);
        let r = validate_torus(&gaussian(2, elementary_bivector(2, 0, 1))).unwrap();
        assert_eq!(r.poisson_rank, 2);
        let bad = TorusData {
            g: 1,
            lattice: vec![vec![GRat::one()], vec![GRat::int(2)]],
            poisson: zero_bivector(1),
            order: 2,
        };
        assert!(validate_torus(&bad).is_err());
        let mut sym = elementary_bivector(2, 0, 1);
        sym[1][0] = GRat::one();
        assert!(validate_torus(&gaussian(2, sym)).is_err());
    }

    #[test]
    fn pairing_examples() {
        let a = vec![GRat::ints(2, 3)];
        assert!(pairing(&a, &[GRat::zero()]).is_zero());
        let v = vec![GRat::ints(1, 1)];
        assert_eq!(pairing(&a, &v), &a[0] * &GRat::ints(1, -1));
        let iv = vec![&GRat::i() * &v[0]];
        assert_eq!(pairing(&a, &iv), &(-GRat::i()) * &pairing(&a, &v));
    }

    #[test]
    fn gaussian_dual() {
        let d = dual_lattice(&gaussian(1, zero_bivector(1))).unwrap();
        assert_eq!(d.vectors, vec![vec![GRat::i()], vec![GRat::int(-1)]]);
        let mut t = gaussian(1, zero_bivector(1));
        t.lattice = gaussian_lattice(1, &GRat::int(2));
        let d2 = dual_lattice(&t).unwrap();
        assert_eq!(d2.vectors, vec![vec![GRat::new(rat(0, 1), rat(1, 2))], vec![GRat::frac(-1, 2)]]);
    }

    #[test]
    fn product_dual_is_blockwise() {
        let d = dual_lattice(&gaussian(2, zero_bivector(2))).unwrap();
        let z = GRat::zero();
        assert_eq!(
            d.vectors,
            vec![
                vec![GRat::i(), z.clone()],
                vec![GRat::int(-1), z.clone()],
                vec![z.clone(), GRat::i()],
                vec![z, GRat::int(-1)],
            ]
        );
    }

    #[test]
    fn bfield_examples() {
        let t = Torus::new(gaussian(2, elementary_bivector(2, 0, 1))).unwrap();
        // dual generators proportional to (1,0) and (0,1)
        let b = t.b_direct(&[GRat::one(), GRat::zero()], &[GRat::zero(), GRat::one()]);
        assert_eq!(b, GRat::one());
        assert!(Torus::new(gaussian(1, zero_bivector(1))).unwrap().bform.is_zero());
        assert!(Torus::new(gaussian(2, zero_bivector(2))).unwrap().bform.is_zero());
        let m = &t.bform.matrix;
        for k in 0..4 {
            for l in 0..4 {
                assert_eq!(m[k][l], -&m[l][k]);
            }
        }
    }

    #[test]
    fn coordinates_roundtrip() {
        let t = Torus::new(gaussian(2, elementary_bivector(2, 0, 1))).unwrap();
        let n = [1, -2, 0, 3];
        let to_rat = |n: &[i64]| n.iter().map(|&k| rat(k, 1)).collect::<Vec<_>>();
        assert_eq!(t.lattice_coords(&t.lattice_vector(&n)), to_rat(&n));
        assert_eq!(t.dual_coords(&t.dual_vector(&n)), to_rat(&n));
        assert_eq!(t.im_pairing_int(&[1, 0, 0, 0], &[1, 0, 0, 0]), 1);
        assert_eq!(t.im_pairing_int(&[1, 0, 0, 0], &[0, 1, 0, 0]), 0);
    }
}

//! Appell-Humbert data, its quantum version, first-order obstructions and the
//! canonicalization of exponential lattice cocycles.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::cocycle::{auto_coverage, cocycle_defect, cube, split_blocks, window_tuples, Automorphy};
use crate::coeff::{exp_decompose, CircleConst, GRat, HbarSeries, PiPoly, Rat, Scalar};
use crate::error::{Error, Result};
use crate::expalg::{ExpTerm, LinForm, Orientation, Slot, SlotKind, SlotSpec};
use crate::linalg;
use crate::torus::{pairing, Torus};

/// Hermitian form `H(v, w) = v^T H conj(w)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NsData {
    pub h: Vec<Vec<GRat>>,
}

impl NsData {
    pub fn zero(g: usize) -> Self {
        NsData { h: vec![vec![GRat::zero(); g]; g] }
    }

    pub fn g(&self) -> usize {
        self.h.len()
    }

    pub fn is_zero(&self) -> bool {
        self.h.iter().flatten().all(GRat::is_zero)
    }

    pub fn is_hermitian(&self) -> bool {
        let g = self.g();
        self.h.iter().all(|r| r.len() == g) && (0..g).all(|i| (0..g).all(|j| self.h[i][j] == self.h[j][i].conj()))
    }

    pub fn form(&self, v: &[GRat], w: &[GRat]) -> GRat {
        let mut acc = GRat::zero();
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, wj) in w.iter().enumerate() {
                if !self.h[i][j].is_zero() && !wj.is_zero() {
                    acc += &(&(vi * &self.h[i][j]) * &wj.conj());
                }
            }
        }
        acc
    }

    /// Coefficients of `v -> H(v, lambda)`: `a_i = sum_j H_ij conj(lambda_j)`.
    pub fn h_lambda(&self, lambda: &[GRat]) -> Vec<GRat> {
        self.h
            .iter()
            .map(|row| row.iter().zip(lambda).filter(|(h, _)| !h.is_zero()).map(|(h, l)| h * &l.conj()).sum())
            .collect()
    }

    /// `E_jk = Im H(lambda_j, lambda_k)` on generators, if integral.
    pub fn im_matrix(&self, torus: &Torus) -> Option<Vec<Vec<i64>>> {
        let lat = &torus.data.lattice;
        let mut out = vec![vec![0i64; lat.len()]; lat.len()];
        for (j, a) in lat.iter().enumerate() {
            for (k, b) in lat.iter().enumerate() {
                let e = self.form(a, b).im;
                if !e.is_integer() {
                    return None;
                }
                out[j][k] = e.to_integer().try_into().ok()?;
            }
        }
        Some(out)
    }
}

/// Values of a semicharacter on the lattice generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Semicharacter {
    pub values: Vec<CircleConst>,
}

impl Semicharacter {
    pub fn trivial(rank: usize) -> Self {
        Semicharacter { values: vec![CircleConst::one(); rank] }
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(CircleConst::is_one)
    }

    /// `chi(sum n_k lambda_k) = prod chi_k^{n_k} exp(pi i sum_{j<k} n_j n_k E_jk)`,
    /// the unique extension satisfying the semicharacter identity.
    pub fn eval(&self, n: &[i64], e: &[Vec<i64>]) -> CircleConst {
        let mut q = Rat::zero();
        for (k, &nk) in n.iter().enumerate() {
            q += self.values[k].angle() * Rat::from_integer(nk.into());
            for j in 0..k {
                q += Rat::from_integer((n[j] * nk * e[j][k]).into());
            }
        }
        CircleConst::new(q)
    }
}

/// `((H, chi), l(h))`; `l[k]` is the coefficient of `h^{k+1}`, trailing
/// zero vectors trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QahData {
    pub ns: NsData,
    pub chi: Semicharacter,
    pub l: Vec<Vec<GRat>>,
}

impl QahData {
    pub fn new(ns: NsData, chi: Semicharacter, l: Vec<Vec<GRat>>) -> Self {
        let mut d = QahData { ns, chi, l };
        while d.l.last().is_some_and(|v| v.iter().all(GRat::is_zero)) {
            d.l.pop();
        }
        d
    }

    pub fn l_is_zero(&self) -> bool {
        self.l.is_empty()
    }
}

pub fn validate_ns(ns: &NsData, torus: &Torus) -> Result<bool> {
    if ns.g() != torus.g() || !ns.is_hermitian() {
        return Err(Error::Invalid("H must be a g x g Hermitian matrix".into()));
    }
    Ok(ns.im_matrix(torus).is_some())
}

/// Generator values always extend uniquely; this checks that `H` is a valid
/// Neron-Severi class, the values have the right count, and the extension
/// satisfies the identity on all pairs of the radius-`r` window.
pub fn validate_semicharacter(ns: &NsData, chi: &Semicharacter, torus: &Torus, r: i64) -> Result<bool> {
    if !validate_ns(ns, torus)? {
        return Err(Error::Invalid("H is not integral on the lattice".into()));
    }
    if chi.values.len() != torus.rank() {
        return Ok(false);
    }
    let e = ns.im_matrix(torus).expect("validated");
    let table: BTreeMap<Vec<i64>, CircleConst> =
        cube(torus.rank(), 2 * r).into_iter().map(|n| (n.clone(), chi.eval(&n, &e))).collect();
    Ok(validate_character_table(ns, &table, torus))
}

/// Checks `chi(l + m) = chi(l) chi(m) exp(pi i Im H(l, m))` on every pair of
/// the table whose sum is also in the table.
pub fn validate_character_table(ns: &NsData, table: &BTreeMap<Vec<i64>, CircleConst>, torus: &Torus) -> bool {
    for (a, ca) in table {
        for (b, cb) in table {
            let s: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
            let Some(cs) = table.get(&s) else { continue };
            let e = ns.form(&torus.lattice_vector(a), &torus.lattice_vector(b)).im;
            if *cs != ca.mul(cb).mul(&CircleConst::new(e)) {
                return false;
            }
        }
    }
    true
}

/// The torus with its one-slot function algebra `V` (variables `v1..vg`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeContext {
    pub torus: Torus,
    pub space: Arc<SlotSpec>,
}

impl LatticeContext {
    pub fn new(torus: Torus) -> Arc<Self> {
        let kind = SlotKind::Poisson { matrix: torus.data.poisson.clone(), orientation: Orientation::Normal };
        let space = Arc::new(SlotSpec::new(vec![Slot::numbered("V", "v", torus.g(), kind)]).expect("valid torus"));
        Arc::new(LatticeContext { torus, space })
    }
}

#[derive(Clone, Debug)]
pub enum FactorForm {
    Ah {
        ns: NsData,
        chi: Semicharacter,
    },
    Qah(QahData),
    /// Pointwise product of the two values.
    Product(Box<LatticeFactor>, Box<LatticeFactor>),
    /// Values pulled back along `v -> v + w`.
    Translated(Box<LatticeFactor>, Vec<GRat>),
    /// Explicit values on a finite set of lattice points.
    Tabulated(BTreeMap<Vec<i64>, ExpTerm>),
    /// `u^{-1} * base(lambda) * (u . lambda)`.
    Twisted {
        base: Box<LatticeFactor>,
        witness: ExpTerm,
    },
}

/// A `Lambda`-indexed family of invertible functions on `V`.
#[derive(Clone, Debug)]
pub struct LatticeFactor {
    pub ctx: Arc<LatticeContext>,
    pub form: FactorForm,
}

impl LatticeFactor {
    pub fn new(ctx: Arc<LatticeContext>, form: FactorForm) -> Self {
        LatticeFactor { ctx, form }
    }

    pub fn torus(&self) -> &Torus {
        &self.ctx.torus
    }

    pub fn tabulate(&self, points: impl IntoIterator<Item = Vec<i64>>) -> Result<LatticeFactor> {
        let mut t = BTreeMap::new();
        for p in points {
            let v = self.eval(&p)?;
            t.insert(p, v);
        }
        Ok(LatticeFactor::new(self.ctx.clone(), FactorForm::Tabulated(t)))
    }

    pub fn twisted(&self, witness: ExpTerm) -> LatticeFactor {
        LatticeFactor::new(self.ctx.clone(), FactorForm::Twisted { base: Box::new(self.clone()), witness })
    }

    pub fn translated(&self, w: Vec<GRat>) -> LatticeFactor {
        LatticeFactor::new(self.ctx.clone(), FactorForm::Translated(Box::new(self.clone()), w))
    }

    pub fn product(&self, o: &LatticeFactor) -> LatticeFactor {
        LatticeFactor::new(self.ctx.clone(), FactorForm::Product(Box::new(self.clone()), Box::new(o.clone())))
    }
}

fn appell_humbert(ctx: &LatticeContext, ns: &NsData, chi: &Semicharacter, n: &[i64]) -> Result<ExpTerm> {
    let t = &ctx.torus;
    let e = ns.im_matrix(t).ok_or_else(|| Error::Invalid("H is not integral on the lattice".into()))?;
    let lambda = t.lattice_vector(n);
    let half = ns.form(&lambda, &lambda).scale(&Rat::new(1.into(), 2.into()));
    let coeff = Scalar::from_unit(t.order(), chi.eval(n, &e));
    ExpTerm::from_parts(coeff, ns.h_lambda(&lambda), &half, None)
}

/// `sum_k h^k pi <l_k, lambda>`.
pub fn qah_series(l: &[Vec<GRat>], lambda: &[GRat], order: usize) -> HbarSeries {
    let mut cs = vec![PiPoly::zero()];
    for lk in l {
        cs.push(PiPoly::monomial(1, pairing(lk, lambda)));
    }
    HbarSeries::from_coeffs(order, cs)
}

impl Automorphy for LatticeFactor {
    type Element = Vec<i64>;

    fn space(&self) -> &Arc<SlotSpec> {
        &self.ctx.space
    }

    fn order(&self) -> usize {
        self.ctx.torus.order()
    }

    fn eval(&self, n: &Vec<i64>) -> Result<ExpTerm> {
        match &self.form {
            FactorForm::Ah { ns, chi } => appell_humbert(&self.ctx, ns, chi, n),
            FactorForm::Qah(d) => {
                let base = appell_humbert(&self.ctx, &d.ns, &d.chi, n)?;
                let lambda = self.ctx.torus.lattice_vector(n);
                let s = qah_series(&d.l, &lambda, self.order()).exp()?;
                base.scale(&Scalar::from_series(s))
            }
            FactorForm::Product(a, b) => a.eval(n)?.mul(&b.eval(n)?),
            FactorForm::Translated(f, w) => f.eval(n)?.translate(w),
            FactorForm::Tabulated(t) => t.get(n).cloned().ok_or(Error::WindowTooSmall),
            FactorForm::Twisted { base, witness } => {
                let lambda = self.ctx.torus.lattice_vector(n);
                let spec = &self.ctx.space;
                witness.star_inverse()?.star(&base.eval(n)?, spec)?.star(&witness.translate(&lambda)?, spec)
            }
        }
    }

    fn compose(&self, a: &Vec<i64>, b: &Vec<i64>) -> Vec<i64> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    fn act(&self, f: &ExpTerm, n: &Vec<i64>) -> Result<ExpTerm> {
        f.translate(&self.ctx.torus.lattice_vector(n))
    }
}

pub fn ah_factor(ctx: &Arc<LatticeContext>, ns: &NsData, chi: &Semicharacter) -> Result<LatticeFactor> {
    if !validate_semicharacter(ns, chi, &ctx.torus, 0)? {
        return Err(Error::Invalid("semicharacter has the wrong number of values".into()));
    }
    Ok(LatticeFactor::new(ctx.clone(), FactorForm::Ah { ns: ns.clone(), chi: chi.clone() }))
}

pub fn qah_factor(ctx: &Arc<LatticeContext>, d: &QahData) -> Result<LatticeFactor> {
    if !validate_semicharacter(&d.ns, &d.chi, &ctx.torus, 0)? {
        return Err(Error::Invalid("semicharacter has the wrong number of values".into()));
    }
    if !is_quantizable(&d.ns, &ctx.torus)? {
        return Err(Error::Invalid("H is obstructed for this Poisson structure".into()));
    }
    if d.l.iter().any(|v| v.len() != ctx.torus.g()) {
        return Err(Error::DimensionMismatch { expected: ctx.torus.g(), got: d.l[0].len() });
    }
    Ok(LatticeFactor::new(ctx.clone(), FactorForm::Qah(d.clone())))
}

/// `ob0[i][j] = {h_{lambda_j}, h_{lambda_i}} / pi^2` on generator pairs.
pub fn obstruction0(ns: &NsData, torus: &Torus) -> Result<Vec<Vec<GRat>>> {
    if !validate_ns(ns, torus)? {
        return Err(Error::Invalid("H is not integral on the lattice".into()));
    }
    let hs: Vec<Vec<GRat>> = torus.data.lattice.iter().map(|l| ns.h_lambda(l)).collect();
    let pi = &torus.data.poisson;
    let bracket = |a: &[GRat], b: &[GRat]| -> GRat {
        let mut acc = GRat::zero();
        for i in 0..a.len() {
            for j in 0..b.len() {
                acc += &(&(&a[i] * &pi[i][j]) * &b[j]);
            }
        }
        acc
    };
    Ok((0..hs.len()).map(|i| (0..hs.len()).map(|j| bracket(&hs[j], &hs[i])).collect()).collect())
}

pub fn is_quantizable(ns: &NsData, torus: &Torus) -> Result<bool> {
    Ok(obstruction0(ns, torus)?.iter().flatten().all(GRat::is_zero))
}

/// The order-`(n+1)` defect of a factor that is a cocycle modulo `h^{n+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionObstruction {
    pub n: usize,
    /// Value at `(lambda_i, lambda_j)` for generators.
    pub generators: Vec<Vec<PiPoly>>,
    /// Values on all window pairs, keyed by the two coordinate vectors.
    pub window: BTreeMap<(Vec<i64>, Vec<i64>), PiPoly>,
    /// Whether `delta psi = 0` held on the checked triples.
    pub closed: bool,
    pub triples_checked: usize,
}

impl ExtensionObstruction {
    pub fn vanishes(&self) -> bool {
        self.window.values().all(PiPoly::is_zero)
    }
}

fn defect_coefficient(f: &LatticeFactor, a: &[i64], b: &[i64], n: usize) -> Result<PiPoly> {
    let d = cocycle_defect(f, &a.to_vec(), &b.to_vec())?;
    let s = d.coeff.as_series().filter(|_| d.exponent.is_zero());
    let Some(s) = s else {
        return Err(Error::Invalid(format!("defect at {a:?}, {b:?} is not a constant series")));
    };
    if !s.coeff(0).as_constant().is_some_and(|c| c.is_one()) || (1..=n).any(|k| !s.coeff(k).is_zero()) {
        return Err(Error::Invalid(format!("factor is not a cocycle modulo h^{} at {a:?}, {b:?}", n + 1)));
    }
    Ok(s.coeff(n + 1).clone())
}

/// Reads off the `h^{n+1}` coefficient of the cocycle defect and checks that
/// it is an additive 2-cocycle on the window.
pub fn extension_obstruction(f: &LatticeFactor, n: usize, r: i64) -> Result<ExtensionObstruction> {
    if n + 1 >= f.order() {
        return Err(Error::Invalid(format!("order h^{} is beyond the truncation", n + 1)));
    }
    let rank = f.torus().rank();
    let gens: Vec<Vec<i64>> = (0..rank).map(|k| (0..rank).map(|j| i64::from(j == k)).collect()).collect();
    let mut generators = vec![vec![PiPoly::zero(); rank]; rank];
    for i in 0..rank {
        for j in 0..rank {
            generators[i][j] = defect_coefficient(f, &gens[i], &gens[j], n)?;
        }
    }
    let mut window = BTreeMap::new();
    for a in cube(rank, r) {
        for b in cube(rank, r) {
            let v = defect_coefficient(f, &a, &b, n)?;
            window.insert((a.clone(), b), v);
        }
    }
    let mut memo = window.clone();
    let mut psi = |a: &[i64], b: &[i64]| -> Result<PiPoly> {
        let key = (a.to_vec(), b.to_vec());
        if let Some(v) = memo.get(&key) {
            return Ok(v.clone());
        }
        let v = defect_coefficient(f, a, b, n)?;
        memo.insert(key, v.clone());
        Ok(v)
    };
    let dims = [rank, rank, rank];
    let triples = window_tuples(&dims, r, auto_coverage(&dims, r, 4096), 17);
    let mut closed = true;
    for t in &triples {
        let p = split_blocks(t, &dims);
        let (a, b, c) = (p[0], p[1], p[2]);
        let ab: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        let bc: Vec<i64> = b.iter().zip(c).map(|(x, y)| x + y).collect();
        let d = &(&psi(b, c)? - &psi(&ab, c)?) + &(&psi(a, &bc)? - &psi(a, b)?);
        if !d.is_zero() {
            closed = false;
            break;
        }
    }
    Ok(ExtensionObstruction { n, generators, window, closed, triples_checked: triples.len() })
}

/// Result of [`reduce_to_qah`]: `f(lambda) = u^{-1} * qah(lambda) * (u . lambda)`.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub data: QahData,
    pub witness: ExpTerm,
    pub checked: usize,
}

/// Indices of `g` generators whose conjugates are C-linearly independent.
fn complex_basis(torus: &Torus) -> Result<Vec<usize>> {
    let mut chosen: Vec<usize> = Vec::new();
    for j in 0..torus.rank() {
        let mut rows: Vec<Vec<GRat>> = chosen.iter().map(|&k| torus.data.lattice[k].clone()).collect();
        rows.push(torus.data.lattice[j].clone());
        if linalg::rank(&rows) == rows.len() {
            chosen.push(j);
        }
        if chosen.len() == torus.g() {
            return Ok(chosen);
        }
    }
    Err(Error::Invalid("lattice does not span V over C".into()))
}

/// Solve `x . conj(lambda_j) = y_j` for `x in C^g` on a complex basis and
/// check the remaining generators.
fn solve_conj_linear(torus: &Torus, basis: &[usize], values: &[GRat]) -> Option<Vec<GRat>> {
    let m: Vec<Vec<GRat>> = basis.iter().map(|&j| torus.data.lattice[j].iter().map(GRat::conj).collect()).collect();
    let rhs: Vec<GRat> = basis.iter().map(|&j| values[j].clone()).collect();
    let x = linalg::solve(&m, &rhs)?;
    let ok = torus.data.lattice.iter().zip(values).all(|(l, y)| pairing(&x, l) == *y);
    ok.then_some(x)
}

fn unit_vector(rank: usize, k: usize) -> Vec<i64> {
    (0..rank).map(|j| i64::from(j == k)).collect()
}

pub fn reduce_to_qah(f: &LatticeFactor, r: i64) -> Result<Reduction> {
    let torus = f.torus();
    let (g, rank, order) = (torus.g(), torus.rank(), f.order());
    let gens: Vec<ExpTerm> = (0..rank).map(|k| f.eval(&unit_vector(rank, k))).collect::<Result<_>>()?;
    let basis = complex_basis(torus)?;

    // H from the linear parts: a(lambda_j) = H conj(lambda_j), row by row.
    let mut h = vec![vec![GRat::zero(); g]; g];
    for (i, row) in h.iter_mut().enumerate() {
        let vals: Vec<GRat> = gens.iter().map(|t| t.exponent.coeffs[i].clone()).collect();
        *row = solve_conj_linear(torus, &basis, &vals)
            .ok_or_else(|| Error::Invalid("linear parts are not of the form H(v, lambda)".into()))?;
    }
    let ns = NsData { h };
    if !ns.is_hermitian() || !validate_ns(&ns, torus)? {
        return Err(Error::Invalid("recovered H is not a Neron-Severi class".into()));
    }

    // b' with Re(b' . lambda_j) = -(r_j - H(lambda_j, lambda_j)/2).
    let half = Rat::new(1.into(), 2.into());
    let rows: Vec<Vec<Rat>> = torus
        .data
        .lattice
        .iter()
        .map(|l| l.iter().map(|x| x.re.clone()).chain(l.iter().map(|x| -x.im.clone())).collect())
        .collect();
    let rhs: Vec<Rat> =
        gens.iter().zip(&torus.data.lattice).map(|(t, l)| -(&t.exponent.pi_const - ns.form(l, l).re * &half)).collect();
    let y = linalg::solve(&rows, &rhs).ok_or_else(|| Error::Invalid("degenerate lattice".into()))?;
    let b: Vec<GRat> = (0..g).map(|i| GRat::new(y[i].clone(), y[g + i].clone())).collect();
    let u_fix = ExpTerm::exp_linear(b.clone(), order);
    let gauged = f.twisted(u_fix.clone());

    // chi and l from the remaining constants on generators.
    let mut chi = Vec::with_capacity(rank);
    let mut logs: Vec<Vec<GRat>> = vec![Vec::with_capacity(rank); order.saturating_sub(1)];
    for k in 0..rank {
        let t = gauged.eval(&unit_vector(rank, k))?;
        let d = exp_decompose(&t.coeff)?;
        if !d.modulus.is_one() {
            return Err(Error::Invalid("constant part is not a unit times exp(h-series)".into()));
        }
        chi.push(d.phase);
        for (j, lj) in logs.iter_mut().enumerate() {
            let c = d.log.coeff(j + 1);
            if c.terms().any(|(deg, _)| deg != 1) {
                return Err(Error::Invalid("h-constants are not of the form pi <l, lambda>".into()));
            }
            lj.push(c.coeff(1));
        }
    }
    let mut l = Vec::with_capacity(logs.len());
    for vals in &logs {
        l.push(
            solve_conj_linear(torus, &basis, vals)
                .ok_or_else(|| Error::Invalid("h-constants are not conjugate-linear in lambda".into()))?,
        );
    }
    let data = QahData::new(ns, Semicharacter { values: chi }, l);
    let witness = u_fix.star_inverse()?;

    let canonical = LatticeFactor::new(f.ctx.clone(), FactorForm::Qah(data.clone())).twisted(witness.clone());
    let mut checked = 0;
    for n in cube(rank, r) {
        if canonical.eval(&n)? != f.eval(&n)? {
            return Err(Error::Invalid(format!("reduced factor disagrees with the input at {n:?}")));
        }
        checked += 1;
    }
    Ok(Reduction { data, witness, checked })
}

/// Cohomology of a degree-zero quantum line bundle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CohomologyVerdict {
    /// `chi != 1`: every `H^k` vanishes.
    AllVanish,
    /// `chi = 1`, `l = 0`: free with `dim H^k = C(g, k)`.
    FreeTrivial { dims: Vec<u64> },
    /// `chi = 1`, `l != 0`: `H^0 = 0` and `H^1 != 0`.
    NontrivialDeformation { h0_zero: bool, h1_nonzero: bool },
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, j| acc * (n - j) / (j + 1))
}

pub fn classify_cohomology(d: &QahData) -> Result<CohomologyVerdict> {
    if !d.ns.is_zero() {
        return Err(Error::Invalid("cohomology classification needs H = 0".into()));
    }
    if !d.chi.is_trivial() {
        return Ok(CohomologyVerdict::AllVanish);
    }
    let g = d.ns.g() as u64;
    if d.l_is_zero() {
        return Ok(CohomologyVerdict::FreeTrivial { dims: (0..=g).map(|k| binomial(g, k)).collect() });
    }
    Ok(CohomologyVerdict::NontrivialDeformation { h0_zero: true, h1_nonzero: true })
}

/// A random quantizable QAH datum: `H = c w w^*` for a small Gaussian integer
/// vector `w` (rank one, so `H^T Pi H = 0` for every `Pi`), accepted only if
/// integral on the lattice and unobstructed, otherwise `H = 0`; semicharacter
/// angles in sixths of a turn; `order - 1` random `l` vectors.
pub fn sample_qah<R: rand::Rng>(torus: &Torus, rng: &mut R) -> QahData {
    let g = torus.g();
    let small = |rng: &mut R| GRat::ints(rng.gen_range(-2..=2), rng.gen_range(-2..=2));
    let mut ns = NsData::zero(g);
    for _ in 0..8 {
        let w: Vec<GRat> = (0..g).map(|_| small(rng)).collect();
        let c = GRat::int(rng.gen_range(-2..=2));
        let cand = NsData { h: (0..g).map(|i| (0..g).map(|j| &(&c * &w[i]) * &w[j].conj()).collect()).collect() };
        if validate_ns(&cand, torus).unwrap_or(false) && is_quantizable(&cand, torus).unwrap_or(false) {
            ns = cand;
            break;
        }
    }
    let six = Rat::from_integer(6.into());
    let chi = Semicharacter {
        values: (0..torus.rank())
            .map(|_| CircleConst::new(Rat::from_integer(rng.gen_range(0..12).into()) / &six))
            .collect(),
    };
    let l = (1..torus.order())
        .map(|_| (0..g).map(|_| if rng.gen_bool(0.3) { GRat::zero() } else { small(rng) }).collect())
        .collect();
    QahData::new(ns, chi, l)
}

/// `E(pi b . v)` twist: the linear parts are unchanged and the constants
/// pick up `E(pi b . lambda) exp(2 h pi^2 {a(lambda), b})`.
pub fn exp_twist(b: Vec<GRat>, order: usize) -> ExpTerm {
    ExpTerm { coeff: Scalar::one(order), exponent: LinForm::linear(b) }
}

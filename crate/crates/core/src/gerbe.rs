//! The Heisenberg extension of the dual lattice by units and its actions on
//! functions on a fiber `s + Lambda^dual`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cocycle::{auto_coverage, cube, sparse_cube, split_blocks, window_tuples, CheckResult, Coverage};
use crate::coeff::text::render_scalar;
use crate::coeff::{GRat, HbarSeries, PiPoly, Rat, Scalar};
use crate::error::{Error, Result};
use crate::torus::{BForm, Torus};

/// `(xi, z)` with `xi` in dual-basis coordinates and `z` a unit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GammaElement {
    pub xi: Vec<i64>,
    pub z: Scalar,
}

impl GammaElement {
    pub fn new(xi: Vec<i64>, z: Scalar) -> Result<Self> {
        z.inverse()?;
        Ok(GammaElement { xi, z })
    }

    pub fn identity(rank: usize, order: usize) -> Self {
        GammaElement { xi: vec![0; rank], z: Scalar::one(order) }
    }

    pub fn central(rank: usize, z: Scalar) -> Self {
        GammaElement { xi: vec![0; rank], z }
    }

    pub fn lattice(xi: Vec<i64>, order: usize) -> Self {
        GammaElement { xi, z: Scalar::one(order) }
    }
}

/// `c(xi, xi') = exp(h pi^2 B(xi', xi))`.
pub fn heisenberg_cocycle(b: &BForm, xi: &[i64], xi2: &[i64], order: usize) -> Scalar {
    Scalar::exp_hbar_pi2(order, &b.eval(xi2, xi))
}

/// `(xi, z)(xi', z') = (xi + xi', z z' c(xi, xi'))`.
pub fn gamma_mul(a: &GammaElement, b: &GammaElement, bform: &BForm) -> Result<GammaElement> {
    let c = heisenberg_cocycle(bform, &a.xi, &b.xi, a.z.order());
    let xi = a.xi.iter().zip(&b.xi).map(|(x, y)| x + y).collect();
    Ok(GammaElement { xi, z: a.z.try_mul(&b.z)?.try_mul(&c)? })
}

/// `(-xi, z^{-1} c(xi, -xi)^{-1})`.
pub fn gamma_inverse(a: &GammaElement, bform: &BForm) -> Result<GammaElement> {
    let neg: Vec<i64> = a.xi.iter().map(|x| -x).collect();
    let c = heisenberg_cocycle(bform, &a.xi, &neg, a.z.order());
    Ok(GammaElement { xi: neg, z: a.z.inverse()?.try_mul(&c.inverse()?)? })
}

/// `exp(h pi^2 B~(xi, w))` with `B~` the rational-bilinear extension of `B`
/// to real dual coordinates; agrees with `c(w, xi)` on lattice points.
pub fn ctilde(torus: &Torus, w: &[GRat], xi: &[i64]) -> Scalar {
    let s: Vec<Rat> = xi.iter().map(|&k| Rat::from_integer(k.into())).collect();
    let t = torus.dual_coords(w);
    Scalar::exp_hbar_pi2(torus.order(), &torus.bform.eval_real(&s, &t))
}

/// Values on a finite part of the fiber `s + Lambda^dual`, keyed by the
/// dual-lattice offset of `w` from `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberFunction {
    pub base: Vec<GRat>,
    pub values: BTreeMap<Vec<i64>, Scalar>,
}

impl FiberFunction {
    pub fn point(&self, torus: &Torus, n: &[i64]) -> Vec<GRat> {
        let d = torus.dual_vector(n);
        self.base.iter().zip(&d).map(|(a, b)| a + b).collect()
    }

    /// A generic function on the given offsets:
    /// `f_w = (1 + sum (k + 2) n_k^2 + i sum n_k) + (sum n_k) h`.
    pub fn generic(torus: &Torus, base: Vec<GRat>, points: impl IntoIterator<Item = Vec<i64>>) -> FiberFunction {
        let order = torus.order();
        let values = points
            .into_iter()
            .map(|p| {
                let re = 1 + p.iter().enumerate().map(|(k, x)| (k as i64 + 2) * x * x).sum::<i64>();
                let s: i64 = p.iter().sum();
                let series = HbarSeries::from_coeffs(
                    order,
                    vec![PiPoly::constant(GRat::ints(re, s)), PiPoly::constant(GRat::int(s))],
                );
                (p, Scalar::from_series(series))
            })
            .collect();
        FiberFunction { base, values }
    }

    /// [`FiberFunction::generic`] on the radius-`r` window.
    pub fn sample(torus: &Torus, base: Vec<GRat>, r: i64) -> FiberFunction {
        FiberFunction::generic(torus, base, cube(torus.rank(), r))
    }

    /// Values on the common support of both functions agree.
    pub fn agrees_with(&self, o: &FiberFunction) -> bool {
        self.base == o.base && self.values.iter().all(|(k, v)| o.values.get(k).is_none_or(|w| w == v))
    }
}

fn shifted_action(
    torus: &Torus,
    a: &GammaElement,
    f: &FiberFunction,
    sign: i64,
    weight: &Scalar,
) -> Result<FiberFunction> {
    let mut values = BTreeMap::new();
    for n in f.values.keys() {
        let src: Vec<i64> = n.iter().zip(&a.xi).map(|(x, y)| x + sign * y).collect();
        let Some(v) = f.values.get(&src) else { continue };
        let c = ctilde(torus, &f.point(torus, n), &a.xi);
        values.insert(n.clone(), weight.try_mul(&c)?.try_mul(v)?);
    }
    if values.is_empty() {
        return Err(Error::WindowTooSmall);
    }
    Ok(FiberFunction { base: f.base.clone(), values })
}

/// Weight `-1`: `(rho_{(xi,z)} f)_w = z^{-1} c~(w, xi) f_{w - xi}`, on the
/// points where the shift stays in the window.
pub fn rho_act(torus: &Torus, a: &GammaElement, f: &FiberFunction) -> Result<FiberFunction> {
    shifted_action(torus, a, f, -1, &a.z.inverse()?)
}

/// Weight `+1`: `(a_{(xi,z)} f)_w = z c~(w, xi) f_{w + xi}`.
pub fn weight_one_act(torus: &Torus, a: &GammaElement, f: &FiberFunction) -> Result<FiberFunction> {
    shifted_action(torus, a, f, 1, &a.z)
}

/// Central sample used by the window checks.
pub fn central_sample(order: usize) -> Vec<Scalar> {
    vec![Scalar::one(order), Scalar::one_plus_hbar(order)]
}

fn group_window(torus: &Torus, xis: &[Vec<i64>]) -> Vec<GammaElement> {
    let n = torus.order();
    xis.iter().flat_map(|x| central_sample(n).into_iter().map(move |z| GammaElement { xi: x.clone(), z })).collect()
}

/// `c(x1, x2) c(x1 + x2, x3) = c(x2, x3) c(x1, x2 + x3)` on window triples.
pub fn check_cocycle_identity(torus: &Torus, r: i64, budget: u128) -> CheckResult {
    let (rank, n, b) = (torus.rank(), torus.order(), &torus.bform);
    let dims = [rank, rank, rank];
    let cov = auto_coverage(&dims, r, budget);
    let mut res = CheckResult::new("heisenberg 2-cocycle", &cov);
    let add = |x: &[i64], y: &[i64]| -> Vec<i64> { x.iter().zip(y).map(|(a, b)| a + b).collect() };
    for t in window_tuples(&dims, r, cov, 5) {
        let p = split_blocks(&t, &dims);
        let lhs = &heisenberg_cocycle(b, p[0], p[1], n) * &heisenberg_cocycle(b, &add(p[0], p[1]), p[2], n);
        let rhs = &heisenberg_cocycle(b, p[1], p[2], n) * &heisenberg_cocycle(b, p[0], &add(p[1], p[2]), n);
        res.record(lhs == rhs, || format!("{p:?}: {} vs {}", render_scalar(&lhs), render_scalar(&rhs)));
    }
    res
}

/// Associativity of the group law and the inverse formula on random triples.
pub fn check_associativity(torus: &Torus, trials: usize, seed: u64) -> Result<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (rank, n) = (torus.rank(), torus.order());
    let mut res = CheckResult::new("gamma associativity", &Coverage::Spanning { sampled: trials });
    res.coverage = format!("random {trials}");
    let random =
        |rng: &mut ChaCha8Rng| {
            let xi: Vec<i64> = (0..rank).map(|_| rng.gen_range(-3..=3)).collect();
            let mut cs = vec![PiPoly::constant(GRat::ints(rng.gen_range(1..5), rng.gen_range(-2..=2)))];
            cs.extend((1..n).map(|_| {
                PiPoly::monomial(rng.gen_range(0..3), GRat::ints(rng.gen_range(-2..=2), rng.gen_range(-2..=2)))
            }));
            GammaElement { xi, z: Scalar::from_series(HbarSeries::from_coeffs(n, cs)) }
        };
    for _ in 0..trials {
        let (a, b, c) = (random(&mut rng), random(&mut rng), random(&mut rng));
        let bf = &torus.bform;
        let l = gamma_mul(&gamma_mul(&a, &b, bf)?, &c, bf)?;
        let r = gamma_mul(&a, &gamma_mul(&b, &c, bf)?, bf)?;
        let inv_ok = gamma_mul(&a, &gamma_inverse(&a, bf)?, bf)? == GammaElement::identity(rank, n);
        res.record(l == r && inv_ok, || format!("{:?}, {:?}, {:?}", a.xi, b.xi, c.xi));
    }
    Ok(res)
}

/// `rho_{a'} rho_a f = rho_{a' a} f` (and the same for the weight `+1`
/// action) on pairs of window elements with `z` in the central sample.
pub fn check_rho_composition(
    torus: &Torus,
    base: &[GRat],
    r: i64,
    budget: u128,
    weight_one: bool,
) -> Result<CheckResult> {
    let rank = torus.rank();
    let dims = [rank, rank];
    let cov = auto_coverage(&dims, r, budget);
    let name = if weight_one { "weight +1 composition" } else { "rho composition" };
    let mut res = CheckResult::new(name, &cov);
    let probes = sparse_cube(rank, 1, 1);
    let sign = if weight_one { 1 } else { -1 };
    let act = |a: &GammaElement, f: &FiberFunction| {
        if weight_one {
            weight_one_act(torus, a, f)
        } else {
            rho_act(torus, a, f)
        }
    };
    for t in window_tuples(&dims, r, cov, 11) {
        let p = split_blocks(&t, &dims);
        // f only on the offsets the two-step action reads at the probes
        let mut support = Vec::new();
        for q in &probes {
            for (u, v) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                support.push(q.iter().enumerate().map(|(k, x)| x + sign * (u * p[0][k] + v * p[1][k])).collect());
            }
        }
        let f = FiberFunction::generic(torus, base.to_vec(), support);
        for a in group_window(torus, &[p[0].to_vec()]) {
            for a2 in group_window(torus, &[p[1].to_vec()]) {
                let lhs = act(&a2, &act(&a, &f)?)?;
                let rhs = act(&gamma_mul(&a2, &a, &torus.bform)?, &f)?;
                let ok = probes.iter().all(|q| lhs.values.contains_key(q) && lhs.values.get(q) == rhs.values.get(q));
                res.record(ok, || format!("xi = {:?}, xi' = {:?}", a.xi, a2.xi));
            }
        }
    }
    Ok(res)
}

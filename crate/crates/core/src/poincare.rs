//! The quantum Poincare factor on `V x V^dual-bar`, its dual, and the
//! identities tying it to the gerbe and to degree-zero quantum line bundles.
//!
//! Functions on `V^dual-bar` are written in the real dual-lattice coordinates
//! `t` (`l = sum t_k xi_k`), so that both `<l, lambda>` and `conj <l, w>` are
//! linear exponents.

use std::sync::Arc;

use crate::cocycle::{auto_coverage, cocycle_defect, split_blocks, window_tuples, Automorphy, CheckResult};
use crate::coeff::{CircleConst, GRat, Rat, Scalar};
use crate::error::{Error, Result};
use crate::expalg::text::{render_term, Style};
use crate::expalg::{AffineMap, ExpSum, ExpTerm, LinForm, Orientation, Slot, SlotKind, SlotSpec};
use crate::gerbe::{central_sample, ctilde, gamma_mul, heisenberg_cocycle, GammaElement};
use crate::picard::{classify_cohomology, qah_series, CohomologyVerdict, NsData, QahData, Semicharacter};
use crate::torus::{pairing, BForm, Torus};

const STYLE: Style = Style { named: true, exp_coeffs: false };

/// Layouts: `pair = V x L`, `dual_pair = L x V`, `triple = V x L x W^op`,
/// `classical = V x L` with `V` commutative, `section = V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoincareContext {
    pub torus: Torus,
    pub pair: Arc<SlotSpec>,
    pub dual_pair: Arc<SlotSpec>,
    pub triple: Arc<SlotSpec>,
    pub classical: Arc<SlotSpec>,
    pub section: Arc<SlotSpec>,
}

impl PoincareContext {
    pub fn new(torus: Torus) -> Arc<Self> {
        let g = torus.g();
        let pi = |orientation| SlotKind::Poisson { matrix: torus.data.poisson.clone(), orientation };
        let v = Slot::numbered("V", "v", g, pi(Orientation::Normal));
        let l = Slot::numbered("L", "t", 2 * g, SlotKind::Commutative);
        let w = Slot::numbered("W", "w", g, pi(Orientation::Opposite));
        let spec = |slots: Vec<Slot>| Arc::new(SlotSpec::new(slots).expect("distinct variables"));
        Arc::new(PoincareContext {
            pair: spec(vec![v.clone(), l.clone()]),
            dual_pair: spec(vec![l.clone(), v.clone()]),
            triple: spec(vec![v.clone(), l.clone(), w]),
            classical: spec(vec![Slot::numbered("V", "v", g, SlotKind::Commutative), l]),
            section: spec(vec![v]),
            torus,
        })
    }

    pub fn g(&self) -> usize {
        self.torus.g()
    }

    pub fn order(&self) -> usize {
        self.torus.order()
    }

    /// Coefficients of `t -> <l, lambda>`.
    fn l_pairing(&self, lambda: &[GRat]) -> Vec<GRat> {
        self.torus.dual.vectors.iter().map(|x| pairing(x, lambda)).collect()
    }

    /// Coefficients of `t -> conj <l, w>`.
    fn l_conj_pairing(&self, w: &[GRat]) -> Vec<GRat> {
        self.torus.dual.vectors.iter().map(|x| pairing(x, w).conj()).collect()
    }
}

/// Coefficients of `v -> conj <xi, v>`.
fn v_conj_pairing(xi: &[GRat]) -> Vec<GRat> {
    xi.iter().map(GRat::conj).collect()
}

fn ints(n: &[i64]) -> Vec<GRat> {
    n.iter().map(|&k| GRat::int(k)).collect()
}

/// `(lambda, (xi, z))` in `Lambda x Gamma`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PoincareElement {
    pub lambda: Vec<i64>,
    pub gamma: GammaElement,
}

/// `phi(lambda, (xi, z))(v, l) = z exp(pi(<l + xi, lambda> + conj <xi, v>))`.
///
/// `law` is the bilinear form in the group law of `Gamma`; it is the torus
/// B-field except in negative controls.
#[derive(Clone, Debug)]
pub struct PoincareFactor {
    pub ctx: Arc<PoincareContext>,
    pub law: BForm,
}

impl PoincareFactor {
    pub fn new(ctx: &Arc<PoincareContext>) -> Self {
        PoincareFactor { ctx: ctx.clone(), law: ctx.torus.bform.clone() }
    }

    /// The same factor over a group whose cocycle has the opposite sign.
    pub fn with_flipped_law(ctx: &Arc<PoincareContext>) -> Self {
        let matrix = ctx.torus.bform.matrix.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        PoincareFactor { ctx: ctx.clone(), law: BForm { matrix } }
    }
}

impl Automorphy for PoincareFactor {
    type Element = PoincareElement;

    fn space(&self) -> &Arc<SlotSpec> {
        &self.ctx.pair
    }

    fn order(&self) -> usize {
        self.ctx.order()
    }

    fn eval(&self, e: &PoincareElement) -> Result<ExpTerm> {
        let t = &self.ctx.torus;
        let lambda = t.lattice_vector(&e.lambda);
        let xi = t.dual_vector(&e.gamma.xi);
        let mut coeffs = v_conj_pairing(&xi);
        coeffs.extend(self.ctx.l_pairing(&lambda));
        ExpTerm::from_parts(e.gamma.z.clone(), coeffs, &pairing(&xi, &lambda), None)
    }

    fn compose(&self, a: &PoincareElement, b: &PoincareElement) -> PoincareElement {
        PoincareElement {
            lambda: a.lambda.iter().zip(&b.lambda).map(|(x, y)| x + y).collect(),
            gamma: gamma_mul(&a.gamma, &b.gamma, &self.law).expect("units"),
        }
    }

    fn act(&self, f: &ExpTerm, e: &PoincareElement) -> Result<ExpTerm> {
        let mut shift = self.ctx.torus.lattice_vector(&e.lambda);
        shift.extend(ints(&e.gamma.xi));
        f.translate(&shift)
    }
}

pub fn poincare_factor(ctx: &Arc<PoincareContext>) -> PoincareFactor {
    PoincareFactor::new(ctx)
}

/// `(l, v) -> z^{-1} exp(-pi <xi, lambda>) exp(-pi <l, lambda>) exp(pi conj <xi, v>)`
/// on `L x V`.
pub fn poincare_dual_factor(ctx: &PoincareContext, e: &PoincareElement) -> Result<ExpTerm> {
    let t = &ctx.torus;
    let lambda = t.lattice_vector(&e.lambda);
    let xi = t.dual_vector(&e.gamma.xi);
    let mut coeffs: Vec<GRat> = ctx.l_pairing(&lambda).iter().map(|x| -x).collect();
    coeffs.extend(v_conj_pairing(&xi));
    ExpTerm::from_parts(e.gamma.z.inverse()?, coeffs, &-pairing(&xi, &lambda), None)
}

/// Window elements `(lambda, (xi, z))` with `z` in the central sample, from
/// concatenated coordinates `(lambda, xi)`.
fn elements(ctx: &PoincareContext, lambda: &[i64], xi: &[i64]) -> Vec<PoincareElement> {
    central_sample(ctx.order())
        .into_iter()
        .map(|z| PoincareElement { lambda: lambda.to_vec(), gamma: GammaElement { xi: xi.to_vec(), z } })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleReport {
    pub cocycle: CheckResult,
    /// `c(x1, x2) E(conj <x1 + x2, v>) = E(conj <x2, v>) * E(conj <x1, v>)`.
    pub needtoshow: CheckResult,
    /// `{f_x2, f_x1} = pi^2 B(x2, x1)` for `f_x = pi conj <x, v>`.
    pub showme: CheckResult,
}

impl CocycleReport {
    pub fn passed(&self) -> bool {
        self.cocycle.passed && self.needtoshow.passed && self.showme.passed
    }
}

/// Checks the left cocycle condition on window pairs, together with the two
/// sub-identities it reduces to, with the group law of `f`.
pub fn verify_poincare_cocycle(f: &PoincareFactor, r: i64, budget: u128) -> Result<CocycleReport> {
    let ctx = &f.ctx;
    let rank = ctx.torus.rank();
    let dims = [rank, rank, rank, rank];
    let cov = auto_coverage(&dims, r, budget);
    let mut cocycle = CheckResult::new("poincare cocycle", &cov);
    for t in window_tuples(&dims, r, cov, 3) {
        let p = split_blocks(&t, &dims);
        for a in elements(ctx, p[0], p[1]) {
            for b in elements(ctx, p[2], p[3]) {
                let d = cocycle_defect(f, &a, &b)?;
                cocycle.record(d.is_one(), || {
                    format!(
                        "a = ({:?}, {:?}), b = ({:?}, {:?}): defect {}",
                        a.lambda,
                        a.gamma.xi,
                        b.lambda,
                        b.gamma.xi,
                        render_term(&d, &ctx.pair, STYLE)
                    )
                });
            }
        }
    }

    let dims = [rank, rank];
    let cov = auto_coverage(&dims, r, budget);
    let mut needtoshow = CheckResult::new("needtoshow", &cov);
    let mut showme = CheckResult::new("showme", &cov);
    let n = ctx.order();
    let spec = &ctx.section;
    for t in window_tuples(&dims, r, cov, 4) {
        let p = split_blocks(&t, &dims);
        let (x1, x2) = (ctx.torus.dual_vector(p[0]), ctx.torus.dual_vector(p[1]));
        let e = |x: &[GRat]| ExpTerm::exp_linear(v_conj_pairing(x), n);
        let sum: Vec<GRat> = x1.iter().zip(&x2).map(|(a, b)| a + b).collect();
        let lhs = e(&sum).scale(&heisenberg_cocycle(&f.law, p[0], p[1], n))?;
        let rhs = e(&x2).star(&e(&x1), spec)?;
        needtoshow.record(lhs == rhs, || {
            format!("{:?}, {:?}: {} vs {}", p[0], p[1], render_term(&lhs, spec, STYLE), render_term(&rhs, spec, STYLE))
        });
        let ef = |x: &[GRat]| ExpSum::from_term(spec.clone(), e(x));
        let bracket = ef(&x2)?.poisson_bracket(&ef(&x1)?)?;
        let pi2b = Scalar::from_series(crate::coeff::HbarSeries::constant(
            n,
            crate::coeff::PiPoly::monomial(2, ctx.torus.bform.eval(p[1], p[0])),
        ));
        let expected = ef(&sum)?.scale(&pi2b)?;
        showme.record(bracket == expected, || format!("{:?}, {:?}", p[0], p[1]));
    }
    Ok(CocycleReport { cocycle, needtoshow, showme })
}

/// `g(l, v) = exp(pi conj <l, w>)`.
pub fn translation_coboundary(ctx: &PoincareContext, w: &[GRat]) -> ExpTerm {
    let mut coeffs = vec![GRat::zero(); ctx.g()];
    coeffs.extend(ctx.l_conj_pairing(w));
    ExpTerm::exp_linear(coeffs, ctx.order())
}

/// `phi(v + w, l) = g^{-1} * phi * (g . a)` on window elements.
pub fn check_translation(ctx: &Arc<PoincareContext>, w: &[GRat], r: i64, budget: u128) -> Result<CheckResult> {
    let f = PoincareFactor::new(ctx);
    let g = translation_coboundary(ctx, w);
    let ginv = g.star_inverse()?;
    let mut shift = w.to_vec();
    shift.extend(vec![GRat::zero(); ctx.torus.rank()]);
    let rank = ctx.torus.rank();
    let dims = [rank, rank];
    let cov = auto_coverage(&dims, r, budget);
    let mut res = CheckResult::new("translation coboundary", &cov);
    for t in window_tuples(&dims, r, cov, 6) {
        let p = split_blocks(&t, &dims);
        for a in elements(ctx, p[0], p[1]) {
            let phi = f.eval(&a)?;
            let lhs = phi.translate(&shift)?;
            let rhs = ginv.star(&phi, &ctx.pair)?.star(&f.act(&g, &a)?, &ctx.pair)?;
            res.record(lhs == rhs, || {
                format!(
                    "({:?}, {:?}): {} vs {}",
                    a.lambda,
                    a.gamma.xi,
                    render_term(&lhs, &ctx.pair, STYLE),
                    render_term(&rhs, &ctx.pair, STYLE)
                )
            });
        }
    }
    Ok(res)
}

/// Pieces of a term on each slot: the linear parts with coefficient 1, and
/// the scalar with the real `pi`-constant as a separate constant term.
fn split_slots(t: &ExpTerm, spec: &SlotSpec) -> (Vec<ExpTerm>, ExpTerm) {
    let d = spec.dim();
    let parts = (0..spec.slots().len())
        .map(|k| {
            let mut coeffs = vec![GRat::zero(); d];
            for i in spec.slot_range(k) {
                coeffs[i] = t.exponent.coeffs[i].clone();
            }
            ExpTerm::exp_linear(coeffs, t.order())
        })
        .collect();
    let constant = ExpTerm {
        coeff: t.coeff.clone(),
        exponent: LinForm { coeffs: vec![GRat::zero(); d], pi_const: t.exponent.pi_const.clone() },
    };
    (parts, constant)
}

/// Coordinate projection from a layout with `target_dim` variables onto the
/// listed target indices, as an affine map.
fn projection(target: &Arc<SlotSpec>, picks: &[usize]) -> AffineMap {
    let matrix = picks
        .iter()
        .map(|&j| (0..target.dim()).map(|k| if k == j { GRat::one() } else { GRat::zero() }).collect())
        .collect();
    AffineMap::linear(target.clone(), matrix)
}

/// Both sides of the convolution identity as automorphisms `f -> L * f * R`
/// of the triple algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvolutionSides {
    pub left: (ExpTerm, ExpTerm),
    pub right: (ExpTerm, ExpTerm),
}

impl ConvolutionSides {
    pub fn agree(&self) -> bool {
        self.left == self.right
    }
}

/// Left: the pulled-back `P` and `Q` factors combined as a left-right module
/// (the `L` parts multiply, `Q`'s algebra part acts on the left through its
/// inverse, `P`'s algebra part acts on the right). Right: the classical
/// Poincare factor at `(lambda - mu, xi)` pulled back along
/// `(v, l, w) -> (v - w, l)`, split by slot; its `V` part acts on the
/// right and the rest on the left.
pub fn convolution_factor_check(
    ctx: &Arc<PoincareContext>,
    lambda: &[i64],
    gamma: &GammaElement,
    mu: &[i64],
) -> Result<ConvolutionSides> {
    let g = ctx.g();
    let tri = &ctx.triple;
    let f = PoincareFactor::new(ctx);
    let p = f.eval(&PoincareElement { lambda: lambda.to_vec(), gamma: gamma.clone() })?;
    let q = poincare_dual_factor(ctx, &PoincareElement { lambda: mu.to_vec(), gamma: gamma.clone() })?;
    // (v, t, w) -> (v, t) and (v, t, w) -> (t, w)
    let p3 = projection(tri, &(0..3 * g).collect::<Vec<_>>()).apply_term(&p)?;
    let q3 = projection(tri, &(g..4 * g).collect::<Vec<_>>()).apply_term(&q)?;
    let (pp, pc) = split_slots(&p3, tri);
    let (qp, qc) = split_slots(&q3, tri);
    let l_part = pc.mul(&qc)?.mul(&pp[1])?.mul(&qp[1])?;
    let left = (l_part.star(&qp[2].star_inverse()?, tri)?, pp[0].clone());

    let sub: Vec<i64> = lambda.iter().zip(mu).map(|(a, b)| a - b).collect();
    let classical = {
        let t = &ctx.torus;
        let (lv, xi) = (t.lattice_vector(&sub), t.dual_vector(&gamma.xi));
        let mut coeffs = v_conj_pairing(&xi);
        coeffs.extend(ctx.l_pairing(&lv));
        ExpTerm::from_parts(Scalar::one(ctx.order()), coeffs, &pairing(&xi, &lv), None)?
    };
    let mut diff = projection(tri, &(0..3 * g).collect::<Vec<_>>());
    for (i, row) in diff.matrix.iter_mut().take(g).enumerate() {
        row[3 * g + i] = GRat::int(-1);
    }
    let pulled = diff.apply_term(&classical)?;
    let (sp, sc) = split_slots(&pulled, tri);
    // the coproduct: (1 x e x 1) * (e x 1 x 1) * (1 x 1 x e)
    let combined = sc.mul(&sp[1])?.star(&sp[0], tri)?.star(&sp[2], tri)?;
    if combined != pulled {
        return Err(Error::Invalid("slot factors of the pulled-back classical factor do not recombine".into()));
    }
    let right = (sc.mul(&sp[1])?.star(&sp[2], tri)?, sp[0].clone());
    Ok(ConvolutionSides { left, right })
}

pub fn check_convolution(ctx: &Arc<PoincareContext>, r: i64, budget: u128) -> Result<CheckResult> {
    let rank = ctx.torus.rank();
    let dims = [rank, rank, rank];
    let cov = auto_coverage(&dims, r, budget);
    let mut res = CheckResult::new("convolution", &cov);
    for t in window_tuples(&dims, r, cov, 8) {
        let p = split_blocks(&t, &dims);
        for z in central_sample(ctx.order()) {
            let gamma = GammaElement { xi: p[1].to_vec(), z };
            let sides = convolution_factor_check(ctx, p[0], &gamma, p[2])?;
            res.record(sides.agree(), || {
                let show = |(a, b): &(ExpTerm, ExpTerm)| {
                    format!("{} | {}", render_term(a, &ctx.triple, STYLE), render_term(b, &ctx.triple, STYLE))
                };
                format!("({:?}, {:?}, {:?}): {} vs {}", p[0], p[1], p[2], show(&sides.left), show(&sides.right))
            });
        }
    }
    Ok(res)
}

/// `chi_s(lambda) = exp(2 pi i Im <s, lambda>)` on the lattice generators.
pub fn section_character(torus: &Torus, s: &[GRat]) -> Semicharacter {
    let two = Rat::from_integer(2.into());
    Semicharacter { values: torus.data.lattice.iter().map(|l| CircleConst::new(pairing(s, l).im * &two)).collect() }
}

#[derive(Clone, Debug)]
pub struct SectionReport {
    pub data: QahData,
    pub check: CheckResult,
}

/// Compares, on the fiber window `w in s + Lambda^dual`, the factor
/// `b(lambda) = chi_s(lambda) exp(pi sum h^i <l_i, lambda>)` with
/// `ca(lambda, xi)_w = e^{pi <xi + w, lambda>} c~(w, xi) e^{pi conj <xi, v>} L(lambda)`
/// through `iota_w = e^{-pi conj <w, v>}`: `b = iota^{-1} * ca * (iota . (lambda, xi))`.
pub fn restrict_to_section(
    ctx: &Arc<PoincareContext>,
    s: &[GRat],
    l: &[Vec<GRat>],
    r: i64,
    budget: u128,
) -> Result<SectionReport> {
    let (t, n, spec) = (&ctx.torus, ctx.order(), &ctx.section);
    if s.len() != t.g() || l.iter().any(|x| x.len() != t.g()) {
        return Err(Error::DimensionMismatch { expected: t.g(), got: s.len() });
    }
    let chi = section_character(t, s);
    let data = QahData::new(NsData::zero(t.g()), chi, l.to_vec());
    let rank = t.rank();
    let dims = [rank, rank, rank];
    let cov = auto_coverage(&dims, r, budget);
    let mut check = CheckResult::new("section comparison", &cov);
    let iota = |w: &[GRat]| ExpTerm::exp_linear(w.iter().map(|x| -x.conj()).collect(), n);
    let two = Rat::from_integer(2.into());
    for tup in window_tuples(&dims, r, cov, 9) {
        let p = split_blocks(&tup, &dims);
        let (lambda, xi) = (t.lattice_vector(p[0]), t.dual_vector(p[1]));
        let w: Vec<GRat> = s.iter().zip(t.dual_vector(p[2])).map(|(a, b)| a + &b).collect();
        let lser = Scalar::from_series(qah_series(l, &lambda, n).exp()?);
        let b = ExpTerm::constant(t.g(), lser.mul_unit(&CircleConst::new(pairing(&w, &lambda).im * &two)));
        let xw: Vec<GRat> = xi.iter().zip(&w).map(|(a, b)| a + b).collect();
        let ca = ExpTerm::from_parts(
            ctilde(t, &w, p[1]).try_mul(&lser)?,
            v_conj_pairing(&xi),
            &pairing(&xw, &lambda),
            None,
        )?;
        let moved = iota(&xw).translate(&lambda)?;
        let rhs = iota(&w).star_inverse()?.star(&ca, spec)?.star(&moved, spec)?;
        check.record(b == rhs, || {
            format!(
                "lambda = {:?}, xi = {:?}, w = s + {:?}: {} vs {}",
                p[0],
                p[1],
                p[2],
                render_term(&b, spec, STYLE),
                render_term(&rhs, spec, STYLE)
            )
        });
    }
    Ok(SectionReport { data, check })
}

/// Classification of the difference bundle between two constant sections;
/// the verdict is `FreeTrivial` only when they agree.
pub fn section_difference(
    torus: &Torus,
    s: (&[GRat], &[Vec<GRat>]),
    t: (&[GRat], &[Vec<GRat>]),
) -> Result<CohomologyVerdict> {
    let ds: Vec<GRat> = t.0.iter().zip(s.0).map(|(a, b)| a - b).collect();
    let len = s.1.len().max(t.1.len());
    let zero = vec![GRat::zero(); torus.g()];
    let dl = (0..len)
        .map(|k| {
            let a = t.1.get(k).unwrap_or(&zero);
            let b = s.1.get(k).unwrap_or(&zero);
            a.iter().zip(b).map(|(x, y)| x - y).collect()
        })
        .collect();
    classify_cohomology(&QahData::new(NsData::zero(torus.g()), section_character(torus, &ds), dl))
}

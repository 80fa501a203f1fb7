//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails.

#[path = "../../core/tests/support/mod.rs"]
mod fm_brute;

use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use nct::cocycle::cocycle_defect;
use nct::coeff::{exp_decompose, CircleConst, GRat, HbarSeries, PiPoly, Rat, Scalar};
use nct::cohomfm::{fm_hh2, fm_square_table};
use nct::expalg::{taylor_expand, taylor_star_oracle, ExpSum, ExpTerm, LinForm, Orientation, Slot, SlotKind, SlotSpec};
use nct::gerbe::{check_associativity, check_cocycle_identity, check_rho_composition, heisenberg_cocycle};
use nct::linalg;
use nct::picard::{
    ah_factor, classify_cohomology, exp_twist, extension_obstruction, is_quantizable, obstruction0, qah_factor,
    reduce_to_qah, sample_qah, CohomologyVerdict, LatticeContext, NsData, QahData, Semicharacter,
};
use nct::poincare::{check_convolution, restrict_to_section, verify_poincare_cocycle, PoincareContext, PoincareFactor};
use nct::torus::{elementary_bivector, gaussian_lattice, zero_bivector, Torus, TorusData};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const STAR_LIMIT: Duration = Duration::from_secs(10);
const QUANTIZABLE_LIMIT: Duration = Duration::from_secs(1);
const END_TO_END_LIMIT: Duration = Duration::from_secs(60);
/// Full enumeration at g = 1; at g = 2 the spanning set plus 500 samples.
const FULL: u128 = 10_000;
const SPANNING: u128 = 2_000;

fn gaussian(g: usize, order: usize) -> Torus {
    let poisson = if g == 1 { zero_bivector(1) } else { elementary_bivector(g, 0, 1) };
    Torus::new(TorusData { g, lattice: gaussian_lattice(g, &GRat::one()), poisson, order }).unwrap()
}

fn small<R: Rng>(rng: &mut R) -> GRat {
    GRat::new(
        Rat::new(rng.gen_range(-3..=3).into(), rng.gen_range(1..=3).into()),
        Rat::new(rng.gen_range(-3..=3).into(), rng.gen_range(1..=3).into()),
    )
}

fn half_integer<R: Rng>(rng: &mut R) -> GRat {
    GRat::new(
        Rat::new(rng.gen_range(-3..=3).into(), rng.gen_range(1..=2).into()),
        Rat::new(rng.gen_range(-3..=3).into(), rng.gen_range(1..=2).into()),
    )
}

fn random_series<R: Rng>(rng: &mut R, n: usize, unit_constant: bool) -> HbarSeries {
    let mut cs = Vec::with_capacity(n);
    for j in 0..n {
        if j == 0 && unit_constant {
            let mut c = GRat::ints(rng.gen_range(-3..=3), rng.gen_range(-3..=3));
            if c.is_zero() {
                c = GRat::one();
            }
            cs.push(PiPoly::constant(c));
        } else {
            let mut p = PiPoly::zero();
            for _ in 0..rng.gen_range(0..3) {
                p.add_term(rng.gen_range(0..4), &small(rng));
            }
            cs.push(p);
        }
    }
    HbarSeries::from_coeffs(n, cs)
}

fn random_bivector<R: Rng>(g: usize, rng: &mut R) -> Vec<Vec<GRat>> {
    let mut m = vec![vec![GRat::zero(); g]; g];
    for i in 0..g {
        for j in (i + 1)..g {
            let x = small(rng);
            m[j][i] = -&x;
            m[i][j] = x;
        }
    }
    m
}

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn star_law() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let n = 6;
    let start = Instant::now();
    for k in 0..50 {
        let pi = random_bivector(2, &mut rng);
        let kind = SlotKind::Poisson { matrix: pi, orientation: Orientation::Normal };
        let space = Arc::new(SlotSpec::new(vec![Slot::numbered("V", "v", 2, kind)]).unwrap());
        let term = |rng: &mut ChaCha8Rng| {
            let t = ExpTerm {
                coeff: Scalar::new(
                    CircleConst::new(Rat::new(rng.gen_range(0..12).into(), 6.into())),
                    random_series(rng, n, true),
                ),
                exponent: LinForm::linear(vec![half_integer(rng), half_integer(rng)]),
            };
            ExpSum::from_term(space.clone(), t).unwrap()
        };
        let (f, g) = (term(&mut rng), term(&mut rng));
        let closed = taylor_expand(&f.star(&g).map_err(|e| e.to_string())?, 6).map_err(|e| e.to_string())?;
        let oracle = taylor_star_oracle(&f, &g, 6).map_err(|e| e.to_string())?;
        ensure(closed == oracle, || format!("pair {k} differs from the Taylor oracle"))?;
    }
    let el = start.elapsed();
    ensure(el < STAR_LIMIT, || format!("took {el:?}"))?;
    Ok(format!("50 pairs, g = 2, N = 6, degree 6, {:.2} s", el.as_secs_f64()))
}

fn product_of_elliptic_curves() -> Outcome {
    let start = Instant::now();
    let t = gaussian(2, 4);
    let diag = |a: i64, b: i64| NsData { h: vec![vec![GRat::int(a), GRat::zero()], vec![GRat::zero(), GRat::int(b)]] };
    let (hl, hm, hlm) = (diag(0, 1), diag(1, 0), diag(1, 1));
    let q = |h: &NsData| is_quantizable(h, &t).map_err(|e| e.to_string());
    ensure(q(&hl)? && q(&hm)? && !q(&hlm)?, || "quantizability verdicts differ".into())?;
    // lattice generators are ordered e1, i e1, e2, i e2
    let ob = obstruction0(&hlm, &t).map_err(|e| e.to_string())?;
    ensure(ob[0][2] == GRat::int(-1), || format!("obstruction at (e1, e2) is {} pi^2", ob[0][2]))?;
    let el = start.elapsed();
    ensure(el < QUANTIZABLE_LIMIT, || format!("took {el:?}"))?;
    // the h^1 defect of the classical factor carries the same value
    let ctx = LatticeContext::new(t.clone());
    let f = ah_factor(&ctx, &hlm, &Semicharacter::trivial(4)).map_err(|e| e.to_string())?;
    let ext = extension_obstruction(&f, 0, 1).map_err(|e| e.to_string())?;
    ensure(ext.generators[0][2] == PiPoly::monomial(2, GRat::int(-1)), || "h^1 defect disagrees".into())?;
    Ok(format!("H_L, H_M quantizable, H_LM obstructed with -pi^2 at (e1, e2), {} ms", el.as_millis()))
}

fn poincare_cocycle() -> Outcome {
    let c1 = PoincareContext::new(gaussian(1, 4));
    let r1 = verify_poincare_cocycle(&PoincareFactor::new(&c1), 1, FULL).map_err(|e| e.to_string())?;
    ensure(r1.passed() && r1.cocycle.coverage == "full", || format!("g = 1: {:?}", r1.cocycle.failure))?;
    let c2 = PoincareContext::new(gaussian(2, 4));
    let r2 = verify_poincare_cocycle(&PoincareFactor::new(&c2), 1, SPANNING).map_err(|e| e.to_string())?;
    ensure(r2.passed(), || format!("g = 2: {:?}", r2.cocycle.failure))?;
    let bad =
        verify_poincare_cocycle(&PoincareFactor::with_flipped_law(&c2), 1, SPANNING).map_err(|e| e.to_string())?;
    ensure(!bad.cocycle.passed, || "negative control passed".into())?;
    Ok(format!(
        "g = 1 {} pairs ({}), g = 2 {} pairs ({}), flipped law fails",
        r1.cocycle.checked, r1.cocycle.coverage, r2.cocycle.checked, r2.cocycle.coverage
    ))
}

fn convolution() -> Outcome {
    let c = PoincareContext::new(gaussian(1, 4));
    let res = check_convolution(&c, 1, FULL).map_err(|e| e.to_string())?;
    ensure(res.passed && res.coverage == "full", || format!("{:?}", res.failure))?;
    Ok(format!("{} tuples, full window", res.checked))
}

/// `sum_k (pi^2 h b)^k / k!` built by repeated multiplication.
fn exp_series(b: &GRat, n: usize) -> Scalar {
    let x = HbarSeries::monomial(n, 1, PiPoly::monomial(2, b.clone()));
    let mut total = HbarSeries::one(n);
    let mut power = HbarSeries::one(n);
    let mut fact = Rat::from_integer(1.into());
    for k in 1..n {
        power = power.try_mul(&x).unwrap();
        fact *= Rat::from_integer((k as i64).into());
        total = total.try_add(&power.scale(&GRat::real(Rat::from_integer(1.into()) / &fact))).unwrap();
    }
    Scalar::from_series(total)
}

fn gerbe() -> Outcome {
    let t1 = gaussian(1, 4);
    let t2 = gaussian(2, 4);
    let mut checked = 0;
    for (t, budget) in [(&t1, FULL), (&t2, SPANNING)] {
        let c = check_cocycle_identity(t, 1, budget);
        ensure(c.passed, || format!("cocycle: {:?}", c.failure))?;
        checked += c.checked;
    }
    let a = check_associativity(&t2, 100, 5).map_err(|e| e.to_string())?;
    ensure(a.passed && a.checked == 100, || format!("associativity: {:?}", a.failure))?;
    let base = vec![GRat::frac(1, 3)];
    for weight_one in [false, true] {
        let r = check_rho_composition(&t1, &base, 1, FULL, weight_one).map_err(|e| e.to_string())?;
        ensure(r.passed && r.coverage == "full", || format!("rho: {:?}", r.failure))?;
    }
    let cube = nct::cocycle::cube(4, 1);
    for x in &cube {
        for y in &cube {
            let got = heisenberg_cocycle(&t2.bform, x, y, 4);
            let want = exp_series(&t2.bform.eval(y, x), 4);
            ensure(got == want, || format!("expansion differs at {x:?}, {y:?}"))?;
        }
    }
    Ok(format!(
        "{checked} cocycle triples, 100 associativity triples, rho full window at g = 1, {} expansions",
        cube.len() * cube.len()
    ))
}

fn fm() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for g in [2, 3] {
        let base = gaussian(g, 2);
        for k in 0..20 {
            let pi = random_bivector(g, &mut rng);
            let t = base.with_poisson(pi.clone()).map_err(|e| e.to_string())?;
            ensure(fm_hh2(&pi, &t) == t.bform.matrix, || format!("g = {g}, bivector {k}"))?;
        }
    }
    let table = fm_square_table(&gaussian(1, 2));
    let ours: Vec<Option<Rat>> = table.signs.clone();
    let theirs: Vec<Option<Rat>> = fm_brute::oracle_table().into_iter().map(Some).collect();
    ensure(table.passed && ours == theirs, || format!("square table {ours:?} vs brute force {theirs:?}"))?;
    let shown: Vec<String> = ours.iter().flatten().map(|x| x.to_string()).collect();
    Ok(format!("40 bivectors; g = 1 square table [{}] matches brute force", shown.join(", ")))
}

/// Ranks of the Koszul differentials `d(e_S) = sum_j w_j e_j ^ e_S` on the
/// exterior algebra of `w.len()` generators; returns the cohomology dims.
fn koszul_dims(w: &[GRat]) -> Vec<usize> {
    let n = w.len();
    let masks = |k: u32| -> Vec<u32> { (0u32..1 << n).filter(|m| m.count_ones() == k).collect() };
    let rank_of = |k: u32| -> usize {
        let (src, dst) = (masks(k), masks(k + 1));
        if src.is_empty() || dst.is_empty() {
            return 0;
        }
        let mut m = vec![vec![GRat::zero(); src.len()]; dst.len()];
        for (c, &s) in src.iter().enumerate() {
            for j in 0..n {
                if s & (1 << j) == 0 {
                    let sign = if (s & ((1 << j) - 1)).count_ones() % 2 == 0 { GRat::one() } else { GRat::int(-1) };
                    let r = dst.iter().position(|&d| d == s | (1 << j)).unwrap();
                    m[r][c] = &sign * &w[j];
                }
            }
        }
        linalg::rank(&m)
    };
    (0..=n as u32).map(|k| masks(k).len() - rank_of(k) - if k == 0 { 0 } else { rank_of(k - 1) }).collect()
}

/// Cohomology verdict computed from Koszul complexes: the lattice action
/// `chi - 1` when `chi != 1`; the zero differential on `Lambda C^g` when
/// `l = 0`; the leading deformation class otherwise.
fn koszul_oracle(g: usize, chi: &[GRat], l: &[Vec<GRat>]) -> CohomologyVerdict {
    let shifted: Vec<GRat> = chi.iter().map(|c| c - &GRat::one()).collect();
    if shifted.iter().any(|x| !x.is_zero()) {
        assert!(koszul_dims(&shifted).iter().all(|&d| d == 0));
        return CohomologyVerdict::AllVanish;
    }
    let Some(j) = l.iter().position(|v| v.iter().any(|x| !x.is_zero())) else {
        let dims = koszul_dims(&vec![GRat::zero(); g]);
        return CohomologyVerdict::FreeTrivial { dims: dims.into_iter().map(|d| d as u64).collect() };
    };
    // omega = h^{j+1} a: r omega = 0 forces r = 0; a is a cocycle that is
    // not r omega for any r since r omega vanishes below h^{j+1}
    let a = &l[j];
    let column: Vec<Vec<GRat>> = a.iter().map(|x| vec![x.clone()]).collect();
    let h0_zero = linalg::rank(&column) == 1;
    let mut system = vec![vec![GRat::zero(); j + 2]; g * (j + 2)];
    let mut rhs = vec![GRat::zero(); g * (j + 2)];
    for p in 0..(j + 2) {
        for i in 0..g {
            // coefficient of h^p in component i of (sum_q r_q h^q) h^{j+1} a
            if p > j {
                system[p * g + i][p - j - 1] = a[i].clone();
            }
            if p == 0 {
                rhs[i] = a[i].clone();
            }
        }
    }
    let h1_nonzero = linalg::solve(&system, &rhs).is_none();
    CohomologyVerdict::NontrivialDeformation { h0_zero, h1_nonzero }
}

fn classifier() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut cases = 0;
    for g in 1..=4 {
        for _ in 0..6 {
            let chi_angles: Vec<i64> =
                (0..2 * g).map(|_| if rng.gen_bool(0.6) { 0 } else { rng.gen_range(1..4) }).collect();
            let chi = Semicharacter {
                values: chi_angles.iter().map(|&k| CircleConst::new(Rat::new(k.into(), 2.into()))).collect(),
            };
            let chi_vals: Vec<GRat> = chi_angles.iter().map(|&k| GRat::one().mul_i_pow(k)).collect();
            let l: Vec<Vec<GRat>> = (0..rng.gen_range(0..3))
                .map(|_| (0..g).map(|_| if rng.gen_bool(0.5) { GRat::zero() } else { small(&mut rng) }).collect())
                .collect();
            let got = classify_cohomology(&QahData::new(NsData::zero(g), chi, l.clone())).map_err(|e| e.to_string())?;
            let want = koszul_oracle(g, &chi_vals, &l);
            ensure(got == want, || format!("g = {g}, chi {chi_angles:?}, l {l:?}: {got:?} vs {want:?}"))?;
            cases += 1;
        }
        let trivial = classify_cohomology(&QahData::new(NsData::zero(g), Semicharacter::trivial(2 * g), vec![]))
            .map_err(|e| e.to_string())?;
        ensure(trivial == koszul_oracle(g, &vec![GRat::one(); 2 * g], &[]), || format!("trivial bundle at g = {g}"))?;
    }
    Ok(format!("{cases} random bundles at g <= 4 agree with the Koszul oracle"))
}

fn exp_log() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for k in 0..100 {
        let unit = CircleConst::new(Rat::new(rng.gen_range(0..24).into(), 12.into()));
        let u = Scalar::new(unit, random_series(&mut rng, 8, true));
        let d = exp_decompose(&u).map_err(|e| e.to_string())?;
        ensure(d.recompose() == u, || format!("unit {k} does not round-trip"))?;
    }
    Ok("100 units at N = 8".into())
}

fn qah_reduction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let t = Torus::new(TorusData {
        g: 2,
        lattice: gaussian_lattice(2, &GRat::one()),
        poisson: elementary_bivector(2, 0, 1),
        order: 4,
    })
    .unwrap();
    let ctx = LatticeContext::new(t.clone());
    let mut nonzero_h = 0;
    for k in 0..50 {
        let data = sample_qah(&t, &mut rng);
        nonzero_h += usize::from(!data.ns.is_zero());
        let f = qah_factor(&ctx, &data).map_err(|e| e.to_string())?;
        ensure(cocycle_defect(&f, &vec![1, 0, 1, 0], &vec![0, 1, 0, -1]).map_err(|e| e.to_string())?.is_one(), || {
            format!("trial {k}: sample is not a cocycle")
        })?;
        let u = exp_twist(vec![small(&mut rng), small(&mut rng)], 4);
        let red = reduce_to_qah(&f.twisted(u.clone()), 1).map_err(|e| e.to_string())?;
        ensure(red.data == data && red.witness == u, || format!("trial {k}: recovered {:?}", red.data))?;
    }
    Ok(format!("50 trials, {nonzero_h} with H != 0"))
}

fn sections() -> Outcome {
    let mut checked = 0;
    let c1 = PoincareContext::new(gaussian(1, 4));
    let l1 = vec![vec![GRat::ints(1, -1)], vec![GRat::zero()], vec![GRat::frac(1, 2)]];
    for (s, l) in [
        (vec![GRat::zero()], vec![]),
        (vec![GRat::ints(0, 1).scale(&Rat::new(1.into(), 2.into()))], vec![]),
        (vec![GRat::frac(1, 3)], l1),
    ] {
        let rep = restrict_to_section(&c1, &s, &l, 1, FULL).map_err(|e| e.to_string())?;
        ensure(rep.check.passed && rep.check.coverage == "full", || {
            format!("g = 1, s = {s:?}: {:?}", rep.check.failure)
        })?;
        checked += rep.check.checked;
    }
    let c2 = PoincareContext::new(gaussian(2, 4));
    let l2 = vec![vec![GRat::one(), GRat::frac(1, 2)], vec![GRat::ints(0, 2), GRat::zero()]];
    for (s, l) in [(vec![GRat::zero(), GRat::zero()], vec![]), (vec![GRat::frac(1, 3), GRat::ints(0, 1)], l2)] {
        let rep = restrict_to_section(&c2, &s, &l, 1, SPANNING).map_err(|e| e.to_string())?;
        ensure(rep.check.passed, || format!("g = 2, s = {s:?}: {:?}", rep.check.failure))?;
        checked += rep.check.checked;
    }
    Ok(format!("{checked} window points at g = 1 (full) and g = 2 (spanning)"))
}

fn end_to_end() -> Outcome {
    let start = Instant::now();
    for f in ["g1_gaussian", "e1xe2"] {
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/").to_string() + f + ".json";
        let out = Command::new(env!("CARGO_BIN_EXE_nct"))
            .args(["run", &path])
            .env_remove("NCT_WINDOW")
            .output()
            .map_err(|e| e.to_string())?;
        let text = String::from_utf8_lossy(&out.stdout);
        ensure(out.status.success(), || format!("{f}: exit {:?}\n{text}", out.status.code()))?;
        ensure(!text.lines().any(|l| l.starts_with("FAIL")), || format!("{f}: failing record"))?;
    }
    let el = start.elapsed();
    ensure(el < END_TO_END_LIMIT, || format!("took {el:?}"))?;
    Ok(format!("both fixtures exit 0 in {:.1} s", el.as_secs_f64()))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("star exponential law vs Taylor oracle", star_law),
        ("quantizability on E1 x E2", product_of_elliptic_curves),
        ("Poincare cocycle and negative control", poincare_cocycle),
        ("convolution identity", convolution),
        ("gerbe cocycle, group law, rho, expansion", gerbe),
        ("FM transport of Pi and square table", fm),
        ("cohomology classifier", classifier),
        ("exp/log bijection", exp_log),
        ("quantum Appell-Humbert canonicalization", qah_reduction),
        ("section comparison", sections),
        ("nct run on bundled fixtures", end_to_end),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", k + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

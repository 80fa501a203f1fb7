//! The verification suites run by `nct run`.

use std::time::Instant;

use nct::cocycle::{auto_coverage, cocycle_defect, split_blocks, window_tuples, CheckResult};
use nct::coeff::text::{render_pipoly, render_scalar};
use nct::coeff::{GRat, HbarSeries, PiPoly, Rat, Scalar};
use nct::cohomfm::{fm_hh2, fm_square_table};
use nct::gerbe::{check_associativity, check_cocycle_identity, check_rho_composition, heisenberg_cocycle};
use nct::picard::{
    ah_factor, classify_cohomology, exp_twist, extension_obstruction, is_quantizable, obstruction0, qah_factor,
    reduce_to_qah, validate_ns, validate_semicharacter, CohomologyVerdict, LatticeContext,
};
use nct::poincare::{
    check_convolution, check_translation, restrict_to_section, section_difference, verify_poincare_cocycle,
    PoincareContext, PoincareFactor,
};
use nct::torus::{pairing, validate_torus, Torus};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{RunConfig, SectionSpec};
use crate::report::{Record, Status};

/// Window sizes up to this many tuples are enumerated in full; larger
/// windows use the spanning set plus a quarter of this many samples.
pub fn default_budget(g: usize) -> u128 {
    if g == 1 {
        10_000
    } else {
        400
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RunParams {
    pub window: i64,
    pub budget: u128,
}

pub struct SuiteInput<'a> {
    pub cfg: &'a RunConfig,
    pub torus: &'a Torus,
    pub params: RunParams,
}

type Check<'a> = Box<dyn FnOnce() -> nct::error::Result<Vec<Record>> + 'a>;

fn timed(suite: &str, name: &str, f: Check<'_>) -> Vec<Record> {
    let start = Instant::now();
    let mut out = f().unwrap_or_else(|e| vec![Record::new(suite, name, Status::Fail, format!("error: {e}"))]);
    let ms = start.elapsed().as_millis();
    for r in &mut out {
        r.millis = Some(ms);
    }
    out
}

pub fn run_suite(name: &str, input: &SuiteInput<'_>) -> Vec<Record> {
    let checks: Vec<(String, Check<'_>)> = match name {
        "torus" => torus_suite(input),
        "quantizable" => quantizable_suite(input),
        "qpic" => qpic_suite(input),
        "poincare" => poincare_suite(input),
        "convolution" => convolution_suite(input),
        "gerbe" => gerbe_suite(input),
        "fm" => fm_suite(input),
        "cohomology" => cohomology_suite(input),
        other => return vec![Record::new(other, "suite", Status::Fail, "unknown suite")],
    };
    checks.into_iter().flat_map(|(n, f)| timed(name, &n, f)).collect()
}

fn grats(v: &[GRat]) -> String {
    let items: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", items.join(", "))
}

fn matrix(m: &[Vec<GRat>]) -> String {
    let rows: Vec<String> = m.iter().map(|r| grats(r)).collect();
    format!("[{}]", rows.join(", "))
}

fn torus_suite<'a>(inp: &'a SuiteInput<'a>) -> Vec<(String, Check<'a>)> {
    const S: &str = "torus";
    let t = inp.torus;
    vec![
        (
            "validate".into(),
            Box::new(move || {
                let rep = validate_torus(&t.data)?;
                Ok(vec![Record::verdict(
                    S,
                    "validate",
                    true,
                    format!("g = {}, rank Pi = {}, period determinant {}", rep.g, rep.poisson_rank, rep.period_det),
                )])
            }),
        ),
        (
            "dual lattice".into(),
            Box::new(move || {
                let mut bad = None;
                for (k, xi) in t.dual.vectors.iter().enumerate() {
                    for (j, l) in t.data.lattice.iter().enumerate() {
                        let want = Rat::from_integer(i64::from(j == k).into());
                        if pairing(xi, l).im != want && bad.is_none() {
                            bad = Some(format!("Im <xi_{k}, lambda_{j}> = {}", pairing(xi, l).im));
                        }
                    }
                }
                let detail = bad.clone().unwrap_or_else(|| matrix(&t.dual.vectors));
                let mut r = Record::verdict(S, "dual lattice", bad.is_none(), detail);
                r.checked = t.rank() * t.rank();
                Ok(vec![r])
            }),
        ),
        (
            "bfield".into(),
            Box::new(move || {
                let m = &t.bform.matrix;
                let n = m.len();
                let anti = (0..n).all(|i| (0..n).all(|j| m[i][j] == -&m[j][i]));
                Ok(vec![Record::verdict(S, "bfield", anti, matrix(m))])
            }),
        ),
    ]
}

fn quantizable_suite<'a>(inp: &'a SuiteInput<'a>) -> Vec<(String, Check<'a>)> {
    const S: &str = "quantizable";
    let (t, r) = (inp.torus, inp.params.window);
    inp.cfg
        .bundles
        .iter()
        .map(|b| {
            let name = b.name.clone();
            let check: Check<'a> = Box::new(move || {
                if !validate_ns(&b.ns, t)? {
                    return Ok(vec![Record::verdict(S, &b.name, false, "H is not a Neron-Severi class")]);
                }
                if !validate_semicharacter(&b.ns, &b.chi, t, r)? {
                    return Ok(vec![Record::verdict(S, &b.name, false, "chi is not a semicharacter for H")]);
                }
                let q = is_quantizable(&b.ns, t)?;
                let detail = if q {
                    "quantizable".to_string()
                } else {
                    format!("obstructed; {{h_j, h_i}} / pi^2 = {}", matrix(&obstruction0(&b.ns, t)?))
                };
                let ok = b.expect_quantizable.is_none_or(|e| e == q);
                Ok(vec![Record::verdict(S, &b.name, ok, detail)])
            });
            (name, check)
        })
        .collect()
}

fn lattice_cocycle_check(f: &nct::picard::LatticeFactor, r: i64, budget: u128) -> nct::error::Result<CheckResult> {
    let rank = f.torus().rank();
    let dims = [rank, rank];
    let cov = auto_coverage(&dims, r, budget);
    let mut res = CheckResult::new("lattice cocycle", &cov);
    for t in window_tuples(&dims, r, cov, 11) {
        let p = split_blocks(&t, &dims);
        let d = cocycle_defect(f, &p[0].to_vec(), &p[1].to_vec())?;
        res.record(d.is_one(), || format!("{:?}, {:?}: defect {}", p[0], p[1], render_scalar(&d.coeff)));
    }
    Ok(res)
}

fn sample_twist(g: usize) -> Vec<GRat> {
    (0..g)
        .map(|k| {
            if k % 2 == 0 {
                GRat::new(Rat::new(1.into(), 2.into()), Rat::from_integer((-1).into()))
            } else {
                GRat::frac(1, 3)
            }
        })
        .collect()
}

fn qpic_suite<'a>(inp: &'a SuiteInput<'a>) -> Vec<(String, Check<'a>)> {
    const S: &str = "qpic";
    let (t, p) = (inp.torus, inp.params);
    let ctx = LatticeContext::new(t.clone());
    inp.cfg
        .bundles
        .iter()
        .map(|b| {
            let ctx = ctx.clone();
            let check: Check<'a> = Box::new(move || {
                if !validate_ns(&b.ns, t)? || !validate_semicharacter(&b.ns, &b.chi, t, 0)? {
                    return Ok(vec![Record::skip(S, &b.name, "invalid Neron-Severi data")]);
                }
                if !is_quantizable(&b.ns, t)? {
                    let f = ah_factor(&ctx, &b.ns, &b.chi)?;
                    let ob = extension_obstruction(&f, 0, p.window)?;
                    let table = obstruction0(&b.ns, t)?;
                    let matches = (0..t.rank()).all(|i| {
                        (0..t.rank()).all(|j| ob.generators[i][j] == PiPoly::monomial(2, table[i][j].clone()))
                    });
                    let ok = ob.closed && !ob.vanishes() && matches;
                    let mut r =
                        Record::verdict(S, format!("{}/obstruction", b.name), ok, first_nonzero(&ob.generators));
                    r.checked = ob.window.len() + ob.triples_checked;
                    return Ok(vec![r]);
                }
                let data = b.qah();
                let f = qah_factor(&ctx, &data)?;
                let cocycle = lattice_cocycle_check(&f, p.window, p.budget)?;
                let u = exp_twist(sample_twist(t.g()), t.order());
                let red = reduce_to_qah(&f.twisted(u.clone()), p.window)?;
                let ok = red.data == data && red.witness == u;
                let mut rr = Record::verdict(
                    S,
                    format!("{}/reduce", b.name),
                    ok,
                    if ok { String::new() } else { format!("recovered {:?}", red.data) },
                );
                rr.checked = red.checked;
                Ok(vec![Record::from_check(S, format!("{}/cocycle", b.name), &cocycle), rr])
            });
            (b.name.clone(), check)
        })
        .collect()
}

fn first_nonzero(m: &[Vec<PiPoly>]) -> String {
    for (i, row) in m.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if !x.is_zero() {
                return format!("h^1 defect at generators ({i}, {j}): {}", render_pipoly(x));
            }
        }
    }
    "h^1 defect vanishes on generators".into()
}

fn sections(cfg: &RunConfig, t: &Torus) -> Vec<SectionSpec> {
    if !cfg.sections.is_empty() {
        return cfg.sections.clone();
    }
    let third: Vec<GRat> =
        t.dual_vector(&unit(t.rank(), 0)).iter().map(|x| x.scale(&Rat::new(1.into(), 3.into()))).collect();
    vec![SectionSpec { s: vec![GRat::zero(); t.g()], l: Vec::new() }, SectionSpec { s: third, l: Vec::new() }]
}

fn unit(n: usize, k: usize) -> Vec<i64> {
    (0..n).map(|j| i64::from(j == k)).collect()
}

fn poincare_suite<'a>(inp: &'a SuiteInput<'a>) -> Vec<(String, Check<'a>)> {
    const S: &str = "poincare";
    let (t, p) = (inp.torus, inp.params);
    let ctx = PoincareContext::new(t.clone());
    let secs = sections(inp.cfg, t);
    let mut out: Vec<(String, Check<'a>)> = Vec::new();
    let c = ctx.clone();
    out.push((
        "cocycle".into(),
        Box::new(move || {
            let rep = verify_poincare_cocycle(&PoincareFactor::new(&c), p.window, p.budget)?;
            Ok(vec![
                Record::from_check(S, "cocycle", &rep.cocycle),
                Record::from_check(S, "cocycle/needtoshow", &rep.needtoshow),
                Record::from_check(S, "cocycle/bracket", &rep.showme),
            ])
        }),
    ));
    let c = ctx.clone();
    out.push((
        "negative control".into(),
        Box::new(move || {
            if t.bform.is_zero() {
                return Ok(vec![Record::skip(
                    S,
                    "negative control",
                    "not applicable: B = 0, the flipped law is the same law",
                )]);
            }
            let rep = verify_poincare_cocycle(&PoincareFactor::with_flipped_law(&c), p.window, p.budget)?;
            Ok(vec![Record::expect_failure(S, "negative control", &rep.cocycle)])
        }),
    ));
    for (i, sec) in secs.iter().enumerate() {
        let c = ctx.clone();
        let s = sec.s.clone();
        out.push((
            format!("translation/{i}"),
            Box::new(move || {
                Ok(vec![Record::from_check(
                    S,
                    format!("translation/{i}"),
                    &check_translation(&c, &s, p.window, p.budget)?,
                )])
            }),
        ));
        let c = ctx.clone();
        let sec = sec.clone();
        out.push((
            format!("section/{i}"),
            Box::new(move || {
                let rep = restrict_to_section(&c, &sec.s, &sec.l, p.window, p.budget)?;
                let mut r = Record::from_check(S, format!("section/{i}"), &rep.check);
                if rep.check.passed {
                    let angles: Vec<String> = rep.data.chi.values.iter().map(|v| v.angle().to_string()).collect();
                    r.detail = Some(format!("chi angles (units of pi) [{}]", angles.join(", ")));
                }
                Ok(vec![r])
            }),
        ));
    }
    let all = secs.clone();
    out.push((
        "hom vanishing".into(),
        Box::new(move || {
            let mut res = CheckResult::new("hom vanishing", &nct::cocycle::Coverage::Full);
            for (i, a) in all.iter().enumerate() {
                for (j, b) in all.iter().enumerate().skip(i) {
                    let v = section_difference(t, (&a.s, &a.l), (&b.s, &b.l))?;
                    let ds: Vec<GRat> = b.s.iter().zip(&a.s).map(|(x, y)| x - y).collect();
                    let same_point = Torus::is_integral(&t.dual_coords(&ds));
                    let trim = |l: &[Vec<GRat>]| {
                        let mut l = l.to_vec();
                        while l.last().is_some_and(|v| v.iter().all(GRat::is_zero)) {
                            l.pop();
                        }
                        l
                    };
                    let same = same_point && trim(&a.l) == trim(&b.l);
                    let ok = match &v {
                        CohomologyVerdict::FreeTrivial { .. } => same,
                        CohomologyVerdict::AllVanish => !same_point,
                        CohomologyVerdict::NontrivialDeformation { h0_zero, .. } => same_point && !same && *h0_zero,
                    };
                    res.record(ok, || format!("sections {i}, {j}: {v:?}"));
                }
            }
            Ok(vec![Record::from_check(S, "hom vanishing", &res)])
        }),
    ));
    out
}

fn convolution_suite<'a>(inp: &'a SuiteInput<'a>) -> Vec<(String, Check<'a>)> {
    let (t, p) = (inp.torus, inp.params);
    vec![(
        "identity".into(),
        Box::new(move || {
            let ctx = PoincareContext::new(t.clone());
            Ok(vec![Record::from_check("convolution", "identity", &check_convolution(&ctx, p.window, p.budget)?)])
        }),
    )]
}

/// `1 + pi^2 h b + (pi^4 / 2) h^2 b^2 + ...` truncated at `h^n`.
fn heisenberg_expansion(b: &GRat, n: usize) -> Scalar {
    let mut coeffs = Vec::with_capacity(n);
    let mut power = GRat::one();
    let mut fact = Rat::from_integer(1.into());
    for k in 0..n {
        if k > 0 {
            power = &power * b;
            fact *= Rat::from_integer((k as i64).into());
        }
        coeffs.push(PiPoly::monomial(2 * k as u32, power.scale(&(Rat::from_integer(1.into()) / &fact))));
    }
    Scalar::from_series(HbarSeries::from_coeffs(n, coeffs))
}

fn gerbe_suite<'a>(inp: &'a SuiteInput<'a>) -> Vec<(String, Check<'a>)> {
    const S: &str = "gerbe";
    let (t, p) = (inp.torus, inp.params);
    let base: Vec<GRat> = (0..t.g())
        .map(|k| GRat::new(Rat::new(1.into(), (3 + k as i64).into()), Rat::new(1.into(), 5.into())))
        .collect();
    let base2 = base.clone();
    vec![
        (
            "cocycle".into(),
            Box::new(move || {
                Ok(vec![Record::from_check(S, "cocycle", &check_cocycle_identity(t, p.window, p.budget))])
            }),
        ),
        (
            "expansion".into(),
            Box::new(move || {
                let rank = t.rank();
                let dims = [rank, rank];
                let cov = auto_coverage(&dims, p.window, p.budget);
                let mut res = CheckResult::new("expansion", &cov);
                for tup in window_tuples(&dims, p.window, cov, 12) {
                    let q = split_blocks(&tup, &dims);
                    let got = heisenberg_cocycle(&t.bform, q[0], q[1], t.order());
                    let want = heisenberg_expansion(&t.bform.eval(q[1], q[0]), t.order());
                    res.record(got == want, || format!("{q:?}: {} vs {}", render_scalar(&got), render_scalar(&want)));
                }
                Ok(vec![Record::from_check(S, "expansion", &res)])
            }),
        ),
        (
            "associativity".into(),
            Box::new(move || Ok(vec![Record::from_check(S, "associativity", &check_associativity(t, 100, 17)?)])),
        ),
        (
            "rho".into(),
            Box::new(move || {
                Ok(vec![Record::from_check(S, "rho", &check_rho_composition(t, &base, p.window, p.budget, false)?)])
            }),
        ),
        (
            "weight one".into(),
            Box::new(move || {
                Ok(vec![Record::from_check(
                    S,
                    "weight one",
                    &check_rho_composition(t, &base2, p.window, p.budget, true)?,
                )])
            }),
        ),
    ]
}

fn random_bivector<R: Rng>(g: usize, rng: &mut R) -> Vec<Vec<GRat>> {
    let mut m = vec![vec![GRat::zero(); g]; g];
    for i in 0..g {
        for j in (i + 1)..g {
            let x = GRat::new(
                Rat::new(rng.gen_range(-4..=4).into(), rng.gen_range(1..=3).into()),
                Rat::new(rng.gen_range(-4..=4).into(), rng.gen_range(1..=3).into()),
            );
            m[j][i] = -&x;
            m[i][j] = x;
        }
    }
    m
}

fn fm_suite<'a>(inp: &'a SuiteInput<'a>) -> Vec<(String, Check<'a>)> {
    const S: &str = "fm";
    let t = inp.torus;
    vec![
        (
            "hh2".into(),
            Box::new(move || {
                let mut res = CheckResult::new("hh2", &nct::cocycle::Coverage::Full);
                let got = fm_hh2(t.poisson(), t);
                res.record(got == t.bform.matrix, || {
                    format!("configured Pi: {} vs {}", matrix(&got), matrix(&t.bform.matrix))
                });
                let mut rng = ChaCha8Rng::seed_from_u64(23);
                for k in 0..20 {
                    let pi = random_bivector(t.g(), &mut rng);
                    let tk = t.with_poisson(pi.clone())?;
                    let got = fm_hh2(&pi, &tk);
                    res.record(got == tk.bform.matrix, || {
                        format!("random Pi #{k} = {}: {}", matrix(&pi), matrix(&got))
                    });
                }
                Ok(vec![Record::from_check(S, "hh2", &res)])
            }),
        ),
        (
            "square".into(),
            Box::new(move || {
                let table = fm_square_table(t);
                let signs: Vec<String> =
                    table.signs.iter().map(|s| s.as_ref().map_or("none".into(), |x| x.to_string())).collect();
                let mut r = Record::verdict(
                    S,
                    "square",
                    table.passed,
                    format!("degree signs [{}] relative to (-1)^d; {}", signs.join(", "), table.convention),
                );
                r.checked = table.signs.len();
                Ok(vec![r])
            }),
        ),
    ]
}

fn expected_verdict(f: &nct::picard::LatticeFactor, rank: usize) -> nct::error::Result<CohomologyVerdict> {
    let mut chi_trivial = true;
    let mut l_zero = true;
    for k in 0..rank {
        let v = nct::cocycle::Automorphy::eval(f, &unit(rank, k))?;
        chi_trivial &= v.coeff.unit().is_one() && v.coeff.series().coeff(0).as_constant().is_some_and(|c| c.is_one());
        l_zero &= (1..v.coeff.order()).all(|j| v.coeff.series().coeff(j).is_zero());
    }
    let g = rank as u64 / 2;
    Ok(match (chi_trivial, l_zero) {
        (false, _) => CohomologyVerdict::AllVanish,
        (true, true) => CohomologyVerdict::FreeTrivial { dims: (0..=g).map(|k| nct::picard::binomial(g, k)).collect() },
        (true, false) => CohomologyVerdict::NontrivialDeformation { h0_zero: true, h1_nonzero: true },
    })
}

fn cohomology_suite<'a>(inp: &'a SuiteInput<'a>) -> Vec<(String, Check<'a>)> {
    const S: &str = "cohomology";
    let t = inp.torus;
    let ctx = LatticeContext::new(t.clone());
    inp.cfg
        .bundles
        .iter()
        .map(|b| {
            let ctx = ctx.clone();
            let check: Check<'a> = Box::new(move || {
                if !b.ns.is_zero() {
                    return Ok(vec![Record::skip(S, &b.name, "degree nonzero (H != 0)")]);
                }
                let data = b.qah();
                let verdict = classify_cohomology(&data)?;
                let want = expected_verdict(&qah_factor(&ctx, &data)?, t.rank())?;
                let detail = if verdict == want {
                    format!("{verdict:?}")
                } else {
                    format!("{verdict:?}, factor values give {want:?}")
                };
                Ok(vec![Record::verdict(S, &b.name, verdict == want, detail)])
            });
            (b.name.clone(), check)
        })
        .collect()
}

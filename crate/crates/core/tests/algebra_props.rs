use std::sync::Arc;

use nct::coeff::{exp_decompose, CircleConst, GRat, HbarSeries, PiPoly, Rat, Scalar};
use nct::expalg::{
    star_inverse, substitute, taylor_expand, taylor_star_oracle, AffineMap, ExpSum, ExpTerm, LinForm, Orientation,
    Slot, SlotSpec,
};
use proptest::prelude::*;

fn grat() -> impl Strategy<Value = GRat> {
    (-4i64..=4, 1i64..=3, -4i64..=4, 1i64..=3)
        .prop_map(|(a, b, c, d)| GRat::new(Rat::new(a.into(), b.into()), Rat::new(c.into(), d.into())))
}

fn pipoly() -> impl Strategy<Value = PiPoly> {
    prop::collection::vec((0u32..3, grat()), 0..3).prop_map(|ts| {
        let mut p = PiPoly::zero();
        for (k, c) in ts {
            p.add_term(k, &c);
        }
        p
    })
}

fn series(n: usize) -> impl Strategy<Value = HbarSeries> {
    prop::collection::vec(pipoly(), n).prop_map(move |cs| HbarSeries::from_coeffs(n, cs))
}

/// Series with zero constant term.
fn nilpotent(n: usize) -> impl Strategy<Value = HbarSeries> {
    series(n).prop_map(|s| s.shift(1))
}

fn unit(n: usize) -> impl Strategy<Value = Scalar> {
    (grat().prop_filter("nonzero", |c| !c.is_zero()), nilpotent(n), 0i64..12).prop_map(move |(c, s, q)| {
        let series = HbarSeries::from_grat(n, c).try_add(&s).unwrap();
        Scalar::new(CircleConst::new(Rat::new(q.into(), 6.into())), series)
    })
}

fn qp_space() -> Arc<SlotSpec> {
    let pi = vec![vec![GRat::zero(), GRat::one()], vec![-GRat::one(), GRat::zero()]];
    Arc::new(SlotSpec::new(vec![Slot::poisson("V", &["q", "p"], pi, Orientation::Normal)]).unwrap())
}

/// Two Poisson slots (one opposite) and a commutative one.
fn mixed_space() -> Arc<SlotSpec> {
    let pi = vec![vec![GRat::zero(), GRat::ints(2, -1)], vec![GRat::ints(-2, 1), GRat::zero()]];
    Arc::new(
        SlotSpec::new(vec![
            Slot::poisson("A", &["a1", "a2"], pi.clone(), Orientation::Normal),
            Slot::commutative("C", &["c"]),
            Slot::poisson("B", &["b1", "b2"], pi, Orientation::Opposite),
        ])
        .unwrap(),
    )
}

fn term(dim: usize, n: usize) -> impl Strategy<Value = ExpTerm> {
    (prop::collection::vec(grat(), dim), unit(n), grat())
        .prop_map(move |(a, c, k)| ExpTerm::from_parts(c, a, &k, None).unwrap())
}

fn sum(space: Arc<SlotSpec>, n: usize) -> impl Strategy<Value = ExpSum> {
    let dim = space.dim();
    prop::collection::vec(term(dim, n), 1..3).prop_map(move |ts| ExpSum::from_terms(space.clone(), n, ts).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gaussian_rationals_form_a_field(a in grat(), b in grat(), c in grat()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        if let Some(inv) = a.inv() {
            prop_assert!((&a * &inv).is_one());
        }
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
    }

    #[test]
    fn series_form_a_commutative_ring(a in series(4), b in series(4), c in series(4)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) - &b, a);
    }

    #[test]
    fn exp_is_a_homomorphism(a in nilpotent(5), b in nilpotent(5)) {
        let lhs = (&a + &b).exp().unwrap();
        let rhs = &a.exp().unwrap() * &b.exp().unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(a.exp().unwrap().log().unwrap(), a);
    }

    #[test]
    fn units_invert(u in unit(5)) {
        let inv = u.inverse().unwrap();
        prop_assert!(u.try_mul(&inv).unwrap().is_one());
    }

    #[test]
    fn exp_decompose_recomposes(u in unit(6)) {
        let d = exp_decompose(&u).unwrap();
        prop_assert_eq!(d.recompose(), u);
        prop_assert!(d.log.coeff(0).is_zero());
    }

    #[test]
    fn star_is_associative(f in sum(mixed_space(), 3), g in sum(mixed_space(), 3), h in sum(mixed_space(), 3)) {
        let lhs = f.star(&g).unwrap().star(&h).unwrap();
        let rhs = f.star(&g.star(&h).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn star_has_unit_and_inverses(t in term(5, 3)) {
        let space = mixed_space();
        let f = ExpSum::from_term(space.clone(), t.clone()).unwrap();
        let one = ExpSum::one(space.clone(), 3);
        prop_assert_eq!(one.star(&f).unwrap(), f.clone());
        prop_assert_eq!(f.star(&one).unwrap(), f.clone());
        let inv = ExpSum::from_term(space.clone(), star_inverse(&t).unwrap()).unwrap();
        prop_assert!(f.star(&inv).unwrap().is_one());
        prop_assert!(inv.star(&f).unwrap().is_one());
    }

    #[test]
    fn commutator_is_twice_the_bracket(f in sum(qp_space(), 3), g in sum(qp_space(), 3)) {
        let twice = f.poisson_bracket(&g).unwrap().scale_grat(&GRat::int(2));
        prop_assert_eq!(f.commutator_coefficient(&g).unwrap(), twice.hbar_coefficient(0));
    }

    #[test]
    fn translation_is_an_automorphism(f in sum(mixed_space(), 3), g in sum(mixed_space(), 3), t in prop::collection::vec(grat(), 5)) {
        let lhs = f.star(&g).unwrap().translate_all(&t).unwrap();
        let rhs = f.translate_all(&t).unwrap().star(&g.translate_all(&t).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn symplectic_substitution_respects_star(f in sum(qp_space(), 3), g in sum(qp_space(), 3), a in -3i64..=3, b in -3i64..=3) {
        // (q, p) -> (q + a p, p) and (q, p) -> (q, p + b q) preserve Pi
        let sp = qp_space();
        for m in [
            vec![vec![GRat::one(), GRat::int(a)], vec![GRat::zero(), GRat::one()]],
            vec![vec![GRat::one(), GRat::zero()], vec![GRat::int(b), GRat::one()]],
        ] {
            let map = AffineMap { target: sp.clone(), matrix: m, shift: vec![GRat::frac(1, 2), GRat::int(a)] };
            let lhs = substitute(&f.star(&g).unwrap(), &map).unwrap();
            let rhs = substitute(&f, &map).unwrap().star(&substitute(&g, &map).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn star_agrees_with_taylor_oracle(f in sum(qp_space(), 3), g in sum(qp_space(), 3)) {
        let closed = taylor_expand(&f.star(&g).unwrap(), 3).unwrap();
        prop_assert_eq!(closed, taylor_star_oracle(&f, &g, 3).unwrap());
    }
}

#[test]
fn exponential_law_on_q_and_p() {
    let sp = qp_space();
    let e = |a: i64, b: i64| {
        ExpSum::from_term(
            sp.clone(),
            ExpTerm { coeff: Scalar::one(3), exponent: LinForm::linear(vec![GRat::int(a), GRat::int(b)]) },
        )
        .unwrap()
    };
    let lhs = e(1, 0).star(&e(0, 1)).unwrap();
    let expected = e(1, 1).scale(&Scalar::exp_hbar_pi2(3, &GRat::one())).unwrap();
    assert_eq!(lhs, expected);
    let rev = e(0, 1).star(&e(1, 0)).unwrap();
    assert_eq!(rev, e(1, 1).scale(&Scalar::exp_hbar_pi2(3, &GRat::int(-1))).unwrap());
}

//! Genus-one Fourier-Mukai composite computed by direct symbol manipulation.

mod support;

use nct::coeff::{GRat, Rat};
use nct::cohomfm::{c1_poincare, fm_square_table, fm_transform, ExtClass};
use nct::torus::{gaussian_lattice, zero_bivector, Torus, TorusData};
use support::{exp_c1, integrate, oracle_table, wedge, word, Class};

fn genus_one() -> Torus {
    Torus::new(TorusData { g: 1, lattice: gaussian_lattice(1, &GRat::one()), poisson: zero_bivector(1), order: 2 })
        .unwrap()
}

#[test]
fn square_table_matches_brute_force() {
    let t = genus_one();
    let tab = fm_square_table(&t);
    assert!(tab.passed);
    let ours: Vec<Rat> = tab.signs.into_iter().map(Option::unwrap).collect();
    assert_eq!(ours, oracle_table());
}

#[test]
fn transform_matches_brute_force() {
    let t = genus_one();
    let c1 = c1_poincare(&t);
    assert_eq!(c1.terms.len(), 2);
    for (mask, w) in [(0u64, vec![]), (1, vec![0u8]), (2, vec![1]), (3, vec![0, 1])] {
        let ours = fm_transform(&ExtClass::monomial(1, mask, GRat::one()), &t);
        let theirs = integrate(&wedge(&exp_c1(), &word(&w)), &[0, 1]);
        let converted: Class = ours
            .terms
            .iter()
            .map(|(m, c)| {
                let w: Vec<u8> = (0..4u8).filter(|k| m & (1 << k) != 0).collect();
                (w, c.re.clone())
            })
            .collect();
        assert_eq!(converted, theirs);
    }
}

//! Genus-one exterior algebra on symbol words, for checking the
//! Fourier-Mukai transforms by direct manipulation.

use std::collections::BTreeMap;

use nct::coeff::Rat;

// symbols: 0 = e1, 1 = e2, 2 = f1, 3 = f2
pub type Class = BTreeMap<Vec<u8>, Rat>;

/// Sort a word by adjacent swaps; `None` if a symbol repeats.
fn normalize(mut w: Vec<u8>) -> Option<(Vec<u8>, i64)> {
    let mut sign = 1;
    for i in 0..w.len() {
        for j in 0..w.len() - 1 - i {
            if w[j] > w[j + 1] {
                w.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if w.windows(2).any(|p| p[0] == p[1]) {
        return None;
    }
    Some((w, sign))
}

fn add(c: &mut Class, w: Vec<u8>, x: Rat) {
    let e = c.entry(w.clone()).or_insert_with(|| Rat::from_integer(0.into()));
    *e += x;
    if *e == Rat::from_integer(0.into()) {
        c.remove(&w);
    }
}

pub fn wedge(a: &Class, b: &Class) -> Class {
    let mut r = Class::new();
    for (u, x) in a {
        for (v, y) in b {
            let mut w = u.clone();
            w.extend(v);
            if let Some((w, s)) = normalize(w) {
                add(&mut r, w, x * y * Rat::from_integer(s.into()));
            }
        }
    }
    r
}

pub fn word(w: &[u8]) -> Class {
    let mut c = Class::new();
    c.insert(w.to_vec(), Rat::from_integer(1.into()));
    c
}

pub fn exp_c1() -> Class {
    let c1 = {
        let mut c = word(&[0, 2]);
        add(&mut c, vec![1, 3], Rat::from_integer(1.into()));
        c
    };
    let sq = wedge(&c1, &c1);
    let mut r = word(&[]);
    for (w, x) in c1.into_iter().chain(sq.into_iter().map(|(w, x)| (w, x / Rat::from_integer(2.into())))) {
        add(&mut r, w, x);
    }
    r
}

/// Keep words containing `top`, move `top` to the front, drop it.
pub fn integrate(c: &Class, top: &[u8]) -> Class {
    let mut r = Class::new();
    for (w, x) in c {
        if !top.iter().all(|s| w.contains(s)) {
            continue;
        }
        let rest: Vec<u8> = w.iter().copied().filter(|s| !top.contains(s)).collect();
        let mut front = top.to_vec();
        front.extend(&rest);
        // sign of the permutation taking `front` to the sorted word `w`
        let (_, s) = normalize(front).unwrap();
        add(&mut r, rest, x * Rat::from_integer(s.into()));
    }
    r
}

/// Per-degree factor of the composite relative to `(-1)^d`.
pub fn oracle_table() -> Vec<Rat> {
    let classes: [&[u8]; 4] = [&[], &[0], &[1], &[0, 1]];
    let mut per_degree: BTreeMap<usize, Vec<Rat>> = BTreeMap::new();
    for a in classes {
        let s = integrate(&wedge(&exp_c1(), &word(a)), &[0, 1]);
        let back = integrate(&wedge(&exp_c1(), &s), &[2, 3]);
        assert_eq!(back.len(), 1);
        let (w, x) = back.into_iter().next().unwrap();
        assert_eq!(w, a.to_vec());
        let parity = Rat::from_integer(if a.len() % 2 == 0 { 1 } else { -1 }.into());
        per_degree.entry(a.len()).or_default().push(x * parity);
    }
    per_degree
        .into_values()
        .map(|v| {
            assert!(v.windows(2).all(|p| p[0] == p[1]));
            v[0].clone()
        })
        .collect()
}

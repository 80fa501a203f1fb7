//! Factors of automorphy and the windows on which their identities are checked.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::expalg::{ExpTerm, SlotSpec};

/// A group acting on the cover by translations together with a map to
/// invertible functions.
pub trait Automorphy {
    type Element: Clone;

    fn space(&self) -> &Arc<SlotSpec>;
    fn order(&self) -> usize;
    fn eval(&self, g: &Self::Element) -> Result<ExpTerm>;
    /// Group law `a * b`.
    fn compose(&self, a: &Self::Element, b: &Self::Element) -> Self::Element;
    /// `f . g`: pull `f` back along the translation by `g`.
    fn act(&self, f: &ExpTerm, g: &Self::Element) -> Result<ExpTerm>;
}

/// `e(ab)^{-1} * e(b) * (e(a) . b)`; equal to 1 iff the left cocycle
/// condition `e(ab) = e(b) * (e(a) . b)` holds at `(a, b)`.
pub fn cocycle_defect<A: Automorphy>(f: &A, a: &A::Element, b: &A::Element) -> Result<ExpTerm> {
    let spec = f.space();
    let lhs = f.eval(&f.compose(a, b))?;
    let rhs = f.eval(b)?.star(&f.act(&f.eval(a)?, b)?, spec)?;
    lhs.star_inverse()?.star(&rhs, spec)
}

/// The same defect with every product taken pointwise.
pub fn commutative_defect<A: Automorphy>(f: &A, a: &A::Element, b: &A::Element) -> Result<ExpTerm> {
    let lhs = f.eval(&f.compose(a, b))?;
    let rhs = f.eval(b)?.mul(&f.act(&f.eval(a)?, b)?)?;
    lhs.star_inverse()?.mul(&rhs)
}

/// All integer vectors of length `dim` with entries in `[-r, r]`.
pub fn cube(dim: usize, r: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|v| {
                (-r..=r).map(move |k| {
                    let mut w = v.clone();
                    w.push(k);
                    w
                })
            })
            .collect();
    }
    out
}

/// Vectors of the cube with at most `k` nonzero entries.
pub fn sparse_cube(dim: usize, r: i64, k: usize) -> Vec<Vec<i64>> {
    fn rec(dim: usize, r: i64, k: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == dim {
            out.push(cur.clone());
            return;
        }
        let used = cur.iter().filter(|&&x| x != 0).count();
        for v in -r..=r {
            if v != 0 && used == k {
                continue;
            }
            cur.push(v);
            rec(dim, r, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(dim, r, k, &mut Vec::new(), &mut out);
    out
}

/// How a window check enumerates its tuples.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coverage {
    /// Every tuple of the window.
    Full,
    /// Tuples whose concatenated integer coordinates have at most two
    /// nonzero entries (this pins every coefficient of an exponent that is
    /// at most quadratic in the coordinates), plus `sampled` further tuples
    /// drawn from the full window with a fixed seed.
    Spanning { sampled: usize },
}

impl Coverage {
    pub fn label(&self) -> String {
        match self {
            Coverage::Full => "full".into(),
            Coverage::Spanning { sampled } => format!("spanning+{sampled}"),
        }
    }
}

/// Window of integer tuples: blocks of `dims[i]` coordinates in `[-r, r]`.
/// Returns the concatenated coordinate vectors under the given coverage.
pub fn window_tuples(dims: &[usize], r: i64, coverage: Coverage, seed: u64) -> Vec<Vec<i64>> {
    let total: usize = dims.iter().sum();
    match coverage {
        Coverage::Full => cube(total, r),
        Coverage::Spanning { sampled } => {
            let mut out = sparse_cube(total, r, 2);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let choices: Vec<i64> = (-r..=r).collect();
            for _ in 0..sampled {
                out.push((0..total).map(|_| *choices.choose(&mut rng).expect("nonempty")).collect());
            }
            out
        }
    }
}

/// Number of tuples in the full window.
pub fn full_size(dims: &[usize], r: i64) -> u128 {
    let total: u32 = dims.iter().sum::<usize>() as u32;
    ((2 * r + 1) as u128).pow(total)
}

/// Full coverage when the window has at most `budget` tuples, otherwise the
/// spanning set plus `budget / 4` samples.
pub fn auto_coverage(dims: &[usize], r: i64, budget: u128) -> Coverage {
    if full_size(dims, r) <= budget {
        Coverage::Full
    } else {
        Coverage::Spanning { sampled: (budget / 4) as usize }
    }
}

/// Split a concatenated coordinate vector into blocks.
pub fn split_blocks<'a>(v: &'a [i64], dims: &[usize]) -> Vec<&'a [i64]> {
    let mut out = Vec::with_capacity(dims.len());
    let mut k = 0;
    for &d in dims {
        out.push(&v[k..k + d]);
        k += d;
    }
    out
}

/// Outcome of one window identity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub checked: usize,
    pub coverage: String,
    /// First failing tuple with both sides rendered.
    pub failure: Option<String>,
}

impl CheckResult {
    pub fn new(name: impl Into<String>, coverage: &Coverage) -> Self {
        CheckResult { name: name.into(), passed: true, checked: 0, coverage: coverage.label(), failure: None }
    }

    /// Records one comparison; keeps only the first failure.
    pub fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.passed {
            self.passed = false;
            self.failure = Some(detail());
        }
    }
}

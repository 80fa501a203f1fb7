use std::ops::Range;

use crate::coeff::GRat;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Normal,
    /// The slot carries the opposite algebra: `f * g` there means `g * f`.
    Opposite,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SlotKind {
    Commutative,
    Poisson { matrix: Vec<Vec<GRat>>, orientation: Orientation },
}

/// A named group of variables with its constant Poisson structure.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Slot {
    pub name: String,
    pub vars: Vec<String>,
    pub kind: SlotKind,
}

impl Slot {
    pub fn commutative(name: &str, vars: &[&str]) -> Self {
        Slot { name: name.into(), vars: vars.iter().map(|s| s.to_string()).collect(), kind: SlotKind::Commutative }
    }

    pub fn poisson(name: &str, vars: &[&str], matrix: Vec<Vec<GRat>>, orientation: Orientation) -> Self {
        Slot {
            name: name.into(),
            vars: vars.iter().map(|s| s.to_string()).collect(),
            kind: SlotKind::Poisson { matrix, orientation },
        }
    }

    /// Slot named `name` with variables `{prefix}1..{prefix}{dim}`.
    pub fn numbered(name: &str, prefix: &str, dim: usize, kind: SlotKind) -> Self {
        Slot { name: name.into(), vars: (1..=dim).map(|k| format!("{prefix}{k}")).collect(), kind }
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }
}

/// Ordered list of slots; the variables of all slots form one coordinate vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SlotSpec {
    slots: Vec<Slot>,
}

impl SlotSpec {
    pub fn new(slots: Vec<Slot>) -> Result<Self> {
        let mut names = std::collections::BTreeSet::new();
        for s in &slots {
            if s.vars.is_empty() {
                return Err(Error::Invalid(format!("slot `{}` has no variables", s.name)));
            }
            for v in &s.vars {
                if !names.insert(v.clone()) {
                    return Err(Error::Invalid(format!("duplicate variable `{v}`")));
                }
            }
            if let SlotKind::Poisson { matrix, .. } = &s.kind {
                let d = s.dim();
                if matrix.len() != d || matrix.iter().any(|r| r.len() != d) {
                    return Err(Error::DimensionMismatch { expected: d, got: matrix.len() });
                }
                for i in 0..d {
                    for j in 0..d {
                        if matrix[i][j] != -&matrix[j][i] {
                            return Err(Error::Invalid(format!("Poisson matrix of `{}` is not antisymmetric", s.name)));
                        }
                    }
                }
            }
        }
        Ok(SlotSpec { slots })
    }

    /// The layout with no variables; its functions are constants.
    pub fn empty() -> Self {
        SlotSpec::default()
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn dim(&self) -> usize {
        self.slots.iter().map(Slot::dim).sum()
    }

    pub fn slot_range(&self, k: usize) -> Range<usize> {
        let start: usize = self.slots[..k].iter().map(Slot::dim).sum();
        start..start + self.slots[k].dim()
    }

    pub fn slot_index(&self, name: &str) -> Option<usize> {
        self.slots.iter().position(|s| s.name == name)
    }

    pub fn var_names(&self) -> Vec<&str> {
        self.slots.iter().flat_map(|s| s.vars.iter().map(String::as_str)).collect()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.var_names().iter().position(|v| *v == name)
    }

    /// The effective bivector on the full coordinate vector: block diagonal,
    /// with opposite slots entering transposed.
    pub fn effective_bivector(&self) -> Vec<Vec<GRat>> {
        let d = self.dim();
        let mut m = vec![vec![GRat::zero(); d]; d];
        for (k, s) in self.slots.iter().enumerate() {
            if let SlotKind::Poisson { matrix, orientation } = &s.kind {
                let r = self.slot_range(k);
                for i in 0..s.dim() {
                    for j in 0..s.dim() {
                        m[r.start + i][r.start + j] = match orientation {
                            Orientation::Normal => matrix[i][j].clone(),
                            Orientation::Opposite => matrix[j][i].clone(),
                        };
                    }
                }
            }
        }
        m
    }

    /// `{pi a.x, pi b.x} / pi^2 = sum Pi^{ij} a_i b_j`, slot by slot; opposite
    /// slots pair the arguments in reversed order, commutative slots give 0.
    pub fn pairing(&self, a: &[GRat], b: &[GRat]) -> GRat {
        let mut acc = GRat::zero();
        for (k, s) in self.slots.iter().enumerate() {
            let SlotKind::Poisson { matrix, orientation } = &s.kind else { continue };
            let r = self.slot_range(k);
            let (x, y) = match orientation {
                Orientation::Normal => (&a[r.clone()], &b[r]),
                Orientation::Opposite => (&b[r.clone()], &a[r]),
            };
            for (i, xi) in x.iter().enumerate() {
                if xi.is_zero() {
                    continue;
                }
                for (j, yj) in y.iter().enumerate() {
                    let p = &matrix[i][j];
                    if !p.is_zero() && !yj.is_zero() {
                        acc += &(&(xi * p) * yj);
                    }
                }
            }
        }
        acc
    }

    /// Same slots with every Poisson matrix multiplied by `c`.
    pub fn scaled(&self, c: &GRat) -> SlotSpec {
        let slots = self
            .slots
            .iter()
            .map(|s| match &s.kind {
                SlotKind::Commutative => s.clone(),
                SlotKind::Poisson { matrix, orientation } => Slot {
                    name: s.name.clone(),
                    vars: s.vars.clone(),
                    kind: SlotKind::Poisson {
                        matrix: matrix.iter().map(|r| r.iter().map(|x| x * c).collect()).collect(),
                        orientation: *orientation,
                    },
                },
            })
            .collect();
        SlotSpec { slots }
    }

    /// Same slots with every orientation flipped.
    pub fn opposite(&self) -> SlotSpec {
        let slots = self
            .slots
            .iter()
            .map(|s| match &s.kind {
                SlotKind::Commutative => s.clone(),
                SlotKind::Poisson { matrix, orientation } => Slot {
                    name: s.name.clone(),
                    vars: s.vars.clone(),
                    kind: SlotKind::Poisson {
                        matrix: matrix.clone(),
                        orientation: match orientation {
                            Orientation::Normal => Orientation::Opposite,
                            Orientation::Opposite => Orientation::Normal,
                        },
                    },
                },
            })
            .collect();
        SlotSpec { slots }
    }
}

/// The standard symplectic 2x2 block `[[0, 1], [-1, 0]]`.
pub fn darboux() -> Vec<Vec<GRat>> {
    vec![vec![GRat::zero(), GRat::one()], vec![GRat::int(-1), GRat::zero()]]
}

//! Changing the order of one lifted generator by a factor `p`.
//!
//! Given `σ₁` of order `p^{n−1}` and a normal `H` with `G/H = ⟨σ₁H⟩`
//! cyclic of order `p^{n−1}`, the carry cocycle of `Z/p^{n−1}` inflated to
//! `G` is added to (or removed from) the class. It vanishes on `H × H` and
//! is symmetric, so every relation not involving a power of `σ₁` survives.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{extension_of_cocycle, Cocycle2, CohomologyError, ExtensionClass, Result};
use crate::group::{Group, Subgroup};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Raise,
    Lower,
}

/// `σ₁` together with the normal subgroup `H` it generates a complement to.
#[derive(Debug, Clone)]
pub struct QuotientData {
    sigma1: usize,
    subgroup: Subgroup,
    /// `coset[x] = i` when `xH = σ₁ⁱH`
    coset: Vec<usize>,
}

impl QuotientData {
    pub fn new(g: &Group, sigma1: usize, subgroup: Subgroup) -> Result<QuotientData> {
        if sigma1 >= g.order() {
            return Err(CohomologyError::Shape(format!("element {sigma1} out of range")));
        }
        if subgroup.elements().iter().any(|&x| x >= g.order()) {
            return Err(CohomologyError::GroupMismatch);
        }
        if !subgroup.is_normal(g) {
            return Err(CohomologyError::QuotientConditionFails(
                "H is not normal".into(),
            ));
        }
        let m = g.element_order(sigma1);
        if subgroup.index_in_parent() != m {
            return Err(CohomologyError::QuotientConditionFails(format!(
                "[G:H] = {} but σ₁ has order {m}",
                subgroup.index_in_parent()
            )));
        }
        let mut coset = vec![usize::MAX; g.order()];
        let mut s = g.identity();
        for i in 0..m {
            if i > 0 && subgroup.contains(s) {
                return Err(CohomologyError::QuotientConditionFails(format!(
                    "σ₁^{i} lies in H"
                )));
            }
            for &h in subgroup.elements() {
                coset[g.mul(s, h)] = i;
            }
            s = g.mul(s, sigma1);
        }
        Ok(QuotientData {
            sigma1,
            subgroup,
            coset,
        })
    }

    /// `H` generated by every named generator except `name`.
    pub fn from_generators(g: &Group, name: &str) -> Result<QuotientData> {
        let sigma1 = g
            .generator(name)
            .ok_or_else(|| CohomologyError::Shape(format!("no generator named {name}")))?;
        let others: Vec<usize> = g
            .generators()
            .iter()
            .filter(|ng| ng.name != name)
            .map(|ng| ng.index)
            .collect();
        QuotientData::new(g, sigma1, g.subgroup_generated(&others))
    }

    pub fn sigma1(&self) -> usize {
        self.sigma1
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    /// `p^{n−1}`
    pub fn cyclic_order(&self) -> usize {
        self.subgroup.index_in_parent()
    }
}

/// `c(x, y) = 1` when the exponents of `xH` and `yH` overflow `p^{n−1}`.
pub fn carry_cocycle(g: &Arc<Group>, q: &QuotientData, p: u64) -> Cocycle2 {
    let m = q.cyclic_order();
    Cocycle2::from_fn(g.clone(), p, |x, y| {
        u64::from(q.coset[x] + q.coset[y] >= m)
    })
}

/// `e` with `s(σ₁)^{p^{n−1}} = ζ^e`.
fn top_power(f: &Cocycle2, sigma1: usize, m: usize) -> u64 {
    let g = f.group();
    let mut x = g.identity();
    let mut e = 0;
    for _ in 0..m {
        e = (e + f.value(x, sigma1)) % f.p();
        x = g.mul(x, sigma1);
    }
    e
}

fn antisymmetric_part(f: &Cocycle2) -> Vec<u64> {
    let n = f.group().order();
    let p = f.p();
    let mut out = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            out.push((f.value(x, y) + p - f.value(y, x)) % p);
        }
    }
    out
}

/// Builds `G₂ = G₁^{(pⁿ, σ₁)}` from `G₁` (raise) or recovers `G₁` from `G₂`
/// (lower).
pub fn raise_lower(
    e: &ExtensionClass,
    q: &QuotientData,
    n: u32,
    direction: Direction,
) -> Result<ExtensionClass> {
    let f = e.cocycle();
    let g = f.group();
    let p = f.p();
    if q.coset.len() != g.order() {
        return Err(CohomologyError::GroupMismatch);
    }
    let m = q.cyclic_order();
    let want = (p as usize)
        .checked_pow(n.saturating_sub(1))
        .filter(|_| n > 1)
        .ok_or_else(|| CohomologyError::QuotientConditionFails(format!("n = {n}")))?;
    if m != want {
        return Err(CohomologyError::QuotientConditionFails(format!(
            "σ₁ has order {m}, expected {want}"
        )));
    }
    let c = carry_cocycle(g, q, p);
    let top = top_power(f, q.sigma1, m);
    let out = match direction {
        Direction::Raise => {
            if top != 0 {
                return Err(CohomologyError::PreimageOrderMismatch {
                    expected: m,
                    found: m * p as usize,
                });
            }
            f.add(&c)?
        }
        Direction::Lower => {
            if top == 0 {
                return Err(CohomologyError::PreimageOrderMismatch {
                    expected: m * p as usize,
                    found: m,
                });
            }
            f.sub(&c.scale(top))?
        }
    };
    debug_assert_eq!(top_power(&out, q.sigma1, m) == 0, direction == Direction::Lower);
    let before = super::restrict(f, &q.subgroup)?;
    let after = super::restrict(&out, &q.subgroup)?;
    if before.rows() != after.rows() || antisymmetric_part(f) != antisymmetric_part(&out) {
        return Err(CohomologyError::QuotientConditionFails(
            "relations outside σ₁ changed".into(),
        ));
    }
    extension_of_cocycle(&out)
}

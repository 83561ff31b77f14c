//! Corestriction from an index-2 subgroup with `μ_2` coefficients.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{
    extension_of_cocycle, h2_enumerate, Cocycle2, CohomologyError, Result,
};
use crate::group::{subgroups_of_index2, Group, Subgroup};

/// Largest group order accepted by [`cor_image_search`].
pub const COR_SEARCH_LIMIT: usize = 16;

fn check_setup(g: &Group, h: &Subgroup, elt: usize) -> Result<()> {
    if h.elements().iter().any(|&x| x >= g.order()) || h.index_in_parent() != 2 {
        return Err(CohomologyError::BadIndex);
    }
    if h.order() * 2 != g.order() {
        return Err(CohomologyError::BadIndex);
    }
    if elt >= g.order() {
        return Err(CohomologyError::Shape(format!("element {elt} out of range")));
    }
    if h.contains(elt) {
        return Err(CohomologyError::GInH);
    }
    Ok(())
}

/// Tate's formula for `cor_{G/H}` on cocycles.
///
/// `fbar` lives on `H` in the element order of [`Subgroup::as_group`]. With
/// `s^g = g s g⁻¹`, the value `f(s1, s2)` is
///
/// | `(s1, s2)` | `f(s1, s2)` |
/// |---|---|
/// | `H × H` | `f̄(s1, s2) + f̄(s1^g, s2^g)` |
/// | `Hg × H` | `f̄(s1 g⁻¹, s2^g) + f̄(g s1, s2)` |
/// | `H × Hg` | `f̄(s1, s2 g⁻¹) + f̄(s1^g, g s2)` |
/// | `Hg × Hg` | `f̄(s1 g⁻¹, g s2) + f̄(g s1, s2 g⁻¹)` |
pub fn corestrict_tate(
    fbar: &Cocycle2,
    g: &Arc<Group>,
    h: &Subgroup,
    elt: usize,
) -> Result<Cocycle2> {
    if fbar.p() != 2 {
        return Err(CohomologyError::PrimeMismatch {
            expected: 2,
            found: fbar.p(),
        });
    }
    check_setup(g, h, elt)?;
    let hg = fbar.group();
    if hg.order() != h.order() {
        return Err(CohomologyError::GroupMismatch);
    }
    let pos = |x: usize| h.position(x).expect("argument lies in H");
    for &a in h.elements() {
        for &b in h.elements() {
            if pos(g.mul(a, b)) != hg.mul(pos(a), pos(b)) {
                return Err(CohomologyError::GroupMismatch);
            }
        }
    }
    let gi = g.inv(elt);
    let fb = |a: usize, b: usize| fbar.value(pos(a), pos(b));
    let conj = |s: usize| g.conjugate(elt, s);
    Ok(Cocycle2::from_fn(g.clone(), 2, |s1, s2| {
        match (h.contains(s1), h.contains(s2)) {
            (true, true) => fb(s1, s2) + fb(conj(s1), conj(s2)),
            (false, true) => fb(g.mul(s1, gi), conj(s2)) + fb(g.mul(elt, s1), s2),
            (true, false) => fb(s1, g.mul(s2, gi)) + fb(conj(s1), g.mul(elt, s2)),
            (false, false) => fb(g.mul(s1, gi), g.mul(elt, s2)) + fb(g.mul(elt, s1), g.mul(s2, gi)),
        }
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftOrder {
    /// `f(z^{k/2}, z^{k/2})`
    pub value: u64,
    /// order of any preimage of `z`
    pub lifted_order: usize,
}

/// Reads the order of a preimage of `z` off the cocycle.
pub fn lift_order_diag(f: &Cocycle2, z: usize) -> Result<LiftOrder> {
    if f.p() != 2 {
        return Err(CohomologyError::PrimeMismatch {
            expected: 2,
            found: f.p(),
        });
    }
    let g = f.group();
    if z >= g.order() {
        return Err(CohomologyError::Shape(format!("element {z} out of range")));
    }
    if z == 0 {
        return Err(CohomologyError::IdentityElement);
    }
    let k = g.element_order(z);
    if !k.is_multiple_of(2) {
        return Err(CohomologyError::OddOrder(k));
    }
    let half = g.pow(z, (k / 2) as i64);
    let value = f.value(half, half);
    Ok(LiftOrder {
        value,
        lifted_order: if value == 0 { k } else { 2 * k },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prop54Report {
    pub exp_h: usize,
    pub exp_h1: usize,
    pub exp_h2: usize,
    pub ineq_holds: bool,
    /// `H` is nontrivial and every `h` of maximal order satisfies
    /// `g h g⁻¹ ∈ ⟨h⟩`
    pub part2_applicable: bool,
    /// `exp(H₁) = exp(H)`; vacuously true when not applicable
    pub part2_holds: bool,
}

/// Compares the exponents of `H₁ = α⁻¹(H)` in the corestricted extension
/// and of the extension `H₂` of `H` given by `fbar`.
///
/// `G` must be a 2-group. For trivial `H` the second comparison is reported
/// as not applicable: `H₁ = μ_2` always has exponent 2 there.
pub fn prop54_report(
    g: &Arc<Group>,
    h: &Subgroup,
    elt: usize,
    fbar: &Cocycle2,
) -> Result<Prop54Report> {
    if !g.order().is_power_of_two() {
        return Err(CohomologyError::NotTwoGroup(g.order()));
    }
    let f = corestrict_tate(fbar, g, h, elt)?;
    let g1 = extension_of_cocycle(&f)?;
    let h1 = g1.projection().preimage(h);
    let (h1_group, _) = h1.as_group(g1.group());
    let h2 = extension_of_cocycle(fbar)?;
    let (hg, elems) = h.as_group(g);
    let exp_h = hg.exponent();
    let exp_h1 = h1_group.exponent();
    let exp_h2 = h2.group().exponent();
    let part2_applicable = exp_h > 1 && elems.iter().all(|&x| {
        g.element_order(x) != exp_h || g.closure(&[x]).contains(&g.conjugate(elt, x))
    });
    Ok(Prop54Report {
        exp_h,
        exp_h1,
        exp_h2,
        ineq_holds: exp_h1 <= exp_h2,
        part2_applicable,
        part2_holds: !part2_applicable || exp_h1 == exp_h,
    })
}

/// A corestriction preimage: `cor_{G/H}(fbar) ~ target`.
#[derive(Debug, Clone)]
pub struct CorWitness {
    pub subgroup: Subgroup,
    pub element: usize,
    pub fbar: Cocycle2,
}

/// Searches every index-2 subgroup and every class of `H²(H, μ_2)` for a
/// corestriction hitting the class of `target`.
pub fn cor_image_search(g: &Arc<Group>, target: &Cocycle2) -> Result<Option<CorWitness>> {
    if g.order() > COR_SEARCH_LIMIT {
        return Err(CohomologyError::TooLarge(format!(
            "corestriction search is limited to order {COR_SEARCH_LIMIT}"
        )));
    }
    if target.p() != 2 {
        return Err(CohomologyError::PrimeMismatch {
            expected: 2,
            found: target.p(),
        });
    }
    if target.group().as_ref() != g.as_ref() {
        return Err(CohomologyError::GroupMismatch);
    }
    for h in subgroups_of_index2(g) {
        let elt = (0..g.order()).find(|&x| !h.contains(x)).expect("proper subgroup");
        let (hg, _) = h.as_group(g);
        let classes = h2_enumerate(&Arc::new(hg), 2)?;
        if classes.basis_only {
            return Err(CohomologyError::TooLarge("too many classes on H".into()));
        }
        for fbar in classes.representatives {
            let f = corestrict_tate(&fbar, g, &h, elt)?;
            if f.cohomologous(target)? {
                return Ok(Some(CorWitness {
                    subgroup: h,
                    element: elt,
                    fbar,
                }));
            }
        }
    }
    Ok(None)
}

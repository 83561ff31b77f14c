//! Quotients, pullbacks and structural invariants.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Group, GroupError, GroupHom, NamedGenerator, Result, Subgroup};

/// A generating set. For `p`-groups it is minimal (one element per
/// Frattini-quotient dimension); otherwise it is a greedy choice.
pub(crate) fn generating_set(g: &Group) -> Vec<usize> {
    let n = g.order();
    if n == 1 {
        return Vec::new();
    }
    if g.prime().is_some() {
        let phi = frattini(g);
        let mut chosen: Vec<usize> = Vec::new();
        let mut span = phi.elements().to_vec();
        let mut member = vec![false; n];
        for &x in &span {
            member[x] = true;
        }
        for x in 1..n {
            if member[x] {
                continue;
            }
            chosen.push(x);
            span.push(x);
            for y in g.closure(&span) {
                member[y] = true;
            }
            if member.iter().all(|&m| m) {
                break;
            }
        }
        chosen
    } else {
        greedy_generators(g)
    }
}

/// Adds elements of large order first, skipping those already generated.
fn greedy_generators(g: &Group) -> Vec<usize> {
    let n = g.order();
    let mut by_order: Vec<usize> = (1..n).collect();
    by_order.sort_by_key(|&x| (std::cmp::Reverse(g.element_order(x)), x));
    let mut chosen = Vec::new();
    let mut member = vec![false; n];
    member[0] = true;
    for x in by_order {
        if member[x] {
            continue;
        }
        chosen.push(x);
        for y in g.closure(&chosen) {
            member[y] = true;
        }
        if member.iter().all(|&m| m) {
            break;
        }
    }
    chosen
}

fn derived_subgroup(g: &Group, gens: &[usize]) -> Subgroup {
    let mut comms = BTreeSet::new();
    for &a in gens {
        for &b in gens {
            comms.insert(g.commutator(a, b));
        }
    }
    let comms: Vec<usize> = comms.into_iter().collect();
    g.normal_closure(&comms)
}

/// `[G,G]·G^p` for a `p`-group; the trivial subgroup otherwise.
fn frattini(g: &Group) -> Subgroup {
    let Some(p) = g.prime() else {
        return Subgroup::trivial(g);
    };
    frattini_for(g, p)
}

fn frattini_for(g: &Group, p: u64) -> Subgroup {
    let gens = greedy_generators(g);
    let mut elems: BTreeSet<usize> = derived_subgroup(g, &gens).elements().iter().copied().collect();
    for x in 0..g.order() {
        elems.insert(g.pow(x, p as i64));
    }
    let elems: Vec<usize> = elems.into_iter().collect();
    // generated by a normal set of p-th powers and a normal subgroup, hence normal
    g.subgroup_generated(&elems)
}

fn arc_hom(source: &Arc<Group>, target: Group, images: Vec<usize>) -> (Arc<Group>, GroupHom) {
    let target = Arc::new(target);
    let hom = GroupHom::new_unchecked(source.clone(), target.clone(), images);
    (target, hom)
}

/// `G/N` on cosets ordered by their least element, with the projection.
pub fn quotient(g: &Arc<Group>, n: &Subgroup) -> Result<(Arc<Group>, GroupHom)> {
    if n.parent_order != g.order() {
        return Err(GroupError::InvalidTable("subgroup belongs to another group".into()));
    }
    if !n.is_normal(g) {
        return Err(GroupError::NotNormal);
    }
    let order = g.order();
    let mut coset = vec![usize::MAX; order];
    let mut reps = Vec::new();
    for x in 0..order {
        if coset[x] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(x);
        for &h in n.elements() {
            coset[g.mul(x, h)] = c;
        }
    }
    let q = reps.len();
    let mut table = Vec::with_capacity(q * q);
    for &a in &reps {
        for &b in &reps {
            table.push(coset[g.mul(a, b)] as u16);
        }
    }
    let mut seen = HashSet::new();
    let gens = g
        .generators()
        .iter()
        .filter(|ng| coset[ng.index] != 0 && seen.insert(coset[ng.index]))
        .map(|ng| NamedGenerator {
            name: ng.name.clone(),
            index: coset[ng.index],
        })
        .collect();
    let qg = Group::from_raw(q, table, gens)?;
    Ok(arc_hom(g, qg, coset))
}

/// The fibre product of two surjections onto a common group, with its projections.
#[derive(Debug, Clone)]
pub struct Pullback {
    pub group: Arc<Group>,
    pub proj1: GroupHom,
    pub proj2: GroupHom,
}

/// Pairs `(x, y)` with `f1(x) = f2(y)`, ordered lexicographically.
pub fn pullback(f1: &GroupHom, f2: &GroupHom) -> Result<Pullback> {
    if f1.target().as_ref() != f2.target().as_ref() {
        return Err(GroupError::TargetMismatch);
    }
    if !f1.is_surjective() || !f2.is_surjective() {
        return Err(GroupError::NotAHomomorphism("pullback maps must be surjective".into()));
    }
    let (g1, g2) = (f1.source(), f2.source());
    let mut pairs = Vec::new();
    for x in 0..g1.order() {
        for y in 0..g2.order() {
            if f1.apply(x) == f2.apply(y) {
                pairs.push((x, y));
            }
        }
    }
    let n = pairs.len();
    if n > super::MAX_ORDER {
        return Err(GroupError::OrderTooLarge(n));
    }
    let index: BTreeMap<(usize, usize), usize> =
        pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut table = Vec::with_capacity(n * n);
    for &(a1, a2) in &pairs {
        for &(b1, b2) in &pairs {
            table.push(index[&(g1.mul(a1, b1), g2.mul(a2, b2))] as u16);
        }
    }
    let raw = Group::from_raw(n, table, Vec::new())?;
    let gens = named(&raw, "g");
    let group = Arc::new(raw.with_generators(gens));
    let proj1 = GroupHom::new_unchecked(group.clone(), g1.clone(), pairs.iter().map(|p| p.0).collect());
    let proj2 = GroupHom::new_unchecked(group.clone(), g2.clone(), pairs.iter().map(|p| p.1).collect());
    Ok(Pullback { group, proj1, proj2 })
}

fn named(g: &Group, prefix: &str) -> Vec<NamedGenerator> {
    generating_set(g)
        .into_iter()
        .enumerate()
        .map(|(i, index)| NamedGenerator {
            name: format!("{prefix}{}", i + 1),
            index,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureInvariants {
    pub center: Subgroup,
    pub exponent: usize,
    /// element order ↦ number of elements of that order
    pub element_orders: BTreeMap<usize, usize>,
    pub min_generators: usize,
}

pub fn center(g: &Group) -> Subgroup {
    let n = g.order();
    Subgroup {
        parent_order: n,
        elements: (0..n)
            .filter(|&z| (0..n).all(|x| g.mul(z, x) == g.mul(x, z)))
            .collect(),
    }
}

/// Minimum size of a generating set.
///
/// For `p`-groups this is the rank of `G/[G,G]G^p`. For other groups the
/// search is exhaustive over subsets, bounded by the greedy size.
pub fn min_generators(g: &Group) -> usize {
    if g.order() == 1 {
        return 0;
    }
    if let Some(p) = g.prime() {
        let idx = g.order() / frattini_for(g, p).order();
        return log_base(idx, p as usize);
    }
    let upper = greedy_generators(g).len();
    for k in 1..upper {
        if generated_by_some(g, k, 1, &mut Vec::new()) {
            return k;
        }
    }
    upper
}

fn log_base(mut x: usize, p: usize) -> usize {
    let mut k = 0;
    while x > 1 {
        x /= p;
        k += 1;
    }
    k
}

fn generated_by_some(g: &Group, k: usize, start: usize, acc: &mut Vec<usize>) -> bool {
    if acc.len() == k {
        return g.closure(acc).len() == g.order();
    }
    for x in start..g.order() {
        acc.push(x);
        if generated_by_some(g, k, x + 1, acc) {
            return true;
        }
        acc.pop();
    }
    false
}

pub fn structure_invariants(g: &Group) -> StructureInvariants {
    let mut element_orders = BTreeMap::new();
    for x in 0..g.order() {
        *element_orders.entry(g.element_order(x)).or_insert(0) += 1;
    }
    StructureInvariants {
        center: center(g),
        exponent: g.exponent(),
        element_orders,
        min_generators: min_generators(g),
    }
}

/// Coordinates of the elements of an elementary abelian `p`-group over a basis.
fn coordinates(q: &Group, p: u64) -> (Vec<usize>, Vec<Vec<u64>>) {
    let basis = generating_set(q);
    let (order, parent) = q.spanning_tree(&basis);
    let mut coords = vec![vec![0u64; basis.len()]; q.order()];
    for &y in order.iter().skip(1) {
        let (yp, k) = parent[y];
        let mut c = coords[yp].clone();
        c[k] = (c[k] + 1) % p;
        coords[y] = c;
    }
    (basis, coords)
}

/// All subgroups of index 2, as kernels of the surjections onto `C2`.
pub fn subgroups_of_index2(g: &Group) -> Vec<Subgroup> {
    if !g.order().is_multiple_of(2) {
        return Vec::new();
    }
    let squares: BTreeSet<usize> = (0..g.order()).map(|x| g.mul(x, x)).collect();
    let squares: Vec<usize> = squares.into_iter().collect();
    let k = g.subgroup_generated(&squares);
    let ga = Arc::new(g.clone());
    let (q, proj) = quotient(&ga, &k).expect("subgroup generated by squares is normal");
    let (basis, coords) = coordinates(&q, 2);
    let r = basis.len();
    let mut out = Vec::new();
    for v in 1u64..(1u64 << r) {
        let elements = (0..g.order())
            .filter(|&x| {
                let c = &coords[proj.apply(x)];
                (0..r).map(|i| c[i] * ((v >> i) & 1)).sum::<u64>() % 2 == 0
            })
            .collect();
        out.push(Subgroup {
            parent_order: g.order(),
            elements,
        });
    }
    out.sort_by(|a, b| a.elements.cmp(&b.elements));
    out
}

/// `G/[G,G]G^p` with its projection.
pub fn max_elem_abelian_quotient(g: &Arc<Group>, p: u64) -> Result<(Arc<Group>, GroupHom)> {
    if g.order() > 1 && g.prime() != Some(p) {
        return Err(GroupError::NotPGroup(p));
    }
    let phi = if g.order() == 1 {
        Subgroup::trivial(g)
    } else {
        frattini_for(g, p)
    };
    quotient(g, &phi)
}

/// Every normal subgroup, sorted by order then elements.
pub fn normal_subgroups(g: &Group) -> Vec<Subgroup> {
    let n = g.order();
    let mut minimal: BTreeSet<Vec<usize>> = BTreeSet::new();
    for x in 0..n {
        minimal.insert(g.normal_closure(&[x]).elements);
    }
    let minimal: Vec<Vec<usize>> = minimal.into_iter().collect();
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    found.insert(vec![0]);
    let mut frontier = vec![vec![0usize]];
    while let Some(cur) = frontier.pop() {
        for m in &minimal {
            if m.iter().all(|x| cur.binary_search(x).is_ok()) {
                continue;
            }
            let mut gens = cur.clone();
            gens.extend(m.iter().copied());
            let joined = g.closure(&gens);
            if found.insert(joined.clone()) {
                frontier.push(joined);
            }
        }
    }
    let mut out: Vec<Subgroup> = found
        .into_iter()
        .map(|elements| Subgroup {
            parent_order: n,
            elements,
        })
        .collect();
    out.sort_by(|a, b| (a.order(), &a.elements).cmp(&(b.order(), &b.elements)));
    out
}

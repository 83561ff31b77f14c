//! Brute-force isomorphism search between small tables.

use super::{ops, Group, GroupError, Result};

/// Largest order accepted by [`find_isomorphism`].
pub const ISO_ORDER_LIMIT: usize = 64;

/// Per-element data preserved by every isomorphism.
fn signature(g: &Group, x: usize) -> (usize, usize, usize) {
    let n = g.order();
    let centralizer = (0..n).filter(|&y| g.mul(x, y) == g.mul(y, x)).count();
    let roots = (0..n).filter(|&y| g.mul(y, y) == x).count();
    (g.element_order(x), centralizer, roots)
}

fn signature_profile(g: &Group) -> Vec<(usize, usize, usize)> {
    let mut v: Vec<_> = (0..g.order()).map(|x| signature(g, x)).collect();
    v.sort_unstable();
    v
}

/// An isomorphism `a → b` as an image list, if one exists.
pub fn find_isomorphism(a: &Group, b: &Group) -> Result<Option<Vec<usize>>> {
    let n = a.order();
    if n > ISO_ORDER_LIMIT || b.order() > ISO_ORDER_LIMIT {
        return Err(GroupError::OrderTooLarge(n.max(b.order())));
    }
    if n != b.order() || a.is_abelian() != b.is_abelian() {
        return Ok(None);
    }
    if signature_profile(a) != signature_profile(b) {
        return Ok(None);
    }
    let gens = ops::generating_set(a);
    let sig_b: Vec<_> = (0..n).map(|y| signature(b, y)).collect();
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| {
            let s = signature(a, g);
            (0..n).filter(|&y| sig_b[y] == s).collect()
        })
        .collect();
    let mut images = Vec::with_capacity(gens.len());
    Ok(search(a, b, &gens, &candidates, &mut images))
}

pub fn is_isomorphic(a: &Group, b: &Group) -> Result<bool> {
    Ok(find_isomorphism(a, b)?.is_some())
}

fn search(
    a: &Group,
    b: &Group,
    gens: &[usize],
    candidates: &[Vec<usize>],
    images: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    let k = images.len();
    if k > 0 && extend(a, b, &gens[..k], images).is_none() {
        return None;
    }
    if k == gens.len() {
        return extend(a, b, gens, images);
    }
    for &y in &candidates[k] {
        images.push(y);
        if let Some(m) = search(a, b, gens, candidates, images) {
            return Some(m);
        }
        images.pop();
    }
    None
}

/// Extends the assignment on `gens` to `⟨gens⟩` and checks that it is an
/// injective homomorphism there.
fn extend(a: &Group, b: &Group, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
    let n = a.order();
    let (order, parent) = a.spanning_tree(gens);
    let mut map = vec![usize::MAX; n];
    map[0] = 0;
    for &y in order.iter().skip(1) {
        let (yp, k) = parent[y];
        map[y] = b.mul(map[yp], images[k]);
    }
    let mut hit = vec![false; b.order()];
    for &x in &order {
        if std::mem::replace(&mut hit[map[x]], true) {
            return None;
        }
        for (k, &g) in gens.iter().enumerate() {
            if map[a.mul(x, g)] != b.mul(map[x], images[k]) {
                return None;
            }
        }
    }
    Some(map)
}

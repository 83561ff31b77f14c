//! `H²(G, Z/p)` by linear algebra on factor sets.
//!
//! A normalized cocycle is determined by its values `u(x, g) = f(x, g)` on
//! generators `g`, because `f(x, y'g) = f(x, y') + f(xy', g) − f(y', g)`.
//! Those values are constrained by the cocycle identity on triples
//! `(x, y, g)`. Coboundaries form a subspace of dimension
//! `|G| − 1 − dim Hom(G, F_p)`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::linalg::RowSpace;
use super::{is_prime, Cocycle2, CohomologyError, Result};
use crate::group::Group;

/// Above this many classes only a basis is returned.
pub const CLASS_LIMIT: u64 = 4096;

/// Upper bound on `|G|² · (|G| − 1) · #generators`, the size of the
/// constraint system.
const WORK_LIMIT: usize = 16_000_000;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct H2Result {
    pub p: u64,
    pub dimension: usize,
    /// `p^dimension`, saturated.
    pub classes: u64,
    /// One cocycle per class, or a basis when `classes > CLASS_LIMIT`.
    pub representatives: Vec<Cocycle2>,
    pub basis_only: bool,
}

struct Layout {
    n: usize,
    gens: Vec<usize>,
    /// `(y', k)` with `y = y'·g_k`
    parent: Vec<(usize, usize)>,
    bfs: Vec<usize>,
}

impl Layout {
    fn new(g: &Group) -> Layout {
        let gens: Vec<usize> = g.generators().iter().map(|ng| ng.index).collect();
        let (bfs, parent) = g.spanning_tree(&gens);
        Layout {
            n: g.order(),
            gens,
            parent,
            bfs,
        }
    }

    /// Column of the unknown `u(x, g_k)`, `x ≠ 1`.
    fn col(&self, x: usize, k: usize) -> Option<usize> {
        (x != 0).then(|| (x - 1) * self.gens.len() + k)
    }

    fn width(&self) -> usize {
        (self.n - 1) * self.gens.len()
    }
}

/// `f(x, ·)` as linear forms in the unknowns, for every `x`.
fn symbolic_rows(g: &Group, lay: &Layout, p: u64) -> Vec<Vec<Vec<u64>>> {
    let n = lay.n;
    let w = lay.width();
    let mut f = vec![vec![vec![0u64; w]; n]; n];
    for x in 0..n {
        for &y in lay.bfs.iter().skip(1) {
            let (yp, k) = lay.parent[y];
            let xyp = g.mul(x, yp);
            let mut v = f[x][yp].clone();
            if let Some(c) = lay.col(xyp, k) {
                v[c] = (v[c] + 1) % p;
            }
            if let Some(c) = lay.col(yp, k) {
                v[c] = (v[c] + p - 1) % p;
            }
            f[x][y] = v;
        }
    }
    f
}

fn evaluate(g: &Arc<Group>, lay: &Layout, p: u64, u: &[u64]) -> Cocycle2 {
    let n = lay.n;
    let mut vals = vec![vec![0u64; n]; n];
    for x in 0..n {
        for &y in lay.bfs.iter().skip(1) {
            let (yp, k) = lay.parent[y];
            let xyp = g.mul(x, yp);
            let a = lay.col(xyp, k).map_or(0, |c| u[c]);
            let b = lay.col(yp, k).map_or(0, |c| u[c]);
            vals[x][y] = (vals[x][yp] + a + p - b) % p;
        }
    }
    Cocycle2::new(g.clone(), p, vals).expect("shape is right")
}

/// Unknown vector of a cocycle.
fn coordinates(f: &Cocycle2, lay: &Layout) -> Vec<u64> {
    let mut u = vec![0u64; lay.width()];
    for x in 1..lay.n {
        for (k, &s) in lay.gens.iter().enumerate() {
            u[lay.col(x, k).unwrap()] = f.value(x, s);
        }
    }
    u
}

/// Dimension of `H²(G, Z/p)` and class representatives.
pub fn h2_enumerate(g: &Arc<Group>, p: u64) -> Result<H2Result> {
    if !is_prime(p) {
        return Err(CohomologyError::NotPrime(p));
    }
    let lay = Layout::new(g);
    let n = lay.n;
    if n == 1 {
        return Ok(H2Result {
            p,
            dimension: 0,
            classes: 1,
            representatives: vec![Cocycle2::zero(g.clone(), p)?],
            basis_only: false,
        });
    }
    let w = lay.width();
    let work = n.saturating_mul(n).saturating_mul(w);
    if work > WORK_LIMIT || n * p as usize > crate::group::MAX_ORDER {
        return Err(CohomologyError::TooLarge(format!(
            "H² of a group of order {n} with {} generators",
            lay.gens.len()
        )));
    }
    let f = symbolic_rows(g, &lay, p);
    let mut constraints = RowSpace::new(p, w);
    for x in 0..n {
        for y in 0..n {
            let xy = g.mul(x, y);
            for (k, &s) in lay.gens.iter().enumerate() {
                // f(x,y) + f(xy,s) − f(y,s) − f(x,ys) = 0
                let mut row = f[x][y].clone();
                if let Some(c) = lay.col(xy, k) {
                    row[c] = (row[c] + 1) % p;
                }
                if let Some(c) = lay.col(y, k) {
                    row[c] = (row[c] + p - 1) % p;
                }
                let ys = g.mul(y, s);
                for (r, &v) in row.iter_mut().zip(&f[x][ys]) {
                    *r = (*r + p - v) % p;
                }
                constraints.insert(row);
            }
        }
    }
    let z2 = constraints.nullspace();
    let mut b2 = RowSpace::new(p, w);
    for t in 1..n {
        let mut h = vec![0u64; n];
        h[t] = 1;
        let cob = Cocycle2::coboundary(g.clone(), p, &h)?;
        b2.insert(coordinates(&cob, &lay));
    }
    let mut basis = Vec::new();
    for v in z2 {
        if b2.insert(v.clone()) {
            basis.push(v);
        }
    }
    let dimension = basis.len();
    let classes = p.checked_pow(dimension as u32).unwrap_or(u64::MAX);
    let basis_only = classes > CLASS_LIMIT;
    let representatives = if basis_only {
        basis.iter().map(|u| evaluate(g, &lay, p, u)).collect()
    } else {
        let mut reps = Vec::with_capacity(classes as usize);
        for idx in 0..classes {
            let mut u = vec![0u64; w];
            let mut rest = idx;
            for b in &basis {
                let c = rest % p;
                rest /= p;
                for (x, &y) in u.iter_mut().zip(b) {
                    *x = (*x + c * y) % p;
                }
            }
            reps.push(evaluate(g, &lay, p, &u));
        }
        reps
    };
    Ok(H2Result {
        p,
        dimension,
        classes,
        representatives,
        basis_only,
    })
}

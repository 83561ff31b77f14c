//! The action of `F` on the character group `Â = Hom(A, μ_e)`.
//!
//! `A ≅ ⊕ Z/n_i` is given by its invariants. Each generator `ρ` of `F`
//! carries a matrix `M_ρ` (column `j` is the image of the `j`-th basis
//! element under `a ↦ a^ρ`) and a cyclotomic unit `u_ρ` describing its
//! action on `μ_e`. Since `^ρχ(a) = χ(a^ρ)^{ρ^{-1}}`, `ρ` sends every `χ`
//! to `χ^m` exactly when `M_ρ = m·u_ρ` as an endomorphism of `A`.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{Group, GroupError, Result};

type Matrix = Vec<Vec<u64>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualActionData {
    /// `A ≅ ⊕ Z/n_i`.
    pub invariants: Vec<u64>,
    /// The acting group; `action` and `cyclo` follow its generator list.
    pub quotient: Group,
    pub action: Vec<Matrix>,
    pub cyclo: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualActionFlags {
    /// every `ρ` acts on `Â` by some power map `χ ↦ χ^{k_ρ}`
    pub uniform_power: bool,
    /// every `ρ` acts as `χ ↦ χ^{±1}`
    pub pm_one: bool,
    /// every `ρ` acts as `χ ↦ χ^m` or trivially
    pub power_m_or_trivial: bool,
}

struct Action {
    n: Vec<u64>,
    e: u64,
}

impl Action {
    fn reduce(&self, m: &mut Matrix) {
        for (i, row) in m.iter_mut().enumerate() {
            for v in row.iter_mut() {
                *v %= self.n[i];
            }
        }
    }

    /// `x · y` as endomorphisms: first `y`, then `x`.
    fn compose(&self, x: &Matrix, y: &Matrix) -> Matrix {
        let r = self.n.len();
        let mut out = vec![vec![0u64; r]; r];
        for i in 0..r {
            for j in 0..r {
                let mut s = 0u64;
                for k in 0..r {
                    s = (s + x[i][k] * y[k][j]) % self.n[i];
                }
                out[i][j] = s;
            }
        }
        out
    }

    fn is_scalar(&self, m: &Matrix, c: u64) -> bool {
        m.iter().enumerate().all(|(i, row)| {
            row.iter().enumerate().all(|(j, &v)| {
                let want = if i == j { c % self.n[i] } else { 0 };
                v % self.n[i] == want
            })
        })
    }

    fn apply(&self, m: &Matrix, a: &[u64]) -> Vec<u64> {
        (0..self.n.len())
            .map(|i| (0..a.len()).fold(0, |s, j| (s + m[i][j] * a[j]) % self.n[i]))
            .collect()
    }

    fn elements(&self) -> Vec<Vec<u64>> {
        let mut out = vec![Vec::new()];
        for &ni in &self.n {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..ni).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        out
    }

    fn check_automorphism(&self, m: &Matrix) -> Result<()> {
        let r = self.n.len();
        if m.len() != r || m.iter().any(|row| row.len() != r) {
            return Err(GroupError::BadAction("matrix has the wrong shape".into()));
        }
        // column j must have order dividing n_j
        for j in 0..r {
            for i in 0..r {
                if !(self.n[j] * m[i][j]).is_multiple_of(self.n[i]) {
                    return Err(GroupError::BadAction(format!(
                        "column {j} does not define a homomorphism"
                    )));
                }
            }
        }
        let elems = self.elements();
        let mut images: Vec<Vec<u64>> = elems.iter().map(|a| self.apply(m, a)).collect();
        images.sort();
        images.dedup();
        if images.len() != elems.len() {
            return Err(GroupError::BadAction("matrix is not invertible on A".into()));
        }
        Ok(())
    }
}

/// Evaluates the hypotheses on the `F`-action on `Â` for a given `m`.
pub fn dual_action_predicate(data: &DualActionData, m: i64) -> Result<DualActionFlags> {
    let f = &data.quotient;
    if data.invariants.contains(&0) {
        return Err(GroupError::BadAction("invariant 0".into()));
    }
    let order = data
        .invariants
        .iter()
        .try_fold(1u64, |acc, &n| acc.checked_mul(n).filter(|&v| v <= super::MAX_ORDER as u64))
        .ok_or_else(|| GroupError::BadAction("A is too large".into()))?;
    let e = data.invariants.iter().fold(1u64, |acc, &n| acc.lcm(&n));
    let mm = m.rem_euclid(order as i64) as u64;
    if (mm * mm) % order != 1 % order {
        return Err(GroupError::BadM(order));
    }
    let gens = f.generators();
    if data.action.len() != gens.len() || data.cyclo.len() != gens.len() {
        return Err(GroupError::BadAction(
            "one matrix and one cyclotomic unit per generator of F".into(),
        ));
    }
    let act = Action {
        n: data.invariants.clone(),
        e,
    };
    let mut mats = data.action.clone();
    for mat in &mut mats {
        act.check_automorphism(mat)?;
        act.reduce(mat);
    }
    for &u in &data.cyclo {
        if u.gcd(&act.e) != 1 {
            return Err(GroupError::BadAction(format!("{u} is not a unit modulo {e}")));
        }
    }
    // extend to every element of F: a^{y'g} = (a^{y'})^g
    let idx: Vec<usize> = gens.iter().map(|g| g.index).collect();
    let (bfs, parent) = f.spanning_tree(&idx);
    if bfs.len() != f.order() {
        return Err(GroupError::BadAction("generators of F do not generate".into()));
    }
    let r = act.n.len();
    let identity: Matrix = (0..r)
        .map(|i| (0..r).map(|j| u64::from(i == j) % act.n[i]).collect())
        .collect();
    let mut per: Vec<Option<(Matrix, u64)>> = vec![None; f.order()];
    per[0] = Some((identity, 1 % e));
    for &y in bfs.iter().skip(1) {
        let (yp, k) = parent[y];
        let (my, uy) = per[yp].clone().expect("parent visited first");
        per[y] = Some((act.compose(&mats[k], &my), (uy * data.cyclo[k]) % e));
    }
    let per: Vec<(Matrix, u64)> = per.into_iter().map(|p| p.expect("all visited")).collect();
    for x in 0..f.order() {
        for (k, &g) in idx.iter().enumerate() {
            let (want_m, want_u) = &per[f.mul(x, g)];
            let got_m = act.compose(&mats[k], &per[x].0);
            let got_u = (per[x].1 * data.cyclo[k]) % e;
            if &got_m != want_m || got_u != *want_u {
                return Err(GroupError::BadAction(
                    "action does not respect the relations of F".into(),
                ));
            }
        }
    }
    let m_e = m.rem_euclid(e as i64) as u64;
    let mut flags = DualActionFlags {
        uniform_power: true,
        pm_one: true,
        power_m_or_trivial: true,
    };
    for (mat, u) in &per {
        let trivial = act.is_scalar(mat, *u);
        let inverse = act.is_scalar(mat, (e - *u) % e);
        let power_m = act.is_scalar(mat, (m_e * u) % e);
        flags.uniform_power &= (0..e).any(|c| act.is_scalar(mat, c));
        flags.pm_one &= trivial || inverse;
        flags.power_m_or_trivial &= trivial || power_m;
    }
    Ok(flags)
}

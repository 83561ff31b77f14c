//! Reading `d`-data off an extension.
//!
//! Preimages are the least-index section. Powers `s^p` of preimages of
//! elements of order `p`, and commutators of preimages of commuting
//! elements, lie in the kernel and do not depend on that choice.

use super::{ObstructionError, Result};
use crate::cohomology::ExtensionClass;

fn check(e: &ExtensionClass, x: usize) -> Result<()> {
    if x >= e.cocycle().group().order() {
        return Err(ObstructionError::Shape(format!("element {x} out of range")));
    }
    Ok(())
}

/// `k` with `s(x)^p = ζ^k`; needs `x^p = 1`.
pub fn power_log(e: &ExtensionClass, x: usize) -> Result<u64> {
    check(e, x)?;
    let p = e.cocycle().p();
    let s = e.section(x);
    let sp = e.group().pow(s, p as i64);
    e.kernel_log(sp)
        .ok_or_else(|| ObstructionError::RelationFails(format!("element {x} does not have order dividing p")))
}

/// `k` with `s(x) s(y) = ζ^k s(y) s(x)`; needs `x` and `y` to commute.
pub fn commutator_log(e: &ExtensionClass, x: usize, y: usize) -> Result<u64> {
    check(e, x)?;
    check(e, y)?;
    let g = e.group();
    let (sx, sy) = (e.section(x), e.section(y));
    let c = g.mul(g.mul(sx, sy), g.inv(g.mul(sy, sx)));
    e.kernel_log(c)
        .ok_or_else(|| ObstructionError::RelationFails(format!("elements {x} and {y} do not commute")))
}

/// Massy data for preimages of `σ_1, …, σ_n`.
pub fn massy_data(e: &ExtensionClass, sigmas: &[usize]) -> Result<Vec<Vec<u64>>> {
    let n = sigmas.len();
    let mut d = vec![vec![0; n]; n];
    for i in 0..n {
        d[i][i] = power_log(e, sigmas[i])?;
        for j in i + 1..n {
            d[i][j] = commutator_log(e, sigmas[i], sigmas[j])?;
        }
    }
    Ok(d)
}

/// `(j, d)` with `t^p = ζ^j` and `t s_i = ζ^{d_i} s_i t`.
pub fn direct_factor_data(e: &ExtensionClass, sigmas: &[usize], tau: usize) -> Result<(u64, Vec<u64>)> {
    let j = power_log(e, tau)?;
    let d = sigmas
        .iter()
        .map(|&s| commutator_log(e, tau, s))
        .collect::<Result<_>>()?;
    Ok((j, d))
}

/// `d[i][j]` with `t_j s_i = ζ^{d_ij} s_i t_j`.
pub fn ledet_data(e: &ExtensionClass, sigmas: &[usize], taus: &[usize]) -> Result<Vec<Vec<u64>>> {
    sigmas
        .iter()
        .map(|&s| taus.iter().map(|&t| commutator_log(e, t, s)).collect())
        .collect()
}

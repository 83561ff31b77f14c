//! Quaternion invariants of diagonal quadratic forms.

use serde::{Deserialize, Serialize};

use super::{nonzero, ObstructionError, Result};
use crate::symbols::{power_class, symbol, FieldElem, SymbolError, SymbolProduct};

/// `⟨a_1, …, a_n⟩`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalForm {
    pub entries: Vec<FieldElem>,
}

impl DiagonalForm {
    pub fn new(entries: Vec<FieldElem>) -> Result<DiagonalForm> {
        nonzero(&entries.iter().collect::<Vec<_>>())?;
        Ok(DiagonalForm { entries })
    }
}

/// `hw(q) = ∏_{i<j} (a_i, a_j)`
pub fn hasse_witt(q: &DiagonalForm) -> Result<SymbolProduct> {
    nonzero(&q.entries.iter().collect::<Vec<_>>())?;
    let mut out = SymbolProduct::trivial(2);
    for (i, a) in q.entries.iter().enumerate() {
        for b in &q.entries[i + 1..] {
            out = out.mul(&symbol(a.clone(), b.clone(), 2)?)?;
        }
    }
    Ok(out.normalize())
}

/// Product of the entries, reduced modulo squares.
pub fn discriminant(q: &DiagonalForm) -> Result<FieldElem> {
    nonzero(&q.entries.iter().collect::<Vec<_>>())?;
    let d = FieldElem::product(q.entries.iter().map(|e| (e.clone(), 1)).collect());
    Ok(power_class(&d, 2))
}

/// `hw(q) hw(q_e) (d, −d_e) ∏ (a_i, sp(ρ_i))`
pub fn frohlich_obstruction(
    q: &DiagonalForm,
    q_e: &DiagonalForm,
    spin_pairs: &[(FieldElem, FieldElem)],
) -> Result<SymbolProduct> {
    let d = discriminant(q)?;
    let d_e = discriminant(q_e)?;
    let mut out = hasse_witt(q)?
        .mul(&hasse_witt(q_e)?)?
        .mul(&symbol(d, FieldElem::int(-1).mul(&d_e), 2)?)?;
    for (a, sp) in spin_pairs {
        out = out.mul(&symbol(a.clone(), sp.clone(), 2)?)?;
    }
    Ok(out.normalize())
}

/// `O_{G̃⁻} = (−1, d_f) O_{G̃⁺}`
pub fn double_cover_twist(o_plus: &SymbolProduct, d_f: &FieldElem) -> Result<SymbolProduct> {
    if o_plus.p() != 2 {
        return Err(ObstructionError::Symbol(SymbolError::PrimeMismatch {
            expected: 2,
            found: o_plus.p(),
        }));
    }
    Ok(symbol(FieldElem::int(-1), d_f.clone(), 2)?
        .mul(o_plus)?
        .normalize())
}

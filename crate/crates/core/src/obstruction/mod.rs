//! Obstruction classes of `μ_p`-embedding problems as symbol products.
//!
//! Every engine takes the commutator data of an extension (the `d`'s) and
//! the Kummer generators of the base field extension. [`extract`] reads the
//! data off an [`ExtensionClass`](crate::cohomology::ExtensionClass).

pub mod extract;
mod quadratic;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cohomology::CohomologyError;
use crate::symbols::{symbol, FieldElem, SymbolError, SymbolProduct};

pub use quadratic::{discriminant, double_cover_twist, frohlich_obstruction, hasse_witt, DiagonalForm};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ObstructionError {
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error("invalid input: {0}")]
    Shape(String),
    #[error("unknown variant {0}")]
    BadVariant(String),
    #[error("unknown family {0}")]
    BadFamily(String),
    #[error("the chosen generators do not satisfy the required relations: {0}")]
    RelationFails(String),
}

pub type Result<T> = std::result::Result<T, ObstructionError>;

/// `ζ_p` as a symbol entry; `−1` when `p = 2`.
pub fn zeta_entry(p: u64) -> FieldElem {
    if p == 2 {
        FieldElem::int(-1)
    } else {
        FieldElem::zeta(p, 1)
    }
}

fn nonzero(entries: &[&FieldElem]) -> Result<()> {
    if entries.iter().any(|e| e.is_zero()) {
        return Err(SymbolError::ZeroEntry.into());
    }
    Ok(())
}

/// A class that is either known as a symbol product or only by name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ClassInput {
    Named(String),
    Known(SymbolProduct),
}

impl ClassInput {
    pub fn trivial(p: u64) -> ClassInput {
        ClassInput::Known(SymbolProduct::trivial(p))
    }

    pub fn to_product(&self, p: u64) -> Result<SymbolProduct> {
        match self {
            ClassInput::Named(n) => Ok(SymbolProduct::opaque(n, p)),
            ClassInput::Known(s) if s.p() == p => Ok(s.clone()),
            ClassInput::Known(s) => Err(SymbolError::PrimeMismatch {
                expected: p,
                found: s.p(),
            }
            .into()),
        }
    }
}

/// `[Γ] = (a, −1)` for `1 → μ_2 → C_4 → C_2 → 1` over `k(√a)`.
pub fn obstruction_c4(a: &FieldElem) -> Result<SymbolProduct> {
    obstruction_cp2(a, 2)
}

/// `[Γ] = (a, ζ; ζ)` for `1 → μ_p → C_{p²} → C_p → 1` over `k(a^{1/p})`.
pub fn obstruction_cp2(a: &FieldElem, p: u64) -> Result<SymbolProduct> {
    Ok(symbol(a.clone(), zeta_entry(p), p)?.normalize())
}

/// Upper-triangular commutator data: `d[i][i]` from `s_i^p = ζ^{d_ii}` and
/// `d[i][j]` (`i < j`) from `s_i s_j = ζ^{d_ij} s_j s_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MassyInput {
    pub p: u64,
    pub a: Vec<FieldElem>,
    pub d: Vec<Vec<u64>>,
}

/// `∏ (a_i, ζ; ζ)^{d_ii} ∏_{i<k} (a_i, a_k; ζ)^{d_ik}`
pub fn massy(input: &MassyInput) -> Result<SymbolProduct> {
    let n = input.a.len();
    let p = input.p;
    if n == 0 || input.d.len() != n || input.d.iter().any(|r| r.len() != n) {
        return Err(ObstructionError::Shape(format!("need {n} × {n} d-data for n = {n}")));
    }
    nonzero(&input.a.iter().collect::<Vec<_>>())?;
    let z = zeta_entry(p);
    let mut out = SymbolProduct::trivial(p);
    for i in 0..n {
        let dii = input.d[i][i] % p;
        if dii != 0 {
            out = out.mul(&symbol(input.a[i].clone(), z.clone(), p)?.pow(dii as i64))?;
        }
        for k in i + 1..n {
            let dik = input.d[i][k] % p;
            if dik != 0 {
                out = out.mul(&symbol(input.a[i].clone(), input.a[k].clone(), p)?.pow(dik as i64))?;
            }
        }
    }
    Ok(out.normalize())
}

/// Data of `1 → μ_p → G → H × C_p → 1`: `t^p = ζ^j`, `t s_i = ζ^{d_i} s_i t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectFactorInput {
    pub p: u64,
    pub res_class: ClassInput,
    pub b: FieldElem,
    pub j: u64,
    pub a: Vec<FieldElem>,
    pub d: Vec<u64>,
}

/// `[K, H, res_H γ] · (b, ζ^j ∏ a_i^{d_i}; ζ)`
pub fn direct_factor(input: &DirectFactorInput) -> Result<SymbolProduct> {
    let p = input.p;
    if input.a.len() != input.d.len() {
        return Err(ObstructionError::Shape("one d_i per a_i".into()));
    }
    nonzero(&[&input.b])?;
    nonzero(&input.a.iter().collect::<Vec<_>>())?;
    let mut parts = vec![(zeta_entry(p), (input.j % p) as i64)];
    parts.extend(input.a.iter().zip(&input.d).map(|(a, d)| (a.clone(), (d % p) as i64)));
    let right = FieldElem::product(parts);
    let out = input
        .res_class
        .to_product(p)?
        .mul(&symbol(input.b.clone(), right, p)?)?;
    Ok(out.normalize())
}

/// Data of `1 → μ_p → G → N × H → 1`: `t_j s_i = ζ^{d_ij} s_i t_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedetInput {
    pub p: u64,
    pub res_n_class: ClassInput,
    pub res_h_class: ClassInput,
    pub a: Vec<FieldElem>,
    pub b: Vec<FieldElem>,
    /// `m × n`
    pub d: Vec<Vec<u64>>,
}

/// `[K, N, res_N γ] · [K′, H, res_H γ] · ∏ (b_j, a_i; ζ)^{d_ij}`
pub fn ledet_product(input: &LedetInput) -> Result<SymbolProduct> {
    let p = input.p;
    let (m, n) = (input.a.len(), input.b.len());
    if input.d.len() != m || input.d.iter().any(|r| r.len() != n) {
        return Err(ObstructionError::Shape(format!("d must be {m} × {n}")));
    }
    nonzero(&input.a.iter().chain(&input.b).collect::<Vec<_>>())?;
    let mut out = input
        .res_n_class
        .to_product(p)?
        .mul(&input.res_h_class.to_product(p)?)?;
    for (i, ai) in input.a.iter().enumerate() {
        for (j, bj) in input.b.iter().enumerate() {
            let e = input.d[i][j] % p;
            if e != 0 {
                out = out.mul(&symbol(bj.clone(), ai.clone(), p)?.pow(e as i64))?;
            }
        }
    }
    Ok(out.normalize())
}

/// `O_{G₂} = O_{G₁} · O_{C_{pⁿ}}` for `G₂ = G₁^{(pⁿ, σ₁)}`.
pub fn relate_raise_lower(o_g1: &SymbolProduct, o_cyc: &SymbolProduct) -> Result<SymbolProduct> {
    Ok(o_g1.mul(o_cyc)?.normalize())
}

/// The four extensions of `C_q × C_p` and of `M(pⁿ)` with modular quotient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModularCase {
    /// `M(pⁿ)` over `C_q × C_p`
    M,
    /// `G_{1,ζ}` over `M(pⁿ)`
    OneZeta,
    /// `G_{ζ,1}` over `M(pⁿ)`
    ZetaOne,
    /// `G_{ζ,ζ}` over `M(pⁿ)`
    ZetaZeta,
}

impl FromStr for ModularCase {
    type Err = ObstructionError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "m" | "modular" => Ok(ModularCase::M),
            "1z" | "1zeta" | "onezeta" => Ok(ModularCase::OneZeta),
            "z1" | "zeta1" | "zetaone" => Ok(ModularCase::ZetaOne),
            "zz" | "zetazeta" => Ok(ModularCase::ZetaZeta),
            _ => Err(ObstructionError::BadVariant(s.to_string())),
        }
    }
}

impl fmt::Display for ModularCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModularCase::M => "M",
            ModularCase::OneZeta => "1zeta",
            ModularCase::ZetaOne => "zeta1",
            ModularCase::ZetaZeta => "zetazeta",
        })
    }
}

pub fn modular_obstruction(
    case: ModularCase,
    p: u64,
    n: u32,
    a1: &FieldElem,
    a2: &FieldElem,
    crossed: &ClassInput,
) -> Result<SymbolProduct> {
    if n < 3 {
        return Err(ObstructionError::Shape(format!("n = {n}, need n ≥ 3")));
    }
    nonzero(&[a1, a2])?;
    let z = zeta_entry(p);
    let out = match case {
        ModularCase::M => crossed
            .to_product(p)?
            .mul(&symbol(a2.clone(), a1.clone(), p)?)?,
        ModularCase::OneZeta => symbol(a2.clone(), a1.clone(), p)?,
        ModularCase::ZetaOne => symbol(a2.clone(), z, p)?,
        ModularCase::ZetaZeta => symbol(z.mul(a1), a2.clone(), p)?,
    };
    Ok(out.normalize())
}

/// The extensions of `C_{p²} × C_p` by `G₃`, `G₄`, `G₅`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GFamily {
    G3,
    G4,
    G5,
}

impl FromStr for GFamily {
    type Err = ObstructionError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "G3" => Ok(GFamily::G3),
            "G4" => Ok(GFamily::G4),
            "G5" => Ok(GFamily::G5),
            _ => Err(ObstructionError::BadFamily(s.to_string())),
        }
    }
}

/// `G₃: (a₂, a₁; ζ)`, `G₄: (a₂, a₁ζ; ζ)`, `G₅: [L₁, C_{p²}, ζ](a₂, a₁; ζ)`,
/// or `(ζ_{p²}⁻¹a₂, a₁; ζ)` when `ζ_{p²} ∈ k`.
pub fn g_family_obstruction(
    family: GFamily,
    p: u64,
    a1: &FieldElem,
    a2: &FieldElem,
    cyc_factor: &ClassInput,
    zeta_p2_in_k: bool,
) -> Result<SymbolProduct> {
    nonzero(&[a1, a2])?;
    let out = match family {
        GFamily::G3 => symbol(a2.clone(), a1.clone(), p)?,
        GFamily::G4 => symbol(a2.clone(), a1.mul(&zeta_entry(p)), p)?,
        GFamily::G5 if zeta_p2_in_k => {
            symbol(FieldElem::zeta(p * p, -1).mul(a2), a1.clone(), p)?
        }
        GFamily::G5 => cyc_factor
            .to_product(p)?
            .mul(&symbol(a2.clone(), a1.clone(), p)?)?,
    };
    Ok(out.normalize())
}

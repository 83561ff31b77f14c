//! `F_p[Z/pⁿ]`-modules and counting solutions of `(K/k, A ⋊ G, A)`.
//!
//! A module is recorded by the multiplicities `d_i` of its cyclic summands
//! `F_p[G]/(σ − 1)^i`. Norm dimensions `𝔇_i` are supplied by the caller.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FpgError {
    #[error("index {i} outside 1..={max}")]
    BadIndex { i: u64, max: u64 },
    #[error("module is over (p, n) = {module:?} but norm data over {norm:?}")]
    Mismatch { module: (u64, u32), norm: (u64, u32) },
    #[error("the embedding problem has no solution")]
    NotSolvable,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("p^n = {0}^{1} is too large")]
    TooLarge(u64, u32),
    #[error("bad norm dimensions: {0}")]
    BadDims(String),
    #[error("bad i(K/k): {0}")]
    BadInvariant(String),
    #[error("the counting formula has a negative exponent at i = {0}")]
    NegativeExponent(u64),
}

pub type Result<T> = std::result::Result<T, FpgError>;

const MAX_LENGTH: u64 = 1 << 16;

fn group_order(p: u64, n: u32) -> Result<u64> {
    if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p.is_multiple_of(d)) {
        return Err(FpgError::NotPrime(p));
    }
    match p.checked_pow(n) {
        Some(q) if q <= MAX_LENGTH => Ok(q),
        _ => Err(FpgError::TooLarge(p, n)),
    }
}

/// `⌈log_p(i)⌉` for `i ≥ 1`.
pub fn ceil_log(p: u64, i: u64) -> u32 {
    let mut s = 0;
    let mut q = 1u64;
    while q < i {
        q *= p;
        s += 1;
    }
    s
}

/// `⊕_i ⊕_{d_i} F_p[G]/(σ − 1)^i` with `G = Z/pⁿ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FpGModule {
    p: u64,
    n: u32,
    d: BTreeMap<u64, u64>,
}

impl FpGModule {
    pub fn new(p: u64, n: u32, d: BTreeMap<u64, u64>) -> Result<FpGModule> {
        let max = group_order(p, n)?;
        if let Some((&i, _)) = d.iter().find(|(&i, _)| i == 0 || i > max) {
            return Err(FpgError::BadIndex { i, max });
        }
        let d = d.into_iter().filter(|&(_, m)| m > 0).collect();
        Ok(FpGModule { p, n, d })
    }

    pub fn zero(p: u64, n: u32) -> Result<FpGModule> {
        FpGModule::new(p, n, BTreeMap::new())
    }

    /// One summand `F_p[G]/(σ − 1)^i` for each entry of `lengths`.
    pub fn from_summands(p: u64, n: u32, lengths: &[u64]) -> Result<FpGModule> {
        let mut d = BTreeMap::new();
        for &i in lengths {
            *d.entry(i).or_insert(0) += 1;
        }
        FpGModule::new(p, n, d)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `pⁿ`
    pub fn group_order(&self) -> u64 {
        self.p.pow(self.n)
    }

    pub fn multiplicity(&self, i: u64) -> u64 {
        self.d.get(&i).copied().unwrap_or(0)
    }

    pub fn multiplicities(&self) -> &BTreeMap<u64, u64> {
        &self.d
    }

    /// `dim_{F_p} A = Σ i·d_i`
    pub fn dimension(&self) -> u64 {
        self.d.iter().map(|(i, m)| i * m).sum()
    }
}

/// `i(K/k) ∈ {−∞, 0, …, n − 1}`
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IInvariant {
    NegInfinity,
    Level(u32),
}

impl FromStr for IInvariant {
    type Err = FpgError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "-inf" | "-infinity" | "neginf" | "-oo" => Ok(IInvariant::NegInfinity),
            t => t
                .parse()
                .map(IInvariant::Level)
                .map_err(|_| FpgError::BadInvariant(s.to_string())),
        }
    }
}

impl fmt::Display for IInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IInvariant::NegInfinity => write!(f, "-inf"),
            IInvariant::Level(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormData {
    p: u64,
    n: u32,
    /// `dims[i − 1] = 𝔇_i` for `1 ≤ i ≤ pⁿ`
    dims: Vec<u64>,
    i_invariant: IInvariant,
    base_quotient_finite: bool,
}

impl NormData {
    /// `dims` lists either every `𝔇_i` (length `pⁿ`) or one value per level
    /// `⌈log_p i⌉ = 0, …, n` (length `n + 1`). Per-index values must be
    /// constant on each level.
    pub fn new(
        p: u64,
        n: u32,
        dims: &[u64],
        i_invariant: IInvariant,
        base_quotient_finite: bool,
    ) -> Result<NormData> {
        let q = group_order(p, n)?;
        if let IInvariant::Level(s) = i_invariant {
            if s >= n.max(1) {
                return Err(FpgError::BadInvariant(format!("{s} is not below n = {n}")));
            }
        }
        let full: Vec<u64> = if dims.len() as u64 == q {
            for i in 2..=q {
                let (a, b) = (dims[i as usize - 2], dims[i as usize - 1]);
                if ceil_log(p, i - 1) == ceil_log(p, i) && a != b {
                    return Err(FpgError::BadDims(format!(
                        "𝔇_{} = {a} and 𝔇_{i} = {b} share the level {}",
                        i - 1,
                        ceil_log(p, i)
                    )));
                }
            }
            dims.to_vec()
        } else if dims.len() == n as usize + 1 {
            (1..=q).map(|i| dims[ceil_log(p, i) as usize]).collect()
        } else {
            return Err(FpgError::BadDims(format!(
                "expected {q} or {} values, got {}",
                n + 1,
                dims.len()
            )));
        };
        Ok(NormData {
            p,
            n,
            dims: full,
            i_invariant,
            base_quotient_finite,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `𝔇_i`
    pub fn dim(&self, i: u64) -> u64 {
        self.dims[i as usize - 1]
    }

    pub fn dims(&self) -> &[u64] {
        &self.dims
    }

    pub fn i_invariant(&self) -> IInvariant {
        self.i_invariant
    }

    pub fn base_quotient_finite(&self) -> bool {
        self.base_quotient_finite
    }

    /// `𝟙_{i = p^{i(K/k)} + 1}`, false for `i(K/k) = −∞`.
    fn indicator(&self, i: u64) -> bool {
        match self.i_invariant {
            IInvariant::NegInfinity => false,
            IInvariant::Level(s) => i == self.p.pow(s) + 1,
        }
    }
}

/// `Δ(A_{i}) = Σ_{j ≥ i} d_j`
pub fn delta(a: &FpGModule, i: u64) -> Result<u64> {
    let max = a.group_order() + 1;
    if i == 0 || i > max {
        return Err(FpgError::BadIndex { i, max });
    }
    Ok(a.d.range(i..).map(|(_, m)| m).sum())
}

/// Gaussian binomial `(n choose m)_p`; zero when `m < 0` or `m > n`.
pub fn p_binomial(n: i64, m: i64, p: u64) -> BigUint {
    if m < 0 || m > n {
        return BigUint::zero();
    }
    let p = BigUint::from(p);
    let one = BigUint::one();
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for k in 0..m as u32 {
        num *= p.pow(n as u32 - k) - &one;
        den *= p.pow(k + 1) - &one;
    }
    num / den
}

fn check_match(a: &FpGModule, nd: &NormData) -> Result<()> {
    if (a.p, a.n) != (nd.p, nd.n) {
        return Err(FpgError::Mismatch {
            module: (a.p, a.n),
            norm: (nd.p, nd.n),
        });
    }
    Ok(())
}

/// `Δ(A_{i}) ≤ 𝔇_i` for every `1 ≤ i ≤ pⁿ`.
pub fn solvable(a: &FpGModule, nd: &NormData) -> Result<bool> {
    check_match(a, nd)?;
    for i in 1..=a.group_order() {
        if delta(a, i)? > nd.dim(i) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolutionCount {
    Infinite,
    Finite(BigUint),
}

impl fmt::Display for SolutionCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolutionCount::Infinite => write!(f, "infinite"),
            SolutionCount::Finite(c) => write!(f, "{c}"),
        }
    }
}

/// Number of solutions of a solvable problem.
pub fn count_solutions(a: &FpGModule, nd: &NormData) -> Result<SolutionCount> {
    if !solvable(a, nd)? {
        return Err(FpgError::NotSolvable);
    }
    if !nd.base_quotient_finite {
        return Ok(SolutionCount::Infinite);
    }
    let q = a.group_order();
    let deltas: Vec<i64> = (1..=q + 1).map(|i| delta(a, i).map(|d| d as i64)).collect::<Result<_>>()?;
    let del = |i: u64| deltas[i as usize - 1];
    let ind = |b: bool| b as i64;
    let mut count = BigUint::one();
    for i in 1..=q {
        let top = nd.dim(i) as i64 - del(i + 1) - ind(nd.indicator(i));
        count *= p_binomial(top, del(i) - del(i + 1), a.p);
        let di = a.multiplicity(i) as i64;
        if di == 0 {
            continue;
        }
        let sum: i64 = (1..i)
            .map(|j| nd.dim(j) as i64 - del(j) - ind(nd.indicator(j) && i == q))
            .sum();
        let e = di * sum;
        if e < 0 {
            return Err(FpgError::NegativeExponent(i));
        }
        count *= BigUint::from(a.p).pow(e as u32);
    }
    Ok(SolutionCount::Finite(count))
}

/// Indices `i` at which the counting formula meets an edge case: a binomial
/// whose top falls below its bottom only because of the indicator term.
pub fn count_diagnostics(a: &FpGModule, nd: &NormData) -> Result<Vec<u64>> {
    check_match(a, nd)?;
    let q = a.group_order();
    let mut out = Vec::new();
    for i in 1..=q {
        if !nd.indicator(i) {
            continue;
        }
        let (d0, d1) = (delta(a, i)? as i64, delta(a, i + 1)? as i64);
        let top = nd.dim(i) as i64 - d1;
        if top >= d0 - d1 && top - 1 < d0 - d1 {
            out.push(i);
        }
    }
    Ok(out)
}

/// Solvability of `E_2, …, E_p`; all equal the norm condition on `b`.
pub fn ei_solvability(p: u64, norm_condition: bool) -> Vec<bool> {
    vec![norm_condition; p.saturating_sub(1) as usize]
}

/// `M_j = F_p[G]/(σ − 1)^j`
pub fn mss_quotient(j: u64, p: u64, n: u32) -> Result<FpGModule> {
    let max = group_order(p, n)?;
    if j == 0 || j > max {
        return Err(FpgError::BadIndex { i: j, max });
    }
    FpGModule::new(p, n, BTreeMap::from([(j, 1)]))
}

/// Pairs `(pⁱ + c, p^{i+1})` with `0 ≤ i < n`, `1 ≤ c < p^{i+1} − pⁱ`:
/// `M_{pⁱ+c} ⋊ G ⟹ M_{p^{i+1}} ⋊ G`.
pub fn mss_edges(p: u64, n: u32) -> Result<Vec<(u64, u64)>> {
    group_order(p, n)?;
    let mut out = Vec::new();
    for i in 0..n {
        let (lo, hi) = (p.pow(i), p.pow(i + 1));
        out.extend((1..hi - lo).map(|c| (lo + c, hi)));
    }
    Ok(out)
}

//! Symbolic Kummer towers solving `μ_p`-embedding problems.
//!
//! Solutions are certificates: radicands are words in named elements whose
//! exponents may be elements of `Z[C_n]` acting through a named generator.
//! The algebra that makes them work is the group-ring identity
//! `(σ − 1)·θ = N − p` with `θ = Σ (p − 1 − i) σ^i`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::symbols::FieldElem;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KummerError {
    #[error("missing witness for {0}")]
    MissingWitness(String),
    #[error("unknown theorem {0}")]
    BadTheorem(String),
    #[error("i = {i} must satisfy 2 ≤ i ≤ p = {p}")]
    BadI { p: u64, i: u64 },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("group ring elements over C_{0} and C_{1} cannot be combined")]
    ModulusMismatch(usize, usize),
}

pub type Result<T> = std::result::Result<T, KummerError>;

fn check_prime(p: u64) -> Result<()> {
    if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p.is_multiple_of(d)) {
        return Err(KummerError::NotPrime(p));
    }
    Ok(())
}

/// `Σ c_i σ^i` in `Z[C_n]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupRingElem {
    n: usize,
    coeffs: Vec<i64>,
}

impl GroupRingElem {
    pub fn new(coeffs: Vec<i64>) -> GroupRingElem {
        assert!(!coeffs.is_empty(), "C_0 is not a group");
        GroupRingElem {
            n: coeffs.len(),
            coeffs,
        }
    }

    pub fn zero(n: usize) -> GroupRingElem {
        GroupRingElem::new(vec![0; n])
    }

    pub fn constant(n: usize, c: i64) -> GroupRingElem {
        let mut v = vec![0; n];
        v[0] = c;
        GroupRingElem::new(v)
    }

    pub fn one(n: usize) -> GroupRingElem {
        GroupRingElem::constant(n, 1)
    }

    /// `σ^k`
    pub fn sigma_pow(n: usize, k: i64) -> GroupRingElem {
        let mut v = vec![0; n];
        v[k.rem_euclid(n as i64) as usize] = 1;
        GroupRingElem::new(v)
    }

    /// `N = Σ σ^i`
    pub fn norm(n: usize) -> GroupRingElem {
        GroupRingElem::new(vec![1; n])
    }

    pub fn modulus(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    fn same(&self, other: &GroupRingElem) -> Result<()> {
        if self.n != other.n {
            return Err(KummerError::ModulusMismatch(self.n, other.n));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &GroupRingElem) -> Result<GroupRingElem> {
        self.same(other)?;
        Ok(GroupRingElem::new(
            self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        ))
    }

    pub fn try_mul(&self, other: &GroupRingElem) -> Result<GroupRingElem> {
        self.same(other)?;
        let n = self.n;
        let mut out = vec![0i64; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[(i + j) % n] += a * b;
            }
        }
        Ok(GroupRingElem::new(out))
    }

    pub fn scale(&self, k: i64) -> GroupRingElem {
        GroupRingElem::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn pow(&self, k: u32) -> GroupRingElem {
        (0..k).fold(GroupRingElem::one(self.n), |acc, _| &acc * self)
    }

    /// Coefficients reduced into `0..m`.
    pub fn reduce_mod(&self, m: i64) -> GroupRingElem {
        GroupRingElem::new(self.coeffs.iter().map(|c| c.rem_euclid(m)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl Add for &GroupRingElem {
    type Output = GroupRingElem;

    fn add(self, rhs: &GroupRingElem) -> GroupRingElem {
        self.try_add(rhs).expect("same modulus")
    }
}

impl Sub for &GroupRingElem {
    type Output = GroupRingElem;

    fn sub(self, rhs: &GroupRingElem) -> GroupRingElem {
        self + &rhs.scale(-1)
    }
}

impl Mul for &GroupRingElem {
    type Output = GroupRingElem;

    fn mul(self, rhs: &GroupRingElem) -> GroupRingElem {
        self.try_mul(rhs).expect("same modulus")
    }
}

impl fmt::Display for GroupRingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (i, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => write!(f, "σ")?,
                (1, _) => write!(f, "{a}σ")?,
                (_, 1) => write!(f, "σ^{i}")?,
                _ => write!(f, "{a}σ^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `θ = (p − 1) + (p − 2)σ + ⋯ + σ^{p−2}` in `Z[C_p]`.
pub fn theta_operator(p: u64) -> Result<GroupRingElem> {
    check_prime(p)?;
    Ok(GroupRingElem::new((0..p as i64).map(|i| p as i64 - 1 - i).collect()))
}

/// `(σ − 1)^k` in `Z[C_n]`.
pub fn sigma_minus_one_pow(n: usize, k: u32) -> GroupRingElem {
    (&GroupRingElem::sigma_pow(n, 1) - &GroupRingElem::one(n)).pow(k)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Base {
    /// a named element such as `omega`, `f`, `a1`
    Elem(String),
    /// the `degree`-th root of a named element
    Root { of: String, degree: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Exponent {
    Int(i64),
    /// `x^{Σ c_i σ^i} = ∏ σ^i(x)^{c_i}` with `σ` the named generator
    Ring { generator: String, elem: GroupRingElem },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordFactor {
    pub base: Base,
    pub exponent: Exponent,
}

impl WordFactor {
    pub fn elem(name: &str) -> WordFactor {
        WordFactor {
            base: Base::Elem(name.to_string()),
            exponent: Exponent::Int(1),
        }
    }

    fn root(of: &str, degree: u64, e: i64) -> WordFactor {
        WordFactor {
            base: Base::Root {
                of: of.to_string(),
                degree,
            },
            exponent: Exponent::Int(e),
        }
    }

    fn acted(name: &str, generator: &str, elem: GroupRingElem) -> WordFactor {
        WordFactor {
            base: Base::Elem(name.to_string()),
            exponent: Exponent::Ring {
                generator: generator.to_string(),
                elem,
            },
        }
    }
}

impl fmt::Display for WordFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.base {
            Base::Elem(s) => write!(f, "{s}")?,
            Base::Root { of, degree } => write!(f, "root{degree}({of})")?,
        }
        match &self.exponent {
            Exponent::Int(1) => Ok(()),
            Exponent::Int(e) => write!(f, "^{e}"),
            Exponent::Ring { generator, elem } => {
                let s = elem.to_string().replace('σ', generator);
                write!(f, "^({s})")
            }
        }
    }
}

/// `K(ᵖ√radicand)` over the previous layer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KummerLayer {
    pub radicand: Vec<WordFactor>,
    pub degree: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionExpr {
    /// the field the tower is built over
    pub over: String,
    pub layers: Vec<KummerLayer>,
    /// name of the free scalar ranging over `k^×`, if any
    pub free_scalar: Option<String>,
    /// norm condition the witness must satisfy
    pub condition: String,
}

impl fmt::Display for SolutionExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.over)?;
        for (i, l) in self.layers.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let word: Vec<String> = l.radicand.iter().map(|w| w.to_string()).collect();
            write!(f, "root{}({})", l.degree, word.join("*"))?;
        }
        write!(f, ")")?;
        if let Some(s) = &self.free_scalar {
            write!(f, ", {s} in k^x")?;
        }
        if !self.condition.is_empty() {
            write!(f, ", where {}", self.condition)?;
        }
        Ok(())
    }
}

/// All solutions from one: the top radicand times a free scalar `f`.
/// Idempotent, since `f·f′` is again a free scalar.
pub fn solution_family(base: &SolutionExpr) -> SolutionExpr {
    let mut out = base.clone();
    let name = out.free_scalar.clone().unwrap_or_else(|| "f".to_string());
    if let Some(top) = out.layers.first_mut() {
        let present = top
            .radicand
            .iter()
            .any(|w| w.base == Base::Elem(name.clone()));
        if !present {
            top.radicand.insert(0, WordFactor::elem(&name));
        }
        out.free_scalar = Some(name);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KummerTheorem {
    /// Heisenberg group `G₁` over `C_p × C_p`
    T4_1,
    /// `G₂` over `C_p × C_p`
    T4_2,
    /// `G₃` over `C_{p²} × C_p`
    T4_3,
    /// `G₄` over `C_{p²} × C_p`
    T4_4,
    /// `G₅` over `C_{p²} × C_p`, with `ζ_{p²} ∈ k`
    T4_5,
}

impl FromStr for KummerTheorem {
    type Err = KummerError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().replace(['_', '.'], "").as_str() {
            "T41" | "41" | "G1" => Ok(KummerTheorem::T4_1),
            "T42" | "42" | "G2" => Ok(KummerTheorem::T4_2),
            "T43" | "43" | "G3" => Ok(KummerTheorem::T4_3),
            "T44" | "44" | "G4" => Ok(KummerTheorem::T4_4),
            "T45" | "45" | "G5" => Ok(KummerTheorem::T4_5),
            _ => Err(KummerError::BadTheorem(s.to_string())),
        }
    }
}

impl KummerTheorem {
    /// The role of the norm witness: `omega`, `x` or `y`.
    pub fn witness_role(self) -> &'static str {
        match self {
            KummerTheorem::T4_1 | KummerTheorem::T4_2 | KummerTheorem::T4_3 => "omega",
            KummerTheorem::T4_4 => "x",
            KummerTheorem::T4_5 => "y",
        }
    }
}

/// The explicit solution of one of the `C_p × C_p` and `C_{p²} × C_p`
/// embedding problems. `witnesses` maps a role (`omega`, `x`, `y`) to the
/// name used in the output.
pub fn build_solution(
    theorem: KummerTheorem,
    p: u64,
    witnesses: &BTreeMap<String, String>,
) -> Result<SolutionExpr> {
    let theta = theta_operator(p)?;
    let role = theorem.witness_role();
    let w = witnesses
        .get(role)
        .filter(|s| !s.is_empty())
        .ok_or_else(|| KummerError::MissingWitness(role.to_string()))?;
    let (over, scalar, radicand, condition) = match theorem {
        KummerTheorem::T4_1 => (
            "K",
            "f",
            vec![WordFactor::acted(w, "sigma1", theta)],
            format!("N_K1/k({w}) = a2"),
        ),
        KummerTheorem::T4_2 => (
            "K",
            "f",
            vec![WordFactor::root("a1", p, -1), WordFactor::acted(w, "sigma1", theta)],
            format!("N_K1/k({w}) = a2*zeta"),
        ),
        KummerTheorem::T4_3 => (
            "L",
            "f2",
            vec![WordFactor::acted(w, "sigma1", theta)],
            format!("N_K1/k({w}) = a2"),
        ),
        KummerTheorem::T4_4 => (
            "L",
            "f2",
            vec![
                WordFactor::root("a2", p, 1),
                WordFactor::acted(w, "sigma2", theta.scale(-1)),
            ],
            format!("N_K2/k({w}) = a1*zeta"),
        ),
        KummerTheorem::T4_5 => (
            "L",
            "f",
            vec![WordFactor::root("a1", p * p, 1), WordFactor::acted(w, "sigma1", theta)],
            format!("N_K1/k({w}) = zeta_p2^-1*a2"),
        ),
    };
    let base = SolutionExpr {
        over: over.to_string(),
        layers: vec![KummerLayer { radicand, degree: p }],
        free_scalar: Some(scalar.to_string()),
        condition,
    };
    Ok(solution_family(&base))
}

/// The tower solving `E_i` for `2 ≤ i ≤ p` from `ω` with `N(ω) = b`.
pub fn minac_swallow_solution(p: u64, i: u64, omega: &str) -> Result<SolutionExpr> {
    check_prime(p)?;
    if i < 2 || i > p {
        return Err(KummerError::BadI { p, i });
    }
    let n = p as usize;
    let layer = |j: u64| KummerLayer {
        radicand: vec![WordFactor::acted(
            omega,
            "sigma",
            sigma_minus_one_pow(n, j as u32).reduce_mod(p as i64),
        )],
        degree: p,
    };
    let condition = format!("N({omega}) = b");
    if i == 2 {
        return Ok(SolutionExpr {
            over: "K".into(),
            layers: vec![layer(p - 2)],
            free_scalar: None,
            condition,
        });
    }
    let base = SolutionExpr {
        over: "K".into(),
        layers: (p - i..=p - 2).map(layer).collect(),
        free_scalar: Some("f".into()),
        condition,
    };
    Ok(solution_family(&base))
}

/// Inputs for the modular-extension witness check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModularWitness {
    /// caller has verified `σ(b₀)/b₀ = f x^p`
    pub relation_holds: bool,
    pub q: u64,
    pub p: u64,
    /// `c = f^{q/p} N_{K/k}(x)`
    pub c: FieldElem,
}

/// `c` as an element of `Q/Z` when it is a known root of unity.
fn root_of_unity_angle(c: &FieldElem) -> Option<Ratio<i64>> {
    match c {
        FieldElem::Rational(q) => {
            if *q == num_rational::BigRational::from_integer(1.into()) {
                Some(Ratio::from_integer(0))
            } else if *q == num_rational::BigRational::from_integer((-1).into()) {
                Some(Ratio::new(1, 2))
            } else {
                None
            }
        }
        FieldElem::ZetaPower { order, e } if *order > 0 => Some(Ratio::new(*e, *order as i64)),
        FieldElem::Product(v) => v.iter().try_fold(Ratio::from_integer(0), |acc, (f, k)| {
            Some(acc + root_of_unity_angle(f)? * *k)
        }),
        _ => None,
    }
}

/// `true` iff the relation holds, `c^p = 1` and `c ≠ 1`.
pub fn verify_witness_t410(data: &ModularWitness) -> bool {
    if !data.relation_holds || data.p == 0 {
        return false;
    }
    match root_of_unity_angle(&data.c) {
        Some(t) => {
            let frac = |x: Ratio<i64>| x - x.floor();
            let t = frac(t);
            t != Ratio::from_integer(0) && frac(t * data.p as i64) == Ratio::from_integer(0)
        }
        None => false,
    }
}

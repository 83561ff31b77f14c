//! Local Hilbert symbols over `Q` and the splitting test for quaternion
//! products.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_prime::nt_funcs;
use num_prime::FactorizationConfig;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Result, SymbolError, SymbolProduct};

/// Environment variable overriding the trial-division bound.
pub const FACTOR_BOUND_ENV: &str = "PGAL_FACTOR_BOUND";

const DEFAULT_FACTOR_BOUND: u64 = 1_000_000;

pub fn factor_bound() -> u64 {
    std::env::var(FACTOR_BOUND_ENV)
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_FACTOR_BOUND)
}

/// Prime factorization of `n`, plus any cofactors that could not be split.
pub(crate) fn factor(n: &BigUint) -> (BTreeMap<BigUint, usize>, Vec<BigUint>) {
    if n.is_zero() || n.is_one() {
        return (BTreeMap::new(), Vec::new());
    }
    let mut config = FactorizationConfig::default();
    config.td_limit = Some(factor_bound());
    let (primes, rest) = nt_funcs::factors(n.clone(), Some(config));
    (primes, rest.unwrap_or_default())
}

fn prime_divisors(q: &BigRational, into: &mut BTreeSet<BigUint>) -> Result<()> {
    for n in [q.numer(), q.denom()] {
        let (primes, rest) = factor(n.magnitude());
        if let Some(c) = rest.first() {
            return Err(SymbolError::FactorizationFailed(c.to_string()));
        }
        into.extend(primes.into_keys());
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Infinity,
    Prime(BigUint),
}

impl Place {
    pub fn prime(p: u64) -> Place {
        Place::Prime(p.into())
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => write!(f, "inf"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for Place {
    type Err = SymbolError;

    fn from_str(s: &str) -> Result<Place> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Place::Infinity),
            t => t
                .parse::<BigUint>()
                .map(Place::Prime)
                .map_err(|_| SymbolError::Parse(s.to_string())),
        }
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Place {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Place, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `(ℓ-adic valuation, unit part)` of a nonzero integer.
fn split_valuation(n: &BigInt, l: &BigInt) -> (u64, BigInt) {
    let mut n = n.clone();
    let mut v = 0;
    while n.is_multiple_of(l) {
        n /= l;
        v += 1;
    }
    (v, n)
}

/// `α = v_ℓ(q)` and an integer in the unit square class of `q / ℓ^α`.
fn valuation(q: &BigRational, l: &BigInt) -> (i64, BigInt) {
    let (vn, un) = split_valuation(q.numer(), l);
    let (vd, ud) = split_valuation(q.denom(), l);
    (vn as i64 - vd as i64, un * ud)
}

fn legendre(u: &BigInt, l: &BigInt) -> i8 {
    let r = u.mod_floor(l);
    let e = (l - 1u8) / 2u8;
    if r.modpow(&e, l).is_one() {
        1
    } else {
        -1
    }
}

fn mod8(u: &BigInt) -> u64 {
    u.mod_floor(&BigInt::from(8)).to_u64().expect("below 8")
}

/// `ε(u) = (u − 1)/2 mod 2`
fn eps(u: &BigInt) -> u64 {
    ((mod8(u) - 1) / 2) % 2
}

/// `ω(u) = (u² − 1)/8 mod 2`
fn omega(u: &BigInt) -> u64 {
    let r = mod8(u);
    ((r * r - 1) / 8) % 2
}

/// The Hilbert symbol `(a, b)_v ∈ {±1}`.
pub fn hilbert_local(a: &BigRational, b: &BigRational, place: &Place) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(SymbolError::ZeroEntry);
    }
    let l = match place {
        Place::Infinity => {
            return Ok(if a.is_negative() && b.is_negative() { -1 } else { 1 });
        }
        Place::Prime(l) => l,
    };
    if !nt_funcs::is_prime(l, None).probably() {
        return Err(SymbolError::NotPrime(l.to_string()));
    }
    let l = BigInt::from(l.clone());
    let (alpha, u) = valuation(a, &l);
    let (beta, v) = valuation(b, &l);
    let (alpha, beta) = (alpha.rem_euclid(2) as u64, beta.rem_euclid(2) as u64);
    if l == BigInt::from(2) {
        let e = eps(&u) * eps(&v) + alpha * omega(&v) + beta * omega(&u);
        return Ok(if e.is_multiple_of(2) { 1 } else { -1 });
    }
    let e_l = ((&l - 1u8) / 2u8).is_odd() as u64;
    let mut s: i8 = if (alpha * beta * e_l) % 2 == 1 { -1 } else { 1 };
    if beta == 1 {
        s *= legendre(&u, &l);
    }
    if alpha == 1 {
        s *= legendre(&v, &l);
    }
    Ok(s)
}

/// Places where the quaternion product `P` (with `p = 2`) does not split.
pub fn ramified_places(prod: &SymbolProduct) -> Result<Vec<Place>> {
    if prod.p() != 2 {
        return Err(SymbolError::OddPrime(prod.p()));
    }
    if let Some(o) = prod.opaque_factors().iter().find(|o| o.exp % 2 == 1) {
        return Err(SymbolError::OpaqueFactorPresent(o.name.clone()));
    }
    let mut pairs = Vec::new();
    let mut primes = BTreeSet::from([BigUint::from(2u8)]);
    for f in prod.factors().iter().filter(|f| f.exp % 2 == 1) {
        let a = f
            .left
            .as_rational()
            .ok_or_else(|| SymbolError::NonRationalEntry(f.left.to_string()))?;
        let b = f
            .right
            .as_rational()
            .ok_or_else(|| SymbolError::NonRationalEntry(f.right.to_string()))?;
        if a.is_zero() || b.is_zero() {
            return Err(SymbolError::ZeroEntry);
        }
        prime_divisors(&a, &mut primes)?;
        prime_divisors(&b, &mut primes)?;
        pairs.push((a, b));
    }
    let places = std::iter::once(Place::Infinity).chain(primes.into_iter().map(Place::Prime));
    let mut out = Vec::new();
    for v in places {
        let mut s = 1;
        for (a, b) in &pairs {
            s *= hilbert_local(a, b, &v)?;
        }
        if s == -1 {
            out.push(v);
        }
    }
    Ok(out)
}

/// Whether the class of `P` in `Br_2(Q)` is trivial.
pub fn splits_over_q(prod: &SymbolProduct) -> Result<bool> {
    Ok(ramified_places(prod)?.is_empty())
}

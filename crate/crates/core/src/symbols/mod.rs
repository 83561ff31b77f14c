//! Formal products of `p`-cyclic algebra symbols `(a, b; ζ)`.
//!
//! Entries are rationals, named indeterminates, roots of unity or products
//! of those. [`SymbolProduct::normalize`] rewrites a product into a canonical
//! form using only exact identities: bilinearity, `p`-torsion, `(a, a) =
//! (a, −1)`, `(b, a) = (a, b)⁻¹` and `(a, 1 − a) = 1` for rationals. Equal
//! canonical forms mean equal Brauer classes; the converse fails in general.
//! For `p = 2` classes over `Q` are decided by [`splits_over_q`].

mod atoms;
mod cor;
mod local;
mod parse;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use cor::{projection_corestriction, quad_corestriction};
pub use local::{factor_bound, hilbert_local, ramified_places, splits_over_q, Place, FACTOR_BOUND_ENV};

use atoms::Atom;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymbolError {
    #[error("symbol entries must be nonzero")]
    ZeroEntry,
    #[error("α₀ and α₁ must be nonzero")]
    ZeroAlpha,
    #[error("a is a square in Q, so Q(√a) is not quadratic")]
    SquareA,
    #[error("α₀ and α₁ are both rational multiples of √a; no formula applies")]
    DegenerateAlphas,
    #[error("entry {0} is not rational")]
    NonRationalEntry(String),
    #[error("opaque factor {0} blocks evaluation")]
    OpaqueFactorPresent(String),
    #[error("could not factor {0} within the configured bound")]
    FactorizationFailed(String),
    #[error("{0} is not a prime")]
    NotPrime(String),
    #[error("splitting over Q is only decided for p = 2, got p = {0}")]
    OddPrime(u64),
    #[error("prime mismatch: expected {expected}, found {found}")]
    PrimeMismatch { expected: u64, found: u64 },
    #[error("cannot parse {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, SymbolError>;

/// An entry of a symbol.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FieldElem {
    #[serde(rename = "rat", with = "rat_string")]
    Rational(BigRational),
    #[serde(rename = "ind")]
    Indeterminate(String),
    /// `ζ_order^e`
    #[serde(rename = "zeta")]
    ZetaPower {
        #[serde(rename = "p")]
        order: u64,
        e: i64,
    },
    /// Flattened, sorted, at most one rational coefficient.
    #[serde(rename = "prod")]
    Product(Vec<(FieldElem, i64)>),
}

mod rat_string {
    use num_rational::BigRational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&q.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse::rational(&s).ok_or_else(|| D::Error::custom(format!("bad rational {s}")))
    }
}

impl FieldElem {
    pub fn int(n: i64) -> FieldElem {
        FieldElem::Rational(BigRational::from_integer(n.into()))
    }

    pub fn rational(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<FieldElem> {
        let (num, den) = (num.into(), den.into());
        if num.is_zero() || den.is_zero() {
            return Err(SymbolError::ZeroEntry);
        }
        Ok(FieldElem::Rational(BigRational::new(num, den)))
    }

    pub fn ind(name: &str) -> FieldElem {
        FieldElem::Indeterminate(name.to_string())
    }

    /// `ζ_order^e`
    pub fn zeta(order: u64, e: i64) -> FieldElem {
        FieldElem::ZetaPower { order, e }
    }

    /// Multiplies the factors out, flattening nested products.
    pub fn product(parts: Vec<(FieldElem, i64)>) -> FieldElem {
        let mut coeff = BigRational::one();
        let mut rest: BTreeMap<FieldElem, i64> = BTreeMap::new();
        fn walk(
            e: FieldElem,
            k: i64,
            coeff: &mut BigRational,
            rest: &mut BTreeMap<FieldElem, i64>,
        ) {
            match e {
                FieldElem::Rational(q) => {
                    let q = if k < 0 { q.recip() } else { q };
                    *coeff *= num_traits::pow(q, k.unsigned_abs() as usize);
                }
                FieldElem::Product(v) => {
                    for (f, j) in v {
                        walk(f, j * k, coeff, rest);
                    }
                }
                other => *rest.entry(other).or_insert(0) += k,
            }
        }
        for (e, k) in parts {
            walk(e, k, &mut coeff, &mut rest);
        }
        let mut out: Vec<(FieldElem, i64)> = Vec::new();
        if !coeff.is_one() {
            out.push((FieldElem::Rational(coeff), 1));
        }
        out.extend(rest.into_iter().filter(|(_, k)| *k != 0));
        match out.len() {
            0 => FieldElem::int(1),
            1 if out[0].1 == 1 => out.pop().unwrap().0,
            _ => FieldElem::Product(out),
        }
    }

    pub fn mul(&self, other: &FieldElem) -> FieldElem {
        FieldElem::product(vec![(self.clone(), 1), (other.clone(), 1)])
    }

    pub fn pow(&self, k: i64) -> FieldElem {
        FieldElem::product(vec![(self.clone(), k)])
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElem::Rational(q) => q.is_zero(),
            FieldElem::Product(v) => v.iter().any(|(e, _)| e.is_zero()),
            _ => false,
        }
    }

    /// The rational value, if the element has one. `ζ_2 = −1`.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            FieldElem::Rational(q) => Some(q.clone()),
            FieldElem::Indeterminate(_) => None,
            FieldElem::ZetaPower { order, e } => {
                let e = e.rem_euclid((*order).max(1) as i64) as u64;
                if e == 0 {
                    Some(BigRational::one())
                } else if 2 * e == *order {
                    Some(-BigRational::one())
                } else {
                    None
                }
            }
            FieldElem::Product(v) => v.iter().try_fold(BigRational::one(), |acc, (e, k)| {
                let q = e.as_rational()?;
                if q.is_zero() {
                    return None;
                }
                let q = if *k < 0 { q.recip() } else { q };
                Some(acc * num_traits::pow(q, k.unsigned_abs() as usize))
            }),
        }
    }
}

impl From<i64> for FieldElem {
    fn from(n: i64) -> Self {
        FieldElem::int(n)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::Rational(q) => write!(f, "{q}"),
            FieldElem::Indeterminate(s) => write!(f, "{s}"),
            FieldElem::ZetaPower { order, e } => {
                write!(f, "zeta{order}")?;
                if *e != 1 {
                    write!(f, "^{e}")?;
                }
                Ok(())
            }
            FieldElem::Product(v) => {
                for (i, (e, k)) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    let neg = matches!(e, FieldElem::Rational(q) if q.is_negative());
                    if neg && *k != 1 {
                        write!(f, "({e})")?;
                    } else {
                        write!(f, "{e}")?;
                    }
                    if *k != 1 {
                        write!(f, "^{k}")?;
                    }
                }
                Ok(())
            }
        }
    }
}

impl std::str::FromStr for FieldElem {
    type Err = SymbolError;

    /// `ζ` without an explicit order is not accepted here; see
    /// [`SymbolProduct::parse`].
    fn from_str(s: &str) -> Result<FieldElem> {
        parse::field_elem(s, None)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolFactor {
    pub left: FieldElem,
    pub right: FieldElem,
    pub exp: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpaqueFactor {
    pub name: String,
    pub exp: u64,
}

/// A formal product of symbols `(a, b; ζ_p)` and named opaque classes in
/// `Br_p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolProduct {
    p: u64,
    factors: Vec<SymbolFactor>,
    #[serde(default)]
    opaque: Vec<OpaqueFactor>,
}

impl SymbolProduct {
    pub fn trivial(p: u64) -> SymbolProduct {
        SymbolProduct {
            p,
            factors: Vec::new(),
            opaque: Vec::new(),
        }
    }

    /// A single opaque class such as `[K,H,res_Hγ]`.
    pub fn opaque(name: &str, p: u64) -> SymbolProduct {
        SymbolProduct {
            p,
            factors: Vec::new(),
            opaque: vec![OpaqueFactor {
                name: name.to_string(),
                exp: 1 % p,
            }],
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn factors(&self) -> &[SymbolFactor] {
        &self.factors
    }

    pub fn opaque_factors(&self) -> &[OpaqueFactor] {
        &self.opaque
    }

    pub fn mul(&self, other: &SymbolProduct) -> Result<SymbolProduct> {
        if self.p != other.p {
            return Err(SymbolError::PrimeMismatch {
                expected: self.p,
                found: other.p,
            });
        }
        let mut out = self.clone();
        out.factors.extend(other.factors.iter().cloned());
        out.opaque.extend(other.opaque.iter().cloned());
        Ok(out)
    }

    pub fn pow(&self, k: i64) -> SymbolProduct {
        let k = k.rem_euclid(self.p as i64) as u64;
        let mut out = self.clone();
        for f in &mut out.factors {
            f.exp = (f.exp * k) % self.p;
        }
        for o in &mut out.opaque {
            o.exp = (o.exp * k) % self.p;
        }
        out
    }

    pub fn inverse(&self) -> SymbolProduct {
        self.pow(-1)
    }

    /// Canonical form; see the module documentation.
    pub fn normalize(&self) -> SymbolProduct {
        let p = self.p;
        let mut pairs: BTreeMap<(Atom, Atom), u64> = BTreeMap::new();
        for f in &self.factors {
            if f.exp % p == 0 || steinberg(&f.left, &f.right) {
                continue;
            }
            let left = atoms::decompose(&f.left, p);
            let right = atoms::decompose(&f.right, p);
            for (a, i) in &left {
                for (b, j) in &right {
                    let e = (i * j % p) * (f.exp % p) % p;
                    if e != 0 {
                        add_pair(&mut pairs, a.clone(), b.clone(), e, p);
                    }
                }
            }
        }
        let factors = pairs
            .into_iter()
            .filter(|(_, e)| *e != 0)
            .map(|((a, b), exp)| SymbolFactor {
                left: a.to_elem(),
                right: b.to_elem(),
                exp,
            })
            .collect();
        let mut opaque: BTreeMap<String, u64> = BTreeMap::new();
        for o in &self.opaque {
            let e = opaque.entry(o.name.clone()).or_insert(0);
            *e = (*e + o.exp) % p;
        }
        SymbolProduct {
            p,
            factors,
            opaque: opaque
                .into_iter()
                .filter(|(_, e)| *e != 0)
                .map(|(name, exp)| OpaqueFactor { name, exp })
                .collect(),
        }
    }

    /// `true` when the canonical form is empty. A `false` answer does not
    /// prove the class is nontrivial.
    pub fn is_trivial(&self) -> bool {
        let n = self.normalize();
        n.factors.is_empty() && n.opaque.is_empty()
    }

    /// Equal canonical forms.
    pub fn same_class(&self, other: &SymbolProduct) -> bool {
        self.p == other.p && self.normalize() == other.normalize()
    }

    /// Replaces the opaque class `name` by a concrete product.
    pub fn substitute(&self, name: &str, value: &SymbolProduct) -> Result<SymbolProduct> {
        let mut out = SymbolProduct {
            p: self.p,
            factors: self.factors.clone(),
            opaque: Vec::new(),
        };
        for o in &self.opaque {
            if o.name == name {
                out = out.mul(&value.pow(o.exp as i64))?;
            } else {
                out.opaque.push(o.clone());
            }
        }
        Ok(out)
    }

    /// Parses products such as `(2,-1)(3,-1)`, `(a1,zeta;zeta)^2` or
    /// `[K,H,res](b,a1^2;zeta)`. `zeta` means `ζ_p`.
    pub fn parse(p: u64, expr: &str) -> Result<SymbolProduct> {
        parse::symbol_product(p, expr)
    }
}

/// `(a, b; ζ)` as a one-factor product.
pub fn symbol(a: FieldElem, b: FieldElem, p: u64) -> Result<SymbolProduct> {
    if a.is_zero() || b.is_zero() {
        return Err(SymbolError::ZeroEntry);
    }
    Ok(SymbolProduct {
        p,
        factors: vec![SymbolFactor {
            left: a,
            right: b,
            exp: 1 % p,
        }],
        opaque: Vec::new(),
    })
}

/// Representative of `e` modulo `p`-th powers, built from its atoms.
pub fn power_class(e: &FieldElem, p: u64) -> FieldElem {
    FieldElem::product(
        atoms::decompose(e, p)
            .into_iter()
            .map(|(a, k)| (a.to_elem(), k as i64))
            .collect(),
    )
}

/// `(a, 1 − a) = 1` for rational `a`.
fn steinberg(a: &FieldElem, b: &FieldElem) -> bool {
    match (a.as_rational(), b.as_rational()) {
        (Some(x), Some(y)) => (x + y).is_one(),
        _ => false,
    }
}

fn add_pair(pairs: &mut BTreeMap<(Atom, Atom), u64>, a: Atom, b: Atom, e: u64, p: u64) {
    if a == b {
        // (a, a) = (a, −1), which is trivial for odd p
        if p == 2 && a != Atom::MinusOne {
            add_pair(pairs, Atom::MinusOne, a, e, p);
        } else if p == 2 {
            let slot = pairs.entry((a, b)).or_insert(0);
            *slot = (*slot + e) % p;
        }
        return;
    }
    let (key, e) = if a < b { ((a, b), e) } else { ((b, a), (p - e) % p) };
    if atoms::pair_is_steinberg(&key.0, &key.1) {
        return;
    }
    let slot = pairs.entry(key).or_insert(0);
    *slot = (*slot + e) % p;
}

impl fmt::Display for SymbolProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() && self.opaque.is_empty() {
            return write!(f, "1");
        }
        for o in &self.opaque {
            write!(f, "{}", o.name)?;
            if o.exp != 1 {
                write!(f, "^{}", o.exp)?;
            }
        }
        for s in &self.factors {
            let show = |e: &FieldElem| match e {
                FieldElem::ZetaPower { order, e: 1 } if *order == self.p => "zeta".to_string(),
                other => other.to_string(),
            };
            if self.p == 2 {
                write!(f, "({},{})", show(&s.left), show(&s.right))?;
            } else {
                write!(f, "({},{};zeta)", show(&s.left), show(&s.right))?;
            }
            if s.exp != 1 {
                write!(f, "^{}", s.exp)?;
            }
        }
        Ok(())
    }
}

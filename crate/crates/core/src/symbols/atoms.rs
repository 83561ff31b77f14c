//! Multiplicatively independent building blocks of symbol entries.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed};

use super::local::factor;
use super::FieldElem;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum Atom {
    MinusOne,
    Prime(BigUint),
    /// cofactor that could not be split within the bound
    Composite(BigUint),
    Zeta(u64),
    Ind(String),
}

impl Atom {
    pub(crate) fn to_elem(&self) -> FieldElem {
        match self {
            Atom::MinusOne => FieldElem::int(-1),
            Atom::Prime(n) | Atom::Composite(n) => {
                FieldElem::Rational(BigInt::from_biguint(Sign::Plus, n.clone()).into())
            }
            Atom::Zeta(order) => FieldElem::zeta(*order, 1),
            Atom::Ind(s) => FieldElem::Indeterminate(s.clone()),
        }
    }
}

/// `(−1, 2)`: the only atom pair `(a, b)` with `a + b = 1`.
pub(crate) fn pair_is_steinberg(a: &Atom, b: &Atom) -> bool {
    matches!((a, b), (Atom::MinusOne, Atom::Prime(q)) if *q == BigUint::from(2u8))
}

fn push(out: &mut BTreeMap<Atom, i64>, a: Atom, k: i64) {
    *out.entry(a).or_insert(0) += k;
}

fn walk(e: &FieldElem, k: i64, out: &mut BTreeMap<Atom, i64>) {
    match e {
        FieldElem::Rational(q) => {
            if q.is_negative() {
                push(out, Atom::MinusOne, k);
            }
            for (n, sign) in [(q.numer(), 1), (q.denom(), -1)] {
                let (primes, rest) = factor(n.magnitude());
                for (pr, m) in primes {
                    push(out, Atom::Prime(pr), sign * k * m as i64);
                }
                for c in rest {
                    push(out, Atom::Composite(c), sign * k);
                }
            }
        }
        FieldElem::Indeterminate(s) => push(out, Atom::Ind(s.clone()), k),
        FieldElem::ZetaPower { order, e } => {
            let n = (*order).max(1);
            let e = e.rem_euclid(n as i64) as u64;
            if e == 0 {
                return;
            }
            if 2 * e == n {
                push(out, Atom::MinusOne, k);
                return;
            }
            let g = e.gcd(&n);
            push(out, Atom::Zeta(n / g), k * (e / g) as i64);
        }
        FieldElem::Product(v) => {
            for (f, j) in v {
                walk(f, k * j, out);
            }
        }
    }
}

/// Atoms of `e` with exponents reduced modulo `p`; `−1` is dropped for odd
/// `p`, where it is a `p`-th power.
pub(crate) fn decompose(e: &FieldElem, p: u64) -> Vec<(Atom, u64)> {
    let mut out = BTreeMap::new();
    walk(e, 1, &mut out);
    out.into_iter()
        .filter(|(a, _)| p == 2 || *a != Atom::MinusOne)
        .map(|(a, k)| (a, k.rem_euclid(p as i64) as u64))
        .filter(|(a, k)| *k != 0 && !matches!(a, Atom::Prime(n) | Atom::Composite(n) if n.is_one()))
        .collect()
}

//! Corestriction of symbols from a quadratic extension.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{symbol, FieldElem, Result, SymbolError, SymbolProduct};

/// `cor(δ, b; ζ) = (N(δ), b; ζ)`, with the norm supplied by the caller.
pub fn projection_corestriction(norm_of_delta: FieldElem, b: FieldElem, p: u64) -> Result<SymbolProduct> {
    symbol(norm_of_delta, b, p)
}

fn is_square(q: &BigRational) -> bool {
    if q.is_negative() {
        return false;
    }
    let sq = |n: &num_bigint::BigInt| {
        let r = n.sqrt();
        &r * &r == *n
    };
    sq(q.numer()) && sq(q.denom())
}

/// `cor_{k(√a)/k}(α₀, α₁)` for `αᵢ = aᵢ + bᵢ√a`, as a quaternion product
/// over `k = Q`. The first applicable case wins:
///
/// 1. `b_{1−i} = 0`: `(a_{1−i}, aᵢ² − a bᵢ²)`
/// 2. `a_{1−i}bᵢ − aᵢb_{1−i} = 0`: `(−aᵢa_{1−i}, aᵢ² − a bᵢ²)`
/// 3. otherwise `(a₀² − ab₀², b₀(a₁b₀ − a₀b₁))(a₁² − ab₁², b₁(a₀b₁ − a₁b₀))`
pub fn quad_corestriction(
    a: &BigRational,
    a0: &BigRational,
    b0: &BigRational,
    a1: &BigRational,
    b1: &BigRational,
) -> Result<SymbolProduct> {
    if (a0.is_zero() && b0.is_zero()) || (a1.is_zero() && b1.is_zero()) {
        return Err(SymbolError::ZeroAlpha);
    }
    if a.is_zero() || is_square(a) {
        return Err(SymbolError::SquareA);
    }
    let alpha = [(a0, b0), (a1, b1)];
    let norm = |i: usize| alpha[i].0 * alpha[i].0 - a * alpha[i].1 * alpha[i].1;
    let elem = |q: BigRational| FieldElem::Rational(q);
    for i in 0..2 {
        if alpha[1 - i].1.is_zero() {
            return symbol(elem(alpha[1 - i].0.clone()), elem(norm(i)), 2);
        }
    }
    let cross = a1 * b0 - a0 * b1;
    if cross.is_zero() {
        if a0.is_zero() {
            return Err(SymbolError::DegenerateAlphas);
        }
        return symbol(elem(-(a0 * a1)), elem(norm(0)), 2);
    }
    symbol(elem(norm(0)), elem(b0 * &cross), 2)?.mul(&symbol(elem(norm(1)), elem(-(b1 * &cross)), 2)?)
}

#[cfg(test)]
mod tests {
    use super::super::splits_over_q;
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn case_one() {
        let s = quad_corestriction(&q(2), &q(1), &q(1), &q(3), &q(0)).unwrap();
        assert_eq!(s, symbol(3.into(), (-1).into(), 2).unwrap());
        assert!(!splits_over_q(&s).unwrap());
        assert!(quad_corestriction(&q(2), &q(1), &q(0), &q(1), &q(0)).unwrap().is_trivial());
    }

    #[test]
    fn case_two() {
        let s = quad_corestriction(&q(5), &q(1), &q(1), &q(2), &q(2)).unwrap();
        assert_eq!(s, symbol((-2).into(), (-4).into(), 2).unwrap());
        assert!(s.same_class(&symbol((-2).into(), (-1).into(), 2).unwrap()));
    }

    #[test]
    fn errors() {
        assert_eq!(
            quad_corestriction(&q(4), &q(1), &q(1), &q(1), &q(0)),
            Err(SymbolError::SquareA)
        );
        assert_eq!(
            quad_corestriction(&q(2), &q(0), &q(0), &q(1), &q(0)),
            Err(SymbolError::ZeroAlpha)
        );
        assert_eq!(
            quad_corestriction(&q(2), &q(0), &q(1), &q(0), &q(3)),
            Err(SymbolError::DegenerateAlphas)
        );
    }
}

use num_bigint::BigUint;
use pgal::fpg::{
    count_solutions, delta, ei_solvability, mss_edges, mss_quotient, p_binomial, solvable, FpGModule, IInvariant,
    NormData, SolutionCount,
};
use proptest::prelude::*;

fn module(p: u64, n: u32, lengths: &[u64]) -> FpGModule {
    FpGModule::from_summands(p, n, lengths).unwrap()
}

#[test]
fn i_invariant_parses() {
    assert_eq!("-inf".parse::<IInvariant>().unwrap(), IInvariant::NegInfinity);
    assert_eq!("2".parse::<IInvariant>().unwrap(), IInvariant::Level(2));
    assert!("x".parse::<IInvariant>().is_err());
}

#[test]
fn summand_lengths_are_bounded() {
    assert!(FpGModule::from_summands(2, 2, &[5]).is_err());
    assert!(FpGModule::from_summands(2, 2, &[0]).is_err());
    assert!(FpGModule::from_summands(4, 1, &[1]).is_err());
    assert_eq!(module(3, 2, &[9, 4, 4]).dimension(), 17);
}

#[test]
fn mss_data() {
    assert_eq!(mss_quotient(3, 2, 2).unwrap().multiplicity(3), 1);
    assert!(mss_quotient(5, 2, 2).is_err());
    assert_eq!(mss_edges(2, 2).unwrap(), vec![(3, 4)]);
    assert_eq!(mss_edges(3, 1).unwrap(), vec![(2, 3)]);
    assert_eq!(ei_solvability(5, false), vec![false; 4]);
}

#[test]
fn trivial_module_has_one_solution() {
    let z = FpGModule::zero(2, 2).unwrap();
    let nd = NormData::new(2, 2, &[1, 1, 1], IInvariant::NegInfinity, true).unwrap();
    assert!(solvable(&z, &nd).unwrap());
    assert_eq!(count_solutions(&z, &nd).unwrap(), SolutionCount::Finite(1u32.into()));
}

#[test]
fn mismatched_data_is_rejected() {
    let a = module(3, 1, &[2]);
    let nd = NormData::new(2, 2, &[1, 1, 1], IInvariant::NegInfinity, true).unwrap();
    assert!(solvable(&a, &nd).is_err());
}

/// Pascal-type recursion for the Gaussian binomial.
fn pascal(n: i64, m: i64, p: u64) -> BigUint {
    if m < 0 || n < 0 || m > n {
        return BigUint::from(0u32);
    }
    if m == 0 || m == n {
        return BigUint::from(1u32);
    }
    pascal(n - 1, m - 1, p) + BigUint::from(p).pow(m as u32) * pascal(n - 1, m, p)
}

fn module_strategy() -> impl Strategy<Value = (u64, u32, Vec<u64>)> {
    prop::sample::select(vec![(2u64, 2u32), (2, 3), (3, 1), (3, 2), (5, 1)]).prop_flat_map(|(p, n)| {
        let q = p.pow(n);
        (Just(p), Just(n), prop::collection::vec(1..=q, 0..5))
    })
}

proptest! {
    #[test]
    fn p_binomial_matches_pascal(n in 0i64..12, m in 0i64..12, p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        prop_assert_eq!(p_binomial(n, m, p), pascal(n, m, p));
        prop_assert_eq!(p_binomial(n, m, p), p_binomial(n, n - m, p));
    }

    #[test]
    fn delta_is_non_increasing((p, n, lengths) in module_strategy()) {
        let a = module(p, n, &lengths);
        let q = p.pow(n);
        let d: Vec<u64> = (1..=q + 1).map(|i| delta(&a, i).unwrap()).collect();
        prop_assert!(d.windows(2).all(|w| w[0] >= w[1]));
        prop_assert_eq!(d[0] as usize, lengths.len());
        prop_assert_eq!(d[q as usize], 0);
        prop_assert_eq!(d.iter().sum::<u64>(), a.dimension());
    }

    #[test]
    fn solvability_is_monotone_in_dims((p, n, lengths) in module_strategy(), extra in prop::collection::vec(0u64..4, 4)) {
        let a = module(p, n, &lengths);
        let dims: Vec<u64> = extra[..=n as usize].to_vec();
        let bigger: Vec<u64> = dims.iter().map(|d| d + 1).collect();
        let nd = NormData::new(p, n, &dims, IInvariant::NegInfinity, true).unwrap();
        let nd2 = NormData::new(p, n, &bigger, IInvariant::NegInfinity, true).unwrap();
        if solvable(&a, &nd).unwrap() {
            prop_assert!(solvable(&a, &nd2).unwrap());
            // no indicator terms at i(K/k) = −∞, so every factor is positive
            let count = count_solutions(&a, &nd).unwrap();
            prop_assert_ne!(count, SolutionCount::Finite(0u32.into()));
        } else {
            prop_assert!(count_solutions(&a, &nd).is_err());
        }
    }
}

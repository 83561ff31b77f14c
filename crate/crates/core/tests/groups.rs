use std::sync::Arc;

use pgal::group::{
    build_group, center, find_isomorphism, is_isomorphic, min_generators, normal_subgroups, quotient,
    structure_invariants, subgroups_of_index2, CatalogSpec, Group, GroupHom, Subgroup,
};
use proptest::prelude::*;

fn group(spec: &str) -> Arc<Group> {
    Arc::new(build_group(&spec.parse().unwrap()).unwrap())
}

#[test]
fn catalog_orders() {
    for (spec, order) in [
        ("C:12", 12),
        ("E:p=3,r=2", 9),
        ("D:32", 32),
        ("G7:p=3", 81),
        ("Mmod:p=3,n=4", 81),
        ("Mext:v=zz,p=3,n=3", 81),
        ("MSS:p=2,n=2,j=3", 32),
        ("Q:8xC:3", 24),
    ] {
        let s: CatalogSpec = spec.parse().unwrap();
        assert_eq!(s.order().unwrap(), order, "{spec}");
        assert_eq!(build_group(&s).unwrap().order() as u64, order, "{spec}");
    }
}

#[test]
fn spec_display_round_trips() {
    for spec in ["C:4", "E:p=2,r=3", "SD:16", "G5:p=2", "Mext:v=1z,p=2,n=4", "D:8xC:2"] {
        let s: CatalogSpec = spec.parse().unwrap();
        assert_eq!(s.to_string().parse::<CatalogSpec>().unwrap(), s);
    }
}

#[test]
fn bad_specs_are_rejected() {
    for spec in ["", "C:0", "D:12", "Q:4", "G1:p=4", "Mmod:p=2,n=2", "X:3"] {
        assert!(spec.parse::<CatalogSpec>().and_then(|s| build_group(&s)).is_err(), "{spec}");
    }
}

#[test]
fn json_round_trip_keeps_names() {
    let g = group("Q:16");
    let text = serde_json::to_string(&*g).unwrap();
    let back: Group = serde_json::from_str(&text).unwrap();
    assert_eq!(back, *g);
    assert!(back.generator("sigma").is_some());
}

#[test]
fn non_associative_tables_are_rejected() {
    let text = r#"{"order":3,"table":[[0,1,2],[1,0,2],[2,2,0]],"generators":[]}"#;
    assert!(serde_json::from_str::<Group>(text).is_err());
}

#[test]
fn quaternion_structure() {
    let g = group("Q:8");
    assert_eq!(center(&g).order(), 2);
    assert_eq!(min_generators(&g), 2);
    assert_eq!(subgroups_of_index2(&g).len(), 3);
    assert_eq!(normal_subgroups(&g).len(), 6);
    assert_eq!(g.exponent(), 4);
    let inv = structure_invariants(&g);
    assert_eq!((inv.center.order(), inv.exponent, inv.min_generators), (2, 4, 2));
}

#[test]
fn dihedral_modulo_center_is_klein() {
    let g = group("D:8");
    let (q, proj) = quotient(&g, &center(&g)).unwrap();
    assert!(is_isomorphic(&q, &group("E:p=2,r=2")).unwrap());
    assert!(proj.is_surjective());
    assert_eq!(proj.kernel().order(), 2);
    assert!(q.generator("sigma").is_some() && q.generator("tau").is_some());
}

#[test]
fn isomorphism_separates_order_16() {
    let specs = ["D:16", "SD:16", "Q:16", "M:16", "C:8xC:2", "D:8xC:2", "Q:8xC:2", "C:4xC:4"];
    for (i, a) in specs.iter().enumerate() {
        for (j, b) in specs.iter().enumerate() {
            assert_eq!(is_isomorphic(&group(a), &group(b)).unwrap(), i == j, "{a} vs {b}");
        }
    }
}

#[test]
fn found_isomorphism_is_a_homomorphism() {
    let a = group("G1:p=3");
    let b = group("E:p=3,r=1xC:3").clone();
    assert!(find_isomorphism(&a, &b).unwrap().is_none());
    let m = group("Mmod:p=2,n=4");
    let m16 = group("M:16");
    let map = find_isomorphism(&m, &m16).unwrap().expect("isomorphic");
    assert!(GroupHom::new(m.clone(), m16.clone(), map).is_ok());
}

#[test]
fn subgroup_validation() {
    let g = group("C:4");
    assert!(Subgroup::new(&g, vec![0, 1]).is_err());
    let s = Subgroup::new(&g, vec![0, g.pow(1, 2)]).unwrap();
    assert_eq!(s.index_in_parent(), 2);
}

fn small_spec() -> impl Strategy<Value = String> {
    prop_oneof![
        (1u64..13).prop_map(|n| format!("C:{n}")),
        Just("D:8".to_string()),
        Just("Q:8".to_string()),
        Just("SD:16".to_string()),
        Just("G1:p=3".to_string()),
        Just("G2:p=3".to_string()),
        Just("G6:p=2".to_string()),
        Just("Mext:v=zz,p=2,n=3".to_string()),
        (1u64..5, 1u64..5).prop_map(|(a, b)| format!("C:{a}xC:{b}")),
    ]
}

proptest! {
    #[test]
    fn tables_satisfy_group_axioms(spec in small_spec(), seed in any::<u64>()) {
        let g = group(&spec);
        let n = g.order();
        let pick = |k: u64| (seed.rotate_left(k as u32 * 7) % n as u64) as usize;
        let (a, b, c) = (pick(1), pick(2), pick(3));
        prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
        prop_assert_eq!(g.mul(a, g.inv(a)), g.identity());
        prop_assert_eq!(g.pow(a, g.element_order(a) as i64), g.identity());
        prop_assert_eq!(g.pow(a, -1), g.inv(a));
        prop_assert_eq!(n % g.element_order(a), 0);
        prop_assert_eq!(g.commutator(a, b), g.mul(g.mul(g.inv(a), g.inv(b)), g.mul(a, b)));
    }

    #[test]
    fn quotients_have_the_right_order(spec in small_spec()) {
        let g = group(&spec);
        for n in normal_subgroups(&g) {
            let (q, proj) = quotient(&g, &n).unwrap();
            prop_assert_eq!(q.order() * n.order(), g.order());
            prop_assert_eq!(proj.kernel(), n);
        }
    }
}

use kolchin_core::unipotent::{self, example_four_by_four, example_heisenberg, Coordinate, DiffPoly, Mode, SymMatrix};
use kolchin_core::UnipotentGroupSpec;
use proptest::prelude::*;

/// Spec on a k x k group with annihilator sets drawn from `masks`.
fn spec_from(k: usize, m: usize, masks: &[u8]) -> UnipotentGroupSpec {
    let mut coords = Vec::new();
    let mut it = masks.iter().cycle();
    for i in 1..=k {
        for j in i + 1..=k {
            let mask = it.next().copied().unwrap_or(0);
            let ann = (1..=m).filter(|d| mask & (1 << (d - 1)) != 0).collect();
            coords.push(Coordinate { pos: (i, j), name: format!("a{i}{j}"), ann, killed: false });
        }
    }
    UnipotentGroupSpec::new(k, m, coords, Mode::Componentwise).unwrap()
}

fn elements(spec: &UnipotentGroupSpec) -> [SymMatrix; 3] {
    [
        spec.generic_element(str::to_string),
        spec.generic_element(|n| n.replacen('a', "b", 1)),
        spec.generic_element(|n| n.replacen('a', "c", 1)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn group_axioms(k in 2usize..=4, m in 1usize..=3, masks in proptest::collection::vec(0u8..8, 6)) {
        let spec = spec_from(k, m, &masks);
        let [a, b, c] = elements(&spec);
        let ab_c = unipotent::multiply(&unipotent::multiply(&a, &b), &c);
        let a_bc = unipotent::multiply(&a, &unipotent::multiply(&b, &c));
        prop_assert_eq!(ab_c, a_bc);
        prop_assert!(unipotent::multiply(&unipotent::inverse(&a), &a).is_identity());
        prop_assert!(unipotent::multiply(&a, &unipotent::inverse(&a)).is_identity());
    }

    #[test]
    fn commutator_has_no_constant_terms(k in 2usize..=4, masks in proptest::collection::vec(0u8..4, 6)) {
        let spec = spec_from(k, 2, &masks);
        let [a, b, _] = elements(&spec);
        let c = unipotent::commutator(&a, &b);
        prop_assert!(c.is_unitriangular());
        for i in 1..=k {
            for j in i + 1..=k {
                prop_assert_eq!(c.entry(i, j).constant_term(), 0.into());
            }
        }
        prop_assert!(unipotent::commutator(&a, &a).is_identity());
    }
}

#[test]
fn example_specs_satisfy_group_axioms() {
    for spec in [example_four_by_four(Mode::Componentwise), example_heisenberg()] {
        let a = spec.generic_element(str::to_string);
        let b = spec.generic_element(|n| format!("{n}'"));
        assert!(spec.check_closure().is_ok());
        assert!(unipotent::multiply(&unipotent::inverse(&a), &a).is_identity());
        let ab = unipotent::multiply(&a, &b);
        assert_eq!(unipotent::inverse(&ab), unipotent::multiply(&unipotent::inverse(&b), &unipotent::inverse(&a)));
    }
}

#[test]
fn kill_subgroups_are_closed_when_refed() {
    let g = example_four_by_four(Mode::Componentwise);
    let names: Vec<String> = g.coords.iter().map(|c| c.name.clone()).collect();
    for mask in 0u32..(1 << names.len()) {
        let kill: Vec<&str> = names.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, n)| n.as_str()).collect();
        let report = g.subgroup_from_kill(&kill).unwrap();
        if report.is_subgroup() {
            let text = report.subgroup.to_json().to_string();
            let refed = UnipotentGroupSpec::from_json_str(&text).unwrap();
            assert!(refed.check_closure().is_ok(), "kill {kill:?}");
        }
    }
}

#[test]
fn component_chain_is_decreasing() {
    let g = example_four_by_four(Mode::Componentwise);
    let mut prev: Vec<String> = Vec::new();
    for n in 0..=4 {
        let killed = g.n_connected_component(n).unwrap().killed;
        assert!(prev.iter().all(|p| killed.contains(p)), "n = {n}");
        prev = killed;
    }
}

#[test]
fn literal_mode_residual_is_a_differentiated_product() {
    let report = example_four_by_four(Mode::Literal).check_closure();
    assert!(!report.is_ok());
    let v = report.violations.iter().find(|v| v.pos == (1, 3)).unwrap();
    assert_ne!(v.residual, DiffPoly::zero());
}

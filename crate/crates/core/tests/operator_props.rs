mod common;

use kolchin_core::{DiffOperator, ExponentVector, RatFun};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn triple(seed: u64) -> (DiffOperator, DiffOperator, DiffOperator, RatFun) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (
        common::random_operator(&mut rng, 2, 2, 2),
        common::random_operator(&mut rng, 2, 2, 2),
        common::random_operator(&mut rng, 2, 2, 2),
        common::random_ratfun(&mut rng, 2),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn compose_is_associative(seed in any::<u64>()) {
        let (a, b, c, _) = triple(seed);
        prop_assert_eq!(a.compose(&b).unwrap().compose(&c).unwrap(), a.compose(&b.compose(&c).unwrap()).unwrap());
    }

    #[test]
    fn compose_agrees_with_apply(seed in any::<u64>()) {
        let (a, b, _, f) = triple(seed);
        let lhs = a.compose(&b).unwrap().apply(&f).unwrap();
        let rhs = a.apply(&b.apply(&f).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn compose_distributes(seed in any::<u64>()) {
        let (a, b, c, _) = triple(seed);
        prop_assert_eq!(a.compose(&(&b + &c)).unwrap(), &a.compose(&b).unwrap() + &a.compose(&c).unwrap());
        prop_assert_eq!((&a + &b).compose(&c).unwrap(), &a.compose(&c).unwrap() + &b.compose(&c).unwrap());
    }

    #[test]
    fn leaders_multiply(seed in any::<u64>()) {
        let (a, b, _, _) = triple(seed);
        prop_assume!(!a.is_zero() && !b.is_zero());
        let ab = a.compose(&b).unwrap();
        prop_assert_eq!(ab.leader().unwrap(), a.leader().unwrap().add(&b.leader().unwrap()));
    }

    #[test]
    fn apply_is_linear(seed in any::<u64>()) {
        let (a, _, _, f) = triple(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabcdef);
        let g = common::random_ratfun(&mut rng, 2);
        prop_assert_eq!(a.apply(&(&f + &g)).unwrap(), &a.apply(&f).unwrap() + &a.apply(&g).unwrap());
    }
}

#[test]
fn derivations_commute_with_variables_up_to_kronecker_delta() {
    for m in 1..=3 {
        for i in 1..=m {
            let d = DiffOperator::derivation(m, i).unwrap();
            for j in 1..=m {
                let x = DiffOperator::multiplication(RatFun::var(m, j));
                let bracket = &d.compose(&x).unwrap() - &x.compose(&d).unwrap();
                let want = if i == j { DiffOperator::identity(m) } else { DiffOperator::zero(m) };
                assert_eq!(bracket, want, "[d{i}, x{j}] in m = {m}");
            }
            for j in 1..=m {
                let dj = DiffOperator::derivation(m, j).unwrap();
                assert_eq!(d.compose(&dj).unwrap(), dj.compose(&d).unwrap());
            }
        }
    }
}

#[test]
fn commutator_with_coefficient_is_its_derivative() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let c = common::random_ratfun(&mut rng, 2);
        for i in 1..=2 {
            let d = DiffOperator::derivation(2, i).unwrap();
            let mc = DiffOperator::multiplication(c.clone());
            let bracket = &d.compose(&mc).unwrap() - &mc.compose(&d).unwrap();
            let want = DiffOperator::multiplication(c.derivative(i).unwrap());
            assert_eq!(bracket, want);
        }
    }
}

#[test]
fn leader_uses_graded_lex() {
    let m = 2;
    let ops = [
        (vec![(vec![0, 2], 1), (vec![1, 0], 1)], vec![0, 2]),
        (vec![(vec![1, 1], 1), (vec![0, 2], 1)], vec![1, 1]),
        (vec![(vec![2, 0], 1), (vec![1, 1], -1)], vec![2, 0]),
    ];
    for (terms, leader) in ops {
        let op = DiffOperator::from_terms(
            m,
            terms.into_iter().map(|(e, c)| (ExponentVector::new(e), RatFun::from_int(m, c))),
        )
        .unwrap();
        assert_eq!(op.leader().unwrap(), ExponentVector::new(leader));
    }
    assert!(DiffOperator::zero(m).leader().is_err());
}

mod common;

use causal_query::boolean::{BooleanFunction, DecisionTree, TruthTable};
use causal_query::lugano::{lugano, lugano_bar};
use causal_query::process::{
    causal_definiteness, computes, extract_decision_tree, is_causally_definite, process_from_tree, validate_process,
    LocalOperation, Process, ProcessFile, SampleSpec, DEFAULT_VALIDATION_BUDGET,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const BUDGET: u64 = 1 << 20;

fn tree_function(t: &DecisionTree, n: usize) -> BooleanFunction {
    let t = t.clone();
    BooleanFunction::from_evaluator(n, move |x| t.eval_bits(x).unwrap()).unwrap()
}

#[test]
fn constant_reductions_agree_with_all_operations() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut definite, mut indefinite) = (0, 0);
    for _ in 0..2_000 {
        let w = common::random_valid_candidate(&mut rng);
        assert!(validate_process(&w, DEFAULT_VALIDATION_BUDGET).unwrap().valid, "{w}");
        let fast = is_causally_definite(&w, BUDGET).unwrap();
        assert_eq!(fast, common::definite_all_operations(&w), "{w}");
        if fast {
            definite += 1;
        } else {
            indefinite += 1;
        }
    }
    assert!(definite > 100 && indefinite > 100, "{definite} definite, {indefinite} indefinite");
    // Random tables are almost never valid; the two routes must still agree on them.
    for _ in 0..2_000 {
        let w = common::random_three_slot(&mut rng);
        if w.no_self_signalling() {
            assert_eq!(is_causally_definite(&w, BUDGET).unwrap(), common::definite_all_operations(&w), "{w}");
        }
    }
}

#[test]
fn valid_processes_never_self_signal() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..5_000 {
        let w = if i % 2 == 0 { common::random_three_slot(&mut rng) } else { common::random_valid_candidate(&mut rng) };
        let r = validate_process(&w, DEFAULT_VALIDATION_BUDGET).unwrap();
        if r.valid {
            assert!(w.no_self_signalling());
        }
        if !w.no_self_signalling() {
            assert!(!r.valid);
        }
    }
}

#[test]
fn lugano_family_is_valid_and_indefinite() {
    for w in [lugano(), lugano_bar()] {
        let r = validate_process(&w, DEFAULT_VALIDATION_BUDGET).unwrap();
        assert!(r.valid);
        assert!(r.witness.is_none());
        assert!(!causal_definiteness(&w, BUDGET).unwrap().definite);
        assert!(extract_decision_tree(&w).is_err());
    }
    assert_eq!(validate_process(&lugano(), DEFAULT_VALIDATION_BUDGET).unwrap().operation_tuples, 64);
}

#[test]
fn validation_budget_is_enforced() {
    assert!(validate_process(&lugano_bar(), 10).is_err());
}

#[test]
fn induced_functions_reassemble() {
    for w in [lugano(), lugano_bar()] {
        assert_eq!(w.induced_functions().reassemble().unwrap(), w);
    }
}

#[test]
fn json_process_round_trip() {
    for w in [lugano(), lugano_bar()] {
        assert_eq!(ProcessFile::parse(&ProcessFile::render(&w).unwrap()).unwrap(), w);
    }
    assert!(ProcessFile::parse("{\"past\":1,\"future\":2,\"slots\":[],\"table\":[]}").is_err());
}

#[test]
fn slot_count_of_a_computing_tree_process_bounds_certificate_complexity() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let t = common::random_tree(&mut rng, 4, 3);
        let f = tree_function(&t, 4);
        let w = process_from_tree(&t, 4).unwrap();
        let c = causal_query::boolean::certificate_complexity(&f).unwrap();
        assert!(w.num_slots() >= c);
    }
}

fn tree_strategy() -> impl Strategy<Value = (DecisionTree, usize)> {
    (any::<u64>(), 1usize..=4, 0usize..=3).prop_map(|(seed, n, depth)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (common::random_tree(&mut rng, n, depth), n)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tree_processes_are_valid_definite_and_compute_their_tree((t, n) in tree_strategy()) {
        let w = process_from_tree(&t, n).unwrap();
        prop_assert_eq!(w.num_slots(), t.depth().max(1));
        prop_assert!(validate_process(&w, DEFAULT_VALIDATION_BUDGET).unwrap().valid);
        prop_assert!(is_causally_definite(&w, BUDGET).unwrap());
        let f = tree_function(&t, n);
        prop_assert!(computes(&w, &f, &SampleSpec::default()).unwrap().holds);
        let back = extract_decision_tree(&w).unwrap();
        prop_assert!(back.depth() <= w.num_slots());
        for x in 0..1u64 << n {
            let bits = causal_query::boolean::bits_from_index(x, n);
            prop_assert_eq!(back.eval_bits(&bits).unwrap(), t.eval_bits(&bits).unwrap());
        }
    }

    #[test]
    fn reductions_of_valid_processes_stay_valid((t, n) in tree_strategy(), op in 0u128..16, use_lugano in any::<bool>(), k in 1usize..=3) {
        let w = if use_lugano { lugano() } else { process_from_tree(&t, n).unwrap() };
        let k = k.min(w.num_slots());
        let slot = w.slots()[k - 1];
        let count = (slot.output.size() as u128).pow(slot.input.size() as u32);
        let mu = LocalOperation::nth(slot.input.size(), slot.output.size(), op % count);
        let reduced = w.reduce_by_operation(k, &mu).unwrap();
        prop_assert_eq!(reduced.num_slots(), w.num_slots() - 1);
        prop_assert!(validate_process(&reduced, DEFAULT_VALIDATION_BUDGET).unwrap().valid);
    }

    #[test]
    fn computes_detects_wrong_functions((t, n) in tree_strategy(), flip in any::<u64>()) {
        let w = process_from_tree(&t, n).unwrap();
        let x = flip % (1 << n);
        let tt = t.clone();
        let table = TruthTable::from_fn(n, |i| tt.eval_bits(&causal_query::boolean::bits_from_index(i, n)).unwrap() ^ (i == x));
        let g = BooleanFunction::from_table(table).unwrap();
        let v = computes(&w, &g, &SampleSpec::default()).unwrap();
        prop_assert!(!v.holds);
        prop_assert_eq!(v.counterexample.unwrap().x, causal_query::boolean::bits_from_index(x, n));
    }
}

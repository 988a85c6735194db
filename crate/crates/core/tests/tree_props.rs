mod common;

use common::*;
use proptest::prelude::*;
use tfsm::corpus;
use tfsm::fsm_analysis::Goal;
use tfsm::oracle::brute_force_derive;
use tfsm::random::half_open_machine;
use tfsm::region::derive_via_region;
use tfsm::semantics::{is_homing, is_non_integer, is_synchronizing};
use tfsm::tree::derive_shortest;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn tree_agrees_with_region_and_oracle(seed in any::<u64>()) {
        let m = half_open_machine(&mut rng(seed), &shape());
        let n = m.states().len();
        for goal in [Goal::Hs, Goal::Ss] {
            let tree = derive_shortest(&m, goal).unwrap();
            let region = derive_via_region(&m, goal).unwrap();
            prop_assert_eq!(tree.as_ref().map(|a| a.len()), region.as_ref().map(|a| a.len()));
            if let Some(a) = &tree {
                let ok = match goal { Goal::Hs => is_homing(&m, a), Goal::Ss => is_synchronizing(&m, a) };
                prop_assert!(ok);
                if goal == Goal::Hs {
                    prop_assert!(is_non_integer(a));
                }
            }
            if goal == Goal::Hs {
                let cap = tree.as_ref().map_or(n * (n - 1) / 2 + 1, |a| a.len());
                let oracle = brute_force_derive(&m, goal, cap);
                prop_assert_eq!(tree.as_ref().map(|a| a.len()), oracle.as_ref().map(|a| a.len()));
            }
        }
    }
}

#[test]
fn corpus_tree_lengths_are_minimal() {
    for m in [corpus::s1(), corpus::s2(), corpus::s3(), corpus::s4()] {
        for goal in [Goal::Hs, Goal::Ss] {
            let tree = derive_shortest(&m, goal).unwrap();
            let n = m.states().len();
            let cap = tree.as_ref().map_or(n * n, |a| a.len());
            let oracle = brute_force_derive(&m, goal, cap);
            assert_eq!(
                tree.map(|a| a.len()),
                oracle.map(|a| a.len()),
                "{} {goal}",
                m.name()
            );
        }
    }
}

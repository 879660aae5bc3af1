mod common;

use cl16::calculus::{check_proof, choose_all, premises_of, Proof};
use cl16::oracle::decide_uniform;
use cl16::prover::{derivation_from_trace, prove, Verdict};
use cl16::purifier::{is_pure, purify};
use cl16::syntax::{parse, rank, Cirquent, ClusterId, Kind, Side};
use proptest::prelude::*;

use common::reference_pure;

fn leaf() -> impl Strategy<Value = Cirquent> {
    prop_oneof![
        Just(Cirquent::Top),
        Just(Cirquent::Bot),
        (prop::sample::select(vec!["p", "q", "r"]), any::<bool>()).prop_map(|(l, pos)| {
            if pos {
                Cirquent::pos(l)
            } else {
                Cirquent::neg(l)
            }
        }),
    ]
}

fn cluster() -> impl Strategy<Value = ClusterId> {
    prop::sample::select(vec![
        ClusterId::disjunctive(1),
        ClusterId::conjunctive(1),
        ClusterId::disjunctive(2),
        ClusterId::conjunctive(2),
    ])
}

fn cirquent(depth: u32) -> impl Strategy<Value = Cirquent> {
    leaf().prop_recursive(depth, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Cirquent::or(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Cirquent::and(l, r)),
            (cluster(), inner.clone(), inner).prop_map(|(c, l, r)| Cirquent::choice(c, l, r)),
        ]
    })
}

fn side() -> impl Strategy<Value = Side> {
    prop::sample::select(Side::BOTH.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn printing_parses_back(c in cirquent(5)) {
        prop_assert_eq!(parse(&c.to_string()).unwrap(), c);
    }

    #[test]
    fn negation_is_an_involution(c in cirquent(5)) {
        prop_assert_eq!(c.negate().negate(), c.clone());
        prop_assert_eq!(c.negate().connective_count(), c.connective_count());
    }

    #[test]
    fn a_cirquent_and_its_negation_are_not_both_valid(c in cirquent(4)) {
        let v = decide_uniform(&c).unwrap().valid;
        let nv = decide_uniform(&c.negate()).unwrap().valid;
        prop_assert!(!(v && nv));
    }

    #[test]
    fn children_rank_below_parent(c in cirquent(3)) {
        if let (Some((l, r)), Ok(rc)) = (c.children(), rank(&c)) {
            for child in [l, r] {
                let rchild = rank(child).expect("a child of an exact rank is exact");
                prop_assert!(rchild < rc);
            }
        }
    }

    #[test]
    fn purification_ends_pure_and_is_idempotent(c in cirquent(5)) {
        let p = purify(&c);
        prop_assert!(is_pure(&p.output));
        prop_assert!(reference_pure(&p.output));
        prop_assert!(purify(&p.output).trace.is_empty());
        if is_pure(&c) {
            prop_assert!(p.trace.is_empty());
        }
    }

    #[test]
    fn trace_steps_are_rule_applications(c in cirquent(5)) {
        let p = purify(&c);
        let mut current = c.clone();
        for step in &p.trace {
            prop_assert_eq!(&step.before, &current);
            let premises = premises_of(&step.before, &step.descriptor).unwrap();
            prop_assert_eq!(premises, vec![step.after.clone()]);
            current = step.after.clone();
        }
        prop_assert_eq!(current, p.output);
    }

    #[test]
    fn choose_all_eliminates_the_cluster(c in cirquent(5), k in cluster(), s in side()) {
        let chosen = choose_all(&c, k, s);
        prop_assert!(!chosen.contains_cluster(k));
        prop_assert!(chosen.connective_count() <= c.connective_count());
        if !c.contains_cluster(k) {
            prop_assert_eq!(chosen, c);
        }
    }

    #[test]
    fn prover_agrees_with_oracle(c in cirquent(4)) {
        let expected = decide_uniform(&c).unwrap().valid;
        match prove(&c) {
            Verdict::Valid { proof } => {
                prop_assert!(expected, "proved an invalid cirquent {}", c);
                prop_assert_eq!(check_proof(&proof).unwrap(), c.clone());
                let reread = Proof::from_json(&proof.to_json()).unwrap();
                prop_assert_eq!(reread, proof);
            }
            Verdict::Invalid { .. } => prop_assert!(!expected, "missed a valid cirquent {}", c),
        }
    }

    #[test]
    fn tautologies_derive_from_their_purification(c in cirquent(4)) {
        let p = purify(&c);
        if p.output == Cirquent::Top {
            let proof = derivation_from_trace(&p.trace, Proof::axiom()).unwrap();
            prop_assert_eq!(check_proof(&proof).unwrap(), c);
        }
    }

    #[test]
    fn surface_flattening_keeps_leaves(c in cirquent(5)) {
        for kind in [Kind::Or, Kind::And] {
            let parts = c.flatten(kind);
            let total: usize = parts.iter().map(|x| x.connective_count() + 1).sum();
            prop_assert_eq!(total, c.connective_count() + 1);
            prop_assert!(parts.iter().all(|x| !x.is_par(kind)));
        }
    }
}

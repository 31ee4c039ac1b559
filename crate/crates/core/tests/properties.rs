//! Invariants over random inputs.

use std::collections::BTreeSet;

use proptest::prelude::*;
use specalg::alphabet::Alphabet;
use specalg::audit::{gen_random, GenConfig, Universe};
use specalg::fa::{self, FaTheory};
use specalg::format::{parse_spec, render_spec, SpecValue};
use specalg::ia::{self, Compat, IaTheory, InterfaceAutomaton, ProductWithErrors, Signature};
use specalg::mts::{self, ComposeRule, MtsTheory};
use specalg::{equiv, law_predicate, LawId};

fn fa2() -> FaTheory {
    FaTheory::new(Alphabet::letters(2).unwrap())
}

fn mts2(rule: ComposeRule) -> MtsTheory {
    MtsTheory::new(Alphabet::letters(2).unwrap(), rule)
}

fn sample<U: Universe>(theory: &U, seed: u64, index: u64) -> U::Spec {
    gen_random(theory, &GenConfig::new(theory.name()).seed(seed), index)
}

fn round_trips(value: SpecValue) -> Result<(), TestCaseError> {
    let text = render_spec("X", &value);
    let parsed = parse_spec(&text).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(parsed.get("X"), Some(&value), "{}", text);
    Ok(())
}

/// One interface over a fixed signature: a table of optional targets per
/// `(state, action)`.
fn interface(sig: Signature) -> impl Strategy<Value = InterfaceAutomaton> {
    let actions: Vec<String> = sig.actions().into_iter().collect();
    (1usize..=3).prop_flat_map(move |n| {
        let (sig, actions) = (sig.clone(), actions.clone());
        prop::collection::vec(prop::option::weighted(0.5, 0..n), n * actions.len()).prop_map(move |table| {
            let edges = table.iter().enumerate().filter_map(|(i, t)| {
                t.map(|t| (i / actions.len(), actions[i % actions.len()].clone(), t))
            });
            let names = (0..n).map(|i| format!("s{i}")).collect();
            InterfaceAutomaton::new(sig.clone(), names, 0, edges).unwrap()
        })
    })
}

/// Two composable interfaces sharing `a` (left to right) and `b` (right to
/// left), with a private output `c` on the right.
fn composable_pair() -> impl Strategy<Value = (InterfaceAutomaton, InterfaceAutomaton)> {
    let left = Signature::new(&["b", "go"], &["a"], &[] as &[&str]).unwrap();
    let right = Signature::new(&["a"], &["b", "c"], &[] as &[&str]).unwrap();
    (interface(left), interface(right))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rendered_specs_parse_back(seed in any::<u64>(), i in 0u64..1000) {
        round_trips(sample(&fa2(), seed, i).into())?;
        round_trips(sample(&mts2(ComposeRule::Meet), seed, i).into())?;
        round_trips(sample(&IaTheory::new(3), seed, i).into())?;
    }

    #[test]
    fn law_predicate_is_deterministic(seed in any::<u64>(), law in 0usize..LawId::ALL.len()) {
        let law = LawId::ALL[law];
        let theory = mts2(ComposeRule::Meet);
        let args: Vec<_> = (0..law.arity() as u64).map(|j| sample(&theory, seed, j)).collect();
        let first = law_predicate(&theory, law, &args).unwrap();
        prop_assert_eq!(first, law_predicate(&theory, law, &args).unwrap());
    }

    #[test]
    fn equivalent_arguments_give_identical_verdicts(seed in any::<u64>()) {
        let fa = fa2();
        let (a, b) = (sample(&fa, seed, 0), sample(&fa, seed, 1));
        let a2 = a.determinize().unwrap();
        prop_assert!(equiv(&fa, &a, &a2).unwrap());
        for (law, args, subst) in [
            (LawId::ConjLb, vec![a.clone(), b.clone()], vec![a2.clone(), b.clone()]),
            (LawId::ParUnit, vec![a.clone()], vec![a2.clone()]),
            (LawId::Thm1, vec![b.clone(), a.clone()], vec![b.clone(), a2.clone()]),
        ] {
            prop_assert_eq!(law_predicate(&fa, law, &args).unwrap(), law_predicate(&fa, law, &subst).unwrap());
        }

        let theory = mts2(ComposeRule::Meet);
        let (m, n) = (sample(&theory, seed, 0), sample(&theory, seed, 1));
        let m2 = mts::disjoin(&m, &m).unwrap();
        prop_assert!(equiv(&theory, &m, &m2).unwrap());
        for (law, args, subst) in [
            (LawId::ConjLb, vec![m.clone(), n.clone()], vec![m2.clone(), n.clone()]),
            (LawId::ParUnit, vec![m.clone()], vec![m2.clone()]),
            (LawId::Thm1, vec![n.clone(), m.clone()], vec![n.clone(), m2.clone()]),
        ] {
            prop_assert_eq!(law_predicate(&theory, law, &args).unwrap(), law_predicate(&theory, law, &subst).unwrap());
        }
    }

    #[test]
    fn pruning_is_idempotent(seed in any::<u64>(), bad in prop::collection::btree_set(0usize..3, 0..3)) {
        let m = sample(&mts2(ComposeRule::Meet), seed, 0);
        prop_assert_eq!(&mts::prune(&m, &BTreeSet::new()), &m);
        let bad: BTreeSet<usize> = bad.into_iter().filter(|&s| s < m.states().len()).collect();
        let once = mts::prune(&m, &bad);
        prop_assert_eq!(&mts::prune(&once, &BTreeSet::new()), &once);
    }

    #[test]
    fn conjunction_is_consistent_or_bottom(seed in any::<u64>()) {
        let theory = mts2(ComposeRule::Meet);
        let (a, b) = (sample(&theory, seed, 0), sample(&theory, seed, 1));
        let c = mts::conjoin(&a, &b).unwrap();
        prop_assert_eq!(&mts::prune(&c, &BTreeSet::new()), &c);
        prop_assert!(mts::refines(&c, &a).unwrap() && mts::refines(&c, &b).unwrap());
    }

    #[test]
    fn env_prune_result_is_a_fixpoint((p, q) in composable_pair()) {
        prop_assert!(ia::composable(&p, &q));
        if let Compat::Compatible(c) = ia::optimistic(&p, &q).unwrap() {
            let again = ia::env_prune(&ProductWithErrors::error_free(c.clone()));
            prop_assert_eq!(again, Compat::Compatible(c.clone()));
            let prod = ia::product(&p, &q).unwrap();
            prop_assert_eq!(c.signature(), prod.automaton.signature());
        }
    }

    #[test]
    fn pessimistic_compatibility_implies_optimistic((p, q) in composable_pair()) {
        let prod = ia::product(&p, &q).unwrap();
        let pess = ia::pessimistic(&p, &q).unwrap();
        let opt = ia::optimistic(&p, &q).unwrap();
        prop_assert!(!pess.is_compatible() || opt.is_compatible());
        if prod.errors.is_empty() {
            prop_assert_eq!(opt, Compat::Compatible(prod.automaton.clone()));
            prop_assert_eq!(pess, Compat::Compatible(prod.automaton));
        }
    }

    #[test]
    fn quotient_is_the_largest_solution(seed in any::<u64>()) {
        let fa = fa2();
        let (a, b, x) = (sample(&fa, seed, 0), sample(&fa, seed, 1), sample(&fa, seed, 2));
        let q = fa::conj_quotient(&b, &a).unwrap();
        prop_assert!(fa::refines(&fa::conjoin(&a, &q).unwrap(), &b).unwrap());
        let solves = fa::refines(&fa::conjoin(&a, &x).unwrap(), &b).unwrap();
        prop_assert_eq!(solves, fa::refines(&x, &q).unwrap());
    }

    #[test]
    fn disjunction_is_an_upper_bound(seed in any::<u64>()) {
        let theory = mts2(ComposeRule::Join);
        let (a, b) = (sample(&theory, seed, 0), sample(&theory, seed, 1));
        let d = mts::disjoin(&a, &b).unwrap();
        prop_assert!(mts::refines(&a, &d).unwrap() && mts::refines(&b, &d).unwrap());
    }
}

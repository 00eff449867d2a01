mod common;

use std::collections::BTreeSet;

use metacalc::automaton::{
    build_body_automaton, build_deterministic_body_automaton, nfa_accepts, nfa_accepts_all, nfa_language_upto,
    read_automaton, write_automaton,
};
use metacalc::formula::{print_formula, Formula};
use metacalc::library::kleene_alphabet;
use metacalc::Execution;
use proptest::prelude::*;

use common::*;

fn body() -> impl Strategy<Value = Vec<Formula>> {
    let pool: Vec<Formula> = wffs(&kleene_alphabet(), 9)
        .into_iter()
        .filter(|f| print_formula(f).len() <= 40)
        .collect();
    prop::collection::vec(prop::sample::select(pool), 0..=50)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn language_is_the_printed_body(t in body()) {
        let printed: BTreeSet<String> = t.iter().map(print_formula).collect();
        let max = printed.iter().map(String::len).max().unwrap_or(0);
        let nfa = build_body_automaton(&t);
        let trie = build_deterministic_body_automaton(&t);
        prop_assert_eq!(nfa_language_upto(&nfa, max), printed.clone());
        prop_assert_eq!(nfa_language_upto(&trie, max), printed.clone());
        prop_assert_eq!(nfa.state_count(), 1 + printed.iter().map(|s| s.len() + 1).sum::<usize>());
        prop_assert!(trie.state_count() <= nfa.state_count());
        prop_assert!(trie.is_deterministic_on_symbols());
        prop_assert_eq!(nfa.epsilon_count(), printed.len());
    }

    #[test]
    fn prefixes_and_extensions_are_rejected(t in body()) {
        let printed: BTreeSet<String> = t.iter().map(print_formula).collect();
        let nfa = build_body_automaton(&t);
        for s in &printed {
            prop_assert!(nfa_accepts(&nfa, s));
            let cut = &s[..s.len() - 1];
            prop_assert_eq!(nfa_accepts(&nfa, cut), printed.contains(cut));
            let longer = format!("{s})");
            prop_assert_eq!(nfa_accepts(&nfa, &longer), printed.contains(&longer));
        }
    }

    #[test]
    fn interchange_round_trips(t in body()) {
        let nfa = build_body_automaton(&t);
        prop_assert_eq!(read_automaton(&write_automaton(&nfa)).unwrap(), nfa.clone());
        let trie = build_deterministic_body_automaton(&t);
        prop_assert_eq!(read_automaton(&write_automaton(&trie)).unwrap(), trie);
    }

    #[test]
    fn simulation_modes_agree(t in body(), probes in prop::collection::vec("[PQR()&|~>< -]{0,12}", 0..40)) {
        let nfa = build_body_automaton(&t);
        let mut inputs = probes;
        inputs.extend(t.iter().map(print_formula));
        let seq = nfa_accepts_all(&nfa, &inputs, Execution::Sequential);
        prop_assert_eq!(&seq, &nfa_accepts_all(&nfa, &inputs, Execution::Parallel));
        for (s, ok) in inputs.iter().zip(&seq) {
            prop_assert_eq!(*ok, nfa_accepts(&nfa, s));
        }
    }
}

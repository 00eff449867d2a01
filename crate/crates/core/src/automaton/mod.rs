//! Finite bodies as automata: one ε-linked chain per printed theorem, or a
//! prefix-sharing trie, plus simulation and language enumeration.

mod format;

pub use format::{read_automaton, write_automaton, AutomatonFormatError};

use std::collections::{BTreeMap, BTreeSet};

use crate::formula::{print_formula, Formula};
use crate::par::{self, Execution};

pub type State = usize;

/// A transition label; `None` is ε.
pub type Label = Option<char>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsilonNfa {
    states: usize,
    alphabet: BTreeSet<char>,
    transitions: BTreeSet<(State, Label, State)>,
    start: State,
    accepting: BTreeSet<State>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum NfaError {
    #[error("state {0} is not declared")]
    UnknownState(State),
    #[error("symbol {0:?} is not in the alphabet")]
    UnknownSymbol(char),
}

impl EpsilonNfa {
    /// A single non-accepting start state.
    pub fn empty() -> EpsilonNfa {
        EpsilonNfa {
            states: 1,
            alphabet: BTreeSet::new(),
            transitions: BTreeSet::new(),
            start: 0,
            accepting: BTreeSet::new(),
        }
    }

    pub fn new(
        states: usize,
        alphabet: BTreeSet<char>,
        transitions: impl IntoIterator<Item = (State, Label, State)>,
        start: State,
        accepting: impl IntoIterator<Item = State>,
    ) -> Result<EpsilonNfa, NfaError> {
        let nfa = EpsilonNfa {
            states,
            alphabet,
            transitions: transitions.into_iter().collect(),
            start,
            accepting: accepting.into_iter().collect(),
        };
        nfa.validate()?;
        Ok(nfa)
    }

    fn validate(&self) -> Result<(), NfaError> {
        let state = |q: State| if q < self.states { Ok(()) } else { Err(NfaError::UnknownState(q)) };
        state(self.start)?;
        for &q in &self.accepting {
            state(q)?;
        }
        for &(p, a, q) in &self.transitions {
            state(p)?;
            state(q)?;
            if let Some(c) = a {
                if !self.alphabet.contains(&c) {
                    return Err(NfaError::UnknownSymbol(c));
                }
            }
        }
        Ok(())
    }

    fn add_state(&mut self) -> State {
        self.states += 1;
        self.states - 1
    }

    fn add_transition(&mut self, p: State, a: Label, q: State) {
        if let Some(c) = a {
            self.alphabet.insert(c);
        }
        self.transitions.insert((p, a, q));
    }

    pub fn state_count(&self) -> usize {
        self.states
    }

    pub fn alphabet(&self) -> &BTreeSet<char> {
        &self.alphabet
    }

    pub fn transitions(&self) -> impl Iterator<Item = &(State, Label, State)> {
        self.transitions.iter()
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn start(&self) -> State {
        self.start
    }

    pub fn accepting(&self) -> &BTreeSet<State> {
        &self.accepting
    }

    pub fn epsilon_count(&self) -> usize {
        self.transitions.iter().filter(|t| t.1.is_none()).count()
    }

    /// No two distinct transitions share a state and a symbol.
    pub fn is_deterministic_on_symbols(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.transitions
            .iter()
            .filter_map(|&(p, a, _)| a.map(|c| (p, c)))
            .all(|key| seen.insert(key))
    }

    fn adjacency(&self) -> Vec<Vec<(Label, State)>> {
        let mut adj = vec![Vec::new(); self.states];
        for &(p, a, q) in &self.transitions {
            adj[p].push((a, q));
        }
        adj
    }
}

fn closure(adj: &[Vec<(Label, State)>], set: impl IntoIterator<Item = State>) -> BTreeSet<State> {
    let mut out: BTreeSet<State> = BTreeSet::new();
    let mut stack: Vec<State> = set.into_iter().collect();
    while let Some(q) = stack.pop() {
        if out.insert(q) {
            stack.extend(adj[q].iter().filter(|(a, _)| a.is_none()).map(|&(_, r)| r));
        }
    }
    out
}

fn step(adj: &[Vec<(Label, State)>], set: &BTreeSet<State>, c: char) -> BTreeSet<State> {
    let next = set
        .iter()
        .flat_map(|&q| adj[q].iter().filter(|(a, _)| *a == Some(c)).map(|&(_, r)| r));
    closure(adj, next)
}

/// The chain construction: a fresh start state with an ε-transition to
/// the first state of a linear chain for each printed formula.
pub fn build_body_automaton<'a>(body: impl IntoIterator<Item = &'a Formula>) -> EpsilonNfa {
    words_automaton(printed(body))
}

/// As [`build_body_automaton`] for arbitrary words.
pub fn words_automaton(words: impl IntoIterator<Item = String>) -> EpsilonNfa {
    let mut nfa = EpsilonNfa::empty();
    for w in words.into_iter().collect::<BTreeSet<_>>() {
        let first = nfa.add_state();
        nfa.add_transition(nfa.start, None, first);
        let mut q = first;
        for c in w.chars() {
            let r = nfa.add_state();
            nfa.add_transition(q, Some(c), r);
            q = r;
        }
        nfa.accepting.insert(q);
    }
    nfa
}

/// The trie construction over the printed formulas.
pub fn build_deterministic_body_automaton<'a>(body: impl IntoIterator<Item = &'a Formula>) -> EpsilonNfa {
    words_trie(printed(body))
}

pub fn words_trie(words: impl IntoIterator<Item = String>) -> EpsilonNfa {
    let mut nfa = EpsilonNfa::empty();
    let mut edges: BTreeMap<(State, char), State> = BTreeMap::new();
    for w in words {
        let mut q = nfa.start;
        for c in w.chars() {
            q = match edges.get(&(q, c)) {
                Some(&r) => r,
                None => {
                    let r = nfa.add_state();
                    nfa.add_transition(q, Some(c), r);
                    edges.insert((q, c), r);
                    r
                }
            };
        }
        nfa.accepting.insert(q);
    }
    nfa
}

fn printed<'a>(body: impl IntoIterator<Item = &'a Formula>) -> Vec<String> {
    body.into_iter().map(print_formula).collect()
}

pub fn nfa_accepts(nfa: &EpsilonNfa, input: &str) -> bool {
    accepts_with(nfa, &nfa.adjacency(), input)
}

fn accepts_with(nfa: &EpsilonNfa, adj: &[Vec<(Label, State)>], input: &str) -> bool {
    let mut current = closure(adj, [nfa.start]);
    for c in input.chars() {
        if current.is_empty() {
            return false;
        }
        current = step(adj, &current, c);
    }
    current.iter().any(|q| nfa.accepting.contains(q))
}

/// Simulates many inputs, concurrently under [`Execution::Parallel`].
pub fn nfa_accepts_all(nfa: &EpsilonNfa, inputs: &[String], exec: Execution) -> Vec<bool> {
    let adj = nfa.adjacency();
    par::map_slice(exec, inputs, |s| accepts_with(nfa, &adj, s))
}

/// Every accepted string with at most `max_length` characters.
pub fn nfa_language_upto(nfa: &EpsilonNfa, max_length: usize) -> BTreeSet<String> {
    let adj = nfa.adjacency();
    let mut out = BTreeSet::new();
    let mut frontier: Vec<(String, BTreeSet<State>)> = vec![(String::new(), closure(&adj, [nfa.start]))];
    for len in 0..=max_length {
        let mut next = Vec::new();
        for (word, set) in &frontier {
            if set.iter().any(|q| nfa.accepting.contains(q)) {
                out.insert(word.clone());
            }
            if len == max_length {
                continue;
            }
            for &c in &nfa.alphabet {
                let s = step(&adj, set, c);
                if !s.is_empty() {
                    let mut w = word.clone();
                    w.push(c);
                    next.push((w, s));
                }
            }
        }
        frontier = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_formula, Alphabet, Connective};

    fn body(texts: &[&str]) -> Vec<Formula> {
        let a = Alphabet::propositional(&["P", "Q", "R"], &[Connective::And]);
        texts.iter().map(|t| parse_formula(t, &a).unwrap()).collect()
    }

    fn set(words: &[&str]) -> BTreeSet<String> {
        words.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn singleton() {
        let t = body(&["P"]);
        let nfa = build_body_automaton(&t);
        assert!(nfa_accepts(&nfa, "P"));
        assert!(!nfa_accepts(&nfa, "Q"));
        assert!(!nfa_accepts(&nfa, ""));
        assert_eq!(nfa_language_upto(&nfa, 3), set(&["P"]));
        assert_eq!(build_deterministic_body_automaton(&t).state_count(), 2);
    }

    #[test]
    fn two_chains() {
        let t = body(&["P", "P & Q"]);
        let nfa = build_body_automaton(&t);
        assert_eq!(nfa.epsilon_count(), 2);
        assert!(!nfa_accepts(&nfa, "(P & Q"));
        assert_eq!(nfa_language_upto(&nfa, 7), set(&["P", "(P & Q)"]));
        assert_eq!(nfa_language_upto(&nfa, 6), set(&["P"]));
    }

    #[test]
    fn empty_body() {
        let nfa = build_body_automaton(&[]);
        assert!(nfa_language_upto(&nfa, 5).is_empty());
        assert!(nfa_language_upto(&build_deterministic_body_automaton(&[]), 5).is_empty());
    }

    #[test]
    fn trie_shares_prefixes() {
        let t = body(&["P", "P & Q", "P & R"]);
        let trie = build_deterministic_body_automaton(&t);
        assert!(trie.is_deterministic_on_symbols());
        assert_eq!(trie.epsilon_count(), 0);
        // "P", "(P & " shared, then "Q)" and "R)".
        assert_eq!(trie.state_count(), 1 + 1 + 5 + 2 + 2);
        assert_eq!(nfa_language_upto(&trie, 10), set(&["P", "(P & Q)", "(P & R)"]));
    }

    #[test]
    fn rejects_undeclared() {
        assert_eq!(
            EpsilonNfa::new(2, BTreeSet::new(), [(0, Some('a'), 1)], 0, [1]),
            Err(NfaError::UnknownSymbol('a'))
        );
        assert_eq!(
            EpsilonNfa::new(2, BTreeSet::new(), [(0, None, 2)], 0, [1]),
            Err(NfaError::UnknownState(2))
        );
    }
}

use std::collections::BTreeSet;

use metacalc::formula::{
    accepts, enumerate_wffs, free_variables, instantiate_schema, match_schema, parse_formula, print_formula,
    print_with, substitute_prop, substitute_term, Alphabet, Connective, Formula, LanguageKind, MetaAssignment,
    Punctuation, Quantifier, Schema, Symbol, Term,
};
use proptest::prelude::*;

fn prop_alphabet() -> Alphabet {
    Alphabet::propositional(&["P", "Q", "R"], &Connective::ALL)
}

fn first_order() -> Alphabet {
    Alphabet::builder(LanguageKind::FirstOrder)
        .individual_variables(&["x", "y", "z"])
        .function("a", 0)
        .function("g", 1)
        .predicate("P", 1)
        .predicate("R", 2)
        .connectives(&Connective::ALL)
        .quantifiers(&[Quantifier::Forall, Quantifier::Exists])
        .equality(true)
        .build()
        .unwrap()
}

fn prop_formula(atoms: &'static [&'static str]) -> impl Strategy<Value = Formula> {
    let leaf = prop::sample::select(atoms).prop_map(Formula::atom);
    leaf.prop_recursive(5, 40, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::iff(a, b)),
        ]
    })
}

fn term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        prop::sample::select(&["x", "y", "z"][..]).prop_map(Term::var),
        Just(Term::constant("a")),
    ];
    leaf.prop_recursive(2, 4, 1, |inner| inner.prop_map(|t| Term::app("g", vec![t])))
}

fn fo_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        term().prop_map(|t| Formula::pred("P", vec![t])),
        (term(), term()).prop_map(|(s, t)| Formula::pred("R", vec![s, t])),
        (term(), term()).prop_map(|(s, t)| Formula::equal(s, t)),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        let var = prop::sample::select(&["x", "y", "z"][..]);
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (var.clone(), inner.clone()).prop_map(|(v, a)| Formula::forall(v, a)),
            (var, inner).prop_map(|(v, a)| Formula::exists(v, a)),
        ]
    })
}

fn ground_term() -> impl Strategy<Value = Term> {
    Just(Term::constant("a")).prop_recursive(2, 3, 1, |inner| inner.prop_map(|t| Term::app("g", vec![t])))
}

#[test]
fn round_trip_every_wff_up_to_nine() {
    let a = prop_alphabet();
    let wffs = enumerate_wffs(&Alphabet::propositional(&["P", "Q"], &[Connective::Not, Connective::Implies, Connective::Or]), 9).unwrap();
    assert!(wffs.len() > 10_000);
    for w in &wffs {
        assert_eq!(&parse_formula(&print_formula(w), &a).unwrap(), w);
    }
    let church = Alphabet::builder(LanguageKind::Propositional)
        .variables(&["p", "q"])
        .connectives(&[Connective::Not, Connective::Implies])
        .punctuation(Punctuation::Brackets)
        .build()
        .unwrap();
    for w in enumerate_wffs(&church, 9).unwrap() {
        assert_eq!(parse_formula(&print_with(&w, Punctuation::Brackets), &church).unwrap(), w);
    }
}

/// Every string over `chars` of length at most `max`.
fn all_strings(chars: &[char], max: usize) -> impl Iterator<Item = String> + '_ {
    (0..=max).flat_map(move |len| {
        let total = chars.len().pow(len as u32);
        (0..total).map(move |mut n| {
            let mut s = String::with_capacity(len);
            for _ in 0..len {
                s.push(chars[n % chars.len()]);
                n /= chars.len();
            }
            s
        })
    })
}

fn agreement(connectives: &[Connective], chars: &[char], max: usize) {
    let a = Alphabet::propositional(&["P"], connectives);
    // A printed wff is never shorter than its size in nodes.
    let produced: BTreeSet<String> = enumerate_wffs(&a, max)
        .unwrap()
        .iter()
        .map(print_formula)
        .filter(|s| s.chars().count() <= max)
        .collect();
    let mut accepted = 0;
    for s in all_strings(chars, max) {
        let decided = accepts(&s, &a);
        assert_eq!(decided, produced.contains(&s), "{s:?}");
        accepted += usize::from(decided);
    }
    assert_eq!(accepted, produced.len());
}

#[test]
fn decision_and_production_agree_up_to_eight() {
    agreement(&[Connective::Not, Connective::Implies], &['P', '~', '(', ')', '-', '>', ' '], 8);
}

#[test]
#[ignore = "exhaustive over 2.4e8 strings; run with --ignored"]
fn decision_and_production_agree_up_to_twelve() {
    agreement(&[Connective::And], &['P', '&', '(', ')', ' '], 12);
}

#[test]
fn parse_rejects_with_positions() {
    let a = prop_alphabet();
    let e = parse_formula("(P -> S)", &a).unwrap_err();
    assert_eq!(e.position, 6);
    assert!(parse_formula("(P -> Q", &a).is_err());
    assert!(parse_formula("forall x P", &a).is_err());
}

proptest! {
    #[test]
    fn print_then_parse_is_identity(f in prop_formula(&["P", "Q", "R"])) {
        let a = prop_alphabet();
        prop_assert_eq!(parse_formula(&print_formula(&f), &a).unwrap(), f.clone());
        prop_assert!(accepts(&print_formula(&f), &a));
    }

    #[test]
    fn first_order_round_trip(f in fo_formula()) {
        prop_assert_eq!(parse_formula(&print_formula(&f), &first_order()).unwrap(), f);
    }

    #[test]
    fn substitutions_commute(
        f in prop_formula(&["P", "Q", "R"]),
        psi in prop_formula(&["Q", "R"]),
        chi in prop_formula(&["P", "R"]),
    ) {
        // Q does not occur in chi and P does not occur in psi.
        let (a, b) = (Symbol::new("Q"), Symbol::new("P"));
        let left = substitute_prop(&substitute_prop(&f, &a, &psi), &b, &chi);
        let right = substitute_prop(&substitute_prop(&f, &b, &chi), &a, &psi);
        prop_assert_eq!(left, right);
    }

    #[test]
    fn ground_substitution_removes_the_variable(f in fo_formula(), t in ground_term(), v in prop::sample::select(&["x", "y", "z"][..])) {
        let x = Symbol::new(v);
        let mut expected = free_variables(&f);
        expected.remove(&x);
        prop_assert_eq!(free_variables(&substitute_term(&f, &x, &t)), expected);
    }

    #[test]
    fn match_and_instantiate_are_adjoint(
        phi in prop_formula(&["P", "Q"]),
        chi in prop_formula(&["P", "Q"]),
        extra in prop_formula(&["P", "Q", "R"]),
    ) {
        let a = prop_alphabet();
        let s = Schema::parse("k", "phi -> (chi -> phi)", &["phi", "chi"], &a).unwrap();
        let sigma = MetaAssignment::new().with("phi", phi.clone()).with("chi", chi.clone());
        let inst = instantiate_schema(&s, &sigma).unwrap();
        let back = match_schema(&s, &inst).unwrap();
        prop_assert_eq!(back.get("phi"), Some(&phi));
        prop_assert_eq!(back.get("chi"), Some(&chi));
        if let Some(m) = match_schema(&s, &extra) {
            prop_assert_eq!(instantiate_schema(&s, &m).unwrap(), extra);
        }
    }
}

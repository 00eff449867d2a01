#![allow(dead_code)]

use std::collections::BTreeSet;

use metacalc::engine::{apply_rule, Bounds, Calculus, RuleContext, RuleSpec, RuleSystem, SchemaMode};
use metacalc::formula::{enumerate_wffs, parse_formula, Alphabet, Connective, Formula};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_alphabet() -> Alphabet {
    Alphabet::propositional(&["P", "Q"], &[Connective::Not, Connective::Implies])
}

pub fn f(text: &str, a: &Alphabet) -> Formula {
    parse_formula(text, a).unwrap_or_else(|e| panic!("{text}: {e}"))
}

pub fn wffs(a: &Alphabet, max: usize) -> Vec<Formula> {
    enumerate_wffs(a, max).unwrap()
}

pub fn sample<R: Rng>(rng: &mut R, pool: &[Formula], n: usize) -> Vec<Formula> {
    let mut out: Vec<Formula> = (0..n).map(|_| pool.choose(rng).unwrap().clone()).collect();
    out.sort();
    out.dedup();
    out
}

pub fn rule_choices() -> Vec<RuleSpec> {
    vec![RuleSpec::ModusPonens, RuleSpec::Identity, RuleSpec::Substitution]
}

pub fn random_rules<R: Rng>(rng: &mut R, choices: &[RuleSpec]) -> Vec<RuleSpec> {
    let mut out: Vec<RuleSpec> = choices.iter().filter(|_| rng.random_bool(0.5)).cloned().collect();
    if out.is_empty() {
        out.push(choices.choose(rng).unwrap().clone());
    }
    out
}

pub fn calculus(a: &Alphabet, axioms: Vec<Formula>, rules: &[RuleSpec]) -> Calculus {
    let rules = RuleSystem::from_specs(rules.iter().cloned()).unwrap();
    Calculus::new("random", a.clone(), axioms, Vec::new(), rules, SchemaMode::OnDemand).unwrap()
}

/// Every conclusion of every rule on every premise tuple drawn from
/// `premises`, by exhaustive enumeration of tuples.
pub fn naive_step(rules: &RuleSystem, premises: &BTreeSet<Formula>, ctx: &RuleContext) -> BTreeSet<Formula> {
    let items: Vec<&Formula> = premises.iter().collect();
    let mut out = BTreeSet::new();
    for r in rules.rules() {
        let mut tuple = vec![0usize; r.arity()];
        if r.arity() > 0 && items.is_empty() {
            continue;
        }
        loop {
            let ps: Vec<Formula> = tuple.iter().map(|&i| items[i].clone()).collect();
            out.extend(apply_rule(r, &ps, ctx).unwrap());
            // Odometer over tuples.
            let mut k = 0;
            while k < tuple.len() {
                tuple[k] += 1;
                if tuple[k] < items.len() {
                    break;
                }
                tuple[k] = 0;
                k += 1;
            }
            if k == tuple.len() {
                break;
            }
        }
    }
    out
}

/// The staged body recomputed from scratch at every stage, with its
/// saturation flag.
pub fn naive_body(c: &Calculus, bounds: &Bounds) -> (BTreeSet<Formula>, bool) {
    let pool = c.pool(bounds).unwrap();
    let ctx = c.rule_context(pool).with_max_size(bounds.max_formula_size);
    let cap = bounds.max_formula_size;
    let mut t: BTreeSet<Formula> = c
        .realized_axiom_set(bounds)
        .unwrap()
        .into_iter()
        .filter(|f| f.size() <= cap)
        .collect();
    for _ in 2..=bounds.max_stage {
        let mut next = t.clone();
        next.extend(naive_step(c.rules(), &t, &ctx).into_iter().filter(|f| f.size() <= cap));
        if next == t {
            return (t, true);
        }
        t = next;
    }
    (t, false)
}

pub fn sample_between<R: Rng>(rng: &mut R, pool: &[Formula], lo: usize, hi: usize) -> Vec<Formula> {
    let n = rng.random_range(lo..=hi);
    sample(rng, pool, n)
}

//! Finitely based abstract logics: relations between finite premise sets
//! and conclusions.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::engine::{enumerate_body, BodyStatus, Bounds, Calculus};
use crate::formula::{print_with, Formula};

use super::verdict::{Verdict, Witness};
use super::AnalysisError;

/// One element `(S, z)` of a relation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Pair {
    pub premises: BTreeSet<String>,
    pub conclusion: String,
}

impl Pair {
    pub fn new<S: Into<String>>(premises: impl IntoIterator<Item = S>, conclusion: impl Into<String>) -> Pair {
        Pair {
            premises: premises.into_iter().map(Into::into).collect(),
            conclusion: conclusion.into(),
        }
    }

    fn witness(&self) -> Witness {
        Witness::Pair {
            premises: self.premises.iter().cloned().collect(),
            conclusion: self.conclusion.clone(),
        }
    }
}

/// A finite relation `R` between finite subsets of a carrier and its
/// elements. Pairs are kept in canonical order, shorter premise sets
/// first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FiniteRelation {
    carrier: BTreeSet<String>,
    pairs: BTreeSet<(usize, Pair)>,
}

impl FiniteRelation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = Pair>) -> Self {
        let mut r = FiniteRelation::new();
        for p in pairs {
            r.insert(p);
        }
        r
    }

    /// Adds carrier elements that occur in no pair.
    pub fn with_carrier<S: Into<String>>(mut self, elements: impl IntoIterator<Item = S>) -> Self {
        self.carrier.extend(elements.into_iter().map(Into::into));
        self
    }

    pub fn insert(&mut self, pair: Pair) -> bool {
        self.carrier.extend(pair.premises.iter().cloned());
        self.carrier.insert(pair.conclusion.clone());
        self.pairs.insert((pair.premises.len(), pair))
    }

    pub fn contains(&self, pair: &Pair) -> bool {
        self.pairs.contains(&(pair.premises.len(), pair.clone()))
    }

    pub fn pairs(&self) -> impl Iterator<Item = &Pair> {
        self.pairs.iter().map(|(_, p)| p)
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn carrier(&self) -> &BTreeSet<String> {
        &self.carrier
    }

    /// `Rg(R)`, the set of conclusions.
    pub fn range(&self) -> BTreeSet<String> {
        self.pairs().map(|p| p.conclusion.clone()).collect()
    }

    /// The largest premise count, 0 for an empty relation.
    pub fn max_premises(&self) -> usize {
        self.pairs.iter().next_back().map_or(0, |(k, _)| *k)
    }

    /// One record per line: `{"premises": [...], "conclusion": ...}`.
    pub fn to_jsonl(&self) -> String {
        self.pairs()
            .map(|p| serde_json::to_string(p).expect("pairs serialize") + "\n")
            .collect()
    }

    pub fn from_jsonl(text: &str) -> Result<Self, AnalysisError> {
        let mut r = FiniteRelation::new();
        for (n, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let pair: Pair = serde_json::from_str(line)
                .map_err(|e| AnalysisError::Interchange(format!("line {}: {e}", n + 1)))?;
            r.insert(pair);
        }
        Ok(r)
    }
}

/// Arity components: component `k + 1` holds the tuples
/// `(x_1, ..., x_k, z)` of the pairs with `k` premises, premises in
/// canonical order.
pub fn decompose_relation(r: &FiniteRelation) -> BTreeMap<usize, BTreeSet<Vec<String>>> {
    let mut out: BTreeMap<usize, BTreeSet<Vec<String>>> = BTreeMap::new();
    for p in r.pairs() {
        let mut tuple: Vec<String> = p.premises.iter().cloned().collect();
        tuple.push(p.conclusion.clone());
        out.entry(p.premises.len() + 1).or_default().insert(tuple);
    }
    out
}

/// Rebuilds a relation from its arity components.
pub fn recompose_relation(components: &BTreeMap<usize, BTreeSet<Vec<String>>>) -> FiniteRelation {
    FiniteRelation::from_pairs(components.values().flatten().map(|t| {
        let (z, s) = t.split_last().expect("tuples are non-empty");
        Pair::new(s.iter().cloned(), z.clone())
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundednessKind {
    /// Every pair has at most `m` premises.
    Bounded,
    /// Every conclusion has some pair with at most `m` premises.
    FunctionallyBounded,
    /// Every pair has exactly `m` premises.
    Strict,
    /// Every conclusion has some pair with exactly `m` premises.
    FunctionallyStrict,
}

impl BoundednessKind {
    pub fn from_name(name: &str) -> Option<Self> {
        match name.replace('-', "_").as_str() {
            "bounded" => Some(BoundednessKind::Bounded),
            "functionally_bounded" => Some(BoundednessKind::FunctionallyBounded),
            "strict" => Some(BoundednessKind::Strict),
            "functionally_strict" => Some(BoundednessKind::FunctionallyStrict),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BoundednessKind::Bounded => "bounded",
            BoundednessKind::FunctionallyBounded => "functionally_bounded",
            BoundednessKind::Strict => "strict",
            BoundednessKind::FunctionallyStrict => "functionally_strict",
        }
    }
}

/// Decides `m`-boundedness, with `m` counting premises. A failure carries
/// the first violating pair in canonical order.
pub fn check_boundedness(r: &FiniteRelation, m: usize, kind: BoundednessKind) -> Result<Verdict, AnalysisError> {
    if m == 0 {
        return Err(AnalysisError::MissingParameter("m must be at least 1".into()));
    }
    let ok = |k: usize| match kind {
        BoundednessKind::Bounded | BoundednessKind::FunctionallyBounded => k <= m,
        BoundednessKind::Strict | BoundednessKind::FunctionallyStrict => k == m,
    };
    let violation = match kind {
        BoundednessKind::Bounded | BoundednessKind::Strict => r.pairs().find(|p| !ok(p.premises.len())),
        BoundednessKind::FunctionallyBounded | BoundednessKind::FunctionallyStrict => {
            let good: BTreeSet<&String> = r
                .pairs()
                .filter(|p| ok(p.premises.len()))
                .map(|p| &p.conclusion)
                .collect();
            r.pairs().find(|p| !good.contains(&p.conclusion))
        }
    };
    Ok(match violation {
        Some(p) => Verdict::fails(
            p.witness(),
            format!("pair violates {}-{}", m, kind.name()),
        ),
        None => Verdict::holds(format!("all {} pairs satisfy {}-{}", r.len(), m, kind.name())),
    })
}

/// `U = (A, F, T)` over an arbitrary carrier, with `T = F(A)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AbstractCalculus {
    pub base: BTreeSet<String>,
    pub relation: FiniteRelation,
}

impl AbstractCalculus {
    pub fn new<S: Into<String>>(base: impl IntoIterator<Item = S>, relation: FiniteRelation) -> Self {
        AbstractCalculus {
            base: base.into_iter().map(Into::into).collect(),
            relation,
        }
    }

    pub fn carrier(&self) -> BTreeSet<String> {
        self.relation.carrier().union(&self.base).cloned().collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Closure {
    /// `F(A)`.
    Single,
    /// The least fixpoint of `S -> A | F(S)`.
    Iterated,
}

fn image(r: &FiniteRelation, s: &BTreeSet<String>) -> BTreeSet<String> {
    r.pairs()
        .filter(|p| p.premises.is_subset(s))
        .map(|p| p.conclusion.clone())
        .collect()
}

pub fn apply_abstract(u: &AbstractCalculus, closure: Closure) -> BTreeSet<String> {
    match closure {
        Closure::Single => image(&u.relation, &u.base),
        Closure::Iterated => {
            let mut s = u.base.clone();
            loop {
                let next: BTreeSet<String> = u.base.union(&image(&u.relation, &s)).cloned().collect();
                if next == s {
                    return s;
                }
                s = next;
            }
        }
    }
}

/// Samples the inference relation of `c`: the pairs `(S, z)` for every
/// `S` of at most `max_premises` pool formulas and every `z` in the bounded
/// body of `c` with `S` added to its axioms. Tokens are printed formulas.
/// Also returns the least complete status among the runs.
pub fn relation_from_calculus(
    c: &Calculus,
    pool: &[Formula],
    max_premises: usize,
    bounds: &Bounds,
) -> Result<(FiniteRelation, BodyStatus), AnalysisError> {
    let mut pool: Vec<Formula> = pool.to_vec();
    pool.sort();
    pool.dedup();
    let print = |f: &Formula| print_with(f, c.alphabet().punctuation());
    let mut relation = FiniteRelation::new().with_carrier(pool.iter().map(print));
    let mut worst = BodyStatus::Saturated;
    for subset in subsets(pool.len(), max_premises) {
        let s: Vec<Formula> = subset.iter().map(|&i| pool[i].clone()).collect();
        let body = enumerate_body(&c.clone().with_axioms(s.iter().cloned())?, bounds);
        worst = match (worst, body.status()) {
            (BodyStatus::BudgetExceeded, _) | (_, BodyStatus::BudgetExceeded) => BodyStatus::BudgetExceeded,
            (BodyStatus::StageCapHit, _) | (_, BodyStatus::StageCapHit) => BodyStatus::StageCapHit,
            _ => BodyStatus::Saturated,
        };
        let premises: Vec<String> = s.iter().map(print).collect();
        for z in body.formulas() {
            relation.insert(Pair::new(premises.iter().cloned(), print(z)));
        }
    }
    Ok((relation, worst))
}

/// Index subsets of `0..n` with at most `k` elements, by size then
/// lexicographically.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..k.min(n) {
        let mut next = Vec::new();
        for s in &frontier {
            let start = s.last().map_or(0, |&l: &usize| l + 1);
            for i in start..n {
                let mut t: Vec<usize> = s.clone();
                t.push(i);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(pairs: &[(&[&str], &str)]) -> FiniteRelation {
        FiniteRelation::from_pairs(pairs.iter().map(|(s, z)| Pair::new(s.iter().copied(), *z)))
    }

    #[test]
    fn boundedness_examples() {
        let r = rel(&[(&["a"], "b"), (&["a", "b"], "c")]);
        assert!(check_boundedness(&r, 2, BoundednessKind::Bounded).unwrap().is_holds());
        let v = check_boundedness(&r, 1, BoundednessKind::Bounded).unwrap();
        assert_eq!(
            v.witness(),
            Some(&Witness::Pair {
                premises: vec!["a".into(), "b".into()],
                conclusion: "c".into()
            })
        );
        let r = rel(&[(&["a", "b", "c"], "d"), (&["a"], "d")]);
        assert!(check_boundedness(&r, 1, BoundednessKind::FunctionallyBounded)
            .unwrap()
            .is_holds());
    }

    #[test]
    fn abstract_examples() {
        let u = AbstractCalculus::new(["a"], rel(&[(&["a"], "b")]));
        assert_eq!(apply_abstract(&u, Closure::Single), BTreeSet::from(["b".to_string()]));
        let empty = AbstractCalculus::new(["a"], FiniteRelation::new());
        assert!(apply_abstract(&empty, Closure::Single).is_empty());
        let chain = AbstractCalculus::new(["a"], rel(&[(&["a"], "b"), (&["b"], "c")]));
        assert_eq!(apply_abstract(&chain, Closure::Iterated).len(), 3);
    }

    #[test]
    fn decomposition() {
        let d = decompose_relation(&rel(&[(&["a"], "b")]));
        assert_eq!(d[&2], BTreeSet::from([vec!["a".to_string(), "b".to_string()]]));
        assert_eq!(d.len(), 1);
        let d = decompose_relation(&rel(&[(&[], "z")]));
        assert_eq!(d[&1], BTreeSet::from([vec!["z".to_string()]]));
        let mixed = rel(&[(&[], "z"), (&["a"], "b"), (&["a", "b"], "c"), (&["c"], "b")]);
        let d = decompose_relation(&mixed);
        assert_eq!(d.values().map(BTreeSet::len).sum::<usize>(), mixed.len());
        assert_eq!(recompose_relation(&d), mixed);
    }

    #[test]
    fn jsonl_round_trip() {
        let r = rel(&[(&["b", "a"], "c"), (&[], "z")]);
        let text = r.to_jsonl();
        assert_eq!(text.lines().next(), Some(r#"{"premises":[],"conclusion":"z"}"#));
        assert_eq!(FiniteRelation::from_jsonl(&text).unwrap(), r);
    }

    #[test]
    fn subset_enumeration() {
        assert_eq!(subsets(3, 2).len(), 1 + 3 + 3);
        assert_eq!(subsets(2, 5).len(), 4);
    }
}

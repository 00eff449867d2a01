//! The property battery: admissibility, consistency, completeness and
//! closure checks on bounded bodies.

use std::collections::{BTreeSet, HashSet};

use crate::engine::{enumerate_body, inference_closure, BoundedBody, Bounds, Calculus, Justification, RuleSystem};
use crate::formula::{match_schema, wffs_by_size, Formula, Schema};
use crate::library::{is_satisfiable, is_tautology, TranslationMap};
use crate::par;

use super::verdict::{Verdict, Witness};
use super::AnalysisError;

/// A set `P` of forbidden formulas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormulaSet {
    Formulas(BTreeSet<Formula>),
    /// All instances of a schema.
    Pattern(Schema),
}

impl FormulaSet {
    pub fn contains(&self, f: &Formula) -> bool {
        match self {
            FormulaSet::Formulas(s) => s.contains(f),
            FormulaSet::Pattern(p) => match_schema(p, f).is_some(),
        }
    }
}

/// The mapping `f` of completeness with respect to a mapping.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormulaMap {
    Negation,
    Translation(TranslationMap),
}

impl FormulaMap {
    fn apply(self, f: &Formula) -> Option<Formula> {
        match self {
            FormulaMap::Negation => Some(Formula::not(f.clone())),
            FormulaMap::Translation(m) => m.apply(f).ok(),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Property {
    /// The body is not the whole language.
    Admissible,
    /// The body avoids every formula of the set.
    ConsistentWith(FormulaSet),
    /// No theorem has the form `a & ~a`; the strict variant rejects every
    /// unsatisfiable theorem.
    Consistent { strict: bool },
    /// Every wff or its image is a theorem.
    CompleteWrtMapping(FormulaMap),
    /// Every target is in the closure of the body under `rules`.
    CompleteWrt { rules: RuleSystem, targets: Vec<Formula> },
    /// A further pass of `rules` (the calculus rules when absent) adds
    /// nothing within the size cap.
    TransitivelyClosed { rules: Option<RuleSystem> },
    /// Every concrete axiom and schema is used by some first derivation.
    UsesAllAxioms,
    /// Every rule justifies some theorem.
    UsesAllRules,
}

impl Property {
    pub fn name(&self) -> &'static str {
        match self {
            Property::Admissible => "admissible",
            Property::ConsistentWith(_) => "consistent-with",
            Property::Consistent { strict: false } => "consistent",
            Property::Consistent { strict: true } => "consistent-strict",
            Property::CompleteWrtMapping(_) => "complete-mapping",
            Property::CompleteWrt { .. } => "complete-wrt",
            Property::TransitivelyClosed { .. } => "transitively-closed",
            Property::UsesAllAxioms => "uses-all-axioms",
            Property::UsesAllRules => "uses-all-rules",
        }
    }
}

/// A proof that every theorem of the unbounded body is a classical
/// tautology: all axioms and schema patterns are tautologies and every
/// rule preserves tautologies. `None` when the calculus does not qualify.
pub fn tautology_certificate(c: &Calculus) -> Option<String> {
    let tautology = |f: &Formula| is_tautology(f).unwrap_or(false);
    let schemata_ok = c
        .schemata()
        .iter()
        .all(|s| s.side_condition().is_none() && s.variable_metas().is_empty() && tautology(s.pattern()));
    let ok = c.axioms().iter().all(tautology)
        && schemata_ok
        && c.rules().rules().iter().all(|r| r.spec().preserves_tautologies());
    ok.then(|| "every axiom and schema is a tautology and every rule preserves tautologies".to_string())
}

fn is_contradiction_form(f: &Formula) -> bool {
    match f.kind() {
        crate::formula::FormulaKind::And(a, b) => b.as_negation() == Some(a),
        _ => false,
    }
}

pub fn check_property(c: &Calculus, property: &Property, bounds: &Bounds) -> Result<Verdict, AnalysisError> {
    bounds.validate()?;
    let body = enumerate_body(c, bounds);
    check_property_on(c, &body, property, bounds)
}

/// As [`check_property`], on an already enumerated body of `c`.
pub fn check_property_on(
    c: &Calculus,
    body: &BoundedBody,
    property: &Property,
    bounds: &Bounds,
) -> Result<Verdict, AnalysisError> {
    let statuses = vec![body.status()];
    let saturated = body.is_saturated();
    let cap = bounds.max_formula_size;
    let formulas: Vec<&Formula> = body.formulas().collect();
    let first = |pred: &(dyn Fn(&Formula) -> bool + Sync)| {
        par::find_first(bounds.execution, formulas.len(), |i| pred(formulas[i])).map(|i| formulas[i].clone())
    };

    Ok(match property {
        Property::Admissible => {
            if let Some(cert) = tautology_certificate(c) {
                if let Some(w) = first_wff(c, cap, bounds, |f| !is_tautology(f).unwrap_or(true))? {
                    return Ok(Verdict::holds(format!("{} is not a theorem: {cert}", w.print())));
                }
            }
            match first_wff(c, cap, bounds, |f| !body.contains(f)) {
                Ok(Some(w)) if saturated => Verdict::holds(format!("{} is not in the saturated body", w.print())),
                Ok(Some(_)) => Verdict::inconclusive("a wff is missing but the body did not saturate", statuses, vec![]),
                Ok(None) => Verdict::fails(
                    Witness::Exhausted {
                        checked: count_wffs(c, cap, bounds)?,
                    },
                    format!("every wff up to size {cap} is a theorem"),
                ),
                Err(AnalysisError::Budget(_)) => {
                    Verdict::inconclusive("the wffs within the size cap exceed the node budget", statuses, vec![])
                }
                Err(e) => return Err(e),
            }
        }
        Property::ConsistentWith(p) => match first(&|f| p.contains(f)) {
            Some(w) => Verdict::fails(Witness::Formula(w), "a theorem belongs to the forbidden set"),
            None if saturated => Verdict::holds(format!("none of the {} theorems is forbidden", body.len())),
            None => Verdict::inconclusive("no forbidden theorem, but the body did not saturate", statuses, vec![]),
        },
        Property::Consistent { strict } => {
            let bad = |f: &Formula| {
                if *strict {
                    !is_satisfiable(f).unwrap_or(true)
                } else {
                    is_contradiction_form(f)
                }
            };
            match first(&bad) {
                Some(w) => Verdict::fails(Witness::Formula(w), "a theorem is a contradiction"),
                None if saturated => Verdict::holds(format!("no contradiction among {} theorems", body.len())),
                None => match tautology_certificate(c) {
                    Some(cert) => Verdict::holds(format!(
                        "no contradiction among {} theorems, and none can appear: {cert}",
                        body.len()
                    )),
                    None => Verdict::inconclusive("no contradiction, but the body did not saturate", statuses, vec![]),
                },
            }
        }
        Property::CompleteWrtMapping(map) => {
            let wffs = match all_wffs(c, cap, bounds) {
                Ok(w) => w,
                Err(AnalysisError::Budget(_)) => {
                    return Ok(Verdict::inconclusive(
                        "the wffs within the size cap exceed the node budget",
                        statuses,
                        vec![],
                    ))
                }
                Err(e) => return Err(e),
            };
            let images: Vec<Option<Formula>> = par::map_slice(bounds.execution, &wffs, |a| map.apply(a));
            let missing = |i: usize| !body.contains(&wffs[i]) && images[i].as_ref().is_none_or(|b| !body.contains(b));
            let decidable = |i: usize| images[i].as_ref().is_some_and(|b| b.size() <= cap);
            match par::find_first(bounds.execution, wffs.len(), |i| missing(i) && decidable(i)) {
                Some(i) if saturated => Verdict::fails(
                    Witness::Formula(wffs[i].clone()),
                    "neither the formula nor its image is a theorem",
                ),
                Some(_) => Verdict::inconclusive("a formula and its image are missing, but the body did not saturate", statuses, vec![]),
                None if par::find_first(bounds.execution, wffs.len(), missing).is_some() => Verdict::inconclusive(
                    "some images exceed the size cap",
                    statuses,
                    vec![],
                ),
                None => Verdict::holds(format!("all {} wffs up to size {cap} are covered", wffs.len())),
            }
        }
        Property::CompleteWrt { rules, targets } => {
            let seed: Vec<Formula> = body.formulas().cloned().collect();
            let ctx = c.rule_context(c.pool(bounds)?);
            let closure = inference_closure(rules, &seed, &ctx, *bounds);
            match targets.iter().find(|q| !closure.contains(q)) {
                None => Verdict::holds(format!("all {} targets are in the closure", targets.len())),
                Some(q) if saturated && closure.is_saturated() => {
                    Verdict::fails(Witness::Formula(q.clone()), "a target is not in the closure of the body")
                }
                Some(_) => Verdict::inconclusive(
                    "a target is missing, but an enumeration did not saturate",
                    vec![body.status(), closure.status()],
                    vec![],
                ),
            }
        }
        Property::TransitivelyClosed { rules } => {
            let rules = rules.as_ref().unwrap_or(c.rules());
            let ctx = c.rule_context(c.pool(bounds)?).with_max_size(cap);
            let extra = body.extra_pass(rules, &ctx);
            match extra.first() {
                None if saturated => Verdict::holds("a further rule pass adds nothing within the size cap"),
                None => Verdict::inconclusive("no new formula, but the body did not saturate", statuses, vec![]),
                Some(w) if saturated => Verdict::fails(Witness::Formula(w.clone()), "a further rule pass adds this formula"),
                Some(_) => Verdict::inconclusive("a further pass adds formulas to an unsaturated body", statuses, extra),
            }
        }
        Property::UsesAllAxioms => {
            let used = used_premises(body);
            let mut unused = c
                .axioms()
                .iter()
                .enumerate()
                .filter(|(i, _)| !used.contains(&Justification::Axiom(*i)))
                .map(|(_, a)| Witness::Formula(a.clone()))
                .chain(
                    c.schemata()
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| !used.iter().any(|j| matches!(j, Justification::Schema { schema, .. } if schema == i)))
                        .map(|(_, s)| Witness::Name(s.id().to_string())),
                );
            match unused.next() {
                None => Verdict::holds("every axiom is used by some derivation"),
                Some(w) if saturated => Verdict::fails(w, "an axiom is used by no derivation in the saturated body"),
                Some(_) => Verdict::inconclusive("an axiom is unused, but the body did not saturate", statuses, vec![]),
            }
        }
        Property::UsesAllRules => {
            let used: HashSet<usize> = body
                .entries()
                .iter()
                .filter_map(|e| match &e.justification {
                    Justification::Rule { rule, .. } => Some(*rule),
                    _ => None,
                })
                .collect();
            match c.rules().rules().iter().enumerate().find(|(i, _)| !used.contains(i)) {
                None => Verdict::holds("every rule justifies some theorem"),
                Some((_, r)) if saturated => {
                    Verdict::fails(Witness::Name(r.id().to_string()), "a rule justifies no theorem of the saturated body")
                }
                Some(_) => Verdict::inconclusive("a rule is unused, but the body did not saturate", statuses, vec![]),
            }
        }
    })
}

/// Justifications of the axioms that serve as premises of some first
/// derivation.
fn used_premises(body: &BoundedBody) -> HashSet<Justification> {
    let mut used = HashSet::new();
    for e in body.entries() {
        if let Justification::Rule { premises, .. } = &e.justification {
            for &p in premises {
                let j = &body.entry(p).justification;
                match j {
                    Justification::Axiom(_) => {
                        used.insert(j.clone());
                    }
                    Justification::Schema { schema, .. } => {
                        used.insert(Justification::Schema {
                            schema: *schema,
                            assignment: Default::default(),
                        });
                    }
                    _ => {}
                }
            }
        }
    }
    used
}

fn all_wffs(c: &Calculus, cap: usize, bounds: &Bounds) -> Result<Vec<Formula>, AnalysisError> {
    wffs_by_size(c.alphabet(), cap, bounds.node_budget)
        .map(|levels| levels.into_iter().flatten().collect())
        .map_err(|_| AnalysisError::Budget(bounds.node_budget))
}

fn count_wffs(c: &Calculus, cap: usize, bounds: &Bounds) -> Result<usize, AnalysisError> {
    all_wffs(c, cap, bounds).map(|w| w.len())
}

/// The first wff in canonical order satisfying `pred`, growing the size
/// limit one step at a time so that small witnesses are found cheaply.
fn first_wff(
    c: &Calculus,
    cap: usize,
    bounds: &Bounds,
    pred: impl Fn(&Formula) -> bool + Sync,
) -> Result<Option<Formula>, AnalysisError> {
    for size in 1..=cap {
        let levels = wffs_by_size(c.alphabet(), size, bounds.node_budget).map_err(|_| AnalysisError::Budget(bounds.node_budget))?;
        let level = levels.into_iter().nth(size).unwrap_or_default();
        if let Some(i) = par::find_first(bounds.execution, level.len(), |i| pred(&level[i])) {
            return Ok(Some(level[i].clone()));
        }
    }
    Ok(None)
}

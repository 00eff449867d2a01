//! Bounded logical, algorithmic and axiomatic equivalence.

use std::collections::BTreeSet;

use crate::engine::{enumerate_body, BodyStatus, BoundedBody, Bounds, Calculus};
use crate::formula::{Formula, FormulaKind, Term};
use crate::library::TranslationMap;
use crate::par;

use super::verdict::{Verdict, Witness};
use super::AnalysisError;

/// Differences listed in an inconclusive report are capped at this many.
const REPORTED_DIFFERENCES: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EquivalenceKind {
    /// Equal bodies (up to the translation).
    Logical,
    /// Equal bodies and equal realized axioms.
    Algorithmic,
    /// Equal bodies and equal rule systems.
    Axiomatic,
}

impl EquivalenceKind {
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "logical" => Some(EquivalenceKind::Logical),
            "algorithmic" => Some(EquivalenceKind::Algorithmic),
            "axiomatic" => Some(EquivalenceKind::Axiomatic),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EquivalenceKind::Logical => "logical",
            EquivalenceKind::Algorithmic => "algorithmic",
            EquivalenceKind::Axiomatic => "axiomatic",
        }
    }
}

/// Names of the symbols a formula uses, with primes stripped from
/// variables.
pub fn formula_symbols(f: &Formula) -> BTreeSet<String> {
    fn term(t: &Term, out: &mut BTreeSet<String>) {
        match t {
            Term::Var(v) => {
                out.insert(v.as_str().trim_end_matches('\'').to_string());
            }
            Term::App(g, args) => {
                out.insert(g.to_string());
                args.iter().for_each(|a| term(a, out));
            }
        }
    }
    fn walk(f: &Formula, out: &mut BTreeSet<String>) {
        match f.kind() {
            FormulaKind::Atom(a) => {
                out.insert(a.to_string());
            }
            FormulaKind::Pred(p, args) => {
                out.insert(p.to_string());
                args.iter().for_each(|a| term(a, out));
            }
            FormulaKind::Equal(a, b) => {
                out.insert("=".into());
                term(a, out);
                term(b, out);
            }
            FormulaKind::Not(a) => {
                out.insert("~".into());
                walk(a, out);
            }
            FormulaKind::Forall(x, a) | FormulaKind::Exists(x, a) => {
                let kw = if matches!(f.kind(), FormulaKind::Forall(..)) { "forall" } else { "exists" };
                out.insert(kw.into());
                out.insert(x.as_str().trim_end_matches('\'').to_string());
                walk(a, out);
            }
            _ => {
                let (c, a, b) = f.as_binary().expect("binary node");
                out.insert(c.ascii().into());
                walk(a, out);
                walk(b, out);
            }
        }
    }
    let mut out = BTreeSet::new();
    walk(f, &mut out);
    out
}

/// Whether two calculi have the same definition: alphabet, axioms,
/// schemata, schema mode and rule keys. Such calculi have the same body
/// whatever the bounds.
pub fn same_definition(c: &Calculus, d: &Calculus) -> bool {
    let axioms = |x: &Calculus| x.axioms().iter().cloned().collect::<BTreeSet<_>>();
    let schemata = |x: &Calculus| {
        x.schemata()
            .iter()
            .map(|s| (s.pattern().clone(), s.metavariables().to_vec(), s.variable_metas().to_vec(), s.side_condition().cloned()))
            .collect::<Vec<_>>()
    };
    c.alphabet() == d.alphabet()
        && c.mode() == d.mode()
        && axioms(c) == axioms(d)
        && schemata(c).len() == schemata(d).len()
        && schemata(c).iter().all(|s| schemata(d).contains(s))
        && c.rules().keys() == d.rules().keys()
}

/// Compares `c` and `d` under `map` (identity when omitted, which needs equal
/// alphabets).
///
/// Bodies are compared on the shared fragment, the formulas built only from
/// symbols of both alphabets, within the size cap: every translated theorem
/// of `c` must be a theorem of `d`, and every theorem of `d` in the image
/// of the map must come from a theorem of `c`. A difference is a
/// counterexample only when the body missing it saturated. Holds needs
/// both bodies saturated and the identity map; a proper translation is not
/// a bijection, so at best the verdict is inconclusive.
pub fn compare_calculi(
    kind: EquivalenceKind,
    c: &Calculus,
    d: &Calculus,
    bounds: &Bounds,
    map: Option<TranslationMap>,
) -> Result<Verdict, AnalysisError> {
    bounds.validate()?;
    let same_alphabet = c.alphabet() == d.alphabet();
    let map = match map {
        Some(m) => m,
        None if same_alphabet => TranslationMap::Identity,
        None => return Err(AnalysisError::AlphabetMismatch("a translation map is required".into())),
    };
    if map == TranslationMap::Identity && !same_alphabet {
        return Err(AnalysisError::AlphabetMismatch("the identity map needs equal alphabets".into()));
    }
    if kind == EquivalenceKind::Axiomatic && !same_alphabet {
        return Err(AnalysisError::AlphabetMismatch(
            "axiomatic equivalence compares calculi over one alphabet".into(),
        ));
    }
    if map == TranslationMap::Identity && same_definition(c, d) {
        return Ok(Verdict::holds("the calculi have identical definitions"));
    }

    if kind == EquivalenceKind::Axiomatic {
        let (kc, kd) = (c.rules().keys(), d.rules().keys());
        if let Some(k) = kc.symmetric_difference(&kd).next() {
            let side = if kc.contains(k) { "first" } else { "second" };
            return Ok(Verdict::fails(
                Witness::Name(k.clone()),
                format!("rule `{k}` is only in the {side} rule system"),
            ));
        }
    }
    if kind == EquivalenceKind::Algorithmic {
        let ac = c.realized_axiom_set(bounds)?;
        let ad = d.realized_axiom_set(bounds)?;
        let image: BTreeSet<Formula> = ac.iter().map(|f| map.apply(f)).collect::<Result<_, _>>()?;
        if let Some(w) = image.difference(&ad).next() {
            return Ok(Verdict::fails(
                Witness::Formula(w.clone()),
                "a translated axiom of the first calculus is not an axiom of the second",
            ));
        }
        for w in ad.difference(&image) {
            if map == TranslationMap::Identity || in_image(w, map)? {
                return Ok(Verdict::fails(
                    Witness::Formula(w.clone()),
                    "an axiom of the second calculus is not the image of an axiom of the first",
                ));
            }
        }
    }

    let tc = enumerate_body(c, bounds);
    let td = enumerate_body(d, bounds);
    let statuses = vec![tc.status(), td.status()];
    let shared: BTreeSet<String> = c
        .alphabet()
        .symbol_names()
        .intersection(&d.alphabet().symbol_names())
        .cloned()
        .collect();
    let in_shared = |f: &Formula| formula_symbols(f).is_subset(&shared);
    let cap = bounds.max_formula_size;

    let forward = missing_images(&tc, &td, map, cap, &in_shared, bounds)?;
    if let (Some(w), BodyStatus::Saturated) = (forward.first(), td.status()) {
        return Ok(Verdict::fails(
            Witness::Formula(w.clone()),
            "a translated theorem of the first calculus is not a theorem of the saturated second body",
        ));
    }
    let backward = missing_preimages(&tc, &td, map, cap, &in_shared, bounds)?;
    if let (Some(w), BodyStatus::Saturated) = (backward.first(), tc.status()) {
        return Ok(Verdict::fails(
            Witness::Formula(w.clone()),
            "a theorem of the second calculus has no preimage in the saturated first body",
        ));
    }

    let mut difference: Vec<Formula> = forward.into_iter().chain(backward).collect();
    difference.sort();
    difference.dedup();
    difference.truncate(REPORTED_DIFFERENCES);
    let both_saturated = tc.is_saturated() && td.is_saturated();
    Ok(match (difference.is_empty(), both_saturated, map) {
        (true, true, TranslationMap::Identity) => Verdict::holds(format!(
            "saturated bodies of {} theorems agree within size {cap}",
            tc.len()
        )),
        (true, _, TranslationMap::Identity) => Verdict::inconclusive(
            "no difference within bounds, but a body did not saturate",
            statuses,
            difference,
        ),
        (true, _, _) => Verdict::inconclusive(
            format!(
                "no difference on the shared fragment within bounds; `{}` is not a bijection, so full equivalence is not decided",
                map.name()
            ),
            statuses,
            difference,
        ),
        (false, _, _) => Verdict::inconclusive("differences remain where the bodies did not saturate", statuses, difference),
    })
}

fn in_image(f: &Formula, map: TranslationMap) -> Result<bool, AnalysisError> {
    Ok(match map.inverse().apply(f) {
        Ok(pre) => map.apply(&pre)? == *f,
        Err(_) => false,
    })
}

/// Translated theorems of `tc` on the shared fragment within the cap that
/// are missing from `td`.
fn missing_images(
    tc: &BoundedBody,
    td: &BoundedBody,
    map: TranslationMap,
    cap: usize,
    in_shared: &(dyn Fn(&Formula) -> bool + Sync),
    bounds: &Bounds,
) -> Result<Vec<Formula>, AnalysisError> {
    let formulas: Vec<&Formula> = tc.formulas().collect();
    let images = par::map_slice(bounds.execution, &formulas, |f| map.apply(f));
    let mut out = Vec::new();
    for g in images {
        let g = g?;
        if g.size() <= cap && in_shared(&g) && !td.contains(&g) {
            out.push(g);
        }
    }
    Ok(out)
}

/// Theorems of `td` in the image of the map whose preimage is on the
/// shared fragment within the cap but missing from `tc`.
fn missing_preimages(
    tc: &BoundedBody,
    td: &BoundedBody,
    map: TranslationMap,
    cap: usize,
    in_shared: &(dyn Fn(&Formula) -> bool + Sync),
    bounds: &Bounds,
) -> Result<Vec<Formula>, AnalysisError> {
    let formulas: Vec<&Formula> = td.formulas().collect();
    let inverse = map.inverse();
    let pre = par::map_slice(bounds.execution, &formulas, |g| {
        let p = inverse.apply(g).ok()?;
        (map.apply(&p).ok()? == **g && in_shared(g)).then_some(p)
    });
    Ok(pre
        .into_iter()
        .flatten()
        .filter(|p| p.size() <= cap && !tc.contains(p))
        .collect())
}

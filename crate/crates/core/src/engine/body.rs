//! Staged, semi-naive body enumeration.

use std::collections::{BTreeSet, HashMap};

use crate::formula::{Formula, MetaAssignment};
use crate::par::{self, Execution};

use super::derivation::Derivation;
use super::rule::{apply_spec, Pairing, RuleContext, RuleSpec, RuleSystem};
use super::{BodyStatus, Bounds, EngineError};

/// How a theorem first entered the body. The derived order is the
/// tie-break used to pick a canonical first derivation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Justification {
    /// A concrete axiom, by position in the calculus.
    Axiom(usize),
    /// An instance of a schema; an empty assignment denotes the pattern
    /// itself taken as an axiom.
    Schema { schema: usize, assignment: MetaAssignment },
    /// A premise seeded into an inference closure.
    Premise,
    /// A rule application; `premises` index earlier theorems.
    Rule { rule: usize, premises: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremEntry {
    pub formula: Formula,
    pub stage: usize,
    pub justification: Justification,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BodyStats {
    /// Candidate conclusions produced by rule passes, before deduplication.
    pub candidates: usize,
    /// Rule passes run.
    pub passes: usize,
}

/// A staged theorem set with first derivations and a completion status.
///
/// Entries are ordered by stage and, within a stage, canonically, so the
/// layout does not depend on how rule applications were scheduled.
#[derive(Clone, Debug)]
pub struct BoundedBody {
    entries: Vec<TheoremEntry>,
    index: HashMap<Formula, usize>,
    stage_ends: Vec<usize>,
    status: BodyStatus,
    bounds: Bounds,
    rule_ids: Vec<String>,
    schema_ids: Vec<String>,
    stats: BodyStats,
}

impl BoundedBody {
    /// Rebuilds a body from its entries, for instance after reading an
    /// exported report. Entries must be in stage order starting at stage 1,
    /// formulas distinct, and every reference in range and to an earlier
    /// entry.
    pub fn from_entries(
        entries: Vec<TheoremEntry>,
        status: BodyStatus,
        bounds: Bounds,
        rule_ids: Vec<String>,
        schema_ids: Vec<String>,
    ) -> Result<BoundedBody, EngineError> {
        let bad = |n: usize, what: &str| EngineError::InvalidCalculus(format!("body entry {}: {what}", n + 1));
        let mut index = HashMap::with_capacity(entries.len());
        let mut stage_ends = Vec::new();
        for (n, e) in entries.iter().enumerate() {
            let previous = if n == 0 { 1 } else { entries[n - 1].stage };
            if e.stage != previous && e.stage != previous + 1 {
                return Err(bad(n, "stages must start at 1 and increase by at most 1"));
            }
            if e.stage != previous {
                stage_ends.push(n);
            }
            match &e.justification {
                Justification::Axiom(_) | Justification::Premise => {}
                Justification::Schema { schema, .. } => {
                    if *schema >= schema_ids.len() {
                        return Err(bad(n, "unknown schema"));
                    }
                }
                Justification::Rule { rule, premises } => {
                    if *rule >= rule_ids.len() {
                        return Err(bad(n, "unknown rule"));
                    }
                    if premises.iter().any(|&p| p >= n || entries[p].stage >= e.stage) {
                        return Err(bad(n, "premises must come from earlier stages"));
                    }
                }
            }
            if index.insert(e.formula.clone(), n).is_some() {
                return Err(bad(n, "repeated formula"));
            }
        }
        stage_ends.push(entries.len());
        Ok(BoundedBody {
            entries,
            index,
            stage_ends,
            status,
            bounds,
            rule_ids,
            schema_ids,
            stats: BodyStats::default(),
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn status(&self) -> BodyStatus {
        self.status
    }

    pub fn is_saturated(&self) -> bool {
        self.status == BodyStatus::Saturated
    }

    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    pub fn stats(&self) -> BodyStats {
        self.stats
    }

    pub fn entries(&self) -> &[TheoremEntry] {
        &self.entries
    }

    pub fn entry(&self, i: usize) -> &TheoremEntry {
        &self.entries[i]
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.index.contains_key(f)
    }

    pub fn index_of(&self, f: &Formula) -> Option<usize> {
        self.index.get(f).copied()
    }

    pub fn get(&self, f: &Formula) -> Option<&TheoremEntry> {
        self.index_of(f).map(|i| &self.entries[i])
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.entries.iter().map(|e| &e.formula)
    }

    /// Theorems in canonical order.
    pub fn formula_set(&self) -> BTreeSet<Formula> {
        self.formulas().cloned().collect()
    }

    /// Number of completed stages.
    pub fn stage_count(&self) -> usize {
        self.stage_ends.len()
    }

    /// The cumulative stage `T_n` (1-based).
    pub fn stage(&self, n: usize) -> &[TheoremEntry] {
        match n {
            0 => &[],
            n => &self.entries[..self.stage_ends[(n - 1).min(self.stage_ends.len() - 1)]],
        }
    }

    pub fn rule_ids(&self) -> &[String] {
        &self.rule_ids
    }

    pub fn schema_ids(&self) -> &[String] {
        &self.schema_ids
    }

    pub fn derivation(&self, goal: &Formula) -> Option<Derivation> {
        self.index_of(goal).map(|i| Derivation::extract(self, i))
    }

    /// Formulas within the size cap that one full pass of `rules` over the
    /// body adds. Empty for every saturated body.
    pub fn extra_pass(&self, rules: &RuleSystem, ctx: &RuleContext) -> Vec<Formula> {
        let formulas: Vec<Formula> = self.formulas().cloned().collect();
        let idx = Indexes::build(&formulas);
        let mut out: Vec<Formula> = generate(
            rules,
            ctx,
            &formulas,
            &self.index,
            &idx,
            0,
            self.bounds.max_formula_size,
            true,
            self.bounds.execution,
        )
        .into_iter()
        .map(|c| c.formula)
        .collect();
        out.sort();
        out.dedup();
        out
    }
}

/// Implications by antecedent and disjunctions by left disjunct.
#[derive(Default)]
struct Indexes {
    by_antecedent: HashMap<Formula, Vec<usize>>,
    by_left_disjunct: HashMap<Formula, Vec<usize>>,
}

impl Indexes {
    fn build(formulas: &[Formula]) -> Self {
        let mut idx = Indexes::default();
        idx.extend(formulas, 0);
        idx
    }

    fn extend(&mut self, formulas: &[Formula], start: usize) {
        for (i, f) in formulas.iter().enumerate().skip(start) {
            if let Some((a, _)) = f.as_implication() {
                self.by_antecedent.entry(a.clone()).or_default().push(i);
            }
            if let Some((a, _)) = f.as_disjunction() {
                self.by_left_disjunct.entry(a.clone()).or_default().push(i);
            }
        }
    }
}

struct Candidate {
    formula: Formula,
    rule: usize,
    premises: Vec<usize>,
}

/// One semi-naive pass: every rule applied to every premise tuple over
/// `all` that uses at least one formula at index `>= new_start`.
#[allow(clippy::too_many_arguments)]
fn generate(
    rules: &RuleSystem,
    ctx: &RuleContext,
    all: &[Formula],
    known: &HashMap<Formula, usize>,
    idx: &Indexes,
    new_start: usize,
    cap: usize,
    exclude_known: bool,
    exec: Execution,
) -> Vec<Candidate> {
    let keep = |f: &Formula| f.size() <= cap && !(exclude_known && known.contains_key(f));
    let mut out = Vec::new();
    for (ri, rule) in rules.rules().iter().enumerate() {
        let spec = rule.spec();
        let emit = |premises: Vec<usize>, sink: &mut Vec<Candidate>| {
            let ps: Vec<Formula> = premises.iter().map(|&i| all[i].clone()).collect();
            for c in apply_spec(spec, &ps, ctx) {
                if keep(&c) {
                    sink.push(Candidate {
                        formula: c,
                        rule: ri,
                        premises: premises.clone(),
                    });
                }
            }
        };
        match rule.arity() {
            0 => {
                if new_start == 0 {
                    emit(Vec::new(), &mut out);
                }
            }
            1 => out.extend(par::flat_map_range(exec, new_start, all.len(), |i| {
                let mut sink = Vec::new();
                emit(vec![i], &mut sink);
                sink
            })),
            2 => out.extend(binary_pass(spec, all, known, idx, new_start, exec, &|p, s| emit(p, s))),
            k => {
                for tuple in tuples_with_new(all.len(), new_start, k) {
                    emit(tuple, &mut out);
                }
            }
        }
    }
    out
}

type Emit<'a> = dyn Fn(Vec<usize>, &mut Vec<Candidate>) + Sync + 'a;

fn binary_pass(
    spec: &RuleSpec,
    all: &[Formula],
    known: &HashMap<Formula, usize>,
    idx: &Indexes,
    new_start: usize,
    exec: Execution,
    emit: &Emit<'_>,
) -> Vec<Candidate> {
    let n = all.len();
    match spec.pairing() {
        Pairing::Implication => par::flat_map_range(exec, new_start, n, |i| {
            let mut sink = Vec::new();
            let x = &all[i];
            if let Some((a, _)) = x.as_implication() {
                if let Some(&j) = known.get(a) {
                    if j < n {
                        emit(vec![j, i], &mut sink);
                    }
                }
            }
            if let Some(majors) = idx.by_antecedent.get(x) {
                for &m in majors {
                    if m < new_start {
                        emit(vec![i, m], &mut sink);
                    }
                }
            }
            sink
        }),
        Pairing::Cut => par::flat_map_range(exec, new_start, n, |i| {
            let mut sink = Vec::new();
            let x = &all[i];
            if let Some((a, _)) = x.as_disjunction() {
                if let Some(seconds) = idx.by_left_disjunct.get(&Formula::not(a.clone())) {
                    for &j in seconds {
                        emit(vec![i, j], &mut sink);
                    }
                }
                if let Some(inner) = a.as_negation() {
                    if let Some(firsts) = idx.by_left_disjunct.get(inner) {
                        for &j in firsts {
                            if j < new_start {
                                emit(vec![j, i], &mut sink);
                            }
                        }
                    }
                }
            }
            sink
        }),
        Pairing::Generic => par::flat_map_range(exec, new_start, n, |i| {
            let mut sink = Vec::new();
            for j in 0..n {
                emit(vec![i, j], &mut sink);
                if j < new_start {
                    emit(vec![j, i], &mut sink);
                }
            }
            sink
        }),
    }
}

/// All `k`-tuples over `0..n` with at least one component `>= new_start`.
fn tuples_with_new(n: usize, new_start: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(n: usize, new_start: usize, k: usize, has_new: bool, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            if has_new {
                out.push(cur.clone());
            }
            return;
        }
        for i in 0..n {
            cur.push(i);
            rec(n, new_start, k, has_new || i >= new_start, cur, out);
            cur.pop();
        }
    }
    rec(n, new_start, k, false, &mut cur, &mut out);
    out
}

/// Runs stages 2..=max_stage from the seeded stage 1. With `stop_at`, the
/// run ends as soon as that formula is a theorem.
pub(crate) fn saturate(
    seed: Vec<(Formula, Justification)>,
    rules: &RuleSystem,
    ctx: &RuleContext,
    bounds: Bounds,
    schema_ids: Vec<String>,
    stop_at: Option<&Formula>,
) -> BoundedBody {
    let mut seed: Vec<(Formula, Justification)> = seed
        .into_iter()
        .filter(|(f, _)| f.size() <= bounds.max_formula_size)
        .collect();
    seed.sort();
    seed.dedup_by(|b, a| a.0 == b.0);

    let mut body = BoundedBody {
        entries: Vec::new(),
        index: HashMap::new(),
        stage_ends: Vec::new(),
        status: BodyStatus::StageCapHit,
        bounds,
        rule_ids: rules.rules().iter().map(|r| r.id().to_string()).collect(),
        schema_ids,
        stats: BodyStats::default(),
    };
    if seed.len() > bounds.node_budget {
        body.status = BodyStatus::BudgetExceeded;
        return body;
    }
    for (formula, justification) in seed {
        body.index.insert(formula.clone(), body.entries.len());
        body.entries.push(TheoremEntry {
            formula,
            stage: 1,
            justification,
        });
    }
    body.stage_ends.push(body.entries.len());

    let ctx = match ctx.max_size {
        Some(_) => ctx.clone(),
        None => ctx.clone().with_max_size(bounds.max_formula_size),
    };
    let mut formulas: Vec<Formula> = body.formulas().cloned().collect();
    let mut idx = Indexes::build(&formulas);
    let mut new_start = 0;
    let found = |b: &BoundedBody| stop_at.is_some_and(|g| b.contains(g));
    if found(&body) {
        return body;
    }
    for stage in 2..=bounds.max_stage {
        let mut cands = generate(
            rules,
            &ctx,
            &formulas,
            &body.index,
            &idx,
            new_start,
            bounds.max_formula_size,
            true,
            bounds.execution,
        );
        body.stats.passes += 1;
        body.stats.candidates += cands.len();
        if cands.is_empty() {
            body.status = BodyStatus::Saturated;
            return body;
        }
        cands.sort_unstable_by(|a, b| {
            a.formula
                .cmp(&b.formula)
                .then(a.rule.cmp(&b.rule))
                .then_with(|| a.premises.cmp(&b.premises))
        });
        cands.dedup_by(|b, a| a.formula == b.formula);
        if body.entries.len() + cands.len() > bounds.node_budget {
            body.status = BodyStatus::BudgetExceeded;
            return body;
        }
        new_start = body.entries.len();
        for c in cands {
            body.index.insert(c.formula.clone(), body.entries.len());
            formulas.push(c.formula.clone());
            body.entries.push(TheoremEntry {
                formula: c.formula,
                stage,
                justification: Justification::Rule {
                    rule: c.rule,
                    premises: c.premises,
                },
            });
        }
        body.stage_ends.push(body.entries.len());
        idx.extend(&formulas, new_start);
        if found(&body) {
            return body;
        }
    }
    body.status = BodyStatus::StageCapHit;
    body
}

/// One application layer: every conclusion of every rule on every premise
/// tuple over `premises`, without size filtering.
pub fn consequence_step(
    rules: &RuleSystem,
    premises: &[Formula],
    ctx: &RuleContext,
    budget: usize,
) -> Result<BTreeSet<Formula>, EngineError> {
    let mut all: Vec<Formula> = premises.to_vec();
    all.sort();
    all.dedup();
    let known: HashMap<Formula, usize> = all.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
    let idx = Indexes::build(&all);
    let out: BTreeSet<Formula> = generate(rules, ctx, &all, &known, &idx, 0, usize::MAX, false, Execution::Sequential)
        .into_iter()
        .map(|c| c.formula)
        .collect();
    if out.len() > budget {
        return Err(EngineError::BudgetExceeded(budget));
    }
    Ok(out)
}

/// The closure of `premises` under `rules` within `bounds`. The premises
/// form stage 1.
pub fn inference_closure(rules: &RuleSystem, premises: &[Formula], ctx: &RuleContext, bounds: Bounds) -> BoundedBody {
    let seed = premises.iter().map(|f| (f.clone(), Justification::Premise)).collect();
    saturate(seed, rules, ctx, bounds, Vec::new(), None)
}

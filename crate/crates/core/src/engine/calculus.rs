//! The calculus triad and its bounded body.

use std::collections::BTreeSet;

use crate::formula::{
    enumerate_terms, instantiate_schema, wffs_by_size, Alphabet, Formula, LanguageKind, MetaAssignment, Schema,
    SideCondition, Symbol, Term,
};
use crate::par;

use super::body::{saturate, BoundedBody, Justification};
use super::derivation::Derivation;
use super::rule::{AxiomIndex, RuleContext, RuleSpec, RuleSystem};
use super::{BodyStatus, Bounds, EngineError};

/// How schemata enter the body.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SchemaMode {
    /// Patterns are concrete axioms over object variables; the
    /// substitution rule produces their instances.
    SubstitutionRule,
    /// Patterns are instantiated over the finite instantiation pool.
    OnDemand,
}

impl SchemaMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SchemaMode::SubstitutionRule => "substitution_rule",
            SchemaMode::OnDemand => "on_demand",
        }
    }
}

/// A calculus `C = (A, H, T)`: the axiom system and rule system over an
/// alphabet. The body is computed by [`enumerate_body`].
#[derive(Clone, Debug)]
pub struct Calculus {
    name: String,
    alphabet: Alphabet,
    axioms: Vec<Formula>,
    schemata: Vec<Schema>,
    rules: RuleSystem,
    mode: SchemaMode,
    pool_variables: Vec<Symbol>,
    extra_pool: Vec<Formula>,
}

impl Calculus {
    pub fn new(
        name: &str,
        alphabet: Alphabet,
        axioms: Vec<Formula>,
        schemata: Vec<Schema>,
        rules: RuleSystem,
        mode: SchemaMode,
    ) -> Result<Calculus, EngineError> {
        for a in &axioms {
            alphabet.check(a)?;
        }
        for s in &schemata {
            alphabet.check_with(s.pattern(), s.metavariables())?;
        }
        let ids: BTreeSet<&str> = schemata.iter().map(Schema::id).collect();
        if ids.len() != schemata.len() {
            return Err(EngineError::InvalidCalculus("schema identifiers must be unique".into()));
        }
        if mode == SchemaMode::SubstitutionRule && !rules.contains(&RuleSpec::Substitution) {
            return Err(EngineError::InvalidCalculus(
                "substitution-rule schema mode requires the substitution rule".into(),
            ));
        }
        let mut pool_variables: Vec<Symbol> = alphabet.variables().to_vec();
        if alphabet.kind() == LanguageKind::FirstOrder {
            pool_variables.extend(alphabet.individual_variables().iter().cloned());
        }
        Ok(Calculus {
            name: name.to_string(),
            alphabet,
            axioms,
            schemata,
            rules,
            mode,
            pool_variables,
            extra_pool: Vec::new(),
        })
    }

    /// Restricts the instantiation pool to wffs over `vars` (constants are
    /// always included).
    pub fn with_pool_variables(mut self, vars: &[&str]) -> Result<Calculus, EngineError> {
        for v in vars {
            if !self.alphabet.is_variable(v) && !self.alphabet.is_individual_variable(v) {
                return Err(EngineError::InvalidCalculus(format!("pool variable `{v}` is not declared")));
            }
        }
        self.pool_variables = vars.iter().map(|v| Symbol::new(v)).collect();
        Ok(self)
    }

    /// Adds formulas to the instantiation pool.
    pub fn with_extra_pool(mut self, formulas: impl IntoIterator<Item = Formula>) -> Calculus {
        self.extra_pool.extend(formulas);
        self
    }

    pub fn with_rules(mut self, rules: RuleSystem) -> Result<Calculus, EngineError> {
        if self.mode == SchemaMode::SubstitutionRule && !rules.contains(&RuleSpec::Substitution) {
            return Err(EngineError::InvalidCalculus(
                "substitution-rule schema mode requires the substitution rule".into(),
            ));
        }
        self.rules = rules;
        Ok(self)
    }

    /// Adds concrete axioms.
    pub fn with_axioms(mut self, axioms: impl IntoIterator<Item = Formula>) -> Result<Calculus, EngineError> {
        for a in axioms {
            self.alphabet.check(&a)?;
            if !self.axioms.contains(&a) {
                self.axioms.push(a);
            }
        }
        Ok(self)
    }

    pub fn with_name(mut self, name: &str) -> Calculus {
        self.name = name.to_string();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn axioms(&self) -> &[Formula] {
        &self.axioms
    }

    pub fn schemata(&self) -> &[Schema] {
        &self.schemata
    }

    pub fn rules(&self) -> &RuleSystem {
        &self.rules
    }

    pub fn mode(&self) -> SchemaMode {
        self.mode
    }

    pub fn pool_variables(&self) -> &[Symbol] {
        &self.pool_variables
    }

    pub fn extra_pool(&self) -> &[Formula] {
        &self.extra_pool
    }

    /// The instantiation pool: wffs over the pool variables up to
    /// `bounds.pool_size`, plus the extra pool formulas.
    pub fn pool(&self, bounds: &Bounds) -> Result<Vec<Formula>, EngineError> {
        let restricted = self.alphabet.restricted_to(&self.pool_variables);
        let mut pool: Vec<Formula> = wffs_by_size(&restricted, bounds.pool_size, bounds.node_budget)
            .map_err(|_| EngineError::BudgetExceeded(bounds.node_budget))?
            .into_iter()
            .flatten()
            .collect();
        pool.extend(self.extra_pool.iter().cloned());
        pool.sort();
        pool.dedup();
        Ok(pool)
    }

    /// Whether `f` is a concrete axiom or matches a schema (as a pattern in
    /// substitution-rule mode, as an instance otherwise).
    pub fn is_axiom(&self, f: &Formula) -> bool {
        self.axiom_index().contains(f)
    }

    pub(crate) fn axiom_index(&self) -> AxiomIndex {
        match self.mode {
            SchemaMode::OnDemand => AxiomIndex::new(self.axioms.iter().cloned(), self.schemata.clone()),
            SchemaMode::SubstitutionRule => AxiomIndex::new(
                self.axioms
                    .iter()
                    .cloned()
                    .chain(self.schemata.iter().map(|s| s.pattern().clone())),
                Vec::new(),
            ),
        }
    }

    /// The context rule algorithms run in: pool parameters, substitutable
    /// variables, axiom membership.
    pub fn rule_context(&self, pool: Vec<Formula>) -> RuleContext {
        RuleContext::new(pool, self.alphabet.variables().to_vec()).with_axioms(self.axiom_index())
    }

    /// Stage 1: concrete axioms plus schema patterns or pool instances,
    /// within the size cap.
    pub fn realize_axioms(&self, pool: &[Formula], bounds: &Bounds) -> Vec<(Formula, Justification)> {
        let cap = bounds.max_formula_size;
        let mut out: Vec<(Formula, Justification)> = self
            .axioms
            .iter()
            .enumerate()
            .map(|(i, f)| (f.clone(), Justification::Axiom(i)))
            .collect();
        match self.mode {
            SchemaMode::SubstitutionRule => {
                for (i, s) in self.schemata.iter().enumerate() {
                    out.push((
                        s.pattern().clone(),
                        Justification::Schema {
                            schema: i,
                            assignment: MetaAssignment::new(),
                        },
                    ));
                }
            }
            SchemaMode::OnDemand => {
                let restricted = self.alphabet.restricted_to(&self.pool_variables);
                let vars: Vec<Symbol> = restricted.individual_variables().to_vec();
                let terms: Vec<Term> = enumerate_terms(&restricted, bounds.pool_size.saturating_sub(1).max(1))
                    .into_iter()
                    .flatten()
                    .collect();
                for (i, s) in self.schemata.iter().enumerate() {
                    for (f, sigma) in instances(s, pool, &vars, &terms, cap, bounds) {
                        out.push((
                            f,
                            Justification::Schema {
                                schema: i,
                                assignment: sigma,
                            },
                        ));
                    }
                }
            }
        }
        out.retain(|(f, _)| f.size() <= cap);
        out
    }

    /// Realized axioms as a set.
    pub fn realized_axiom_set(&self, bounds: &Bounds) -> Result<BTreeSet<Formula>, EngineError> {
        let pool = self.pool(bounds)?;
        Ok(self.realize_axioms(&pool, bounds).into_iter().map(|(f, _)| f).collect())
    }
}

/// Instances of `schema` whose formula metavariables range over `pool`,
/// variable metavariables over `vars` and term metavariables over `terms`,
/// keeping those of size at most `cap`.
fn instances(
    schema: &Schema,
    pool: &[Formula],
    vars: &[Symbol],
    terms: &[Term],
    cap: usize,
    bounds: &Bounds,
) -> Vec<(Formula, MetaAssignment)> {
    let determined = schema.side_condition().map(|SideCondition::TermInstance { instance, .. }| instance.clone());
    let metas: Vec<(Symbol, usize)> = schema
        .occurrences()
        .into_iter()
        .filter(|(m, n)| *n > 0 && Some(m) != determined.as_ref())
        .collect();
    let fixed = schema.pattern().size() - schema.occurrences().iter().map(|(_, n)| n).sum::<usize>();
    let term_metas: Vec<Symbol> = match schema.side_condition() {
        Some(SideCondition::TermInstance { term, .. }) => vec![term.clone()],
        None => Vec::new(),
    };
    let mut var_choices: Vec<MetaAssignment> = vec![MetaAssignment::new()];
    for v in schema.variable_metas() {
        var_choices = var_choices
            .into_iter()
            .flat_map(|a| {
                vars.iter().map(move |x| {
                    let mut b = a.clone();
                    b.bind_variable(v.clone(), x.clone());
                    b
                })
            })
            .collect();
    }
    for t in &term_metas {
        var_choices = var_choices
            .into_iter()
            .flat_map(|a| {
                terms.iter().map(move |x| {
                    let mut b = a.clone();
                    b.bind_term(t.clone(), x.clone());
                    b
                })
            })
            .collect();
    }
    let min_rest: Vec<usize> = (0..=metas.len())
        .map(|k| metas[k..].iter().map(|(_, n)| n).sum())
        .collect();

    #[allow(clippy::too_many_arguments)]
    fn rec(
        k: usize,
        used: usize,
        metas: &[(Symbol, usize)],
        min_rest: &[usize],
        pool: &[Formula],
        cap: usize,
        sigma: &mut MetaAssignment,
        out: &mut Vec<MetaAssignment>,
    ) {
        if k == metas.len() {
            out.push(sigma.clone());
            return;
        }
        let (m, n) = &metas[k];
        for f in pool {
            if used + n * f.size() + min_rest[k + 1] > cap {
                break;
            }
            sigma.bind(m.clone(), f.clone());
            rec(k + 1, used + n * f.size(), metas, min_rest, pool, cap, sigma, out);
        }
    }

    let first_choices = if metas.is_empty() { 1 } else { pool.len() };
    par::flat_map_range(bounds.execution, 0, first_choices, |first| {
        let mut assignments = Vec::new();
        for base in &var_choices {
            let mut sigma = base.clone();
            if metas.is_empty() {
                assignments.push(sigma);
                continue;
            }
            let (m, n) = &metas[0];
            let f = &pool[first];
            let used = fixed + n * f.size();
            if used + min_rest[1] > cap {
                continue;
            }
            sigma.bind(m.clone(), f.clone());
            rec(1, used, &metas, &min_rest, pool, cap, &mut sigma, &mut assignments);
        }
        assignments
            .into_iter()
            .filter_map(|sigma| {
                let f = instantiate_schema(schema, &sigma).ok()?;
                (f.size() <= cap).then_some((f, sigma))
            })
            .collect()
    })
}

/// The bounded body of `calculus`.
pub fn enumerate_body(calculus: &Calculus, bounds: &Bounds) -> BoundedBody {
    run(calculus, bounds, None)
}

fn run(calculus: &Calculus, bounds: &Bounds, stop_at: Option<&Formula>) -> BoundedBody {
    let schema_ids = calculus.schemata.iter().map(|s| s.id().to_string()).collect();
    let pool = match calculus.pool(bounds) {
        Ok(p) => p,
        Err(_) => {
            return saturate(
                Vec::new(),
                calculus.rules(),
                &RuleContext::default(),
                Bounds { node_budget: 0, ..*bounds },
                schema_ids,
                None,
            )
        }
    };
    let seed = calculus.realize_axioms(&pool, bounds);
    let ctx = calculus.rule_context(pool);
    saturate(seed, calculus.rules(), &ctx, *bounds, schema_ids, stop_at)
}

#[derive(Clone, Debug)]
pub enum DeriveOutcome {
    Found(Derivation),
    /// The goal is not in the bounded body. A saturated status means it is
    /// not derivable within the size cap; otherwise the search was cut off.
    NotFound(BodyStatus),
}

impl DeriveOutcome {
    pub fn derivation(&self) -> Option<&Derivation> {
        match self {
            DeriveOutcome::Found(d) => Some(d),
            DeriveOutcome::NotFound(_) => None,
        }
    }
}

/// Searches for `goal` by body enumeration, with the subformulas of the
/// goal added to the instantiation pool.
pub fn derive(calculus: &Calculus, goal: &Formula, bounds: &Bounds) -> DeriveOutcome {
    let extended = calculus.clone().with_extra_pool(goal.subformulas());
    let body = run(&extended, bounds, Some(goal));
    match body.derivation(goal) {
        Some(d) => DeriveOutcome::Found(d),
        None => DeriveOutcome::NotFound(body.status()),
    }
}

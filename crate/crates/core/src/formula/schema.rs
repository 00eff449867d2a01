//! Axiom schemata: formula patterns over metavariables.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::alphabet::Alphabet;
use super::parse::parse_formula_with;
use super::subst::substitute_term;
use super::syntax::{Formula, FormulaKind, Symbol, Term};
use super::FormulaError;

/// Bindings for the metavariables of a schema.
///
/// Formula metavariables map to formulas. Schemata over first-order
/// languages may also range over individual variables (a pattern variable
/// standing for any variable) and over terms.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MetaAssignment {
    formulas: BTreeMap<Symbol, Formula>,
    variables: BTreeMap<Symbol, Symbol>,
    terms: BTreeMap<Symbol, Term>,
}

impl MetaAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, meta: &str, value: Formula) -> Self {
        self.bind(Symbol::new(meta), value);
        self
    }

    pub fn bind(&mut self, meta: Symbol, value: Formula) {
        self.formulas.insert(meta, value);
    }

    pub fn bind_variable(&mut self, meta: Symbol, var: Symbol) {
        self.variables.insert(meta, var);
    }

    pub fn bind_term(&mut self, meta: Symbol, term: Term) {
        self.terms.insert(meta, term);
    }

    pub fn get(&self, meta: impl AsRef<str>) -> Option<&Formula> {
        let meta = meta.as_ref();
        self.formulas.get(meta)
    }

    pub fn variable(&self, meta: impl AsRef<str>) -> Option<&Symbol> {
        let meta = meta.as_ref();
        self.variables.get(meta)
    }

    pub fn term(&self, meta: impl AsRef<str>) -> Option<&Term> {
        let meta = meta.as_ref();
        self.terms.get(meta)
    }

    pub fn formulas(&self) -> &BTreeMap<Symbol, Formula> {
        &self.formulas
    }

    pub fn variables(&self) -> &BTreeMap<Symbol, Symbol> {
        &self.variables
    }

    pub fn terms(&self) -> &BTreeMap<Symbol, Term> {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty() && self.variables.is_empty() && self.terms.is_empty()
    }
}

impl fmt::Display for MetaAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        let mut first = true;
        let mut sep = |f: &mut fmt::Formatter<'_>| {
            let r = if first { Ok(()) } else { f.write_str(", ") };
            first = false;
            r
        };
        for (k, v) in &self.formulas {
            sep(f)?;
            write!(f, "{k} := {v}")?;
        }
        for (k, v) in &self.variables {
            sep(f)?;
            write!(f, "{k} := {v}")?;
        }
        for (k, v) in &self.terms {
            sep(f)?;
            write!(f, "{k} := {v}")?;
        }
        f.write_str("}")
    }
}

/// Constraint tying one metavariable to the others.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SideCondition {
    /// `instance` is `body` with the free occurrences of `variable`
    /// replaced by the term bound to `term`.
    TermInstance {
        instance: Symbol,
        body: Symbol,
        variable: Symbol,
        term: Symbol,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Schema {
    id: String,
    pattern: Formula,
    metavariables: Vec<Symbol>,
    variable_metas: Vec<Symbol>,
    side: Option<SideCondition>,
}

impl Schema {
    /// A schema whose atoms listed in `metavariables` are placeholders.
    pub fn new(id: &str, pattern: Formula, metavariables: &[&str]) -> Result<Schema, FormulaError> {
        let metas: Vec<Symbol> = metavariables.iter().map(|m| Symbol::new(m)).collect();
        let unique: BTreeSet<&Symbol> = metas.iter().collect();
        if unique.len() != metas.len() {
            return Err(FormulaError::InvalidSchema(format!("{id}: repeated metavariable")));
        }
        Ok(Schema {
            id: id.to_string(),
            pattern,
            metavariables: metas,
            variable_metas: Vec::new(),
            side: None,
        })
    }

    /// Parses `pattern` over `alphabet` extended with the metavariables and
    /// checks that the metavariables do not clash with object atoms.
    pub fn parse(id: &str, pattern: &str, metavariables: &[&str], alphabet: &Alphabet) -> Result<Schema, FormulaError> {
        let schema = Schema::parse_unchecked(id, pattern, metavariables, alphabet)?;
        for m in &schema.metavariables {
            if alphabet.atoms().contains(m) {
                return Err(FormulaError::InvalidSchema(format!(
                    "{id}: metavariable `{m}` is also an object-language atom"
                )));
            }
        }
        Ok(schema)
    }

    /// As [`Schema::parse`], but metavariables may be object atoms. Used
    /// when patterns double as concrete axioms under a substitution rule.
    pub fn parse_unchecked(
        id: &str,
        pattern: &str,
        metavariables: &[&str],
        alphabet: &Alphabet,
    ) -> Result<Schema, FormulaError> {
        let metas: Vec<Symbol> = metavariables.iter().map(|m| Symbol::new(m)).collect();
        let f = parse_formula_with(pattern, alphabet, &metas)?;
        let schema = Schema::new(id, f, metavariables)?;
        alphabet.check_with(&schema.pattern, &schema.metavariables)?;
        Ok(schema)
    }

    /// Declares pattern variables ranging over individual variables.
    pub fn with_variable_metas(mut self, vars: &[&str]) -> Self {
        self.variable_metas = vars.iter().map(|v| Symbol::new(v)).collect();
        self
    }

    pub fn with_side_condition(mut self, side: SideCondition) -> Self {
        self.side = Some(side);
        self
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn pattern(&self) -> &Formula {
        &self.pattern
    }

    pub fn metavariables(&self) -> &[Symbol] {
        &self.metavariables
    }

    pub fn variable_metas(&self) -> &[Symbol] {
        &self.variable_metas
    }

    pub fn side_condition(&self) -> Option<&SideCondition> {
        self.side.as_ref()
    }

    /// Metavariables that must be bound by the caller; the instance
    /// metavariable of a side condition is computed.
    pub fn free_metavariables(&self) -> Vec<Symbol> {
        let determined = self.side.as_ref().map(|SideCondition::TermInstance { instance, .. }| instance);
        self.metavariables
            .iter()
            .filter(|m| Some(*m) != determined)
            .cloned()
            .collect()
    }

    /// Occurrence count of each metavariable in the pattern.
    pub fn occurrences(&self) -> Vec<(Symbol, usize)> {
        self.metavariables
            .iter()
            .map(|m| (m.clone(), self.pattern.count_atom(m)))
            .collect()
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.id, self.pattern)
    }
}

/// Replaces the metavariables of `schema` according to `assignment`.
pub fn instantiate_schema(schema: &Schema, assignment: &MetaAssignment) -> Result<Formula, FormulaError> {
    let mut sigma = assignment.clone();
    if let Some(SideCondition::TermInstance {
        instance,
        body,
        variable,
        term,
    }) = &schema.side
    {
        let b = sigma
            .get(body)
            .ok_or_else(|| FormulaError::MissingBinding(body.to_string()))?
            .clone();
        let x = sigma
            .variable(variable)
            .cloned()
            .unwrap_or_else(|| variable.clone());
        let t = sigma
            .term(term)
            .ok_or_else(|| FormulaError::MissingBinding(term.to_string()))?
            .clone();
        sigma.bind(instance.clone(), substitute_term(&b, &x, &t));
    }
    for m in &schema.metavariables {
        if sigma.get(m).is_none() && schema.pattern.count_atom(m) > 0 {
            return Err(FormulaError::MissingBinding(m.to_string()));
        }
    }
    Ok(fill(&schema.pattern, schema, &sigma))
}

fn fill_term(t: &Term, schema: &Schema, sigma: &MetaAssignment) -> Term {
    match t {
        Term::Var(v) if schema.variable_metas.contains(v) => {
            Term::Var(sigma.variable(v).cloned().unwrap_or_else(|| v.clone()))
        }
        Term::Var(_) => t.clone(),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| fill_term(a, schema, sigma)).collect()),
    }
}

fn fill(p: &Formula, schema: &Schema, sigma: &MetaAssignment) -> Formula {
    match p.kind() {
        FormulaKind::Atom(a) => match sigma.get(a) {
            Some(v) if schema.metavariables.contains(a) => v.clone(),
            _ => p.clone(),
        },
        FormulaKind::Pred(name, args) => Formula::new(FormulaKind::Pred(
            name.clone(),
            args.iter().map(|t| fill_term(t, schema, sigma)).collect(),
        )),
        FormulaKind::Equal(a, b) => Formula::equal(fill_term(a, schema, sigma), fill_term(b, schema, sigma)),
        FormulaKind::Not(a) => Formula::not(fill(a, schema, sigma)),
        FormulaKind::Forall(x, a) | FormulaKind::Exists(x, a) => {
            let x = if schema.variable_metas.contains(x) {
                sigma.variable(x).cloned().unwrap_or_else(|| x.clone())
            } else {
                x.clone()
            };
            let body = fill(a, schema, sigma);
            if matches!(p.kind(), FormulaKind::Forall(..)) {
                Formula::new(FormulaKind::Forall(x, body))
            } else {
                Formula::new(FormulaKind::Exists(x, body))
            }
        }
        _ => {
            let (c, a, b) = p.as_binary().expect("binary node");
            Formula::binary(c, fill(a, schema, sigma), fill(b, schema, sigma))
        }
    }
}

/// Syntactic matching; returns the unique assignment of the metavariables
/// occurring in the pattern, or `None`.
pub fn match_schema(schema: &Schema, formula: &Formula) -> Option<MetaAssignment> {
    let mut sigma = MetaAssignment::new();
    if !match_formula(schema.pattern(), formula, schema, &mut sigma) {
        return None;
    }
    if let Some(SideCondition::TermInstance {
        instance,
        body,
        variable,
        term,
    }) = &schema.side
    {
        let inst = sigma.get(instance)?.clone();
        let b = sigma.get(body)?.clone();
        let x = sigma
            .variable(variable)
            .cloned()
            .unwrap_or_else(|| variable.clone());
        let mut candidates = BTreeSet::from([Term::Var(x.clone())]);
        collect_terms(&inst, &mut candidates);
        let found = candidates
            .into_iter()
            .find(|t| substitute_term(&b, &x, t) == inst)?;
        sigma.bind_term(term.clone(), found);
    }
    Some(sigma)
}

fn collect_terms(f: &Formula, out: &mut BTreeSet<Term>) {
    fn walk(t: &Term, out: &mut BTreeSet<Term>) {
        out.insert(t.clone());
        if let Term::App(_, args) = t {
            args.iter().for_each(|a| walk(a, out));
        }
    }
    match f.kind() {
        FormulaKind::Pred(_, args) => args.iter().for_each(|t| walk(t, out)),
        FormulaKind::Equal(a, b) => {
            walk(a, out);
            walk(b, out);
        }
        _ => f.children().into_iter().for_each(|c| collect_terms(c, out)),
    }
}

fn match_var(p: &Symbol, v: &Symbol, schema: &Schema, sigma: &mut MetaAssignment) -> bool {
    if !schema.variable_metas.contains(p) {
        return p == v;
    }
    match sigma.variable(p) {
        Some(bound) => bound == v,
        None => {
            sigma.bind_variable(p.clone(), v.clone());
            true
        }
    }
}

fn match_term(p: &Term, t: &Term, schema: &Schema, sigma: &mut MetaAssignment) -> bool {
    match (p, t) {
        (Term::Var(a), Term::Var(b)) => match_var(a, b, schema, sigma),
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| match_term(x, y, schema, sigma))
        }
        _ => false,
    }
}

fn match_formula(p: &Formula, f: &Formula, schema: &Schema, sigma: &mut MetaAssignment) -> bool {
    match (p.kind(), f.kind()) {
        (FormulaKind::Atom(a), _) if schema.metavariables.contains(a) => match sigma.get(a) {
            Some(bound) => bound == f,
            None => {
                sigma.bind(a.clone(), f.clone());
                true
            }
        },
        (FormulaKind::Atom(a), FormulaKind::Atom(b)) => a == b,
        (FormulaKind::Pred(a, xs), FormulaKind::Pred(b, ys)) => {
            a == b && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| match_term(x, y, schema, sigma))
        }
        (FormulaKind::Equal(a, b), FormulaKind::Equal(c, d)) => {
            match_term(a, c, schema, sigma) && match_term(b, d, schema, sigma)
        }
        (FormulaKind::Not(a), FormulaKind::Not(b)) => match_formula(a, b, schema, sigma),
        (FormulaKind::Forall(x, a), FormulaKind::Forall(y, b))
        | (FormulaKind::Exists(x, a), FormulaKind::Exists(y, b)) => {
            match_var(x, y, schema, sigma) && match_formula(a, b, schema, sigma)
        }
        _ => match (p.as_binary(), f.as_binary()) {
            (Some((c, a, b)), Some((d, x, y))) => {
                c == d && match_formula(a, x, schema, sigma) && match_formula(b, y, schema, sigma)
            }
            _ => false,
        },
    }
}

//! Inference-rule algorithms.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::formula::{free_variables, match_schema, substitute_prop, Formula, Schema, Symbol};
use crate::library::semantics::is_tautology;

use super::EngineError;

/// Decides whether the minor premise of a validated modus ponens may be
/// used.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Validator {
    AlwaysTrue,
    /// The minor premise is a classical tautology.
    Tautology,
    /// The minor premise is a realized axiom of the calculus.
    AxiomMembership,
    /// Only the listed formulas validate.
    Accepts(BTreeSet<Formula>),
    /// Everything except the listed formulas validates.
    Rejects(BTreeSet<Formula>),
}

impl Validator {
    pub fn from_name(name: &str) -> Option<Validator> {
        match name {
            "always_true" | "always-true" => Some(Validator::AlwaysTrue),
            "tautology" => Some(Validator::Tautology),
            "axiom_membership" | "axiom-membership" => Some(Validator::AxiomMembership),
            _ => None,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Validator::AlwaysTrue => "always_true".into(),
            Validator::Tautology => "tautology".into(),
            Validator::AxiomMembership => "axiom_membership".into(),
            Validator::Accepts(s) => format!("accepts[{}]", join(s)),
            Validator::Rejects(s) => format!("rejects[{}]", join(s)),
        }
    }

    pub fn validates(&self, formula: &Formula, ctx: &RuleContext) -> bool {
        match self {
            Validator::AlwaysTrue => true,
            Validator::Tautology => is_tautology(formula).unwrap_or(false),
            Validator::AxiomMembership => ctx.is_axiom(formula),
            Validator::Accepts(s) => s.contains(formula),
            Validator::Rejects(s) => !s.contains(formula),
        }
    }
}

fn join(s: &BTreeSet<Formula>) -> String {
    s.iter().map(Formula::print).collect::<Vec<_>>().join(", ")
}

pub type CustomFn = dyn Fn(&[Formula], &RuleContext) -> Vec<Formula> + Send + Sync;

/// A user-supplied rule algorithm. Two custom rules are the same rule when
/// their names agree.
#[derive(Clone)]
pub struct CustomRule {
    pub name: String,
    pub arity: usize,
    pub apply: Arc<CustomFn>,
}

impl CustomRule {
    pub fn new(
        name: &str,
        arity: usize,
        apply: impl Fn(&[Formula], &RuleContext) -> Vec<Formula> + Send + Sync + 'static,
    ) -> Self {
        CustomRule {
            name: name.to_string(),
            arity,
            apply: Arc::new(apply),
        }
    }
}

impl fmt::Debug for CustomRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CustomRule({}/{})", self.name, self.arity)
    }
}

impl PartialEq for CustomRule {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.arity == other.arity
    }
}

impl Eq for CustomRule {}

/// Built-in rules and combinators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleSpec {
    /// `phi, phi -> psi` give `psi`.
    ModusPonens,
    /// `phi` gives `phi` with one variable replaced by a pool formula.
    Substitution,
    /// `phi` gives `phi | psi` for pool formulas `psi`.
    Extension,
    /// `phi | phi` gives `phi`.
    Cancellation,
    /// `phi | (psi | chi)` gives `(phi | psi) | chi`.
    AssociativityLeft,
    /// `(phi | psi) | chi` gives `phi | (psi | chi)`.
    AssociativityRight,
    /// `phi | psi, ~phi | chi` give `psi | chi`.
    Cut,
    /// `phi -> psi` gives `exists x phi -> psi` for `x` free in `phi` and
    /// not free in `psi`.
    ExistsIntroduction,
    Identity,
    /// Applies the unary second rule to every conclusion of the first.
    Compose(Box<RuleSpec>, Box<RuleSpec>),
    /// Keeps conclusions of size strictly below the cap.
    LengthFiltered(Box<RuleSpec>, usize),
    /// Modus ponens gated on the minor premise.
    ValidatedMp(Validator),
    Custom(CustomRule),
}

/// How the body enumerator finds candidate premise pairs for a binary rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Pairing {
    /// (minor, major) with the major an implication on the minor.
    Implication,
    /// (phi | psi, ~phi | chi).
    Cut,
    Generic,
}

impl RuleSpec {
    pub fn parse_name(name: &str) -> Option<RuleSpec> {
        Some(match name {
            "modus_ponens" => RuleSpec::ModusPonens,
            "substitution" => RuleSpec::Substitution,
            "extension" => RuleSpec::Extension,
            "cancellation" => RuleSpec::Cancellation,
            "associativity_left" => RuleSpec::AssociativityLeft,
            "associativity_right" => RuleSpec::AssociativityRight,
            "cut" => RuleSpec::Cut,
            "exists_introduction" => RuleSpec::ExistsIntroduction,
            "identity" => RuleSpec::Identity,
            _ => return None,
        })
    }

    pub fn arity(&self) -> usize {
        match self {
            RuleSpec::ModusPonens | RuleSpec::Cut | RuleSpec::ValidatedMp(_) => 2,
            RuleSpec::Compose(r, _) | RuleSpec::LengthFiltered(r, _) => r.arity(),
            RuleSpec::Custom(c) => c.arity,
            _ => 1,
        }
    }

    /// Identifier including parameters; equal keys denote the same rule.
    pub fn key(&self) -> String {
        match self {
            RuleSpec::ModusPonens => "modus_ponens".into(),
            RuleSpec::Substitution => "substitution".into(),
            RuleSpec::Extension => "extension".into(),
            RuleSpec::Cancellation => "cancellation".into(),
            RuleSpec::AssociativityLeft => "associativity_left".into(),
            RuleSpec::AssociativityRight => "associativity_right".into(),
            RuleSpec::Cut => "cut".into(),
            RuleSpec::ExistsIntroduction => "exists_introduction".into(),
            RuleSpec::Identity => "identity".into(),
            RuleSpec::Compose(r, q) => format!("compose({},{})", r.key(), q.key()),
            RuleSpec::LengthFiltered(r, cap) => format!("length_filtered({},{cap})", r.key()),
            RuleSpec::ValidatedMp(v) => format!("validated_mp({})", v.name()),
            RuleSpec::Custom(c) => format!("custom:{}", c.name),
        }
    }

    pub(crate) fn pairing(&self) -> Pairing {
        match self {
            RuleSpec::ModusPonens | RuleSpec::ValidatedMp(_) => Pairing::Implication,
            RuleSpec::Cut => Pairing::Cut,
            RuleSpec::Compose(r, _) | RuleSpec::LengthFiltered(r, _) => r.pairing(),
            _ => Pairing::Generic,
        }
    }

    /// Whether conclusions depend on the parameter pool.
    pub fn uses_parameters(&self) -> bool {
        match self {
            RuleSpec::Substitution | RuleSpec::Extension => true,
            RuleSpec::Compose(r, q) => r.uses_parameters() || q.uses_parameters(),
            RuleSpec::LengthFiltered(r, _) => r.uses_parameters(),
            RuleSpec::Custom(_) => true,
            _ => false,
        }
    }

    /// Whether every conclusion is a classical tautology once the premises
    /// are (read propositionally, with the falsum constant false).
    pub fn preserves_tautologies(&self) -> bool {
        match self {
            RuleSpec::ModusPonens
            | RuleSpec::ValidatedMp(_)
            | RuleSpec::Substitution
            | RuleSpec::Extension
            | RuleSpec::Cancellation
            | RuleSpec::AssociativityLeft
            | RuleSpec::AssociativityRight
            | RuleSpec::Cut
            | RuleSpec::Identity => true,
            RuleSpec::Compose(r, q) => r.preserves_tautologies() && q.preserves_tautologies(),
            RuleSpec::LengthFiltered(r, _) => r.preserves_tautologies(),
            RuleSpec::ExistsIntroduction | RuleSpec::Custom(_) => false,
        }
    }

    fn validate(&self) -> Result<(), EngineError> {
        match self {
            RuleSpec::Compose(r, q) => {
                r.validate()?;
                q.validate()?;
                if q.arity() != 1 {
                    return Err(EngineError::InvalidRule(format!(
                        "compose: second rule `{}` must be unary",
                        q.key()
                    )));
                }
                Ok(())
            }
            RuleSpec::LengthFiltered(r, cap) => {
                if *cap == 0 {
                    return Err(EngineError::InvalidRule("length_filtered: cap must be positive".into()));
                }
                r.validate()
            }
            _ => Ok(()),
        }
    }
}

/// Declared rule metadata. None of these are checked operationally.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RuleFlags {
    pub constructing: bool,
    pub transforming: bool,
    pub basically_closed: bool,
    pub decidable: bool,
}

impl RuleFlags {
    fn declared(spec: &RuleSpec) -> RuleFlags {
        let transforming = matches!(
            spec,
            RuleSpec::Substitution
                | RuleSpec::AssociativityLeft
                | RuleSpec::AssociativityRight
                | RuleSpec::Identity
                | RuleSpec::ExistsIntroduction
                | RuleSpec::Cancellation
        );
        RuleFlags {
            constructing: !transforming,
            transforming,
            basically_closed: false,
            decidable: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InferenceRule {
    spec: RuleSpec,
    id: String,
    flags: RuleFlags,
}

impl InferenceRule {
    pub fn spec(&self) -> &RuleSpec {
        &self.spec
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn arity(&self) -> usize {
        self.spec.arity()
    }

    pub fn flags(&self) -> RuleFlags {
        self.flags
    }

    pub fn with_flags(mut self, flags: RuleFlags) -> Self {
        self.flags = flags;
        self
    }
}

impl fmt::Display for InferenceRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id)
    }
}

pub fn make_rule(spec: RuleSpec) -> Result<InferenceRule, EngineError> {
    spec.validate()?;
    Ok(InferenceRule {
        id: spec.key(),
        flags: RuleFlags::declared(&spec),
        spec,
    })
}

/// Builds a rule from its textual name, e.g. `modus_ponens`.
pub fn rule_by_name(name: &str) -> Result<InferenceRule, EngineError> {
    RuleSpec::parse_name(name)
        .ok_or_else(|| EngineError::UnknownRule(name.to_string()))
        .and_then(make_rule)
}

/// The rule system `H`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RuleSystem {
    rules: Vec<InferenceRule>,
    closed_under_composition: bool,
}

impl RuleSystem {
    pub fn new(rules: Vec<InferenceRule>) -> Result<Self, EngineError> {
        let mut seen = HashSet::new();
        for r in &rules {
            if !seen.insert(r.id.clone()) {
                return Err(EngineError::DuplicateRule(r.id.clone()));
            }
        }
        Ok(RuleSystem {
            rules,
            closed_under_composition: false,
        })
    }

    pub fn from_specs(specs: impl IntoIterator<Item = RuleSpec>) -> Result<Self, EngineError> {
        RuleSystem::new(specs.into_iter().map(make_rule).collect::<Result<_, _>>()?)
    }

    pub fn empty() -> Self {
        RuleSystem::default()
    }

    pub fn declare_closed_under_composition(mut self, closed: bool) -> Self {
        self.closed_under_composition = closed;
        self
    }

    pub fn closed_under_composition(&self) -> bool {
        self.closed_under_composition
    }

    pub fn rules(&self) -> &[InferenceRule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn keys(&self) -> BTreeSet<String> {
        self.rules.iter().map(|r| r.id.clone()).collect()
    }

    pub fn contains(&self, spec: &RuleSpec) -> bool {
        self.rules.iter().any(|r| &r.spec == spec)
    }

    /// A copy with `rule` appended unless an equal rule is present.
    pub fn with_rule(&self, rule: InferenceRule) -> Self {
        let mut out = self.clone();
        if !out.rules.iter().any(|r| r.id == rule.id) {
            out.rules.push(rule);
        }
        out
    }

    pub fn uses_parameters(&self) -> bool {
        self.rules.iter().any(|r| r.spec.uses_parameters())
    }
}

/// Realized axioms as seen by rules: concrete formulas plus schemata
/// recognized by matching.
#[derive(Clone, Debug, Default)]
pub struct AxiomIndex {
    concrete: HashSet<Formula>,
    schemata: Vec<Schema>,
}

impl AxiomIndex {
    pub fn new(concrete: impl IntoIterator<Item = Formula>, schemata: Vec<Schema>) -> Self {
        AxiomIndex {
            concrete: concrete.into_iter().collect(),
            schemata,
        }
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.concrete.contains(f) || self.schemata.iter().any(|s| match_schema(s, f).is_some())
    }
}

/// Parameters available to rule algorithms.
#[derive(Clone, Debug, Default)]
pub struct RuleContext {
    /// Pool formulas for parametric rules, in canonical order.
    pub parameters: Arc<Vec<Formula>>,
    /// Atoms the substitution rule may replace.
    pub variables: Arc<Vec<Symbol>>,
    /// Conclusions larger than this may be skipped.
    pub max_size: Option<usize>,
    pub axioms: Arc<AxiomIndex>,
}

impl RuleContext {
    pub fn new(parameters: Vec<Formula>, variables: Vec<Symbol>) -> Self {
        let mut parameters = parameters;
        parameters.sort();
        parameters.dedup();
        RuleContext {
            parameters: Arc::new(parameters),
            variables: Arc::new(variables),
            max_size: None,
            axioms: Arc::default(),
        }
    }

    pub fn with_max_size(mut self, cap: usize) -> Self {
        self.max_size = Some(cap);
        self
    }

    pub fn with_axioms(mut self, axioms: AxiomIndex) -> Self {
        self.axioms = Arc::new(axioms);
        self
    }

    pub fn is_axiom(&self, f: &Formula) -> bool {
        self.axioms.contains(f)
    }

    fn fits(&self, size: usize) -> bool {
        self.max_size.is_none_or(|cap| size <= cap)
    }
}

/// The conclusions of `rule` on `premises`, sorted and deduplicated; empty
/// when the rule does not apply.
pub fn apply_rule(rule: &InferenceRule, premises: &[Formula], ctx: &RuleContext) -> Result<Vec<Formula>, EngineError> {
    if premises.len() != rule.arity() {
        return Err(EngineError::ArityMismatch {
            rule: rule.id.clone(),
            expected: rule.arity(),
            found: premises.len(),
        });
    }
    let mut out = apply_spec(&rule.spec, premises, ctx);
    out.sort();
    out.dedup();
    Ok(out)
}

pub(crate) fn apply_spec(spec: &RuleSpec, p: &[Formula], ctx: &RuleContext) -> Vec<Formula> {
    match spec {
        RuleSpec::ModusPonens => modus_ponens(&p[0], &p[1]).into_iter().collect(),
        RuleSpec::ValidatedMp(v) => match modus_ponens(&p[0], &p[1]) {
            Some(c) if v.validates(&p[0], ctx) => vec![c],
            _ => Vec::new(),
        },
        RuleSpec::Substitution => {
            let phi = &p[0];
            let atoms = phi.atoms();
            let mut out = Vec::new();
            for x in ctx.variables.iter().filter(|x| atoms.contains(*x)) {
                let n = phi.count_atom(x);
                for q in ctx.parameters.iter() {
                    if !ctx.fits(phi.size() + n * (q.size() - 1)) {
                        break;
                    }
                    out.push(substitute_prop(phi, x, q));
                }
            }
            out
        }
        RuleSpec::Extension => {
            let phi = &p[0];
            ctx.parameters
                .iter()
                .take_while(|psi| ctx.fits(1 + phi.size() + psi.size()))
                .map(|psi| Formula::or(phi.clone(), psi.clone()))
                .collect()
        }
        RuleSpec::Cancellation => match p[0].as_disjunction() {
            Some((a, b)) if a == b => vec![a.clone()],
            _ => Vec::new(),
        },
        RuleSpec::AssociativityLeft => match p[0].as_disjunction() {
            Some((a, bc)) => match bc.as_disjunction() {
                Some((b, c)) => vec![Formula::or(Formula::or(a.clone(), b.clone()), c.clone())],
                None => Vec::new(),
            },
            None => Vec::new(),
        },
        RuleSpec::AssociativityRight => match p[0].as_disjunction() {
            Some((ab, c)) => match ab.as_disjunction() {
                Some((a, b)) => vec![Formula::or(a.clone(), Formula::or(b.clone(), c.clone()))],
                None => Vec::new(),
            },
            None => Vec::new(),
        },
        RuleSpec::Cut => match (p[0].as_disjunction(), p[1].as_disjunction()) {
            (Some((a, b)), Some((na, c))) if na.as_negation() == Some(a) => {
                vec![Formula::or(b.clone(), c.clone())]
            }
            _ => Vec::new(),
        },
        RuleSpec::ExistsIntroduction => match p[0].as_implication() {
            Some((phi, psi)) => {
                let bound_out = free_variables(psi);
                free_variables(phi)
                    .into_iter()
                    .filter(|x| !bound_out.contains(x))
                    .map(|x| {
                        Formula::implies(
                            Formula::new(crate::formula::FormulaKind::Exists(x, phi.clone())),
                            psi.clone(),
                        )
                    })
                    .collect()
            }
            None => Vec::new(),
        },
        RuleSpec::Identity => vec![p[0].clone()],
        RuleSpec::Compose(r, q) => apply_spec(r, p, ctx)
            .into_iter()
            .flat_map(|c| apply_spec(q, std::slice::from_ref(&c), ctx))
            .collect(),
        RuleSpec::LengthFiltered(r, cap) => apply_spec(r, p, ctx)
            .into_iter()
            .filter(|c| c.size() < *cap)
            .collect(),
        RuleSpec::Custom(c) => (c.apply)(p, ctx),
    }
}

fn modus_ponens(minor: &Formula, major: &Formula) -> Option<Formula> {
    match major.as_implication() {
        Some((a, b)) if a == minor => Some(b.clone()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_formula, Alphabet, Connective, LanguageKind, Quantifier};

    fn alphabet() -> Alphabet {
        Alphabet::propositional(&["P", "Q", "R"], &Connective::ALL)
    }

    fn f(s: &str) -> Formula {
        parse_formula(s, &alphabet()).unwrap()
    }

    fn apply(spec: RuleSpec, premises: &[&str], params: &[&str]) -> Vec<String> {
        let rule = make_rule(spec).unwrap();
        let ctx = RuleContext::new(params.iter().map(|s| f(s)).collect(), Vec::new());
        let ps: Vec<Formula> = premises.iter().map(|s| f(s)).collect();
        apply_rule(&rule, &ps, &ctx).unwrap().iter().map(Formula::print).collect()
    }

    #[test]
    fn builtin_examples() {
        assert_eq!(apply(RuleSpec::ModusPonens, &["P", "P -> Q"], &[]), ["Q"]);
        assert!(apply(RuleSpec::ModusPonens, &["P", "Q -> R"], &[]).is_empty());
        assert_eq!(apply(RuleSpec::Cut, &["P | Q", "~P | R"], &[]), ["(Q | R)"]);
        assert_eq!(apply(RuleSpec::Extension, &["P"], &["Q"]), ["(P | Q)"]);
        assert_eq!(apply(RuleSpec::Cancellation, &["P | P"], &[]), ["P"]);
        assert_eq!(apply(RuleSpec::AssociativityLeft, &["P | (Q | R)"], &[]), ["((P | Q) | R)"]);
        assert_eq!(apply(RuleSpec::AssociativityRight, &["(P | Q) | R"], &[]), ["(P | (Q | R))"]);
    }

    #[test]
    fn combinators() {
        let filtered = RuleSpec::LengthFiltered(Box::new(RuleSpec::Identity), 3);
        assert!(apply(filtered, &["~~(P & Q)"], &[]).is_empty());
        let composed = RuleSpec::Compose(Box::new(RuleSpec::Extension), Box::new(RuleSpec::Cancellation));
        assert_eq!(apply(composed, &["Q"], &["Q"]), ["Q"]);
        let bad = RuleSpec::Compose(Box::new(RuleSpec::Identity), Box::new(RuleSpec::ModusPonens));
        assert!(matches!(make_rule(bad), Err(EngineError::InvalidRule(_))));
    }

    #[test]
    fn arity_is_checked() {
        let rule = make_rule(RuleSpec::ModusPonens).unwrap();
        let err = apply_rule(&rule, &[f("P")], &RuleContext::default()).unwrap_err();
        assert!(matches!(err, EngineError::ArityMismatch { expected: 2, found: 1, .. }));
    }

    #[test]
    fn validated_mp() {
        let taut = RuleSpec::ValidatedMp(Validator::Tautology);
        assert!(apply(taut.clone(), &["P", "P -> Q"], &[]).is_empty());
        assert_eq!(apply(taut, &["P | ~P", "(P | ~P) -> Q"], &[]), ["Q"]);
        assert_eq!(apply(RuleSpec::ValidatedMp(Validator::AlwaysTrue), &["P", "P -> Q"], &[]), ["Q"]);
    }

    #[test]
    fn substitution_replaces_one_variable() {
        let rule = make_rule(RuleSpec::Substitution).unwrap();
        let ctx = RuleContext::new(vec![f("R"), f("~R")], vec!["P".into(), "Q".into()]);
        let out = apply_rule(&rule, &[f("P -> Q")], &ctx).unwrap();
        let texts: Vec<String> = out.iter().map(Formula::print).collect();
        assert_eq!(texts, ["(P -> R)", "(R -> Q)", "(P -> ~R)", "(~R -> Q)"]);
        let capped = ctx.with_max_size(3);
        assert_eq!(apply_rule(&rule, &[f("P -> Q")], &capped).unwrap().len(), 2);
    }

    #[test]
    fn exists_introduction() {
        let a = Alphabet::builder(LanguageKind::FirstOrder)
            .individual_variables(&["x"])
            .predicate("P", 1)
            .predicate("Q", 0)
            .connectives(&[Connective::Implies])
            .quantifiers(&[Quantifier::Exists])
            .build()
            .unwrap();
        let rule = make_rule(RuleSpec::ExistsIntroduction).unwrap();
        let prem = parse_formula("P(x) -> Q", &a).unwrap();
        let out = apply_rule(&rule, &[prem], &RuleContext::default()).unwrap();
        assert_eq!(out, [parse_formula("exists x P(x) -> Q", &a).unwrap()]);
        let blocked = parse_formula("P(x) -> P(x)", &a).unwrap();
        assert!(apply_rule(&rule, &[blocked], &RuleContext::default()).unwrap().is_empty());
    }
}

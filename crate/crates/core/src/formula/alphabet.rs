//! Alphabets: the declared symbol categories of a logical language.

use std::collections::{BTreeMap, BTreeSet};

use super::syntax::{Connective, Formula, FormulaKind, Quantifier, Symbol, Term};
use super::FormulaError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LanguageKind {
    Propositional,
    FirstOrder,
}

/// Delimiters used around binary connectives when printing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Punctuation {
    #[default]
    Parentheses,
    Brackets,
}

impl Punctuation {
    pub fn delimiters(self) -> (char, char) {
        match self {
            Punctuation::Parentheses => ('(', ')'),
            Punctuation::Brackets => ('[', ']'),
        }
    }
}

/// The alphabet of a propositional or first-order language.
///
/// Propositional constants (such as a falsum `f`) are atoms with a fixed
/// meaning; first-order constants are 0-ary function symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    kind: LanguageKind,
    variables: Vec<Symbol>,
    connectives: BTreeSet<Connective>,
    punctuation: Punctuation,
    constants: Vec<Symbol>,
    functions: BTreeMap<Symbol, usize>,
    predicates: BTreeMap<Symbol, usize>,
    quantifiers: BTreeSet<Quantifier>,
    individual_variables: Vec<Symbol>,
    equality: bool,
}

const KEYWORDS: [&str; 3] = ["forall", "exists", "eps"];

fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

impl Alphabet {
    pub fn builder(kind: LanguageKind) -> AlphabetBuilder {
        AlphabetBuilder {
            alphabet: Alphabet {
                kind,
                variables: Vec::new(),
                connectives: BTreeSet::new(),
                punctuation: Punctuation::Parentheses,
                constants: Vec::new(),
                functions: BTreeMap::new(),
                predicates: BTreeMap::new(),
                quantifiers: BTreeSet::new(),
                individual_variables: Vec::new(),
                equality: false,
            },
        }
    }

    /// Propositional alphabet over the given variables and connectives.
    pub fn propositional(variables: &[&str], connectives: &[Connective]) -> Alphabet {
        Alphabet::builder(LanguageKind::Propositional)
            .variables(variables)
            .connectives(connectives)
            .build()
            .expect("valid propositional alphabet")
    }

    pub fn kind(&self) -> LanguageKind {
        self.kind
    }

    pub fn variables(&self) -> &[Symbol] {
        &self.variables
    }

    pub fn connectives(&self) -> &BTreeSet<Connective> {
        &self.connectives
    }

    pub fn punctuation(&self) -> Punctuation {
        self.punctuation
    }

    pub fn constants(&self) -> &[Symbol] {
        &self.constants
    }

    pub fn functions(&self) -> &BTreeMap<Symbol, usize> {
        &self.functions
    }

    pub fn predicates(&self) -> &BTreeMap<Symbol, usize> {
        &self.predicates
    }

    pub fn quantifiers(&self) -> &BTreeSet<Quantifier> {
        &self.quantifiers
    }

    pub fn individual_variables(&self) -> &[Symbol] {
        &self.individual_variables
    }

    pub fn has_equality(&self) -> bool {
        self.equality
    }

    pub fn has_connective(&self, c: Connective) -> bool {
        self.connectives.contains(&c)
    }

    pub fn is_variable(&self, name: &str) -> bool {
        self.variables.iter().any(|v| v.as_str() == name)
    }

    pub fn is_constant(&self, name: &str) -> bool {
        self.constants.iter().any(|v| v.as_str() == name)
    }

    /// Individual variables are the declared ones plus primed variants
    /// produced by capture-avoiding renaming.
    pub fn is_individual_variable(&self, name: &str) -> bool {
        let base = name.trim_end_matches('\'');
        self.individual_variables.iter().any(|v| v.as_str() == base)
    }

    /// Formula-level atoms: propositional variables, constants and 0-ary
    /// predicates.
    pub fn atoms(&self) -> Vec<Symbol> {
        let mut out: Vec<Symbol> = self.variables.to_vec();
        out.extend(self.constants.iter().cloned());
        out.extend(
            self.predicates
                .iter()
                .filter(|(_, &n)| n == 0)
                .map(|(p, _)| p.clone()),
        );
        out
    }

    /// A copy whose variable list is restricted to `keep` (propositional
    /// variables for propositional alphabets, individual variables for
    /// first-order ones). Used to build instantiation pools.
    pub fn restricted_to(&self, keep: &[Symbol]) -> Alphabet {
        let mut out = self.clone();
        match self.kind {
            LanguageKind::Propositional => out.variables.retain(|v| keep.contains(v)),
            LanguageKind::FirstOrder => {
                out.individual_variables.retain(|v| keep.contains(v));
                out.variables.retain(|v| keep.contains(v));
            }
        }
        out
    }

    /// Symbols (names and operators) the alphabet declares, for shared-fragment
    /// computations.
    pub fn symbol_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for s in self
            .variables
            .iter()
            .chain(&self.constants)
            .chain(self.functions.keys())
            .chain(self.predicates.keys())
            .chain(&self.individual_variables)
        {
            out.insert(s.to_string());
        }
        for c in &self.connectives {
            out.insert(c.ascii().to_string());
        }
        for q in &self.quantifiers {
            out.insert(q.keyword().to_string());
        }
        if self.equality {
            out.insert("=".into());
        }
        out
    }

    /// Checks that `formula` is a wff of this alphabet.
    pub fn check(&self, formula: &Formula) -> Result<(), FormulaError> {
        self.check_with(formula, &[])
    }

    /// As [`Alphabet::check`], additionally admitting `extra_atoms`
    /// (schema metavariables).
    pub fn check_with(&self, formula: &Formula, extra_atoms: &[Symbol]) -> Result<(), FormulaError> {
        match formula.kind() {
            FormulaKind::Atom(a) => {
                let known = self.is_variable(a.as_str())
                    || self.is_constant(a.as_str())
                    || self.predicates.get(a) == Some(&0)
                    || extra_atoms.contains(a);
                if known {
                    Ok(())
                } else {
                    Err(FormulaError::Undeclared(a.to_string()))
                }
            }
            FormulaKind::Pred(p, args) => {
                self.require_first_order("predicate application")?;
                match self.predicates.get(p) {
                    None => Err(FormulaError::Undeclared(p.to_string())),
                    Some(&n) if n != args.len() => Err(FormulaError::Arity {
                        symbol: p.to_string(),
                        expected: n,
                        found: args.len(),
                    }),
                    Some(_) => args.iter().try_for_each(|t| self.check_term(t)),
                }
            }
            FormulaKind::Equal(a, b) => {
                if !self.equality {
                    return Err(FormulaError::NotInAlphabet("=".into()));
                }
                self.check_term(a)?;
                self.check_term(b)
            }
            FormulaKind::Not(a) => {
                self.require_connective(Connective::Not)?;
                self.check_with(a, extra_atoms)
            }
            FormulaKind::And(a, b)
            | FormulaKind::Or(a, b)
            | FormulaKind::Implies(a, b)
            | FormulaKind::Iff(a, b) => {
                let (c, _, _) = formula.as_binary().expect("binary node");
                self.require_connective(c)?;
                self.check_with(a, extra_atoms)?;
                self.check_with(b, extra_atoms)
            }
            FormulaKind::Forall(x, a) | FormulaKind::Exists(x, a) => {
                let q = if matches!(formula.kind(), FormulaKind::Forall(..)) {
                    Quantifier::Forall
                } else {
                    Quantifier::Exists
                };
                self.require_first_order("quantifier")?;
                if !self.quantifiers.contains(&q) {
                    return Err(FormulaError::NotInAlphabet(q.keyword().into()));
                }
                if !self.is_individual_variable(x.as_str()) {
                    return Err(FormulaError::Undeclared(x.to_string()));
                }
                self.check_with(a, extra_atoms)
            }
        }
    }

    pub fn check_term(&self, term: &Term) -> Result<(), FormulaError> {
        match term {
            Term::Var(v) if self.is_individual_variable(v.as_str()) => Ok(()),
            Term::Var(v) => Err(FormulaError::Undeclared(v.to_string())),
            Term::App(f, args) => match self.functions.get(f) {
                None => Err(FormulaError::Undeclared(f.to_string())),
                Some(&n) if n != args.len() => Err(FormulaError::Arity {
                    symbol: f.to_string(),
                    expected: n,
                    found: args.len(),
                }),
                Some(_) => args.iter().try_for_each(|t| self.check_term(t)),
            },
        }
    }

    fn require_connective(&self, c: Connective) -> Result<(), FormulaError> {
        if self.connectives.contains(&c) {
            Ok(())
        } else {
            Err(FormulaError::NotInAlphabet(c.ascii().into()))
        }
    }

    fn require_first_order(&self, what: &str) -> Result<(), FormulaError> {
        match self.kind {
            LanguageKind::FirstOrder => Ok(()),
            LanguageKind::Propositional => {
                Err(FormulaError::NotInAlphabet(format!("{what} in a propositional language")))
            }
        }
    }

    fn validate(&self) -> Result<(), FormulaError> {
        let mut seen = BTreeSet::new();
        let names = self
            .variables
            .iter()
            .chain(&self.constants)
            .chain(self.functions.keys())
            .chain(self.predicates.keys())
            .chain(&self.individual_variables);
        for name in names {
            if !is_identifier(name.as_str()) || KEYWORDS.contains(&name.as_str()) {
                return Err(FormulaError::InvalidAlphabet(format!(
                    "`{name}` is not a usable identifier"
                )));
            }
            if !seen.insert(name.clone()) {
                return Err(FormulaError::InvalidAlphabet(format!(
                    "`{name}` is declared in more than one category"
                )));
            }
        }
        if self.kind == LanguageKind::Propositional {
            if !self.quantifiers.is_empty() {
                return Err(FormulaError::InvalidAlphabet(
                    "quantifiers require a first-order alphabet".into(),
                ));
            }
            if !self.functions.is_empty()
                || self.predicates.values().any(|&n| n > 0)
                || !self.individual_variables.is_empty()
                || self.equality
            {
                return Err(FormulaError::InvalidAlphabet(
                    "terms and predicates require a first-order alphabet".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Builder for [`Alphabet`]; `build` checks the alphabet invariants.
#[derive(Clone, Debug)]
pub struct AlphabetBuilder {
    alphabet: Alphabet,
}

impl AlphabetBuilder {
    pub fn variables(mut self, names: &[&str]) -> Self {
        self.alphabet.variables.extend(names.iter().map(|n| Symbol::new(n)));
        self
    }

    pub fn connectives(mut self, cs: &[Connective]) -> Self {
        self.alphabet.connectives.extend(cs.iter().copied());
        self
    }

    pub fn punctuation(mut self, p: Punctuation) -> Self {
        self.alphabet.punctuation = p;
        self
    }

    pub fn constants(mut self, names: &[&str]) -> Self {
        self.alphabet.constants.extend(names.iter().map(|n| Symbol::new(n)));
        self
    }

    pub fn function(mut self, name: &str, arity: usize) -> Self {
        self.alphabet.functions.insert(Symbol::new(name), arity);
        self
    }

    pub fn predicate(mut self, name: &str, arity: usize) -> Self {
        self.alphabet.predicates.insert(Symbol::new(name), arity);
        self
    }

    pub fn quantifiers(mut self, qs: &[Quantifier]) -> Self {
        self.alphabet.quantifiers.extend(qs.iter().copied());
        self
    }

    pub fn individual_variables(mut self, names: &[&str]) -> Self {
        self.alphabet
            .individual_variables
            .extend(names.iter().map(|n| Symbol::new(n)));
        self
    }

    pub fn equality(mut self, on: bool) -> Self {
        self.alphabet.equality = on;
        self
    }

    pub fn build(self) -> Result<Alphabet, FormulaError> {
        self.alphabet.validate()?;
        Ok(self.alphabet)
    }
}

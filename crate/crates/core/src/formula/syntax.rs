//! Abstract syntax for terms and formulas.

use std::borrow::Borrow;
use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// An interned-by-sharing identifier: variable, constant, function or
/// predicate name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

impl From<String> for Symbol {
    fn from(s: String) -> Self {
        Symbol(Arc::from(s))
    }
}

impl AsRef<str> for Symbol {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl Borrow<str> for Symbol {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

/// First-order terms. Constants are 0-ary applications.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Term {
    Var(Symbol),
    App(Symbol, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Symbol::new(name))
    }

    pub fn constant(name: &str) -> Term {
        Term::App(Symbol::new(name), Vec::new())
    }

    pub fn app(name: &str, args: Vec<Term>) -> Term {
        Term::App(Symbol::new(name), args)
    }

    /// Node count.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn variables(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_variables(&mut out);
        out
    }

    pub(crate) fn collect_variables(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_variables(out)),
        }
    }

    pub fn contains_var(&self, var: &Symbol) -> bool {
        match self {
            Term::Var(v) => v == var,
            Term::App(_, args) => args.iter().any(|a| a.contains_var(var)),
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Replaces every occurrence of `var` by `replacement`.
    pub fn substitute(&self, var: &Symbol, replacement: &Term) -> Term {
        match self {
            Term::Var(v) if v == var => replacement.clone(),
            Term::Var(_) => self.clone(),
            Term::App(f, args) => Term::App(
                f.clone(),
                args.iter().map(|a| a.substitute(var, replacement)).collect(),
            ),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App(name, args) if args.is_empty() => write!(f, "{name}"),
            Term::App(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Logical connectives. The derived order is the order used for
/// enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Connective {
    Not,
    And,
    Or,
    Implies,
    Iff,
}

impl Connective {
    pub const ALL: [Connective; 5] = [
        Connective::Not,
        Connective::And,
        Connective::Or,
        Connective::Implies,
        Connective::Iff,
    ];

    pub fn is_binary(self) -> bool {
        self != Connective::Not
    }

    /// ASCII operator as printed.
    pub fn ascii(self) -> &'static str {
        match self {
            Connective::Not => "~",
            Connective::And => "&",
            Connective::Or => "|",
            Connective::Implies => "->",
            Connective::Iff => "<->",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Connective::Not => "not",
            Connective::And => "and",
            Connective::Or => "or",
            Connective::Implies => "implies",
            Connective::Iff => "iff",
        }
    }

    pub fn from_name(name: &str) -> Option<Connective> {
        Connective::ALL.into_iter().find(|c| c.name() == name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quantifier {
    Forall,
    Exists,
}

impl Quantifier {
    pub fn keyword(self) -> &'static str {
        match self {
            Quantifier::Forall => "forall",
            Quantifier::Exists => "exists",
        }
    }

    pub fn from_name(name: &str) -> Option<Quantifier> {
        match name {
            "forall" => Some(Quantifier::Forall),
            "exists" => Some(Quantifier::Exists),
            _ => None,
        }
    }
}

/// The shape of a formula node.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum FormulaKind {
    /// Propositional variable, propositional constant, 0-ary predicate or
    /// schema metavariable.
    Atom(Symbol),
    Pred(Symbol, Vec<Term>),
    Equal(Term, Term),
    Not(Formula),
    And(Formula, Formula),
    Or(Formula, Formula),
    Implies(Formula, Formula),
    Iff(Formula, Formula),
    Forall(Symbol, Formula),
    Exists(Symbol, Formula),
}

struct Node {
    kind: FormulaKind,
    size: usize,
    hash: u64,
}

/// An immutable, cheaply clonable well-formed formula.
///
/// Size and structural hash are cached at construction, so equality and
/// hashing of large shared trees stay cheap. The total order compares size
/// first, then structure; it is the canonical size-lexicographic order used
/// for every enumeration in the crate.
#[derive(Clone)]
pub struct Formula(Arc<Node>);

impl Formula {
    pub fn new(kind: FormulaKind) -> Formula {
        let size = match &kind {
            FormulaKind::Atom(_) => 1,
            FormulaKind::Pred(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
            FormulaKind::Equal(a, b) => 1 + a.size() + b.size(),
            FormulaKind::Not(a) | FormulaKind::Forall(_, a) | FormulaKind::Exists(_, a) => {
                1 + a.size()
            }
            FormulaKind::And(a, b)
            | FormulaKind::Or(a, b)
            | FormulaKind::Implies(a, b)
            | FormulaKind::Iff(a, b) => 1 + a.size() + b.size(),
        };
        let mut hasher = DefaultHasher::new();
        kind.hash(&mut hasher);
        let hash = hasher.finish();
        Formula(Arc::new(Node { kind, size, hash }))
    }

    pub fn atom(name: &str) -> Formula {
        Formula::new(FormulaKind::Atom(Symbol::new(name)))
    }

    pub fn atom_sym(name: Symbol) -> Formula {
        Formula::new(FormulaKind::Atom(name))
    }

    pub fn pred(name: &str, args: Vec<Term>) -> Formula {
        if args.is_empty() {
            return Formula::atom(name);
        }
        Formula::new(FormulaKind::Pred(Symbol::new(name), args))
    }

    pub fn equal(a: Term, b: Term) -> Formula {
        Formula::new(FormulaKind::Equal(a, b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Formula {
        Formula::new(FormulaKind::Not(a))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::new(FormulaKind::And(a, b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::new(FormulaKind::Or(a, b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::new(FormulaKind::Implies(a, b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::new(FormulaKind::Iff(a, b))
    }

    pub fn forall(var: &str, body: Formula) -> Formula {
        Formula::new(FormulaKind::Forall(Symbol::new(var), body))
    }

    pub fn exists(var: &str, body: Formula) -> Formula {
        Formula::new(FormulaKind::Exists(Symbol::new(var), body))
    }

    pub fn quantified(q: Quantifier, var: Symbol, body: Formula) -> Formula {
        match q {
            Quantifier::Forall => Formula::new(FormulaKind::Forall(var, body)),
            Quantifier::Exists => Formula::new(FormulaKind::Exists(var, body)),
        }
    }

    /// Builds a binary node; panics on [`Connective::Not`].
    pub fn binary(c: Connective, a: Formula, b: Formula) -> Formula {
        match c {
            Connective::And => Formula::and(a, b),
            Connective::Or => Formula::or(a, b),
            Connective::Implies => Formula::implies(a, b),
            Connective::Iff => Formula::iff(a, b),
            Connective::Not => panic!("negation is not a binary connective"),
        }
    }

    pub fn kind(&self) -> &FormulaKind {
        &self.0.kind
    }

    /// Number of AST nodes, terms included.
    pub fn size(&self) -> usize {
        self.0.size
    }

    pub fn ptr_eq(&self, other: &Formula) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn as_atom(&self) -> Option<&Symbol> {
        match self.kind() {
            FormulaKind::Atom(a) => Some(a),
            _ => None,
        }
    }

    pub fn as_binary(&self) -> Option<(Connective, &Formula, &Formula)> {
        match self.kind() {
            FormulaKind::And(a, b) => Some((Connective::And, a, b)),
            FormulaKind::Or(a, b) => Some((Connective::Or, a, b)),
            FormulaKind::Implies(a, b) => Some((Connective::Implies, a, b)),
            FormulaKind::Iff(a, b) => Some((Connective::Iff, a, b)),
            _ => None,
        }
    }

    pub fn as_implication(&self) -> Option<(&Formula, &Formula)> {
        match self.kind() {
            FormulaKind::Implies(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn as_disjunction(&self) -> Option<(&Formula, &Formula)> {
        match self.kind() {
            FormulaKind::Or(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn as_negation(&self) -> Option<&Formula> {
        match self.kind() {
            FormulaKind::Not(a) => Some(a),
            _ => None,
        }
    }

    /// Immediate subformulas.
    pub fn children(&self) -> Vec<&Formula> {
        match self.kind() {
            FormulaKind::Atom(_) | FormulaKind::Pred(..) | FormulaKind::Equal(..) => Vec::new(),
            FormulaKind::Not(a) | FormulaKind::Forall(_, a) | FormulaKind::Exists(_, a) => vec![a],
            FormulaKind::And(a, b)
            | FormulaKind::Or(a, b)
            | FormulaKind::Implies(a, b)
            | FormulaKind::Iff(a, b) => vec![a, b],
        }
    }

    /// All subformulas including `self`, deduplicated, in canonical order.
    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        let mut stack = vec![self.clone()];
        while let Some(f) = stack.pop() {
            for c in f.children() {
                stack.push(c.clone());
            }
            out.insert(f);
        }
        out
    }

    /// Atom names occurring in the formula.
    pub fn atoms(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Symbol>) {
        match self.kind() {
            FormulaKind::Atom(a) => {
                out.insert(a.clone());
            }
            _ => self.children().into_iter().for_each(|c| c.collect_atoms(out)),
        }
    }

    pub fn count_atom(&self, atom: &Symbol) -> usize {
        match self.kind() {
            FormulaKind::Atom(a) => usize::from(a == atom),
            _ => self.children().into_iter().map(|c| c.count_atom(atom)).sum(),
        }
    }

    /// True when the formula uses no predicates, equality or quantifiers.
    pub fn is_propositional(&self) -> bool {
        match self.kind() {
            FormulaKind::Atom(_) => true,
            FormulaKind::Pred(..)
            | FormulaKind::Equal(..)
            | FormulaKind::Forall(..)
            | FormulaKind::Exists(..) => false,
            _ => self.children().into_iter().all(Formula::is_propositional),
        }
    }

    /// Canonical fully parenthesized ASCII form.
    pub fn print(&self) -> String {
        super::print::print_formula(self)
    }
}

impl PartialEq for Formula {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.hash == other.0.hash
                && self.0.size == other.0.size
                && self.0.kind == other.0.kind)
    }
}

impl Eq for Formula {}

impl Hash for Formula {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl Ord for Formula {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        self.0
            .size
            .cmp(&other.0.size)
            .then_with(|| self.0.kind.cmp(&other.0.kind))
    }
}

impl PartialOrd for Formula {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.print())
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Formula({})", self.print())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_counts_terms() {
        let p = Formula::pred("P", vec![Term::var("x")]);
        assert_eq!(p.size(), 2);
        let eq = Formula::equal(Term::var("x"), Term::app("g", vec![Term::var("y")]));
        assert_eq!(eq.size(), 4);
        let f = Formula::forall("x", Formula::implies(p.clone(), Formula::atom("Q")));
        assert_eq!(f.size(), 5);
    }

    #[test]
    fn order_is_size_first() {
        let p = Formula::atom("P");
        let q = Formula::atom("Q");
        let np = Formula::not(p.clone());
        assert!(q < np);
        assert!(p < q);
        let a = Formula::and(p.clone(), q.clone());
        let b = Formula::and(p.clone(), q.clone());
        assert_eq!(a, b);
        assert_eq!(a.cmp(&b), Ordering::Equal);
    }

    #[test]
    fn subformulas_and_atoms() {
        let f = Formula::implies(Formula::atom("P"), Formula::not(Formula::atom("P")));
        assert_eq!(f.subformulas().len(), 3);
        assert_eq!(f.atoms().len(), 1);
        assert_eq!(f.count_atom(&Symbol::new("P")), 2);
    }
}

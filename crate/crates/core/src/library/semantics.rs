//! Classical two-valued truth semantics.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::formula::{Formula, FormulaKind, Symbol};
use crate::par::{self, Execution};

/// Name of the falsum constant; it always evaluates to false.
pub const FALSUM: &str = "f";

/// Truth tables are limited to this many distinct atoms.
pub const MAX_ATOMS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("no truth value for atom `{0}`")]
    Unassigned(String),
    #[error("formula is not propositional")]
    NotPropositional,
    #[error("{0} atoms exceed the truth-table limit of {MAX_ATOMS}")]
    TooManyAtoms(usize),
}

/// Values for propositional atoms. The falsum constant is fixed to false
/// and cannot be reassigned.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TruthAssignment {
    values: BTreeMap<Symbol, bool>,
}

impl TruthAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(mut self, atom: &str, value: bool) -> Self {
        self.values.insert(Symbol::new(atom), value);
        self
    }

    pub fn get(&self, atom: &Symbol) -> Option<bool> {
        if atom.as_str() == FALSUM {
            return Some(false);
        }
        self.values.get(atom).copied()
    }
}

impl FromIterator<(Symbol, bool)> for TruthAssignment {
    fn from_iter<I: IntoIterator<Item = (Symbol, bool)>>(iter: I) -> Self {
        TruthAssignment {
            values: iter.into_iter().collect(),
        }
    }
}

pub fn evaluate_prop(formula: &Formula, assignment: &TruthAssignment) -> Result<bool, SemanticsError> {
    Ok(match formula.kind() {
        FormulaKind::Atom(a) => assignment
            .get(a)
            .ok_or_else(|| SemanticsError::Unassigned(a.to_string()))?,
        FormulaKind::Not(a) => !evaluate_prop(a, assignment)?,
        FormulaKind::And(a, b) => evaluate_prop(a, assignment)? & evaluate_prop(b, assignment)?,
        FormulaKind::Or(a, b) => evaluate_prop(a, assignment)? | evaluate_prop(b, assignment)?,
        FormulaKind::Implies(a, b) => !evaluate_prop(a, assignment)? | evaluate_prop(b, assignment)?,
        FormulaKind::Iff(a, b) => evaluate_prop(a, assignment)? == evaluate_prop(b, assignment)?,
        _ => return Err(SemanticsError::NotPropositional),
    })
}

// Evaluates 64 rows at once; `columns[i]` holds the values of atom `i`.
fn eval_block(f: &Formula, atoms: &[Symbol], columns: &[u64]) -> u64 {
    match f.kind() {
        FormulaKind::Atom(a) => match atoms.iter().position(|x| x == a) {
            Some(i) => columns[i],
            None => 0,
        },
        FormulaKind::Not(a) => !eval_block(a, atoms, columns),
        FormulaKind::And(a, b) => eval_block(a, atoms, columns) & eval_block(b, atoms, columns),
        FormulaKind::Or(a, b) => eval_block(a, atoms, columns) | eval_block(b, atoms, columns),
        FormulaKind::Implies(a, b) => !eval_block(a, atoms, columns) | eval_block(b, atoms, columns),
        FormulaKind::Iff(a, b) => !(eval_block(a, atoms, columns) ^ eval_block(b, atoms, columns)),
        _ => unreachable!("checked propositional"),
    }
}

const LOW_PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

/// Truth value of `formula` in each row of its truth table, packed 64 rows
/// per word. Row `r` gives atom `i` (in sorted order, falsum excluded) the
/// value of bit `i` of `r`.
fn table(formula: &Formula, exec: Execution, stop_on_false: bool) -> Result<(Vec<u64>, u64), SemanticsError> {
    if !formula.is_propositional() {
        return Err(SemanticsError::NotPropositional);
    }
    let atoms: Vec<Symbol> = formula
        .atoms()
        .into_iter()
        .filter(|a| a.as_str() != FALSUM)
        .collect();
    if atoms.len() > MAX_ATOMS {
        return Err(SemanticsError::TooManyAtoms(atoms.len()));
    }
    let n = atoms.len();
    let rows = 1usize << n;
    let valid = if rows >= 64 { u64::MAX } else { (1u64 << rows) - 1 };
    let blocks = rows.div_ceil(64);
    let block = |b: usize| {
        let columns: Vec<u64> = (0..n)
            .map(|i| {
                if i < 6 {
                    LOW_PATTERNS[i]
                } else if (b >> (i - 6)) & 1 == 1 {
                    u64::MAX
                } else {
                    0
                }
            })
            .collect();
        eval_block(formula, &atoms, &columns) & valid
    };
    if stop_on_false {
        let refuted = par::find_first(exec, blocks, |b| block(b) != valid);
        let words = match refuted {
            Some(b) => vec![block(b)],
            None => vec![valid],
        };
        return Ok((words, valid));
    }
    Ok((par::map_slice(exec, &(0..blocks).collect::<Vec<_>>(), |&b| block(b)), valid))
}

/// True when every row of the truth table is true; the falsum constant is
/// read as false.
pub fn is_tautology(formula: &Formula) -> Result<bool, SemanticsError> {
    is_tautology_with(formula, Execution::Sequential)
}

/// As [`is_tautology`], spreading large truth tables over the thread pool.
pub fn is_tautology_with(formula: &Formula, exec: Execution) -> Result<bool, SemanticsError> {
    let (words, valid) = table(formula, exec, true)?;
    Ok(words.iter().all(|&w| w == valid))
}

/// True when some row makes the formula true.
pub fn is_satisfiable(formula: &Formula) -> Result<bool, SemanticsError> {
    Ok(table(formula, Execution::Sequential, false)?.0.iter().any(|&w| w != 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_formula, Alphabet, Connective, LanguageKind, Punctuation};

    fn kleene() -> Alphabet {
        Alphabet::propositional(&["P", "Q", "R"], &Connective::ALL)
    }

    fn church() -> Alphabet {
        Alphabet::builder(LanguageKind::Propositional)
            .variables(&["p", "q"])
            .constants(&["f"])
            .connectives(&[Connective::Not, Connective::Implies])
            .punctuation(Punctuation::Brackets)
            .build()
            .unwrap()
    }

    #[test]
    fn evaluation_examples() {
        let a = kleene();
        let f = parse_formula("P -> (Q -> P)", &a).unwrap();
        let v = TruthAssignment::new().set("P", false).set("Q", true);
        assert_eq!(evaluate_prop(&f, &v), Ok(true));
        let p = Formula::atom("P");
        assert_eq!(evaluate_prop(&p, &TruthAssignment::new().set("P", true)), Ok(true));
        let neg = parse_formula("[p -> f]", &church()).unwrap();
        assert_eq!(evaluate_prop(&neg, &TruthAssignment::new().set("p", true)), Ok(false));
        assert_eq!(
            evaluate_prop(&p, &TruthAssignment::new()),
            Err(SemanticsError::Unassigned("P".into()))
        );
    }

    #[test]
    fn tautology_examples() {
        let a = kleene();
        assert_eq!(is_tautology(&parse_formula("~~P -> P", &a).unwrap()), Ok(true));
        assert_eq!(is_tautology(&Formula::atom("P")), Ok(false));
        let p2 = parse_formula("[[~p -> ~q] -> [q -> p]]", &church()).unwrap();
        assert_eq!(is_tautology(&p2), Ok(true));
        assert_eq!(is_tautology(&Formula::atom("f")), Ok(false));
        assert_eq!(is_tautology(&Formula::not(Formula::atom("f"))), Ok(true));
    }

    #[test]
    fn wide_tables() {
        let names: Vec<String> = (0..12).map(|i| format!("A{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let a = Alphabet::propositional(&refs, &Connective::ALL);
        let disj = names.join(" | ");
        let excluded = parse_formula(&format!("({disj}) | ~A0"), &a).unwrap();
        let contingent = parse_formula(&disj, &a).unwrap();
        for exec in [Execution::Sequential, Execution::Parallel] {
            assert_eq!(is_tautology_with(&excluded, exec), Ok(true));
            assert_eq!(is_tautology_with(&contingent, exec), Ok(false));
        }
        assert_eq!(is_satisfiable(&contingent), Ok(true));
        assert_eq!(is_satisfiable(&parse_formula("A0 & ~A0", &a).unwrap()), Ok(false));
    }
}

//! Production mode: every wff of an alphabet up to a size cap.

use super::alphabet::Alphabet;
use super::syntax::{Connective, Formula, FormulaKind, Quantifier, Term};
use super::FormulaError;

/// Ceiling used by [`enumerate_wffs`].
pub const DEFAULT_WFF_CEILING: usize = 2_000_000;

/// All wffs of size at most `max_size`, in canonical size-lexicographic
/// order.
pub fn enumerate_wffs(alphabet: &Alphabet, max_size: usize) -> Result<Vec<Formula>, FormulaError> {
    enumerate_wffs_with_ceiling(alphabet, max_size, DEFAULT_WFF_CEILING)
}

pub fn enumerate_wffs_with_ceiling(
    alphabet: &Alphabet,
    max_size: usize,
    ceiling: usize,
) -> Result<Vec<Formula>, FormulaError> {
    Ok(wffs_by_size(alphabet, max_size, ceiling)?
        .into_iter()
        .flatten()
        .collect())
}

/// Terms grouped by size; index `s` holds the terms of size `s`.
pub fn enumerate_terms(alphabet: &Alphabet, max_size: usize) -> Vec<Vec<Term>> {
    let mut levels: Vec<Vec<Term>> = vec![Vec::new(); max_size + 1];
    for s in 1..=max_size {
        let mut level = Vec::new();
        if s == 1 {
            level.extend(alphabet.individual_variables().iter().cloned().map(Term::Var));
        }
        for (f, &arity) in alphabet.functions() {
            if arity == 0 {
                if s == 1 {
                    level.push(Term::App(f.clone(), Vec::new()));
                }
                continue;
            }
            for args in tuples(&levels, arity, s - 1) {
                level.push(Term::App(f.clone(), args));
            }
        }
        level.sort();
        levels[s] = level;
    }
    levels
}

/// Every way to pick `n` items from `levels` whose sizes sum to `total`.
fn tuples<T: Clone>(levels: &[Vec<T>], n: usize, total: usize) -> Vec<Vec<T>> {
    if n == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 1..=total.saturating_sub(n - 1) {
        if first >= levels.len() {
            break;
        }
        for rest in tuples(levels, n - 1, total - first) {
            for item in &levels[first] {
                let mut v = Vec::with_capacity(n);
                v.push(item.clone());
                v.extend(rest.iter().cloned());
                out.push(v);
            }
        }
    }
    out
}

/// Wffs grouped by size; index `s` holds the wffs of size `s`, each group
/// sorted canonically.
pub fn wffs_by_size(
    alphabet: &Alphabet,
    max_size: usize,
    ceiling: usize,
) -> Result<Vec<Vec<Formula>>, FormulaError> {
    let terms = enumerate_terms(alphabet, max_size);
    let binaries: Vec<Connective> = alphabet
        .connectives()
        .iter()
        .copied()
        .filter(|c| c.is_binary())
        .collect();
    let negation = alphabet.has_connective(Connective::Not);
    let quantifiers: Vec<Quantifier> = alphabet.quantifiers().iter().copied().collect();

    let mut levels: Vec<Vec<Formula>> = vec![Vec::new(); max_size + 1];
    let mut total = 0usize;
    for s in 1..=max_size {
        let mut level = Vec::new();
        if s == 1 {
            level.extend(alphabet.atoms().into_iter().map(Formula::atom_sym));
        }
        for (p, &arity) in alphabet.predicates() {
            if arity > 0 {
                for args in tuples(&terms, arity, s - 1) {
                    level.push(Formula::new(FormulaKind::Pred(p.clone(), args)));
                }
            }
        }
        if alphabet.has_equality() {
            for pair in tuples(&terms, 2, s - 1) {
                let [a, b]: [Term; 2] = pair.try_into().expect("pair");
                level.push(Formula::equal(a, b));
            }
        }
        if s >= 2 {
            if negation {
                level.extend(levels[s - 1].iter().cloned().map(Formula::not));
            }
            for &q in &quantifiers {
                for x in alphabet.individual_variables() {
                    for body in &levels[s - 1] {
                        level.push(Formula::quantified(q, x.clone(), body.clone()));
                    }
                }
            }
        }
        for &c in &binaries {
            for left in 1..s.saturating_sub(1) {
                let right = s - 1 - left;
                for a in &levels[left] {
                    for b in &levels[right] {
                        level.push(Formula::binary(c, a.clone(), b.clone()));
                    }
                }
                if total + level.len() > ceiling {
                    return Err(FormulaError::BudgetExceeded(ceiling));
                }
            }
        }
        total += level.len();
        if total > ceiling {
            return Err(FormulaError::BudgetExceeded(ceiling));
        }
        level.sort();
        levels[s] = level;
    }
    Ok(levels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{LanguageKind, Symbol};

    fn texts(fs: &[Formula]) -> Vec<String> {
        fs.iter().map(Formula::print).collect()
    }

    #[test]
    fn small_cases() {
        let a = Alphabet::propositional(&["P"], &[Connective::Not, Connective::And]);
        assert_eq!(texts(&enumerate_wffs(&a, 2).unwrap()), ["P", "~P"]);
        let b = Alphabet::propositional(&["P", "Q"], &[Connective::Not]);
        assert_eq!(texts(&enumerate_wffs(&b, 1).unwrap()), ["P", "Q"]);
        let c = Alphabet::propositional(&["P"], &[Connective::Not]);
        assert_eq!(texts(&enumerate_wffs(&c, 3).unwrap()), ["P", "~P", "~~P"]);
    }

    #[test]
    fn ceiling_is_reported() {
        let a = Alphabet::propositional(&["P", "Q"], &Connective::ALL);
        assert_eq!(
            enumerate_wffs_with_ceiling(&a, 7, 100),
            Err(FormulaError::BudgetExceeded(100))
        );
    }

    #[test]
    fn first_order_terms() {
        let a = Alphabet::builder(LanguageKind::FirstOrder)
            .individual_variables(&["x"])
            .function("a", 0)
            .function("g", 1)
            .predicate("P", 1)
            .equality(true)
            .build()
            .unwrap();
        let t = enumerate_terms(&a, 2);
        assert_eq!(t[1].len(), 2);
        assert_eq!(t[2].len(), 2);
        let wffs = enumerate_wffs(&a, 3).unwrap();
        // P(x), P(a), P(g(x)), P(g(a)) and four equalities of size 3.
        assert_eq!(wffs.len(), 8);
        assert!(wffs.iter().all(|f| f.atoms().is_empty() || f.atoms().contains(&Symbol::new("P"))));
    }
}

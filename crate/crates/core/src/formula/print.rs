//! Canonical printing.
//!
//! Every binary connective is wrapped in delimiters, unary operators are
//! prefixed without them: `(P & Q)`, `~~P`, `forall x (P(x) -> Q(x))`.

use std::fmt::Write;

use super::alphabet::Punctuation;
use super::syntax::{Formula, FormulaKind};

/// Fully parenthesized ASCII form.
pub fn print_formula(formula: &Formula) -> String {
    print_with(formula, Punctuation::Parentheses)
}

/// As [`print_formula`], using `punctuation` around binary connectives.
/// Argument lists of predicates always use parentheses.
pub fn print_with(formula: &Formula, punctuation: Punctuation) -> String {
    let mut out = String::with_capacity(formula.size() * 3);
    write_formula(&mut out, formula, punctuation);
    out
}

fn write_formula(out: &mut String, f: &Formula, p: Punctuation) {
    match f.kind() {
        FormulaKind::Atom(a) => out.push_str(a.as_str()),
        FormulaKind::Pred(name, args) => {
            out.push_str(name.as_str());
            out.push('(');
            for (i, t) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                let _ = write!(out, "{t}");
            }
            out.push(')');
        }
        FormulaKind::Equal(a, b) => {
            let _ = write!(out, "{a} = {b}");
        }
        FormulaKind::Not(a) => {
            out.push('~');
            write_formula(out, a, p);
        }
        FormulaKind::Forall(x, a) | FormulaKind::Exists(x, a) => {
            let kw = if matches!(f.kind(), FormulaKind::Forall(..)) {
                "forall"
            } else {
                "exists"
            };
            let _ = write!(out, "{kw} {x} ");
            write_formula(out, a, p);
        }
        FormulaKind::And(..) | FormulaKind::Or(..) | FormulaKind::Implies(..) | FormulaKind::Iff(..) => {
            let (c, a, b) = f.as_binary().expect("binary node");
            let (open, close) = p.delimiters();
            out.push(open);
            write_formula(out, a, p);
            out.push(' ');
            out.push_str(c.ascii());
            out.push(' ');
            write_formula(out, b, p);
            out.push(close);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Term;

    #[test]
    fn canonical_forms() {
        let p = Formula::atom("P");
        let q = Formula::atom("Q");
        assert_eq!(print_formula(&Formula::and(p.clone(), q.clone())), "(P & Q)");
        assert_eq!(print_formula(&p), "P");
        assert_eq!(print_formula(&Formula::not(Formula::not(p.clone()))), "~~P");
        let px = Formula::pred("P", vec![Term::var("x")]);
        let qx = Formula::pred("Q", vec![Term::var("x")]);
        let all = Formula::forall("x", Formula::implies(px, qx));
        assert_eq!(print_formula(&all), "forall x (P(x) -> Q(x))");
    }

    #[test]
    fn brackets() {
        let p = Formula::atom("p");
        let f = Formula::implies(p.clone(), Formula::implies(Formula::atom("q"), p));
        assert_eq!(print_with(&f, Punctuation::Brackets), "[p -> [q -> p]]");
    }
}

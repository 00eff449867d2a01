//! Propositional and first-order substitution.

use std::collections::BTreeSet;

use super::syntax::{Formula, FormulaKind, Symbol, Term};

/// Individual variables with at least one unbound occurrence.
pub fn free_variables(formula: &Formula) -> BTreeSet<Symbol> {
    let mut out = BTreeSet::new();
    collect_free(formula, &mut Vec::new(), &mut out);
    out
}

fn collect_free(f: &Formula, bound: &mut Vec<Symbol>, out: &mut BTreeSet<Symbol>) {
    let mut add_term = |t: &Term, bound: &Vec<Symbol>| {
        for v in t.variables() {
            if !bound.contains(&v) {
                out.insert(v);
            }
        }
    };
    match f.kind() {
        FormulaKind::Atom(_) => {}
        FormulaKind::Pred(_, args) => args.iter().for_each(|t| add_term(t, bound)),
        FormulaKind::Equal(a, b) => {
            add_term(a, bound);
            add_term(b, bound);
        }
        FormulaKind::Forall(x, body) | FormulaKind::Exists(x, body) => {
            bound.push(x.clone());
            collect_free(body, bound, out);
            bound.pop();
        }
        _ => {
            for c in f.children() {
                collect_free(c, bound, out);
            }
        }
    }
}

fn all_variables(f: &Formula, out: &mut BTreeSet<Symbol>) {
    match f.kind() {
        FormulaKind::Atom(_) => {}
        FormulaKind::Pred(_, args) => args.iter().for_each(|t| t.collect_variables(out)),
        FormulaKind::Equal(a, b) => {
            a.collect_variables(out);
            b.collect_variables(out);
        }
        FormulaKind::Forall(x, body) | FormulaKind::Exists(x, body) => {
            out.insert(x.clone());
            all_variables(body, out);
        }
        _ => f.children().into_iter().for_each(|c| all_variables(c, out)),
    }
}

/// `base` followed by as few primes as needed to avoid `avoid`.
pub fn fresh_variable(base: &Symbol, avoid: &BTreeSet<Symbol>) -> Symbol {
    let mut name = base.to_string();
    loop {
        name.push('\'');
        let candidate = Symbol::new(&name);
        if !avoid.contains(&candidate) {
            return candidate;
        }
    }
}

/// Replaces every occurrence of the atom `atom` by `replacement`.
pub fn substitute_prop(formula: &Formula, atom: &Symbol, replacement: &Formula) -> Formula {
    if formula.count_atom(atom) == 0 {
        return formula.clone();
    }
    replace_atom(formula, atom, replacement)
}

fn replace_atom(f: &Formula, atom: &Symbol, r: &Formula) -> Formula {
    match f.kind() {
        FormulaKind::Atom(a) if a == atom => r.clone(),
        FormulaKind::Atom(_) | FormulaKind::Pred(..) | FormulaKind::Equal(..) => f.clone(),
        FormulaKind::Not(a) => Formula::not(replace_atom(a, atom, r)),
        FormulaKind::Forall(x, a) => Formula::new(FormulaKind::Forall(x.clone(), replace_atom(a, atom, r))),
        FormulaKind::Exists(x, a) => Formula::new(FormulaKind::Exists(x.clone(), replace_atom(a, atom, r))),
        _ => {
            let (c, a, b) = f.as_binary().expect("binary node");
            Formula::binary(c, replace_atom(a, atom, r), replace_atom(b, atom, r))
        }
    }
}

/// Replaces the free occurrences of `var` by `term`, renaming bound
/// variables that would capture a variable of `term`.
pub fn substitute_term(formula: &Formula, var: &Symbol, term: &Term) -> Formula {
    if !free_variables(formula).contains(var) {
        return formula.clone();
    }
    let term_vars = term.variables();
    subst_term(formula, var, term, &term_vars)
}

fn subst_term(f: &Formula, var: &Symbol, term: &Term, term_vars: &BTreeSet<Symbol>) -> Formula {
    match f.kind() {
        FormulaKind::Atom(_) => f.clone(),
        FormulaKind::Pred(p, args) => Formula::new(FormulaKind::Pred(
            p.clone(),
            args.iter().map(|t| t.substitute(var, term)).collect(),
        )),
        FormulaKind::Equal(a, b) => Formula::equal(a.substitute(var, term), b.substitute(var, term)),
        FormulaKind::Not(a) => Formula::not(subst_term(a, var, term, term_vars)),
        FormulaKind::Forall(y, body) | FormulaKind::Exists(y, body) => {
            let forall = matches!(f.kind(), FormulaKind::Forall(..));
            if y == var || !free_variables(body).contains(var) {
                return f.clone();
            }
            let (y, body) = if term_vars.contains(y) {
                let mut avoid = term_vars.clone();
                all_variables(body, &mut avoid);
                avoid.insert(var.clone());
                let fresh = fresh_variable(y, &avoid);
                let renamed = subst_term(body, y, &Term::Var(fresh.clone()), &BTreeSet::from([fresh.clone()]));
                (fresh, renamed)
            } else {
                (y.clone(), body.clone())
            };
            let body = subst_term(&body, var, term, term_vars);
            if forall {
                Formula::new(FormulaKind::Forall(y, body))
            } else {
                Formula::new(FormulaKind::Exists(y, body))
            }
        }
        _ => {
            let (c, a, b) = f.as_binary().expect("binary node");
            Formula::binary(c, subst_term(a, var, term, term_vars), subst_term(b, var, term, term_vars))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn px() -> Formula {
        Formula::pred("P", vec![Term::var("x")])
    }

    #[test]
    fn free_variable_examples() {
        let x = Symbol::new("x");
        assert_eq!(free_variables(&px()), BTreeSet::from([x.clone()]));
        assert!(free_variables(&Formula::forall("x", px())).is_empty());
        let mixed = Formula::implies(px(), Formula::forall("x", Formula::pred("Q", vec![Term::var("x")])));
        assert_eq!(free_variables(&mixed), BTreeSet::from([x]));
    }

    #[test]
    fn prop_substitution() {
        let p = Formula::atom("p");
        let pp = Formula::implies(p.clone(), p.clone());
        let qf = Formula::implies(Formula::atom("q"), Formula::atom("f"));
        let out = substitute_prop(&pp, &Symbol::new("p"), &qf);
        assert_eq!(out, Formula::implies(qf.clone(), qf));
        assert_eq!(substitute_prop(&Formula::atom("P"), &Symbol::new("Q"), &Formula::atom("R")), Formula::atom("P"));
    }

    #[test]
    fn term_substitution() {
        let x = Symbol::new("x");
        let a = Term::constant("a");
        assert_eq!(substitute_term(&px(), &x, &a), Formula::pred("P", vec![a.clone()]));
        let all = Formula::forall("x", px());
        assert_eq!(substitute_term(&all, &x, &a), all);

        let rxy = Formula::pred("R", vec![Term::var("x"), Term::var("y")]);
        let ex = Formula::exists("y", rxy);
        let gy = Term::app("g", vec![Term::var("y")]);
        let out = substitute_term(&ex, &x, &gy);
        let expected = Formula::exists("y'", Formula::pred("R", vec![gy.clone(), Term::var("y'")]));
        assert_eq!(out, expected);
        assert_eq!(free_variables(&out), BTreeSet::from([Symbol::new("y")]));
    }
}

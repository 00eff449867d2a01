//! Recursive-descent parser for the surface syntax.
//!
//! Precedence from tightest: `~` and quantifiers, `&`, `|`, `->`, `<->`.
//! `&` and `|` associate to the left, `->` and `<->` to the right. Both
//! `( )` and `[ ]` group. Unicode synonyms: `¬ ∼ ∧ ∨ → ⊃ ↔ ∀ ∃`.

use std::fmt;

use thiserror::Error;

use super::alphabet::{Alphabet, LanguageKind};
use super::print::print_with;
use super::syntax::{Connective, Formula, Quantifier, Symbol, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnknownSymbol(String),
    Arity {
        symbol: String,
        expected: usize,
        found: usize,
    },
    Unbalanced,
    QuantifierInPropositional,
    NotInAlphabet(String),
    UnexpectedToken(String),
    UnexpectedEnd,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character {c:?}"),
            ParseErrorKind::UnknownSymbol(s) => write!(f, "unknown symbol `{s}`"),
            ParseErrorKind::Arity {
                symbol,
                expected,
                found,
            } => write!(f, "`{symbol}` expects {expected} argument(s), found {found}"),
            ParseErrorKind::Unbalanced => f.write_str("unbalanced delimiters"),
            ParseErrorKind::QuantifierInPropositional => {
                f.write_str("quantifier in a propositional language")
            }
            ParseErrorKind::NotInAlphabet(s) => write!(f, "`{s}` is not part of the alphabet"),
            ParseErrorKind::UnexpectedToken(s) => write!(f, "unexpected `{s}`"),
            ParseErrorKind::UnexpectedEnd => f.write_str("unexpected end of input"),
        }
    }
}

/// A parse failure at a character offset of the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at offset {position}")]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Not,
    Bin(Connective),
    Quant(Quantifier),
    Eq,
    Open(char),
    Close(char),
    Comma,
}

impl Tok {
    fn text(&self) -> String {
        match self {
            Tok::Ident(s) => s.clone(),
            Tok::Not => "~".into(),
            Tok::Bin(c) => c.ascii().into(),
            Tok::Quant(q) => q.keyword().into(),
            Tok::Eq => "=".into(),
            Tok::Open(c) | Tok::Close(c) => c.to_string(),
            Tok::Comma => ",".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let err = |kind| ParseError {
            position: start,
            kind,
        };
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut name = String::new();
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    name.push(chars[i]);
                    i += 1;
                }
                while i < chars.len() {
                    match chars[i] {
                        '\'' | '′' => name.push('\''),
                        '″' => name.push_str("''"),
                        _ => break,
                    }
                    i += 1;
                }
                out.push((start, match Quantifier::from_name(&name) {
                    Some(q) => Tok::Quant(q),
                    None => Tok::Ident(name),
                }));
                continue;
            }
            '~' | '¬' | '∼' => Tok::Not,
            '&' | '∧' => Tok::Bin(Connective::And),
            '|' | '∨' => Tok::Bin(Connective::Or),
            '→' | '⊃' => Tok::Bin(Connective::Implies),
            '↔' => Tok::Bin(Connective::Iff),
            '∀' => Tok::Quant(Quantifier::Forall),
            '∃' => Tok::Quant(Quantifier::Exists),
            '=' => Tok::Eq,
            ',' => Tok::Comma,
            '(' | '[' => Tok::Open(c),
            ')' | ']' => Tok::Close(c),
            '-' if chars.get(i + 1) == Some(&'>') => {
                i += 1;
                Tok::Bin(Connective::Implies)
            }
            '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                i += 2;
                Tok::Bin(Connective::Iff)
            }
            other => return Err(err(ParseErrorKind::UnexpectedChar(other))),
        };
        i += 1;
        out.push((start, tok));
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    alphabet: &'a Alphabet,
    extra_atoms: &'a [Symbol],
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn error(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            position: self.offset(),
            kind,
        }
    }

    fn unexpected(&self) -> ParseError {
        match self.peek() {
            None => self.error(ParseErrorKind::UnexpectedEnd),
            Some(Tok::Close(_)) => self.error(ParseErrorKind::Unbalanced),
            Some(t) => self.error(ParseErrorKind::UnexpectedToken(t.text())),
        }
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn require_connective(&self, c: Connective) -> Result<(), ParseError> {
        if self.alphabet.has_connective(c) {
            Ok(())
        } else {
            Err(self.error(ParseErrorKind::NotInAlphabet(c.ascii().into())))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        self.iff()
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.implication()?;
        if self.peek() == Some(&Tok::Bin(Connective::Iff)) {
            self.require_connective(Connective::Iff)?;
            self.bump();
            let rhs = self.iff()?;
            return Ok(Formula::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.peek() == Some(&Tok::Bin(Connective::Implies)) {
            self.require_connective(Connective::Implies)?;
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while self.peek() == Some(&Tok::Bin(Connective::Or)) {
            self.require_connective(Connective::Or)?;
            self.bump();
            lhs = Formula::or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Tok::Bin(Connective::And)) {
            self.require_connective(Connective::And)?;
            self.bump();
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Not) => {
                self.require_connective(Connective::Not)?;
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Some(&Tok::Quant(q)) => {
                if self.alphabet.kind() == LanguageKind::Propositional {
                    return Err(self.error(ParseErrorKind::QuantifierInPropositional));
                }
                if !self.alphabet.quantifiers().contains(&q) {
                    return Err(self.error(ParseErrorKind::NotInAlphabet(q.keyword().into())));
                }
                self.bump();
                let var = match self.peek() {
                    Some(Tok::Ident(name)) if self.alphabet.is_individual_variable(name) => {
                        Symbol::new(name)
                    }
                    Some(Tok::Ident(name)) => {
                        return Err(self.error(ParseErrorKind::UnknownSymbol(name.clone())))
                    }
                    _ => return Err(self.unexpected()),
                };
                self.bump();
                Ok(Formula::quantified(q, var, self.unary()?))
            }
            Some(Tok::Open(_)) => self.grouped(|p| p.formula()),
            Some(Tok::Ident(_)) => self.atomic(),
            _ => Err(self.unexpected()),
        }
    }

    fn grouped<T>(&mut self, inner: impl FnOnce(&mut Self) -> Result<T, ParseError>) -> Result<T, ParseError> {
        let open_at = self.offset();
        let open = match self.bump() {
            Some(Tok::Open(c)) => c,
            _ => unreachable!("grouped called on a non-delimiter"),
        };
        let value = inner(self)?;
        let close = if open == '(' { ')' } else { ']' };
        match self.peek() {
            Some(Tok::Close(c)) if *c == close => {
                self.bump();
                Ok(value)
            }
            Some(Tok::Close(_)) | None => Err(ParseError {
                position: open_at,
                kind: ParseErrorKind::Unbalanced,
            }),
            Some(_) => Err(self.unexpected()),
        }
    }

    fn atomic(&mut self) -> Result<Formula, ParseError> {
        let at = self.offset();
        let name = match self.peek() {
            Some(Tok::Ident(n)) => n.clone(),
            _ => return Err(self.unexpected()),
        };
        let alphabet = self.alphabet;
        let sym = Symbol::new(&name);
        if let Some(&arity) = alphabet.predicates().get(&sym) {
            self.bump();
            if arity == 0 {
                return Ok(Formula::atom_sym(sym));
            }
            let args = self.arguments(&name, arity, at)?;
            return Ok(Formula::new(super::syntax::FormulaKind::Pred(sym, args)));
        }
        if alphabet.is_variable(&name) || alphabet.is_constant(&name) || self.extra_atoms.contains(&sym) {
            self.bump();
            return Ok(Formula::atom_sym(sym));
        }
        if alphabet.kind() == LanguageKind::FirstOrder
            && (alphabet.is_individual_variable(&name) || alphabet.functions().contains_key(&sym))
        {
            let lhs = self.term()?;
            if self.peek() != Some(&Tok::Eq) {
                return Err(match self.peek() {
                    None => self.error(ParseErrorKind::UnexpectedEnd),
                    _ => self.unexpected(),
                });
            }
            if !alphabet.has_equality() {
                return Err(self.error(ParseErrorKind::NotInAlphabet("=".into())));
            }
            self.bump();
            let rhs = self.term()?;
            return Ok(Formula::equal(lhs, rhs));
        }
        Err(ParseError {
            position: at,
            kind: ParseErrorKind::UnknownSymbol(name),
        })
    }

    fn arguments(&mut self, name: &str, arity: usize, at: usize) -> Result<Vec<Term>, ParseError> {
        if !matches!(self.peek(), Some(Tok::Open('('))) {
            return Err(ParseError {
                position: at,
                kind: ParseErrorKind::Arity {
                    symbol: name.into(),
                    expected: arity,
                    found: 0,
                },
            });
        }
        let args = self.grouped(|p| {
            let mut args = vec![p.term()?];
            while p.peek() == Some(&Tok::Comma) {
                p.bump();
                args.push(p.term()?);
            }
            Ok(args)
        })?;
        if args.len() != arity {
            return Err(ParseError {
                position: at,
                kind: ParseErrorKind::Arity {
                    symbol: name.into(),
                    expected: arity,
                    found: args.len(),
                },
            });
        }
        Ok(args)
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let at = self.offset();
        let name = match self.peek() {
            Some(Tok::Ident(n)) => n.clone(),
            _ => return Err(self.unexpected()),
        };
        let sym = Symbol::new(&name);
        if let Some(&arity) = self.alphabet.functions().get(&sym) {
            self.bump();
            if arity == 0 {
                return Ok(Term::App(sym, Vec::new()));
            }
            let args = self.arguments(&name, arity, at)?;
            return Ok(Term::App(sym, args));
        }
        if self.alphabet.is_individual_variable(&name) {
            self.bump();
            return Ok(Term::Var(sym));
        }
        Err(ParseError {
            position: at,
            kind: ParseErrorKind::UnknownSymbol(name),
        })
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.unexpected()),
        }
    }
}

fn parser<'a>(text: &str, alphabet: &'a Alphabet, extra_atoms: &'a [Symbol]) -> Result<Parser<'a>, ParseError> {
    Ok(Parser {
        toks: lex(text)?,
        pos: 0,
        end: text.chars().count(),
        alphabet,
        extra_atoms,
    })
}

/// Parses a wff of `alphabet`.
pub fn parse_formula(text: &str, alphabet: &Alphabet) -> Result<Formula, ParseError> {
    parse_formula_with(text, alphabet, &[])
}

/// Parses a formula whose atoms may also be any of `extra_atoms`
/// (metavariables of a schema pattern).
pub fn parse_formula_with(text: &str, alphabet: &Alphabet, extra_atoms: &[Symbol]) -> Result<Formula, ParseError> {
    let mut p = parser(text, alphabet, extra_atoms)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

pub fn parse_term(text: &str, alphabet: &Alphabet) -> Result<Term, ParseError> {
    let mut p = parser(text, alphabet, &[])?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

/// Decision mode: accepts exactly the canonical printed wffs of the
/// language, rejecting every other string.
pub fn accepts(text: &str, alphabet: &Alphabet) -> bool {
    match parse_formula(text, alphabet) {
        Ok(f) => print_with(&f, alphabet.punctuation()) == text,
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Punctuation;

    fn prop() -> Alphabet {
        Alphabet::propositional(&["P", "Q", "R"], &Connective::ALL)
    }

    fn first_order() -> Alphabet {
        Alphabet::builder(LanguageKind::FirstOrder)
            .individual_variables(&["x", "y"])
            .predicate("P", 1)
            .predicate("Q", 1)
            .predicate("R", 2)
            .function("a", 0)
            .function("g", 1)
            .connectives(&Connective::ALL)
            .quantifiers(&[Quantifier::Forall, Quantifier::Exists])
            .equality(true)
            .build()
            .unwrap()
    }

    #[test]
    fn parses_examples() {
        let a = prop();
        assert_eq!(
            parse_formula("(P & Q)", &a).unwrap(),
            Formula::and(Formula::atom("P"), Formula::atom("Q"))
        );
        assert_eq!(parse_formula("P", &a).unwrap(), Formula::atom("P"));
        let err = parse_formula("~", &a).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnexpectedEnd);

        let fo = first_order();
        let f = parse_formula("forall x (P(x) -> Q(x))", &fo).unwrap();
        let px = Formula::pred("P", vec![Term::var("x")]);
        let qx = Formula::pred("Q", vec![Term::var("x")]);
        assert_eq!(f, Formula::forall("x", Formula::implies(px, qx)));
    }

    #[test]
    fn precedence_and_associativity() {
        let a = prop();
        let f = parse_formula("~P & Q | R -> P -> Q <-> R", &a).unwrap();
        assert_eq!(f.print(), "((((~P & Q) | R) -> (P -> Q)) <-> R)");
        let g = parse_formula("P & Q & R", &a).unwrap();
        assert_eq!(g.print(), "((P & Q) & R)");
    }

    #[test]
    fn unicode_and_brackets() {
        let a = Alphabet::builder(LanguageKind::Propositional)
            .variables(&["p", "q"])
            .constants(&["f"])
            .connectives(&[Connective::Implies])
            .punctuation(Punctuation::Brackets)
            .build()
            .unwrap();
        let f = parse_formula("[[p ⊃ f] ⊃ f]", &a).unwrap();
        assert_eq!(print_with(&f, Punctuation::Brackets), "[[p -> f] -> f]");
        assert!(accepts("[[p -> f] -> f]", &a));
        assert!(!accepts("((p -> f) -> f)", &a));
        let err = parse_formula("~p", &a).unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::NotInAlphabet(_)));
    }

    #[test]
    fn error_positions() {
        let a = prop();
        let e = parse_formula("(P & Q", &a).unwrap_err();
        assert_eq!((e.position, e.kind), (0, ParseErrorKind::Unbalanced));
        let e = parse_formula("P & Z", &a).unwrap_err();
        assert_eq!(e.position, 4);
        assert_eq!(e.kind, ParseErrorKind::UnknownSymbol("Z".into()));
        let e = parse_formula("P)", &a).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Unbalanced);
        let e = parse_formula("P $ Q", &a).unwrap_err();
        assert_eq!((e.position, e.kind), (2, ParseErrorKind::UnexpectedChar('$')));
        let e = parse_formula("forall x P", &a).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::QuantifierInPropositional);
        let fo = first_order();
        let e = parse_formula("R(x)", &fo).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Arity { expected: 2, found: 1, .. }));
    }

    #[test]
    fn terms_and_equality() {
        let fo = first_order();
        let f = parse_formula("exists y' R(g(y), y')", &fo).unwrap();
        assert_eq!(f.print(), "exists y' R(g(y), y')");
        let e = parse_formula("~x = a", &fo).unwrap();
        assert_eq!(e.print(), "~x = a");
        assert!(accepts("x = g(a)", &fo));
    }
}

//! Logical languages: alphabets, well-formed formulas and their surface
//! syntax, substitution, and axiom schemata.

mod alphabet;
mod enumerate;
mod language;
mod parse;
mod print;
mod schema;
mod subst;
mod syntax;

pub use alphabet::{Alphabet, AlphabetBuilder, LanguageKind, Punctuation};
pub use enumerate::{enumerate_terms, enumerate_wffs, enumerate_wffs_with_ceiling, wffs_by_size, DEFAULT_WFF_CEILING};
pub use language::{LanguageDefinition, LanguageMode};
pub use parse::{accepts, parse_formula, parse_formula_with, parse_term, ParseError, ParseErrorKind};
pub use print::{print_formula, print_with};
pub use schema::{instantiate_schema, match_schema, MetaAssignment, Schema, SideCondition};
pub use subst::{free_variables, fresh_variable, substitute_prop, substitute_term};
pub use syntax::{Connective, Formula, FormulaKind, Quantifier, Symbol, Term};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("undeclared symbol `{0}`")]
    Undeclared(String),
    #[error("`{0}` is not part of the alphabet")]
    NotInAlphabet(String),
    #[error("`{symbol}` expects {expected} argument(s), found {found}")]
    Arity {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("no binding for metavariable `{0}`")]
    MissingBinding(String),
    #[error("invalid schema: {0}")]
    InvalidSchema(String),
    #[error("enumeration would exceed the ceiling of {0} formulas")]
    BudgetExceeded(usize),
    #[error("invalid language definition: {0}")]
    InvalidLanguage(String),
}

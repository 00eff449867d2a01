//! Bounded equivalence checks, metalogical properties and abstract logics.

mod compare;
mod properties;
mod relation;
mod verdict;

pub use compare::{compare_calculi, formula_symbols, same_definition, EquivalenceKind};
pub use properties::{check_property, check_property_on, tautology_certificate, FormulaMap, FormulaSet, Property};
pub use relation::{
    apply_abstract, check_boundedness, decompose_relation, recompose_relation, relation_from_calculus,
    AbstractCalculus, BoundednessKind, Closure, FiniteRelation, Pair,
};
pub use verdict::{BoundsReport, Verdict, Witness};

use thiserror::Error;

use crate::engine::EngineError;
use crate::formula::FormulaError;
use crate::library::TranslateError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("missing parameter: {0}")]
    MissingParameter(String),
    #[error("node budget of {0} exceeded")]
    Budget(usize),
    #[error("malformed relation: {0}")]
    Interchange(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Translate(#[from] TranslateError),
}

impl From<FormulaError> for AnalysisError {
    fn from(e: FormulaError) -> Self {
        AnalysisError::Engine(EngineError::Formula(e))
    }
}

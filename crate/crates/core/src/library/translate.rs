//! Translations between the negation and falsum presentations.

use thiserror::Error;

use crate::formula::{Alphabet, Formula, FormulaKind};

use super::builtins::church_alphabet;
use super::semantics::FALSUM;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("`{formula}` is not a formula of the source language of `{map}`")]
    OutsideSource { map: &'static str, formula: String },
    #[error("unknown translation `{0}`")]
    UnknownMap(String),
}

/// A computable formula mapping between two languages.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TranslationMap {
    Identity,
    /// `~phi` becomes `[phi' > f]`.
    P2ToP1,
    /// `[phi > f]` becomes `~phi'`, and a bare `f` becomes `~[p > p]`.
    P1ToP2,
}

impl TranslationMap {
    pub fn from_name(name: &str) -> Result<Self, TranslateError> {
        match name {
            "identity" => Ok(TranslationMap::Identity),
            "p2_to_p1" => Ok(TranslationMap::P2ToP1),
            "p1_to_p2" => Ok(TranslationMap::P1ToP2),
            _ => Err(TranslateError::UnknownMap(name.to_string())),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TranslationMap::Identity => "identity",
            TranslationMap::P2ToP1 => "p2_to_p1",
            TranslationMap::P1ToP2 => "p1_to_p2",
        }
    }

    /// The map in the other direction; an inverse on the image.
    pub fn inverse(self) -> TranslationMap {
        match self {
            TranslationMap::Identity => TranslationMap::Identity,
            TranslationMap::P2ToP1 => TranslationMap::P1ToP2,
            TranslationMap::P1ToP2 => TranslationMap::P2ToP1,
        }
    }

    /// The source alphabet, if the map is tied to one.
    pub fn source(self) -> Option<Alphabet> {
        match self {
            TranslationMap::Identity => None,
            TranslationMap::P2ToP1 => Some(church_alphabet(true)),
            TranslationMap::P1ToP2 => Some(church_alphabet(false)),
        }
    }

    pub fn target(self) -> Option<Alphabet> {
        match self {
            TranslationMap::Identity => None,
            TranslationMap::P2ToP1 => Some(church_alphabet(false)),
            TranslationMap::P1ToP2 => Some(church_alphabet(true)),
        }
    }

    pub fn apply(self, formula: &Formula) -> Result<Formula, TranslateError> {
        translate(formula, self)
    }
}

pub fn translate(formula: &Formula, map: TranslationMap) -> Result<Formula, TranslateError> {
    if let Some(source) = map.source() {
        if source.check(formula).is_err() {
            return Err(TranslateError::OutsideSource {
                map: map.name(),
                formula: formula.print(),
            });
        }
    }
    Ok(match map {
        TranslationMap::Identity => formula.clone(),
        TranslationMap::P2ToP1 => p2_to_p1(formula),
        TranslationMap::P1ToP2 => p1_to_p2(formula),
    })
}

fn falsum() -> Formula {
    Formula::atom(FALSUM)
}

fn p2_to_p1(f: &Formula) -> Formula {
    match f.kind() {
        FormulaKind::Not(a) => Formula::implies(p2_to_p1(a), falsum()),
        FormulaKind::Implies(a, b) => Formula::implies(p2_to_p1(a), p2_to_p1(b)),
        _ => f.clone(),
    }
}

fn p1_to_p2(f: &Formula) -> Formula {
    match f.kind() {
        FormulaKind::Atom(a) if a.as_str() == FALSUM => {
            let p = Formula::atom("p");
            Formula::not(Formula::implies(p.clone(), p))
        }
        FormulaKind::Implies(a, b) if *b == falsum() => Formula::not(p1_to_p2(a)),
        FormulaKind::Implies(a, b) => Formula::implies(p1_to_p2(a), p1_to_p2(b)),
        _ => f.clone(),
    }
}

//! Ready-made calculi, the classical truth-table oracle, and translations
//! between the two Church presentations.

mod builtins;
pub mod semantics;
mod translate;

pub use builtins::{builtin, LibraryError, church_alphabet, church_p1, church_p2, free, kleene, kleene_alphabet, lv, shoenfield_alphabet, shoenfield_fragment, BUILTIN_NAMES};
pub use semantics::{evaluate_prop, is_satisfiable, is_tautology, is_tautology_with, SemanticsError, TruthAssignment, FALSUM};
pub use translate::{translate, TranslateError, TranslationMap};

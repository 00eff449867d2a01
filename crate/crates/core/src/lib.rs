//! Syntactic logical calculi as explicit triads `C = (A, H, T)`.
//!
//! A calculus couples an axiom system `A` (concrete formulas and schemata)
//! with a system `H` of inference-rule algorithms. Its body `T` is never
//! stored as ground truth: it is enumerated stage by stage under hard
//! resource bounds, every theorem carrying a derivation and every run
//! carrying an explicit completion status.
//!
//! Modules:
//! - [`formula`]: alphabets, well-formed formulas, parsing and printing,
//!   substitution, schema matching.
//! - [`engine`]: inference rules, bounded body enumeration, derivations,
//!   consequence and inference relations, staged (non-monotonic) runs.
//! - [`library`]: ready-made calculi and the classical truth-table oracle.
//! - [`analysis`]: bounded equivalence checks, the property battery, and
//!   finitely based abstract logics.
//! - [`automaton`]: acceptors for finite theorem bodies.
//!
//! Rule application within a stage and the larger sweeps run on rayon when
//! the `parallel` feature is enabled (the default); results never depend on
//! scheduling.

pub mod analysis;
pub mod automaton;
pub mod engine;
pub mod formula;
pub mod library;
pub mod par;

pub use engine::{Bounds, BoundedBody, BodyStatus, Calculus, Derivation, InferenceRule, RuleSpec, RuleSystem};
pub use formula::{Alphabet, Formula, FormulaKind, Schema, Symbol, Term};
pub use par::Execution;

//! Calculi as triads `(A, H, T)`: rule algorithms, bounded body
//! enumeration, derivations, and staged runs.

mod body;
mod calculus;
mod derivation;
mod rule;
mod staged;

pub use body::{consequence_step, inference_closure, BodyStats, BoundedBody, Justification, TheoremEntry};
pub use calculus::{derive, enumerate_body, Calculus, DeriveOutcome, SchemaMode};
pub use derivation::{Derivation, DerivationNode, Step};
pub use rule::{
    apply_rule, make_rule, rule_by_name, AxiomIndex, CustomRule, InferenceRule, RuleContext, RuleFlags, RuleSpec,
    RuleSystem, Validator,
};
pub use staged::{staged_run, StageSpec, StagedAxioms};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::FormulaError;
use crate::par::Execution;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("rule `{rule}` takes {expected} premise(s), got {found}")]
    ArityMismatch {
        rule: String,
        expected: usize,
        found: usize,
    },
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("invalid rule: {0}")]
    InvalidRule(String),
    #[error("rule `{0}` occurs twice in the rule system")]
    DuplicateRule(String),
    #[error("invalid calculus: {0}")]
    InvalidCalculus(String),
    #[error("invalid bounds: {0}")]
    InvalidBounds(String),
    #[error("node budget of {0} exceeded")]
    BudgetExceeded(usize),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

/// Hard resource limits for body enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Bounds {
    /// Largest stage index `n` computed.
    pub max_stage: usize,
    /// Theorems larger than this (in AST nodes) are discarded.
    pub max_formula_size: usize,
    /// Maximum number of distinct theorems.
    pub node_budget: usize,
    /// Size cap of the instantiation pool.
    pub pool_size: usize,
    pub execution: Execution,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_stage: 4,
            max_formula_size: 25,
            node_budget: 200_000,
            pool_size: 7,
            execution: Execution::default(),
        }
    }
}

impl Bounds {
    pub fn new(max_stage: usize, max_formula_size: usize, node_budget: usize, pool_size: usize) -> Bounds {
        Bounds {
            max_stage,
            max_formula_size,
            node_budget,
            pool_size,
            execution: Execution::default(),
        }
    }

    pub fn with_execution(mut self, execution: Execution) -> Bounds {
        self.execution = execution;
        self
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        for (name, v) in [
            ("max_stage", self.max_stage),
            ("max_formula_size", self.max_formula_size),
            ("node_budget", self.node_budget),
            ("pool_size", self.pool_size),
        ] {
            if v == 0 {
                return Err(EngineError::InvalidBounds(format!("{name} must be at least 1")));
            }
        }
        Ok(())
    }
}

/// Why an enumeration stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BodyStatus {
    /// A full rule pass added no formula within the size cap.
    Saturated,
    /// `max_stage` was reached while stages were still growing.
    StageCapHit,
    /// The next stage would have exceeded `node_budget`; the completed
    /// stages are kept.
    BudgetExceeded,
}

impl BodyStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            BodyStatus::Saturated => "saturated",
            BodyStatus::StageCapHit => "stage_cap_hit",
            BodyStatus::BudgetExceeded => "budget_exceeded",
        }
    }
}

use std::fmt;

use crate::engine::BodyStatus;
use crate::formula::Formula;

/// A concrete counterexample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Formula(Formula),
    /// A rule, schema or axiom identifier.
    Name(String),
    /// A premise set and conclusion of a finite relation.
    Pair { premises: Vec<String>, conclusion: String },
    /// Every one of `checked` candidates satisfied the refuted condition.
    Exhausted { checked: usize },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Formula(x) => write!(f, "{x}"),
            Witness::Name(n) => write!(f, "{n}"),
            Witness::Pair { premises, conclusion } => write!(f, "({{{}}}, {conclusion})", premises.join(", ")),
            Witness::Exhausted { checked } => write!(f, "all {checked} candidates"),
        }
    }
}

/// Why a bounded check could not decide.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BoundsReport {
    pub reason: String,
    pub statuses: Vec<BodyStatus>,
    /// Differences that survived the bounded comparison.
    pub difference: Vec<Formula>,
}

/// Outcome of a bounded decision procedure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds { evidence: String },
    Fails { witness: Witness, reason: String },
    Inconclusive(BoundsReport),
}

impl Verdict {
    pub fn holds(evidence: impl Into<String>) -> Verdict {
        Verdict::Holds {
            evidence: evidence.into(),
        }
    }

    pub fn fails(witness: Witness, reason: impl Into<String>) -> Verdict {
        Verdict::Fails {
            witness,
            reason: reason.into(),
        }
    }

    pub fn inconclusive(reason: impl Into<String>, statuses: Vec<BodyStatus>, difference: Vec<Formula>) -> Verdict {
        Verdict::Inconclusive(BoundsReport {
            reason: reason.into(),
            statuses,
            difference,
        })
    }

    pub fn is_holds(&self) -> bool {
        matches!(self, Verdict::Holds { .. })
    }

    pub fn is_fails(&self) -> bool {
        matches!(self, Verdict::Fails { .. })
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Verdict::Inconclusive(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Fails { witness, .. } => Some(witness),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Holds { .. } => "holds",
            Verdict::Fails { .. } => "fails",
            Verdict::Inconclusive(_) => "inconclusive",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds { evidence } => write!(f, "holds: {evidence}"),
            Verdict::Fails { witness, reason } => write!(f, "fails: {reason} (witness {witness})"),
            Verdict::Inconclusive(r) => write!(f, "inconclusive: {}", r.reason),
        }
    }
}

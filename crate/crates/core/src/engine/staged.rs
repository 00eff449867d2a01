//! Non-monotonic runs: axioms that change from stage to stage.

use crate::formula::{Alphabet, Formula, Schema};

use super::body::BoundedBody;
use super::calculus::{enumerate_body, Calculus, SchemaMode};
use super::rule::RuleSystem;
use super::{Bounds, EngineError};

/// The axioms `A_n` of one stage, with an optional rule override.
#[derive(Clone, Debug, Default)]
pub struct StageSpec {
    pub axioms: Vec<Formula>,
    pub schemata: Vec<Schema>,
    pub rules: Option<RuleSystem>,
}

impl StageSpec {
    pub fn new(axioms: Vec<Formula>) -> Self {
        StageSpec {
            axioms,
            schemata: Vec::new(),
            rules: None,
        }
    }

    pub fn with_schemata(mut self, schemata: Vec<Schema>) -> Self {
        self.schemata = schemata;
        self
    }

    pub fn with_rules(mut self, rules: RuleSystem) -> Self {
        self.rules = Some(rules);
        self
    }
}

/// A sequence `A_1, ..., A_k` of axiom sets over one alphabet.
#[derive(Clone, Debug)]
pub struct StagedAxioms {
    alphabet: Alphabet,
    stages: Vec<StageSpec>,
    mode: SchemaMode,
}

impl StagedAxioms {
    pub fn new(alphabet: Alphabet, stages: Vec<StageSpec>) -> Result<Self, EngineError> {
        if stages.is_empty() {
            return Err(EngineError::InvalidCalculus("staged axioms need at least one stage".into()));
        }
        Ok(StagedAxioms {
            alphabet,
            stages,
            mode: SchemaMode::OnDemand,
        })
    }

    pub fn with_mode(mut self, mode: SchemaMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn stages(&self) -> &[StageSpec] {
        &self.stages
    }

    /// The calculus of stage `n` (0-based) under the default rules `rules`.
    pub fn calculus(&self, n: usize, rules: &RuleSystem) -> Result<Calculus, EngineError> {
        let s = &self.stages[n];
        Calculus::new(
            &format!("stage-{}", n + 1),
            self.alphabet.clone(),
            s.axioms.clone(),
            s.schemata.clone(),
            s.rules.clone().unwrap_or_else(|| rules.clone()),
            self.mode,
        )
    }
}

/// One body per stage, each recomputed from its own axioms.
pub fn staged_run(stages: &StagedAxioms, rules: &RuleSystem, bounds: &Bounds) -> Result<Vec<BoundedBody>, EngineError> {
    (0..stages.stages.len())
        .map(|n| Ok(enumerate_body(&stages.calculus(n, rules)?, bounds)))
        .collect()
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::engine::{RuleSpec, Validator};
    use crate::formula::{parse_formula, Connective};

    fn setup() -> (Alphabet, impl Fn(&str) -> Formula) {
        let a = Alphabet::propositional(&["P", "Q"], &[Connective::Implies]);
        let b = a.clone();
        (a, move |s: &str| parse_formula(s, &b).unwrap())
    }

    #[test]
    fn retraction_between_stages() {
        let (a, f) = setup();
        let stages = StagedAxioms::new(
            a,
            vec![StageSpec::new(vec![f("P"), f("P -> Q")]), StageSpec::new(vec![f("P -> Q")])],
        )
        .unwrap();
        let mp = RuleSystem::from_specs([RuleSpec::ModusPonens]).unwrap();
        let bodies = staged_run(&stages, &mp, &Bounds::default()).unwrap();
        assert_eq!(bodies[0].formula_set(), BTreeSet::from([f("P"), f("P -> Q"), f("Q")]));
        assert_eq!(bodies[1].formula_set(), BTreeSet::from([f("P -> Q")]));
    }

    #[test]
    fn temporary_validation() {
        let (a, f) = setup();
        let reject_p = RuleSystem::from_specs([RuleSpec::ValidatedMp(Validator::Rejects(BTreeSet::from([f("P")])))])
            .unwrap();
        let axioms = vec![f("P"), f("P -> Q")];
        let stages = StagedAxioms::new(
            a,
            vec![
                StageSpec::new(axioms.clone()),
                StageSpec::new(axioms).with_rules(reject_p),
            ],
        )
        .unwrap();
        let always = RuleSystem::from_specs([RuleSpec::ValidatedMp(Validator::AlwaysTrue)]).unwrap();
        let bodies = staged_run(&stages, &always, &Bounds::default()).unwrap();
        assert!(bodies[0].contains(&f("Q")));
        assert!(!bodies[1].contains(&f("Q")));
    }
}

//! Derivation DAGs extracted from bodies, and their re-validation.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::formula::{instantiate_schema, print_with, Formula, MetaAssignment, Punctuation};

use super::body::{BoundedBody, Justification};
use super::calculus::{Calculus, SchemaMode};
use super::rule::{apply_rule, RuleContext};

/// Justification of one derivation node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Axiom,
    SchemaInstance { schema: String, assignment: MetaAssignment },
    Premise,
    /// `premises` index earlier nodes of the same derivation.
    Rule { rule: String, premises: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationNode {
    pub formula: Formula,
    pub step: Step,
    pub stage: usize,
}

/// A derivation DAG; the last node is the derived formula and every
/// premise reference points to an earlier node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    nodes: Vec<DerivationNode>,
}

impl Derivation {
    pub(crate) fn extract(body: &BoundedBody, goal: usize) -> Derivation {
        let mut needed = BTreeSet::new();
        let mut stack = vec![goal];
        while let Some(i) = stack.pop() {
            if !needed.insert(i) {
                continue;
            }
            if let Justification::Rule { premises, .. } = &body.entry(i).justification {
                stack.extend(premises.iter().copied());
            }
        }
        // Body order is stage order, so this is a topological order.
        let order: Vec<usize> = needed.into_iter().collect();
        let position = |i: usize| order.binary_search(&i).expect("premise collected");
        let nodes = order
            .iter()
            .map(|&i| {
                let e = body.entry(i);
                let step = match &e.justification {
                    Justification::Axiom(_) => Step::Axiom,
                    Justification::Schema { schema, assignment } => Step::SchemaInstance {
                        schema: body.schema_ids()[*schema].clone(),
                        assignment: assignment.clone(),
                    },
                    Justification::Premise => Step::Premise,
                    Justification::Rule { rule, premises } => Step::Rule {
                        rule: body.rule_ids()[*rule].clone(),
                        premises: premises.iter().map(|&p| position(p)).collect(),
                    },
                };
                DerivationNode {
                    formula: e.formula.clone(),
                    step,
                    stage: e.stage,
                }
            })
            .collect();
        Derivation { nodes }
    }

    pub fn nodes(&self) -> &[DerivationNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn conclusion(&self) -> &Formula {
        &self.nodes.last().expect("non-empty derivation").formula
    }

    /// Re-checks every node against `calculus`: axioms and schema instances
    /// must be realized axioms, each rule node must be among the
    /// conclusions of its rule on its premises, and stages must be
    /// consistent. `premises` lists formulas allowed as seeded premises.
    pub fn validate(&self, calculus: &Calculus, ctx: &RuleContext, premises: &[Formula]) -> Result<(), String> {
        for (n, node) in self.nodes.iter().enumerate() {
            let line = n + 1;
            match &node.step {
                Step::Axiom => {
                    if !calculus.axioms().contains(&node.formula) {
                        return Err(format!("line {line}: not an axiom"));
                    }
                    if node.stage != 1 {
                        return Err(format!("line {line}: axiom outside stage 1"));
                    }
                }
                Step::SchemaInstance { schema, assignment } => {
                    let s = calculus
                        .schemata()
                        .iter()
                        .find(|s| s.id() == schema)
                        .ok_or_else(|| format!("line {line}: unknown schema `{schema}`"))?;
                    let expected = if assignment.is_empty() && calculus.mode() == SchemaMode::SubstitutionRule {
                        s.pattern().clone()
                    } else {
                        instantiate_schema(s, assignment).map_err(|e| format!("line {line}: {e}"))?
                    };
                    if expected != node.formula {
                        return Err(format!("line {line}: not an instance of schema `{schema}`"));
                    }
                }
                Step::Premise => {
                    if !premises.contains(&node.formula) {
                        return Err(format!("line {line}: not a premise"));
                    }
                }
                Step::Rule { rule, premises: refs } => {
                    if refs.iter().any(|&r| r >= n) {
                        return Err(format!("line {line}: premise does not precede its conclusion"));
                    }
                    let r = calculus
                        .rules()
                        .rules()
                        .iter()
                        .find(|r| r.id() == rule)
                        .ok_or_else(|| format!("line {line}: unknown rule `{rule}`"))?;
                    let ps: Vec<Formula> = refs.iter().map(|&r| self.nodes[r].formula.clone()).collect();
                    let out = apply_rule(r, &ps, ctx).map_err(|e| format!("line {line}: {e}"))?;
                    if !out.contains(&node.formula) {
                        return Err(format!("line {line}: `{rule}` does not yield this formula"));
                    }
                    let top = refs.iter().map(|&r| self.nodes[r].stage).max().unwrap_or(1);
                    if node.stage != top + 1 {
                        return Err(format!("line {line}: stage {} should be {}", node.stage, top + 1));
                    }
                }
            }
        }
        Ok(())
    }

    /// Numbered proof lines `n. formula  [justification]`.
    pub fn render(&self, punctuation: Punctuation) -> String {
        let mut out = String::new();
        for (n, node) in self.nodes.iter().enumerate() {
            let why = match &node.step {
                Step::Axiom => "axiom".to_string(),
                Step::SchemaInstance { schema, assignment } if assignment.is_empty() => format!("axiom {schema}"),
                Step::SchemaInstance { schema, assignment } => format!("schema {schema}: {assignment}"),
                Step::Premise => "premise".to_string(),
                Step::Rule { rule, premises } => {
                    let refs: Vec<String> = premises.iter().map(|p| (p + 1).to_string()).collect();
                    format!("{rule}: {}", refs.join(", "))
                }
            };
            let _ = writeln!(out, "{}. {}  [{why}]", n + 1, print_with(&node.formula, punctuation));
        }
        out
    }
}

//! Reports in text and machine (JSON) form.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::time::Duration;

use metacalc::analysis::{Verdict, Witness};
use metacalc::engine::{Derivation, Justification, Step, TheoremEntry};
use metacalc::formula::{parse_formula, parse_term, print_with, Alphabet, MetaAssignment, Punctuation, Symbol};
use metacalc::{BodyStatus, Bounds, BoundedBody, Calculus};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

/// Identifies the machine format.
pub const SCHEMA: &str = "metacalc-report";
/// Bumped on every incompatible change of the machine format.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Machine,
}

/// The outcome of one command: exit code, a short outcome word, the text
/// form and the machine payload.
#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub code: i32,
    pub outcome: String,
    pub text: String,
    pub payload: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str, code: i32, outcome: impl Into<String>) -> Report {
        Report {
            command: command.to_string(),
            code,
            outcome: outcome.into(),
            text: String::new(),
            payload: Map::new(),
        }
    }

    pub fn line(&mut self, line: impl AsRef<str>) {
        self.text.push_str(line.as_ref());
        self.text.push('\n');
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        self.payload
            .insert(key.to_string(), serde_json::to_value(value).expect("report values serialize"));
    }

    pub fn render(&self, format: Format, argv: &[String], elapsed: Option<Duration>) -> String {
        match format {
            Format::Text => {
                let mut out = self.text.clone();
                if let Some(d) = elapsed {
                    let _ = writeln!(out, "elapsed {:.3} s", d.as_secs_f64());
                }
                out
            }
            Format::Machine => {
                let mut m = Map::new();
                m.insert("schema".into(), SCHEMA.into());
                m.insert("schema_version".into(), SCHEMA_VERSION.into());
                m.insert("command".into(), self.command.clone().into());
                m.insert("argv".into(), argv.into());
                m.insert("outcome".into(), self.outcome.clone().into());
                m.insert("exit_code".into(), self.code.into());
                for (k, v) in &self.payload {
                    m.insert(k.clone(), v.clone());
                }
                if let Some(d) = elapsed {
                    m.insert("elapsed_ms".into(), (d.as_millis() as u64).into());
                }
                serde_json::to_string_pretty(&Value::Object(m)).expect("reports serialize") + "\n"
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsRecord {
    pub max_stage: usize,
    pub max_formula_size: usize,
    pub node_budget: usize,
    pub pool_size: usize,
}

impl From<Bounds> for BoundsRecord {
    fn from(b: Bounds) -> Self {
        BoundsRecord {
            max_stage: b.max_stage,
            max_formula_size: b.max_formula_size,
            node_budget: b.node_budget,
            pool_size: b.pool_size,
        }
    }
}

impl BoundsRecord {
    pub fn bounds(self) -> Bounds {
        Bounds::new(self.max_stage, self.max_formula_size, self.node_budget, self.pool_size)
    }
}

pub fn bounds_line(b: &Bounds) -> String {
    format!(
        "bounds max_stage={} max_formula_size={} node_budget={} pool_size={}",
        b.max_stage, b.max_formula_size, b.node_budget, b.pool_size
    )
}

/// A metavariable assignment with every value printed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssignmentRecord {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub formulas: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub variables: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub terms: BTreeMap<String, String>,
}

impl AssignmentRecord {
    fn new(a: &MetaAssignment, p: Punctuation) -> Self {
        AssignmentRecord {
            formulas: a.formulas().iter().map(|(k, v)| (k.to_string(), print_with(v, p))).collect(),
            variables: a.variables().iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
            terms: a.terms().iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
        }
    }

    pub fn assignment(&self, alphabet: &Alphabet) -> Result<MetaAssignment, String> {
        let mut a = MetaAssignment::new();
        for (k, v) in &self.formulas {
            a.bind(Symbol::new(k), parse_formula(v, alphabet).map_err(|e| format!("{v:?}: {e}"))?);
        }
        for (k, v) in &self.variables {
            a.bind_variable(Symbol::new(k), Symbol::new(v));
        }
        for (k, v) in &self.terms {
            a.bind_term(Symbol::new(k), parse_term(v, alphabet).map_err(|e| format!("{v:?}: {e}"))?);
        }
        Ok(a)
    }
}

/// How a theorem or derivation node is justified. Premise references are
/// zero-based positions in the enclosing list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum JustificationRecord {
    Axiom {
        #[serde(skip_serializing_if = "Option::is_none", default)]
        index: Option<usize>,
    },
    Schema {
        schema: String,
        #[serde(default)]
        assignment: AssignmentRecord,
    },
    Premise,
    Rule {
        rule: String,
        premises: Vec<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TheoremRecord {
    pub formula: String,
    pub stage: usize,
    pub justification: JustificationRecord,
}

/// The body payload of a machine report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodyRecord {
    pub calculus: String,
    pub status: BodyStatus,
    pub bounds: BoundsRecord,
    pub stages: usize,
    pub rules: Vec<String>,
    pub schemata: Vec<String>,
    pub theorems: Vec<TheoremRecord>,
}

impl BodyRecord {
    pub fn new(calculus: &Calculus, body: &BoundedBody) -> Self {
        let p = calculus.alphabet().punctuation();
        let theorems = body
            .entries()
            .iter()
            .map(|e| TheoremRecord {
                formula: print_with(&e.formula, p),
                stage: e.stage,
                justification: match &e.justification {
                    Justification::Axiom(i) => JustificationRecord::Axiom { index: Some(*i) },
                    Justification::Schema { schema, assignment } => JustificationRecord::Schema {
                        schema: body.schema_ids()[*schema].clone(),
                        assignment: AssignmentRecord::new(assignment, p),
                    },
                    Justification::Premise => JustificationRecord::Premise,
                    Justification::Rule { rule, premises } => JustificationRecord::Rule {
                        rule: body.rule_ids()[*rule].clone(),
                        premises: premises.clone(),
                    },
                },
            })
            .collect();
        BodyRecord {
            calculus: calculus.name().to_string(),
            status: body.status(),
            bounds: body.bounds().into(),
            stages: body.stage_count(),
            rules: body.rule_ids().to_vec(),
            schemata: body.schema_ids().to_vec(),
            theorems,
        }
    }

    /// Rebuilds the body over the alphabet of `calculus`.
    pub fn body(&self, calculus: &Calculus) -> Result<BoundedBody, String> {
        let alphabet = calculus.alphabet();
        let position = |ids: &[String], id: &str, what: &str| {
            ids.iter()
                .position(|x| x == id)
                .ok_or_else(|| format!("unknown {what} `{id}`"))
        };
        let entries = self
            .theorems
            .iter()
            .enumerate()
            .map(|(n, t)| {
                let at = |m: String| format!("theorem {}: {m}", n + 1);
                let formula = parse_formula(&t.formula, alphabet).map_err(|e| at(e.to_string()))?;
                let justification = match &t.justification {
                    JustificationRecord::Axiom { index } => Justification::Axiom(index.unwrap_or(0)),
                    JustificationRecord::Schema { schema, assignment } => Justification::Schema {
                        schema: position(&self.schemata, schema, "schema").map_err(at)?,
                        assignment: assignment.assignment(alphabet).map_err(at)?,
                    },
                    JustificationRecord::Premise => Justification::Premise,
                    JustificationRecord::Rule { rule, premises } => Justification::Rule {
                        rule: position(&self.rules, rule, "rule").map_err(at)?,
                        premises: premises.clone(),
                    },
                };
                Ok(TheoremEntry {
                    formula,
                    stage: t.stage,
                    justification,
                })
            })
            .collect::<Result<Vec<_>, String>>()?;
        BoundedBody::from_entries(entries, self.status, self.bounds.bounds(), self.rules.clone(), self.schemata.clone())
            .map_err(|e| e.to_string())
    }
}

/// Text line of one body entry, in the style of numbered proofs.
pub fn theorem_line(n: usize, t: &TheoremRecord) -> String {
    let why = match &t.justification {
        JustificationRecord::Axiom { .. } => "axiom".to_string(),
        JustificationRecord::Schema { schema, assignment } => {
            let parts: Vec<String> = assignment
                .formulas
                .iter()
                .chain(&assignment.variables)
                .chain(&assignment.terms)
                .map(|(k, v)| format!("{k} := {v}"))
                .collect();
            if parts.is_empty() {
                format!("axiom {schema}")
            } else {
                format!("schema {schema}: {{{}}}", parts.join(", "))
            }
        }
        JustificationRecord::Premise => "premise".to_string(),
        JustificationRecord::Rule { rule, premises } => {
            let refs: Vec<String> = premises.iter().map(|p| (p + 1).to_string()).collect();
            format!("{rule}: {}", refs.join(", "))
        }
    };
    format!("{}. {}  [{why}]", n + 1, t.formula)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeRecord {
    pub formula: String,
    pub stage: usize,
    pub justification: JustificationRecord,
}

pub fn derivation_record(d: &Derivation, p: Punctuation) -> Vec<NodeRecord> {
    d.nodes()
        .iter()
        .map(|n| NodeRecord {
            formula: print_with(&n.formula, p),
            stage: n.stage,
            justification: match &n.step {
                Step::Axiom => JustificationRecord::Axiom { index: None },
                Step::SchemaInstance { schema, assignment } => JustificationRecord::Schema {
                    schema: schema.clone(),
                    assignment: AssignmentRecord::new(assignment, p),
                },
                Step::Premise => JustificationRecord::Premise,
                Step::Rule { rule, premises } => JustificationRecord::Rule {
                    rule: rule.clone(),
                    premises: premises.clone(),
                },
            },
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WitnessRecord {
    Formula { formula: String },
    Name { name: String },
    Pair { premises: Vec<String>, conclusion: String },
    Exhausted { checked: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case", deny_unknown_fields)]
pub enum VerdictRecord {
    Holds {
        evidence: String,
    },
    Fails {
        reason: String,
        witness: WitnessRecord,
    },
    Inconclusive {
        reason: String,
        statuses: Vec<BodyStatus>,
        difference: Vec<String>,
    },
}

impl VerdictRecord {
    pub fn new(v: &Verdict, p: Punctuation) -> Self {
        match v {
            Verdict::Holds { evidence } => VerdictRecord::Holds {
                evidence: evidence.clone(),
            },
            Verdict::Fails { witness, reason } => VerdictRecord::Fails {
                reason: reason.clone(),
                witness: match witness {
                    Witness::Formula(f) => WitnessRecord::Formula {
                        formula: print_with(f, p),
                    },
                    Witness::Name(n) => WitnessRecord::Name { name: n.clone() },
                    Witness::Pair { premises, conclusion } => WitnessRecord::Pair {
                        premises: premises.clone(),
                        conclusion: conclusion.clone(),
                    },
                    Witness::Exhausted { checked } => WitnessRecord::Exhausted { checked: *checked },
                },
            },
            Verdict::Inconclusive(r) => VerdictRecord::Inconclusive {
                reason: r.reason.clone(),
                statuses: r.statuses.clone(),
                difference: r.difference.iter().map(|f| print_with(f, p)).collect(),
            },
        }
    }
}

/// Text lines describing a verdict.
pub fn verdict_lines(v: &VerdictRecord) -> Vec<String> {
    match v {
        VerdictRecord::Holds { evidence } => vec!["verdict holds".into(), format!("evidence {evidence}")],
        VerdictRecord::Fails { reason, witness } => {
            let w = match witness {
                WitnessRecord::Formula { formula } => formula.clone(),
                WitnessRecord::Name { name } => name.clone(),
                WitnessRecord::Pair { premises, conclusion } => format!("({{{}}}, {conclusion})", premises.join(", ")),
                WitnessRecord::Exhausted { checked } => format!("all {checked} candidates"),
            };
            vec!["verdict fails".into(), format!("reason {reason}"), format!("witness {w}")]
        }
        VerdictRecord::Inconclusive {
            reason,
            statuses,
            difference,
        } => {
            let mut out = vec!["verdict inconclusive".into(), format!("reason {reason}")];
            if !statuses.is_empty() {
                let s: Vec<&str> = statuses.iter().map(|s| s.as_str()).collect();
                out.push(format!("statuses {}", s.join(" ")));
            }
            out.extend(difference.iter().map(|d| format!("difference {d}")));
            out
        }
    }
}

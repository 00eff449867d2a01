//! Calculus definition files and the `builtin:<name>` shorthand.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;

use metacalc::engine::{make_rule, Calculus, RuleSpec, RuleSystem, SchemaMode, StageSpec, StagedAxioms, Validator};
use metacalc::formula::{
    parse_formula, Alphabet, Connective, Formula, LanguageKind, Punctuation, Quantifier, Schema, SideCondition, Symbol,
};
use metacalc::library::{builtin, lv};
use metacalc::Bounds;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Optional bound overrides, as found in files and on the command line.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileBounds {
    pub max_stage: Option<usize>,
    pub max_formula_size: Option<usize>,
    pub node_budget: Option<usize>,
    pub pool_size: Option<usize>,
}

impl FileBounds {
    /// `self` with every field set in `over` replaced.
    pub fn overridden_by(self, over: FileBounds) -> FileBounds {
        FileBounds {
            max_stage: over.max_stage.or(self.max_stage),
            max_formula_size: over.max_formula_size.or(self.max_formula_size),
            node_budget: over.node_budget.or(self.node_budget),
            pool_size: over.pool_size.or(self.pool_size),
        }
    }

    /// Fills the unset fields from [`Bounds::default`].
    pub fn resolve(self) -> Bounds {
        let d = Bounds::default();
        Bounds {
            max_stage: self.max_stage.unwrap_or(d.max_stage),
            max_formula_size: self.max_formula_size.unwrap_or(d.max_formula_size),
            node_budget: self.node_budget.unwrap_or(d.node_budget),
            pool_size: self.pool_size.unwrap_or(d.pool_size),
            execution: d.execution,
        }
    }
}

/// A calculus together with the defaults its definition carries.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub calculus: Calculus,
    pub bounds: FileBounds,
    /// Staged axiom systems, when the file declares `stages`.
    pub stages: Option<StagedAxioms>,
}

/// A problem in a definition file, located by field path or by line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FileError {
    pub location: String,
    pub message: String,
}

impl FileError {
    fn at(location: impl Into<String>, message: impl fmt::Display) -> Self {
        FileError {
            location: location.into(),
            message: message.to_string(),
        }
    }
}

impl fmt::Display for FileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CalculusFile {
    name: Option<String>,
    language: LanguageBlock,
    #[serde(default)]
    axioms: Vec<String>,
    #[serde(default)]
    schemata: Vec<SchemaEntry>,
    #[serde(default)]
    rules: Vec<String>,
    #[serde(default)]
    schema_mode: ModeName,
    #[serde(default)]
    bounds: FileBounds,
    validator: Option<String>,
    pool_variables: Option<Vec<String>>,
    stages: Option<Vec<StageEntry>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LanguageBlock {
    kind: KindName,
    #[serde(default)]
    variables: Vec<String>,
    #[serde(default)]
    connectives: Vec<String>,
    #[serde(default)]
    punctuation: PunctuationName,
    #[serde(default)]
    constants: Vec<String>,
    #[serde(default)]
    functions: BTreeMap<String, usize>,
    #[serde(default)]
    predicates: BTreeMap<String, usize>,
    #[serde(default)]
    quantifiers: Vec<String>,
    #[serde(default)]
    individual_variables: Vec<String>,
    #[serde(default)]
    equality: bool,
}

#[derive(Deserialize)]
#[serde(rename_all = "snake_case")]
enum KindName {
    Propositional,
    FirstOrder,
}

#[derive(Deserialize, Default)]
#[serde(rename_all = "snake_case")]
enum PunctuationName {
    #[default]
    Parentheses,
    Brackets,
}

#[derive(Deserialize, Default, Clone, Copy)]
#[serde(rename_all = "snake_case")]
enum ModeName {
    #[default]
    OnDemand,
    SubstitutionRule,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SchemaEntry {
    id: String,
    pattern: String,
    #[serde(default)]
    metavariables: Vec<String>,
    #[serde(default)]
    variable_metavariables: Vec<String>,
    side_condition: Option<SideEntry>,
}

/// `instance` is `body` with `variable` replaced by the term bound to
/// `term`.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SideEntry {
    instance: String,
    body: String,
    variable: String,
    term: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StageEntry {
    #[serde(default)]
    axioms: Vec<String>,
    #[serde(default)]
    schemata: Vec<SchemaEntry>,
    rules: Option<Vec<String>>,
}

const PREFIX: &str = "builtin:";

/// Bounds the built-in calculi default to. Their instantiation pools grow
/// too fast for the global default pool size.
fn builtin_bounds(name: &str) -> FileBounds {
    let pool = |n| FileBounds {
        pool_size: Some(n),
        ..FileBounds::default()
    };
    match name.split('(').next().unwrap_or(name) {
        "kleene" | "lv" => pool(1),
        "church_p1" | "church_p2" => pool(3),
        "shoenfield_fragment" => pool(2),
        _ => FileBounds::default(),
    }
}

/// Loads `builtin:<name>` or a definition file.
pub fn load_calculus(source: &str) -> Result<Loaded, CliError> {
    if let Some(name) = source.strip_prefix(PREFIX) {
        let calculus = builtin(name).map_err(|e| CliError::Usage(e.to_string()))?;
        return Ok(Loaded {
            calculus,
            bounds: builtin_bounds(name),
            stages: None,
        });
    }
    let text = fs::read_to_string(source).map_err(|e| CliError::Io(format!("{source}: {e}")))?;
    parse_calculus_file(&text).map_err(|error| CliError::File {
        path: source.to_string(),
        error,
    })
}

/// Parses the JSON calculus format.
pub fn parse_calculus_file(text: &str) -> Result<Loaded, FileError> {
    let file: CalculusFile = serde_json::from_str(text)
        .map_err(|e| FileError::at(format!("line {} column {}", e.line(), e.column()), strip_position(&e)))?;
    let alphabet = build_alphabet(&file.language)?;
    let mode = match file.schema_mode {
        ModeName::OnDemand => SchemaMode::OnDemand,
        ModeName::SubstitutionRule => SchemaMode::SubstitutionRule,
    };
    let axioms = formulas(&file.axioms, &alphabet, "axioms")?;
    let schemata = build_schemata(&file.schemata, &alphabet, mode, "schemata")?;
    let rules = rule_system(&file.rules, "rules")?;
    let name = file.name.as_deref().unwrap_or("calculus");
    let mut calculus = Calculus::new(name, alphabet.clone(), axioms, schemata, rules, mode)
        .map_err(|e| FileError::at("calculus", e))?;
    if let Some(vars) = &file.pool_variables {
        let vars: Vec<&str> = vars.iter().map(String::as_str).collect();
        calculus = calculus
            .with_pool_variables(&vars)
            .map_err(|e| FileError::at("pool_variables", e))?;
    }
    if let Some(v) = &file.validator {
        let validator =
            Validator::from_name(v).ok_or_else(|| FileError::at("validator", format!("unknown validator `{v}`")))?;
        calculus = lv(&calculus, validator);
    }
    let stages = match &file.stages {
        None => None,
        Some(entries) => {
            let mut specs = Vec::new();
            for (i, e) in entries.iter().enumerate() {
                let field = format!("stages[{i}]");
                let mut spec = StageSpec::new(formulas(&e.axioms, &alphabet, &format!("{field}.axioms"))?)
                    .with_schemata(build_schemata(&e.schemata, &alphabet, mode, &format!("{field}.schemata"))?);
                if let Some(r) = &e.rules {
                    spec = spec.with_rules(rule_system(r, &format!("{field}.rules"))?);
                }
                specs.push(spec);
            }
            let staged = StagedAxioms::new(alphabet, specs).map_err(|e| FileError::at("stages", e))?;
            Some(staged.with_mode(mode))
        }
    };
    Ok(Loaded {
        calculus,
        bounds: file.bounds,
        stages,
    })
}

fn strip_position(e: &serde_json::Error) -> String {
    let text = e.to_string();
    match text.rfind(" at line ") {
        Some(i) => text[..i].to_string(),
        None => text,
    }
}

fn build_alphabet(block: &LanguageBlock) -> Result<Alphabet, FileError> {
    let kind = match block.kind {
        KindName::Propositional => LanguageKind::Propositional,
        KindName::FirstOrder => LanguageKind::FirstOrder,
    };
    let connectives = block
        .connectives
        .iter()
        .map(|c| {
            Connective::from_name(c)
                .ok_or_else(|| FileError::at("language.connectives", format!("unknown connective `{c}`")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let quantifiers = block
        .quantifiers
        .iter()
        .map(|q| {
            Quantifier::from_name(q)
                .ok_or_else(|| FileError::at("language.quantifiers", format!("unknown quantifier `{q}`")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut b = Alphabet::builder(kind)
        .variables(&strs(&block.variables))
        .connectives(&connectives)
        .punctuation(match block.punctuation {
            PunctuationName::Parentheses => Punctuation::Parentheses,
            PunctuationName::Brackets => Punctuation::Brackets,
        })
        .constants(&strs(&block.constants))
        .quantifiers(&quantifiers)
        .individual_variables(&strs(&block.individual_variables))
        .equality(block.equality);
    for (f, n) in &block.functions {
        b = b.function(f, *n);
    }
    for (p, n) in &block.predicates {
        b = b.predicate(p, *n);
    }
    b.build().map_err(|e| FileError::at("language", e))
}

fn strs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

fn formulas(texts: &[String], alphabet: &Alphabet, field: &str) -> Result<Vec<Formula>, FileError> {
    texts
        .iter()
        .enumerate()
        .map(|(i, s)| parse_formula(s, alphabet).map_err(|e| FileError::at(format!("{field}[{i}]"), e)))
        .collect()
}

fn build_schemata(entries: &[SchemaEntry], alphabet: &Alphabet, mode: SchemaMode, field: &str) -> Result<Vec<Schema>, FileError> {
    entries
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let at = |m: String| FileError::at(format!("{field}[{i}]"), m);
            let metas: Vec<&str> = e.metavariables.iter().map(String::as_str).collect();
            // Under a substitution rule the patterns double as concrete
            // axioms, so metavariables are object atoms.
            let parsed = match mode {
                SchemaMode::SubstitutionRule => Schema::parse_unchecked(&e.id, &e.pattern, &metas, alphabet),
                SchemaMode::OnDemand => Schema::parse(&e.id, &e.pattern, &metas, alphabet),
            };
            let mut schema = parsed.map_err(|err| at(err.to_string()))?;
            if !e.variable_metavariables.is_empty() {
                let vars: Vec<&str> = e.variable_metavariables.iter().map(String::as_str).collect();
                schema = schema.with_variable_metas(&vars);
            }
            if let Some(side) = &e.side_condition {
                schema = schema.with_side_condition(SideCondition::TermInstance {
                    instance: Symbol::new(&side.instance),
                    body: Symbol::new(&side.body),
                    variable: Symbol::new(&side.variable),
                    term: Symbol::new(&side.term),
                });
            }
            Ok(schema)
        })
        .collect()
}

fn rule_system(names: &[String], field: &str) -> Result<RuleSystem, FileError> {
    let rules = names
        .iter()
        .enumerate()
        .map(|(i, n)| {
            let at = |m: String| FileError::at(format!("{field}[{i}]"), m);
            let spec = parse_rule(n).map_err(at)?;
            make_rule(spec).map_err(|e| at(e.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    RuleSystem::new(rules).map_err(|e| FileError::at(field, e))
}

/// A rule expression: a name, optionally applied to arguments.
#[derive(Debug)]
struct Call {
    head: String,
    args: Vec<Call>,
}

/// Parses a rule expression such as `modus_ponens`,
/// `validated_mp(tautology)`, `length_filtered(modus_ponens,9)` or
/// `compose(substitution,substitution)`. Rule keys parse back to the rule
/// they name.
pub fn parse_rule(text: &str) -> Result<RuleSpec, String> {
    let chars: Vec<char> = text.chars().collect();
    let mut pos = 0;
    let call = parse_call(&chars, &mut pos)?;
    skip_space(&chars, &mut pos);
    if pos != chars.len() {
        return Err(format!("unexpected `{}` in rule `{text}`", chars[pos]));
    }
    interpret(&call)
}

fn skip_space(chars: &[char], pos: &mut usize) {
    while chars.get(*pos).is_some_and(|c| c.is_whitespace()) {
        *pos += 1;
    }
}

fn parse_call(chars: &[char], pos: &mut usize) -> Result<Call, String> {
    skip_space(chars, pos);
    let start = *pos;
    while chars.get(*pos).is_some_and(|&c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
        *pos += 1;
    }
    if start == *pos {
        return Err("expected a rule name".into());
    }
    let head: String = chars[start..*pos].iter().collect();
    skip_space(chars, pos);
    let mut args = Vec::new();
    if chars.get(*pos) == Some(&'(') {
        *pos += 1;
        loop {
            args.push(parse_call(chars, pos)?);
            skip_space(chars, pos);
            match chars.get(*pos) {
                Some(',') => *pos += 1,
                Some(')') => {
                    *pos += 1;
                    break;
                }
                _ => return Err(format!("unclosed argument list of `{head}`")),
            }
        }
    }
    Ok(Call { head, args })
}

fn interpret(call: &Call) -> Result<RuleSpec, String> {
    let unknown = || metacalc::engine::EngineError::UnknownRule(call.head.clone()).to_string();
    let word = |c: &Call| {
        if c.args.is_empty() {
            Ok(c.head.clone())
        } else {
            Err(format!("`{}` takes no arguments", c.head))
        }
    };
    match (call.head.as_str(), call.args.as_slice()) {
        (name, []) => RuleSpec::parse_name(name).ok_or_else(unknown),
        ("validated_mp", [v]) => {
            let v = word(v)?;
            Validator::from_name(&v)
                .map(RuleSpec::ValidatedMp)
                .ok_or_else(|| format!("unknown validator `{v}`"))
        }
        ("compose", [a, b]) => Ok(RuleSpec::Compose(Box::new(interpret(a)?), Box::new(interpret(b)?))),
        ("length_filtered", [r, cap]) => {
            let cap = word(cap)?;
            let cap = cap.parse().map_err(|_| format!("`{cap}` is not a size cap"))?;
            Ok(RuleSpec::LengthFiltered(Box::new(interpret(r)?), cap))
        }
        ("validated_mp" | "compose" | "length_filtered", _) => Err(format!("wrong arguments for `{}`", call.head)),
        _ => Err(unknown()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_keys_parse_back() {
        for spec in [
            RuleSpec::ModusPonens,
            RuleSpec::ValidatedMp(Validator::Tautology),
            RuleSpec::LengthFiltered(Box::new(RuleSpec::ModusPonens), 9),
            RuleSpec::Compose(Box::new(RuleSpec::Substitution), Box::new(RuleSpec::Extension)),
        ] {
            assert_eq!(parse_rule(&spec.key()).unwrap(), spec);
        }
        assert_eq!(parse_rule("modus_tollens").unwrap_err(), "unknown rule `modus_tollens`");
        assert!(parse_rule("compose(identity)").is_err());
        assert!(parse_rule("length_filtered(identity, x)").is_err());
        assert!(parse_rule("identity)").is_err());
    }

    #[test]
    fn precedence() {
        let file = FileBounds {
            max_stage: Some(2),
            pool_size: Some(3),
            ..FileBounds::default()
        };
        let flags = FileBounds {
            max_stage: Some(5),
            ..FileBounds::default()
        };
        let b = file.overridden_by(flags).resolve();
        assert_eq!((b.max_stage, b.max_formula_size, b.node_budget, b.pool_size), (5, 25, 200_000, 3));
    }

    #[test]
    fn errors_name_the_field() {
        let text = r#"{"language": {"kind": "propositional", "variables": ["P"], "connectives": ["implies"]},
                       "axioms": ["P", "P -> R"]}"#;
        assert_eq!(parse_calculus_file(text).unwrap_err().location, "axioms[1]");
        let text = r#"{"language": {"kind": "propositional"}, "axiom": []}"#;
        let e = parse_calculus_file(text).unwrap_err();
        assert!(e.location.starts_with("line 1"), "{e}");
        assert!(e.message.contains("unknown field"), "{e}");
    }
}

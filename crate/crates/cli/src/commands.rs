use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use metacalc::analysis::{
    check_boundedness, check_property, check_property_on, compare_calculi, relation_from_calculus, AnalysisError,
    BoundednessKind, EquivalenceKind, FiniteRelation, FormulaMap, FormulaSet, Property, Verdict,
};
use metacalc::automaton::{
    build_body_automaton, build_deterministic_body_automaton, nfa_accepts_all, nfa_language_upto, read_automaton,
    words_automaton, words_trie, write_automaton, EpsilonNfa,
};
use metacalc::engine::{derive, enumerate_body, make_rule, staged_run, DeriveOutcome, RuleSystem};
use metacalc::formula::{
    parse_formula, print_with, Alphabet, Connective, Formula, FormulaError, LanguageDefinition, Schema,
};
use metacalc::library::TranslationMap;
use metacalc::{BodyStatus, Bounds, Calculus, Execution};
use serde_json::{json, Value};

use crate::file::{load_calculus, parse_rule, FileBounds, Loaded};
use crate::report::{
    bounds_line, derivation_record, theorem_line, verdict_lines, BodyRecord, BoundsRecord, Report, VerdictRecord,
};
use crate::{
    AutomatonArgs, BodyArgs, BoundArgs, CheckArgs, Cli, CliError, Command, CompareArgs, DeriveArgs, EnumLangArgs,
    ParseArgs, RelationArgs, RelationCheckArgs, EXIT_BUDGET, EXIT_FAILS, EXIT_HOLDS, EXIT_INCONCLUSIVE,
};

type Result<T> = std::result::Result<T, CliError>;

pub(crate) fn run(cli: &Cli) -> Result<Report> {
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    match &cli.command {
        Command::Parse(a) => parse(a),
        Command::EnumLang(a) => enum_lang(a),
        Command::EnumBody(a) => enum_body(a, exec),
        Command::Derive(a) => derive_cmd(a, exec),
        Command::Stages(a) => stages(a, exec),
        Command::Compare(a) => compare(a, exec),
        Command::Check(a) => check(a, exec),
        Command::Relation(a) => relation(a, exec),
        Command::RelationCheck(a) => relation_check(a),
        Command::Automaton(a) => automaton(a, exec),
    }
}

/// The alphabet used when no calculus is given.
fn default_alphabet() -> Alphabet {
    Alphabet::propositional(&["P", "Q", "R", "S"], &Connective::ALL)
}

fn resolve(file: FileBounds, flags: &BoundArgs, exec: Execution) -> Result<Bounds> {
    let bounds = file.overridden_by(flags.file_bounds()).resolve().with_execution(exec);
    bounds.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(bounds)
}

fn formula(text: &str, alphabet: &Alphabet) -> Result<Formula> {
    parse_formula(text, alphabet).map_err(|e| CliError::Usage(format!("cannot parse {text:?}: {e}")))
}

fn analysis(e: AnalysisError) -> CliError {
    match e {
        AnalysisError::Budget(_) => CliError::Budget(e.to_string()),
        e => CliError::Usage(e.to_string()),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn status_code(status: BodyStatus) -> i32 {
    match status {
        BodyStatus::BudgetExceeded => EXIT_BUDGET,
        _ => EXIT_HOLDS,
    }
}

fn verdict_code(v: &Verdict) -> i32 {
    match v {
        Verdict::Holds { .. } => EXIT_HOLDS,
        Verdict::Fails { .. } => EXIT_FAILS,
        Verdict::Inconclusive(_) => EXIT_INCONCLUSIVE,
    }
}

fn verdict_report(command: &str, v: &Verdict, alphabet: &Alphabet) -> Report {
    let record = VerdictRecord::new(v, alphabet.punctuation());
    let mut r = Report::new(command, verdict_code(v), v.name());
    for l in verdict_lines(&record) {
        r.line(l);
    }
    r.set("verdict", &record);
    r
}

fn parse(a: &ParseArgs) -> Result<Report> {
    let alphabet = match &a.calc {
        Some(c) => load_calculus(c)?.calculus.alphabet().clone(),
        None => default_alphabet(),
    };
    let f = formula(&a.formula, &alphabet)?;
    let printed = print_with(&f, alphabet.punctuation());
    let atoms: Vec<String> = f.atoms().iter().map(ToString::to_string).collect();
    let mut r = Report::new("parse", EXIT_HOLDS, "parsed");
    r.line(&printed);
    r.line(format!("size {}", f.size()));
    r.line(format!("atoms {}", atoms.join(" ")));
    r.set("formula", &printed);
    r.set("size", f.size());
    r.set("atoms", &atoms);
    Ok(r)
}

fn enum_lang(a: &EnumLangArgs) -> Result<Report> {
    let language = match (&a.words, &a.calc) {
        (Some(words), _) => LanguageDefinition::demonstrative(words.split(',').map(str::trim))
            .map_err(|e| CliError::Usage(e.to_string()))?,
        (None, Some(c)) => LanguageDefinition::constructive(load_calculus(c)?.calculus.alphabet().clone()),
        (None, None) => LanguageDefinition::constructive(default_alphabet()),
    };
    if !a.accepts.is_empty() {
        let decided: Vec<(String, bool)> = a.accepts.iter().map(|w| (w.clone(), language.accepts(w))).collect();
        let all = decided.iter().all(|(_, ok)| *ok);
        let mut r = Report::new("enum-lang", if all { EXIT_HOLDS } else { EXIT_FAILS }, if all { "accepted" } else { "rejected" });
        for (w, ok) in &decided {
            r.line(format!("{} {w}", if *ok { "accept" } else { "reject" }));
        }
        r.set(
            "decisions",
            decided.iter().map(|(w, ok)| json!({"word": w, "member": ok})).collect::<Vec<_>>(),
        );
        return Ok(r);
    }
    let words = language.produce(a.max_size).map_err(|e| match e {
        FormulaError::BudgetExceeded(_) => CliError::Budget(e.to_string()),
        e => CliError::Usage(e.to_string()),
    })?;
    let mut r = Report::new("enum-lang", EXIT_HOLDS, "listed");
    for w in &words {
        r.line(w);
    }
    r.set("max_size", a.max_size);
    r.set("count", words.len());
    r.set("words", &words);
    Ok(r)
}

fn body_report(command: &str, loaded: &Loaded, bounds: &Bounds) -> Report {
    let c = &loaded.calculus;
    let body = enumerate_body(c, bounds);
    let record = BodyRecord::new(c, &body);
    let mut r = Report::new(command, status_code(body.status()), body.status().as_str());
    r.line(format!("calculus {}", c.name()));
    r.line(bounds_line(bounds));
    r.line(format!("status {}", body.status().as_str()));
    r.line(format!("theorems {}", body.len()));
    r.line(format!("stages {}", body.stage_count()));
    let mut stage = 0;
    for (n, t) in record.theorems.iter().enumerate() {
        if t.stage != stage {
            stage = t.stage;
            r.line(format!("stage {stage}"));
        }
        r.line(theorem_line(n, t));
    }
    let stats = body.stats();
    r.set("body", &record);
    r.set(
        "usage",
        json!({"theorems": body.len(), "stages": body.stage_count(), "candidates": stats.candidates, "passes": stats.passes}),
    );
    r
}

fn enum_body(a: &BodyArgs, exec: Execution) -> Result<Report> {
    let loaded = load_calculus(&a.calc)?;
    let bounds = resolve(loaded.bounds, &a.bounds, exec)?;
    Ok(body_report("enum-body", &loaded, &bounds))
}

fn derive_cmd(a: &DeriveArgs, exec: Execution) -> Result<Report> {
    let loaded = load_calculus(&a.calc)?;
    let c = &loaded.calculus;
    let bounds = resolve(loaded.bounds, &a.bounds, exec)?;
    let goal = formula(&a.goal, c.alphabet())?;
    let p = c.alphabet().punctuation();
    let mut r = match derive(c, &goal, &bounds) {
        DeriveOutcome::Found(d) => {
            let mut r = Report::new("derive", EXIT_HOLDS, "found");
            r.text.push_str(&d.render(p));
            r.set("derivation", derivation_record(&d, p));
            r
        }
        DeriveOutcome::NotFound(status) => {
            let code = match status {
                BodyStatus::BudgetExceeded => EXIT_BUDGET,
                _ => EXIT_INCONCLUSIVE,
            };
            let mut r = Report::new("derive", code, "not_found");
            r.line(format!("not found within bounds ({})", status.as_str()));
            r.set("status", status);
            r
        }
    };
    r.set("calculus", c.name());
    r.set("goal", print_with(&goal, p));
    r.set("bounds", BoundsRecord::from(bounds));
    Ok(r)
}

fn stages(a: &BodyArgs, exec: Execution) -> Result<Report> {
    let loaded = load_calculus(&a.calc)?;
    let c = &loaded.calculus;
    let bounds = resolve(loaded.bounds, &a.bounds, exec)?;
    let p = c.alphabet().punctuation();
    if let Some(staged) = &loaded.stages {
        let bodies = staged_run(staged, c.rules(), &bounds).map_err(|e| CliError::Usage(e.to_string()))?;
        let budget = bodies.iter().any(|b| b.status() == BodyStatus::BudgetExceeded);
        let mut r = Report::new("stages", if budget { EXIT_BUDGET } else { EXIT_HOLDS }, "staged");
        r.line(format!("calculus {}", c.name()));
        r.line(bounds_line(&bounds));
        let mut records = Vec::new();
        for (k, body) in bodies.iter().enumerate() {
            let theorems: Vec<String> = body.formulas().map(|f| print_with(f, p)).collect();
            r.line(format!("system {} theorems {} status {}", k + 1, theorems.len(), body.status().as_str()));
            for t in &theorems {
                r.line(format!("  {t}"));
            }
            records.push(json!({"system": k + 1, "status": body.status(), "theorems": theorems}));
        }
        r.set("systems", records);
        return Ok(r);
    }
    let body = enumerate_body(c, &bounds);
    let mut r = Report::new("stages", status_code(body.status()), body.status().as_str());
    r.line(format!("calculus {}", c.name()));
    r.line(bounds_line(&bounds));
    r.line(format!("status {}", body.status().as_str()));
    let mut records = Vec::new();
    let mut previous = 0;
    for n in 1..=body.stage_count() {
        let stage = body.stage(n);
        let added: Vec<String> = stage[previous..].iter().map(|e| print_with(&e.formula, p)).collect();
        r.line(format!("T{n} {} (+{})", stage.len(), added.len()));
        for f in &added {
            r.line(format!("  {f}"));
        }
        records.push(json!({"stage": n, "size": stage.len(), "added": added}));
        previous = stage.len();
    }
    r.set("status", body.status());
    r.set("stages", records);
    Ok(r)
}

fn translation(name: &str) -> Result<TranslationMap> {
    TranslationMap::from_name(name).map_err(|e| CliError::Usage(e.to_string()))
}

fn compare(a: &CompareArgs, exec: Execution) -> Result<Report> {
    let kind = EquivalenceKind::from_name(&a.kind)
        .ok_or_else(|| CliError::Usage(format!("unknown equivalence kind `{}`", a.kind)))?;
    let first = load_calculus(&a.calc_a)?;
    let second = load_calculus(&a.calc_b)?;
    let bounds = resolve(first.bounds, &a.bounds, exec)?;
    let map = a.map.as_deref().map(translation).transpose()?;
    let v = compare_calculi(kind, &first.calculus, &second.calculus, &bounds, map).map_err(analysis)?;
    let mut r = verdict_report("compare", &v, second.calculus.alphabet());
    r.set("kind", kind.name());
    r.set("map", map.map(TranslationMap::name));
    r.set("calculi", [first.calculus.name(), second.calculus.name()]);
    r.set("bounds", BoundsRecord::from(bounds));
    Ok(r)
}

fn rules(names: &[String]) -> Result<RuleSystem> {
    let rules = names
        .iter()
        .map(|n| parse_rule(n).map_err(CliError::Usage).and_then(|s| make_rule(s).map_err(|e| CliError::Usage(e.to_string()))))
        .collect::<Result<Vec<_>>>()?;
    RuleSystem::new(rules).map_err(|e| CliError::Usage(e.to_string()))
}

fn property(a: &CheckArgs, c: &Calculus) -> Result<Property> {
    let alphabet = c.alphabet();
    Ok(match a.property.replace('_', "-").as_str() {
        "admissible" => Property::Admissible,
        "consistent" => Property::Consistent { strict: false },
        "consistent-strict" => Property::Consistent { strict: true },
        "consistent-with" => match &a.forbid_pattern {
            Some(p) => {
                let metas: Vec<&str> = a.meta.iter().map(String::as_str).collect();
                let s = Schema::parse("forbidden", p, &metas, alphabet).map_err(|e| CliError::Usage(e.to_string()))?;
                Property::ConsistentWith(FormulaSet::Pattern(s))
            }
            None if a.forbid.is_empty() => {
                return Err(CliError::Usage("consistent-with needs --forbid or --forbid-pattern".into()))
            }
            None => Property::ConsistentWith(FormulaSet::Formulas(
                a.forbid.iter().map(|f| formula(f, alphabet)).collect::<Result<BTreeSet<_>>>()?,
            )),
        },
        "complete-mapping" => Property::CompleteWrtMapping(match a.map.as_deref() {
            None | Some("negation") => FormulaMap::Negation,
            Some(m) => FormulaMap::Translation(translation(m)?),
        }),
        "complete-wrt" => {
            if a.target.is_empty() {
                return Err(CliError::Usage("complete-wrt needs at least one --target".into()));
            }
            Property::CompleteWrt {
                rules: if a.rule.is_empty() { c.rules().clone() } else { rules(&a.rule)? },
                targets: a.target.iter().map(|f| formula(f, alphabet)).collect::<Result<_>>()?,
            }
        }
        "transitively-closed" => Property::TransitivelyClosed {
            rules: if a.rule.is_empty() { None } else { Some(rules(&a.rule)?) },
        },
        "uses-all-axioms" => Property::UsesAllAxioms,
        "uses-all-rules" => Property::UsesAllRules,
        other => return Err(CliError::Usage(format!("unknown property `{other}`"))),
    })
}

fn check(a: &CheckArgs, exec: Execution) -> Result<Report> {
    let loaded = load_calculus(&a.calc)?;
    let c = &loaded.calculus;
    let prop = property(a, c)?;
    let (v, bounds) = match &a.body {
        Some(path) => {
            let text = read(path)?;
            let report: Value =
                serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            let record: BodyRecord = report
                .get("body")
                .cloned()
                .ok_or_else(|| CliError::Usage(format!("{}: no body in report", path.display())))
                .and_then(|b| {
                    serde_json::from_value(b).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
                })?;
            let body = record
                .body(c)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            let recorded = FileBounds {
                max_stage: Some(record.bounds.max_stage),
                max_formula_size: Some(record.bounds.max_formula_size),
                node_budget: Some(record.bounds.node_budget),
                pool_size: Some(record.bounds.pool_size),
            };
            let bounds = resolve(recorded, &a.bounds, exec)?;
            (check_property_on(c, &body, &prop, &bounds).map_err(analysis)?, bounds)
        }
        None => {
            let bounds = resolve(loaded.bounds, &a.bounds, exec)?;
            (check_property(c, &prop, &bounds).map_err(analysis)?, bounds)
        }
    };
    let mut r = verdict_report("check", &v, c.alphabet());
    r.set("property", prop.name());
    r.set("calculus", c.name());
    r.set("bounds", BoundsRecord::from(bounds));
    Ok(r)
}

fn relation(a: &RelationArgs, exec: Execution) -> Result<Report> {
    let loaded = load_calculus(&a.calc)?;
    let c = &loaded.calculus;
    let bounds = resolve(loaded.bounds, &a.bounds, exec)?;
    let pool = a.pool.iter().map(|f| formula(f, c.alphabet())).collect::<Result<Vec<_>>>()?;
    let (rel, status) = relation_from_calculus(c, &pool, a.max_premises, &bounds).map_err(analysis)?;
    if let Some(out) = &a.out {
        write(out, &rel.to_jsonl())?;
    }
    let mut r = Report::new("relation", status_code(status), status.as_str());
    r.line(format!("calculus {}", c.name()));
    r.line(bounds_line(&bounds));
    r.line(format!("status {}", status.as_str()));
    r.line(format!("pairs {}", rel.len()));
    for p in rel.pairs() {
        let premises: Vec<&str> = p.premises.iter().map(String::as_str).collect();
        r.line(format!("{{{}}} |- {}", premises.join(", "), p.conclusion));
    }
    r.set("status", status);
    r.set("max_premises", a.max_premises);
    r.set("pairs", rel.pairs().collect::<Vec<_>>());
    r.set("bounds", BoundsRecord::from(bounds));
    Ok(r)
}

fn relation_check(a: &RelationCheckArgs) -> Result<Report> {
    let kind = BoundednessKind::from_name(&a.kind)
        .ok_or_else(|| CliError::Usage(format!("unknown boundedness kind `{}`", a.kind)))?;
    let rel = FiniteRelation::from_jsonl(&read(&a.relation)?)
        .map_err(|e| CliError::Usage(format!("{}: {e}", a.relation.display())))?;
    let v = check_boundedness(&rel, a.m, kind).map_err(analysis)?;
    let mut r = verdict_report("relation-check", &v, &default_alphabet());
    r.set("kind", kind.name());
    r.set("m", a.m);
    r.set("pairs", rel.len());
    Ok(r)
}

fn automaton(a: &AutomatonArgs, exec: Execution) -> Result<Report> {
    let mut status = None;
    let nfa: EpsilonNfa = match (&a.calc, &a.words, &a.load) {
        (Some(c), _, _) => {
            let loaded = load_calculus(c)?;
            let bounds = resolve(loaded.bounds, &a.bounds, exec)?;
            let body = enumerate_body(&loaded.calculus, &bounds);
            status = Some(body.status());
            if a.trie {
                build_deterministic_body_automaton(body.formulas())
            } else {
                build_body_automaton(body.formulas())
            }
        }
        (None, Some(path), _) => {
            let text = read(path)?;
            let words = text.lines().filter(|l| !l.is_empty()).map(str::to_string);
            if a.trie {
                words_trie(words)
            } else {
                words_automaton(words)
            }
        }
        (None, None, Some(path)) => {
            read_automaton(&read(path)?).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        }
        (None, None, None) => return Err(CliError::Usage("one of --calc, --words or --load is required".into())),
    };
    if let Some(out) = &a.out {
        write(out, &write_automaton(&nfa))?;
    }
    let accepted = nfa_accepts_all(&nfa, &a.accept, exec);
    let rejected = accepted.iter().any(|ok| !ok);
    let code = match status {
        Some(BodyStatus::BudgetExceeded) => EXIT_BUDGET,
        _ if rejected => EXIT_FAILS,
        _ => EXIT_HOLDS,
    };
    let mut r = Report::new("automaton", code, if rejected { "rejected" } else { "built" });
    r.line(format!("states {}", nfa.state_count()));
    r.line(format!("transitions {}", nfa.transition_count()));
    r.line(format!("epsilon {}", nfa.epsilon_count()));
    r.line(format!("deterministic {}", if nfa.is_deterministic_on_symbols() { "yes" } else { "no" }));
    if let Some(s) = status {
        r.set("status", s);
        r.line(format!("status {}", s.as_str()));
    }
    for (w, ok) in a.accept.iter().zip(&accepted) {
        r.line(format!("{} {w}", if *ok { "accept" } else { "reject" }));
    }
    r.set("states", nfa.state_count());
    r.set("transitions", nfa.transition_count());
    r.set("epsilon", nfa.epsilon_count());
    r.set("deterministic", nfa.is_deterministic_on_symbols());
    r.set(
        "decisions",
        a.accept
            .iter()
            .zip(&accepted)
            .map(|(w, ok)| json!({"word": w, "member": ok}))
            .collect::<Vec<_>>(),
    );
    if let Some(n) = a.language_upto {
        let words: Vec<String> = nfa_language_upto(&nfa, n).into_iter().collect();
        for w in &words {
            r.line(format!("word {w}"));
        }
        r.set("language", words);
    }
    Ok(r)
}

use std::path::PathBuf;
use std::process::Command;

use metacalc::analysis::same_definition;
use metacalc::engine::{apply_rule, make_rule};
use metacalc::formula::{instantiate_schema, parse_formula, print_with, Punctuation};
use metacalc::library::{builtin, kleene};
use metacalc_cli::report::{BodyRecord, BoundsRecord, JustificationRecord, NodeRecord, VerdictRecord, WitnessRecord};
use metacalc_cli::{execute, load_calculus, parse_rule, Outcome};
use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Outcome {
    execute(std::iter::once("metacalc").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let out = run(&all);
    assert!(out.stderr.is_empty(), "{}", out.stderr);
    (out.code, serde_json::from_str(&out.stdout).unwrap())
}

#[test]
fn kleene_proves_identity_in_five_lines() {
    let out = run(&["derive", "--calc", "builtin:kleene", "--goal", "(P->P)", "--max-stage", "5"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines.len(), 5);
    for (n, l) in lines.iter().enumerate() {
        let (number, rest) = l.split_once(". ").unwrap();
        assert_eq!(number, (n + 1).to_string());
        let (formula, why) = rest.split_once("  [").unwrap();
        assert!(why.ends_with(']'));
        assert!(parse_formula(formula, kleene().alphabet()).is_ok());
    }
    assert!(lines[4].starts_with("5. (P -> P)  [modus_ponens: "));
}

#[test]
fn machine_derivations_revalidate() {
    for (calc, goal, extra) in [
        ("builtin:kleene", "P -> P", vec!["--max-stage", "5"]),
        ("builtin:church_p1", "[p ⊃ p]", vec!["--max-stage", "6", "--max-size", "17"]),
    ] {
        let mut args = vec!["derive", "--calc", calc, "--goal", goal];
        args.extend(extra);
        let (code, report) = json(&args);
        assert_eq!(code, 0);
        let c = builtin(calc.strip_prefix("builtin:").unwrap()).unwrap();
        let nodes: Vec<NodeRecord> = serde_json::from_value(report["derivation"].clone()).unwrap();
        let formulas: Vec<_> = nodes.iter().map(|n| parse_formula(&n.formula, c.alphabet()).unwrap()).collect();
        let bounds: BoundsRecord = serde_json::from_value(report["bounds"].clone()).unwrap();
        let ctx = c.rule_context(c.pool(&bounds.bounds()).unwrap());
        for (n, node) in nodes.iter().enumerate() {
            match &node.justification {
                JustificationRecord::Rule { rule, premises } => {
                    assert!(premises.iter().all(|&p| p < n));
                    let rule = make_rule(parse_rule(rule).unwrap()).unwrap();
                    let inputs: Vec<_> = premises.iter().map(|&p| formulas[p].clone()).collect();
                    assert!(apply_rule(&rule, &inputs, &ctx).unwrap().contains(&formulas[n]));
                }
                JustificationRecord::Schema { schema, assignment } => {
                    let s = c.schemata().iter().find(|s| s.id() == schema).unwrap();
                    let sigma = assignment.assignment(c.alphabet()).unwrap();
                    if sigma.is_empty() {
                        assert_eq!(s.pattern(), &formulas[n]);
                    } else {
                        assert_eq!(instantiate_schema(s, &sigma).unwrap(), formulas[n]);
                    }
                }
                JustificationRecord::Axiom { .. } => assert!(c.is_axiom(&formulas[n])),
                JustificationRecord::Premise => panic!("derive has no premises"),
            }
        }
        assert_eq!(formulas.last(), Some(&parse_formula(goal, c.alphabet()).unwrap()));
    }
}

#[test]
fn kleene_is_consistent() {
    let out = run(&["check", "--calc", "builtin:kleene", "--property", "consistent", "--max-stage", "3"]);
    assert_eq!(out.code, 0, "{}{}", out.stdout, out.stderr);
    assert!(out.stdout.starts_with("verdict holds\n"));
}

#[test]
fn comparison_is_reflexive() {
    let file = data("kleene.json");
    for kind in ["logical", "algorithmic", "axiomatic"] {
        let out = run(&["compare", "--kind", kind, "--calc-a", &file, "--calc-b", &file, "--max-stage", "3"]);
        assert_eq!(out.code, 0, "{kind}: {}{}", out.stdout, out.stderr);
    }
}

#[test]
fn file_kleene_is_the_builtin() {
    let loaded = load_calculus(&data("kleene.json")).unwrap();
    assert!(same_definition(&loaded.calculus, &kleene()));
    assert_eq!(loaded.bounds.pool_size, Some(1));
    assert_eq!(loaded.bounds.max_formula_size, Some(13));
}

#[test]
fn church_p2_third_axiom() {
    let c = load_calculus("builtin:church_p2").unwrap().calculus;
    assert_eq!(c.schemata().len(), 3);
    let printed: Vec<String> = c.schemata().iter().map(|s| print_with(s.pattern(), Punctuation::Brackets)).collect();
    assert!(printed.contains(&"[[~p -> ~q] -> [q -> p]]".to_string()));
}

#[test]
fn unknown_rule_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"language": {"kind": "propositional", "variables": ["P"], "connectives": ["implies"]},
            "axioms": ["P"], "rules": ["modus_tollens"]}"#,
    )
    .unwrap();
    let path = path.display().to_string();
    let out = run(&["enum-body", "--calc", &path]);
    assert_eq!(out.code, 3);
    assert!(out.stdout.is_empty());
    assert!(out.stderr.contains("rules[0]: unknown rule `modus_tollens`"), "{}", out.stderr);
}

#[test]
fn unknown_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        "{\"language\": {\"kind\": \"propositional\", \"variables\": [\"P\"]},\n \"axiom\": [\"P\"]}",
    )
    .unwrap();
    let out = run(&["enum-body", "--calc", &path.display().to_string()]);
    assert_eq!(out.code, 3);
    assert!(out.stderr.contains("line 2"), "{}", out.stderr);
    assert!(out.stderr.contains("unknown field `axiom`"), "{}", out.stderr);
}

#[test]
fn exit_codes() {
    let kleene = data("kleene.json");
    let dir = tempfile::tempdir().unwrap();
    let relation = dir.path().join("r.jsonl").display().to_string();
    let cases: Vec<(Vec<&str>, i32)> = vec![
        (vec!["parse", "(P -> Q)"], 0),
        (vec!["parse", "(P -> "], 3),
        (vec!["parse", "(P -> X)"], 3),
        (vec!["enum-lang", "--calc", "builtin:free(2)", "--max-size", "3"], 0),
        (vec!["enum-lang", "--calc", "builtin:free(2)", "--accepts", "~P"], 0),
        (vec!["enum-lang", "--calc", "builtin:free(2)", "--accepts", "P~"], 1),
        (vec!["enum-body", "--calc", "builtin:kleene", "--max-stage", "3"], 0),
        (vec!["enum-body", "--calc", "builtin:kleene", "--budget", "10"], 4),
        (vec!["enum-body", "--calc", "builtin:kleene", "--max-stage", "0"], 3),
        (vec!["enum-body", "--calc", "builtin:modus_tollens"], 3),
        (vec!["enum-body", "--calc", "/nonexistent/calc.json"], 3),
        (vec!["derive", "--calc", "builtin:kleene", "--goal", "Q", "--max-stage", "5"], 2),
        (vec!["derive", "--calc", "builtin:kleene", "--goal", "P -> P", "--max-stage", "1"], 2),
        (vec!["derive", "--calc", "builtin:kleene", "--goal", "P -> P", "--max-stage", "9", "--budget", "10"], 4),
        (vec!["stages", "--calc", &kleene, "--max-stage", "3"], 0),
        (vec!["compare", "--calc-a", "builtin:kleene", "--calc-b", "builtin:lv(kleene,tautology)"], 0),
        (vec!["compare", "--kind", "axiomatic", "--calc-a", "builtin:kleene", "--calc-b", "builtin:lv(kleene,tautology)"], 1),
        (vec!["compare", "--calc-a", "builtin:church_p2", "--calc-b", "builtin:church_p1", "--map", "p2_to_p1", "--max-stage", "3", "--max-size", "9"], 2),
        (vec!["compare", "--calc-a", "builtin:church_p2", "--calc-b", "builtin:church_p1"], 3),
        (vec!["compare", "--kind", "sideways", "--calc-a", &kleene, "--calc-b", &kleene], 3),
        (vec!["check", "--calc", "builtin:free(3)", "--property", "admissible"], 0),
        (vec!["check", "--calc", "builtin:free(3)", "--property", "consistent-with", "--forbid", "~~P"], 1),
        (vec!["check", "--calc", "builtin:kleene", "--property", "admissible"], 0),
        (vec!["check", "--calc", "builtin:kleene", "--property", "uses-all-axioms", "--max-stage", "3"], 1),
        (vec!["check", "--calc", "builtin:kleene", "--property", "consistent-with", "--forbid", "Q", "--max-stage", "3"], 0),
        (vec!["check", "--calc", "builtin:kleene", "--property", "consistent-with", "--forbid", "Q", "--max-stage", "2", "--max-size", "13"], 2),
        (vec!["check", "--calc", "builtin:kleene", "--property", "consistent-with"], 3),
        (vec!["check", "--calc", "builtin:kleene", "--property", "decidable"], 3),
        (vec!["relation", "--calc", "builtin:kleene", "--pool", "P", "--pool", "P -> Q", "--max-premises", "2", "--max-size", "5", "--out", &relation], 0),
        (vec!["relation-check", "--relation", &relation, "--m", "2"], 0),
        (vec!["relation-check", "--relation", &relation, "--m", "1"], 1),
        (vec!["relation-check", "--relation", &relation, "--m", "0"], 3),
        (vec!["relation-check", "--relation", &relation, "--m", "1", "--kind", "loose"], 3),
        (vec!["automaton", "--calc", "builtin:free(2)", "--accept", "~P"], 0),
        (vec!["automaton", "--calc", "builtin:free(2)", "--accept", "~~P"], 1),
        (vec!["automaton"], 3),
        (vec!["frobnicate"], 3),
        (vec!["derive", "--calc", "builtin:kleene"], 3),
    ];
    for (args, expected) in cases {
        let out = run(&args);
        assert_eq!(out.code, expected, "{args:?}\n{}{}", out.stdout, out.stderr);
        if expected == 3 {
            assert!(out.stdout.is_empty() && !out.stderr.is_empty(), "{args:?}");
        }
    }
}

#[test]
fn the_binary_exits_with_the_code() {
    let status = Command::new(env!("CARGO_BIN_EXE_metacalc"))
        .args(["derive", "--calc", "builtin:kleene", "--goal", "Q", "--max-stage", "5"])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(2));
    assert_eq!(String::from_utf8(status.stdout).unwrap(), "not found within bounds (saturated)\n");
    let help = Command::new(env!("CARGO_BIN_EXE_metacalc")).arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(0));
}

#[test]
fn machine_reports_are_deterministic() {
    for args in [
        vec!["enum-body", "--calc", "builtin:kleene", "--max-stage", "3", "--max-size", "13"],
        vec!["check", "--calc", "builtin:kleene", "--property", "uses-all-rules", "--max-stage", "3"],
        vec!["compare", "--calc-a", "builtin:church_p2", "--calc-b", "builtin:church_p1", "--map", "p2_to_p1", "--max-stage", "3", "--max-size", "9"],
    ] {
        let mut with = args.clone();
        with.push("--json");
        let first = run(&with);
        assert_eq!(first, run(&with));
        with.push("--sequential");
        let sequential = run(&with);
        // Only the echoed arguments differ.
        let strip = |o: &Outcome| {
            let mut v: Value = serde_json::from_str(&o.stdout).unwrap();
            v.as_object_mut().unwrap().remove("argv");
            v
        };
        assert_eq!(strip(&first), strip(&sequential));
        assert_eq!(first.stdout.matches("\"schema_version\": 1").count(), 1);
    }
}

#[test]
fn body_reports_round_trip_through_check() {
    let dir = tempfile::tempdir().unwrap();
    for (calc, bounds) in [
        ("builtin:kleene", vec!["--max-stage", "3"]),
        ("builtin:church_p1", vec!["--max-stage", "3", "--max-size", "9"]),
        ("builtin:shoenfield_fragment", vec!["--max-stage", "2", "--max-size", "7", "--pool-size", "1"]),
        ("builtin:kleene", vec!["--max-stage", "2", "--max-size", "13"]),
    ] {
        let mut args = vec!["enum-body", "--calc", calc];
        args.extend(&bounds);
        let (_, report) = json(&args);
        let record: BodyRecord = serde_json::from_value(report["body"].clone()).unwrap();
        for t in &record.theorems {
            assert!(t.stage >= 1);
        }
        let path = dir.path().join("body.json");
        std::fs::write(&path, serde_json::to_string(&report).unwrap()).unwrap();
        let path = path.display().to_string();
        for property in [
            "admissible",
            "consistent",
            "consistent-strict",
            "complete-mapping",
            "transitively-closed",
            "uses-all-axioms",
            "uses-all-rules",
        ] {
            let mut direct = vec!["check", "--calc", calc, "--property", property];
            direct.extend(&bounds);
            let reread = ["check", "--calc", calc, "--property", property, "--body", &path];
            let (a, b) = (json(&direct), json(&reread));
            assert_eq!(a.0, b.0, "{calc} {property}");
            assert_eq!(a.1["verdict"], b.1["verdict"], "{calc} {property}");
        }
    }
}

#[test]
fn failing_witnesses_reparse() {
    let (code, report) = json(&["check", "--calc", "builtin:church_p2", "--property", "consistent-with", "--forbid", "[p ⊃ [q ⊃ p]]", "--max-stage", "3", "--max-size", "9"]);
    assert_eq!(code, 1);
    let v: VerdictRecord = serde_json::from_value(report["verdict"].clone()).unwrap();
    let VerdictRecord::Fails { witness: WitnessRecord::Formula { formula }, .. } = v else {
        panic!("{v:?}");
    };
    let c = builtin("church_p2").unwrap();
    assert_eq!(parse_formula(&formula, c.alphabet()).unwrap(), parse_formula("[p ⊃ [q ⊃ p]]", c.alphabet()).unwrap());
    assert!(formula.is_ascii());
}

#[test]
fn body_reports_list_stage_and_justification() {
    let (code, report) = json(&["enum-body", "--calc", &data("kleene.json"), "--max-stage", "2"]);
    assert_eq!(code, 0);
    assert_eq!(report["schema"], "metacalc-report");
    assert_eq!(report["body"]["bounds"]["max_formula_size"], 13);
    assert_eq!(report["body"]["bounds"]["max_stage"], 2);
    let theorems = report["body"]["theorems"].as_array().unwrap();
    assert_eq!(theorems.len() as u64, report["usage"]["theorems"].as_u64().unwrap());
    assert_eq!(theorems[0]["justification"]["kind"], "schema");
    assert!(theorems.iter().any(|t| t["justification"]["kind"] == "rule" && t["stage"] == 2));
}

#[test]
fn bounds_precedence() {
    let file = data("kleene.json");
    let (_, report) = json(&["derive", "--calc", &file, "--goal", "P -> P"]);
    assert_eq!(report["bounds"]["max_formula_size"], 13);
    assert_eq!(report["bounds"]["max_stage"], 4);
    assert_eq!(report["bounds"]["node_budget"], 200_000);
    let (_, report) = json(&["derive", "--calc", &file, "--goal", "P -> P", "--max-size", "11"]);
    assert_eq!(report["bounds"]["max_formula_size"], 11);
}

#[test]
fn staged_systems() {
    let out = run(&["stages", "--calc", &data("staged.json")]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert!(lines.contains(&"system 1 theorems 3 status saturated"), "{}", out.stdout);
    assert!(lines.contains(&"system 2 theorems 1 status saturated"), "{}", out.stdout);
    let out = run(&["stages", "--calc", "builtin:kleene", "--max-stage", "3"]);
    let totals: Vec<&str> = out.stdout.lines().filter(|l| l.starts_with('T')).collect();
    assert_eq!(totals, ["T1 42 (+42)", "T2 46 (+4)"]);
}

#[test]
fn automata_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let words = dir.path().join("words.txt");
    std::fs::write(&words, "ab\nabc\nb\n").unwrap();
    let nfa = dir.path().join("nfa.txt");
    let (w, n) = (words.display().to_string(), nfa.display().to_string());
    let out = run(&["automaton", "--words", &w, "--trie", "--out", &n, "--language-upto", "3"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("deterministic yes\n"));
    assert!(out.stdout.ends_with("word ab\nword abc\nword b\n"), "{}", out.stdout);
    let out = run(&["automaton", "--load", &n, "--accept", "abc", "--accept", "a"]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("accept abc\nreject a\n"));
    let out = run(&["automaton", "--words", &w]);
    assert!(out.stdout.starts_with("states 10\n"), "{}", out.stdout);
}

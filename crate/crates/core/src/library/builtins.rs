//! The classical calculi as ready-made values.

use thiserror::Error;

use crate::engine::{Calculus, EngineError, RuleSpec, RuleSystem, SchemaMode, Validator};
use crate::formula::{
    enumerate_wffs, Alphabet, Connective, FormulaError, LanguageKind, Punctuation, Quantifier, Schema, SideCondition,
    Symbol,
};

pub const BUILTIN_NAMES: [&str; 6] = ["kleene", "church_p1", "church_p2", "shoenfield_fragment", "lv", "free"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LibraryError {
    #[error("unknown built-in calculus `{0}`")]
    UnknownName(String),
    #[error("built-in `{name}` needs a parameter: {expected}")]
    MissingParameter { name: String, expected: String },
    #[error(transparent)]
    Engine(#[from] EngineError),
}

impl From<FormulaError> for LibraryError {
    fn from(e: FormulaError) -> Self {
        LibraryError::Engine(e.into())
    }
}

const KLEENE: [&str; 10] = [
    "phi -> (chi -> phi)",
    "(phi -> (chi -> psi)) -> ((phi -> chi) -> (phi -> psi))",
    "phi -> (chi -> (phi & chi))",
    "phi -> phi | chi",
    "chi -> phi | chi",
    "phi & chi -> phi",
    "phi & chi -> chi",
    "(phi -> psi) -> ((chi -> psi) -> (phi | chi -> psi))",
    "(phi -> chi) -> ((phi -> ~chi) -> ~phi)",
    "~~phi -> phi",
];

const CHURCH_COMMON: [&str; 2] = ["[p ⊃ [q ⊃ p]]", "[[s ⊃ [p ⊃ q]] ⊃ [[s ⊃ p] ⊃ [s ⊃ q]]]"];
const CHURCH_P1_THIRD: &str = "[[[p ⊃ f] ⊃ f] ⊃ p]";
const CHURCH_P2_THIRD: &str = "[[∼p ⊃ ∼q] ⊃ [q ⊃ p]]";

pub fn kleene_alphabet() -> Alphabet {
    Alphabet::propositional(
        &["P", "Q", "R"],
        &[Connective::Not, Connective::And, Connective::Or, Connective::Implies],
    )
}

/// Schemata (1)-(10) with modus ponens, instantiated on demand over a pool
/// built from `P` and `Q`.
pub fn kleene() -> Calculus {
    let a = kleene_alphabet();
    let schemata = KLEENE
        .iter()
        .enumerate()
        .map(|(i, p)| Schema::parse(&(i + 1).to_string(), p, &["phi", "chi", "psi"], &a).expect("kleene schema"))
        .collect();
    let rules = RuleSystem::from_specs([RuleSpec::ModusPonens]).expect("rules");
    Calculus::new("kleene", a, Vec::new(), schemata, rules, SchemaMode::OnDemand)
        .and_then(|c| c.with_pool_variables(&["P", "Q"]))
        .expect("kleene calculus")
}

/// The bracketed implication alphabet of P1 (with falsum) or P2 (with
/// negation).
pub fn church_alphabet(with_negation: bool) -> Alphabet {
    let b = Alphabet::builder(LanguageKind::Propositional)
        .variables(&["p", "q", "s"])
        .punctuation(Punctuation::Brackets);
    let b = if with_negation {
        b.connectives(&[Connective::Not, Connective::Implies])
    } else {
        b.connectives(&[Connective::Implies]).constants(&["f"])
    };
    b.build().expect("church alphabet")
}

fn church(name: &str, third: &str, with_negation: bool) -> Calculus {
    let a = church_alphabet(with_negation);
    let schemata = CHURCH_COMMON
        .iter()
        .chain(std::iter::once(&third))
        .enumerate()
        .map(|(i, p)| Schema::parse_unchecked(&(i + 1).to_string(), p, &["p", "q", "s"], &a).expect("church schema"))
        .collect();
    let rules = RuleSystem::from_specs([RuleSpec::ModusPonens, RuleSpec::Substitution]).expect("rules");
    Calculus::new(name, a, Vec::new(), schemata, rules, SchemaMode::SubstitutionRule)
        .and_then(|c| c.with_pool_variables(&["p", "q"]))
        .expect("church calculus")
}

/// P1: implication and falsum, schemata as axioms, modus ponens and
/// substitution.
pub fn church_p1() -> Calculus {
    church("church_p1", CHURCH_P1_THIRD, false)
}

/// P2: implication and negation, otherwise as P1.
pub fn church_p2() -> Calculus {
    church("church_p2", CHURCH_P2_THIRD, true)
}

pub fn shoenfield_alphabet() -> Alphabet {
    Alphabet::builder(LanguageKind::FirstOrder)
        .connectives(&[Connective::Not, Connective::And, Connective::Or, Connective::Implies])
        .quantifiers(&[Quantifier::Exists])
        .individual_variables(&["x", "y", "z", "w"])
        .function("a", 0)
        .function("g", 1)
        .predicate("P", 1)
        .predicate("R", 2)
        .equality(true)
        .build()
        .expect("first-order alphabet")
}

/// The propositional, identity, substitution and equality axioms with the
/// extension, cancellation, associative, cut and exists-introduction rules.
pub fn shoenfield_fragment() -> Calculus {
    let a = shoenfield_alphabet();
    let mut schemata = vec![
        Schema::parse("propositional", "phi | ~phi", &["phi"], &a).expect("schema"),
        Schema::parse("identity", "x = x", &[], &a)
            .expect("schema")
            .with_variable_metas(&["x"]),
        Schema::parse("substitution", "chi -> exists x phi", &["chi", "phi"], &a)
            .expect("schema")
            .with_variable_metas(&["x"])
            .with_side_condition(SideCondition::TermInstance {
                instance: Symbol::new("chi"),
                body: Symbol::new("phi"),
                variable: Symbol::new("x"),
                term: Symbol::new("t"),
            }),
    ];
    let pairs = [("x", "y"), ("z", "w")];
    let premise = |n: usize| {
        pairs[..n]
            .iter()
            .map(|(l, r)| format!("{l} = {r}"))
            .collect::<Vec<_>>()
            .join(" & ")
    };
    let args = |n: usize, right: bool| {
        pairs[..n]
            .iter()
            .map(|(l, r)| if right { *r } else { *l })
            .collect::<Vec<_>>()
            .join(", ")
    };
    let metas: Vec<&str> = pairs.iter().flat_map(|(l, r)| [*l, *r]).collect();
    for (f, &n) in a.functions().iter().filter(|(_, &n)| n > 0) {
        let text = format!("{} -> {f}({}) = {f}({})", premise(n), args(n, false), args(n, true));
        schemata.push(
            Schema::parse(&format!("equality-{f}"), &text, &[], &a)
                .expect("schema")
                .with_variable_metas(&metas[..2 * n]),
        );
    }
    for (p, &n) in a.predicates().iter().filter(|(_, &n)| n > 0) {
        let text = format!("{} -> ({p}({}) -> {p}({}))", premise(n), args(n, false), args(n, true));
        schemata.push(
            Schema::parse(&format!("equality-{p}"), &text, &[], &a)
                .expect("schema")
                .with_variable_metas(&metas[..2 * n]),
        );
    }
    let rules = RuleSystem::from_specs([
        RuleSpec::Extension,
        RuleSpec::Cancellation,
        RuleSpec::AssociativityLeft,
        RuleSpec::AssociativityRight,
        RuleSpec::Cut,
        RuleSpec::ExistsIntroduction,
    ])
    .expect("rules");
    Calculus::new("shoenfield_fragment", a, Vec::new(), schemata, rules, SchemaMode::OnDemand)
        .and_then(|c| c.with_pool_variables(&["x", "y"]))
        .expect("shoenfield calculus")
}

/// `base` with modus ponens replaced by validated modus ponens.
pub fn lv(base: &Calculus, validator: Validator) -> Calculus {
    let specs = base.rules().rules().iter().map(|r| match r.spec() {
        RuleSpec::ModusPonens => RuleSpec::ValidatedMp(validator.clone()),
        s => s.clone(),
    });
    let rules = RuleSystem::from_specs(specs).expect("rules stay distinct");
    base.clone()
        .with_rules(rules)
        .expect("same schema mode")
        .with_name(&format!("lv({},{})", base.name(), validator.name()))
}

/// The free calculus: every wff up to `max_size` is an axiom.
pub fn free(alphabet: &Alphabet, rules: RuleSystem, max_size: usize) -> Result<Calculus, LibraryError> {
    let axioms = enumerate_wffs(alphabet, max_size)?;
    Ok(Calculus::new("free", alphabet.clone(), axioms, Vec::new(), rules, SchemaMode::OnDemand)?)
}

/// Looks up a built-in by name. Parametric built-ins use call syntax:
/// `lv(<base>,<validator>)` and `free(<max_size>)`, the latter over the
/// alphabet `{P}` with negation and implication under the identity rule.
pub fn builtin(name: &str) -> Result<Calculus, LibraryError> {
    let name = name.trim();
    let (head, args) = match name.split_once('(') {
        Some((h, rest)) => {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| LibraryError::UnknownName(name.to_string()))?;
            (h.trim(), inner.split(',').map(str::trim).collect::<Vec<_>>())
        }
        None => (name, Vec::new()),
    };
    let missing = |expected: &str| LibraryError::MissingParameter {
        name: head.to_string(),
        expected: expected.to_string(),
    };
    match (head, args.as_slice()) {
        ("kleene", []) => Ok(kleene()),
        ("church_p1", []) => Ok(church_p1()),
        ("church_p2", []) => Ok(church_p2()),
        ("shoenfield_fragment", []) => Ok(shoenfield_fragment()),
        ("lv", [base, v]) => {
            let validator = Validator::from_name(v).ok_or_else(|| missing("a validator name"))?;
            Ok(lv(&builtin(base)?, validator))
        }
        ("lv", [v]) => {
            let validator = Validator::from_name(v).ok_or_else(|| missing("a validator name"))?;
            Ok(lv(&kleene(), validator))
        }
        ("lv", _) => Err(missing("lv(<base>,<validator>)")),
        ("free", [n]) => {
            let cap: usize = n.parse().map_err(|_| missing("a positive size cap"))?;
            if cap == 0 {
                return Err(missing("a positive size cap"));
            }
            let alphabet = Alphabet::propositional(&["P"], &[Connective::Not, Connective::Implies]);
            free(&alphabet, RuleSystem::from_specs([RuleSpec::Identity])?, cap)
        }
        ("free", _) => Err(missing("free(<max_size>)")),
        _ => Err(LibraryError::UnknownName(name.to_string())),
    }
}

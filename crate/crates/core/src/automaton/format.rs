//! The automaton interchange text.
//!
//! ```text
//! states 3
//! start 0
//! accepting 2
//! alphabet 'P'
//! transition 0 eps 1
//! transition 1 'P' 2
//! ```
//!
//! Symbols are single characters in single quotes, with `\'` and `\\` as
//! escapes; `eps` is ε. Blank lines and lines starting with `#` are
//! ignored.

use std::collections::BTreeSet;
use std::fmt::Write;

use super::{EpsilonNfa, Label, NfaError, State};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AutomatonFormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing `{0}` line")]
    Missing(&'static str),
    #[error(transparent)]
    Invalid(#[from] NfaError),
}

fn symbol(c: char) -> String {
    match c {
        '\'' => r"'\''".into(),
        '\\' => r"'\\'".into(),
        c => format!("'{c}'"),
    }
}

pub fn write_automaton(nfa: &EpsilonNfa) -> String {
    let mut out = String::new();
    let join = |it: &mut dyn Iterator<Item = String>| it.collect::<Vec<_>>().join(" ");
    writeln!(out, "states {}", nfa.state_count()).unwrap();
    writeln!(out, "start {}", nfa.start()).unwrap();
    writeln!(out, "accepting {}", join(&mut nfa.accepting().iter().map(|q| q.to_string()))).unwrap();
    writeln!(out, "alphabet {}", join(&mut nfa.alphabet().iter().map(|&c| symbol(c)))).unwrap();
    for &(p, a, q) in nfa.transitions() {
        let label = a.map_or_else(|| "eps".to_string(), symbol);
        writeln!(out, "transition {p} {label} {q}").unwrap();
    }
    // Trailing spaces from empty lists are not significant.
    out.lines().map(|l| l.trim_end().to_string() + "\n").collect()
}

/// Splits on spaces, keeping quoted symbols (which may be spaces) whole.
fn tokens(line: &str) -> Result<Vec<String>, String> {
    let mut out = Vec::new();
    let mut chars = line.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c == ' ' || c == '\t' {
            chars.next();
        } else if c == '\'' {
            chars.next();
            let mut tok = String::from("'");
            match chars.next() {
                Some('\\') => tok.push(chars.next().ok_or("unterminated symbol")?),
                Some(x) => tok.push(x),
                None => return Err("unterminated symbol".into()),
            }
            if chars.next() != Some('\'') {
                return Err("a symbol is one quoted character".into());
            }
            out.push(tok);
        } else {
            let mut tok = String::new();
            while let Some(&x) = chars.peek() {
                if x == ' ' || x == '\t' {
                    break;
                }
                tok.push(x);
                chars.next();
            }
            out.push(tok);
        }
    }
    Ok(out)
}

fn label(tok: &str) -> Result<Label, String> {
    if tok == "eps" {
        return Ok(None);
    }
    tok.strip_prefix('\'')
        .and_then(|s| s.chars().next())
        .map(Some)
        .ok_or_else(|| format!("expected a quoted symbol or `eps`, found `{tok}`"))
}

fn number(tok: &str) -> Result<State, String> {
    tok.parse().map_err(|_| format!("expected a state number, found `{tok}`"))
}

pub fn read_automaton(text: &str) -> Result<EpsilonNfa, AutomatonFormatError> {
    let mut states = None;
    let mut start = None;
    let mut accepting = BTreeSet::new();
    let mut alphabet = BTreeSet::new();
    let mut transitions = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let err = |message: String| AutomatonFormatError::Syntax { line: i + 1, message };
        if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
            continue;
        }
        let toks = tokens(raw).map_err(err)?;
        let (head, rest) = toks.split_first().expect("non-empty line");
        match head.as_str() {
            "states" | "start" if rest.len() != 1 => return Err(err(format!("`{head}` takes one number"))),
            "states" => states = Some(number(&rest[0]).map_err(err)?),
            "start" => start = Some(number(&rest[0]).map_err(err)?),
            "accepting" => {
                for t in rest {
                    accepting.insert(number(t).map_err(err)?);
                }
            }
            "alphabet" => {
                for t in rest {
                    match label(t).map_err(err)? {
                        Some(c) => alphabet.insert(c),
                        None => return Err(err("ε is not an alphabet symbol".into())),
                    };
                }
            }
            "transition" => match rest {
                [p, a, q] => transitions.push((
                    number(p).map_err(err)?,
                    label(a).map_err(err)?,
                    number(q).map_err(err)?,
                )),
                _ => return Err(err("a transition is `transition <from> <symbol> <to>`".into())),
            },
            other => return Err(err(format!("unknown directive `{other}`"))),
        }
    }
    let states = states.ok_or(AutomatonFormatError::Missing("states"))?;
    let start = start.ok_or(AutomatonFormatError::Missing("start"))?;
    Ok(EpsilonNfa::new(states, alphabet, transitions, start, accepting)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::words_automaton;

    #[test]
    fn round_trip_with_awkward_symbols() {
        let nfa = words_automaton(["(P -> Q)".to_string(), "a'\\b".to_string()]);
        let text = write_automaton(&nfa);
        assert!(text.contains("transition 0 eps 1"));
        assert!(text.contains("' '"));
        assert_eq!(read_automaton(&text).unwrap(), nfa);
    }

    #[test]
    fn errors_carry_lines() {
        assert!(matches!(
            read_automaton("states 2\nstart 0\ntransition 0 x 1\n"),
            Err(AutomatonFormatError::Syntax { line: 3, .. })
        ));
        assert_eq!(read_automaton("start 0\n"), Err(AutomatonFormatError::Missing("states")));
        assert!(matches!(
            read_automaton("states 2\nstart 0\ntransition 0 'a' 1\n"),
            Err(AutomatonFormatError::Invalid(NfaError::UnknownSymbol('a')))
        ));
    }
}

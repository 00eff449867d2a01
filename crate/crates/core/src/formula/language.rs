//! Languages as triads (alphabet, rules, realized words).

use std::collections::BTreeSet;

use super::alphabet::Alphabet;
use super::enumerate::enumerate_wffs;
use super::parse::accepts;
use super::print::print_with;
use super::FormulaError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LanguageMode {
    /// An explicit finite list of words.
    Demonstrative(Vec<String>),
    /// The wffs generated from an alphabet by the formation rules.
    Constructive(Alphabet),
}

/// A language definition. Constructive languages are realized lazily, up
/// to a size cap, by [`LanguageDefinition::produce`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LanguageDefinition {
    mode: LanguageMode,
}

impl LanguageDefinition {
    pub fn demonstrative<S: Into<String>>(words: impl IntoIterator<Item = S>) -> Result<Self, FormulaError> {
        let words: Vec<String> = words.into_iter().map(Into::into).collect();
        let distinct: BTreeSet<&String> = words.iter().collect();
        if distinct.len() != words.len() {
            return Err(FormulaError::InvalidLanguage("duplicate word in list".into()));
        }
        Ok(LanguageDefinition {
            mode: LanguageMode::Demonstrative(words),
        })
    }

    pub fn constructive(alphabet: Alphabet) -> Self {
        LanguageDefinition {
            mode: LanguageMode::Constructive(alphabet),
        }
    }

    pub fn mode(&self) -> &LanguageMode {
        &self.mode
    }

    /// The characters (demonstrative) or declared symbol names
    /// (constructive) the words are built from.
    pub fn alphabet_symbols(&self) -> BTreeSet<String> {
        match &self.mode {
            LanguageMode::Demonstrative(words) => words
                .iter()
                .flat_map(|w| w.chars())
                .map(String::from)
                .collect(),
            LanguageMode::Constructive(a) => a.symbol_names(),
        }
    }

    /// Decision mode.
    pub fn accepts(&self, word: &str) -> bool {
        match &self.mode {
            LanguageMode::Demonstrative(words) => words.iter().any(|w| w == word),
            LanguageMode::Constructive(a) => accepts(word, a),
        }
    }

    /// Production mode: the words of the language; constructive languages
    /// are cut at `max_size` AST nodes.
    pub fn produce(&self, max_size: usize) -> Result<Vec<String>, FormulaError> {
        match &self.mode {
            LanguageMode::Demonstrative(words) => Ok(words.clone()),
            LanguageMode::Constructive(a) => Ok(enumerate_wffs(a, max_size)?
                .iter()
                .map(|f| print_with(f, a.punctuation()))
                .collect()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Connective;

    #[test]
    fn demonstrative_rejects_duplicates() {
        assert!(LanguageDefinition::demonstrative(["a", "b", "a"]).is_err());
        let l = LanguageDefinition::demonstrative(["ab", "c"]).unwrap();
        assert!(l.accepts("ab"));
        assert!(!l.accepts("a"));
        assert_eq!(l.alphabet_symbols().len(), 3);
    }

    #[test]
    fn production_and_decision_agree() {
        let l = LanguageDefinition::constructive(Alphabet::propositional(&["P"], &[Connective::Not, Connective::Or]));
        let words = l.produce(4).unwrap();
        assert!(words.iter().all(|w| l.accepts(w)));
        assert!(words.contains(&"(P | ~P)".to_string()));
        assert!(!l.accepts("P | P"));
    }
}

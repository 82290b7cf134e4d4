//! Skill dictionary and the boundary-aware keyword matcher.
//!
//! A keyword occurs in a text when it appears ASCII-case-insensitively with
//! no identifier character directly on either side. Identifier characters
//! are letters, digits, `#`, `+` and `.`, so `Java` never fires inside
//! `JavaScript`, `.NET` never fires inside `ASP.NET` and `js` never fires
//! inside `Node.js`. A `.` directly after a keyword only blocks the match
//! when a letter or digit follows it; a sentence-final period does not.

use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::path::Path;

use aho_corasick::{AhoCorasick, MatchKind};
use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};

const DEFAULT_DICTIONARY: &str = include_str!("../data/default_dictionary.toml");

/// A canonical skill and the keyword synonyms that signal it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkillEntry {
    pub name: String,
    #[serde(default)]
    pub category: String,
    pub keywords: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DictionaryFile {
    #[serde(default)]
    skills: Vec<SkillEntry>,
    #[serde(default)]
    excluded: Vec<String>,
}

/// A validated dictionary together with its compiled keyword automaton.
#[derive(Debug, Clone)]
pub struct SkillDictionary {
    entries: Vec<SkillEntry>,
    excluded: Vec<String>,
    automaton: AhoCorasick,
    // pattern index -> entry index
    pattern_skill: Vec<usize>,
}

impl SkillDictionary {
    pub fn new(entries: Vec<SkillEntry>, excluded: Vec<String>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Dictionary("dictionary defines no skills".into()));
        }

        let excluded_folded: HashMap<String, &str> =
            excluded.iter().map(|k| (k.to_ascii_lowercase(), k.as_str())).collect();
        let mut names: HashMap<&str, usize> = HashMap::new();
        let mut owner: HashMap<String, usize> = HashMap::new();
        let mut patterns = Vec::new();
        let mut pattern_skill = Vec::new();

        for (idx, entry) in entries.iter().enumerate() {
            if entry.name.trim().is_empty() {
                return Err(Error::Dictionary(format!("skill #{} has an empty name", idx + 1)));
            }
            if names.insert(entry.name.as_str(), idx).is_some() {
                return Err(Error::Dictionary(format!("duplicate skill name `{}`", entry.name)));
            }
            if entry.keywords.is_empty() {
                return Err(Error::Dictionary(format!("skill `{}` has no keywords", entry.name)));
            }
            for keyword in &entry.keywords {
                validate_keyword(&entry.name, keyword)?;
                let folded = keyword.to_ascii_lowercase();
                if let Some(ex) = excluded_folded.get(&folded) {
                    return Err(Error::Dictionary(format!(
                        "keyword `{keyword}` of skill `{}` is on the exclusion list (as `{ex}`)",
                        entry.name
                    )));
                }
                match owner.get(&folded) {
                    Some(&other) if other != idx => {
                        return Err(Error::Dictionary(format!(
                            "keyword `{keyword}` maps to both `{}` and `{}`",
                            entries[other].name, entry.name
                        )));
                    }
                    // listed twice under the same skill; one pattern is enough
                    Some(_) => continue,
                    None => {
                        owner.insert(folded, idx);
                        patterns.push(keyword.as_str());
                        pattern_skill.push(idx);
                    }
                }
            }
        }

        let automaton = AhoCorasick::builder()
            .ascii_case_insensitive(true)
            .match_kind(MatchKind::Standard)
            .build(&patterns)
            .map_err(|e| Error::Dictionary(format!("cannot compile keyword automaton: {e}")))?;

        Ok(SkillDictionary { entries, excluded, automaton, pattern_skill })
    }

    pub fn from_toml_str(input: &str) -> Result<Self> {
        let file: DictionaryFile =
            toml::from_str(input).map_err(|e| Error::Dictionary(e.to_string()))?;
        SkillDictionary::new(file.skills, file.excluded)
    }

    /// The dictionary shipped with the crate: 37 technologies in five
    /// categories, with C, R, Go, Chef, Flow and Julia excluded.
    pub fn default_dictionary() -> Self {
        SkillDictionary::from_toml_str(DEFAULT_DICTIONARY).expect("bundled dictionary is valid")
    }

    pub fn default_toml() -> &'static str {
        DEFAULT_DICTIONARY
    }

    pub fn entries(&self) -> &[SkillEntry] {
        &self.entries
    }

    pub fn excluded(&self) -> &[String] {
        &self.excluded
    }

    pub fn skill_names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.name.as_str())
    }

    pub fn keyword_count(&self) -> usize {
        self.pattern_skill.len()
    }

    pub fn get(&self, name: &str) -> Option<&SkillEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    /// Canonical skills present in `text`.
    pub fn matches(&self, text: &str) -> BTreeSet<String> {
        let mut found = vec![false; self.entries.len()];
        for m in self.automaton.find_overlapping_iter(text) {
            let skill = self.pattern_skill[m.pattern().as_usize()];
            if !found[skill] && is_delimited(text, m.start(), m.end()) {
                found[skill] = true;
            }
        }
        found
            .iter()
            .zip(&self.entries)
            .filter(|(hit, _)| **hit)
            .map(|(_, e)| e.name.clone())
            .collect()
    }
}

fn validate_keyword(skill: &str, keyword: &str) -> Result<()> {
    if keyword.trim().is_empty() {
        return Err(Error::Dictionary(format!("skill `{skill}` has an empty keyword")));
    }
    if keyword.trim() != keyword {
        return Err(Error::Dictionary(format!(
            "keyword `{keyword}` of skill `{skill}` has surrounding whitespace"
        )));
    }
    if keyword.ends_with('.') && !keyword.contains(char::is_whitespace) {
        return Err(Error::Dictionary(format!(
            "keyword `{keyword}` of skill `{skill}` ends with `.`"
        )));
    }
    Ok(())
}

pub fn is_identifier_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '#' | '+' | '.')
}

fn is_delimited(text: &str, start: usize, end: usize) -> bool {
    let left_ok = text[..start].chars().next_back().is_none_or(|c| !is_identifier_char(c));
    if !left_ok {
        return false;
    }
    let mut rest = text[end..].chars();
    match rest.next() {
        None => true,
        Some('.') => !rest.next().is_some_and(char::is_alphanumeric),
        Some(c) => !is_identifier_char(c),
    }
}

pub fn load_dictionary(path: impl AsRef<Path>) -> Result<SkillDictionary> {
    let path = path.as_ref();
    let input = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    SkillDictionary::from_toml_str(&input)
}

/// Skills detected in one document. Presence only: repeated mentions count once.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchSet {
    pub document_id: String,
    pub skills: BTreeSet<String>,
}

impl MatchSet {
    pub fn contains(&self, skill: &str) -> bool {
        self.skills.contains(skill)
    }
}

pub fn match_document(text: &str, dict: &SkillDictionary) -> BTreeSet<String> {
    dict.matches(text)
}

/// One [`MatchSet`] per document, in corpus order.
pub fn match_corpus(corpus: &Corpus, dict: &SkillDictionary) -> Vec<MatchSet> {
    corpus
        .iter()
        .map(|doc| MatchSet { document_id: doc.id.clone(), skills: dict.matches(&doc.text) })
        .collect()
}

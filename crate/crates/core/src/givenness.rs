//! Form-based givenness classification of NPs.
//!
//! A fixed rule cascade, first match wins:
//! empty category, pronoun, proper name, definite, indefinite, not classified.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::index::IndexedTree;
use crate::query::NpOccurrence;
use crate::treebank::{is_empty_leaf, PunctuationSet, Tree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GivennessCategory {
    EmptyCategory,
    Pronoun,
    ProperName,
    Definite,
    Indefinite,
    NotClassified,
}

impl GivennessCategory {
    pub const ALL: [GivennessCategory; 6] = [
        GivennessCategory::EmptyCategory,
        GivennessCategory::Pronoun,
        GivennessCategory::ProperName,
        GivennessCategory::Definite,
        GivennessCategory::Indefinite,
        GivennessCategory::NotClassified,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            GivennessCategory::EmptyCategory => "empty-category",
            GivennessCategory::Pronoun => "pronoun",
            GivennessCategory::ProperName => "proper-name",
            GivennessCategory::Definite => "definite",
            GivennessCategory::Indefinite => "indefinite",
            GivennessCategory::NotClassified => "not-classified",
        }
    }
}

impl fmt::Display for GivennessCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GivennessCategory {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GivennessCategory::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown givenness category {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GivennessError {
    #[error("expected an NP node, found {0:?}")]
    NotAnNP(String),
    #[error("determiner(s) listed as both definite and indefinite: {0}")]
    OverlappingDeterminers(String),
    #[error("config line {line}: {message}")]
    Syntax { line: usize, message: String },
}

/// Tag and word lists driving the cascade.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifierConfig {
    pronoun_pos_tags: BTreeSet<String>,
    proper_pos_tags: BTreeSet<String>,
    definite_determiners: BTreeSet<String>,
    indefinite_determiners: BTreeSet<String>,
    punctuation: PunctuationSet,
}

fn set(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        ClassifierConfig {
            pronoun_pos_tags: set(&["PRP", "PRP$"]),
            proper_pos_tags: set(&["NNP", "NNPS"]),
            definite_determiners: set(&["the", "this", "that", "these", "those"]),
            indefinite_determiners: set(&[
                "a", "an", "some", "several", "many", "few", "another", "one",
            ]),
            punctuation: PunctuationSet::default(),
        }
    }
}

const KEYS: [&str; 4] = [
    "pronoun_pos_tags",
    "proper_pos_tags",
    "definite_determiners",
    "indefinite_determiners",
];

impl ClassifierConfig {
    /// Build a config; determiners are lower-cased and must be disjoint.
    pub fn new(
        pronoun_pos_tags: BTreeSet<String>,
        proper_pos_tags: BTreeSet<String>,
        definite_determiners: BTreeSet<String>,
        indefinite_determiners: BTreeSet<String>,
    ) -> Result<Self, GivennessError> {
        let lower = |s: BTreeSet<String>| s.into_iter().map(|w| w.to_lowercase()).collect();
        let definite_determiners: BTreeSet<String> = lower(definite_determiners);
        let indefinite_determiners: BTreeSet<String> = lower(indefinite_determiners);
        let overlap: Vec<&str> = definite_determiners
            .intersection(&indefinite_determiners)
            .map(String::as_str)
            .collect();
        if !overlap.is_empty() {
            return Err(GivennessError::OverlappingDeterminers(overlap.join(", ")));
        }
        Ok(ClassifierConfig {
            pronoun_pos_tags,
            proper_pos_tags,
            definite_determiners,
            indefinite_determiners,
            punctuation: PunctuationSet::default(),
        })
    }

    pub fn with_punctuation(mut self, punctuation: PunctuationSet) -> Self {
        self.punctuation = punctuation;
        self
    }

    /// Parse `key = value value ...` lines over the defaults; `#` comments.
    pub fn parse(text: &str) -> Result<Self, GivennessError> {
        let dflt = ClassifierConfig::default();
        let mut sets = [
            dflt.pronoun_pos_tags,
            dflt.proper_pos_tags,
            dflt.definite_determiners,
            dflt.indefinite_determiners,
        ];
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| GivennessError::Syntax {
                line: n + 1,
                message: "expected `key = values`".to_string(),
            })?;
            let key = key.trim();
            let slot =
                KEYS.iter()
                    .position(|k| *k == key)
                    .ok_or_else(|| GivennessError::Syntax {
                        line: n + 1,
                        message: format!("unknown key {key:?}"),
                    })?;
            sets[slot] = value.split_whitespace().map(str::to_string).collect();
        }
        let [pronouns, propers, definites, indefinites] = sets;
        ClassifierConfig::new(pronouns, propers, definites, indefinites)
    }

    pub fn pronoun_pos_tags(&self) -> &BTreeSet<String> {
        &self.pronoun_pos_tags
    }

    pub fn proper_pos_tags(&self) -> &BTreeSet<String> {
        &self.proper_pos_tags
    }

    pub fn definite_determiners(&self) -> &BTreeSet<String> {
        &self.definite_determiners
    }

    pub fn indefinite_determiners(&self) -> &BTreeSet<String> {
        &self.indefinite_determiners
    }
}

impl fmt::Display for ClassifierConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sets = [
            &self.pronoun_pos_tags,
            &self.proper_pos_tags,
            &self.definite_determiners,
            &self.indefinite_determiners,
        ];
        for (key, values) in KEYS.iter().zip(sets) {
            let values: Vec<&str> = values.iter().map(String::as_str).collect();
            writeln!(f, "{key} = {}", values.join(" "))?;
        }
        Ok(())
    }
}

fn is_genitive(node: &Tree) -> bool {
    node.category() == Some("NP")
        && node
            .leaf_nodes()
            .into_iter()
            .rev()
            .find(|l| !is_empty_leaf(l))
            .is_some_and(|l| l.pos() == Some("POS"))
}

/// Rightmost top-level word of the NP, descending into the first NP child
/// when the NP has no word of its own (`(NP (NP ..) (PP ..))`).
fn head_leaf<'a>(np: &'a Tree, punct: &PunctuationSet) -> Option<&'a Tree> {
    let own = np
        .children()
        .iter()
        .rev()
        .find(|c| c.is_leaf() && !is_empty_leaf(c) && !punct.is_punctuation(c));
    own.or_else(|| {
        np.children()
            .iter()
            .find(|c| c.category() == Some("NP"))
            .and_then(|c| head_leaf(c, punct))
    })
}

/// Classify one NP node.
pub fn classify_np(
    np: &Tree,
    config: &ClassifierConfig,
) -> Result<GivennessCategory, GivennessError> {
    match np.category() {
        Some("NP") => {}
        Some(other) => return Err(GivennessError::NotAnNP(other.to_string())),
        None => {
            return Err(GivennessError::NotAnNP(
                np.pos().unwrap_or_default().to_string(),
            ))
        }
    }
    let overt: Vec<&Tree> = np
        .leaf_nodes()
        .into_iter()
        .filter(|l| !is_empty_leaf(l))
        .collect();

    let Some(first) = overt.first() else {
        return Ok(GivennessCategory::EmptyCategory);
    };
    let pos_in =
        |leaf: &Tree, tags: &BTreeSet<String>| leaf.pos().is_some_and(|p| tags.contains(p));

    if overt.len() == 1 && pos_in(first, &config.pronoun_pos_tags) {
        return Ok(GivennessCategory::Pronoun);
    }
    if head_leaf(np, &config.punctuation).is_some_and(|h| pos_in(h, &config.proper_pos_tags)) {
        return Ok(GivennessCategory::ProperName);
    }

    let word = first.token().unwrap_or_default().to_lowercase();
    let initial_genitive = np
        .children()
        .iter()
        .find(|c| !is_empty_leaf(c))
        .is_some_and(is_genitive);
    if config.definite_determiners.contains(&word)
        || first.pos() == Some("PRP$")
        || initial_genitive
    {
        return Ok(GivennessCategory::Definite);
    }
    if config.indefinite_determiners.contains(&word) || first.pos() == Some("CD") {
        return Ok(GivennessCategory::Indefinite);
    }
    Ok(GivennessCategory::NotClassified)
}

/// Classify each occurrence of one sentence, preserving order.
pub fn classify_all(
    idx: &IndexedTree<'_>,
    occurrences: Vec<NpOccurrence>,
    config: &ClassifierConfig,
) -> Result<Vec<(NpOccurrence, GivennessCategory)>, GivennessError> {
    occurrences
        .into_iter()
        .map(|occ| {
            let cat = classify_np(idx.tree(occ.node), config)?;
            Ok((occ, cat))
        })
        .collect()
}

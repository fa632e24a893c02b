//! Structural queries over parsed sentences.
//!
//! Grammatical position is purely configurational: an NP immediately
//! dominated by S with a VP somewhere to its right among its siblings is a
//! subject; an NP immediately dominated by VP, or by S without a VP to its
//! right, is a non-subject. Function tags such as `-SBJ` are ignored here and
//! only consulted by [`SubjectTagCheck`].

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::index::{IndexedTree, NodeId};
use crate::treebank::{is_empty_category, is_empty_leaf, PunctuationSet, SourceSpan, Tree};

pub const VERB_TAGS: [&str; 6] = ["VB", "VBD", "VBG", "VBN", "VBP", "VBZ"];

pub fn is_verb_tag(pos: &str) -> bool {
    VERB_TAGS.contains(&pos)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("no surface forms configured for verb {0:?}")]
    EmptyInflectionSet(String),
    #[error("line {line}: {message}")]
    Lexicon { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GrammaticalPosition {
    Subject,
    NonSubject,
}

impl GrammaticalPosition {
    pub const ALL: [GrammaticalPosition; 2] = [
        GrammaticalPosition::Subject,
        GrammaticalPosition::NonSubject,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            GrammaticalPosition::Subject => "subject",
            GrammaticalPosition::NonSubject => "non_subject",
        }
    }
}

impl fmt::Display for GrammaticalPosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Kind of clause an NP's governing S belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClauseContext {
    Matrix,
    /// complement clause with overt `that`
    EmbeddedTC,
    /// complement clause with zero complementizer
    EmbeddedRC,
    EmbeddedOther,
}

impl ClauseContext {
    pub const ALL: [ClauseContext; 4] = [
        ClauseContext::Matrix,
        ClauseContext::EmbeddedTC,
        ClauseContext::EmbeddedRC,
        ClauseContext::EmbeddedOther,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            ClauseContext::Matrix => "matrix",
            ClauseContext::EmbeddedTC => "tc",
            ClauseContext::EmbeddedRC => "rc",
            ClauseContext::EmbeddedOther => "other",
        }
    }
}

impl fmt::Display for ClauseContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClauseContext {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "matrix" => Ok(ClauseContext::Matrix),
            "tc" => Ok(ClauseContext::EmbeddedTC),
            "rc" => Ok(ClauseContext::EmbeddedRC),
            "other" => Ok(ClauseContext::EmbeddedOther),
            _ => Err(format!("unknown clause context {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NpOccurrence {
    pub node: NodeId,
    pub position: GrammaticalPosition,
    pub context: ClauseContext,
    pub span: SourceSpan,
}

/// Position of the NP `id`, or `None` if it matches neither definition.
pub fn grammatical_position(idx: &IndexedTree<'_>, id: NodeId) -> Option<GrammaticalPosition> {
    if !idx.has_category(id, "NP") {
        return None;
    }
    let parent = idx.parent(id)?;
    match idx.category(parent) {
        Some("VP") => Some(GrammaticalPosition::NonSubject),
        Some("S") => {
            let vp_follows = idx
                .following_siblings(id)
                .iter()
                .any(|&s| idx.has_category(s, "VP"));
            Some(if vp_follows {
                GrammaticalPosition::Subject
            } else {
                GrammaticalPosition::NonSubject
            })
        }
        _ => None,
    }
}

/// Every subject or non-subject NP in the sentence, in pre-order.
pub fn extract_np_occurrences(idx: &IndexedTree<'_>) -> Vec<NpOccurrence> {
    idx.node_ids()
        .filter_map(|id| {
            let position = grammatical_position(idx, id)?;
            Some(NpOccurrence {
                node: id,
                position,
                context: clause_context_of(idx, id),
                span: idx.span(id),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Complementizer {
    That,
    Null,
    Other,
}

/// Complementizer introducing `clause` inside `sbar`: the sibling right before it.
fn complementizer(idx: &IndexedTree<'_>, clause: NodeId) -> Complementizer {
    match idx.preceding_siblings(clause).last() {
        None => Complementizer::Null,
        Some(&c) => {
            let t = idx.tree(c);
            if is_empty_leaf(t) {
                Complementizer::Null
            } else if t.pos() == Some("IN")
                && t.token().is_some_and(|w| w.eq_ignore_ascii_case("that"))
            {
                Complementizer::That
            } else {
                Complementizer::Other
            }
        }
    }
}

fn is_clause_boundary(idx: &IndexedTree<'_>, id: NodeId) -> bool {
    matches!(idx.category(id), Some("S") | Some("SBAR"))
}

/// Clause context of the clause governing `np`: its nearest S ancestor.
pub fn clause_context_of(idx: &IndexedTree<'_>, np: NodeId) -> ClauseContext {
    let governing = idx.ancestors(np).find(|&a| idx.has_category(a, "S"));
    let Some(clause) = governing else {
        return if idx.ancestors(np).any(|a| is_clause_boundary(idx, a)) {
            ClauseContext::EmbeddedOther
        } else {
            ClauseContext::Matrix
        };
    };
    if !idx.ancestors(clause).any(|a| is_clause_boundary(idx, a)) {
        return ClauseContext::Matrix;
    }
    let Some(parent) = idx.parent(clause) else {
        return ClauseContext::Matrix;
    };
    match idx.category(parent) {
        Some("VP") => ClauseContext::EmbeddedRC,
        Some("SBAR") => {
            let under_vp = idx
                .parent(parent)
                .is_some_and(|g| idx.has_category(g, "VP"));
            if !under_vp {
                return ClauseContext::EmbeddedOther;
            }
            match complementizer(idx, clause) {
                Complementizer::That => ClauseContext::EmbeddedTC,
                Complementizer::Null => ClauseContext::EmbeddedRC,
                Complementizer::Other => ClauseContext::EmbeddedOther,
            }
        }
        _ => ClauseContext::EmbeddedOther,
    }
}

/// Function-tag cross-check of the positional subject definition.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubjectTagCheck {
    pub subjects: u64,
    pub subjects_without_sbj_tag: u64,
    pub non_subjects: u64,
    pub non_subjects_with_sbj_tag: u64,
}

impl SubjectTagCheck {
    pub fn observe(&mut self, idx: &IndexedTree<'_>, occurrences: &[NpOccurrence]) {
        for occ in occurrences {
            let tagged = idx.tree(occ.node).label().is_some_and(|l| l.has_tag("SBJ"));
            match occ.position {
                GrammaticalPosition::Subject => {
                    self.subjects += 1;
                    self.subjects_without_sbj_tag += u64::from(!tagged);
                }
                GrammaticalPosition::NonSubject => {
                    self.non_subjects += 1;
                    self.non_subjects_with_sbj_tag += u64::from(tagged);
                }
            }
        }
    }

    pub fn merge(mut self, other: &SubjectTagCheck) -> SubjectTagCheck {
        self.subjects += other.subjects;
        self.subjects_without_sbj_tag += other.subjects_without_sbj_tag;
        self.non_subjects += other.non_subjects;
        self.non_subjects_with_sbj_tag += other.non_subjects_with_sbj_tag;
        self
    }

    pub fn disagreements(&self) -> u64 {
        self.subjects_without_sbj_tag + self.non_subjects_with_sbj_tag
    }

    /// Fraction of classified NPs where the tag and the position disagree.
    pub fn disagreement_rate(&self) -> f64 {
        let total = self.subjects + self.non_subjects;
        if total == 0 {
            0.0
        } else {
            self.disagreements() as f64 / total as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinalVerb {
    pub leaf_index: usize,
    pub token: String,
    pub pos: String,
}

/// A VP ending in a verb that is immediately followed, in the surface
/// string, by the first word of an NP.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LateClosureMatch {
    pub vp_node: NodeId,
    pub final_verb: FinalVerb,
    pub critical_np: NodeId,
    /// from the start of the VP to the end of the critical NP
    pub span: SourceSpan,
}

/// Last overt, non-punctuation leaf under `id`.
fn final_word(idx: &IndexedTree<'_>, id: NodeId, punct: &PunctuationSet) -> Option<usize> {
    idx.overt_leaves(id)
        .rev()
        .find(|&i| !punct.is_punctuation(idx.leaf_tree(i)))
}

fn first_overt_leaf(idx: &IndexedTree<'_>, id: NodeId) -> Option<usize> {
    idx.overt_leaves(id).next()
}

/// Late-closure ambiguity candidates.
///
/// When nested VPs share the same final verb (`had worked`), only the
/// outermost VP is reported.
pub fn find_late_closure_configs(
    idx: &IndexedTree<'_>,
    punct: &PunctuationSet,
) -> Vec<LateClosureMatch> {
    let mut seen_verbs = BTreeSet::new();
    let mut matches = Vec::new();
    for vp in idx.node_ids().filter(|&id| idx.has_category(id, "VP")) {
        let Some(verb_leaf) = final_word(idx, vp, punct) else {
            continue;
        };
        let verb = idx.leaf_tree(verb_leaf);
        if !verb.pos().is_some_and(is_verb_tag) || !seen_verbs.insert(verb_leaf) {
            continue;
        }
        let Some(next) = idx.next_overt_leaf(verb_leaf + 1) else {
            continue;
        };
        if punct.is_punctuation(idx.leaf_tree(next)) {
            continue;
        }
        // maximal NP starting at `next`: ancestors are visited nearest first
        let critical = idx
            .ancestors(idx.leaf(next))
            .take_while(|&a| first_overt_leaf(idx, a) == Some(next))
            .filter(|&a| idx.has_category(a, "NP"))
            .last();
        let Some(np) = critical else {
            continue;
        };
        let mut span = idx.span(vp);
        span.leaf_range.end = idx.leaf_range(np).end;
        matches.push(LateClosureMatch {
            vp_node: vp,
            final_verb: FinalVerb {
                leaf_index: verb_leaf,
                token: verb.token().unwrap_or_default().to_string(),
                pos: verb.pos().unwrap_or_default().to_string(),
            },
            critical_np: np,
            span,
        });
    }
    matches
}

/// Independent leaf-level re-check of a late-closure match.
pub fn verify_late_closure(
    idx: &IndexedTree<'_>,
    m: &LateClosureMatch,
    punct: &PunctuationSet,
) -> bool {
    let v = m.final_verb.leaf_index;
    let vp_range = idx.leaf_range(m.vp_node);
    let np_range = idx.leaf_range(m.critical_np);
    let verb = idx.leaf_tree(v);
    let verb_is_final = vp_range.contains(&v)
        && (v + 1..vp_range.end).all(|i| {
            let l = idx.leaf_tree(i);
            is_empty_leaf(l) || punct.is_punctuation(l)
        });
    let adjacent = (v + 1..np_range.start).all(|i| idx.is_empty_leaf_at(i))
        && idx.next_overt_leaf(np_range.start) == idx.next_overt_leaf(v + 1);
    let np_first = idx.next_overt_leaf(v + 1);
    verb.pos().is_some_and(is_verb_tag)
        && verb_is_final
        && idx.has_category(m.critical_np, "NP")
        && adjacent
        && np_first.is_some_and(|i| !punct.is_punctuation(idx.leaf_tree(i)))
}

/// Settings for the fronted-adverbial survey.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdverbialConfig {
    pub categories: BTreeSet<String>,
    pub punctuation: PunctuationSet,
}

impl Default for AdverbialConfig {
    fn default() -> Self {
        AdverbialConfig {
            categories: ["PP", "SBAR", "ADVP", "S"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            punctuation: PunctuationSet::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdverbialRecord {
    pub category: String,
    pub comma_delimited: bool,
    pub span: SourceSpan,
}

/// Adjunct children of the root S that precede its subject NP.
///
/// Stacked adverbials are reported one record each. Topicalized
/// constituents (`-TPC`) and all-empty constituents are skipped.
pub fn survey_fronted_adverbials(
    idx: &IndexedTree<'_>,
    config: &AdverbialConfig,
) -> Vec<AdverbialRecord> {
    let root = idx.root();
    if !idx.has_category(root, "S") {
        return Vec::new();
    }
    let subject = idx
        .children(root)
        .iter()
        .position(|&c| grammatical_position(idx, c) == Some(GrammaticalPosition::Subject));
    let Some(subject) = subject else {
        return Vec::new();
    };
    idx.children(root)[..subject]
        .iter()
        .copied()
        .filter(|&c| {
            let tree = idx.tree(c);
            let label = tree.label();
            label.is_some_and(|l| config.categories.contains(l.category()) && !l.has_tag("TPC"))
                && !is_empty_category(tree)
        })
        .map(|c| {
            let range = idx.leaf_range(c);
            let comma_delimited = idx
                .next_overt_leaf(range.end)
                .is_some_and(|i| idx.leaf_tree(i).pos() == Some(","));
            AdverbialRecord {
                category: idx.category(c).unwrap_or_default().to_string(),
                comma_delimited,
                span: idx.span(c),
            }
        })
        .collect()
}

/// Counts of fronted adverbials and how many lack a delimiting comma.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdverbialTally {
    pub total: u64,
    pub not_comma_delimited: u64,
}

impl AdverbialTally {
    pub fn add(&mut self, comma_delimited: bool) {
        self.total += 1;
        self.not_comma_delimited += u64::from(!comma_delimited);
    }

    pub fn merge(mut self, other: &AdverbialTally) -> AdverbialTally {
        self.total += other.total;
        self.not_comma_delimited += other.not_comma_delimited;
        self
    }
}

/// Survey totals split into ALL / SBAR / PP / other.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdverbialSummary {
    pub all: AdverbialTally,
    pub sbar: AdverbialTally,
    pub pp: AdverbialTally,
    pub other: AdverbialTally,
}

impl AdverbialSummary {
    pub fn add(&mut self, record: &AdverbialRecord) {
        self.all.add(record.comma_delimited);
        match record.category.as_str() {
            "SBAR" => self.sbar.add(record.comma_delimited),
            "PP" => self.pp.add(record.comma_delimited),
            _ => self.other.add(record.comma_delimited),
        }
    }

    pub fn merge(self, other: &AdverbialSummary) -> AdverbialSummary {
        AdverbialSummary {
            all: self.all.merge(&other.all),
            sbar: self.sbar.merge(&other.sbar),
            pp: self.pp.merge(&other.pp),
            other: self.other.merge(&other.other),
        }
    }

    pub fn rows(&self) -> [(&'static str, AdverbialTally); 4] {
        [
            ("ALL", self.all),
            ("SBAR", self.sbar),
            ("PP", self.pp),
            ("other", self.other),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerbFrame {
    NpComplement,
    ThatClause,
    ReducedClause,
    Intransitive,
}

impl VerbFrame {
    pub const ALL: [VerbFrame; 4] = [
        VerbFrame::NpComplement,
        VerbFrame::ThatClause,
        VerbFrame::ReducedClause,
        VerbFrame::Intransitive,
    ];

    pub fn name(self) -> &'static str {
        match self {
            VerbFrame::NpComplement => "NP",
            VerbFrame::ThatClause => "TC",
            VerbFrame::ReducedClause => "RC",
            VerbFrame::Intransitive => "intransitive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerbFrameProfile {
    pub lemma: String,
    pub counts: BTreeMap<VerbFrame, u64>,
}

impl VerbFrameProfile {
    pub fn new(lemma: &str) -> Self {
        VerbFrameProfile {
            lemma: lemma.to_string(),
            counts: VerbFrame::ALL.iter().map(|&f| (f, 0)).collect(),
        }
    }

    pub fn count(&self, frame: VerbFrame) -> u64 {
        self.counts.get(&frame).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Add the frames of every matching verb in one sentence.
    pub fn observe(&mut self, idx: &IndexedTree<'_>, inflections: &BTreeSet<String>) {
        for i in 0..idx.num_leaves() {
            let leaf = idx.leaf_tree(i);
            let (Some(pos), Some(token)) = (leaf.pos(), leaf.token()) else {
                continue;
            };
            if is_verb_tag(pos) && inflections.contains(&token.to_lowercase()) {
                let frame = classify_frame(idx, idx.leaf(i));
                *self.counts.entry(frame).or_insert(0) += 1;
            }
        }
    }

    pub fn merge(mut self, other: &VerbFrameProfile) -> VerbFrameProfile {
        for (frame, n) in &other.counts {
            *self.counts.entry(*frame).or_insert(0) += n;
        }
        self
    }
}

/// Frame of the verb leaf `verb` from the siblings that follow it.
fn classify_frame(idx: &IndexedTree<'_>, verb: NodeId) -> VerbFrame {
    let following = idx.following_siblings(verb);
    let has = |pred: &dyn Fn(NodeId) -> bool| following.iter().any(|&s| pred(s));

    if has(&|s| idx.has_category(s, "NP") && !is_empty_category(idx.tree(s))) {
        return VerbFrame::NpComplement;
    }
    let sbar_clause = |s: NodeId| {
        idx.children(s)
            .iter()
            .copied()
            .find(|&c| idx.has_category(c, "S"))
    };
    let sbar_with = |s: NodeId, kind: Complementizer| {
        idx.has_category(s, "SBAR")
            && sbar_clause(s).is_some_and(|c| complementizer(idx, c) == kind)
    };
    if has(&|s| sbar_with(s, Complementizer::That)) {
        VerbFrame::ThatClause
    } else if has(&|s| idx.has_category(s, "S") || sbar_with(s, Complementizer::Null)) {
        VerbFrame::ReducedClause
    } else {
        VerbFrame::Intransitive
    }
}

/// Frame counts for one verb over a sequence of sentences.
pub fn profile_verb_frames<'t>(
    trees: impl IntoIterator<Item = &'t Tree>,
    lemma: &str,
    inflections: &BTreeSet<String>,
) -> Result<VerbFrameProfile, QueryError> {
    let forms = normalize_forms(lemma, inflections)?;
    let mut profile = VerbFrameProfile::new(lemma);
    for tree in trees {
        profile.observe(&IndexedTree::new(tree), &forms);
    }
    Ok(profile)
}

/// Lower-cased surface forms; errors if there are none.
pub fn normalize_forms(
    lemma: &str,
    inflections: &BTreeSet<String>,
) -> Result<BTreeSet<String>, QueryError> {
    if inflections.is_empty() {
        return Err(QueryError::EmptyInflectionSet(lemma.to_string()));
    }
    Ok(inflections.iter().map(|f| f.to_lowercase()).collect())
}

/// Lemma to surface-form table used to match verbs without a lemmatizer.
///
/// Text format, one entry per line: `lemma: form form ...`; `#` starts a
/// comment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerbLexicon {
    entries: BTreeMap<String, BTreeSet<String>>,
}

/// The lexicon shipped in `config/verbs.txt`.
pub const DEFAULT_VERB_LEXICON: &str = include_str!("../config/verbs.txt");

impl Default for VerbLexicon {
    fn default() -> Self {
        VerbLexicon::parse(DEFAULT_VERB_LEXICON).expect("bundled lexicon parses")
    }
}

impl VerbLexicon {
    pub fn parse(text: &str) -> Result<VerbLexicon, QueryError> {
        let mut entries: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (lemma, forms) = line.split_once(':').ok_or_else(|| QueryError::Lexicon {
                line: n + 1,
                message: "expected `lemma: form ...`".to_string(),
            })?;
            let lemma = lemma.trim().to_lowercase();
            if lemma.is_empty() || lemma.contains(char::is_whitespace) {
                return Err(QueryError::Lexicon {
                    line: n + 1,
                    message: format!("bad lemma {lemma:?}"),
                });
            }
            entries
                .entry(lemma)
                .or_default()
                .extend(forms.split_whitespace().map(str::to_lowercase));
        }
        Ok(VerbLexicon { entries })
    }

    pub fn inflections(&self, lemma: &str) -> Option<&BTreeSet<String>> {
        self.entries.get(&lemma.to_lowercase())
    }

    pub fn lemmas(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}

impl fmt::Display for VerbLexicon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (lemma, forms) in &self.entries {
            let forms: Vec<&str> = forms.iter().map(String::as_str).collect();
            writeln!(f, "{lemma}: {}", forms.join(" "))?;
        }
        Ok(())
    }
}

/// Occurrences keyed by node, for lookups in tests and reports.
pub fn occurrences_by_node(occs: &[NpOccurrence]) -> HashMap<NodeId, &NpOccurrence> {
    occs.iter().map(|o| (o.node, o)).collect()
}

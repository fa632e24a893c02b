//! Corpus ingestion and Table-1-style aggregation.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use globset::{Glob, GlobMatcher};
use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use walkdir::WalkDir;

use crate::givenness::{classify_np, ClassifierConfig, GivennessCategory};
use crate::index::{IndexedTree, SentenceId};
use crate::query::{extract_np_occurrences, ClauseContext, GrammaticalPosition};
use crate::treebank::{parse_trees_with, Dialect, ParseError, Tree};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("corpus root {0} does not exist")]
    RootNotFound(PathBuf),
    #[error("invalid file pattern {pattern:?}: {message}")]
    BadGlob { pattern: String, message: String },
    #[error("cannot list {path}: {source}")]
    Walk {
        path: PathBuf,
        #[source]
        source: walkdir::Error,
    },
    #[error("expected {expected} counts, got {got}")]
    BadCountVector { expected: usize, got: usize },
}

/// A directory of treebank files.
#[derive(Debug, Clone)]
pub struct CorpusSource {
    pub root_path: PathBuf,
    /// matched against paths relative to `root_path`
    pub include_glob: String,
    pub dialect: Dialect,
}

impl CorpusSource {
    pub fn new(root_path: impl Into<PathBuf>) -> Self {
        CorpusSource {
            root_path: root_path.into(),
            include_glob: "**".to_string(),
            dialect: Dialect::Auto,
        }
    }

    pub fn with_glob(mut self, pattern: &str) -> Self {
        self.include_glob = pattern.to_string();
        self
    }

    pub fn with_dialect(mut self, dialect: Dialect) -> Self {
        self.dialect = dialect;
        self
    }

    fn matcher(&self) -> Result<GlobMatcher, CorpusError> {
        Glob::new(&self.include_glob)
            .map(|g| g.compile_matcher())
            .map_err(|e| CorpusError::BadGlob {
                pattern: self.include_glob.clone(),
                message: e.to_string(),
            })
    }

    /// Matching files, sorted lexicographically by path.
    pub fn files(&self) -> Result<Vec<PathBuf>, CorpusError> {
        if !self.root_path.exists() {
            return Err(CorpusError::RootNotFound(self.root_path.clone()));
        }
        let matcher = self.matcher()?;
        let mut files = Vec::new();
        for entry in WalkDir::new(&self.root_path).sort_by_file_name() {
            let entry = entry.map_err(|source| CorpusError::Walk {
                path: self.root_path.clone(),
                source,
            })?;
            if !entry.file_type().is_file() {
                continue;
            }
            let rel = entry
                .path()
                .strip_prefix(&self.root_path)
                .unwrap_or(entry.path());
            if matcher.is_match(rel) {
                files.push(entry.into_path());
            }
        }
        files.sort();
        Ok(files)
    }

    pub fn file_id(&self, path: &Path) -> String {
        let rel = path.strip_prefix(&self.root_path).unwrap_or(path);
        rel.components()
            .map(|c| c.as_os_str().to_string_lossy())
            .collect::<Vec<_>>()
            .join("/")
    }

    /// Read and parse one file.
    pub fn parse_file(&self, path: &Path) -> Result<Vec<Tree>, FileError> {
        let text = fs::read_to_string(path).map_err(|e| FileError::Io(e.to_string()))?;
        parse_trees_with(&text, self.dialect).map_err(FileError::Parse)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FileError {
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Why a file was skipped.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub file_id: String,
    pub byte_offset: Option<usize>,
    pub message: String,
}

impl Diagnostic {
    fn new(file_id: String, err: &FileError) -> Self {
        let byte_offset = match err {
            FileError::Parse(p) => Some(p.offset()),
            FileError::Io(_) => None,
        };
        Diagnostic {
            file_id,
            byte_offset,
            message: err.to_string(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestStats {
    pub files_processed: u64,
    pub files_skipped: u64,
    pub sentences: u64,
    pub diagnostics: Vec<Diagnostic>,
}

impl IngestStats {
    fn record(&mut self, file_id: &str, result: Result<usize, &FileError>) {
        match result {
            Ok(sentences) => {
                self.files_processed += 1;
                self.sentences += sentences as u64;
            }
            Err(e) => {
                let diag = Diagnostic::new(file_id.to_string(), e);
                warn!(
                    "skipping {} (byte {:?}): {}",
                    diag.file_id, diag.byte_offset, diag.message
                );
                self.files_skipped += 1;
                self.diagnostics.push(diag);
            }
        }
    }

    /// True when there were files and every one of them failed.
    pub fn all_failed(&self) -> bool {
        self.files_skipped > 0 && self.files_processed == 0
    }
}

/// Streaming sentence iterator; holds one file's trees at a time.
pub struct Ingest {
    source: CorpusSource,
    files: std::vec::IntoIter<PathBuf>,
    current: std::vec::IntoIter<Tree>,
    current_id: Arc<str>,
    next_index: usize,
    stats: IngestStats,
}

impl Ingest {
    pub fn stats(&self) -> &IngestStats {
        &self.stats
    }

    pub fn into_stats(self) -> IngestStats {
        self.stats
    }
}

impl Iterator for Ingest {
    type Item = (SentenceId, Tree);

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            if let Some(tree) = self.current.next() {
                let id = SentenceId::new(self.current_id.clone(), self.next_index);
                self.next_index += 1;
                return Some((id, tree));
            }
            let path = self.files.next()?;
            let file_id = self.source.file_id(&path);
            let result = self.source.parse_file(&path);
            self.stats.record(&file_id, result.as_ref().map(Vec::len));
            if let Ok(trees) = result {
                self.current = trees.into_iter();
                self.current_id = file_id.into();
                self.next_index = 0;
            }
        }
    }
}

/// Sentences of every matching file in path order; bad files are skipped.
pub fn ingest(source: &CorpusSource) -> Result<Ingest, CorpusError> {
    let files = source.files()?;
    Ok(Ingest {
        source: source.clone(),
        files: files.into_iter(),
        current: Vec::new().into_iter(),
        current_id: Arc::from(""),
        next_index: 0,
        stats: IngestStats::default(),
    })
}

/// Per-file parallel map-reduce over a corpus.
///
/// `observe` folds one sentence into a per-file accumulator; per-file
/// results are merged in path order, so the output does not depend on
/// scheduling.
pub fn map_reduce<T, I, O, M>(
    source: &CorpusSource,
    init: I,
    observe: O,
    merge: M,
) -> Result<(T, IngestStats), CorpusError>
where
    T: Send,
    I: Fn() -> T + Sync,
    O: Fn(&mut T, &IndexedTree<'_>) + Sync,
    M: Fn(T, T) -> T,
{
    let files = source.files()?;
    let partials: Vec<(String, Result<usize, FileError>, Option<T>)> = files
        .par_iter()
        .map(|path| {
            let file_id = source.file_id(path);
            let result = source.parse_file(path);
            let acc = result.as_ref().ok().map(|trees| {
                let mut acc = init();
                let shared: Arc<str> = Arc::from(file_id.as_str());
                for (i, tree) in trees.iter().enumerate() {
                    let idx = IndexedTree::with_sentence(tree, SentenceId::new(shared.clone(), i));
                    observe(&mut acc, &idx);
                }
                acc
            });
            (file_id, result.map(|trees| trees.len()), acc)
        })
        .collect();

    let mut stats = IngestStats::default();
    let mut total = init();
    for (file_id, result, acc) in partials {
        stats.record(&file_id, result.as_ref().copied());
        if let Some(acc) = acc {
            total = merge(total, acc);
        }
    }
    Ok((total, stats))
}

const N_CATEGORIES: usize = GivennessCategory::ALL.len();
const N_POSITIONS: usize = GrammaticalPosition::ALL.len();
const N_CONTEXTS: usize = ClauseContext::ALL.len();

/// Counts indexed by givenness category, position and clause context.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AggregateCounts {
    cells: [[[u64; N_CONTEXTS]; N_POSITIONS]; N_CATEGORIES],
    pub files_processed: u64,
    pub sentences_processed: u64,
    pub files_skipped: u64,
}

/// Column order of [`AggregateCounts::from_table1_layout`] within a row.
pub const TABLE1_LAYOUT: [(GrammaticalPosition, ClauseContext); 6] = [
    (GrammaticalPosition::Subject, ClauseContext::EmbeddedTC),
    (GrammaticalPosition::Subject, ClauseContext::EmbeddedRC),
    (GrammaticalPosition::Subject, ClauseContext::Matrix),
    (GrammaticalPosition::NonSubject, ClauseContext::EmbeddedTC),
    (GrammaticalPosition::NonSubject, ClauseContext::EmbeddedRC),
    (GrammaticalPosition::NonSubject, ClauseContext::Matrix),
];

impl AggregateCounts {
    pub fn get(&self, cat: GivennessCategory, pos: GrammaticalPosition, ctx: ClauseContext) -> u64 {
        self.cells[cat.index()][pos.index()][ctx.index()]
    }

    pub fn add(
        &mut self,
        cat: GivennessCategory,
        pos: GrammaticalPosition,
        ctx: ClauseContext,
        n: u64,
    ) {
        self.cells[cat.index()][pos.index()][ctx.index()] += n;
    }

    /// Sum over all cells.
    pub fn total(&self) -> u64 {
        self.cells.iter().flatten().flatten().sum()
    }

    /// Same cell counts, ignoring file and sentence bookkeeping.
    pub fn cells_eq(&self, other: &AggregateCounts) -> bool {
        self.cells == other.cells
    }

    /// Load counts given as six rows (categories in canonical order) of
    /// subject TC, RC, matrix, then non-subject TC, RC, matrix.
    pub fn from_table1_layout(values: &[u64]) -> Result<Self, CorpusError> {
        let expected = N_CATEGORIES * TABLE1_LAYOUT.len();
        if values.len() != expected {
            return Err(CorpusError::BadCountVector {
                expected,
                got: values.len(),
            });
        }
        let mut agg = AggregateCounts::default();
        for (row, cat) in values
            .chunks(TABLE1_LAYOUT.len())
            .zip(GivennessCategory::ALL)
        {
            for (&n, &(pos, ctx)) in row.iter().zip(&TABLE1_LAYOUT) {
                agg.add(cat, pos, ctx, n);
            }
        }
        Ok(agg)
    }

    /// Classify and count every NP occurrence of one sentence.
    pub fn observe(&mut self, idx: &IndexedTree<'_>, config: &ClassifierConfig) {
        self.sentences_processed += 1;
        for occ in extract_np_occurrences(idx) {
            match classify_np(idx.tree(occ.node), config) {
                Ok(cat) => self.add(cat, occ.position, occ.context, 1),
                Err(e) => warn!("{}: {e}", occ.span),
            }
        }
    }

    /// Cell-wise and counter-wise sum.
    pub fn merge(mut self, other: &AggregateCounts) -> AggregateCounts {
        for (mine, theirs) in self
            .cells
            .iter_mut()
            .flatten()
            .flatten()
            .zip(other.cells.iter().flatten().flatten())
        {
            *mine += theirs;
        }
        self.files_processed += other.files_processed;
        self.sentences_processed += other.sentences_processed;
        self.files_skipped += other.files_skipped;
        self
    }
}

/// Aggregate a sentence stream.
pub fn aggregate<I>(trees: I, config: &ClassifierConfig) -> AggregateCounts
where
    I: IntoIterator<Item = (SentenceId, Tree)>,
{
    let mut agg = AggregateCounts::default();
    for (id, tree) in trees {
        agg.observe(&IndexedTree::with_sentence(&tree, id), config);
    }
    agg
}

/// Aggregate a whole corpus, files in parallel.
pub fn aggregate_source(
    source: &CorpusSource,
    config: &ClassifierConfig,
) -> Result<(AggregateCounts, IngestStats), CorpusError> {
    let (mut agg, stats) = map_reduce(
        source,
        AggregateCounts::default,
        |acc, idx| acc.observe(idx, config),
        |x, y| x.merge(&y),
    )?;
    agg.files_processed = stats.files_processed;
    agg.files_skipped = stats.files_skipped;
    Ok((agg, stats))
}

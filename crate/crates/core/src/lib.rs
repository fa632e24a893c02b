//! Corpus toolkit for bracketed constituency treebanks: structural NP
//! queries, form-based givenness classification, late-closure and
//! fronted-adverbial surveys, and 2x2 chi-square statistics.

pub mod cli;
pub mod corpus;
pub mod givenness;
pub mod index;
pub mod query;
pub mod stats;
pub mod treebank;

pub use corpus::{aggregate, aggregate_source, ingest, AggregateCounts, CorpusError, CorpusSource};
pub use givenness::{classify_all, classify_np, ClassifierConfig, GivennessCategory};
pub use index::{IndexedTree, NodeId, SentenceId};
pub use query::{
    clause_context_of, extract_np_occurrences, find_late_closure_configs, profile_verb_frames,
    survey_fronted_adverbials, ClauseContext, GrammaticalPosition, NpOccurrence,
};
pub use stats::{chi_square_2x2, ratio_report, ChiSquareResult, ContingencyTable2x2};
pub use treebank::{parse_trees, serialize_tree, NodeLabel, Tree};

//! The `npstat` command line.
//!
//! Every command renders in three formats: aligned text, tab-separated
//! values, and line-delimited JSON records (`--format records`). Records
//! carry a `record` field naming their kind; the remaining fields appear in
//! the order declared on [`Record`].
//!
//! Exit codes: 0 success, 2 missing input, 3 degenerate statistics input,
//! 4 configuration error.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{
    aggregate_source, map_reduce, AggregateCounts, CorpusError, CorpusSource, IngestStats,
};
use crate::givenness::{classify_np, ClassifierConfig, GivennessCategory};
use crate::query::{
    extract_np_occurrences, find_late_closure_configs, normalize_forms, survey_fronted_adverbials,
    AdverbialConfig, AdverbialSummary, ClauseContext, GrammaticalPosition, SubjectTagCheck,
    VerbFrame, VerbFrameProfile, VerbLexicon,
};
use crate::stats::{
    build_pronoun_indefinite_table, chi_square_2x2, ratio_report, ContingencyTable2x2, Percentage,
    SignificanceBand, StatsError,
};
use crate::treebank::{parse_trees, serialize_tree, Dialect, PunctuationSet};

pub const CORPUS_ENV: &str = "NPSTAT_CORPUS";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    /// aligned columns
    #[default]
    Text,
    /// tab-separated values
    Tsv,
    /// one JSON object per line
    Records,
}

#[derive(Debug, Parser)]
#[command(
    name = "npstat",
    version,
    about = "Treebank NP position, givenness and chi-square reports"
)]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = ReportFormat::Text, global = true)]
    pub format: ReportFormat,

    /// key = value file overriding the compiled-in classifier lists
    #[arg(long, global = true, value_name = "FILE")]
    pub classifier_config: Option<PathBuf>,

    /// print the compiled-in classifier configuration and exit
    #[arg(long)]
    pub dump_default_config: bool,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Args, Clone)]
pub struct CorpusArgs {
    /// root directory of the treebank files
    #[arg(long, env = CORPUS_ENV, value_name = "DIR")]
    pub corpus: Option<PathBuf>,

    /// pattern for files below the corpus root
    #[arg(long, default_value = "**", value_name = "PATTERN")]
    pub glob: String,

    /// top-level wrapping of trees
    #[arg(long, value_enum, default_value_t = DialectArg::Auto)]
    pub dialect: DialectArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DialectArg {
    Auto,
    Wrapped,
    Unwrapped,
}

impl From<DialectArg> for Dialect {
    fn from(d: DialectArg) -> Dialect {
        match d {
            DialectArg::Auto => Dialect::Auto,
            DialectArg::Wrapped => Dialect::Wrapped,
            DialectArg::Unwrapped => Dialect::Unwrapped,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse every file and report sentence counts and skipped files.
    Check(CorpusArgs),
    /// Print the trees of a file in canonical bracketed form.
    Normalize { file: PathBuf },
    /// List every subject / non-subject NP with clause context and givenness.
    Nps {
        #[command(flatten)]
        corpus: CorpusArgs,
        /// also report how often the positional definition disagrees with -SBJ tags
        #[arg(long)]
        sbj_check: bool,
    },
    /// Frequencies of NPs by givenness, position and clause type.
    Table1 {
        #[command(flatten)]
        corpus: CorpusArgs,
        /// 36 counts: per category row, subject TC RC matrix then non-subject TC RC matrix
        /// (repeat for several corpora)
        #[arg(long, num_args = 36, action = clap::ArgAction::Append, value_name = "N")]
        from_counts: Vec<u64>,
        /// block names, in the order the inputs are given
        #[arg(long, action = clap::ArgAction::Append)]
        name: Vec<String>,
    },
    /// Pronoun/indefinite by subject/non-subject chi-square test.
    Chisq {
        #[command(flatten)]
        corpus: CorpusArgs,
        /// the four cells a b c d
        #[arg(long, num_args = 4, value_name = "N", conflicts_with = "from_counts")]
        cells: Option<Vec<u64>>,
        /// 36 counts in the table1 layout
        #[arg(long, num_args = 36, value_name = "N")]
        from_counts: Option<Vec<u64>>,
        /// clause contexts to pool: matrix, tc, rc, other, all (comma separated)
        #[arg(long, value_delimiter = ',')]
        contexts: Vec<String>,
    },
    /// VP-final verb immediately followed by an NP, with no punctuation between.
    LateClosure(CorpusArgs),
    /// Sentence-initial adverbials and how many are not set off by a comma.
    Adverbials {
        #[command(flatten)]
        corpus: CorpusArgs,
        /// NOT_DELIMITED TOTAL
        #[arg(long, num_args = 2, value_name = "N")]
        from_counts: Option<Vec<u64>>,
    },
    /// Subcategorization frame counts for one verb.
    Verb {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long, value_name = "LEMMA")]
        verb: String,
        /// `lemma: form form ...` file replacing the bundled lexicon
        #[arg(long, value_name = "FILE")]
        lexicon: Option<PathBuf>,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    MissingInput(String),
    #[error("{0}")]
    Degenerate(String),
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::MissingInput(_) => 2,
            CliError::Degenerate(_) => 3,
            CliError::Config(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl From<CorpusError> for CliError {
    fn from(e: CorpusError) -> Self {
        match e {
            CorpusError::BadGlob { .. } | CorpusError::BadCountVector { .. } => {
                CliError::Config(e.to_string())
            }
            CorpusError::RootNotFound(_) | CorpusError::Walk { .. } => {
                CliError::MissingInput(e.to_string())
            }
        }
    }
}

/// One line of `--format records` output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "snake_case")]
pub enum Record {
    Table1Row {
        corpus: String,
        status: String,
        subj_tc: u64,
        subj_rc: u64,
        subj_tc_rc: u64,
        subj_matrix: u64,
        nonsubj_tc: u64,
        nonsubj_rc: u64,
        nonsubj_tc_rc: u64,
        nonsubj_matrix: u64,
    },
    Chisq {
        contexts: String,
        a: u64,
        b: u64,
        c: u64,
        d: u64,
        statistic: Option<f64>,
        df: Option<u32>,
        significance: Option<SignificanceBand>,
    },
    LateClosure {
        file_id: String,
        sentence_index: usize,
        span_start: usize,
        span_end: usize,
        final_verb: String,
        final_pos: String,
        critical_np: String,
        givenness: GivennessCategory,
    },
    Adverbials {
        category: String,
        total: u64,
        not_comma_delimited: u64,
        percent_not_delimited: Option<Percentage>,
    },
    VerbFrames {
        lemma: String,
        np: u64,
        tc: u64,
        rc: u64,
        intransitive: u64,
        total: u64,
    },
    Np {
        file_id: String,
        sentence_index: usize,
        span_start: usize,
        span_end: usize,
        position: GrammaticalPosition,
        context: ClauseContext,
        givenness: GivennessCategory,
        text: String,
    },
    SbjCheck {
        subjects: u64,
        subjects_without_sbj_tag: u64,
        non_subjects: u64,
        non_subjects_with_sbj_tag: u64,
        disagreement_rate: f64,
    },
    Check {
        files_processed: u64,
        files_skipped: u64,
        sentences: u64,
    },
    Skipped {
        file_id: String,
        byte_offset: Option<usize>,
        message: String,
    },
}

/// Rows of Table 1 for one corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table1Block {
    pub name: String,
    /// one row per givenness category, in canonical order
    pub rows: Vec<(GivennessCategory, [u64; 8])>,
    pub total: [u64; 8],
    /// NPs in clauses that are neither matrix nor TC/RC complements (subject, non-subject)
    pub other: [u64; 2],
}

pub const TABLE1_COLUMNS: [&str; 8] = [
    "subj TC",
    "subj RC",
    "subj TC+RC",
    "subj matrix",
    "non-subj TC",
    "non-subj RC",
    "non-subj TC+RC",
    "non-subj matrix",
];

impl Table1Block {
    pub fn from_counts(name: &str, agg: &AggregateCounts) -> Self {
        use ClauseContext::*;
        let rows: Vec<(GivennessCategory, [u64; 8])> = GivennessCategory::ALL
            .iter()
            .map(|&cat| {
                let mut row = [0u64; 8];
                for (half, pos) in GrammaticalPosition::ALL.iter().enumerate() {
                    let tc = agg.get(cat, *pos, EmbeddedTC);
                    let rc = agg.get(cat, *pos, EmbeddedRC);
                    let matrix = agg.get(cat, *pos, Matrix);
                    row[half * 4..half * 4 + 4].copy_from_slice(&[tc, rc, tc + rc, matrix]);
                }
                (cat, row)
            })
            .collect();
        let mut total = [0u64; 8];
        for (_, row) in &rows {
            for (t, v) in total.iter_mut().zip(row) {
                *t += v;
            }
        }
        let other = GrammaticalPosition::ALL.map(|pos| {
            GivennessCategory::ALL
                .iter()
                .map(|&cat| agg.get(cat, pos, EmbeddedOther))
                .sum()
        });
        Table1Block {
            name: name.to_string(),
            rows,
            total,
            other,
        }
    }

    /// TC+RC columns equal TC + RC and the total row equals the column sums.
    pub fn identities_hold(&self) -> bool {
        let sums_ok = self
            .rows
            .iter()
            .map(|(_, r)| r)
            .chain(std::iter::once(&self.total))
            .all(|r| r[2] == r[0] + r[1] && r[6] == r[4] + r[5]);
        let totals_ok =
            (0..8).all(|c| self.rows.iter().map(|(_, r)| r[c]).sum::<u64>() == self.total[c]);
        sums_ok && totals_ok
    }

    fn records(&self) -> Vec<Record> {
        let row_record = |status: &str, r: &[u64; 8]| Record::Table1Row {
            corpus: self.name.clone(),
            status: status.to_string(),
            subj_tc: r[0],
            subj_rc: r[1],
            subj_tc_rc: r[2],
            subj_matrix: r[3],
            nonsubj_tc: r[4],
            nonsubj_rc: r[5],
            nonsubj_tc_rc: r[6],
            nonsubj_matrix: r[7],
        };
        self.rows
            .iter()
            .map(|(cat, r)| row_record(cat.name(), r))
            .chain(std::iter::once(row_record("total", &self.total)))
            .collect()
    }
}

/// Parse `argv` and run; returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "npstat: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    if cli.dump_default_config {
        write!(out, "{}", ClassifierConfig::default())?;
        return Ok(());
    }
    let Some(command) = &cli.command else {
        return Err(CliError::MissingInput(
            "no command given; see `npstat --help`".to_string(),
        ));
    };
    let config = load_classifier_config(cli.classifier_config.as_ref())?;
    let fmt = cli.format;
    match command {
        Command::Check(args) => cmd_check(args, fmt, out, err),
        Command::Normalize { file } => cmd_normalize(file, out),
        Command::Nps { corpus, sbj_check } => cmd_nps(corpus, *sbj_check, &config, fmt, out, err),
        Command::Table1 {
            corpus,
            from_counts,
            name,
        } => {
            let blocks = cmd_table1(corpus, from_counts, name, &config, err)?;
            render_table1(&blocks, fmt, out)
        }
        Command::Chisq {
            corpus,
            cells,
            from_counts,
            contexts,
        } => cmd_chisq(
            corpus,
            cells.as_deref(),
            from_counts.as_deref(),
            contexts,
            &config,
            fmt,
            out,
            err,
        ),
        Command::LateClosure(args) => cmd_late_closure(args, &config, fmt, out, err),
        Command::Adverbials {
            corpus,
            from_counts,
        } => cmd_adverbials(corpus, from_counts.as_deref(), fmt, out, err),
        Command::Verb {
            corpus,
            verb,
            lexicon,
        } => cmd_verb(corpus, verb, lexicon.as_ref(), fmt, out, err),
    }
}

fn load_classifier_config(path: Option<&PathBuf>) -> Result<ClassifierConfig, CliError> {
    match path {
        None => Ok(ClassifierConfig::default()),
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
            ClassifierConfig::parse(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))
        }
    }
}

fn source(args: &CorpusArgs) -> Result<CorpusSource, CliError> {
    let root = args.corpus.clone().ok_or_else(|| {
        CliError::MissingInput(format!(
            "no corpus given (use --corpus or set {CORPUS_ENV})"
        ))
    })?;
    Ok(CorpusSource::new(root)
        .with_glob(&args.glob)
        .with_dialect(args.dialect.into()))
}

/// Print skip diagnostics; fail if every file was skipped.
fn report_ingest(stats: &IngestStats, err: &mut dyn Write) -> Result<(), CliError> {
    for d in &stats.diagnostics {
        match d.byte_offset {
            Some(o) => writeln!(err, "skipped {} (byte {o}): {}", d.file_id, d.message)?,
            None => writeln!(err, "skipped {}: {}", d.file_id, d.message)?,
        }
    }
    if stats.all_failed() {
        return Err(CliError::MissingInput(format!(
            "all {} corpus files failed to parse",
            stats.files_skipped
        )));
    }
    Ok(())
}

fn write_records(records: &[Record], out: &mut dyn Write) -> Result<(), CliError> {
    for r in records {
        let line = serde_json::to_string(r).map_err(io::Error::other)?;
        writeln!(out, "{line}")?;
    }
    Ok(())
}

/// Left-align the first column, right-align the rest.
fn write_aligned(rows: &[Vec<String>], out: &mut dyn Write) -> Result<(), CliError> {
    let ncols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..ncols)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    for row in rows {
        let cells: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(c, s)| {
                if c == 0 {
                    format!("{s:<w$}", w = widths[c])
                } else {
                    format!("{s:>w$}", w = widths[c])
                }
            })
            .collect();
        writeln!(out, "{}", cells.join("  ").trim_end())?;
    }
    Ok(())
}

fn write_tsv(rows: &[Vec<String>], out: &mut dyn Write) -> Result<(), CliError> {
    for row in rows {
        writeln!(out, "{}", row.join("\t"))?;
    }
    Ok(())
}

fn write_table(
    rows: &[Vec<String>],
    fmt: ReportFormat,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    match fmt {
        ReportFormat::Tsv => write_tsv(rows, out),
        _ => write_aligned(rows, out),
    }
}

fn cmd_check(
    args: &CorpusArgs,
    fmt: ReportFormat,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    let src = source(args)?;
    let ((), stats) = map_reduce(&src, || (), |_, _| (), |_, _| ())?;
    let summary = Record::Check {
        files_processed: stats.files_processed,
        files_skipped: stats.files_skipped,
        sentences: stats.sentences,
    };
    match fmt {
        ReportFormat::Records => {
            let mut records = vec![summary];
            records.extend(stats.diagnostics.iter().map(|d| Record::Skipped {
                file_id: d.file_id.clone(),
                byte_offset: d.byte_offset,
                message: d.message.clone(),
            }));
            write_records(&records, out)?;
        }
        _ => {
            let rows = vec![
                vec![
                    "files processed".to_string(),
                    stats.files_processed.to_string(),
                ],
                vec!["files skipped".to_string(), stats.files_skipped.to_string()],
                vec!["sentences".to_string(), stats.sentences.to_string()],
            ];
            write_table(&rows, fmt, out)?;
        }
    }
    report_ingest(&stats, err)
}

fn cmd_normalize(file: &PathBuf, out: &mut dyn Write) -> Result<(), CliError> {
    let text = fs::read_to_string(file)
        .map_err(|e| CliError::MissingInput(format!("{}: {e}", file.display())))?;
    let trees = parse_trees(&text)
        .map_err(|e| CliError::MissingInput(format!("{}: {e}", file.display())))?;
    for t in &trees {
        writeln!(out, "{}", serialize_tree(t))?;
    }
    Ok(())
}

fn cmd_nps(
    args: &CorpusArgs,
    sbj_check: bool,
    config: &ClassifierConfig,
    fmt: ReportFormat,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    let src = source(args)?;
    let ((records, check), stats) = map_reduce(
        &src,
        || (Vec::new(), SubjectTagCheck::default()),
        |(records, check), idx| {
            let occs = extract_np_occurrences(idx);
            check.observe(idx, &occs);
            for occ in occs {
                let givenness = classify_np(idx.tree(occ.node), config)
                    .unwrap_or(GivennessCategory::NotClassified);
                records.push(Record::Np {
                    file_id: occ.span.file_id.clone(),
                    sentence_index: occ.span.sentence_index,
                    span_start: occ.span.leaf_range.start,
                    span_end: occ.span.leaf_range.end,
                    position: occ.position,
                    context: occ.context,
                    givenness,
                    text: idx.text(occ.node),
                });
            }
        },
        |(mut r1, c1), (r2, c2)| {
            r1.extend(r2);
            (r1, c1.merge(&c2))
        },
    )?;
    report_ingest(&stats, err)?;
    let mut records = records;
    if sbj_check {
        records.push(Record::SbjCheck {
            subjects: check.subjects,
            subjects_without_sbj_tag: check.subjects_without_sbj_tag,
            non_subjects: check.non_subjects,
            non_subjects_with_sbj_tag: check.non_subjects_with_sbj_tag,
            disagreement_rate: check.disagreement_rate(),
        });
    }
    match fmt {
        ReportFormat::Records => write_records(&records, out),
        _ => {
            let mut rows = Vec::new();
            for r in &records {
                match r {
                    Record::Np {
                        file_id,
                        sentence_index,
                        span_start,
                        span_end,
                        position,
                        context,
                        givenness,
                        text,
                    } => rows.push(vec![
                        file_id.clone(),
                        sentence_index.to_string(),
                        "np".to_string(),
                        format!("{span_start}-{span_end}"),
                        position.to_string(),
                        context.to_string(),
                        givenness.to_string(),
                        text.clone(),
                    ]),
                    Record::SbjCheck {
                        subjects,
                        subjects_without_sbj_tag,
                        non_subjects,
                        non_subjects_with_sbj_tag,
                        disagreement_rate,
                    } => {
                        let line = format!(
                            "sbj-check: {subjects} subjects ({subjects_without_sbj_tag} without -SBJ), \
                             {non_subjects} non-subjects ({non_subjects_with_sbj_tag} with -SBJ), \
                             disagreement {:.2}%",
                            disagreement_rate * 100.0
                        );
                        if fmt == ReportFormat::Tsv {
                            write_tsv(&rows, out)?;
                            rows.clear();
                            writeln!(err, "{line}")?;
                        } else {
                            write_aligned(&rows, out)?;
                            rows.clear();
                            writeln!(out, "{line}")?;
                        }
                    }
                    _ => {}
                }
            }
            match fmt {
                ReportFormat::Tsv => write_tsv(&rows, out),
                _ => write_aligned(&rows, out),
            }
        }
    }
}

/// Table 1 blocks from corpora and/or literal counts.
pub fn cmd_table1(
    args: &CorpusArgs,
    from_counts: &[u64],
    names: &[String],
    config: &ClassifierConfig,
    err: &mut dyn Write,
) -> Result<Vec<Table1Block>, CliError> {
    let mut aggregates = Vec::new();
    if from_counts.is_empty() {
        let src = source(args)?;
        let (agg, stats) = aggregate_source(&src, config)?;
        report_ingest(&stats, err)?;
        aggregates.push((src.root_path.display().to_string(), agg));
    } else {
        // clap guarantees 36 values per occurrence
        for (i, counts) in from_counts.chunks(36).enumerate() {
            let agg = AggregateCounts::from_table1_layout(counts)?;
            aggregates.push((format!("counts-{}", i + 1), agg));
        }
    }
    Ok(aggregates
        .iter()
        .enumerate()
        .map(|(i, (default_name, agg))| {
            let name = names.get(i).map(String::as_str).unwrap_or(default_name);
            Table1Block::from_counts(name, agg)
        })
        .collect())
}

pub fn render_table1(
    blocks: &[Table1Block],
    fmt: ReportFormat,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    if fmt == ReportFormat::Records {
        let records: Vec<Record> = blocks.iter().flat_map(Table1Block::records).collect();
        return write_records(&records, out);
    }
    for (i, block) in blocks.iter().enumerate() {
        let mut rows = Vec::new();
        if fmt == ReportFormat::Tsv {
            let mut header = vec!["corpus".to_string(), "status".to_string()];
            header.extend(TABLE1_COLUMNS.iter().map(|c| c.to_string()));
            if i == 0 {
                rows.push(header);
            }
            for (status, r) in block
                .rows
                .iter()
                .map(|(c, r)| (c.name(), r))
                .chain(std::iter::once(("total", &block.total)))
            {
                let mut row = vec![block.name.clone(), status.to_string()];
                row.extend(r.iter().map(u64::to_string));
                rows.push(row);
            }
            write_tsv(&rows, out)?;
            continue;
        }
        if i > 0 {
            writeln!(out)?;
        }
        writeln!(out, "{}:", block.name)?;
        rows.push(
            ["", "Subjects", "", "", "", "Non-Subjects", "", "", ""]
                .iter()
                .map(|s| s.to_string())
                .collect(),
        );
        rows.push(
            [
                "givenness status",
                "TC",
                "RC",
                "TC+RC",
                "matrix",
                "TC",
                "RC",
                "TC+RC",
                "matrix",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        );
        for (status, r) in block
            .rows
            .iter()
            .map(|(c, r)| (c.name(), r))
            .chain(std::iter::once(("total:", &block.total)))
        {
            let mut row = vec![status.to_string()];
            row.extend(r.iter().map(u64::to_string));
            rows.push(row);
        }
        write_aligned(&rows, out)?;
        if block.other != [0, 0] {
            writeln!(
                out,
                "(other embedded clauses, not shown: {} subjects, {} non-subjects)",
                block.other[0], block.other[1]
            )?;
        }
    }
    Ok(())
}

fn parse_contexts(specs: &[String]) -> Result<Vec<ClauseContext>, CliError> {
    let mut out = Vec::new();
    for s in specs {
        if s.eq_ignore_ascii_case("all") {
            out.extend(ClauseContext::ALL);
        } else {
            out.push(s.parse::<ClauseContext>().map_err(CliError::Config)?);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn context_label(contexts: &[ClauseContext]) -> String {
    contexts
        .iter()
        .map(|c| c.name())
        .collect::<Vec<_>>()
        .join("+")
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_chisq(
    args: &CorpusArgs,
    cells: Option<&[u64]>,
    from_counts: Option<&[u64]>,
    contexts: &[String],
    config: &ClassifierConfig,
    fmt: ReportFormat,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    let selected = parse_contexts(contexts)?;
    let tables: Vec<(String, ContingencyTable2x2)> = if let Some(c) = cells {
        vec![(
            "cells".to_string(),
            ContingencyTable2x2::new(c[0], c[1], c[2], c[3]),
        )]
    } else {
        let agg = match from_counts {
            Some(counts) => AggregateCounts::from_table1_layout(counts)?,
            None => {
                let src = source(args)?;
                let (agg, stats) = aggregate_source(&src, config)?;
                report_ingest(&stats, err)?;
                agg
            }
        };
        let selections: Vec<Vec<ClauseContext>> = if selected.is_empty() {
            use ClauseContext::*;
            vec![
                vec![Matrix],
                vec![EmbeddedTC, EmbeddedRC],
                vec![EmbeddedTC],
                vec![EmbeddedRC],
            ]
        } else {
            vec![selected]
        };
        selections
            .iter()
            .map(|ctx| {
                (
                    context_label(ctx),
                    build_pronoun_indefinite_table(&agg, ctx),
                )
            })
            .collect()
    };

    let mut degenerate = Vec::new();
    let mut records = Vec::new();
    for (label, table) in &tables {
        let result = match chi_square_2x2(table) {
            Ok(r) => Some(r),
            Err(StatsError::DegenerateMargin(t)) => {
                degenerate.push(format!("{label} {t}"));
                None
            }
            Err(e) => return Err(CliError::Degenerate(e.to_string())),
        };
        records.push(Record::Chisq {
            contexts: label.clone(),
            a: table.a,
            b: table.b,
            c: table.c,
            d: table.d,
            statistic: result.map(|r| r.statistic),
            df: result.map(|r| r.degrees_of_freedom),
            significance: result.map(|r| r.significance),
        });
    }

    match fmt {
        ReportFormat::Records => write_records(&records, out)?,
        ReportFormat::Tsv => {
            let mut rows = vec![
                ["contexts", "a", "b", "c", "d", "chi2", "df", "significance"]
                    .iter()
                    .map(|s| s.to_string())
                    .collect::<Vec<_>>(),
            ];
            for r in &records {
                if let Record::Chisq {
                    contexts,
                    a,
                    b,
                    c,
                    d,
                    statistic,
                    df,
                    significance,
                } = r
                {
                    rows.push(vec![
                        contexts.clone(),
                        a.to_string(),
                        b.to_string(),
                        c.to_string(),
                        d.to_string(),
                        statistic.map(|s| format!("{s:.1}")).unwrap_or_default(),
                        df.map(|d| d.to_string()).unwrap_or_default(),
                        significance.map(|s| s.to_string()).unwrap_or_default(),
                    ]);
                }
            }
            write_tsv(&rows, out)?;
        }
        ReportFormat::Text => {
            for (i, r) in records.iter().enumerate() {
                if let Record::Chisq {
                    contexts,
                    a,
                    b,
                    c,
                    d,
                    statistic,
                    df,
                    significance,
                } = r
                {
                    if i > 0 {
                        writeln!(out)?;
                    }
                    writeln!(out, "{contexts}:")?;
                    let rows: Vec<Vec<String>> = vec![
                        vec!["".into(), "subj".into(), "non-subj".into()],
                        vec!["pronoun".into(), a.to_string(), b.to_string()],
                        vec!["indefinite".into(), c.to_string(), d.to_string()],
                    ];
                    write_aligned(&rows, out)?;
                    match (statistic, df, significance) {
                        (Some(s), Some(df), Some(band)) => {
                            writeln!(out, "chi2 = {s:.1}, df={df}, {band}")?
                        }
                        _ => writeln!(out, "chi2 undefined: zero row or column sum")?,
                    }
                }
            }
        }
    }
    if !degenerate.is_empty() {
        return Err(CliError::Degenerate(format!(
            "cannot test a table with a zero row or column sum: {}",
            degenerate.join("; ")
        )));
    }
    Ok(())
}

pub fn cmd_late_closure(
    args: &CorpusArgs,
    config: &ClassifierConfig,
    fmt: ReportFormat,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    let src = source(args)?;
    let punct = PunctuationSet::default();
    let (records, stats) = map_reduce(
        &src,
        Vec::new,
        |records: &mut Vec<Record>, idx| {
            for m in find_late_closure_configs(idx, &punct) {
                let givenness = classify_np(idx.tree(m.critical_np), config)
                    .unwrap_or(GivennessCategory::NotClassified);
                records.push(Record::LateClosure {
                    file_id: m.span.file_id.clone(),
                    sentence_index: m.span.sentence_index,
                    span_start: m.span.leaf_range.start,
                    span_end: m.span.leaf_range.end,
                    final_verb: m.final_verb.token.clone(),
                    final_pos: m.final_verb.pos.clone(),
                    critical_np: idx.text(m.critical_np),
                    givenness,
                });
            }
        },
        |mut a, b| {
            a.extend(b);
            a
        },
    )?;
    report_ingest(&stats, err)?;
    match fmt {
        ReportFormat::Records => write_records(&records, out),
        _ => {
            let rows: Vec<Vec<String>> = records
                .iter()
                .filter_map(|r| match r {
                    Record::LateClosure {
                        file_id,
                        sentence_index,
                        span_start,
                        span_end,
                        final_verb,
                        final_pos,
                        critical_np,
                        givenness,
                    } => Some(vec![
                        file_id.clone(),
                        sentence_index.to_string(),
                        "late_closure".to_string(),
                        format!("{span_start}-{span_end}"),
                        format!("{final_verb}/{final_pos}"),
                        critical_np.clone(),
                        givenness.to_string(),
                    ]),
                    _ => None,
                })
                .collect();
            write_table(&rows, fmt, out)
        }
    }
}

pub fn cmd_adverbials(
    args: &CorpusArgs,
    from_counts: Option<&[u64]>,
    fmt: ReportFormat,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    let tallies: Vec<(&str, u64, u64)> = match from_counts {
        Some(c) => {
            if c[0] > c[1] {
                return Err(CliError::Config(format!(
                    "{} not-delimited adverbials exceed the total {}",
                    c[0], c[1]
                )));
            }
            vec![("ALL", c[1], c[0])]
        }
        None => {
            let src = source(args)?;
            let config = AdverbialConfig::default();
            let (summary, stats) = map_reduce(
                &src,
                AdverbialSummary::default,
                |acc, idx| {
                    for rec in survey_fronted_adverbials(idx, &config) {
                        acc.add(&rec);
                    }
                },
                |a, b| a.merge(&b),
            )?;
            report_ingest(&stats, err)?;
            if summary.all.total == 0 {
                vec![]
            } else {
                summary
                    .rows()
                    .iter()
                    .map(|(name, t)| (*name, t.total, t.not_comma_delimited))
                    .collect()
            }
        }
    };
    let records: Vec<Record> = tallies
        .iter()
        .map(|&(name, total, not)| Record::Adverbials {
            category: name.to_string(),
            total,
            not_comma_delimited: not,
            percent_not_delimited: ratio_report(not, total).ok(),
        })
        .collect();
    if fmt == ReportFormat::Records {
        return write_records(&records, out);
    }
    let mut rows = vec![vec![
        "category".to_string(),
        "fronted".to_string(),
        "no comma".to_string(),
        "% no comma".to_string(),
    ]];
    for r in &records {
        if let Record::Adverbials {
            category,
            total,
            not_comma_delimited,
            percent_not_delimited,
        } = r
        {
            rows.push(vec![
                category.clone(),
                total.to_string(),
                not_comma_delimited.to_string(),
                percent_not_delimited
                    .map(|p| format!("{p}%"))
                    .unwrap_or_else(|| "-".to_string()),
            ]);
        }
    }
    write_table(&rows, fmt, out)
}

pub fn cmd_verb(
    args: &CorpusArgs,
    lemma: &str,
    lexicon_path: Option<&PathBuf>,
    fmt: ReportFormat,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    let lexicon = match lexicon_path {
        None => VerbLexicon::default(),
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
            VerbLexicon::parse(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?
        }
    };
    let forms = lexicon
        .inflections(lemma)
        .ok_or_else(|| CliError::Config(format!("verb {lemma:?} is not in the lexicon")))?;
    let forms = normalize_forms(lemma, forms).map_err(|e| CliError::Config(e.to_string()))?;
    let src = source(args)?;
    let (profile, stats) = map_reduce(
        &src,
        || VerbFrameProfile::new(lemma),
        |p, idx| p.observe(idx, &forms),
        |a, b| a.merge(&b),
    )?;
    report_ingest(&stats, err)?;
    let record = Record::VerbFrames {
        lemma: profile.lemma.clone(),
        np: profile.count(VerbFrame::NpComplement),
        tc: profile.count(VerbFrame::ThatClause),
        rc: profile.count(VerbFrame::ReducedClause),
        intransitive: profile.count(VerbFrame::Intransitive),
        total: profile.total(),
    };
    if fmt == ReportFormat::Records {
        return write_records(&[record], out);
    }
    let mut header = vec!["verb".to_string()];
    header.extend(VerbFrame::ALL.iter().map(|f| f.name().to_string()));
    header.push("total".to_string());
    let mut row = vec![profile.lemma.clone()];
    row.extend(VerbFrame::ALL.iter().map(|&f| profile.count(f).to_string()));
    row.push(profile.total().to_string());
    write_table(&[header, row], fmt, out)
}

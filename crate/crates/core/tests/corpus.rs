mod support;

use std::fs;
use std::path::{Path, PathBuf};

use npstat::corpus::{
    aggregate, aggregate_source, ingest, map_reduce, AggregateCounts, CorpusError, CorpusSource,
};
use npstat::givenness::{ClassifierConfig, GivennessCategory};
use npstat::query::{ClauseContext, GrammaticalPosition};
use npstat::treebank::Dialect;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fixture(rel: &str) -> PathBuf {
    support::fixtures().join(rel)
}

#[test]
fn ingest_is_in_path_order_with_indices() {
    let src = CorpusSource::new(fixture("corpus/three"));
    let mut it = ingest(&src).unwrap();
    let ids: Vec<(String, usize)> = it
        .by_ref()
        .map(|(id, _)| (id.file_id.to_string(), id.index))
        .collect();
    let want: Vec<(String, usize)> = [("a.mrg", 3), ("b.mrg", 4), ("c.mrg", 3)]
        .iter()
        .flat_map(|(f, n)| (0..*n).map(move |i| (f.to_string(), i)))
        .collect();
    assert_eq!(ids, want);
    let stats = it.into_stats();
    assert_eq!(
        (stats.files_processed, stats.files_skipped, stats.sentences),
        (3, 0, 10)
    );
}

#[test]
fn malformed_file_is_skipped_with_diagnostic() {
    let src = CorpusSource::new(fixture("corpus/malformed"));
    let mut it = ingest(&src).unwrap();
    let files: Vec<String> = it.by_ref().map(|(id, _)| id.file_id.to_string()).collect();
    assert_eq!(files, vec!["a.mrg", "a.mrg", "c.mrg", "c.mrg", "c.mrg"]);
    let stats = it.into_stats();
    assert_eq!(stats.files_skipped, 1);
    assert_eq!(stats.files_processed, 2);
    assert_eq!(stats.diagnostics.len(), 1);
    assert_eq!(stats.diagnostics[0].file_id, "b.mrg");
    assert!(stats.diagnostics[0].byte_offset.is_some());
    assert!(!stats.all_failed());
}

#[test]
fn missing_root_is_an_error() {
    let src = CorpusSource::new("/definitely/not/here");
    assert!(matches!(ingest(&src), Err(CorpusError::RootNotFound(_))));
}

#[test]
fn glob_and_dialect_filters() {
    let src = CorpusSource::new(fixture("corpus/three")).with_glob("[ac].mrg");
    assert_eq!(ingest(&src).unwrap().count(), 6);
    let wrapped_only = CorpusSource::new(fixture("corpus/three")).with_dialect(Dialect::Wrapped);
    let mut it = ingest(&wrapped_only).unwrap();
    assert_eq!(it.by_ref().count(), 6);
    assert_eq!(it.stats().files_skipped, 1, "b.mrg is unwrapped");
    assert!(matches!(
        CorpusSource::new(fixture("corpus")).with_glob("[").files(),
        Err(CorpusError::BadGlob { .. })
    ));
}

#[test]
fn holmes_aggregate() {
    let (agg, stats) = aggregate_source(
        &CorpusSource::new(fixture("holmes")),
        &ClassifierConfig::default(),
    )
    .unwrap();
    assert_eq!(stats.sentences, 3);
    use ClauseContext::*;
    use GivennessCategory::Definite;
    use GrammaticalPosition::*;
    assert_eq!(agg.get(Definite, Subject, Matrix), 3);
    assert_eq!(agg.get(Definite, NonSubject, Matrix), 1);
    assert_eq!(agg.get(Definite, Subject, EmbeddedTC), 1);
    assert_eq!(agg.get(Definite, Subject, EmbeddedRC), 1);
    assert_eq!(agg.total(), 6);
    assert_eq!(agg.sentences_processed, 3);
}

fn all_sentences() -> Vec<(npstat::SentenceId, npstat::Tree)> {
    let src = CorpusSource::new(support::fixtures()).with_glob("**/*.mrg");
    ingest(&src).unwrap().collect()
}

#[test]
fn random_partitions_merge_to_single_pass() {
    let config = ClassifierConfig::default();
    let sentences = all_sentences();
    assert!(sentences.len() > 250);
    let whole = aggregate(sentences.clone(), &config);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for ways in [2usize, 3, 4, 4, 4, 7] {
        let mut parts: Vec<Vec<_>> = vec![Vec::new(); ways];
        for s in &sentences {
            parts[rng.gen_range(0..ways)].push(s.clone());
        }
        let merged = parts
            .into_iter()
            .map(|p| aggregate(p, &config))
            .fold(AggregateCounts::default(), |acc, a| acc.merge(&a));
        assert_eq!(merged, whole, "{ways}-way partition");
    }
}

fn copy_into(dir: &Path, files: &[PathBuf]) {
    for (i, f) in files.iter().enumerate() {
        fs::copy(f, dir.join(format!("{i:03}.mrg"))).unwrap();
    }
}

#[test]
fn four_way_file_partition_merges_to_single_pass() {
    let config = ClassifierConfig::default();
    let mut files: Vec<PathBuf> = support::all_fixture_files()
        .into_iter()
        .filter(|p| !p.to_string_lossy().contains("malformed"))
        .collect();
    let all = tempfile::tempdir().unwrap();
    copy_into(all.path(), &files);
    let (whole, _) = aggregate_source(&CorpusSource::new(all.path()), &config).unwrap();

    files.shuffle(&mut ChaCha8Rng::seed_from_u64(8));
    let mut merged = AggregateCounts::default();
    for chunk in files.chunks(files.len().div_ceil(4)) {
        let dir = tempfile::tempdir().unwrap();
        copy_into(dir.path(), chunk);
        let (part, _) = aggregate_source(&CorpusSource::new(dir.path()), &config).unwrap();
        merged = merged.merge(&part);
    }
    assert_eq!(merged, whole);
}

#[test]
fn parallel_aggregation_is_deterministic() {
    let config = ClassifierConfig::default();
    let src = CorpusSource::new(support::fixtures()).with_glob("**/*.mrg");
    let (first, stats) = aggregate_source(&src, &config).unwrap();
    assert_eq!(stats.files_skipped, 1);
    let sequential = aggregate(ingest(&src).unwrap(), &config);
    for cat in GivennessCategory::ALL {
        for pos in GrammaticalPosition::ALL {
            for ctx in ClauseContext::ALL {
                assert_eq!(first.get(cat, pos, ctx), sequential.get(cat, pos, ctx));
            }
        }
    }
    for _ in 0..10 {
        assert_eq!(aggregate_source(&src, &config).unwrap().0, first);
    }
}

#[test]
fn map_reduce_preserves_file_order() {
    let src = CorpusSource::new(support::fixtures().join("synthetic"));
    let (order, stats) = map_reduce(
        &src,
        Vec::new,
        |acc: &mut Vec<(String, usize)>, idx| {
            acc.push((idx.sentence().file_id.to_string(), idx.sentence().index))
        },
        |mut a, b| {
            a.extend(b);
            a
        },
    )
    .unwrap();
    let want: Vec<(String, usize)> = ingest(&src)
        .unwrap()
        .map(|(id, _)| (id.file_id.to_string(), id.index))
        .collect();
    assert_eq!(order, want);
    assert_eq!(stats.sentences, 200);
}

#[test]
fn count_vector_layout() {
    let mut values = [0u64; 36];
    values[6 + 2] = 7580; // pronoun, subject, matrix
    values[4 * 6 + 5] = 5269; // indefinite, non-subject, matrix
    let agg = AggregateCounts::from_table1_layout(&values).unwrap();
    use ClauseContext::Matrix;
    assert_eq!(
        agg.get(
            GivennessCategory::Pronoun,
            GrammaticalPosition::Subject,
            Matrix
        ),
        7580
    );
    assert_eq!(
        agg.get(
            GivennessCategory::Indefinite,
            GrammaticalPosition::NonSubject,
            Matrix
        ),
        5269
    );
    assert!(matches!(
        AggregateCounts::from_table1_layout(&values[..35]),
        Err(CorpusError::BadCountVector { .. })
    ));
}

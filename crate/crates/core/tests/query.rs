mod support;

use std::collections::BTreeSet;

use npstat::index::{IndexedTree, NodeId, SentenceId};
use npstat::query::{
    clause_context_of, extract_np_occurrences, find_late_closure_configs, profile_verb_frames,
    survey_fronted_adverbials, verify_late_closure, AdverbialConfig, AdverbialSummary,
    ClauseContext, GrammaticalPosition, SubjectTagCheck, VerbFrame, VerbLexicon,
};
use npstat::treebank::{PunctuationSet, Tree};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use support::OraclePosition;

fn to_oracle(p: GrammaticalPosition) -> OraclePosition {
    match p {
        GrammaticalPosition::Subject => OraclePosition::Subject,
        GrammaticalPosition::NonSubject => OraclePosition::NonSubject,
    }
}

#[test]
fn np_positions_match_oracle_on_random_trees() {
    let mut rng = ChaCha8Rng::seed_from_u64(1993);
    let mut disagreements = 0;
    let mut seen = 0;
    for _ in 0..1000 {
        let tree = support::random_tree(&mut rng, 60);
        let idx = IndexedTree::new(&tree);
        let got: Vec<(usize, OraclePosition)> = extract_np_occurrences(&idx)
            .iter()
            .map(|o| (o.node.0, to_oracle(o.position)))
            .collect();
        let want = support::oracle_np_positions(&tree);
        seen += want.len();
        if got != want {
            disagreements += 1;
        }
    }
    assert_eq!(disagreements, 0);
    assert!(seen > 500, "generator produced only {seen} positioned NPs");
}

#[test]
fn np_positions_match_oracle_on_fixtures() {
    for path in support::all_fixture_files() {
        let Ok(trees) = std::fs::read_to_string(&path)
            .map_err(|_| ())
            .and_then(|t| npstat::parse_trees(&t).map_err(|_| ()))
        else {
            continue;
        };
        for tree in &trees {
            let idx = IndexedTree::new(tree);
            let got: Vec<_> = extract_np_occurrences(&idx)
                .iter()
                .map(|o| (o.node.0, to_oracle(o.position)))
                .collect();
            assert_eq!(
                got,
                support::oracle_np_positions(tree),
                "{}",
                path.display()
            );
        }
    }
}

#[test]
fn holmes_contexts() {
    let trees = support::read_trees("holmes/holmes.mrg");
    let expect = [
        vec![
            (GrammaticalPosition::Subject, ClauseContext::Matrix),
            (GrammaticalPosition::NonSubject, ClauseContext::Matrix),
        ],
        vec![
            (GrammaticalPosition::Subject, ClauseContext::Matrix),
            (GrammaticalPosition::Subject, ClauseContext::EmbeddedTC),
        ],
        vec![
            (GrammaticalPosition::Subject, ClauseContext::Matrix),
            (GrammaticalPosition::Subject, ClauseContext::EmbeddedRC),
        ],
    ];
    for (tree, want) in trees.iter().zip(expect) {
        let idx = IndexedTree::new(tree);
        let got: Vec<_> = extract_np_occurrences(&idx)
            .iter()
            .map(|o| (o.position, o.context))
            .collect();
        assert_eq!(got, want);
    }
}

#[test]
fn matrix_means_no_clausal_ancestor() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..500 {
        let tree = support::random_tree(&mut rng, 50);
        let idx = IndexedTree::new(&tree);
        for occ in extract_np_occurrences(&idx) {
            let ctx = clause_context_of(&idx, occ.node);
            assert_eq!(ctx, occ.context);
            // a fragment with no S at all counts from the NP itself
            let clause = idx
                .ancestors(occ.node)
                .find(|&a| idx.has_category(a, "S"))
                .unwrap_or(occ.node);
            let unembedded = idx
                .ancestors(clause)
                .all(|a| !idx.has_category(a, "S") && !idx.has_category(a, "SBAR"));
            assert_eq!(ctx == ClauseContext::Matrix, unembedded);
        }
    }
}

#[test]
fn sbj_tag_check_on_fixtures() {
    let mut check = SubjectTagCheck::default();
    for tree in support::read_trees("holmes/holmes.mrg") {
        let idx = IndexedTree::new(&tree);
        check.observe(&idx, &extract_np_occurrences(&idx));
    }
    assert_eq!(check.disagreements(), 0);
    assert_eq!(check.subjects, 5);
}

fn late_closure_files() -> Vec<(String, Vec<Tree>)> {
    [
        "late_closure/planted/a_brown.mrg",
        "late_closure/planted/b_wsj.mrg",
    ]
    .iter()
    .map(|f| (f.to_string(), support::read_trees(f)))
    .collect()
}

#[test]
fn planted_late_closure_matches_are_found_and_sound() {
    let punct = PunctuationSet::default();
    let mut found = Vec::new();
    for (file, trees) in late_closure_files() {
        for (i, tree) in trees.iter().enumerate() {
            let idx = IndexedTree::with_sentence(tree, SentenceId::new(file.as_str(), i));
            for m in find_late_closure_configs(&idx, &punct) {
                assert!(verify_late_closure(&idx, &m, &punct));
                assert!(support::oracle_late_closure_ok(
                    tree,
                    idx.leaf_range(m.vp_node),
                    m.final_verb.leaf_index,
                    idx.leaf_range(m.critical_np),
                ));
                found.push((m.final_verb.token.clone(), idx.text(m.critical_np)));
            }
        }
    }
    let want: Vec<(String, String)> = [
        ("sing", "you"),
        ("worked", "it"),
        ("provide", "even more order imbalances"),
        ("winning", "Larson"),
        ("ate", "the missionaries"),
    ]
    .iter()
    .map(|(a, b)| (a.to_string(), b.to_string()))
    .collect();
    assert_eq!(found, want);
}

#[test]
fn comma_after_final_verb_removes_match() {
    let punct = PunctuationSet::default();
    let mut planted = 0;
    for (_, trees) in late_closure_files() {
        for tree in &trees {
            let idx = IndexedTree::new(tree);
            for m in find_late_closure_configs(&idx, &punct) {
                planted += 1;
                let verb_node = idx.leaf(m.final_verb.leaf_index);
                let with_comma = support::insert_after(tree, verb_node.0, Tree::leaf(",", ","));
                let idx2 = IndexedTree::new(&with_comma);
                let after = find_late_closure_configs(&idx2, &punct);
                assert!(
                    after
                        .iter()
                        .all(|a| a.final_verb.leaf_index != m.final_verb.leaf_index),
                    "comma did not block the match on {:?}",
                    m.final_verb.token
                );
            }
        }
    }
    assert_eq!(planted, 5);
}

#[test]
fn unambiguous_sentences_give_no_matches() {
    let punct = PunctuationSet::default();
    let trees = support::read_trees("late_closure/unambiguous/sentences.mrg");
    assert_eq!(trees.len(), 4);
    for tree in &trees {
        assert!(find_late_closure_configs(&IndexedTree::new(tree), &punct).is_empty());
    }
}

#[test]
fn random_tree_matches_pass_reverification() {
    let punct = PunctuationSet::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut total = 0;
    for _ in 0..1000 {
        let tree = support::random_tree(&mut rng, 50);
        let idx = IndexedTree::new(&tree);
        for m in find_late_closure_configs(&idx, &punct) {
            total += 1;
            assert!(verify_late_closure(&idx, &m, &punct));
            assert!(support::oracle_late_closure_ok(
                &tree,
                idx.leaf_range(m.vp_node),
                m.final_verb.leaf_index,
                idx.leaf_range(m.critical_np),
            ));
        }
    }
    assert!(total > 0);
}

fn survey(files: &[&str]) -> AdverbialSummary {
    let config = AdverbialConfig::default();
    let mut summary = AdverbialSummary::default();
    for f in files {
        for tree in support::read_trees(f) {
            for rec in survey_fronted_adverbials(&IndexedTree::new(&tree), &config) {
                summary.add(&rec);
            }
        }
    }
    summary
}

fn tallies(s: &AdverbialSummary) -> Vec<(&'static str, u64, u64)> {
    s.rows()
        .iter()
        .map(|(n, t)| (*n, t.total, t.not_comma_delimited))
        .collect()
}

#[test]
fn adverbial_fixture_counts() {
    let ten = survey(&["adverbials/ten.mrg"]);
    assert_eq!(
        tallies(&ten),
        vec![
            ("ALL", 10, 3),
            ("SBAR", 4, 1),
            ("PP", 4, 1),
            ("other", 2, 1)
        ]
    );
    let more = survey(&["adverbials/more.mrg"]);
    assert_eq!(
        tallies(&more),
        vec![("ALL", 9, 4), ("SBAR", 2, 1), ("PP", 4, 2), ("other", 3, 1)]
    );
    let both = survey(&["adverbials/ten.mrg", "adverbials/more.mrg"]);
    assert_eq!(
        tallies(&both),
        vec![
            ("ALL", 19, 7),
            ("SBAR", 6, 2),
            ("PP", 8, 3),
            ("other", 5, 2)
        ]
    );
    assert_eq!(ten.merge(&more), both);
}

#[test]
fn realize_frames_on_fixture() {
    let trees = support::read_trees("verbs/frames.mrg");
    assert_eq!(trees.len(), 12);
    let lexicon = VerbLexicon::default();
    let forms: BTreeSet<String> = lexicon.inflections("realize").unwrap().clone();
    let profile = profile_verb_frames(&trees, "realize", &forms).unwrap();
    assert_eq!(profile.count(VerbFrame::NpComplement), 3);
    assert_eq!(profile.count(VerbFrame::ThatClause), 4);
    assert_eq!(profile.count(VerbFrame::ReducedClause), 2);
    assert_eq!(profile.count(VerbFrame::Intransitive), 3);
    assert_eq!(profile.total(), 12);
}

#[test]
fn node_ids_are_preorder() {
    let tree = support::read_trees("holmes/holmes.mrg").remove(0);
    let idx = IndexedTree::new(&tree);
    let mut expected = 0;
    fn walk(t: &Tree, idx: &IndexedTree<'_>, next: &mut usize) {
        assert!(std::ptr::eq(idx.tree(NodeId(*next)), t));
        *next += 1;
        for c in t.children() {
            walk(c, idx, next);
        }
    }
    walk(&tree, &idx, &mut expected);
    assert_eq!(expected, idx.len());
}

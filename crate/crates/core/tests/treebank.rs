mod support;

use npstat::treebank::{
    parse_trees, parse_trees_with, serialize_tree, tokenize_brackets, Dialect, NodeLabel,
    ParseError, TokenKind, Tree,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn random_trees_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..1000 {
        let tree = support::random_tree(&mut rng, 40);
        let text = serialize_tree(&tree);
        let back = parse_trees(&text).unwrap_or_else(|e| panic!("tree {i}: {e}\n{text}"));
        assert_eq!(back, vec![tree], "tree {i}");
        // canonical output is a fixed point
        assert_eq!(serialize_tree(&back[0]), text);
    }
}

#[test]
fn fixtures_round_trip() {
    let files = support::all_fixture_files();
    assert!(files.len() > 10);
    let mut checked = 0;
    for path in files {
        let text = std::fs::read_to_string(&path).unwrap();
        let Ok(trees) = parse_trees(&text) else {
            // the malformed corpus fixture is meant to fail
            assert!(
                path.to_string_lossy().contains("malformed"),
                "{}",
                path.display()
            );
            continue;
        };
        for t in &trees {
            let again = parse_trees(&serialize_tree(t)).unwrap();
            assert_eq!(again, vec![t.clone()], "{}", path.display());
            checked += 1;
        }
    }
    assert!(checked >= 250, "only {checked} fixture trees");
}

#[test]
fn several_trees_in_one_string() {
    let joined: String = (0..5)
        .map(|i| format!("( (S (NP-SBJ (PRP it)) (VP (VBD fell) (NP (CD {i})))) )\n"))
        .collect();
    let trees = parse_trees(&joined).unwrap();
    assert_eq!(trees.len(), 5);
    assert_eq!(trees[3].leaves(), vec!["it", "fell", "3"]);
}

#[test]
fn dialects_agree() {
    let wrapped = "( (S (NP-SBJ (NNP Pierre)) (VP (VBZ sleeps)) (. .)) )";
    let unwrapped = "(S (NP-SBJ (NNP Pierre)) (VP (VBZ sleeps)) (. .))";
    let a = parse_trees_with(wrapped, Dialect::Wrapped).unwrap();
    let b = parse_trees_with(unwrapped, Dialect::Unwrapped).unwrap();
    assert_eq!(a, b);
    assert!(matches!(
        parse_trees_with(unwrapped, Dialect::Wrapped),
        Err(ParseError::WrongDialect(_))
    ));
}

#[test]
fn error_offsets_point_into_input() {
    for bad in [
        "(S (NP (DT the)",
        "(S (NP))",
        "(S (NP (DT the)))) )",
        "( (DT the) x)",
    ] {
        let err = parse_trees(bad).unwrap_err();
        assert!(err.offset() <= bad.len(), "{bad}: {err:?}");
    }
}

fn label_strategy() -> impl Strategy<Value = String> {
    (
        prop::sample::select(vec!["S", "NP", "VP", "SBAR", "PP", "ADVP", "WHNP", "PRT"]),
        prop::collection::vec(
            prop::sample::select(vec!["SBJ", "TMP", "LOC", "PRD", "CLR"]),
            0..3,
        ),
        prop::option::of(1u32..50),
        prop::option::of(1u32..9),
    )
        .prop_map(|(cat, tags, co, gap)| {
            let mut s = cat.to_string();
            for t in tags {
                s.push('-');
                s.push_str(t);
            }
            if let Some(c) = co {
                s.push_str(&format!("-{c}"));
            }
            if let Some(g) = gap {
                s.push_str(&format!("={g}"));
            }
            s
        })
}

proptest! {
    #[test]
    fn labels_display_round_trip(raw in label_strategy()) {
        let label: NodeLabel = raw.parse().unwrap();
        prop_assert_eq!(label.to_string(), raw.clone());
        let again: NodeLabel = label.to_string().parse().unwrap();
        prop_assert_eq!(again, label);
    }

    #[test]
    fn tokenizer_balances_and_preserves_atoms(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tree = support::random_tree(&mut rng, 25);
        let text = serialize_tree(&tree);
        let tokens = tokenize_brackets(&text);
        let opens = tokens.iter().filter(|t| matches!(t.kind, TokenKind::Open)).count();
        let closes = tokens.iter().filter(|t| matches!(t.kind, TokenKind::Close)).count();
        prop_assert_eq!(opens, closes);
        prop_assert_eq!(opens, tree.num_nodes());
        for t in &tokens {
            prop_assert_eq!(&text[t.offset..t.offset + t.text().len()], t.text());
        }
    }

    #[test]
    fn whitespace_is_insignificant(seed in any::<u64>(), pad in "[ \t\n]{1,4}") {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tree = support::random_tree(&mut rng, 25);
        let spaced = serialize_tree(&tree).replace(' ', &pad).replace('(', &format!("{pad}("));
        let back = parse_trees(&spaced).unwrap();
        prop_assert_eq!(back, vec![tree]);
    }
}

#[test]
fn leaf_helpers() {
    let t: Tree = parse_trees("(S (NP-SBJ (-NONE- *)) (VP (VBD ran)) (. .))")
        .unwrap()
        .remove(0);
    assert_eq!(t.leaves(), vec!["*", "ran", "."]);
    assert_eq!(t.num_nodes(), 6);
    assert_eq!(t.surface_text(), "ran .");
}

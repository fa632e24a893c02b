//! Test-only helpers: fixture paths, a random tree generator and
//! definitional oracles that work on raw `Tree`s, independent of
//! `IndexedTree` and the query module.
#![allow(dead_code)]

use std::path::{Path, PathBuf};

use npstat::treebank::{parse_trees, NodeLabel, Tree};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("fixtures")
}

pub fn read_trees(rel: &str) -> Vec<Tree> {
    let text = std::fs::read_to_string(fixtures().join(rel)).unwrap();
    parse_trees(&text).unwrap()
}

/// Every `.mrg` fixture file, sorted.
pub fn all_fixture_files() -> Vec<PathBuf> {
    let mut out: Vec<PathBuf> = walk(&fixtures())
        .into_iter()
        .filter(|p| p.extension().is_some_and(|e| e == "mrg"))
        .collect();
    out.sort();
    out
}

fn walk(dir: &Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.is_dir() {
            out.extend(walk(&path));
        } else {
            out.push(path);
        }
    }
    out
}

const CATEGORIES: [&str; 6] = ["S", "SBAR", "VP", "NP", "PP", "ADVP"];
const TAGS: [&str; 5] = ["SBJ", "TMP", "LOC", "PRD", "TPC"];
const LEAVES: [(&str, &str); 14] = [
    ("DT", "the"),
    ("DT", "a"),
    ("NN", "cat"),
    ("NNP", "Larson"),
    ("PRP", "it"),
    ("VBD", "worked"),
    ("VBZ", "sings"),
    ("VB", "leave"),
    ("IN", "that"),
    ("IN", "of"),
    ("-NONE-", "*T*-1"),
    ("-NONE-", "0"),
    (",", ","),
    (".", "."),
];

fn random_label<R: Rng>(rng: &mut R) -> NodeLabel {
    let mut label = CATEGORIES.choose(rng).unwrap().to_string();
    if rng.gen_bool(0.25) {
        label.push('-');
        label.push_str(TAGS.choose(rng).unwrap());
    }
    match rng.gen_range(0..10) {
        0 => label.push_str(&format!("-{}", rng.gen_range(1..5))),
        1 => label.push_str(&format!("={}", rng.gen_range(1..5))),
        _ => {}
    }
    label.parse().unwrap()
}

/// Random tree with at most `max_nodes` nodes.
pub fn random_tree<R: Rng>(rng: &mut R, max_nodes: usize) -> Tree {
    let mut budget = max_nodes.max(2) - 1;
    let children = random_children(rng, &mut budget, 0);
    Tree::internal(random_label(rng), children)
}

fn random_children<R: Rng>(rng: &mut R, budget: &mut usize, depth: usize) -> Vec<Tree> {
    let want = rng.gen_range(1..=4);
    let mut children = Vec::new();
    while children.len() < want && *budget > 0 {
        *budget -= 1;
        let internal = *budget > 0 && depth < 6 && rng.gen_bool(0.55);
        if internal {
            let grand = random_children(rng, budget, depth + 1);
            children.push(Tree::internal(random_label(rng), grand));
        } else {
            let (pos, tok) = LEAVES.choose(rng).unwrap();
            children.push(Tree::leaf(pos, tok));
        }
    }
    if children.is_empty() {
        // budget ran out before the first child; reuse the last slot as a leaf
        let (pos, tok) = LEAVES.choose(rng).unwrap();
        children.push(Tree::leaf(pos, tok));
    }
    children
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OraclePosition {
    Subject,
    NonSubject,
}

/// NP positions by the two definitions, as (pre-order index, position).
pub fn oracle_np_positions(tree: &Tree) -> Vec<(usize, OraclePosition)> {
    let mut out = Vec::new();
    let mut counter = 0;
    oracle_walk(tree, None, &mut counter, &mut out);
    out
}

fn oracle_walk(
    node: &Tree,
    parent_and_pos: Option<(&Tree, usize)>,
    counter: &mut usize,
    out: &mut Vec<(usize, OraclePosition)>,
) {
    let my_id = *counter;
    *counter += 1;
    if let (Some("NP"), Some((parent, at))) = (node.category(), parent_and_pos) {
        let siblings = parent.children();
        match parent.category() {
            // "immediately dominated by VP"
            Some("VP") => out.push((my_id, OraclePosition::NonSubject)),
            // "immediately dominated by S and followed (not necessarily immediately) by a VP"
            Some("S") => {
                let followed = siblings[at + 1..]
                    .iter()
                    .any(|s| s.category() == Some("VP"));
                out.push((
                    my_id,
                    if followed {
                        OraclePosition::Subject
                    } else {
                        OraclePosition::NonSubject
                    },
                ));
            }
            _ => {}
        }
    }
    for (i, child) in node.children().iter().enumerate() {
        oracle_walk(child, Some((node, i)), counter, out);
    }
}

pub fn is_punct_tag(pos: &str) -> bool {
    matches!(
        pos,
        "," | "." | ":" | "``" | "''" | "-LRB-" | "-RRB-" | "$" | "#"
    )
}

/// Leaf-sequence re-check of a late-closure match: the verb at
/// `verb_leaf` is the last word of leaves `vp_leaves`, and the next overt
/// leaf is not punctuation and begins the NP covering `np_leaves`.
pub fn oracle_late_closure_ok(
    tree: &Tree,
    vp_leaves: std::ops::Range<usize>,
    verb_leaf: usize,
    np_leaves: std::ops::Range<usize>,
) -> bool {
    let leaves: Vec<(&str, &str)> = tree
        .leaf_nodes()
        .into_iter()
        .map(|l| (l.pos().unwrap(), l.token().unwrap()))
        .collect();
    let overt = |i: usize| leaves[i].0 != "-NONE-";
    let is_verb = matches!(
        leaves[verb_leaf].0,
        "VB" | "VBD" | "VBG" | "VBN" | "VBP" | "VBZ"
    );
    let last_word = (verb_leaf + 1..vp_leaves.end).all(|i| !overt(i) || is_punct_tag(leaves[i].0));
    let next = (verb_leaf + 1..leaves.len()).find(|&i| overt(i));
    let np_first = np_leaves.clone().find(|&i| overt(i));
    is_verb
        && vp_leaves.contains(&verb_leaf)
        && last_word
        && next.is_some()
        && next == np_first
        && !is_punct_tag(leaves[next.unwrap()].0)
}

/// Copy of `tree` with `new_leaf` inserted as the sibling right after the
/// node at pre-order index `target`; if `target` is the root it is appended
/// as its last child instead.
pub fn insert_after(tree: &Tree, target: usize, new_leaf: Tree) -> Tree {
    if target == 0 {
        let mut children = tree.children().to_vec();
        children.push(new_leaf);
        return Tree::internal(tree.label().unwrap().clone(), children);
    }
    let mut counter = 0;
    insert_rec(tree, target, &new_leaf, &mut counter)
}

fn insert_rec(node: &Tree, target: usize, new_leaf: &Tree, counter: &mut usize) -> Tree {
    *counter += 1;
    match node {
        Tree::Leaf { .. } => node.clone(),
        Tree::Internal { label, children } => {
            let mut out = Vec::new();
            for child in children {
                let id = *counter;
                out.push(insert_rec(child, target, new_leaf, counter));
                if id == target {
                    out.push(new_leaf.clone());
                }
            }
            Tree::internal(label.clone(), out)
        }
    }
}

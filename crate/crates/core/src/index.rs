//! Flat, parent-linked view of a [`Tree`] for structural queries.

use std::ops::Range;
use std::sync::Arc;

use crate::treebank::{is_empty_leaf, SourceSpan, Tree};

/// Pre-order position of a node within one sentence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

#[derive(Debug)]
struct NodeInfo<'a> {
    tree: &'a Tree,
    parent: Option<NodeId>,
    children: Vec<NodeId>,
    leaf_range: Range<usize>,
}

/// Identifies a sentence within a corpus.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SentenceId {
    pub file_id: Arc<str>,
    pub index: usize,
}

impl SentenceId {
    pub fn new(file_id: impl Into<Arc<str>>, index: usize) -> Self {
        SentenceId {
            file_id: file_id.into(),
            index,
        }
    }
}

pub struct IndexedTree<'a> {
    root: &'a Tree,
    nodes: Vec<NodeInfo<'a>>,
    /// node id of each leaf, in surface order
    leaves: Vec<NodeId>,
    sentence: SentenceId,
}

impl<'a> IndexedTree<'a> {
    pub fn new(tree: &'a Tree) -> Self {
        Self::with_sentence(tree, SentenceId::default())
    }

    pub fn with_sentence(tree: &'a Tree, sentence: SentenceId) -> Self {
        let mut idx = IndexedTree {
            root: tree,
            nodes: Vec::with_capacity(tree.num_nodes()),
            leaves: Vec::new(),
            sentence,
        };
        idx.visit(tree, None);
        idx
    }

    fn visit(&mut self, tree: &'a Tree, parent: Option<NodeId>) -> NodeId {
        let id = NodeId(self.nodes.len());
        let first_leaf = self.leaves.len();
        self.nodes.push(NodeInfo {
            tree,
            parent,
            children: Vec::new(),
            leaf_range: first_leaf..first_leaf,
        });
        if tree.is_leaf() {
            self.leaves.push(id);
        } else {
            let children: Vec<NodeId> = tree
                .children()
                .iter()
                .map(|c| self.visit(c, Some(id)))
                .collect();
            self.nodes[id.0].children = children;
        }
        self.nodes[id.0].leaf_range.end = self.leaves.len();
        id
    }

    pub fn root(&self) -> NodeId {
        NodeId(0)
    }

    pub fn root_tree(&self) -> &'a Tree {
        self.root
    }

    pub fn sentence(&self) -> &SentenceId {
        &self.sentence
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.nodes.len()).map(NodeId)
    }

    pub fn tree(&self, id: NodeId) -> &'a Tree {
        self.nodes[id.0].tree
    }

    pub fn category(&self, id: NodeId) -> Option<&'a str> {
        self.tree(id).category()
    }

    pub fn has_category(&self, id: NodeId, category: &str) -> bool {
        self.category(id) == Some(category)
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.nodes[id.0].parent
    }

    pub fn children(&self, id: NodeId) -> &[NodeId] {
        &self.nodes[id.0].children
    }

    /// Siblings after `id` under the same parent, in order.
    pub fn following_siblings(&self, id: NodeId) -> &[NodeId] {
        match self.parent(id) {
            Some(p) => {
                let sibs = self.children(p);
                let at = sibs.iter().position(|&s| s == id).expect("child of parent");
                &sibs[at + 1..]
            }
            None => &[],
        }
    }

    /// Siblings before `id` under the same parent, in order.
    pub fn preceding_siblings(&self, id: NodeId) -> &[NodeId] {
        match self.parent(id) {
            Some(p) => {
                let sibs = self.children(p);
                let at = sibs.iter().position(|&s| s == id).expect("child of parent");
                &sibs[..at]
            }
            None => &[],
        }
    }

    /// Proper ancestors, nearest first.
    pub fn ancestors(&self, id: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        std::iter::successors(self.parent(id), move |&a| self.parent(a))
    }

    pub fn leaf_range(&self, id: NodeId) -> Range<usize> {
        self.nodes[id.0].leaf_range.clone()
    }

    pub fn num_leaves(&self) -> usize {
        self.leaves.len()
    }

    /// Node id of the `i`-th leaf in surface order.
    pub fn leaf(&self, i: usize) -> NodeId {
        self.leaves[i]
    }

    pub fn leaf_tree(&self, i: usize) -> &'a Tree {
        self.tree(self.leaves[i])
    }

    pub fn is_empty_leaf_at(&self, i: usize) -> bool {
        is_empty_leaf(self.leaf_tree(i))
    }

    /// Index of the first non-empty leaf at or after `i`.
    pub fn next_overt_leaf(&self, from: usize) -> Option<usize> {
        (from..self.num_leaves()).find(|&i| !self.is_empty_leaf_at(i))
    }

    /// Overt (non-empty) leaf indices under `id`.
    pub fn overt_leaves(&self, id: NodeId) -> impl DoubleEndedIterator<Item = usize> + '_ {
        self.leaf_range(id)
            .filter(move |&i| !self.is_empty_leaf_at(i))
    }

    pub fn span(&self, id: NodeId) -> SourceSpan {
        SourceSpan {
            file_id: self.sentence.file_id.to_string(),
            sentence_index: self.sentence.index,
            leaf_range: self.leaf_range(id),
        }
    }

    /// Overt tokens under `id` joined by spaces.
    pub fn text(&self, id: NodeId) -> String {
        self.overt_leaves(id)
            .filter_map(|i| self.leaf_tree(i).token())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

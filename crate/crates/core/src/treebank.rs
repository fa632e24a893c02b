//! Penn-Treebank-style bracketed trees: tokenizing, parsing, serializing.
//!
//! Trees are immutable once built. Labels of internal nodes are decomposed
//! into a category, an ordered list of function tags and an optional
//! coindex (`NP-SBJ-1` is category `NP`, tags `["SBJ"]`, coindex `1`).
//! Preterminals are kept verbatim as `Leaf { pos, token }`.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// POS tag of empty categories (traces, null complementizers, ...).
pub const EMPTY_POS: &str = "-NONE-";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind<'a> {
    Open,
    Close,
    Atom(&'a str),
}

/// A lexical token together with its byte range in the input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Token<'a> {
    pub kind: TokenKind<'a>,
    pub offset: usize,
}

impl Token<'_> {
    pub fn text(&self) -> &str {
        match self.kind {
            TokenKind::Open => "(",
            TokenKind::Close => ")",
            TokenKind::Atom(s) => s,
        }
    }
}

/// Split bracketed text into open/close/atom tokens. Total: never fails.
pub fn tokenize_brackets(text: &str) -> Vec<Token<'_>> {
    let mut tokens = Vec::new();
    let mut atom_start: Option<usize> = None;
    for (i, ch) in text.char_indices() {
        let boundary = ch == '(' || ch == ')' || ch.is_whitespace();
        if boundary {
            if let Some(start) = atom_start.take() {
                tokens.push(Token {
                    kind: TokenKind::Atom(&text[start..i]),
                    offset: start,
                });
            }
            match ch {
                '(' => tokens.push(Token {
                    kind: TokenKind::Open,
                    offset: i,
                }),
                ')' => tokens.push(Token {
                    kind: TokenKind::Close,
                    offset: i,
                }),
                _ => {}
            }
        } else if atom_start.is_none() {
            atom_start = Some(i);
        }
    }
    if let Some(start) = atom_start {
        tokens.push(Token {
            kind: TokenKind::Atom(&text[start..]),
            offset: start,
        });
    }
    tokens
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unbalanced brackets at byte {0}")]
    UnbalancedBrackets(usize),
    #[error("empty constituent at byte {0}")]
    EmptyConstituent(usize),
    #[error("unlabeled constituent at byte {0}")]
    MissingLabel(usize),
    #[error("text outside of a constituent at byte {0}")]
    StrayAtom(usize),
    #[error("malformed node label {label:?} at byte {offset}")]
    InvalidLabel { label: String, offset: usize },
    #[error("top-level tree at byte {0} does not match the expected wrapping")]
    WrongDialect(usize),
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match *self {
            ParseError::UnbalancedBrackets(o)
            | ParseError::EmptyConstituent(o)
            | ParseError::MissingLabel(o)
            | ParseError::StrayAtom(o)
            | ParseError::WrongDialect(o) => o,
            ParseError::InvalidLabel { offset, .. } => offset,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabelError {
    #[error("empty label")]
    Empty,
    #[error("empty segment in label {0:?}")]
    EmptySegment(String),
}

/// Decomposed label of an internal node.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NodeLabel {
    category: String,
    function_tags: Vec<String>,
    coindex: Option<u32>,
}

impl NodeLabel {
    /// Label with only a category. Panics if `category` is not a valid bare category.
    pub fn new(category: &str) -> NodeLabel {
        let label: NodeLabel = category.parse().expect("invalid category");
        assert!(
            label.function_tags.is_empty() && label.coindex.is_none(),
            "category {category:?} carries tags"
        );
        label
    }

    pub fn category(&self) -> &str {
        &self.category
    }

    /// Function tags in order. Gap indices (`NP=2`) are kept here as `"=2"`.
    pub fn function_tags(&self) -> &[String] {
        &self.function_tags
    }

    pub fn coindex(&self) -> Option<u32> {
        self.coindex
    }

    pub fn has_tag(&self, tag: &str) -> bool {
        self.function_tags.iter().any(|t| t == tag)
    }
}

impl FromStr for NodeLabel {
    type Err = LabelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Err(LabelError::Empty);
        }
        // Segments keep their '=' marker; '-' is a plain separator.
        let mut segments: Vec<&str> = Vec::new();
        let mut start = 0;
        for (i, ch) in s.char_indices() {
            match ch {
                '-' => {
                    segments.push(&s[start..i]);
                    start = i + 1;
                }
                '=' => {
                    segments.push(&s[start..i]);
                    start = i;
                }
                _ => {}
            }
        }
        segments.push(&s[start..]);

        if segments.iter().any(|seg| seg.is_empty() || *seg == "=") {
            return Err(LabelError::EmptySegment(s.to_string()));
        }
        let category = segments[0];
        if category.starts_with('=') {
            return Err(LabelError::EmptySegment(s.to_string()));
        }

        let mut tags: Vec<String> = segments[1..].iter().map(|t| t.to_string()).collect();
        let mut coindex = None;
        if let Some(last) = tags.last() {
            if last.bytes().all(|b| b.is_ascii_digit()) {
                if let Ok(n) = last.parse::<u32>() {
                    // only canonical numerals, so that reassembly is lossless
                    if n.to_string() == *last {
                        coindex = Some(n);
                        tags.pop();
                    }
                }
            }
        }
        Ok(NodeLabel {
            category: category.to_string(),
            function_tags: tags,
            coindex,
        })
    }
}

impl fmt::Display for NodeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.category)?;
        for tag in &self.function_tags {
            if tag.starts_with('=') {
                f.write_str(tag)?;
            } else {
                write!(f, "-{tag}")?;
            }
        }
        if let Some(n) = self.coindex {
            write!(f, "-{n}")?;
        }
        Ok(())
    }
}

/// Immutable constituency tree.
///
/// `Internal` nodes always have at least one child when produced by the
/// parser; building one by hand with no children yields a tree that
/// serializes but does not parse back.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Tree {
    Internal {
        label: NodeLabel,
        children: Vec<Tree>,
    },
    Leaf {
        pos: String,
        token: String,
    },
}

impl Tree {
    pub fn leaf(pos: &str, token: &str) -> Tree {
        Tree::Leaf {
            pos: pos.to_string(),
            token: token.to_string(),
        }
    }

    pub fn internal(label: NodeLabel, children: Vec<Tree>) -> Tree {
        Tree::Internal { label, children }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Tree::Leaf { .. })
    }

    pub fn label(&self) -> Option<&NodeLabel> {
        match self {
            Tree::Internal { label, .. } => Some(label),
            Tree::Leaf { .. } => None,
        }
    }

    /// Category of an internal node; `None` for leaves.
    pub fn category(&self) -> Option<&str> {
        self.label().map(NodeLabel::category)
    }

    pub fn children(&self) -> &[Tree] {
        match self {
            Tree::Internal { children, .. } => children,
            Tree::Leaf { .. } => &[],
        }
    }

    pub fn pos(&self) -> Option<&str> {
        match self {
            Tree::Leaf { pos, .. } => Some(pos),
            Tree::Internal { .. } => None,
        }
    }

    pub fn token(&self) -> Option<&str> {
        match self {
            Tree::Leaf { token, .. } => Some(token),
            Tree::Internal { .. } => None,
        }
    }

    /// Leaf nodes in surface order.
    pub fn leaf_nodes(&self) -> Vec<&Tree> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a Tree>) {
        match self {
            Tree::Leaf { .. } => out.push(self),
            Tree::Internal { children, .. } => {
                for child in children {
                    child.collect_leaves(out);
                }
            }
        }
    }

    /// Terminal tokens in surface order.
    pub fn leaves(&self) -> Vec<&str> {
        self.leaf_nodes()
            .into_iter()
            .filter_map(Tree::token)
            .collect()
    }

    pub fn num_nodes(&self) -> usize {
        1 + self.children().iter().map(Tree::num_nodes).sum::<usize>()
    }

    /// Tokens joined by single spaces, empty categories omitted.
    pub fn surface_text(&self) -> String {
        self.leaf_nodes()
            .into_iter()
            .filter(|l| l.pos() != Some(EMPTY_POS))
            .filter_map(Tree::token)
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn write_brackets(&self, out: &mut String) {
        match self {
            Tree::Leaf { pos, token } => {
                out.push('(');
                out.push_str(pos);
                out.push(' ');
                out.push_str(token);
                out.push(')');
            }
            Tree::Internal { label, children } => {
                out.push('(');
                out.push_str(&label.to_string());
                for child in children {
                    out.push(' ');
                    child.write_brackets(out);
                }
                out.push(')');
            }
        }
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_tree(self))
    }
}

/// Canonical single-space bracketed form, without the outer wrapper.
pub fn serialize_tree(tree: &Tree) -> String {
    let mut out = String::new();
    tree.write_brackets(&mut out);
    out
}

/// Whether top-level trees are wrapped in an unlabeled `( ... )` pair.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dialect {
    Wrapped,
    Unwrapped,
    #[default]
    Auto,
}

/// Parse zero or more top-level trees, accepting wrapped and unwrapped forms.
pub fn parse_trees(text: &str) -> Result<Vec<Tree>, ParseError> {
    parse_trees_with(text, Dialect::Auto)
}

pub fn parse_trees_with(text: &str, dialect: Dialect) -> Result<Vec<Tree>, ParseError> {
    let tokens = tokenize_brackets(text);
    let mut parser = Parser {
        tokens: &tokens,
        pos: 0,
        end: text.len(),
    };
    let mut trees = Vec::new();
    while let Some(tok) = parser.peek().copied() {
        match tok.kind {
            TokenKind::Open => {}
            TokenKind::Close => return Err(ParseError::UnbalancedBrackets(tok.offset)),
            TokenKind::Atom(_) => return Err(ParseError::StrayAtom(tok.offset)),
        }
        let wrapped = matches!(parser.peek_at(1).map(|t| t.kind), Some(TokenKind::Open));
        match (wrapped, dialect) {
            (true, Dialect::Unwrapped) | (false, Dialect::Wrapped) => {
                return Err(ParseError::WrongDialect(tok.offset))
            }
            _ => {}
        }
        if wrapped {
            parser.bump();
            loop {
                match parser.peek().copied() {
                    Some(Token {
                        kind: TokenKind::Close,
                        ..
                    }) => {
                        parser.bump();
                        break;
                    }
                    Some(Token {
                        kind: TokenKind::Open,
                        ..
                    }) => trees.push(parser.constituent()?),
                    Some(Token {
                        kind: TokenKind::Atom(_),
                        offset,
                    }) => return Err(ParseError::StrayAtom(offset)),
                    None => return Err(ParseError::UnbalancedBrackets(tok.offset)),
                }
            }
        } else {
            trees.push(parser.constituent()?);
        }
    }
    Ok(trees)
}

struct Parser<'t, 'a> {
    tokens: &'t [Token<'a>],
    pos: usize,
    end: usize,
}

impl<'a> Parser<'_, 'a> {
    fn peek(&self) -> Option<&Token<'a>> {
        self.tokens.get(self.pos)
    }

    fn peek_at(&self, ahead: usize) -> Option<&Token<'a>> {
        self.tokens.get(self.pos + ahead)
    }

    fn bump(&mut self) -> Option<Token<'a>> {
        let tok = self.tokens.get(self.pos).copied();
        self.pos += 1;
        tok
    }

    /// Parse `( LABEL child+ )` or `( POS token )`; the cursor is on the open bracket.
    fn constituent(&mut self) -> Result<Tree, ParseError> {
        let open = self.bump().expect("caller checked for an open bracket");
        let label = match self.bump() {
            Some(Token {
                kind: TokenKind::Atom(a),
                ..
            }) => a,
            Some(Token {
                kind: TokenKind::Close,
                ..
            }) => return Err(ParseError::EmptyConstituent(open.offset)),
            Some(Token {
                kind: TokenKind::Open,
                ..
            }) => return Err(ParseError::MissingLabel(open.offset)),
            None => return Err(ParseError::UnbalancedBrackets(self.end)),
        };

        // (TAG word)
        if let (
            Some(Token {
                kind: TokenKind::Atom(word),
                ..
            }),
            Some(Token {
                kind: TokenKind::Close,
                ..
            }),
        ) = (self.peek().copied(), self.peek_at(1).copied())
        {
            self.pos += 2;
            return Ok(Tree::leaf(label, word));
        }

        let parsed_label: NodeLabel = label.parse().map_err(|_| ParseError::InvalidLabel {
            label: label.to_string(),
            offset: open.offset + 1,
        })?;
        let mut children = Vec::new();
        loop {
            match self.peek().copied() {
                Some(Token {
                    kind: TokenKind::Open,
                    ..
                }) => children.push(self.constituent()?),
                Some(Token {
                    kind: TokenKind::Close,
                    ..
                }) => {
                    self.pos += 1;
                    break;
                }
                Some(Token {
                    kind: TokenKind::Atom(_),
                    offset,
                }) => return Err(ParseError::StrayAtom(offset)),
                None => return Err(ParseError::UnbalancedBrackets(self.end)),
            }
        }
        if children.is_empty() {
            return Err(ParseError::EmptyConstituent(open.offset));
        }
        Ok(Tree::internal(parsed_label, children))
    }
}

/// POS tags treated as punctuation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PunctuationSet {
    tags: BTreeSet<String>,
}

const CORE_PUNCTUATION: [&str; 7] = [",", ".", ":", "``", "''", "-LRB-", "-RRB-"];
const SYMBOL_PUNCTUATION: [&str; 2] = ["$", "#"];

impl Default for PunctuationSet {
    fn default() -> Self {
        PunctuationSet::new(true)
    }
}

impl PunctuationSet {
    /// Brown/WSJ punctuation tags; `include_symbols` adds `$` and `#`.
    pub fn new(include_symbols: bool) -> Self {
        let mut tags: BTreeSet<String> = CORE_PUNCTUATION.iter().map(|s| s.to_string()).collect();
        if include_symbols {
            tags.extend(SYMBOL_PUNCTUATION.iter().map(|s| s.to_string()));
        }
        PunctuationSet { tags }
    }

    pub fn contains_tag(&self, pos: &str) -> bool {
        self.tags.contains(pos)
    }

    pub fn tags(&self) -> impl Iterator<Item = &str> {
        self.tags.iter().map(String::as_str)
    }

    /// True iff `leaf` is a leaf whose POS is in the set.
    pub fn is_punctuation(&self, leaf: &Tree) -> bool {
        leaf.pos().is_some_and(|p| self.contains_tag(p))
    }
}

/// Punctuation test against the default tag set.
pub fn is_punctuation(leaf: &Tree) -> bool {
    PunctuationSet::default().is_punctuation(leaf)
}

pub fn is_empty_leaf(leaf: &Tree) -> bool {
    leaf.pos() == Some(EMPTY_POS)
}

/// True iff every leaf under `node` is an empty category.
pub fn is_empty_category(node: &Tree) -> bool {
    node.leaf_nodes().into_iter().all(is_empty_leaf)
}

/// Provenance of a constituent: file, sentence and half-open leaf range.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SourceSpan {
    pub file_id: String,
    pub sentence_index: usize,
    pub leaf_range: Range<usize>,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}:{}-{}",
            self.file_id, self.sentence_index, self.leaf_range.start, self.leaf_range.end
        )
    }
}

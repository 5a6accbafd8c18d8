//! Decomposition trees of separable permutations.
//!
//! A decomposition tree is a plane tree whose internal nodes carry a sign
//! (`+` for a direct sum, `-` for a skew sum), have at least two children,
//! and alternate in sign between parent and internal child. Separable
//! permutations and decomposition trees are in bijection via [`decompose`]
//! and [`compose`].
//!
//! Text format: a leaf is `.`, an internal node is its sign followed by the
//! parenthesised, comma-separated children, e.g.
//! `+(-(.,.),-(+(.,.),.,.),.,-(.,.))` for 215643798.

mod canonical;
mod exchange;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combinat::Subsets;
use crate::partition::Partition;
use crate::perm::{Permutation, Symmetry};

pub use canonical::{canonicalize, replay, Move};
pub use exchange::{forest_exchange, subtree_exchange, transport_marks, Exchange};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("permutation {0} is not separable")]
    NotSeparable(Permutation),
    #[error("internal node at {0} has fewer than two children")]
    UnaryNode(NodePath),
    #[error("internal node at {0} has the same sign as its parent")]
    SameSignChild(NodePath),
    #[error("no node at path {0}")]
    InvalidPath(NodePath),
    #[error("node {0} is an ancestor of (or equal to) node {1}")]
    Ancestry(NodePath, NodePath),
    #[error("node {0} is a leaf where an internal node is required")]
    NotInternal(NodePath),
    #[error("rightmost child of node {0} is a leaf")]
    RightmostChildLeaf(NodePath),
    #[error("empty leaf set")]
    EmptyLeafSet,
    #[error("leaf position {position} out of range 1..={leaves}")]
    LeafOutOfRange { position: usize, leaves: usize },
    #[error("marked leaves do not form an occurrence of the expected pattern")]
    NotMarkedFor,
    #[error("empty permutation has no decomposition tree")]
    Empty,
    #[error("cannot parse tree: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    /// Direct sum, written `+`.
    Plus,
    /// Skew sum, written `-`.
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// Address of a node as the sequence of 0-based child indices from the root.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct NodePath(pub Vec<usize>);

impl NodePath {
    pub fn root() -> Self {
        NodePath(Vec::new())
    }

    pub fn child(&self, i: usize) -> NodePath {
        let mut v = self.0.clone();
        v.push(i);
        NodePath(v)
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    /// Non-strict: every path is a prefix of itself.
    pub fn is_prefix_of(&self, other: &NodePath) -> bool {
        other.0.starts_with(&self.0)
    }
}

impl From<Vec<usize>> for NodePath {
    fn from(v: Vec<usize>) -> Self {
        NodePath(v)
    }
}

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "[{}]", parts.join("."))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DecompositionTree {
    Leaf,
    Node(Sign, Vec<DecompositionTree>),
}

impl DecompositionTree {
    /// Builds an internal node, checking arity and alternation against the
    /// children.
    pub fn node(sign: Sign, children: Vec<DecompositionTree>) -> Result<Self, TreeError> {
        let t = DecompositionTree::Node(sign, children);
        t.validate()?;
        Ok(t)
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, DecompositionTree::Leaf)
    }

    pub fn sign(&self) -> Option<Sign> {
        match self {
            DecompositionTree::Leaf => None,
            DecompositionTree::Node(s, _) => Some(*s),
        }
    }

    pub fn children(&self) -> &[DecompositionTree] {
        match self {
            DecompositionTree::Leaf => &[],
            DecompositionTree::Node(_, c) => c,
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            DecompositionTree::Leaf => 1,
            DecompositionTree::Node(_, c) => c.iter().map(|t| t.leaf_count()).sum(),
        }
    }

    pub fn internal_count(&self) -> usize {
        match self {
            DecompositionTree::Leaf => 0,
            DecompositionTree::Node(_, c) => {
                1 + c.iter().map(|t| t.internal_count()).sum::<usize>()
            }
        }
    }

    pub fn validate(&self) -> Result<(), TreeError> {
        fn go(
            t: &DecompositionTree,
            path: &mut Vec<usize>,
            parent: Option<Sign>,
        ) -> Result<(), TreeError> {
            let DecompositionTree::Node(sign, children) = t else {
                return Ok(());
            };
            if children.len() < 2 {
                return Err(TreeError::UnaryNode(NodePath(path.clone())));
            }
            if parent == Some(*sign) {
                return Err(TreeError::SameSignChild(NodePath(path.clone())));
            }
            for (i, c) in children.iter().enumerate() {
                path.push(i);
                go(c, path, Some(*sign))?;
                path.pop();
            }
            Ok(())
        }
        go(self, &mut Vec::new(), None)
    }

    pub fn get(&self, path: &NodePath) -> Option<&DecompositionTree> {
        let mut cur = self;
        for &i in &path.0 {
            cur = cur.children().get(i)?;
        }
        Some(cur)
    }

    /// Paths of all nodes in preorder.
    pub fn node_paths(&self) -> Vec<NodePath> {
        fn go(t: &DecompositionTree, path: &mut Vec<usize>, out: &mut Vec<NodePath>) {
            out.push(NodePath(path.clone()));
            for (i, c) in t.children().iter().enumerate() {
                path.push(i);
                go(c, path, out);
                path.pop();
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Paths of the internal nodes in preorder.
    pub fn internal_paths(&self) -> Vec<NodePath> {
        self.node_paths()
            .into_iter()
            .filter(|p| !self.get(p).unwrap().is_leaf())
            .collect()
    }

    /// Internal-node signs recomputed by depth parity from `root`.
    pub fn with_root_sign(&self, root: Sign) -> DecompositionTree {
        match self {
            DecompositionTree::Leaf => DecompositionTree::Leaf,
            DecompositionTree::Node(_, c) => DecompositionTree::Node(
                root,
                c.iter().map(|t| t.with_root_sign(root.flip())).collect(),
            ),
        }
    }

    /// Every internal sign flipped (the complement symmetry).
    pub fn flipped(&self) -> DecompositionTree {
        match self {
            DecompositionTree::Leaf => DecompositionTree::Leaf,
            DecompositionTree::Node(s, c) => {
                DecompositionTree::Node(s.flip(), c.iter().map(|t| t.flipped()).collect())
            }
        }
    }

    fn mirrored(&self, only: Option<Sign>, flip: bool) -> DecompositionTree {
        match self {
            DecompositionTree::Leaf => DecompositionTree::Leaf,
            DecompositionTree::Node(s, c) => {
                let mut kids: Vec<_> = c.iter().map(|t| t.mirrored(only, flip)).collect();
                if only.is_none_or(|o| o == *s) {
                    kids.reverse();
                }
                DecompositionTree::Node(if flip { s.flip() } else { *s }, kids)
            }
        }
    }
}

impl fmt::Display for DecompositionTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecompositionTree::Leaf => f.write_str("."),
            DecompositionTree::Node(s, c) => {
                write!(f, "{}(", s.as_char())?;
                for (i, t) in c.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{t}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl FromStr for DecompositionTree {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, TreeError> {
        struct Parser<'a> {
            bytes: &'a [u8],
            pos: usize,
        }
        impl Parser<'_> {
            fn err(&self, what: &str) -> TreeError {
                TreeError::Parse(format!("{what} at byte {}", self.pos))
            }
            fn tree(&mut self) -> Result<DecompositionTree, TreeError> {
                match self.bytes.get(self.pos) {
                    Some(b'.') => {
                        self.pos += 1;
                        Ok(DecompositionTree::Leaf)
                    }
                    Some(&c @ (b'+' | b'-')) => {
                        self.pos += 1;
                        let sign = if c == b'+' { Sign::Plus } else { Sign::Minus };
                        if self.bytes.get(self.pos) != Some(&b'(') {
                            return Err(self.err("expected '('"));
                        }
                        self.pos += 1;
                        let mut children = vec![self.tree()?];
                        loop {
                            match self.bytes.get(self.pos) {
                                Some(b',') => {
                                    self.pos += 1;
                                    children.push(self.tree()?);
                                }
                                Some(b')') => {
                                    self.pos += 1;
                                    return Ok(DecompositionTree::Node(sign, children));
                                }
                                _ => return Err(self.err("expected ',' or ')'")),
                            }
                        }
                    }
                    _ => Err(self.err("expected '.', '+' or '-'")),
                }
            }
        }
        let mut p = Parser {
            bytes: s.trim().as_bytes(),
            pos: 0,
        };
        let t = p.tree()?;
        if p.pos != p.bytes.len() {
            return Err(p.err("trailing input"));
        }
        t.validate()?;
        Ok(t)
    }
}

/// `Γ(π)`: the decomposition tree of a separable permutation.
pub fn decompose(pi: &Permutation) -> Result<DecompositionTree, TreeError> {
    match pi.len() {
        0 => Err(TreeError::Empty),
        1 => Ok(DecompositionTree::Leaf),
        _ => {
            let (sign, blocks) = {
                let sum = pi.sum_blocks();
                if sum.len() >= 2 {
                    (Sign::Plus, sum)
                } else {
                    let skew = pi.skew_blocks();
                    if skew.len() < 2 {
                        return Err(TreeError::NotSeparable(pi.clone()));
                    }
                    (Sign::Minus, skew)
                }
            };
            let children = blocks
                .iter()
                .map(decompose)
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| TreeError::NotSeparable(pi.clone()))?;
            Ok(DecompositionTree::Node(sign, children))
        }
    }
}

/// `Γ⁻¹`: the separable permutation with the given decomposition tree.
pub fn compose(tree: &DecompositionTree) -> Result<Permutation, TreeError> {
    tree.validate()?;
    Ok(compose_unchecked(tree))
}

fn compose_unchecked(tree: &DecompositionTree) -> Permutation {
    match tree {
        DecompositionTree::Leaf => Permutation::identity(1),
        DecompositionTree::Node(sign, children) => {
            let mut parts = children.iter().map(compose_unchecked);
            let first = parts.next().expect("internal node without children");
            parts.fold(first, |acc, p| match sign {
                Sign::Plus => acc.direct_sum(&p),
                Sign::Minus => acc.skew_sum(&p),
            })
        }
    }
}

/// Multiset of (down-degree − 1) over the internal nodes.
pub fn signature(tree: &DecompositionTree) -> Partition {
    fn go(t: &DecompositionTree, out: &mut Vec<usize>) {
        if let DecompositionTree::Node(_, c) = t {
            out.push(c.len() - 1);
            c.iter().for_each(|t| go(t, out));
        }
    }
    let mut parts = Vec::new();
    go(tree, &mut parts);
    Partition::from_multiset(parts).expect("internal nodes have at least two children")
}

fn check_leaf_set(tree: &DecompositionTree, leaves: &[usize]) -> Result<Vec<bool>, TreeError> {
    if leaves.is_empty() {
        return Err(TreeError::EmptyLeafSet);
    }
    let n = tree.leaf_count();
    let mut marks = vec![false; n];
    for &l in leaves {
        if l == 0 || l > n {
            return Err(TreeError::LeafOutOfRange {
                position: l,
                leaves: n,
            });
        }
        marks[l - 1] = true;
    }
    Ok(marks)
}

/// Reduced skeleton of a set of 1-based leaf positions: least common parents
/// of all subsets, with same-sign adjacent nodes contracted.
pub fn reduced_skeleton(
    tree: &DecompositionTree,
    leaves: &[usize],
) -> Result<DecompositionTree, TreeError> {
    let marks = check_leaf_set(tree, leaves)?;
    Ok(skeleton_of_marks(tree, &marks))
}

pub(crate) fn skeleton_of_marks(tree: &DecompositionTree, marks: &[bool]) -> DecompositionTree {
    fn go(t: &DecompositionTree, marks: &[bool], next: &mut usize) -> Option<DecompositionTree> {
        match t {
            DecompositionTree::Leaf => {
                let m = marks[*next];
                *next += 1;
                m.then_some(DecompositionTree::Leaf)
            }
            DecompositionTree::Node(sign, children) => {
                let kept: Vec<DecompositionTree> =
                    children.iter().filter_map(|c| go(c, marks, next)).collect();
                match kept.len() {
                    0 => None,
                    1 => kept.into_iter().next(),
                    _ => {
                        let mut merged = Vec::with_capacity(kept.len());
                        for k in kept {
                            match k {
                                DecompositionTree::Node(s, grand) if s == *sign => {
                                    merged.extend(grand)
                                }
                                other => merged.push(other),
                            }
                        }
                        Some(DecompositionTree::Node(*sign, merged))
                    }
                }
            }
        }
    }
    let mut next = 0;
    go(tree, marks, &mut next).expect("nonempty leaf set")
}

/// `ν_σ(π)` counted on trees: leaf subsets of `Γ(π)` whose reduced skeleton
/// is `Γ(σ)`.
pub fn occurrences_by_skeleton(sigma: &Permutation, pi: &Permutation) -> Result<u64, TreeError> {
    let pattern = decompose(sigma)?;
    let text = decompose(pi)?;
    let n = text.leaf_count();
    let k = sigma.len();
    let mut marks = vec![false; n];
    let mut count = 0;
    let mut subsets = Subsets::new(n, k);
    while let Some(idx) = subsets.next_subset() {
        marks.iter_mut().for_each(|m| *m = false);
        idx.iter().for_each(|&i| marks[i] = true);
        if skeleton_of_marks(&text, &marks) == pattern {
            count += 1;
        }
    }
    Ok(count)
}

/// The image of a tree under a symmetry of the square, computed on the tree:
/// complement flips every sign, reverse flips every sign and reverses every
/// child list, inverse reverses the child lists of `-` nodes.
pub fn tree_symmetry(tree: &DecompositionTree, g: Symmetry) -> DecompositionTree {
    let mut t = tree.clone();
    for gen in g.generator_word() {
        t = match gen {
            Symmetry::INVERSE => t.mirrored(Some(Sign::Minus), false),
            Symmetry::REVERSE => t.mirrored(None, true),
            _ => t.flipped(),
        };
    }
    t
}

/// A tree together with a set of marked leaves (1-based positions).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarkedTree {
    tree: DecompositionTree,
    marked: Vec<usize>,
}

impl MarkedTree {
    pub fn new(tree: DecompositionTree, mut marked: Vec<usize>) -> Result<Self, TreeError> {
        tree.validate()?;
        marked.sort_unstable();
        marked.dedup();
        check_leaf_set(&tree, &marked)?;
        Ok(MarkedTree { tree, marked })
    }

    pub fn tree(&self) -> &DecompositionTree {
        &self.tree
    }

    pub fn marked(&self) -> &[usize] {
        &self.marked
    }

    /// The reduced skeleton of the marked leaves, i.e. the tree of the
    /// pattern this marking is an occurrence of.
    pub fn pattern_tree(&self) -> DecompositionTree {
        reduced_skeleton(&self.tree, &self.marked).expect("validated on construction")
    }

    pub fn is_marked_for(&self, pattern: &DecompositionTree) -> bool {
        &self.pattern_tree() == pattern
    }
}

/// `T(λ)`: a right spine of `k` internal nodes with root `+`; spine node `i`
/// has `λᵢ` leaf children followed by the next spine node, and the deepest
/// one has `λₖ + 1` leaves. Returns the tree and `ω(λ) = Γ⁻¹(T(λ))`.
pub fn wedge(lambda: &Partition) -> Result<(DecompositionTree, Permutation), TreeError> {
    let parts = lambda.parts();
    let Some((&last, upper)) = parts.split_last() else {
        return Err(TreeError::EmptyLeafSet);
    };
    let mut t = DecompositionTree::Node(Sign::Plus, vec![DecompositionTree::Leaf; last + 1]);
    for &part in upper.iter().rev() {
        let mut kids = vec![DecompositionTree::Leaf; part];
        kids.push(t);
        t = DecompositionTree::Node(Sign::Plus, kids);
    }
    let t = t.with_root_sign(Sign::Plus);
    let perm = compose_unchecked(&t);
    Ok((t, perm))
}

//! Subtree and forest exchanges, on pattern trees and on marked trees.
//!
//! Both exchanges keep the root sign and then recompute every internal sign
//! by depth parity, so the result always alternates.
//!
//! Transport of a marking uses, for a pattern node `x` with marked leaf set
//! `L(x)`:
//!
//! - `eldest(x)`: the least common parent of `L(x)` in the big tree;
//! - `top(x)`: the highest node whose marked leaves are exactly `L(x)`. It is
//!   always a child of a node in the group contracted onto the parent of `x`.
//!
//! A subtree exchange of `v` and `w` swaps `top(v)` and `top(w)`. A forest
//! exchange at `a` (rightmost child `b`, whose rightmost child is `c`) cuts
//! the big tree at `eldest(a)`, `top(b)`, `eldest(b)` and `top(c)` into the
//! pieces `A`, `chain`, `B`, `C` (nested in that order) and reassembles them
//! as `B`, `chain`, `A`, `C`. The pass-through chain between `top(b)` and
//! `eldest(b)` has even length, so the reassembly flips exactly the groups
//! the pattern exchange flips, and the same cut rule applied to the result
//! finds the same four pieces, which makes the map an involution.

use serde::{Deserialize, Serialize};

use super::{DecompositionTree, MarkedTree, NodePath, Sign, TreeError};

/// An exchange on a pattern tree, addressed by node paths.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Exchange {
    Subtree { v: NodePath, w: NodePath },
    Forest { a: NodePath },
}

impl Exchange {
    pub fn apply(&self, tree: &DecompositionTree) -> Result<DecompositionTree, TreeError> {
        match self {
            Exchange::Subtree { v, w } => subtree_exchange(tree, v, w),
            Exchange::Forest { a } => forest_exchange(tree, a),
        }
    }

    /// Every admissible exchange on `tree`: all unordered pairs of
    /// non-nested nodes, and every internal node whose rightmost child is
    /// internal.
    pub fn all_on(tree: &DecompositionTree) -> Vec<Exchange> {
        let paths = tree.node_paths();
        let mut out = Vec::new();
        for (i, v) in paths.iter().enumerate() {
            for w in &paths[i + 1..] {
                if !v.is_prefix_of(w) && !w.is_prefix_of(v) {
                    out.push(Exchange::Subtree {
                        v: v.clone(),
                        w: w.clone(),
                    });
                }
            }
        }
        for a in tree.internal_paths() {
            let node = tree.get(&a).unwrap();
            if node.children().last().is_some_and(|b| !b.is_leaf()) {
                out.push(Exchange::Forest { a });
            }
        }
        out
    }
}

/// Working copy of a tree with a mark flag on every leaf.
#[derive(Debug, Clone)]
enum Marked {
    Leaf(bool),
    Node(Sign, Vec<Marked>),
}

impl Marked {
    fn from_tree(t: &DecompositionTree, marks: &[bool], next: &mut usize) -> Marked {
        match t {
            DecompositionTree::Leaf => {
                let m = marks.get(*next).copied().unwrap_or(false);
                *next += 1;
                Marked::Leaf(m)
            }
            DecompositionTree::Node(s, c) => Marked::Node(
                *s,
                c.iter()
                    .map(|x| Marked::from_tree(x, marks, next))
                    .collect(),
            ),
        }
    }

    fn into_tree(self, pos: &mut usize, marked: &mut Vec<usize>) -> DecompositionTree {
        match self {
            Marked::Leaf(m) => {
                *pos += 1;
                if m {
                    marked.push(*pos);
                }
                DecompositionTree::Leaf
            }
            Marked::Node(s, c) => DecompositionTree::Node(
                s,
                c.into_iter().map(|x| x.into_tree(pos, marked)).collect(),
            ),
        }
    }

    fn get(&self, path: &[usize]) -> &Marked {
        path.iter().fold(self, |cur, &i| match cur {
            Marked::Node(_, c) => &c[i],
            Marked::Leaf(_) => panic!("path runs through a leaf"),
        })
    }

    fn put(&mut self, path: &[usize], new: Marked) {
        let mut cur = self;
        for &i in path {
            cur = match cur {
                Marked::Node(_, c) => &mut c[i],
                Marked::Leaf(_) => panic!("path runs through a leaf"),
            };
        }
        *cur = new;
    }

    fn resign(&mut self, sign: Sign) {
        if let Marked::Node(s, c) = self {
            *s = sign;
            c.iter_mut().for_each(|x| x.resign(sign.flip()));
        }
    }

    fn swap(&mut self, p: &[usize], q: &[usize]) {
        let sp = self.get(p).clone();
        let sq = self.get(q).clone();
        self.put(p, sq);
        self.put(q, sp);
    }

    /// Cuts at `pa ⊂ ptb ⊆ pb ⊂ ptc` and reassembles as described in the
    /// module docs.
    fn reassemble(&mut self, pa: &[usize], ptb: &[usize], pb: &[usize], ptc: &[usize]) {
        let c = self.get(ptc).clone();
        let mut a = self.get(pa).clone();
        a.put(&ptb[pa.len()..], c);
        let mut chain = self.get(ptb).clone();
        chain.put(&pb[ptb.len()..], a);
        let mut b = self.get(pb).clone();
        b.put(&ptc[pb.len()..], chain);
        self.put(pa, b);
    }
}

fn plain(tree: &DecompositionTree) -> Marked {
    Marked::from_tree(tree, &[], &mut 0)
}

fn finish(mut m: Marked, root: Option<Sign>) -> (DecompositionTree, Vec<usize>) {
    if let Some(s) = root {
        m.resign(s);
    }
    let mut marked = Vec::new();
    let t = m.into_tree(&mut 0, &mut marked);
    (t, marked)
}

fn require(tree: &DecompositionTree, path: &NodePath) -> Result<(), TreeError> {
    tree.get(path)
        .map(|_| ())
        .ok_or_else(|| TreeError::InvalidPath(path.clone()))
}

/// Swaps the subtrees rooted at `v` and `w`; signs are then recomputed from
/// the root.
pub fn subtree_exchange(
    tree: &DecompositionTree,
    v: &NodePath,
    w: &NodePath,
) -> Result<DecompositionTree, TreeError> {
    require(tree, v)?;
    require(tree, w)?;
    if v.is_prefix_of(w) {
        return Err(TreeError::Ancestry(v.clone(), w.clone()));
    }
    if w.is_prefix_of(v) {
        return Err(TreeError::Ancestry(w.clone(), v.clone()));
    }
    let mut m = plain(tree);
    m.swap(&v.0, &w.0);
    Ok(finish(m, tree.sign()).0)
}

fn forest_anchors(
    tree: &DecompositionTree,
    a: &NodePath,
) -> Result<(NodePath, NodePath), TreeError> {
    let node = tree
        .get(a)
        .ok_or_else(|| TreeError::InvalidPath(a.clone()))?;
    if node.is_leaf() {
        return Err(TreeError::NotInternal(a.clone()));
    }
    let b = a.child(node.children().len() - 1);
    let b_node = tree.get(&b).unwrap();
    if b_node.is_leaf() {
        return Err(TreeError::RightmostChildLeaf(a.clone()));
    }
    let c = b.child(b_node.children().len() - 1);
    Ok((b, c))
}

/// Exchanges all but the rightmost subtree of the child forests of `a` and of
/// its rightmost child `b`. The degrees of `a` and `b` trade places.
pub fn forest_exchange(
    tree: &DecompositionTree,
    a: &NodePath,
) -> Result<DecompositionTree, TreeError> {
    let (b, c) = forest_anchors(tree, a)?;
    let mut m = plain(tree);
    m.reassemble(&a.0, &b.0, &b.0, &c.0);
    Ok(finish(m, tree.sign()).0)
}

/// Positions of the marked leaves of `marked` that sit below each pattern
/// node, and lookups of `eldest`/`top` in the big tree.
struct Correspondence<'a> {
    big: &'a DecompositionTree,
    leaf_paths: Vec<Vec<usize>>,
    is_marked: Vec<bool>,
    marked: &'a [usize],
}

impl<'a> Correspondence<'a> {
    fn new(m: &'a MarkedTree) -> Self {
        let mut leaf_paths = Vec::new();
        fn go(t: &DecompositionTree, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            match t {
                DecompositionTree::Leaf => out.push(path.clone()),
                DecompositionTree::Node(_, c) => {
                    for (i, x) in c.iter().enumerate() {
                        path.push(i);
                        go(x, path, out);
                        path.pop();
                    }
                }
            }
        }
        go(m.tree(), &mut Vec::new(), &mut leaf_paths);
        let mut is_marked = vec![false; leaf_paths.len()];
        m.marked().iter().for_each(|&l| is_marked[l - 1] = true);
        Correspondence {
            big: m.tree(),
            leaf_paths,
            is_marked,
            marked: m.marked(),
        }
    }

    /// Big-tree leaf positions (0-based) of the marks below pattern node
    /// `x`.
    fn marks_below(&self, pattern: &DecompositionTree, x: &NodePath) -> &'a [usize] {
        let mut offset = 0;
        let mut cur = pattern;
        for &i in &x.0 {
            offset += cur.children()[..i]
                .iter()
                .map(|t| t.leaf_count())
                .sum::<usize>();
            cur = &cur.children()[i];
        }
        &self.marked[offset..offset + cur.leaf_count()]
    }

    fn eldest(&self, marks: &[usize]) -> Vec<usize> {
        let first = &self.leaf_paths[marks[0] - 1];
        let last = &self.leaf_paths[marks[marks.len() - 1] - 1];
        first
            .iter()
            .zip(last)
            .take_while(|(a, b)| a == b)
            .map(|(a, _)| *a)
            .collect()
    }

    fn marks_under(&self, path: &[usize]) -> usize {
        let mut start = 0;
        let mut cur = self.big;
        for &i in path {
            start += cur.children()[..i]
                .iter()
                .map(|t| t.leaf_count())
                .sum::<usize>();
            cur = &cur.children()[i];
        }
        self.is_marked[start..start + cur.leaf_count()]
            .iter()
            .filter(|&&m| m)
            .count()
    }

    fn top(&self, marks: &[usize]) -> Vec<usize> {
        let mut path = self.eldest(marks);
        while !path.is_empty() && self.marks_under(&path[..path.len() - 1]) == marks.len() {
            path.pop();
        }
        path
    }
}

/// Carries a `σ`-marked tree across an exchange on `Γ(σ)`, returning the
/// corresponding `τ`-marked tree with the same number of leaves. Applying
/// the same exchange (it is its own inverse on `Γ(τ)`) to the result gives
/// back the input.
pub fn transport_marks(
    marked: &MarkedTree,
    pattern: &DecompositionTree,
    exchange: &Exchange,
) -> Result<MarkedTree, TreeError> {
    if !marked.is_marked_for(pattern) {
        return Err(TreeError::NotMarkedFor);
    }
    let target = exchange.apply(pattern)?;
    let corr = Correspondence::new(marked);
    let mut flags = vec![false; marked.tree().leaf_count()];
    marked.marked().iter().for_each(|&l| flags[l - 1] = true);
    let mut m = Marked::from_tree(marked.tree(), &flags, &mut 0);
    match exchange {
        Exchange::Subtree { v, w } => {
            let tv = corr.top(corr.marks_below(pattern, v));
            let tw = corr.top(corr.marks_below(pattern, w));
            m.swap(&tv, &tw);
        }
        Exchange::Forest { a } => {
            let (b, c) = forest_anchors(pattern, a)?;
            let la = corr.marks_below(pattern, a);
            let lb = corr.marks_below(pattern, &b);
            let lc = corr.marks_below(pattern, &c);
            let pa = corr.eldest(la);
            let ptb = corr.top(lb);
            let pb = corr.eldest(lb);
            let ptc = corr.top(lc);
            m.reassemble(&pa, &ptb, &pb, &ptc);
        }
    }
    let (tree, leaves) = finish(m, marked.tree().sign());
    let out = MarkedTree::new(tree, leaves)?;
    debug_assert!(
        out.is_marked_for(&target),
        "transport produced a wrong marking"
    );
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dectree::{decompose, signature};

    fn t(s: &str) -> DecompositionTree {
        s.parse().unwrap()
    }

    fn path(v: &[usize]) -> NodePath {
        NodePath(v.to_vec())
    }

    #[test]
    fn subtree_exchange_examples() {
        let t132 = t("+(.,-(.,.))");
        assert_eq!(
            subtree_exchange(&t132, &path(&[0]), &path(&[1])).unwrap(),
            decompose(&"213".parse().unwrap()).unwrap()
        );
        assert_eq!(
            subtree_exchange(&t132, &path(&[1, 0]), &path(&[1, 1])).unwrap(),
            t132
        );
        assert_eq!(
            subtree_exchange(&t("+(.,-(.,.),-(.,.,.))"), &path(&[0]), &path(&[1])).unwrap(),
            t("+(-(.,.),.,-(.,.,.))")
        );
    }

    #[test]
    fn subtree_exchange_recomputes_signs() {
        // moving a '-' node one level deeper turns it into a '+' node
        let tree = t("+(-(.,.),-(.,.))");
        let got = subtree_exchange(&tree, &path(&[0]), &path(&[1, 1])).unwrap();
        assert_eq!(got, t("+(.,-(.,+(.,.)))"));
        got.validate().unwrap();
    }

    #[test]
    fn subtree_exchange_errors() {
        let t132 = t("+(.,-(.,.))");
        assert_eq!(
            subtree_exchange(&t132, &path(&[1]), &path(&[1, 0])),
            Err(TreeError::Ancestry(path(&[1]), path(&[1, 0])))
        );
        assert!(matches!(
            subtree_exchange(&t132, &path(&[0]), &path(&[0])),
            Err(TreeError::Ancestry(..))
        ));
        assert_eq!(
            subtree_exchange(&t132, &path(&[5]), &path(&[0])),
            Err(TreeError::InvalidPath(path(&[5])))
        );
    }

    #[test]
    fn forest_exchange_examples() {
        let t1243 = decompose(&"1243".parse().unwrap()).unwrap();
        let got = forest_exchange(&t1243, &NodePath::root()).unwrap();
        assert_eq!(got, decompose(&"1432".parse().unwrap()).unwrap());
        assert_eq!(forest_exchange(&got, &NodePath::root()).unwrap(), t1243);
        let t132 = t("+(.,-(.,.))");
        assert_eq!(forest_exchange(&t132, &NodePath::root()).unwrap(), t132);
    }

    #[test]
    fn forest_exchange_errors() {
        assert_eq!(
            forest_exchange(&t("+(-(.,.),.)"), &NodePath::root()),
            Err(TreeError::RightmostChildLeaf(NodePath::root()))
        );
        assert_eq!(
            forest_exchange(&t("+(.,-(.,.))"), &path(&[0])),
            Err(TreeError::NotInternal(path(&[0])))
        );
        assert_eq!(
            forest_exchange(&t("+(.,-(.,.))"), &path(&[2])),
            Err(TreeError::InvalidPath(path(&[2])))
        );
    }

    #[test]
    fn forest_exchange_deep_spine() {
        let tree = t("+(.,.,-(.,+(.,.,.,.)))");
        let got = forest_exchange(&tree, &path(&[2])).unwrap();
        assert_eq!(got, t("+(.,.,-(.,.,.,+(.,.)))"));
        assert_eq!(signature(&got), signature(&tree));
    }

    #[test]
    fn transport_example() {
        // Γ(1432) with the 132 occurrence at leaves {1, 2, 4}, exchanging the
        // leaf and the '-' child of Γ(132).
        let big = decompose(&"1432".parse().unwrap()).unwrap();
        let marked = MarkedTree::new(big, vec![1, 2, 4]).unwrap();
        let pattern = t("+(.,-(.,.))");
        let ex = Exchange::Subtree {
            v: path(&[0]),
            w: path(&[1]),
        };
        let out = transport_marks(&marked, &pattern, &ex).unwrap();
        assert_eq!(out.tree(), &decompose(&"3214".parse().unwrap()).unwrap());
        assert_eq!(out.marked(), &[1, 3, 4]);
        assert_eq!(
            out.pattern_tree(),
            decompose(&"213".parse().unwrap()).unwrap()
        );
        let back = transport_marks(&out, &ex.apply(&pattern).unwrap(), &ex).unwrap();
        assert_eq!(back, marked);
    }

    #[test]
    fn transport_sibling_leaves_is_identity() {
        let big = decompose(&"2143".parse().unwrap()).unwrap();
        let marked = MarkedTree::new(big, vec![1, 2]).unwrap();
        let pattern = t("-(.,.)");
        let ex = Exchange::Subtree {
            v: path(&[0]),
            w: path(&[1]),
        };
        assert_eq!(transport_marks(&marked, &pattern, &ex).unwrap(), marked);
    }

    #[test]
    fn transport_rejects_wrong_pattern() {
        let big = decompose(&"2143".parse().unwrap()).unwrap();
        let marked = MarkedTree::new(big, vec![1, 3]).unwrap();
        let ex = Exchange::Subtree {
            v: path(&[0]),
            w: path(&[1]),
        };
        assert_eq!(
            transport_marks(&marked, &t("-(.,.)"), &ex),
            Err(TreeError::NotMarkedFor)
        );
    }

    #[test]
    fn admissible_exchange_listing() {
        let ex = Exchange::all_on(&t("+(.,-(.,.))"));
        let subtree = ex
            .iter()
            .filter(|e| matches!(e, Exchange::Subtree { .. }))
            .count();
        assert_eq!(subtree, 4);
        assert!(ex.contains(&Exchange::Forest {
            a: NodePath::root()
        }));
    }
}

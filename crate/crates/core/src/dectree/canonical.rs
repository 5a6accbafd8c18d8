//! Reduction of an arbitrary decomposition tree to the wedge tree `T(λ)` of
//! its signature, by popularity-preserving moves only.

use serde::{Deserialize, Serialize};

use super::exchange::{forest_exchange, subtree_exchange, Exchange};
use super::{DecompositionTree, NodePath, Sign, TreeError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Move {
    Exchange(Exchange),
    /// Flip every sign.
    Complement,
}

impl Move {
    pub fn apply(&self, tree: &DecompositionTree) -> Result<DecompositionTree, TreeError> {
        match self {
            Move::Exchange(e) => e.apply(tree),
            Move::Complement => Ok(tree.flipped()),
        }
    }
}

pub fn replay(tree: &DecompositionTree, moves: &[Move]) -> Result<DecompositionTree, TreeError> {
    moves.iter().try_fold(tree.clone(), |t, m| m.apply(&t))
}

/// Paths of the right spine: root, its rightmost child, and so on while the
/// node is internal.
fn spine(tree: &DecompositionTree) -> Vec<NodePath> {
    let mut out = Vec::new();
    let mut path = NodePath::root();
    let mut cur = tree;
    while let DecompositionTree::Node(_, c) = cur {
        out.push(path.clone());
        path = path.child(c.len() - 1);
        cur = &c[c.len() - 1];
    }
    out
}

/// Returns `T(signature(tree))` and the moves that produce it.
///
/// 1. While some internal node is off the right spine, swap the first such
///    node in preorder with the rightmost leaf of the tree.
/// 2. Bubble-sort the spine degrees into weakly decreasing order with forest
///    exchanges between adjacent spine nodes.
/// 3. Complement if the root is `-`.
pub fn canonicalize(tree: &DecompositionTree) -> (DecompositionTree, Vec<Move>) {
    let mut cur = tree.clone();
    let mut moves = Vec::new();

    loop {
        let sp = spine(&cur);
        let Some(off) = cur.internal_paths().into_iter().find(|p| !sp.contains(p)) else {
            break;
        };
        let bottom = sp
            .last()
            .expect("an off-spine internal node implies an internal root");
        let leaf = bottom.child(cur.get(bottom).unwrap().children().len() - 1);
        cur = subtree_exchange(&cur, &off, &leaf)
            .expect("off-spine node and rightmost leaf are unrelated");
        moves.push(Move::Exchange(Exchange::Subtree { v: off, w: leaf }));
    }

    // Spine paths below a forest exchange shift, so they are re-read each step.
    let degrees = |t: &DecompositionTree| -> Vec<usize> {
        spine(t)
            .iter()
            .map(|p| t.get(p).unwrap().children().len())
            .collect()
    };
    let k = spine(&cur).len();
    for pass in 0..k {
        let mut swapped = false;
        for i in 0..k.saturating_sub(1 + pass) {
            let d = degrees(&cur);
            if d[i] < d[i + 1] {
                let a = spine(&cur)[i].clone();
                cur = forest_exchange(&cur, &a).expect("spine node with internal rightmost child");
                moves.push(Move::Exchange(Exchange::Forest { a }));
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }

    if cur.sign() == Some(Sign::Minus) {
        cur = cur.flipped();
        moves.push(Move::Complement);
    }
    (cur, moves)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dectree::{decompose, signature, wedge};

    fn tree_of(s: &str) -> DecompositionTree {
        decompose(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn canonical_examples() {
        let (t, moves) = canonicalize(&tree_of("2143"));
        assert_eq!(t, tree_of("1423"));
        assert_eq!(t, wedge(&"1,1,1".parse().unwrap()).unwrap().0);
        assert_eq!(replay(&tree_of("2143"), &moves).unwrap(), t);

        let (t, moves) = canonicalize(&tree_of("321"));
        assert_eq!(t, tree_of("123"));
        assert_eq!(moves, vec![Move::Complement]);
    }

    #[test]
    fn wedge_trees_are_fixed_points() {
        for w in 1..=6 {
            for lambda in crate::partition::partitions_of(w) {
                let tree = wedge(&lambda).unwrap().0;
                let (t, moves) = canonicalize(&tree);
                assert_eq!(t, tree);
                assert!(moves.is_empty(), "{lambda}: {moves:?}");
            }
        }
    }

    #[test]
    fn leaf_is_canonical() {
        assert_eq!(
            canonicalize(&DecompositionTree::Leaf),
            (DecompositionTree::Leaf, vec![])
        );
    }

    #[test]
    fn nine_leaf_tree() {
        let nine = tree_of("215643798");
        let (t, moves) = canonicalize(&nine);
        assert_eq!(t, wedge(&signature(&nine)).unwrap().0);
        let mut cur = nine.clone();
        for m in &moves {
            cur = m.apply(&cur).unwrap();
            assert_eq!(signature(&cur), signature(&nine));
        }
        assert_eq!(cur, t);
    }
}

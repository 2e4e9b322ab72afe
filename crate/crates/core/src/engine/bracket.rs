//! Commutator expressions and their bracketings.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::form_ideal::{symmetrized_product, FormIdeal};
use crate::ring::FormRing;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LeafKind {
    /// `EU(2n, I, Γ)`, generated by the `Z_ij(ξ, ζ)`.
    E,
    /// `FU(2n, I, Γ)`, generated by transvections of level `(I, Γ)`.
    F,
    /// `GU(2n, I, Γ)`.
    G,
    /// `CU(2n, I, Γ)`.
    C,
}

/// A named form ideal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Level {
    pub name: String,
    pub ideal: FormIdeal,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CommExpr {
    Leaf { kind: LeafKind, level: Level },
    Bracket(Box<CommExpr>, Box<CommExpr>),
}

impl CommExpr {
    pub fn leaf(kind: LeafKind, level: &Level) -> Self {
        CommExpr::Leaf { kind, level: level.clone() }
    }

    pub fn bracket(a: CommExpr, b: CommExpr) -> Self {
        CommExpr::Bracket(Box::new(a), Box::new(b))
    }

    /// `[[x0, x1], x2], ...`
    pub fn left_normed(leaves: Vec<CommExpr>) -> Option<Self> {
        let mut it = leaves.into_iter();
        let first = it.next()?;
        Some(it.fold(first, CommExpr::bracket))
    }

    pub fn leaves(&self) -> Vec<(LeafKind, &Level)> {
        match self {
            CommExpr::Leaf { kind, level } => vec![(*kind, level)],
            CommExpr::Bracket(a, b) => {
                let mut v = a.leaves();
                v.extend(b.leaves());
                v
            }
        }
    }

    /// Same tree with leaf kinds replaced.
    pub fn with_kinds(&self, kinds: &mut impl Iterator<Item = LeafKind>) -> Self {
        match self {
            CommExpr::Leaf { level, .. } => CommExpr::Leaf { kind: kinds.next().expect("enough kinds"), level: level.clone() },
            CommExpr::Bracket(a, b) => CommExpr::bracket(a.with_kinds(kinds), b.with_kinds(kinds)),
        }
    }

    /// Symmetrized product of the leaf levels, bracketed like the expression.
    pub fn product_level(&self, fr: &FormRing) -> Level {
        match self {
            CommExpr::Leaf { level, .. } => level.clone(),
            CommExpr::Bracket(a, b) => {
                let (x, y) = (a.product_level(fr), b.product_level(fr));
                Level { name: format!("({}∘{})", x.name, y.name), ideal: symmetrized_product(fr, &x.ideal, &y.ideal) }
            }
        }
    }

    pub fn split(&self) -> Option<(&CommExpr, &CommExpr)> {
        match self {
            CommExpr::Bracket(a, b) => Some((a, b)),
            CommExpr::Leaf { .. } => None,
        }
    }
}

impl fmt::Display for LeafKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LeafKind::E => "E",
            LeafKind::F => "F",
            LeafKind::G => "G",
            LeafKind::C => "C",
        };
        f.write_str(s)
    }
}

impl fmt::Display for CommExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CommExpr::Leaf { kind, level } => write!(f, "{kind}({})", level.name),
            CommExpr::Bracket(a, b) => write!(f, "[{a}, {b}]"),
        }
    }
}

/// Binary tree shape with unlabelled leaves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    Leaf,
    Node(Box<Shape>, Box<Shape>),
}

impl Shape {
    pub fn leaf_count(&self) -> usize {
        match self {
            Shape::Leaf => 1,
            Shape::Node(a, b) => a.leaf_count() + b.leaf_count(),
        }
    }

    /// Leaves of the left subtree at the root.
    pub fn outer_split(&self) -> Option<usize> {
        match self {
            Shape::Leaf => None,
            Shape::Node(a, _) => Some(a.leaf_count()),
        }
    }

    /// Fills leaves in order.
    pub fn fill(&self, leaves: &[CommExpr]) -> CommExpr {
        assert_eq!(leaves.len(), self.leaf_count());
        match self {
            Shape::Leaf => leaves[0].clone(),
            Shape::Node(a, b) => {
                let k = a.leaf_count();
                CommExpr::bracket(a.fill(&leaves[..k]), b.fill(&leaves[k..]))
            }
        }
    }
}

/// Every full binary tree with `leaves` leaves (a Catalan number of them),
/// ordered by the size of the left subtree at the root.
pub fn enumerate_bracketings(leaves: usize) -> Vec<Shape> {
    if leaves == 0 {
        return Vec::new();
    }
    if leaves == 1 {
        return vec![Shape::Leaf];
    }
    let mut out = Vec::new();
    for k in 1..leaves {
        for a in enumerate_bracketings(k) {
            for b in enumerate_bracketings(leaves - k) {
                out.push(Shape::Node(Box::new(a.clone()), Box::new(b)));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalan_counts() {
        let counts: Vec<usize> = (1..=6).map(|m| enumerate_bracketings(m).len()).collect();
        // oracle: C(m) = binom(2m, m)/(m+1) for m = leaves-1
        let catalan: Vec<usize> = (0..6u64)
            .map(|m| {
                let mut b = 1u64;
                for k in 0..m {
                    b = b * (2 * m - k) / (k + 1);
                }
                (b / (m + 1)) as usize
            })
            .collect();
        assert_eq!(counts, catalan);
    }

    #[test]
    fn left_normed_is_last() {
        let shapes = enumerate_bracketings(4);
        let last = shapes.last().unwrap();
        assert_eq!(last.outer_split(), Some(3));
        if let Shape::Node(a, _) = last {
            assert_eq!(a.outer_split(), Some(2));
        }
    }
}

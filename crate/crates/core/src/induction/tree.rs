use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use crate::data::Dataset;
use crate::geometry::{Hyperplane, Side};

/// A node of a fitted tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    /// Terminal node predicting `class`.
    Leaf {
        /// Predicted class id.
        class: usize,
    },
    /// Internal node: samples on or above `plane` go `left`.
    Split {
        /// Split boundary.
        plane: Hyperplane,
        /// Subtree for [`Side::Left`].
        left: Box<Node>,
        /// Subtree for [`Side::Right`].
        right: Box<Node>,
    },
}

impl Node {
    /// Number of leaves below (and including) this node.
    pub fn size(&self) -> usize {
        match self {
            Node::Leaf { .. } => 1,
            Node::Split { left, right, .. } => left.size() + right.size(),
        }
    }

    /// Longest root-to-leaf path, in edges.
    pub fn depth(&self) -> usize {
        match self {
            Node::Leaf { .. } => 0,
            Node::Split { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    /// Class reached by `sample` (`NaN` marks missing cells).
    pub fn predict(&self, sample: &[f64]) -> usize {
        let mut node = self;
        loop {
            match node {
                Node::Leaf { class } => return *class,
                Node::Split { plane, left, right } => {
                    node = match plane.side_of(sample) {
                        Side::Left => left,
                        Side::Right => right,
                    }
                }
            }
        }
    }

    /// Visits every split plane, parents before children, left before right.
    pub fn planes(&self) -> Vec<&Hyperplane> {
        let mut out = Vec::new();
        let mut stack = alloc::vec![self];
        while let Some(node) = stack.pop() {
            if let Node::Split { plane, left, right } = node {
                out.push(plane);
                stack.push(right);
                stack.push(left);
            }
        }
        out
    }
}

/// A fitted classification tree over `m` features.
#[derive(Debug, Clone, PartialEq)]
pub struct Tree {
    /// Feature count the tree expects.
    pub m: usize,
    /// Class names indexed by class id.
    pub classes: Vec<String>,
    /// Root node.
    pub root: Node,
}

impl Tree {
    /// Class id predicted for `sample` (`NaN` marks missing cells).
    pub fn predict(&self, sample: &[f64]) -> usize {
        self.root.predict(sample)
    }

    /// Class name predicted for `sample`.
    pub fn predict_name(&self, sample: &[f64]) -> &str {
        &self.classes[self.predict(sample)]
    }

    /// Leaf count.
    pub fn size(&self) -> usize {
        self.root.size()
    }

    /// Longest root-to-leaf path, in edges.
    pub fn depth(&self) -> usize {
        self.root.depth()
    }

    /// Fraction of `dataset` rows predicted correctly.
    pub fn accuracy(&self, dataset: &Dataset) -> f64 {
        accuracy_on(&self.root, dataset, 0..dataset.n())
    }
}

pub(crate) fn accuracy_on(
    root: &Node,
    dataset: &Dataset,
    rows: impl ExactSizeIterator<Item = usize>,
) -> f64 {
    let total = rows.len();
    let correct = rows
        .filter(|&i| root.predict(dataset.row(i)) == dataset.labels()[i])
        .count();
    correct as f64 / total as f64
}

/// A tree grown to some maximum depth that remembers the majority class at
/// every split, so it can be cut back to any shallower depth.
///
/// Cutting at depth `k` yields exactly the tree that fitting with
/// `max_depth = k` would have produced, since the split chosen at a node
/// does not depend on the depth limit.
#[derive(Debug, Clone, PartialEq)]
pub enum GrownNode {
    /// Terminal node.
    Leaf {
        /// Predicted class id.
        class: usize,
    },
    /// Internal node.
    Split {
        /// Split boundary.
        plane: Hyperplane,
        /// Majority class of the samples that reached this node.
        majority: usize,
        /// Subtree for [`Side::Left`].
        left: Box<GrownNode>,
        /// Subtree for [`Side::Right`].
        right: Box<GrownNode>,
    },
}

impl GrownNode {
    /// The tree obtained by turning every split at depth `max_depth` into a
    /// majority leaf.
    pub fn truncate(&self, max_depth: usize) -> Node {
        match self {
            GrownNode::Leaf { class } => Node::Leaf { class: *class },
            GrownNode::Split { majority, .. } if max_depth == 0 => Node::Leaf { class: *majority },
            GrownNode::Split {
                plane, left, right, ..
            } => Node::Split {
                plane: plane.clone(),
                left: Box::new(left.truncate(max_depth - 1)),
                right: Box::new(right.truncate(max_depth - 1)),
            },
        }
    }
}

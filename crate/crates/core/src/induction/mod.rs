//! Tree induction: CART-ELC, axis-aligned CART, and HHCART(D)/(A).
//!
//! All searches share one tie rule: among candidates with exactly equal
//! scores, the one with the smallest enumeration index wins. Sequential
//! strict-improvement scans and the parallel reductions both implement it,
//! so trees do not depend on the number of worker threads.

mod elc;
mod node;
mod sweep;
mod tree;

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::criteria::{CriterionKind, PartitionCounts};
use crate::data::{ClassCounts, Dataset};
use crate::error::{Error, Result};
use crate::geometry::{Hyperplane, Side};
use node::NodeSamples;

pub use sweep::{HhcartVariant, AXIS_ALIGNMENT_TOLERANCE};
pub(crate) use tree::accuracy_on;
pub use tree::{GrownNode, Node, Tree};

/// Induction algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    /// Exhaustive search over hyperplanes through `r` samples on `r` features.
    CartElc,
    /// Axis-aligned thresholds at sample values.
    CartAxis,
    /// Householder reflections along each class's dominant eigenvector.
    HhcartD,
    /// Householder reflections along every eigenvector of each class.
    HhcartA,
}

impl Algorithm {
    /// Every algorithm, in declaration order.
    pub const ALL: [Algorithm; 4] = [
        Algorithm::CartElc,
        Algorithm::CartAxis,
        Algorithm::HhcartD,
        Algorithm::HhcartA,
    ];

    /// Command-line name.
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::CartElc => "cart-elc",
            Algorithm::CartAxis => "cart-axis",
            Algorithm::HhcartD => "hhcart-d",
            Algorithm::HhcartA => "hhcart-a",
        }
    }

    /// Whether the algorithm tolerates missing cells.
    pub fn accepts_missing(self) -> bool {
        self == Algorithm::CartElc
    }

    /// Whether `r` is a hyperparameter of the algorithm.
    pub fn uses_r(self) -> bool {
        self == Algorithm::CartElc
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| {
                Error::config(alloc::format!(
                    "unknown algorithm {s:?} (expected cart-elc, cart-axis, hhcart-d or hhcart-a)"
                ))
            })
    }
}

/// Hyperparameters for one fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct InductionConfig {
    /// Splitting criterion.
    pub criterion: CriterionKind,
    /// Hyperplane order; ignored by the non-ELC algorithms.
    pub r: usize,
    /// Maximum number of split levels; leaves sit at depth `<= max_depth`.
    pub max_depth: usize,
    /// Induction algorithm.
    pub algorithm: Algorithm,
}

impl InductionConfig {
    /// Checks the configuration against a dataset.
    pub fn validate(&self, dataset: &Dataset) -> Result<()> {
        if self.max_depth < 1 {
            return Err(Error::config("max_depth must be at least 1"));
        }
        if self.algorithm.uses_r() && (self.r < 1 || self.r > dataset.m()) {
            return Err(Error::config(alloc::format!(
                "r = {} must satisfy 1 <= r <= m = {}",
                self.r,
                dataset.m()
            )));
        }
        if !self.algorithm.accepts_missing() && dataset.has_missing() {
            return Err(Error::preprocessing(alloc::format!(
                "{} cannot handle missing cells; impute them first",
                self.algorithm
            )));
        }
        Ok(())
    }
}

/// The winning candidate of a split search.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitCandidate {
    /// Split boundary.
    pub plane: Hyperplane,
    /// Criterion score of the partition it induces.
    pub score: f64,
    /// Position of the candidate in the search's enumeration order.
    pub enumeration_index: u128,
}

// `candidate` beats `incumbent`: strictly better score, or an exactly equal
// score found earlier in the enumeration.
pub(crate) fn better_candidate(
    kind: CriterionKind,
    candidate: (f64, u128),
    incumbent: (f64, u128),
) -> bool {
    kind.is_better(candidate.0, incumbent.0)
        || (candidate.0 == incumbent.0 && candidate.1 < incumbent.1)
}

/// Class counts on each side of `plane` over the rows of `dataset`.
pub fn evaluate_split(plane: &Hyperplane, dataset: &Dataset) -> PartitionCounts {
    let k = dataset.num_classes();
    let mut left = ClassCounts::zeros(k);
    let mut right = ClassCounts::zeros(k);
    for i in 0..dataset.n() {
        let label = dataset.labels()[i];
        match plane.side_of(dataset.row(i)) {
            Side::Left => left.add(label),
            Side::Right => right.add(label),
        }
    }
    PartitionCounts::new(left, right)
}

fn all_rows(dataset: &Dataset) -> Vec<usize> {
    (0..dataset.n()).collect()
}

/// Best hyperplane through `r` samples with at most `r` non-zero
/// coefficients, over every sample combination (outer, lexicographic) and
/// feature combination (inner, lexicographic). Selections where a chosen
/// sample misses a chosen feature are skipped; `None` if none remain.
pub fn best_split_elc(
    dataset: &Dataset,
    r: usize,
    criterion: CriterionKind,
) -> Result<Option<SplitCandidate>> {
    let rows = all_rows(dataset);
    elc::best_split_elc_node(&NodeSamples::new(dataset, &rows), r, criterion)
}

/// Best axis-aligned split `x[f] >= sample[f]`, samples outer and features inner.
pub fn best_split_axis(dataset: &Dataset, criterion: CriterionKind) -> Result<Option<SplitCandidate>> {
    let rows = all_rows(dataset);
    sweep::best_split_axis_node(&NodeSamples::new(dataset, &rows), criterion)
}

/// Best split from the HHCART pool: original-space axis splits, then axis
/// splits in each class's reflected space.
pub fn best_split_hhcart(
    dataset: &Dataset,
    criterion: CriterionKind,
    variant: HhcartVariant,
) -> Result<Option<SplitCandidate>> {
    let rows = all_rows(dataset);
    sweep::best_split_hhcart_node(&NodeSamples::new(dataset, &rows), criterion, variant)
}

fn best_split_node(config: &InductionConfig, node: &NodeSamples<'_>) -> Result<Option<SplitCandidate>> {
    match config.algorithm {
        // fewer samples than r: no hyperplane can be fitted
        Algorithm::CartElc if node.n() < config.r => Ok(None),
        Algorithm::CartElc => elc::best_split_elc_node(node, config.r, config.criterion),
        Algorithm::CartAxis => sweep::best_split_axis_node(node, config.criterion),
        Algorithm::HhcartD => {
            sweep::best_split_hhcart_node(node, config.criterion, HhcartVariant::Dominant)
        }
        Algorithm::HhcartA => sweep::best_split_hhcart_node(node, config.criterion, HhcartVariant::All),
    }
}

fn grow_node(
    config: &InductionConfig,
    dataset: &Dataset,
    rows: &[usize],
    depth: usize,
) -> Result<GrownNode> {
    let labels = dataset.labels();
    let counts = ClassCounts::from_labels(
        &rows.iter().map(|&i| labels[i]).collect::<Vec<_>>(),
        dataset.num_classes(),
    );
    let majority = counts.majority();
    if counts.is_homogeneous() || depth >= config.max_depth {
        return Ok(GrownNode::Leaf { class: majority });
    }
    let node = NodeSamples::new(dataset, rows);
    let Some(candidate) = best_split_node(config, &node)? else {
        return Ok(GrownNode::Leaf { class: majority });
    };
    let (left, right): (Vec<usize>, Vec<usize>) = rows
        .iter()
        .partition(|&&i| candidate.plane.side_of(dataset.row(i)) == Side::Left);
    if left.is_empty() || right.is_empty() {
        return Ok(GrownNode::Leaf { class: majority });
    }
    Ok(GrownNode::Split {
        plane: candidate.plane,
        majority,
        left: Box::new(grow_node(config, dataset, &left, depth + 1)?),
        right: Box::new(grow_node(config, dataset, &right, depth + 1)?),
    })
}

/// Grows a tree on the given rows, keeping the majority class at each split
/// so it can be truncated to any depth up to `config.max_depth`.
pub fn grow(config: &InductionConfig, dataset: &Dataset, rows: &[usize]) -> Result<GrownNode> {
    config.validate(dataset)?;
    if rows.is_empty() {
        return Err(Error::config("cannot fit a tree on zero samples"));
    }
    grow_node(config, dataset, rows, 0)
}

/// Fits a tree on every row of `dataset`.
///
/// Recursion stops at homogeneous nodes, at `max_depth`, when no candidate
/// exists, and when the best split leaves one side empty; each of these
/// yields a leaf predicting the majority class (ties to the lowest id).
pub fn fit(config: &InductionConfig, dataset: &Dataset) -> Result<Tree> {
    let rows = all_rows(dataset);
    fit_rows(config, dataset, &rows)
}

/// [`fit`] restricted to `rows`.
pub fn fit_rows(config: &InductionConfig, dataset: &Dataset, rows: &[usize]) -> Result<Tree> {
    let grown = grow(config, dataset, rows)?;
    Ok(Tree {
        m: dataset.m(),
        classes: dataset.class_names().to_vec(),
        root: grown.truncate(config.max_depth),
    })
}

#[cfg(test)]
mod tests;

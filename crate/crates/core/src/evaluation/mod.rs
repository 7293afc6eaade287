//! Repeated k-fold cross-validation, the `(r, depth)` grid search, the rule
//! that picks one grid cell, and the statistics used to compare algorithms.
//!
//! Every repeat draws its fold assignment from its own ChaCha8 stream
//! (`seed`, stream = repeat index), so results do not depend on the order in
//! which folds or cells are evaluated.

mod stats;

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::criteria::CriterionKind;
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::induction::{accuracy_on, grow, Algorithm, InductionConfig};
use crate::par;

pub use stats::{cohens_d, regularized_incomplete_beta, student_t_cdf, welch_t_test};

/// Accuracies closer than this count as tied in [`select_best`].
pub const ACCURACY_TIE_TOLERANCE: f64 = 1e-12;

/// Cross-validation protocol and grid bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CvConfig {
    /// Folds per repeat.
    pub folds: usize,
    /// Independent repeats.
    pub repeats: usize,
    /// Seed of every fold assignment.
    pub seed: u64,
    /// Largest `r` of the grid.
    pub grid_r_max: usize,
    /// Largest max depth of the grid.
    pub grid_depth_max: usize,
}

impl Default for CvConfig {
    fn default() -> Self {
        Self {
            folds: 5,
            repeats: 10,
            seed: 0,
            grid_r_max: 1,
            grid_depth_max: 1,
        }
    }
}

impl CvConfig {
    /// Checks the protocol against a sample count.
    pub fn validate(&self, n: usize) -> Result<()> {
        if self.folds < 2 {
            return Err(Error::config("need at least 2 folds"));
        }
        if self.repeats < 1 {
            return Err(Error::config("need at least 1 repeat"));
        }
        if self.grid_r_max < 1 || self.grid_depth_max < 1 {
            return Err(Error::config("grid bounds must be at least 1"));
        }
        if n < self.folds {
            return Err(Error::config(alloc::format!(
                "{n} samples cannot fill {} folds",
                self.folds
            )));
        }
        Ok(())
    }
}

/// Generator for one repeat: ChaCha8 seeded with `seed`, stream `repeat`.
pub fn repeat_rng(seed: u64, repeat: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(repeat as u64);
    rng
}

/// Fold id of each of `n` samples: a Fisher-Yates shuffle of `0..n`, cut
/// into `folds` contiguous blocks whose sizes differ by at most one (larger
/// blocks first).
pub fn partition_folds(n: usize, folds: usize, rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
    if folds < 2 {
        return Err(Error::config("need at least 2 folds"));
    }
    if n < folds {
        return Err(Error::config(alloc::format!("{n} samples cannot fill {folds} folds")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut assignment = vec![0; n];
    let (base, extra) = (n / folds, n % folds);
    let mut position = 0;
    for fold in 0..folds {
        let size = base + usize::from(fold < extra);
        for &i in &order[position..position + size] {
            assignment[i] = fold;
        }
        position += size;
    }
    Ok(assignment)
}

/// Per-repeat results of one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct CvOutcome {
    /// Mean held-out accuracy over the folds of each repeat.
    pub accuracies: Vec<f64>,
    /// Mean tree size over the folds of each repeat.
    pub sizes: Vec<f64>,
}

/// One `(r, depth)` cell of a grid search.
#[derive(Debug, Clone, PartialEq)]
pub struct CvCell {
    /// Hyperplane order.
    pub r: usize,
    /// Max depth.
    pub depth: usize,
    /// Mean over repeats of the per-repeat accuracy.
    pub mean_accuracy: f64,
    /// Sample standard deviation (`n - 1`) of the per-repeat accuracies.
    pub std_accuracy: f64,
    /// Mean over repeats of the per-repeat tree size.
    pub mean_size: f64,
    /// Sample standard deviation of the per-repeat tree sizes.
    pub std_size: f64,
    /// The per-repeat values behind the summaries.
    pub outcome: CvOutcome,
}

/// Result of a grid search.
#[derive(Debug, Clone, PartialEq)]
pub struct CvReport {
    /// Algorithm evaluated.
    pub algorithm: Algorithm,
    /// Splitting criterion.
    pub criterion: CriterionKind,
    /// Protocol used.
    pub cv: CvConfig,
    /// Every cell, ordered by `r` then depth.
    pub cells: Vec<CvCell>,
    /// `(r, depth)` chosen by [`select_best`].
    pub selected: (usize, usize),
}

impl CvReport {
    /// The selected cell.
    pub fn selected_cell(&self) -> &CvCell {
        self.cells
            .iter()
            .find(|c| (c.r, c.depth) == self.selected)
            .expect("selected cell is part of the grid")
    }
}

/// Mean and sample standard deviation; the deviation is 0 for one value.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (mean, libm::sqrt(ss / (n - 1.0)))
}

/// The cell with the best mean accuracy; accuracies within
/// [`ACCURACY_TIE_TOLERANCE`] of the best tie, and ties go to the smaller
/// mean tree size, then the smaller `r`, then the smaller depth. The result
/// does not depend on the order of `cells`.
pub fn select_best(cells: &[CvCell]) -> Option<(usize, usize)> {
    let best = cells
        .iter()
        .map(|c| c.mean_accuracy)
        .fold(f64::NEG_INFINITY, f64::max);
    cells
        .iter()
        .filter(|c| c.mean_accuracy >= best - ACCURACY_TIE_TOLERANCE)
        .min_by(|a, b| {
            a.mean_size
                .total_cmp(&b.mean_size)
                .then(a.r.cmp(&b.r))
                .then(a.depth.cmp(&b.depth))
        })
        .map(|c| (c.r, c.depth))
}

fn fold_assignments(n: usize, cv: &CvConfig) -> Result<Vec<Vec<usize>>> {
    (0..cv.repeats)
        .map(|repeat| partition_folds(n, cv.folds, &mut repeat_rng(cv.seed, repeat)))
        .collect()
}

// Held-out (accuracy, size) for every depth 1..=depth_max of a tree grown
// once on the other folds.
fn evaluate_fold(
    config: &InductionConfig,
    dataset: &Dataset,
    assignment: &[usize],
    fold: usize,
    depths: &[usize],
) -> Result<Vec<(f64, f64)>> {
    let (test, train): (Vec<usize>, Vec<usize>) = (0..dataset.n()).partition(|&i| assignment[i] == fold);
    let grown = grow(config, dataset, &train)?;
    Ok(depths
        .iter()
        .map(|&depth| {
            let tree = grown.truncate(depth);
            (
                accuracy_on(&tree, dataset, test.iter().copied()),
                tree.size() as f64,
            )
        })
        .collect())
}

/// Repeated k-fold cross-validation of one configuration. Each repeat
/// contributes the mean accuracy and mean tree size over its folds.
pub fn cross_validate(dataset: &Dataset, config: &InductionConfig, cv: &CvConfig) -> Result<CvOutcome> {
    cv.validate(dataset.n())?;
    config.validate(dataset)?;
    let assignments = fold_assignments(dataset.n(), cv)?;
    let results = par::map_collect(cv.repeats * cv.folds, |task| {
        let (repeat, fold) = (task / cv.folds, task % cv.folds);
        evaluate_fold(config, dataset, &assignments[repeat], fold, &[config.max_depth])
    });
    let mut outcome = CvOutcome {
        accuracies: vec![0.0; cv.repeats],
        sizes: vec![0.0; cv.repeats],
    };
    for (task, result) in results.into_iter().enumerate() {
        let (acc, size) = result?[0];
        outcome.accuracies[task / cv.folds] += acc;
        outcome.sizes[task / cv.folds] += size;
    }
    let k = cv.folds as f64;
    outcome.accuracies.iter_mut().for_each(|a| *a /= k);
    outcome.sizes.iter_mut().for_each(|s| *s /= k);
    Ok(outcome)
}

/// Cross-validates every `(r, depth)` with `1 <= r <= grid_r_max` and
/// `1 <= depth <= grid_depth_max` and selects one cell. Algorithms without
/// an `r` hyperparameter evaluate `r = 1` only.
///
/// Each `(repeat, fold, r)` grows one tree to `grid_depth_max` and reads the
/// shallower cells off its truncations, which equal fits at those depths.
pub fn grid_search(
    dataset: &Dataset,
    cv: &CvConfig,
    criterion: CriterionKind,
    algorithm: Algorithm,
) -> Result<CvReport> {
    cv.validate(dataset.n())?;
    let r_values: Vec<usize> = if algorithm.uses_r() {
        (1..=cv.grid_r_max).collect()
    } else {
        vec![1]
    };
    let depths: Vec<usize> = (1..=cv.grid_depth_max).collect();
    let configs: Vec<InductionConfig> = r_values
        .iter()
        .map(|&r| InductionConfig {
            criterion,
            r,
            max_depth: cv.grid_depth_max,
            algorithm,
        })
        .collect();
    for config in &configs {
        config.validate(dataset)?;
    }
    let assignments = fold_assignments(dataset.n(), cv)?;

    let per_r = cv.repeats * cv.folds;
    let results = par::map_collect(configs.len() * per_r, |task| {
        let (ri, rest) = (task / per_r, task % per_r);
        let (repeat, fold) = (rest / cv.folds, rest % cv.folds);
        evaluate_fold(&configs[ri], dataset, &assignments[repeat], fold, &depths)
    });

    // sums[ri][d][repeat]
    let mut acc = vec![vec![vec![0.0; cv.repeats]; depths.len()]; r_values.len()];
    let mut size = acc.clone();
    for (task, result) in results.into_iter().enumerate() {
        let (ri, repeat) = (task / per_r, (task % per_r) / cv.folds);
        for (d, (a, s)) in result?.into_iter().enumerate() {
            acc[ri][d][repeat] += a;
            size[ri][d][repeat] += s;
        }
    }

    let k = cv.folds as f64;
    let mut cells = Vec::with_capacity(r_values.len() * depths.len());
    for (ri, &r) in r_values.iter().enumerate() {
        for (d, &depth) in depths.iter().enumerate() {
            let accuracies: Vec<f64> = acc[ri][d].iter().map(|a| a / k).collect();
            let sizes: Vec<f64> = size[ri][d].iter().map(|s| s / k).collect();
            let (mean_accuracy, std_accuracy) = mean_std(&accuracies);
            let (mean_size, std_size) = mean_std(&sizes);
            cells.push(CvCell {
                r,
                depth,
                mean_accuracy,
                std_accuracy,
                mean_size,
                std_size,
                outcome: CvOutcome { accuracies, sizes },
            });
        }
    }
    let selected = select_best(&cells).expect("grid has at least one cell");
    Ok(CvReport {
        algorithm,
        criterion,
        cv: *cv,
        cells,
        selected,
    })
}

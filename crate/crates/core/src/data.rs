//! Datasets and the preprocessing transforms applied before induction.
//!
//! Feature cells are stored row-major as `f64`, with `NaN` marking a missing
//! cell. Accessors hand out `Option<f64>`; the raw rows are exposed for the
//! hot paths in [`crate::induction`], which rely on `NaN` comparing false.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Class names assigned by [`discretize_label`], in id order.
pub const DISCRETIZED_CLASS_NAMES: [&str; 2] = ["one", "two"];

/// A labelled classification dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    n: usize,
    m: usize,
    features: Vec<f64>,
    labels: Vec<usize>,
    class_names: Vec<String>,
    feature_names: Vec<String>,
}

impl Dataset {
    /// Builds a dataset from rows of optional cells and dense class ids.
    pub fn new(
        feature_names: Vec<String>,
        rows: Vec<Vec<Option<f64>>>,
        labels: Vec<usize>,
        class_names: Vec<String>,
    ) -> Result<Self> {
        let m = feature_names.len();
        let mut features = Vec::with_capacity(rows.len() * m);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(Error::Format {
                    row: Some(i + 1),
                    column: None,
                    message: alloc::format!("expected {m} features, found {}", row.len()),
                });
            }
            for (j, cell) in row.iter().enumerate() {
                match cell {
                    Some(v) if !v.is_finite() => {
                        return Err(Error::Format {
                            row: Some(i + 1),
                            column: Some(j),
                            message: "non-finite value".to_string(),
                        })
                    }
                    Some(v) => features.push(*v),
                    None => features.push(f64::NAN),
                }
            }
        }
        Self::from_raw(m, features, labels, class_names, feature_names)
    }

    /// Builds a dataset from rows paired with label strings; class ids follow
    /// the order in which labels first appear.
    pub fn from_labeled_rows(
        feature_names: Vec<String>,
        rows: Vec<(Vec<Option<f64>>, String)>,
    ) -> Result<Self> {
        let mut class_names: Vec<String> = Vec::new();
        let mut labels = Vec::with_capacity(rows.len());
        let mut cells = Vec::with_capacity(rows.len());
        for (row, label) in rows {
            let id = match class_names.iter().position(|c| *c == label) {
                Some(id) => id,
                None => {
                    class_names.push(label);
                    class_names.len() - 1
                }
            };
            labels.push(id);
            cells.push(row);
        }
        Self::new(feature_names, cells, labels, class_names)
    }

    /// Builds a dataset from a row-major buffer where `NaN` marks a missing cell.
    pub fn from_raw(
        m: usize,
        features: Vec<f64>,
        labels: Vec<usize>,
        class_names: Vec<String>,
        feature_names: Vec<String>,
    ) -> Result<Self> {
        if feature_names.len() != m {
            return Err(Error::config("feature name count does not match m"));
        }
        let n = labels.len();
        if features.len() != n * m {
            return Err(Error::config(alloc::format!(
                "feature buffer has {} cells, expected {n}x{m}",
                features.len()
            )));
        }
        if n == 0 {
            return Err(Error::EmptyDataset);
        }
        if let Some(bad) = labels.iter().find(|&&l| l >= class_names.len()) {
            return Err(Error::config(alloc::format!(
                "label id {bad} out of range for {} classes",
                class_names.len()
            )));
        }
        Ok(Self {
            n,
            m,
            features,
            labels,
            class_names,
            feature_names,
        })
    }

    /// Number of samples.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of features.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Cell `(i, j)`, `None` when missing.
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        let v = self.features[i * self.m + j];
        (!v.is_nan()).then_some(v)
    }

    /// Row `i` with `NaN` for missing cells.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.m..(i + 1) * self.m]
    }

    /// Row-major feature buffer with `NaN` for missing cells.
    pub fn raw_features(&self) -> &[f64] {
        &self.features
    }

    /// Class id of every sample.
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Original label strings, indexed by class id.
    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    /// Column names.
    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    /// Number of classes (including any with no samples).
    pub fn num_classes(&self) -> usize {
        self.class_names.len()
    }

    /// Whether any cell is missing.
    pub fn has_missing(&self) -> bool {
        self.features.iter().any(|v| v.is_nan())
    }

    /// Column index of a feature name.
    pub fn feature_index(&self, name: &str) -> Option<usize> {
        self.feature_names.iter().position(|f| f == name)
    }

    /// Per-class sample counts.
    pub fn class_counts(&self) -> ClassCounts {
        ClassCounts::from_labels(&self.labels, self.num_classes())
    }

    /// The rows at `indices`, in that order. Class ids and names are kept.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let mut features = Vec::with_capacity(indices.len() * self.m);
        let mut labels = Vec::with_capacity(indices.len());
        for &i in indices {
            features.extend_from_slice(self.row(i));
            labels.push(self.labels[i]);
        }
        Self::from_raw(
            self.m,
            features,
            labels,
            self.class_names.clone(),
            self.feature_names.clone(),
        )
    }

    /// Replaces the labels and class names, keeping the features.
    pub fn with_labels(&self, labels: Vec<usize>, class_names: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::config("label count does not match sample count"));
        }
        Self::from_raw(
            self.m,
            self.features.clone(),
            labels,
            class_names,
            self.feature_names.clone(),
        )
    }
}

/// Per-class sample counts.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ClassCounts {
    counts: Vec<usize>,
    total: usize,
}

impl ClassCounts {
    /// Zero counts over `num_classes` classes.
    pub fn zeros(num_classes: usize) -> Self {
        Self {
            counts: alloc::vec![0; num_classes],
            total: 0,
        }
    }

    /// Counts from explicit per-class values.
    pub fn from_counts(counts: Vec<usize>) -> Self {
        let total = counts.iter().sum();
        Self { counts, total }
    }

    /// Counts of `labels` over `num_classes` classes.
    pub fn from_labels(labels: &[usize], num_classes: usize) -> Self {
        let mut counts = alloc::vec![0; num_classes];
        for &l in labels {
            counts[l] += 1;
        }
        Self {
            counts,
            total: labels.len(),
        }
    }

    /// Adds one sample of class `class`.
    pub fn add(&mut self, class: usize) {
        self.counts[class] += 1;
        self.total += 1;
    }

    /// Per-class counts.
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// Sum of the counts.
    pub fn total(&self) -> usize {
        self.total
    }

    /// Most frequent class; ties go to the lowest id.
    pub fn majority(&self) -> usize {
        let mut best = 0;
        for (c, &k) in self.counts.iter().enumerate() {
            if k > self.counts[best] {
                best = c;
            }
        }
        best
    }

    /// At most one class has samples.
    pub fn is_homogeneous(&self) -> bool {
        self.counts.iter().filter(|&&k| k > 0).count() <= 1
    }
}

/// Two-class discretization of a continuous target: id 0 ("one") when the
/// value is strictly below `threshold`, id 1 ("two") otherwise.
pub fn discretize_label(values: &[Option<f64>], threshold: f64) -> Result<Vec<usize>> {
    values
        .iter()
        .enumerate()
        .map(|(i, v)| match v {
            Some(v) if !v.is_nan() => Ok(usize::from(*v >= threshold)),
            _ => Err(Error::preprocessing(alloc::format!(
                "label value missing at row {}",
                i + 1
            ))),
        })
        .collect()
}

/// Keeps exactly the rows where `feature` is present, in order.
pub fn remove_rows_missing(dataset: &Dataset, feature: &str) -> Result<Dataset> {
    let j = dataset
        .feature_index(feature)
        .ok_or_else(|| Error::config(alloc::format!("unknown feature {feature:?}")))?;
    let keep: Vec<usize> = (0..dataset.n())
        .filter(|&i| dataset.get(i, j).is_some())
        .collect();
    if keep.is_empty() {
        return Err(Error::EmptyDataset);
    }
    dataset.subset(&keep)
}

/// Replaces every missing cell with the mean of the present cells in its column.
pub fn mean_impute(dataset: &Dataset) -> Result<Dataset> {
    let (n, m) = (dataset.n(), dataset.m());
    let mut means = Vec::with_capacity(m);
    for j in 0..m {
        let (sum, count) = (0..n)
            .filter_map(|i| dataset.get(i, j))
            .fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
        if count == 0 {
            return Err(Error::preprocessing(alloc::format!(
                "column {:?} has no present values",
                dataset.feature_names()[j]
            )));
        }
        means.push(sum / count as f64);
    }
    let features = dataset
        .raw_features()
        .iter()
        .enumerate()
        .map(|(k, &v)| if v.is_nan() { means[k % m] } else { v })
        .collect();
    Dataset::from_raw(
        m,
        features,
        dataset.labels().to_vec(),
        dataset.class_names().to_vec(),
        dataset.feature_names().to_vec(),
    )
}

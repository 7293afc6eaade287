// Column-major, label-grouped copy of the samples reaching one tree node.

use alloc::vec::Vec;

use crate::data::Dataset;

pub(crate) struct NodeSamples<'a> {
    pub dataset: &'a Dataset,
    /// Dataset row of each node sample, in data order.
    pub rows: &'a [usize],
    /// Per class: `(class, start, end)` ranges into the grouped columns.
    segments: Vec<(usize, usize, usize)>,
    /// `columns[f]` holds feature `f` of every node sample, grouped by class.
    columns: Vec<Vec<f64>>,
    pub class_totals: Vec<usize>,
}

impl<'a> NodeSamples<'a> {
    pub fn new(dataset: &'a Dataset, rows: &'a [usize]) -> Self {
        let k = dataset.num_classes();
        let labels = dataset.labels();
        let mut class_totals = alloc::vec![0usize; k];
        for &i in rows {
            class_totals[labels[i]] += 1;
        }
        let mut grouped: Vec<usize> = rows.to_vec();
        grouped.sort_by_key(|&i| labels[i]);
        let mut segments = Vec::new();
        let mut start = 0;
        for (c, &total) in class_totals.iter().enumerate() {
            if total > 0 {
                segments.push((c, start, start + total));
                start += total;
            }
        }
        let columns = (0..dataset.m())
            .map(|f| grouped.iter().map(|&i| dataset.row(i)[f]).collect())
            .collect();
        Self {
            dataset,
            rows,
            segments,
            columns,
            class_totals,
        }
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn m(&self) -> usize {
        self.dataset.m()
    }

    pub fn num_classes(&self) -> usize {
        self.class_totals.len()
    }

    /// Feature `f` of the `i`-th node sample (data order).
    pub fn value(&self, i: usize, f: usize) -> f64 {
        self.dataset.row(self.rows[i])[f]
    }

    /// Per-class counts of samples with `sum_k coef[k] * x[active[k]] >= threshold`,
    /// accumulated in the same order as `Hyperplane::project`. Dropping its
    /// leading `0.0 +` only changes the sign of a zero sum, which compares equal.
    pub fn count_left(&self, active: &[usize], coef: &[f64], threshold: f64, left: &mut [usize]) {
        left.iter_mut().for_each(|c| *c = 0);
        match active.len() {
            0 => {
                // 0 >= threshold holds for every sample or none
                if 0.0 >= threshold {
                    left.copy_from_slice(&self.class_totals);
                }
            }
            1 => {
                let (a, w) = (&self.columns[active[0]], coef[0]);
                for &(c, s, e) in &self.segments {
                    left[c] = a[s..e].iter().filter(|&&x| w * x >= threshold).count();
                }
            }
            2 => {
                let (a, b) = (&self.columns[active[0]], &self.columns[active[1]]);
                let (w0, w1) = (coef[0], coef[1]);
                for &(c, s, e) in &self.segments {
                    left[c] = a[s..e]
                        .iter()
                        .zip(&b[s..e])
                        .filter(|(&x, &y)| w0 * x + w1 * y >= threshold)
                        .count();
                }
            }
            _ => {
                for &(c, s, e) in &self.segments {
                    left[c] = (s..e)
                        .filter(|&i| {
                            active
                                .iter()
                                .zip(coef)
                                .fold(0.0, |acc, (&f, &w)| acc + w * self.columns[f][i])
                                >= threshold
                        })
                        .count();
                }
            }
        }
    }
}

// Threshold searches over one projected coordinate: axis-aligned CART and
// the reflected spaces of HHCART.

use alloc::vec;
use alloc::vec::Vec;

use super::node::NodeSamples;
use super::{better_candidate, SplitCandidate};
use crate::criteria::CriterionKind;
use crate::error::{Error, Result};
use crate::geometry::{
    householder_reflection, left_threshold, symmetric_eigen, Hyperplane, SquareMatrix,
};
use crate::par;

/// Eigenvectors within this distance of a coordinate axis are not reflected.
pub const AXIS_ALIGNMENT_TOLERANCE: f64 = 1e-6;

/// Which eigenvectors of each class covariance HHCART reflects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HhcartVariant {
    /// Only the dominant eigenvector.
    Dominant,
    /// Every eigenvector, in descending eigenvalue order.
    All,
}

/// Best candidate among thresholds `t = values[i]`, scanning `i` in data
/// order with strict improvement. Left is what `Hyperplane::side_of` routes
/// Left for the plane `(w, t)`, or for `(-w, -t)` when `negated`. Returns
/// `(score, i)`.
fn sweep(
    values: &[f64],
    labels: &[usize],
    class_totals: &[usize],
    kind: CriterionKind,
    negated: bool,
) -> Option<(f64, usize)> {
    let n = values.len();
    let k = class_totals.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let sorted: Vec<f64> = order.iter().map(|&i| values[i]).collect();
    // prefix[p * k + c]: samples of class c among the p smallest values
    let mut prefix = vec![0usize; (n + 1) * k];
    for (p, &i) in order.iter().enumerate() {
        let (done, rest) = prefix.split_at_mut((p + 1) * k);
        rest[..k].copy_from_slice(&done[p * k..]);
        rest[labels[i]] += 1;
    }

    let mut left = vec![0usize; k];
    let mut right = vec![0usize; k];
    let mut best: Option<(f64, usize)> = None;
    for (i, &t) in values.iter().enumerate() {
        if negated {
            // -v >= left_threshold(-t)  <=>  v <= -left_threshold(-t)
            let upper = -left_threshold(-t);
            let p = sorted.partition_point(|&x| x <= upper);
            left.copy_from_slice(&prefix[p * k..(p + 1) * k]);
        } else {
            let lower = left_threshold(t);
            let p = sorted.partition_point(|&x| x < lower);
            for c in 0..k {
                left[c] = class_totals[c] - prefix[p * k + c];
            }
        }
        for c in 0..k {
            right[c] = class_totals[c] - left[c];
        }
        let score = kind.score_slices(&left, &right);
        if best.is_none_or(|(incumbent, _)| kind.is_better(score, incumbent)) {
            best = Some((score, i));
        }
    }
    best
}

fn pick(
    kind: CriterionKind,
    a: Option<SplitCandidate>,
    b: Option<SplitCandidate>,
) -> Option<SplitCandidate> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => {
            if better_candidate(kind, (b.score, b.enumeration_index), (a.score, a.enumeration_index)) {
                Some(b)
            } else {
                Some(a)
            }
        }
    }
}

fn node_labels(node: &NodeSamples<'_>) -> Vec<usize> {
    node.rows.iter().map(|&i| node.dataset.labels()[i]).collect()
}

// Axis-aligned candidates on one feature of the original space.
fn axis_block(node: &NodeSamples<'_>, labels: &[usize], kind: CriterionKind, feature: usize) -> Option<SplitCandidate> {
    let (n, m) = (node.n(), node.m());
    let values: Vec<f64> = (0..n).map(|i| node.value(i, feature)).collect();
    sweep(&values, labels, &node.class_totals, kind, false).map(|(score, i)| SplitCandidate {
        plane: Hyperplane::axis(feature, values[i], m),
        score,
        enumeration_index: (i * m + feature) as u128,
    })
}

fn require_complete(node: &NodeSamples<'_>) -> Result<()> {
    let missing = node
        .rows
        .iter()
        .any(|&i| node.dataset.row(i).iter().any(|v| v.is_nan()));
    if missing {
        return Err(Error::preprocessing(
            "axis-aligned and HHCART searches need complete data; impute missing cells first",
        ));
    }
    Ok(())
}

pub(crate) fn best_split_axis_node(
    node: &NodeSamples<'_>,
    kind: CriterionKind,
) -> Result<Option<SplitCandidate>> {
    require_complete(node)?;
    let labels = node_labels(node);
    Ok(par::map_reduce(
        node.m(),
        |f| axis_block(node, &labels, kind, f),
        |a, b| pick(kind, a, b),
    )
    .flatten())
}

/// Reflection directions in pool order: classes by id, then eigenvectors by
/// descending eigenvalue. Classes with fewer than two samples and
/// near-axis eigenvectors are skipped.
fn reflection_directions(node: &NodeSamples<'_>, variant: HhcartVariant) -> Result<Vec<Vec<f64>>> {
    let m = node.m();
    let labels = node.dataset.labels();
    let mut out = Vec::new();
    for class in 0..node.num_classes() {
        let members: Vec<&[f64]> = node
            .rows
            .iter()
            .filter(|&&i| labels[i] == class)
            .map(|&i| node.dataset.row(i))
            .collect();
        if members.len() < 2 {
            continue;
        }
        let count = members.len() as f64;
        let mut mean = vec![0.0; m];
        for x in &members {
            for j in 0..m {
                mean[j] += x[j];
            }
        }
        mean.iter_mut().for_each(|v| *v /= count);
        let mut cov = SquareMatrix::zeros(m);
        for a in 0..m {
            for b in a..m {
                let s: f64 = members
                    .iter()
                    .map(|x| (x[a] - mean[a]) * (x[b] - mean[b]))
                    .sum::<f64>()
                    / (count - 1.0);
                cov.set(a, b, s);
                cov.set(b, a, s);
            }
        }
        let eig = symmetric_eigen(&cov)?;
        let chosen: Vec<Vec<f64>> = match variant {
            HhcartVariant::Dominant => eig.vectors.into_iter().rev().take(1).collect(),
            HhcartVariant::All => eig.vectors.into_iter().rev().collect(),
        };
        for d in chosen {
            let near_axis = d
                .iter()
                .any(|x| libm::fabs(*x) > 1.0 - AXIS_ALIGNMENT_TOLERANCE);
            if !near_axis {
                out.push(d);
            }
        }
    }
    Ok(out)
}

// Axis-aligned candidates in the space reflected by `householder(d, 0)`,
// mapped back as planes `w = +-H[:, k]`, `b = +-t`.
fn reflected_block(
    node: &NodeSamples<'_>,
    labels: &[usize],
    kind: CriterionKind,
    direction: &[f64],
    block: usize,
) -> Result<Option<SplitCandidate>> {
    let (n, m) = (node.n(), node.m());
    let h = householder_reflection(direction, 0)?;
    let mut best = None;
    for k in 0..m {
        let column = h.column(k);
        let support: Vec<usize> = (0..m).filter(|&j| column[j] != 0.0).collect();
        let Some(&first) = support.first() else {
            continue;
        };
        let negated = column[first] < 0.0;
        let values: Vec<f64> = (0..n)
            .map(|i| {
                let x = node.dataset.row(node.rows[i]);
                support.iter().fold(0.0, |acc, &j| acc + column[j] * x[j])
            })
            .collect();
        let Some((score, i)) = sweep(&values, labels, &node.class_totals, kind, negated) else {
            continue;
        };
        let (coefficients, bias) = if negated {
            (column.iter().map(|c| -c).collect(), -values[i])
        } else {
            (column, values[i])
        };
        let plane = Hyperplane::new(coefficients, bias)?;
        let candidate = SplitCandidate {
            plane,
            score,
            enumeration_index: ((block * n + i) * m + k) as u128,
        };
        best = pick(kind, best, Some(candidate));
    }
    Ok(best)
}

pub(crate) fn best_split_hhcart_node(
    node: &NodeSamples<'_>,
    kind: CriterionKind,
    variant: HhcartVariant,
) -> Result<Option<SplitCandidate>> {
    require_complete(node)?;
    let labels = node_labels(node);
    let directions = reflection_directions(node, variant)?;
    let m = node.m();
    // block 0 holds the m original-space features, block b >= 1 reflects
    // along directions[b - 1]
    let tasks = m + directions.len();
    par::map_reduce(
        tasks,
        |t| {
            if t < m {
                Ok(axis_block(node, &labels, kind, t))
            } else {
                reflected_block(node, &labels, kind, &directions[t - m], t - m + 1)
            }
        },
        |a, b| match (a, b) {
            (Err(e), _) | (_, Err(e)) => Err(e),
            (Ok(a), Ok(b)) => Ok(pick(kind, a, b)),
        },
    )
    .unwrap_or(Ok(None))
}

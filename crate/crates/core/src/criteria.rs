//! Splitting criteria.
//!
//! All three criteria see a split only through its [`PartitionCounts`]. An
//! empty side has all class probabilities zero, so it contributes nothing to
//! any of the scores.

use core::fmt;
use core::str::FromStr;

use crate::data::ClassCounts;
use crate::error::{Error, Result};

/// Which splitting criterion to optimize.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CriterionKind {
    /// `(pL pR / 4) (sum_j |pLj - pRj|)^2`, higher is better.
    Twoing,
    /// Partition-weighted Gini impurity, lower is better.
    #[default]
    Gini,
    /// Entropy reduction in bits, higher is better.
    InfoGain,
}

impl CriterionKind {
    /// Every criterion, in declaration order.
    pub const ALL: [CriterionKind; 3] = [
        CriterionKind::Twoing,
        CriterionKind::Gini,
        CriterionKind::InfoGain,
    ];

    /// Command-line name.
    pub fn name(self) -> &'static str {
        match self {
            CriterionKind::Twoing => "twoing",
            CriterionKind::Gini => "gini",
            CriterionKind::InfoGain => "igain",
        }
    }

    /// Score of a partition under this criterion.
    pub fn score(self, counts: &PartitionCounts) -> f64 {
        self.score_slices(counts.left.counts(), counts.right.counts())
    }

    /// Score from raw per-class counts of each side.
    pub fn score_slices(self, left: &[usize], right: &[usize]) -> f64 {
        match self {
            CriterionKind::Twoing => twoing_slices(left, right),
            CriterionKind::Gini => gini_slices(left, right),
            CriterionKind::InfoGain => info_gain_slices(left, right),
        }
    }

    /// Strict comparison in this criterion's direction; ties are not better.
    pub fn is_better(self, candidate: f64, incumbent: f64) -> bool {
        match self {
            CriterionKind::Twoing | CriterionKind::InfoGain => candidate > incumbent,
            CriterionKind::Gini => candidate < incumbent,
        }
    }

    /// Sentinel beaten by every achievable score.
    pub fn worst_score(self) -> f64 {
        match self {
            CriterionKind::Twoing | CriterionKind::InfoGain => f64::NEG_INFINITY,
            CriterionKind::Gini => f64::INFINITY,
        }
    }
}

impl fmt::Display for CriterionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CriterionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "twoing" => Ok(CriterionKind::Twoing),
            "gini" => Ok(CriterionKind::Gini),
            "igain" => Ok(CriterionKind::InfoGain),
            other => Err(Error::config(alloc::format!(
                "unknown criterion {other:?} (expected twoing, gini or igain)"
            ))),
        }
    }
}

/// Class counts on each side of a candidate split.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionCounts {
    /// Samples routed Left.
    pub left: ClassCounts,
    /// Samples routed Right.
    pub right: ClassCounts,
}

impl PartitionCounts {
    /// Pairs two count vectors, zero-padding the shorter one.
    pub fn new(left: ClassCounts, right: ClassCounts) -> Self {
        let k = left.counts().len().max(right.counts().len());
        let pad = |c: ClassCounts| {
            if c.counts().len() == k {
                c
            } else {
                let mut v = c.counts().to_vec();
                v.resize(k, 0);
                ClassCounts::from_counts(v)
            }
        };
        Self {
            left: pad(left),
            right: pad(right),
        }
    }

    /// Total number of samples on both sides.
    pub fn total(&self) -> usize {
        self.left.total() + self.right.total()
    }
}

/// Twoing score.
pub fn twoing(counts: &PartitionCounts) -> f64 {
    twoing_slices(counts.left.counts(), counts.right.counts())
}

/// Weighted Gini impurity.
pub fn gini(counts: &PartitionCounts) -> f64 {
    gini_slices(counts.left.counts(), counts.right.counts())
}

/// Information gain in bits.
pub fn info_gain(counts: &PartitionCounts) -> f64 {
    info_gain_slices(counts.left.counts(), counts.right.counts())
}

fn totals(left: &[usize], right: &[usize]) -> (f64, f64, f64) {
    let nl: usize = left.iter().sum();
    let nr: usize = right.iter().sum();
    (nl as f64, nr as f64, (nl + nr) as f64)
}

fn twoing_slices(left: &[usize], right: &[usize]) -> f64 {
    let (nl, nr, n) = totals(left, right);
    if nl == 0.0 || nr == 0.0 {
        return 0.0;
    }
    let diff: f64 = left
        .iter()
        .zip(right)
        .map(|(&l, &r)| libm::fabs(l as f64 / nl - r as f64 / nr))
        .sum();
    (nl / n) * (nr / n) / 4.0 * diff * diff
}

fn gini_impurity(side: &[usize], total: f64) -> f64 {
    if total == 0.0 {
        return 0.0;
    }
    1.0 - side
        .iter()
        .map(|&k| {
            let p = k as f64 / total;
            p * p
        })
        .sum::<f64>()
}

fn gini_slices(left: &[usize], right: &[usize]) -> f64 {
    let (nl, nr, n) = totals(left, right);
    (nl / n) * gini_impurity(left, nl) + (nr / n) * gini_impurity(right, nr)
}

fn entropy<I: Iterator<Item = usize>>(counts: I, total: f64) -> f64 {
    if total == 0.0 {
        return 0.0;
    }
    counts
        .filter(|&k| k > 0)
        .map(|k| {
            let p = k as f64 / total;
            -p * libm::log2(p)
        })
        .sum()
}

fn info_gain_slices(left: &[usize], right: &[usize]) -> f64 {
    let (nl, nr, n) = totals(left, right);
    let parent = entropy(left.iter().zip(right).map(|(l, r)| l + r), n);
    let children = (nl / n) * entropy(left.iter().copied(), nl)
        + (nr / n) * entropy(right.iter().copied(), nr);
    parent - children
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use alloc::vec::Vec;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn pc(left: Vec<usize>, right: Vec<usize>) -> PartitionCounts {
        PartitionCounts::new(ClassCounts::from_counts(left), ClassCounts::from_counts(right))
    }

    #[test]
    fn twoing_examples() {
        assert_eq!(twoing(&pc(vec![2, 0], vec![0, 2])), 0.25);
        assert_eq!(twoing(&pc(vec![1, 1], vec![1, 1])), 0.0);
        assert_abs_diff_eq!(twoing(&pc(vec![3, 1], vec![1, 3])), 0.0625, epsilon = 1e-15);
    }

    #[test]
    fn gini_examples() {
        assert_eq!(gini(&pc(vec![2, 0], vec![0, 2])), 0.0);
        assert_eq!(gini(&pc(vec![1, 1], vec![1, 1])), 0.5);
        assert_eq!(gini(&pc(vec![4, 0], vec![0, 0])), 0.0);
    }

    #[test]
    fn info_gain_examples() {
        assert_eq!(info_gain(&pc(vec![2, 0], vec![0, 2])), 1.0);
        assert_eq!(info_gain(&pc(vec![1, 1], vec![1, 1])), 0.0);
        // H({3,1}) = 0.811278..., children 0.5 * 0 + 0.5 * 1
        assert_abs_diff_eq!(
            info_gain(&pc(vec![2, 0], vec![1, 1])),
            0.311_278_124_459_132_8,
            epsilon = 1e-12
        );
    }

    #[test]
    fn comparison_direction_and_sentinels() {
        assert!(!CriterionKind::Twoing.is_better(0.2, 0.2));
        assert!(CriterionKind::Gini.is_better(0.1, 0.3));
        assert!(CriterionKind::InfoGain.is_better(0.9, 0.5));
        assert_eq!(CriterionKind::Twoing.worst_score(), f64::NEG_INFINITY);
        assert_eq!(CriterionKind::Gini.worst_score(), f64::INFINITY);
        for kind in CriterionKind::ALL {
            for s in [0.0, 0.25, 1.0] {
                assert!(kind.is_better(s, kind.worst_score()));
            }
        }
    }

    #[test]
    fn names_round_trip() {
        for kind in CriterionKind::ALL {
            assert_eq!(kind.name().parse::<CriterionKind>().unwrap(), kind);
        }
        assert!("entropy".parse::<CriterionKind>().is_err());
    }

    fn counts_strategy() -> impl Strategy<Value = (Vec<usize>, Vec<usize>)> {
        (1usize..=6).prop_flat_map(|k| {
            (
                proptest::collection::vec(0usize..=100 / k, k),
                proptest::collection::vec(0usize..=100 / k, k),
            )
                .prop_filter("non-empty", |(l, r)| l.iter().sum::<usize>() + r.iter().sum::<usize>() > 0)
        })
    }

    fn parent_entropy(l: &[usize], r: &[usize]) -> f64 {
        let n: usize = l.iter().sum::<usize>() + r.iter().sum::<usize>();
        entropy(l.iter().zip(r).map(|(a, b)| a + b), n as f64)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn score_ranges((l, r) in counts_strategy()) {
            let p = pc(l.clone(), r.clone());
            let t = twoing(&p);
            prop_assert!((0.0..=0.25).contains(&t));
            let g = gini(&p);
            prop_assert!(g >= 0.0);
            let k = l.len() as f64;
            if p.left.total() > 0 && p.right.total() > 0 {
                prop_assert!(g <= 1.0 - 1.0 / k + 1e-12);
            }
            let ig = info_gain(&p);
            prop_assert!(ig >= -1e-12);
            prop_assert!(ig <= parent_entropy(&l, &r) + 1e-12);
        }

        #[test]
        fn side_swap_symmetry((l, r) in counts_strategy()) {
            let a = pc(l.clone(), r.clone());
            let b = pc(r, l);
            for kind in CriterionKind::ALL {
                prop_assert!((kind.score(&a) - kind.score(&b)).abs() <= 1e-12);
            }
        }

        #[test]
        fn relabeling_invariance((l, r) in counts_strategy(), rot in 0usize..6) {
            let k = l.len();
            let rotate = |v: &Vec<usize>| (0..k).map(|i| v[(i + rot) % k]).collect::<Vec<_>>();
            let a = pc(l.clone(), r.clone());
            let b = pc(rotate(&l), rotate(&r));
            for kind in CriterionKind::ALL {
                prop_assert!((kind.score(&a) - kind.score(&b)).abs() <= 1e-12);
            }
        }

        #[test]
        fn pure_sides(a in 1usize..50, b in 1usize..50) {
            let p = pc(vec![a, 0], vec![0, b]);
            prop_assert_eq!(gini(&p), 0.0);
            prop_assert!((info_gain(&p) - parent_entropy(&[a, 0], &[0, b])).abs() <= 1e-12);
        }
    }
}

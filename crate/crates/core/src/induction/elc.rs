// Exhaustive search over hyperplanes through r samples on r features.

use alloc::vec;
use alloc::vec::Vec;

use super::node::NodeSamples;
use super::{better_candidate, SplitCandidate};
use crate::combinations::{binomial, Combinations};
use crate::criteria::CriterionKind;
use crate::error::{Error, Result};
use crate::geometry::{embed, fit_local, left_threshold};
use crate::par;

// Upper bound on memo-table entries per feature combination.
const MEMO_LIMIT: usize = 1 << 20;

struct Best {
    score: f64,
    index: u128,
    sample_combo: Vec<usize>,
    feature_combo: usize,
}

fn pick(kind: CriterionKind, a: Option<Best>, b: Option<Best>) -> Option<Best> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => {
            if better_candidate(kind, (b.score, b.index), (a.score, a.index)) {
                Some(b)
            } else {
                Some(a)
            }
        }
    }
}

/// Dense ids for the distinct r-feature projections of the node samples;
/// `None` for samples missing a selected feature.
fn projection_ids(node: &NodeSamples<'_>, features: &[usize]) -> (Vec<Option<u32>>, usize) {
    let n = node.n();
    let mut present: Vec<usize> = (0..n)
        .filter(|&i| features.iter().all(|&f| !node.value(i, f).is_nan()))
        .collect();
    let cmp = |&a: &usize, &b: &usize| {
        features
            .iter()
            .map(|&f| node.value(a, f).total_cmp(&node.value(b, f)))
            .find(|o| o.is_ne())
            .unwrap_or(core::cmp::Ordering::Equal)
    };
    present.sort_by(cmp);
    let mut ids = vec![None; n];
    let mut next = 0u32;
    for (k, &i) in present.iter().enumerate() {
        if k > 0 && cmp(&present[k - 1], &i).is_ne() {
            next += 1;
        }
        ids[i] = Some(next);
    }
    let distinct = if present.is_empty() { 0 } else { next as usize + 1 };
    (ids, distinct)
}

fn search_feature_combo(
    node: &NodeSamples<'_>,
    r: usize,
    kind: CriterionKind,
    features: &[usize],
    feature_rank: usize,
    feature_combos: u128,
) -> Option<Best> {
    let n = node.n();
    let (ids, distinct) = projection_ids(node, features);
    // The plane, hence its score, depends only on the selected coordinates,
    // so selections repeating an earlier coordinate tuple reuse its score.
    let memo_len = (distinct < n)
        .then(|| distinct.checked_pow(r as u32))
        .flatten()
        .filter(|&len| len <= MEMO_LIMIT);
    let mut memo = memo_len.map(|len| vec![f64::NAN; len]);

    let mut points = vec![0.0; r * r];
    let mut active = Vec::with_capacity(r);
    let mut coef = Vec::with_capacity(r);
    let mut left = vec![0usize; node.num_classes()];
    let mut right = vec![0usize; node.num_classes()];

    let mut best: Option<(f64, u128, Vec<usize>)> = None;
    let mut combos = Combinations::new(n, r);
    let mut sample_rank: u128 = 0;
    while let Some(samples) = combos.peek() {
        let rank = sample_rank;
        sample_rank += 1;
        let mut key = 0usize;
        let mut valid = true;
        for &s in samples.iter().rev() {
            match ids[s] {
                Some(id) => key = key * distinct + id as usize,
                None => {
                    valid = false;
                    break;
                }
            }
        }
        if !valid {
            combos.step();
            continue;
        }

        let cached = memo.as_ref().map(|m| m[key]).filter(|s| !s.is_nan());
        let score = match cached {
            Some(s) => s,
            None => {
                for (a, &s) in samples.iter().enumerate() {
                    for (b, &f) in features.iter().enumerate() {
                        points[a * r + b] = node.value(s, f);
                    }
                }
                let (normal, bias) = fit_local(&points, r).expect("selected coordinates are present");
                active.clear();
                coef.clear();
                for (&f, &w) in features.iter().zip(&normal) {
                    if w != 0.0 {
                        active.push(f);
                        coef.push(w);
                    }
                }
                node.count_left(&active, &coef, left_threshold(bias), &mut left);
                for c in 0..left.len() {
                    right[c] = node.class_totals[c] - left[c];
                }
                let s = kind.score_slices(&left, &right);
                if let Some(m) = memo.as_mut() {
                    m[key] = s;
                }
                s
            }
        };

        let improves = match &best {
            None => true,
            Some((incumbent, _, _)) => kind.is_better(score, *incumbent),
        };
        if improves {
            best = Some((score, rank, samples.to_vec()));
        }
        combos.step();
    }

    best.map(|(score, rank, sample_combo)| Best {
        score,
        index: rank * feature_combos + feature_rank as u128,
        sample_combo,
        feature_combo: feature_rank,
    })
}

pub(crate) fn best_split_elc_node(
    node: &NodeSamples<'_>,
    r: usize,
    kind: CriterionKind,
) -> Result<Option<SplitCandidate>> {
    let (n, m) = (node.n(), node.m());
    if r == 0 || r > m {
        return Err(Error::config(alloc::format!(
            "r = {r} must satisfy 1 <= r <= m = {m}"
        )));
    }
    if r > n {
        return Err(Error::config(alloc::format!(
            "r = {r} exceeds the {n} samples available"
        )));
    }
    let feature_combos: Vec<Vec<usize>> = Combinations::new(m, r).collect();
    let total = binomial(m, r).map_or(feature_combos.len() as u128, u128::from);

    let best = par::map_reduce(
        feature_combos.len(),
        |fi| search_feature_combo(node, r, kind, &feature_combos[fi], fi, total),
        |a, b| pick(kind, a, b),
    )
    .flatten();

    Ok(best.map(|b| {
        let features = &feature_combos[b.feature_combo];
        let mut points = vec![0.0; r * r];
        for (a, &s) in b.sample_combo.iter().enumerate() {
            for (c, &f) in features.iter().enumerate() {
                points[a * r + c] = node.value(s, f);
            }
        }
        let (normal, bias) = fit_local(&points, r).expect("selected coordinates are present");
        SplitCandidate {
            plane: embed(&normal, bias, features, m),
            score: b.score,
            enumeration_index: b.index,
        }
    }))
}

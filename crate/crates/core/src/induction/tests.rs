use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::geometry::fit_hyperplane;

fn names(m: usize) -> Vec<String> {
    (0..m).map(|j| alloc::format!("x{j}")).collect()
}

fn dataset(rows: &[(&[f64], &str)]) -> Dataset {
    let m = rows[0].0.len();
    Dataset::from_labeled_rows(
        names(m),
        rows.iter()
            .map(|(x, y)| (x.iter().map(|v| Some(*v)).collect(), y.to_string()))
            .collect(),
    )
    .unwrap()
}

fn xor() -> Dataset {
    dataset(&[
        (&[0.0, 0.0], "A"),
        (&[1.0, 1.0], "A"),
        (&[0.0, 1.0], "B"),
        (&[1.0, 0.0], "B"),
    ])
}

fn config(algorithm: Algorithm, criterion: CriterionKind, r: usize, max_depth: usize) -> InductionConfig {
    InductionConfig {
        criterion,
        r,
        max_depth,
        algorithm,
    }
}

fn random_dataset(rng: &mut ChaCha8Rng, n: usize, m: usize, classes: usize, grid: u32) -> Dataset {
    let rows: Vec<Vec<Option<f64>>> = (0..n)
        .map(|_| (0..m).map(|_| Some(rng.random_range(0..grid) as f64 / 2.0)).collect())
        .collect();
    let labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..classes)).collect();
    let class_names = (0..classes).map(|c| alloc::format!("c{c}")).collect();
    Dataset::new(names(m), rows, labels, class_names).unwrap()
}

// Independent enumeration: every sample x feature combination, scored through
// evaluate_split.
fn brute_force_elc(data: &Dataset, r: usize, kind: CriterionKind) -> Option<f64> {
    let m = data.m();
    let mut best: Option<f64> = None;
    for samples in crate::combinations::Combinations::new(data.n(), r) {
        for features in crate::combinations::Combinations::new(m, r) {
            let points: Vec<Vec<f64>> = samples
                .iter()
                .map(|&s| features.iter().map(|&f| data.row(s)[f]).collect())
                .collect();
            let Ok(plane) = fit_hyperplane(&points, &features, m) else {
                continue;
            };
            let score = kind.score(&evaluate_split(&plane, data));
            if best.is_none_or(|b| kind.is_better(score, b)) {
                best = Some(score);
            }
        }
    }
    best
}

#[test]
fn evaluate_split_routes_boundary_left() {
    let data = dataset(&[(&[2.0, 0.0], "A"), (&[3.0, 0.0], "A"), (&[4.0, 0.0], "B")]);
    let counts = evaluate_split(&Hyperplane::axis(0, 3.0, 2), &data);
    assert_eq!(counts.left.counts(), &[1, 1]);
    assert_eq!(counts.right.counts(), &[1, 0]);

    let single = dataset(&[(&[5.0], "A")]);
    let counts = evaluate_split(&Hyperplane::axis(0, 1.0, 1), &single);
    assert_eq!((counts.left.total(), counts.right.total()), (1, 0));
}

#[test]
fn evaluate_split_matches_per_sample_check() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let data = random_dataset(&mut rng, 20, 3, 3, 10);
    let plane = Hyperplane::from_unnormalized(vec![1.0, -2.0, 0.5], 0.7).unwrap();
    let counts = evaluate_split(&plane, &data);
    let mut left = [0; 3];
    let mut right = [0; 3];
    for i in 0..data.n() {
        let x = data.row(i);
        let v = plane.coefficients().iter().zip(x).map(|(w, x)| w * x).sum::<f64>();
        if v >= plane.bias() {
            left[data.labels()[i]] += 1;
        } else {
            right[data.labels()[i]] += 1;
        }
    }
    assert_eq!(counts.left.counts(), &left[..]);
    assert_eq!(counts.right.counts(), &right[..]);
}

#[test]
fn xor_axis_splits_carry_no_twoing_gain() {
    // each non-degenerate threshold leaves one A and one B on both sides
    let data = xor();
    for i in 0..4 {
        for f in 0..2 {
            let plane = Hyperplane::axis(f, data.row(i)[f], 2);
            assert_eq!(CriterionKind::Twoing.score(&evaluate_split(&plane, &data)), 0.0);
        }
    }
    let best = best_split_elc(&data, 1, CriterionKind::Twoing).unwrap().unwrap();
    assert_eq!(best.enumeration_index, 0);
    assert_eq!(best.plane, Hyperplane::axis(0, 0.0, 2));
    assert_eq!(best.score, 0.0);

    let tree = fit(&config(Algorithm::CartElc, CriterionKind::Twoing, 1, 2), &data).unwrap();
    assert_eq!(tree.size(), 1);
}

#[test]
fn node_with_r_samples_cannot_be_split() {
    // root x - y >= 0 isolates (0,1); then x >= 1 leaves {(1,1)A, (1,0)B},
    // whose only two-point plane passes through both samples
    let data = xor();
    let tree = fit(&config(Algorithm::CartElc, CriterionKind::Twoing, 2, 3), &data).unwrap();
    assert_eq!(tree.accuracy(&data), 0.75);
    assert_eq!((tree.size(), tree.depth()), (3, 2));
}

#[test]
fn two_samples_split_at_second() {
    let data = dataset(&[(&[0.0], "A"), (&[1.0], "B")]);
    for best in [
        best_split_elc(&data, 1, CriterionKind::Gini).unwrap().unwrap(),
        best_split_axis(&data, CriterionKind::Gini).unwrap().unwrap(),
    ] {
        assert_eq!(best.plane, Hyperplane::axis(0, 1.0, 1));
        assert_eq!(best.score, 0.0);
        assert_eq!(best.enumeration_index, 1);
    }
}

#[test]
fn single_sample_has_one_candidate() {
    let data = dataset(&[(&[4.0], "A")]);
    let best = best_split_axis(&data, CriterionKind::Gini).unwrap().unwrap();
    assert_eq!(best.plane, Hyperplane::axis(0, 4.0, 1));
}

#[test]
fn homogeneous_search_returns_first_candidate() {
    let data = dataset(&[(&[0.0, 1.0], "A"), (&[2.0, 3.0], "A"), (&[4.0, 1.0], "A")]);
    for kind in CriterionKind::ALL {
        let best = best_split_elc(&data, 1, kind).unwrap().unwrap();
        assert_eq!(best.enumeration_index, 0);
        assert_eq!(best.score, 0.0);
    }
}

#[test]
fn elc_rejects_bad_r() {
    let data = xor();
    assert!(matches!(best_split_elc(&data, 3, CriterionKind::Gini), Err(Error::Config(_))));
    assert!(matches!(best_split_elc(&data, 0, CriterionKind::Gini), Err(Error::Config(_))));
    let tiny = dataset(&[(&[0.0, 1.0], "A")]);
    assert!(matches!(best_split_elc(&tiny, 2, CriterionKind::Gini), Err(Error::Config(_))));
}

#[test]
fn elc_skips_selections_with_missing_cells() {
    let data = Dataset::new(
        names(1),
        vec![vec![None], vec![None]],
        vec![0, 1],
        vec!["A".into(), "B".into()],
    )
    .unwrap();
    assert_eq!(best_split_elc(&data, 1, CriterionKind::Gini).unwrap(), None);

    let data = Dataset::new(
        names(2),
        vec![vec![None, Some(0.0)], vec![Some(1.0), Some(5.0)], vec![Some(2.0), Some(6.0)]],
        vec![0, 1, 1],
        vec!["A".into(), "B".into()],
    )
    .unwrap();
    // the missing sample goes Right under every plane on feature 0
    let best = best_split_elc(&data, 1, CriterionKind::Gini).unwrap().unwrap();
    assert_eq!(best.score, 0.0);
    let tree = fit(&config(Algorithm::CartElc, CriterionKind::Gini, 1, 3), &data).unwrap();
    assert_eq!(tree.accuracy(&data), 1.0);
}

#[test]
fn homogeneous_fit_is_one_leaf() {
    let data = dataset(&[(&[0.0, 1.0], "A"), (&[2.0, 3.0], "A")]);
    for algorithm in Algorithm::ALL {
        let tree = fit(&config(algorithm, CriterionKind::Gini, 1, 4), &data).unwrap();
        assert_eq!(tree.root, Node::Leaf { class: 0 });
        assert_eq!((tree.size(), tree.depth()), (1, 0));
        assert_eq!(tree.accuracy(&data), 1.0);
    }
}

#[test]
fn separable_diagonal_set_needs_one_oblique_split() {
    let data = dataset(&[
        (&[0.0, 0.0], "A"),
        (&[0.2, 0.1], "A"),
        (&[1.0, 0.9], "B"),
        (&[0.8, 1.0], "B"),
    ]);
    let tree = fit(&config(Algorithm::CartElc, CriterionKind::Gini, 2, 1), &data).unwrap();
    assert_eq!((tree.size(), tree.depth()), (2, 1));
    assert_eq!(tree.accuracy(&data), 1.0);
    let Node::Split { plane, .. } = &tree.root else {
        panic!("expected a split");
    };
    assert_eq!(plane.active_features().len(), 2);
}

#[test]
fn fitted_points_lie_left_of_their_plane() {
    // plane through (1, 0.9) and (0.8, 1): both must count as on the plane
    let data = dataset(&[(&[1.0, 0.9], "B"), (&[0.8, 1.0], "B"), (&[0.0, 0.0], "A")]);
    let plane = fit_hyperplane(&[vec![1.0, 0.9], vec![0.8, 1.0]], &[0, 1], 2).unwrap();
    let counts = evaluate_split(&plane, &data);
    assert_eq!(counts.left.counts(), &[2, 0]);
}

#[test]
fn tree_metrics_and_prediction() {
    let leaf = Tree {
        m: 2,
        classes: vec!["A".into(), "B".into()],
        root: Node::Leaf { class: 1 },
    };
    assert_eq!((leaf.size(), leaf.depth()), (1, 0));
    assert_eq!(leaf.predict_name(&[3.0, -1.0]), "B");

    let split = |plane, left, right| Node::Split {
        plane,
        left: Box::new(left),
        right: Box::new(right),
    };
    let stump = split(Hyperplane::axis(0, 1.0, 2), Node::Leaf { class: 0 }, Node::Leaf { class: 1 });
    assert_eq!((stump.size(), stump.depth()), (2, 1));
    assert_eq!(stump.predict(&[1.0, 0.0]), 0);
    assert_eq!(stump.predict(&[f64::NAN, 0.0]), 1);

    let xor_tree = split(
        Hyperplane::axis(0, 1.0, 2),
        split(Hyperplane::axis(1, 1.0, 2), Node::Leaf { class: 0 }, Node::Leaf { class: 1 }),
        split(Hyperplane::axis(1, 1.0, 2), Node::Leaf { class: 1 }, Node::Leaf { class: 0 }),
    );
    assert_eq!((xor_tree.size(), xor_tree.depth()), (4, 2));
    let data = xor();
    for i in 0..4 {
        assert_eq!(xor_tree.predict(data.row(i)), data.labels()[i]);
    }
    assert_eq!(xor_tree.planes().len(), 3);
}

#[test]
fn hhcart_finds_plane_along_elongation() {
    // both clouds stretch along (1,1); only x + y separates them
    let a = [(-5.5, -0.5), (-0.5, -5.5), (0.5, 5.5), (5.5, 0.5)];
    let mut rows: Vec<(Vec<Option<f64>>, String)> = Vec::new();
    for (x, y) in a {
        rows.push((vec![Some(x), Some(y)], "A".into()));
    }
    for (x, y) in a {
        rows.push((vec![Some(x + 7.0), Some(y + 7.0)], "B".into()));
    }
    let data = Dataset::from_labeled_rows(names(2), rows).unwrap();
    let axis = best_split_axis(&data, CriterionKind::Gini).unwrap().unwrap();
    assert!(axis.score > 0.0);
    for variant in [HhcartVariant::Dominant, HhcartVariant::All] {
        let best = best_split_hhcart(&data, CriterionKind::Gini, variant).unwrap().unwrap();
        assert_eq!(best.score, 0.0);
        let w = best.plane.coefficients();
        let s = core::f64::consts::FRAC_1_SQRT_2;
        assert!((w[0] - s).abs() < 1e-6 && (w[1] - s).abs() < 1e-6, "{w:?}");
        assert_eq!(evaluate_split(&best.plane, &data).left.counts(), &[0, 4]);
    }
}

#[test]
fn hhcart_with_singleton_classes_equals_axis() {
    let data = dataset(&[(&[0.0, 3.0], "A"), (&[2.0, 1.0], "B"), (&[1.0, 1.5], "C")]);
    let axis = best_split_axis(&data, CriterionKind::Twoing).unwrap();
    for variant in [HhcartVariant::Dominant, HhcartVariant::All] {
        assert_eq!(best_split_hhcart(&data, CriterionKind::Twoing, variant).unwrap(), axis);
    }
}

#[test]
fn hhcart_prefers_axis_split_on_axis_separable_data() {
    let data = dataset(&[
        (&[0.0, 0.0], "A"),
        (&[1.0, 2.0], "A"),
        (&[3.0, 0.5], "B"),
        (&[4.0, 2.5], "B"),
    ]);
    let axis = best_split_axis(&data, CriterionKind::Gini).unwrap().unwrap();
    let hh = best_split_hhcart(&data, CriterionKind::Gini, HhcartVariant::All).unwrap().unwrap();
    assert_eq!(axis.score, 0.0);
    assert_eq!(hh, axis);
}

#[test]
fn non_elc_algorithms_reject_missing_cells() {
    let data = Dataset::new(
        names(1),
        vec![vec![None], vec![Some(1.0)]],
        vec![0, 1],
        vec!["A".into(), "B".into()],
    )
    .unwrap();
    for algorithm in [Algorithm::CartAxis, Algorithm::HhcartD, Algorithm::HhcartA] {
        let err = fit(&config(algorithm, CriterionKind::Gini, 1, 2), &data).unwrap_err();
        assert!(matches!(err, Error::Preprocessing(_)));
    }
    assert!(matches!(
        best_split_axis(&data, CriterionKind::Gini),
        Err(Error::Preprocessing(_))
    ));
    assert!(fit(&config(Algorithm::CartElc, CriterionKind::Gini, 1, 2), &data).is_ok());
}

#[test]
fn config_validation() {
    let data = xor();
    let bad_depth = config(Algorithm::CartElc, CriterionKind::Gini, 1, 0);
    assert!(matches!(fit(&bad_depth, &data), Err(Error::Config(_))));
    let bad_r = config(Algorithm::CartElc, CriterionKind::Gini, 3, 2);
    assert!(matches!(fit(&bad_r, &data), Err(Error::Config(_))));
    // r is ignored by the other algorithms
    assert!(fit(&config(Algorithm::CartAxis, CriterionKind::Gini, 9, 2), &data).is_ok());
    assert!(matches!(grow(&bad_depth, &data, &[]), Err(Error::Config(_))));
    let ok = config(Algorithm::CartElc, CriterionKind::Gini, 1, 2);
    assert!(matches!(grow(&ok, &data, &[]), Err(Error::Config(_))));
}

#[test]
fn algorithm_names_round_trip() {
    for a in Algorithm::ALL {
        assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
    }
    assert!("oc1".parse::<Algorithm>().is_err());
}

#[test]
fn elc_matches_brute_force_on_random_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..60 {
        let n = rng.random_range(2..=10);
        let m = rng.random_range(1..=3);
        let data = random_dataset(&mut rng, n, m, 2, 6);
        for r in 1..=m.min(2).min(n) {
            for kind in CriterionKind::ALL {
                let got = best_split_elc(&data, r, kind).unwrap().map(|c| c.score);
                assert_eq!(got, brute_force_elc(&data, r, kind));
            }
        }
    }
}

#[test]
fn r1_elc_equals_axis() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..30 {
        let n = rng.random_range(1..=30);
        let m = rng.random_range(1..=4);
        let data = random_dataset(&mut rng, n, m, 3, 8);
        for kind in CriterionKind::ALL {
            assert_eq!(
                best_split_elc(&data, 1, kind).unwrap(),
                best_split_axis(&data, kind).unwrap()
            );
            let elc = fit(&config(Algorithm::CartElc, kind, 1, 4), &data).unwrap();
            let axis = fit(&config(Algorithm::CartAxis, kind, 1, 4), &data).unwrap();
            assert_eq!(elc, axis);
        }
    }
}

#[test]
fn fitted_trees_respect_structural_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let n = rng.random_range(3..=25);
        let m = rng.random_range(2..=3);
        let data = random_dataset(&mut rng, n, m, 3, 10);
        let majority = data.class_counts().counts().iter().copied().max().unwrap() as f64 / n as f64;
        for algorithm in Algorithm::ALL {
            for max_depth in 1..=3 {
                let cfg = config(algorithm, CriterionKind::Twoing, 2, max_depth);
                let tree = fit(&cfg, &data).unwrap();
                assert!(tree.depth() <= max_depth);
                assert!(tree.accuracy(&data) >= majority - 1e-12);
                for plane in tree.root.planes() {
                    let first = plane.active_features()[0];
                    assert!(plane.coefficients()[first] > 0.0);
                    let mut again = plane.clone();
                    again.canonicalize();
                    assert_eq!(&again, plane);
                }
                assert_eq!(fit(&cfg, &data).unwrap(), tree);
            }
        }
    }
}

#[test]
fn truncation_equals_shallower_fit() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..15 {
        let data = random_dataset(&mut rng, 24, 3, 2, 10);
        let rows: Vec<usize> = (0..data.n()).collect();
        for algorithm in Algorithm::ALL {
            let deep = grow(&config(algorithm, CriterionKind::Gini, 2, 5), &data, &rows).unwrap();
            for depth in 1..=5 {
                let fresh = fit(&config(algorithm, CriterionKind::Gini, 2, depth), &data).unwrap();
                assert_eq!(deep.truncate(depth), fresh.root);
            }
        }
    }
}

#[test]
fn split_optimality_at_every_node() {
    // every split plane of a fitted tree scores at least as well as every
    // plane through r samples of the node it splits
    fn check(node: &Node, data: &Dataset, r: usize, kind: CriterionKind) {
        if let Node::Split { plane, left, right } = node {
            let score = kind.score(&evaluate_split(plane, data));
            if let Some(best) = brute_force_elc(data, r, kind) {
                assert!(!kind.is_better(best, score), "{best} beats {score}");
            }
            let (l, rr): (Vec<usize>, Vec<usize>) =
                (0..data.n()).partition(|&i| plane.side_of(data.row(i)) == Side::Left);
            check(left, &data.subset(&l).unwrap(), r, kind);
            check(right, &data.subset(&rr).unwrap(), r, kind);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..20 {
        let n = rng.random_range(4..=12);
        let data = random_dataset(&mut rng, n, 3, 2, 8);
        for r in 1..=2 {
            for kind in CriterionKind::ALL {
                let tree = fit(&config(Algorithm::CartElc, kind, r, 4), &data).unwrap();
                check(&tree.root, &data, r, kind);
            }
        }
    }
}


use proptest::prelude::*;
use xihd_core::independence::{j0, screening_threshold};
use xihd_core::rank::{concomitant_ranks, rank_vector};
use xihd_core::xi::xi_upper_bound;
use xihd_core::{run_tests, xi_matrix, xi_pair, xi_pair_neighbor, DataMatrix, TestKind, TieBreak};

/// Distinct finite values: a shuffled grid plus a small jitter keeps ties out.
fn distinct(n: std::ops::Range<usize>) -> impl Strategy<Value = Vec<f64>> {
    n.prop_flat_map(|len| {
        (
            Just((0..len).map(|i| i as f64).collect::<Vec<_>>()).prop_shuffle(),
            -0.4f64..0.4,
            0.1f64..10.0,
        )
            .prop_map(|(v, shift, scale)| v.into_iter().map(|x| (x + shift) * scale).collect())
    })
}

fn pair(n: std::ops::Range<usize>) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    distinct(n).prop_flat_map(|x| {
        let len = x.len();
        (Just(x), distinct(len..len + 1))
    })
}

proptest! {
    #[test]
    fn ranks_form_a_permutation(x in distinct(1..60)) {
        let mut r = rank_vector(&x).unwrap().into_inner();
        r.sort_unstable();
        prop_assert_eq!(r, (1..=x.len() as u32).collect::<Vec<_>>());
    }

    #[test]
    fn both_representations_agree((x, y) in pair(2..120)) {
        let a = xi_pair(&x, &y).unwrap();
        let b = xi_pair_neighbor(&x, &y).unwrap();
        prop_assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn coefficient_is_bounded((x, y) in pair(2..120)) {
        let v = xi_pair(&x, &y).unwrap();
        prop_assert!(v >= -1.0 && v <= xi_upper_bound(x.len()) + 1e-15);
        prop_assert!(v.abs() <= 1.0);
    }

    #[test]
    fn invariant_under_increasing_maps((x, y) in pair(2..80)) {
        let v = xi_pair(&x, &y).unwrap();
        let ex: Vec<f64> = x.iter().map(|t| (t / 10.0).exp()).collect();
        let cy: Vec<f64> = y.iter().map(|t| t * t * t).collect();
        prop_assert_eq!(xi_pair(&ex, &cy).unwrap(), v);
    }

    #[test]
    fn concomitants_depend_on_ranks_only((x, y) in pair(2..50)) {
        let r = concomitant_ranks(&x, &y).unwrap();
        let rx: Vec<f64> = rank_vector(&x).unwrap().as_slice().iter().map(|&v| v as f64).collect();
        prop_assert_eq!(r, concomitant_ranks(&rx, &y).unwrap());
    }

    #[test]
    fn matrix_entries_match_pairwise(cols in (5usize..30).prop_flat_map(|n| prop::collection::vec(distinct(n..n + 1), 2..5))) {
        let data = DataMatrix::from_columns(cols.clone()).unwrap();
        let xi = xi_matrix(&data).unwrap();
        for (k, l, v) in xi.off_diagonal() {
            prop_assert_eq!(v, xi_pair(&cols[k], &cols[l]).unwrap());
        }
    }

    #[test]
    fn report_invariants(cols in (5usize..40).prop_flat_map(|n| prop::collection::vec(distinct(n..n + 1), 2..6))) {
        let data = DataMatrix::from_columns(cols).unwrap();
        let reports = run_tests(&data, &TestKind::ALL, 0.05, TieBreak::Reject).unwrap();
        let quad = &reports[0];
        let enh = &reports[2];
        prop_assert!(enh.j0 >= 0.0);
        prop_assert!(enh.statistic >= quad.statistic);
        prop_assert_eq!(enh.statistic, enh.j0 + quad.statistic);
        if enh.screened_pairs.is_empty() {
            prop_assert_eq!(enh.statistic, quad.statistic);
        }
        for r in &reports {
            prop_assert!((0.0..=1.0).contains(&r.p_value));
            prop_assert_eq!(r.reject, r.statistic > r.threshold);
            prop_assert_eq!(r.reject, r.p_value < r.alpha);
        }
        let cut = screening_threshold(data.n(), data.p()).unwrap();
        prop_assert!(enh.screened_pairs.iter().all(|s| s.xi.abs() > cut));
    }
}

#[test]
fn coefficient_is_asymmetric() {
    // y = x^2 on a symmetric grid: y is a function of x but not conversely.
    let x: Vec<f64> = (0..41)
        .map(|i| (i as f64 - 20.0) + 0.01 * i as f64)
        .collect();
    let y: Vec<f64> = x.iter().map(|v| v * v).collect();
    let forward = xi_pair(&x, &y).unwrap();
    let backward = xi_pair(&y, &x).unwrap();
    assert!(forward > 0.85, "{forward}");
    assert!(backward < 0.4, "{backward}");
}

#[test]
fn screening_picks_out_a_functional_pair() {
    let n = 60;
    let v: Vec<f64> = (0..n)
        .map(|i| ((i * 37 % n) as f64 + 0.5) / n as f64)
        .collect();
    let u: Vec<f64> = v.iter().map(|t| (6.0 * t).sin() + 0.001 * t).collect();
    let w: Vec<f64> = (0..n)
        .map(|i| ((i * 11 % n) as f64).sqrt() + 0.0001 * i as f64)
        .collect();
    let data = DataMatrix::from_columns(vec![u, v, w]).unwrap();
    let xi = xi_matrix(&data).unwrap();
    assert!(j0(&xi).unwrap() > 0.0);
    let reports = run_tests(&data, &[TestKind::Enhanced], 0.05, TieBreak::Reject).unwrap();
    assert!(reports[0]
        .screened_pairs
        .iter()
        .any(|p| (p.k, p.l) == (2, 1)));
}

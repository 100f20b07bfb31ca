use optomech_scatter::overlap::{
    compute_overlaps, oracle_overlaps, DisplacementParameter, TruncationConfig,
};
use proptest::prelude::*;

fn beta(b: f64) -> DisplacementParameter {
    DisplacementParameter::new(b).unwrap()
}

#[test]
fn recurrence_matches_matrix_exponential() {
    for b in [0.1, 0.5, 1.0, 2.0] {
        let oracle = oracle_overlaps(beta(b), 80).unwrap();
        let u = compute_overlaps(beta(b), 9, TruncationConfig::default()).unwrap();
        let mut worst = 0.0f64;
        for n in 0..10 {
            for m in 0..10 {
                worst = worst.max((u.get(n, m) - oracle[(n, m)]).abs());
            }
        }
        assert!(worst < 1e-10, "beta = {b}: {worst:e}");
    }
}

#[test]
fn half_displacement_block_at_dim_60() {
    let oracle = oracle_overlaps(beta(0.5), 60).unwrap();
    let u = compute_overlaps(
        beta(0.5),
        9,
        TruncationConfig {
            dim_internal: Some(60),
        },
    )
    .unwrap();
    for n in 0..10 {
        for m in 0..10 {
            assert!((u.get(n, m) - oracle[(n, m)]).abs() < 1e-10);
        }
    }
}

#[test]
fn oracle_is_orthogonal_on_converged_corner() {
    let o = oracle_overlaps(beta(1.0), 60).unwrap();
    let corner = o.view((0, 0), (10, 60)).into_owned();
    let gram = &corner * corner.transpose();
    for n in 0..10 {
        for m in 0..10 {
            let expect = if n == m { 1.0 } else { 0.0 };
            assert!((gram[(n, m)] - expect).abs() < 1e-8);
        }
    }
}

#[test]
fn sign_relation_is_exact() {
    for b in [0.1, 0.5, 1.0, 2.0, 3.7] {
        let u = compute_overlaps(beta(b), 40, TruncationConfig::default()).unwrap();
        for n in 0..=40 {
            for m in 0..=40 {
                let s = if (n + m) % 2 == 0 { 1.0 } else { -1.0 };
                assert_eq!(u.get(n, m), s * u.get(m, n));
            }
        }
    }
}

#[test]
fn orthonormal_away_from_the_edge() {
    let b = 1.5;
    let n_max = 30;
    let u = compute_overlaps(beta(b), n_max, TruncationConfig::default()).unwrap();
    let buffer = 5;
    for n in 0..=n_max - buffer {
        for m in 0..=n_max - buffer {
            let expect = if n == m { 1.0 } else { 0.0 };
            assert!((u.gram(n, m) - expect).abs() < 1e-8, "({n},{m})");
        }
    }
}

#[test]
fn row_norms_grow_toward_one_with_internal_dimension() {
    let b = 2.0;
    let mut last = 0.0;
    for dim in [12, 16, 24, 40] {
        let u = compute_overlaps(
            beta(b),
            5,
            TruncationConfig {
                dim_internal: Some(dim),
            },
        )
        .unwrap();
        let norm = u.row_norm_sq(5);
        assert!(norm <= 1.0 + 1e-14);
        assert!(norm >= last);
        last = norm;
    }
    assert!((last - 1.0).abs() < 1e-12);
}

proptest! {
    #[test]
    fn rows_never_exceed_unit_norm(b in -3.0f64..3.0, n in 0usize..20) {
        let u = compute_overlaps(beta(b), 20, TruncationConfig::default()).unwrap();
        let partial: f64 = (0..=20).map(|m| u.get(n, m).powi(2)).sum();
        prop_assert!(partial <= 1.0 + 1e-12);
        prop_assert!(u.row_norm_sq(n) <= 1.0 + 1e-12);
    }

    #[test]
    fn vacuum_column_is_poisson(b in 0.0f64..3.0, n in 0usize..25) {
        let u = compute_overlaps(beta(b), 25, TruncationConfig::default()).unwrap();
        let log_fact: f64 = (1..=n).map(|k| (k as f64).ln()).sum();
        let poisson = if b == 0.0 {
            if n == 0 { 1.0 } else { 0.0 }
        } else {
            (-b * b + 2.0 * n as f64 * b.ln() - log_fact).exp()
        };
        prop_assert!((u.get(n, 0).powi(2) - poisson).abs() < 1e-13 * (1.0 + poisson));
    }
}

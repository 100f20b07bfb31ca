use optomech_scatter::spectra::{find_features, refine_extremum, sweep, FeatureKind, SweepGrid};
use optomech_scatter::{Scatterer, SolverConfig, SystemParams};

fn cfg() -> SolverConfig {
    SolverConfig {
        convergence_tol: 1e-10,
        ..Default::default()
    }
}

fn dips(p: &SystemParams, grid: SweepGrid, threshold: f64) -> Vec<f64> {
    let s = sweep(p, &grid, &cfg()).unwrap();
    find_features(&s, threshold)
        .into_iter()
        .filter(|f| f.kind == FeatureKind::Dip)
        .map(|f| f.location)
        .collect()
}

#[test]
fn polaron_sidebands_sit_at_integer_detunings() {
    let p = SystemParams {
        g0: 1.0,
        ..Default::default()
    };
    let grid = SweepGrid::default();
    let h = grid.spacing();
    let found = dips(&p, grid, 0.9);
    for target in [-1.0, 0.0, 1.0] {
        assert!(
            found.iter().any(|&x| (x - target).abs() <= h),
            "no dip near {target}: {found:?}"
        );
    }
}

#[test]
fn vacuum_rabi_doublet_without_mirror_motion() {
    let p = SystemParams {
        lambda: 4.0,
        ..Default::default()
    };
    let found = dips(&p, SweepGrid::new(-6.0, 6.0, 2001).unwrap(), 0.5);
    assert_eq!(found.len(), 2, "{found:?}");
    let s = Scatterer::new(p, 8).unwrap();
    let (lo, tlo) = refine_extremum(&s, found[0] - 0.01, found[0] + 0.01, true, 1e-10).unwrap();
    let (hi, thi) = refine_extremum(&s, found[1] - 0.01, found[1] + 0.01, true, 1e-10).unwrap();
    assert!((hi - lo - 8.0).abs() < 0.01);
    assert!(tlo < 1e-6 && thi < 1e-6);
}

#[test]
fn atomic_window_at_the_polaron_resonance() {
    let p = SystemParams {
        g0: 1.0,
        lambda: 0.05,
        ..Default::default()
    };
    let s = Scatterer::new(p, 32).unwrap();
    let (t, _) = s.solve_exact(0.0).unwrap().transmission_reflection();
    assert!((t - 1.0).abs() < 1e-9);
    let swept = sweep(&p, &SweepGrid::default(), &cfg()).unwrap();
    let features = find_features(&swept, 0.95);
    let near = |kind: FeatureKind, x: f64| {
        features
            .iter()
            .filter(|f| f.kind == kind && (f.location - x).abs() < 0.1)
            .count()
    };
    assert_eq!(near(FeatureKind::EitWindow, 0.0), 1, "{features:?}");
    assert_eq!(near(FeatureKind::Dip, -1.0), 1);
    assert_eq!(near(FeatureKind::EitWindow, -1.0), 0);
}

#[test]
fn detuned_atom_moves_transmission_maxima() {
    for delta_ac in [0.1, -0.1] {
        let p = SystemParams {
            g0: 1.0,
            lambda: 0.05,
            delta_ac,
            ..Default::default()
        };
        let s = Scatterer::new(p, 32).unwrap();
        for n in [0.0, 1.0] {
            let target = delta_ac + n;
            let (x, t) = refine_extremum(&s, target - 0.03, target + 0.03, false, 1e-9).unwrap();
            assert!((x - target).abs() < 0.003, "dac = {delta_ac}, n = {n}: {x}");
            assert!(t > 0.9);
        }
    }
}

use supou::experiments::{
    run_growth_sweep, run_lil_experiment, run_mz_experiment, verify_exotic, verify_levy_tail, Tolerances, Verdict,
};
use supou::measures::{Drift, GeneratingQuadruple, JumpLaw, LevyFamily, LevyPart, MeasureFamily};
use supou::simulator::{Execution, SimConfig, TimeGrid};
use supou::Error;

fn quad(b: f64, lam: LevyFamily, pi: MeasureFamily) -> GeneratingQuadruple {
    GeneratingQuadruple::new(Drift::Natural, b, lam, pi).unwrap()
}

fn unit_jumps(rate: f64) -> LevyFamily {
    LevyFamily::positive(LevyPart::CompoundPoisson {
        rate,
        jumps: JumpLaw::Fixed { size: 1.0 },
    })
    .unwrap()
}

fn pm1() -> MeasureFamily {
    MeasureFamily::point_mass(1.0).unwrap()
}

#[test]
fn tail_matches_unit_jump_closed_form() {
    let (rho, t) = (2.0f64, 5.0f64);
    let q = quad(0.0, unit_jumps(rho), pm1());
    let levels = [0.1, 0.3, 0.5, 0.7, 0.9];
    let mut cfg = SimConfig::new(t, TimeGrid::List(vec![t]));
    cfg.n_paths = 10_000;
    let r = verify_levy_tail(&q, t, &levels, &cfg, Execution::Parallel, &Tolerances::default()).unwrap();
    assert!(r.passed(), "{r:?}");
    for l in &r.levels {
        let g = 1.0 - (-t).exp();
        let exact = rho * ((1.0 - l.level) * g / (l.level * (-t).exp())).ln();
        assert!((l.analytic - exact).abs() < 1e-6 * exact, "{} vs {exact}", l.analytic);
    }
}

#[test]
fn tail_level_beyond_support_counts_nothing() {
    let q = quad(0.0, unit_jumps(1.0), pm1());
    let mut cfg = SimConfig::new(2.0, TimeGrid::List(vec![2.0]));
    cfg.n_paths = 500;
    let r = verify_levy_tail(&q, 2.0, &[1.5], &cfg, Execution::Sequential, &Tolerances::default()).unwrap();
    assert_eq!(r.levels[0].empirical, 0.0);
    assert!(r.passed());
}

#[test]
fn mz_rejects_gamma_above_tail_index() {
    let lam = LevyFamily::positive(LevyPart::ParetoTail { eta: 1.5, scale: 1.0 }).unwrap();
    let cfg = SimConfig::new(100.0, TimeGrid::log_points(1.0, 100.0, 10));
    let err = run_mz_experiment(&quad(0.0, lam, pm1()), 1.8, &cfg, Execution::Parallel, &Tolerances::default())
        .unwrap_err();
    assert!(matches!(err, Error::Configuration(_)), "{err}");
}

#[test]
fn mz_small_gamma_passes() {
    let lam = LevyFamily::positive(LevyPart::StableLike { beta0: 0.5, c: 1.0 }).unwrap();
    let mut cfg = SimConfig::new(1e4, TimeGrid::log_points(1.0, 1e4, 80));
    cfg.n_paths = 100;
    let r = run_mz_experiment(&quad(0.0, lam, pm1()), 0.8, &cfg, Execution::Parallel, &Tolerances::default())
        .unwrap();
    assert_eq!(r.verdict(), Verdict::Pass, "{:?}", r.criteria);
}

#[test]
fn lil_rejects_bad_configurations() {
    let cfg = SimConfig::new(1e4, TimeGrid::log_points(1.0, 1e4, 20));
    let tol = Tolerances::default();
    let heavy = LevyFamily::positive(LevyPart::ParetoTail { eta: 1.5, scale: 1.0 }).unwrap();
    let mixed = quad(1.0, unit_jumps(1.0), pm1());
    let empty = quad(0.0, LevyFamily::zero(), pm1());
    for q in [quad(0.0, heavy, pm1()), mixed, empty] {
        let err = run_lil_experiment(&q, &cfg, Execution::Parallel, &tol).unwrap_err();
        assert!(matches!(err, Error::Configuration(_)), "{err}");
    }
}

#[test]
fn sweep_flags_pure_drift_as_degenerate() {
    let q = GeneratingQuadruple::new(Drift::Explicit(1.0), 0.0, LevyFamily::zero(), pm1()).unwrap();
    let mut cfg = SimConfig::new(1e3, TimeGrid::log_points(1.0, 1e3, 20));
    cfg.n_paths = 4;
    let r = run_growth_sweep(&[q], &cfg, Execution::Parallel, &Tolerances::default()).unwrap();
    assert!(r[0].degenerate);
    assert!(r[0].criteria.is_empty() && r[0].slope.is_none());
    assert!(r[0].passed());
}

#[test]
fn sweep_is_reproducible() {
    let q = quad(0.0, unit_jumps(1.0), pm1());
    let mut cfg = SimConfig::new(1e3, TimeGrid::log_points(1.0, 1e3, 30));
    cfg.n_paths = 20;
    cfg.seed = 5;
    let tol = Tolerances::default();
    let a = run_growth_sweep(std::slice::from_ref(&q), &cfg, Execution::Parallel, &tol).unwrap();
    let b = run_growth_sweep(std::slice::from_ref(&q), &cfg, Execution::Sequential, &tol).unwrap();
    assert_eq!(a, b);
}

#[test]
fn exotic_pairs() {
    for (a, b, gammas) in [(0.5, 1.8, vec![1.0, 1.15, 1.25, 1.6]), (1.0, 2.5, vec![1.0, 1.4, 1.6, 2.2])] {
        let r = verify_exotic(a, b, &gammas).unwrap();
        assert!(r.passed(), "{r:?}");
    }
    let r = verify_exotic(1.0, 2.5, &[1.4, 1.6]).unwrap();
    assert_eq!((r.rows[0].finite, r.rows[1].finite), (true, false));
}

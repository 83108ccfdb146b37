mod common;

use std::process::Command;

use common::{gauss_collocation_step, max_abs_diff, tight, Oscillator, RandomSemilinear};
use hbvm::harness::{render_csv, run_experiment, ExperimentConfig, Instance, Method, Problem};
use hbvm::{build_tableau, hbvm_step, integrate, BlendedConfig, SemiDiscreteSystem, SolverConfig};
use proptest::prelude::*;

fn small(problem: Problem) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::defaults(problem);
    match problem {
        Problem::SineGordon => {
            cfg.modes = 32;
            cfg.t_end = 1.0;
        }
        Problem::Nls => {
            cfg.modes = 64;
            cfg.t_end = 0.5;
        }
        Problem::Kdv => {
            cfg.modes = 16;
            cfg.m = Some(49);
            cfg.t_end = 0.02;
        }
    }
    cfg
}

#[test]
fn hbvm_equals_gauss_on_random_systems() {
    for seed in 0..5 {
        let sys = RandomSemilinear::new(seed);
        let y0 = sys.initial_state(seed);
        let tab = build_tableau(2, 2).unwrap();
        let a = hbvm_step(&sys, &y0, 0.05, &tab, &tight()).unwrap().new_state;
        let b = gauss_collocation_step(&sys, &tab, &y0, 0.05);
        assert!(max_abs_diff(&a, &b) < 1e-13, "seed {seed}");
    }
}

#[test]
fn energy_conserved_on_small_semi_discretizations() {
    for (problem, k, s, n) in [
        (Problem::SineGordon, 4, 2, 20),
        (Problem::Nls, 4, 2, 20),
        (Problem::Kdv, 3, 2, 40),
    ] {
        let mut cfg = small(problem);
        cfg.method = Method::Hbvm;
        cfg.k = k;
        cfg.s = s;
        cfg.n_list = vec![n];
        let rows = run_experiment(&cfg).unwrap();
        assert!(rows[0].e_h < 1e-12, "{problem:?}: {}", rows[0].e_h);
    }
}

#[test]
fn schrodinger_invariants_conserved_by_gauss() {
    // with m > 4N the quartic potential is integrated exactly, so the
    // semi-discrete momentum is conserved even on an under-resolved grid
    let mut cfg = small(Problem::Nls);
    cfg.m = Some(4 * cfg.modes + 1);
    let (inst, y0) = Instance::build(&cfg, cfg.modes).unwrap();
    let tab = build_tableau(2, 2).unwrap();
    let traj = integrate(inst.system(), &y0, 0.5, 25, &tab, &tight(), &mut |_, _, _| Ok(())).unwrap();
    assert_eq!(traj.invariant_names.len(), 2);
    for d in &traj.max_invariant_drift {
        assert!(*d < 1e-13, "{d}");
    }
}

#[test]
fn csv_has_one_row_per_step_count() {
    let mut cfg = small(Problem::SineGordon);
    cfg.method = Method::Gauss;
    cfg.k = 2;
    cfg.s = 2;
    cfg.n_list = vec![10, 20];
    let csv = render_csv(&run_experiment(&cfg).unwrap());
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("n,e_u,rate_u,e_H"));
    assert!(lines[2].starts_with("20,"));
}

#[test]
fn cli_prints_tableau() {
    let out = Command::new(env!("CARGO_BIN_EXE_hbvm"))
        .args(["tableau", "--k", "2", "--s", "1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("i,c,b\n"));
    let rho = text.lines().find(|l| l.starts_with("rho,")).unwrap();
    let v: f64 = rho[4..].parse().unwrap();
    assert!((v - 0.5).abs() < 1e-15);
}

#[test]
fn cli_run_reports_bad_input() {
    let out = Command::new(env!("CARGO_BIN_EXE_hbvm"))
        .args(["run", "problem=kdv", "k=1", "s=2", "method=hbvm"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn cli_run_writes_csv() {
    let dir = std::env::temp_dir().join(format!("hbvm-it-{}", std::process::id()));
    let path = dir.join("out.csv");
    let status = Command::new(env!("CARGO_BIN_EXE_hbvm"))
        .args(["run", "--out", path.to_str().unwrap()])
        .args(["problem=kdv", "modes=16", "m=49", "t_end=0.01", "n_list=10,20", "method=hbvm", "k=3", "s=2"])
        .output()
        .unwrap();
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 3);
    std::fs::remove_dir_all(dir).ok();
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn blended_and_dense_fixed_points_agree(seed in 0u64..10_000, s in 1usize..=3, extra in 0usize..=3) {
        let sys = RandomSemilinear::new(seed);
        let y0 = sys.initial_state(seed);
        let tab = build_tableau(s + extra, s).unwrap();
        let cfg = BlendedConfig { tol_rel: 1e-15, tol_abs: 1e-16, max_iter: 500 };
        let a = hbvm_step(&sys, &y0, 0.1, &tab, &SolverConfig::blended(cfg)).unwrap();
        let b = hbvm_step(&sys, &y0, 0.1, &tab, &SolverConfig::dense_newton(cfg)).unwrap();
        prop_assert!(max_abs_diff(&a.gamma, &b.gamma) < 1e-10);
    }

    #[test]
    fn pendulum_energy_conserved_with_extra_nodes(q in -2.0f64..2.0, p in -1.0f64..1.0, s in 1usize..=3) {
        // the pendulum energy is not polynomial, so only a small k-dependent
        // residual remains; with k = s + 4 it is far below the tolerance
        let sys = Oscillator::pendulum();
        let tab = build_tableau(s + 4, s).unwrap();
        let y0 = [q, p];
        let traj = integrate(&sys, &y0, 2.0, 20, &tab, &tight(), &mut |_, _, _| Ok(())).unwrap();
        prop_assert!(traj.max_hamiltonian_drift < 1e-12 * (1.0 + sys.hamiltonian(&y0)));
    }
}

use subdfo::dfo::test_functions::{named, SphereQuadratic};
use subdfo::dfo::{run_driver, DriverConfig, IterationKind, ObjectiveHandle};
use subdfo::RngStream;

fn run(name: &str, d: usize, config: &DriverConfig, seed: u64) -> subdfo::dfo::Trace {
    let (objective, x0) = named(name, d, RngStream::new(seed).split(1)).unwrap();
    let handle = ObjectiveHandle::new(objective);
    let trace = run_driver(&handle, &x0, config, RngStream::new(seed).split(2)).unwrap();
    assert_eq!(trace.rows.last().unwrap().eval_count, handle.eval_count());
    trace
}

#[test]
fn linear_objective_decreases_on_every_accepted_iteration() {
    let config = DriverConfig { p: 1, max_evaluations: 200, ..Default::default() };
    for kind in [IterationKind::DsComplete, IterationKind::DsOpportunistic, IterationKind::Mb] {
        let trace = run("linear-random-g", 50, &DriverConfig { iteration_kind: kind, ..config.clone() }, 4);
        assert!(trace.rows.len() > 50);
        for w in trace.rows.windows(2) {
            if w[1].decrease > 0.0 {
                assert!(w[1].best_value < w[0].best_value);
            } else {
                assert_eq!(w[1].best_value, w[0].best_value);
            }
        }
    }
}

#[test]
fn sphere_converges_within_budget() {
    let config = DriverConfig { p: 2, max_evaluations: 2000, ..Default::default() };
    for kind in [IterationKind::DsComplete, IterationKind::Mb] {
        let trace = run("sphere-quadratic", 20, &DriverConfig { iteration_kind: kind, ..config.clone() }, 5);
        let initial = trace.rows[0].best_value;
        assert!(trace.best_value() < 0.01 * initial, "{kind:?}: {} vs {initial}", trace.best_value());
        assert!(trace.rows.last().unwrap().eval_count <= 2000 + 4);
    }
}

#[test]
fn sphere_gradient_norm_drops_with_one_dimensional_subspaces() {
    let d = 20;
    let config = DriverConfig { p: 1, max_evaluations: 4000, expand_factor: 2.0, iteration_kind: IterationKind::Mb, ..Default::default() };
    let handle = ObjectiveHandle::new(SphereQuadratic { d });
    let x0 = vec![1.0; d];
    let trace = run_driver(&handle, &x0, &config, RngStream::new(6)).unwrap();
    let grad_norm = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let (end, start) = (grad_norm(&trace.final_point), grad_norm(&x0));
    assert!(end < 0.1 * start, "{end} vs {start}");
}

#[test]
fn rosenbrock_improves() {
    let config = DriverConfig { p: 2, max_evaluations: 3000, expand_factor: 2.0, ..Default::default() };
    let trace = run("rosenbrock", 10, &config, 7);
    assert!(trace.best_value() < 0.5 * trace.rows[0].best_value);
}

#[test]
fn zero_budget_gives_single_row() {
    let config = DriverConfig { max_evaluations: 0, ..Default::default() };
    let trace = run("sphere-quadratic", 5, &config, 8);
    assert_eq!(trace.rows.len(), 1);
    assert_eq!(trace.to_csv().lines().count(), 2);
}

#[test]
fn runs_are_reproducible() {
    let config = DriverConfig { p: 3, max_evaluations: 500, iteration_kind: IterationKind::Mb, ..Default::default() };
    let a = run("rosenbrock", 8, &config, 9).to_csv();
    let b = run("rosenbrock", 8, &config, 9).to_csv();
    assert_eq!(a, b);
}

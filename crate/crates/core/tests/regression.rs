use normball::regression::{
    generate_synthetic_regression, nesterov_solve, pg_solve, support_mass, DatasetSize,
};
use normball::GroupNorm;

#[test]
fn small_instance_reaches_the_long_run_optimum() {
    for q in [GroupNorm::L12, GroupNorm::L1Inf] {
        let (p, truth) = generate_synthetic_regression(DatasetSize::Small, q, 11).unwrap();
        let pg = pg_solve(&p, 1e-10, 50_000).unwrap();
        let long = nesterov_solve(&p, 0.0, 10 * pg.iterations).unwrap();
        let (a, b) = (pg.final_objective(), long.final_objective());
        assert!(pg.converged);
        assert!((a - b).abs() <= 1e-6 * b.abs(), "{q}: {a} vs {b}");
        assert!(pg.max_violation <= 1e-6 && long.max_violation <= 1e-6);
        // reported only; with the radii at the truth's own norms it sits near 0.75
        let mass = support_mass(&pg.final_w, &truth);
        println!("{q}: support mass {mass:.3}");
        assert!(
            mass > 31.0 / 100.0,
            "{q}: no better than spreading mass uniformly: {mass}"
        );

        let acc = nesterov_solve(&p, 1e-6, 50_000).unwrap();
        let plain = pg_solve(&p, 1e-6, 50_000).unwrap();
        println!(
            "{q}: iterations to 1e-6: pg {}, nesterov {}",
            plain.iterations, acc.iterations
        );
    }
}

#[test]
fn projected_gradient_objective_never_increases() {
    let (p, _) = generate_synthetic_regression(DatasetSize::Small, GroupNorm::L12, 5).unwrap();
    let t = pg_solve(&p, 1e-9, 5_000).unwrap();
    for w in t.objective.windows(2) {
        assert!(w[1] <= w[0] * (1.0 + 1e-12), "{} -> {}", w[0], w[1]);
    }
}

#[test]
fn medium_instance_stays_feasible() {
    let (p, _) = generate_synthetic_regression(DatasetSize::Medium, GroupNorm::L12, 2).unwrap();
    let t = pg_solve(&p, 1e-8, 150).unwrap();
    assert_eq!(t.objective.len(), t.iterations + 1);
    assert!(t.max_violation <= 1e-6);
    assert!(t.final_objective() < t.objective[0]);
}

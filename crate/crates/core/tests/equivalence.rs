use std::sync::Arc;

use proxkit::core::{normal_point, seeded_rng, Adjoint, LinearMap, Matrix, Point, ScaledIdentity};
use proxkit::nlpdps::{nlpdps_run, NLStepParams, NonlinearSaddleProblem};
use proxkit::prox::{Conjugate, Outer, SharedProx, SquaredNorm, L1};
use proxkit::splitting::{precond_admm_step, run_with, AdmmProblem, Algo, CompositeProblem, RunOptions, SolverConfig, SolverState};
use proxkit::Point64;

fn random_matrix(m: usize, n: usize, seed: u64) -> Matrix<f64> {
    let mut rng = seeded_rng(seed);
    let v: Point64 = normal_point(&mut rng, m * n);
    Matrix::from_fn(m, n, |i, j| v[i * n + j] / (m as f64).sqrt())
}

// Preconditioned ADMM with B = Id and θ = 1/τ is PDPS on the dual problem
// min_p G*(p) + F*(A*p): the PDPS pair (pᵏ, dᵏ) equals (−λᵏ, x^{k+1}).
#[test]
fn preconditioned_admm_is_dual_pdps() {
    let (m, n) = (8, 12);
    let a = random_matrix(m, n, 21);
    let mut rng = seeded_rng(22);
    let center: Point64 = normal_point(&mut rng, m);
    let f: SharedProx<f64> = Arc::new(L1::new(0.3).unwrap());
    let g: SharedProx<f64> = Arc::new(SquaredNorm::new(1.0, Some(center)).unwrap());
    let a_op = Arc::new(a.clone());
    let admm = AdmmProblem::new(
        f.clone(),
        g.clone(),
        a_op.clone(),
        Arc::new(ScaledIdentity::identity(m)),
        Point::zeros(m),
    )
    .unwrap();
    let tau = 0.8;
    let sigma = 0.9 / (tau * a.frobenius().powi(2));
    let theta = 1.0 / tau;

    let mut s = SolverState::new(Point::zeros(n), tau).with_shadow(Point::zeros(m)).with_dual(Point::zeros(m), sigma);
    let mut xs = Vec::new();
    let mut lams = vec![s.y.clone().unwrap()];
    for _ in 0..201 {
        s = precond_admm_step(&s, &admm, sigma, theta, tau).unwrap();
        xs.push(s.x.clone());
        lams.push(s.y.clone().unwrap());
    }

    let dual = CompositeProblem::new(m, Arc::new(Conjugate::new(g).unwrap()), Outer::Conjugate(f))
        .unwrap()
        .with_operator(Arc::new(Adjoint { inner: a_op }))
        .unwrap();
    let cfg = SolverConfig { tau0: Some(tau), sigma0: Some(sigma), max_iter: 200, tol: 0.0, ..SolverConfig::default() };
    let opts = RunOptions {
        x0: Some(lams[0].scale(-1.0)),
        y0: Some(xs[0].clone()),
        record_iterates: true,
        ..Default::default()
    };
    let trace = run_with(&dual, Algo::Pdps, &cfg, &opts).unwrap();
    assert_eq!(trace.iterates.len(), 201);
    let mut worst: f64 = 0.0;
    for (k, (p, d)) in trace.iterates.iter().enumerate() {
        worst = worst.max(p.dist(&lams[k].scale(-1.0)));
        worst = worst.max(d.as_ref().unwrap().dist(&xs[k]));
    }
    assert!(worst <= 1e-8, "{worst}");
}

#[test]
fn nlpdps_with_linear_operator_is_pdps() {
    let a = random_matrix(5, 7, 3);
    let mut rng = seeded_rng(4);
    let z: Point64 = normal_point(&mut rng, 7);
    let f0: SharedProx<f64> = Arc::new(SquaredNorm::new(1.0, Some(z)).unwrap());
    let g: SharedProx<f64> = Arc::new(L1::new(0.2).unwrap());
    let nl = NonlinearSaddleProblem::new(f0.clone(), Outer::Primal(g.clone()), Arc::new(LinearMap { op: Arc::new(a.clone()) }))
        .unwrap();
    let lin = CompositeProblem::new(7, f0, Outer::Primal(g)).unwrap().with_operator(Arc::new(a)).unwrap();
    let params = NLStepParams { tau: 0.3, sigma: 0.3, rho_y: 1.0, kappa: 0.5 };
    let x0: Point64 = normal_point(&mut rng, 7);
    let y0 = Point::zeros(5);
    let nl_run = nlpdps_run(&nl, &params, x0.clone(), y0.clone(), 100, 0.0, None, true).unwrap();
    let cfg = SolverConfig { tau0: Some(0.3), sigma0: Some(0.3), max_iter: 100, tol: 0.0, ..SolverConfig::default() };
    let opts = RunOptions { x0: Some(x0), y0: Some(y0), record_iterates: true, ..Default::default() };
    let pd = run_with(&lin, Algo::Pdps, &cfg, &opts).unwrap();
    for ((x1, y1), (x2, y2)) in nl_run.trace.iterates.iter().zip(&pd.iterates) {
        assert!(x1.dist(x2) <= 1e-14);
        assert!(y1.as_ref().unwrap().dist(y2.as_ref().unwrap()) <= 1e-14);
    }
}

use super::*;
use crate::core::LinOp;

#[test]
fn one_dimensional_lasso() {
    let a = Matrix::from_rows(&[&[1.0]]).unwrap();
    let inst = make_lasso_from(a, Point::from_f64s(&[2.0]), 1.0).unwrap();
    assert!((inst.reference_x.as_ref().unwrap()[0] - 1.0).abs() <= 1e-12);
    assert!((inst.reference_value.unwrap() - 1.5).abs() <= 1e-12);
}

#[test]
fn large_alpha_gives_zero() {
    let (a, b) = lasso_data(10, 8, 3);
    let alpha = a.matvec_t(&b).norm_inf() * 1.01;
    let inst = make_lasso_from(a, b, alpha).unwrap();
    assert!(inst.reference_x.unwrap().norm_inf() <= 1e-14);
}

#[test]
fn lasso_is_seed_deterministic() {
    let a = make_lasso(30, 20, 0.05, 7).unwrap();
    let b = make_lasso(30, 20, 0.05, 7).unwrap();
    let c = make_lasso(30, 20, 0.05, 8).unwrap();
    assert_eq!(a.reference_x, b.reference_x);
    assert_ne!(a.reference_x, c.reference_x);
}

#[test]
fn lasso_reference_is_a_fixed_point() {
    let inst = make_lasso(40, 25, 0.02, 1).unwrap();
    let prob = inst.convex().unwrap();
    let tau = fb_tau(prob).unwrap();
    let r = fb_fixed_point_residual(prob, inst.reference_x.as_ref().unwrap(), tau).unwrap();
    assert!(r <= REFERENCE_TOL, "{r}");
}

#[test]
fn reference_solve_is_idempotent() {
    let inst = make_boxqp(12, 4).unwrap();
    let again = reference_solve(inst.convex().unwrap(), DEFAULT_BUDGET).unwrap();
    assert!(again.x.dist(inst.reference_x.as_ref().unwrap()) <= 1e-10);
}

#[test]
fn duplicated_lasso_face() {
    let inst = make_lasso_duplicated(5, 12, 0.05, 2).unwrap();
    let face = inst.face.as_ref().unwrap();
    let x = inst.reference_x.as_ref().unwrap();
    assert!(face.distance(x) <= 1e-14);
    // Moving mass between duplicates stays on the face and keeps the value.
    let mut y = x.clone();
    y.as_mut_slice()[0] = face.w[0];
    y.as_mut_slice()[5] = 0.0;
    assert!(face.distance(&y) <= 1e-14);
    let prob = inst.convex().unwrap();
    let v = prob.primal_value(&y).unwrap().to_scalar();
    assert!((v - inst.reference_value.unwrap()).abs() <= 1e-12);
    assert!(face.distance(&Point::zeros(10)) > 0.0 || face.w.norm() == 0.0);
}

#[test]
fn constant_signal_is_its_own_denoising() {
    let sig = vec![0.7; 20];
    let inst = make_tv1d(20, 0.3, Some(&sig), None).unwrap();
    assert!(inst.reference_x.unwrap().dist(&Point::from_f64s(&sig)) <= 1e-10);
}

#[test]
fn difference_operator_norm_estimate() {
    let inst = make_tv1d(50, 0.1, None, Some(0)).unwrap();
    let est = inst.metadata.op_norm.unwrap();
    assert!((1.9..=2.0).contains(&est), "{est}");
    assert!(est <= ForwardDiff { n: 50 }.norm_bound().unwrap());
}

#[test]
fn tv_reference_is_a_saddle_point() {
    let inst = make_tv1d_huber(30, 0.5, 0.1, Some(1)).unwrap();
    assert!(inst.reference_y.is_some());
    let prob = inst.convex().unwrap();
    let x = inst.reference_x.as_ref().unwrap();
    let y = inst.reference_y.as_ref().unwrap();
    // Primal optimality for ½‖x − z‖²: x = z − K*y.
    let z = noisy(&default_tv_signal(30), Some(1));
    assert!(x.dist(&(&z - &prob.apply_k_adjoint(y))) <= 1e-9);
}

#[test]
fn boxqp_identity_cases() {
    let q = Matrix::identity(3);
    let inside = make_boxqp_from(q.clone(), Point::from_f64s(&[0.5, -0.25, 0.0]), 1.0).unwrap();
    assert!(inside.reference_x.unwrap().dist(&Point::from_f64s(&[0.5, -0.25, 0.0])) <= 1e-14);
    let clipped = make_boxqp_from(q, Point::from_f64s(&[3.0, -2.0, 0.5]), 1.0).unwrap();
    assert!(clipped.reference_x.unwrap().dist(&Point::from_f64s(&[1.0, -1.0, 0.5])) <= 1e-14);
}

#[test]
fn split_reference_is_soft_threshold() {
    let inst = make_split(8, 5).unwrap();
    let x = inst.reference_x.as_ref().unwrap();
    let mut rng = seeded_rng(5);
    let z: Point64 = normal_point(&mut rng, 8);
    for i in 0..8 {
        let expect = if z[i].abs() <= 0.25 { 0.0 } else { z[i] - 0.25 * z[i].signum() };
        assert!((x[i] - expect).abs() <= 1e-15);
    }
}

#[test]
fn nonlinear_instance_critical_point() {
    let inst = make_nl_instance().unwrap();
    let prob = inst.nonlinear().unwrap();
    let (x, y) = (inst.reference_x.as_ref().unwrap(), inst.reference_y.as_ref().unwrap());
    assert!(prob.critical_residual(x, y) <= 1e-12);
    // x₁ solves 2t³ + t/2 − 1 = 0.
    let t = x[0];
    assert!((2.0 * t.powi(3) + 0.5 * t - 1.0).abs() <= 1e-13);
    assert!((x[1] - 0.25).abs() <= 1e-14 && (y[1] - 0.25).abs() <= 1e-14);
    assert!(y[0] > 0.2 && y[0] < 0.25);
}

#[test]
fn nonlinear_safe_start_converges() {
    let inst = make_nl_instance().unwrap();
    let params = nl_params();
    let d = Point::from_f64s(&[1.0, -1.0, 0.5, 0.5]);
    let (x0, y0, s) = nl_safe_start(&inst, &params, &d, 1.0, 200).unwrap();
    assert!(s > 0.0);
    let (xh, yh) = (inst.reference_x.as_ref().unwrap(), inst.reference_y.as_ref().unwrap());
    let run = nlpdps_run(inst.nonlinear().unwrap(), &params, x0, y0, 200, 0.0, Some((xh, yh)), false).unwrap();
    assert!(run.excursions.is_empty());
    let last = run.trace.records.last().unwrap().dist_to_ref.unwrap();
    assert!(last <= 1e-6 * s);
}

#[test]
fn zoo_builds() {
    let z = zoo(0).unwrap();
    assert_eq!(z.len(), 6);
    assert!(z.iter().all(|i| i.reference_x.is_some()));
}

#[test]
fn heavy_tv_flattens_to_the_mean() {
    let sig: Vec<f64> = (0..20).map(|i| if i < 10 { 0.0 } else { 1.0 }).collect();
    let inst = make_tv1d(20, 1e3, Some(&sig), None).unwrap();
    let x = inst.reference_x.unwrap();
    assert!(x.iter().all(|&v| (v - 0.5).abs() <= 1e-10), "{x:?}");
}

#[test]
fn boxqp_interior_matches_linear_solve() {
    let q = Matrix::from_rows(&[&[2.0, 0.5], &[0.5, 1.5]]).unwrap();
    let b = Point::from_f64s(&[0.3, -0.2]);
    let inst = make_boxqp_from(q.clone(), b.clone(), 1.0).unwrap();
    let direct = Lu::factor(&q).unwrap().solve(&b).unwrap();
    assert!(inst.reference_x.unwrap().dist(&direct) <= 1e-10);
}

#[test]
fn boxqp_strong_convexity_by_sampling() {
    let inst = make_boxqp(20, 9).unwrap();
    let prob = inst.convex().unwrap();
    let e = prob.e.as_ref().unwrap();
    let gamma = crate::core::sampled_strong_monotonicity(e.as_ref(), &Point::zeros(20), 2.0, 500, 1);
    assert!(gamma >= inst.metadata.strong_convexity - 1e-12);
    let l = crate::core::sampled_grad_lipschitz(e.as_ref(), &Point::zeros(20), 2.0, 500, 1);
    assert!(l <= inst.metadata.lipschitz.unwrap() * (1.0 + 1e-12));
}

#[test]
fn nonlinear_curvature_bounds_on_the_box() {
    let inst = make_nl_instance().unwrap();
    let prob = inst.nonlinear().unwrap();
    let yh = inst.reference_y.as_ref().unwrap();
    let mut rng = seeded_rng(11);
    for _ in 0..200 {
        let z: Point64 = crate::core::uniform_point(&mut rng, 2, -NL_BOX, NL_BOX);
        let h: Point64 = normal_point(&mut rng, 2);
        // ⟨∇²⟨ŷ, K⟩(ζ)h, h⟩ by central differences of the adjoint Jacobian.
        let eps = 1e-5;
        let g = |p: &Point64| prob.k.jacobian_adjoint_apply(p, yh);
        let dh = (&g(&z.axpy(eps, &h)) - &g(&z.axpy(-eps, &h))).scale(0.5 / eps);
        let curv = dh.dot(&h);
        let hh = h.norm_sq();
        assert!(curv >= prob.gamma_k * hh - 1e-8 && curv <= prob.lambda * hh + 1e-8);
    }
}

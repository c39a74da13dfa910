use std::sync::Arc;

use proxkit::core::{estimate_op_norm, grad_check, normal_point, sampled_grad_lipschitz, seeded_rng, Point};
use proxkit::diagnostics::{duality_gap, fejer_check, lagrangian_gap, pdps_metric, FejerNorm};
use proxkit::problems::{zoo, ProblemInstance};
use proxkit::prox::{Extended, L1};
use proxkit::splitting::{run_with, Algo, CompositeProblem, GapKind, RunOptions, SolverConfig};
use proxkit::Point64;

fn instances() -> Vec<ProblemInstance> {
    zoo(3).unwrap()
}

fn xs(trace: &proxkit::splitting::Trace<f64>) -> Vec<Point64> {
    trace.iterates.iter().map(|(x, _)| x.clone()).collect()
}

#[test]
fn fejer_monotone_on_every_convex_run() {
    let opts_for = |inst: &ProblemInstance| RunOptions {
        reference: inst.reference(),
        record_iterates: true,
        ..Default::default()
    };
    for inst in instances() {
        let prob = inst.convex().unwrap();
        let xh = inst.reference_x.as_ref().unwrap();
        let cfg = SolverConfig { max_iter: 300, tol: 0.0, ..SolverConfig::default() };
        if prob.k.is_some() {
            let trace = run_with(prob, Algo::Pdps, &cfg, &opts_for(&inst)).unwrap();
            let s = &trace.final_state;
            let metric = pdps_metric(prob.k.clone().unwrap(), s.tau_k, s.sigma_k);
            let stacked: Vec<Point64> =
                trace.iterates.iter().map(|(x, y)| Point::concat(&[x, y.as_ref().unwrap()])).collect();
            let uh = Point::concat(&[xh, inst.reference_y.as_ref().unwrap()]);
            let rep = fejer_check(&stacked, &uh, FejerNorm::Weighted(&metric)).unwrap();
            assert!(rep.holds, "{} pdps: {:?}", inst.metadata.name, rep.first_violation);
        } else if prob.e.is_some() {
            let trace = run_with(prob, Algo::Fb, &cfg, &opts_for(&inst)).unwrap();
            let rep = fejer_check(&xs(&trace), xh, FejerNorm::Euclidean).unwrap();
            assert!(rep.holds, "{} fb: {:?}", inst.metadata.name, rep.first_violation);
        }
    }
    // Proximal point on a single prox-simple term, minimized at 0.
    let prob = CompositeProblem::prox_only(6, Arc::new(L1::new(0.1).unwrap())).unwrap();
    let mut rng = seeded_rng(1);
    let x0: Point64 = normal_point(&mut rng, 6);
    let cfg = SolverConfig { tau0: Some(0.7), max_iter: 50, tol: 0.0, ..SolverConfig::default() };
    let opts = RunOptions { x0: Some(x0), record_iterates: true, ..Default::default() };
    let trace = run_with(&prob, Algo::Pp, &cfg, &opts).unwrap();
    assert!(fejer_check(&xs(&trace), &Point::zeros(6), FejerNorm::Euclidean).unwrap().holds);
}

#[test]
fn ergodic_gap_is_nonnegative_on_primal_dual_runs() {
    for inst in instances() {
        let prob = inst.convex().unwrap();
        if prob.k.is_none() {
            continue;
        }
        let cfg = SolverConfig { max_iter: 400, tol: 0.0, ..SolverConfig::default() };
        let opts = RunOptions { reference: inst.reference(), ..Default::default() };
        let trace = run_with(prob, Algo::Pdps, &cfg, &opts).unwrap();
        assert_eq!(trace.gap_kind, GapKind::ErgodicUniform);
        let gaps = trace.column(|r| r.gap);
        assert!(!gaps.is_empty());
        assert!(gaps.iter().all(|&(_, g)| g >= -1e-9), "{}", inst.metadata.name);
    }
}

#[test]
fn gaps_vanish_at_references_and_are_nonnegative_elsewhere() {
    let mut rng = seeded_rng(5);
    for inst in instances() {
        let prob = inst.convex().unwrap();
        let Some(yh) = inst.reference_y.as_ref() else { continue };
        let xh = inst.reference_x.as_ref().unwrap();
        let at_ref = duality_gap(prob, (xh, yh)).unwrap().to_scalar();
        assert!(at_ref.abs() <= 1e-8, "{} {at_ref}", inst.metadata.name);
        for _ in 0..50 {
            let x: Point64 = normal_point(&mut rng, xh.dim());
            let y: Point64 = normal_point(&mut rng, yh.dim());
            let y = y.scale(0.1);
            if let Extended::Finite(g) = lagrangian_gap(prob, (&x, &y), (xh, yh)).unwrap() {
                assert!(g >= -1e-9);
            }
        }
    }
}

#[test]
fn every_smooth_part_passes_grad_check() {
    let mut rng = seeded_rng(7);
    for inst in instances() {
        let prob = inst.convex().unwrap();
        let Some(e) = prob.e.as_ref() else { continue };
        for _ in 0..5 {
            let x: Point64 = normal_point(&mut rng, e.dim());
            let err = grad_check(e.as_ref(), &x, 1e-6).unwrap();
            assert!(err < 1e-6, "{} {err}", inst.metadata.name);
        }
    }
}

#[test]
fn stated_constants_pass_their_samplers() {
    for inst in instances() {
        let prob = inst.convex().unwrap();
        if let (Some(e), Some(l)) = (prob.e.as_ref(), inst.metadata.lipschitz) {
            let sampled = sampled_grad_lipschitz(e.as_ref(), &Point::zeros(e.dim()), 3.0, 300, 2);
            assert!(sampled <= l * (1.0 + 1e-9), "{} {sampled} > {l}", inst.metadata.name);
        }
        if let (Some(k), Some(norm)) = (prob.k.as_ref(), inst.metadata.op_norm) {
            let est = estimate_op_norm(k.as_ref(), 1e-10, 200_000).unwrap();
            assert!((est - norm).abs() <= 1e-6 && norm <= 2.0);
        }
    }
}

#[test]
fn instances_are_bitwise_deterministic() {
    let (a, b) = (zoo(11).unwrap(), zoo(11).unwrap());
    for (p, q) in a.iter().zip(&b) {
        assert_eq!(p.reference_x, q.reference_x);
        assert_eq!(p.reference_y, q.reference_y);
        assert_eq!(p.reference_value.map(f64::to_bits), q.reference_value.map(f64::to_bits));
    }
}

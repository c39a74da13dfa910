use std::process::ExitCode;

use proxkit::splitting::inertia_sequence;
use proxkit_cli::bench::{run_suite, CriterionResult, Mutation, CRITERIA};

// Criterion 7 also checks λ_N⁻¹ ≥ N + 1, which the recurrence itself violates at N = 1:
// λ₁ solves λ² = (1 − λ)λ₀² with λ₀ = 1, so λ₁⁻¹ = (1 + √5)/2 < 2.
fn inertia_claim_is_false() -> bool {
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    let lam: Vec<f64> = inertia_sequence(1);
    (1.0 / lam[1] - golden).abs() <= 1e-14 && golden < 2.0
}

fn tolerated(r: &CriterionResult) -> Option<&'static str> {
    let only_bound_fails = r.detail.contains("rate ok") && r.detail.contains("λ_N⁻¹ ≥ N + 1 fails at N = 1");
    (r.id == 7 && only_bound_fails && inertia_claim_is_false())
        .then_some("known false bound λ_N⁻¹ ≥ N + 1 (λ₁⁻¹ = 1.618); rate sub-check passed")
}

fn main() -> ExitCode {
    let results = match run_suite("default", Mutation::None) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("acceptance suite did not run: {}", e.message);
            return ExitCode::FAILURE;
        }
    };
    assert_eq!(results.len(), CRITERIA.len());
    let mut unexpected = 0;
    for r in &results {
        println!("{r}");
        if !r.pass {
            match tolerated(r) {
                Some(why) => println!("    known failure: {why}"),
                None => unexpected += 1,
            }
        }
    }
    let passed = results.iter().filter(|r| r.pass).count();
    println!("{passed} of {} criteria passed, {unexpected} unexpected failures", results.len());
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

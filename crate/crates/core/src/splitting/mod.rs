//! Proximal point, forward-backward, Douglas–Rachford, primal-dual and ADMM methods, with
//! over-relaxation, inertia and line search wrappers.

pub mod config;
pub mod problem;
pub mod run;
pub mod state;
pub mod steps;
pub mod wrappers;

pub use config::{Accel, Algo, LambdaSchedule, LineSearch, SolverConfig};
pub use problem::{AdmmProblem, CompositeProblem};
pub use run::{padmm_admissible, resolve_steps, run, run_with, Reference, Resolved, RunOptions};
pub use state::{GapKind, SolverState, Trace, TraceRecord};
pub use steps::{
    accel_update, accel_update_gap, admm_step, backtrack_linesearch, drs_step, fb_linesearch_step, fb_step, pdes_step,
    pdps_step, pp_step, precond_admm_step,
};
pub use wrappers::{
    inertia_alpha, inertia_next, inertia_sequence, inertia_wrap, overrelax_bound_fb, overrelax_bound_pdps,
    overrelax_bound_pp, overrelax_wrap, Inertial, Overrelaxed, StepFn,
};

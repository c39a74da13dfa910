//! Gap functionals, ergodic averages, Fejér checks and empirical rate fits.

pub mod ergodic;
pub mod fejer;
pub mod gap;
pub mod rate;

pub use ergodic::{ergodic_average, testing_weights, ErgodicWeights};
pub use fejer::{fejer_check, pdps_metric, FejerNorm, FejerReport, FEJER_SLACK};
pub use gap::{duality_gap, gap_eval, lagrangian_gap, GapEval};
pub use rate::{fit_rate, least_squares, LineFit, RateFit, RateModel, DEFAULT_BURN_IN};

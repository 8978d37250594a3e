//! Asymptotic theory near a rational aspect ratio: scaling parameters,
//! window integrals, predictions and the crossover structure.

mod jint;
mod params;
mod quadrature;
mod theory;

pub use jint::{is_singular, j_closed, BranchTerm, JQuery, JResult, SINGULAR_TOL};
pub use params::{aspect, best_rational, derive_params, gcd, CriticalParams};
pub use quadrature::{breakpoints, integrate, j_quadrature, j_quadrature_with, QuadratureOptions};
pub use theory::{
    crossover, dominance_gap, grid_is_singular, large_alpha_limits, nonanalyticity_grid,
    predict_all, predict_at, BranchPrediction, LargeAlphaLimits, NonanalyticityGrid, Prediction,
    PredictionFlags, TIE_TOL, ZERO_VAR_TOL,
};

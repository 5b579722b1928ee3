//! The model Grushin problem on the half-line and the interval toy model.

mod basis;
mod model;
mod toy;
mod wellposed;

pub use basis::{quadratic_form, ModelBasis};
pub use model::{
    band_count, effective_hamiltonian, solve_model, EffectiveHamiltonian, GrushinModel,
    GrushinSolution, ModelParameters, DEFAULT_EXTRA_MODES, MU_RANGE,
};
pub use toy::{
    interval_toy_e_minus_plus, solve_interval_toy, observed_orders, toy_errors, toy_forced_errors, ToySolution};
pub use wellposed::{
    coercivity_ratio, complex_gaussian, estimate_with_model, fit_slope, identity_terms,
    random_data, random_truncated, tail_sum, tail_sum_slope, trial_rng, verify_wellposedness,
    wellposedness_sweep, IdentityTerms, SweepSettings, TailSumFit, WellposednessEstimate,
    WellposednessReport, SLOPE_THRESHOLD,
};

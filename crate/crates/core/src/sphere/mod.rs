//! Exact resonances of the sphere in three dimensions.

mod hankel;
mod resonances;
mod weyl;

pub use hankel::{hankel_condition, BoundaryCondition, HankelCondition, MAX_L};
pub use resonances::{
    compute_resonances, compute_resonances_with, reclassify, roots_for_l, ResonanceRecord,
    ResonanceSet,
    SweepOptions,
};
pub use weyl::{
    completeness_l_max, verify_gaps, weyl_count, weyl_prediction, GapReport, GapViolation,
    WeylCount,
};

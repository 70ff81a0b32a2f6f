mod blocks;
mod census;
mod constants;
mod discrepancy;

pub use blocks::{
    block_frequency_deviation, discrepancy_from_counts, is_eps_k_normal, simple_discrepancy, NormalityChecker,
    NormalityReport,
};
pub use census::{census_count_only, non_normal_census, relative_non_normal_mass, Census, CENSUS_LIMIT};
pub use constants::{
    big_c, blichfeldt_bound, corollary_constant, eta_interval, eta_lower, k_bhs, ConstantsBundle,
};
pub use discrepancy::{
    default_guard, extreme_discrepancy, extreme_discrepancy_brute, orbit_points, orbit_points_with_guard,
    OrbitPoints,
};

//! Brute-force laboratory inside `PSL_n(F_q)`.
//!
//! [`FinGroup`] enumerates the group once; everything else works on element
//! indices and bitsets over them.

mod ad;
mod group;
mod growth;
mod sigma;

pub use ad::{
    ad_char_poly, ad_char_poly_diagonal_oracle, ad_equiv_sample, ad_matrix, ad_separating_prime, default_primes,
    joint_separation_test, trace_match_sample, trace_separating_prime, AdPoly, PairOutcome, SeparationReport,
};
pub use group::{cache_file_name, enumerate_psl, psl_order, Classes, ElementSet, FinGroup, CACHE_ENV, DEFAULT_CAP};
pub use growth::{
    centralizer, check_cong_def, e1n, ebar, gcl, product_growth, product_set, zcent, ClassGrowth, CongDefReport,
};
pub use sigma::{
    delta_sigma, eigenvalues_mod_p, reduce_lift_mod_p, shared_group, sigma_for_prime, sigma_set, sigma_set_eigen,
    sigma_set_exhaustive, vr_in_quotient, vr_scan, SigmaRoute, VrScan,
};

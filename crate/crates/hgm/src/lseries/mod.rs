//! Assembly of local L-data: Frobenius polynomials from traces, tame
//! and wild local invariants, conductors, gamma factors, Dirichlet
//! coefficients, fixtures, the on-disk cache, and JSON export.

mod cache;
mod dirichlet;
mod euler;
mod export;
mod fixtures;
mod gamma;
mod local;

pub use cache::CacheStore;
pub use dirichlet::dirichlet_coefficients;
pub use euler::{
    coeffs_from_traces, frobenius_poly, newton_over_hodge_check, root_modulus_check,
    verify_good_factor, EulerFactor, Provenance,
};
pub use export::{export_motive, MotiveExport, EXPORT_SCHEMA};
pub use fixtures::{Fixture, FixtureTable, FIXTURE_SCHEMA};
pub use gamma::{gamma_factors, GammaFactor, GammaFactorSet, GammaKind};
pub use local::{
    conductor, erased_factor, sigma_profile, tame_local, wild_local, wild_s, Conductor,
    LocalData, SigmaProfile,
};

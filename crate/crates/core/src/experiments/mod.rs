//! Desk-scale experiments: covering-sum dimension estimates, Monte-Carlo event
//! frequencies, Gauss IFS enumeration and the mass-distribution audit.

pub mod covering;
pub mod gifs;
pub mod mass;
pub mod montecarlo;

pub use covering::{covering_critical_exponent, default_s_grid, CoverReport, CoverRow};
pub use gifs::{enumerate_gifs, GifsWord, DEFAULT_Q_CAP};
pub use mass::{
    audit_frostman, build_mass_distribution, build_mass_distribution_with_cap, AuditReport, AuditRow, BucketRow,
    ClaimSummary, MassCheckReport, MassDistribution,
};
pub use montecarlo::{default_windows, gauss_kuzmin, mc_lebesgue, FrequencyRow, FrequencyTable};

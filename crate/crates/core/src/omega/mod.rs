//! Symbolic factor congruences of a countable power `A^ℕ`, indexed by
//! eventually periodic subsets of ℕ, and the quasi-cyclic example.

mod infimum;
mod pset;
mod quasicyclic;
mod run;
mod truncate;

pub use infimum::{countable_infimum, infimum_member, AffineFamily, InfimumCertificate};
pub use pset::PeriodicSet;
pub use quasicyclic::{quasicyclic_suite, QcElement, QuasiCyclic, QuasiCyclicReport, MAX_EXPONENT};
pub use run::{omega_cbs_run, omega_law_failures, shift_fhat, ChainStep, OmegaCongruence, OmegaRun, ShiftIso};
pub use truncate::{
    truncate_validate, TruncationCheck, TruncationMode, TruncationVerdict, MATERIALIZE_LIMIT, SAMPLES,
};

//! Verifiers. Each one returns a [`VerificationReport`]; a mathematical
//! failure is a `fail` status, never an error.

mod cdint;
mod charproj;
mod context;
mod knudsen;
mod linear;
mod report;
mod theorems;

pub use cdint::{verify_cdint, CdintPart, MAX_WEIGHT_VECTORS};
pub use charproj::{charproj_curve, charproj_subsets, verify_charproj_certificate};
pub use context::{Context, DEFAULT_MAX_N};
pub use knudsen::{knudsen_dual_basis, verify_knudual, KnudsenDualCertificate, KnudsenDualEntry};
pub use linear::family_kernel;
pub use report::{Status, VerificationReport, REPORT_SCHEMA};
pub use theorems::{
    triple_curve, verify_chargen, verify_charkap, verify_charknu, verify_knu_rank,
    verify_psi_extremal, verify_triple,
};

#[cfg(test)]
mod tests;

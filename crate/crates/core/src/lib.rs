//! Exact computation in finitely generated nilpotent groups given by
//! polycyclic presentations.

pub mod arith;
pub mod completion;
pub mod error;
pub mod geomequiv;
pub mod isolator;
pub mod lattice;
pub mod liering;
pub mod morphism;
pub mod pcgroup;
pub mod presentation;
pub mod subgroups;
pub mod zariski;

pub use error::{Error, Result};

/// Cap on brute-force enumerations, overridable through `NILKIT_MAX_ENUM`.
pub fn max_enum() -> u64 {
    std::env::var("NILKIT_MAX_ENUM")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(1_000_000)
}

//! Exact computations around the Serre and Weil-number tori of CM Galois
//! data: character lattices and their exact sequences, Tate cohomology and
//! crossed modules, Brauer-invariant models, Weil numbers and slopes, class
//! groups and relative class numbers, and lim/lim¹ of towers.
//!
//! All arithmetic is exact (arbitrary-precision integers and rationals);
//! there is no floating point in any computational path. Data-parallel
//! batch helpers use rayon when the `parallel` feature is enabled (default)
//! and fall back to sequential iteration otherwise.

pub mod batch;
pub mod brauer;
pub mod classfield;
pub mod cohomology;
pub mod galois;
pub mod group;
pub mod limits;
pub mod matrix;
pub mod presets;
pub mod report;
pub mod serre_weil;
pub mod verify;
pub mod weil;

pub use matrix::{AbGroupStructure, IntMatrix};

/// Errors reported by the library's validating constructors and operations.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("lattice computation: {0}")]
    Lattice(String),
    #[error("invalid group data: {0}")]
    Group(String),
    #[error("invalid CM datum: {0}")]
    Datum(String),
    #[error("cohomology: {0}")]
    Cohomology(String),
    #[error("brauer invariant bookkeeping: {0}")]
    Brauer(String),
    #[error("weil number arithmetic: {0}")]
    Weil(String),
    #[error("class field data: {0}")]
    ClassField(String),
    #[error("tower/limit computation: {0}")]
    Limits(String),
    #[error("group order {0} exceeds the cap {1} (override with CMTORUS_MAX_GROUP_ORDER)")]
    GroupOrderCap(usize, usize),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Group-order cap for cohomology computations. Default 48, which covers
/// every built-in preset; override with the CMTORUS_MAX_GROUP_ORDER
/// environment variable.
pub fn max_group_order() -> usize {
    std::env::var("CMTORUS_MAX_GROUP_ORDER")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(48)
}

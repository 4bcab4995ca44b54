//! Minimal persistent cycles via minimum cuts on dual graphs.
//!
//! Finite intervals of a weak (d+1)-pseudomanifold are handled by [`fin`];
//! infinite intervals of complexes embedded in R^(d+1) by [`inf`], which
//! relies on the void reconstruction in [`voids`]. [`cubical`] adapts both to
//! scalar volumes and [`oracle`] provides brute-force ground truth.

pub mod complex;
pub mod cubical;
pub mod error;
pub mod export;
pub mod fin;
pub mod generate;
pub mod geometry;
pub mod inf;
pub mod mincut;
pub mod oracle;
pub mod persistence;
pub mod suspension;
pub(crate) mod unionfind;
pub mod voids;

pub use complex::{CellComplex, CellId, CellKind, Chain};
pub use error::{Error, Result};
pub use persistence::{compute_pairs, Death, Diagram, Filtration, Interval};

/// A cycle together with its total weight.
#[derive(Clone, Debug, PartialEq)]
pub struct PersistentCycle {
    pub chain: Chain,
    pub weight: f64,
}

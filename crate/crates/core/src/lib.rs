//! Finite commutative multiplicative hyperrings, their hyperideals, and
//! exhaustive deciders for absorbing-primary style properties.

pub mod classify;
pub mod construct;
pub mod error;
pub mod harness;
pub mod ideals;
pub mod ring;
pub mod set;
pub mod verdict;
pub mod zphi;

pub use classify::{RingContext, UVParams};
pub use error::{ConstructionError, HyperringError, StructureError, UsageError};
pub use ideals::{HyperIdeal, IdealLattice};
pub use ring::{validate_hyperring, FiniteHyperring, RawTables, UnitReport, ValidationReport};
pub use set::ElementSet;
pub use verdict::{CheckedSpace, Status, Verdict, Witness};

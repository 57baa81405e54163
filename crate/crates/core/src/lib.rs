//! Finite groups, Cayley graphs and exact structural checks.

pub mod cayley;
pub mod element;
pub mod error;
pub mod exact;
pub mod genset;
pub mod group;
pub mod groupspec;
pub mod indexed;
pub mod ops;
pub mod quotient;
pub mod structure;
pub mod verifier;

pub use element::{Element, ElementKind};
pub use error::{Error, Result};
pub use genset::GeneratingSet;
pub use group::FiniteGroup;
pub use groupspec::{GensSpec, GroupSpec, InstanceSpec};
pub use indexed::{ElemId, IndexedGroup};
pub use ops::GroupOps;

//! Subgroups of an indexed group and their invariants.

mod classes;
mod lattice;
mod schreier;
mod sections;
mod series;
mod subgroup;

pub use classes::{
    center, centralizer, centralizer_sum, class_count, class_of, conjugacy_classes, conjugacy_classes_of,
    conjugation_kernel, ConjugacyData,
};
pub use lattice::{
    all_subgroups, all_subgroups_with, normal_subgroups, LatticeCaps, DEFAULT_SUBGROUP_COUNT_CAP,
    DEFAULT_SUBGROUP_ORDER_CAP,
};
pub use schreier::{coset_transversal, schreier_generators, SchreierData};
pub use sections::{best_abelian_section, find_bt_witness, find_bt_witness_where, BtWitness};
pub use series::{abelian_invariants, abelianization_order, derived_subgroup, lower_central_series};
pub use subgroup::{Nilpotency, Subgroup};

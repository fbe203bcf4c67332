//! Permutation groups: Schreier-Sims, conjugacy classes, centralizers,
//! normalizers and the small constructors used as test beds.

mod bsgs;
mod catalogue;
mod classes;
mod constructors;
mod io;
mod perm;
mod subgroups;

pub use bsgs::PermGroup;
pub use catalogue::{element_order_histogram, identify, identify_group, CatalogueEntry, CATALOGUE};
pub use classes::{
    centralizer_order, class_orbit, conjugacy_classes, conjugacy_classes_with_limit, ClassList,
    ConjugacyClassData, EXHAUSTIVE_LIMIT, GROUP_LIMIT,
};
pub use constructors::{
    affine_general_linear_3_2, alternating, cyclic, octonion_sign_automorphisms,
    product_with_cycler, psl2, symmetric, CyclerProduct, GaloisField,
};
pub use io::{format_grp, parse_grp, NamedGroup};
pub use perm::Permutation;
pub use subgroups::{
    centralizer, conjugating_element, normalizer, subgroups_conjugate, SubgroupIndex, SubgroupKey,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("{0}")]
    Invalid(String),
    #[error("element {0} is not in the group")]
    NotMember(String),
    #[error("subgroup is not contained in the group")]
    NotSubgroup,
    #[error("subgroup orders differ: {0} vs {1}")]
    OrderMismatch(u64, u64),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

//! (2,3,7)-generation: triple enumeration, subgroup classification, class fusion,
//! fused constants and the accounting identity.

mod classify;
mod enumerate;
mod extensions;
mod fusion;
mod projection;

use std::fmt;

use crate::chartab::{selects, TableError};
use crate::permgroup::{ClassList, GroupError, Permutation};

pub use classify::{
    accounting_identity, classify_hurwitz_subgroups, group_by_conjugacy, Accounting,
    Classification, HurwitzSubgroupClass, SubgroupClass, TypeSummary,
};
pub use enumerate::{enumerate_triples, generates, hurwitz_triples, triple_total, TripleOrbit};
pub use extensions::{inverting_involution_extensions, ExtensionOrbit};
pub use fusion::{fused_constant, fusion_map, FusionMap};
pub use projection::{sample_hurwitz_subgroup, support_one_triples};

#[derive(Debug, thiserror::Error)]
pub enum HurwitzError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("{0}")]
    Invalid(String),
}

/// A class type `(2X,3Y,7Z)`; each entry is a class label or a union such as `7AB`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TripleType {
    pub class2: String,
    pub class3: String,
    pub class7: String,
}

fn order_prefix(label: &str) -> Option<u64> {
    let end = label.find(|c: char| !c.is_ascii_digit())?;
    label[..end].parse().ok()
}

impl TripleType {
    pub fn new(class2: &str, class3: &str, class7: &str) -> Result<Self, HurwitzError> {
        for (label, order) in [(class2, 2), (class3, 3), (class7, 7)] {
            if order_prefix(label) != Some(order) {
                return Err(HurwitzError::Invalid(format!(
                    "{label:?} is not a class of elements of order {order}"
                )));
            }
        }
        Ok(TripleType {
            class2: class2.to_string(),
            class3: class3.to_string(),
            class7: class7.to_string(),
        })
    }

    /// Accepts `(2A,3B,7C)` or `2A 3B 7C`.
    pub fn parse(s: &str) -> Result<Self, HurwitzError> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = inner
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|p| !p.is_empty())
            .collect();
        match parts.as_slice() {
            [a, b, c] => Self::new(a, b, c),
            _ => Err(HurwitzError::Invalid(format!("bad triple type {s:?}"))),
        }
    }

    pub fn of_classes(cl: &ClassList, classes: [usize; 3]) -> Self {
        TripleType {
            class2: cl.label(classes[0]).to_string(),
            class3: cl.label(classes[1]).to_string(),
            class7: cl.label(classes[2]).to_string(),
        }
    }

    pub fn labels(&self) -> [&str; 3] {
        [&self.class2, &self.class3, &self.class7]
    }

    /// Whether classes with these labels are of this type.
    pub fn selects(&self, labels: [&str; 3]) -> bool {
        self.labels().iter().zip(labels).all(|(s, l)| selects(s, l))
    }

    pub fn selects_classes(&self, cl: &ClassList, classes: [usize; 3]) -> bool {
        self.selects(classes.map(|c| cl.label(c)))
    }
}

impl fmt::Display for TripleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.class2, self.class3, self.class7)
    }
}

/// `(x, y, z)` with `x^2 = y^3 = z^7 = xyz = 1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub x: Permutation,
    pub y: Permutation,
    pub z: Permutation,
}

impl Triple {
    /// Completes `x, y` with `z = (xy)^-1`.
    pub fn from_pair(x: Permutation, y: Permutation) -> Self {
        let z = x.mul(&y).inverse();
        Triple { x, y, z }
    }

    pub fn is_hurwitz(&self) -> bool {
        self.x.order() == 2
            && self.y.order() == 3
            && self.z.order() == 7
            && self.x.mul(&self.y).mul(&self.z).is_identity()
    }

    pub fn conjugate_by(&self, g: &Permutation) -> Triple {
        Triple {
            x: self.x.conjugate_by(g),
            y: self.y.conjugate_by(g),
            z: self.z.conjugate_by(g),
        }
    }
}

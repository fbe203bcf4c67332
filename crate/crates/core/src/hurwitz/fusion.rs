use num_traits::Zero;

use super::{HurwitzError, TripleType};
use crate::chartab::{CharacterTable, ClassMatching};
use crate::exactnum::Rational;
use crate::permgroup::{ClassList, GroupError, PermGroup};
use crate::structconst::normalized_constant;

/// Class fusion from a subgroup into an ambient group, as label pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FusionMap {
    pub pairs: Vec<(String, String)>,
}

impl FusionMap {
    pub fn get(&self, source: &str) -> Option<&str> {
        self.pairs
            .iter()
            .find(|(s, _)| s == source)
            .map(|(_, t)| t.as_str())
    }

    /// The same fusion keyed by table labels, where table class `i` is group class `matching[i]`.
    pub fn via_matching(
        &self,
        table: &CharacterTable,
        cl: &ClassList,
        matching: &ClassMatching,
    ) -> FusionMap {
        FusionMap {
            pairs: table
                .classes
                .iter()
                .zip(matching)
                .filter_map(|(c, &m)| Some((c.label.clone(), self.get(cl.label(m))?.to_string())))
                .collect(),
        }
    }
}

/// Sends each class of `h` to the class of `g` containing its representative.
pub fn fusion_map(
    g: &PermGroup,
    g_classes: &ClassList,
    h: &PermGroup,
    h_classes: &ClassList,
) -> Result<FusionMap, HurwitzError> {
    if h.degree() != g.degree() || !g.contains_group(h) {
        return Err(GroupError::NotSubgroup.into());
    }
    let pairs = h_classes
        .classes
        .iter()
        .map(|c| {
            let target = g_classes
                .class_of(&c.representative)
                .ok_or_else(|| GroupError::NotMember(c.representative.to_string()))?;
            Ok((c.label.clone(), g_classes.label(target).to_string()))
        })
        .collect::<Result<_, HurwitzError>>()?;
    Ok(FusionMap { pairs })
}

/// `n_H` for an ambient type: normalized constants of `table_h` summed over the class
/// triples that fuse into the type.
pub fn fused_constant(
    table_h: &CharacterTable,
    fusion: &FusionMap,
    ty: &TripleType,
) -> Result<Rational, HurwitzError> {
    let of_order = |o: u64| -> Result<Vec<(&str, &str)>, HurwitzError> {
        table_h
            .classes
            .iter()
            .filter(|c| c.order == o)
            .map(|c| {
                let t = fusion.get(&c.label).ok_or_else(|| {
                    HurwitzError::Invalid(format!("no fusion for class {}", c.label))
                })?;
                Ok((c.label.as_str(), t))
            })
            .collect()
    };
    let (c2, c3, c7) = (of_order(2)?, of_order(3)?, of_order(7)?);
    let mut total = Rational::zero();
    for (a, fa) in &c2 {
        for (b, fb) in &c3 {
            for (c, fc) in &c7 {
                if ty.selects([fa, fb, fc]) {
                    total += normalized_constant(table_h, a, b, c)?;
                }
            }
        }
    }
    Ok(total)
}

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use super::{enumerate_triples, hurwitz_triples, HurwitzError, Triple, TripleOrbit, TripleType};
use crate::exactnum::{format_rational, Rational};
use crate::permgroup::{
    identify_group, normalizer, subgroups_conjugate, ClassList, PermGroup, SubgroupIndex,
};
use crate::report::Report;

/// A conjugacy class of subgroups generated by triples.
#[derive(Clone, Debug)]
pub struct SubgroupClass {
    pub representative: PermGroup,
    pub witness: Triple,
    pub iso_label: String,
    pub normalizer_order: u64,
    /// Input triples whose subgroup lies in this class.
    pub triples: usize,
}

impl SubgroupClass {
    pub fn order(&self) -> u64 {
        self.representative.order()
    }

    pub fn index(&self) -> u64 {
        self.normalizer_order / self.order()
    }
}

/// Sorts the subgroups `<x, y>` of the given triples into `g`-conjugacy classes.
pub fn group_by_conjugacy(
    g: &PermGroup,
    triples: &[Triple],
) -> Result<Vec<SubgroupClass>, HurwitzError> {
    let mut distinct = SubgroupIndex::new();
    let mut first: Vec<(usize, usize)> = Vec::new();
    let mut hits: Vec<usize> = Vec::new();
    for (n, t) in triples.iter().enumerate() {
        let h = PermGroup::from_generators(g.degree(), vec![t.x.clone(), t.y.clone()])?;
        let (i, new) = distinct.insert(h);
        if new {
            first.push((i, n));
            hits.push(0);
        }
        hits[i] += 1;
    }
    let mut classes: Vec<SubgroupClass> = Vec::new();
    for (i, witness) in first {
        let h = distinct.get(i);
        let label = identify_group(h);
        let mut home = None;
        for (c, class) in classes.iter().enumerate() {
            if class.order() == h.order()
                && class.iso_label == label
                && subgroups_conjugate(g, &class.representative, h)?.is_some()
            {
                home = Some(c);
                break;
            }
        }
        match home {
            Some(c) => classes[c].triples += hits[i],
            None => classes.push(SubgroupClass {
                representative: h.clone(),
                witness: triples[witness].clone(),
                iso_label: label,
                normalizer_order: normalizer(g, h)?.order(),
                triples: hits[i],
            }),
        }
    }
    Ok(classes)
}

/// One class of `(2X,3Y,7Z)`-subgroups with its share of the accounting identity.
#[derive(Clone, Debug)]
pub struct HurwitzSubgroupClass {
    /// Index into `Classification::subgroups`.
    pub subgroup_class: usize,
    pub representative: PermGroup,
    pub witness: Triple,
    pub iso_label: String,
    pub ambient_type: TripleType,
    pub subgroup_order: u64,
    pub normalizer_order: u64,
    /// `n_H`: triples of H in the ambient classes, over `|H|`.
    pub fused_constant: Rational,
    /// The part of `n_H` coming from triples that generate H.
    pub generating_constant: Rational,
    /// `n_H / [N_G(H):H]`.
    pub contribution: Rational,
}

impl HurwitzSubgroupClass {
    pub fn index(&self) -> u64 {
        self.normalizer_order / self.subgroup_order
    }
}

#[derive(Clone, Debug)]
pub struct TypeSummary {
    pub ty: TripleType,
    pub triple_count: u64,
    /// `n_G` from the enumeration.
    pub n_g: Rational,
    pub classes: Vec<HurwitzSubgroupClass>,
}

impl TypeSummary {
    pub fn accounting(&self) -> Accounting {
        accounting_identity_for(&self.ty, &self.n_g, &self.classes)
    }
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub group_order: u64,
    pub triple_orbits: Vec<TripleOrbit>,
    pub subgroups: Vec<SubgroupClass>,
    pub types: Vec<TypeSummary>,
}

fn ratio(a: u64, b: u64) -> Rational {
    Rational::new(BigInt::from(a), BigInt::from(b))
}

/// Triples of `h`, by ambient class type: (all, generating).
fn local_counts(
    h: &PermGroup,
    cl: &ClassList,
) -> Result<BTreeMap<[usize; 3], (u64, u64)>, HurwitzError> {
    let triples = hurwitz_triples(h)?;
    let tagged: Vec<([usize; 3], bool)> = triples
        .par_iter()
        .map(|t| {
            let cls = [&t.x, &t.y, &t.z].map(|e| cl.class_of(e).expect("H lies in G"));
            let generating = PermGroup::from_generators(h.degree(), vec![t.x.clone(), t.y.clone()])
                .map(|s| s.order() == h.order())
                .unwrap_or(false);
            (cls, generating)
        })
        .collect();
    let mut out: BTreeMap<[usize; 3], (u64, u64)> = BTreeMap::new();
    for (cls, generating) in tagged {
        let e = out.entry(cls).or_default();
        e.0 += 1;
        e.1 += generating as u64;
    }
    Ok(out)
}

/// Classifies subgroups generated by triples up to conjugacy.
///
/// With `types` empty, every class type that occurs is reported; otherwise the given
/// types, which may use unions such as `7AB`.
pub fn classify_hurwitz_subgroups(
    g: &PermGroup,
    cl: &ClassList,
    types: &[TripleType],
) -> Result<Classification, HurwitzError> {
    let orbits = enumerate_triples(g, cl, None)?;
    let reps: Vec<Triple> = orbits.iter().map(|o| o.triple.clone()).collect();
    let subgroups = group_by_conjugacy(g, &reps)?;
    let local: Vec<BTreeMap<[usize; 3], (u64, u64)>> = subgroups
        .iter()
        .map(|s| local_counts(&s.representative, cl))
        .collect::<Result<_, _>>()?;
    let types: Vec<TripleType> = if types.is_empty() {
        let mut seen: Vec<[usize; 3]> = orbits.iter().map(|o| o.classes).collect();
        seen.sort();
        seen.dedup();
        seen.into_iter()
            .map(|c| TripleType::of_classes(cl, c))
            .collect()
    } else {
        types.to_vec()
    };
    let summaries = types
        .into_iter()
        .map(|ty| {
            let triple_count = orbits
                .iter()
                .filter(|o| ty.selects_classes(cl, o.classes))
                .map(|o| o.orbit_size)
                .sum();
            let mut classes = Vec::new();
            for (n, (s, counts)) in subgroups.iter().zip(&local).enumerate() {
                let (all, generating) = counts
                    .iter()
                    .filter(|(c, _)| ty.selects_classes(cl, **c))
                    .fold((0, 0), |acc, (_, v)| (acc.0 + v.0, acc.1 + v.1));
                if all == 0 {
                    continue;
                }
                let fused = ratio(all, s.order());
                classes.push(HurwitzSubgroupClass {
                    subgroup_class: n,
                    representative: s.representative.clone(),
                    witness: s.witness.clone(),
                    iso_label: s.iso_label.clone(),
                    ambient_type: ty.clone(),
                    subgroup_order: s.order(),
                    normalizer_order: s.normalizer_order,
                    contribution: &fused / ratio(s.index(), 1),
                    generating_constant: ratio(generating, s.order()),
                    fused_constant: fused,
                });
            }
            TypeSummary {
                n_g: ratio(triple_count, g.order()),
                triple_count,
                ty,
                classes,
            }
        })
        .collect();
    Ok(Classification {
        group_order: g.order(),
        triple_orbits: orbits,
        subgroups,
        types: summaries,
    })
}

/// `n_G = sum_i n_{H_i} / [N_G(H_i):H_i]`, checked exactly.
#[derive(Clone, Debug)]
pub struct Accounting {
    pub ty: Option<TripleType>,
    pub target: Rational,
    /// `(description, contribution)` per class.
    pub terms: Vec<(String, Rational)>,
    pub residual: Rational,
    pub mixed_types: bool,
}

impl Accounting {
    pub fn passed(&self) -> bool {
        self.residual.is_zero() && !self.mixed_types
    }

    pub fn report(&self) -> Report {
        let mut r = Report::new();
        let name = match &self.ty {
            Some(t) => format!("accounting {t}"),
            None => "accounting".to_string(),
        };
        let terms: Vec<String> = self
            .terms
            .iter()
            .map(|(d, c)| format!("{d} {}", format_rational(c)))
            .collect();
        let detail = format!(
            "n_G = {}; terms {}; residual {}",
            format_rational(&self.target),
            if terms.is_empty() {
                "none".to_string()
            } else {
                terms.join(" + ")
            },
            format_rational(&self.residual)
        );
        if self.mixed_types {
            r.fail(name, format!("classes of different types; {detail}"));
        } else {
            r.push(name, self.residual.is_zero(), detail);
        }
        r
    }
}

/// Checks the identity for classes of a single type.
pub fn accounting_identity(n_g: &Rational, classes: &[HurwitzSubgroupClass]) -> Accounting {
    match classes.first() {
        Some(c) => accounting_identity_for(&c.ambient_type.clone(), n_g, classes),
        None => Accounting {
            ty: None,
            target: n_g.clone(),
            terms: Vec::new(),
            residual: n_g.clone(),
            mixed_types: false,
        },
    }
}

fn accounting_identity_for(
    ty: &TripleType,
    n_g: &Rational,
    classes: &[HurwitzSubgroupClass],
) -> Accounting {
    let terms: Vec<(String, Rational)> = classes
        .iter()
        .map(|c| {
            (
                format!(
                    "{} (n_H {}, index {})",
                    c.iso_label,
                    format_rational(&c.fused_constant),
                    c.index()
                ),
                c.contribution.clone(),
            )
        })
        .collect();
    let sum: Rational = terms.iter().map(|(_, c)| c.clone()).sum();
    Accounting {
        ty: Some(ty.clone()),
        target: n_g.clone(),
        residual: n_g - sum,
        terms,
        mixed_types: classes.iter().any(|c| &c.ambient_type != ty),
    }
}

use std::collections::HashMap;

use rayon::prelude::*;

use super::{HurwitzError, Triple, TripleType};
use crate::permgroup::{
    centralizer, ClassList, GroupError, PermGroup, Permutation, EXHAUSTIVE_LIMIT, GROUP_LIMIT,
};

/// One orbit of triples under simultaneous conjugation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleOrbit {
    /// The representative with `z` the class representative and `(x, y)` least.
    pub triple: Triple,
    pub classes: [usize; 3],
    pub orbit_size: u64,
}

pub fn triple_total(orbits: &[TripleOrbit]) -> u64 {
    orbits.iter().map(|o| o.orbit_size).sum()
}

/// Orbit representatives of triples `(x, y, z)`, optionally of one type.
///
/// For each class of elements of order 7 the representative `z` is fixed, `x` runs over
/// the involutions and `y = x^-1 z^-1`; orbits of `C_G(z)` on the `x` give the orbits.
pub fn enumerate_triples(
    g: &PermGroup,
    cl: &ClassList,
    ty: Option<&TripleType>,
) -> Result<Vec<TripleOrbit>, HurwitzError> {
    if g.order() > GROUP_LIMIT {
        return Err(GroupError::ResourceLimit(format!(
            "triple enumeration needs |G| <= {GROUP_LIMIT}, got {}",
            g.order()
        ))
        .into());
    }
    let wanted = |order: u64, slot: usize| -> Vec<usize> {
        cl.of_order(order)
            .into_iter()
            .filter(|&c| ty.is_none_or(|t| crate::chartab::selects(t.labels()[slot], cl.label(c))))
            .collect()
    };
    let (c2, c3, c7) = (wanted(2, 0), wanted(3, 1), wanted(7, 2));
    let mut out = Vec::new();
    if c2.is_empty() || c3.is_empty() {
        return Ok(out);
    }
    let involutions: Vec<(&Permutation, usize)> = c2
        .iter()
        .flat_map(|&i| cl.members(i).iter().map(move |x| (x, i)))
        .collect();
    for &k in &c7 {
        let z = cl.classes[k].representative.clone();
        let zi = z.inverse();
        let mut found: Vec<(Permutation, Permutation, usize, usize)> = involutions
            .par_iter()
            .filter_map(|&(x, i)| {
                let y = x.inverse().mul(&zi);
                let j = cl.class_of(&y)?;
                (cl.classes[j].element_order == 3 && c3.contains(&j)).then(|| (x.clone(), y, i, j))
            })
            .collect();
        if found.is_empty() {
            continue;
        }
        found.sort();
        let pos: HashMap<&Permutation, usize> =
            found.iter().enumerate().map(|(n, f)| (&f.0, n)).collect();
        let cz = centralizer(g, &z)?;
        let mut seen = vec![false; found.len()];
        for start in 0..found.len() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut queue = vec![start];
            let mut n = 0;
            while n < queue.len() {
                let x = &found[queue[n]].0;
                for s in cz.generators() {
                    let p = pos[&x.conjugate_by(s)];
                    if !seen[p] {
                        seen[p] = true;
                        queue.push(p);
                    }
                }
                n += 1;
            }
            let (x, y, i, j) = &found[start];
            out.push(TripleOrbit {
                triple: Triple {
                    x: x.clone(),
                    y: y.clone(),
                    z: z.clone(),
                },
                classes: [*i, *j, k],
                orbit_size: cl.classes[k].size * queue.len() as u64,
            });
        }
    }
    Ok(out)
}

/// Every triple of a small group, sorted.
pub fn hurwitz_triples(h: &PermGroup) -> Result<Vec<Triple>, HurwitzError> {
    if h.order() > EXHAUSTIVE_LIMIT {
        return Err(GroupError::ResourceLimit(format!(
            "listing triples needs |H| <= {EXHAUSTIVE_LIMIT}, got {}",
            h.order()
        ))
        .into());
    }
    let mut inv = Vec::new();
    let mut sevens = Vec::new();
    for e in h.elements() {
        match e.order() {
            2 => inv.push(e),
            7 => sevens.push(e.inverse()),
            _ => {}
        }
    }
    let mut out: Vec<Triple> = inv
        .par_iter()
        .flat_map_iter(|x| {
            let xi = x.inverse();
            sevens.iter().filter_map(move |zi| {
                let y = xi.mul(zi);
                (y.order() == 3).then(|| Triple {
                    x: x.clone(),
                    y,
                    z: zi.inverse(),
                })
            })
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Whether `<x, y>` is all of `g`.
pub fn generates(g: &PermGroup, x: &Permutation, y: &Permutation) -> Result<bool, HurwitzError> {
    for e in [x, y] {
        if !g.contains(e) {
            return Err(GroupError::NotMember(e.to_string()).into());
        }
    }
    let h = PermGroup::from_generators(g.degree(), vec![x.clone(), y.clone()])?;
    Ok(h.order() == g.order())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permgroup::{conjugacy_classes, cyclic, psl2};

    #[test]
    fn psl2_7_counts() {
        let g = psl2(7).unwrap();
        let cl = conjugacy_classes(&g).unwrap();
        let all = enumerate_triples(&g, &cl, None).unwrap();
        assert_eq!(triple_total(&all), 336);
        assert_eq!(all.len(), 2);
        let t = TripleType::new("2A", "3A", "7A").unwrap();
        let one = enumerate_triples(&g, &cl, Some(&t)).unwrap();
        assert_eq!(triple_total(&one), 168);
        for o in &all {
            assert!(o.triple.is_hurwitz());
        }
        assert_eq!(hurwitz_triples(&g).unwrap().len(), 336);
    }

    #[test]
    fn brute_force_agrees_with_orbits() {
        let g = psl2(7).unwrap();
        let elems: Vec<Permutation> = g.elements().collect();
        let brute = elems
            .iter()
            .filter(|x| x.order() == 2)
            .flat_map(|x| elems.iter().map(move |y| (x, y)))
            .filter(|(x, y)| y.order() == 3 && x.mul(y).order() == 7)
            .count();
        assert_eq!(brute, 336);
    }

    #[test]
    fn trivial_and_cyclic_groups_have_none() {
        let g = PermGroup::trivial(3);
        let cl = conjugacy_classes(&g).unwrap();
        assert!(enumerate_triples(&g, &cl, None).unwrap().is_empty());
        let g = cyclic(7);
        let cl = conjugacy_classes(&g).unwrap();
        assert!(enumerate_triples(&g, &cl, None).unwrap().is_empty());
    }

    #[test]
    fn generation() {
        let g = psl2(7).unwrap();
        for t in hurwitz_triples(&g).unwrap() {
            assert!(generates(&g, &t.x, &t.y).unwrap());
        }
        let id = g.identity();
        assert!(!generates(&g, &id, &id).unwrap());
        // a point stabilizer has order 21
        let stab: Vec<Permutation> = g.elements().filter(|e| e.image(0) == 0).collect();
        assert_eq!(stab.len(), 21);
        let x = stab.iter().find(|e| e.order() == 3).unwrap();
        let y = stab.iter().find(|e| e.order() == 7).unwrap();
        assert!(!generates(&g, x, y).unwrap());
    }
}

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use super::{GroupError, PermGroup, Permutation};

/// Element listing is used for fingerprints up to this subgroup order.
const DIGEST_LIMIT: u64 = 10_000;

/// Identity key for a subgroup: equal subgroups have equal keys.
/// Keys that collide are resolved by an exact membership test.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubgroupKey {
    pub order: u64,
    pub orbits: Vec<Vec<usize>>,
    pub digest: Option<u128>,
}

impl SubgroupKey {
    pub fn of(h: &PermGroup) -> Self {
        let digest = (h.order() <= DIGEST_LIMIT).then(|| {
            let mut elems: Vec<Permutation> = h.elements().collect();
            elems.sort_unstable();
            let mut lo = DefaultHasher::new();
            let mut hi = DefaultHasher::new();
            0u8.hash(&mut lo);
            1u8.hash(&mut hi);
            elems.hash(&mut lo);
            elems.hash(&mut hi);
            (hi.finish() as u128) << 64 | lo.finish() as u128
        });
        SubgroupKey {
            order: h.order(),
            orbits: h.orbits(),
            digest,
        }
    }
}

/// A subgroup as a point of the conjugation action.
#[derive(Clone, Debug)]
struct SubgroupPoint {
    key: SubgroupKey,
    group: PermGroup,
}

impl SubgroupPoint {
    fn new(group: PermGroup) -> Self {
        SubgroupPoint {
            key: SubgroupKey::of(&group),
            group,
        }
    }
}

impl PartialEq for SubgroupPoint {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key && self.group.contains_group(&other.group)
    }
}

impl Eq for SubgroupPoint {}

impl Hash for SubgroupPoint {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key.hash(state);
    }
}

/// Orbit of `start` under `group` with a transversal, stopping early when `stop` matches.
fn orbit_with_transversal<P, F, S>(
    group: &PermGroup,
    start: P,
    act: F,
    mut stop: S,
) -> (Vec<P>, Vec<Permutation>, HashMap<P, usize>, Option<usize>)
where
    P: Clone + Eq + Hash,
    F: Fn(&P, &Permutation) -> P,
    S: FnMut(&P) -> bool,
{
    let mut pos: HashMap<P, usize> = HashMap::new();
    pos.insert(start.clone(), 0);
    let mut orbit = vec![start];
    let mut words = vec![group.identity()];
    if stop(&orbit[0]) {
        return (orbit, words, pos, Some(0));
    }
    let mut i = 0;
    while i < orbit.len() {
        for s in group.generators() {
            let next = act(&orbit[i], s);
            if !pos.contains_key(&next) {
                let idx = orbit.len();
                pos.insert(next.clone(), idx);
                words.push(words[i].mul(s));
                let hit = stop(&next);
                orbit.push(next);
                if hit {
                    return (orbit, words, pos, Some(idx));
                }
            }
        }
        i += 1;
    }
    (orbit, words, pos, None)
}

/// Point stabilizer by orbit-stabilizer: Schreier generators are added until the
/// stabilizer order reaches `|G| / |orbit|`.
fn stabilizer<P, F>(group: &PermGroup, start: P, act: F) -> PermGroup
where
    P: Clone + Eq + Hash,
    F: Fn(&P, &Permutation) -> P,
{
    let (orbit, words, pos, _) = orbit_with_transversal(group, start, &act, |_| false);
    let target = group.order() / orbit.len() as u64;
    let mut gens: Vec<Permutation> = Vec::new();
    let mut stab = PermGroup::trivial(group.degree());
    if target == 1 {
        return stab;
    }
    for (i, pt) in orbit.iter().enumerate() {
        for s in group.generators() {
            let j = pos[&act(pt, s)];
            let h = words[i].mul(s).mul(&words[j].inverse());
            if !stab.contains(&h) {
                gens.push(h);
                stab =
                    PermGroup::from_generators(group.degree(), gens.clone()).expect("same degree");
                if stab.order() == target {
                    return stab;
                }
            }
        }
    }
    unreachable!("Schreier generators generate the stabilizer")
}

pub fn centralizer(group: &PermGroup, g: &Permutation) -> Result<PermGroup, GroupError> {
    if !group.contains(g) {
        return Err(GroupError::NotMember(g.to_string()));
    }
    Ok(stabilizer(group, g.clone(), |x, s| x.conjugate_by(s)))
}

/// `N_G(H)` as the stabilizer of `H` under conjugation.
pub fn normalizer(group: &PermGroup, h: &PermGroup) -> Result<PermGroup, GroupError> {
    if h.degree() != group.degree() || !group.contains_group(h) {
        return Err(GroupError::NotSubgroup);
    }
    Ok(stabilizer(group, SubgroupPoint::new(h.clone()), |x, s| {
        SubgroupPoint::new(x.group.conjugate_by(s))
    }))
}

/// Some `g` with `H1^g = H2`, or `None` when the subgroups are not conjugate.
pub fn subgroups_conjugate(
    group: &PermGroup,
    h1: &PermGroup,
    h2: &PermGroup,
) -> Result<Option<Permutation>, GroupError> {
    if h1.order() != h2.order() {
        return Err(GroupError::OrderMismatch(h1.order(), h2.order()));
    }
    for h in [h1, h2] {
        if h.degree() != group.degree() || !group.contains_group(h) {
            return Err(GroupError::NotSubgroup);
        }
    }
    let target = SubgroupPoint::new(h2.clone());
    let (_, words, _, hit) = orbit_with_transversal(
        group,
        SubgroupPoint::new(h1.clone()),
        |x, s| SubgroupPoint::new(x.group.conjugate_by(s)),
        |p| *p == target,
    );
    Ok(hit.map(|i| words[i].clone()))
}

/// Some `g` with `a^g = b`, or `None` when the elements are not conjugate.
pub fn conjugating_element(
    group: &PermGroup,
    a: &Permutation,
    b: &Permutation,
) -> Result<Option<Permutation>, GroupError> {
    for x in [a, b] {
        if !group.contains(x) {
            return Err(GroupError::NotMember(x.to_string()));
        }
    }
    let (_, words, _, hit) =
        orbit_with_transversal(group, a.clone(), |x, s| x.conjugate_by(s), |p| p == b);
    Ok(hit.map(|i| words[i].clone()))
}

/// A set of distinct subgroups, looked up by key and confirmed by containment.
#[derive(Clone, Debug, Default)]
pub struct SubgroupIndex {
    groups: Vec<PermGroup>,
    by_key: HashMap<SubgroupKey, Vec<usize>>,
}

impl SubgroupIndex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn get(&self, i: usize) -> &PermGroup {
        &self.groups[i]
    }

    pub fn groups(&self) -> &[PermGroup] {
        &self.groups
    }

    pub fn find(&self, h: &PermGroup) -> Option<usize> {
        self.find_keyed(&SubgroupKey::of(h), h)
    }

    fn find_keyed(&self, key: &SubgroupKey, h: &PermGroup) -> Option<usize> {
        self.by_key
            .get(key)?
            .iter()
            .copied()
            .find(|&i| self.groups[i].contains_group(h))
    }

    /// Index of `h`, and whether it was newly added.
    pub fn insert(&mut self, h: PermGroup) -> (usize, bool) {
        let key = SubgroupKey::of(&h);
        if let Some(i) = self.find_keyed(&key, &h) {
            return (i, false);
        }
        let i = self.groups.len();
        self.groups.push(h);
        self.by_key.entry(key).or_default().push(i);
        (i, true)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{psl2, symmetric};
    use super::*;

    fn sylow7(g: &PermGroup) -> PermGroup {
        let z = g.elements().find(|x| x.order() == 7).unwrap();
        PermGroup::from_generators(g.degree(), vec![z]).unwrap()
    }

    #[test]
    fn sylow_normalizer_in_psl2_7() {
        let g = psl2(7).unwrap();
        let p = sylow7(&g);
        let n = normalizer(&g, &p).unwrap();
        assert_eq!(n.order(), 21);
        // brute force: elements conjugating the generator into P
        let z = &p.generators()[0];
        let brute = g
            .elements()
            .filter(|x| p.contains(&z.conjugate_by(x)))
            .count();
        assert_eq!(brute, 21);
        assert_eq!(normalizer(&g, &n).unwrap().order(), 21);
        assert_eq!(normalizer(&g, &g).unwrap().order(), 168);
    }

    #[test]
    fn centralizer_matches_brute_force() {
        let g = symmetric(5);
        for x in g.elements().step_by(7) {
            let c = centralizer(&g, &x).unwrap();
            let brute = g.elements().filter(|y| x.mul(y) == y.mul(&x)).count() as u64;
            assert_eq!(c.order(), brute);
            assert!(c.generators().iter().all(|y| x.mul(y) == y.mul(&x)));
        }
    }

    #[test]
    fn sylow_subgroups_are_conjugate() {
        let g = psl2(7).unwrap();
        let p = sylow7(&g);
        let t = g.element(77);
        let q = p.conjugate_by(&t);
        let w = subgroups_conjugate(&g, &p, &q).unwrap().expect("conjugate");
        assert!(p.conjugate_by(&w).same_group(&q));
        let id = subgroups_conjugate(&g, &p, &p).unwrap().unwrap();
        assert!(id.is_identity());
        let stab =
            PermGroup::from_generators(8, g.elements().filter(|x| x.image(7) == 7).collect())
                .unwrap();
        assert_eq!(stab.order(), 21);
        let n = normalizer(&g, &p).unwrap();
        // in PSL(2,7) the point stabilizer is a Borel subgroup, conjugate to N(P)
        assert!(subgroups_conjugate(&g, &stab, &n).unwrap().is_some());
        let s4 = g
            .elements()
            .filter(|x| x.order() == 4)
            .take(1)
            .collect::<Vec<_>>();
        let c4 = PermGroup::from_generators(8, s4).unwrap();
        assert!(matches!(
            subgroups_conjugate(&g, &c4, &n),
            Err(GroupError::OrderMismatch(4, 21))
        ));
    }
}

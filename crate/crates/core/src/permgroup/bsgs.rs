use rand::Rng;

use super::{GroupError, Permutation};

#[derive(Clone, Debug)]
struct Level {
    point: usize,
    /// Strong generators fixing all earlier base points.
    gens: Vec<Permutation>,
    orbit: Vec<usize>,
    /// `transversal[b]` maps the base point to `b`.
    transversal: Vec<Option<Permutation>>,
}

impl Level {
    fn new(point: usize, degree: usize) -> Self {
        let mut lv = Level {
            point,
            gens: Vec::new(),
            orbit: Vec::new(),
            transversal: vec![None; degree],
        };
        lv.rebuild_orbit(degree);
        lv
    }

    fn rebuild_orbit(&mut self, degree: usize) {
        self.transversal = vec![None; degree];
        self.transversal[self.point] = Some(Permutation::identity(degree));
        self.orbit = vec![self.point];
        let mut i = 0;
        while i < self.orbit.len() {
            let b = self.orbit[i];
            for s in &self.gens {
                let c = s.image(b);
                if self.transversal[c].is_none() {
                    let u = self.transversal[b].as_ref().expect("orbit point").mul(s);
                    self.transversal[c] = Some(u);
                    self.orbit.push(c);
                }
            }
            i += 1;
        }
    }
}

/// A permutation group with a base and strong generating set.
///
/// Built once by deterministic Schreier-Sims; immutable afterwards.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    levels: Vec<Level>,
    order: u64,
}

impl PermGroup {
    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            generators: Vec::new(),
            levels: Vec::new(),
            order: 1,
        }
    }

    pub fn from_generators(degree: usize, gens: Vec<Permutation>) -> Result<Self, GroupError> {
        if let Some(g) = gens.iter().find(|g| g.degree() != degree) {
            return Err(GroupError::DegreeMismatch {
                expected: degree,
                found: g.degree(),
            });
        }
        let mut group = PermGroup {
            degree,
            generators: gens,
            levels: Vec::new(),
            order: 1,
        };
        group.schreier_sims();
        Ok(group)
    }

    /// Builds from a nonempty generator list, taking the degree from the first generator.
    pub fn generated_by(gens: &[Permutation]) -> Result<Self, GroupError> {
        let degree = gens
            .first()
            .map(|g| g.degree())
            .ok_or_else(|| GroupError::Invalid("empty generator list".into()))?;
        Self::from_generators(degree, gens.to_vec())
    }

    fn schreier_sims(&mut self) {
        let d = self.degree;
        let gens: Vec<Permutation> = self
            .generators
            .iter()
            .filter(|g| !g.is_identity())
            .cloned()
            .collect();
        let mut levels: Vec<Level> = Vec::new();
        for g in &gens {
            if levels.iter().all(|lv| g.image(lv.point) == lv.point) {
                let p = g.first_moved_point().expect("nonidentity");
                levels.push(Level::new(p, d));
            }
        }
        for g in &gens {
            for lv in levels.iter_mut() {
                lv.gens.push(g.clone());
                if g.image(lv.point) != lv.point {
                    break;
                }
            }
        }
        for lv in levels.iter_mut() {
            lv.rebuild_orbit(d);
        }

        let mut i = levels.len();
        while i > 0 {
            let li = i - 1;
            let mut complete = true;
            'scan: for oi in 0..levels[li].orbit.len() {
                let b = levels[li].orbit[oi];
                for si in 0..levels[li].gens.len() {
                    let s = &levels[li].gens[si];
                    let u_b = levels[li].transversal[b].as_ref().expect("orbit point");
                    let c = s.image(b);
                    let u_c = levels[li].transversal[c].as_ref().expect("orbit point");
                    let h = u_b.mul(s).mul(&u_c.inverse());
                    if h.is_identity() {
                        continue;
                    }
                    let (res, j) = strip(&levels, &h, li + 1);
                    if j < levels.len() || !res.is_identity() {
                        complete = false;
                        if j == levels.len() {
                            let p = res.first_moved_point().expect("nonidentity residue");
                            levels.push(Level::new(p, d));
                        }
                        for lv in levels.iter_mut().take(j + 1).skip(li + 1) {
                            lv.gens.push(res.clone());
                            lv.rebuild_orbit(d);
                        }
                        i = j + 1;
                        break 'scan;
                    }
                }
            }
            if complete {
                i -= 1;
            }
        }
        self.order = levels.iter().map(|lv| lv.orbit.len() as u64).product();
        self.levels = levels;
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|lv| lv.point).collect()
    }

    pub fn identity(&self) -> Permutation {
        Permutation::identity(self.degree)
    }

    /// Exact membership by sifting through the stabilizer chain.
    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (res, j) = strip(&self.levels, g, 0);
        j == self.levels.len() && res.is_identity()
    }

    pub fn contains_group(&self, other: &PermGroup) -> bool {
        other.generators.iter().all(|g| self.contains(g))
    }

    /// Equal as sets of permutations.
    pub fn same_group(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.order == other.order && self.contains_group(other)
    }

    /// The element with mixed-radix index `idx` over the transversals; a bijection `0..order -> G`.
    pub fn element(&self, mut idx: u64) -> Permutation {
        debug_assert!(idx < self.order);
        let mut g = self.identity();
        for lv in &self.levels {
            let n = lv.orbit.len() as u64;
            let b = lv.orbit[(idx % n) as usize];
            idx /= n;
            // deeper levels act first
            g = lv.transversal[b].as_ref().expect("orbit point").mul(&g);
        }
        g
    }

    pub fn elements(&self) -> impl Iterator<Item = Permutation> + '_ {
        (0..self.order).map(move |i| self.element(i))
    }

    /// A uniformly distributed element.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        self.element(rng.gen_range(0..self.order))
    }

    /// Point orbits of the group, each sorted, in order of least point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for start in 0..self.degree {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut orbit = vec![start];
            let mut i = 0;
            while i < orbit.len() {
                for g in &self.generators {
                    let c = g.image(orbit[i]);
                    if !seen[c] {
                        seen[c] = true;
                        orbit.push(c);
                    }
                }
                i += 1;
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    /// The conjugate group `self^g`.
    pub fn conjugate_by(&self, g: &Permutation) -> PermGroup {
        let gens = self.generators.iter().map(|h| h.conjugate_by(g)).collect();
        PermGroup::from_generators(self.degree, gens).expect("same degree")
    }
}

/// Sifts `g` through levels `from..`; returns the residue and the level where it dropped out
/// (`levels.len()` when it passed every level).
fn strip(levels: &[Level], g: &Permutation, from: usize) -> (Permutation, usize) {
    let mut h = g.clone();
    for (j, lv) in levels.iter().enumerate().skip(from) {
        let b = h.image(lv.point);
        match &lv.transversal[b] {
            None => return (h, j),
            Some(u) => h = h.mul(&u.inverse()),
        }
    }
    (h, levels.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn closure(degree: usize, gens: &[Permutation]) -> HashSet<Permutation> {
        let mut seen = HashSet::new();
        let id = Permutation::identity(degree);
        seen.insert(id.clone());
        let mut queue = vec![id];
        while let Some(g) = queue.pop() {
            for s in gens {
                let h = g.mul(s);
                if seen.insert(h.clone()) {
                    queue.push(h);
                }
            }
        }
        seen
    }

    fn p(d: usize, s: &str) -> Permutation {
        Permutation::parse_cycles(d, s).unwrap()
    }

    #[test]
    fn small_orders_match_closure() {
        let cases: Vec<(usize, Vec<&str>)> = vec![
            (3, vec!["(1,2)", "(1,2,3)"]),
            (5, vec![]),
            (8, vec!["(1,2,3,4,5,6,7)", "(1,2)(3,6)"]),
            (6, vec!["(1,2,3,4,5,6)", "(1,2)"]),
            (7, vec!["(1,2,3)", "(3,4,5,6,7)"]),
            (9, vec!["(1,2,3)(4,5,6)(7,8,9)", "(1,4,7)(2,5,8)(3,6,9)"]),
        ];
        for (d, gens) in cases {
            let gens: Vec<Permutation> = gens.iter().map(|s| p(d, s)).collect();
            let g = PermGroup::from_generators(d, gens.clone()).unwrap();
            let all = closure(d, &gens);
            assert_eq!(g.order(), all.len() as u64);
            for x in &all {
                assert!(g.contains(x));
            }
            let listed: HashSet<Permutation> = g.elements().collect();
            assert_eq!(listed, all);
        }
    }

    #[test]
    fn membership_rejects_outsiders() {
        let g = PermGroup::from_generators(4, vec![p(4, "(1,2,3)"), p(4, "(2,3,4)")]).unwrap();
        assert_eq!(g.order(), 12);
        assert!(!g.contains(&p(4, "(1,2)")));
        assert!(g.contains(&p(4, "(1,2)(3,4)")));
        assert!(!g.contains(&Permutation::identity(5)));
    }

    #[test]
    fn degree_mismatch_is_an_error() {
        let r = PermGroup::from_generators(4, vec![p(4, "(1,2)"), p(5, "(1,2)")]);
        assert!(matches!(r, Err(GroupError::DegreeMismatch { .. })));
    }
}

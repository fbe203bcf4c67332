use std::collections::{BTreeMap, HashMap, HashSet};

use num_integer::Integer;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{GroupError, PermGroup, Permutation};

/// Largest group order for which every element is listed.
pub const EXHAUSTIVE_LIMIT: u64 = 1_000_000;
/// Largest group order accepted for class computations.
pub const GROUP_LIMIT: u64 = 10_000_000;

const SAMPLING_SEED: u64 = 0x7237_2023;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyClassData {
    /// Lexicographically least element of the class.
    pub representative: Permutation,
    pub size: u64,
    pub element_order: u64,
    pub centralizer_order: u64,
    /// Class of the p-th power of the representative, for each prime p dividing the exponent.
    pub power_classes: BTreeMap<u64, usize>,
    pub inverse_class: usize,
    pub label: String,
}

/// All conjugacy classes of a group, with member lists and an element index.
#[derive(Clone, Debug)]
pub struct ClassList {
    pub group_order: u64,
    pub classes: Vec<ConjugacyClassData>,
    members: Vec<Vec<Permutation>>,
    index: HashMap<Permutation, usize>,
}

impl ClassList {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_of(&self, g: &Permutation) -> Option<usize> {
        self.index.get(g).copied()
    }

    /// Sorted members of class `i`.
    pub fn members(&self, i: usize) -> &[Permutation] {
        &self.members[i]
    }

    pub fn by_label(&self, label: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.label == label)
    }

    pub fn label(&self, i: usize) -> &str {
        &self.classes[i].label
    }

    pub fn exponent(&self) -> u64 {
        self.classes
            .iter()
            .fold(1, |acc, c| acc.lcm(&c.element_order))
    }

    pub fn of_order(&self, order: u64) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.classes[i].element_order == order)
            .collect()
    }
}

/// ATLAS-style letter suffix: A..Z, then AA, AB, ...
pub(crate) fn letters(mut n: usize) -> String {
    let mut out = Vec::new();
    loop {
        out.push(b'A' + (n % 26) as u8);
        if n < 26 {
            break;
        }
        n = n / 26 - 1;
    }
    out.reverse();
    String::from_utf8(out).expect("ascii")
}

/// The conjugacy class of `g` by closure under conjugation by the generators.
pub fn class_orbit(group: &PermGroup, g: &Permutation) -> Vec<Permutation> {
    let mut seen: HashSet<Permutation> = HashSet::new();
    seen.insert(g.clone());
    let mut orbit = vec![g.clone()];
    let mut i = 0;
    while i < orbit.len() {
        for s in group.generators() {
            let h = orbit[i].conjugate_by(s);
            if seen.insert(h.clone()) {
                orbit.push(h);
            }
        }
        i += 1;
    }
    orbit
}

pub fn centralizer_order(group: &PermGroup, g: &Permutation) -> Result<u64, GroupError> {
    if !group.contains(g) {
        return Err(GroupError::NotMember(g.to_string()));
    }
    Ok(group.order() / class_orbit(group, g).len() as u64)
}

pub fn conjugacy_classes(group: &PermGroup) -> Result<ClassList, GroupError> {
    conjugacy_classes_with_limit(group, EXHAUSTIVE_LIMIT)
}

/// Lists elements exhaustively when `|G| <= exhaustive_limit`, otherwise draws seeded
/// uniform random elements until the class sizes found sum to `|G|`.
pub fn conjugacy_classes_with_limit(
    group: &PermGroup,
    exhaustive_limit: u64,
) -> Result<ClassList, GroupError> {
    let order = group.order();
    if order > GROUP_LIMIT {
        return Err(GroupError::ResourceLimit(format!(
            "class computation needs |G| <= {GROUP_LIMIT}, got {order}"
        )));
    }
    let mut index: HashMap<Permutation, usize> = HashMap::new();
    let mut raw: Vec<Vec<Permutation>> = Vec::new();
    let mut covered = 0u64;
    let mut absorb = |g: Permutation, index: &mut HashMap<Permutation, usize>| {
        if index.contains_key(&g) {
            return 0;
        }
        let orbit = class_orbit(group, &g);
        let id = raw.len();
        for h in &orbit {
            index.insert(h.clone(), id);
        }
        let n = orbit.len() as u64;
        raw.push(orbit);
        n
    };
    if order <= exhaustive_limit {
        for g in group.elements() {
            covered += absorb(g, &mut index);
            if covered == order {
                break;
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(SAMPLING_SEED);
        covered += absorb(group.identity(), &mut index);
        while covered < order {
            let g = group.random_element(&mut rng);
            covered += absorb(g, &mut index);
        }
    }
    debug_assert_eq!(covered, order);

    for m in raw.iter_mut() {
        m.sort_unstable();
    }
    let mut order_of: Vec<(u64, u64, usize)> = raw
        .iter()
        .enumerate()
        .map(|(i, m)| (m[0].order(), m.len() as u64, i))
        .collect();
    order_of.sort_by(|a, b| (a.0, a.1, &raw[a.2][0]).cmp(&(b.0, b.1, &raw[b.2][0])));
    let mut new_id = vec![0usize; raw.len()];
    for (pos, (_, _, old)) in order_of.iter().enumerate() {
        new_id[*old] = pos;
    }
    for v in index.values_mut() {
        *v = new_id[*v];
    }
    let mut members: Vec<Vec<Permutation>> = vec![Vec::new(); raw.len()];
    for (old, m) in raw.into_iter().enumerate() {
        members[new_id[old]] = m;
    }

    let exponent = members.iter().fold(1u64, |acc, m| acc.lcm(&m[0].order()));
    let primes: Vec<u64> = (2..=exponent)
        .filter(|p| exponent % p == 0 && (2..*p).all(|d| p % d != 0))
        .collect();
    let mut classes = Vec::with_capacity(members.len());
    let mut counter: BTreeMap<u64, usize> = BTreeMap::new();
    for m in &members {
        let rep = m[0].clone();
        let el_order = rep.order();
        let k = counter.entry(el_order).or_insert(0);
        let label = format!("{el_order}{}", letters(*k));
        *k += 1;
        let power_classes = primes
            .iter()
            .map(|&p| (p, index[&rep.pow(p as i64)]))
            .collect();
        let inverse_class = index[&rep.inverse()];
        classes.push(ConjugacyClassData {
            size: m.len() as u64,
            element_order: el_order,
            centralizer_order: order / m.len() as u64,
            power_classes,
            inverse_class,
            label,
            representative: rep,
        });
    }
    Ok(ClassList {
        group_order: order,
        classes,
        members,
        index,
    })
}

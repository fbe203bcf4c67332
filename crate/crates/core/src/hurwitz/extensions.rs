use super::HurwitzError;
use crate::permgroup::{
    centralizer, conjugating_element, identify_group, normalizer, GroupError, PermGroup,
    Permutation, SubgroupIndex, GROUP_LIMIT,
};

/// An `N_G(P)`-orbit of subgroups `<P, t>`.
#[derive(Clone, Debug)]
pub struct ExtensionOrbit {
    pub representative: PermGroup,
    pub iso_label: String,
    pub order: u64,
    /// Number of subgroups in the orbit.
    pub orbit_size: usize,
    /// Involutions `t` giving a subgroup in the orbit.
    pub involutions: usize,
}

fn is_abelian(p: &PermGroup) -> bool {
    let gens = p.generators();
    gens.iter()
        .all(|a| gens.iter().all(|b| a.mul(b) == b.mul(a)))
}

/// For `P` of shape 7:3 and `y` the least element of order 3 in `P`, the involutions `t`
/// with `y^t = y^-1`, with the subgroups `<P, t>` grouped into `N_G(P)`-orbits.
pub fn inverting_involution_extensions(
    g: &PermGroup,
    p: &PermGroup,
) -> Result<Vec<ExtensionOrbit>, HurwitzError> {
    if p.degree() != g.degree() || !g.contains_group(p) {
        return Err(GroupError::NotSubgroup.into());
    }
    if p.order() != 21 || is_abelian(p) {
        return Err(HurwitzError::Invalid(format!(
            "P must be nonabelian of order 21, got order {}",
            p.order()
        )));
    }
    let y = p
        .elements()
        .filter(|e| e.order() == 3)
        .min()
        .expect("a group of order 21 has elements of order 3");
    let Some(g0) = conjugating_element(g, &y, &y.inverse())? else {
        return Ok(Vec::new());
    };
    let c = centralizer(g, &y)?;
    if c.order() > GROUP_LIMIT {
        return Err(GroupError::ResourceLimit(format!("|C_G(y)| = {}", c.order())).into());
    }
    // y^(c g0) = y^-1 exactly for c in C_G(y)
    let mut subgroups = SubgroupIndex::new();
    let mut involutions: Vec<usize> = Vec::new();
    for cc in c.elements() {
        let t = cc.mul(&g0);
        if t.order() != 2 {
            continue;
        }
        let mut gens: Vec<Permutation> = p.generators().to_vec();
        gens.push(t);
        let (i, new) = subgroups.insert(PermGroup::from_generators(g.degree(), gens)?);
        if new {
            involutions.push(0);
        }
        involutions[i] += 1;
    }
    let n = normalizer(g, p)?;
    let mut orbit_of = vec![usize::MAX; subgroups.len()];
    let mut out = Vec::new();
    for start in 0..subgroups.len() {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        orbit_of[start] = id;
        let mut queue = vec![start];
        let mut k = 0;
        while k < queue.len() {
            let h = subgroups.get(queue[k]).clone();
            for s in n.generators() {
                let img = h.conjugate_by(s);
                let j = subgroups.find(&img).ok_or_else(|| {
                    HurwitzError::Invalid("extension set is not N_G(P)-stable".into())
                })?;
                if orbit_of[j] == usize::MAX {
                    orbit_of[j] = id;
                    queue.push(j);
                }
            }
            k += 1;
        }
        let rep = subgroups.get(start).clone();
        out.push(ExtensionOrbit {
            iso_label: identify_group(&rep),
            order: rep.order(),
            orbit_size: queue.len(),
            involutions: queue.iter().map(|&j| involutions[j]).sum(),
            representative: rep,
        });
    }
    out.sort_by_key(|o| (o.order, o.orbit_size));
    Ok(out)
}

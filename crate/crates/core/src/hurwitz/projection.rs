use rand::Rng;

use super::Triple;
use crate::permgroup::{CyclerProduct, PermGroup};

/// Each triple of the factor placed in each block of the product.
pub fn support_one_triples(prod: &CyclerProduct, factor_triples: &[Triple]) -> Vec<Triple> {
    (0..prod.copies)
        .flat_map(|i| {
            factor_triples.iter().map(move |t| Triple {
                x: prod.embed(&t.x, i),
                y: prod.embed(&t.y, i),
                z: prod.embed(&t.z, i),
            })
        })
        .collect()
}

/// A random subgroup generated by a triple of the base group: a nonempty set of blocks
/// carries independently chosen factor triples, and the result is conjugated by a
/// random element of the whole product.
pub fn sample_hurwitz_subgroup<R: Rng + ?Sized>(
    prod: &CyclerProduct,
    factor_triples: &[Triple],
    rng: &mut R,
) -> (PermGroup, Triple) {
    let mask = rng.gen_range(1..1u32 << prod.copies);
    let n = prod.group.degree();
    let mut x = prod.group.identity();
    let mut y = prod.group.identity();
    for i in 0..prod.copies {
        if mask >> i & 1 == 1 {
            let t = &factor_triples[rng.gen_range(0..factor_triples.len())];
            x = x.mul(&prod.embed(&t.x, i));
            y = y.mul(&prod.embed(&t.y, i));
        }
    }
    let g = prod.group.random_element(rng);
    let t = Triple::from_pair(x, y).conjugate_by(&g);
    let h = PermGroup::from_generators(n, vec![t.x.clone(), t.y.clone()]).expect("same degree");
    (h, t)
}

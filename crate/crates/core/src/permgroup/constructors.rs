use num_integer::Integer;

use super::{GroupError, PermGroup, Permutation};

fn from_images(images: Vec<usize>) -> Permutation {
    Permutation::from_images(images).expect("constructed bijection")
}

pub fn cyclic(n: usize) -> PermGroup {
    if n <= 1 {
        return PermGroup::trivial(n.max(1));
    }
    let gen = from_images((0..n).map(|i| (i + 1) % n).collect());
    PermGroup::from_generators(n, vec![gen]).expect("same degree")
}

pub fn symmetric(n: usize) -> PermGroup {
    if n <= 1 {
        return PermGroup::trivial(n.max(1));
    }
    let cycle = from_images((0..n).map(|i| (i + 1) % n).collect());
    let mut swap: Vec<usize> = (0..n).collect();
    swap.swap(0, 1);
    PermGroup::from_generators(n, vec![cycle, from_images(swap)]).expect("same degree")
}

pub fn alternating(n: usize) -> PermGroup {
    if n <= 2 {
        return PermGroup::trivial(n.max(1));
    }
    let gens = (2..n)
        .map(|k| Permutation::from_cycles(n, &[vec![0, 1, k]]).expect("3-cycle"))
        .collect();
    PermGroup::from_generators(n, gens).expect("same degree")
}

/// The finite field of order `p^k`, elements encoded as base-`p` digit strings.
#[derive(Clone, Debug)]
pub struct GaloisField {
    p: usize,
    q: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
}

impl GaloisField {
    pub fn new(q: usize) -> Result<Self, GroupError> {
        let (p, k) = prime_power(q)
            .ok_or_else(|| GroupError::Invalid(format!("{q} is not a prime power")))?;
        if q > 256 {
            return Err(GroupError::Invalid(format!("field order {q} too large")));
        }
        let digits = |mut x: usize| -> Vec<usize> {
            (0..k)
                .map(|_| {
                    let d = x % p;
                    x /= p;
                    d
                })
                .collect()
        };
        let encode = |ds: &[usize]| ds.iter().rev().fold(0, |acc, d| acc * p + d);
        let mut add = vec![0u8; q * q];
        for a in 0..q {
            for b in 0..q {
                let s: Vec<usize> = digits(a)
                    .iter()
                    .zip(digits(b))
                    .map(|(x, y)| (x + y) % p)
                    .collect();
                add[a * q + b] = encode(&s) as u8;
            }
        }
        // brute-force search for a modulus x^k + m(x) that yields a field
        for m in 0..q {
            let tail = digits(m);
            let mut mul = vec![0u8; q * q];
            for a in 0..q {
                for b in 0..q {
                    let (da, db) = (digits(a), digits(b));
                    let mut prod = vec![0usize; 2 * k];
                    for i in 0..k {
                        for j in 0..k {
                            prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
                        }
                    }
                    for d in (k..2 * k).rev() {
                        let t = prod[d];
                        if t == 0 {
                            continue;
                        }
                        prod[d] = 0;
                        for (i, mi) in tail.iter().enumerate() {
                            prod[d - k + i] = (prod[d - k + i] + (p - t) * mi) % p;
                        }
                    }
                    mul[a * q + b] = encode(&prod[..k]) as u8;
                }
            }
            let no_zero_divisors = (1..q).all(|a| (1..q).all(|b| mul[a * q + b] != 0));
            if no_zero_divisors {
                return Ok(GaloisField { p, q, add, mul });
            }
        }
        unreachable!("an irreducible polynomial of every degree exists")
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn characteristic(&self) -> usize {
        self.p
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.q + b] as usize
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.q + b] as usize
    }

    pub fn neg(&self, a: usize) -> usize {
        (0..self.q)
            .find(|&b| self.add(a, b) == 0)
            .expect("additive inverse")
    }

    pub fn inv(&self, a: usize) -> Option<usize> {
        (1..self.q).find(|&b| self.mul(a, b) == 1)
    }

    /// The least generator of the multiplicative group.
    pub fn primitive_element(&self) -> usize {
        (1..self.q)
            .find(|&w| {
                let mut x = w;
                let mut ord = 1;
                while x != 1 {
                    x = self.mul(x, w);
                    ord += 1;
                }
                ord == self.q - 1
            })
            .expect("multiplicative group is cyclic")
    }
}

fn prime_power(q: usize) -> Option<(usize, usize)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let (mut r, mut k) = (q, 0);
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

/// PSL(2,q) acting on the projective line `{0..q-1} ∪ {∞ = q}`.
pub fn psl2(q: usize) -> Result<PermGroup, GroupError> {
    if q > 32 {
        return Err(GroupError::Invalid(format!("q = {q} exceeds 32")));
    }
    let f = GaloisField::new(q)?;
    let inf = q;
    let shift = from_images(
        (0..=q)
            .map(|x| if x == inf { inf } else { f.add(x, 1) })
            .collect(),
    );
    let w = f.primitive_element();
    let c = f.mul(w, w);
    let scale = from_images(
        (0..=q)
            .map(|x| if x == inf { inf } else { f.mul(c, x) })
            .collect(),
    );
    let invert = from_images(
        (0..=q)
            .map(|x| {
                if x == inf {
                    0
                } else if x == 0 {
                    inf
                } else {
                    f.neg(f.inv(x).expect("nonzero"))
                }
            })
            .collect(),
    );
    let g = PermGroup::from_generators(q + 1, vec![shift, scale, invert])?;
    let expected = (q * (q * q - 1) / (q - 1).gcd(&2)) as u64;
    if g.order() != expected {
        return Err(GroupError::Invalid(format!(
            "PSL(2,{q}) construction has order {} instead of {expected}",
            g.order()
        )));
    }
    Ok(g)
}

/// `K x ... x K` on disjoint copies of K's domain, extended by the cyclic shift of the copies.
#[derive(Clone, Debug)]
pub struct CyclerProduct {
    pub group: PermGroup,
    pub base: PermGroup,
    pub factor: PermGroup,
    pub copies: usize,
}

impl CyclerProduct {
    pub fn block_size(&self) -> usize {
        self.factor.degree()
    }

    /// Copy of `k` acting on block `i` only.
    pub fn embed(&self, k: &Permutation, i: usize) -> Permutation {
        let d = self.block_size();
        let mut images: Vec<usize> = (0..d * self.copies).collect();
        for x in 0..d {
            images[i * d + x] = i * d + k.image(x);
        }
        from_images(images)
    }

    /// `k` acting simultaneously on every block.
    pub fn diagonal(&self, k: &Permutation) -> Permutation {
        let d = self.block_size();
        from_images(
            (0..d * self.copies)
                .map(|x| (x / d) * d + k.image(x % d))
                .collect(),
        )
    }

    pub fn embed_group(&self, h: &PermGroup, i: usize) -> PermGroup {
        let gens = h.generators().iter().map(|g| self.embed(g, i)).collect();
        PermGroup::from_generators(self.group.degree(), gens).expect("same degree")
    }

    /// The permutation cycling the blocks `i -> i+1`.
    pub fn cycler(&self) -> Permutation {
        let n = self.group.degree();
        let d = self.block_size();
        from_images((0..n).map(|x| (x + d) % n).collect())
    }

    /// Restriction of a base-group element to block `i`, as an element of K.
    pub fn component(&self, g: &Permutation, i: usize) -> Result<Permutation, GroupError> {
        let d = self.block_size();
        let mut images = Vec::with_capacity(d);
        for x in 0..d {
            let y = g.image(i * d + x);
            if y / d != i {
                return Err(GroupError::NotSubgroup);
            }
            images.push(y % d);
        }
        Permutation::from_images(images)
    }

    /// Number of factors onto which `h` projects nontrivially.
    pub fn projection_support(&self, h: &PermGroup) -> Result<usize, GroupError> {
        if h.degree() != self.group.degree() {
            return Err(GroupError::NotSubgroup);
        }
        let mut support = 0;
        for i in 0..self.copies {
            let mut nontrivial = false;
            for g in h.generators() {
                let c = self.component(g, i)?;
                if !self.factor.contains(&c) {
                    return Err(GroupError::NotSubgroup);
                }
                nontrivial |= !c.is_identity();
            }
            support += nontrivial as usize;
        }
        Ok(support)
    }
}

pub fn product_with_cycler(k: &PermGroup, copies: usize) -> Result<CyclerProduct, GroupError> {
    if copies == 0 {
        return Err(GroupError::Invalid("need at least one copy".into()));
    }
    let limit = 100_000_000f64;
    if (k.order() as f64).powi(copies as i32) * copies as f64 > limit {
        return Err(GroupError::ResourceLimit(format!(
            "|K|^{copies} * {copies} exceeds 10^8"
        )));
    }
    let d = k.degree();
    let n = d * copies;
    let mut prod = CyclerProduct {
        group: PermGroup::trivial(n),
        base: PermGroup::trivial(n),
        factor: k.clone(),
        copies,
    };
    let base_gens: Vec<Permutation> = (0..copies)
        .flat_map(|i| k.generators().iter().map(move |g| (i, g)))
        .map(|(i, g)| prod.embed(g, i))
        .collect();
    let mut all = base_gens.clone();
    all.push(prod.cycler());
    prod.base = PermGroup::from_generators(n, base_gens)?;
    prod.group = PermGroup::from_generators(n, all)?;
    Ok(prod)
}

/// Octonion unit products on the Fano lines `(t, t+1, t+3)`: `e_a e_b = sign * e_c`.
fn octonion_product(a: usize, b: usize) -> (i8, usize) {
    debug_assert_ne!(a, b);
    for t in 0..7 {
        let line = [t, (t + 1) % 7, (t + 3) % 7];
        for r in 0..3 {
            let (x, y, z) = (line[r], line[(r + 1) % 3], line[(r + 2) % 3]);
            if (a, b) == (x, y) {
                return (1, z);
            }
            if (a, b) == (y, x) {
                return (-1, z);
            }
        }
    }
    unreachable!("two distinct points lie on a line")
}

/// Signed permutations `e_i -> s_i e_pi(i)` of the imaginary octonion units that preserve
/// multiplication, acting on the 14 points `2i = +e_i`, `2i+1 = -e_i`.
pub fn octonion_sign_automorphisms() -> PermGroup {
    let mut found = Vec::new();
    let mut pi: Vec<usize> = (0..7).collect();
    let mut perms = Vec::new();
    permutations(&mut pi, 0, &mut perms);
    for pi in &perms {
        for signs in 0u32..128 {
            let s = |i: usize| if signs >> i & 1 == 1 { -1i8 } else { 1 };
            let ok = (0..7).all(|a| {
                (0..7).filter(|&b| b != a).all(|b| {
                    let (sg, c) = octonion_product(a, b);
                    let (sg2, c2) = octonion_product(pi[a], pi[b]);
                    c2 == pi[c] && s(a) * s(b) * sg2 == sg * s(c)
                })
            });
            if ok {
                let images = (0..14)
                    .map(|x| {
                        let (i, neg) = (x / 2, x % 2 == 1);
                        let flip = (s(i) < 0) != neg;
                        2 * pi[i] + flip as usize
                    })
                    .collect();
                found.push(from_images(images));
            }
        }
    }
    let mut group = PermGroup::trivial(14);
    let mut gens = Vec::new();
    for g in found {
        if !group.contains(&g) {
            gens.push(g);
            group = PermGroup::from_generators(14, gens.clone()).expect("same degree");
        }
    }
    group
}

fn permutations(v: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == v.len() {
        out.push(v.clone());
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, out);
        v.swap(k, i);
    }
}

/// AGL(3,2) on the 8 vectors of `F_2^3` (vector `v` is point `v`).
pub fn affine_general_linear_3_2() -> PermGroup {
    let apply = |rows: [u8; 3], v: usize| -> usize {
        (0..3)
            .map(|i| ((rows[i] as usize & v).count_ones() as usize % 2) << i)
            .sum()
    };
    // transvection and cyclic coordinate shift generate GL(3,2)
    let transvection = from_images((0..8).map(|v| apply([0b011, 0b010, 0b100], v)).collect());
    let shift = from_images((0..8).map(|v| apply([0b100, 0b001, 0b010], v)).collect());
    let translate = from_images((0..8).map(|v| v ^ 1).collect());
    PermGroup::from_generators(8, vec![transvection, shift, translate]).expect("same degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_orders() {
        assert_eq!(psl2(2).unwrap().order(), 6);
        assert_eq!(psl2(7).unwrap().order(), 168);
        assert_eq!(psl2(8).unwrap().order(), 504);
        for q in [3usize, 4, 5, 9, 11, 13, 16, 25, 27, 29, 31, 32] {
            let expected = q * (q * q - 1) / if q % 2 == 1 { 2 } else { 1 };
            assert_eq!(psl2(q).unwrap().order(), expected as u64, "q = {q}");
        }
        assert!(psl2(6).is_err());
        assert!(psl2(12).is_err());
        assert!(psl2(37).is_err());
        assert_eq!(symmetric(5).order(), 120);
        assert_eq!(alternating(5).order(), 60);
        assert_eq!(alternating(4).order(), 12);
        assert_eq!(cyclic(7).order(), 7);
    }

    #[test]
    fn field_axioms_small() {
        for q in [4usize, 8, 9, 16, 27, 32] {
            let f = GaloisField::new(q).unwrap();
            for a in 0..q {
                for b in 0..q {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in 0..q {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn cycler_product_orders() {
        let k = psl2(7).unwrap();
        let prod = product_with_cycler(&k, 3).unwrap();
        assert_eq!(prod.group.order(), 168u64.pow(3) * 3);
        assert_eq!(prod.base.order(), 168u64.pow(3));
        assert!(!prod.base.contains(&prod.cycler()));
        let triv = product_with_cycler(&PermGroup::trivial(1), 3).unwrap();
        assert_eq!(triv.group.order(), 3);
    }

    #[test]
    fn projection_support_cases() {
        let k = psl2(7).unwrap();
        let prod = product_with_cycler(&k, 3).unwrap();
        let first = prod.embed_group(&k, 0);
        assert_eq!(prod.projection_support(&first), Ok(1));
        let diag_gens: Vec<Permutation> = k.generators().iter().map(|g| prod.diagonal(g)).collect();
        let diag = PermGroup::from_generators(24, diag_gens).unwrap();
        assert_eq!(diag.order(), 168);
        assert_eq!(prod.projection_support(&diag), Ok(3));
        assert_eq!(prod.projection_support(&PermGroup::trivial(24)), Ok(0));
        let cyc = PermGroup::from_generators(24, vec![prod.cycler()]).unwrap();
        assert_eq!(prod.projection_support(&cyc), Err(GroupError::NotSubgroup));
    }

    #[test]
    fn octonion_group_has_order_1344() {
        let g = octonion_sign_automorphisms();
        assert_eq!(g.order(), 1344);
        assert_eq!(affine_general_linear_3_2().order(), 1344);
    }
}

//! Class multiplication coefficients from characters, with a brute-force oracle.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::chartab::{CharacterTable, ClassMatching, TableError};
use crate::exactnum::{Accumulator, Rational};
use crate::permgroup::{ClassList, GroupError, PermGroup, Permutation};

/// Pair tests allowed in one brute-force count.
pub const BRUTE_FORCE_LIMIT: u128 = 100_000_000;

fn big(n: u128) -> BigInt {
    BigInt::from(n)
}

/// Number of tuples `(g_1..g_k)` with `g_i` in class `classes[i]` and `g_1 ... g_k = 1`,
/// for single classes.
fn tuple_count(t: &CharacterTable, classes: &[usize]) -> Result<BigInt, TableError> {
    let k = classes.len();
    let (last, first) = classes.split_last().expect("k >= 2");
    let mut acc = Accumulator::new();
    for row in &t.irreducibles {
        let deg = row[0]
            .to_rational()
            .map_err(|_| TableError::Integrity("irrational degree".into()))?;
        if !deg.is_positive() {
            return Err(TableError::Integrity(format!("degree {deg}")));
        }
        // the last factor is conj(chi(z^-1)), equal to chi(z) for a genuine table
        let z = row[t.inverse[*last]].conjugate();
        let mut factors: Vec<&_> = first.iter().map(|&c| &row[c]).collect();
        factors.push(&z);
        let mut scale = Rational::one();
        for _ in 2..k {
            scale /= &deg;
        }
        acc.add_product(&factors, &scale);
    }
    let sum = acc
        .finish()
        .to_rational()
        .map_err(|e| TableError::Integrity(format!("character sum is not rational: {e}")))?;
    let sizes: BigInt = classes.iter().map(|&c| big(t.classes[c].size)).product();
    let count = sum * Rational::new(sizes, big(t.order));
    if !count.is_integer() || count.is_negative() {
        let label: Vec<&str> = classes
            .iter()
            .map(|&c| t.classes[c].label.as_str())
            .collect();
        return Err(TableError::Integrity(format!(
            "count for ({}) is {count}, not a nonnegative integer",
            label.join(",")
        )));
    }
    Ok(count.to_integer())
}

fn resolve_all(t: &CharacterTable, labels: &[&str]) -> Result<Vec<Vec<usize>>, TableError> {
    labels.iter().map(|l| t.resolve(l)).collect()
}

/// Sums `tuple_count` over all constituent combinations of union selectors.
fn sum_over_unions(t: &CharacterTable, sel: &[Vec<usize>]) -> Result<BigInt, TableError> {
    let mut total = BigInt::zero();
    let mut idx = vec![0usize; sel.len()];
    loop {
        let combo: Vec<usize> = idx.iter().zip(sel).map(|(&i, s)| s[i]).collect();
        total += tuple_count(t, &combo)?;
        let mut pos = 0;
        loop {
            if pos == sel.len() {
                return Ok(total);
            }
            idx[pos] += 1;
            if idx[pos] < sel[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// `|{(x,y,z) in C1 x C2 x C3 : xyz = 1}|`; union labels sum over their constituents.
pub fn frobenius_count(
    t: &CharacterTable,
    c1: &str,
    c2: &str,
    c3: &str,
) -> Result<BigInt, TableError> {
    multiway_count(t, &[c1, c2, c3])
}

/// `frobenius_count / |G|`.
pub fn normalized_constant(
    t: &CharacterTable,
    c1: &str,
    c2: &str,
    c3: &str,
) -> Result<Rational, TableError> {
    let count = frobenius_count(t, c1, c2, c3)?;
    Ok(Rational::new(count, big(t.order)))
}

/// The k-class generalization: tuples with product 1, `k >= 2`.
pub fn multiway_count(t: &CharacterTable, labels: &[&str]) -> Result<BigInt, TableError> {
    if labels.len() < 2 {
        return Err(TableError::Integrity("need at least two classes".into()));
    }
    sum_over_unions(t, &resolve_all(t, labels)?)
}

/// Single-class counts for every ordered triple of table classes, `counts[i][j][k]`.
pub fn all_frobenius_counts(t: &CharacterTable) -> Result<Vec<Vec<Vec<BigInt>>>, TableError> {
    let n = t.class_count();
    let flat: Vec<BigInt> = (0..n * n * n)
        .into_par_iter()
        .map(|x| tuple_count(t, &[x / (n * n), (x / n) % n, x % n]))
        .collect::<Result<_, _>>()?;
    Ok((0..n)
        .map(|i| {
            (0..n)
                .map(|j| flat[(i * n + j) * n..(i * n + j + 1) * n].to_vec())
                .collect()
        })
        .collect())
}

/// Counts `x in C1, z in C3` with `y = x^-1 z^-1` in `C2`, by direct multiplication.
pub fn brute_force_count(
    cl: &ClassList,
    c1: &[usize],
    c2: &[usize],
    c3: &[usize],
) -> Result<u64, GroupError> {
    let size = |s: &[usize]| s.iter().map(|&i| cl.classes[i].size as u128).sum::<u128>();
    if size(c1) * size(c3) > BRUTE_FORCE_LIMIT {
        return Err(GroupError::ResourceLimit(format!(
            "{} pair tests exceed {BRUTE_FORCE_LIMIT}",
            size(c1) * size(c3)
        )));
    }
    let zs: Vec<Permutation> = c3
        .iter()
        .flat_map(|&k| cl.members(k).iter().map(|z| z.inverse()))
        .collect();
    let xs: Vec<&Permutation> = c1.iter().flat_map(|&i| cl.members(i)).collect();
    Ok(xs
        .par_iter()
        .map(|x| {
            let xi = x.inverse();
            zs.iter()
                .filter(|zi| cl.class_of(&xi.mul(zi)).is_some_and(|c| c2.contains(&c)))
                .count() as u64
        })
        .sum())
}

/// Brute-force counts for all class triples in one pass: `counts[i][j][k]`.
pub fn all_brute_force_counts(
    g: &PermGroup,
    cl: &ClassList,
) -> Result<Vec<Vec<Vec<u64>>>, GroupError> {
    let order = g.order() as u128;
    if order * order > BRUTE_FORCE_LIMIT {
        return Err(GroupError::ResourceLimit(format!(
            "|G|^2 = {} pair tests",
            order * order
        )));
    }
    let n = cl.len();
    let rows: Vec<Vec<Vec<u64>>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut out = vec![vec![0u64; n]; n];
            for x in cl.members(i) {
                let xi = x.inverse();
                for k in 0..n {
                    for z in cl.members(k) {
                        let y = xi.mul(&z.inverse());
                        let j = cl.class_of(&y).expect("product lies in the group");
                        out[j][k] += 1;
                    }
                }
            }
            out
        })
        .collect();
    Ok(rows)
}

/// Outcome of comparing character-theoretic and brute-force counts on every triple.
#[derive(Clone, Debug)]
pub struct OracleEquivalence {
    pub triples: usize,
    /// A class matching under which every triple agrees.
    pub matching: Option<ClassMatching>,
    /// For the first candidate matching, the triples that disagreed.
    pub mismatches: Vec<(String, String, String, BigInt, u64)>,
}

/// Tries each candidate class matching until one makes every triple agree.
pub fn oracle_equivalence(
    t: &CharacterTable,
    g: &PermGroup,
    cl: &ClassList,
    candidates: &[ClassMatching],
) -> Result<OracleEquivalence, String> {
    let frob = all_frobenius_counts(t).map_err(|e| e.to_string())?;
    let brute = all_brute_force_counts(g, cl).map_err(|e| e.to_string())?;
    let n = t.class_count();
    let mut first_mismatches = None;
    for m in candidates {
        let mut bad = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let b = brute[m[i]][m[j]][m[k]];
                    if frob[i][j][k] != BigInt::from(b) {
                        bad.push((
                            t.classes[i].label.clone(),
                            t.classes[j].label.clone(),
                            t.classes[k].label.clone(),
                            frob[i][j][k].clone(),
                            b,
                        ));
                    }
                }
            }
        }
        if bad.is_empty() {
            return Ok(OracleEquivalence {
                triples: n * n * n,
                matching: Some(m.clone()),
                mismatches: Vec::new(),
            });
        }
        first_mismatches.get_or_insert(bad);
    }
    Ok(OracleEquivalence {
        triples: n * n * n,
        matching: None,
        mismatches: first_mismatches.unwrap_or_default(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chartab::{cross_check, parse_table};
    use crate::exactnum::rational;
    use crate::permgroup::{conjugacy_classes, psl2};

    const L27: &str = include_str!("../data/tables/l2_7.ctab");

    fn l27() -> CharacterTable {
        parse_table(L27).unwrap()
    }

    #[test]
    fn l2_7_constants() {
        let t = l27();
        assert_eq!(
            frobenius_count(&t, "2A", "3A", "7A").unwrap(),
            BigInt::from(168)
        );
        assert_eq!(
            frobenius_count(&t, "1A", "1A", "1A").unwrap(),
            BigInt::from(1)
        );
        assert_eq!(
            frobenius_count(&t, "2A", "2A", "1A").unwrap(),
            BigInt::from(21)
        );
        assert_eq!(
            normalized_constant(&t, "2A", "3A", "7A").unwrap(),
            rational(1, 1)
        );
        assert_eq!(
            normalized_constant(&t, "2A", "3A", "7AB").unwrap(),
            rational(2, 1)
        );
        assert_eq!(
            normalized_constant(&t, "1A", "1A", "1A").unwrap(),
            rational(1, 168)
        );
    }

    #[test]
    fn multiway_small_cases() {
        let t = l27();
        assert_eq!(
            multiway_count(&t, &["2A", "3A", "7A"]).unwrap(),
            BigInt::from(168)
        );
        assert_eq!(multiway_count(&t, &["7A", "7B"]).unwrap(), BigInt::from(24));
        assert_eq!(multiway_count(&t, &["7A", "7A"]).unwrap(), BigInt::from(0));
        assert_eq!(multiway_count(&t, &["3A", "3A"]).unwrap(), BigInt::from(56));
    }

    #[test]
    fn four_involutions_match_brute_force() {
        let t = l27();
        let g = psl2(7).unwrap();
        let cl = conjugacy_classes(&g).unwrap();
        let inv = cl.members(cl.by_label("2A").unwrap());
        let mut brute = 0u64;
        for a in inv {
            for b in inv {
                for c in inv {
                    // d = (abc)^-1 must be an involution
                    let d = a.mul(b).mul(c).inverse();
                    if d.order() == 2 {
                        brute += 1;
                    }
                }
            }
        }
        assert_eq!(
            multiway_count(&t, &["2A", "2A", "2A", "2A"]).unwrap(),
            BigInt::from(brute)
        );
    }

    #[test]
    fn brute_force_examples() {
        let g = psl2(7).unwrap();
        let cl = conjugacy_classes(&g).unwrap();
        let c = |l: &str| vec![cl.by_label(l).unwrap()];
        assert_eq!(
            brute_force_count(&cl, &c("2A"), &c("3A"), &c("7A")).unwrap(),
            168
        );
        assert_eq!(
            brute_force_count(&cl, &c("2A"), &c("2A"), &c("1A")).unwrap(),
            21
        );
    }

    #[test]
    fn oracle_equivalence_l2_7() {
        let t = l27();
        let g = psl2(7).unwrap();
        let cl = conjugacy_classes(&g).unwrap();
        let cc = cross_check(&t, &g, &cl);
        let eq = oracle_equivalence(&t, &g, &cl, &cc.matchings).unwrap();
        assert!(eq.matching.is_some(), "{:?}", eq.mismatches);
        assert_eq!(eq.triples, 216);
    }

    #[test]
    fn corrupted_table_is_an_integrity_error() {
        let mut t = l27();
        t.irreducibles[5][1] = crate::exactnum::Cyclotomic::from_integer(3);
        assert!(matches!(
            frobenius_count(&t, "2A", "2A", "2A"),
            Err(TableError::Integrity(_))
        ));
    }

    mod props {
        use proptest::prelude::*;

        use super::*;

        const TABLES: [&str; 5] = [
            include_str!("../data/tables/l2_7.ctab"),
            include_str!("../data/tables/l2_8.ctab"),
            include_str!("../data/tables/a4.ctab"),
            include_str!("../data/tables/a5.ctab"),
            include_str!("../data/tables/3d4_2.ctab"),
        ];

        fn pick(t: usize, a: usize, b: usize, c: usize) -> (CharacterTable, [String; 3]) {
            let table = parse_table(TABLES[t]).unwrap();
            let n = table.class_count();
            let l = |i: usize| table.classes[i % n].label.clone();
            let labels = [l(a), l(b), l(c)];
            (table, labels)
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn cyclic_symmetry(t in 0..5usize, a in 0..64usize, b in 0..64usize, c in 0..64usize) {
                let (table, [x, y, z]) = pick(t, a, b, c);
                let v = frobenius_count(&table, &x, &y, &z).unwrap();
                prop_assert_eq!(&v, &frobenius_count(&table, &y, &z, &x).unwrap());
                prop_assert_eq!(&v, &frobenius_count(&table, &z, &x, &y).unwrap());
                prop_assert!(v >= BigInt::zero());
            }

            #[test]
            fn inversion_symmetry(t in 0..5usize, a in 0..64usize, b in 0..64usize, c in 0..64usize) {
                let (table, [x, y, z]) = pick(t, a, b, c);
                let inv = |l: &str| table.classes[table.inverse[table.index_of(l).unwrap()]].label.clone();
                prop_assert_eq!(
                    frobenius_count(&table, &x, &y, &z).unwrap(),
                    frobenius_count(&table, &inv(&z), &inv(&y), &inv(&x)).unwrap()
                );
            }

            #[test]
            fn union_additivity(t in 0..5usize, a in 0..64usize, b in 0..64usize) {
                let (table, [x, y, _]) = pick(t, a, b, 0);
                for (alias, cls) in table.unions.clone() {
                    let parts: BigInt = cls
                        .iter()
                        .map(|&c| frobenius_count(&table, &x, &y, &table.classes[c].label).unwrap())
                        .sum();
                    prop_assert_eq!(frobenius_count(&table, &x, &y, &alias).unwrap(), parts);
                }
            }

            #[test]
            fn two_class_counts_force_inverses(t in 0..5usize, a in 0..64usize, b in 0..64usize) {
                let (table, [x, y, _]) = pick(t, a, b, 0);
                let (i, j) = (table.index_of(&x).unwrap(), table.index_of(&y).unwrap());
                let expected = if table.inverse[i] == j { table.classes[i].size } else { 0 };
                prop_assert_eq!(multiway_count(&table, &[&x, &y]).unwrap(), BigInt::from(expected));
            }
        }
    }
}

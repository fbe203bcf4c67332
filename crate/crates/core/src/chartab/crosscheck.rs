use std::collections::{BTreeMap, BTreeSet};

use super::CharacterTable;
use crate::permgroup::{ClassList, PermGroup};
use crate::report::Report;

/// Enumeration of consistent matchings stops here.
const MATCHING_CAP: usize = 100_000;

/// `map[i]` is the group class matched with table class `i`.
pub type ClassMatching = Vec<usize>;

#[derive(Clone, Debug)]
pub struct CrossCheck {
    pub report: Report,
    /// Every bijection respecting element orders, class sizes and power maps.
    pub matchings: Vec<ClassMatching>,
    /// Table classes whose image differs between matchings.
    pub ambiguous: Vec<String>,
}

impl CrossCheck {
    pub fn consistent(&self) -> bool {
        self.report.passed()
    }
}

/// Compares table class data against the computed classes of a realization.
pub fn cross_check(t: &CharacterTable, g: &PermGroup, cl: &ClassList) -> CrossCheck {
    let mut report = Report::new();
    let order_ok = t.order == g.order() as u128;
    report.push(
        "group order",
        order_ok,
        format!("table {}, group {}", t.order, g.order()),
    );
    let count_ok = t.class_count() == cl.len();
    report.push(
        "class count",
        count_ok,
        format!("table {}, group {}", t.class_count(), cl.len()),
    );
    let profile_t: BTreeMap<(u64, u128), usize> =
        t.classes.iter().fold(BTreeMap::new(), |mut m, c| {
            *m.entry((c.order, c.size)).or_insert(0) += 1;
            m
        });
    let profile_g: BTreeMap<(u64, u128), usize> =
        cl.classes.iter().fold(BTreeMap::new(), |mut m, c| {
            *m.entry((c.element_order, c.size as u128)).or_insert(0) += 1;
            m
        });
    let sizes_ok = profile_t == profile_g;
    report.push(
        "element orders and class sizes",
        sizes_ok,
        if sizes_ok {
            String::new()
        } else {
            "multisets of (order, size) differ".to_string()
        },
    );
    if !(order_ok && count_ok && sizes_ok) {
        return CrossCheck {
            report,
            matchings: Vec::new(),
            ambiguous: Vec::new(),
        };
    }

    let matchings = consistent_matchings(t, cl);
    let ok = !matchings.is_empty();
    report.push(
        "power maps",
        ok,
        if ok {
            format!("{} consistent class matching(s)", matchings.len())
        } else {
            "no class matching respects the power maps".to_string()
        },
    );
    let ambiguous: Vec<String> = (0..t.class_count())
        .filter(|&i| {
            matchings
                .iter()
                .map(|m| m[i])
                .collect::<BTreeSet<_>>()
                .len()
                > 1
        })
        .map(|i| t.classes[i].label.clone())
        .collect();
    if ok && !ambiguous.is_empty() {
        report.pass("matched up to table automorphism", ambiguous.join(" "));
    }
    CrossCheck {
        report,
        matchings,
        ambiguous,
    }
}

fn consistent_matchings(t: &CharacterTable, cl: &ClassList) -> Vec<ClassMatching> {
    let n = t.class_count();
    let candidates: Vec<Vec<usize>> = t
        .classes
        .iter()
        .map(|c| {
            (0..cl.len())
                .filter(|&j| {
                    cl.classes[j].element_order == c.order && cl.classes[j].size as u128 == c.size
                })
                .collect()
        })
        .collect();
    let primes: Vec<u64> = t
        .power_maps
        .keys()
        .copied()
        .filter(|p| cl.classes.iter().any(|c| c.power_classes.contains_key(p)))
        .collect();
    let mut out = Vec::new();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; cl.len()];
    search(
        t,
        cl,
        &candidates,
        &primes,
        0,
        &mut map,
        &mut used,
        &mut out,
    );
    out
}

#[allow(clippy::too_many_arguments)]
fn search(
    t: &CharacterTable,
    cl: &ClassList,
    candidates: &[Vec<usize>],
    primes: &[u64],
    i: usize,
    map: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Vec<ClassMatching>,
) {
    if out.len() >= MATCHING_CAP {
        return;
    }
    if i == map.len() {
        out.push(map.clone());
        return;
    }
    for &j in &candidates[i] {
        if used[j] {
            continue;
        }
        map[i] = j;
        if coherent(t, cl, primes, map, i) {
            used[j] = true;
            search(t, cl, candidates, primes, i + 1, map, used, out);
            used[j] = false;
        }
        map[i] = usize::MAX;
    }
}

/// Power maps and inverses agree on every pair of assigned classes touching `i`.
fn coherent(t: &CharacterTable, cl: &ClassList, primes: &[u64], map: &[usize], i: usize) -> bool {
    let assigned = |k: usize| map[k] != usize::MAX;
    let agree = |a: usize| -> bool {
        for &p in primes {
            let ta = t.power_maps[&p][a];
            let ga = cl.classes[map[a]].power_classes.get(&p);
            if assigned(ta) && ga.is_some_and(|&x| x != map[ta]) {
                return false;
            }
        }
        let ti = t.inverse[a];
        !(assigned(ti) && cl.classes[map[a]].inverse_class != map[ti])
    };
    (0..=i).filter(|&a| assigned(a)).all(agree)
}

#[cfg(test)]
mod tests {
    use super::super::parse_table;
    use super::*;
    use crate::permgroup::{conjugacy_classes, psl2};

    const L27: &str = include_str!("../../data/tables/l2_7.ctab");
    const L28: &str = include_str!("../../data/tables/l2_8.ctab");

    #[test]
    fn l2_7_against_psl2_7() {
        let t = parse_table(L27).unwrap();
        let g = psl2(7).unwrap();
        let cl = conjugacy_classes(&g).unwrap();
        let cc = cross_check(&t, &g, &cl);
        assert!(cc.consistent(), "{}", cc.report);
        assert_eq!(cc.matchings.len(), 2);
        assert_eq!(cc.ambiguous, ["7A", "7B"]);
    }

    #[test]
    fn l2_7_against_psl2_8_fails_on_order() {
        let t = parse_table(L27).unwrap();
        let g = psl2(8).unwrap();
        let cl = conjugacy_classes(&g).unwrap();
        let cc = cross_check(&t, &g, &cl);
        assert!(!cc.consistent());
        assert!(!cc.report.get("group order").unwrap().passed);
    }

    #[test]
    fn l2_8_matchings() {
        let t = parse_table(L28).unwrap();
        let g = psl2(8).unwrap();
        let cl = conjugacy_classes(&g).unwrap();
        let cc = cross_check(&t, &g, &cl);
        assert!(cc.consistent(), "{}", cc.report);
        assert_eq!(cc.ambiguous, ["7A", "7B", "7C", "9A", "9B", "9C"]);
    }

    #[test]
    fn trivial_table_and_group() {
        let t =
            parse_table("%table 1\n%order 1\n%classes 1A\n%sizes 1\n%orders 1\n%chi 1\n").unwrap();
        let g = PermGroup::trivial(1);
        let cl = conjugacy_classes(&g).unwrap();
        assert!(cross_check(&t, &g, &cl).consistent());
    }
}

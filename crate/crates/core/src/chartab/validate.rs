use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::CharacterTable;
use crate::exactnum::{lcm, Accumulator, Cyclotomic, IntegralCyclotomic, IntegralSum, Rational};
use crate::report::Report;

const MAX_LISTED: usize = 5;

fn big(n: u128) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Checks every table invariant exactly; failures carry the discrepancy.
pub fn validate(t: &CharacterTable) -> Report {
    let mut r = Report::new();
    let n = t.class_count();
    let g = t.order;

    let total: u128 = t.classes.iter().map(|c| c.size).sum();
    r.push(
        "class sizes sum to group order",
        total == g,
        if total == g {
            String::new()
        } else {
            format!(
                "sum {total}, order {g}, discrepancy {}",
                total as i128 - g as i128
            )
        },
    );
    let bad: Vec<&str> = t
        .classes
        .iter()
        .filter(|c| c.size == 0 || !g.is_multiple_of(c.size))
        .map(|c| c.label.as_str())
        .collect();
    r.push(
        "class sizes divide group order",
        bad.is_empty(),
        bad.join(" "),
    );
    let id_ok = t.classes[0].order == 1 && t.classes[0].size == 1;
    r.push(
        "identity class first",
        id_ok,
        if id_ok { "" } else { "first class is not 1A" },
    );
    let rows_ok = t.irreducibles.len() == n;
    r.push(
        "one irreducible per class",
        rows_ok,
        format!("{} characters, {n} classes", t.irreducibles.len()),
    );
    if !rows_ok || n == 0 {
        return r;
    }

    let degrees: Vec<Option<BigInt>> = t
        .irreducibles
        .iter()
        .map(|row| {
            row[0]
                .to_rational()
                .ok()
                .filter(|q| q.is_integer() && q.is_positive())
                .map(|q| q.to_integer())
        })
        .collect();
    let bad: Vec<String> = (0..n)
        .filter(|&i| degrees[i].is_none())
        .map(|i| format!("chi{} = {}", i + 1, t.irreducibles[i][0]))
        .collect();
    r.push(
        "degrees are positive integers",
        bad.is_empty(),
        bad.join(", "),
    );
    if bad.is_empty() {
        let sq: BigInt = degrees.iter().flatten().map(|d| d * d).sum();
        let ok = sq == BigInt::from(g);
        r.push(
            "degree squares sum to group order",
            ok,
            if ok {
                String::new()
            } else {
                format!("discrepancy {}", sq - BigInt::from(g))
            },
        );
    }

    power_map_checks(t, &mut r);

    let conj: Vec<Vec<Cyclotomic>> = t
        .irreducibles
        .iter()
        .map(|row| row.iter().map(|v| v.conjugate()).collect())
        .collect();
    let inv_bad: Vec<&str> = (0..n)
        .filter(|&c| {
            let d = t.inverse[c];
            t.inverse[d] != c || (0..n).any(|i| t.irreducibles[i][d] != conj[i][c])
        })
        .map(|c| t.classes[c].label.as_str())
        .collect();
    r.push(
        "inverse classes carry conjugate values",
        inv_bad.is_empty(),
        inv_bad.join(" "),
    );

    let orth = Orthogonality::new(t, &conj);
    let row_fail = orth.rows();
    r.push(
        "row orthogonality",
        row_fail.is_empty(),
        describe(&row_fail),
    );
    let col_fail = orth.columns();
    r.push(
        "column orthogonality",
        col_fail.is_empty(),
        describe(&col_fail),
    );
    r
}

fn describe(fails: &[(String, Cyclotomic)]) -> String {
    let mut parts: Vec<String> = fails
        .iter()
        .take(MAX_LISTED)
        .map(|(what, d)| format!("{what} discrepancy {d}"))
        .collect();
    if fails.len() > MAX_LISTED {
        parts.push(format!("{} more", fails.len() - MAX_LISTED));
    }
    parts.join("; ")
}

fn power_map_checks(t: &CharacterTable, r: &mut Report) {
    let n = t.class_count();
    let mut order_bad = Vec::new();
    let mut galois_bad = Vec::new();
    for (&p, map) in &t.power_maps {
        for c in 0..n {
            let o = t.classes[c].order;
            let img = map[c];
            if t.classes[img].order != o / o.gcd(&p) {
                order_bad.push(format!(
                    "{}^{p} = {}",
                    t.classes[c].label, t.classes[img].label
                ));
            }
            if !o.is_multiple_of(p)
                && t.irreducibles
                    .iter()
                    .any(|row| row[img] != row[c].galois(p as i64))
            {
                galois_bad.push(format!("{}^{p}", t.classes[c].label));
            }
        }
    }
    r.push(
        "power maps preserve element orders",
        order_bad.is_empty(),
        order_bad.join(", "),
    );
    r.push(
        "power maps agree with the Galois action",
        galois_bad.is_empty(),
        galois_bad.join(", "),
    );
}

/// Orthogonality sums with an `i128` fast path for integral tables.
struct Orthogonality<'a> {
    t: &'a CharacterTable,
    vals: &'a [Vec<Cyclotomic>],
    conj: &'a [Vec<Cyclotomic>],
    ivals: Option<Vec<Vec<IntegralCyclotomic>>>,
    iconj: Option<Vec<Vec<IntegralCyclotomic>>>,
    col_conductor: Vec<u32>,
}

impl<'a> Orthogonality<'a> {
    fn new(t: &'a CharacterTable, conj: &'a [Vec<Cyclotomic>]) -> Self {
        let integral = |m: &[Vec<Cyclotomic>]| {
            m.iter()
                .map(|row| {
                    row.iter()
                        .map(|v| v.to_integral())
                        .collect::<Option<Vec<_>>>()
                })
                .collect::<Option<Vec<_>>>()
        };
        let col_conductor = (0..t.class_count())
            .map(|c| {
                t.irreducibles
                    .iter()
                    .fold(1, |acc, row| lcm(acc, row[c].conductor()))
            })
            .collect();
        Orthogonality {
            t,
            vals: &t.irreducibles,
            conj,
            ivals: integral(&t.irreducibles),
            iconj: integral(conj),
            col_conductor,
        }
    }

    /// `sum_c scale_c * a[c] * b[c]` over the listed columns, all inside `Q(E(n))`.
    /// `terms` are `(row of a, row of b, column, scale)`.
    fn sum(&self, terms: &[(usize, usize, usize, u128)], n: u32) -> Cyclotomic {
        if let (Some(iv), Some(ic)) = (&self.ivals, &self.iconj) {
            let mut s = IntegralSum::new(n);
            let mut fits = true;
            for &(i, j, c, scale) in terms {
                match i128::try_from(scale) {
                    Ok(k) => s.add_product(&iv[i][c], &ic[j][c], k),
                    Err(_) => fits = false,
                }
            }
            if let Some(v) = s.finish().filter(|_| fits) {
                return v;
            }
        }
        let mut acc = Accumulator::new();
        for &(i, j, c, scale) in terms {
            acc.add_product(&[&self.vals[i][c], &self.conj[j][c]], &big(scale));
        }
        acc.finish()
    }

    /// Pairs of rows with nonzero discrepancy.
    fn rows(&self) -> Vec<(String, Cyclotomic)> {
        let t = self.t;
        let n = t.class_count();
        // columns of one element order form a Galois-stable set, so each partial sum is rational
        let mut buckets: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
        for c in 0..n {
            buckets.entry(t.classes[c].order).or_default().push(c);
        }
        let buckets: Vec<(u32, Vec<usize>)> = buckets
            .into_values()
            .map(|cols| {
                (
                    cols.iter()
                        .fold(1, |acc, &c| lcm(acc, self.col_conductor[c])),
                    cols,
                )
            })
            .collect();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        let mut fails: Vec<(usize, usize, Cyclotomic)> = pairs
            .par_iter()
            .filter_map(|&(i, j)| {
                let mut total = Rational::zero();
                let mut irrational = Cyclotomic::zero();
                for (cond, cols) in &buckets {
                    let terms: Vec<_> =
                        cols.iter().map(|&c| (i, j, c, t.classes[c].size)).collect();
                    let part = self.sum(&terms, *cond);
                    match part.to_rational() {
                        Ok(q) => total += q,
                        Err(_) => irrational = &irrational + &part,
                    }
                }
                let expected = if i == j {
                    big(t.order)
                } else {
                    Rational::zero()
                };
                let disc = &irrational + &Cyclotomic::from_rational(total - expected);
                (!disc.is_zero()).then_some((i, j, disc))
            })
            .collect();
        fails.sort_by_key(|(i, j, _)| (*i, *j));
        fails
            .into_iter()
            .map(|(i, j, d)| (format!("<chi{}, chi{}>", i + 1, j + 1), d))
            .collect()
    }

    /// Pairs of columns with nonzero discrepancy.
    fn columns(&self) -> Vec<(String, Cyclotomic)> {
        let t = self.t;
        let n = t.class_count();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|c| (c..n).map(move |d| (c, d))).collect();
        let mut fails: Vec<(usize, usize, Cyclotomic)> = pairs
            .par_iter()
            .filter_map(|&(c, d)| {
                let cond = lcm(self.col_conductor[c], self.col_conductor[d]);
                let value = if let (Some(iv), Some(ic)) = (&self.ivals, &self.iconj) {
                    let mut s = IntegralSum::new(cond);
                    for i in 0..n {
                        s.add_product(&iv[i][c], &ic[i][d], 1);
                    }
                    s.finish()
                } else {
                    None
                };
                let value = value.unwrap_or_else(|| {
                    let mut acc = Accumulator::new();
                    for i in 0..n {
                        acc.add_product(&[&self.vals[i][c], &self.conj[i][d]], &Rational::one());
                    }
                    acc.finish()
                });
                let expected = if c == d {
                    Rational::new(
                        BigInt::from(t.order),
                        BigInt::from(t.classes[c].size.max(1)),
                    )
                } else {
                    Rational::zero()
                };
                let disc = &value - &Cyclotomic::from_rational(expected);
                (!disc.is_zero()).then_some((c, d, disc))
            })
            .collect();
        fails.sort_by_key(|(c, d, _)| (*c, *d));
        fails
            .into_iter()
            .map(|(c, d, v)| {
                (
                    format!("columns {}, {}", t.classes[c].label, t.classes[d].label),
                    v,
                )
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_table;
    use super::*;
    use crate::exactnum::parse_cyclotomic;

    const L27: &str = include_str!("../../data/tables/l2_7.ctab");

    #[test]
    fn bundled_l2_7_passes() {
        let r = validate(&parse_table(L27).unwrap());
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn negated_entry_breaks_row_orthogonality() {
        let mut t = parse_table(L27).unwrap();
        t.irreducibles[3][1] = -&t.irreducibles[3][1];
        let r = validate(&t);
        let row = r.get("row orthogonality").unwrap();
        assert!(!row.passed);
        assert!(row.detail.contains("discrepancy"), "{}", row.detail);
        assert!(!r.get("column orthogonality").unwrap().passed);
    }

    #[test]
    fn trivial_table_passes() {
        let t =
            parse_table("%table 1\n%order 1\n%classes 1A\n%sizes 1\n%orders 1\n%chi 1\n").unwrap();
        assert!(validate(&t).passed());
    }

    #[test]
    fn irrational_corruption_is_reported() {
        let mut t = parse_table(L27).unwrap();
        t.irreducibles[1][4] = parse_cyclotomic("E(7)").unwrap();
        let r = validate(&t);
        assert!(!r.passed());
        assert!(
            !r.get("inverse classes carry conjugate values")
                .unwrap()
                .passed
        );
    }
}

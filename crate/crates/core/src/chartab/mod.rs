//! Character tables: the `.ctab` format, exact validation, and comparison with a
//! permutation-group realization.

mod crosscheck;
mod validate;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::exactnum::{parse_cyclotomic, Cyclotomic};

pub use crosscheck::{cross_check, ClassMatching, CrossCheck};
pub use validate::validate;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TableError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unknown class label {0:?}")]
    UnknownLabel(String),
    #[error("table integrity error: {0}")]
    Integrity(String),
}

fn syntax(line: usize, message: impl Into<String>) -> TableError {
    TableError::Syntax {
        line,
        message: message.into(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassInfo {
    pub label: String,
    pub order: u64,
    pub size: u128,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterTable {
    pub name: String,
    pub order: u128,
    pub classes: Vec<ClassInfo>,
    /// For each prime `p`, the class of the `p`-th power of each class.
    pub power_maps: BTreeMap<u64, Vec<usize>>,
    pub inverse: Vec<usize>,
    inverse_explicit: bool,
    pub unions: Vec<(String, Vec<usize>)>,
    /// One row per irreducible character.
    pub irreducibles: Vec<Vec<Cyclotomic>>,
}

impl CharacterTable {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.classes.iter().map(|c| c.label.as_str())
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.label == label)
    }

    /// Resolves a class label or union alias to its constituent classes.
    ///
    /// Besides declared aliases, `<order><letters>` such as `7AB` resolves to the
    /// classes `7A`, `7B` when those exist.
    pub fn resolve(&self, label: &str) -> Result<Vec<usize>, TableError> {
        if let Some(i) = self.index_of(label) {
            return Ok(vec![i]);
        }
        if let Some((_, cls)) = self.unions.iter().find(|(a, _)| a == label) {
            return Ok(cls.clone());
        }
        expand_union_label(label)
            .ok_or_else(|| TableError::UnknownLabel(label.into()))?
            .iter()
            .map(|l| {
                self.index_of(l)
                    .ok_or_else(|| TableError::UnknownLabel(label.into()))
            })
            .collect()
    }

    pub fn degree(&self, chi: usize) -> &Cyclotomic {
        &self.irreducibles[chi][0]
    }

    pub fn parse(text: &str) -> Result<Self, TableError> {
        parse_table(text)
    }

    /// Canonical text form; `parse` of it reproduces the table exactly.
    pub fn to_ctab(&self) -> String {
        let mut out = String::new();
        let labels: Vec<&str> = self.labels().collect();
        let name_of = |v: &[usize]| v.iter().map(|&i| labels[i]).collect::<Vec<_>>().join(" ");
        let _ = writeln!(out, "%table {}", self.name);
        let _ = writeln!(out, "%order {}", self.order);
        let _ = writeln!(out, "%classes {}", labels.join(" "));
        let sizes: Vec<String> = self.classes.iter().map(|c| c.size.to_string()).collect();
        let _ = writeln!(out, "%sizes {}", sizes.join(" "));
        let orders: Vec<String> = self.classes.iter().map(|c| c.order.to_string()).collect();
        let _ = writeln!(out, "%orders {}", orders.join(" "));
        for (p, map) in &self.power_maps {
            let _ = writeln!(out, "%power {p}: {}", name_of(map));
        }
        if self.inverse_explicit {
            let _ = writeln!(out, "%inverse {}", name_of(&self.inverse));
        }
        for (alias, cls) in &self.unions {
            let _ = writeln!(out, "%union {alias} = {}", name_of(cls));
        }
        for row in &self.irreducibles {
            let vals: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "%chi {}", vals.join(" "));
        }
        out
    }
}

/// Splits `<order><letters>` with two or more letters, e.g. `7AB` into `7A`, `7B`.
pub fn expand_union_label(label: &str) -> Option<Vec<String>> {
    let split = label
        .find(|c: char| !c.is_ascii_digit())
        .filter(|&i| i > 0)?;
    let (num, letters) = label.split_at(split);
    if letters.len() < 2 || !letters.chars().all(|c| c.is_ascii_uppercase()) {
        return None;
    }
    Some(letters.chars().map(|c| format!("{num}{c}")).collect())
}

/// Whether class `label` is selected by `selector`, a class label or union like `7AB`.
pub fn selects(selector: &str, label: &str) -> bool {
    selector == label || expand_union_label(selector).is_some_and(|v| v.iter().any(|l| l == label))
}

pub fn parse_table(text: &str) -> Result<CharacterTable, TableError> {
    let mut name = None;
    let mut order: Option<u128> = None;
    let mut labels: Option<(usize, Vec<String>)> = None;
    let mut sizes: Option<(usize, Vec<u128>)> = None;
    let mut orders: Option<(usize, Vec<u64>)> = None;
    let mut powers: Vec<(usize, u64, Vec<String>)> = Vec::new();
    let mut inverse: Option<(usize, Vec<String>)> = None;
    let mut unions: Vec<(usize, String, Vec<String>)> = Vec::new();
    let mut chis: Vec<(usize, Vec<Cyclotomic>)> = Vec::new();

    fn ints<T: std::str::FromStr>(line: usize, toks: &[&str]) -> Result<Vec<T>, TableError> {
        toks.iter()
            .map(|t| {
                t.parse::<T>()
                    .map_err(|_| syntax(line, format!("bad integer {t:?}")))
            })
            .collect()
    }

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let (head, rest) = (toks[0], &toks[1..]);
        let once = |present: bool| {
            if present {
                Err(syntax(lineno, format!("duplicate {head} line")))
            } else {
                Ok(())
            }
        };
        match head {
            "%table" => {
                once(name.is_some())?;
                if rest.is_empty() {
                    return Err(syntax(lineno, "missing table name"));
                }
                name = Some(rest.join(" "));
            }
            "%order" => {
                once(order.is_some())?;
                let v = ints::<u128>(lineno, rest)?;
                if v.len() != 1 || v[0] == 0 {
                    return Err(syntax(lineno, "expected one positive integer"));
                }
                order = Some(v[0]);
            }
            "%classes" => {
                once(labels.is_some())?;
                labels = Some((lineno, rest.iter().map(|s| s.to_string()).collect()));
            }
            "%sizes" => {
                once(sizes.is_some())?;
                sizes = Some((lineno, ints(lineno, rest)?));
            }
            "%orders" => {
                once(orders.is_some())?;
                orders = Some((lineno, ints(lineno, rest)?));
            }
            "%power" => {
                let p = rest
                    .first()
                    .and_then(|t| t.strip_suffix(':'))
                    .and_then(|t| t.parse::<u64>().ok())
                    .ok_or_else(|| syntax(lineno, "expected '%power <p>: <labels...>'"))?;
                powers.push((lineno, p, rest[1..].iter().map(|s| s.to_string()).collect()));
            }
            "%inverse" => {
                once(inverse.is_some())?;
                inverse = Some((lineno, rest.iter().map(|s| s.to_string()).collect()));
            }
            "%union" => {
                if rest.len() < 3 || rest[1] != "=" {
                    return Err(syntax(lineno, "expected '%union <alias> = <labels...>'"));
                }
                unions.push((
                    lineno,
                    rest[0].to_string(),
                    rest[2..].iter().map(|s| s.to_string()).collect(),
                ));
            }
            "%chi" => {
                let row = rest
                    .iter()
                    .map(|t| {
                        parse_cyclotomic(t).map_err(|e| syntax(lineno, format!("entry {t:?}: {e}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                chis.push((lineno, row));
            }
            other => return Err(syntax(lineno, format!("unknown directive {other:?}"))),
        }
    }

    let name = name.ok_or_else(|| syntax(0, "missing %table line"))?;
    let order = order.ok_or_else(|| syntax(0, "missing %order line"))?;
    let (_, labels) = labels.ok_or_else(|| syntax(0, "missing %classes line"))?;
    let (sl, sizes) = sizes.ok_or_else(|| syntax(0, "missing %sizes line"))?;
    let (ol, orders) = orders.ok_or_else(|| syntax(0, "missing %orders line"))?;
    let n = labels.len();
    if n == 0 {
        return Err(syntax(0, "empty %classes line"));
    }
    for (line, len, what) in [(sl, sizes.len(), "%sizes"), (ol, orders.len(), "%orders")] {
        if len != n {
            return Err(syntax(
                line,
                format!("{what} has {len} entries, expected {n}"),
            ));
        }
    }
    let mut by_label: BTreeMap<String, usize> = BTreeMap::new();
    for (i, l) in labels.iter().enumerate() {
        if by_label.insert(l.clone(), i).is_some() {
            return Err(syntax(0, format!("duplicate class label {l}")));
        }
    }
    let lookup = |line: usize, ls: &[String]| -> Result<Vec<usize>, TableError> {
        ls.iter()
            .map(|l| {
                by_label
                    .get(l.as_str())
                    .copied()
                    .ok_or_else(|| syntax(line, format!("unknown class label {l:?}")))
            })
            .collect()
    };
    let mut power_maps = BTreeMap::new();
    for (line, p, ls) in &powers {
        if ls.len() != n {
            return Err(syntax(
                *line,
                format!("power map has {} entries, expected {n}", ls.len()),
            ));
        }
        if power_maps.insert(*p, lookup(*line, ls)?).is_some() {
            return Err(syntax(*line, format!("duplicate power map for {p}")));
        }
    }
    let mut union_list = Vec::new();
    for (line, alias, ls) in &unions {
        if by_label.contains_key(alias) {
            return Err(syntax(
                *line,
                format!("alias {alias} shadows a class label"),
            ));
        }
        union_list.push((alias.clone(), lookup(*line, ls)?));
    }
    let mut irreducibles = Vec::with_capacity(chis.len());
    for (line, row) in chis {
        if row.len() != n {
            return Err(syntax(
                line,
                format!("%chi row has {} entries, expected {n}", row.len()),
            ));
        }
        irreducibles.push(row);
    }
    let classes: Vec<ClassInfo> = labels
        .into_iter()
        .zip(sizes)
        .zip(orders)
        .map(|((label, size), order)| ClassInfo { label, order, size })
        .collect();
    let mut table = CharacterTable {
        name,
        order,
        classes,
        power_maps,
        inverse: Vec::new(),
        inverse_explicit: inverse.is_some(),
        unions: union_list,
        irreducibles,
    };
    table.inverse = match inverse {
        Some((line, ls)) => {
            if ls.len() != n {
                return Err(syntax(
                    line,
                    format!("%inverse has {} entries, expected {n}", ls.len()),
                ));
            }
            lookup(line, &ls)?
        }
        None => derive_inverse(&table)?,
    };
    Ok(table)
}

/// Class of `g^(o-1)` via power maps when they suffice, else the column of complex conjugates.
fn derive_inverse(t: &CharacterTable) -> Result<Vec<usize>, TableError> {
    (0..t.class_count())
        .map(|c| {
            let o = t.classes[c].order;
            if o <= 2 {
                return Ok(c);
            }
            if let Some(i) = power_by_maps(t, c, o - 1) {
                return Ok(i);
            }
            let conj: Vec<Cyclotomic> = t.irreducibles.iter().map(|r| r[c].conjugate()).collect();
            (0..t.class_count())
                .find(|&d| t.irreducibles.iter().zip(&conj).all(|(r, v)| &r[d] == v))
                .ok_or_else(|| {
                    TableError::Integrity(format!("no inverse class for {}", t.classes[c].label))
                })
        })
        .collect()
}

/// Class of the `k`-th power of class `c`, composing prime power maps.
pub fn power_by_maps(t: &CharacterTable, c: usize, k: u64) -> Option<usize> {
    let mut cls = c;
    let mut k = k;
    let mut p = 2;
    while k > 1 {
        if k.is_multiple_of(p) {
            cls = t.power_maps.get(&p)?[cls];
            k /= p;
        } else {
            p += 1;
        }
    }
    Some(cls)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const L27: &str = include_str!("../../data/tables/l2_7.ctab");

    #[test]
    fn parses_bundled_l2_7() {
        let t = parse_table(L27).unwrap();
        assert_eq!(t.class_count(), 6);
        let degrees: Vec<String> = t.irreducibles.iter().map(|r| r[0].to_string()).collect();
        assert_eq!(degrees, ["1", "3", "3", "6", "7", "8"]);
        assert_eq!(t.resolve("7AB").unwrap(), vec![4, 5]);
        assert_eq!(t.inverse, vec![0, 1, 2, 3, 5, 4]);
        assert!(t.resolve("7C").is_err());
        assert!(t.resolve("5A").is_err());
    }

    #[test]
    fn print_parse_round_trip() {
        let t = parse_table(L27).unwrap();
        let printed = t.to_ctab();
        let again = parse_table(&printed).unwrap();
        assert_eq!(again, t);
        assert_eq!(again.to_ctab(), printed);
    }

    #[test]
    fn trivial_table() {
        let t =
            parse_table("%table 1\n%order 1\n%classes 1A\n%sizes 1\n%orders 1\n%chi 1\n").unwrap();
        assert_eq!(t.irreducibles.len(), 1);
        assert_eq!(t.inverse, vec![0]);
    }

    #[test]
    fn errors_name_the_line() {
        let bad = L27.replace("%sizes 1 21 56 42 24 24", "%sizes 1 21 56 42 24");
        assert!(matches!(parse_table(&bad), Err(TableError::Syntax { .. })));
        let bad = L27.replace("%chi 6 2 0 0 -1 -1", "%chi 6 2 0 0 -1");
        match parse_table(&bad) {
            Err(TableError::Syntax { line, .. }) => {
                assert_eq!(L27.lines().nth(line - 1).unwrap(), "%chi 6 2 0 0 -1 -1")
            }
            other => panic!("{other:?}"),
        }
        let bad = L27.replace("%chi 6 2 0 0 -1 -1", "%chi 6 2 0 0 -1 E(7");
        assert!(matches!(parse_table(&bad), Err(TableError::Syntax { .. })));
        let bad = L27.replace("%order 168", "%order x");
        assert!(matches!(
            parse_table(&bad),
            Err(TableError::Syntax { line: 3, .. })
        ));
    }
}

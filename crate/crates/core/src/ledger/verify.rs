use std::collections::BTreeSet;
use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::{structure_order, AppendixRow, FusionTable, Ledger, LedgerEntry, LedgerError};
use crate::chartab::{expand_union_label, parse_table, power_by_maps, selects, CharacterTable};
use crate::exactnum::{format_rational, Rational};
use crate::hurwitz::{hurwitz_triples, TripleType};
use crate::permgroup::{
    conjugacy_classes, identify_group, parse_grp, ClassList, PermGroup, CATALOGUE, EXHAUSTIVE_LIMIT,
};
use crate::report::Report;
use crate::structconst::normalized_constant;

fn big(n: u128) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn expand(label: &str) -> Vec<String> {
    expand_union_label(label).unwrap_or_else(|| vec![label.to_string()])
}

/// Exact check of `sum (multiplicity * contribution) = target` for every entry.
pub fn verify_sums(entries: &[LedgerEntry]) -> Report {
    let mut r = Report::new();
    for e in entries {
        let mut sum = Rational::zero();
        let mut terms = Vec::new();
        for row in &e.rows {
            sum += &row.contribution * big(row.multiplicity as u128);
            let c = format_rational(&row.contribution);
            terms.push(if row.multiplicity == 1 {
                c
            } else {
                format!("{}*({c})", row.multiplicity)
            });
        }
        let residual = &e.target - &sum;
        let lhs = if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        };
        r.push(
            format!("sum {}", e.ty),
            residual.is_zero(),
            format!(
                "{lhs} = {}, stated {}, residual {}",
                format_rational(&sum),
                format_rational(&e.target),
                format_rational(&residual)
            ),
        );
    }
    r
}

/// `n_H = contribution * |N(H)| / |H|` for one row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImpliedConstant {
    pub line: usize,
    pub ty: TripleType,
    pub iso_label: String,
    pub index: Rational,
    pub implied: Rational,
    pub pattern: Option<[String; 3]>,
}

pub fn implied_subgroup_constants(
    entries: &[LedgerEntry],
) -> Result<Vec<ImpliedConstant>, LedgerError> {
    let mut out = Vec::new();
    for e in entries {
        for row in &e.rows {
            if row.subgroup_order == 0 {
                return Err(LedgerError::MissingOrder {
                    line: row.line,
                    what: "order=",
                });
            }
            if row.normalizer_order == 0 {
                return Err(LedgerError::MissingOrder {
                    line: row.line,
                    what: "norm=",
                });
            }
            let index = Rational::new(
                BigInt::from(row.normalizer_order),
                BigInt::from(row.subgroup_order),
            );
            out.push(ImpliedConstant {
                line: row.line,
                ty: e.ty.clone(),
                iso_label: row.iso_label.clone(),
                implied: &row.contribution * &index,
                index,
                pattern: row.pattern.clone(),
            });
        }
    }
    Ok(out)
}

/// Images of a source class label (possibly a union) under a fusion table.
fn fuse(table: &FusionTable, label: &str) -> Result<BTreeSet<String>, String> {
    let mut out = BTreeSet::new();
    for single in expand(label) {
        let hits: Vec<&Option<String>> = table
            .lines
            .iter()
            .filter(|l| l.source.as_deref().is_some_and(|s| selects(s, &single)))
            .map(|l| &l.target)
            .collect();
        match hits.as_slice() {
            [] => {
                return Err(format!(
                    "{single} is not in the fusion table of {}",
                    table.group
                ))
            }
            [None] => return Err(format!("{single} has no image in {}", table.group)),
            [Some(t)] => out.extend(expand(t)),
            _ => {
                return Err(format!(
                    "{single} appears on several lines of the fusion table of {}",
                    table.group
                ))
            }
        }
    }
    Ok(out)
}

/// Maps each appendix type through its group's fusion and compares with the stated type.
pub fn verify_appendix_fusion(fusions: &[FusionTable], appendix: &[AppendixRow]) -> Report {
    let mut r = Report::new();
    for row in appendix {
        let name = format!(
            "appendix {} {} {} (line {})",
            row.group, row.source_type, row.iso_label, row.line
        );
        let Some(table) = fusions.iter().find(|f| f.group == row.group) else {
            r.fail(name, format!("no fusion table for {}", row.group));
            continue;
        };
        let mut problems = Vec::new();
        let mut images = Vec::new();
        for (src, stated) in row.source_type.labels().iter().zip(row.stated.labels()) {
            match fuse(table, src) {
                Ok(img) => {
                    let allowed: BTreeSet<String> = expand(stated).into_iter().collect();
                    if !img.is_subset(&allowed) {
                        problems.push(format!("{src} fuses to {img:?}, stated {stated}"));
                    }
                    images.push(img.into_iter().collect::<Vec<_>>().join("|"));
                }
                Err(e) => problems.push(e),
            }
        }
        if problems.is_empty() {
            r.pass(
                name,
                format!("-> ({}) = stated {}", images.join(","), row.stated),
            );
        } else {
            r.fail(name, problems.join("; "));
        }
    }
    r
}

/// Fusion tables map each source class once, and optionally onto known ambient classes.
fn fusion_integrity(fusions: &[FusionTable], ambient: Option<&CharacterTable>) -> Report {
    let mut r = Report::new();
    for f in fusions {
        let mut seen = BTreeSet::new();
        let mut problems = Vec::new();
        for l in &f.lines {
            if let Some(s) = &l.source {
                for single in expand(s) {
                    if !seen.insert(single.clone()) {
                        problems.push(format!("{single} mapped twice"));
                    }
                }
            }
            if let (Some(t), Some(amb)) = (&l.target, ambient) {
                for single in expand(t) {
                    if amb.index_of(&single).is_none() {
                        problems.push(format!("{single} is not a class of {}", amb.name));
                    }
                }
            }
        }
        r.push(
            format!("fusion table {}", f.group),
            problems.is_empty(),
            problems.join("; "),
        );
    }
    r
}

/// Subgroup data for the cross-checks: character tables and permutation realizations.
#[derive(Default)]
pub struct LedgerContext {
    pub tables: Vec<CharacterTable>,
    /// `(catalogue label, group)`.
    pub groups: Vec<(String, PermGroup)>,
}

fn canonical_iso(label: &str) -> &str {
    match label {
        "L2(7)" => "L3(2)",
        other => other,
    }
}

impl LedgerContext {
    /// Reads every `.ctab` and `.grp` file in `dir` and its immediate subdirectories.
    pub fn load_dir(dir: &Path) -> Result<Self, String> {
        let mut files = Vec::new();
        let mut dirs = vec![dir.to_path_buf()];
        let read = |d: &Path| -> Result<Vec<std::path::PathBuf>, String> {
            let mut v: Vec<_> = std::fs::read_dir(d)
                .map_err(|e| format!("{}: {e}", d.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .collect();
            v.sort();
            Ok(v)
        };
        for p in read(dir)? {
            if p.is_dir() {
                dirs.push(p);
            }
        }
        for d in &dirs {
            files.extend(read(d)?.into_iter().filter(|p| p.is_file()));
        }
        let mut ctx = LedgerContext::default();
        for f in files {
            let ext = f.extension().and_then(|e| e.to_str()).unwrap_or("");
            if ext != "ctab" && ext != "grp" {
                continue;
            }
            let text = std::fs::read_to_string(&f).map_err(|e| format!("{}: {e}", f.display()))?;
            if ext == "ctab" {
                ctx.tables
                    .push(parse_table(&text).map_err(|e| format!("{}: {e}", f.display()))?);
            } else {
                let g = parse_grp(&text)
                    .map_err(|e| format!("{}: {e}", f.display()))?
                    .group;
                if g.order() <= EXHAUSTIVE_LIMIT {
                    ctx.groups.push((identify_group(&g), g));
                }
            }
        }
        Ok(ctx)
    }

    pub fn table(&self, iso_label: &str) -> Option<&CharacterTable> {
        self.tables
            .iter()
            .find(|t| canonical_iso(&t.name) == canonical_iso(iso_label))
    }

    pub fn group(&self, iso_label: &str) -> Option<&PermGroup> {
        self.groups
            .iter()
            .find(|(l, _)| l == iso_label)
            .map(|(_, g)| g)
    }
}

/// `n_H` over the given H classes, counted on a permutation realization.
fn realization_constant(
    h: &PermGroup,
    cl: &ClassList,
    pattern: &[String; 3],
) -> Result<Rational, String> {
    let triples = hurwitz_triples(h).map_err(|e| e.to_string())?;
    let ty = [&pattern[0], &pattern[1], &pattern[2]];
    let n = triples
        .iter()
        .filter(|t| {
            [&t.x, &t.y, &t.z]
                .iter()
                .zip(ty)
                .all(|(e, sel)| cl.class_of(e).is_some_and(|c| selects(sel, cl.label(c))))
        })
        .count();
    Ok(Rational::new(BigInt::from(n), BigInt::from(h.order())))
}

/// `|N_G(<g>)| = |C_G(g)| * #{k : g^k ~ g}` from the ambient table.
fn cyclic_normalizer_order(t: &CharacterTable, class: usize) -> Option<u128> {
    let o = t.classes[class].order;
    let fixed = (1..=o)
        .filter(|k| k.gcd(&o) == 1)
        .map(|k| power_by_maps(t, class, k))
        .collect::<Option<Vec<_>>>()?
        .into_iter()
        .filter(|&c| c == class)
        .count() as u128;
    Some(t.order / t.classes[class].size * fixed)
}

fn ambient_checks(ledger: &Ledger, t: &CharacterTable, r: &mut Report) {
    if let Some((name, order)) = &ledger.ambient {
        r.push(
            format!("{name} order"),
            *order == t.order,
            format!("ledger {order}, table {}", t.order),
        );
    }
    for e in &ledger.entries {
        let name = format!("constant {}", e.ty);
        match normalized_constant(t, &e.ty.class2, &e.ty.class3, &e.ty.class7) {
            Ok(v) => r.push(
                name,
                v == e.target,
                format!(
                    "table {}, ledger {}",
                    format_rational(&v),
                    format_rational(&e.target)
                ),
            ),
            Err(err) => r.fail(name, err.to_string()),
        }
    }
    // every other (2,3,7) constant vanishes
    let of = |o: u64| -> Vec<&str> {
        t.classes
            .iter()
            .filter(|c| c.order == o)
            .map(|c| c.label.as_str())
            .collect()
    };
    let mut extra = Vec::new();
    let mut failures = Vec::new();
    for a in of(2) {
        for b in of(3) {
            for c in of(7) {
                if ledger.entries.iter().any(|e| e.ty.selects([a, b, c])) {
                    continue;
                }
                match normalized_constant(t, a, b, c) {
                    Ok(v) if v.is_zero() => {}
                    Ok(v) => extra.push(format!("({a},{b},{c}) = {}", format_rational(&v))),
                    Err(err) => failures.push(err.to_string()),
                }
            }
        }
    }
    extra.extend(failures);
    r.push(
        "all other (2,3,7) constants vanish",
        extra.is_empty(),
        extra.join(", "),
    );
    for n in &ledger.normalizers {
        let name = format!("normalizer {}", n.class);
        let class = expand(&n.class).first().and_then(|l| t.index_of(l));
        let (Some(class), Ok(stated)) = (class, structure_order(&n.structure, None)) else {
            r.fail(name, format!("cannot evaluate {} {}", n.class, n.structure));
            continue;
        };
        match cyclic_normalizer_order(t, class) {
            Some(v) => r.push(
                name,
                v == stated,
                format!("{} has order {stated}, table gives {v}", n.structure),
            ),
            None => r.fail(name, "power maps do not determine the normalizer order"),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct LedgerOutcome {
    pub report: Report,
    pub warnings: Vec<String>,
    pub implied: Vec<ImpliedConstant>,
    pub verdict: Option<String>,
}

/// The summary line, when no row is the ambient group itself.
pub fn verdict(ledger: &Ledger) -> Option<String> {
    let (name, order) = ledger.ambient.clone()?;
    let rows = ledger.entries.iter().flat_map(|e| &e.rows);
    if rows
        .clone()
        .any(|r| r.subgroup_order == order || r.iso_label == name)
    {
        return None;
    }
    let mut labels: Vec<&str> = rows.map(|r| r.iso_label.as_str()).collect();
    labels.sort_by_key(|l| {
        (
            CATALOGUE
                .iter()
                .position(|c| c.label == *l)
                .unwrap_or(usize::MAX),
            *l,
        )
    });
    labels.dedup();
    Some(format!(
        "{name} Hurwitz images: {{{}}}; {name} itself: NOT Hurwitz",
        labels.join(", ")
    ))
}

/// Runs every ledger check; the implied-constant cross-checks need `ctx`.
pub fn verify_ledger(ledger: &Ledger, ctx: Option<&LedgerContext>) -> LedgerOutcome {
    let mut out = LedgerOutcome {
        report: verify_sums(&ledger.entries),
        ..Default::default()
    };
    let r = &mut out.report;
    for e in &ledger.entries {
        for row in &e.rows {
            let name = format!("row {} {} (line {})", e.ty, row.iso_label, row.line);
            if row.subgroup_order == 0 || row.normalizer_order % row.subgroup_order != 0 {
                r.fail(
                    name.clone(),
                    format!(
                        "|N(H)| = {} is not a multiple of |H| = {}",
                        row.normalizer_order, row.subgroup_order
                    ),
                );
            }
            if let Some(s) = &row.structure {
                match structure_order(s, Some(row.subgroup_order)) {
                    Ok(v) => r.push(
                        format!("{name} structure"),
                        v == row.normalizer_order,
                        format!("{s} has order {v}, norm={}", row.normalizer_order),
                    ),
                    Err(err) => r.fail(format!("{name} structure"), err.to_string()),
                }
            }
        }
    }
    match implied_subgroup_constants(&ledger.entries) {
        Ok(v) => out.implied = v,
        Err(e) => r.fail("implied constants", e.to_string()),
    }
    let ambient = ctx.and_then(|c| {
        let name = &ledger.ambient.as_ref()?.0;
        c.tables.iter().find(|t| &t.name == name)
    });
    r.extend(fusion_integrity(&ledger.fusions, ambient));
    r.extend(verify_appendix_fusion(&ledger.fusions, &ledger.appendix));

    match ctx {
        None => out
            .warnings
            .push("no tables given: implied-constant cross-checks skipped".to_string()),
        Some(ctx) => {
            if let Some(t) = ambient {
                ambient_checks(ledger, t, r);
            } else if let Some((name, _)) = &ledger.ambient {
                out.warnings
                    .push(format!("no {name} table: ambient constants not recomputed"));
            }
            let mut class_cache: Vec<(String, ClassList)> = Vec::new();
            for ic in &out.implied {
                let name = format!("implied n_H {} {} (line {})", ic.ty, ic.iso_label, ic.line);
                let Some(pattern) = &ic.pattern else {
                    out.warnings
                        .push(format!("{name}: no fusion pattern, not cross-checked"));
                    continue;
                };
                let computed = if let Some(t) = ctx.table(&ic.iso_label) {
                    normalized_constant(t, &pattern[0], &pattern[1], &pattern[2])
                        .map(|v| (v, format!("table {}", t.name)))
                        .map_err(|e| e.to_string())
                } else if let Some(g) = ctx.group(&ic.iso_label) {
                    if !class_cache.iter().any(|(l, _)| l == &ic.iso_label) {
                        match conjugacy_classes(g) {
                            Ok(cl) => class_cache.push((ic.iso_label.clone(), cl)),
                            Err(e) => {
                                r.fail(name, e.to_string());
                                continue;
                            }
                        }
                    }
                    let cl = &class_cache
                        .iter()
                        .find(|(l, _)| l == &ic.iso_label)
                        .expect("cached")
                        .1;
                    realization_constant(g, cl, pattern)
                        .map(|v| (v, "permutation realization".to_string()))
                } else {
                    out.warnings.push(format!(
                        "{name}: no table or realization for {}",
                        ic.iso_label
                    ));
                    continue;
                };
                match computed {
                    Ok((v, source)) => r.push(
                        name,
                        v == ic.implied,
                        format!(
                            "{} * {} = {}, {source} gives {}",
                            format_rational(&(&ic.implied / &ic.index)),
                            format_rational(&ic.index),
                            format_rational(&ic.implied),
                            format_rational(&v)
                        ),
                    ),
                    Err(e) => r.fail(name, e),
                }
            }
        }
    }
    if out.report.passed() {
        out.verdict = verdict(ledger);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::parse_ledger;
    use super::*;
    use crate::exactnum::rational;

    const BUNDLED: &str = include_str!("../../data/e6_2.ledger");

    fn ledger() -> Ledger {
        parse_ledger(BUNDLED).unwrap()
    }

    #[test]
    fn sums_hold() {
        let r = verify_sums(&ledger().entries);
        assert_eq!(r.checks.len(), 8);
        assert!(r.passed(), "{r}");
        let c = r.get("sum (2C,3C,7D)").unwrap();
        assert!(
            c.detail.starts_with("1 + 1/42 + 63*(1/14) + 1 = 137/21"),
            "{}",
            c.detail
        );
        assert!(r
            .get("sum (2B,3B,7D)")
            .unwrap()
            .detail
            .starts_with("1/168 + 1/12 = 5/56"));
        assert!(r
            .get("sum (2C,3B,7D)")
            .unwrap()
            .detail
            .starts_with("1/8 + 1/2 + 1/6 + 1 = 43/24"));
        assert!(r
            .get("sum (2C,3C,7C)")
            .unwrap()
            .detail
            .starts_with("1/3 + 3/2 + 1/6 + 1/7 = 15/7"));
    }

    #[test]
    fn altered_contribution_shows_residual() {
        let mut l = ledger();
        l.entries[7].rows[0].contribution = rational(1, 2);
        let r = verify_sums(&l.entries);
        let c = r.get("sum (2C,3C,7D)").unwrap();
        assert!(!c.passed);
        assert!(c.detail.ends_with("residual 1/2"), "{}", c.detail);
    }

    #[test]
    fn implied_constants() {
        let v = implied_subgroup_constants(&ledger().entries).unwrap();
        assert_eq!(v.len(), 19);
        for ic in &v {
            let expected = match ic.iso_label.as_str() {
                "L3(2)" => 2,
                "L2(8)" | "3D4(2)" => 3,
                "2^3.L3(2)" => 4,
                other => panic!("{other}"),
            };
            assert_eq!(ic.implied, rational(expected, 1), "line {}", ic.line);
        }
        assert_eq!(v[0].index, rational(56448, 1));
    }

    #[test]
    fn appendix_rows_fuse_as_stated() {
        let l = ledger();
        let r = verify_appendix_fusion(&l.fusions, &l.appendix);
        assert_eq!(r.checks.len(), 41);
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn wrong_stated_type_fails() {
        let mut l = ledger();
        l.appendix[0].stated = TripleType::parse("(2A,3B,7C)").unwrap();
        let r = verify_appendix_fusion(&l.fusions, &l.appendix[..1]);
        assert!(!r.passed());
        l.appendix[0].source_type = TripleType::parse("(2A,3B,7F)").unwrap();
        let r = verify_appendix_fusion(&l.fusions, &l.appendix[..1]);
        assert!(
            r.checks[0].detail.contains("7F is not in the fusion table"),
            "{r}"
        );
    }

    #[test]
    fn degraded_mode_without_tables() {
        let out = verify_ledger(&ledger(), None);
        assert!(out.report.passed(), "{}", out.report);
        assert_eq!(out.warnings.len(), 1);
        assert_eq!(
            out.verdict.as_deref(),
            Some("E6(2) Hurwitz images: {L2(8), L3(2), 2^3.L3(2), 3D4(2)}; E6(2) itself: NOT Hurwitz")
        );
    }

    #[test]
    fn no_verdict_when_the_ambient_group_is_a_row() {
        let mut l = ledger();
        l.entries[0].rows[0].subgroup_order = l.ambient.as_ref().unwrap().1;
        assert_eq!(verdict(&l), None);
    }
}

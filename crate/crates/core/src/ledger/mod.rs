//! The `.ledger` format: normalized constants of an ambient group, its classes of
//! (2X,3Y,7Z)-subgroups, class fusion from overgroups, and their Hurwitz subgroups.

mod structure;
mod verify;

use crate::exactnum::{parse_rational, Rational};
use crate::hurwitz::TripleType;

pub use structure::{linear_group_order, structure_order, NAMED_ORDERS};
pub use verify::{
    implied_subgroup_constants, verdict, verify_appendix_fusion, verify_ledger, verify_sums,
    ImpliedConstant, LedgerContext, LedgerOutcome,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LedgerError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("structure {text:?}: {message}")]
    Structure { text: String, message: String },
    #[error("line {line}: missing {what}")]
    MissingOrder { line: usize, what: &'static str },
}

fn syntax(line: usize, message: impl Into<String>) -> LedgerError {
    LedgerError::Syntax {
        line,
        message: message.into(),
    }
}

/// One conjugacy-class family of subgroups of a type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LedgerRow {
    pub line: usize,
    pub iso_label: String,
    pub subgroup_order: u128,
    pub normalizer_order: u128,
    pub multiplicity: u64,
    pub contribution: Rational,
    /// Classes of H's own table that fuse into the row type.
    pub pattern: Option<[String; 3]>,
    pub structure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LedgerEntry {
    pub line: usize,
    pub ty: TripleType,
    pub target: Rational,
    pub rows: Vec<LedgerRow>,
}

/// `source -> target`; `None` on either side is a `--` cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FusionLine {
    pub line: usize,
    pub source: Option<String>,
    pub target: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FusionTable {
    pub group: String,
    pub lines: Vec<FusionLine>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AppendixRow {
    pub line: usize,
    pub group: String,
    pub source_type: TripleType,
    pub iso_label: String,
    pub normalizer: String,
    pub stated: TripleType,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizerLine {
    pub line: usize,
    pub class: String,
    pub structure: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Ledger {
    pub ambient: Option<(String, u128)>,
    pub normalizers: Vec<NormalizerLine>,
    pub entries: Vec<LedgerEntry>,
    pub fusions: Vec<FusionTable>,
    pub appendix: Vec<AppendixRow>,
}

impl Ledger {
    pub fn row_count(&self) -> usize {
        self.entries.iter().map(|e| e.rows.len()).sum()
    }

    pub fn fusion(&self, group: &str) -> Option<&FusionTable> {
        self.fusions.iter().find(|f| f.group == group)
    }
}

enum Section {
    None,
    Fusion,
    Appendix(String),
}

fn key_values(line: usize, toks: &[&str]) -> Result<Vec<(String, String)>, LedgerError> {
    toks.iter()
        .map(|t| {
            t.split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .ok_or_else(|| syntax(line, format!("expected key=value, got {t:?}")))
        })
        .collect()
}

fn parse_row(line: usize, text: &str) -> Result<LedgerRow, LedgerError> {
    let (head, structure) = match text.find(" struct=") {
        Some(i) => (&text[..i], Some(text[i + 8..].trim().to_string())),
        None => (text, None),
    };
    let toks: Vec<&str> = head.split_whitespace().collect();
    let (iso, rest) = toks
        .split_first()
        .ok_or_else(|| syntax(line, "missing subgroup label"))?;
    let mut row = LedgerRow {
        line,
        iso_label: iso.to_string(),
        subgroup_order: 0,
        normalizer_order: 0,
        multiplicity: 1,
        contribution: Rational::default(),
        pattern: None,
        structure,
    };
    let mut have_contrib = false;
    for (k, v) in key_values(line, rest)? {
        let int = |v: &str| {
            v.parse::<u128>()
                .map_err(|_| syntax(line, format!("bad integer {v:?} for {k}")))
        };
        match k.as_str() {
            "order" => row.subgroup_order = int(&v)?,
            "norm" => row.normalizer_order = int(&v)?,
            "mult" => {
                row.multiplicity =
                    u64::try_from(int(&v)?).map_err(|_| syntax(line, "multiplicity too large"))?;
                if row.multiplicity == 0 {
                    return Err(syntax(line, "multiplicity must be at least 1"));
                }
            }
            "contrib" => {
                row.contribution =
                    parse_rational(&v).map_err(|e| syntax(line, format!("contrib: {e}")))?;
                have_contrib = true;
            }
            "pattern" => {
                let parts: Vec<String> = v.split(',').map(str::to_string).collect();
                let parts: [String; 3] = parts
                    .try_into()
                    .map_err(|_| syntax(line, "pattern needs three classes"))?;
                row.pattern = Some(parts);
            }
            other => return Err(syntax(line, format!("unknown key {other:?}"))),
        }
    }
    if !have_contrib {
        return Err(syntax(line, "missing contrib="));
    }
    Ok(row)
}

fn parse_type(line: usize, s: &str) -> Result<TripleType, LedgerError> {
    TripleType::parse(s).map_err(|e| syntax(line, e.to_string()))
}

/// Parses `.ledger` text; `#` starts a comment.
pub fn parse_ledger(text: &str) -> Result<Ledger, LedgerError> {
    let mut ledger = Ledger::default();
    let mut section = Section::None;
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('%') {
            let (head, body) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
            let body = body.trim();
            match head {
                "ambient" => {
                    let toks: Vec<&str> = body.split_whitespace().collect();
                    let [name, order] = toks.as_slice() else {
                        return Err(syntax(lineno, "expected '%ambient <name> order=<int>'"));
                    };
                    let order = order
                        .strip_prefix("order=")
                        .and_then(|v| v.parse().ok())
                        .ok_or_else(|| syntax(lineno, "expected order=<int>"))?;
                    ledger.ambient = Some((name.to_string(), order));
                    section = Section::None;
                }
                "normalizer" => {
                    let (class, structure) =
                        body.split_once(char::is_whitespace).ok_or_else(|| {
                            syntax(lineno, "expected '%normalizer <class> <structure>'")
                        })?;
                    ledger.normalizers.push(NormalizerLine {
                        line: lineno,
                        class: class.to_string(),
                        structure: structure.trim().to_string(),
                    });
                    section = Section::None;
                }
                "entry" => {
                    let (ty, value) = body.split_once('=').ok_or_else(|| {
                        syntax(lineno, "expected '%entry <2X> <3Y> <7Z> = <rational>'")
                    })?;
                    let target =
                        parse_rational(value.trim()).map_err(|e| syntax(lineno, e.to_string()))?;
                    ledger.entries.push(LedgerEntry {
                        line: lineno,
                        ty: parse_type(lineno, ty)?,
                        target,
                        rows: Vec::new(),
                    });
                    section = Section::None;
                }
                "row" => {
                    let entry = ledger
                        .entries
                        .last_mut()
                        .ok_or_else(|| syntax(lineno, "%row before any %entry"))?;
                    entry.rows.push(parse_row(lineno, body)?);
                }
                "fusion" => {
                    if body.is_empty() {
                        return Err(syntax(lineno, "missing group name"));
                    }
                    ledger.fusions.push(FusionTable {
                        group: body.to_string(),
                        lines: Vec::new(),
                    });
                    section = Section::Fusion;
                }
                "appendix" => {
                    if body.is_empty() {
                        return Err(syntax(lineno, "missing group name"));
                    }
                    section = Section::Appendix(body.to_string());
                }
                other => return Err(syntax(lineno, format!("unknown directive %{other}"))),
            }
            continue;
        }
        match &section {
            Section::None => {
                return Err(syntax(
                    lineno,
                    "data line outside a %fusion or %appendix block",
                ))
            }
            Section::Fusion => {
                let (src, dst) = line
                    .split_once("->")
                    .ok_or_else(|| syntax(lineno, "expected '<label> -> <label>'"))?;
                let cell = |s: &str| -> Result<Option<String>, LedgerError> {
                    match s.trim() {
                        "--" => Ok(None),
                        "" => Err(syntax(lineno, "empty fusion cell")),
                        t if t.contains(char::is_whitespace) => {
                            Err(syntax(lineno, format!("bad label {t:?}")))
                        }
                        t => Ok(Some(t.to_string())),
                    }
                };
                let fl = FusionLine {
                    line: lineno,
                    source: cell(src)?,
                    target: cell(dst)?,
                };
                if fl.source.is_none() && fl.target.is_none() {
                    return Err(syntax(lineno, "'-- -> --' carries no information"));
                }
                ledger
                    .fusions
                    .last_mut()
                    .expect("inside a fusion block")
                    .lines
                    .push(fl);
            }
            Section::Appendix(group) => {
                let toks: Vec<&str> = line.split_whitespace().collect();
                if toks.len() < 4 {
                    return Err(syntax(
                        lineno,
                        "expected '<type> <H> <normalizer> <E-type>'",
                    ));
                }
                ledger.appendix.push(AppendixRow {
                    line: lineno,
                    group: group.clone(),
                    source_type: parse_type(lineno, toks[0])?,
                    iso_label: toks[1].to_string(),
                    normalizer: toks[2..toks.len() - 1].join(" "),
                    stated: parse_type(lineno, toks[toks.len() - 1])?,
                });
            }
        }
    }
    Ok(ledger)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational;

    pub(crate) const BUNDLED: &str = include_str!("../../data/e6_2.ledger");

    #[test]
    fn bundled_ledger_shape() {
        let l = parse_ledger(BUNDLED).unwrap();
        assert_eq!(l.entries.len(), 8);
        assert_eq!(l.row_count(), 19);
        assert_eq!(l.appendix.len(), 41);
        assert_eq!(l.fusions.len(), 3);
        assert_eq!(l.normalizers.len(), 9);
        let first = &l.entries[0];
        assert_eq!(first.ty.to_string(), "(2A,3A,7C)");
        assert_eq!(first.rows.len(), 1);
        assert_eq!(first.rows[0].contribution, rational(1, 28224));
        let star = l.entries[7]
            .rows
            .iter()
            .find(|r| r.multiplicity == 63)
            .unwrap();
        assert_eq!(star.iso_label, "L2(8)");
        assert_eq!(star.structure.as_deref(), Some("2 x (7 x H):3"));
        assert_eq!(l.appendix[0].normalizer, "L3(2) x L3(2)");
    }

    #[test]
    fn empty_file() {
        assert_eq!(parse_ledger("").unwrap(), Ledger::default());
        assert_eq!(parse_ledger("# nothing\n\n").unwrap(), Ledger::default());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = "%entry 2A 3A 7C = 1/28224\n%row L3(2) order=168 norm=x contrib=1\n";
        assert!(matches!(
            parse_ledger(bad),
            Err(LedgerError::Syntax { line: 2, .. })
        ));
        let bad = "%entry 2A 3A 7C = 1/0\n";
        assert!(matches!(
            parse_ledger(bad),
            Err(LedgerError::Syntax { line: 1, .. })
        ));
        let bad = "%row L3(2) order=168 contrib=1\n";
        assert!(matches!(
            parse_ledger(bad),
            Err(LedgerError::Syntax { line: 1, .. })
        ));
        let bad = "%fusion L6(2)\n2A 2A\n";
        assert!(matches!(
            parse_ledger(bad),
            Err(LedgerError::Syntax { line: 2, .. })
        ));
        let bad = "%entry 3A 2A 7C = 1\n";
        assert!(matches!(
            parse_ledger(bad),
            Err(LedgerError::Syntax { line: 1, .. })
        ));
    }
}

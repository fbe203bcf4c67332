use super::{GroupError, PermGroup, Permutation};

/// A group read from a `.grp` file.
#[derive(Clone, Debug)]
pub struct NamedGroup {
    pub name: String,
    pub group: PermGroup,
}

fn syntax(line: usize, message: impl Into<String>) -> GroupError {
    GroupError::Syntax {
        line,
        message: message.into(),
    }
}

/// Parses `name <id>`, `degree <d>`, then one generator per line in 1-based cycle notation.
pub fn parse_grp(text: &str) -> Result<NamedGroup, GroupError> {
    let mut name = None;
    let mut degree = None;
    let mut gens = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("name") {
            let rest = rest.trim();
            if rest.is_empty() || name.is_some() {
                return Err(syntax(lineno, "expected a single 'name <id>' line"));
            }
            name = Some(rest.to_string());
        } else if let Some(rest) = line.strip_prefix("degree") {
            let d: usize = rest
                .trim()
                .parse()
                .map_err(|_| syntax(lineno, format!("bad degree {:?}", rest.trim())))?;
            if degree.is_some() {
                return Err(syntax(lineno, "duplicate degree line"));
            }
            degree = Some(d);
        } else if line.starts_with('(') {
            let d = degree.ok_or_else(|| syntax(lineno, "generator before 'degree' line"))?;
            let g =
                Permutation::parse_cycles(d, line).map_err(|e| syntax(lineno, e.to_string()))?;
            gens.push(g);
        } else {
            return Err(syntax(lineno, format!("unrecognized line {line:?}")));
        }
    }
    let name = name.ok_or_else(|| syntax(0, "missing 'name' line"))?;
    let degree = degree.ok_or_else(|| syntax(0, "missing 'degree' line"))?;
    Ok(NamedGroup {
        name,
        group: PermGroup::from_generators(degree, gens)?,
    })
}

pub fn format_grp(name: &str, group: &PermGroup) -> String {
    let mut out = format!("name {name}\ndegree {}\n", group.degree());
    for g in group.generators() {
        out.push_str(&g.to_string());
        out.push('\n');
    }
    out
}

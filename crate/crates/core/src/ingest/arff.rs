//! Reader for the small ARFF subset PROMISE datasets use.

use super::{ColumnKind, ColumnSchema, ProjectTable, Role};
use crate::error::{Error, Result};

/// Parses `@relation`, `@attribute <name> numeric|{a,b,...}` and `@data` rows.
///
/// `%` starts a comment line and `?` marks a missing cell. All columns get
/// role `feature`; use [`super::apply_schema`] to retype or assign roles.
pub fn parse_arff(source: &str) -> Result<ProjectTable> {
    let mut columns: Vec<ColumnSchema> = Vec::new();
    let mut rows = Vec::new();
    let mut in_data = false;
    let mut seen_relation = false;

    for (idx, raw_line) in source.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }

        if in_data {
            if line.starts_with('@') {
                return Err(Error::parse(lineno, "directive after @data"));
            }
            let fields = split_fields(line);
            if fields.len() != columns.len() {
                return Err(Error::parse(
                    lineno,
                    format!(
                        "row has {} values, expected {}",
                        fields.len(),
                        columns.len()
                    ),
                ));
            }
            let mut row = Vec::with_capacity(fields.len());
            for (field, col) in fields.iter().zip(&columns) {
                let cell = col
                    .kind
                    .parse_cell(field)
                    .map_err(|e| Error::parse(lineno, format!("attribute {}: {e}", col.name)))?;
                row.push(cell);
            }
            rows.push(row);
            continue;
        }

        let (directive, rest) = split_directive(line);
        match directive.to_ascii_lowercase().as_str() {
            "@relation" => {
                if seen_relation {
                    return Err(Error::parse(lineno, "duplicate @relation"));
                }
                seen_relation = true;
            }
            "@attribute" => {
                let (name, ty) =
                    split_name(rest).ok_or_else(|| Error::parse(lineno, "malformed @attribute"))?;
                let kind = parse_type(ty).map_err(|m| Error::parse(lineno, m))?;
                if columns.iter().any(|c| c.name == name) {
                    return Err(Error::parse(lineno, format!("duplicate attribute {name}")));
                }
                columns.push(ColumnSchema::new(name, kind, Role::Feature));
            }
            "@data" => {
                if columns.is_empty() {
                    return Err(Error::parse(lineno, "@data before any @attribute"));
                }
                in_data = true;
            }
            other => {
                return Err(Error::parse(lineno, format!("unknown directive {other}")));
            }
        }
    }

    if !in_data {
        return Err(Error::parse(
            source.lines().count().max(1),
            "missing @data section",
        ));
    }
    ProjectTable::new(columns, rows)
}

fn split_directive(line: &str) -> (&str, &str) {
    match line.find(char::is_whitespace) {
        Some(i) => (&line[..i], line[i..].trim()),
        None => (line, ""),
    }
}

/// Splits `<name> <type>`, honouring a quoted name.
fn split_name(rest: &str) -> Option<(String, &str)> {
    let rest = rest.trim();
    let quote = rest.chars().next()?;
    if quote == '\'' || quote == '"' {
        let end = rest[1..].find(quote)? + 1;
        Some((rest[1..end].to_string(), rest[end + 1..].trim()))
    } else {
        let i = rest.find(char::is_whitespace)?;
        Some((rest[..i].to_string(), rest[i..].trim()))
    }
}

fn parse_type(ty: &str) -> std::result::Result<ColumnKind, String> {
    let ty = ty.trim();
    if let Some(inner) = ty.strip_prefix('{') {
        let inner = inner
            .strip_suffix('}')
            .ok_or_else(|| "unterminated level set".to_string())?;
        let levels: Vec<String> = split_fields(inner)
            .into_iter()
            .filter(|l| !l.is_empty())
            .collect();
        if levels.is_empty() {
            return Err("empty level set".into());
        }
        for (i, l) in levels.iter().enumerate() {
            if levels[..i].contains(l) {
                return Err(format!("duplicate level {l:?}"));
            }
        }
        return Ok(ColumnKind::Nominal(levels));
    }
    match ty.to_ascii_lowercase().as_str() {
        "numeric" | "real" | "integer" => Ok(ColumnKind::Numeric),
        other => Err(format!("unsupported attribute type {other}")),
    }
}

fn split_fields(line: &str) -> Vec<String> {
    line.split(',')
        .map(|f| {
            let f = f.trim();
            let unquoted = f
                .strip_prefix('\'')
                .and_then(|s| s.strip_suffix('\''))
                .or_else(|| f.strip_prefix('"').and_then(|s| s.strip_suffix('"')));
            unquoted.unwrap_or(f).to_string()
        })
        .collect()
}

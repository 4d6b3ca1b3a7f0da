//! CSV data with a schema sidecar, plus the reverse serialisation.
//!
//! Schema format, one declaration per line or separated by `;`:
//!
//! ```text
//! # comment
//! LOC: numeric, feature
//! ACAP: ordinal(vl<l<n<h<vh<xh), feature
//! MODE: nominal(org,semi,emb)
//! ACT_EFFORT: numeric, target
//! ```
//!
//! The role defaults to `feature`. Binary kinds take an optional level pair,
//! `binary_asymmetric(no,yes)`, whose first level is the absent state
//! (default `0,1`).

use std::collections::HashMap;

use super::{Cell, ColumnKind, ColumnSchema, ProjectTable, Role};
use crate::error::{Error, Result};

pub fn parse_schema(text: &str) -> Result<Vec<ColumnSchema>> {
    let mut out: Vec<ColumnSchema> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        for decl in line.split(';') {
            let decl = decl.trim();
            if decl.is_empty() {
                continue;
            }
            let col = parse_declaration(decl).map_err(|m| Error::parse(lineno, m))?;
            if out.iter().any(|c| c.name == col.name) {
                return Err(Error::parse(
                    lineno,
                    format!("duplicate column declaration {}", col.name),
                ));
            }
            out.push(col);
        }
    }
    Ok(out)
}

fn parse_declaration(decl: &str) -> std::result::Result<ColumnSchema, String> {
    let (name, rest) = decl
        .split_once(':')
        .ok_or_else(|| format!("expected `name: kind, role`, got {decl:?}"))?;
    let name = name.trim();
    if name.is_empty() {
        return Err("empty column name".into());
    }
    let rest = rest.trim();

    // the role is whatever follows the last comma outside parentheses
    let mut depth = 0i32;
    let mut split_at = None;
    for (i, ch) in rest.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => split_at = Some(i),
            _ => {}
        }
    }
    let (kind_text, role_text) = match split_at {
        Some(i) => (rest[..i].trim(), Some(rest[i + 1..].trim())),
        None => (rest, None),
    };
    let role = match role_text {
        None => Role::Feature,
        Some("feature") => Role::Feature,
        Some("target") => Role::Target,
        Some("identifier") => Role::Identifier,
        Some(other) => return Err(format!("unknown role {other:?}")),
    };
    let kind = parse_kind(kind_text)?;
    Ok(ColumnSchema::new(name, kind, role))
}

fn parse_kind(text: &str) -> std::result::Result<ColumnKind, String> {
    let (word, args) = match text.find('(') {
        Some(i) => {
            let inner = text[i + 1..]
                .strip_suffix(')')
                .ok_or_else(|| format!("unbalanced parentheses in {text:?}"))?;
            (text[..i].trim(), Some(inner))
        }
        None => (text.trim(), None),
    };
    let list = |sep: char| -> Vec<String> {
        args.unwrap_or("")
            .split(sep)
            .map(|s| s.trim().to_string())
            .collect()
    };
    let kind = match (word, args) {
        ("numeric", None) => ColumnKind::Numeric,
        ("ordinal", Some(_)) => ColumnKind::Ordinal(list('<')),
        ("ordinal", None) => return Err("ordinal needs a level order, e.g. ordinal(l<n<h)".into()),
        ("nominal", Some(_)) => ColumnKind::Nominal(list(',')),
        ("nominal", None) => ColumnKind::Nominal(Vec::new()),
        ("binary_symmetric", Some(_)) => ColumnKind::BinarySymmetric(list(',')),
        ("binary_symmetric", None) => {
            ColumnKind::BinarySymmetric(ColumnKind::default_binary_levels())
        }
        ("binary_asymmetric", Some(_)) => ColumnKind::BinaryAsymmetric(list(',')),
        ("binary_asymmetric", None) => {
            ColumnKind::BinaryAsymmetric(ColumnKind::default_binary_levels())
        }
        (other, _) => return Err(format!("unknown kind {other:?}")),
    };
    Ok(kind)
}

/// Reads CSV (header row required) typed by `schema`.
///
/// Header and schema must name the same set of columns; the table keeps the
/// header's column order. Empty cells and `?` are missing.
pub fn parse_csv_with_schema(csv_text: &str, schema: &str) -> Result<ProjectTable> {
    let decls = parse_schema(schema)?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(csv_text.as_bytes());

    let header: Vec<String> = reader
        .headers()
        .map_err(|e| Error::parse(1, format!("bad header: {e}")))?
        .iter()
        .map(str::to_string)
        .collect();

    let by_name: HashMap<&str, &ColumnSchema> =
        decls.iter().map(|c| (c.name.as_str(), c)).collect();
    let mut missing: Vec<&str> = Vec::new();
    for name in &header {
        if !by_name.contains_key(name.as_str()) {
            missing.push(name);
        }
    }
    if !missing.is_empty() {
        return Err(Error::Schema(format!(
            "csv columns not declared in schema: {}",
            missing.join(", ")
        )));
    }
    let undeclared: Vec<&str> = decls
        .iter()
        .map(|c| c.name.as_str())
        .filter(|n| !header.iter().any(|h| h == n))
        .collect();
    if !undeclared.is_empty() {
        return Err(Error::Schema(format!(
            "schema columns absent from csv header: {}",
            undeclared.join(", ")
        )));
    }
    for (i, name) in header.iter().enumerate() {
        if header[..i].contains(name) {
            return Err(Error::Schema(format!("duplicate csv column {name}")));
        }
    }

    let mut raw_rows: Vec<(usize, Vec<String>)> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            Error::parse(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        raw_rows.push((line, record.iter().map(str::to_string).collect()));
    }

    let mut columns: Vec<ColumnSchema> =
        header.iter().map(|n| by_name[n.as_str()].clone()).collect();
    close_open_nominals(&mut columns, raw_rows.iter().map(|(_, r)| r.as_slice()));

    let mut rows = Vec::with_capacity(raw_rows.len());
    for (row_no, (line, fields)) in raw_rows.iter().enumerate() {
        let mut row = Vec::with_capacity(fields.len());
        for (field, col) in fields.iter().zip(&columns) {
            let cell = if field.is_empty() {
                Cell::Missing
            } else {
                col.kind.parse_cell(field).map_err(|e| {
                    Error::data(format!(
                        "column {}, row {} (line {}): {}",
                        col.name,
                        row_no + 1,
                        line,
                        e
                    ))
                })?
            };
            row.push(cell);
        }
        rows.push(row);
    }
    ProjectTable::new(columns, rows)
}

fn close_open_nominals<'a>(
    columns: &mut [ColumnSchema],
    rows: impl Iterator<Item = &'a [String]> + Clone,
) {
    for (ci, col) in columns.iter_mut().enumerate() {
        if let ColumnKind::Nominal(levels) = &mut col.kind {
            if !levels.is_empty() {
                continue;
            }
            for row in rows.clone() {
                let v = row[ci].trim();
                if !v.is_empty() && v != "?" && !levels.iter().any(|l| l == v) {
                    levels.push(v.to_string());
                }
            }
        }
    }
}

/// Retypes columns of an existing table (typically parsed from ARFF).
///
/// Every declaration must name an existing column; undeclared columns keep
/// their current kind and role. Cells are re-read from their text form so
/// that, e.g., a nominal rating column becomes ordinal under an explicit order.
pub fn apply_schema(table: &ProjectTable, overrides: &[ColumnSchema]) -> Result<ProjectTable> {
    for o in overrides {
        if table.column_index(&o.name).is_none() {
            return Err(Error::Schema(format!(
                "schema names unknown column {}",
                o.name
            )));
        }
    }
    let texts: Vec<Vec<String>> = (0..table.n_rows())
        .map(|r| (0..table.n_cols()).map(|c| table.cell_text(r, c)).collect())
        .collect();
    let mut columns: Vec<ColumnSchema> = table
        .columns()
        .iter()
        .map(|c| {
            overrides
                .iter()
                .find(|o| o.name == c.name)
                .cloned()
                .unwrap_or_else(|| c.clone())
        })
        .collect();
    close_open_nominals(&mut columns, texts.iter().map(Vec::as_slice));

    let mut rows = Vec::with_capacity(texts.len());
    for (r, fields) in texts.iter().enumerate() {
        let mut row = Vec::with_capacity(fields.len());
        for (field, col) in fields.iter().zip(&columns) {
            row.push(
                col.kind.parse_cell(field).map_err(|e| {
                    Error::data(format!("column {}, row {}: {}", col.name, r + 1, e))
                })?,
            );
        }
        rows.push(row);
    }
    ProjectTable::new(columns, rows)
}

/// Serialises cells as CSV. Missing cells are written as `?`.
pub fn to_csv(table: &ProjectTable) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header: Vec<&str> = table.columns().iter().map(|c| c.name.as_str()).collect();
    // writing into a Vec cannot fail
    w.write_record(&header).expect("in-memory csv write");
    for r in 0..table.n_rows() {
        let rec: Vec<String> = (0..table.n_cols()).map(|c| table.cell_text(r, c)).collect();
        w.write_record(&rec).expect("in-memory csv write");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv flush")).expect("utf-8 csv")
}

pub fn to_schema_text(table: &ProjectTable) -> String {
    table
        .columns()
        .iter()
        .map(|c| format!("{}: {}, {}\n", c.name, c.kind, c.role))
        .collect()
}

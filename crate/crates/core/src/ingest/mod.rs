//! Typed project tables and the readers that build them.

mod arff;
mod csv_schema;
mod validate;

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};

pub use arff::parse_arff;
pub use csv_schema::{apply_schema, parse_csv_with_schema, parse_schema, to_csv, to_schema_text};
pub use validate::{validate, ColumnReport, ValidationReport};

/// Measurement scale of a column.
///
/// Level lists keep declaration order. For ordinals that order *is* the scale;
/// for asymmetric binaries the first level is the "absent" state.
#[derive(Debug, Clone, PartialEq)]
pub enum ColumnKind {
    Numeric,
    Ordinal(Vec<String>),
    /// A schema may declare bare `nominal`; the level set is then collected
    /// from the data in order of first appearance while loading.
    Nominal(Vec<String>),
    BinarySymmetric(Vec<String>),
    BinaryAsymmetric(Vec<String>),
}

impl ColumnKind {
    pub fn levels(&self) -> Option<&[String]> {
        match self {
            ColumnKind::Numeric => None,
            ColumnKind::Ordinal(l)
            | ColumnKind::Nominal(l)
            | ColumnKind::BinarySymmetric(l)
            | ColumnKind::BinaryAsymmetric(l) => Some(l),
        }
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, ColumnKind::Numeric)
    }

    pub fn is_ordinal(&self) -> bool {
        matches!(self, ColumnKind::Ordinal(_))
    }

    pub(crate) fn default_binary_levels() -> Vec<String> {
        vec!["0".to_string(), "1".to_string()]
    }

    fn check(&self, column: &str) -> Result<()> {
        let levels = match self {
            ColumnKind::Numeric => return Ok(()),
            ColumnKind::Ordinal(l) => {
                if l.len() < 2 {
                    return Err(Error::Schema(format!(
                        "ordinal column {column} needs at least 2 levels"
                    )));
                }
                l
            }
            ColumnKind::Nominal(l) => {
                if l.is_empty() {
                    return Err(Error::Schema(format!(
                        "nominal column {column} has no levels"
                    )));
                }
                l
            }
            ColumnKind::BinarySymmetric(l) | ColumnKind::BinaryAsymmetric(l) => {
                if l.len() != 2 {
                    return Err(Error::Schema(format!(
                        "binary column {column} needs exactly 2 levels"
                    )));
                }
                l
            }
        };
        let mut seen = HashSet::new();
        for level in levels {
            if level.is_empty() || level == "?" {
                return Err(Error::Schema(format!(
                    "column {column}: invalid level {level:?}"
                )));
            }
            if !seen.insert(level.as_str()) {
                return Err(Error::Schema(format!(
                    "column {column}: duplicate level {level:?}"
                )));
            }
        }
        Ok(())
    }

    /// Parses one raw cell. `?` is always missing; callers decide about empty text.
    pub(crate) fn parse_cell(&self, raw: &str) -> std::result::Result<Cell, String> {
        let raw = raw.trim();
        if raw == "?" {
            return Ok(Cell::Missing);
        }
        match self {
            ColumnKind::Numeric => match raw.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(Cell::Number(v)),
                _ => Err(format!("{raw:?} is not a finite number")),
            },
            _ => {
                let levels = self.levels().unwrap_or_default();
                levels
                    .iter()
                    .position(|l| l == raw)
                    .map(Cell::Level)
                    .ok_or_else(|| format!("{raw:?} is not a declared level"))
            }
        }
    }
}

impl fmt::Display for ColumnKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColumnKind::Numeric => f.write_str("numeric"),
            ColumnKind::Ordinal(l) => write!(f, "ordinal({})", l.join("<")),
            ColumnKind::Nominal(l) if l.is_empty() => f.write_str("nominal"),
            ColumnKind::Nominal(l) => write!(f, "nominal({})", l.join(",")),
            ColumnKind::BinarySymmetric(l) => write!(f, "binary_symmetric({})", l.join(",")),
            ColumnKind::BinaryAsymmetric(l) => write!(f, "binary_asymmetric({})", l.join(",")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Feature,
    /// The dependent variable. Excluded from project similarity, kept in correlations.
    Target,
    /// Excluded from every statistic. The first identifier column supplies row labels.
    Identifier,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Feature => "feature",
            Role::Target => "target",
            Role::Identifier => "identifier",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ColumnSchema {
    pub name: String,
    pub kind: ColumnKind,
    pub role: Role,
}

impl ColumnSchema {
    pub fn new(name: impl Into<String>, kind: ColumnKind, role: Role) -> Self {
        Self {
            name: name.into(),
            kind,
            role,
        }
    }
}

/// One table cell. Categorical values are stored as indices into the column's level list.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Missing,
    Number(f64),
    Level(usize),
}

impl Cell {
    pub fn is_missing(&self) -> bool {
        matches!(self, Cell::Missing)
    }
}

/// An immutable, validated table of projects (rows) by attributes (columns).
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectTable {
    columns: Vec<ColumnSchema>,
    rows: Vec<Vec<Cell>>,
    labels: Vec<String>,
}

impl ProjectTable {
    /// Builds a table, checking every schema and cell invariant.
    ///
    /// Row labels come from the first identifier column when one exists,
    /// otherwise they are the 1-based row numbers.
    pub fn new(columns: Vec<ColumnSchema>, rows: Vec<Vec<Cell>>) -> Result<Self> {
        let mut names = HashSet::new();
        let mut targets = 0;
        for col in &columns {
            if !names.insert(col.name.as_str()) {
                return Err(Error::Schema(format!("duplicate column {}", col.name)));
            }
            if col.role == Role::Target {
                targets += 1;
            }
            col.kind.check(&col.name)?;
        }
        if targets > 1 {
            return Err(Error::Schema(
                "at most one column may have role target".into(),
            ));
        }
        for (r, row) in rows.iter().enumerate() {
            if row.len() != columns.len() {
                return Err(Error::data(format!(
                    "row {} has {} cells, expected {}",
                    r + 1,
                    row.len(),
                    columns.len()
                )));
            }
            for (cell, col) in row.iter().zip(&columns) {
                let ok = match (cell, &col.kind) {
                    (Cell::Missing, _) => true,
                    (Cell::Number(v), ColumnKind::Numeric) => v.is_finite(),
                    (Cell::Level(i), kind) if !kind.is_numeric() => {
                        *i < kind.levels().map_or(0, <[String]>::len)
                    }
                    _ => false,
                };
                if !ok {
                    return Err(Error::data(format!(
                        "row {}, column {}: cell {:?} does not fit kind {}",
                        r + 1,
                        col.name,
                        cell,
                        col.kind
                    )));
                }
            }
        }

        let mut table = Self {
            columns,
            rows,
            labels: Vec::new(),
        };
        table.labels = table.derive_labels()?;
        Ok(table)
    }

    fn derive_labels(&self) -> Result<Vec<String>> {
        let Some(id) = self.columns.iter().position(|c| c.role == Role::Identifier) else {
            return Ok((1..=self.rows.len()).map(|i| i.to_string()).collect());
        };
        let mut seen = HashSet::new();
        let mut labels = Vec::with_capacity(self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            if row[id].is_missing() {
                return Err(Error::data(format!(
                    "row {}: identifier column {} is missing",
                    r + 1,
                    self.columns[id].name
                )));
            }
            let label = self.cell_text(r, id);
            if !seen.insert(label.clone()) {
                return Err(Error::data(format!("duplicate row label {label}")));
            }
            labels.push(label);
        }
        Ok(labels)
    }

    pub fn columns(&self) -> &[ColumnSchema] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn row_labels(&self) -> &[String] {
        &self.labels
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn cell(&self, row: usize, col: usize) -> Cell {
        self.rows[row][col]
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    /// Textual form of a cell as it would appear in a data file (`?` for missing).
    pub fn cell_text(&self, row: usize, col: usize) -> String {
        match self.rows[row][col] {
            Cell::Missing => "?".to_string(),
            Cell::Number(v) => v.to_string(),
            Cell::Level(i) => self.columns[col].kind.levels().unwrap_or_default()[i].clone(),
        }
    }

    /// Column values as reals: numbers as-is, ordinal cells as their 1-based level index.
    /// Returns `None` for nominal and binary columns.
    pub fn numeric_view(&self, col: usize) -> Option<Vec<Option<f64>>> {
        let kind = &self.columns[col].kind;
        if !(kind.is_numeric() || kind.is_ordinal()) {
            return None;
        }
        Some(
            self.rows
                .iter()
                .map(|row| match row[col] {
                    Cell::Missing => None,
                    Cell::Number(v) => Some(v),
                    Cell::Level(i) => Some((i + 1) as f64),
                })
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn levels(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn rejects_two_targets() {
        let cols = vec![
            ColumnSchema::new("a", ColumnKind::Numeric, Role::Target),
            ColumnSchema::new("b", ColumnKind::Numeric, Role::Target),
        ];
        assert!(ProjectTable::new(cols, vec![]).is_err());
    }

    #[test]
    fn rejects_single_level_ordinal() {
        let cols = vec![ColumnSchema::new(
            "a",
            ColumnKind::Ordinal(levels(&["x"])),
            Role::Feature,
        )];
        assert!(ProjectTable::new(cols, vec![]).is_err());
    }

    #[test]
    fn identifier_column_supplies_labels() {
        let cols = vec![
            ColumnSchema::new(
                "id",
                ColumnKind::Nominal(levels(&["p", "q"])),
                Role::Identifier,
            ),
            ColumnSchema::new("x", ColumnKind::Numeric, Role::Feature),
        ];
        let rows = vec![
            vec![Cell::Level(1), Cell::Number(1.0)],
            vec![Cell::Level(0), Cell::Number(2.0)],
        ];
        let t = ProjectTable::new(cols, rows).unwrap();
        assert_eq!(t.row_labels(), ["q", "p"]);
    }

    #[test]
    fn duplicate_identifier_is_rejected() {
        let cols = vec![ColumnSchema::new(
            "id",
            ColumnKind::Numeric,
            Role::Identifier,
        )];
        let rows = vec![vec![Cell::Number(1.0)], vec![Cell::Number(1.0)]];
        assert!(ProjectTable::new(cols, rows).is_err());
    }

    #[test]
    fn level_out_of_range_is_rejected() {
        let cols = vec![ColumnSchema::new(
            "a",
            ColumnKind::Nominal(levels(&["x"])),
            Role::Feature,
        )];
        assert!(ProjectTable::new(cols, vec![vec![Cell::Level(1)]]).is_err());
    }

    #[test]
    fn ordinal_view_uses_one_based_levels() {
        let cols = vec![ColumnSchema::new(
            "r",
            ColumnKind::Ordinal(levels(&["l", "n", "h"])),
            Role::Feature,
        )];
        let rows = vec![
            vec![Cell::Level(2)],
            vec![Cell::Missing],
            vec![Cell::Level(0)],
        ];
        let t = ProjectTable::new(cols, rows).unwrap();
        assert_eq!(t.numeric_view(0).unwrap(), vec![Some(3.0), None, Some(1.0)]);
    }
}

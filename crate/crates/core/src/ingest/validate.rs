use std::fmt;

use super::{Cell, ProjectTable, Role};

#[derive(Debug, Clone, PartialEq)]
pub struct ColumnReport {
    pub name: String,
    pub missing: usize,
    /// True when every present cell holds the same value (at least one present).
    pub constant: bool,
    /// Observed (min, max) over present cells of a numeric column.
    pub range: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub rows: usize,
    pub columns: Vec<ColumnReport>,
    pub issues: Vec<String>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Summarises missing cells, constant columns and numeric ranges.
///
/// Identifier columns are listed but never raise issues.
pub fn validate(table: &ProjectTable) -> ValidationReport {
    let mut columns = Vec::with_capacity(table.n_cols());
    let mut issues = Vec::new();

    for (c, schema) in table.columns().iter().enumerate() {
        let present: Vec<Cell> = table
            .rows()
            .iter()
            .map(|row| row[c])
            .filter(|cell| !cell.is_missing())
            .collect();
        let missing = table.n_rows() - present.len();
        let constant = !present.is_empty() && present.iter().all(|v| *v == present[0]);
        let range = if schema.kind.is_numeric() {
            present
                .iter()
                .filter_map(|v| match v {
                    Cell::Number(x) => Some(*x),
                    _ => None,
                })
                .fold(None, |acc: Option<(f64, f64)>, x| match acc {
                    None => Some((x, x)),
                    Some((lo, hi)) => Some((lo.min(x), hi.max(x))),
                })
        } else {
            None
        };

        if schema.role != Role::Identifier {
            if present.is_empty() {
                issues.push(format!("column {}: no present values", schema.name));
            } else {
                if missing > 0 {
                    issues.push(format!(
                        "column {}: {} missing cell(s)",
                        schema.name, missing
                    ));
                }
                if constant {
                    issues.push(format!(
                        "column {}: constant, dropped from dissimilarity",
                        schema.name
                    ));
                }
            }
        }

        columns.push(ColumnReport {
            name: schema.name.clone(),
            missing,
            constant,
            range,
        });
    }

    ValidationReport {
        rows: table.n_rows(),
        columns,
        issues,
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} rows, {} columns", self.rows, self.columns.len())?;
        for col in &self.columns {
            write!(f, "  {}: missing={}", col.name, col.missing)?;
            if col.constant {
                f.write_str(" constant")?;
            }
            if let Some((lo, hi)) = col.range {
                write!(f, " range=[{lo}, {hi}]")?;
            }
            writeln!(f)?;
        }
        if self.issues.is_empty() {
            writeln!(f, "no issues")
        } else {
            for issue in &self.issues {
                writeln!(f, "issue: {issue}")?;
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{ColumnKind, ColumnSchema};

    fn numeric_table(values: &[Option<f64>]) -> ProjectTable {
        let cols = vec![ColumnSchema::new("x", ColumnKind::Numeric, Role::Feature)];
        let rows = values
            .iter()
            .map(|v| vec![v.map_or(Cell::Missing, Cell::Number)])
            .collect();
        ProjectTable::new(cols, rows).unwrap()
    }

    #[test]
    fn clean_table_has_no_issues() {
        let r = validate(&numeric_table(&[Some(1.0), Some(3.0)]));
        assert!(r.is_clean());
        assert_eq!(r.columns[0].range, Some((1.0, 3.0)));
    }

    #[test]
    fn constant_column_is_flagged() {
        let r = validate(&numeric_table(&[Some(2.0), Some(2.0), None]));
        assert!(r.columns[0].constant);
        assert!(r.issues.iter().any(|i| i.contains("constant")));
    }

    #[test]
    fn missing_count_matches_direct_count() {
        let values: Vec<Option<f64>> = (0..60)
            .map(|i| if i % 20 == 7 { None } else { Some(i as f64) })
            .collect();
        let expected = values.iter().filter(|v| v.is_none()).count();
        assert_eq!(expected, 3);
        assert_eq!(
            validate(&numeric_table(&values)).columns[0].missing,
            expected
        );
    }
}

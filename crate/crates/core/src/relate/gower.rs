//! Kaufman–Rousseeuw mixed-type dissimilarity.
//!
//! Per feature column f the contribution is `d_f` in [0,1] weighted by an
//! indicator `delta_f`:
//!
//! - numeric: `|x_i - x_j| / R_f`, with `R_f` the observed range
//! - ordinal: levels become `z = (r - 1) / (M_f - 1)` with `M_f` the declared
//!   level count, then `|z_i - z_j|`
//! - nominal and symmetric binary: 0 when equal, else 1
//! - asymmetric binary: as nominal, but `delta_f = 0` when both are absent
//!
//! `delta_f = 0` also when either cell is missing or the numeric range is 0.

use rayon::prelude::*;

use super::{MatrixKind, RelationMatrix};
use crate::error::{Error, Result};
use crate::ingest::{Cell, ColumnKind, ProjectTable, Role};

#[derive(Debug, Clone, Copy, PartialEq)]
enum ColumnStat {
    Skip,
    Numeric { range: f64 },
    Ordinal { levels: usize },
    Nominal,
    BinaryAsymmetric,
}

/// Per-column normalisation constants for [`gower_pair`].
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnStats {
    stats: Vec<ColumnStat>,
}

impl ColumnStats {
    /// Only role=feature columns participate; others are skipped.
    pub fn from_table(table: &ProjectTable) -> Self {
        let stats = table
            .columns()
            .iter()
            .enumerate()
            .map(|(c, col)| {
                if col.role != Role::Feature {
                    return ColumnStat::Skip;
                }
                match &col.kind {
                    ColumnKind::Numeric => {
                        let (lo, hi) = table
                            .rows()
                            .iter()
                            .filter_map(|row| match row[c] {
                                Cell::Number(v) => Some(v),
                                _ => None,
                            })
                            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                                (lo.min(v), hi.max(v))
                            });
                        let range = if lo.is_finite() { hi - lo } else { 0.0 };
                        ColumnStat::Numeric { range }
                    }
                    ColumnKind::Ordinal(levels) => ColumnStat::Ordinal {
                        levels: levels.len(),
                    },
                    ColumnKind::Nominal(_) | ColumnKind::BinarySymmetric(_) => ColumnStat::Nominal,
                    ColumnKind::BinaryAsymmetric(_) => ColumnStat::BinaryAsymmetric,
                }
            })
            .collect();
        Self { stats }
    }

    pub fn n_columns(&self) -> usize {
        self.stats.len()
    }

    /// Number of columns that can contribute to some pair.
    pub fn n_active(&self) -> usize {
        self.stats
            .iter()
            .filter(|s| match s {
                ColumnStat::Skip => false,
                ColumnStat::Numeric { range } => *range > 0.0,
                _ => true,
            })
            .count()
    }
}

/// Contribution `(delta_f * d_f, delta_f)` of one column.
fn contribution(stat: ColumnStat, a: Cell, b: Cell) -> Option<f64> {
    match (stat, a, b) {
        (ColumnStat::Skip, _, _) | (_, Cell::Missing, _) | (_, _, Cell::Missing) => None,
        (ColumnStat::Numeric { range }, Cell::Number(x), Cell::Number(y)) => {
            (range > 0.0).then(|| ((x - y).abs() / range).min(1.0))
        }
        (ColumnStat::Ordinal { levels }, Cell::Level(r), Cell::Level(s)) => {
            let scale = (levels - 1) as f64;
            Some((r as f64 / scale - s as f64 / scale).abs())
        }
        (ColumnStat::Nominal, Cell::Level(r), Cell::Level(s)) => {
            Some(if r == s { 0.0 } else { 1.0 })
        }
        (ColumnStat::BinaryAsymmetric, Cell::Level(r), Cell::Level(s)) => {
            if r == 0 && s == 0 {
                None
            } else {
                Some(if r == s { 0.0 } else { 1.0 })
            }
        }
        _ => None,
    }
}

/// Dissimilarity between rows `i` and `j` of `table`, or `Ok(None)` when no
/// column is comparable for the pair.
pub fn gower_pair(
    table: &ProjectTable,
    i: usize,
    j: usize,
    stats: &ColumnStats,
) -> Result<Option<f64>> {
    if stats.n_columns() != table.n_cols() {
        return Err(Error::data(format!(
            "column statistics cover {} columns but the table has {}",
            stats.n_columns(),
            table.n_cols()
        )));
    }
    let n = table.n_rows();
    if i >= n || j >= n {
        return Err(Error::data(format!(
            "row index out of range ({i}, {j}) for {n} rows"
        )));
    }
    let (ri, rj) = (&table.rows()[i], &table.rows()[j]);
    let mut num = 0.0;
    let mut den = 0usize;
    for (c, stat) in stats.stats.iter().enumerate() {
        if let Some(d) = contribution(*stat, ri[c], rj[c]) {
            num += d;
            den += 1;
        }
    }
    Ok((den > 0).then(|| (num / den as f64).min(1.0)))
}

/// Pairwise dissimilarities between all rows, labelled by row label.
///
/// Rows are evaluated in parallel; every cell is computed once by
/// [`gower_pair`] and mirrored, so the result does not depend on scheduling.
pub fn dissimilarity_matrix(table: &ProjectTable) -> Result<RelationMatrix> {
    let n = table.n_rows();
    if n < 2 {
        return Err(Error::data(format!("need ≥ 2 rows, found {n}")));
    }
    if !table.columns().iter().any(|c| c.role == Role::Feature) {
        return Err(Error::data("need ≥ 1 feature column"));
    }
    let stats = ColumnStats::from_table(table);

    let upper: Vec<Vec<Option<f64>>> = (0..n)
        .into_par_iter()
        .map(|i| {
            ((i + 1)..n)
                .map(|j| gower_pair(table, i, j, &stats))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let mut values = vec![vec![None; n]; n];
    let mut defined = 0usize;
    for i in 0..n {
        values[i][i] = Some(0.0);
        for (off, v) in upper[i].iter().enumerate() {
            let j = i + 1 + off;
            defined += usize::from(v.is_some());
            values[i][j] = *v;
            values[j][i] = *v;
        }
    }
    if defined == 0 {
        return Err(Error::data(
            "every project pair is undefined (no comparable feature values)",
        ));
    }
    RelationMatrix::new(
        table.row_labels().to_vec(),
        values,
        MatrixKind::Dissimilarity,
    )
}

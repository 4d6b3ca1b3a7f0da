use rayon::prelude::*;

use super::{MatrixKind, RelationMatrix};
use crate::error::{Error, Result};
use crate::ingest::{ProjectTable, Role};

/// Midranks (1-based) of the present values; missing entries stay missing.
pub fn column_ranks(values: &[Option<f64>]) -> Result<Vec<Option<f64>>> {
    let mut present: Vec<(usize, f64)> = values
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.map(|x| (i, x)))
        .collect();
    if present.is_empty() {
        return Err(Error::data("cannot rank a column with no present values"));
    }
    present.sort_by(|a, b| a.1.total_cmp(&b.1));

    let mut ranks = vec![None; values.len()];
    let mut start = 0;
    while start < present.len() {
        let mut end = start + 1;
        while end < present.len() && present[end].1 == present[start].1 {
            end += 1;
        }
        // positions start+1 ..= end share their average
        let midrank = (start + 1 + end) as f64 / 2.0;
        for &(idx, _) in &present[start..end] {
            ranks[idx] = Some(midrank);
        }
        start = end;
    }
    Ok(ranks)
}

fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let dx = a - mx;
        let dy = b - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Spearman's rho over pairwise-complete rows: Pearson correlation of the
/// midranks of the complete subsequences.
///
/// `Ok(None)` when fewer than two complete pairs remain or either side is constant.
pub fn spearman(x: &[Option<f64>], y: &[Option<f64>]) -> Result<Option<f64>> {
    if x.len() != y.len() {
        return Err(Error::data(format!(
            "column length mismatch: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    let (xs, ys): (Vec<Option<f64>>, Vec<Option<f64>>) = x
        .iter()
        .zip(y)
        .filter(|(a, b)| a.is_some() && b.is_some())
        .map(|(a, b)| (*a, *b))
        .unzip();
    if xs.len() < 2 {
        return Ok(None);
    }
    let is_constant = |v: &[Option<f64>]| v.iter().all(|a| *a == v[0]);
    if is_constant(&xs) || is_constant(&ys) {
        return Ok(None);
    }
    let rx: Vec<f64> = column_ranks(&xs)?.into_iter().flatten().collect();
    let ry: Vec<f64> = column_ranks(&ys)?.into_iter().flatten().collect();
    Ok(pearson(&rx, &ry))
}

/// Spearman correlations between every numeric or ordinal column with role
/// feature or target. Ordinal cells enter as their 1-based level index.
pub fn spearman_matrix(table: &ProjectTable) -> Result<RelationMatrix> {
    let eligible: Vec<usize> = table
        .columns()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.role != Role::Identifier && (c.kind.is_numeric() || c.kind.is_ordinal()))
        .map(|(i, _)| i)
        .collect();
    if eligible.len() < 2 {
        return Err(Error::data(format!(
            "fewer than 2 eligible columns (numeric or ordinal, feature or target): found {}",
            eligible.len()
        )));
    }
    let views: Vec<Vec<Option<f64>>> = eligible
        .iter()
        .map(|&c| {
            table
                .numeric_view(c)
                .expect("eligible columns are numeric or ordinal")
        })
        .collect();

    let k = eligible.len();
    let upper: Vec<Vec<Option<f64>>> = (0..k)
        .into_par_iter()
        .map(|i| {
            ((i + 1)..k)
                .map(|j| spearman(&views[i], &views[j]))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let mut values = vec![vec![None; k]; k];
    for i in 0..k {
        values[i][i] = Some(1.0);
        for (off, v) in upper[i].iter().enumerate() {
            let j = i + 1 + off;
            values[i][j] = *v;
            values[j][i] = *v;
        }
    }
    let labels = eligible
        .iter()
        .map(|&c| table.columns()[c].name.clone())
        .collect();
    RelationMatrix::new(labels, values, MatrixKind::Correlation)
}

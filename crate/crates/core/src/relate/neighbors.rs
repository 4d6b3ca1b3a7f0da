use std::cmp::Ordering;
use std::fmt;

use super::{MatrixKind, RelationMatrix};
use crate::error::{Error, Result};
use crate::util::label_cmp;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NeighborPolicy {
    /// The k most similar projects (clamped to n - 1).
    TopK(usize),
    /// Every project with similarity at or above the cutoff.
    MinSimilarity(f64),
}

/// One line per project: its neighbours by descending similarity.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborhoodReport {
    pub entries: Vec<(String, Vec<(String, f64)>)>,
}

impl NeighborhoodReport {
    pub fn neighbors_of(&self, label: &str) -> Option<&[(String, f64)]> {
        self.entries
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, n)| n.as_slice())
    }
}

impl fmt::Display for NeighborhoodReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (label, neighbors) in &self.entries {
            write!(f, "{label}:")?;
            for (k, (other, s)) in neighbors.iter().enumerate() {
                let sep = if k == 0 { " " } else { ", " };
                write!(f, "{sep}{other}(s={s:.2})")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Neighbour lists from a similarity matrix. Ties in similarity are broken by
/// ascending label; undefined cells are never neighbours.
pub fn neighborhoods(m: &RelationMatrix, policy: NeighborPolicy) -> Result<NeighborhoodReport> {
    if m.kind() != MatrixKind::Similarity {
        return Err(Error::data(format!(
            "neighbourhoods need a similarity matrix, got {}",
            m.kind()
        )));
    }
    match policy {
        NeighborPolicy::TopK(0) => return Err(Error::data("top-k must be at least 1")),
        NeighborPolicy::MinSimilarity(c) if !c.is_finite() => {
            return Err(Error::data("similarity cutoff must be finite"))
        }
        _ => {}
    }
    let labels = m.labels();
    let entries = (0..m.len())
        .map(|i| {
            let mut row: Vec<(String, f64)> = (0..m.len())
                .filter(|&j| j != i)
                .filter_map(|j| m.get(i, j).map(|s| (labels[j].clone(), s)))
                .collect();
            row.sort_by(|a, b| {
                b.1.partial_cmp(&a.1)
                    .unwrap_or(Ordering::Equal)
                    .then_with(|| label_cmp(&a.0, &b.0))
            });
            match policy {
                NeighborPolicy::TopK(k) => row.truncate(k),
                NeighborPolicy::MinSimilarity(c) => row.retain(|(_, s)| *s >= c),
            }
            (labels[i].clone(), row)
        })
        .collect();
    Ok(NeighborhoodReport { entries })
}

use std::cmp::Ordering;
use std::collections::HashMap;

use super::Edge;
use crate::error::{Error, Result};
use crate::relate::RelationMatrix;
use crate::util::{label_cmp, quantile_sorted};

/// Which off-diagonal pairs become ribbons.
#[derive(Debug, Clone, PartialEq)]
pub enum EdgeFilter {
    /// Keep pairs with `value >= t`.
    MinValue(f64),
    /// Keep pairs with `|value| >= t`; negative correlations survive.
    MinMagnitude(f64),
    /// Keep the strongest `ceil(f * n)` of the `n` defined pairs.
    TopFraction(f64),
    /// Keep a pair if it is among the `k` strongest of either endpoint.
    TopKPerNode(usize),
}

/// 90th percentile of the defined off-diagonal values.
pub fn default_similarity_filter(m: &RelationMatrix) -> EdgeFilter {
    let mut values: Vec<f64> = (0..m.len())
        .flat_map(|i| ((i + 1)..m.len()).filter_map(move |j| m.get(i, j)))
        .collect();
    if values.is_empty() {
        return EdgeFilter::MinValue(0.0);
    }
    values.sort_by(f64::total_cmp);
    EdgeFilter::MinValue(quantile_sorted(&values, 0.9))
}

fn edge_order(a: &Edge, b: &Edge) -> Ordering {
    b.magnitude
        .partial_cmp(&a.magnitude)
        .unwrap_or(Ordering::Equal)
        .then_with(|| label_cmp(&a.source, &b.source))
        .then_with(|| label_cmp(&a.target, &b.target))
}

/// Every defined pair `{i, j}`, `i < j`, passing `filter`, ordered by
/// descending magnitude, then source label, then target label.
///
/// Undefined cells and zero-magnitude pairs are never selected: a ribbon of
/// zero width cannot be drawn.
pub fn select_edges(m: &RelationMatrix, filter: &EdgeFilter) -> Result<Vec<Edge>> {
    let labels = m.labels();
    let mut all = Vec::new();
    for i in 0..m.len() {
        for j in (i + 1)..m.len() {
            if let Some(value) = m.get(i, j) {
                if value != 0.0 {
                    all.push(Edge {
                        source: labels[i].clone(),
                        target: labels[j].clone(),
                        value,
                        magnitude: value.abs(),
                        bin: 0,
                    });
                }
            }
        }
    }
    all.sort_by(edge_order);

    let selected: Vec<Edge> = match *filter {
        EdgeFilter::MinValue(t) => all.into_iter().filter(|e| e.value >= t).collect(),
        EdgeFilter::MinMagnitude(t) => all.into_iter().filter(|e| e.magnitude >= t).collect(),
        EdgeFilter::TopFraction(f) => {
            if !(f > 0.0 && f <= 1.0) {
                return Err(Error::Layout(format!(
                    "top fraction must be in (0, 1], got {f}"
                )));
            }
            let keep = (f * all.len() as f64).ceil() as usize;
            all.truncate(keep);
            all
        }
        EdgeFilter::TopKPerNode(k) => {
            if k == 0 {
                return Err(Error::Layout("top-k-per-node must be at least 1".into()));
            }
            let mut seen: HashMap<&str, usize> = HashMap::new();
            let mut keep = vec![false; all.len()];
            for (idx, e) in all.iter().enumerate() {
                let s = seen.entry(e.source.as_str()).or_default();
                *s += 1;
                let in_source = *s <= k;
                let t = seen.entry(e.target.as_str()).or_default();
                *t += 1;
                keep[idx] = in_source || *t <= k;
            }
            all.into_iter()
                .zip(keep)
                .filter_map(|(e, k)| k.then_some(e))
                .collect()
        }
    };

    if selected.is_empty() {
        return Err(Error::Layout(
            "no pairs survive the edge filter; use a looser policy (lower threshold or larger fraction)"
                .into(),
        ));
    }
    Ok(selected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relate::MatrixKind;

    fn matrix(values: &[&[f64]], kind: MatrixKind) -> RelationMatrix {
        let labels = (1..=values.len()).map(|i| i.to_string()).collect();
        let rows = values
            .iter()
            .map(|r| r.iter().map(|v| Some(*v)).collect())
            .collect();
        RelationMatrix::new(labels, rows, kind).unwrap()
    }

    #[test]
    fn single_edge_above_cutoff() {
        let m = matrix(
            &[&[1.0, 0.9, 0.1], &[0.9, 1.0, 0.2], &[0.1, 0.2, 1.0]],
            MatrixKind::Similarity,
        );
        let e = select_edges(&m, &EdgeFilter::MinValue(0.5)).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(
            (e[0].source.as_str(), e[0].target.as_str(), e[0].value),
            ("1", "2", 0.9)
        );
    }

    #[test]
    fn negative_correlations_survive_magnitude_filter() {
        let m = matrix(
            &[&[1.0, -0.7, 0.2], &[-0.7, 1.0, 0.5], &[0.2, 0.5, 1.0]],
            MatrixKind::Correlation,
        );
        let e = select_edges(&m, &EdgeFilter::MinMagnitude(0.5)).unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(e[0].value, -0.7);
        assert_eq!(e[0].magnitude, 0.7);
    }

    #[test]
    fn top_fraction_one_keeps_everything() {
        let m = matrix(
            &[&[1.0, 0.9, 0.1], &[0.9, 1.0, 0.2], &[0.1, 0.2, 1.0]],
            MatrixKind::Similarity,
        );
        assert_eq!(
            select_edges(&m, &EdgeFilter::TopFraction(1.0))
                .unwrap()
                .len(),
            3
        );
        assert_eq!(
            select_edges(&m, &EdgeFilter::TopFraction(0.3))
                .unwrap()
                .len(),
            1
        );
        assert!(select_edges(&m, &EdgeFilter::TopFraction(0.0)).is_err());
    }

    #[test]
    fn ordering_breaks_ties_by_labels() {
        let m = matrix(
            &[&[1.0, 0.5, 0.5], &[0.5, 1.0, 0.5], &[0.5, 0.5, 1.0]],
            MatrixKind::Similarity,
        );
        let e = select_edges(&m, &EdgeFilter::MinValue(0.0)).unwrap();
        let pairs: Vec<(&str, &str)> = e
            .iter()
            .map(|e| (e.source.as_str(), e.target.as_str()))
            .collect();
        assert_eq!(pairs, [("1", "2"), ("1", "3"), ("2", "3")]);
    }

    #[test]
    fn top_k_per_node_is_union() {
        let m = matrix(
            &[
                &[1.0, 0.9, 0.8, 0.1],
                &[0.9, 1.0, 0.2, 0.3],
                &[0.8, 0.2, 1.0, 0.4],
                &[0.1, 0.3, 0.4, 1.0],
            ],
            MatrixKind::Similarity,
        );
        let e = select_edges(&m, &EdgeFilter::TopKPerNode(1)).unwrap();
        let pairs: Vec<(&str, &str)> = e
            .iter()
            .map(|e| (e.source.as_str(), e.target.as_str()))
            .collect();
        // 1's best is 2, 2's best is 1, 3's best is 1, 4's best is 3
        assert_eq!(pairs, [("1", "2"), ("1", "3"), ("3", "4")]);
    }

    #[test]
    fn empty_selection_advises() {
        let m = matrix(&[&[1.0, 0.2], &[0.2, 1.0]], MatrixKind::Similarity);
        let err = select_edges(&m, &EdgeFilter::MinValue(0.9))
            .unwrap_err()
            .to_string();
        assert!(err.contains("looser"));
    }

    #[test]
    fn default_filter_is_ninetieth_percentile() {
        let m = matrix(
            &[&[1.0, 0.1, 0.2], &[0.1, 1.0, 0.3], &[0.2, 0.3, 1.0]],
            MatrixKind::Similarity,
        );
        match default_similarity_filter(&m) {
            EdgeFilter::MinValue(t) => assert!((t - 0.28).abs() < 1e-12),
            f => panic!("{f:?}"),
        }
    }
}

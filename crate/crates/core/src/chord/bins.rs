use super::Edge;
use crate::error::{Error, Result};
use crate::relate::MatrixKind;
use crate::util::quantile_sorted;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinMode {
    Quantile,
    EqualWidth,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BinSpec {
    pub count: usize,
    pub mode: BinMode,
}

impl Default for BinSpec {
    fn default() -> Self {
        Self {
            count: 6,
            mode: BinMode::EqualWidth,
        }
    }
}

/// Closed value interval covered by one bin (magnitudes for correlations).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Binning {
    /// One entry per bin index actually in use; index 0 is the strongest.
    pub bands: Vec<Band>,
    pub requested: usize,
    /// Quantile mode found fewer distinct values than bins and used fewer.
    pub degraded: bool,
}

/// Assigns each edge a bin index, 0 being the strongest band.
///
/// Similarity matrices reserve bin 0 for exact 1.0 (perfect similarity) and
/// split the remaining values into `count - 1` bands. Other kinds bin
/// magnitudes into `count` bands. A value equal to a band boundary goes to the
/// stronger band. Quantile thresholds are taken over the distinct values so
/// that heavy ties cannot produce empty bands.
pub fn bin_values(
    edges: &[Edge],
    spec: &BinSpec,
    kind: MatrixKind,
) -> Result<(Vec<Edge>, Binning)> {
    if spec.count < 2 {
        return Err(Error::Layout(format!(
            "bin count must be at least 2, got {}",
            spec.count
        )));
    }
    let reserve_exact = kind == MatrixKind::Similarity;
    let key = |e: &Edge| if reserve_exact { e.value } else { e.magnitude };
    let offset = usize::from(reserve_exact);
    let wanted = spec.count - offset;

    let mut rest: Vec<f64> = edges
        .iter()
        .map(key)
        .filter(|v| !(reserve_exact && *v == 1.0))
        .collect();
    rest.sort_by(f64::total_cmp);

    let mut degraded = false;
    // descending thresholds: band b holds t[b] <= v < t[b-1]
    let thresholds: Vec<f64> = if rest.is_empty() {
        Vec::new()
    } else {
        let (lo, hi) = (rest[0], rest[rest.len() - 1]);
        match spec.mode {
            BinMode::EqualWidth => {
                let width = (hi - lo) / wanted as f64;
                if width > 0.0 {
                    (1..wanted).map(|b| hi - b as f64 * width).collect()
                } else {
                    Vec::new()
                }
            }
            BinMode::Quantile => {
                let mut distinct = rest.clone();
                distinct.dedup();
                let bands = if distinct.len() < wanted {
                    degraded = true;
                    distinct.len()
                } else {
                    wanted
                };
                let mut t: Vec<f64> = (1..bands)
                    .map(|b| quantile_sorted(&distinct, 1.0 - b as f64 / bands as f64))
                    .filter(|t| *t > lo)
                    .collect();
                t.dedup();
                if t.len() + 1 < bands {
                    degraded = true;
                }
                t
            }
        }
    };

    let mut bands = Vec::new();
    if reserve_exact {
        bands.push(Band { lo: 1.0, hi: 1.0 });
    }
    if let (Some(&lo), Some(&hi)) = (rest.first(), rest.last()) {
        let mut upper = hi;
        for &t in &thresholds {
            bands.push(Band { lo: t, hi: upper });
            upper = t;
        }
        bands.push(Band { lo, hi: upper });
    }

    let binned = edges
        .iter()
        .map(|e| {
            let v = key(e);
            let bin = if reserve_exact && v == 1.0 {
                0
            } else {
                offset + thresholds.iter().filter(|&&t| v < t).count()
            };
            Edge { bin, ..e.clone() }
        })
        .collect();

    Ok((
        binned,
        Binning {
            bands,
            requested: spec.count,
            degraded,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edges(values: &[f64]) -> Vec<Edge> {
        values
            .iter()
            .enumerate()
            .map(|(i, &v)| Edge {
                source: i.to_string(),
                target: (i + 100).to_string(),
                value: v,
                magnitude: v.abs(),
                bin: 0,
            })
            .collect()
    }

    fn bins_of(e: &[Edge]) -> Vec<usize> {
        e.iter().map(|e| e.bin).collect()
    }

    #[test]
    fn equal_width_with_reserved_exact_bin() {
        // [.6, .95] split into two bands of width .175; boundary .775
        let spec = BinSpec {
            count: 3,
            mode: BinMode::EqualWidth,
        };
        let (e, b) = bin_values(
            &edges(&[1.0, 0.95, 0.9, 0.6]),
            &spec,
            MatrixKind::Similarity,
        )
        .unwrap();
        assert_eq!(bins_of(&e), [0, 1, 1, 2]);
        assert_eq!(b.bands.len(), 3);
        assert!((b.bands[1].lo - 0.775).abs() < 1e-12);
    }

    #[test]
    fn all_perfect() {
        let spec = BinSpec {
            count: 4,
            mode: BinMode::EqualWidth,
        };
        let (e, _) = bin_values(&edges(&[1.0, 1.0]), &spec, MatrixKind::Similarity).unwrap();
        assert_eq!(bins_of(&e), [0, 0]);
    }

    #[test]
    fn correlation_bins_on_magnitude() {
        let spec = BinSpec {
            count: 3,
            mode: BinMode::EqualWidth,
        };
        let (e, _) = bin_values(&edges(&[0.8, -0.8, 0.2]), &spec, MatrixKind::Correlation).unwrap();
        assert_eq!(e[0].bin, e[1].bin);
        assert_eq!(e[0].bin, 0);
        assert_eq!(e[2].bin, 2);
    }

    #[test]
    fn boundary_goes_to_stronger_bin() {
        // width 0.5 over [0, 1] with 2 bands: boundary at exactly 0.5
        let spec = BinSpec {
            count: 2,
            mode: BinMode::EqualWidth,
        };
        let (e, _) = bin_values(&edges(&[1.0, 0.5, 0.0]), &spec, MatrixKind::Correlation).unwrap();
        assert_eq!(bins_of(&e), [0, 0, 1]);
    }

    #[test]
    fn quantile_degrades_with_few_distinct_values() {
        let spec = BinSpec {
            count: 6,
            mode: BinMode::Quantile,
        };
        let (e, b) = bin_values(&edges(&[0.5, 0.5, 0.7]), &spec, MatrixKind::Correlation).unwrap();
        assert!(b.degraded);
        assert_eq!(b.bands.len(), 2);
        assert_eq!(bins_of(&e), [1, 1, 0]);
    }

    #[test]
    fn quantile_splits_evenly() {
        let spec = BinSpec {
            count: 2,
            mode: BinMode::Quantile,
        };
        let (e, b) = bin_values(
            &edges(&[0.1, 0.2, 0.3, 0.4]),
            &spec,
            MatrixKind::Correlation,
        )
        .unwrap();
        assert!(!b.degraded);
        assert_eq!(bins_of(&e), [1, 1, 0, 0]);
    }

    #[test]
    fn count_below_two_rejected() {
        let spec = BinSpec {
            count: 1,
            mode: BinMode::EqualWidth,
        };
        assert!(bin_values(&edges(&[0.5]), &spec, MatrixKind::Correlation).is_err());
    }
}

//! Relation matrices between projects (dissimilarity/similarity) and between
//! attributes (rank correlation).

mod gower;
mod neighbors;
mod rank;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub use gower::{dissimilarity_matrix, gower_pair, ColumnStats};
pub use neighbors::{neighborhoods, NeighborPolicy, NeighborhoodReport};
pub use rank::{column_ranks, spearman, spearman_matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    Dissimilarity,
    Similarity,
    Correlation,
}

impl MatrixKind {
    fn diagonal(self) -> f64 {
        match self {
            MatrixKind::Dissimilarity => 0.0,
            MatrixKind::Similarity | MatrixKind::Correlation => 1.0,
        }
    }

    fn range(self) -> (f64, f64) {
        match self {
            MatrixKind::Correlation => (-1.0, 1.0),
            _ => (0.0, 1.0),
        }
    }
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MatrixKind::Dissimilarity => "dissimilarity",
            MatrixKind::Similarity => "similarity",
            MatrixKind::Correlation => "correlation",
        })
    }
}

impl FromStr for MatrixKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "dissimilarity" => Ok(MatrixKind::Dissimilarity),
            "similarity" => Ok(MatrixKind::Similarity),
            "correlation" => Ok(MatrixKind::Correlation),
            other => Err(Error::data(format!("unknown matrix kind {other:?}"))),
        }
    }
}

/// A labelled symmetric matrix. `None` marks an undefined cell.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationMatrix {
    labels: Vec<String>,
    values: Vec<Option<f64>>,
    kind: MatrixKind,
}

impl RelationMatrix {
    /// Checks symmetry, the kind's diagonal and the kind's value range.
    pub fn new(
        labels: Vec<String>,
        values: Vec<Vec<Option<f64>>>,
        kind: MatrixKind,
    ) -> Result<Self> {
        let n = labels.len();
        if values.len() != n || values.iter().any(|row| row.len() != n) {
            return Err(Error::data(format!("matrix must be {n}x{n}")));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::data(format!("duplicate matrix label {l}")));
            }
        }
        let (lo, hi) = kind.range();
        for i in 0..n {
            if values[i][i] != Some(kind.diagonal()) {
                return Err(Error::data(format!(
                    "diagonal entry {} must be {} for a {kind} matrix",
                    labels[i],
                    kind.diagonal()
                )));
            }
            for j in 0..n {
                if values[i][j] != values[j][i] {
                    return Err(Error::data(format!(
                        "matrix not symmetric at ({}, {})",
                        labels[i], labels[j]
                    )));
                }
                if let Some(v) = values[i][j] {
                    if !(lo..=hi).contains(&v) {
                        return Err(Error::data(format!(
                            "entry ({}, {}) = {v} outside [{lo}, {hi}]",
                            labels[i], labels[j]
                        )));
                    }
                }
            }
        }
        Ok(Self {
            labels,
            values: values.into_iter().flatten().collect(),
            kind,
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.values[i * self.labels.len() + j]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn rows(&self) -> Vec<Vec<Option<f64>>> {
        self.values
            .chunks(self.labels.len().max(1))
            .map(<[Option<f64>]>::to_vec)
            .collect()
    }

    /// `s = 1 - d` entrywise; undefined stays undefined and the diagonal becomes 1.
    pub fn to_similarity(&self) -> Result<RelationMatrix> {
        if self.kind != MatrixKind::Dissimilarity {
            return Err(Error::data(format!(
                "expected a dissimilarity matrix, got {}",
                self.kind
            )));
        }
        Ok(self.map_kind(MatrixKind::Similarity))
    }

    /// Inverse of [`to_similarity`](Self::to_similarity).
    pub fn to_dissimilarity(&self) -> Result<RelationMatrix> {
        if self.kind != MatrixKind::Similarity {
            return Err(Error::data(format!(
                "expected a similarity matrix, got {}",
                self.kind
            )));
        }
        Ok(self.map_kind(MatrixKind::Dissimilarity))
    }

    fn map_kind(&self, kind: MatrixKind) -> RelationMatrix {
        let n = self.len();
        let mut values: Vec<Option<f64>> = self.values.iter().map(|v| v.map(|x| 1.0 - x)).collect();
        for i in 0..n {
            values[i * n + i] = Some(kind.diagonal());
        }
        RelationMatrix {
            labels: self.labels.clone(),
            values,
            kind,
        }
    }

    /// CSV with a `# kind:` comment line, a header row and a label column.
    /// Undefined cells are empty. Extra `comments` are written as `# ...` lines.
    pub fn to_csv(&self, comments: &[&str]) -> String {
        let mut out = format!("# kind: {}\n", self.kind);
        for c in comments {
            out.push_str("# ");
            out.push_str(c);
            out.push('\n');
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["label".to_string()];
        header.extend(self.labels.iter().cloned());
        w.write_record(&header).expect("in-memory csv write");
        for (i, label) in self.labels.iter().enumerate() {
            let mut rec = vec![label.clone()];
            rec.extend(
                (0..self.len()).map(|j| self.get(i, j).map_or(String::new(), |v| v.to_string())),
            );
            w.write_record(&rec).expect("in-memory csv write");
        }
        out.push_str(
            &String::from_utf8(w.into_inner().expect("in-memory csv flush")).expect("utf-8"),
        );
        out
    }

    pub fn from_csv(text: &str) -> Result<RelationMatrix> {
        let mut kind = None;
        let mut body_start = 0;
        let mut comment_lines = 0;
        for line in text.split_inclusive('\n') {
            let trimmed = line.trim();
            if let Some(comment) = trimmed.strip_prefix('#') {
                if let Some(k) = comment.trim().strip_prefix("kind:") {
                    kind = Some(k.parse::<MatrixKind>()?);
                }
                body_start += line.len();
                comment_lines += 1;
            } else {
                break;
            }
        }
        let kind = kind.ok_or_else(|| Error::parse(1, "missing `# kind: <kind>` line"))?;

        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(&text.as_bytes()[body_start..]);
        let header: Vec<String> = reader
            .headers()
            .map_err(|e| Error::parse(comment_lines + 1, e.to_string()))?
            .iter()
            .skip(1)
            .map(str::to_string)
            .collect();
        let mut labels = Vec::new();
        let mut values = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| {
                let line = e.position().map_or(0, |p| p.line() as usize);
                Error::parse(line + comment_lines, e.to_string())
            })?;
            let line = record.position().map_or(0, |p| p.line() as usize) + comment_lines;
            let mut fields = record.iter();
            labels.push(fields.next().unwrap_or_default().to_string());
            let row = fields
                .map(|f| {
                    if f.is_empty() {
                        Ok(None)
                    } else {
                        f.parse::<f64>()
                            .ok()
                            .filter(|v| v.is_finite())
                            .map(Some)
                            .ok_or_else(|| Error::parse(line, format!("bad matrix value {f:?}")))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            values.push(row);
        }
        if labels != header {
            return Err(Error::data("row labels do not match header labels"));
        }
        RelationMatrix::new(labels, values, kind)
    }
}

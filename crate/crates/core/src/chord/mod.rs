//! Matrix-to-chord layout: which pairs become ribbons, which colour band each
//! falls in, how much of the circle each node gets and where each ribbon
//! attaches.
//!
//! Angles are in degrees, measured clockwise from 12 o'clock.

mod angles;
mod bins;
mod select;

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::relate::{MatrixKind, RelationMatrix};
use crate::style::color::{segment_color, Color};

pub use angles::{allocate_angles, place_ribbons};
pub use bins::{bin_values, Band, BinMode, BinSpec, Binning};
pub use select::{default_similarity_filter, select_edges, EdgeFilter};

/// A selected unordered pair. `source` precedes `target` in matrix order.
#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub source: String,
    pub target: String,
    pub value: f64,
    pub magnitude: f64,
    pub bin: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub label: String,
    pub start_angle: f64,
    pub end_angle: f64,
    /// Sum of incident edge magnitudes.
    pub total: f64,
    pub color: Color,
}

impl Segment {
    pub fn span(&self) -> f64 {
        self.end_angle - self.start_angle
    }

    pub fn mid_angle(&self) -> f64 {
        (self.start_angle + self.end_angle) / 2.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RibbonStyle {
    pub color: Color,
    pub opacity: f64,
    pub visible: bool,
    pub z: i64,
}

pub const DEFAULT_RIBBON_OPACITY: f64 = 0.75;

#[derive(Debug, Clone, PartialEq)]
pub struct Ribbon {
    pub edge: Edge,
    pub source_subarc: (f64, f64),
    pub target_subarc: (f64, f64),
    pub style: RibbonStyle,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayoutMeta {
    pub kind: MatrixKind,
    pub binning: Binning,
    pub gap_degrees: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChordLayout {
    pub segments: Vec<Segment>,
    pub ribbons: Vec<Ribbon>,
    pub meta: LayoutMeta,
}

/// Where a ribbon's default colour comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RibbonColoring {
    /// Palette entry of the ribbon's bin.
    Bin,
    /// Colour of the source segment, so each attribute keeps its own hue.
    Source,
}

impl RibbonColoring {
    pub fn for_kind(kind: MatrixKind) -> Self {
        match kind {
            MatrixKind::Correlation => RibbonColoring::Source,
            _ => RibbonColoring::Bin,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayoutOptions {
    pub filter: EdgeFilter,
    pub bins: BinSpec,
    pub gap_degrees: f64,
    pub coloring: RibbonColoring,
}

impl LayoutOptions {
    /// Kind-appropriate colouring with the given filter, default bins and a 2° gap.
    pub fn new(kind: MatrixKind, filter: EdgeFilter) -> Self {
        Self {
            filter,
            bins: BinSpec::default(),
            gap_degrees: 2.0,
            coloring: RibbonColoring::for_kind(kind),
        }
    }
}

/// Runs selection, binning, angle allocation and ribbon placement, then gives
/// every ribbon its default style per `options.coloring`.
pub fn build_layout(
    m: &RelationMatrix,
    options: &LayoutOptions,
    palette: &[Color],
) -> Result<ChordLayout> {
    if palette.len() < options.bins.count {
        return Err(Error::Layout(format!(
            "palette has {} colours but {} bins were requested",
            palette.len(),
            options.bins.count
        )));
    }
    let edges = select_edges(m, &options.filter)?;
    let (edges, binning) = bin_values(&edges, &options.bins, m.kind())?;

    let mut segments = allocate_angles(&edges, m.labels(), options.gap_degrees)?;
    for seg in &mut segments {
        let idx = m
            .index_of(&seg.label)
            .expect("segment labels come from the matrix");
        seg.color = segment_color(idx);
    }
    let mut ribbons = place_ribbons(&segments, &edges)?;
    for rb in &mut ribbons {
        rb.style.color = match options.coloring {
            RibbonColoring::Source => segments
                .iter()
                .find(|s| s.label == rb.edge.source)
                .map(|s| s.color.clone())
                .expect("placed ribbons reference existing segments"),
            RibbonColoring::Bin => palette[rb.edge.bin].clone(),
        };
    }
    Ok(ChordLayout {
        segments,
        ribbons,
        meta: LayoutMeta {
            kind: m.kind(),
            binning,
            gap_degrees: options.gap_degrees,
        },
    })
}

impl ChordLayout {
    /// Plain-text dump with fixed 6-decimal numbers, one line per segment and
    /// one per ribbon.
    pub fn debug_dump(&self) -> String {
        let mut out = String::new();
        let b = &self.meta.binning;
        let _ = writeln!(
            out,
            "layout kind={} gap={:.6} bins={} requested_bins={}{}",
            self.meta.kind,
            self.meta.gap_degrees,
            b.bands.len(),
            b.requested,
            if b.degraded { " degraded" } else { "" }
        );
        for (i, band) in b.bands.iter().enumerate() {
            let _ = writeln!(out, "band {i} lo={:.6} hi={:.6}", band.lo, band.hi);
        }
        for s in &self.segments {
            let _ = writeln!(
                out,
                "segment {} start={:.6} end={:.6} total={:.6} color={}",
                s.label, s.start_angle, s.end_angle, s.total, s.color
            );
        }
        for r in &self.ribbons {
            let _ = writeln!(
                out,
                "ribbon {}-{} value={:.6} bin={} source=[{:.6},{:.6}] target=[{:.6},{:.6}] \
                 color={} opacity={:.6} visible={} z={}",
                r.edge.source,
                r.edge.target,
                r.edge.value,
                r.edge.bin,
                r.source_subarc.0,
                r.source_subarc.1,
                r.target_subarc.0,
                r.target_subarc.1,
                r.style.color,
                r.style.opacity,
                r.style.visible,
                r.style.z
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::style::color::default_palette;

    fn corr() -> RelationMatrix {
        let v = |x: f64| Some(x);
        RelationMatrix::new(
            vec!["A".into(), "B".into(), "C".into()],
            vec![
                vec![v(1.0), v(0.8), v(-0.6)],
                vec![v(0.8), v(1.0), v(0.1)],
                vec![v(-0.6), v(0.1), v(1.0)],
            ],
            MatrixKind::Correlation,
        )
        .unwrap()
    }

    #[test]
    fn correlation_ribbons_take_source_colour() {
        let opts = LayoutOptions::new(MatrixKind::Correlation, EdgeFilter::MinMagnitude(0.5));
        let layout = build_layout(&corr(), &opts, &default_palette()).unwrap();
        assert_eq!(layout.ribbons.len(), 2);
        for r in &layout.ribbons {
            let src = layout
                .segments
                .iter()
                .find(|s| s.label == r.edge.source)
                .unwrap();
            assert_eq!(r.style.color, src.color);
        }
        assert!(layout.ribbons.iter().any(|r| r.edge.value < 0.0));
    }

    #[test]
    fn short_palette_rejected() {
        let opts = LayoutOptions::new(MatrixKind::Correlation, EdgeFilter::MinMagnitude(0.5));
        assert!(build_layout(&corr(), &opts, &default_palette()[..3]).is_err());
    }

    #[test]
    fn dump_is_deterministic() {
        let opts = LayoutOptions {
            gap_degrees: 1.0,
            ..LayoutOptions::new(MatrixKind::Correlation, EdgeFilter::TopFraction(1.0))
        };
        let a = build_layout(&corr(), &opts, &default_palette()).unwrap();
        let b = build_layout(&corr(), &opts, &default_palette()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.debug_dump(), b.debug_dump());
        assert!(a.debug_dump().contains("segment A start=0.000000"));
    }
}

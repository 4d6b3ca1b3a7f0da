//! Deterministic SVG output for styled chord layouts.
//!
//! Element order is fixed: background, segments by start angle, visible
//! ribbons by z then layout order, segment labels, legend. Every coordinate
//! is printed with three decimals so output is byte-stable.

mod geometry;

use std::fmt::Write as _;

use crate::chord::ChordLayout;
use crate::relate::MatrixKind;
use crate::style::StyleSheet;

pub use geometry::{fmt3, polar_point, ribbon_path, segment_path, Point};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderOptions {
    /// Fraction of the way the ribbon control points move toward the centre.
    pub pull: f64,
    /// Inner wedge radius as a fraction of the sheet radius; ribbons attach here.
    pub inner_ratio: f64,
    /// Label anchor radius as a fraction of the sheet radius.
    pub label_ratio: f64,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self {
            pull: 1.0,
            inner_ratio: 0.92,
            label_ratio: 1.04,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementKind {
    Background,
    Segment,
    Ribbon,
    Label,
    Legend,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    pub kind: ElementKind,
    pub markup: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvgDocument {
    pub width: f64,
    pub height: f64,
    pub elements: Vec<Element>,
    pub text: String,
    /// Non-fatal diagnostics, e.g. a diagram with no visible ribbons.
    pub warnings: Vec<String>,
}

impl SvgDocument {
    pub fn count(&self, kind: ElementKind) -> usize {
        self.elements.iter().filter(|e| e.kind == kind).count()
    }
}

pub fn render_svg(layout: &ChordLayout, sheet: &StyleSheet) -> SvgDocument {
    render_svg_with(layout, sheet, &RenderOptions::default())
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

fn fmt_opacity(o: f64) -> String {
    let s = format!("{o:.3}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

pub fn render_svg_with(
    layout: &ChordLayout,
    sheet: &StyleSheet,
    opts: &RenderOptions,
) -> SvgDocument {
    let g = &sheet.globals;
    let r_outer = g.radius;
    let r_inner = g.radius * opts.inner_ratio;
    let r_label = g.radius * opts.label_ratio;
    let longest = layout
        .segments
        .iter()
        .map(|s| s.label.chars().count())
        .max()
        .unwrap_or(0);
    let extent = r_label + g.label_font_size * (0.6 * longest as f64 + 1.0) + 10.0;
    let side = 2.0 * extent;
    let center = (extent, extent);

    let mut elements = Vec::new();
    let mut warnings = Vec::new();

    elements.push(Element {
        kind: ElementKind::Background,
        markup: format!(
            r#"<rect x="0.000" y="0.000" width="{w}" height="{w}" fill="{}"/>"#,
            g.background,
            w = fmt3(side)
        ),
    });

    let mut segments: Vec<_> = layout.segments.iter().collect();
    segments.sort_by(|a, b| a.start_angle.total_cmp(&b.start_angle));
    for s in &segments {
        elements.push(Element {
            kind: ElementKind::Segment,
            markup: format!(
                r#"<path class="segment" d="{}" fill="{}"/>"#,
                segment_path(s, center, r_inner, r_outer),
                s.color
            ),
        });
    }

    let mut visible: Vec<_> = layout.ribbons.iter().filter(|r| r.style.visible).collect();
    visible.sort_by_key(|r| r.style.z);
    if visible.is_empty() {
        warnings.push("no visible ribbons; rendering ring and legend only".to_string());
    }
    for rb in &visible {
        elements.push(Element {
            kind: ElementKind::Ribbon,
            markup: format!(
                r#"<path class="ribbon" d="{}" fill="{}" fill-opacity="{}" stroke="none"/>"#,
                ribbon_path(rb, center, r_inner, opts.pull),
                rb.style.color,
                fmt_opacity(rb.style.opacity)
            ),
        });
    }

    for s in &segments {
        let mid = s.mid_angle();
        let (x, y) = polar_point(center, mid, r_label);
        let (rotation, anchor) = if mid < 180.0 {
            (mid - 90.0, "start")
        } else {
            (mid + 90.0, "end")
        };
        elements.push(Element {
            kind: ElementKind::Label,
            markup: format!(
                r#"<text class="label" x="{x}" y="{y}" transform="rotate({} {x} {y})" text-anchor="{anchor}" dominant-baseline="middle" font-family="sans-serif" font-size="{}">{}</text>"#,
                fmt3(rotation),
                fmt3(g.label_font_size),
                escape(&s.label),
                x = fmt3(x),
                y = fmt3(y),
            ),
        });
    }

    let title = match layout.meta.kind {
        MatrixKind::Similarity => "similarity",
        MatrixKind::Dissimilarity => "dissimilarity",
        MatrixKind::Correlation => "|correlation|",
    };
    let line = g.label_font_size + 6.0;
    elements.push(Element {
        kind: ElementKind::Legend,
        markup: format!(
            r#"<text class="legend" x="10.000" y="{}" font-family="sans-serif" font-size="{}">{}</text>"#,
            fmt3(10.0 + g.label_font_size),
            fmt3(g.label_font_size),
            title
        ),
    });
    for (i, band) in layout.meta.binning.bands.iter().enumerate() {
        let top = 10.0 + line * (i + 1) as f64;
        let label = if band.lo == band.hi {
            format!("bin {i}: {:.2}", band.hi)
        } else {
            format!("bin {i}: {:.2} to {:.2}", band.lo, band.hi)
        };
        let color = g.palette.get(i).map_or("grey", |c| c.as_str());
        elements.push(Element {
            kind: ElementKind::Legend,
            markup: format!(
                r#"<rect class="legend" x="10.000" y="{}" width="{s}" height="{s}" fill="{color}"/><text class="legend" x="{}" y="{}" font-family="sans-serif" font-size="{}">{label}</text>"#,
                fmt3(top),
                fmt3(16.0 + g.label_font_size),
                fmt3(top + g.label_font_size - 1.0),
                fmt3(g.label_font_size),
                s = fmt3(g.label_font_size),
            ),
        });
    }

    let mut text = String::new();
    let _ = writeln!(text, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        text,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{w}" viewBox="0 0 {w} {w}">"#,
        w = fmt3(side)
    );
    let groups = [
        (ElementKind::Background, "background"),
        (ElementKind::Segment, "segments"),
        (ElementKind::Ribbon, "ribbons"),
        (ElementKind::Label, "labels"),
        (ElementKind::Legend, "legend"),
    ];
    for (kind, id) in groups {
        let _ = writeln!(text, r#"<g id="{id}">"#);
        for e in elements.iter().filter(|e| e.kind == kind) {
            let _ = writeln!(text, "{}", e.markup);
        }
        let _ = writeln!(text, "</g>");
    }
    text.push_str("</svg>\n");

    SvgDocument {
        width: side,
        height: side,
        elements,
        text,
        warnings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chord::{build_layout, EdgeFilter, LayoutOptions};
    use crate::relate::RelationMatrix;
    use crate::style::default_palette;

    fn two_node_layout() -> ChordLayout {
        let m = RelationMatrix::new(
            vec!["a".into(), "b<".into()],
            vec![vec![Some(1.0), Some(0.6)], vec![Some(0.6), Some(1.0)]],
            MatrixKind::Similarity,
        )
        .unwrap();
        let opts = LayoutOptions::new(MatrixKind::Similarity, EdgeFilter::MinValue(0.5));
        build_layout(&m, &opts, &default_palette()).unwrap()
    }

    #[test]
    fn counts_for_single_edge() {
        let doc = render_svg(&two_node_layout(), &StyleSheet::default());
        assert_eq!(doc.count(ElementKind::Segment), 2);
        assert_eq!(doc.count(ElementKind::Ribbon), 1);
        assert_eq!(doc.count(ElementKind::Label), 2);
        assert!(doc.warnings.is_empty());
        assert!(doc.text.contains("b&lt;"));
    }

    #[test]
    fn identical_bytes() {
        let l = two_node_layout();
        let s = StyleSheet::default();
        assert_eq!(render_svg(&l, &s).text, render_svg(&l, &s).text);
    }

    #[test]
    fn hidden_ribbons_warn() {
        let mut l = two_node_layout();
        l.ribbons[0].style.visible = false;
        let doc = render_svg(&l, &StyleSheet::default());
        assert_eq!(doc.count(ElementKind::Ribbon), 0);
        assert_eq!(doc.count(ElementKind::Segment), 2);
        assert_eq!(doc.warnings.len(), 1);
    }

    #[test]
    fn opacity_format() {
        assert_eq!(fmt_opacity(0.75), "0.75");
        assert_eq!(fmt_opacity(1.0), "1");
        assert_eq!(fmt_opacity(0.0), "0");
    }
}

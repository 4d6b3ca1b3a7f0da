use std::collections::HashMap;

use super::{Edge, Ribbon, RibbonStyle, Segment, DEFAULT_RIBBON_OPACITY};
use crate::error::{Error, Result};
use crate::style::color::Color;
use crate::util::label_cmp;

/// Lays nodes clockwise from 0° in `nodes` order, each followed by a gap,
/// with span proportional to the node's total incident magnitude.
///
/// Nodes without incident magnitude are left out of the ring.
pub fn allocate_angles(edges: &[Edge], nodes: &[String], gap_degrees: f64) -> Result<Vec<Segment>> {
    if !(gap_degrees >= 0.0 && gap_degrees.is_finite()) {
        return Err(Error::Layout(format!(
            "gap must be a non-negative number, got {gap_degrees}"
        )));
    }
    let mut totals: HashMap<&str, f64> = HashMap::new();
    for e in edges {
        *totals.entry(e.source.as_str()).or_default() += e.magnitude;
        *totals.entry(e.target.as_str()).or_default() += e.magnitude;
    }
    for label in totals.keys() {
        if !nodes.iter().any(|n| n == label) {
            return Err(Error::Layout(format!(
                "edge endpoint {label} is not a node"
            )));
        }
    }
    let present: Vec<(&String, f64)> = nodes
        .iter()
        .filter_map(|n| totals.get(n.as_str()).map(|t| (n, *t)))
        .filter(|(_, t)| *t > 0.0)
        .collect();
    if present.is_empty() {
        return Err(Error::Layout(
            "all node totals are zero; nothing to draw".into(),
        ));
    }
    let k = present.len() as f64;
    let available = 360.0 - k * gap_degrees;
    if available <= 0.0 {
        return Err(Error::Layout(format!(
            "{} gaps of {gap_degrees}° leave no room on the circle",
            present.len()
        )));
    }
    let grand: f64 = present.iter().map(|(_, t)| t).sum();
    let scale = available / grand;

    let mut cursor = 0.0;
    let mut segments = Vec::with_capacity(present.len());
    for (label, total) in present {
        let start = cursor;
        let end = (start + total * scale).min(360.0);
        segments.push(Segment {
            label: label.clone(),
            start_angle: start,
            end_angle: end,
            total,
            color: Color::from_static("grey"),
        });
        cursor = end + gap_degrees;
    }
    Ok(segments)
}

/// Gives each edge one sub-arc in each endpoint's segment.
///
/// Inside a segment, sub-arcs follow the partner segments' start angles and
/// have width `span * magnitude / total`; the last one is snapped to the
/// segment end so the sub-arcs tile the span exactly.
pub fn place_ribbons(segments: &[Segment], edges: &[Edge]) -> Result<Vec<Ribbon>> {
    let index: HashMap<&str, usize> = segments
        .iter()
        .enumerate()
        .map(|(i, s)| (s.label.as_str(), i))
        .collect();
    let seg_of = |label: &str| {
        index
            .get(label)
            .copied()
            .ok_or_else(|| Error::Layout(format!("edge endpoint {label} has no segment")))
    };

    // (edge index, is_source) per segment
    let mut incident: Vec<Vec<(usize, bool)>> = vec![Vec::new(); segments.len()];
    for (ei, e) in edges.iter().enumerate() {
        incident[seg_of(&e.source)?].push((ei, true));
        incident[seg_of(&e.target)?].push((ei, false));
    }

    let mut source_arcs = vec![(0.0, 0.0); edges.len()];
    let mut target_arcs = vec![(0.0, 0.0); edges.len()];
    for (si, seg) in segments.iter().enumerate() {
        let list = &mut incident[si];
        let partner = |&(ei, is_source): &(usize, bool)| {
            let e = &edges[ei];
            let other = if is_source { &e.target } else { &e.source };
            (segments[index[other.as_str()]].start_angle, other.clone())
        };
        list.sort_by(|a, b| {
            let (pa, la) = partner(a);
            let (pb, lb) = partner(b);
            pa.total_cmp(&pb).then_with(|| label_cmp(&la, &lb))
        });
        let span = seg.span();
        let mut cursor = seg.start_angle;
        for (pos, &(ei, is_source)) in list.iter().enumerate() {
            let width = span * (edges[ei].magnitude / seg.total);
            let end = if pos + 1 == list.len() {
                seg.end_angle
            } else {
                cursor + width
            };
            if is_source {
                source_arcs[ei] = (cursor, end);
            } else {
                target_arcs[ei] = (cursor, end);
            }
            cursor = end;
        }
    }

    Ok(edges
        .iter()
        .enumerate()
        .map(|(ei, e)| Ribbon {
            edge: e.clone(),
            source_subarc: source_arcs[ei],
            target_subarc: target_arcs[ei],
            style: RibbonStyle {
                color: Color::from_static("grey"),
                opacity: DEFAULT_RIBBON_OPACITY,
                visible: true,
                z: 0,
            },
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge(s: &str, t: &str, v: f64) -> Edge {
        Edge {
            source: s.into(),
            target: t.into(),
            value: v,
            magnitude: v.abs(),
            bin: 0,
        }
    }

    fn labels(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn single_edge_two_half_circles() {
        for v in [0.1, 7.0] {
            let segs = allocate_angles(&[edge("a", "b", v)], &labels(&["a", "b"]), 0.0).unwrap();
            assert_eq!(segs.len(), 2);
            assert!((segs[0].span() - 180.0).abs() < 1e-12);
            assert!((segs[1].span() - 180.0).abs() < 1e-12);
        }
    }

    #[test]
    fn spans_proportional_to_totals() {
        // totals a=2, b=1, c=1
        let e = [edge("a", "b", 1.0), edge("a", "c", 1.0)];
        let segs = allocate_angles(&e, &labels(&["a", "b", "c"]), 0.0).unwrap();
        let spans: Vec<f64> = segs.iter().map(Segment::span).collect();
        assert_eq!(spans, [180.0, 90.0, 90.0]);
    }

    #[test]
    fn isolated_nodes_are_omitted_and_gaps_applied() {
        let segs =
            allocate_angles(&[edge("a", "c", 1.0)], &labels(&["a", "b", "c"]), 10.0).unwrap();
        assert_eq!(
            segs.iter().map(|s| s.label.as_str()).collect::<Vec<_>>(),
            ["a", "c"]
        );
        assert!((segs[1].start_angle - 180.0).abs() < 1e-12);
        assert!((segs[1].end_angle - 350.0).abs() < 1e-12);
    }

    #[test]
    fn too_many_gaps() {
        assert!(allocate_angles(&[edge("a", "b", 1.0)], &labels(&["a", "b"]), 180.0).is_err());
        assert!(allocate_angles(&[edge("a", "b", 1.0)], &labels(&["a", "b"]), -1.0).is_err());
    }

    #[test]
    fn single_ribbon_fills_both_segments() {
        let e = [edge("a", "b", 0.4)];
        let segs = allocate_angles(&e, &labels(&["a", "b"]), 0.0).unwrap();
        let rb = place_ribbons(&segs, &e).unwrap();
        assert_eq!(rb.len(), 1);
        assert_eq!(rb[0].source_subarc, (0.0, 180.0));
        assert_eq!(rb[0].target_subarc, (180.0, 360.0));
    }

    #[test]
    fn widths_follow_magnitudes_and_partner_order() {
        let e = [edge("a", "c", 1.0), edge("a", "b", 3.0)];
        let segs = allocate_angles(&e, &labels(&["a", "b", "c"]), 0.0).unwrap();
        let rb = place_ribbons(&segs, &e).unwrap();
        let w_ac = rb[0].source_subarc.1 - rb[0].source_subarc.0;
        let w_ab = rb[1].source_subarc.1 - rb[1].source_subarc.0;
        assert!((w_ab / w_ac - 3.0).abs() < 1e-12);
        // b starts before c, so a->b comes first inside a
        assert_eq!(rb[1].source_subarc.0, 0.0);
        assert_eq!(rb[0].source_subarc.1, segs[0].end_angle);
    }

    #[test]
    fn missing_segment_is_error() {
        let e = [edge("a", "b", 1.0)];
        let segs = allocate_angles(&e, &labels(&["a", "b"]), 0.0).unwrap();
        assert!(place_ribbons(&segs[..1], &e).is_err());
    }
}

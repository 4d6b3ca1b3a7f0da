//! Path construction. Angles are degrees clockwise from 12 o'clock; the SVG
//! y axis points down, so `y = cy - r cos(angle)`.

use std::fmt::Write as _;

use crate::chord::{Ribbon, Segment};

pub type Point = (f64, f64);

pub fn polar_point(center: Point, angle_degrees: f64, radius: f64) -> Point {
    let a = angle_degrees.to_radians();
    (center.0 + radius * a.sin(), center.1 - radius * a.cos())
}

/// Three decimals, with negative zero printed as `0.000`.
pub fn fmt3(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".to_string()
    } else {
        s
    }
}

fn pt(p: Point) -> String {
    format!("{} {}", fmt3(p.0), fmt3(p.1))
}

fn large_arc(span: f64) -> u8 {
    u8::from(span > 180.0)
}

/// Annular wedge between `r_inner` and `r_outer`. Spans must be positive.
pub fn segment_path(s: &Segment, center: Point, r_inner: f64, r_outer: f64) -> String {
    let (a0, a1) = (s.start_angle, s.end_angle);
    let large = large_arc(a1 - a0);
    let mut d = String::new();
    let _ = write!(
        d,
        "M {} A {} {} 0 {large} 1 {} L {} A {} {} 0 {large} 0 {} Z",
        pt(polar_point(center, a0, r_outer)),
        fmt3(r_outer),
        fmt3(r_outer),
        pt(polar_point(center, a1, r_outer)),
        pt(polar_point(center, a1, r_inner)),
        fmt3(r_inner),
        fmt3(r_inner),
        pt(polar_point(center, a0, r_inner)),
    );
    d
}

/// Closed ribbon: source arc, Bézier across, target arc, Bézier back.
///
/// Control points sit at the curve endpoints pulled toward the centre by
/// `pull` (1.0 puts them at the centre).
pub fn ribbon_path(rb: &Ribbon, center: Point, radius: f64, pull: f64) -> String {
    let (a1, a2) = rb.source_subarc;
    let (b1, b2) = rb.target_subarc;
    let toward_center = |p: Point| {
        (
            center.0 + (p.0 - center.0) * (1.0 - pull),
            center.1 + (p.1 - center.1) * (1.0 - pull),
        )
    };
    let pa1 = polar_point(center, a1, radius);
    let pa2 = polar_point(center, a2, radius);
    let pb1 = polar_point(center, b1, radius);
    let pb2 = polar_point(center, b2, radius);
    let r = fmt3(radius);
    format!(
        "M {} A {r} {r} 0 {} 1 {} C {} {} {} A {r} {r} 0 {} 1 {} C {} {} {} Z",
        pt(pa1),
        large_arc(a2 - a1),
        pt(pa2),
        pt(toward_center(pa2)),
        pt(toward_center(pb1)),
        pt(pb1),
        large_arc(b2 - b1),
        pt(pb2),
        pt(toward_center(pb2)),
        pt(toward_center(pa1)),
        pt(pa1),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chord::{Edge, RibbonStyle};
    use crate::style::Color;

    fn at(angle: f64) -> (String, String) {
        let p = polar_point((0.0, 0.0), angle, 100.0);
        (fmt3(p.0), fmt3(p.1))
    }

    #[test]
    fn polar_anchor_points() {
        assert_eq!(at(0.0), ("0.000".into(), "-100.000".into()));
        assert_eq!(at(90.0), ("100.000".into(), "0.000".into()));
        // 100 * sqrt(2)/2 = 70.7107
        assert_eq!(at(45.0), ("70.711".into(), "-70.711".into()));
    }

    fn segment(a: f64, b: f64) -> Segment {
        Segment {
            label: "s".into(),
            start_angle: a,
            end_angle: b,
            total: 1.0,
            color: Color::from_static("red"),
        }
    }

    #[test]
    fn quarter_wedge() {
        let d = segment_path(&segment(0.0, 90.0), (0.0, 0.0), 90.0, 100.0);
        assert_eq!(
            d,
            "M 0.000 -100.000 A 100.000 100.000 0 0 1 100.000 0.000 \
             L 90.000 0.000 A 90.000 90.000 0 0 0 0.000 -90.000 Z"
        );
    }

    #[test]
    fn large_arc_flag() {
        let d = segment_path(&segment(0.0, 270.0), (0.0, 0.0), 90.0, 100.0);
        assert!(d.contains(" 0 1 1 "), "{d}");
    }

    #[test]
    fn ribbon_with_full_pull_uses_center() {
        let rb = Ribbon {
            edge: Edge {
                source: "a".into(),
                target: "b".into(),
                value: 1.0,
                magnitude: 1.0,
                bin: 0,
            },
            source_subarc: (0.0, 10.0),
            target_subarc: (180.0, 190.0),
            style: RibbonStyle {
                color: Color::from_static("red"),
                opacity: 1.0,
                visible: true,
                z: 0,
            },
        };
        let d = ribbon_path(&rb, (0.0, 0.0), 100.0, 1.0);
        assert!(d.starts_with("M 0.000 -100.000 "), "{d}");
        assert_eq!(d.matches("C 0.000 0.000 0.000 0.000").count(), 2, "{d}");
        assert!(d.ends_with("0.000 -100.000 Z"));
    }
}

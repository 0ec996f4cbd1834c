//! Deterministic SVG rendering of knot diagrams.
//!
//! Under-strands are broken around every crossing, so an edge passing under
//! `k` crossings is drawn as `k + 1` `<line>` elements.

use std::fmt::Write as _;

use crate::diagram::KnotDiagram;

const SIZE: f64 = 480.0;
const MARGIN: f64 = 40.0;
/// Half-width of an under-strand gap, in pixels.
const GAP: f64 = 7.0;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RenderOptions {
    /// Text drawn next to each vertex; vertex numbers when empty.
    pub vertex_labels: Vec<String>,
    pub title: Option<String>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

pub fn render_svg(diagram: &KnotDiagram, opts: &RenderOptions) -> String {
    let q = diagram.projected_vertices();
    let n = q.len();
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in &q {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-12);
    let scale = (SIZE - 2.0 * MARGIN) / span;
    // SVG y grows downward.
    let px = |p: [f64; 2]| -> [f64; 2] { [MARGIN + (p[0] - lo[0]) * scale, SIZE - MARGIN - (p[1] - lo[1]) * scale] };
    let v: Vec<[f64; 2]> = q.iter().map(|&p| px(p)).collect();

    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#);
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    if let Some(t) = &opts.title {
        let _ = writeln!(out, r#"<text x="{MARGIN}" y="24" font-family="sans-serif" font-size="14">{}</text>"#, escape(t));
    }
    let _ = writeln!(out, r#"<g stroke="black" stroke-width="2.5" stroke-linecap="round">"#);
    for e in 0..n {
        let (a, b) = (v[e], v[(e + 1) % n]);
        let len = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt().max(1e-12);
        let mut cuts: Vec<f64> = diagram.crossings.iter().filter(|c| c.under_edge == e).map(|c| c.under_param).collect();
        cuts.sort_by(f64::total_cmp);
        let g = GAP / len;
        let mut start = 0.0;
        let mut pieces = Vec::with_capacity(cuts.len() + 1);
        for s in cuts {
            pieces.push((start, (s - g).max(start)));
            start = (s + g).min(1.0);
        }
        pieces.push((start, 1.0f64.max(start)));
        for (s0, s1) in pieces {
            let p0 = [a[0] + (b[0] - a[0]) * s0, a[1] + (b[1] - a[1]) * s0];
            let p1 = [a[0] + (b[0] - a[0]) * s1, a[1] + (b[1] - a[1]) * s1];
            let _ = writeln!(
                out,
                r#"<line data-edge="{e}" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/>"#,
                p0[0], p0[1], p1[0], p1[1]
            );
        }
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r##"<g font-family="sans-serif" font-size="12" fill="#b03030">"##);
    for (i, p) in v.iter().enumerate() {
        let label = opts.vertex_labels.get(i).cloned().unwrap_or_else(|| (i + 1).to_string());
        let _ = writeln!(out, r#"<circle cx="{:.3}" cy="{:.3}" r="3"/>"#, p[0], p[1]);
        let _ = writeln!(out, r#"<text x="{:.3}" y="{:.3}">{}</text>"#, p[0] + 6.0, p[1] - 6.0, escape(&label));
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, "</svg>");
    out
}

/// Number of under-strand gaps in an SVG produced by [`render_svg`].
pub fn count_gaps(svg: &str, edges: usize) -> usize {
    svg.matches("<line ").count().saturating_sub(edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{project_diagram, ClosedPolygon};
    use nalgebra::Vector3;

    fn hexagon() -> ClosedPolygon {
        ClosedPolygon::new((0..6).map(|k| {
            let a = k as f64 * std::f64::consts::TAU / 6.0;
            Vector3::new(a.cos(), a.sin(), 0.0)
        }).collect()).unwrap()
    }

    #[test]
    fn planar_hexagon_has_no_gaps() {
        let d = project_diagram(&hexagon(), &Vector3::z()).unwrap();
        let svg = render_svg(&d, &RenderOptions::default());
        assert_eq!(svg.matches("<line ").count(), 6);
        assert_eq!(count_gaps(&svg, 6), 0);
    }

    #[test]
    fn rendering_is_deterministic() {
        let d = project_diagram(&hexagon(), &Vector3::z()).unwrap();
        let opts = RenderOptions { vertex_labels: vec![], title: Some("a <b>".into()) };
        assert_eq!(render_svg(&d, &opts), render_svg(&d, &opts));
        assert!(render_svg(&d, &opts).contains("a &lt;b&gt;"));
    }
}

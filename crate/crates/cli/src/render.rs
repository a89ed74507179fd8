//! SVG overlay of detected centroids, the program's lattice and its hull.

use std::fmt::Write;

use regprog::dsl::{execute, Bounds, DrawCommand, RegularityProgram};
use regprog::geometry::{convex_hull, LatticeIndex};

use crate::files::CentroidFile;

const PALETTE: [&str; 8] = [
    "#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4", "#42d4f4", "#f032e6", "#9a6324",
];

pub fn attribute_color(attribute: u32) -> &'static str {
    PALETTE[attribute as usize % PALETTE.len()]
}

/// Overlay in the centroid file's frame. Lattice points are
/// `<circle class="lattice">` filled by attribute, detected centroids are
/// `<circle class="detected">` outlines, and the hull of the program's
/// draws is one `<polygon class="hull">` (or a `<polyline>` when the draws
/// are collinear).
pub fn render_svg(centroids: &CentroidFile, program: &RegularityProgram) -> String {
    let (w, h) = (centroids.width, centroids.height);
    let draws = execute(program, Bounds::new(w, h));
    let r = marker_radius(&draws);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(
        s,
        r##"<rect width="{w}" height="{h}" fill="none" stroke="#888" stroke-width="0.5"/>"##
    );
    if !draws.is_empty() {
        let hull = convex_hull(&draws.iter().map(|d| d.index).collect::<Vec<LatticeIndex>>());
        let pts: Vec<String> = hull
            .vertices
            .iter()
            .map(|&v| {
                let p = program.position(v);
                format!("{},{}", p.x, p.y)
            })
            .collect();
        let tag = if hull.vertices.len() >= 3 {
            "polygon"
        } else {
            "polyline"
        };
        let _ = writeln!(
            s,
            r##"<{tag} class="hull" points="{}" fill="none" stroke="#222" stroke-width="1" stroke-dasharray="4 2"/>"##,
            pts.join(" ")
        );
    }
    let _ = writeln!(s, r#"<g class="lattice">"#);
    for d in &draws {
        let _ = writeln!(
            s,
            r#"<circle class="lattice" cx="{}" cy="{}" r="{r}" fill="{}" fill-opacity="0.6" data-i="{}" data-j="{}" data-attribute="{}"/>"#,
            d.position.x,
            d.position.y,
            attribute_color(d.attribute),
            d.index.i,
            d.index.j,
            d.attribute
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g class="detected">"#);
    for p in &centroids.points {
        let _ = writeln!(
            s,
            r##"<circle class="detected" cx="{:.2}" cy="{:.2}" r="{}" fill="none" stroke="#000" stroke-width="1"/>"##,
            p.x,
            p.y,
            r * 1.5
        );
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    s
}

fn marker_radius(draws: &[DrawCommand]) -> f64 {
    let mut best = f64::INFINITY;
    for (k, a) in draws.iter().enumerate().take(64) {
        for b in &draws[k + 1..] {
            let d =
                ((a.position.x - b.position.x) as f64).hypot((a.position.y - b.position.y) as f64);
            best = best.min(d);
        }
    }
    if best.is_finite() {
        (best / 6.0).clamp(1.0, 8.0)
    } else {
        3.0
    }
}

//! Static SVG figures of instances with optional overlays.

use std::collections::HashMap;
use std::fmt::Write;

use crate::drawing::{PathDrawing, PlanarizedGraph, VertexKind};
use crate::geometry::Point;
use crate::instance::Instance;
use crate::separator::{Clique, CliqueSeparator};

/// What to draw on top of the free space and the disk centers.
#[derive(Clone, Copy, Debug, Default)]
pub struct Overlays<'a> {
    pub drawing: Option<&'a PathDrawing>,
    pub separator: Option<&'a CliqueSeparator>,
    pub planarized: Option<&'a PlanarizedGraph>,
}

const STYLE: &str = "\
.free{fill:#f4f4f0;stroke:#333;stroke-width:1}\
.hole{fill:#9a9a9a;stroke:#333;stroke-width:1}\
.disk{fill:none;stroke:#7799bb;stroke-width:0.5;stroke-dasharray:2 2}\
.center{fill:#224}\
.side-a{fill:#1f77b4}\
.side-b{fill:#2ca02c}\
.separator{fill:#d62728}\
.path{fill:none;stroke:#ff7f0e;stroke-width:0.8}\
.witness{stroke:#d62728;stroke-width:1.2}\
.plane-edge{stroke:#555;stroke-width:0.5}\
.crossing{fill:#9467bd}\
.lane{fill:#bbb}";

fn num(x: f64) -> String {
    let s = format!("{x:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

fn points_attr(ring: &[Point]) -> String {
    ring.iter().map(|p| format!("{},{}", num(p.x), num(p.y))).collect::<Vec<_>>().join(" ")
}

/// Deterministic SVG of `inst`. The y axis points up.
pub fn render_svg(inst: &Instance, overlays: &Overlays) -> String {
    let (lo, hi) = inst.free_space.bounds();
    let (w, h) = (hi.x - lo.x, hi.y - lo.y);
    let pad = 0.05 * w.max(h);
    let unit = w.max(h) / 200.0;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="800" height="{}">"#,
        num(lo.x - pad),
        num(-hi.y - pad),
        num(w + 2.0 * pad),
        num(h + 2.0 * pad),
        num((800.0 * (h + 2.0 * pad) / (w + 2.0 * pad)).round())
    );
    let _ = writeln!(s, "<style>{STYLE}</style>");
    let _ = writeln!(s, r#"<g transform="scale(1,-1)">"#);
    let _ = writeln!(s, r#"<polygon class="free" points="{}"/>"#, points_attr(inst.free_space.outer()));
    for hole in inst.free_space.holes() {
        let _ = writeln!(s, r#"<polygon class="hole" points="{}"/>"#, points_attr(hole));
    }
    for d in &inst.disks {
        let _ = writeln!(
            s,
            r#"<circle class="disk" cx="{}" cy="{}" r="{}"/>"#,
            num(d.center.x),
            num(d.center.y),
            num(d.radius)
        );
    }
    if let Some(drawing) = overlays.drawing {
        for p in &drawing.paths {
            let _ = writeln!(
                s,
                r#"<polyline class="path" data-edge="{}-{}" points="{}"/>"#,
                p.ids.0,
                p.ids.1,
                points_attr(&p.path.vertices)
            );
        }
    }
    if let Some(pg) = overlays.planarized {
        for (u, v) in pg.graph.edges() {
            let (a, b) = (pg.positions[u], pg.positions[v]);
            if a != b {
                let _ = writeln!(
                    s,
                    r#"<line class="plane-edge" x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                    num(a.x),
                    num(a.y),
                    num(b.x),
                    num(b.y)
                );
            }
        }
        for (v, kind) in pg.kinds.iter().enumerate() {
            let p = pg.positions[v];
            match kind {
                VertexKind::Crossing { paths, .. } => {
                    let r = 1.5 * unit;
                    let _ = writeln!(
                        s,
                        r#"<rect class="crossing" data-paths="{}-{}" x="{}" y="{}" width="{}" height="{}"/>"#,
                        paths.0,
                        paths.1,
                        num(p.x - r),
                        num(p.y - r),
                        num(2.0 * r),
                        num(2.0 * r)
                    );
                }
                VertexKind::Lane { .. } => {
                    let _ = writeln!(s, r#"<circle class="lane" cx="{}" cy="{}" r="{}"/>"#, num(p.x), num(p.y), num(0.6 * unit));
                }
                VertexKind::Center { .. } => {}
            }
        }
    }
    let mut class: HashMap<usize, &str> = HashMap::new();
    if let Some(sep) = overlays.separator {
        for &id in &sep.a {
            class.insert(id, "side-a");
        }
        for &id in &sep.b {
            class.insert(id, "side-b");
        }
        for c in &sep.cliques {
            for id in c.members() {
                class.insert(id, "separator");
            }
        }
    }
    for d in &inst.disks {
        let _ = writeln!(
            s,
            r#"<circle class="center {}" data-id="{}" cx="{}" cy="{}" r="{}"/>"#,
            class.get(&d.id).copied().unwrap_or("plain"),
            d.id,
            num(d.center.x),
            num(d.center.y),
            num(unit)
        );
    }
    if let Some(sep) = overlays.separator {
        for c in &sep.cliques {
            if let Clique::PointClique { witness, .. } = c {
                let r = 2.0 * unit;
                let _ = writeln!(
                    s,
                    r#"<path class="witness" d="M{} {}L{} {}M{} {}L{} {}"/>"#,
                    num(witness.x - r),
                    num(witness.y - r),
                    num(witness.x + r),
                    num(witness.y + r),
                    num(witness.x - r),
                    num(witness.y + r),
                    num(witness.x + r),
                    num(witness.y - r)
                );
            }
        }
    }
    s.push_str("</g>\n</svg>\n");
    s
}

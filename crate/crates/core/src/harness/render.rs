//! SVG rendering of packings, tilings, tessellations and cluster overlays.
//!
//! Each document holds a single `<g id="objects">` group with one element
//! per object (circle, square or site), so counts can be checked by parsing.
//! World coordinates are mapped into the SVG frame with the y axis pointing
//! up.

use std::fmt::Write as _;

use crate::hyperbolic::VoronoiTessellation;
use crate::packing::CirclePacking;
use crate::percolation::{ClusterLabeling, SiteConfiguration};
use crate::tiling::{SquareTiling, TileColoring};

const CANVAS: f64 = 800.0;
const MARGIN: f64 = 10.0;

/// Fill color of cluster `k`.
pub fn cluster_color(k: usize) -> String {
    let c = ((k as u64 + 1).wrapping_mul(2_654_435_761)) % (1 << 24);
    format!("#{c:06x}")
}

struct Frame {
    min: [f64; 2],
    scale: f64,
    height: f64,
}

impl Frame {
    fn new(lo: [f64; 2], hi: [f64; 2]) -> Self {
        let span = (hi[0] - lo[0]).max(hi[1] - lo[1]);
        let scale = if span > 0.0 && span.is_finite() {
            (CANVAS - 2.0 * MARGIN) / span
        } else {
            1.0
        };
        Self {
            min: lo,
            scale,
            height: (hi[1] - lo[1]).max(0.0) * scale + 2.0 * MARGIN,
        }
    }

    fn x(&self, x: f64) -> f64 {
        MARGIN + (x - self.min[0]) * self.scale
    }

    fn y(&self, y: f64) -> f64 {
        self.height - MARGIN - (y - self.min[1]) * self.scale
    }

    fn open(&self, out: &mut String) {
        let width = CANVAS.max(2.0 * MARGIN);
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{h:.0}" viewBox="0 0 {width:.0} {h:.0}">"#,
            h = self.height.max(2.0 * MARGIN)
        );
    }
}

fn bounds(points: impl Iterator<Item = ([f64; 2], f64)>) -> ([f64; 2], [f64; 2]) {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for (c, r) in points {
        for k in 0..2 {
            lo[k] = lo[k].min(c[k] - r);
            hi[k] = hi[k].max(c[k] + r);
        }
    }
    if lo[0] > hi[0] {
        ([0.0, 0.0], [1.0, 1.0])
    } else {
        (lo, hi)
    }
}

fn circles<F: Fn(usize) -> String>(out: &mut String, frame: &Frame, centers: &[[f64; 2]], radii: &[f64], style: F) {
    out.push_str("<g id=\"objects\">\n");
    for (i, (c, &r)) in centers.iter().zip(radii).enumerate() {
        let _ = writeln!(
            out,
            r#"<circle cx="{:.6}" cy="{:.6}" r="{:.6}" {}/>"#,
            frame.x(c[0]),
            frame.y(c[1]),
            r * frame.scale,
            style(i)
        );
    }
    out.push_str("</g>\n");
}

pub fn render_packing(p: &CirclePacking) -> String {
    let (lo, hi) = bounds(p.center.iter().copied().zip(p.radius.iter().copied()));
    let frame = Frame::new(lo, hi);
    let mut out = String::new();
    frame.open(&mut out);
    circles(&mut out, &frame, &p.center, &p.radius, |_| {
        r#"fill="none" stroke="black" stroke-width="0.5""#.to_string()
    });
    out.push_str("</svg>\n");
    out
}

/// Squares of a tiling; black tiles are filled when a coloring is given.
/// A square crossing the top of a cylinder is drawn as one two-part path.
pub fn render_tiling(t: &SquareTiling, coloring: Option<&TileColoring>) -> String {
    let frame = Frame::new([0.0, 0.0], [t.width.max(0.0), t.height.max(0.0)]);
    let mut out = String::new();
    frame.open(&mut out);
    out.push_str("<g id=\"objects\">\n");
    for (i, tile) in t.tiles.iter().enumerate() {
        let fill = match coloring {
            Some(c) if c.black[i] => "black",
            _ => "white",
        };
        let style = format!(r#"fill="{fill}" stroke="gray" stroke-width="0.5""#);
        let s = tile.side * frame.scale;
        match t.period {
            Some(period) if tile.y + tile.side > period + 1e-12 => {
                let below = period - tile.y;
                let _ = writeln!(
                    out,
                    r#"<path d="M{:.6} {:.6} h{s:.6} v{:.6} h{:.6} Z M{:.6} {:.6} h{s:.6} v{:.6} h{:.6} Z" {style}/>"#,
                    frame.x(tile.x),
                    frame.y(period),
                    below * frame.scale,
                    -s,
                    frame.x(tile.x),
                    frame.y(tile.side - below),
                    (tile.side - below) * frame.scale,
                    -s,
                );
            }
            _ => {
                let _ = writeln!(
                    out,
                    r#"<rect x="{:.6}" y="{:.6}" width="{s:.6}" height="{s:.6}" {style}/>"#,
                    frame.x(tile.x),
                    frame.y(tile.y + tile.side),
                );
            }
        }
    }
    out.push_str("</g>\n</svg>\n");
    out
}

/// Sites of a tessellation as dots in the Poincaré disc, black or white
/// when colors are given.
pub fn render_tessellation(v: &VoronoiTessellation, colors: Option<&[bool]>) -> String {
    let frame = Frame::new([-1.0, -1.0], [1.0, 1.0]);
    let mut out = String::new();
    frame.open(&mut out);
    let radii = vec![0.004; v.sites.len()];
    circles(&mut out, &frame, &v.sites, &radii, |i| match colors {
        Some(c) if c[i] => r#"fill="black""#.to_string(),
        Some(_) => r#"fill="white" stroke="black" stroke-width="0.3""#.to_string(),
        None => r#"fill="gray""#.to_string(),
    });
    out.push_str("</svg>\n");
    out
}

/// Packing circles filled by open cluster; closed vertices are unfilled.
pub fn render_clusters(p: &CirclePacking, config: &SiteConfiguration, labels: &ClusterLabeling) -> String {
    let (lo, hi) = bounds(p.center.iter().copied().zip(p.radius.iter().copied()));
    let frame = Frame::new(lo, hi);
    let mut out = String::new();
    frame.open(&mut out);
    circles(&mut out, &frame, &p.center, &p.radius, |i| match (config.open[i], labels.label[i]) {
        (true, Some(k)) => format!(r#"fill="{}" stroke="black" stroke-width="0.3""#, cluster_color(k)),
        _ => r#"fill="none" stroke="gray" stroke-width="0.3""#.to_string(),
    });
    out.push_str("</svg>\n");
    out
}

/// Side-by-side packing and tiling of the same ball, as two groups
/// `packing` and `tiling`.
pub fn render_pair(p: &CirclePacking, t: &SquareTiling) -> String {
    let packing = render_packing(p);
    let tiling = render_tiling(t, None);
    let inner = |doc: &str, id: &str| {
        let start = doc.find("<g id=\"objects\">").expect("group");
        let end = doc.rfind("</svg>").expect("root");
        doc[start..end].replacen("<g id=\"objects\">", &format!("<g id=\"{id}\">"), 1)
    };
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{w2:.0}" viewBox="0 0 {w:.0} {w2:.0}">"#,
        w = 2.0 * CANVAS,
        w2 = CANVAS * (t.height / t.width).max(1.0) + 2.0 * MARGIN
    );
    out.push_str(&inner(&packing, "packing"));
    let _ = writeln!(out, r#"<g transform="translate({CANVAS:.0} 0)">"#);
    out.push_str(&inner(&tiling, "tiling"));
    out.push_str("</g>\n</svg>\n");
    out
}

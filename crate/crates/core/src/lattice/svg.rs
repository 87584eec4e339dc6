use std::fmt::Write;

use super::ensemble::PathEnsemble;

const PALETTE: [&str; 8] = ["#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

/// Options for [`render_svg`].
#[derive(Clone, Debug)]
pub struct SvgStyle {
    /// Lattice spacing in pixels.
    pub cell: f64,
    /// Shift between lines of different colors sharing an edge.
    pub offset: f64,
    pub stroke_width: f64,
}

impl Default for SvgStyle {
    fn default() -> Self {
        Self { cell: 24.0, offset: 3.0, stroke_width: 2.0 }
    }
}

/// Draws each occupied edge as a segment, one stroke color per model color.
/// Colors sharing an edge are shifted apart perpendicular to it.
pub fn render_svg(e: &PathEnsemble, style: &SvgStyle) -> String {
    let (w, h) = (e.width() as f64, e.height() as f64);
    let s = style.cell;
    let px = |x: f64| x * s;
    let py = |y: f64| (h + 1.0 - y) * s;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.2}" height="{:.2}" viewBox="0 0 {:.2} {:.2}">"#,
        px(w + 1.0),
        (h + 1.0) * s,
        px(w + 1.0),
        (h + 1.0) * s
    );
    out.push_str(r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    out.push('\n');
    out.push_str(r##"<g stroke="#dddddd" stroke-width="0.5">"##);
    out.push('\n');
    for x in 1..=e.width() {
        let _ = writeln!(out, r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#, px(x as f64), py(0.5), px(x as f64), py(h + 0.5));
    }
    for y in 1..=e.height() {
        let _ = writeln!(out, r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#, px(0.5), py(y as f64), px(w + 0.5), py(y as f64));
    }
    out.push_str("</g>\n");
    let n = e.n_colors();
    for c in 1..=n {
        let shift = (c as f64 - 1.0 - (n as f64 - 1.0) / 2.0) * style.offset;
        let _ = writeln!(
            out,
            r#"<g stroke="{}" stroke-width="{:.2}" stroke-linecap="round">"#,
            PALETTE[(c - 1) % PALETTE.len()],
            style.stroke_width
        );
        let mut seg = |x1: f64, y1: f64, x2: f64, y2: f64, vertical: bool| {
            let (dx, dy) = if vertical { (shift, 0.0) } else { (0.0, -shift) };
            let _ = writeln!(
                out,
                r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#,
                px(x1) + dx,
                py(y1) + dy,
                px(x2) + dx,
                py(y2) + dy
            );
        };
        for y in 1..=e.height() {
            if e.left(c, y) {
                seg(0.5, y as f64, 1.0, y as f64, false);
            }
            for x in 1..=e.width() {
                let (xf, yf) = (x as f64, y as f64);
                if e.v(c, x, y) {
                    seg(xf, yf, xf, yf + if y == e.height() { 0.5 } else { 1.0 }, true);
                }
                if e.h(c, x, y) {
                    seg(xf, yf, xf + if x == e.width() { 0.5 } else { 1.0 }, yf, false);
                }
            }
        }
        for x in 1..=e.width() {
            if e.bottom(c, x) {
                seg(x as f64, 0.5, x as f64, 1.0, true);
            }
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}

//! DOT, SVG and TikZ drawings. Vertex k sits at angle 2π(k-1)/n on the unit
//! circle, counterclockwise from (1,0). z is solid red, w is dashed blue.

use std::fmt::Write;
use std::str::FromStr;

use thiserror::Error;

use crate::diagram::{Color, Diagram, EdgeKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("unsupported format {0:?} (expected dot, svg or tikz)")]
    UnsupportedFormat(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Dot,
    Svg,
    Tikz,
}

impl FromStr for Format {
    type Err = RenderError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "dot" => Ok(Format::Dot),
            "svg" => Ok(Format::Svg),
            "tikz" => Ok(Format::Tikz),
            _ => Err(RenderError::UnsupportedFormat(s.to_string())),
        }
    }
}

/// Unit-circle position of vertex `k`.
pub fn position(k: usize, n: usize) -> (f64, f64) {
    let t = 2.0 * std::f64::consts::PI * (k - 1) as f64 / n as f64;
    (t.cos(), t.sin())
}

// fixed precision, and no "-0.000"
fn num(x: f64) -> String {
    let s = format!("{x:.3}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

pub fn render(d: &Diagram, format: Format) -> String {
    match format {
        Format::Dot => dot(d),
        Format::Svg => svg(d),
        Format::Tikz => tikz(d),
    }
}

fn dot(d: &Diagram) -> String {
    let n = d.n();
    let mut s = String::from("graph diagram {\n  layout=neato;\n  node [shape=point, width=0.08];\n");
    for k in 1..=n {
        let (x, y) = position(k, n);
        let (zc, wc) = (d.circled(Color::Z, k), d.circled(Color::W, k));
        let _ = write!(s, "  v{k} [label=\"{k}\", xlabel=\"{k}\", pos=\"{},{}!\"", num(2.0 * x), num(2.0 * y));
        match (zc, wc) {
            (true, true) => s.push_str(", shape=doublecircle, width=0.25, color=\"red:blue\""),
            (true, false) => s.push_str(", shape=circle, width=0.25, color=red"),
            (false, true) => s.push_str(", shape=circle, width=0.25, color=blue, style=dashed"),
            (false, false) => {}
        }
        s.push_str("];\n");
    }
    for ((a, b), kind) in d.classify_edges() {
        if matches!(kind, EdgeKind::Z | EdgeKind::ZW) {
            let _ = writeln!(s, "  v{a} -- v{b} [color=red, style=solid];");
        }
        if matches!(kind, EdgeKind::W | EdgeKind::ZW) {
            let _ = writeln!(s, "  v{a} -- v{b} [color=blue, style=dashed];");
        }
    }
    s.push_str("}\n");
    s
}

// Offset applied to each half of a zw-edge, perpendicular to the segment.
fn offset_segment(p: (f64, f64), q: (f64, f64), off: f64) -> ((f64, f64), (f64, f64)) {
    let (dx, dy) = (q.0 - p.0, q.1 - p.1);
    let len = (dx * dx + dy * dy).sqrt();
    let (nx, ny) = (-dy / len * off, dx / len * off);
    ((p.0 + nx, p.1 + ny), (q.0 + nx, q.1 + ny))
}

type Segment = (Color, (f64, f64), (f64, f64));

fn strokes(d: &Diagram, off: f64) -> Vec<Segment> {
    let n = d.n();
    let mut out = Vec::new();
    for ((a, b), kind) in d.classify_edges() {
        let (p, q) = (position(a, n), position(b, n));
        match kind {
            EdgeKind::Z => out.push((Color::Z, p, q)),
            EdgeKind::W => out.push((Color::W, p, q)),
            EdgeKind::ZW => {
                let (p1, q1) = offset_segment(p, q, off);
                let (p2, q2) = offset_segment(p, q, -off);
                out.push((Color::Z, p1, q1));
                out.push((Color::W, p2, q2));
            }
        }
    }
    out
}

fn svg(d: &Diagram) -> String {
    const SIZE: f64 = 320.0;
    const R: f64 = 120.0;
    let c = SIZE / 2.0;
    let to = |(x, y): (f64, f64)| (c + R * x, c - R * y);
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">"
    );
    s.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    for (color, p, q) in strokes(d, 0.025) {
        let ((x1, y1), (x2, y2)) = (to(p), to(q));
        let style = match color {
            Color::Z => "stroke=\"red\" stroke-width=\"2\"",
            Color::W => "stroke=\"blue\" stroke-width=\"2\" stroke-dasharray=\"6 4\"",
        };
        let _ =
            writeln!(s, "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" {style}/>", num(x1), num(y1), num(x2), num(y2));
    }
    for k in 1..=d.n() {
        let (x, y) = to(position(k, d.n()));
        if d.circled(Color::Z, k) {
            let _ = writeln!(
                s,
                "<circle cx=\"{}\" cy=\"{}\" r=\"12\" fill=\"none\" stroke=\"red\" stroke-width=\"2\"/>",
                num(x),
                num(y)
            );
        }
        if d.circled(Color::W, k) {
            let _ = writeln!(
                s,
                "<circle cx=\"{}\" cy=\"{}\" r=\"18\" fill=\"none\" stroke=\"blue\" stroke-width=\"2\" stroke-dasharray=\"4 3\"/>",
                num(x),
                num(y)
            );
        }
        let _ = writeln!(s, "<circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"black\"/>", num(x), num(y));
        let (lx, ly) = to({
            let (px, py) = position(k, d.n());
            (px * 1.22, py * 1.22)
        });
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\" dominant-baseline=\"middle\">{k}</text>",
            num(lx),
            num(ly)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn tikz(d: &Diagram) -> String {
    let n = d.n();
    let mut s = String::from("\\begin{tikzpicture}[scale=2]\n");
    for k in 1..=n {
        let (x, y) = position(k, n);
        let _ = writeln!(s, "  \\coordinate (v{k}) at ({},{});", num(x), num(y));
    }
    for (color, p, q) in strokes(d, 0.025) {
        let style = match color {
            Color::Z => "red",
            Color::W => "blue, dashed",
        };
        let _ = writeln!(s, "  \\draw[{style}] ({},{}) -- ({},{});", num(p.0), num(p.1), num(q.0), num(q.1));
    }
    for k in 1..=n {
        if d.circled(Color::Z, k) {
            let _ = writeln!(s, "  \\draw[red] (v{k}) circle (0.08);");
        }
        if d.circled(Color::W, k) {
            let _ = writeln!(s, "  \\draw[blue, dashed] (v{k}) circle (0.12);");
        }
        let _ = writeln!(s, "  \\fill (v{k}) circle (0.025) node[anchor={}] {{{k}}};", anchor(position(k, n)));
    }
    s.push_str("\\end{tikzpicture}\n");
    s
}

fn anchor((x, y): (f64, f64)) -> &'static str {
    let horiz = if x > 0.3 {
        "west"
    } else if x < -0.3 {
        "east"
    } else {
        ""
    };
    let vert = if y > 0.3 {
        "south"
    } else if y < -0.3 {
        "north"
    } else {
        ""
    };
    match (vert, horiz) {
        ("", "") => "south",
        ("", h) => h,
        (v, "") => v,
        ("south", "west") => "south west",
        ("south", "east") => "south east",
        ("north", "west") => "north west",
        _ => "north east",
    }
}

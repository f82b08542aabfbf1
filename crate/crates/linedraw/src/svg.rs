//! SVG output: each stroke is a filled outline path.

use std::fmt::Write as _;

use linedraw_core::math::Vec2;
use linedraw_core::strokes::{stroke_outline, DrawingDocument, PathCmd, Polarity};

/// Fixed three-decimal formatting with trailing zeros trimmed.
pub fn fmt_num(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.') } else { &s };
    if s == "-0" {
        "0".to_owned()
    } else {
        s.to_owned()
    }
}

fn color(v: f64) -> &'static str {
    if v >= 0.5 {
        "#ffffff"
    } else {
        "#000000"
    }
}

fn pt(p: Vec2) -> String {
    format!("{} {}", fmt_num(p.x), fmt_num(p.y))
}

/// Path data for one outline.
pub fn path_data(cmds: &[PathCmd]) -> String {
    let mut d = String::new();
    for c in cmds {
        if !d.is_empty() {
            d.push(' ');
        }
        match *c {
            PathCmd::Move(p) => d.push_str(&format!("M {}", pt(p))),
            PathCmd::Line(p) => d.push_str(&format!("L {}", pt(p))),
            PathCmd::Arc { radius, large, sweep, to } => {
                let r = fmt_num(radius);
                d.push_str(&format!("A {r} {r} 0 {} {} {}", large as u8, sweep as u8, pt(to)));
            }
            PathCmd::Close => d.push('Z'),
        }
    }
    d
}

pub fn to_svg(doc: &DrawingDocument) -> String {
    let (w, h) = (doc.width, doc.height);
    let paper = color(doc.polarity.paper());
    let ink = color(doc.polarity.ink());
    let mut s = String::new();
    let _ = writeln!(
        s,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" data-polarity="{}">"##,
        doc.polarity.name()
    );
    let _ = writeln!(s, r##"<rect x="0" y="0" width="{w}" height="{h}" fill="{paper}"/>"##);
    let _ = writeln!(s, r##"<g fill="{ink}" fill-rule="nonzero" stroke="none">"##);
    for stroke in &doc.strokes {
        let _ = writeln!(s, r##"<path class="{}" d="{}"/>"##, stroke.tag.name(), path_data(&stroke_outline(stroke)));
    }
    s.push_str("</g>\n</svg>\n");
    s
}

/// Ink color of a document, for callers composing their own SVG.
pub fn ink_color(polarity: Polarity) -> &'static str {
    color(polarity.ink())
}

//! Plain-text polyline formats, valley-map images and metric reports.
//!
//! Contours:
//! ```text
//! # linedraw contours 1
//! polyline <contour|silhouette|crease> <closed 0|1> <hidden 0|1> <point count>
//! x y z
//! ```
//! Drawings:
//! ```text
//! # linedraw drawing 1
//! drawing <width> <height> <dark-on-light|light-on-dark>
//! stroke <tag> <point count>
//! x y thickness
//! ```
//! Coordinates use the shortest representation that parses back exactly.

use std::fmt::Write as _;

use linedraw_core::contour::{ContourPolyline, ContourSet, ContourTag};
use linedraw_core::image::ScalarImage;
use linedraw_core::math::{Vec2, Vec3, PI};
use linedraw_core::strokes::{DrawingDocument, Polarity, Stroke, StrokeTag};
use linedraw_core::valleys::ValleyMap;

use crate::imageio::{encode_pgm, encode_pgm16};

pub const CONTOURS_HEADER: &str = "# linedraw contours 1";
pub const DRAWING_HEADER: &str = "# linedraw drawing 1";

#[derive(Debug, thiserror::Error)]
#[error("line {line}: {msg}")]
pub struct FormatError {
    pub line: usize,
    pub msg: String,
}

fn err(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError { line, msg: msg.into() }
}

pub fn write_contours(set: &ContourSet) -> String {
    let mut s = format!("{CONTOURS_HEADER}\n");
    for pl in &set.polylines {
        let _ = writeln!(
            s,
            "polyline {} {} {} {}",
            pl.tag.name(),
            pl.closed as u8,
            pl.hidden as u8,
            pl.points.len()
        );
        for p in &pl.points {
            let _ = writeln!(s, "{} {} {}", p.x, p.y, p.z);
        }
    }
    s
}

/// Non-comment, non-blank lines with their 1-based numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let t = l.trim();
        (!t.is_empty() && !t.starts_with('#')).then(|| (i + 1, t.split_whitespace().collect()))
    })
}

fn nums<const N: usize>(line: usize, parts: &[&str]) -> Result<[f64; N], FormatError> {
    if parts.len() != N {
        return Err(err(line, format!("expected {N} numbers")));
    }
    let mut out = [0.0f64; N];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.parse().map_err(|_| err(line, format!("bad number {p:?}")))?;
        if !o.is_finite() {
            return Err(err(line, "non-finite number"));
        }
    }
    Ok(out)
}

fn flag(line: usize, s: &str) -> Result<bool, FormatError> {
    match s {
        "0" => Ok(false),
        "1" => Ok(true),
        _ => Err(err(line, format!("expected 0 or 1, got {s:?}"))),
    }
}

fn count(line: usize, s: &str) -> Result<usize, FormatError> {
    s.parse().map_err(|_| err(line, format!("bad count {s:?}")))
}

pub fn parse_contours(text: &str) -> Result<ContourSet, FormatError> {
    let mut set = ContourSet::default();
    let mut lines = content_lines(text);
    while let Some((ln, parts)) = lines.next() {
        if parts.len() != 5 || parts[0] != "polyline" {
            return Err(err(ln, "expected `polyline <tag> <closed> <hidden> <count>`"));
        }
        let tag = ContourTag::from_name(parts[1]).ok_or_else(|| err(ln, format!("unknown tag {:?}", parts[1])))?;
        let (closed, hidden, n) = (flag(ln, parts[2])?, flag(ln, parts[3])?, count(ln, parts[4])?);
        let mut points = Vec::with_capacity(n);
        for _ in 0..n {
            let (l, p) = lines.next().ok_or_else(|| err(ln, "polyline truncated"))?;
            let [x, y, z] = nums::<3>(l, &p)?;
            points.push(Vec3::new(x, y, z));
        }
        set.polylines.push(ContourPolyline { tag, points, closed, hidden });
    }
    Ok(set)
}

pub fn write_drawing(doc: &DrawingDocument) -> String {
    let mut s = format!("{DRAWING_HEADER}\ndrawing {} {} {}\n", doc.width, doc.height, doc.polarity.name());
    for st in &doc.strokes {
        let _ = writeln!(s, "stroke {} {}", st.tag.name(), st.points.len());
        for (p, t) in st.points.iter().zip(&st.thickness) {
            let _ = writeln!(s, "{} {} {}", p.x, p.y, t);
        }
    }
    s
}

pub fn parse_drawing(text: &str) -> Result<DrawingDocument, FormatError> {
    let mut lines = content_lines(text);
    let (ln, head) = lines.next().ok_or_else(|| err(1, "missing `drawing` line"))?;
    if head.len() != 4 || head[0] != "drawing" {
        return Err(err(ln, "expected `drawing <width> <height> <polarity>`"));
    }
    let (w, h) = (count(ln, head[1])?, count(ln, head[2])?);
    let polarity = Polarity::from_name(head[3]).ok_or_else(|| err(ln, format!("unknown polarity {:?}", head[3])))?;
    let mut doc = DrawingDocument::new(w, h, polarity);
    while let Some((ln, parts)) = lines.next() {
        if parts.len() != 3 || parts[0] != "stroke" {
            return Err(err(ln, "expected `stroke <tag> <count>`"));
        }
        let tag = StrokeTag::from_name(parts[1]).ok_or_else(|| err(ln, format!("unknown tag {:?}", parts[1])))?;
        let n = count(ln, parts[2])?;
        let (mut pts, mut th) = (Vec::with_capacity(n), Vec::with_capacity(n));
        for _ in 0..n {
            let (l, p) = lines.next().ok_or_else(|| err(ln, "stroke truncated"))?;
            let [x, y, t] = nums::<3>(l, &p)?;
            pts.push(Vec2::new(x, y));
            th.push(t);
        }
        doc.strokes.push(Stroke::new(pts, th, tag).map_err(|e| err(ln, e.to_string()))?);
    }
    Ok(doc)
}

/// Strength (16-bit, scaled by its maximum), orientation (16-bit, angle/π)
/// and mask (8-bit) as PGM files.
pub fn valley_map_pgms(map: &ValleyMap) -> [Vec<u8>; 3] {
    let max = map.strength.data().iter().copied().fold(0.0, f64::max);
    let scale = if max > 0.0 { 1.0 / max } else { 0.0 };
    [
        encode_pgm16(&map.strength.map(|v| v * scale)),
        encode_pgm16(&map.orientation.map(|a| a / PI)),
        encode_pgm(&map.mask.to_image()),
    ]
}

/// Ordered metric report.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub entries: Vec<(String, ReportValue)>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ReportValue {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Report {
    pub fn num(&mut self, key: &str, v: f64) {
        self.entries.push((key.to_owned(), ReportValue::Num(v)));
    }

    pub fn int(&mut self, key: &str, v: i64) {
        self.entries.push((key.to_owned(), ReportValue::Int(v)));
    }

    pub fn text(&mut self, key: &str, v: &str) {
        self.entries.push((key.to_owned(), ReportValue::Text(v.to_owned())));
    }

    pub fn get(&self, key: &str) -> Option<&ReportValue> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    /// `key=value` per line.
    pub fn to_key_value(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.entries {
            let _ = match v {
                ReportValue::Num(x) => writeln!(s, "{k}={x}"),
                ReportValue::Int(x) => writeln!(s, "{k}={x}"),
                ReportValue::Text(x) => writeln!(s, "{k}={x}"),
            };
        }
        s
    }

    /// One JSON object, keys in report order. Non-finite numbers become null.
    pub fn to_json(&self) -> String {
        let fields: Vec<String> = self
            .entries
            .iter()
            .map(|(k, v)| {
                let val = match v {
                    ReportValue::Num(x) => serde_json::Number::from_f64(*x).map_or(serde_json::Value::Null, serde_json::Value::Number),
                    ReportValue::Int(x) => serde_json::Value::from(*x),
                    ReportValue::Text(x) => serde_json::Value::from(x.as_str()),
                };
                format!("{}:{}", serde_json::Value::from(k.as_str()), val)
            })
            .collect();
        format!("{{{}}}\n", fields.join(","))
    }
}

/// Pixelwise darker of a render and a drawing raster.
pub fn overlay(render: &ScalarImage, ink: &ScalarImage) -> ScalarImage {
    ScalarImage::from_fn(render.width(), render.height(), |x, y| render.get(x, y).min(ink.get(x, y)))
}

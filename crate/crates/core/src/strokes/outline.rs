//! Closed outlines of variable-width strokes, for vector output.
//!
//! The outline runs along the left offset of the polyline, around the end
//! cap, back along the right offset and around the start cap. Joins on the
//! outer side of a turn are circular arcs; inner sides are joined with
//! straight segments (the nonzero fill rule absorbs the overlap).

use alloc::vec::Vec;

use crate::math::Vec2;

use super::Stroke;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PathCmd {
    Move(Vec2),
    Line(Vec2),
    /// Circular arc to `to`; `sweep` is true when the angle increases
    /// (clockwise on a y-down page), matching the SVG sweep flag.
    Arc { radius: f64, large: bool, sweep: bool, to: Vec2 },
    Close,
}

fn arc(center: Vec2, from: Vec2, to: Vec2, radius: f64, through: Option<Vec2>) -> PathCmd {
    let (a, b) = (from - center, to - center);
    let sweep = match through {
        // half-turn: direction fixed by the required midpoint
        Some(m) => a.cross(m - center) > 0.0,
        None => a.cross(b) > 0.0,
    };
    PathCmd::Arc {
        radius,
        large: false,
        sweep,
        to,
    }
}

/// Outline commands for one stroke. Consecutive duplicate points are
/// merged (keeping the wider width); a stroke that collapses to one point
/// becomes a disc.
pub fn stroke_outline(stroke: &Stroke) -> Vec<PathCmd> {
    let mut pts: Vec<Vec2> = Vec::with_capacity(stroke.points.len());
    let mut rad: Vec<f64> = Vec::with_capacity(stroke.points.len());
    for (&p, &t) in stroke.points.iter().zip(&stroke.thickness) {
        if let Some(&last) = pts.last() {
            if last.distance(p) <= 1e-9 {
                let r = rad.last_mut().unwrap();
                *r = r.max(0.5 * t);
                continue;
            }
        }
        pts.push(p);
        rad.push(0.5 * t);
    }
    let mut out = Vec::new();
    let n = pts.len();
    if n == 1 {
        let (c, r) = (pts[0], rad[0]);
        let a = c + Vec2::new(r, 0.0);
        let b = c - Vec2::new(r, 0.0);
        out.push(PathCmd::Move(a));
        out.push(arc(c, a, b, r, Some(c + Vec2::new(0.0, r))));
        out.push(arc(c, b, a, r, Some(c - Vec2::new(0.0, r))));
        out.push(PathCmd::Close);
        return out;
    }
    let dirs: Vec<Vec2> = pts.windows(2).map(|w| (w[1] - w[0]).normalize()).collect();
    let left = |i: usize, seg: usize| pts[i] + dirs[seg].perp() * rad[i];
    let right = |i: usize, seg: usize| pts[i] - dirs[seg].perp() * rad[i];

    out.push(PathCmd::Move(left(0, 0)));
    for s in 0..n - 1 {
        out.push(PathCmd::Line(left(s + 1, s)));
        if s + 1 < n - 1 {
            let (from, to) = (left(s + 1, s), left(s + 1, s + 1));
            // left side is outer when turning toward the right (negative cross)
            if dirs[s].cross(dirs[s + 1]) < 0.0 {
                out.push(arc(pts[s + 1], from, to, rad[s + 1], None));
            } else {
                out.push(PathCmd::Line(to));
            }
        }
    }
    let last = n - 1;
    out.push(arc(
        pts[last],
        left(last, last - 1),
        right(last, last - 1),
        rad[last],
        Some(pts[last] + dirs[last - 1] * rad[last]),
    ));
    for s in (0..n - 1).rev() {
        out.push(PathCmd::Line(right(s, s)));
        if s > 0 {
            let (from, to) = (right(s, s), right(s, s - 1));
            if dirs[s - 1].cross(dirs[s]) > 0.0 {
                out.push(arc(pts[s], from, to, rad[s], None));
            } else {
                out.push(PathCmd::Line(to));
            }
        }
    }
    out.push(arc(pts[0], right(0, 0), left(0, 0), rad[0], Some(pts[0] - dirs[0] * rad[0])));
    out.push(PathCmd::Close);
    out
}

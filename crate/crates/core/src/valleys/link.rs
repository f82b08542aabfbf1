//! Linking valley pixels into sub-pixel polylines.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::{deg_to_rad, line_angle, line_angle_diff, Vec2};

use super::detect::ValleyMap;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinkParams {
    /// Chains shorter than this arclength (pixels) are dropped.
    pub min_length: f64,
    /// Chain endpoints closer than this are joined.
    pub merge_radius: f64,
    /// Maximum orientation change between linked pixels, degrees.
    pub max_turn: f64,
}

impl Default for LinkParams {
    fn default() -> Self {
        LinkParams {
            min_length: 8.0,
            merge_radius: 2.0,
            max_turn: 45.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValleyPolyline {
    pub points: Vec<Vec2>,
    pub closed: bool,
}

impl ValleyPolyline {
    pub fn arclength(&self) -> f64 {
        polyline_length(&self.points, self.closed)
    }

    /// Points with the first repeated at the end for closed chains.
    pub fn path(&self) -> Vec<Vec2> {
        let mut p = self.points.clone();
        if self.closed && p.len() > 2 {
            p.push(p[0]);
        }
        p
    }
}

pub fn polyline_length(points: &[Vec2], closed: bool) -> f64 {
    let mut len: f64 = points.windows(2).map(|w| w[0].distance(w[1])).sum();
    if closed && points.len() > 2 {
        len += points[points.len() - 1].distance(points[0]);
    }
    len
}

const NEIGHBORS: [(i64, i64); 8] = [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)];

struct Tracer<'a> {
    map: &'a ValleyMap,
    max_turn: f64,
    visited: Vec<bool>,
}

impl Tracer<'_> {
    fn idx(&self, x: usize, y: usize) -> usize {
        y * self.map.width() + x
    }

    fn compatible_neighbors(&self, x: usize, y: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        let (w, h) = (self.map.width() as i64, self.map.height() as i64);
        let o = self.map.orientation.get(x, y);
        NEIGHBORS.iter().filter_map(move |&(dx, dy)| {
            let (nx, ny) = (x as i64 + dx, y as i64 + dy);
            if nx < 0 || ny < 0 || nx >= w || ny >= h {
                return None;
            }
            let (nx, ny) = (nx as usize, ny as usize);
            if !self.map.mask.get(nx, ny) {
                return None;
            }
            (line_angle_diff(o, self.map.orientation.get(nx, ny)) <= self.max_turn).then_some((nx, ny))
        })
    }

    /// Best unvisited continuation from `(x, y)`: the nearest sub-pixel
    /// valley point ahead along the tangent (oriented by `heading`), with a
    /// penalty for sideways displacement.
    fn next(&self, x: usize, y: usize, heading: Option<Vec2>) -> Option<(usize, usize)> {
        let t = Vec2::from_angle(self.map.orientation.get(x, y));
        let t = match heading {
            Some(hd) if t.dot(hd) < 0.0 => -t,
            _ => t,
        };
        let here = self.map.point(x, y);
        let mut best: Option<((usize, usize), f64)> = None;
        for (nx, ny) in self.compatible_neighbors(x, y) {
            if self.visited[self.idx(nx, ny)] {
                continue;
            }
            let v = self.map.point(nx, ny) - here;
            let along = v.dot(t);
            if along <= 0.0 && heading.is_some() {
                continue;
            }
            let cost = v.norm() + 2.0 * v.cross(t).abs();
            if best.is_none_or(|(_, c)| cost < c) {
                best = Some(((nx, ny), cost));
            }
        }
        best.map(|(p, _)| p)
    }

    fn walk(&mut self, start: (usize, usize), heading: Option<Vec2>) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut cur = start;
        let mut heading = heading;
        while let Some(n) = self.next(cur.0, cur.1, heading) {
            let i = self.idx(n.0, n.1);
            self.visited[i] = true;
            heading = Some((self.map.point(n.0, n.1) - self.map.point(cur.0, cur.1)).normalize());
            out.push(n);
            cur = n;
        }
        out
    }
}

/// Traces 8-connected chains of mask pixels with compatible orientation,
/// drops short chains, then joins chains whose endpoints nearly meet.
pub fn link_valleys(map: &ValleyMap, params: &LinkParams) -> Vec<ValleyPolyline> {
    let (w, h) = (map.width(), map.height());
    let mut tracer = Tracer {
        map,
        max_turn: deg_to_rad(params.max_turn),
        visited: vec![false; w * h],
    };
    let pixels: Vec<(usize, usize)> = map.mask.iter_set().collect();
    let endpoints: Vec<(usize, usize)> = pixels
        .iter()
        .copied()
        .filter(|&(x, y)| tracer.compatible_neighbors(x, y).count() <= 1)
        .collect();

    let mut chains: Vec<Vec<Vec2>> = Vec::new();
    for &seed in endpoints.iter().chain(pixels.iter()) {
        let si = tracer.idx(seed.0, seed.1);
        if tracer.visited[si] {
            continue;
        }
        tracer.visited[si] = true;
        let forward = tracer.walk(seed, None);
        let back_heading = forward
            .first()
            .map(|f| -(map.point(f.0, f.1) - map.point(seed.0, seed.1)).normalize());
        let backward = tracer.walk(seed, back_heading);
        let pix: Vec<(usize, usize)> = backward
            .into_iter()
            .rev()
            .chain(core::iter::once(seed))
            .chain(forward)
            .collect();
        chains.push(pix.into_iter().map(|(x, y)| map.point(x, y)).collect());
    }

    chains.retain(|c| polyline_length(c, false) >= params.min_length);
    let mut chains = merge_chains(chains, params);
    for c in &mut chains {
        let n = c.points.len();
        if n > 3
            && c.points[0].distance(c.points[n - 1]) <= params.merge_radius
            && ends_compatible(end_angle(&c.points, false), end_angle(&c.points, true), params)
        {
            c.closed = true;
        }
    }
    chains
}

/// Tangent angle near one end of a chain.
fn end_angle(points: &[Vec2], at_start: bool) -> f64 {
    let n = points.len();
    let k = 3.min(n - 1);
    let d = if at_start { points[k] - points[0] } else { points[n - 1] - points[n - 1 - k] };
    line_angle(d.x, d.y)
}

fn ends_compatible(a: f64, b: f64, params: &LinkParams) -> bool {
    line_angle_diff(a, b) <= deg_to_rad(params.max_turn)
}

fn merge_chains(chains: Vec<Vec<Vec2>>, params: &LinkParams) -> Vec<ValleyPolyline> {
    let mut chains: Vec<Option<Vec<Vec2>>> = chains.into_iter().map(Some).collect();
    loop {
        // closest compatible pair of ends from different chains
        let mut best: Option<(usize, bool, usize, bool, f64)> = None;
        for i in 0..chains.len() {
            let Some(a) = &chains[i] else { continue };
            for j in i + 1..chains.len() {
                let Some(b) = &chains[j] else { continue };
                for ea in [false, true] {
                    for eb in [false, true] {
                        let pa = if ea { a[a.len() - 1] } else { a[0] };
                        let pb = if eb { b[b.len() - 1] } else { b[0] };
                        let d = pa.distance(pb);
                        if d > params.merge_radius || best.is_some_and(|bst| d >= bst.4) {
                            continue;
                        }
                        if ends_compatible(end_angle(a, !ea), end_angle(b, !eb), params) {
                            best = Some((i, ea, j, eb, d));
                        }
                    }
                }
            }
        }
        let Some((i, ea, j, eb, _)) = best else { break };
        let mut a = chains[i].take().unwrap();
        let mut b = chains[j].take().unwrap();
        // orient so that a ends where b starts
        if !ea {
            a.reverse();
        }
        if eb {
            b.reverse();
        }
        a.extend(b);
        chains[i] = Some(a);
    }
    chains
        .into_iter()
        .flatten()
        .map(|points| ValleyPolyline { points, closed: false })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image::ScalarImage;
    use crate::valleys::detect::{detect_valleys, ValleyParams};

    fn params() -> ValleyParams {
        ValleyParams {
            tau: 0.5,
            ..Default::default()
        }
    }

    #[test]
    fn straight_line_is_one_chain() {
        let img = ScalarImage::from_fn(60, 40, |_, y| if y == 20 { 0.0 } else { 1.0 });
        let map = detect_valleys(&img, &params()).unwrap();
        let chains = link_valleys(&map, &LinkParams::default());
        assert_eq!(chains.len(), 1);
        assert!(!chains[0].closed);
        let border = params().border() as f64;
        assert!((chains[0].arclength() - (60.0 - 2.0 * border - 1.0)).abs() < 1e-9);
    }

    #[test]
    fn parallel_lines_stay_separate() {
        let img = ScalarImage::from_fn(60, 60, |_, y| if y == 20 || y == 30 { 0.0 } else { 1.0 });
        let map = detect_valleys(&img, &params()).unwrap();
        let chains = link_valleys(&map, &LinkParams::default());
        assert_eq!(chains.len(), 2);
    }

    #[test]
    fn short_fragments_dropped() {
        let img = ScalarImage::from_fn(40, 40, |x, y| if y == 20 && (18..22).contains(&x) { 0.0 } else { 1.0 });
        let map = detect_valleys(&img, &params()).unwrap();
        assert!(link_valleys(&map, &LinkParams::default()).is_empty());
    }

    #[test]
    fn circle_closes() {
        let img = ScalarImage::from_fn(80, 80, |x, y| {
            let d = ((x as f64 + 0.5 - 40.0).powi(2) + (y as f64 + 0.5 - 40.0).powi(2)).sqrt();
            (d - 25.0).abs().min(1.0)
        });
        let map = detect_valleys(&img, &params()).unwrap();
        let chains = link_valleys(&map, &LinkParams::default());
        assert_eq!(chains.len(), 1);
        assert!(chains[0].closed);
        let len = chains[0].arclength();
        let circ = 2.0 * core::f64::consts::PI * 25.0;
        assert!((len - circ).abs() / circ < 0.05, "{len}");
    }
}

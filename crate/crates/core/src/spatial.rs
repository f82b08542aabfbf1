//! Uniform-grid indices over 2D segments and points.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::{ceil, floor, Vec2};

/// Distance from `p` to segment `a`-`b`.
pub fn point_segment_distance(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    let t = if len2 > 0.0 { ((p - a).dot(ab) / len2).clamp(0.0, 1.0) } else { 0.0 };
    p.distance(a + ab * t)
}

#[derive(Clone, Debug)]
struct Grid {
    origin: Vec2,
    cell: f64,
    nx: i64,
    ny: i64,
    cells: Vec<Vec<u32>>,
}

impl Grid {
    fn new(lo: Vec2, hi: Vec2, cell: f64) -> Grid {
        let nx = (floor((hi.x - lo.x) / cell) as i64 + 1).max(1);
        let ny = (floor((hi.y - lo.y) / cell) as i64 + 1).max(1);
        Grid {
            origin: lo,
            cell,
            nx,
            ny,
            cells: vec![Vec::new(); (nx * ny) as usize],
        }
    }

    fn coord(&self, p: Vec2) -> (i64, i64) {
        (
            floor((p.x - self.origin.x) / self.cell) as i64,
            floor((p.y - self.origin.y) / self.cell) as i64,
        )
    }

    fn insert_box(&mut self, lo: Vec2, hi: Vec2, id: u32) {
        let (x0, y0) = self.coord(lo);
        let (x1, y1) = self.coord(hi);
        for y in y0.max(0)..=y1.min(self.ny - 1) {
            for x in x0.max(0)..=x1.min(self.nx - 1) {
                self.cells[(y * self.nx + x) as usize].push(id);
            }
        }
    }

    /// Visits ids in cells whose Chebyshev ring distance from `p`'s cell is
    /// `r`, for increasing `r`, until `visit` returns a bound that the ring
    /// distance exceeds.
    fn search(&self, p: Vec2, mut visit: impl FnMut(u32) -> f64) {
        let (cx, cy) = self.coord(p);
        // farthest ring that can still contain cells
        let reach = [cx, self.nx - 1 - cx, cy, self.ny - 1 - cy]
            .iter()
            .map(|d| d.abs())
            .max()
            .unwrap_or(0)
            + 1;
        let mut best = f64::INFINITY;
        let mut r = 0i64;
        while r <= reach + self.nx + self.ny {
            if (r - 1) as f64 * self.cell > best {
                break;
            }
            for y in cy - r..=cy + r {
                if y < 0 || y >= self.ny {
                    continue;
                }
                let edge_row = y == cy - r || y == cy + r;
                let mut x = cx - r;
                while x <= cx + r {
                    if x >= 0 && x < self.nx {
                        for &id in &self.cells[(y * self.nx + x) as usize] {
                            best = best.min(visit(id));
                        }
                    }
                    x += if edge_row || r == 0 { 1 } else { 2 * r };
                }
            }
            r += 1;
        }
    }
}

/// Nearest-segment queries over a fixed set of polylines.
#[derive(Clone, Debug)]
pub struct SegmentIndex {
    segments: Vec<(Vec2, Vec2)>,
    grid: Option<Grid>,
}

impl SegmentIndex {
    pub fn new(polylines: &[Vec<Vec2>], cell: f64) -> SegmentIndex {
        let mut segments = Vec::new();
        for pl in polylines {
            if pl.len() == 1 {
                segments.push((pl[0], pl[0]));
            }
            for w in pl.windows(2) {
                segments.push((w[0], w[1]));
            }
        }
        if segments.is_empty() {
            return SegmentIndex { segments, grid: None };
        }
        let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for &(a, b) in &segments {
            lo = Vec2::new(lo.x.min(a.x).min(b.x), lo.y.min(a.y).min(b.y));
            hi = Vec2::new(hi.x.max(a.x).max(b.x), hi.y.max(a.y).max(b.y));
        }
        let mut grid = Grid::new(lo, hi, cell);
        for (i, &(a, b)) in segments.iter().enumerate() {
            let l = Vec2::new(a.x.min(b.x), a.y.min(b.y));
            let h = Vec2::new(a.x.max(b.x), a.y.max(b.y));
            grid.insert_box(l, h, i as u32);
        }
        SegmentIndex {
            segments,
            grid: Some(grid),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Distance to the nearest segment; `+inf` for an empty index.
    pub fn distance(&self, p: Vec2) -> f64 {
        let Some(grid) = &self.grid else {
            return f64::INFINITY;
        };
        let mut best = f64::INFINITY;
        grid.search(p, |id| {
            let (a, b) = self.segments[id as usize];
            best = best.min(point_segment_distance(p, a, b));
            best
        });
        best
    }
}

/// Points grouped by owner id, queried for proximity.
#[derive(Clone, Debug)]
pub struct PointIndex {
    cell: f64,
    nx: i64,
    ny: i64,
    cells: Vec<Vec<(Vec2, u32)>>,
}

impl PointIndex {
    /// Covers `[0, width] x [0, height]`; points outside are clamped into
    /// border cells.
    pub fn new(width: f64, height: f64, cell: f64) -> PointIndex {
        let nx = (floor(width / cell) as i64 + 1).max(1);
        let ny = (floor(height / cell) as i64 + 1).max(1);
        PointIndex {
            cell,
            nx,
            ny,
            cells: vec![Vec::new(); (nx * ny) as usize],
        }
    }

    fn coord(&self, p: Vec2) -> (i64, i64) {
        (
            (floor(p.x / self.cell) as i64).clamp(0, self.nx - 1),
            (floor(p.y / self.cell) as i64).clamp(0, self.ny - 1),
        )
    }

    pub fn insert(&mut self, p: Vec2, owner: u32) {
        let (x, y) = self.coord(p);
        self.cells[(y * self.nx + x) as usize].push((p, owner));
    }

    /// True if a point not owned by `skip` lies strictly within `radius`.
    pub fn any_within(&self, p: Vec2, radius: f64, skip: Option<u32>) -> bool {
        let r = ceil(radius / self.cell) as i64;
        let (cx, cy) = self.coord(p);
        for y in (cy - r).max(0)..=(cy + r).min(self.ny - 1) {
            for x in (cx - r).max(0)..=(cx + r).min(self.nx - 1) {
                for &(q, owner) in &self.cells[(y * self.nx + x) as usize] {
                    if Some(owner) != skip && q.distance(p) < radius {
                        return true;
                    }
                }
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segment_index_matches_brute_force() {
        let pls = vec![
            vec![Vec2::new(0.0, 0.0), Vec2::new(10.0, 0.0), Vec2::new(10.0, 30.0)],
            vec![Vec2::new(50.0, 50.0), Vec2::new(52.0, 49.0)],
        ];
        let idx = SegmentIndex::new(&pls, 4.0);
        let mut state = 7u64;
        let mut rnd = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64) / ((1u64 << 53) as f64) * 120.0 - 30.0
        };
        for _ in 0..300 {
            let p = Vec2::new(rnd(), rnd());
            let mut brute = f64::INFINITY;
            for pl in &pls {
                for w in pl.windows(2) {
                    brute = brute.min(point_segment_distance(p, w[0], w[1]));
                }
            }
            assert!((idx.distance(p) - brute).abs() < 1e-12, "{p:?}");
        }
        assert!(SegmentIndex::new(&[], 1.0).distance(Vec2::ZERO).is_infinite());
    }

    #[test]
    fn point_index_skips_owner() {
        let mut idx = PointIndex::new(20.0, 20.0, 2.0);
        idx.insert(Vec2::new(5.0, 5.0), 1);
        assert!(idx.any_within(Vec2::new(6.0, 5.0), 1.5, None));
        assert!(!idx.any_within(Vec2::new(6.0, 5.0), 1.5, Some(1)));
        assert!(!idx.any_within(Vec2::new(9.0, 5.0), 1.5, None));
    }
}

//! Bounding-volume hierarchy over mesh triangles for shadow rays.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::{fabs, Vec3};
use crate::mesh::{Aabb, Mesh};

const LEAF_SIZE: usize = 4;

#[derive(Clone, Debug)]
struct Node {
    bounds: Aabb,
    /// Leaf: `[start, start + count)` into `order`. Inner: children at
    /// `left` and `left + 1`.
    start: u32,
    count: u32,
    left: u32,
}

#[derive(Clone, Debug)]
pub struct Bvh {
    nodes: Vec<Node>,
    order: Vec<u32>,
    tris: Vec<[Vec3; 3]>,
}

impl Bvh {
    pub fn build(mesh: &Mesh) -> Bvh {
        let tris: Vec<[Vec3; 3]> = mesh
            .faces()
            .iter()
            .map(|f| f.map(|i| mesh.vertices()[i as usize]))
            .collect();
        let centroids: Vec<Vec3> = tris.iter().map(|t| (t[0] + t[1] + t[2]) / 3.0).collect();
        let mut order: Vec<u32> = (0..tris.len() as u32).collect();
        let mut nodes = vec![Node {
            bounds: Aabb::empty(),
            start: 0,
            count: tris.len() as u32,
            left: 0,
        }];
        let mut stack = vec![0usize];
        while let Some(ni) = stack.pop() {
            let (start, count) = (nodes[ni].start as usize, nodes[ni].count as usize);
            let slice = &mut order[start..start + count];
            let mut bounds = Aabb::empty();
            let mut cbounds = Aabb::empty();
            for &t in slice.iter() {
                for p in &tris[t as usize] {
                    bounds.grow(*p);
                }
                cbounds.grow(centroids[t as usize]);
            }
            nodes[ni].bounds = bounds;
            if count <= LEAF_SIZE {
                continue;
            }
            let ext = cbounds.max - cbounds.min;
            let axis = if ext.x >= ext.y && ext.x >= ext.z {
                0
            } else if ext.y >= ext.z {
                1
            } else {
                2
            };
            if ext.axis(axis) <= 0.0 {
                continue;
            }
            let mid = count / 2;
            slice.select_nth_unstable_by(mid, |&a, &b| {
                centroids[a as usize]
                    .axis(axis)
                    .total_cmp(&centroids[b as usize].axis(axis))
                    .then(a.cmp(&b))
            });
            let left = nodes.len() as u32;
            nodes.push(Node {
                bounds: Aabb::empty(),
                start: start as u32,
                count: mid as u32,
                left: 0,
            });
            nodes.push(Node {
                bounds: Aabb::empty(),
                start: (start + mid) as u32,
                count: (count - mid) as u32,
                left: 0,
            });
            nodes[ni].left = left;
            nodes[ni].count = 0;
            stack.push(left as usize);
            stack.push(left as usize + 1);
        }
        Bvh { nodes, order, tris }
    }

    /// True if the segment `origin + t * dir`, `t` in `(t_min, t_max)`, hits
    /// any triangle.
    pub fn occluded(&self, origin: Vec3, dir: Vec3, t_min: f64, t_max: f64) -> bool {
        let inv = Vec3::new(1.0 / dir.x, 1.0 / dir.y, 1.0 / dir.z);
        let mut stack = [0u32; 64];
        let mut sp = 1usize;
        while sp > 0 {
            sp -= 1;
            let node = &self.nodes[stack[sp] as usize];
            if !slab_hit(&node.bounds, origin, inv, t_min, t_max) {
                continue;
            }
            if node.count > 0 {
                let s = node.start as usize;
                for &ti in &self.order[s..s + node.count as usize] {
                    if let Some(t) = intersect_triangle(origin, dir, &self.tris[ti as usize]) {
                        if t > t_min && t < t_max {
                            return true;
                        }
                    }
                }
            } else if sp + 2 <= stack.len() {
                stack[sp] = node.left;
                stack[sp + 1] = node.left + 1;
                sp += 2;
            }
        }
        false
    }
}

fn slab_hit(b: &Aabb, o: Vec3, inv: Vec3, t_min: f64, t_max: f64) -> bool {
    let mut lo = t_min;
    let mut hi = t_max;
    for a in 0..3 {
        let (o, i) = (o.axis(a), inv.axis(a));
        let mut t0 = (b.min.axis(a) - o) * i;
        let mut t1 = (b.max.axis(a) - o) * i;
        if t0 > t1 {
            core::mem::swap(&mut t0, &mut t1);
        }
        // NaN (0 * inf) leaves the interval unchanged
        if t0 > lo {
            lo = t0;
        }
        if t1 < hi {
            hi = t1;
        }
        if lo > hi {
            return false;
        }
    }
    true
}

/// Möller–Trumbore ray/triangle intersection; returns the ray parameter.
pub fn intersect_triangle(o: Vec3, d: Vec3, tri: &[Vec3; 3]) -> Option<f64> {
    let e1 = tri[1] - tri[0];
    let e2 = tri[2] - tri[0];
    let p = d.cross(e2);
    let det = e1.dot(p);
    if fabs(det) < 1e-14 {
        return None;
    }
    let inv = 1.0 / det;
    let s = o - tri[0];
    let u = s.dot(p) * inv;
    if !(0.0..=1.0).contains(&u) {
        return None;
    }
    let q = s.cross(e1);
    let v = d.dot(q) * inv;
    if v < 0.0 || u + v > 1.0 {
        return None;
    }
    Some(e2.dot(q) * inv)
}

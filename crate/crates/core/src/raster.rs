//! Perspective triangle rasterization into a geometry buffer.
//!
//! Each covered pixel stores the nearest face, its perspective-correct
//! barycentric coordinates, and view depth. Shading is a separate pass over
//! this buffer.

use alloc::vec;
use alloc::vec::Vec;

use crate::camera::Camera;
use crate::image::{Mask, ScalarImage};
use crate::math::{ceil, floor, Vec2, Vec3};
use crate::mesh::Mesh;

pub const NO_FACE: u32 = u32::MAX;

/// Per-pixel visible-surface record.
#[derive(Clone, Debug)]
pub struct GBuffer {
    pub depth: ScalarImage,
    pub face: Vec<u32>,
    pub bary: Vec<[f64; 3]>,
}

impl GBuffer {
    pub fn width(&self) -> usize {
        self.depth.width()
    }

    pub fn height(&self) -> usize {
        self.depth.height()
    }

    /// Face and barycentrics at pixel `(x, y)`, if covered.
    pub fn fragment(&self, x: usize, y: usize) -> Option<(usize, [f64; 3])> {
        let i = y * self.width() + x;
        let f = self.face[i];
        (f != NO_FACE).then(|| (f as usize, self.bary[i]))
    }

    pub fn coverage(&self) -> Mask {
        Mask::from_fn(self.width(), self.height(), |x, y| self.face[y * self.width() + x] != NO_FACE)
    }
}

#[derive(Clone, Copy)]
struct ClipVertex {
    view: Vec3,
    bary: [f64; 3],
}

/// Z-buffered rasterization of every face of `mesh` as seen by `camera`.
/// Pixels no face covers keep `+inf` depth and [`NO_FACE`].
pub fn rasterize(mesh: &Mesh, camera: &Camera) -> GBuffer {
    let (w, h) = (camera.width(), camera.height());
    let mut depth = ScalarImage::new(w, h, f64::INFINITY);
    let mut face_buf = vec![NO_FACE; w * h];
    let mut bary_buf = vec![[0.0; 3]; w * h];
    let near = camera.near();
    let far = camera.far();
    let verts = mesh.vertices();

    let mut poly: Vec<ClipVertex> = Vec::with_capacity(4);
    let mut clipped: Vec<ClipVertex> = Vec::with_capacity(4);
    for (fi, f) in mesh.faces().iter().enumerate() {
        poly.clear();
        for (k, &vi) in f.iter().enumerate() {
            let mut b = [0.0; 3];
            b[k] = 1.0;
            poly.push(ClipVertex {
                view: camera.to_view(verts[vi as usize]),
                bary: b,
            });
        }
        if poly.iter().all(|v| v.view.z > far) {
            continue;
        }
        clip_near(&poly, near, &mut clipped);
        if clipped.len() < 3 {
            continue;
        }
        let screen: Vec<(Vec2, f64)> = clipped
            .iter()
            .map(|v| (camera.view_to_image(v.view), 1.0 / v.view.z))
            .collect();
        for k in 1..clipped.len() - 1 {
            let idx = [0, k, k + 1];
            let s = idx.map(|i| screen[i].0);
            let area = (s[1] - s[0]).cross(s[2] - s[0]);
            if !(area.abs() > 1e-12) {
                continue;
            }
            let min_x = s[0].x.min(s[1].x).min(s[2].x);
            let max_x = s[0].x.max(s[1].x).max(s[2].x);
            let min_y = s[0].y.min(s[1].y).min(s[2].y);
            let max_y = s[0].y.max(s[1].y).max(s[2].y);
            let x0 = ceil(min_x - 0.5).max(0.0);
            let x1 = floor(max_x - 0.5).min(w as f64 - 1.0);
            let y0 = ceil(min_y - 0.5).max(0.0);
            let y1 = floor(max_y - 0.5).min(h as f64 - 1.0);
            if x0 > x1 || y0 > y1 {
                continue;
            }
            let inv_area = 1.0 / area;
            let inv_z = idx.map(|i| screen[i].1);
            for py in y0 as usize..=y1 as usize {
                for px in x0 as usize..=x1 as usize {
                    let p = Vec2::new(px as f64 + 0.5, py as f64 + 0.5);
                    let l0 = (s[2] - s[1]).cross(p - s[1]) * inv_area;
                    let l1 = (s[0] - s[2]).cross(p - s[2]) * inv_area;
                    let l2 = (s[1] - s[0]).cross(p - s[0]) * inv_area;
                    if l0 < -1e-9 || l1 < -1e-9 || l2 < -1e-9 {
                        continue;
                    }
                    let q = [l0 * inv_z[0], l1 * inv_z[1], l2 * inv_z[2]];
                    let sum = q[0] + q[1] + q[2];
                    if !(sum > 0.0) {
                        continue;
                    }
                    let z = 1.0 / sum;
                    let pi = py * w + px;
                    if !(z < depth.data()[pi]) || z < near || z > far {
                        continue;
                    }
                    let mut b = [0.0; 3];
                    for (j, &vi) in idx.iter().enumerate() {
                        let wgt = q[j] / sum;
                        for (c, bc) in b.iter_mut().enumerate() {
                            *bc += wgt * clipped[vi].bary[c];
                        }
                    }
                    depth.data_mut()[pi] = z;
                    face_buf[pi] = fi as u32;
                    bary_buf[pi] = b;
                }
            }
        }
    }
    GBuffer {
        depth,
        face: face_buf,
        bary: bary_buf,
    }
}

fn clip_near(poly: &[ClipVertex], near: f64, out: &mut Vec<ClipVertex>) {
    out.clear();
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        let a_in = a.view.z >= near;
        let b_in = b.view.z >= near;
        if a_in {
            out.push(a);
        }
        if a_in != b_in {
            let t = (near - a.view.z) / (b.view.z - a.view.z);
            let mut bary = [0.0; 3];
            for (c, bc) in bary.iter_mut().enumerate() {
                *bc = a.bary[c] + (b.bary[c] - a.bary[c]) * t;
            }
            out.push(ClipVertex {
                view: a.view.lerp(b.view, t),
                bary,
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri_at_depth(z: f64, size: f64) -> Mesh {
        let v = alloc::vec![
            Vec3::new(-size, -size, 5.0 - z),
            Vec3::new(size, -size, 5.0 - z),
            Vec3::new(0.0, size, 5.0 - z),
        ];
        Mesh::new(v, alloc::vec![[0, 1, 2]], None).unwrap()
    }

    fn cam() -> Camera {
        Camera::looking_at(Vec3::new(0.0, 0.0, 5.0), Vec3::ZERO, 60.0, 64, 64).unwrap()
    }

    #[test]
    fn barycentrics_sum_to_one_and_reproduce_position() {
        let m = crate::shapes::icosphere(2, 1.0);
        let c = cam();
        let g = rasterize(&m, &c);
        for y in 0..64 {
            for x in 0..64 {
                if let Some((f, b)) = g.fragment(x, y) {
                    assert!((b[0] + b[1] + b[2] - 1.0).abs() < 1e-9);
                    let p = m.interpolated_position(f, b);
                    let (px, d) = c.project(p).unwrap();
                    assert!((px.x - (x as f64 + 0.5)).abs() < 1e-6);
                    assert!((px.y - (y as f64 + 0.5)).abs() < 1e-6);
                    assert!((d - g.depth.get(x, y)).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn near_plane_clipping_keeps_visible_part() {
        // triangle straddling the camera plane
        let v = alloc::vec![Vec3::new(-0.3, -0.3, 3.0), Vec3::new(0.3, -0.3, 3.0), Vec3::new(0.0, 0.3, 6.0)];
        let m = Mesh::new(v, alloc::vec![[0, 1, 2]], None).unwrap();
        let g = rasterize(&m, &cam());
        assert!(g.coverage().count() > 0);
        assert!(g.depth.data().iter().all(|d| !d.is_finite() || *d >= cam().near()));
        let _ = tri_at_depth(1.0, 1.0);
    }
}

//! Per-vertex principal curvatures from local quadric fits.
//!
//! Around each vertex the two-ring neighborhood is expressed in a tangent
//! frame `(u, v, w)` with `w` along the vertex normal and fitted with
//! `w = a u² + b uv + c v² + d u + e v` in least squares. The second
//! fundamental form of the fitted height field gives the principal values
//! and directions.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::{fabs, solve_dense, sqrt, sym2_eigen, Vec3};
use crate::mesh::Mesh;

/// Fewer neighbors than this leave the fit underdetermined.
pub const MIN_NEIGHBORS: usize = 5;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CurvatureFlags {
    /// Principal curvatures nearly equal (or the fit failed); the
    /// principal directions carry no information.
    pub umbilic: bool,
    /// Fewer than [`MIN_NEIGHBORS`] two-ring neighbors.
    pub insufficient: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureField {
    /// Maximum principal curvature; positive where the surface bends away
    /// from its normal (convex).
    pub k1: Vec<f64>,
    pub k2: Vec<f64>,
    /// Unit tangent direction of `k1`.
    pub d1: Vec<Vec3>,
    /// `normal × d1`.
    pub d2: Vec<Vec3>,
    pub flags: Vec<CurvatureFlags>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvatureParams {
    /// Relative gap `|k1 - k2| / max(|k1|, |k2|)` below which a vertex is
    /// treated as umbilic.
    pub umbilic_ratio: f64,
    /// Absolute curvature, relative to `1 / mesh scale`, below which both
    /// principal values count as zero (flat, hence umbilic).
    pub flat_tolerance: f64,
}

impl Default for CurvatureParams {
    fn default() -> Self {
        CurvatureParams {
            umbilic_ratio: 0.1,
            flat_tolerance: 1e-3,
        }
    }
}

/// Two-ring neighbors over raw vertex adjacency, excluding the vertex.
fn two_ring(adj: &[Vec<u32>], v: usize, out: &mut Vec<u32>) {
    out.clear();
    for &n in &adj[v] {
        out.push(n);
        out.extend(adj[n as usize].iter().copied());
    }
    out.sort_unstable();
    out.dedup();
    out.retain(|&n| n as usize != v);
}

pub fn estimate_curvature(mesh: &Mesh) -> CurvatureField {
    estimate_curvature_with(mesh, &CurvatureParams::default())
}

pub fn estimate_curvature_with(mesh: &Mesh, params: &CurvatureParams) -> CurvatureField {
    let n = mesh.vertex_count();
    let adj = mesh.vertex_neighbors();
    let flat = params.flat_tolerance / mesh.scale().max(1e-300);
    let mut field = CurvatureField {
        k1: vec![0.0; n],
        k2: vec![0.0; n],
        d1: vec![Vec3::ZERO; n],
        d2: vec![Vec3::ZERO; n],
        flags: vec![CurvatureFlags::default(); n],
    };
    let mut ring = Vec::new();
    for v in 0..n {
        let p = mesh.vertices()[v];
        let normal = mesh.normals()[v];
        let e1 = normal.any_orthogonal();
        let e2 = normal.cross(e1);
        field.d1[v] = e1;
        field.d2[v] = e2;

        two_ring(&adj, v, &mut ring);
        // split vertices at the same position belong to other patches
        ring.retain(|&q| mesh.vertices()[q as usize] != p);
        if ring.len() < MIN_NEIGHBORS {
            field.flags[v] = CurvatureFlags {
                umbilic: true,
                insufficient: true,
            };
            continue;
        }
        let local: Vec<(f64, f64, f64)> = ring
            .iter()
            .map(|&q| {
                let d = mesh.vertices()[q as usize] - p;
                (d.dot(e1), d.dot(e2), d.dot(normal))
            })
            .collect();
        // fit in units of the mean neighbor distance for conditioning
        let h = local.iter().map(|&(u, v, w)| sqrt(u * u + v * v + w * w)).sum::<f64>() / local.len() as f64;
        let mut ata = [[0.0; 5]; 5];
        let mut atb = [0.0; 5];
        for &(u, vv, w) in &local {
            let (u, vv, w) = (u / h, vv / h, w / h);
            let row = [u * u, u * vv, vv * vv, u, vv];
            for i in 0..5 {
                for j in 0..5 {
                    ata[i][j] += row[i] * row[j];
                }
                atb[i] += row[i] * w;
            }
        }
        let Some(coef) = solve_dense(ata, atb, 1e-12) else {
            field.flags[v].umbilic = true;
            continue;
        };
        let (a, b, c) = (coef[0] / h, coef[1] / h, coef[2] / h);
        let (d, e) = (coef[3], coef[4]);
        let s = -1.0 / sqrt(1.0 + d * d + e * e);
        let (k1, k2, dir) = sym2_eigen(2.0 * a * s, b * s, 2.0 * c * s);
        let d1 = (e1 * dir.x + e2 * dir.y).normalize();
        field.k1[v] = k1;
        field.k2[v] = k2;
        field.d1[v] = d1;
        field.d2[v] = normal.cross(d1);
        let big = fabs(k1).max(fabs(k2));
        field.flags[v].umbilic = big <= flat || (k1 - k2) <= params.umbilic_ratio * big;
    }
    field
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes;

    #[test]
    fn sphere_is_umbilic_with_unit_curvature() {
        let m = shapes::icosphere(3, 2.0);
        let f = estimate_curvature(&m);
        for v in 0..m.vertex_count() {
            assert!((f.k1[v] - 0.5).abs() < 0.02, "{}", f.k1[v]);
            assert!((f.k2[v] - 0.5).abs() < 0.02);
            assert!(f.flags[v].umbilic);
        }
    }

    #[test]
    fn cylinder_directions() {
        // axis along z
        let m = shapes::cylinder(1.0, 4.0, 64, 16, false);
        let f = estimate_curvature(&m);
        let mut checked = 0;
        for v in 0..m.vertex_count() {
            let p = m.vertices()[v];
            if p.z.abs() > 1.0 {
                continue;
            }
            checked += 1;
            assert!((f.k1[v] - 1.0).abs() < 0.05, "{}", f.k1[v]);
            assert!(f.k2[v].abs() < 0.05);
            assert!(!f.flags[v].umbilic);
            // d1 is circumferential, d2 axial
            assert!(f.d1[v].z.abs() < 0.05);
            assert!(f.d2[v].z.abs() > 0.99);
        }
        assert!(checked > 100);
    }

    #[test]
    fn plane_is_flat_umbilic() {
        let m = shapes::plane_grid(1.0, 8);
        let f = estimate_curvature(&m);
        assert!(f.k1.iter().all(|k| k.abs() < 1e-9));
        assert!(f.flags.iter().all(|fl| fl.umbilic));
    }

    #[test]
    fn lone_triangle_is_insufficient() {
        let m = shapes::flat_square(1.0);
        let f = estimate_curvature(&m);
        assert!(f.flags.iter().all(|fl| fl.insufficient && fl.umbilic));
    }
}

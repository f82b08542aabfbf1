//! Procedural test meshes: icosphere, torus, cylinder, cube, flat square.
//!
//! Smooth shapes carry analytic vertex normals; the cube splits its vertices
//! per face so every face is flat shaded.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::math::{cos, sin, Vec3, PI};
use crate::mesh::Mesh;

/// Icosahedron refined `subdivisions` times by edge midpoints projected to the
/// sphere. Produces `10 * 4^k + 2` vertices and `20 * 4^k` faces.
pub fn icosphere(subdivisions: u32, radius: f64) -> Mesh {
    let t = (1.0 + crate::math::sqrt(5.0)) / 2.0;
    let mut verts: Vec<Vec3> = [
        (-1.0, t, 0.0),
        (1.0, t, 0.0),
        (-1.0, -t, 0.0),
        (1.0, -t, 0.0),
        (0.0, -1.0, t),
        (0.0, 1.0, t),
        (0.0, -1.0, -t),
        (0.0, 1.0, -t),
        (t, 0.0, -1.0),
        (t, 0.0, 1.0),
        (-t, 0.0, -1.0),
        (-t, 0.0, 1.0),
    ]
    .iter()
    .map(|&(x, y, z)| Vec3::new(x, y, z).normalize())
    .collect();
    let mut faces: Vec<[u32; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..subdivisions {
        let mut cache: BTreeMap<(u32, u32), u32> = BTreeMap::new();
        let mut midpoint = |a: u32, b: u32, verts: &mut Vec<Vec3>| -> u32 {
            let key = if a < b { (a, b) } else { (b, a) };
            *cache.entry(key).or_insert_with(|| {
                let m = ((verts[a as usize] + verts[b as usize]) * 0.5).normalize();
                verts.push(m);
                (verts.len() - 1) as u32
            })
        };
        let mut next = Vec::with_capacity(faces.len() * 4);
        for [a, b, c] in faces {
            let ab = midpoint(a, b, &mut verts);
            let bc = midpoint(b, c, &mut verts);
            let ca = midpoint(c, a, &mut verts);
            next.push([a, ab, ca]);
            next.push([b, bc, ab]);
            next.push([c, ca, bc]);
            next.push([ab, bc, ca]);
        }
        faces = next;
    }
    let normals = verts.clone();
    let positions = verts.iter().map(|v| *v * radius).collect();
    Mesh::new(positions, faces, Some(normals)).expect("icosphere is valid")
}

/// Torus around the `y` axis: major radius `major`, tube radius `minor`.
/// `segments` around the ring, `sides` around the tube.
pub fn torus(major: f64, minor: f64, segments: u32, sides: u32) -> Mesh {
    let mut verts = Vec::new();
    let mut normals = Vec::new();
    for i in 0..segments {
        let u = 2.0 * PI * i as f64 / segments as f64;
        for j in 0..sides {
            let v = 2.0 * PI * j as f64 / sides as f64;
            let n = Vec3::new(cos(v) * cos(u), sin(v), cos(v) * sin(u));
            let center = Vec3::new(major * cos(u), 0.0, major * sin(u));
            verts.push(center + n * minor);
            normals.push(n);
        }
    }
    let idx = |i: u32, j: u32| (i % segments) * sides + (j % sides);
    let mut faces = Vec::new();
    for i in 0..segments {
        for j in 0..sides {
            let q = [idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1)];
            faces.push([q[0], q[1], q[2]]);
            faces.push([q[0], q[2], q[3]]);
        }
    }
    orient_outward(&verts, &normals, &mut faces);
    Mesh::new(verts, faces, Some(normals)).expect("torus is valid")
}

/// Cylinder along `z`, centered at the origin. With `capped`, flat end caps
/// with their own (split) vertices are added.
pub fn cylinder(radius: f64, height: f64, segments: u32, rings: u32, capped: bool) -> Mesh {
    let mut verts = Vec::new();
    let mut normals = Vec::new();
    for r in 0..=rings {
        let z = -0.5 * height + height * r as f64 / rings as f64;
        for s in 0..segments {
            let a = 2.0 * PI * s as f64 / segments as f64;
            let n = Vec3::new(cos(a), sin(a), 0.0);
            verts.push(Vec3::new(radius * n.x, radius * n.y, z));
            normals.push(n);
        }
    }
    let idx = |r: u32, s: u32| r * segments + (s % segments);
    let mut faces = Vec::new();
    for r in 0..rings {
        for s in 0..segments {
            let q = [idx(r, s), idx(r, s + 1), idx(r + 1, s + 1), idx(r + 1, s)];
            faces.push([q[0], q[1], q[2]]);
            faces.push([q[0], q[2], q[3]]);
        }
    }
    if capped {
        for (z, nz) in [(-0.5 * height, -1.0), (0.5 * height, 1.0)] {
            let center = verts.len() as u32;
            verts.push(Vec3::new(0.0, 0.0, z));
            normals.push(Vec3::new(0.0, 0.0, nz));
            let first = verts.len() as u32;
            for s in 0..segments {
                let a = 2.0 * PI * s as f64 / segments as f64;
                verts.push(Vec3::new(radius * cos(a), radius * sin(a), z));
                normals.push(Vec3::new(0.0, 0.0, nz));
            }
            for s in 0..segments {
                faces.push([center, first + s, first + (s + 1) % segments]);
            }
        }
    }
    orient_outward(&verts, &normals, &mut faces);
    Mesh::new(verts, faces, Some(normals)).expect("cylinder is valid")
}

/// Axis-aligned cube `[-h, h]^3` with flat-shaded (split) faces: 24 vertices,
/// 12 triangles.
pub fn cube(half: f64) -> Mesh {
    let mut verts = Vec::new();
    let mut normals = Vec::new();
    let mut faces = Vec::new();
    for axis in 0..3 {
        for sign in [-1.0, 1.0] {
            let mut n = [0.0; 3];
            n[axis] = sign;
            let n = Vec3::new(n[0], n[1], n[2]);
            let u_axis = (axis + 1) % 3;
            let v_axis = (axis + 2) % 3;
            let base = verts.len() as u32;
            for (su, sv) in [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)] {
                let mut p = [0.0; 3];
                p[axis] = sign * half;
                p[u_axis] = su * half;
                p[v_axis] = sv * half;
                verts.push(Vec3::new(p[0], p[1], p[2]));
                normals.push(n);
            }
            faces.push([base, base + 1, base + 2]);
            faces.push([base, base + 2, base + 3]);
        }
    }
    orient_outward(&verts, &normals, &mut faces);
    Mesh::new(verts, faces, Some(normals)).expect("cube is valid")
}

/// Two counter-clockwise triangles covering `[-h, h]^2` in the `z = 0` plane.
/// Normals are computed from the faces.
pub fn flat_square(half: f64) -> Mesh {
    let verts = vec![
        Vec3::new(-half, -half, 0.0),
        Vec3::new(half, -half, 0.0),
        Vec3::new(half, half, 0.0),
        Vec3::new(-half, half, 0.0),
    ];
    Mesh::new(verts, vec![[0, 1, 2], [0, 2, 3]], None).expect("square is valid")
}

/// Regular `n x n` grid over `[-h, h]^2` at `z = 0`.
pub fn plane_grid(half: f64, n: u32) -> Mesh {
    let mut verts = Vec::new();
    for j in 0..=n {
        for i in 0..=n {
            let x = -half + 2.0 * half * i as f64 / n as f64;
            let y = -half + 2.0 * half * j as f64 / n as f64;
            verts.push(Vec3::new(x, y, 0.0));
        }
    }
    let idx = |i: u32, j: u32| j * (n + 1) + i;
    let mut faces = Vec::new();
    for j in 0..n {
        for i in 0..n {
            faces.push([idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)]);
            faces.push([idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)]);
        }
    }
    Mesh::new(verts, faces, None).expect("grid is valid")
}

fn orient_outward(verts: &[Vec3], normals: &[Vec3], faces: &mut [[u32; 3]]) {
    for f in faces.iter_mut() {
        let [a, b, c] = f.map(|i| verts[i as usize]);
        let geo = (b - a).cross(c - a);
        let avg = normals[f[0] as usize] + normals[f[1] as usize] + normals[f[2] as usize];
        if geo.dot(avg) < 0.0 {
            f.swap(1, 2);
        }
    }
}

//! Indexed triangle meshes with per-vertex normals.
//!
//! Vertices may be split (same position, different normals) to represent
//! sharp edges. Topological queries that must see through such splits use the
//! *welded* vertex id: the smallest vertex index sharing the exact position.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::{cos, sin, Vec3};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MeshError {
    #[error("mesh has no vertices or no faces")]
    Empty,
    #[error("face {face} references vertex {index}, but the mesh has {count} vertices")]
    IndexOutOfRange { face: usize, index: u32, count: usize },
    #[error("face {face} is degenerate (zero area)")]
    DegenerateFace { face: usize },
    #[error("vertex {vertex} has a non-finite coordinate")]
    NonFiniteVertex { vertex: usize },
    #[error("got {normals} normals for {vertices} vertices")]
    NormalCountMismatch { normals: usize, vertices: usize },
}

/// Axis-aligned bounding box.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Aabb {
    pub min: Vec3,
    pub max: Vec3,
}

impl Aabb {
    pub fn empty() -> Self {
        let inf = f64::INFINITY;
        Aabb {
            min: Vec3::new(inf, inf, inf),
            max: Vec3::new(-inf, -inf, -inf),
        }
    }

    pub fn from_points<'a>(pts: impl IntoIterator<Item = &'a Vec3>) -> Self {
        let mut b = Aabb::empty();
        for p in pts {
            b.grow(*p);
        }
        b
    }

    pub fn grow(&mut self, p: Vec3) {
        self.min = self.min.min(p);
        self.max = self.max.max(p);
    }

    pub fn union(&self, o: &Aabb) -> Aabb {
        Aabb {
            min: self.min.min(o.min),
            max: self.max.max(o.max),
        }
    }

    pub fn diagonal(&self) -> f64 {
        (self.max - self.min).norm()
    }

    pub fn center(&self) -> Vec3 {
        (self.min + self.max) * 0.5
    }
}

/// An undirected edge between two vertices together with its incident faces.
#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    /// Endpoints, `a < b`.
    pub a: u32,
    pub b: u32,
    pub faces: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct Mesh {
    vertices: Vec<Vec3>,
    normals: Vec<Vec3>,
    faces: Vec<[u32; 3]>,
    weld: Vec<u32>,
    bbox: Aabb,
    isolated: Vec<u32>,
    manifold: bool,
}

impl Mesh {
    /// Builds a validated mesh. When `normals` is `None` they are computed
    /// by [`compute_normals`]; supplied normals are renormalized.
    pub fn new(vertices: Vec<Vec3>, faces: Vec<[u32; 3]>, normals: Option<Vec<Vec3>>) -> Result<Mesh, MeshError> {
        if vertices.is_empty() || faces.is_empty() {
            return Err(MeshError::Empty);
        }
        if let Some(i) = vertices.iter().position(|v| !v.is_finite()) {
            return Err(MeshError::NonFiniteVertex { vertex: i });
        }
        let bbox = Aabb::from_points(&vertices);
        let diag = bbox.diagonal();
        let area_eps = 1e-14 * diag * diag;
        for (fi, f) in faces.iter().enumerate() {
            for &idx in f {
                if idx as usize >= vertices.len() {
                    return Err(MeshError::IndexOutOfRange {
                        face: fi,
                        index: idx,
                        count: vertices.len(),
                    });
                }
            }
            let [a, b, c] = f.map(|i| vertices[i as usize]);
            let twice_area = (b - a).cross(c - a).norm();
            if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] || !(twice_area > area_eps) {
                return Err(MeshError::DegenerateFace { face: fi });
            }
        }
        let weld = weld_positions(&vertices);
        let (normals, isolated) = match normals {
            Some(ns) => {
                if ns.len() != vertices.len() {
                    return Err(MeshError::NormalCountMismatch {
                        normals: ns.len(),
                        vertices: vertices.len(),
                    });
                }
                let used = referenced(&faces, vertices.len());
                let mut isolated = Vec::new();
                let ns = ns
                    .into_iter()
                    .enumerate()
                    .map(|(i, n)| match n.try_normalize() {
                        Some(u) if used[i] => u,
                        _ => {
                            if !used[i] {
                                isolated.push(i as u32);
                            }
                            n.try_normalize().unwrap_or(Vec3::Z)
                        }
                    })
                    .collect();
                (ns, isolated)
            }
            None => area_weighted_normals(&vertices, &faces),
        };
        let mut mesh = Mesh {
            vertices,
            normals,
            faces,
            weld,
            bbox,
            isolated,
            manifold: true,
        };
        mesh.manifold = mesh.welded_edges().iter().all(|e| e.faces.len() <= 2);
        Ok(mesh)
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn normals(&self) -> &[Vec3] {
        &self.normals
    }

    pub fn faces(&self) -> &[[u32; 3]] {
        &self.faces
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn bbox(&self) -> Aabb {
        self.bbox
    }

    /// Bounding-box diagonal length, the mesh's natural length scale.
    pub fn scale(&self) -> f64 {
        self.bbox.diagonal()
    }

    /// Mean of the distinct vertex positions.
    pub fn centroid(&self) -> Vec3 {
        let mut sum = Vec3::ZERO;
        let mut n = 0usize;
        for (i, v) in self.vertices.iter().enumerate() {
            if self.weld[i] as usize == i {
                sum += *v;
                n += 1;
            }
        }
        sum / n as f64
    }

    /// Vertices referenced by no face; their normal is `+z`.
    pub fn isolated_vertices(&self) -> &[u32] {
        &self.isolated
    }

    /// True when every welded edge has at most two incident faces.
    pub fn is_edge_manifold(&self) -> bool {
        self.manifold
    }

    /// Canonical vertex id for the position of vertex `v`.
    pub fn welded(&self, v: u32) -> u32 {
        self.weld[v as usize]
    }

    /// Geometric (unnormalized) normal of face `f`, length = twice the area.
    pub fn face_normal_raw(&self, f: usize) -> Vec3 {
        let [a, b, c] = self.faces[f].map(|i| self.vertices[i as usize]);
        (b - a).cross(c - a)
    }

    pub fn face_normal(&self, f: usize) -> Vec3 {
        self.face_normal_raw(f).normalize()
    }

    pub fn face_centroid(&self, f: usize) -> Vec3 {
        let [a, b, c] = self.faces[f].map(|i| self.vertices[i as usize]);
        (a + b + c) / 3.0
    }

    /// Edges keyed by raw vertex indices: split vertices separate regions.
    pub fn edges(&self) -> Vec<Edge> {
        collect_edges(&self.faces, |v| v)
    }

    /// Edges keyed by welded vertex ids: the true surface topology.
    pub fn welded_edges(&self) -> Vec<Edge> {
        collect_edges(&self.faces, |v| self.weld[v as usize])
    }

    /// Raw-index vertex neighbors (one ring), sorted and deduplicated.
    pub fn vertex_neighbors(&self) -> Vec<Vec<u32>> {
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); self.vertices.len()];
        for f in &self.faces {
            for k in 0..3 {
                let a = f[k];
                let b = f[(k + 1) % 3];
                adj[a as usize].push(b);
                adj[b as usize].push(a);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }

    /// Interpolated, renormalized normal at barycentric coordinates in face `f`.
    pub fn interpolated_normal(&self, f: usize, bary: [f64; 3]) -> Vec3 {
        let face = self.faces[f];
        let n = self.normals[face[0] as usize] * bary[0]
            + self.normals[face[1] as usize] * bary[1]
            + self.normals[face[2] as usize] * bary[2];
        n.try_normalize().unwrap_or_else(|| self.face_normal(f))
    }

    pub fn interpolated_position(&self, f: usize, bary: [f64; 3]) -> Vec3 {
        let face = self.faces[f];
        self.vertices[face[0] as usize] * bary[0]
            + self.vertices[face[1] as usize] * bary[1]
            + self.vertices[face[2] as usize] * bary[2]
    }

    /// Applies a similarity transform `p -> center + s * R (p - center) + t`.
    pub fn transformed(&self, rotation: &Rotation, scale: f64, center: Vec3, translation: Vec3) -> Mesh {
        let vertices: Vec<Vec3> = self
            .vertices
            .iter()
            .map(|p| center + rotation.apply(*p - center) * scale + translation)
            .collect();
        let normals: Vec<Vec3> = self.normals.iter().map(|n| rotation.apply(*n)).collect();
        let bbox = Aabb::from_points(&vertices);
        Mesh {
            weld: weld_positions(&vertices),
            vertices,
            normals,
            faces: self.faces.clone(),
            bbox,
            isolated: self.isolated.clone(),
            manifold: self.manifold,
        }
    }

    /// Concatenates two meshes into one.
    pub fn merged(&self, other: &Mesh) -> Mesh {
        let offset = self.vertices.len() as u32;
        let mut vertices = self.vertices.clone();
        vertices.extend_from_slice(&other.vertices);
        let mut normals = self.normals.clone();
        normals.extend_from_slice(&other.normals);
        let mut faces = self.faces.clone();
        faces.extend(other.faces.iter().map(|f| f.map(|i| i + offset)));
        Mesh::new(vertices, faces, Some(normals)).expect("merging valid meshes")
    }
}

/// A 3x3 rotation matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rotation(pub [[f64; 3]; 3]);

impl Rotation {
    pub const IDENTITY: Rotation = Rotation([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);

    /// Rotation by `angle` radians about the unit `axis` (Rodrigues).
    pub fn about_axis(axis: Vec3, angle: f64) -> Rotation {
        let k = axis.normalize();
        let (s, c) = (sin(angle), cos(angle));
        let t = 1.0 - c;
        Rotation([
            [c + k.x * k.x * t, k.x * k.y * t - k.z * s, k.x * k.z * t + k.y * s],
            [k.y * k.x * t + k.z * s, c + k.y * k.y * t, k.y * k.z * t - k.x * s],
            [k.z * k.x * t - k.y * s, k.z * k.y * t + k.x * s, c + k.z * k.z * t],
        ])
    }

    pub fn apply(&self, v: Vec3) -> Vec3 {
        let m = &self.0;
        Vec3::new(
            m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z,
        )
    }
}

/// Area-weighted vertex normals. Returns the normals and the list of isolated
/// vertices (which receive `+z`).
pub fn area_weighted_normals(vertices: &[Vec3], faces: &[[u32; 3]]) -> (Vec<Vec3>, Vec<u32>) {
    let mut acc = vec![Vec3::ZERO; vertices.len()];
    for f in faces {
        let [a, b, c] = f.map(|i| vertices[i as usize]);
        // cross product length is twice the area: area weighting for free
        let n = (b - a).cross(c - a);
        for &i in f {
            acc[i as usize] += n;
        }
    }
    let used = referenced(faces, vertices.len());
    let mut isolated = Vec::new();
    let normals = acc
        .into_iter()
        .enumerate()
        .map(|(i, n)| {
            if !used[i] {
                isolated.push(i as u32);
                return Vec3::Z;
            }
            n.try_normalize().unwrap_or(Vec3::Z)
        })
        .collect();
    (normals, isolated)
}

/// Recomputes per-vertex normals as the normalized area-weighted average of
/// the incident face normals.
pub fn compute_normals(mesh: &Mesh) -> Mesh {
    let (normals, isolated) = area_weighted_normals(&mesh.vertices, &mesh.faces);
    Mesh {
        normals,
        isolated,
        ..mesh.clone()
    }
}

fn referenced(faces: &[[u32; 3]], n: usize) -> Vec<bool> {
    let mut used = vec![false; n];
    for f in faces {
        for &i in f {
            used[i as usize] = true;
        }
    }
    used
}

fn weld_positions(vertices: &[Vec3]) -> Vec<u32> {
    let key = |v: &Vec3| {
        // +0.0 folds -0.0 onto 0.0
        [(v.x + 0.0).to_bits(), (v.y + 0.0).to_bits(), (v.z + 0.0).to_bits()]
    };
    let mut order: Vec<u32> = (0..vertices.len() as u32).collect();
    order.sort_by(|&a, &b| key(&vertices[a as usize]).cmp(&key(&vertices[b as usize])).then(a.cmp(&b)));
    let mut weld = vec![0u32; vertices.len()];
    let mut i = 0;
    while i < order.len() {
        let k = key(&vertices[order[i] as usize]);
        let mut j = i;
        while j < order.len() && key(&vertices[order[j] as usize]) == k {
            j += 1;
        }
        let canon = order[i];
        for &v in &order[i..j] {
            weld[v as usize] = canon;
        }
        i = j;
    }
    weld
}

fn collect_edges(faces: &[[u32; 3]], map: impl Fn(u32) -> u32) -> Vec<Edge> {
    let mut pairs: Vec<(u32, u32, u32)> = Vec::with_capacity(faces.len() * 3);
    for (fi, f) in faces.iter().enumerate() {
        for k in 0..3 {
            let a = map(f[k]);
            let b = map(f[(k + 1) % 3]);
            let (a, b) = if a < b { (a, b) } else { (b, a) };
            pairs.push((a, b, fi as u32));
        }
    }
    pairs.sort_unstable();
    let mut edges: Vec<Edge> = Vec::new();
    for (a, b, f) in pairs {
        match edges.last_mut() {
            Some(e) if e.a == a && e.b == b => {
                if e.faces.last() != Some(&f) {
                    e.faces.push(f);
                }
            }
            _ => edges.push(Edge { a, b, faces: vec![f] }),
        }
    }
    edges
}

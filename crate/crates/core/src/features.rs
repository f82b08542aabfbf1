//! Polyhedral feature edges: silhouettes, creases, and open boundaries.

use alloc::vec;
use alloc::vec::Vec;

use crate::camera::Camera;
use crate::contour::{ContourPolyline, ContourSet, ContourTag};
use crate::math::{acos, rad_to_deg};
use crate::mesh::Mesh;

pub const DEFAULT_CREASE_ANGLE: f64 = 30.0;

/// Classification of one welded mesh edge.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeClass {
    /// Welded vertex ids, `a < b`.
    pub a: u32,
    pub b: u32,
    /// Raw vertex indices of one incident face along this edge.
    pub raw: (u32, u32),
    pub faces: Vec<u32>,
    /// One incident face front-facing, the other back-facing.
    pub silhouette: bool,
    /// Dihedral angle between face normals above the crease threshold.
    pub crease: bool,
    pub boundary: bool,
    /// The incident faces reference different vertex records along the edge,
    /// so the interpolated normal field is discontinuous across it.
    pub split_normals: bool,
    pub dihedral_deg: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct EdgeClassification {
    pub edges: Vec<EdgeClass>,
    /// Edges with more than two incident faces; not classified.
    pub non_manifold: usize,
}

pub fn front_facing(mesh: &Mesh, camera: &Camera, face: usize) -> bool {
    mesh.face_normal(face).dot(camera.center() - mesh.face_centroid(face)) > 0.0
}

/// Classifies every welded edge. `crease_angle` is in degrees.
pub fn classify_edges(mesh: &Mesh, camera: &Camera, crease_angle: f64) -> EdgeClassification {
    let mut out = EdgeClassification::default();
    let faces = mesh.faces();
    let raw_pair = |f: u32, a: u32, b: u32| -> (u32, u32) {
        let face = faces[f as usize];
        let pick = |w: u32| face.iter().copied().find(|&v| mesh.welded(v) == w).unwrap();
        let (ra, rb) = (pick(a), pick(b));
        if ra < rb { (ra, rb) } else { (rb, ra) }
    };
    for e in mesh.welded_edges() {
        if e.faces.len() > 2 {
            out.non_manifold += 1;
            continue;
        }
        let raw = raw_pair(e.faces[0], e.a, e.b);
        let mut class = EdgeClass {
            a: e.a,
            b: e.b,
            raw,
            faces: e.faces.clone(),
            silhouette: false,
            crease: false,
            boundary: e.faces.len() == 1,
            split_normals: false,
            dihedral_deg: 0.0,
        };
        if class.boundary {
            class.silhouette = true;
        } else {
            let (f0, f1) = (e.faces[0] as usize, e.faces[1] as usize);
            class.silhouette = front_facing(mesh, camera, f0) != front_facing(mesh, camera, f1);
            let cos = mesh.face_normal(f0).dot(mesh.face_normal(f1)).clamp(-1.0, 1.0);
            class.dihedral_deg = rad_to_deg(acos(cos));
            class.crease = class.dihedral_deg > crease_angle;
            class.split_normals = raw_pair(e.faces[1], e.a, e.b) != raw;
        }
        out.edges.push(class);
    }
    out
}

/// Builds a contour set from classified edges. Each accepted edge appears
/// once: as a silhouette if `keep_silhouette` accepts it, otherwise as a
/// crease if it is one. Adjacent edges of the same tag are chained.
pub fn feature_contours(
    mesh: &Mesh,
    classes: &EdgeClassification,
    keep_silhouette: impl Fn(&EdgeClass) -> bool,
) -> ContourSet {
    let mut sil = Vec::new();
    let mut crease = Vec::new();
    for e in &classes.edges {
        if e.silhouette && keep_silhouette(e) {
            sil.push(e);
        } else if e.crease {
            crease.push(e);
        }
    }
    let mut set = ContourSet {
        non_manifold_warnings: classes.non_manifold,
        ..Default::default()
    };
    chain_edges(mesh, &sil, ContourTag::PolyhedralSilhouette, &mut set);
    chain_edges(mesh, &crease, ContourTag::Crease, &mut set);
    set
}

/// All silhouette (including boundary) and crease edges.
pub fn extract_feature_edges(mesh: &Mesh, camera: &Camera, crease_angle: f64) -> ContourSet {
    let classes = classify_edges(mesh, camera, crease_angle);
    feature_contours(mesh, &classes, |_| true)
}

/// Chains edges sharing welded endpoints of degree two into polylines.
fn chain_edges(mesh: &Mesh, edges: &[&EdgeClass], tag: ContourTag, set: &mut ContourSet) {
    if edges.is_empty() {
        return;
    }
    let nv = mesh.vertex_count();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for (i, e) in edges.iter().enumerate() {
        incident[e.a as usize].push(i);
        incident[e.b as usize].push(i);
    }
    let position = |w: u32| mesh.vertices()[w as usize];
    let mut used = vec![false; edges.len()];
    let pass_through = |v: u32| incident[v as usize].len() == 2;

    let mut order: Vec<usize> = (0..edges.len())
        .filter(|&i| !pass_through(edges[i].a) || !pass_through(edges[i].b))
        .collect();
    order.extend(0..edges.len());
    for start in order {
        if used[start] {
            continue;
        }
        used[start] = true;
        let e = edges[start];
        // walk away from a chain end when there is one
        let (first, mut cur) = if pass_through(e.a) && !pass_through(e.b) { (e.b, e.a) } else { (e.a, e.b) };
        let mut pts = vec![position(first), position(cur)];
        let mut closed = false;
        while pass_through(cur) {
            let next = incident[cur as usize].iter().copied().find(|&i| !used[i]);
            let Some(ni) = next else {
                break;
            };
            used[ni] = true;
            let ne = edges[ni];
            cur = if ne.a == cur { ne.b } else { ne.a };
            if cur == first {
                closed = true;
                break;
            }
            pts.push(position(cur));
        }
        set.polylines.push(ContourPolyline {
            tag,
            points: pts,
            closed,
            hidden: false,
        });
    }
}

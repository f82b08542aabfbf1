//! Object-space occluding contours of interpolated-normal meshes.
//!
//! The contour generator is the zero set of `g(p) = n(p) · (c - p)`, where
//! `n` is the barycentrically interpolated vertex normal. Zero crossings are
//! located on mesh edges and chained across faces into polylines.

use alloc::vec;
use alloc::vec::Vec;

use crate::camera::Camera;
use crate::math::{fabs, sqrt, Vec2, Vec3};
use crate::mesh::Mesh;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ContourTag {
    SmoothContour,
    PolyhedralSilhouette,
    Crease,
}

impl ContourTag {
    pub fn name(self) -> &'static str {
        match self {
            ContourTag::SmoothContour => "contour",
            ContourTag::PolyhedralSilhouette => "silhouette",
            ContourTag::Crease => "crease",
        }
    }

    pub fn from_name(s: &str) -> Option<ContourTag> {
        match s {
            "contour" => Some(ContourTag::SmoothContour),
            "silhouette" => Some(ContourTag::PolyhedralSilhouette),
            "crease" => Some(ContourTag::Crease),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContourPolyline {
    pub tag: ContourTag,
    pub points: Vec<Vec3>,
    /// The last point connects back to the first.
    pub closed: bool,
    /// Set by visibility clipping when hidden runs are retained.
    pub hidden: bool,
}

impl ContourPolyline {
    pub fn open(tag: ContourTag, points: Vec<Vec3>) -> Self {
        ContourPolyline {
            tag,
            points,
            closed: false,
            hidden: false,
        }
    }

    /// Consecutive point pairs, including the closing segment of loops.
    pub fn segments(&self) -> impl Iterator<Item = (Vec3, Vec3)> + '_ {
        let n = self.points.len();
        let count = if self.closed && n > 2 { n } else { n.saturating_sub(1) };
        (0..count).map(move |i| (self.points[i], self.points[(i + 1) % n]))
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ContourSet {
    pub polylines: Vec<ContourPolyline>,
    /// Crossings on edges shared by more than two faces (emitted unchained).
    pub non_manifold_warnings: usize,
    /// Crossings dropped by the more-than-two-crossings tie-break.
    pub dropped_crossings: usize,
}

impl ContourSet {
    pub fn extend(&mut self, other: ContourSet) {
        self.polylines.extend(other.polylines);
        self.non_manifold_warnings += other.non_manifold_warnings;
        self.dropped_crossings += other.dropped_crossings;
    }

    pub fn visible(&self) -> impl Iterator<Item = &ContourPolyline> {
        self.polylines.iter().filter(|p| !p.hidden)
    }

    pub fn point_count(&self) -> usize {
        self.polylines.iter().map(|p| p.points.len()).sum()
    }

    /// Projects every visible polyline into image space. Closed loops repeat
    /// their first point at the end. Points behind the camera split polylines.
    pub fn project(&self, camera: &Camera) -> Vec<(ContourTag, Vec<Vec2>)> {
        let mut out = Vec::new();
        for pl in self.visible() {
            let mut run: Vec<Vec2> = Vec::new();
            let mut pts: Vec<Vec3> = pl.points.clone();
            if pl.closed && pts.len() > 2 {
                pts.push(pts[0]);
            }
            for p in pts {
                match camera.project(p) {
                    Some((px, _)) => run.push(px),
                    None => {
                        if run.len() >= 2 {
                            out.push((pl.tag, core::mem::take(&mut run)));
                        }
                        run.clear();
                    }
                }
            }
            if run.len() >= 2 {
                out.push((pl.tag, run));
            }
        }
        out
    }
}

/// `g_i = n_i · (c - p_i)` per vertex; positive on front-facing vertices.
pub fn g_field(mesh: &Mesh, camera: &Camera) -> Vec<f64> {
    let c = camera.center();
    mesh.vertices()
        .iter()
        .zip(mesh.normals())
        .map(|(p, n)| n.dot(c - *p))
        .collect()
}

/// Linear-interpolation estimate of the zero of `g` on an edge.
pub fn linear_crossing(g_a: f64, g_b: f64) -> f64 {
    g_a / (g_a - g_b)
}

/// Exact zero of `g` along edge `a -> b` under linearly interpolated
/// (unnormalized) normals.
///
/// With `n(t) = (1-t) n_a + t n_b` and `p(t) = (1-t) p_a + t p_b`,
/// `n(t) · (c - p(t))` is a quadratic in `t`; normalizing `n` does not move its
/// root. Expects `g(a)` and `g(b)` of opposite sign (or one of them zero).
pub fn edge_crossing(p_a: Vec3, n_a: Vec3, p_b: Vec3, n_b: Vec3, c: Vec3) -> f64 {
    let g_a = n_a.dot(c - p_a);
    let g_b = n_b.dot(c - p_b);
    if g_a == 0.0 {
        return 0.0;
    }
    if g_b == 0.0 {
        return 1.0;
    }
    let cross = n_a.dot(c - p_b) + n_b.dot(c - p_a);
    let qa = g_a + g_b - cross;
    let qb = cross - 2.0 * g_a;
    let qc = g_a;
    let q = |t: f64| (qa * t + qb) * t + qc;

    let mut t = linear_crossing(g_a, g_b);
    let scale = fabs(qa) + fabs(qb) + fabs(qc);
    if fabs(qa) > 1e-14 * scale {
        let disc = qb * qb - 4.0 * qa * qc;
        if disc >= 0.0 {
            let s = sqrt(disc);
            let big = -0.5 * (qb + if qb >= 0.0 { s } else { -s });
            let roots = [big / qa, if big != 0.0 { qc / big } else { f64::NAN }];
            if let Some(r) = roots.iter().copied().find(|r| (-1e-9..=1.0 + 1e-9).contains(r)) {
                t = r.clamp(0.0, 1.0);
            }
        }
    }
    // Newton polish, guarded by the bracket [0, 1]
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..4 {
        let v = q(t);
        if v == 0.0 {
            break;
        }
        if (v > 0.0) == (g_a > 0.0) {
            lo = t;
        } else {
            hi = t;
        }
        let d = 2.0 * qa * t + qb;
        let next = if d != 0.0 { t - v / d } else { 0.5 * (lo + hi) };
        t = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
    }
    t
}

/// Smooth occluding contours: sign changes of [`g_field`] chained across faces.
///
/// Each face with a sign change contributes one segment. Edges with more
/// than two incident faces are emitted as loose segments and counted in
/// `non_manifold_warnings`.
pub fn extract_smooth_contours(mesh: &Mesh, camera: &Camera) -> ContourSet {
    let g = g_field(mesh, camera);
    let c = camera.center();
    let edges = mesh.edges();
    let positive = |v: u32| g[v as usize] >= 0.0;

    // crossing point per edge, indexed like `edges`
    let mut crossing: Vec<Option<Vec3>> = vec![None; edges.len()];
    for (ei, e) in edges.iter().enumerate() {
        if positive(e.a) != positive(e.b) {
            let (pa, pb) = (mesh.vertices()[e.a as usize], mesh.vertices()[e.b as usize]);
            let (na, nb) = (mesh.normals()[e.a as usize], mesh.normals()[e.b as usize]);
            let t = edge_crossing(pa, na, pb, nb, c);
            crossing[ei] = Some(pa.lerp(pb, t));
        }
    }
    let edge_index = |a: u32, b: u32| -> usize {
        let key = if a < b { (a, b) } else { (b, a) };
        edges
            .binary_search_by(|e| (e.a, e.b).cmp(&key))
            .expect("face edge present in edge list")
    };

    let mut set = ContourSet::default();
    // links[node] = up to two (neighbor node) connections through faces
    let mut links: Vec<Vec<usize>> = vec![Vec::new(); edges.len()];
    for f in mesh.faces() {
        let mut hits: Vec<usize> = Vec::with_capacity(3);
        for k in 0..3 {
            let ei = edge_index(f[k], f[(k + 1) % 3]);
            if crossing[ei].is_some() {
                hits.push(ei);
            }
        }
        if hits.len() < 2 {
            continue;
        }
        if hits.len() > 2 {
            // keep the most separated pair
            let mut best = (0, 1, -1.0);
            for i in 0..hits.len() {
                for j in i + 1..hits.len() {
                    let d = (crossing[hits[i]].unwrap() - crossing[hits[j]].unwrap()).norm();
                    if d > best.2 {
                        best = (i, j, d);
                    }
                }
            }
            set.dropped_crossings += hits.len() - 2;
            hits = vec![hits[best.0], hits[best.1]];
        }
        let (a, b) = (hits[0], hits[1]);
        if edges[a].faces.len() > 2 || edges[b].faces.len() > 2 {
            set.non_manifold_warnings += 1;
            set.polylines.push(ContourPolyline::open(
                ContourTag::SmoothContour,
                vec![crossing[a].unwrap(), crossing[b].unwrap()],
            ));
            continue;
        }
        links[a].push(b);
        links[b].push(a);
    }

    let mut used = vec![false; edges.len()];
    let point = |i: usize| crossing[i].unwrap();
    // open chains first (start at degree-1 nodes), then loops
    let starts: Vec<usize> = (0..edges.len())
        .filter(|&i| links[i].len() == 1)
        .chain((0..edges.len()).filter(|&i| links[i].len() == 2))
        .collect();
    for start in starts {
        if used[start] {
            continue;
        }
        let mut chain = vec![start];
        used[start] = true;
        let mut prev = usize::MAX;
        let mut cur = start;
        let mut closed = false;
        loop {
            let next = links[cur].iter().copied().find(|&n| n != prev && !used[n]);
            match next {
                Some(n) => {
                    used[n] = true;
                    chain.push(n);
                    prev = cur;
                    cur = n;
                }
                None => {
                    if chain.len() > 2 && links[cur].contains(&start) {
                        closed = true;
                    }
                    break;
                }
            }
        }
        if chain.len() < 2 {
            continue;
        }
        set.polylines.push(ContourPolyline {
            tag: ContourTag::SmoothContour,
            points: chain.into_iter().map(point).collect(),
            closed,
            hidden: false,
        });
    }
    set
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes;

    fn sphere_cam() -> Camera {
        Camera::looking_at(Vec3::new(0.0, 0.0, 5.0), Vec3::ZERO, 30.0, 512, 512).unwrap()
    }

    #[test]
    fn g_field_direct_substitution() {
        let v = vec![Vec3::Z, -Vec3::Z, Vec3::X];
        let n = v.clone();
        let m = Mesh::new(v, vec![[0, 1, 2]], Some(n)).unwrap();
        let g = g_field(&m, &sphere_cam());
        assert_eq!(g[0], 4.0);
        assert_eq!(g[1], -6.0);
    }

    #[test]
    fn linear_crossing_midpoint() {
        assert_eq!(linear_crossing(1.0, -1.0), 0.5);
    }

    #[test]
    fn exact_crossing_symmetric_edge_is_midpoint() {
        // edge mirror-symmetric about y = 0, camera on that plane
        let pa = Vec3::new(1.0, 1.0, 0.0);
        let pb = Vec3::new(1.0, -1.0, 0.0);
        let na = Vec3::new(0.0, 1.0, 0.0);
        let nb = Vec3::new(0.0, -1.0, 0.0);
        let c = Vec3::new(5.0, 0.5, 0.0);
        let t = edge_crossing(pa, na, pb, nb, Vec3::new(5.0, 0.0, 0.0));
        assert!((t - 0.5).abs() < 1e-12);
        assert!((0.0..=1.0).contains(&edge_crossing(pa, na, pb, nb, c)));
    }

    #[test]
    fn crossing_zeroes_interpolated_g() {
        let pa = Vec3::new(0.9, 0.1, 0.3);
        let pb = Vec3::new(1.0, -0.05, 0.1);
        let na = Vec3::new(0.8, 0.2, 0.6).normalize();
        let nb = Vec3::new(0.9, -0.1, -0.4).normalize();
        let c = Vec3::new(0.0, 0.0, 5.0);
        assert!(na.dot(c - pa) > 0.0 && nb.dot(c - pb) < 0.0);
        let t = edge_crossing(pa, na, pb, nb, c);
        let p = pa.lerp(pb, t);
        let n = na.lerp(nb, t).normalize();
        assert!(n.dot(c - p).abs() < 1e-12);
    }

    #[test]
    fn sphere_contour_is_one_closed_loop() {
        let m = shapes::icosphere(3, 1.0);
        let set = extract_smooth_contours(&m, &sphere_cam());
        assert_eq!(set.polylines.len(), 1);
        assert!(set.polylines[0].closed);
        for p in &set.polylines[0].points {
            assert!((p.z - 0.2).abs() < 0.02, "{p:?}");
        }
    }

    #[test]
    fn cube_has_no_smooth_crossings() {
        let set = extract_smooth_contours(&shapes::cube(1.0), &sphere_cam());
        assert!(set.polylines.is_empty());
        let oblique = Camera::looking_at(Vec3::new(3.0, 2.0, 4.0), Vec3::ZERO, 30.0, 64, 64).unwrap();
        assert!(extract_smooth_contours(&shapes::cube(1.0), &oblique).polylines.is_empty());
    }

    #[test]
    fn torus_contours_are_closed_loops() {
        let m = shapes::torus(1.0, 0.4, 48, 24);
        let cam = Camera::looking_at(Vec3::new(0.0, 2.5, 4.0), Vec3::ZERO, 40.0, 256, 256).unwrap();
        let set = extract_smooth_contours(&m, &cam);
        assert!(!set.polylines.is_empty());
        assert!(set.polylines.iter().all(|p| p.closed));
        assert_eq!(set.non_manifold_warnings, 0);
    }
}

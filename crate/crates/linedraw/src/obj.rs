//! Wavefront OBJ: positions, optional normals, polygon faces.
//!
//! Faces with more than three corners are fan-triangulated. A corner that
//! references a normal (`v//vn` or `v/vt/vn`) gets its own vertex record per
//! distinct `(v, vn)` pair, so split normals survive. Without any `vn`
//! corners, normals are computed from the faces.

use std::collections::HashMap;
use std::fmt::Write as _;

use linedraw_core::math::Vec3;
use linedraw_core::mesh::{Mesh, MeshError};

#[derive(Debug, thiserror::Error)]
pub enum ObjError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("some face corners have normals and some do not")]
    MixedNormals,
    #[error(transparent)]
    Mesh(#[from] MeshError),
}

fn parse_err(line: usize, msg: impl Into<String>) -> ObjError {
    ObjError::Parse { line, msg: msg.into() }
}

fn floats(line: usize, parts: &[&str], n: usize) -> Result<Vec3, ObjError> {
    if parts.len() < n {
        return Err(parse_err(line, format!("expected {n} numbers")));
    }
    let mut v = [0.0; 3];
    for (k, s) in parts.iter().take(3).enumerate() {
        v[k] = s.parse::<f64>().map_err(|_| parse_err(line, format!("bad number {s:?}")))?;
    }
    Ok(Vec3::new(v[0], v[1], v[2]))
}

/// Resolves a 1-based (or negative, relative) OBJ index.
fn resolve(line: usize, s: &str, count: usize) -> Result<usize, ObjError> {
    let i: i64 = s.parse().map_err(|_| parse_err(line, format!("bad index {s:?}")))?;
    let r = if i > 0 { i - 1 } else { count as i64 + i };
    if i == 0 || r < 0 || r >= count as i64 {
        return Err(parse_err(line, format!("index {i} out of range")));
    }
    Ok(r as usize)
}

pub fn parse_obj(text: &str) -> Result<Mesh, ObjError> {
    let mut positions = Vec::new();
    let mut normals = Vec::new();
    let mut corners: Vec<[(usize, Option<usize>); 3]> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let content = raw.split('#').next().unwrap_or("");
        let parts: Vec<&str> = content.split_whitespace().collect();
        let Some((&kw, rest)) = parts.split_first() else { continue };
        match kw {
            "v" => positions.push(floats(line, rest, 3)?),
            "vn" => normals.push(floats(line, rest, 3)?),
            "f" => {
                if rest.len() < 3 {
                    return Err(parse_err(line, "face needs at least 3 corners"));
                }
                let mut poly = Vec::with_capacity(rest.len());
                for c in rest {
                    let mut it = c.split('/');
                    let v = resolve(line, it.next().unwrap_or(""), positions.len())?;
                    let _tex = it.next();
                    let n = match it.next() {
                        Some(s) if !s.is_empty() => Some(resolve(line, s, normals.len())?),
                        _ => None,
                    };
                    poly.push((v, n));
                }
                for k in 1..poly.len() - 1 {
                    corners.push([poly[0], poly[k], poly[k + 1]]);
                }
            }
            _ => {}
        }
    }
    let with_normals = corners.iter().flatten().filter(|c| c.1.is_some()).count();
    if with_normals == 0 {
        let faces = corners.iter().map(|f| f.map(|c| c.0 as u32)).collect();
        return Ok(Mesh::new(positions, faces, None)?);
    }
    if with_normals != corners.len() * 3 {
        return Err(ObjError::MixedNormals);
    }
    let mut index: HashMap<(usize, usize), u32> = HashMap::new();
    let mut verts = Vec::new();
    let mut ns = Vec::new();
    let mut faces = Vec::with_capacity(corners.len());
    for f in &corners {
        let mut tri = [0u32; 3];
        for (k, &(v, n)) in f.iter().enumerate() {
            let n = n.unwrap();
            tri[k] = *index.entry((v, n)).or_insert_with(|| {
                verts.push(positions[v]);
                ns.push(normals[n]);
                (verts.len() - 1) as u32
            });
        }
        faces.push(tri);
    }
    Ok(Mesh::new(verts, faces, Some(ns))?)
}

/// OBJ text with one `v`/`vn` pair per vertex record and `v//vn` faces.
pub fn write_obj(mesh: &Mesh) -> String {
    let mut s = String::new();
    for v in mesh.vertices() {
        let _ = writeln!(s, "v {} {} {}", v.x, v.y, v.z);
    }
    for n in mesh.normals() {
        let _ = writeln!(s, "vn {} {} {}", n.x, n.y, n.z);
    }
    for f in mesh.faces() {
        let [a, b, c] = f.map(|i| i + 1);
        let _ = writeln!(s, "f {a}//{a} {b}//{b} {c}//{c}");
    }
    s
}

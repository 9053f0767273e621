//! Wavefront OBJ persistence. Torus meshes keep their fundamental-domain
//! vertices in the OBJ and the per-triangle edge shifts in a JSON sidecar
//! next to it (`mesh.obj` -> `mesh.shifts.json`).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::ambient::Ambient;
use super::mesh::TriSurfaceMesh;
use super::polyline::ClosedPolyline;
use super::vec3::{Point3, ShiftVec};
use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
struct Sidecar {
    ambient: Ambient,
    tri_shifts: Vec<[ShiftVec; 3]>,
}

pub fn to_obj_string(m: &TriSurfaceMesh) -> String {
    let mut s = String::new();
    for p in &m.vertices {
        let _ = writeln!(s, "v {:?} {:?} {:?}", p.x, p.y, p.z);
    }
    for t in &m.triangles {
        let _ = writeln!(s, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1);
    }
    s
}

/// Closed curves as OBJ line records. Torus curves are written unwrapped,
/// starting from the stored first vertex.
pub fn polyline_obj_string(curves: &[ClosedPolyline]) -> String {
    let mut s = String::new();
    let mut base = 1;
    for c in curves {
        let mut p = c.vertices()[0];
        for i in 0..c.len() {
            let _ = writeln!(s, "v {:?} {:?} {:?}", p.x, p.y, p.z);
            p = p + c.segment(i);
        }
        let idx: Vec<String> = (0..c.len()).chain([0]).map(|i| (base + i).to_string()).collect();
        let _ = writeln!(s, "l {}", idx.join(" "));
        base += c.len();
    }
    s
}

/// Parses vertex and face lines; other records are ignored. Faces must be
/// triangles.
pub fn parse_obj(text: &str) -> Result<(Vec<Point3>, Vec<[usize; 3]>)> {
    let mut vertices = Vec::new();
    let mut faces = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let mut it = raw.split_whitespace();
        match it.next() {
            Some("v") => {
                let c: Vec<f64> = it
                    .take(3)
                    .map(|t| t.parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| Error::Parse { line, msg: e.to_string() })?;
                if c.len() != 3 {
                    return Err(Error::Parse { line, msg: "vertex needs 3 coordinates".into() });
                }
                vertices.push(Point3::new(c[0], c[1], c[2]));
            }
            Some("f") => {
                let idx: Vec<usize> = it
                    .map(|t| t.split('/').next().unwrap_or("").parse::<usize>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| Error::Parse { line, msg: e.to_string() })?;
                if idx.len() != 3 || idx.contains(&0) {
                    return Err(Error::Parse { line, msg: "face needs 3 one-based indices".into() });
                }
                faces.push([idx[0] - 1, idx[1] - 1, idx[2] - 1]);
            }
            _ => {}
        }
    }
    Ok((vertices, faces))
}

pub fn sidecar_path(obj: &Path) -> PathBuf {
    obj.with_extension("shifts.json")
}

pub fn write_mesh(m: &TriSurfaceMesh, path: &Path) -> Result<()> {
    std::fs::write(path, to_obj_string(m))?;
    if m.ambient.is_torus() {
        let side = Sidecar {
            ambient: m.ambient.clone(),
            tri_shifts: m.tri_shifts.clone().unwrap_or_else(|| vec![[[0; 3]; 3]; m.triangle_count()]),
        };
        std::fs::write(sidecar_path(path), serde_json::to_string_pretty(&side)? + "\n")?;
    }
    Ok(())
}

/// Reads an OBJ (and its sidecar, if present). Boundary vertices are fixed.
pub fn read_mesh(path: &Path) -> Result<TriSurfaceMesh> {
    let (v, f) = parse_obj(&std::fs::read_to_string(path)?)?;
    let side = sidecar_path(path);
    if side.exists() {
        let sc: Sidecar = serde_json::from_str(&std::fs::read_to_string(side)?)?;
        TriSurfaceMesh::with_ambient(v, f, Some(sc.tri_shifts), sc.ambient)
    } else {
        TriSurfaceMesh::new(v, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polylines_are_closed_line_records() {
        let c = ClosedPolyline::new(vec![Point3::new(0.0, 0.0, 0.0), Point3::new(1.0, 0.0, 0.0), Point3::new(0.0, 1.0, 0.0)]).unwrap();
        let s = polyline_obj_string(&[c.clone(), c]);
        assert!(s.contains("l 1 2 3 1\n"));
        assert!(s.contains("l 4 5 6 4\n"));
        assert_eq!(parse_obj(&s).unwrap().0.len(), 6);
    }

    #[test]
    fn roundtrip_euclidean() {
        let m = TriSurfaceMesh::new(
            vec![Point3::new(0.0, 0.0, 0.0), Point3::new(1.0, 0.0, 0.1), Point3::new(0.0, 1.0, -0.3)],
            vec![[0, 1, 2]],
        )
        .unwrap();
        let s = to_obj_string(&m);
        assert!(s.contains("f 1 2 3\n"));
        let (v, f) = parse_obj(&s).unwrap();
        assert_eq!(v, m.vertices);
        assert_eq!(f, m.triangles);
    }

    #[test]
    fn roundtrip_torus_with_sidecar() {
        let amb = Ambient::torus(Point3::new(1.0, 1.0, 1.0), None).unwrap();
        let lifts = [[Point3::new(0.9, 0.2, 0.5), Point3::new(1.1, 0.2, 0.5), Point3::new(1.0, 0.4, 0.5)]];
        let m = TriSurfaceMesh::from_lifted_corners(3, vec![[0, 1, 2]], &lifts, amb).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.obj");
        write_mesh(&m, &p).unwrap();
        let back = read_mesh(&p).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn bad_face_reports_line() {
        match parse_obj("v 0 0 0\nf 1 2\n") {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
    }
}

//! Wavefront OBJ output for cycle surfaces.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::complex::Chain;
use crate::cubical::{cycle_quads, CubicalComplex};
use crate::error::{Error, Result};
use crate::geometry::EmbeddedComplex;

/// Writes quads given by grid corners, scaling grid units by `spacing`.
pub fn write_quad_obj<W: Write>(
    out: &mut W,
    quads: &[[[usize; 3]; 4]],
    spacing: [f64; 3],
) -> Result<()> {
    let mut index: BTreeMap<[usize; 3], usize> = BTreeMap::new();
    for q in quads {
        for p in q {
            let n = index.len() + 1;
            index.entry(*p).or_insert(n);
        }
    }
    writeln!(
        out,
        "# quad surface: {} vertices, {} faces",
        index.len(),
        quads.len()
    )?;
    let mut by_id: Vec<(&[usize; 3], &usize)> = index.iter().collect();
    by_id.sort_by_key(|e| *e.1);
    for (p, _) in by_id {
        writeln!(
            out,
            "v {} {} {}",
            p[0] as f64 * spacing[0],
            p[1] as f64 * spacing[1],
            p[2] as f64 * spacing[2]
        )?;
    }
    for q in quads {
        writeln!(
            out,
            "f {} {} {} {}",
            index[&q[0]], index[&q[1]], index[&q[2]], index[&q[3]]
        )?;
    }
    Ok(())
}

/// Writes the 2-cycle `cycle` of `cubical` as an OBJ quad mesh.
pub fn export_cycle_mesh(cubical: &CubicalComplex, cycle: &Chain, path: &Path) -> Result<()> {
    let quads = cycle_quads(cubical, cycle)?;
    let mut w = BufWriter::new(File::create(path)?);
    write_quad_obj(&mut w, &quads, cubical.spacing)?;
    w.flush()?;
    Ok(())
}

/// Writes the cells of a simplicial 1- or 2-chain as OBJ lines or triangles.
/// Planar points get a zero third coordinate.
pub fn write_simplicial_obj<W: Write>(
    out: &mut W,
    ec: &EmbeddedComplex,
    chain: &Chain,
) -> Result<()> {
    let tag = match chain.dim() {
        1 => "l",
        2 => "f",
        d => return Err(Error::DimensionTooLow(d)),
    };
    if ec.ambient_dim() > 3 {
        return Err(Error::NotEmbedded(format!(
            "cannot draw {}-dimensional points",
            ec.ambient_dim()
        )));
    }
    let cells: Vec<&[usize]> = chain
        .iter()
        .map(|i| ec.complex.vertices(crate::CellId::new(chain.dim(), i)))
        .collect();
    let mut index: BTreeMap<usize, usize> = BTreeMap::new();
    for c in &cells {
        for &v in c.iter() {
            let n = index.len() + 1;
            index.entry(v).or_insert(n);
        }
    }
    writeln!(
        out,
        "# {}-chain: {} vertices, {} cells",
        chain.dim(),
        index.len(),
        cells.len()
    )?;
    let mut by_id: Vec<(usize, usize)> = index.iter().map(|(&v, &n)| (n, v)).collect();
    by_id.sort_unstable();
    for (_, v) in by_id {
        let p = ec.point(v);
        let at = |k: usize| p.get(k).copied().unwrap_or(0.0);
        writeln!(out, "v {} {} {}", at(0), at(1), at(2))?;
    }
    for c in cells {
        let ids: Vec<String> = c.iter().map(|v| index[v].to_string()).collect();
        writeln!(out, "{tag} {}", ids.join(" "))?;
    }
    Ok(())
}

/// A parsed OBJ mesh: vertex positions and 1-based face index lists.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ObjMesh {
    pub vertices: Vec<[f64; 3]>,
    pub faces: Vec<Vec<usize>>,
}

impl ObjMesh {
    /// Faces as sets of corner positions, for order-free comparison.
    pub fn face_corners(&self) -> Vec<Vec<[f64; 3]>> {
        self.faces
            .iter()
            .map(|f| f.iter().map(|&i| self.vertices[i - 1]).collect())
            .collect()
    }
}

/// Reads `v` and `f` records; other lines are ignored.
pub fn parse_obj(text: &str) -> Result<ObjMesh> {
    let mut mesh = ObjMesh::default();
    for (n, line) in text.lines().enumerate() {
        let bad = || Error::Io(format!("OBJ line {}: {line:?}", n + 1));
        let mut parts = line.split_whitespace();
        match parts.next() {
            Some("v") => {
                let xs: Vec<f64> = parts
                    .map(|t| t.parse().map_err(|_| bad()))
                    .collect::<Result<_>>()?;
                let [x, y, z] = xs[..] else { return Err(bad()) };
                mesh.vertices.push([x, y, z]);
            }
            Some("f") => {
                let ids: Vec<usize> = parts
                    .map(|t| t.split('/').next().unwrap_or("").parse().map_err(|_| bad()))
                    .collect::<Result<_>>()?;
                if ids.iter().any(|&i| i == 0 || i > mesh.vertices.len()) {
                    return Err(bad());
                }
                mesh.faces.push(ids);
            }
            _ => {}
        }
    }
    Ok(mesh)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_shell() {
        let c = CubicalComplex::full([2, 2, 2], [1.0; 3]).unwrap();
        let shell = Chain::from_cells(2, 0..6);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("shell.obj");
        export_cycle_mesh(&c, &shell, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with('#'));
        let mesh = parse_obj(&text).unwrap();
        assert_eq!(mesh.vertices.len(), 8);
        assert_eq!(mesh.faces.len(), 6);
        assert!(mesh.faces.iter().all(|f| f.len() == 4));
    }

    #[test]
    fn tetrahedron_surface() {
        use crate::geometry::Coordinates;
        use std::sync::Arc;
        let mut k = crate::CellComplex::new_simplicial();
        for v in 0..4 {
            k.add_cell(&[v], None).unwrap();
        }
        for e in [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]] {
            k.add_cell(&e, None).unwrap();
        }
        for t in [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]] {
            k.add_cell(&t, Some(1.0)).unwrap();
        }
        let mut coords = Coordinates::new(3);
        for (v, p) in [
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, 0.0, 1.0],
        ]
        .iter()
        .enumerate()
        {
            coords.insert(v, p).unwrap();
        }
        let ec = EmbeddedComplex::new(k, Arc::new(coords)).unwrap();
        let mut buf = Vec::new();
        write_simplicial_obj(&mut buf, &ec, &Chain::from_cells(2, 0..4)).unwrap();
        let mesh = parse_obj(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(mesh.vertices.len(), 4);
        assert_eq!(mesh.faces.len(), 4);
        assert!(mesh.faces.iter().all(|f| f.len() == 3));
    }

    #[test]
    fn empty_cycle() {
        let c = CubicalComplex::full([2, 2, 2], [1.0; 3]).unwrap();
        let mut buf = Vec::new();
        write_quad_obj(
            &mut buf,
            &cycle_quads(&c, &Chain::zero(2)).unwrap(),
            c.spacing,
        )
        .unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 1);
        assert!(text.starts_with("# quad surface"));
    }

    #[test]
    fn round_trip_with_spacing() {
        let c = CubicalComplex::full([3, 2, 2], [0.5, 2.0, 1.0]).unwrap();
        let cycle = Chain::from_cells(2, [0, 3, 7]);
        let quads = cycle_quads(&c, &cycle).unwrap();
        let mut buf = Vec::new();
        write_quad_obj(&mut buf, &quads, c.spacing).unwrap();
        let mesh = parse_obj(std::str::from_utf8(&buf).unwrap()).unwrap();
        let expect: Vec<Vec<[f64; 3]>> = quads
            .iter()
            .map(|q| {
                q.iter()
                    .map(|p| [p[0] as f64 * 0.5, p[1] as f64 * 2.0, p[2] as f64])
                    .collect()
            })
            .collect();
        assert_eq!(mesh.face_corners(), expect);
    }
}

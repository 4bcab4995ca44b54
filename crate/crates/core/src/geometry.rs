//! Geometric predicates for complexes embedded in Euclidean space.
//!
//! An orientation bit is stored against a canonical reference orientation:
//! for a simplex, the class of its sorted vertex order; for an axis-aligned
//! cube, the standard orientation of its extent axes taken in increasing
//! order.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::complex::{CellComplex, CellId, CellKind};
use crate::error::{Error, Result};

/// Relative tolerance for determinants and projections.
pub const DET_EPS: f64 = 1e-12;
/// Two directions closer than this (radians) are treated as coincident.
pub const ANGLE_EPS: f64 = 1e-9;

/// Vertex coordinates keyed by vertex label.
#[derive(Clone, Debug, Default)]
pub struct Coordinates {
    dim: usize,
    points: HashMap<usize, Box<[f64]>>,
}

impl Coordinates {
    pub fn new(dim: usize) -> Self {
        Coordinates {
            dim,
            points: HashMap::new(),
        }
    }

    pub fn insert(&mut self, vertex: usize, point: &[f64]) -> Result<()> {
        if point.len() != self.dim {
            return Err(Error::NotEmbedded(format!(
                "vertex {vertex} has {} coordinates, expected {}",
                point.len(),
                self.dim
            )));
        }
        if point.iter().any(|x| !x.is_finite()) {
            return Err(Error::NotEmbedded(format!(
                "vertex {vertex} has a non-finite coordinate"
            )));
        }
        self.points.insert(vertex, point.into());
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, vertex: usize) -> Option<&[f64]> {
        self.points.get(&vertex).map(|p| &p[..])
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// A cell complex with a straight-line embedding of its vertices.
#[derive(Clone, Debug)]
pub struct EmbeddedComplex {
    pub complex: CellComplex,
    pub coords: Arc<Coordinates>,
}

/// Orientation bit of a cell against its reference orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrientedCell {
    pub cell: usize,
    pub positive: bool,
}

impl OrientedCell {
    pub fn new(cell: usize, positive: bool) -> Self {
        OrientedCell { cell, positive }
    }

    pub fn flipped(self) -> Self {
        OrientedCell {
            cell: self.cell,
            positive: !self.positive,
        }
    }

    pub fn sign(self) -> i64 {
        if self.positive {
            1
        } else {
            -1
        }
    }
}

impl EmbeddedComplex {
    /// Pairs a complex with coordinates and runs cheap sanity checks: every
    /// vertex has a point, no two vertices share a point, and the top cells of
    /// dimension equal to the ambient dimension are not flat.
    pub fn new(complex: CellComplex, coords: Arc<Coordinates>) -> Result<Self> {
        let mut seen: HashMap<Vec<u64>, usize> = HashMap::new();
        for v in complex.cells(0) {
            let label = complex.vertices(v)[0];
            let p = coords
                .get(label)
                .ok_or_else(|| Error::NotEmbedded(format!("vertex {label} has no coordinates")))?;
            let key: Vec<u64> = p.iter().map(|x| (x + 0.0).to_bits()).collect();
            if let Some(other) = seen.insert(key, label) {
                return Err(Error::NotEmbedded(format!(
                    "vertices {other} and {label} share a position"
                )));
            }
        }
        let ec = EmbeddedComplex { complex, coords };
        if ec.complex.kind() == CellKind::Simplicial {
            let n = ec.ambient_dim();
            for c in ec.complex.cells(n) {
                let pts: Vec<&[f64]> = ec
                    .complex
                    .vertices(c)
                    .iter()
                    .map(|&v| ec.point(v))
                    .collect();
                natural_orientation_sign(&pts)?;
            }
        }
        Ok(ec)
    }

    /// Shares these coordinates with another complex over the same vertices.
    pub fn with_complex(&self, complex: CellComplex) -> EmbeddedComplex {
        EmbeddedComplex {
            complex,
            coords: Arc::clone(&self.coords),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.coords.dim()
    }

    pub fn point(&self, vertex: usize) -> &[f64] {
        self.coords.get(vertex).expect("vertex without coordinates")
    }

    pub fn centroid(&self, c: CellId) -> Vec<f64> {
        let vs = self.complex.vertices(c);
        let mut out = vec![0.0; self.ambient_dim()];
        for &v in vs {
            for (o, x) in out.iter_mut().zip(self.point(v)) {
                *o += x;
            }
        }
        for o in &mut out {
            *o /= vs.len() as f64;
        }
        out
    }

    /// Orientation bit of the d-cell `c` (d = ambient − 1) induced by the
    /// naturally oriented region on the side of `p`.
    pub fn orientation_facing(&self, c: CellId, p: &[f64]) -> Result<bool> {
        match self.complex.kind() {
            CellKind::Simplicial => {
                let mut pts: Vec<&[f64]> = vec![p];
                pts.extend(self.complex.vertices(c).iter().map(|&v| self.point(v)));
                Ok(natural_orientation_sign(&pts)? > 0)
            }
            CellKind::Cubical => {
                let (extent, lo, _) = self.cube_frame(c);
                let normal = (0..self.ambient_dim())
                    .find(|a| !extent.contains(a))
                    .ok_or_else(|| Error::NotEmbedded("cube has no normal axis".into()))?;
                let gap = p[normal] - lo[normal];
                if gap.abs() <= DET_EPS * (1.0 + lo[normal].abs()) {
                    return Err(Error::Degenerate {
                        det: gap,
                        scale: 1.0 + lo[normal].abs(),
                    });
                }
                let below = extent.iter().filter(|&&a| a < normal).count();
                // standard orientation of the region, read off the normal side
                Ok((gap < 0.0) != (below % 2 == 1))
            }
        }
    }

    /// Extent axes, lower corner and upper corner of an axis-aligned cell.
    pub(crate) fn cube_frame(&self, c: CellId) -> (Vec<usize>, Vec<f64>, Vec<f64>) {
        let n = self.ambient_dim();
        let mut lo = vec![f64::INFINITY; n];
        let mut hi = vec![f64::NEG_INFINITY; n];
        for &v in self.complex.vertices(c) {
            for (a, &x) in self.point(v).iter().enumerate() {
                lo[a] = lo[a].min(x);
                hi[a] = hi[a].max(x);
            }
        }
        let extent = (0..n).filter(|&a| hi[a] > lo[a]).collect();
        (extent, lo, hi)
    }

    /// Signed facets of an oriented cell: `(facet index, ±1)`.
    pub fn signed_facets(&self, oc: OrientedCell, dim: usize) -> Vec<(usize, i64)> {
        let c = CellId::new(dim, oc.cell);
        let facets = self.complex.facets(c);
        match self.complex.kind() {
            CellKind::Simplicial => facets
                .iter()
                .enumerate()
                .map(|(i, &f)| (f, if i % 2 == 0 { oc.sign() } else { -oc.sign() }))
                .collect(),
            CellKind::Cubical => {
                let (extent, _, hi) = self.cube_frame(c);
                facets
                    .iter()
                    .map(|&f| {
                        let (fext, flo, _) = self.cube_frame(CellId::new(dim - 1, f));
                        let j = extent
                            .iter()
                            .position(|a| !fext.contains(a))
                            .expect("facet drops one axis");
                        let high = flo[extent[j]] == hi[extent[j]];
                        let s = if high { 1 } else { -1 } * if j % 2 == 0 { 1 } else { -1 };
                        (f, s * oc.sign())
                    })
                    .collect()
            }
        }
    }
}

/// Sign of `det(p_1 - p_0, ..., p_q - p_0)` for `q + 1` points in R^q.
pub fn natural_orientation_sign(points: &[&[f64]]) -> Result<i8> {
    let q = points.len().saturating_sub(1);
    if q == 0 || points.iter().any(|p| p.len() != q) {
        return Err(Error::NotEmbedded(format!(
            "need {} points in R^{}",
            q + 1,
            q
        )));
    }
    let m = DMatrix::from_fn(q, q, |r, c| points[r + 1][c] - points[0][c]);
    let scale: f64 = m.row_iter().map(|r| r.norm()).product();
    let det = m.determinant();
    if !(det.abs() > DET_EPS * scale) {
        return Err(Error::Degenerate { det, scale });
    }
    Ok(if det > 0.0 { 1 } else { -1 })
}

/// Parity of the permutation sorting `seq` (true = even). Entries must be distinct.
pub fn is_even_permutation(seq: &[usize]) -> bool {
    let mut inversions = 0usize;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inversions += 1;
            }
        }
    }
    inversions.is_multiple_of(2)
}

/// Orientation induced on `facet` by the simplex oriented by the vertex
/// order `ordered`: drop the missing vertex at position `i` and apply
/// `(-1)^i`. Returns the bit against the facet's sorted order.
pub fn induced_orientation(ordered: &[usize], facet: &[usize]) -> Result<bool> {
    let not_face = || Error::NotAFace {
        cell: ordered.to_vec(),
        face: facet.to_vec(),
    };
    if facet.len() + 1 != ordered.len() {
        return Err(not_face());
    }
    let missing: Vec<usize> = (0..ordered.len())
        .filter(|&i| !facet.contains(&ordered[i]))
        .collect();
    let [i] = missing[..] else {
        return Err(not_face());
    };
    let rest: Vec<usize> = ordered
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, &v)| v)
        .collect();
    Ok(is_even_permutation(&rest) == (i % 2 == 0))
}

/// Whether the sector from one coface to the next holds a top cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sector {
    Occupied(usize),
    Void,
}

/// Cofaces of a (d−1)-cell in circular order around it.
///
/// Sector `i` runs counter-clockwise (in the chosen frame of the normal
/// plane) from `cofaces[i]` to `cofaces[(i + 1) % n]`.
#[derive(Clone, Debug)]
pub struct AngularOrder {
    pub cofaces: Vec<usize>,
    pub angles: Vec<f64>,
    pub sectors: Vec<Sector>,
    pub(crate) origin: Vec<f64>,
    pub(crate) frame: [Vec<f64>; 2],
    pub(crate) radius: f64,
}

impl AngularOrder {
    /// A point inside sector `i`, on its angular bisector in the normal plane.
    /// Undefined for a lone coface (the sector is the full turn).
    pub fn sector_point(&self, i: usize) -> Vec<f64> {
        let n = self.angles.len();
        let a = self.angles[i];
        let mut b = self.angles[(i + 1) % n];
        if b <= a {
            b += TAU;
        }
        let mid = 0.5 * (a + b);
        let (c, s) = (mid.cos(), mid.sin());
        self.origin
            .iter()
            .zip(self.frame[0].iter().zip(&self.frame[1]))
            .map(|(o, (x, y))| o + self.radius * (c * x + s * y))
            .collect()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Orthonormal basis of the orthogonal complement of the span of `vectors`.
fn complement_basis(vectors: &[Vec<f64>], n: usize) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let push = |v: &[f64], keep: &mut Vec<Vec<f64>>, basis: &mut Vec<Vec<f64>>| {
        let scale = norm(v);
        if scale == 0.0 {
            return;
        }
        let mut w = v.to_vec();
        for b in basis.iter() {
            let t = dot(&w, b);
            w.iter_mut().zip(b).for_each(|(x, y)| *x -= t * y);
        }
        let r = norm(&w);
        if r > 1e-9 * scale {
            w.iter_mut().for_each(|x| *x /= r);
            keep.push(w.clone());
            basis.push(w);
        }
    };
    let mut span = Vec::new();
    for v in vectors {
        push(v, &mut span, &mut basis);
    }
    let mut comp = Vec::new();
    for a in 0..n {
        let mut e = vec![0.0; n];
        e[a] = 1.0;
        push(&e, &mut comp, &mut basis);
    }
    comp
}

/// Circular order of the d-cofaces of the (d−1)-cell `tau`, where d + 1 is
/// the ambient dimension.
///
/// Each direction is the offset of a coface's centroid from `tau`'s centroid,
/// projected onto the plane orthogonal to `tau`. A top cell is located by
/// its own centroid direction, which falls strictly inside the sector bounded
/// by its two faces through `tau`.
pub fn angular_order_cofaces(ec: &EmbeddedComplex, tau: CellId) -> Result<AngularOrder> {
    let k = &ec.complex;
    let n = ec.ambient_dim();
    let d = tau.dim + 1;
    if d + 1 != n {
        return Err(Error::NotEmbedded(format!(
            "angular order needs a {}-cell in R^{}, got a {}-cell",
            n - 2,
            n,
            tau.dim
        )));
    }
    let cof = k.cofaces(tau);
    if cof.is_empty() {
        return Err(Error::NotEmbeddedLocally(k.vertices(tau).to_vec()));
    }
    let vs = k.vertices(tau);
    let base = ec.point(vs[0]);
    let spans: Vec<Vec<f64>> = vs[1..]
        .iter()
        .map(|&v| ec.point(v).iter().zip(base).map(|(x, y)| x - y).collect())
        .collect();
    let frame = complement_basis(&spans, n);
    if frame.len() != 2 {
        return Err(Error::DegenerateProjection(vs.to_vec()));
    }
    let origin = ec.centroid(tau);
    let project = |p: &[f64], who: CellId| -> Result<(f64, f64)> {
        let off: Vec<f64> = p.iter().zip(&origin).map(|(x, y)| x - y).collect();
        let (x, y) = (dot(&off, &frame[0]), dot(&off, &frame[1]));
        let r = x.hypot(y);
        if !(r > DET_EPS * norm(&off).max(f64::MIN_POSITIVE)) {
            return Err(Error::DegenerateProjection(k.vertices(who).to_vec()));
        }
        Ok((y.atan2(x).rem_euclid(TAU), r))
    };
    let mut items: Vec<(f64, usize, f64)> = Vec::with_capacity(cof.len());
    for &s in cof {
        let c = CellId::new(d, s);
        let (a, r) = project(&ec.centroid(c), c)?;
        items.push((a, s, r));
    }
    items.sort_by(|x, y| x.0.total_cmp(&y.0));
    let m = items.len();
    if m > 1 {
        for i in 0..m {
            let gap = (items[(i + 1) % m].0 - items[i].0).rem_euclid(TAU);
            if gap < ANGLE_EPS {
                return Err(Error::NotEmbeddedLocally(vs.to_vec()));
            }
        }
    }
    let angles: Vec<f64> = items.iter().map(|t| t.0).collect();
    let cofaces: Vec<usize> = items.iter().map(|t| t.1).collect();
    let radius = items.iter().map(|t| t.2).sum::<f64>() / m as f64;
    let mut sectors = vec![Sector::Void; m];
    let mut tops: Vec<usize> = cof
        .iter()
        .flat_map(|&s| k.cofaces(CellId::new(d, s)).iter().copied())
        .collect();
    tops.sort_unstable();
    tops.dedup();
    for rho in tops {
        let r = CellId::new(d + 1, rho);
        let (a, _) = project(&ec.centroid(r), r)?;
        // sector i covers [angles[i], angles[i+1]) going counter-clockwise
        let i = match angles.iter().rposition(|&x| x <= a) {
            Some(i) => i,
            None => m - 1,
        };
        let (sa, sb) = (cofaces[i], cofaces[(i + 1) % m]);
        let faces = k.facets(r);
        if m < 2 || !faces.contains(&sa) || !faces.contains(&sb) || sectors[i] != Sector::Void {
            return Err(Error::NotEmbeddedLocally(vs.to_vec()));
        }
        sectors[i] = Sector::Occupied(rho);
    }
    Ok(AngularOrder {
        cofaces,
        angles,
        sectors,
        origin,
        frame: [frame[0].clone(), frame[1].clone()],
        radius,
    })
}

//! Cubical complexes of scalar volumes.
//!
//! Grid vertex `(i, j, k)` has label `i + nx * (j + ny * k)`. A cell is an
//! anchor vertex plus a bitmask of the axes it extends along.

use std::collections::HashMap;
use std::sync::Arc;

use crate::complex::{CellComplex, CellId, Chain};
use crate::error::{Error, Result};
use crate::geometry::{Coordinates, EmbeddedComplex};
use crate::persistence::{Death, Diagram, Filtration, Interval};

/// Vertex-valued scalar field on a regular grid, x fastest.
#[derive(Clone, Debug)]
pub struct ScalarGrid {
    pub dims: [usize; 3],
    pub values: Vec<f64>,
    pub spacing: [f64; 3],
}

impl ScalarGrid {
    pub fn new(dims: [usize; 3], values: Vec<f64>) -> Result<Self> {
        Self::with_spacing(dims, values, [1.0; 3])
    }

    pub fn with_spacing(dims: [usize; 3], values: Vec<f64>, spacing: [f64; 3]) -> Result<Self> {
        if dims.iter().any(|&n| n < 2) {
            return Err(Error::GridTooSmall(dims));
        }
        if values.len() != dims.iter().product::<usize>() {
            return Err(Error::InvalidCell(vec![values.len()]));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NotEmbedded("grid value is not finite".into()));
        }
        if spacing.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            return Err(Error::NotEmbedded("grid spacing must be positive".into()));
        }
        Ok(ScalarGrid {
            dims,
            values,
            spacing,
        })
    }

    /// Samples `f` at every grid vertex.
    pub fn from_fn(dims: [usize; 3], f: impl Fn(usize, usize, usize) -> f64) -> Result<Self> {
        let mut values = Vec::with_capacity(dims.iter().product());
        for k in 0..dims[2] {
            for j in 0..dims[1] {
                for i in 0..dims[0] {
                    values.push(f(i, j, k));
                }
            }
        }
        Self::new(dims, values)
    }

    pub fn label(&self, p: [usize; 3]) -> usize {
        p[0] + self.dims[0] * (p[1] + self.dims[1] * p[2])
    }

    pub fn value(&self, p: [usize; 3]) -> f64 {
        self.values[self.label(p)]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CubicalCell {
    pub anchor: [usize; 3],
    pub extent: u8,
}

impl CubicalCell {
    pub fn new(anchor: [usize; 3], extent: u8) -> Self {
        CubicalCell { anchor, extent }
    }

    pub fn dim(&self) -> usize {
        self.extent.count_ones() as usize
    }

    pub fn axes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..3).filter(move |a| self.extent >> a & 1 == 1)
    }

    /// Grid points of the cell's corners.
    pub fn corners(&self) -> Vec<[usize; 3]> {
        let axes: Vec<usize> = self.axes().collect();
        (0..1usize << axes.len())
            .map(|m| {
                let mut p = self.anchor;
                for (b, &a) in axes.iter().enumerate() {
                    p[a] += m >> b & 1;
                }
                p
            })
            .collect()
    }

    /// Facets, low then high, for each extent axis in increasing order.
    pub fn facets(&self) -> Vec<CubicalCell> {
        let mut out = Vec::with_capacity(2 * self.dim());
        for a in self.axes() {
            let ext = self.extent & !(1 << a);
            let mut hi = self.anchor;
            hi[a] += 1;
            out.push(CubicalCell::new(self.anchor, ext));
            out.push(CubicalCell::new(hi, ext));
        }
        out
    }

    fn fits(&self, dims: [usize; 3]) -> bool {
        (0..3).all(|a| self.anchor[a] + usize::from(self.extent >> a & 1 == 1) < dims[a])
    }
}

/// A cubical complex on a grid, with the grid cell behind every complex cell.
#[derive(Clone, Debug)]
pub struct CubicalComplex {
    pub dims: [usize; 3],
    pub spacing: [f64; 3],
    pub complex: CellComplex,
    cells: Vec<Vec<CubicalCell>>,
    lookup: HashMap<CubicalCell, CellId>,
}

impl CubicalComplex {
    fn empty(dims: [usize; 3], spacing: [f64; 3]) -> Self {
        CubicalComplex {
            dims,
            spacing,
            complex: CellComplex::new_cubical(),
            cells: vec![Vec::new(); 4],
            lookup: HashMap::new(),
        }
    }

    fn label(&self, p: [usize; 3]) -> usize {
        p[0] + self.dims[0] * (p[1] + self.dims[1] * p[2])
    }

    fn insert(&mut self, c: CubicalCell, weight: Option<f64>) -> Result<CellId> {
        let verts: Vec<usize> = c.corners().iter().map(|&p| self.label(p)).collect();
        let id = if c.dim() == 0 {
            self.complex.add_cell(&verts, weight)?
        } else {
            let facets: Vec<usize> = c
                .facets()
                .iter()
                .map(|f| {
                    self.lookup
                        .get(f)
                        .map(|id| id.idx)
                        .ok_or_else(|| Error::MissingFace {
                            vertices: verts.clone(),
                            face: f.corners().iter().map(|&p| self.label(p)).collect(),
                        })
                })
                .collect::<Result<_>>()?;
            self.complex
                .add_cell_with_facets(c.dim(), &verts, &facets, weight)?
        };
        self.cells[c.dim()].push(c);
        self.lookup.insert(c, id);
        Ok(id)
    }

    /// All cells of all unit cubes of the grid.
    pub fn full(dims: [usize; 3], spacing: [f64; 3]) -> Result<Self> {
        if dims.iter().any(|&n| n < 2) {
            return Err(Error::GridTooSmall(dims));
        }
        let mut out = Self::empty(dims, spacing);
        for dim in 0..=3u32 {
            for extent in (0u8..8).filter(|e| e.count_ones() == dim) {
                for k in 0..dims[2] {
                    for j in 0..dims[1] {
                        for i in 0..dims[0] {
                            let c = CubicalCell::new([i, j, k], extent);
                            if c.fits(dims) {
                                out.insert(c, None)?;
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// The smallest cubical complex holding `cells`.
    pub fn from_cells(dims: [usize; 3], spacing: [f64; 3], cells: &[CubicalCell]) -> Result<Self> {
        let mut all: Vec<CubicalCell> = Vec::new();
        let mut stack: Vec<CubicalCell> = cells.to_vec();
        let mut seen = std::collections::HashSet::new();
        while let Some(c) = stack.pop() {
            if !c.fits(dims) {
                return Err(Error::InvalidCell(c.anchor.to_vec()));
            }
            if seen.insert(c) {
                all.push(c);
                stack.extend(c.facets());
            }
        }
        all.sort_by_key(|c| (c.dim(), c.anchor[2], c.anchor[1], c.anchor[0], c.extent));
        let mut out = Self::empty(dims, spacing);
        for c in all {
            out.insert(c, None)?;
        }
        Ok(out)
    }

    pub fn cell(&self, id: CellId) -> CubicalCell {
        self.cells[id.dim][id.idx]
    }

    pub fn id(&self, c: &CubicalCell) -> Option<CellId> {
        self.lookup.get(c).copied()
    }

    pub fn coordinates(&self) -> Coordinates {
        let mut coords = Coordinates::new(3);
        for c in &self.cells[0] {
            let p = c.anchor;
            let x = [
                p[0] as f64 * self.spacing[0],
                p[1] as f64 * self.spacing[1],
                p[2] as f64 * self.spacing[2],
            ];
            coords
                .insert(self.label(p), &x)
                .expect("finite grid coordinates");
        }
        coords
    }

    pub fn embedded(&self) -> EmbeddedComplex {
        EmbeddedComplex {
            complex: self.complex.clone(),
            coords: Arc::new(self.coordinates()),
        }
    }
}

/// The full grid complex of `grid`.
pub fn build_cubical_complex(grid: &ScalarGrid) -> Result<CubicalComplex> {
    CubicalComplex::full(grid.dims, grid.spacing)
}

/// How 2-cells are weighted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum WeightMode {
    /// Every 2-cell weighs 1.
    #[default]
    Unit,
    /// A 2-cell weighs its value minus the grid minimum.
    Value,
}

#[derive(Clone, Debug)]
pub struct CubicalFiltration {
    pub cubical: CubicalComplex,
    pub filtration: Filtration,
    /// Function value of the cell at each filtration position (0-based).
    pub values: Vec<f64>,
}

impl CubicalFiltration {
    /// Value of the cell at 1-based filtration index `i`.
    pub fn value_at(&self, i: usize) -> f64 {
        self.values[i - 1]
    }

    /// Intervals of dimension `q` whose death value exceeds their birth value,
    /// longest (by value) first. Infinite intervals count as longest.
    pub fn persistent_intervals(&self, diagram: &Diagram, q: usize) -> Vec<(Interval, f64)> {
        let mut out: Vec<(Interval, f64)> = diagram
            .dim(q)
            .iter()
            .filter_map(|iv| {
                let len = match iv.death {
                    Death::At(j) => self.value_at(j) - self.value_at(iv.birth),
                    Death::Never => f64::INFINITY,
                };
                (len > 0.0).then_some((*iv, len))
            })
            .collect();
        out.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        out
    }
}

/// Sublevel-set filtration: a cell takes the largest value of its corners;
/// ties are broken by dimension, then anchor, then extent.
pub fn lower_star_filtration(grid: &ScalarGrid, mode: WeightMode) -> Result<CubicalFiltration> {
    let mut cubical = build_cubical_complex(grid)?;
    let min = grid.values.iter().copied().fold(f64::INFINITY, f64::min);
    let mut keyed: Vec<(f64, CellId, CubicalCell)> = Vec::with_capacity(cubical.complex.len());
    for id in cubical.complex.iter().collect::<Vec<_>>() {
        let c = cubical.cell(id);
        let v = c
            .corners()
            .iter()
            .map(|&p| grid.value(p))
            .fold(f64::NEG_INFINITY, f64::max);
        if id.dim == 2 {
            let w = match mode {
                WeightMode::Unit => 1.0,
                WeightMode::Value => v - min,
            };
            cubical.complex.set_weight(id, Some(w))?;
        }
        keyed.push((v, id, c));
    }
    keyed.sort_by(|a, b| {
        a.0.total_cmp(&b.0)
            .then(a.1.dim.cmp(&b.1.dim))
            .then(a.2.anchor.cmp(&b.2.anchor))
            .then(a.2.extent.cmp(&b.2.extent))
    });
    let values = keyed.iter().map(|t| t.0).collect();
    let filtration = Filtration::new(&cubical.complex, keyed.iter().map(|t| t.1).collect())?;
    Ok(CubicalFiltration {
        cubical,
        filtration,
        values,
    })
}

/// Square faces of a 2-chain as corner points in cyclic order.
pub fn cycle_quads(cubical: &CubicalComplex, cycle: &Chain) -> Result<Vec<[[usize; 3]; 4]>> {
    if cycle.dim() != 2 {
        return Err(Error::WrongCellKind {
            expected: "2-dimensional",
        });
    }
    Ok(cycle
        .iter()
        .map(|i| {
            let c = cubical.cell(CellId::new(2, i));
            let axes: Vec<usize> = c.axes().collect();
            let step = |p: [usize; 3], a: usize| {
                let mut q = p;
                q[a] += 1;
                q
            };
            let p0 = c.anchor;
            let p1 = step(p0, axes[0]);
            let p2 = step(p1, axes[1]);
            let p3 = step(p0, axes[1]);
            [p0, p1, p2, p3]
        })
        .collect())
}

/// Ray-parity test: does the closed quad surface `cycle` enclose `p`?
///
/// `p` is in grid units. The ray runs along +x; `p` should avoid the planes
/// of grid faces (voxel centres do).
pub fn encloses_point(cubical: &CubicalComplex, cycle: &Chain, p: [f64; 3]) -> bool {
    let mut crossings = 0usize;
    for i in cycle.iter() {
        let c = cubical.cell(CellId::new(2, i));
        if c.extent != 0b110 {
            continue;
        }
        let [x, y, z] = c.anchor.map(|v| v as f64);
        if x > p[0] && (y..y + 1.0).contains(&p[1]) && (z..z + 1.0).contains(&p[2]) {
            crossings += 1;
        }
    }
    crossings % 2 == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::persistence::compute_pairs;

    fn counts(c: &CubicalComplex) -> [usize; 4] {
        [0, 1, 2, 3].map(|d| c.complex.num_cells(d))
    }

    #[test]
    fn unit_cube_counts() {
        let c = CubicalComplex::full([2, 2, 2], [1.0; 3]).unwrap();
        assert_eq!(counts(&c), [8, 12, 6, 1]);
        let c = CubicalComplex::full([3, 2, 2], [1.0; 3]).unwrap();
        assert_eq!(counts(&c)[3], 2);
        assert_eq!(counts(&c)[2], 11);
        assert!(matches!(
            CubicalComplex::full([1, 4, 4], [1.0; 3]),
            Err(Error::GridTooSmall(_))
        ));
    }

    #[test]
    fn euler_characteristic_and_formula() {
        for dims in [[2, 2, 2], [3, 4, 2], [5, 3, 4]] {
            let c = CubicalComplex::full(dims, [1.0; 3]).unwrap();
            let n = counts(&c);
            assert_eq!(n[0] as i64 - n[1] as i64 + n[2] as i64 - n[3] as i64, 1);
            let [x, y, z] = dims;
            let squares = (x - 1) * (y - 1) * z + (x - 1) * y * (z - 1) + x * (y - 1) * (z - 1);
            assert_eq!(n[2], squares);
        }
    }

    #[test]
    fn shell_encloses_centre() {
        let c = CubicalComplex::full([2, 2, 2], [1.0; 3]).unwrap();
        let shell = Chain::from_cells(2, 0..6);
        assert!(c.complex.boundary_chain(&shell).unwrap().is_empty());
        assert!(encloses_point(&c, &shell, [0.5, 0.5, 0.5]));
        assert!(!encloses_point(&c, &shell, [1.5, 0.5, 0.5]));
        assert_eq!(cycle_quads(&c, &shell).unwrap().len(), 6);
    }

    #[test]
    fn ramp_has_no_voids() {
        let g = ScalarGrid::from_fn([4, 3, 3], |i, _, _| i as f64).unwrap();
        let cf = lower_star_filtration(&g, WeightMode::Unit).unwrap();
        let d = compute_pairs(&cf.cubical.complex, &cf.filtration);
        // every cube kills the shell closed just before it, at equal value
        assert_eq!(d.dim(2).len(), 12);
        assert!(cf.persistent_intervals(&d, 2).is_empty());
        assert_eq!(d.dim(0).iter().filter(|i| !i.is_finite()).count(), 1);
    }

    #[test]
    fn distance_field_diagram_matches_ranks() {
        // values grow away from the centre, so sublevel sets are nested boxes
        let g = ScalarGrid::from_fn([5, 5, 5], |i, j, k| {
            let d = |x: usize| (x as f64 - 2.0).abs();
            d(i).max(d(j)).max(d(k)) + 0.01 * (i + 5 * j + 25 * k) as f64 / 125.0
        })
        .unwrap();
        let cf = lower_star_filtration(&g, WeightMode::Unit).unwrap();
        let k = &cf.cubical.complex;
        let f = &cf.filtration;
        let diagram = compute_pairs(k, f);
        for i in [1, f.len() / 3, f.len() / 2, f.len()] {
            let ki = f.partial_complex(k, i).unwrap();
            for q in 0..3 {
                let alive = diagram
                    .dim(q)
                    .iter()
                    .filter(|iv| iv.birth <= i && iv.death > crate::persistence::Death::At(i))
                    .count();
                assert_eq!(alive, oracle::betti(&ki, q), "prefix {i}, dim {q}");
            }
        }
    }

    #[test]
    fn value_weights() {
        let g = ScalarGrid::from_fn([2, 2, 2], |i, j, k| (i + j + k) as f64).unwrap();
        let cf = lower_star_filtration(&g, WeightMode::Value).unwrap();
        let k = &cf.cubical.complex;
        let top = k.cells(2).map(|c| k.weight(c).unwrap()).fold(0.0, f64::max);
        assert_eq!(top, 3.0);
        assert!(k
            .cells(2)
            .all(|c| [2.0, 3.0].contains(&k.weight(c).unwrap())));
    }
}

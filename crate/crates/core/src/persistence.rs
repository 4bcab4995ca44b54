//! Filtrations and the Z2 persistence pairing.
//!
//! Filtration indices are 1-based throughout: `K_i` is the complex formed by
//! the first `i` cells, so `K_0` is empty.

use std::collections::HashMap;
use std::fmt;

use crate::complex::{CellComplex, CellId};
use crate::error::{Error, Result};

/// A total order on the cells of a complex in which every cell follows its faces.
#[derive(Clone, Debug)]
pub struct Filtration {
    order: Vec<CellId>,
    index: Vec<Vec<usize>>,
}

impl Filtration {
    /// Validates `order` against `k` and builds the index map.
    pub fn new(k: &CellComplex, order: Vec<CellId>) -> Result<Self> {
        let mut index: Vec<Vec<usize>> = (0..=k.top_dim().unwrap_or(0))
            .map(|d| vec![0; k.num_cells(d)])
            .collect();
        for (pos, &c) in order.iter().enumerate() {
            if !k.contains(c) {
                return Err(Error::UnknownCell {
                    dim: c.dim,
                    idx: c.idx,
                });
            }
            let slot = &mut index[c.dim][c.idx];
            if *slot != 0 {
                return Err(Error::DuplicateInFiltration(k.vertices(c).to_vec()));
            }
            *slot = pos + 1;
            if c.dim > 0 {
                for &f in k.facets(c) {
                    let fi = index[c.dim - 1][f];
                    if fi == 0 {
                        // either missing entirely or placed later
                        let later = order[pos + 1..]
                            .iter()
                            .position(|&o| o == CellId::new(c.dim - 1, f));
                        return Err(match later {
                            Some(off) => Error::FaceAfterCoface {
                                face: pos + 2 + off,
                                coface: pos + 1,
                            },
                            None => {
                                Error::MissingCell(k.vertices(CellId::new(c.dim - 1, f)).to_vec())
                            }
                        });
                    }
                }
            }
        }
        for (d, row) in index.iter().enumerate() {
            if let Some(i) = row.iter().position(|&x| x == 0) {
                return Err(Error::MissingCell(k.vertices(CellId::new(d, i)).to_vec()));
            }
        }
        Ok(Filtration { order, index })
    }

    /// Builds a filtration from vertex lists given in order.
    pub fn from_vertex_lists<V: AsRef<[usize]>>(k: &CellComplex, cells: &[V]) -> Result<Self> {
        let order = cells
            .iter()
            .map(|v| {
                k.find(v.as_ref())
                    .ok_or_else(|| Error::MissingCell(v.as_ref().to_vec()))
            })
            .collect::<Result<Vec<_>>>()?;
        Filtration::new(k, order)
    }

    /// Cells in insertion order (dimension-major order is also valid).
    pub fn insertion_order(k: &CellComplex) -> Self {
        Filtration::new(k, k.iter().collect()).expect("dimension-major order is always valid")
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// The cell at 1-based position `i`.
    pub fn cell(&self, i: usize) -> CellId {
        self.order[i - 1]
    }

    pub fn try_cell(&self, i: usize) -> Result<CellId> {
        if i == 0 || i > self.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.len(),
            });
        }
        Ok(self.cell(i))
    }

    /// 1-based index of a cell.
    pub fn index_of(&self, c: CellId) -> usize {
        self.index[c.dim][c.idx]
    }

    pub fn order(&self) -> &[CellId] {
        &self.order
    }

    /// The partial complex `K_i`.
    pub fn partial_complex(&self, k: &CellComplex, i: usize) -> Result<CellComplex> {
        if i > self.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.len(),
            });
        }
        Ok(k.restrict(&self.prefix_mask(i)))
    }

    /// Marks the cells with index at most `i`.
    pub fn prefix_mask(&self, i: usize) -> Vec<Vec<bool>> {
        self.index
            .iter()
            .map(|row| row.iter().map(|&x| x <= i).collect())
            .collect()
    }
}

/// Death index of an interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Death {
    At(usize),
    Never,
}

impl fmt::Display for Death {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Death::At(i) => write!(f, "{i}"),
            Death::Never => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    pub dim: usize,
    pub birth: usize,
    pub death: Death,
}

impl Interval {
    pub fn finite(dim: usize, birth: usize, death: usize) -> Self {
        Interval {
            dim,
            birth,
            death: Death::At(death),
        }
    }

    pub fn infinite(dim: usize, birth: usize) -> Self {
        Interval {
            dim,
            birth,
            death: Death::Never,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.death, Death::At(_))
    }

    /// Length in filtration steps; `None` for infinite intervals.
    pub fn length(&self) -> Option<usize> {
        match self.death {
            Death::At(d) => Some(d - self.birth),
            Death::Never => None,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.birth, self.death)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Diagram {
    by_dim: Vec<Vec<Interval>>,
}

impl Diagram {
    /// Intervals of dimension `q`, sorted by birth.
    pub fn dim(&self, q: usize) -> &[Interval] {
        self.by_dim.get(q).map_or(&[], Vec::as_slice)
    }

    pub fn max_dim(&self) -> usize {
        self.by_dim.len().saturating_sub(1)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Interval> {
        self.by_dim.iter().flatten()
    }

    pub fn contains(&self, iv: &Interval) -> bool {
        self.dim(iv.dim)
            .binary_search_by(|x| x.birth.cmp(&iv.birth))
            .is_ok_and(|p| self.dim(iv.dim)[p] == *iv)
    }

    /// Errors unless `iv` is one of the diagram's intervals.
    pub fn require(&self, iv: &Interval) -> Result<()> {
        if self.contains(iv) {
            Ok(())
        } else {
            Err(Error::IntervalNotInDiagram {
                dim: iv.dim,
                birth: iv.birth,
                death: iv.death.to_string(),
            })
        }
    }

    /// The interval born at index `birth`, if any.
    pub fn born_at(&self, q: usize, birth: usize) -> Option<Interval> {
        let v = self.dim(q);
        v.binary_search_by(|x| x.birth.cmp(&birth))
            .ok()
            .map(|p| v[p])
    }

    fn from_intervals(mut all: Vec<Interval>) -> Self {
        let top = all.iter().map(|i| i.dim).max();
        let mut by_dim = vec![Vec::new(); top.map_or(0, |t| t + 1)];
        all.sort();
        for iv in all {
            by_dim[iv.dim].push(iv);
        }
        Diagram { by_dim }
    }
}

fn boundary_columns(k: &CellComplex, f: &Filtration) -> Vec<Vec<usize>> {
    f.order()
        .iter()
        .map(|&c| {
            if c.dim == 0 {
                return Vec::new();
            }
            let mut col: Vec<usize> = k
                .facets(c)
                .iter()
                .map(|&g| f.index_of(CellId::new(c.dim - 1, g)))
                .collect();
            col.sort_unstable();
            col
        })
        .collect()
}

fn add_sorted(a: &[usize], b: &[usize], out: &mut Vec<usize>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
}

/// Pairs of (positive index, negative index), both 1-based.
fn reduce(cols: &mut [Vec<usize>], dims: &[usize], clearing: bool) -> Vec<(usize, usize)> {
    let n = cols.len();
    let mut low_owner: HashMap<usize, usize> = HashMap::new();
    let mut pairs = Vec::new();
    let mut scratch = Vec::new();
    let mut cleared = vec![false; n];
    let top = dims.iter().copied().max().unwrap_or(0);
    let order: Vec<usize> = if clearing {
        (1..=top)
            .rev()
            .flat_map(|d| (0..n).filter(move |&j| dims[j] == d))
            .collect()
    } else {
        (0..n).collect()
    };
    for j in order {
        if cleared[j] {
            cols[j].clear();
            continue;
        }
        while let Some(&low) = cols[j].last() {
            match low_owner.get(&low) {
                Some(&other) => {
                    add_sorted(&cols[j], &cols[other], &mut scratch);
                    std::mem::swap(&mut cols[j], &mut scratch);
                }
                None => break,
            }
        }
        if let Some(&low) = cols[j].last() {
            low_owner.insert(low, j);
            pairs.push((low, j + 1));
            if clearing {
                cleared[low - 1] = true;
            }
        }
    }
    pairs
}

fn pairs_to_diagram(f: &Filtration, pairs: &[(usize, usize)]) -> Diagram {
    let mut paired = vec![false; f.len() + 1];
    let mut out = Vec::with_capacity(f.len());
    for &(b, d) in pairs {
        paired[b] = true;
        paired[d] = true;
        out.push(Interval::finite(f.cell(b).dim, b, d));
    }
    for i in 1..=f.len() {
        if !paired[i] {
            out.push(Interval::infinite(f.cell(i).dim, i));
        }
    }
    Diagram::from_intervals(out)
}

/// Persistence diagram of `f` by column reduction (with clearing).
///
/// Zero-length intervals never occur since indices are distinct.
pub fn compute_pairs(k: &CellComplex, f: &Filtration) -> Diagram {
    let mut cols = boundary_columns(k, f);
    let dims: Vec<usize> = f.order().iter().map(|c| c.dim).collect();
    let pairs = reduce(&mut cols, &dims, true);
    pairs_to_diagram(f, &pairs)
}

/// Persistence diagram by the plain left-to-right column algorithm.
pub fn compute_pairs_plain(k: &CellComplex, f: &Filtration) -> Diagram {
    let mut cols = boundary_columns(k, f);
    let dims: Vec<usize> = f.order().iter().map(|c| c.dim).collect();
    let pairs = reduce(&mut cols, &dims, false);
    pairs_to_diagram(f, &pairs)
}

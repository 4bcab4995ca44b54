//! Weighted cell complexes with facet and coface incidence.
//!
//! Cells are keyed by their sorted vertex list. Simplicial complexes derive the
//! facets of a cell by dropping one vertex at a time; cubical complexes supply
//! facets explicitly (see [`crate::cubical`]). Coface lists are kept one
//! dimension up only.
//!
//! Sub-complexes (closures, prefixes, pruned complexes) are materialized as new
//! `CellComplex` values that remember, for each cell, the id of the same cell
//! in the root complex they were carved from.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::unionfind::UnionFind;

/// A cell identified by its dimension and its index within that dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellId {
    pub dim: usize,
    pub idx: usize,
}

impl CellId {
    pub fn new(dim: usize, idx: usize) -> Self {
        CellId { dim, idx }
    }
}

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.dim, self.idx)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellKind {
    Simplicial,
    Cubical,
}

#[derive(Clone, Debug, Default)]
struct Layer {
    vertices: Vec<Box<[usize]>>,
    /// Vertex key -> index, built on first use; complete once built.
    lookup: OnceLock<HashMap<Box<[usize]>, usize>>,
    facets: Vec<Box<[usize]>>,
    cofaces: Vec<Vec<usize>>,
    weights: Vec<Option<f64>>,
    origin: Vec<usize>,
}

impl Layer {
    fn len(&self) -> usize {
        self.vertices.len()
    }

    fn lookup(&self) -> &HashMap<Box<[usize]>, usize> {
        self.lookup.get_or_init(|| {
            self.vertices
                .iter()
                .enumerate()
                .map(|(i, v)| (v.clone(), i))
                .collect()
        })
    }

    fn reserve(&mut self, n: usize) {
        self.vertices.reserve(n);
        self.facets.reserve(n);
        self.cofaces.reserve(n);
        self.weights.reserve(n);
        self.origin.reserve(n);
    }
}

#[derive(Clone, Debug)]
pub struct CellComplex {
    kind: CellKind,
    layers: Vec<Layer>,
}

fn check_weight(w: Option<f64>) -> Result<()> {
    match w {
        Some(w) if !(w.is_finite() && w >= 0.0) => Err(Error::NegativeWeight(w)),
        _ => Ok(()),
    }
}

impl CellComplex {
    pub fn new_simplicial() -> Self {
        CellComplex {
            kind: CellKind::Simplicial,
            layers: Vec::new(),
        }
    }

    pub fn new_cubical() -> Self {
        CellComplex {
            kind: CellKind::Cubical,
            layers: Vec::new(),
        }
    }

    fn empty_like(&self) -> Self {
        CellComplex {
            kind: self.kind,
            layers: Vec::new(),
        }
    }

    pub fn kind(&self) -> CellKind {
        self.kind
    }

    fn layer_mut(&mut self, dim: usize) -> &mut Layer {
        while self.layers.len() <= dim {
            self.layers.push(Layer::default());
        }
        &mut self.layers[dim]
    }

    /// Inserts a simplex given by its vertices (in any order).
    ///
    /// All facets must already be present. Vertices are stored sorted, so
    /// `{2,1}` and `{1,2}` name the same cell.
    pub fn add_cell(&mut self, vertices: &[usize], weight: Option<f64>) -> Result<CellId> {
        let mut key = vertices.to_vec();
        key.sort_unstable();
        if key.is_empty() || key.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidCell(vertices.to_vec()));
        }
        let dim = key.len() - 1;
        if dim > 0 && self.kind == CellKind::Cubical {
            return Err(Error::WrongCellKind {
                expected: "simplicial",
            });
        }
        check_weight(weight)?;
        if self.find(&key).is_some() {
            return Err(Error::DuplicateCell(key));
        }
        let mut facets = Vec::with_capacity(key.len());
        if dim > 0 {
            let mut face = Vec::with_capacity(dim);
            for skip in 0..key.len() {
                face.clear();
                face.extend(
                    key.iter()
                        .enumerate()
                        .filter(|&(i, _)| i != skip)
                        .map(|(_, &v)| v),
                );
                match self
                    .layers
                    .get(dim - 1)
                    .and_then(|l| l.lookup().get(face.as_slice()))
                {
                    Some(&f) => facets.push(f),
                    None => {
                        return Err(Error::MissingFace {
                            vertices: key.clone(),
                            face: face.clone(),
                        })
                    }
                }
            }
        }
        Ok(self.push_cell(dim, key, facets, weight, None))
    }

    /// Inserts a cell with explicitly given facets (indices into dimension `dim - 1`).
    ///
    /// Used for cubical cells, whose facets cannot be derived from the vertex
    /// set alone.
    pub fn add_cell_with_facets(
        &mut self,
        dim: usize,
        vertices: &[usize],
        facets: &[usize],
        weight: Option<f64>,
    ) -> Result<CellId> {
        let mut key = vertices.to_vec();
        key.sort_unstable();
        if key.is_empty() || key.windows(2).any(|w| w[0] == w[1]) || (dim == 0) != facets.is_empty()
        {
            return Err(Error::InvalidCell(vertices.to_vec()));
        }
        check_weight(weight)?;
        if self.find(&key).is_some() {
            return Err(Error::DuplicateCell(key));
        }
        if dim > 0 {
            let below = self.layers.get(dim - 1).map_or(0, Layer::len);
            for &f in facets {
                if f >= below {
                    return Err(Error::UnknownCell {
                        dim: dim - 1,
                        idx: f,
                    });
                }
                let fv = &self.layers[dim - 1].vertices[f];
                if !fv.iter().all(|v| key.binary_search(v).is_ok()) {
                    return Err(Error::NotAFace {
                        cell: key.clone(),
                        face: fv.to_vec(),
                    });
                }
            }
        }
        Ok(self.push_cell(dim, key, facets.to_vec(), weight, None))
    }

    fn push_cell(
        &mut self,
        dim: usize,
        key: Vec<usize>,
        facets: Vec<usize>,
        weight: Option<f64>,
        origin: Option<usize>,
    ) -> CellId {
        let layer = self.layer_mut(dim);
        let idx = layer.len();
        let key: Box<[usize]> = key.into_boxed_slice();
        if let Some(m) = layer.lookup.get_mut() {
            m.insert(key.clone(), idx);
        }
        layer.vertices.push(key);
        layer.cofaces.push(Vec::new());
        layer.weights.push(weight);
        layer.origin.push(origin.unwrap_or(idx));
        if dim > 0 {
            for &f in &facets {
                self.layers[dim - 1].cofaces[f].push(idx);
            }
        }
        self.layers[dim].facets.push(facets.into_boxed_slice());
        CellId { dim, idx }
    }

    pub fn set_weight(&mut self, id: CellId, weight: Option<f64>) -> Result<()> {
        self.check(id)?;
        check_weight(weight)?;
        self.layers[id.dim].weights[id.idx] = weight;
        Ok(())
    }

    fn check(&self, id: CellId) -> Result<()> {
        if self.contains(id) {
            Ok(())
        } else {
            Err(Error::UnknownCell {
                dim: id.dim,
                idx: id.idx,
            })
        }
    }

    pub fn contains(&self, id: CellId) -> bool {
        self.layers.get(id.dim).is_some_and(|l| id.idx < l.len())
    }

    /// Highest dimension holding at least one cell.
    pub fn top_dim(&self) -> Option<usize> {
        self.layers.iter().rposition(|l| l.len() > 0)
    }

    pub fn num_cells(&self, dim: usize) -> usize {
        self.layers.get(dim).map_or(0, Layer::len)
    }

    pub fn len(&self) -> usize {
        self.layers.iter().map(Layer::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cells(&self, dim: usize) -> impl Iterator<Item = CellId> + '_ {
        (0..self.num_cells(dim)).map(move |idx| CellId { dim, idx })
    }

    /// All cells, in increasing dimension.
    pub fn iter(&self) -> impl Iterator<Item = CellId> + '_ {
        (0..self.layers.len()).flat_map(move |d| self.cells(d))
    }

    pub fn vertices(&self, id: CellId) -> &[usize] {
        &self.layers[id.dim].vertices[id.idx]
    }

    /// Facet indices (into dimension `id.dim - 1`). For simplices, facet `i`
    /// omits vertex `i`.
    pub fn facets(&self, id: CellId) -> &[usize] {
        &self.layers[id.dim].facets[id.idx]
    }

    /// Coface indices (into dimension `id.dim + 1`).
    pub fn cofaces(&self, id: CellId) -> &[usize] {
        &self.layers[id.dim].cofaces[id.idx]
    }

    pub fn weight(&self, id: CellId) -> Option<f64> {
        self.layers[id.dim].weights[id.idx]
    }

    pub fn require_weight(&self, id: CellId) -> Result<f64> {
        self.weight(id)
            .ok_or_else(|| Error::MissingWeight(self.vertices(id).to_vec()))
    }

    /// Looks a cell up by its vertices (any order).
    pub fn find(&self, vertices: &[usize]) -> Option<CellId> {
        let dim = self.dim_of_key(vertices.len())?;
        let layer = self.layers.get(dim)?;
        let idx = if vertices.windows(2).all(|w| w[0] < w[1]) {
            layer.lookup().get(vertices)
        } else {
            let mut key = vertices.to_vec();
            key.sort_unstable();
            layer.lookup().get(key.as_slice())
        };
        idx.map(|&idx| CellId { dim, idx })
    }

    fn dim_of_key(&self, n: usize) -> Option<usize> {
        match self.kind {
            CellKind::Simplicial => n.checked_sub(1),
            CellKind::Cubical if n.is_power_of_two() => Some(n.trailing_zeros() as usize),
            CellKind::Cubical => None,
        }
    }

    /// Id of this cell in the root complex this one was carved from.
    pub fn origin(&self, id: CellId) -> CellId {
        CellId {
            dim: id.dim,
            idx: self.layers[id.dim].origin[id.idx],
        }
    }

    /// True if every origin id is the cell's own id.
    pub fn is_root(&self) -> bool {
        self.layers
            .iter()
            .all(|l| l.origin.iter().enumerate().all(|(i, &o)| i == o))
    }

    /// A copy of this complex that is its own root.
    pub fn rebased(&self) -> CellComplex {
        let mut out = self.clone();
        for l in &mut out.layers {
            for (i, o) in l.origin.iter_mut().enumerate() {
                *o = i;
            }
        }
        out
    }

    /// Z2 boundary of a chain of this complex.
    pub fn boundary_chain(&self, chain: &Chain) -> Result<Chain> {
        if chain.dim() == 0 {
            return Err(Error::DimZero);
        }
        let mut out = Chain::zero(chain.dim() - 1);
        for idx in chain.iter() {
            let id = CellId::new(chain.dim(), idx);
            self.check(id)?;
            for &f in self.facets(id) {
                out.toggle(f);
            }
        }
        Ok(out)
    }

    /// Partition of the q-cells into q-connected components (cells sharing a
    /// (q-1)-face are joined).
    pub fn q_connected_components(&self, q: usize) -> Vec<Vec<usize>> {
        let n = self.num_cells(q);
        if n == 0 || q == 0 {
            return (0..n).map(|i| vec![i]).collect();
        }
        let mut uf = UnionFind::new(n);
        for tau in self.cells(q - 1) {
            let cof = self.cofaces(tau);
            for w in cof.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        uf.groups(|_| true)
    }

    /// The q-connected component containing the q-cell `seed`.
    pub fn q_component_of(&self, seed: CellId) -> Vec<usize> {
        let q = seed.dim;
        let mut seen = vec![false; self.num_cells(q)];
        let mut out = Vec::new();
        let mut queue = VecDeque::from([seed.idx]);
        seen[seed.idx] = true;
        while let Some(s) = queue.pop_front() {
            out.push(s);
            if q == 0 {
                break;
            }
            for &f in self.facets(CellId::new(q, s)) {
                for &t in self.cofaces(CellId::new(q - 1, f)) {
                    if !seen[t] {
                        seen[t] = true;
                        queue.push_back(t);
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Marks every face of the given cells (including the cells themselves).
    pub fn face_closure_mask(&self, cells: impl IntoIterator<Item = CellId>) -> Vec<Vec<bool>> {
        let mut mask: Vec<Vec<bool>> = self.layers.iter().map(|l| vec![false; l.len()]).collect();
        let mut stack: Vec<CellId> = Vec::new();
        for c in cells {
            if !mask[c.dim][c.idx] {
                mask[c.dim][c.idx] = true;
                stack.push(c);
            }
        }
        while let Some(c) = stack.pop() {
            if c.dim == 0 {
                continue;
            }
            for &f in self.facets(c) {
                if !mask[c.dim - 1][f] {
                    mask[c.dim - 1][f] = true;
                    stack.push(CellId::new(c.dim - 1, f));
                }
            }
        }
        mask
    }

    /// Materializes the sub-complex made of the masked cells.
    ///
    /// The mask must be closed under taking faces. Weights are inherited and
    /// origins point to the same root complex as `self`.
    pub fn restrict(&self, mask: &[Vec<bool>]) -> CellComplex {
        let mut out = self.empty_like();
        let mut remap: Vec<Vec<usize>> = Vec::with_capacity(self.layers.len());
        for (dim, layer) in self.layers.iter().enumerate() {
            let mut map = vec![usize::MAX; layer.len()];
            let keep = mask.get(dim);
            let count = keep.map_or(0, |m| m.iter().filter(|&&b| b).count());
            out.layer_mut(dim).reserve(count);
            for idx in 0..layer.len() {
                if !keep.is_some_and(|m| m[idx]) {
                    continue;
                }
                let facets: Vec<usize> = if dim == 0 {
                    Vec::new()
                } else {
                    layer.facets[idx]
                        .iter()
                        .map(|&f| {
                            let g = remap[dim - 1][f];
                            debug_assert!(g != usize::MAX, "restrict: mask not closed under faces");
                            g
                        })
                        .collect()
                };
                let id = out.push_cell(
                    dim,
                    layer.vertices[idx].to_vec(),
                    facets,
                    layer.weights[idx],
                    Some(layer.origin[idx]),
                );
                map[idx] = id.idx;
            }
            remap.push(map);
        }
        out
    }

    /// Smallest sub-complex containing the given cells.
    pub fn closure(&self, cells: &[CellId]) -> CellComplex {
        let mask = self.face_closure_mask(cells.iter().copied());
        self.restrict(&mask)
    }

    /// True iff every d-cell has at most two (d+1)-cofaces.
    pub fn is_weak_pseudomanifold(&self, d: usize) -> bool {
        self.first_pseudomanifold_violation(d).is_none()
    }

    pub(crate) fn first_pseudomanifold_violation(&self, d: usize) -> Option<CellId> {
        self.cells(d).find(|&c| self.cofaces(c).len() > 2)
    }

    pub(crate) fn require_weak_pseudomanifold(&self, d: usize) -> Result<()> {
        match self.first_pseudomanifold_violation(d) {
            None => Ok(()),
            Some(c) => Err(Error::NotWeakPseudomanifold {
                cell: self.vertices(c).to_vec(),
                cofaces: self.cofaces(c).len(),
            }),
        }
    }

    /// Repeatedly removes d-cells having a (d-1)-face of which they are the
    /// only d-coface, until none is left.
    ///
    /// Higher cofaces of a removed cell are removed with it. Cells of
    /// dimension below d are kept. The rule only inspects (d-1)-faces, so it
    /// is defined on any complex, weak pseudomanifold or not.
    pub fn prune(&self, d: usize) -> CellComplex {
        let mut alive: Vec<Vec<bool>> = self.layers.iter().map(|l| vec![true; l.len()]).collect();
        if d == 0 || self.num_cells(d) == 0 {
            return self.restrict(&alive);
        }
        let mut count: Vec<usize> = self.cells(d - 1).map(|t| self.cofaces(t).len()).collect();
        let mut queue: Vec<usize> = (0..count.len()).filter(|&t| count[t] == 1).collect();
        while let Some(t) = queue.pop() {
            if count[t] != 1 {
                continue;
            }
            let Some(&s) = self
                .cofaces(CellId::new(d - 1, t))
                .iter()
                .find(|&&s| alive[d][s])
            else {
                continue;
            };
            self.kill_upward(CellId::new(d, s), &mut alive);
            for &f in self.facets(CellId::new(d, s)) {
                count[f] -= 1;
                if count[f] == 1 {
                    queue.push(f);
                }
            }
        }
        self.restrict(&alive)
    }

    fn kill_upward(&self, id: CellId, alive: &mut [Vec<bool>]) {
        let mut stack = vec![id];
        while let Some(c) = stack.pop() {
            if !alive[c.dim][c.idx] {
                continue;
            }
            alive[c.dim][c.idx] = false;
            if c.dim + 1 < self.layers.len() {
                for &u in self.cofaces(c) {
                    if alive[c.dim + 1][u] {
                        stack.push(CellId::new(c.dim + 1, u));
                    }
                }
            }
        }
    }

    /// Translates a chain of this complex into root-complex ids.
    pub fn chain_to_origin(&self, chain: &Chain) -> Chain {
        Chain::from_cells(
            chain.dim(),
            chain
                .iter()
                .map(|i| self.origin(CellId::new(chain.dim(), i)).idx),
        )
    }

    /// Translates a root-complex chain into ids of this complex, if every cell is present.
    pub fn chain_from_root(&self, root: &CellComplex, chain: &Chain) -> Result<Chain> {
        let mut out = Chain::zero(chain.dim());
        for i in chain.iter() {
            let v = root.vertices(CellId::new(chain.dim(), i));
            match self.find(v) {
                Some(id) => out.toggle(id.idx),
                None => return Err(Error::ChainNotInComplex(v.to_vec())),
            }
        }
        Ok(out)
    }

    /// Vertex lists of the chain's cells, sorted.
    pub fn chain_vertices(&self, chain: &Chain) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = chain
            .iter()
            .map(|i| self.vertices(CellId::new(chain.dim(), i)).to_vec())
            .collect();
        out.sort();
        out
    }

    /// Sum of the weights of the chain's cells.
    pub fn chain_weight(&self, chain: &Chain) -> Result<f64> {
        chain
            .iter()
            .map(|i| self.require_weight(CellId::new(chain.dim(), i)))
            .sum()
    }
}

/// A Z2 chain: a set of cells of one dimension.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Chain {
    dim: usize,
    cells: BTreeSet<usize>,
}

impl Chain {
    pub fn zero(dim: usize) -> Self {
        Chain {
            dim,
            cells: BTreeSet::new(),
        }
    }

    /// Builds a chain, cancelling repeated cells mod 2.
    pub fn from_cells(dim: usize, cells: impl IntoIterator<Item = usize>) -> Self {
        let mut c = Chain::zero(dim);
        for i in cells {
            c.toggle(i);
        }
        c
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, idx: usize) -> bool {
        self.cells.contains(&idx)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.cells.iter().copied()
    }

    pub fn toggle(&mut self, idx: usize) {
        if !self.cells.remove(&idx) {
            self.cells.insert(idx);
        }
    }

    /// Z2 sum (symmetric difference).
    pub fn add(&self, other: &Chain) -> Chain {
        assert_eq!(self.dim, other.dim, "adding chains of different dimensions");
        Chain {
            dim: self.dim,
            cells: self
                .cells
                .symmetric_difference(&other.cells)
                .copied()
                .collect(),
        }
    }

    pub fn is_subset(&self, other: &Chain) -> bool {
        self.dim == other.dim && self.cells.is_subset(&other.cells)
    }
}

impl std::ops::Add for &Chain {
    type Output = Chain;
    fn add(self, rhs: &Chain) -> Chain {
        Chain::add(self, rhs)
    }
}

impl FromIterator<CellId> for Chain {
    /// Collects cells of a single dimension; panics on mixed dimensions.
    fn from_iter<I: IntoIterator<Item = CellId>>(iter: I) -> Self {
        let mut iter = iter.into_iter().peekable();
        let dim = iter.peek().map_or(0, |c| c.dim);
        Chain::from_cells(
            dim,
            iter.map(|c| {
                assert_eq!(c.dim, dim, "mixed dimensions in chain");
                c.idx
            }),
        )
    }
}

//! Reconstruction of void boundaries of an embedded complex.
//!
//! A d-cell with fewer than two (d+1)-cofaces has one or two free sides, each
//! recorded as an oriented cell facing the void on that side. Around every
//! (d−1)-cell, consecutive cofaces enclosing an empty sector face the same
//! void; pairing them at every (d−1)-cell and closing transitively yields one
//! group per void.

use std::collections::BTreeMap;

use crate::complex::{CellComplex, CellId, Chain};
use crate::error::{Error, Result};
use crate::geometry::{angular_order_cofaces, EmbeddedComplex, OrientedCell, Sector};
use crate::mincut::FlowNetwork;
use crate::unionfind::UnionFind;

/// Oriented d-cells bounding one void.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VoidBoundary {
    pub cells: Vec<OrientedCell>,
}

fn node(oc: OrientedCell) -> usize {
    2 * oc.cell + usize::from(oc.positive)
}

fn unnode(n: usize) -> OrientedCell {
    OrientedCell::new(n / 2, n % 2 == 1)
}

/// Pairs of oriented boundary d-cells facing a common empty sector around
/// the (d−1)-cell `tau`.
pub fn pair_oriented_boundary_cells(
    ec: &EmbeddedComplex,
    tau: CellId,
) -> Result<Vec<(OrientedCell, OrientedCell)>> {
    let ord = angular_order_cofaces(ec, tau)?;
    let d = tau.dim + 1;
    if let [s] = ord.cofaces[..] {
        return Ok(vec![(
            OrientedCell::new(s, true),
            OrientedCell::new(s, false),
        )]);
    }
    let m = ord.cofaces.len();
    let mut out = Vec::new();
    for i in 0..m {
        if ord.sectors[i] != Sector::Void {
            continue;
        }
        let p = ord.sector_point(i);
        let (a, b) = (ord.cofaces[i], ord.cofaces[(i + 1) % m]);
        let oa = ec.orientation_facing(CellId::new(d, a), &p)?;
        let ob = ec.orientation_facing(CellId::new(d, b), &p)?;
        out.push((OrientedCell::new(a, oa), OrientedCell::new(b, ob)));
    }
    Ok(out)
}

/// Oriented d-cells of `ec` that face no (d+1)-cell.
pub fn free_oriented_cells(ec: &EmbeddedComplex, d: usize) -> Result<Vec<OrientedCell>> {
    let k = &ec.complex;
    let mut out = Vec::new();
    for s in k.cells(d) {
        match k.cofaces(s) {
            [] => {
                out.push(OrientedCell::new(s.idx, true));
                out.push(OrientedCell::new(s.idx, false));
            }
            [rho] => {
                let inward = ec.orientation_facing(s, &ec.centroid(CellId::new(d + 1, *rho)))?;
                out.push(OrientedCell::new(s.idx, !inward));
            }
            _ => {}
        }
    }
    Ok(out)
}

/// Groups the oriented boundary d-cells of `ec` by the void they bound.
///
/// Meaningful for d-connected complexes; otherwise nested components are not
/// related to each other and each contributes its own groups.
pub fn void_boundaries(ec: &EmbeddedComplex, d: usize) -> Result<Vec<VoidBoundary>> {
    if d == 0 {
        return Err(Error::DimensionTooLow(0));
    }
    if ec.ambient_dim() != d + 1 {
        return Err(Error::NotEmbedded(format!(
            "{d}-cells need ambient dimension {}, got {}",
            d + 1,
            ec.ambient_dim()
        )));
    }
    let k = &ec.complex;
    k.require_weak_pseudomanifold(d)?;
    let n = k.num_cells(d);
    let mut free = vec![false; 2 * n];
    for oc in free_oriented_cells(ec, d)? {
        free[node(oc)] = true;
    }
    let mut hits = vec![0usize; 2 * n];
    let mut uf = UnionFind::new(2 * n);
    let mut seen_here = vec![usize::MAX; 2 * n];
    for tau in k.cells(d - 1) {
        let cof = k.cofaces(tau);
        if cof.iter().all(|&s| k.cofaces(CellId::new(d, s)).len() == 2) {
            continue;
        }
        for (a, b) in pair_oriented_boundary_cells(ec, tau)? {
            for x in [node(a), node(b)] {
                if !free[x] || seen_here[x] == tau.idx {
                    return Err(Error::InconsistentBoundaries(k.vertices(tau).to_vec()));
                }
                seen_here[x] = tau.idx;
                hits[x] += 1;
            }
            uf.union(node(a), node(b));
        }
    }
    for x in 0..2 * n {
        if free[x] && hits[x] != k.facets(CellId::new(d, x / 2)).len() {
            return Err(Error::InconsistentBoundaries(
                k.vertices(CellId::new(d, x / 2)).to_vec(),
            ));
        }
    }
    Ok(uf
        .groups(|x| free[x])
        .into_iter()
        .map(|g| VoidBoundary {
            cells: g.into_iter().map(unnode).collect(),
        })
        .collect())
}

/// Integer boundary of a sum of oriented d-cells; only non-zero entries are kept.
pub fn integer_boundary(
    ec: &EmbeddedComplex,
    d: usize,
    cells: &[OrientedCell],
) -> BTreeMap<usize, i64> {
    let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
    for &oc in cells {
        for (f, s) in ec.signed_facets(oc, d) {
            *acc.entry(f).or_default() += s;
        }
    }
    acc.retain(|_, v| *v != 0);
    acc
}

/// Dual graph over (d+1)-cells and voids.
///
/// Vertex `i < num_top` is dual to the (d+1)-cell `i`; vertex `num_top + j`
/// to void `j`. Edge `e` is dual to the d-cell `e`, with its weight as capacity.
#[derive(Clone, Debug)]
pub struct DualGraphInf {
    pub network: FlowNetwork,
    pub num_top: usize,
    pub num_voids: usize,
    pub d: usize,
}

impl DualGraphInf {
    pub fn endpoints(&self, edge: usize) -> (usize, usize) {
        let (u, v, _) = self.network.edge(edge);
        (u, v)
    }

    pub fn is_void_vertex(&self, v: usize) -> bool {
        v >= self.num_top
    }
}

pub fn dual_graph_inf(
    ec: &EmbeddedComplex,
    d: usize,
    boundaries: &[VoidBoundary],
) -> Result<DualGraphInf> {
    let k = &ec.complex;
    let num_top = k.num_cells(d + 1);
    let mut group = vec![usize::MAX; 2 * k.num_cells(d)];
    for (j, b) in boundaries.iter().enumerate() {
        for &oc in &b.cells {
            group[node(oc)] = num_top + j;
        }
    }
    let void_of = |oc: OrientedCell| -> Result<usize> {
        match group[node(oc)] {
            usize::MAX => Err(Error::InconsistentBoundaries(
                k.vertices(CellId::new(d, oc.cell)).to_vec(),
            )),
            g => Ok(g),
        }
    };
    let mut network = FlowNetwork::new(num_top + boundaries.len());
    for s in k.cells(d) {
        let (u, v) = match k.cofaces(s) {
            [a, b] => (*a, *b),
            [a] => {
                let inward = ec.orientation_facing(s, &ec.centroid(CellId::new(d + 1, *a)))?;
                (*a, void_of(OrientedCell::new(s.idx, !inward))?)
            }
            [] => (
                void_of(OrientedCell::new(s.idx, true))?,
                void_of(OrientedCell::new(s.idx, false))?,
            ),
            _ => {
                return Err(Error::NotWeakPseudomanifold {
                    cell: k.vertices(s).to_vec(),
                    cofaces: k.cofaces(s).len(),
                })
            }
        };
        network.add_edge(u, v, k.weight(s).unwrap_or(0.0));
    }
    Ok(DualGraphInf {
        network,
        num_top,
        num_voids: boundaries.len(),
        d,
    })
}

/// The part of the d-cycle `zeta` reachable from its cell `sigma` when the
/// cells of `zeta` around every (d−1)-cell are paired up arbitrarily.
///
/// The result is itself a cycle, contains `sigma` and is contained in `zeta`.
pub fn connected_subcycle(k: &CellComplex, zeta: &Chain, sigma: usize) -> Result<Chain> {
    let d = zeta.dim();
    if d == 0 {
        return Err(Error::DimZero);
    }
    if !zeta.contains(sigma) {
        return Err(Error::ChainNotInComplex(
            k.vertices(CellId::new(d, sigma)).to_vec(),
        ));
    }
    let cells: Vec<usize> = zeta.iter().collect();
    let slot: BTreeMap<usize, usize> = cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut around: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &c) in cells.iter().enumerate() {
        for &t in k.facets(CellId::new(d, c)) {
            around.entry(t).or_default().push(i);
        }
    }
    let mut uf = UnionFind::new(cells.len());
    for (t, members) in around {
        if members.len() % 2 == 1 {
            return Err(Error::NoCycleThroughSimplex(
                k.vertices(CellId::new(d - 1, t)).to_vec(),
            ));
        }
        for pair in members.chunks(2) {
            uf.union(pair[0], pair[1]);
        }
    }
    let root = uf.find(slot[&sigma]);
    Ok(Chain::from_cells(
        d,
        (0..cells.len())
            .filter(|&i| uf.find(i) == root)
            .map(|i| cells[i]),
    ))
}

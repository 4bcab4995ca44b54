//! Minimal persistent cycles of finite intervals on weak (d+1)-pseudomanifolds.
//!
//! The working complex is the closure of the (d+1)-connected component that
//! holds the death cell. Its dual graph has one vertex per (d+1)-cell, plus an
//! extra vertex `phi` standing for the outside when some d-cell has fewer than
//! two cofaces, and one edge per d-cell. d-cells born after the interval's
//! birth get infinite capacity; the death cell's vertex is the source and
//! every vertex born after the death, along with `phi`, is a sink.

use std::borrow::Cow;

use crate::complex::{CellComplex, CellId, Chain};
use crate::error::{Error, Result};
use crate::mincut::{self, FlowNetwork, INF};
use crate::persistence::{compute_pairs, Death, Diagram, Filtration, Interval};
use crate::PersistentCycle;

pub(crate) fn rooted(k: &CellComplex) -> Cow<'_, CellComplex> {
    if k.is_root() {
        Cow::Borrowed(k)
    } else {
        Cow::Owned(k.rebased())
    }
}

/// Dual graph of a weak (d+1)-pseudomanifold.
///
/// Vertex `i < num_top` is dual to the (d+1)-cell with index `i`; `phi`, if
/// present, is the last vertex. Edge `e` is dual to the d-cell with index `e`.
#[derive(Clone, Debug)]
pub struct DualGraphFin {
    pub network: FlowNetwork,
    pub phi: Option<usize>,
    pub num_top: usize,
    pub d: usize,
}

impl DualGraphFin {
    pub fn endpoints(&self, edge: usize) -> (usize, usize) {
        let (u, v, _) = self.network.edge(edge);
        (u, v)
    }
}

/// Builds the dual graph with all capacities zero.
pub fn dual_graph_fin(kt: &CellComplex, d: usize) -> Result<DualGraphFin> {
    kt.require_weak_pseudomanifold(d)?;
    let num_top = kt.num_cells(d + 1);
    let needs_phi = kt.cells(d).any(|c| kt.cofaces(c).len() < 2);
    let phi = needs_phi.then_some(num_top);
    let mut network = FlowNetwork::new(num_top + usize::from(needs_phi));
    for c in kt.cells(d) {
        let cof = kt.cofaces(c);
        let u = cof.first().copied().unwrap_or(num_top);
        let v = cof.get(1).copied().unwrap_or(num_top);
        network.add_edge(u, v, 0.0);
    }
    Ok(DualGraphFin {
        network,
        phi,
        num_top,
        d,
    })
}

/// The flow network for one finite interval, before solving.
#[derive(Clone, Debug)]
pub struct FinNetwork {
    /// Working complex; its origin ids refer to the input complex.
    pub working: CellComplex,
    pub graph: DualGraphFin,
    pub interval: Interval,
}

impl FinNetwork {
    /// Sets up the network for `iv`, checking only the interval's shape.
    ///
    /// `k` must be the complex `f` was built on.
    pub fn build(k: &CellComplex, f: &Filtration, iv: &Interval) -> Result<Self> {
        let d = iv.dim;
        if d == 0 {
            return Err(Error::DimensionTooLow(0));
        }
        let Death::At(delta) = iv.death else {
            return Err(Error::NotFiniteInterval(iv.birth));
        };
        let not_in = || Error::IntervalNotInDiagram {
            dim: d,
            birth: iv.birth,
            death: delta.to_string(),
        };
        let beta = iv.birth;
        if beta >= delta {
            return Err(not_in());
        }
        let sb = f.try_cell(beta)?;
        let sd = f.try_cell(delta)?;
        if sb.dim != d || sd.dim != d + 1 {
            return Err(not_in());
        }
        let k = rooted(k);
        let component: Vec<CellId> = k
            .q_component_of(sd)
            .into_iter()
            .map(|i| CellId::new(d + 1, i))
            .collect();
        let working = k.closure(&component);
        let mut graph = dual_graph_fin(&working, d)?;
        let ind = |c: CellId| f.index_of(working.origin(c));
        for c in working.cells(d) {
            let cap = if ind(c) <= beta {
                working.require_weight(c)?
            } else {
                INF
            };
            graph.network.set_capacity(c.idx, cap);
        }
        let mut source = None;
        for t in working.cells(d + 1) {
            let i = ind(t);
            if i == delta {
                source = Some(t.idx);
            } else if i > delta {
                graph.network.add_sink(t.idx);
            }
        }
        graph
            .network
            .add_source(source.expect("death cell is in its own component"));
        if let Some(phi) = graph.phi {
            graph.network.add_sink(phi);
        }
        debug_assert!(
            !graph.network.sinks().is_empty(),
            "sink set must be non-empty"
        );
        Ok(FinNetwork {
            working,
            graph,
            interval: *iv,
        })
    }

    /// The d-chain (input-complex ids) dual to the edges crossing `side`,
    /// with its weight.
    pub fn cycle_of_side(&self, side: &[bool]) -> PersistentCycle {
        let d = self.graph.d;
        let mut weight = 0.0;
        let chain = Chain::from_cells(
            d,
            self.graph
                .network
                .edges()
                .iter()
                .enumerate()
                .filter(|(_, &(u, v, _))| side[u] != side[v])
                .map(|(e, _)| {
                    let c = CellId::new(d, e);
                    weight += self.working.weight(c).unwrap_or(f64::INFINITY);
                    self.working.origin(c).idx
                }),
        );
        PersistentCycle { chain, weight }
    }

    pub fn solve(&self) -> Result<PersistentCycle> {
        let cut = mincut::min_cut(&self.graph.network)?;
        if !cut.is_finite() {
            return Err(Error::InternalNoFiniteCut);
        }
        Ok(self.cycle_of_side(&cut.source_side))
    }
}

/// Minimal persistent d-cycle of the finite interval `iv`.
pub fn min_pers_cyc_fin(
    k: &CellComplex,
    d: usize,
    f: &Filtration,
    iv: &Interval,
) -> Result<PersistentCycle> {
    let diagram = compute_pairs(k, f);
    min_pers_cyc_fin_in(k, d, f, &diagram, iv)
}

/// As [`min_pers_cyc_fin`], reusing a diagram already computed for `f`.
pub fn min_pers_cyc_fin_in(
    k: &CellComplex,
    d: usize,
    f: &Filtration,
    diagram: &Diagram,
    iv: &Interval,
) -> Result<PersistentCycle> {
    if iv.dim != d {
        return Err(Error::IntervalNotInDiagram {
            dim: d,
            birth: iv.birth,
            death: iv.death.to_string(),
        });
    }
    if !iv.is_finite() {
        return Err(Error::NotFiniteInterval(iv.birth));
    }
    diagram.require(iv)?;
    FinNetwork::build(k, f, iv)?.solve()
}

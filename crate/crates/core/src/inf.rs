//! Minimal persistent cycles of infinite intervals for embedded complexes.
//!
//! The partial complex at the birth index is pruned of d-cells that cannot
//! lie on a cycle, cut down to the d-connected component of the birth cell
//! and refilled with every (d+1)-cell whose d-faces all survive. The voids of
//! that working complex and its (d+1)-cells form the dual graph; the two ends
//! of the birth cell's dual edge are source and sink.

use crate::complex::{CellComplex, CellId};
use crate::error::{Error, Result};
use crate::fin::rooted;
use crate::geometry::EmbeddedComplex;
use crate::mincut;
use crate::persistence::{compute_pairs, Death, Diagram, Filtration, Interval};
use crate::voids::{dual_graph_inf, void_boundaries, DualGraphInf, VoidBoundary};
use crate::{Chain, PersistentCycle};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InfOptions {
    /// Remove dangling d-cells before extracting the component.
    pub prune: bool,
}

impl Default for InfOptions {
    fn default() -> Self {
        InfOptions { prune: true }
    }
}

/// (d+1)-cells of `k` whose d-faces all belong to `component`.
pub fn sigma_augmentation(k: &CellComplex, component: &[usize], d: usize) -> Vec<usize> {
    let mut inside = vec![false; k.num_cells(d)];
    for &c in component {
        inside[c] = true;
    }
    k.cells(d + 1)
        .filter(|&t| k.facets(t).iter().all(|&f| inside[f]))
        .map(|t| t.idx)
        .collect()
}

/// The flow network for the cycles born at one index, before solving.
#[derive(Clone, Debug)]
pub struct InfNetwork {
    /// Working complex; its origin ids refer to the input complex.
    pub working: EmbeddedComplex,
    pub voids: Vec<VoidBoundary>,
    pub graph: DualGraphInf,
    pub birth: usize,
    /// Index of the birth cell in the working complex.
    pub sigma: usize,
}

impl InfNetwork {
    /// Sets up the network for cycles of `K_birth` through the cell at `birth`.
    ///
    /// `ec.complex` must be the complex `f` was built on.
    pub fn build(
        ec: &EmbeddedComplex,
        f: &Filtration,
        d: usize,
        birth: usize,
        opts: InfOptions,
    ) -> Result<Self> {
        if d == 0 {
            return Err(Error::DimensionTooLow(0));
        }
        let sb = f.try_cell(birth)?;
        if sb.dim != d {
            return Err(Error::IntervalNotInDiagram {
                dim: d,
                birth,
                death: "inf".into(),
            });
        }
        if ec.ambient_dim() != d + 1 {
            return Err(Error::NotEmbedded(format!(
                "{d}-cycles need ambient dimension {}, got {}",
                d + 1,
                ec.ambient_dim()
            )));
        }
        let k = rooted(&ec.complex);
        let kb = f.partial_complex(&k, birth)?;
        let kp = if opts.prune { kb.prune(d) } else { kb };
        let no_cycle = || Error::NoCycleThroughSimplex(k.vertices(sb).to_vec());
        let seed = kp.find(k.vertices(sb)).ok_or_else(no_cycle)?;
        let component = kp.q_component_of(seed);
        let sigma_cells = sigma_augmentation(&kp, &component, d);
        let mut keep: Vec<CellId> = component.iter().map(|&c| CellId::new(d, c)).collect();
        keep.extend(sigma_cells.iter().map(|&t| CellId::new(d + 1, t)));
        let working = ec.with_complex(kp.closure(&keep));
        for s in working.complex.cells(d) {
            working.complex.require_weight(s)?;
        }
        let voids = void_boundaries(&working, d)?;
        let graph = dual_graph_inf(&working, d, &voids)?;
        let sigma = working
            .complex
            .find(k.vertices(sb))
            .expect("birth cell survives")
            .idx;
        let (u, v) = graph.endpoints(sigma);
        if u == v {
            return Err(no_cycle());
        }
        let mut net = InfNetwork {
            working,
            voids,
            graph,
            birth,
            sigma,
        };
        net.graph.network.add_source(u.min(v));
        net.graph.network.add_sink(u.max(v));
        Ok(net)
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
                .map(|(e, &(_, _, c))| {
                    weight += c;
                    self.working.complex.origin(CellId::new(d, e)).idx
                }),
        );
        PersistentCycle { chain, weight }
    }

    pub fn solve(&self) -> Result<PersistentCycle> {
        let cut = mincut::min_cut(&self.graph.network)?;
        Ok(self.cycle_of_side(&cut.source_side))
    }
}

/// Minimal-weight d-cycle of `K_birth` through the cell at `birth`.
///
/// For a finite interval this is the minimal cycle born at its birth index,
/// regardless of when it dies.
pub fn min_cycle_born_at(
    ec: &EmbeddedComplex,
    d: usize,
    f: &Filtration,
    birth: usize,
    opts: InfOptions,
) -> Result<PersistentCycle> {
    InfNetwork::build(ec, f, d, birth, opts)?.solve()
}

/// Minimal persistent d-cycle of the infinite interval `iv`.
pub fn min_pers_cyc_inf(
    ec: &EmbeddedComplex,
    d: usize,
    f: &Filtration,
    iv: &Interval,
) -> Result<PersistentCycle> {
    let diagram = compute_pairs(&ec.complex, f);
    min_pers_cyc_inf_in(ec, d, f, &diagram, iv)
}

/// As [`min_pers_cyc_inf`], reusing a diagram already computed for `f`.
pub fn min_pers_cyc_inf_in(
    ec: &EmbeddedComplex,
    d: usize,
    f: &Filtration,
    diagram: &Diagram,
    iv: &Interval,
) -> Result<PersistentCycle> {
    if let Death::At(death) = iv.death {
        return Err(Error::IntervalNotInfinite {
            birth: iv.birth,
            death,
        });
    }
    if iv.dim != d {
        return Err(Error::IntervalNotInDiagram {
            dim: d,
            birth: iv.birth,
            death: iv.death.to_string(),
        });
    }
    diagram.require(iv)?;
    min_cycle_born_at(ec, d, f, iv.birth, InfOptions::default())
}

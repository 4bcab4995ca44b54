//! Suspension of simplicial complexes and chains, and the lifting of a
//! finite-interval instance in dimension d-1 to one in dimension d.
//!
//! The suspension joins every cell to two new apex vertices. The chain map
//! sends a cell to the sum of its two cones and commutes with the boundary in
//! positive dimensions.

use crate::complex::{CellComplex, CellId, CellKind, Chain};
use crate::error::{Error, Result};
use crate::persistence::{compute_pairs, Death, Filtration, Interval};

/// Where a cell of the suspension comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Apex(usize),
    Base(usize),
    /// Cone on apex `.0` of base cell `.1` (one dimension lower).
    Cone(usize, usize),
}

/// A complex together with its suspension.
#[derive(Clone, Debug)]
pub struct SuspensionComplex {
    pub base: CellComplex,
    /// Apex vertex ids; both exceed every vertex of `base`.
    pub omega: [usize; 2],
    pub complex: CellComplex,
    source: Vec<Vec<Source>>,
    /// Base cell -> same cell in `complex`.
    base_map: Vec<Vec<usize>>,
    /// Base q-cell -> its cone on apex a, a (q+1)-cell of `complex`.
    cone_map: [Vec<Vec<usize>>; 2],
}

impl SuspensionComplex {
    pub fn source(&self, id: CellId) -> Source {
        self.source[id.dim][id.idx]
    }

    /// True iff the cell contains an apex.
    pub fn is_suspended(&self, id: CellId) -> bool {
        !matches!(self.source(id), Source::Base(_))
    }

    /// The copy of base cell `id` inside the suspension.
    pub fn base_cell(&self, id: CellId) -> CellId {
        CellId::new(id.dim, self.base_map[id.dim][id.idx])
    }

    /// The cone of base cell `id` on apex `a` (0 or 1).
    pub fn cone(&self, id: CellId, a: usize) -> CellId {
        CellId::new(id.dim + 1, self.cone_map[a][id.dim][id.idx])
    }

    /// Adds the boundary of the cone on the first apex for each unsuspended
    /// cell of `chain`, leaving a homologous chain made of suspended cells only.
    ///
    /// Every added cone comes no later than its base cell in a lifted
    /// filtration.
    pub fn suspended_representative(&self, chain: &Chain) -> Result<Chain> {
        let q = chain.dim();
        let mut out = chain.clone();
        for idx in chain.iter() {
            if idx >= self.complex.num_cells(q) {
                return Err(Error::UnknownCell { dim: q, idx });
            }
            if let Source::Base(b) = self.source(CellId::new(q, idx)) {
                let cone = self.cone(CellId::new(q, b), 0);
                out = out.add(
                    &self
                        .complex
                        .boundary_chain(&Chain::from_cells(q + 1, [cone.idx]))?,
                );
            }
        }
        Ok(out)
    }
}

struct Builder {
    complex: CellComplex,
    source: Vec<Vec<Source>>,
}

impl Builder {
    fn push(&mut self, verts: &[usize], w: Option<f64>, src: Source) -> Result<usize> {
        let id = self.complex.add_cell(verts, w)?;
        if self.source.len() <= id.dim {
            self.source.resize(id.dim + 1, Vec::new());
        }
        self.source[id.dim].push(src);
        Ok(id.idx)
    }
}

/// Builds the suspension of a simplicial complex.
///
/// The apexes are the two smallest ids above every vertex of `k`. Base
/// weights are copied; cone cells carry no weight.
pub fn suspend_complex(k: &CellComplex) -> Result<SuspensionComplex> {
    if k.kind() != CellKind::Simplicial {
        return Err(Error::WrongCellKind {
            expected: "simplicial",
        });
    }
    let m = k
        .cells(0)
        .map(|v| k.vertices(v)[0])
        .max()
        .map_or(0, |v| v + 1);
    let omega = [m, m + 1];
    let levels = k.top_dim().map_or(0, |t| t + 1);
    let mut b = Builder {
        complex: CellComplex::new_simplicial(),
        source: Vec::new(),
    };
    let mut base_map = vec![Vec::new(); levels];
    let mut cone_map = [vec![Vec::new(); levels], vec![Vec::new(); levels]];
    for (a, &w) in omega.iter().enumerate() {
        b.push(&[w], None, Source::Apex(a))?;
    }
    // cones of (q-1)-cells are q-cells, so they follow the base q-cells
    for q in 0..=levels {
        if q < levels {
            for c in k.cells(q) {
                base_map[q].push(b.push(k.vertices(c), k.weight(c), Source::Base(c.idx))?);
            }
        }
        if q > 0 {
            for c in k.cells(q - 1) {
                for (a, &w) in omega.iter().enumerate() {
                    let mut verts = k.vertices(c).to_vec();
                    verts.push(w);
                    cone_map[a][q - 1].push(b.push(&verts, None, Source::Cone(a, c.idx))?);
                }
            }
        }
    }
    Ok(SuspensionComplex {
        base: k.clone(),
        omega,
        complex: b.complex,
        source: b.source,
        base_map,
        cone_map,
    })
}

/// Sends each cell of `c` to the sum of its two cones.
pub fn suspend_chain(s: &SuspensionComplex, c: &Chain) -> Result<Chain> {
    let q = c.dim();
    let mut out = Chain::zero(q + 1);
    for idx in c.iter() {
        if idx >= s.base.num_cells(q) {
            return Err(Error::ChainNotInComplex(vec![idx]));
        }
        for a in 0..2 {
            out.toggle(s.cone(CellId::new(q, idx), a).idx);
        }
    }
    Ok(out)
}

/// Inverse of [`suspend_chain`] on its image.
pub fn unsuspend_chain(s: &SuspensionComplex, c: &Chain) -> Result<Chain> {
    let q = c.dim();
    if q == 0 {
        return Err(Error::NotInImage("0-chains are not cones".into()));
    }
    let mut halves = [Chain::zero(q - 1), Chain::zero(q - 1)];
    for idx in c.iter() {
        let id = CellId::new(q, idx);
        if idx >= s.complex.num_cells(q) {
            return Err(Error::ChainNotInComplex(vec![idx]));
        }
        match s.source(id) {
            Source::Cone(a, b) => halves[a].toggle(b),
            _ => {
                return Err(Error::NotInImage(format!(
                    "{:?} is not suspended",
                    s.complex.vertices(id)
                )))
            }
        }
    }
    if halves[0] != halves[1] {
        let odd = halves[0]
            .add(&halves[1])
            .iter()
            .next()
            .expect("halves differ");
        return Err(Error::NotInImage(format!(
            "{:?} is coned on one apex only",
            s.base.vertices(CellId::new(q - 1, odd))
        )));
    }
    let [out, _] = halves;
    Ok(out)
}

/// A lifted instance: the suspension with its filtration and interval, plus
/// the base instance after restriction to the d-skeleton.
#[derive(Clone, Debug)]
pub struct LiftedInstance {
    pub suspension: SuspensionComplex,
    pub filtration: Filtration,
    pub interval: Interval,
    pub base_filtration: Filtration,
    pub base_interval: Interval,
    /// Whether the suspension is a weak (d+1)-pseudomanifold, so that the
    /// dual-graph algorithm applies directly.
    pub weak_pseudomanifold: bool,
}

/// Index of base filtration position `i` (1-based) in a lifted filtration.
pub fn lifted_index(i: usize) -> usize {
    3 * i + 2
}

/// Lifts the finite (d-1)-interval `iv` of `(k, f)` to a finite d-interval of
/// the suspension.
///
/// Cells above dimension d are dropped first and the interval is reindexed
/// accordingly. Suspended d-cells weigh half their base (d-1)-cell; the
/// remaining d-cells weigh one more than the total (d-1)-weight of the base.
pub fn lift_fin_instance(
    k: &CellComplex,
    f: &Filtration,
    iv: &Interval,
    d: usize,
) -> Result<LiftedInstance> {
    if d < 2 {
        return Err(Error::DimensionTooLow(d));
    }
    let Death::At(death) = iv.death else {
        return Err(Error::NotFiniteInterval(iv.birth));
    };
    if iv.dim + 1 != d {
        return Err(Error::IntervalNotInDiagram {
            dim: d - 1,
            birth: iv.birth,
            death: death.to_string(),
        });
    }
    compute_pairs(k, f).require(iv)?;

    let mask: Vec<Vec<bool>> = (0..=k.top_dim().unwrap_or(0))
        .map(|q| vec![q <= d; k.num_cells(q)])
        .collect();
    let skel = k.restrict(&mask).rebased();
    let mut order = Vec::new();
    let mut shift = vec![0usize; f.len() + 1];
    for i in 1..=f.len() {
        let c = f.cell(i);
        if c.dim <= d {
            order.push(c);
        }
        shift[i] = order.len();
    }
    // restrict keeps the relative order within a dimension, so ids carry over
    let base_filtration = Filtration::new(&skel, order)?;
    let base_interval = Interval::finite(iv.dim, shift[iv.birth], shift[death]);

    let total: f64 = skel
        .cells(d - 1)
        .map(|c| skel.require_weight(c))
        .sum::<Result<f64>>()?;
    let mut s = suspend_complex(&skel)?;
    for c in skel.cells(d - 1) {
        let w = skel.require_weight(c)? / 2.0;
        for a in 0..2 {
            s.complex.set_weight(s.cone(c, a), Some(w))?;
        }
    }
    for c in skel.cells(d) {
        s.complex.set_weight(s.base_cell(c), Some(total + 1.0))?;
    }

    let mut lifted = Vec::with_capacity(3 * base_filtration.len() + 2);
    lifted.push(CellId::new(0, 0));
    lifted.push(CellId::new(0, 1));
    for &c in base_filtration.order() {
        lifted.push(s.base_cell(c));
        lifted.push(s.cone(c, 0));
        lifted.push(s.cone(c, 1));
    }
    let filtration = Filtration::new(&s.complex, lifted)?;
    let interval = Interval::finite(
        d,
        lifted_index(base_interval.birth),
        lifted_index(shift[death]),
    );
    let weak_pseudomanifold = s.complex.is_weak_pseudomanifold(d);
    Ok(LiftedInstance {
        suspension: s,
        filtration,
        interval,
        base_filtration,
        base_interval,
        weak_pseudomanifold,
    })
}

//! Brute-force ground truth over Z2 linear algebra.
//!
//! Everything here is exponential or cubic and meant for small instances:
//! cycle spaces, boundary membership, exhaustive minimal persistent cycles and
//! exhaustive minimum cuts. None of it shares code with the flow-based
//! algorithms it is used to check.

use std::collections::HashMap;

use crate::complex::{CellComplex, CellId, Chain};
use crate::error::{Error, Result};
use crate::mincut::FlowNetwork;
use crate::persistence::{Death, Filtration, Interval};
use crate::PersistentCycle;

/// Enumeration limit on the dimension of a searched vector space.
pub const MAX_ENUM_DIM: usize = 20;

/// Dense Z2 vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Z2Vec {
    words: Vec<u64>,
}

impl Z2Vec {
    pub fn zeros(n: usize) -> Self {
        Z2Vec {
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub fn from_indices(n: usize, idx: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Z2Vec::zeros(n);
        for i in idx {
            v.flip(i);
        }
        v
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &Z2Vec) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn highest(&self) -> Option<usize> {
        self.words
            .iter()
            .rposition(|&w| w != 0)
            .map(|i| i * 64 + 63 - self.words[i].leading_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn masked(&self, mask: &Z2Vec) -> Z2Vec {
        Z2Vec {
            words: self
                .words
                .iter()
                .zip(&mask.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }
}

/// Row-echelon basis keyed by leading (highest) bit, with an optional tag
/// recording which inserted vectors each row combines.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: HashMap<usize, (Z2Vec, Z2Vec)>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce_tagged(&self, v: &mut Z2Vec, tag: &mut Z2Vec) {
        while let Some(h) = v.highest() {
            match self.rows.get(&h) {
                Some((r, t)) => {
                    v.xor_assign(r);
                    tag.xor_assign(t);
                }
                None => break,
            }
        }
    }

    /// Inserts `v` tagged with `tag`. Returns the tag of the resulting zero
    /// combination when `v` is dependent.
    pub fn insert_tagged(&mut self, mut v: Z2Vec, mut tag: Z2Vec) -> Option<Z2Vec> {
        self.reduce_tagged(&mut v, &mut tag);
        match v.highest() {
            Some(h) => {
                self.rows.insert(h, (v, tag));
                None
            }
            None => Some(tag),
        }
    }

    /// Inserts `v`; returns true if it was independent.
    pub fn insert(&mut self, v: Z2Vec) -> bool {
        let tag = Z2Vec::zeros(0);
        self.insert_tagged(v, tag).is_none()
    }

    pub fn contains(&self, v: &Z2Vec) -> bool {
        let mut v = v.clone();
        while let Some(h) = v.highest() {
            match self.rows.get(&h) {
                Some((r, _)) => v.xor_assign(r),
                None => return false,
            }
        }
        true
    }

    pub fn vectors(&self) -> Vec<Z2Vec> {
        let mut keys: Vec<_> = self.rows.keys().copied().collect();
        keys.sort_unstable();
        keys.into_iter().map(|k| self.rows[&k].0.clone()).collect()
    }
}

fn boundary_vec(k: &CellComplex, c: CellId) -> Z2Vec {
    Z2Vec::from_indices(k.num_cells(c.dim - 1), k.facets(c).iter().copied())
}

fn chain_vec(k: &CellComplex, c: &Chain) -> Result<Z2Vec> {
    let n = k.num_cells(c.dim());
    if let Some(bad) = c.iter().find(|&i| i >= n) {
        return Err(Error::UnknownCell {
            dim: c.dim(),
            idx: bad,
        });
    }
    Ok(Z2Vec::from_indices(n, c.iter()))
}

fn vec_chain(dim: usize, v: &Z2Vec) -> Chain {
    Chain::from_cells(dim, v.ones())
}

/// Basis of the kernel of the boundary map restricted to the `q`-cells
/// accepted by `keep`.
fn kernel_basis(k: &CellComplex, q: usize, keep: impl Fn(usize) -> bool) -> Vec<Z2Vec> {
    let n = k.num_cells(q);
    let mut out = Vec::new();
    if q == 0 {
        return (0..n)
            .filter(|&i| keep(i))
            .map(|i| Z2Vec::from_indices(n, [i]))
            .collect();
    }
    let mut ech = Echelon::new();
    for c in k.cells(q).filter(|c| keep(c.idx)) {
        if let Some(tag) = ech.insert_tagged(boundary_vec(k, c), Z2Vec::from_indices(n, [c.idx])) {
            out.push(tag);
        }
    }
    out
}

/// Echelon basis of the boundaries of the `(q+1)`-cells accepted by `keep`.
fn boundary_space(k: &CellComplex, q: usize, keep: impl Fn(usize) -> bool) -> Echelon {
    let mut ech = Echelon::new();
    for c in k.cells(q + 1).filter(|c| keep(c.idx)) {
        ech.insert(boundary_vec(k, c));
    }
    ech
}

/// Basis of the Z2 cycle space `Z_d(K)`.
pub fn cycle_space_basis(k: &CellComplex, d: usize) -> Vec<Chain> {
    kernel_basis(k, d, |_| true)
        .iter()
        .map(|v| vec_chain(d, v))
        .collect()
}

/// Rank of the boundary map on `q`-chains (0 for `q = 0`).
pub fn boundary_rank(k: &CellComplex, q: usize) -> usize {
    if q == 0 {
        return 0;
    }
    let mut ech = Echelon::new();
    for c in k.cells(q) {
        ech.insert(boundary_vec(k, c));
    }
    ech.rank()
}

/// `dim H_q(K; Z2)` as `dim Z_q - dim B_q`.
pub fn betti(k: &CellComplex, q: usize) -> usize {
    k.num_cells(q) - boundary_rank(k, q) - boundary_rank(k, q + 1)
}

/// Whether `zeta` (ids of `k`) is the boundary of some chain of `k`.
pub fn is_boundary_in(k: &CellComplex, zeta: &Chain) -> Result<bool> {
    let v = chain_vec(k, zeta).map_err(|_| Error::ChainNotInComplex(vec![]))?;
    if zeta.is_empty() {
        return Ok(true);
    }
    Ok(boundary_space(k, zeta.dim(), |_| true).contains(&v))
}

/// Whether `zeta` (ids of `k`) bounds in the partial complex `K_i`.
pub fn is_boundary_in_prefix(
    k: &CellComplex,
    f: &Filtration,
    zeta: &Chain,
    i: usize,
) -> Result<bool> {
    let d = zeta.dim();
    for c in zeta.iter() {
        let id = CellId::new(d, c);
        if !k.contains(id) || f.index_of(id) > i {
            return Err(Error::ChainNotInComplex(if k.contains(id) {
                k.vertices(id).to_vec()
            } else {
                Vec::new()
            }));
        }
    }
    let v = chain_vec(k, zeta)?;
    let ech = boundary_space(k, d, |t| f.index_of(CellId::new(d + 1, t)) <= i);
    Ok(ech.contains(&v))
}

/// Calls `visit` on every vector of the span of `basis` (including zero),
/// in Gray-code order.
pub fn for_each_in_span(basis: &[Z2Vec], n: usize, mut visit: impl FnMut(&Z2Vec)) -> Result<()> {
    if basis.len() > MAX_ENUM_DIM {
        return Err(Error::TooLarge(basis.len(), MAX_ENUM_DIM));
    }
    let mut cur = Z2Vec::zeros(n);
    visit(&cur);
    for i in 1u64..(1u64 << basis.len()) {
        cur.xor_assign(&basis[i.trailing_zeros() as usize]);
        visit(&cur);
    }
    Ok(())
}

fn weights_of(k: &CellComplex, d: usize, relevant: impl Fn(usize) -> bool) -> Result<Vec<f64>> {
    k.cells(d)
        .map(|c| {
            if relevant(c.idx) {
                k.require_weight(c)
            } else {
                Ok(0.0)
            }
        })
        .collect()
}

fn weigh(v: &Z2Vec, w: &[f64]) -> f64 {
    v.ones().map(|i| w[i]).sum()
}

fn interval_cells(f: &Filtration, iv: &Interval) -> Result<(CellId, Option<CellId>)> {
    let sb = f.try_cell(iv.birth)?;
    if sb.dim != iv.dim {
        return Err(Error::IntervalNotInDiagram {
            dim: iv.dim,
            birth: iv.birth,
            death: iv.death.to_string(),
        });
    }
    let sd = match iv.death {
        Death::At(j) => Some(f.try_cell(j)?),
        Death::Never => None,
    };
    Ok((sb, sd))
}

/// Basis of `B_d(K_hi)` restricted to chains supported in `K_lo`, as the
/// images of a kernel basis.
fn bounded_in_prefix_basis(
    k: &CellComplex,
    f: &Filtration,
    d: usize,
    lo: usize,
    hi: usize,
) -> Vec<Z2Vec> {
    let n = k.num_cells(d);
    let outside = Z2Vec::from_indices(n, k.cells(d).filter(|&c| f.index_of(c) > lo).map(|c| c.idx));
    let m = k.num_cells(d + 1);
    let mut ech = Echelon::new();
    let mut image = Echelon::new();
    for t in k.cells(d + 1).filter(|&t| f.index_of(t) <= hi) {
        let full = boundary_vec(k, t);
        if let Some(tag) = ech.insert_tagged(full.masked(&outside), Z2Vec::from_indices(m, [t.idx]))
        {
            let mut b = Z2Vec::zeros(n);
            for s in tag.ones() {
                b.xor_assign(&boundary_vec(k, CellId::new(d + 1, s)));
            }
            image.insert(b);
        }
    }
    image.vectors()
}

/// Minimal persistent cycle of a finite interval by exhaustive search.
///
/// Candidates are the chains of `K_beta` that bound in `K_delta` (every
/// persistent cycle is one); those containing the birth cell and not bounding
/// in `K_{delta-1}` qualify.
pub fn brute_min_pers_cycle_fin(
    k: &CellComplex,
    f: &Filtration,
    iv: &Interval,
) -> Result<PersistentCycle> {
    let (sb, sd) = interval_cells(f, iv)?;
    let Death::At(delta) = iv.death else {
        return Err(Error::NotFiniteInterval(iv.birth));
    };
    let sd = sd.expect("finite death");
    if sd.dim != iv.dim + 1 {
        return Err(Error::IntervalNotInDiagram {
            dim: iv.dim,
            birth: iv.birth,
            death: delta.to_string(),
        });
    }
    let d = iv.dim;
    let beta = iv.birth;
    let n = k.num_cells(d);
    let w = weights_of(k, d, |i| f.index_of(CellId::new(d, i)) <= beta)?;
    let basis = bounded_in_prefix_basis(k, f, d, beta, delta);
    let earlier = boundary_space(k, d, |t| f.index_of(CellId::new(d + 1, t)) < delta);
    let mut best: Option<(f64, Z2Vec)> = None;
    for_each_in_span(&basis, n, |z| {
        if !z.get(sb.idx) {
            return;
        }
        let wz = weigh(z, &w);
        if best.as_ref().is_some_and(|(bw, _)| *bw <= wz) {
            return;
        }
        if !earlier.contains(z) {
            best = Some((wz, z.clone()));
        }
    })?;
    match best {
        Some((weight, z)) => Ok(PersistentCycle {
            chain: vec_chain(d, &z),
            weight,
        }),
        None => Err(Error::NoCycleThroughSimplex(k.vertices(sb).to_vec())),
    }
}

/// Minimal cycle of `K_beta` through the birth cell, by exhaustive search.
pub fn brute_min_pers_cycle_inf(
    k: &CellComplex,
    f: &Filtration,
    iv: &Interval,
) -> Result<PersistentCycle> {
    let (sb, _) = interval_cells(f, iv)?;
    let d = iv.dim;
    if d == 0 {
        return Err(Error::DimensionTooLow(0));
    }
    let beta = iv.birth;
    let n = k.num_cells(d);
    let w = weights_of(k, d, |i| f.index_of(CellId::new(d, i)) <= beta)?;
    let basis = kernel_basis(k, d, |i| f.index_of(CellId::new(d, i)) <= beta);
    let mut best: Option<(f64, Z2Vec)> = None;
    for_each_in_span(&basis, n, |z| {
        if !z.get(sb.idx) {
            return;
        }
        let wz = weigh(z, &w);
        if best.as_ref().is_none_or(|(bw, _)| wz < *bw) {
            best = Some((wz, z.clone()));
        }
    })?;
    match best {
        Some((weight, z)) => Ok(PersistentCycle {
            chain: vec_chain(d, &z),
            weight,
        }),
        None => Err(Error::NoCycleThroughSimplex(k.vertices(sb).to_vec())),
    }
}

/// Minimum of `w(∂A)` over `(d+1)`-chains `A` of `K_delta` that contain the
/// death cell and whose boundary lies in `K_beta`.
pub fn min_boundary_of_killing_chain(
    k: &CellComplex,
    f: &Filtration,
    iv: &Interval,
) -> Result<f64> {
    let (_, sd) = interval_cells(f, iv)?;
    let Death::At(delta) = iv.death else {
        return Err(Error::NotFiniteInterval(iv.birth));
    };
    let sd = sd.expect("finite death");
    let d = iv.dim;
    let beta = iv.birth;
    let n = k.num_cells(d);
    let m = k.num_cells(d + 1);
    let w = weights_of(k, d, |i| f.index_of(CellId::new(d, i)) <= beta)?;
    let outside = Z2Vec::from_indices(
        n,
        k.cells(d).filter(|&c| f.index_of(c) > beta).map(|c| c.idx),
    );
    let mut ech = Echelon::new();
    let mut kernel = Vec::new();
    for t in k.cells(d + 1).filter(|&t| f.index_of(t) <= delta) {
        if let Some(tag) = ech.insert_tagged(
            boundary_vec(k, t).masked(&outside),
            Z2Vec::from_indices(m, [t.idx]),
        ) {
            kernel.push(tag);
        }
    }
    let mut best = f64::INFINITY;
    for_each_in_span(&kernel, m, |a| {
        if !a.get(sd.idx) {
            return;
        }
        let mut b = Z2Vec::zeros(n);
        for s in a.ones() {
            b.xor_assign(&boundary_vec(k, CellId::new(d + 1, s)));
        }
        best = best.min(weigh(&b, &w));
    })?;
    if best.is_finite() {
        Ok(best)
    } else {
        Err(Error::NoCycleThroughSimplex(k.vertices(sd).to_vec()))
    }
}

/// Checks that `zeta` (ids of `k`) is a persistent cycle of `iv`: a cycle of
/// `K_beta` containing the birth cell that, for a finite interval, bounds in
/// `K_delta` but not in `K_{delta-1}`.
pub fn is_persistent_cycle(
    k: &CellComplex,
    f: &Filtration,
    iv: &Interval,
    zeta: &Chain,
) -> Result<bool> {
    let (sb, _) = interval_cells(f, iv)?;
    let d = iv.dim;
    if zeta.dim() != d || !zeta.contains(sb.idx) {
        return Ok(false);
    }
    if zeta
        .iter()
        .any(|c| c >= k.num_cells(d) || f.index_of(CellId::new(d, c)) > iv.birth)
    {
        return Ok(false);
    }
    if d > 0 && !k.boundary_chain(zeta)?.is_empty() {
        return Ok(false);
    }
    match iv.death {
        Death::Never => Ok(true),
        Death::At(delta) => Ok(is_boundary_in_prefix(k, f, zeta, delta)?
            && !is_boundary_in_prefix(k, f, zeta, delta - 1)?),
    }
}

/// Whether a persistent cycle of `iv` exists, found by exhaustive search over
/// boundaries of `K_delta` supported in `K_beta`.
pub fn persistent_cycle_exists(k: &CellComplex, f: &Filtration, iv: &Interval) -> Result<bool> {
    match iv.death {
        Death::Never => Ok(brute_min_pers_cycle_inf(k, f, iv).is_ok()),
        Death::At(_) => match brute_min_pers_cycle_fin(k, f, iv) {
            Ok(_) => Ok(true),
            Err(Error::NoCycleThroughSimplex(_)) => Ok(false),
            Err(e) => Err(e),
        },
    }
}

/// Minimum cut capacity by enumerating every terminal-respecting bipartition.
pub fn brute_min_cut(net: &FlowNetwork) -> Result<f64> {
    net.validate()?;
    let n = net.num_vertices();
    if n > MAX_ENUM_DIM {
        return Err(Error::TooLarge(n, MAX_ENUM_DIM));
    }
    let mut side = vec![false; n];
    for &s in net.sources() {
        side[s] = true;
    }
    let free: Vec<usize> = (0..n)
        .filter(|v| !net.sources().contains(v) && !net.sinks().contains(v))
        .collect();
    let mut best = f64::INFINITY;
    for mask in 0u32..(1u32 << free.len()) {
        for (b, &v) in free.iter().enumerate() {
            side[v] = mask >> b & 1 == 1;
        }
        best = best.min(net.cut_capacity(&side));
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::persistence::tests::{square_with_diagonal, triangle_last};

    #[test]
    fn z2vec_ops() {
        let mut v = Z2Vec::from_indices(130, [3, 64, 129]);
        assert_eq!(v.highest(), Some(129));
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![3, 64, 129]);
        v.flip(129);
        assert_eq!(v.highest(), Some(64));
        assert_eq!(v.count(), 2);
        assert!(Z2Vec::zeros(5).is_zero());
    }

    #[test]
    fn cycle_spaces() {
        let (k, f) = square_with_diagonal();
        let k9 = f.partial_complex(&k, 9).unwrap();
        assert_eq!(cycle_space_basis(&k9, 1).len(), 2);
        let (t, _) = triangle_last();
        assert_eq!(cycle_space_basis(&t, 1).len(), 1);
        let mut tree = CellComplex::new_simplicial();
        for v in 0..4 {
            tree.add_cell(&[v], None).unwrap();
        }
        for e in [[0, 1], [1, 2], [1, 3]] {
            tree.add_cell(&e, None).unwrap();
        }
        assert!(cycle_space_basis(&tree, 1).is_empty());
        assert_eq!(betti(&tree, 0), 1);
    }

    #[test]
    fn square_boundary_membership() {
        let (k, f) = square_with_diagonal();
        let sq: Chain = [[1, 2], [2, 3], [3, 4], [1, 4]]
            .iter()
            .map(|e| k.find(e).unwrap())
            .collect();
        assert!(is_boundary_in_prefix(&k, &f, &sq, 11).unwrap());
        assert!(!is_boundary_in_prefix(&k, &f, &sq, 10).unwrap());
        assert!(is_boundary_in_prefix(&k, &f, &Chain::zero(1), 0).unwrap());
        assert!(is_boundary_in(&k, &sq).unwrap());
        let k10 = f.partial_complex(&k, 10).unwrap();
        let sq10 = k10.chain_from_root(&k, &sq).unwrap();
        assert!(!is_boundary_in(&k10, &sq10).unwrap());
    }

    #[test]
    fn square_diagonal_minima() {
        let (mut k, f) = square_with_diagonal();
        let a = brute_min_pers_cycle_fin(&k, &f, &Interval::finite(1, 8, 11)).unwrap();
        assert_eq!(a.weight, 4.0);
        let b = brute_min_pers_cycle_fin(&k, &f, &Interval::finite(1, 9, 10)).unwrap();
        assert_eq!(b.weight, 3.0);
        assert_eq!(
            k.chain_vertices(&b.chain),
            vec![vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(
            min_boundary_of_killing_chain(&k, &f, &Interval::finite(1, 9, 10)).unwrap(),
            3.0
        );
        k.set_weight(k.find(&[1, 2]).unwrap(), Some(10.0)).unwrap();
        let c = brute_min_pers_cycle_fin(&k, &f, &Interval::finite(1, 9, 10)).unwrap();
        assert_eq!(c.weight, 12.0);
    }

    #[test]
    fn exhaustive_cut_small() {
        let mut net = FlowNetwork::new(2);
        net.add_source(0);
        net.add_sink(1);
        net.add_edge(0, 1, 5.0);
        assert_eq!(brute_min_cut(&net).unwrap(), 5.0);
        net.add_edge(0, 1, 3.0);
        assert_eq!(brute_min_cut(&net).unwrap(), 8.0);
        let mut big = FlowNetwork::new(25);
        big.add_source(0);
        big.add_sink(1);
        assert_eq!(brute_min_cut(&big), Err(Error::TooLarge(25, 20)));
    }
}

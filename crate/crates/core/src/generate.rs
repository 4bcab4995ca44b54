//! Seeded random instances for tests and benchmarks.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{CellComplex, CellId};
use crate::cubical::ScalarGrid;
use crate::error::Result;
use crate::geometry::{Coordinates, EmbeddedComplex};
use crate::persistence::Filtration;

pub type Seeded = ChaCha8Rng;

pub fn seeded(seed: u64) -> Seeded {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The simplicial complex generated by `tops` (vertex lists), with weights
/// drawn for every cell of dimension `weighted`.
pub fn closure_of<R: Rng>(
    tops: &[Vec<usize>],
    weighted: Option<usize>,
    rng: &mut R,
) -> Result<CellComplex> {
    let mut by_dim: BTreeMap<usize, BTreeSet<Vec<usize>>> = BTreeMap::new();
    for t in tops {
        let mut t = t.clone();
        t.sort_unstable();
        let n = t.len();
        for mask in 1u32..(1 << n) {
            let face: Vec<usize> = (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| t[i])
                .collect();
            by_dim.entry(face.len() - 1).or_default().insert(face);
        }
    }
    let mut k = CellComplex::new_simplicial();
    for (dim, cells) in by_dim {
        for c in cells {
            let w = (Some(dim) == weighted).then(|| random_weight(rng));
            k.add_cell(&c, w)?;
        }
    }
    Ok(k)
}

/// Uniform in [1, 10).
pub fn random_weight<R: Rng>(rng: &mut R) -> f64 {
    rng.random_range(1.0..10.0)
}

/// Random order respecting faces: each cell draws a key and takes the max
/// with its facets' keys.
pub fn random_filtration<R: Rng>(k: &CellComplex, rng: &mut R) -> Filtration {
    let top = k.top_dim().map_or(0, |t| t + 1);
    let mut keys: Vec<Vec<f64>> = Vec::with_capacity(top);
    let mut order: Vec<(f64, CellId)> = Vec::with_capacity(k.len());
    for q in 0..top {
        let mut layer = Vec::with_capacity(k.num_cells(q));
        for c in k.cells(q) {
            let own: f64 = rng.random();
            let key = k
                .facets(c)
                .iter()
                .map(|&f| keys[q - 1][f])
                .fold(own, f64::max);
            layer.push(key);
            order.push((key, c));
        }
        keys.push(layer);
    }
    order.sort_by(|a, b| {
        a.0.total_cmp(&b.0)
            .then(a.1.dim.cmp(&b.1.dim))
            .then(a.1.idx.cmp(&b.1.idx))
    });
    Filtration::new(k, order.into_iter().map(|(_, c)| c).collect()).expect("keys respect faces")
}

/// Triangles of an `n x n` torus, vertex `(i, j)` labelled `i * n + j`.
pub fn torus_triangles(n: usize) -> Vec<Vec<usize>> {
    let v = |i: usize, j: usize| (i % n) * n + (j % n);
    let mut out = Vec::with_capacity(2 * n * n);
    for i in 0..n {
        for j in 0..n {
            out.push(vec![v(i, j), v(i + 1, j), v(i + 1, j + 1)]);
            out.push(vec![v(i, j), v(i, j + 1), v(i + 1, j + 1)]);
        }
    }
    out
}

/// Grid label used by the volume generators, x fastest.
pub fn grid_label(dims: [usize; 3], p: [usize; 3]) -> usize {
    p[0] + dims[0] * (p[1] + dims[1] * p[2])
}

/// Freudenthal tetrahedra of the voxel with lowest corner `p`.
pub fn voxel_tets(dims: [usize; 3], p: [usize; 3]) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(6);
    for perm in [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ] {
        let mut q = p;
        let mut tet = vec![grid_label(dims, q)];
        for axis in perm {
            q[axis] += 1;
            tet.push(grid_label(dims, q));
        }
        out.push(tet);
    }
    out
}

/// All voxel anchors of a grid with `dims` vertices per axis.
pub fn voxels(dims: [usize; 3]) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for z in 0..dims[2] - 1 {
        for y in 0..dims[1] - 1 {
            for x in 0..dims[0] - 1 {
                out.push([x, y, z]);
            }
        }
    }
    out
}

/// Facets of the boundary of the `n`-simplex on `0..=n`.
pub fn simplex_boundary(n: usize) -> Vec<Vec<usize>> {
    (0..=n)
        .map(|skip| (0..=n).filter(|&v| v != skip).collect())
        .collect()
}

/// A weak (d+1)-pseudomanifold with at most `max_top` top cells and random
/// weights on its d-cells. `d` is 1 (torus pieces) or 2 (pieces of a
/// triangulated cube or of the boundary of the 4-simplex).
pub fn random_pseudomanifold<R: Rng>(d: usize, max_top: usize, rng: &mut R) -> CellComplex {
    let mut pool = match d {
        1 => torus_triangles(4),
        2 if rng.random_bool(0.2) => simplex_boundary(4),
        2 => voxels([3, 3, 3])
            .into_iter()
            .flat_map(|p| voxel_tets([3, 3, 3], p))
            .collect(),
        _ => panic!("pseudomanifold pieces exist for d = 1 and d = 2"),
    };
    pool.shuffle(rng);
    let n = rng.random_range(1..=max_top.min(pool.len()));
    pool.truncate(n);
    closure_of(&pool, Some(d), rng).expect("closure of valid simplices")
}

fn jitter<R: Rng>(rng: &mut R, amount: f64) -> f64 {
    rng.random_range(-amount..amount)
}

/// A random triangulated region of a jittered `n x n` planar grid: some
/// triangles plus some bare edges, weights on edges.
pub fn random_planar_complex<R: Rng>(n: usize, rng: &mut R) -> EmbeddedComplex {
    let mut coords = Coordinates::new(2);
    for j in 0..n {
        for i in 0..n {
            let p = [i as f64 + jitter(rng, 0.2), j as f64 + jitter(rng, 0.2)];
            coords.insert(i + n * j, &p).expect("fresh vertex");
        }
    }
    let v = |i: usize, j: usize| i + n * j;
    let mut tops = Vec::new();
    for j in 0..n - 1 {
        for i in 0..n - 1 {
            let (a, b, c, e) = (v(i, j), v(i + 1, j), v(i + 1, j + 1), v(i, j + 1));
            let tris = if (i + j) % 2 == 0 {
                [vec![a, b, c], vec![a, c, e]]
            } else {
                [vec![a, b, e], vec![b, c, e]]
            };
            for t in tris {
                if rng.random_bool(0.45) {
                    tops.push(t);
                }
            }
            for edge in [vec![a, b], vec![a, e]] {
                if rng.random_bool(0.35) {
                    tops.push(edge);
                }
            }
        }
    }
    if tops.is_empty() {
        tops.push(vec![v(0, 0), v(1, 0)]);
    }
    let k = closure_of(&tops, Some(1), rng).expect("closure of valid simplices");
    EmbeddedComplex::new(k, Arc::new(coords)).expect("jittered grid is embedded")
}

/// A random 2-complex in R^3: the boundary surface of a random voxel set of
/// a jittered Freudenthal grid, plus a few interior triangles and tetrahedra.
/// Weights on triangles.
pub fn random_voxel_surface<R: Rng>(dims: [usize; 3], rng: &mut R) -> EmbeddedComplex {
    let mut coords = Coordinates::new(3);
    for z in 0..dims[2] {
        for y in 0..dims[1] {
            for x in 0..dims[0] {
                let p = [
                    x as f64 + jitter(rng, 0.15),
                    y as f64 + jitter(rng, 0.15),
                    z as f64 + jitter(rng, 0.15),
                ];
                coords
                    .insert(grid_label(dims, [x, y, z]), &p)
                    .expect("fresh vertex");
            }
        }
    }
    let all = voxels(dims);
    let mut chosen: Vec<[usize; 3]> = all
        .iter()
        .copied()
        .filter(|_| rng.random_bool(0.5))
        .collect();
    if chosen.is_empty() {
        chosen.push(all[rng.random_range(0..all.len())]);
    }
    let tets: Vec<Vec<usize>> = chosen.iter().flat_map(|&p| voxel_tets(dims, p)).collect();
    let mut incidence: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for t in &tets {
        for tri in simplex_faces(t) {
            *incidence.entry(tri).or_default() += 1;
        }
    }
    let mut tops: Vec<Vec<usize>> = Vec::new();
    for (tri, n) in incidence {
        if n == 1 || rng.random_bool(0.08) {
            tops.push(tri);
        }
    }
    for t in tets {
        if rng.random_bool(0.05) {
            tops.push(t);
        }
    }
    let k = closure_of(&tops, Some(2), rng).expect("closure of valid simplices");
    EmbeddedComplex::new(k, Arc::new(coords)).expect("jittered grid is embedded")
}

fn simplex_faces(t: &[usize]) -> Vec<Vec<usize>> {
    (0..t.len())
        .map(|skip| {
            t.iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, &v)| v)
                .collect()
        })
        .collect()
}

/// Uniform random values in [0, 1).
pub fn random_grid<R: Rng>(dims: [usize; 3], rng: &mut R) -> ScalarGrid {
    let values = (0..dims.iter().product::<usize>())
        .map(|_| rng.random())
        .collect();
    ScalarGrid::new(dims, values).expect("valid dims")
}

/// A cube of side `n` holding a ball of radius `radius` around its center:
/// `r / radius` inside, `max(0.2, 2 - r / radius)` outside.
pub fn blob_volume(n: usize, radius: f64) -> ScalarGrid {
    let c = (n as f64 - 1.0) / 2.0;
    ScalarGrid::from_fn([n; 3], |i, j, k| {
        let r = ((i as f64 - c).powi(2) + (j as f64 - c).powi(2) + (k as f64 - c).powi(2)).sqrt()
            / radius;
        if r < 1.0 {
            r
        } else {
            (2.0 - r).max(0.2)
        }
    })
    .expect("n >= 2")
}

/// An atom: position in grid units, weight and radius of influence.
#[derive(Clone, Copy, Debug)]
pub struct Atom {
    pub center: [f64; 3],
    pub weight: f64,
    pub radius: f64,
}

/// Sum over atoms of `max(w (r - dist) / r, 0)`.
pub fn atomic_volume(dims: [usize; 3], atoms: &[Atom]) -> Result<ScalarGrid> {
    ScalarGrid::from_fn(dims, |i, j, k| {
        atoms
            .iter()
            .map(|a| {
                let p = [i as f64, j as f64, k as f64];
                let dist = (0..3)
                    .map(|t| (p[t] - a.center[t]).powi(2))
                    .sum::<f64>()
                    .sqrt();
                (a.weight * (a.radius - dist) / a.radius).max(0.0)
            })
            .sum()
    })
}

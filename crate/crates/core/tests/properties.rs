use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::{Rotation2, Rotation3, Vector2, Vector3};
use persistent_cycles::complex::{CellComplex, CellId, Chain};
use persistent_cycles::cubical::{lower_star_filtration, WeightMode};
use persistent_cycles::fin::{min_pers_cyc_fin, FinNetwork};
use persistent_cycles::generate::{self, seeded, Seeded};
use persistent_cycles::geometry::{
    angular_order_cofaces, natural_orientation_sign, Coordinates, EmbeddedComplex, Sector,
};
use persistent_cycles::inf::{min_cycle_born_at, InfNetwork, InfOptions};
use persistent_cycles::mincut::{cut_edges, min_cut, FlowNetwork, INF};
use persistent_cycles::oracle;
use persistent_cycles::persistence::{
    compute_pairs, compute_pairs_plain, Death, Filtration, Interval,
};
use persistent_cycles::suspension::{suspend_chain, suspend_complex, unsuspend_chain};
use persistent_cycles::voids::{connected_subcycle, void_boundaries};
use proptest::prelude::*;
use rand::seq::IndexedRandom;
use rand::Rng;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

/// A random simplicial complex on 7 vertices with up to `max_tops` maximal
/// simplices of dimension 1 to 3, every cell weighted.
fn random_complex(rng: &mut Seeded, max_tops: usize) -> CellComplex {
    let n = rng.random_range(1..=max_tops);
    let tops: Vec<Vec<usize>> = (0..n)
        .map(|_| {
            let size = rng.random_range(2..=4);
            let mut vs: Vec<usize> = (0..7).collect();
            vs.sort_by_key(|_| rng.random::<u32>());
            vs.truncate(size);
            vs
        })
        .collect();
    let mut k = generate::closure_of(&tops, None, rng).unwrap();
    for c in k.iter().collect::<Vec<_>>() {
        k.set_weight(c, Some(generate::random_weight(rng))).unwrap();
    }
    k
}

fn random_chain(k: &CellComplex, q: usize, rng: &mut Seeded) -> Chain {
    Chain::from_cells(q, (0..k.num_cells(q)).filter(|_| rng.random_bool(0.4)))
}

fn random_cycle(basis: &[Chain], d: usize, rng: &mut Seeded) -> Chain {
    basis
        .iter()
        .filter(|_| rng.random_bool(0.5))
        .fold(Chain::zero(d), |acc, c| acc.add(c))
}

fn embedded_instance(seed: u64) -> (usize, EmbeddedComplex) {
    let mut rng = seeded(seed);
    if seed.is_multiple_of(2) {
        (1, generate::random_planar_complex(4, &mut rng))
    } else {
        (2, generate::random_voxel_surface([3, 3, 3], &mut rng))
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn facets_and_cofaces_agree(seed in any::<u64>()) {
        let k = random_complex(&mut seeded(seed), 6);
        for q in 1..=k.top_dim().unwrap() {
            for c in k.cells(q) {
                for &f in k.facets(c) {
                    prop_assert!(k.cofaces(CellId::new(q - 1, f)).contains(&c.idx));
                }
            }
        }
    }

    #[test]
    fn boundary_squares_to_zero(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let k = random_complex(&mut rng, 6);
        for q in 2..=k.top_dim().unwrap() {
            let c = random_chain(&k, q, &mut rng);
            let bb = k.boundary_chain(&k.boundary_chain(&c).unwrap()).unwrap();
            prop_assert!(bb.is_empty());
        }
    }

    #[test]
    fn components_partition_and_match_search(seed in any::<u64>()) {
        let k = random_complex(&mut seeded(seed), 6);
        for q in 0..=k.top_dim().unwrap() {
            let comps = k.q_connected_components(q);
            let mut seen = vec![0; k.num_cells(q)];
            for comp in &comps {
                for &c in comp {
                    seen[c] += 1;
                }
                prop_assert_eq!(&k.q_component_of(CellId::new(q, comp[0])), comp);
            }
            prop_assert!(seen.iter().all(|&n| n == 1));
        }
    }

    #[test]
    fn closure_is_idempotent(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let k = random_complex(&mut rng, 6);
        let picks: Vec<CellId> = k.iter().filter(|_| rng.random_bool(0.2)).collect();
        let once = k.closure(&picks);
        let all: Vec<CellId> = once.iter().collect();
        let twice = once.closure(&all);
        prop_assert_eq!(once.len(), twice.len());
        for c in twice.iter() {
            prop_assert_eq!(twice.origin(c), once.origin(c));
        }
    }

    #[test]
    fn prune_keeps_every_cycle(seed in any::<u64>()) {
        let k = random_complex(&mut seeded(seed), 6);
        for d in 1..=k.top_dim().unwrap() {
            let p = k.prune(d);
            prop_assert_eq!(oracle::cycle_space_basis(&p, d).len(), oracle::cycle_space_basis(&k, d).len());
        }
    }

    #[test]
    fn diagram_matches_prefix_betti_numbers(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let k = random_complex(&mut rng, 5);
        let f = generate::random_filtration(&k, &mut rng);
        let diagram = compute_pairs(&k, &f);
        prop_assert_eq!(&diagram, &compute_pairs_plain(&k, &f));
        for i in 1..=f.len() {
            let ki = f.partial_complex(&k, i).unwrap();
            for q in 0..=k.top_dim().unwrap() {
                let alive = diagram
                    .dim(q)
                    .iter()
                    .filter(|iv| iv.birth <= i && iv.death > Death::At(i))
                    .count();
                prop_assert_eq!(alive, oracle::betti(&ki, q), "prefix {} dim {}", i, q);
            }
        }
        for q in 0..=k.top_dim().unwrap() {
            let inf = diagram.dim(q).iter().filter(|iv| !iv.is_finite()).count();
            prop_assert_eq!(inf, oracle::betti(&k, q));
        }
    }

    #[test]
    fn finite_intervals_have_persistent_cycles(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let k = random_complex(&mut rng, 5);
        let f = generate::random_filtration(&k, &mut rng);
        for iv in compute_pairs(&k, &f).iter().filter(|iv| iv.is_finite() && iv.dim > 0) {
            let Death::At(j) = iv.death else { unreachable!() };
            prop_assert_eq!(f.cell(iv.birth).dim, iv.dim);
            prop_assert_eq!(f.cell(j).dim, iv.dim + 1);
            prop_assert!(oracle::persistent_cycle_exists(&k, &f, iv).unwrap());
        }
    }
}

fn random_network(rng: &mut Seeded) -> FlowNetwork {
    let n = rng.random_range(2..=14);
    let mut net = FlowNetwork::new(n);
    for _ in 0..rng.random_range(0..3 * n) {
        let (u, v) = (rng.random_range(0..n), rng.random_range(0..n));
        let c = if rng.random_bool(0.1) {
            INF
        } else {
            rng.random_range(0.0..5.0)
        };
        net.add_edge(u, v, c);
    }
    net.add_source(0);
    net.add_sink(n - 1);
    if n > 3 && rng.random_bool(0.3) {
        net.add_sink(n - 2);
    }
    net
}

proptest! {
    #![proptest_config(config(128))]

    #[test]
    fn min_cut_matches_exhaustive_search(seed in any::<u64>()) {
        let net = random_network(&mut seeded(seed));
        let cut = min_cut(&net).unwrap();
        let brute = oracle::brute_min_cut(&net).unwrap();
        if brute.is_finite() {
            prop_assert!((cut.capacity - brute).abs() < 1e-9);
            prop_assert!((cut.flow - cut.capacity).abs() < 1e-9);
            let sum: f64 = cut_edges(&net, &cut).unwrap().iter().map(|&e| net.edge(e).2).sum();
            prop_assert!((sum - cut.capacity).abs() < 1e-9);
        } else {
            prop_assert!(!cut.is_finite());
        }
    }

    #[test]
    fn raising_a_capacity_never_lowers_the_cut(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let mut net = random_network(&mut rng);
        if net.num_edges() == 0 {
            return Ok(());
        }
        let before = min_cut(&net).unwrap().capacity;
        let e = rng.random_range(0..net.num_edges());
        let c = net.edge(e).2;
        net.set_capacity(e, c + rng.random_range(0.0..3.0));
        prop_assert!(min_cut(&net).unwrap().capacity >= before - 1e-9);
    }
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn fin_cut_matches_killing_chain_oracle(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let d = 1 + (seed % 2) as usize;
        let k = generate::random_pseudomanifold(d, 10, &mut rng);
        let f = generate::random_filtration(&k, &mut rng);
        for iv in compute_pairs(&k, &f).dim(d).iter().filter(|iv| iv.is_finite()) {
            let got = min_pers_cyc_fin(&k, d, &f, iv).unwrap();
            let brute = oracle::brute_min_pers_cycle_fin(&k, &f, iv).unwrap();
            let dual = oracle::min_boundary_of_killing_chain(&k, &f, iv).unwrap();
            prop_assert!((brute.weight - dual).abs() < 1e-9);
            prop_assert!(got.weight <= brute.weight + 1e-9);
            prop_assert!((got.weight - brute.weight).abs() < 1e-9);
            let net = FinNetwork::build(&k, &f, iv).unwrap();
            prop_assert!(!net.graph.network.sinks().is_empty());
        }
    }

    #[test]
    fn orientation_flips_under_transposition(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let n = rng.random_range(2..=3);
        let pts: Vec<Vec<f64>> = (0..=n).map(|_| (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
        let refs: Vec<&[f64]> = pts.iter().map(Vec::as_slice).collect();
        let Ok(s) = natural_orientation_sign(&refs) else { return Ok(()) };
        let (i, j) = (rng.random_range(0..=n), rng.random_range(0..=n));
        if i == j {
            return Ok(());
        }
        let mut swapped = refs.clone();
        swapped.swap(i, j);
        prop_assert_eq!(natural_orientation_sign(&swapped).unwrap(), -s);
    }

    #[test]
    fn void_sectors_balance_free_sides(seed in any::<u64>()) {
        let (d, ec) = embedded_instance(seed);
        let k = &ec.complex;
        for tau in k.cells(d - 1) {
            let cof = k.cofaces(tau);
            if cof.len() < 2 {
                continue;
            }
            let ord = angular_order_cofaces(&ec, tau).unwrap();
            let voids = ord.sectors.iter().filter(|s| **s == Sector::Void).count();
            let free: usize = cof.iter().map(|&s| 2 - k.cofaces(CellId::new(d, s)).len()).sum();
            prop_assert_eq!(2 * voids, free);
        }
    }

    #[test]
    fn angular_order_survives_rigid_motion(seed in any::<u64>(), a in 0.0..6.28f64, b in 0.0..6.28f64, c in 0.0..6.28f64) {
        let (d, ec) = embedded_instance(seed);
        let k = &ec.complex;
        let shift = [0.3, -1.2, 2.5];
        let mut coords = Coordinates::new(d + 1);
        for v in k.cells(0) {
            let label = k.vertices(v)[0];
            let p = ec.point(label);
            let q: Vec<f64> = if d == 1 {
                let r = Rotation2::new(a) * Vector2::new(p[0], p[1]);
                vec![r.x + shift[0], r.y + shift[1]]
            } else {
                let r = Rotation3::from_euler_angles(a, b, c) * Vector3::new(p[0], p[1], p[2]);
                vec![r.x + shift[0], r.y + shift[1], r.z + shift[2]]
            };
            coords.insert(label, &q).unwrap();
        }
        let moved = EmbeddedComplex::new(k.clone(), Arc::new(coords)).unwrap();
        for tau in k.cells(d - 1).filter(|&t| k.cofaces(t).len() >= 3) {
            let x = angular_order_cofaces(&ec, tau).unwrap().cofaces;
            let y = angular_order_cofaces(&moved, tau).unwrap().cofaces;
            let rev: Vec<usize> = y.iter().rev().copied().collect();
            let same = (0..x.len()).any(|r| {
                let rot: Vec<usize> = x[r..].iter().chain(&x[..r]).copied().collect();
                rot == y || rot == rev
            });
            prop_assert!(same, "{:?} vs {:?}", x, y);
        }
    }

    #[test]
    fn cycle_sides_fall_in_different_voids(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let (d, ec) = embedded_instance(seed);
        let basis = oracle::cycle_space_basis(&ec.complex, d);
        let zeta = random_cycle(&basis, d, &mut rng);
        if zeta.is_empty() {
            return Ok(());
        }
        let cells: Vec<CellId> = zeta.iter().map(|c| CellId::new(d, c)).collect();
        let z = ec.with_complex(ec.complex.closure(&cells));
        let mut group = BTreeMap::new();
        for (j, v) in void_boundaries(&z, d).unwrap().iter().enumerate() {
            for oc in &v.cells {
                group.insert((oc.cell, oc.positive), j);
            }
        }
        for c in 0..z.complex.num_cells(d) {
            prop_assert_ne!(group[&(c, true)], group[&(c, false)]);
        }
    }

    #[test]
    fn connected_subcycle_is_a_cycle_through_sigma(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let (d, ec) = embedded_instance(seed);
        let k = &ec.complex;
        let zeta = random_cycle(&oracle::cycle_space_basis(k, d), d, &mut rng);
        let Some(sigma) = zeta.iter().collect::<Vec<_>>().choose(&mut rng).copied() else { return Ok(()) };
        let sub = connected_subcycle(k, &zeta, sigma).unwrap();
        prop_assert!(sub.contains(sigma));
        prop_assert!(sub.is_subset(&zeta));
        prop_assert!(k.boundary_chain(&sub).unwrap().is_empty());
    }

    #[test]
    fn every_inf_cut_is_a_cycle_through_the_birth_cell(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let (d, ec) = embedded_instance(seed);
        let f = generate::random_filtration(&ec.complex, &mut rng);
        let diagram = compute_pairs(&ec.complex, &f);
        for iv in diagram.dim(d).iter().filter(|iv| !iv.is_finite()) {
            let net = InfNetwork::build(&ec, &f, d, iv.birth, InfOptions::default()).unwrap();
            let g = &net.graph.network;
            let mut side: Vec<bool> = (0..g.num_vertices()).map(|_| rng.random_bool(0.5)).collect();
            side[g.sources()[0]] = true;
            side[g.sinks()[0]] = false;
            let cyc = net.cycle_of_side(&side);
            prop_assert!((cyc.weight - g.cut_capacity(&side)).abs() < 1e-9);
            prop_assert!(cyc.chain.contains(f.cell(iv.birth).idx));
            prop_assert!(ec.complex.boundary_chain(&cyc.chain).unwrap().is_empty());
            prop_assert!(cyc.chain.iter().all(|c| f.index_of(CellId::new(d, c)) <= iv.birth));

            let pruned = min_cycle_born_at(&ec, d, &f, iv.birth, InfOptions::default()).unwrap();
            let full = min_cycle_born_at(&ec, d, &f, iv.birth, InfOptions { prune: false }).unwrap();
            prop_assert!((pruned.weight - full.weight).abs() < 1e-9);
            prop_assert!(oracle::is_persistent_cycle(&ec.complex, &f, iv, &pruned.chain).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(config(16))]

    #[test]
    fn grid_filtrations_have_no_infinite_voids(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let dims = [rng.random_range(2..6), rng.random_range(2..6), rng.random_range(2..6)];
        let grid = generate::random_grid(dims, &mut rng);
        let cf = lower_star_filtration(&grid, WeightMode::Value).unwrap();
        let diagram = compute_pairs(&cf.cubical.complex, &cf.filtration);
        prop_assert!(diagram.dim(2).iter().all(Interval::is_finite));
        prop_assert_eq!(diagram.dim(0).iter().filter(|iv| !iv.is_finite()).count(), 1);
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn suspension_commutes_with_boundary(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let k = random_complex(&mut rng, 5);
        let s = suspend_complex(&k).unwrap();
        prop_assert_eq!(s.complex.len(), 3 * k.len() + 2);
        for q in 1..=k.top_dim().unwrap() {
            let c = random_chain(&k, q, &mut rng);
            let sc = suspend_chain(&s, &c).unwrap();
            let lhs = s.complex.boundary_chain(&sc).unwrap();
            let rhs = suspend_chain(&s, &k.boundary_chain(&c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(unsuspend_chain(&s, &sc).unwrap(), c);
        }
    }

    #[test]
    fn suspended_boundaries_are_in_the_image(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let k = random_complex(&mut rng, 5);
        let s = suspend_complex(&k).unwrap();
        let top = s.complex.top_dim().unwrap();
        let a = random_chain(&s.complex, top, &mut rng);
        let only_suspended = s
            .complex
            .boundary_chain(&a)
            .unwrap()
            .iter()
            .all(|c| s.is_suspended(CellId::new(top - 1, c)));
        prop_assert_eq!(only_suspended, unsuspend_chain(&s, &a).is_ok());
    }

    #[test]
    fn suspended_cycles_are_in_the_image(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let k = random_complex(&mut rng, 5);
        let s = suspend_complex(&k).unwrap();
        for q in 1..=k.top_dim().unwrap() {
            let z = random_cycle(&oracle::cycle_space_basis(&s.complex, q), q, &mut rng);
            let rep = s.suspended_representative(&z).unwrap();
            prop_assert!(s.complex.boundary_chain(&rep).unwrap().is_empty());
            let base = unsuspend_chain(&s, &rep).unwrap();
            prop_assert!(q == 1 || k.boundary_chain(&base).unwrap().is_empty());
        }
    }
}

#[test]
fn filtration_order_is_checked() {
    let k = random_complex(&mut seeded(1), 4);
    let f = generate::random_filtration(&k, &mut seeded(2));
    let mut order = f.order().to_vec();
    order.reverse();
    assert!(Filtration::new(&k, order).is_err());
}

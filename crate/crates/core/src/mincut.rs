//! Exact minimum s-t cuts on undirected capacitated graphs.
//!
//! Source and sink sets are contracted to single vertices, parallel edges are
//! merged, and Dinic's algorithm computes a maximum flow. Infinite capacities
//! are replaced by `W + 1`, where `W` is the sum of all finite capacities, so
//! that any cut using an infinite edge is strictly heavier than every finite
//! cut.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};

/// Capacity marker for edges that must never be cut.
pub const INF: f64 = f64::INFINITY;

#[derive(Clone, Debug, Default)]
pub struct FlowNetwork {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
    sources: Vec<usize>,
    sinks: Vec<usize>,
}

impl FlowNetwork {
    pub fn new(n: usize) -> Self {
        FlowNetwork {
            n,
            ..Default::default()
        }
    }

    pub fn add_vertex(&mut self) -> usize {
        self.n += 1;
        self.n - 1
    }

    /// Adds an undirected edge and returns its id. `capacity` may be [`INF`].
    pub fn add_edge(&mut self, u: usize, v: usize, capacity: f64) -> usize {
        self.edges.push((u, v, capacity));
        self.edges.len() - 1
    }

    pub fn set_capacity(&mut self, e: usize, capacity: f64) {
        self.edges[e].2 = capacity;
    }

    pub fn add_source(&mut self, v: usize) {
        self.sources.push(v);
    }

    pub fn add_sink(&mut self, v: usize) {
        self.sinks.push(v);
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, e: usize) -> (usize, usize, f64) {
        self.edges[e]
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn sources(&self) -> &[usize] {
        &self.sources
    }

    pub fn sinks(&self) -> &[usize] {
        &self.sinks
    }

    /// Sum of the finite capacities.
    pub fn finite_total(&self) -> f64 {
        self.edges
            .iter()
            .map(|e| e.2)
            .filter(|c| c.is_finite())
            .sum()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidNetwork(m));
        if self.sources.is_empty() {
            return bad("empty source set".into());
        }
        if self.sinks.is_empty() {
            return bad("empty sink set".into());
        }
        let mut role = vec![0u8; self.n];
        for &s in &self.sources {
            if s >= self.n {
                return bad(format!("source {s} out of range"));
            }
            role[s] = 1;
        }
        for &t in &self.sinks {
            if t >= self.n {
                return bad(format!("sink {t} out of range"));
            }
            if role[t] == 1 {
                return bad(format!("vertex {t} is both source and sink"));
            }
        }
        for (i, &(u, v, c)) in self.edges.iter().enumerate() {
            if u >= self.n || v >= self.n {
                return bad(format!("edge {i} has an endpoint out of range"));
            }
            if c.is_nan() || c < 0.0 || c == f64::NEG_INFINITY {
                return bad(format!("edge {i} has capacity {c}"));
            }
        }
        Ok(())
    }

    /// Capacity of the bipartition `side` (true = source side), with INF
    /// edges counted as infinite.
    pub fn cut_capacity(&self, side: &[bool]) -> f64 {
        self.edges
            .iter()
            .filter(|&&(u, v, _)| side[u] != side[v])
            .map(|e| e.2)
            .sum()
    }

    /// True if `side` puts every source on the source side and every sink on the other.
    pub fn respects_terminals(&self, side: &[bool]) -> bool {
        side.len() == self.n
            && self.sources.iter().all(|&s| side[s])
            && self.sinks.iter().all(|&t| !side[t])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cut {
    /// `true` for vertices on the source side.
    pub source_side: Vec<bool>,
    /// Cut capacity, or [`INF`] if every cut uses an infinite edge.
    pub capacity: f64,
    /// Value of the maximum flow found.
    pub flow: f64,
}

impl Cut {
    pub fn is_finite(&self) -> bool {
        self.capacity.is_finite()
    }
}

struct Dinic {
    head: Vec<usize>,
    next: Vec<usize>,
    to: Vec<usize>,
    cap: Vec<f64>,
    level: Vec<u32>,
    cursor: Vec<usize>,
}

const NIL: usize = usize::MAX;

impl Dinic {
    fn new(n: usize) -> Self {
        Dinic {
            head: vec![NIL; n],
            next: Vec::new(),
            to: Vec::new(),
            cap: Vec::new(),
            level: vec![0; n],
            cursor: vec![NIL; n],
        }
    }

    fn push_arc(&mut self, u: usize, v: usize, c: f64) {
        self.to.push(v);
        self.cap.push(c);
        self.next.push(self.head[u]);
        self.head[u] = self.to.len() - 1;
    }

    /// Undirected edge: two arcs, each the other's reverse (ids `2k`, `2k+1`).
    fn add_undirected(&mut self, u: usize, v: usize, c: f64) {
        self.push_arc(u, v, c);
        self.push_arc(v, u, c);
    }

    fn bfs(&mut self, s: usize, t: usize, eps: f64) -> bool {
        self.level.fill(u32::MAX);
        self.level[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            let mut a = self.head[u];
            while a != NIL {
                let v = self.to[a];
                if self.cap[a] > eps && self.level[v] == u32::MAX {
                    self.level[v] = self.level[u] + 1;
                    q.push_back(v);
                }
                a = self.next[a];
            }
        }
        self.level[t] != u32::MAX
    }

    /// One blocking flow, found by repeated advance/retreat path search.
    fn blocking_flow(&mut self, s: usize, t: usize, eps: f64) -> f64 {
        self.cursor.copy_from_slice(&self.head);
        let mut total = 0.0;
        let mut path: Vec<usize> = Vec::new();
        let mut u = s;
        loop {
            if u == t {
                let push = path
                    .iter()
                    .map(|&a| self.cap[a])
                    .fold(f64::INFINITY, f64::min);
                let mut retreat_to = None;
                for (i, &a) in path.iter().enumerate() {
                    self.cap[a] -= push;
                    self.cap[a ^ 1] += push;
                    if retreat_to.is_none() && self.cap[a] <= eps {
                        retreat_to = Some(i);
                    }
                }
                total += push;
                let i = retreat_to.unwrap_or(0);
                path.truncate(i);
                u = if i == 0 { s } else { self.to[path[i - 1]] };
                continue;
            }
            let mut advanced = false;
            while self.cursor[u] != NIL {
                let a = self.cursor[u];
                let v = self.to[a];
                if self.cap[a] > eps && self.level[v] == self.level[u] + 1 {
                    path.push(a);
                    u = v;
                    advanced = true;
                    break;
                }
                self.cursor[u] = self.next[a];
            }
            if advanced {
                continue;
            }
            // dead end: block u and step back
            self.level[u] = u32::MAX;
            match path.pop() {
                None => break,
                Some(a) => {
                    u = self.to[a ^ 1];
                    self.cursor[u] = self.next[self.cursor[u]];
                }
            }
        }
        total
    }

    fn reachable(&self, s: usize, eps: f64) -> Vec<bool> {
        let mut seen = vec![false; self.head.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            let mut a = self.head[u];
            while a != NIL {
                let v = self.to[a];
                if self.cap[a] > eps && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
                a = self.next[a];
            }
        }
        seen
    }
}

/// A minimum cut of `net`.
pub fn min_cut(net: &FlowNetwork) -> Result<Cut> {
    net.validate()?;
    let finite_total = net.finite_total();
    let sentinel = finite_total + 1.0;
    let eps = 1e-12 * finite_total.max(1.0);

    // contract terminals: 0 = sources, 1 = sinks, others renumbered from 2
    let mut map = vec![NIL; net.n];
    for &s in &net.sources {
        map[s] = 0;
    }
    for &t in &net.sinks {
        map[t] = 1;
    }
    let mut m = 2;
    for slot in map.iter_mut() {
        if *slot == NIL {
            *slot = m;
            m += 1;
        }
    }
    let mut merged: HashMap<(usize, usize), f64> = HashMap::with_capacity(net.edges.len());
    for &(u, v, c) in &net.edges {
        let (a, b) = (map[u], map[v]);
        if a == b {
            continue;
        }
        let c = if c.is_finite() { c } else { sentinel };
        *merged.entry((a.min(b), a.max(b))).or_insert(0.0) += c;
    }
    let mut keys: Vec<_> = merged.into_iter().collect();
    keys.sort_unstable_by_key(|e| e.0);
    let mut g = Dinic::new(m);
    for ((a, b), c) in keys {
        g.add_undirected(a, b, c);
    }
    let mut flow = 0.0;
    while g.bfs(0, 1, eps) {
        let f = g.blocking_flow(0, 1, eps);
        if f <= 0.0 {
            break;
        }
        flow += f;
    }
    let reach = g.reachable(0, eps);
    let source_side: Vec<bool> = map.iter().map(|&x| reach[x]).collect();
    let raw: f64 = net
        .edges
        .iter()
        .filter(|&&(u, v, _)| source_side[u] != source_side[v])
        .map(|&(_, _, c)| if c.is_finite() { c } else { sentinel })
        .sum();
    let capacity = if raw > finite_total + 0.5 { INF } else { raw };
    Ok(Cut {
        source_side,
        capacity,
        flow,
    })
}

/// Ids of the original edges crossing `cut`.
pub fn cut_edges(net: &FlowNetwork, cut: &Cut) -> Result<Vec<usize>> {
    if cut.source_side.len() != net.n {
        return Err(Error::InvalidCut(format!(
            "{} sides for {} vertices",
            cut.source_side.len(),
            net.n
        )));
    }
    if !net.respects_terminals(&cut.source_side) {
        return Err(Error::InvalidCut("terminal on the wrong side".into()));
    }
    Ok(net
        .edges
        .iter()
        .enumerate()
        .filter(|(_, &(u, v, _))| cut.source_side[u] != cut.source_side[v])
        .map(|(i, _)| i)
        .collect())
}

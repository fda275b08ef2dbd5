//! Exhaustive reference implementations for small graphs.
//!
//! Nothing here calls the family generators or the matching reduction; the
//! oracles work on their own dense bitmask copy of the graph so agreement
//! with the solvers is independent evidence.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, VertexSet};
use crate::instance::{ColorList, Instance, Weight};
use crate::matching::ColorTuple;

/// Size caps for exhaustive search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_vertices: usize,
    pub max_subsets: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_vertices: 16,
            max_subsets: 1 << 20,
        }
    }
}

impl OracleBudget {
    pub fn new(max_vertices: usize, max_subsets: u64) -> Result<Self> {
        if max_vertices == 0 || max_subsets == 0 {
            return Err(Error::invalid("oracle caps must be positive"));
        }
        Ok(OracleBudget {
            max_vertices,
            max_subsets,
        })
    }

    pub fn check_vertices(&self, n: usize) -> Result<()> {
        let limit = self.max_vertices.min(63);
        if n > limit {
            return Err(Error::SizeLimit {
                what: "vertex count",
                actual: n,
                limit,
            });
        }
        Ok(())
    }

    fn check_subsets(&self, n: usize) -> Result<()> {
        self.check_vertices(n)?;
        if (1u64 << n) > self.max_subsets {
            return Err(Error::SizeLimit {
                what: "subset count",
                actual: 1usize << n,
                limit: self.max_subsets as usize,
            });
        }
        Ok(())
    }
}

/// Dense copy of a graph on positions `0..n` with adjacency bitmasks.
struct Dense {
    labels: Vec<Vertex>,
    adj: Vec<u64>,
}

impl Dense {
    fn new(g: &Graph) -> Dense {
        let labels = g.vertices().to_vec();
        let adj = labels
            .iter()
            .map(|&u| {
                labels
                    .iter()
                    .enumerate()
                    .filter(|&(_, &v)| g.is_adjacent(u, v))
                    .fold(0u64, |m, (j, _)| m | 1 << j)
            })
            .collect();
        Dense { labels, adj }
    }

    fn n(&self) -> usize {
        self.labels.len()
    }

    fn to_set(&self, mask: u64) -> VertexSet {
        bits(mask).map(|j| self.labels[j]).collect()
    }

    fn is_independent(&self, mask: u64) -> bool {
        bits(mask).all(|j| self.adj[j] & mask == 0)
    }
}

fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let j = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(j)
        }
    })
}

fn mask_weight(dense: &Dense, weights: &[Weight], mask: u64) -> Weight {
    bits(mask).fold(Weight::zero(), |acc, j| acc + &weights[dense.labels[j]])
}

/// Backtracking search for a colouring of `vertices` (positions, in order)
/// where adjacent vertices get different colours and each colour comes from
/// `allowed(position)`.
fn list_colorable(adj: &[u64], vertices: &[usize], allowed: &dyn Fn(usize) -> ColorList) -> bool {
    fn go(
        adj: &[u64],
        vertices: &[usize],
        allowed: &dyn Fn(usize) -> ColorList,
        colors: &mut [u32],
        idx: usize,
    ) -> bool {
        let Some(&v) = vertices.get(idx) else {
            return true;
        };
        for c in allowed(v).colors() {
            if bits(adj[v]).any(|u| colors[u] == c) {
                continue;
            }
            colors[v] = c;
            if go(adj, vertices, allowed, colors, idx + 1) {
                return true;
            }
            colors[v] = 0;
        }
        false
    }
    let mut colors = vec![0u32; adj.len()];
    go(adj, vertices, allowed, &mut colors, 0)
}

/// Maximum `w(F)` over vertex sets `F` whose induced subgraph has a proper
/// colouring respecting the lists.
pub fn brute_mwlcis(inst: &Instance, budget: &OracleBudget) -> Result<Weight> {
    let dense = Dense::new(&inst.graph);
    budget.check_subsets(dense.n())?;
    let allowed = |j: usize| inst.lists[dense.labels[j]];
    let mut best = Weight::zero();
    for mask in 0u64..(1 << dense.n()) {
        let w = mask_weight(&dense, &inst.weights, mask);
        if w <= best {
            continue;
        }
        let vertices: Vec<usize> = bits(mask).collect();
        let adj: Vec<u64> = dense.adj.iter().map(|a| a & mask).collect();
        if list_colorable(&adj, &vertices, &allowed) {
            best = w;
        }
    }
    Ok(best)
}

fn is_bipartite(adj: &[u64], mask: u64) -> bool {
    let mut side = vec![None::<bool>; adj.len()];
    for start in bits(mask) {
        if side[start].is_some() {
            continue;
        }
        side[start] = Some(false);
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            let sx = side[x].unwrap();
            for y in bits(adj[x] & mask) {
                match side[y] {
                    None => {
                        side[y] = Some(!sx);
                        stack.push(y);
                    }
                    Some(sy) if sy == sx => return false,
                    Some(_) => {}
                }
            }
        }
    }
    true
}

/// Minimum `w(T)` over vertex sets `T` whose removal leaves a bipartite graph.
pub fn brute_oct(g: &Graph, weights: &[Weight], budget: &OracleBudget) -> Result<Weight> {
    let dense = Dense::new(g);
    budget.check_subsets(dense.n())?;
    let all = if dense.n() == 0 { 0 } else { u64::MAX >> (64 - dense.n()) };
    let mut best: Option<Weight> = None;
    for removed in 0u64..(1 << dense.n()) {
        let w = mask_weight(&dense, weights, removed);
        if best.as_ref().is_some_and(|b| w >= *b) {
            continue;
        }
        if is_bipartite(&dense.adj, all & !removed) {
            best = Some(w);
        }
    }
    Ok(best.unwrap_or_else(Weight::zero))
}

/// Maximum-weight independent set by exhaustive search.
pub fn brute_mwis(g: &Graph, weights: &[Weight], budget: &OracleBudget) -> Result<Weight> {
    let dense = Dense::new(g);
    budget.check_subsets(dense.n())?;
    let mut best = Weight::zero();
    for mask in 0u64..(1 << dense.n()) {
        if dense.is_independent(mask) {
            let w = mask_weight(&dense, weights, mask);
            if w > best {
                best = w;
            }
        }
    }
    Ok(best)
}

/// Maximum weight of a set of vertices pairwise at distance at least `d`.
pub fn brute_distance_mwis(g: &Graph, weights: &[Weight], d: u32, budget: &OracleBudget) -> Result<Weight> {
    budget.check_vertices(g.order())?;
    brute_mwis(&g.power_graph(d)?, weights, budget)
}

/// Whether the graph has a colouring from the lists in which vertices at
/// distance less than `d` get different colours.
pub fn brute_list_dr_coloring(inst: &Instance, budget: &OracleBudget) -> Result<bool> {
    budget.check_vertices(inst.order())?;
    let power = inst.graph.power_graph(inst.d)?;
    let dense = Dense::new(&power);
    let order: Vec<usize> = (0..dense.n()).collect();
    Ok(list_colorable(&dense.adj, &order, &|j| inst.lists[dense.labels[j]]))
}

/// All maximal independent sets, each exactly once, in canonical order.
/// Bron–Kerbosch with pivoting on the complement graph.
pub fn enumerate_maximal_independent_sets(g: &Graph, budget: &OracleBudget) -> Result<Vec<VertexSet>> {
    let dense = Dense::new(g);
    budget.check_vertices(dense.n())?;
    let n = dense.n();
    let all = if n == 0 { 0 } else { u64::MAX >> (64 - n) };
    // non-neighbours in g = neighbours in the complement
    let co: Vec<u64> = (0..n).map(|j| all & !dense.adj[j] & !(1 << j)).collect();

    let mut out = Vec::new();
    let mut calls: u64 = 0;
    fn expand(co: &[u64], r: u64, mut p: u64, mut x: u64, out: &mut Vec<u64>, calls: &mut u64, cap: u64) -> bool {
        *calls += 1;
        if *calls > cap {
            return false;
        }
        if p == 0 {
            if x == 0 {
                out.push(r);
            }
            return true;
        }
        let pivot = bits(p | x).max_by_key(|&u| (co[u] & p).count_ones()).unwrap();
        for v in bits(p & !co[pivot]) {
            if !expand(co, r | 1 << v, p & co[v], x & co[v], out, calls, cap) {
                return false;
            }
            p &= !(1 << v);
            x |= 1 << v;
        }
        true
    }
    let mut masks = Vec::new();
    if !expand(&co, 0, all, 0, &mut masks, &mut calls, budget.max_subsets) {
        return Err(Error::SizeLimit {
            what: "search nodes",
            actual: calls as usize,
            limit: budget.max_subsets as usize,
        });
    }
    out.extend(masks.into_iter().map(|m| dense.to_set(m)));
    out.sort();
    Ok(out)
}

/// Whether `g` contains `k` induced P3s that are vertex-disjoint and pairwise
/// anticomplete, i.e. an induced copy of kP3.
pub fn contains_k_disjoint_p3(g: &Graph, k: u32, budget: &OracleBudget) -> Result<bool> {
    let n = g.order();
    if k == 0 {
        return Ok(true);
    }
    if 3 * k as usize > n {
        return Ok(false);
    }
    let dense = Dense::new(g);
    budget.check_vertices(n)?;
    // every vertex triple with exactly two edges
    let mut paths: Vec<u64> = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let edges = (dense.adj[a] >> b & 1) + (dense.adj[a] >> c & 1) + (dense.adj[b] >> c & 1);
                if edges == 2 {
                    paths.push(1 << a | 1 << b | 1 << c);
                }
            }
        }
    }
    let closed = |mask: u64| bits(mask).fold(mask, |acc, j| acc | dense.adj[j]);
    fn pick(paths: &[u64], from: usize, blocked: u64, left: u32, closed: &dyn Fn(u64) -> u64) -> bool {
        if left == 0 {
            return true;
        }
        for (i, &p) in paths.iter().enumerate().skip(from) {
            // disjoint from and anticomplete to everything chosen so far
            if p & blocked == 0 && pick(paths, i + 1, blocked | closed(p), left - 1, closed) {
                return true;
            }
        }
        false
    }
    Ok(pick(&paths, 0, 0, k, &closed))
}

/// Maximum weight of an induced subgraph `H` of `G[S_1 ∪ .. ∪ S_r]` with a
/// colouring `phi` such that `phi(v)` is in `L(v)`, every vertex of colour `i`
/// lies in `S_i`, and equally coloured vertices are at distance at least `d`
/// in `g`. Exhaustive over all assignments.
pub fn max_colored_subgraph_oracle(
    g: &Graph,
    tuple: &ColorTuple,
    weights: &[Weight],
    lists: &[ColorList],
    d: u32,
    budget: &OracleBudget,
) -> Result<Weight> {
    let union = tuple.union();
    let verts = union.to_vec();
    budget.check_vertices(verts.len())?;
    let dist = |u: Vertex, v: Vertex| g.distance(u, v);

    fn go(
        idx: usize,
        verts: &[Vertex],
        tuple: &ColorTuple,
        weights: &[Weight],
        lists: &[ColorList],
        d: u32,
        dist: &dyn Fn(Vertex, Vertex) -> crate::graph::Distance,
        assigned: &mut Vec<(Vertex, usize)>,
        current: &Weight,
        best: &mut Weight,
    ) {
        let Some(&v) = verts.get(idx) else {
            if current > best {
                *best = current.clone();
            }
            return;
        };
        go(idx + 1, verts, tuple, weights, lists, d, dist, assigned, current, best);
        for (i, part) in tuple.parts().iter().enumerate() {
            if !part.contains(v) || !lists[v].contains(i as u32 + 1) {
                continue;
            }
            if assigned.iter().any(|&(u, c)| c == i && !dist(u, v).at_least(d)) {
                continue;
            }
            assigned.push((v, i));
            let next = current + &weights[v];
            go(idx + 1, verts, tuple, weights, lists, d, dist, assigned, &next, best);
            assigned.pop();
        }
    }
    let mut best = Weight::zero();
    go(0, &verts, tuple, weights, lists, d, &dist, &mut Vec::new(), &Weight::zero(), &mut best);
    Ok(best)
}

//! Immutable simple undirected graphs with stable vertex labels.
//!
//! A top-level graph on `n` vertices uses the labels `0..n`. Induced
//! subgraphs keep the labels of the graph they were taken from, so a vertex
//! set computed on a subgraph is directly a vertex set of the parent.

use std::cmp::Ordering;
use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

pub type Vertex = usize;

/// A set of vertex labels.
///
/// Equality, hashing and ordering depend only on the members, never on the
/// capacity of the underlying bitset. Sets are ordered lexicographically by
/// their ascending member lists.
#[derive(Clone, Default)]
pub struct VertexSet {
    bits: FixedBitSet,
}

impl VertexSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(universe: usize) -> Self {
        VertexSet {
            bits: FixedBitSet::with_capacity(universe),
        }
    }

    pub fn insert(&mut self, v: Vertex) {
        self.bits.grow(v + 1);
        self.bits.insert(v);
    }

    pub fn remove(&mut self, v: Vertex) {
        if v < self.bits.len() {
            self.bits.set(v, false);
        }
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.bits.contains(v)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.bits.ones()
    }

    pub fn to_vec(&self) -> Vec<Vertex> {
        self.iter().collect()
    }

    pub fn first(&self) -> Option<Vertex> {
        self.bits.minimum()
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        VertexSet { bits }
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        VertexSet { bits }
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let mut bits = self.bits.clone();
        bits.difference_with(&other.bits);
        VertexSet { bits }
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        self.bits.union_with(&other.bits);
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        self.bits.intersect_with(&other.bits);
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        self.bits.difference_with(&other.bits);
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.bits.is_disjoint(&other.bits)
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        let mut set = VertexSet::new();
        for v in iter {
            set.insert(v);
        }
        set
    }
}

impl<const N: usize> From<[Vertex; N]> for VertexSet {
    fn from(vs: [Vertex; N]) -> Self {
        vs.into_iter().collect()
    }
}

impl PartialEq for VertexSet {
    fn eq(&self, other: &Self) -> bool {
        self.iter().eq(other.iter())
    }
}

impl Eq for VertexSet {}

impl Hash for VertexSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        for v in self.iter() {
            v.hash(state);
        }
        usize::MAX.hash(state);
    }
}

impl Ord for VertexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Hop distance between two vertices. `Unreachable` compares greater than
/// every finite distance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Finite(u32),
    Unreachable,
}

impl Distance {
    pub fn at_least(self, d: u32) -> bool {
        match self {
            Distance::Finite(x) => x >= d,
            Distance::Unreachable => true,
        }
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Distance::Finite(x) => Some(x),
            Distance::Unreachable => None,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(x) => write!(f, "{x}"),
            Distance::Unreachable => f.write_str("inf"),
        }
    }
}

/// An induced path `endpoint_a - center - endpoint_b`, stored with
/// `endpoint_a < endpoint_b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InducedP3 {
    pub endpoint_a: Vertex,
    pub center: Vertex,
    pub endpoint_b: Vertex,
}

impl InducedP3 {
    pub fn vertices(&self) -> [Vertex; 3] {
        [self.endpoint_a, self.center, self.endpoint_b]
    }
}

/// All-pairs hop distances, indexed by label.
#[derive(Clone, Debug)]
pub struct DistanceTable {
    rows: Vec<Vec<Distance>>,
}

impl DistanceTable {
    /// Distance between two vertices of the graph the table was built for.
    pub fn get(&self, u: Vertex, v: Vertex) -> Distance {
        self.rows[u][v]
    }
}

pub struct Graph {
    universe: usize,
    vertices: VertexSet,
    adj: Vec<VertexSet>,
    distances: OnceLock<DistanceTable>,
}

impl Clone for Graph {
    fn clone(&self) -> Self {
        Graph {
            universe: self.universe,
            vertices: self.vertices.clone(),
            adj: self.adj.clone(),
            distances: OnceLock::new(),
        }
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges() == other.edges()
    }
}

impl Eq for Graph {}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("vertices", &self.vertices)
            .field("edges", &self.edges())
            .finish()
    }
}

impl Graph {
    /// Edgeless graph on the labels `0..n`.
    pub fn empty(n: usize) -> Graph {
        Graph {
            universe: n,
            vertices: (0..n).collect::<VertexSet>().padded(n),
            adj: vec![VertexSet::with_capacity(n); n],
            distances: OnceLock::new(),
        }
    }

    /// Graph on the labels `0..n`. Repeated edges are merged; self-loops and
    /// out-of-range endpoints are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::invalid(format!(
                    "edge ({u}, {v}) references a vertex outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::invalid(format!("self-loop at vertex {u}")));
            }
            g.adj[u].insert(v);
            g.adj[v].insert(u);
        }
        Ok(g)
    }

    /// Size of the label space this graph draws from (the order of the
    /// top-level graph it was derived from).
    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn order(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &VertexSet {
        &self.vertices
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.vertices.contains(v)
    }

    pub fn is_adjacent(&self, u: Vertex, v: Vertex) -> bool {
        u < self.universe && self.adj[u].contains(v)
    }

    pub fn neighbors(&self, v: Vertex) -> &VertexSet {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        self.vertices
            .iter()
            .flat_map(|u| self.adj[u].iter().filter(move |&v| u < v).map(move |v| (u, v)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.iter().map(|v| self.degree(v)).sum::<usize>() / 2
    }

    fn check_vertex(&self, v: Vertex) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::invalid(format!("vertex {v} is not in the graph")))
        }
    }

    fn check_subset(&self, s: &VertexSet) -> Result<()> {
        match s.iter().find(|&v| !self.contains(v)) {
            Some(v) => Err(Error::invalid(format!("vertex {v} is not in the graph"))),
            None => Ok(()),
        }
    }

    /// The subgraph induced by `s`, keeping the original labels.
    pub fn induced_subgraph(&self, s: &VertexSet) -> Result<Graph> {
        self.check_subset(s)?;
        Ok(self.induce(s))
    }

    pub(crate) fn induce(&self, s: &VertexSet) -> Graph {
        let vertices = s.clone().padded(self.universe);
        let mut adj = vec![VertexSet::with_capacity(self.universe); self.universe];
        for v in vertices.iter() {
            adj[v] = self.adj[v].intersection(&vertices);
        }
        Graph {
            universe: self.universe,
            vertices,
            adj,
            distances: OnceLock::new(),
        }
    }

    /// Connected components, each as a vertex set, ordered by smallest label.
    pub fn connected_components(&self) -> Vec<VertexSet> {
        self.components_within(&self.vertices)
    }

    /// Components of the subgraph induced by `s`, ordered by smallest label.
    pub(crate) fn components_within(&self, s: &VertexSet) -> Vec<VertexSet> {
        let mut seen = VertexSet::with_capacity(self.universe);
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for start in s.iter() {
            if seen.contains(start) {
                continue;
            }
            let mut comp = VertexSet::with_capacity(self.universe);
            seen.insert(start);
            queue.push_back(start);
            while let Some(x) = queue.pop_front() {
                comp.insert(x);
                for y in self.adj[x].iter() {
                    if s.contains(y) && !seen.contains(y) {
                        seen.insert(y);
                        queue.push_back(y);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    fn bfs(&self, source: Vertex) -> Vec<Distance> {
        let mut dist = vec![Distance::Unreachable; self.universe];
        dist[source] = Distance::Finite(0);
        let mut queue = VecDeque::from([source]);
        while let Some(x) = queue.pop_front() {
            let Distance::Finite(dx) = dist[x] else {
                unreachable!()
            };
            for y in self.adj[x].iter() {
                if dist[y] == Distance::Unreachable {
                    dist[y] = Distance::Finite(dx + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Shortest-path hop counts from `v` to every vertex of the graph.
    pub fn distances_from(&self, v: Vertex) -> Result<BTreeMap<Vertex, Distance>> {
        self.check_vertex(v)?;
        let row = match self.distances.get() {
            Some(table) => table.rows[v].clone(),
            None => self.bfs(v),
        };
        Ok(self.vertices.iter().map(|u| (u, row[u])).collect())
    }

    /// All-pairs distances, computed by one BFS per vertex on first use and
    /// cached for the lifetime of the graph.
    pub fn distance_table(&self) -> &DistanceTable {
        self.distances.get_or_init(|| {
            let mut rows = vec![Vec::new(); self.universe];
            for v in self.vertices.iter() {
                rows[v] = self.bfs(v);
            }
            DistanceTable { rows }
        })
    }

    pub fn distance(&self, u: Vertex, v: Vertex) -> Distance {
        self.distance_table().get(u, v)
    }

    /// Vertices at distance at least `d` from `v`, unreachable ones included.
    pub fn neighborhood_at_least(&self, v: Vertex, d: u32) -> Result<VertexSet> {
        self.check_vertex(v)?;
        let table = self.distance_table();
        Ok(self
            .vertices
            .iter()
            .filter(|&u| table.get(v, u).at_least(d))
            .collect::<VertexSet>()
            .padded(self.universe))
    }

    /// Vertices other than `v` at distance between 1 and `d` from `v`.
    pub fn neighborhood_at_most(&self, v: Vertex, d: u32) -> Result<VertexSet> {
        self.check_vertex(v)?;
        let table = self.distance_table();
        Ok(self
            .vertices
            .iter()
            .filter(|&u| matches!(table.get(v, u), Distance::Finite(x) if x >= 1 && x <= d))
            .collect::<VertexSet>()
            .padded(self.universe))
    }

    /// Vertices outside `x` with no neighbour in `x`.
    pub fn anti_neighborhood(&self, x: &VertexSet) -> Result<VertexSet> {
        self.check_subset(x)?;
        Ok(self.anti(x))
    }

    pub(crate) fn anti(&self, x: &VertexSet) -> VertexSet {
        let mut out = self.vertices.difference(x);
        for v in x.iter() {
            out.difference_with(&self.adj[v]);
        }
        out
    }

    pub fn is_p3_free(&self) -> bool {
        self.induces_p3_free(&self.vertices)
    }

    /// Whether the subgraph induced by `s` has no induced P3, i.e. every
    /// component is a clique. Equivalently, adjacent vertices of `s` have the
    /// same closed neighbourhood within `s`.
    pub fn induces_p3_free(&self, s: &VertexSet) -> bool {
        let closed = |v: Vertex| {
            let mut n = self.adj[v].intersection(s);
            n.insert(v);
            n
        };
        for v in s.iter() {
            let nv = closed(v);
            for u in self.adj[v].iter() {
                if u > v && s.contains(u) && closed(u) != nv {
                    return false;
                }
            }
        }
        true
    }

    /// Every induced P3 exactly once, ordered by `(center, endpoint_a, endpoint_b)`.
    pub fn enumerate_induced_p3(&self) -> Vec<InducedP3> {
        let mut out = Vec::new();
        for center in self.vertices.iter() {
            let nbrs = self.adj[center].to_vec();
            for (i, &a) in nbrs.iter().enumerate() {
                for &b in &nbrs[i + 1..] {
                    if !self.adj[a].contains(b) {
                        out.push(InducedP3 {
                            endpoint_a: a,
                            center,
                            endpoint_b: b,
                        });
                    }
                }
            }
        }
        out
    }

    /// Whether the components of the subgraph induced by `s` are pairwise at
    /// distance at least `d` in this graph.
    pub fn components_pairwise_far(&self, s: &VertexSet, d: u32) -> Result<bool> {
        self.check_subset(s)?;
        Ok(self.components_far(s, d))
    }

    pub(crate) fn components_far(&self, s: &VertexSet, d: u32) -> bool {
        let comps: Vec<Vec<Vertex>> = self
            .components_within(s)
            .iter()
            .map(VertexSet::to_vec)
            .collect();
        if comps.len() < 2 {
            return true;
        }
        let table = self.distance_table();
        for (i, a) in comps.iter().enumerate() {
            for b in &comps[i + 1..] {
                for &x in a {
                    for &y in b {
                        if !table.get(x, y).at_least(d) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Whether the members of `s` are pairwise at distance at least `d`.
    pub fn is_distance_d_independent(&self, s: &VertexSet, d: u32) -> Result<bool> {
        if d < 2 {
            return Err(Error::invalid(format!("distance parameter must be >= 2, got {d}")));
        }
        self.check_subset(s)?;
        let members = s.to_vec();
        let table = self.distance_table();
        Ok(members.iter().enumerate().all(|(i, &u)| {
            members[i + 1..].iter().all(|&v| table.get(u, v).at_least(d))
        }))
    }

    /// Same labels, with `u ~ v` iff `1 <= dist(u, v) <= d - 1`. Independent
    /// sets of the result are the distance-`d` independent sets of `self`.
    pub fn power_graph(&self, d: u32) -> Result<Graph> {
        if d < 2 {
            return Err(Error::invalid(format!("distance parameter must be >= 2, got {d}")));
        }
        let table = self.distance_table();
        let mut adj = vec![VertexSet::with_capacity(self.universe); self.universe];
        for u in self.vertices.iter() {
            for v in self.vertices.iter() {
                if let Distance::Finite(x) = table.get(u, v) {
                    if x >= 1 && x < d {
                        adj[u].insert(v);
                    }
                }
            }
        }
        Ok(Graph {
            universe: self.universe,
            vertices: self.vertices.clone(),
            adj,
            distances: OnceLock::new(),
        })
    }
}

impl VertexSet {
    fn padded(mut self, universe: usize) -> VertexSet {
        self.bits.grow(universe);
        self
    }
}

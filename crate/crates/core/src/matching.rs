//! Reduction from "best colourable subgraph inside an r-tuple of members" to
//! maximum-weight bipartite matching.
//!
//! For a tuple `(S_1, .., S_r)` whose members induce disjoint unions of
//! cliques, the auxiliary graph `B` has one node per clique of each `G[S_i]`
//! (side X) and one node per vertex of the union (side Y). A vertex is joined
//! to the clique of `S_i` containing it, with the vertex weight on the edge.
//! Matchings of `B` are exactly the colourings that put at most one vertex of
//! each clique into colour class `i`.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, VertexSet};
use crate::instance::{ColorList, ScaledWeights, Weight};

/// One member per colour; `parts()[i]` belongs to colour `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorTuple {
    parts: Vec<VertexSet>,
}

impl ColorTuple {
    pub fn new(parts: Vec<VertexSet>) -> Self {
        ColorTuple { parts }
    }

    pub fn parts(&self) -> &[VertexSet] {
        &self.parts
    }

    pub fn r(&self) -> usize {
        self.parts.len()
    }

    pub fn union(&self) -> VertexSet {
        self.parts.iter().fold(VertexSet::new(), |acc, p| acc.union(p))
    }
}

/// Drops `v` from `S_i` whenever colour `i` is not in `L(v)`.
pub fn preprocess_tuple(tuple: &ColorTuple, lists: &[ColorList]) -> ColorTuple {
    let parts = tuple
        .parts
        .iter()
        .enumerate()
        .map(|(i, part)| {
            let color = i as u32 + 1;
            part.iter().filter(|&v| lists[v].contains(color)).collect()
        })
        .collect();
    ColorTuple { parts }
}

/// The clique with index `component` (1-based, ordered by smallest label) of
/// `G[S_color]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueNode {
    pub color: u32,
    pub component: usize,
    pub members: VertexSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxEdge {
    /// Index into `y_side`.
    pub y: usize,
    /// Index into `x_side`.
    pub x: usize,
    pub weight: Weight,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxiliaryBipartiteGraph {
    pub x_side: Vec<CliqueNode>,
    /// Vertex labels in ascending order.
    pub y_side: Vec<Vertex>,
    /// Sorted by `(y, x)`.
    pub edges: Vec<AuxEdge>,
}

impl AuxiliaryBipartiteGraph {
    pub fn node_count(&self) -> usize {
        self.x_side.len() + self.y_side.len()
    }
}

/// Builds `B` for an already preprocessed tuple.
pub fn build_auxiliary(g: &Graph, tuple: &ColorTuple, weights: &[Weight]) -> Result<AuxiliaryBipartiteGraph> {
    for part in &tuple.parts {
        if let Some(v) = part.iter().find(|&v| !g.contains(v)) {
            return Err(Error::invalid(format!("tuple vertex {v} is not in the graph")));
        }
    }
    let y_side = tuple.union().to_vec();
    let y_index: BTreeMap<Vertex, usize> = y_side.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut x_side = Vec::new();
    let mut edges = Vec::new();
    for (i, part) in tuple.parts.iter().enumerate() {
        for (j, comp) in g.components_within(part).into_iter().enumerate() {
            let x = x_side.len();
            for v in comp.iter() {
                edges.push(AuxEdge {
                    y: y_index[&v],
                    x,
                    weight: weights[v].clone(),
                });
            }
            x_side.push(CliqueNode {
                color: i as u32 + 1,
                component: j + 1,
                members: comp,
            });
        }
    }
    edges.sort_by_key(|e| (e.y, e.x));
    Ok(AuxiliaryBipartiteGraph { x_side, y_side, edges })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchedEdge {
    pub vertex: Vertex,
    pub color: u32,
    pub component: usize,
    pub weight: Weight,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    /// Sorted by vertex.
    pub edges: Vec<MatchedEdge>,
    pub total_weight: Weight,
}

/// Maximum-weight matching of `B`.
///
/// All edges at a Y node carry the same weight, so the matchable subsets of
/// Y form a transversal matroid and the greedy rule is exact: visit Y nodes
/// by decreasing weight (ties by label) and keep each one for which an
/// augmenting path exists. Zero-weight nodes are kept when matchable, so
/// the result also has maximum cardinality among maximum-weight matchings.
pub fn max_weight_matching(b: &AuxiliaryBipartiteGraph) -> Result<Matching> {
    let mut y_weight: Vec<Option<Weight>> = vec![None; b.y_side.len()];
    let mut y_adj: Vec<Vec<usize>> = vec![Vec::new(); b.y_side.len()];
    for e in &b.edges {
        if e.weight.is_negative() {
            return Err(Error::invalid("matching weights must be non-negative"));
        }
        if e.y >= b.y_side.len() || e.x >= b.x_side.len() {
            return Err(Error::invalid("edge endpoint out of range"));
        }
        match &y_weight[e.y] {
            Some(w) if *w != e.weight => {
                return Err(Error::invalid(format!(
                    "edges at vertex {} carry different weights",
                    b.y_side[e.y]
                )))
            }
            _ => y_weight[e.y] = Some(e.weight.clone()),
        }
        y_adj[e.y].push(e.x);
    }
    let weights: Vec<Weight> = y_weight.into_iter().map(|w| w.unwrap_or_else(Weight::zero)).collect();
    let scaled = ScaledWeights::new(&weights)?;
    let (x_of_y, _) = greedy_matching(&scaled.values, &y_adj, b.x_side.len());

    let mut edges = Vec::new();
    let mut total = Weight::zero();
    for (y, x) in x_of_y.into_iter().enumerate() {
        if let Some(x) = x {
            total += &weights[y];
            edges.push(MatchedEdge {
                vertex: b.y_side[y],
                color: b.x_side[x].color,
                component: b.x_side[x].component,
                weight: weights[y].clone(),
            });
        }
    }
    Ok(Matching {
        edges,
        total_weight: total,
    })
}

/// Greedy matroid matching on integer Y weights. Returns the X node matched
/// to each Y node and the total weight.
pub(crate) fn greedy_matching(y_weights: &[i128], y_adj: &[Vec<usize>], num_x: usize) -> (Vec<Option<usize>>, i128) {
    let mut order: Vec<usize> = (0..y_weights.len()).filter(|&y| !y_adj[y].is_empty()).collect();
    order.sort_by(|&a, &b| y_weights[b].cmp(&y_weights[a]).then(a.cmp(&b)));

    let mut y_of_x: Vec<Option<usize>> = vec![None; num_x];
    let mut visited = vec![false; num_x];
    let mut total = 0i128;
    for y in order {
        visited.iter_mut().for_each(|v| *v = false);
        if augment(y, y_adj, &mut y_of_x, &mut visited) {
            total += y_weights[y];
        }
    }
    let mut x_of_y = vec![None; y_weights.len()];
    for (x, y) in y_of_x.into_iter().enumerate() {
        if let Some(y) = y {
            x_of_y[y] = Some(x);
        }
    }
    (x_of_y, total)
}

fn augment(y: usize, y_adj: &[Vec<usize>], y_of_x: &mut [Option<usize>], visited: &mut [bool]) -> bool {
    for &x in &y_adj[y] {
        if visited[x] {
            continue;
        }
        visited[x] = true;
        let free = match y_of_x[x] {
            None => true,
            Some(other) => augment(other, y_adj, y_of_x, visited),
        };
        if free {
            y_of_x[x] = Some(y);
            return true;
        }
    }
    false
}

/// An induced subgraph with a colouring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredSubgraph {
    pub vertices: VertexSet,
    pub coloring: BTreeMap<Vertex, u32>,
    pub weight: Weight,
}

impl ColoredSubgraph {
    /// Independent re-check: colours come from the lists, colour class `i`
    /// lies in `S_i`, and equally coloured vertices are at distance `>= d`
    /// in `g`.
    pub fn is_valid_for(&self, g: &Graph, tuple: &ColorTuple, lists: &[ColorList], d: u32) -> bool {
        if self.coloring.keys().copied().collect::<VertexSet>() != self.vertices {
            return false;
        }
        for (&v, &c) in &self.coloring {
            if !lists[v].contains(c) || c == 0 || c as usize > tuple.r() || !tuple.parts[c as usize - 1].contains(v) {
                return false;
            }
        }
        let entries: Vec<(Vertex, u32)> = self.coloring.iter().map(|(&v, &c)| (v, c)).collect();
        entries.iter().enumerate().all(|(i, &(u, cu))| {
            entries[i + 1..]
                .iter()
                .all(|&(v, cv)| cu != cv || g.distance(u, v).at_least(d))
        })
    }
}

/// Reads the coloured subgraph off a matching of the `B` built from `tuple`.
pub fn extract_solution(g: &Graph, tuple: &ColorTuple, m: &Matching, d: u32) -> Result<ColoredSubgraph> {
    let mut coloring = BTreeMap::new();
    for e in &m.edges {
        let part = tuple
            .parts
            .get(e.color as usize - 1)
            .ok_or_else(|| Error::invalid(format!("matched colour {} exceeds r", e.color)))?;
        if !part.contains(e.vertex) {
            return Err(Error::invalid(format!(
                "vertex {} is not in the part of colour {}",
                e.vertex, e.color
            )));
        }
        if coloring.insert(e.vertex, e.color).is_some() {
            return Err(Error::invalid(format!("vertex {} matched twice", e.vertex)));
        }
    }
    let vertices: VertexSet = coloring.keys().copied().collect();
    let entries: Vec<(Vertex, u32)> = coloring.iter().map(|(&v, &c)| (v, c)).collect();
    for (i, &(u, cu)) in entries.iter().enumerate() {
        for &(v, cv) in &entries[i + 1..] {
            if cu == cv && !g.distance(u, v).at_least(d) {
                return Err(Error::invalid(format!(
                    "vertices {u} and {v} share colour {cu} at distance < {d}"
                )));
            }
        }
    }
    Ok(ColoredSubgraph {
        vertices,
        coloring,
        weight: m.total_weight.clone(),
    })
}

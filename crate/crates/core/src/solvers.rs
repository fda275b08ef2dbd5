//! Top-level solvers: every r-tuple of family members is reduced to a
//! bipartite matching and the best tuple wins.
//!
//! Tuples are enumerated lexicographically by member index (colour 1 is the
//! most significant position) and ties go to the first tuple, so results do
//! not depend on the number of worker threads.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::dist_family::{lambda_k_d, MIN_DISTANCE};
use crate::error::{Error, Result};
use crate::family::gamma_k;
use crate::graph::{Graph, Vertex, VertexSet};
use crate::instance::{total_weight, ColorList, Instance, ScaledWeights, Weight};
use crate::matching::{
    build_auxiliary, extract_solution, greedy_matching, max_weight_matching, preprocess_tuple, ColorTuple,
    ColoredSubgraph,
};
use crate::oracles::{contains_k_disjoint_p3, OracleBudget};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificateKind {
    Mwlcis,
    Mwis,
    Oct,
    Dsis,
    LdrDecision,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub chosen: VertexSet,
    pub coloring: Option<BTreeMap<Vertex, u32>>,
    pub weight: Weight,
    pub kind: CertificateKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision {
    Yes(Solution),
    No,
}

impl Decision {
    pub fn is_yes(&self) -> bool {
        matches!(self, Decision::Yes(_))
    }
}

#[derive(Clone, Debug, Default)]
pub struct SolveOptions {
    /// Worker threads for tuple evaluation; `None` or `Some(1)` runs inline.
    pub jobs: Option<usize>,
    /// Confirm with the exhaustive oracle that the graph is kP3-free before
    /// solving (small graphs only).
    pub verify_k: bool,
    pub budget: OracleBudget,
}

fn check_k(g: &Graph, k: u32, opts: &SolveOptions) -> Result<()> {
    if k < 1 {
        return Err(Error::invalid("k must be at least 1"));
    }
    if opts.verify_k && contains_k_disjoint_p3(g, k, &opts.budget)? {
        return Err(Error::NotKp3Free { k });
    }
    Ok(())
}

/// Whether `coloring` covers exactly `chosen`, uses colours from the lists,
/// and gives different colours to vertices at distance less than `d`.
pub fn is_valid_coloring(
    g: &Graph,
    lists: &[ColorList],
    chosen: &VertexSet,
    coloring: &BTreeMap<Vertex, u32>,
    d: u32,
) -> bool {
    if coloring.keys().copied().collect::<VertexSet>() != *chosen {
        return false;
    }
    if coloring.iter().any(|(&v, &c)| !lists[v].contains(c)) {
        return false;
    }
    let entries: Vec<(Vertex, u32)> = coloring.iter().map(|(&v, &c)| (v, c)).collect();
    entries.iter().enumerate().all(|(i, &(u, cu))| {
        entries[i + 1..]
            .iter()
            .all(|&(v, cv)| cu != cv || g.distance(u, v).at_least(d))
    })
}

/// Precomputed cliques of every (member, colour) pair after list filtering.
struct TupleEvaluator<'a> {
    members: Vec<VertexSet>,
    // slots[m][i]: cliques of member m restricted to vertices that accept colour i + 1
    slots: Vec<Vec<Vec<Vec<Vertex>>>>,
    weights: &'a [i128],
    universe: usize,
    r: usize,
}

struct Scratch {
    position: Vec<usize>,
}

impl<'a> TupleEvaluator<'a> {
    fn new(g: &Graph, members: Vec<VertexSet>, lists: &[ColorList], r: u32, weights: &'a [i128]) -> Self {
        let slots = members
            .iter()
            .map(|m| {
                (1..=r)
                    .map(|c| {
                        let allowed: VertexSet = m.iter().filter(|&v| lists[v].contains(c)).collect();
                        g.components_within(&allowed).iter().map(VertexSet::to_vec).collect()
                    })
                    .collect()
            })
            .collect();
        TupleEvaluator {
            members,
            slots,
            weights,
            universe: g.universe(),
            r: r as usize,
        }
    }

    fn tuple_count(&self) -> Result<u64> {
        (self.members.len() as u64)
            .checked_pow(self.r as u32)
            .ok_or_else(|| Error::Overflow("number of member tuples exceeds 64 bits".into()))
    }

    fn decode(&self, mut t: u64) -> Vec<usize> {
        let m = self.members.len() as u64;
        let mut idx = vec![0; self.r];
        for slot in idx.iter_mut().rev() {
            *slot = (t % m) as usize;
            t /= m;
        }
        idx
    }

    fn scratch(&self) -> Scratch {
        Scratch {
            position: vec![usize::MAX; self.universe],
        }
    }

    /// Maximum matching weight of the auxiliary graph of tuple `t`.
    fn evaluate(&self, t: u64, scratch: &mut Scratch) -> i128 {
        let idx = self.decode(t);
        let mut ys: Vec<Vertex> = Vec::new();
        for (i, &m) in idx.iter().enumerate() {
            for comp in &self.slots[m][i] {
                for &v in comp {
                    if scratch.position[v] == usize::MAX {
                        scratch.position[v] = 0;
                        ys.push(v);
                    }
                }
            }
        }
        ys.sort_unstable();
        for (y, &v) in ys.iter().enumerate() {
            scratch.position[v] = y;
        }
        let mut y_adj: Vec<Vec<usize>> = vec![Vec::new(); ys.len()];
        let mut x = 0;
        for (i, &m) in idx.iter().enumerate() {
            for comp in &self.slots[m][i] {
                for &v in comp {
                    y_adj[scratch.position[v]].push(x);
                }
                x += 1;
            }
        }
        let y_weights: Vec<i128> = ys.iter().map(|&v| self.weights[v]).collect();
        for &v in &ys {
            scratch.position[v] = usize::MAX;
        }
        greedy_matching(&y_weights, &y_adj, x).1
    }

    /// Lexicographically first tuple of maximum value.
    fn best(&self, jobs: Option<usize>) -> Result<(u64, i128)> {
        let total = self.tuple_count()?;
        let pick = |a: (u64, i128), b: (u64, i128)| {
            if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) {
                b
            } else {
                a
            }
        };
        match jobs {
            Some(n) if n > 1 => {
                let pool = thread_pool(n)?;
                Ok(pool.install(|| {
                    (0..total)
                        .into_par_iter()
                        .map_init(|| self.scratch(), |s, t| (t, self.evaluate(t, s)))
                        .reduce(|| (u64::MAX, i128::MIN), pick)
                }))
            }
            _ => {
                let mut s = self.scratch();
                Ok((0..total).map(|t| (t, self.evaluate(t, &mut s))).fold((u64::MAX, i128::MIN), pick))
            }
        }
    }

    /// Lexicographically first tuple reaching `target`.
    fn first_reaching(&self, target: i128, jobs: Option<usize>) -> Result<Option<u64>> {
        let total = self.tuple_count()?;
        match jobs {
            Some(n) if n > 1 => {
                let pool = thread_pool(n)?;
                Ok(pool.install(|| {
                    (0..total)
                        .into_par_iter()
                        .map_init(|| self.scratch(), |s, t| (t, self.evaluate(t, s)))
                        .find_first(|&(_, v)| v >= target)
                        .map(|(t, _)| t)
                }))
            }
            _ => {
                let mut s = self.scratch();
                Ok((0..total).find(|&t| self.evaluate(t, &mut s) >= target))
            }
        }
    }

    fn tuple(&self, t: u64) -> ColorTuple {
        ColorTuple::new(self.decode(t).into_iter().map(|m| self.members[m].clone()).collect())
    }
}

fn thread_pool(n: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map_err(|e| Error::invalid(format!("cannot start {n} worker threads: {e}")))
}

/// Solves one tuple through the public reduction steps.
fn solve_tuple(g: &Graph, tuple: &ColorTuple, weights: &[Weight], lists: &[ColorList], d: u32) -> Result<ColoredSubgraph> {
    let pre = preprocess_tuple(tuple, lists);
    let b = build_auxiliary(g, &pre, weights)?;
    let m = max_weight_matching(&b)?;
    extract_solution(g, &pre, &m, d)
}

/// Maximum-weight vertex set whose induced subgraph has a proper colouring
/// respecting the lists.
pub fn solve_mwlcis(inst: &Instance) -> Result<Solution> {
    solve_mwlcis_with(inst, &SolveOptions::default())
}

pub fn solve_mwlcis_with(inst: &Instance, opts: &SolveOptions) -> Result<Solution> {
    if inst.d != 2 {
        return Err(Error::invalid(format!(
            "max-weight list colourable subgraph uses d = 2, got d = {}",
            inst.d
        )));
    }
    let g = &inst.graph;
    check_k(g, inst.k, opts)?;
    let family = gamma_k(g, inst.k)?;
    let scaled = ScaledWeights::new(&inst.weights)?;
    let eval = TupleEvaluator::new(g, family.maximal_members(), &inst.lists, inst.r, &scaled.values);
    let (t, value) = eval.best(opts.jobs)?;
    let h = solve_tuple(g, &eval.tuple(t), &inst.weights, &inst.lists, 2)?;
    debug_assert_eq!(h.weight, scaled.unscale(value));
    debug_assert!(is_valid_coloring(g, &inst.lists, &h.vertices, &h.coloring, 2));
    Ok(Solution {
        chosen: h.vertices,
        coloring: Some(h.coloring),
        weight: h.weight,
        kind: CertificateKind::Mwlcis,
    })
}

/// Minimum-weight odd cycle transversal: the complement of a maximum-weight
/// induced subgraph that is 2-colourable.
pub fn solve_oct(g: &Graph, weights: &[Weight], k: u32) -> Result<Solution> {
    solve_oct_with(g, weights, k, &SolveOptions::default())
}

pub fn solve_oct_with(g: &Graph, weights: &[Weight], k: u32, opts: &SolveOptions) -> Result<Solution> {
    let inst = Instance::new(g.clone(), weights.to_vec(), vec![ColorList::full(2); g.universe()], 2, k, 2)?;
    let bipartite = solve_mwlcis_with(&inst, opts)?;
    let chosen = g.vertices().difference(&bipartite.chosen);
    let weight = inst.total_weight() - &bipartite.weight;
    debug_assert_eq!(weight, total_weight(weights, &chosen));
    Ok(Solution {
        chosen,
        coloring: None,
        weight,
        kind: CertificateKind::Oct,
    })
}

/// Best member by "heaviest vertex of every clique". Members must induce
/// disjoint unions of cliques.
fn best_clique_representatives(g: &Graph, members: &[VertexSet], weights: &[Weight]) -> (VertexSet, Weight) {
    let mut best: Option<(VertexSet, Weight)> = None;
    for m in members {
        let mut pick = VertexSet::with_capacity(g.universe());
        let mut value = Weight::zero();
        for comp in g.components_within(m) {
            // first vertex of maximum weight
            let v = comp
                .iter()
                .fold(None::<Vertex>, |acc, v| match acc {
                    Some(a) if weights[a] >= weights[v] => Some(a),
                    _ => Some(v),
                })
                .expect("components are non-empty");
            value += &weights[v];
            pick.insert(v);
        }
        if best.as_ref().map_or(true, |(_, b)| value > *b) {
            best = Some((pick, value));
        }
    }
    best.unwrap_or_else(|| (VertexSet::new(), Weight::zero()))
}

/// Maximum-weight independent set.
pub fn solve_mwis(g: &Graph, weights: &[Weight], k: u32) -> Result<Solution> {
    solve_mwis_with(g, weights, k, &SolveOptions::default())
}

pub fn solve_mwis_with(g: &Graph, weights: &[Weight], k: u32, opts: &SolveOptions) -> Result<Solution> {
    check_weights(g, weights)?;
    check_k(g, k, opts)?;
    let family = gamma_k(g, k)?;
    let (chosen, weight) = best_clique_representatives(g, family.members(), weights);
    debug_assert!(g.is_distance_d_independent(&chosen, 2).unwrap_or(false));
    Ok(Solution {
        coloring: Some(chosen.iter().map(|v| (v, 1)).collect()),
        chosen,
        weight,
        kind: CertificateKind::Mwis,
    })
}

/// Maximum-weight set of vertices pairwise at distance at least `d >= 6`.
pub fn solve_distance_d_mwis(g: &Graph, weights: &[Weight], k: u32, d: u32) -> Result<Solution> {
    solve_distance_d_mwis_with(g, weights, k, d, &SolveOptions::default())
}

pub fn solve_distance_d_mwis_with(
    g: &Graph,
    weights: &[Weight],
    k: u32,
    d: u32,
    opts: &SolveOptions,
) -> Result<Solution> {
    if d < MIN_DISTANCE {
        return Err(Error::UnsupportedDistance(d));
    }
    check_weights(g, weights)?;
    check_k(g, k, opts)?;
    let family = lambda_k_d(g, &VertexSet::new(), k, d)?;
    let (chosen, weight) = best_clique_representatives(g, family.members(), weights);
    assert!(
        g.is_distance_d_independent(&chosen, d)?,
        "selected set is not distance-{d} independent"
    );
    Ok(Solution {
        coloring: Some(chosen.iter().map(|v| (v, 1)).collect()),
        chosen,
        weight,
        kind: CertificateKind::Dsis,
    })
}

/// Decides whether the graph has a colouring from the lists in which
/// vertices at distance less than `d >= 6` get different colours.
pub fn solve_list_dr_coloring(inst: &Instance) -> Result<Decision> {
    solve_list_dr_coloring_with(inst, &SolveOptions::default())
}

pub fn solve_list_dr_coloring_with(inst: &Instance, opts: &SolveOptions) -> Result<Decision> {
    if inst.d < MIN_DISTANCE {
        return Err(Error::UnsupportedDistance(inst.d));
    }
    let g = &inst.graph;
    check_k(g, inst.k, opts)?;
    let family = lambda_k_d(g, &VertexSet::new(), inst.k, inst.d)?;
    let unit = vec![1i128; g.universe()];
    let eval = TupleEvaluator::new(g, family.maximal_members(), &inst.lists, inst.r, &unit);
    let Some(t) = eval.first_reaching(g.order() as i128, opts.jobs)? else {
        return Ok(Decision::No);
    };
    let ones = vec![Weight::one(); g.universe()];
    let h = solve_tuple(g, &eval.tuple(t), &ones, &inst.lists, inst.d)?;
    assert_eq!(&h.vertices, g.vertices(), "accepted tuple does not cover the graph");
    debug_assert!(is_valid_coloring(g, &inst.lists, &h.vertices, &h.coloring, inst.d));
    Ok(Decision::Yes(Solution {
        weight: inst.total_weight(),
        chosen: h.vertices,
        coloring: Some(h.coloring),
        kind: CertificateKind::LdrDecision,
    }))
}

fn check_weights(g: &Graph, weights: &[Weight]) -> Result<()> {
    if weights.len() < g.universe() {
        return Err(Error::invalid(format!(
            "expected {} weights, got {}",
            g.universe(),
            weights.len()
        )));
    }
    if weights.iter().any(|w| *w < Weight::zero()) {
        return Err(Error::invalid("weights must be non-negative"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    fn int(x: i64) -> Weight {
        Weight::from_integer(x.into())
    }

    fn unit(n: usize) -> Vec<Weight> {
        vec![Weight::one(); n]
    }

    #[test]
    fn mwlcis_examples() {
        let k3 = Instance::unweighted(complete(3), 2, 1, 2).unwrap();
        let s = solve_mwlcis(&k3).unwrap();
        assert_eq!(s.weight, int(2));
        let colors: Vec<u32> = s.coloring.as_ref().unwrap().values().copied().collect();
        assert_eq!(colors.len(), 2);
        assert_ne!(colors[0], colors[1]);

        let c5 = Instance::unweighted(cycle(5), 1, 2, 2).unwrap();
        assert_eq!(solve_mwlcis(&c5).unwrap().weight, int(2));
    }

    #[test]
    fn mwlcis_rejects_other_distances() {
        let inst = Instance::unweighted(path(3), 1, 2, 6).unwrap();
        assert!(matches!(solve_mwlcis(&inst), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn oct_examples() {
        assert_eq!(solve_oct(&cycle(5), &unit(5), 2).unwrap().weight, int(1));
        assert_eq!(solve_oct(&complete(4), &unit(4), 1).unwrap().weight, int(2));
        let w: Vec<Weight> = (1..=6).map(int).collect();
        assert_eq!(solve_oct(&path(6), &w, 2).unwrap().weight, int(0));
    }

    #[test]
    fn mwis_examples() {
        assert_eq!(solve_mwis(&cycle(5), &unit(5), 2).unwrap().weight, int(2));
        let w = vec![int(3), int(9), int(4), int(9)];
        let s = solve_mwis(&complete(4), &w, 1).unwrap();
        assert_eq!(s.weight, int(9));
        assert_eq!(s.chosen.len(), 1);
    }

    #[test]
    fn distance_mwis_examples() {
        let s = solve_distance_d_mwis(&path(7), &unit(7), 2, 6).unwrap();
        assert_eq!(s.chosen, VertexSet::from([0, 6]));
        assert_eq!(s.weight, int(2));
        let w = vec![int(1), int(4), int(2), int(3), int(0)];
        let s = solve_distance_d_mwis(&complete(5), &w, 1, 6).unwrap();
        assert_eq!(s.chosen, VertexSet::from([1]));
        assert!(matches!(
            solve_distance_d_mwis(&path(7), &unit(7), 2, 5),
            Err(Error::UnsupportedDistance(5))
        ));
    }

    #[test]
    fn list_dr_coloring_examples() {
        let p2 = Instance::unweighted(path(2), 2, 1, 6).unwrap();
        match solve_list_dr_coloring(&p2).unwrap() {
            Decision::Yes(s) => {
                let c = s.coloring.unwrap();
                assert_ne!(c[&0], c[&1]);
            }
            Decision::No => panic!("P2 is (6,2)-colourable"),
        }
        let p7 = Instance::unweighted(path(7), 2, 2, 6).unwrap();
        assert_eq!(solve_list_dr_coloring(&p7).unwrap(), Decision::No);
        let bad = Instance::unweighted(path(2), 2, 1, 4).unwrap();
        assert!(matches!(solve_list_dr_coloring(&bad), Err(Error::UnsupportedDistance(4))));
    }

    #[test]
    fn verify_k_detects_wrong_parameter() {
        let two_p3 = Graph::from_edges(6, [(0, 1), (1, 2), (3, 4), (4, 5)]).unwrap();
        let opts = SolveOptions {
            verify_k: true,
            ..SolveOptions::default()
        };
        assert!(matches!(
            solve_mwis_with(&two_p3, &unit(6), 2, &opts),
            Err(Error::NotKp3Free { k: 2 })
        ));
        assert!(solve_mwis_with(&two_p3, &unit(6), 3, &opts).is_ok());
    }

    #[test]
    fn empty_lists_exclude_vertices() {
        let g = Graph::empty(3);
        let lists = vec![ColorList::full(1), ColorList::empty(), ColorList::full(1)];
        let inst = Instance::new(g, unit(3), lists, 1, 1, 2).unwrap();
        let s = solve_mwlcis(&inst).unwrap();
        assert_eq!(s.chosen, VertexSet::from([0, 2]));
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let g = Graph::from_edges(7, [(0, 1), (1, 2), (2, 3), (3, 4), (5, 6)]).unwrap();
        let w: Vec<Weight> = [3, 1, 4, 1, 5, 9, 2].iter().map(|&x| int(x)).collect();
        let inst = Instance::new(g, w, vec![ColorList::full(2); 7], 2, 2, 2).unwrap();
        let seq = solve_mwlcis(&inst).unwrap();
        let par = solve_mwlcis_with(
            &inst,
            &SolveOptions {
                jobs: Some(4),
                ..SolveOptions::default()
            },
        )
        .unwrap();
        assert_eq!(seq, par);
    }
}

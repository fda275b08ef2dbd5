//! Amiable families of kP3-free graphs.
//!
//! An amiable family of `G` is a collection of vertex sets, each inducing a
//! disjoint union of cliques, such that every maximal independent set of `G`
//! is contained in at least one member.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, VertexSet};
use crate::oracles::{self, OracleBudget};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    Amiable,
    DistanceAmiable { d: u32 },
    ForbiddenDistanceAmiable { d: u32, forbidden: VertexSet },
}

/// A deduplicated set of vertex subsets of one graph, kept in canonical
/// (lexicographic) order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexFamily {
    kind: FamilyKind,
    members: Vec<VertexSet>,
}

impl VertexFamily {
    pub fn new(kind: FamilyKind, mut members: Vec<VertexSet>) -> Self {
        canonicalize(&mut members);
        VertexFamily { kind, members }
    }

    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }

    pub fn members(&self) -> &[VertexSet] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, VertexSet> {
        self.members.iter()
    }

    /// Members not strictly contained in another member, in canonical order.
    pub fn maximal_members(&self) -> Vec<VertexSet> {
        // A strict superset is strictly larger, so only larger sets need checking.
        let mut by_size: Vec<&VertexSet> = self.members.iter().collect();
        by_size.sort_by_key(|s| std::cmp::Reverse(s.len()));
        let mut kept: Vec<&VertexSet> = Vec::new();
        for s in by_size {
            if !kept.iter().any(|t| s.is_subset(t)) {
                kept.push(s);
            }
        }
        let mut out: Vec<VertexSet> = kept.into_iter().cloned().collect();
        out.sort();
        out
    }

    /// Whether some member contains `s`.
    pub fn covers(&self, s: &VertexSet) -> bool {
        self.members.iter().any(|m| s.is_subset(m))
    }
}

pub(crate) fn canonicalize(members: &mut Vec<VertexSet>) {
    members.sort();
    members.dedup();
}

/// Upper bound `2^(k-1) * n^(4(k-1))` on the family size, saturating at
/// `u128::MAX`.
pub fn size_bound(n: usize, k: u32) -> u128 {
    if k == 0 {
        return 1;
    }
    let e = k - 1;
    let pow2 = 1u128.checked_shl(e).unwrap_or(u128::MAX);
    let npow = (n.max(1) as u128).checked_pow(4 * e).unwrap_or(u128::MAX);
    pow2.saturating_mul(npow)
}

/// Why a family fails to be (distance-d) amiable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// A member induces a P3.
    NotP3Free { member: VertexSet },
    /// A member meets the forbidden set.
    MeetsForbidden { member: VertexSet, vertex: Vertex },
    /// Two components of a member are closer than `d`.
    ComponentsTooClose { member: VertexSet, d: u32 },
    /// A member uses a vertex outside the graph.
    ForeignVertex { member: VertexSet, vertex: Vertex },
    /// A maximal (distance-d) independent set lies in no member.
    Uncovered { set: VertexSet },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotP3Free { member } => {
                write!(f, "member {member:?} induces a P3")
            }
            Violation::MeetsForbidden { member, vertex } => {
                write!(f, "member {member:?} contains forbidden vertex {vertex}")
            }
            Violation::ComponentsTooClose { member, d } => {
                write!(f, "member {member:?} has two components at distance < {d}")
            }
            Violation::ForeignVertex { member, vertex } => {
                write!(f, "member {member:?} contains vertex {vertex} outside the graph")
            }
            Violation::Uncovered { set } => {
                write!(f, "maximal independent set {set:?} is not covered by any member")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Ok,
    Counterexample(Violation),
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, Verdict::Ok)
    }
}

/// Computes an amiable family of a kP3-free graph, scanning vertices in
/// label order.
///
/// If `g` contains an induced kP3 the result carries no guarantee.
pub fn gamma_k(g: &Graph, k: u32) -> Result<VertexFamily> {
    gamma_k_with_observer(g, k, |_, _, _| {})
}

/// Like [`gamma_k`], calling `observe(i, prefix, members)` at the end of the
/// `i`-th outer iteration (1-based) of the top-level call, where `prefix`
/// holds the first `i` vertices.
pub fn gamma_k_with_observer<F>(g: &Graph, k: u32, mut observe: F) -> Result<VertexFamily>
where
    F: FnMut(usize, &VertexSet, &[VertexSet]),
{
    if k < 1 {
        return Err(Error::invalid("k must be at least 1"));
    }
    let mut gen = AmiableGenerator::default();
    let members = gen.run(g, k, &mut observe);
    Ok(VertexFamily::new(FamilyKind::Amiable, members))
}

#[derive(Default)]
struct AmiableGenerator {
    // keyed by (vertex set of the recursive subgraph, k)
    memo: HashMap<(VertexSet, u32), Arc<Vec<VertexSet>>>,
}

impl AmiableGenerator {
    fn recurse(&mut self, g: &Graph, within: VertexSet, k: u32) -> Arc<Vec<VertexSet>> {
        if k == 0 {
            // only reachable when the input was not kP3-free
            return Arc::new(vec![VertexSet::new()]);
        }
        let key = (within, k);
        if let Some(hit) = self.memo.get(&key) {
            return Arc::clone(hit);
        }
        let sub = g.induce(&key.0);
        let members = Arc::new(self.run(&sub, k, &mut |_, _, _| {}));
        self.memo.insert(key, Arc::clone(&members));
        members
    }

    fn run(
        &mut self,
        g: &Graph,
        k: u32,
        observe: &mut dyn FnMut(usize, &VertexSet, &[VertexSet]),
    ) -> Vec<VertexSet> {
        let mut members = vec![VertexSet::with_capacity(g.universe())];
        let mut prefix = VertexSet::with_capacity(g.universe());
        for (i, vi) in g.vertices().iter().enumerate() {
            prefix.insert(vi);

            for s in members.iter_mut() {
                s.insert(vi);
                if !g.induces_p3_free(s) {
                    s.remove(vi);
                }
            }

            let mut added = Vec::new();
            // v_i as an endpoint: paths vi - u - w inside the prefix
            for u in g.neighbors(vi).iter().filter(|&u| prefix.contains(u)) {
                for w in g.neighbors(u).iter() {
                    if w == vi || !prefix.contains(w) || g.is_adjacent(vi, w) {
                        continue;
                    }
                    let anti = g.anti(&VertexSet::from([vi, u, w])).intersection(&prefix);
                    for c in self.recurse(g, anti, k - 1).iter() {
                        let mut m = c.clone();
                        m.insert(vi);
                        m.insert(w);
                        added.push(m);
                    }
                }
            }
            // v_i as the centre: paths u - vi - w inside the prefix
            let inner: Vec<Vertex> = g.neighbors(vi).iter().filter(|&u| prefix.contains(u)).collect();
            for (a, &u) in inner.iter().enumerate() {
                for &w in &inner[a + 1..] {
                    if g.is_adjacent(u, w) {
                        continue;
                    }
                    let anti = g.anti(&VertexSet::from([vi, u, w])).intersection(&prefix);
                    for c in self.recurse(g, anti, k - 1).iter() {
                        let mut m = c.clone();
                        m.insert(vi);
                        added.push(m);
                    }
                }
            }

            members.extend(added);
            canonicalize(&mut members);
            debug_assert!(members.iter().all(|s| g.induces_p3_free(s)));
            observe(i + 1, &prefix, &members);
        }
        members
    }
}

/// Checks that every member induces a P3-free subgraph and that every
/// maximal independent set of `g` lies in some member.
pub fn verify_amiable(g: &Graph, fam: &VertexFamily, budget: &OracleBudget) -> Result<Verdict> {
    budget.check_vertices(g.order())?;
    for m in fam.iter() {
        if let Some(v) = m.iter().find(|&v| !g.contains(v)) {
            return Ok(Verdict::Counterexample(Violation::ForeignVertex {
                member: m.clone(),
                vertex: v,
            }));
        }
        if !g.induces_p3_free(m) {
            return Ok(Verdict::Counterexample(Violation::NotP3Free { member: m.clone() }));
        }
    }
    for mis in oracles::enumerate_maximal_independent_sets(g, budget)? {
        if !fam.covers(&mis) {
            return Ok(Verdict::Counterexample(Violation::Uncovered { set: mis }));
        }
    }
    Ok(Verdict::Ok)
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

    #[test]
    fn empty_graph_gives_empty_member() {
        for k in 1..4 {
            let fam = gamma_k(&Graph::empty(0), k).unwrap();
            assert_eq!(fam.members(), &[VertexSet::new()]);
        }
    }

    #[test]
    fn p3_free_graph_with_k1_gives_whole_vertex_set() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (4, 5)]).unwrap();
        let fam = gamma_k(&g, 1).unwrap();
        assert_eq!(fam.members(), &[g.vertices().clone()]);
    }

    #[test]
    fn path_on_three_vertices() {
        // labels 0-1-2 stand for the path 1-2-3
        let g = path(3);
        let fam = gamma_k(&g, 2).unwrap();
        // Hand trace: iteration 1 gives {0}; iteration 2 extends to {0,1};
        // iteration 3 cannot extend, and the path 2-1-0 with 2 as an endpoint
        // contributes {} + {2, 0}.
        assert_eq!(fam.members(), &[VertexSet::from([0, 1]), VertexSet::from([0, 2])]);
        assert!(verify_amiable(&g, &fam, &OracleBudget::default()).unwrap().is_ok());
    }

    #[test]
    fn rejects_k_zero() {
        assert!(gamma_k(&path(3), 0).is_err());
    }

    #[test]
    fn verifier_finds_uncovered_set() {
        let g = path(3);
        let fam = VertexFamily::new(FamilyKind::Amiable, vec![VertexSet::from([0, 1])]);
        let verdict = verify_amiable(&g, &fam, &OracleBudget::default()).unwrap();
        assert_eq!(
            verdict,
            Verdict::Counterexample(Violation::Uncovered { set: VertexSet::from([0, 2]) })
        );

        let whole = VertexFamily::new(FamilyKind::Amiable, vec![g.vertices().clone()]);
        assert!(matches!(
            verify_amiable(&g, &whole, &OracleBudget::default()).unwrap(),
            Verdict::Counterexample(Violation::NotP3Free { .. })
        ));
    }

    #[test]
    fn verifier_accepts_trivial_family_on_cluster_graph() {
        let g = Graph::from_edges(5, [(0, 1), (2, 3), (3, 4), (2, 4)]).unwrap();
        let fam = VertexFamily::new(FamilyKind::Amiable, vec![g.vertices().clone()]);
        assert!(verify_amiable(&g, &fam, &OracleBudget::default()).unwrap().is_ok());
    }

    #[test]
    fn five_cycle() {
        let g = cycle(5);
        let fam = gamma_k(&g, 2).unwrap();
        assert!(verify_amiable(&g, &fam, &OracleBudget::default()).unwrap().is_ok());
        assert!(fam.len() as u128 <= size_bound(5, 2));
    }

    #[test]
    fn verifier_respects_budget() {
        let g = Graph::empty(20);
        let fam = gamma_k(&g, 1).unwrap();
        assert!(matches!(
            verify_amiable(&g, &fam, &OracleBudget::default()),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn maximal_members_drop_contained_sets() {
        let fam = VertexFamily::new(
            FamilyKind::Amiable,
            vec![
                VertexSet::from([0]),
                VertexSet::from([0, 2]),
                VertexSet::from([1]),
                VertexSet::from([0, 2]),
            ],
        );
        assert_eq!(fam.len(), 3);
        assert_eq!(fam.maximal_members(), vec![VertexSet::from([0, 2]), VertexSet::from([1])]);
    }

    #[test]
    fn size_bound_values() {
        assert_eq!(size_bound(10, 1), 1);
        assert_eq!(size_bound(3, 2), 2 * 81);
        assert_eq!(size_bound(1000, 10), u128::MAX);
    }
}

//! F-avoiding distance-d amiable families for `d >= 6`.
//!
//! Every member avoids the forbidden set `F`, induces a disjoint union of
//! cliques, and has its cliques pairwise at distance at least `d` in the
//! host graph. Every maximal F-avoiding distance-d independent set lies in
//! some member.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::family::{canonicalize, FamilyKind, Verdict, VertexFamily, Violation};
use crate::graph::{Graph, Vertex, VertexSet};
use crate::oracles::{self, OracleBudget};

pub const MIN_DISTANCE: u32 = 6;

/// Computes an F-avoiding distance-d amiable family of a kP3-free graph,
/// scanning vertices in label order.
///
/// Fails with [`Error::UnsupportedDistance`] when `d < 6`.
pub fn lambda_k_d(g: &Graph, forbidden: &VertexSet, k: u32, d: u32) -> Result<VertexFamily> {
    if d < MIN_DISTANCE {
        return Err(Error::UnsupportedDistance(d));
    }
    if k < 1 {
        return Err(Error::invalid("k must be at least 1"));
    }
    if let Some(v) = forbidden.iter().find(|&v| !g.contains(v)) {
        return Err(Error::invalid(format!("forbidden vertex {v} is not in the graph")));
    }
    let mut gen = DistanceGenerator { d, memo: HashMap::new() };
    let members = gen.run(g, forbidden, k);
    let kind = if forbidden.is_empty() {
        FamilyKind::DistanceAmiable { d }
    } else {
        FamilyKind::ForbiddenDistanceAmiable {
            d,
            forbidden: forbidden.clone(),
        }
    };
    Ok(VertexFamily::new(kind, members))
}

struct DistanceGenerator {
    d: u32,
    // keyed by (vertex set of the recursive subgraph, its forbidden set, k)
    memo: HashMap<(VertexSet, VertexSet, u32), Arc<Vec<VertexSet>>>,
}

impl DistanceGenerator {
    fn run(&mut self, g: &Graph, forbidden: &VertexSet, k: u32) -> Vec<VertexSet> {
        let mut members = vec![VertexSet::with_capacity(g.universe())];
        let mut prefix = VertexSet::with_capacity(g.universe());
        // recursion results around a root depend only on (g, F, root)
        let mut around: HashMap<Vertex, Arc<Vec<VertexSet>>> = HashMap::new();
        let on_p3: VertexSet = g.enumerate_induced_p3().iter().flat_map(|p| p.vertices()).collect();

        for vi in g.vertices().iter() {
            prefix.insert(vi);
            if forbidden.contains(vi) {
                continue;
            }

            for s in members.iter_mut() {
                s.insert(vi);
                if !(g.induces_p3_free(s) && g.components_far(s, self.d)) {
                    s.remove(vi);
                }
            }

            // Every induced P3 of the prefix graph, not only those through v_i.
            // Endpoints and centres outside F become roots; the recursion
            // depends only on the root, so each root is handled once.
            //
            // v_i is also a root whenever it lies on an induced P3 of the
            // whole graph. Members may already contain later vertices, so the
            // P3 that blocks extending a member by v_i need not lie in the
            // prefix; without this root such sets can go uncovered.
            let mut roots = BTreeSet::new();
            if on_p3.contains(vi) {
                roots.insert(vi);
            }
            for p in g.induce(&prefix).enumerate_induced_p3() {
                for u in [p.endpoint_a, p.endpoint_b, p.center] {
                    if !forbidden.contains(u) {
                        roots.insert(u);
                    }
                }
            }

            let mut added = Vec::new();
            for u in roots {
                let family = match around.get(&u) {
                    Some(f) => Arc::clone(f),
                    None => {
                        let f = self.around_root(g, forbidden, k, u);
                        around.insert(u, Arc::clone(&f));
                        f
                    }
                };
                for c in family.iter() {
                    let mut m = c.clone();
                    m.insert(u);
                    added.push(m);
                }
            }

            members.extend(added);
            canonicalize(&mut members);
        }
        members
    }

    /// The family of the subgraph at distance >= 4 from `u`, with everything
    /// closer than `d` to `u` added to the forbidden set.
    fn around_root(&mut self, g: &Graph, forbidden: &VertexSet, k: u32, u: Vertex) -> Arc<Vec<VertexSet>> {
        if k <= 1 {
            // only reachable when the input was not kP3-free
            return Arc::new(vec![VertexSet::new()]);
        }
        let table = g.distance_table();
        let mut far = VertexSet::with_capacity(g.universe());
        let mut sub_forbidden = VertexSet::with_capacity(g.universe());
        for x in g.vertices().iter() {
            let dist = table.get(u, x);
            if dist.at_least(4) {
                far.insert(x);
                if forbidden.contains(x) || !dist.at_least(self.d) {
                    sub_forbidden.insert(x);
                }
            }
        }
        let key = (far, sub_forbidden, k - 1);
        if let Some(hit) = self.memo.get(&key) {
            return Arc::clone(hit);
        }
        let sub = g.induce(&key.0);
        let members = Arc::new(self.run(&sub, &key.1, k - 1));
        debug_assert!(
            members
                .iter()
                .all(|c| c.iter().all(|x| table.get(u, x).at_least(self.d))),
            "recursive member not at distance >= d from its root"
        );
        self.memo.insert(key, Arc::clone(&members));
        members
    }
}

/// Checks the four defining properties of an F-avoiding distance-d amiable
/// family. Coverage is checked against the maximal independent sets of the
/// `(d-1)`-th power graph restricted to `V \ F`.
pub fn verify_distance_family(
    g: &Graph,
    forbidden: &VertexSet,
    d: u32,
    fam: &VertexFamily,
    budget: &OracleBudget,
) -> Result<Verdict> {
    budget.check_vertices(g.order())?;
    if d < 2 {
        return Err(Error::invalid(format!("distance parameter must be >= 2, got {d}")));
    }
    for m in fam.iter() {
        if let Some(v) = m.iter().find(|&v| !g.contains(v)) {
            return Ok(Verdict::Counterexample(Violation::ForeignVertex {
                member: m.clone(),
                vertex: v,
            }));
        }
        if let Some(v) = m.iter().find(|&v| forbidden.contains(v)) {
            return Ok(Verdict::Counterexample(Violation::MeetsForbidden {
                member: m.clone(),
                vertex: v,
            }));
        }
        if !g.induces_p3_free(m) {
            return Ok(Verdict::Counterexample(Violation::NotP3Free { member: m.clone() }));
        }
        if !g.components_far(m, d) {
            return Ok(Verdict::Counterexample(Violation::ComponentsTooClose {
                member: m.clone(),
                d,
            }));
        }
    }
    let allowed = g.vertices().difference(forbidden);
    let power = g.power_graph(d)?.induced_subgraph(&allowed)?;
    for mis in oracles::enumerate_maximal_independent_sets(&power, budget)? {
        if !fam.covers(&mis) {
            return Ok(Verdict::Counterexample(Violation::Uncovered { set: mis }));
        }
    }
    Ok(Verdict::Ok)
}

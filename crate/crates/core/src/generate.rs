//! Seeded generators of kP3-free graphs.
//!
//! All randomness comes from [`SeededRng`], a ChaCha8 stream seeded with
//! `ChaCha8Rng::seed_from_u64(seed)`. Draws are defined on raw `u64` words
//! so the output is reproducible bit for bit:
//!
//! * `below(m)`: rejection sampling; discard words `>= 2^64 - (2^64 mod m)`,
//!   return `word mod m`.
//! * `chance(p)`: take the top 53 bits `x` of a word and return
//!   `x / 2^53 < p`.
//! * `permutation(n)`: Fisher-Yates from the last position down, swapping
//!   position `i` with `below(i + 1)`.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::oracles::{contains_k_disjoint_p3, OracleBudget};

#[derive(Clone, Debug)]
pub struct SeededRng(ChaCha8Rng);

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform integer in `0..m`; `m` must be positive.
    pub fn below(&mut self, m: u64) -> u64 {
        assert!(m > 0, "below(0)");
        let zone = u64::MAX - (u64::MAX - m + 1) % m;
        loop {
            let x = self.next_u64();
            if x <= zone {
                return x % m;
            }
        }
    }

    /// Uniform integer in `lo..=hi`.
    pub fn range(&mut self, lo: u64, hi: u64) -> u64 {
        lo + self.below(hi - lo + 1)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        ((self.next_u64() >> 11) as f64) * (1.0 / (1u64 << 53) as f64) < p
    }

    pub fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut p: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = self.below(i as u64 + 1) as usize;
            p.swap(i, j);
        }
        p
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorMode {
    /// Random graph on at most `3k - 1` vertices plus a random cluster graph.
    Structured,
    /// Random graphs resampled until they are kP3-free.
    Rejection,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSpec {
    pub mode: GeneratorMode,
    pub n: usize,
    pub k: u32,
    /// Edge probability of the random parts; in structured mode it is also
    /// the probability that the next cluster vertex joins the current clique.
    pub edge_density: f64,
    pub seed: u64,
    /// Resampling cap for rejection mode.
    pub max_attempts: u32,
}

impl GeneratorSpec {
    pub fn structured(n: usize, k: u32, edge_density: f64, seed: u64) -> Self {
        GeneratorSpec {
            mode: GeneratorMode::Structured,
            n,
            k,
            edge_density,
            seed,
            max_attempts: 1000,
        }
    }

    pub fn rejection(n: usize, k: u32, edge_density: f64, seed: u64) -> Self {
        GeneratorSpec {
            mode: GeneratorMode::Rejection,
            ..GeneratorSpec::structured(n, k, edge_density, seed)
        }
    }
}

/// Generates a kP3-free graph; the output depends only on `spec`.
pub fn generate_kp3_free(spec: &GeneratorSpec) -> Result<Graph> {
    if spec.k < 1 {
        return Err(Error::invalid("k must be at least 1"));
    }
    if !(0.0..=1.0).contains(&spec.edge_density) {
        return Err(Error::invalid(format!(
            "edge density must be in [0, 1], got {}",
            spec.edge_density
        )));
    }
    let mut rng = SeededRng::new(spec.seed);
    match spec.mode {
        GeneratorMode::Structured => Ok(structured(spec, &mut rng)),
        GeneratorMode::Rejection => rejection(spec, &mut rng),
    }
}

fn random_edges(rng: &mut SeededRng, vertices: &[Vertex], p: f64, edges: &mut Vec<(Vertex, Vertex)>) {
    for (i, &u) in vertices.iter().enumerate() {
        for &v in &vertices[i + 1..] {
            if rng.chance(p) {
                edges.push((u, v));
            }
        }
    }
}

fn structured(spec: &GeneratorSpec, rng: &mut SeededRng) -> Graph {
    let n = spec.n;
    // Part (i) has too few vertices for k disjoint P3s; part (ii) is a
    // cluster graph and has no induced P3 at all.
    let small = n.min(3 * spec.k as usize - 1);
    let labels = rng.permutation(n);
    let mut edges = Vec::new();
    random_edges(rng, &labels[..small], spec.edge_density, &mut edges);
    let mut clique: Vec<Vertex> = Vec::new();
    for &v in &labels[small..] {
        if !clique.is_empty() && !rng.chance(spec.edge_density) {
            clique.clear();
        }
        edges.extend(clique.iter().map(|&u| (u, v)));
        clique.push(v);
    }
    Graph::from_edges(n, edges).expect("generated edges are valid")
}

fn rejection(spec: &GeneratorSpec, rng: &mut SeededRng) -> Result<Graph> {
    let budget = OracleBudget::default();
    budget.check_vertices(spec.n)?;
    let labels: Vec<Vertex> = (0..spec.n).collect();
    for _ in 0..spec.max_attempts {
        let mut edges = Vec::new();
        random_edges(rng, &labels, spec.edge_density, &mut edges);
        let g = Graph::from_edges(spec.n, edges).expect("generated edges are valid");
        if !contains_k_disjoint_p3(&g, spec.k, &budget)? {
            return Ok(g);
        }
    }
    Err(Error::GeneratorExhausted {
        attempts: spec.max_attempts,
        reason: format!(
            "every sample on {} vertices at density {} contained {} disjoint induced P3s",
            spec.n, spec.edge_density, spec.k
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn below_stays_in_range() {
        let mut rng = SeededRng::new(1);
        for m in [1, 2, 3, 7, 1000] {
            for _ in 0..200 {
                assert!(rng.below(m) < m);
            }
        }
        let mut p = rng.permutation(10);
        p.sort();
        assert_eq!(p, (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn structured_is_deterministic_and_kp3_free() {
        let spec = GeneratorSpec::structured(20, 2, 0.5, 7);
        let g = generate_kp3_free(&spec).unwrap();
        assert_eq!(g, generate_kp3_free(&spec).unwrap());
        assert_eq!(g.order(), 20);
        assert!(!contains_k_disjoint_p3(&g, 2, &OracleBudget::new(20, 1 << 24).unwrap()).unwrap());
        assert_ne!(g, generate_kp3_free(&GeneratorSpec::structured(20, 2, 0.5, 8)).unwrap());
    }

    #[test]
    fn structured_k1_is_a_cluster_graph() {
        for seed in 0..10 {
            let g = generate_kp3_free(&GeneratorSpec::structured(10, 1, 0.6, seed)).unwrap();
            assert!(g.is_p3_free());
        }
    }

    #[test]
    fn rejection_mode() {
        let spec = GeneratorSpec::rejection(8, 2, 0.5, 3);
        let g = generate_kp3_free(&spec).unwrap();
        assert_eq!(g, generate_kp3_free(&spec).unwrap());
        assert!(!contains_k_disjoint_p3(&g, 2, &OracleBudget::default()).unwrap());
    }

    #[test]
    fn rejection_gives_up() {
        let spec = GeneratorSpec {
            max_attempts: 0,
            ..GeneratorSpec::rejection(8, 1, 0.5, 3)
        };
        assert!(matches!(
            generate_kp3_free(&spec),
            Err(Error::GeneratorExhausted { attempts: 0, .. })
        ));
        assert!(generate_kp3_free(&GeneratorSpec::rejection(40, 2, 0.5, 0)).is_err());
    }
}

//! JSON run reports, one object per line. Field order is fixed by the struct layout and every
//! number that can be fractional is an exact rational string.

use std::collections::BTreeMap;

use serde::Serialize;
use sha2::{Digest, Sha256};

use kp3::io::{format_weight, serialize_instance};
use kp3::{Instance, Vertex, VertexSet, Weight};

#[derive(Serialize)]
pub struct InstanceSummary {
    pub sha256: String,
    pub n: usize,
    pub m: usize,
    pub r: u32,
    pub k: u32,
    pub d: u32,
}

impl InstanceSummary {
    pub fn of(inst: &Instance) -> Self {
        let digest = Sha256::digest(serialize_instance(inst).as_bytes());
        InstanceSummary {
            sha256: digest.iter().map(|b| format!("{b:02x}")).collect(),
            n: inst.graph.universe(),
            m: inst.graph.edge_count(),
            r: inst.r,
            k: inst.k,
            d: inst.d,
        }
    }
}

#[derive(Serialize)]
pub struct Verdicts {
    pub solution: &'static str,
    pub k_check: &'static str,
    pub oracle: String,
}

#[derive(Serialize)]
pub struct SolveReport {
    pub command: String,
    pub instance: InstanceSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decision: Option<&'static str>,
    pub weight: Option<String>,
    pub chosen: Option<Vec<Vertex>>,
    pub coloring: Option<Vec<[u64; 2]>>,
    pub verdicts: Verdicts,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_us: Option<u64>,
}

#[derive(Serialize)]
pub struct FamilyReport {
    pub command: String,
    pub instance: InstanceSummary,
    pub forbidden: Vec<Vertex>,
    pub family_size: usize,
    pub size_bound: String,
    pub within_bound: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub members: Option<Vec<Vec<Vertex>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_us: Option<u64>,
}

/// 1-based labels, ascending.
pub fn one_based(s: &VertexSet) -> Vec<Vertex> {
    s.iter().map(|v| v + 1).collect()
}

pub fn coloring_pairs(c: &BTreeMap<Vertex, u32>) -> Vec<[u64; 2]> {
    c.iter().map(|(&v, &col)| [v as u64 + 1, col as u64]).collect()
}

pub fn weight_string(w: &Weight) -> String {
    format_weight(w)
}

pub fn to_json<T: Serialize>(report: &T) -> String {
    let mut s = serde_json::to_string(report).expect("reports always serialize");
    s.push('\n');
    s
}

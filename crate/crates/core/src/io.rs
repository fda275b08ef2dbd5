//! Line-oriented text formats for instances, families and forbidden sets.
//!
//! Instance files extend the DIMACS edge format:
//!
//! ```text
//! c any comment
//! p edge <n> <m>
//! e <u> <v>
//! w <v> <weight>          weight is an integer or p/q
//! l <v> <c1> <c2> ...     colours in 1..=r, possibly none
//! param r|k|d <value>     "r <value>" etc. are accepted as shorthand
//! ```
//!
//! Vertices are 1-based in files and 0-based in memory. Missing weights
//! default to 1, missing lists to `{1..r}`, and missing parameters to
//! `r = 1`, `k = n/3 + 1` (which every graph on n vertices satisfies) and
//! `d = 2`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::family::{FamilyKind, VertexFamily};
use crate::graph::{Graph, Vertex, VertexSet};
use crate::instance::{ColorList, Instance, Weight, MAX_COLORS};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn number<T: std::str::FromStr>(line: usize, token: &str, what: &str) -> Result<T> {
    token
        .parse()
        .map_err(|_| parse_err(line, format!("expected {what}, found {token:?}")))
}

/// A 1-based vertex token, checked against `n` and converted to a label.
fn vertex(line: usize, token: &str, n: usize) -> Result<Vertex> {
    let v: usize = number(line, token, "a vertex number")?;
    if v == 0 || v > n {
        return Err(Error::Semantic(format!(
            "line {line}: vertex {v} does not exist (vertices are 1..={n})"
        )));
    }
    Ok(v - 1)
}

/// Parses an exact non-negative rational written as `a` or `a/b`.
pub fn parse_weight(token: &str) -> Option<Weight> {
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    let (num, den) = match token.split_once('/') {
        Some((a, b)) => (a, b),
        None => (token, "1"),
    };
    if !digits(num) || !digits(den) {
        return None;
    }
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Weight::new(num.parse().ok()?, den))
}

/// Formats an exact rational as `a` or reduced `a/b`.
pub fn format_weight(w: &Weight) -> String {
    if w.denom().is_one() {
        w.numer().to_string()
    } else {
        format!("{}/{}", w.numer(), w.denom())
    }
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges: BTreeSet<(Vertex, Vertex)> = BTreeSet::new();
    let mut edge_lines = 0usize;
    let mut weights: Vec<Option<Weight>> = Vec::new();
    let mut lists: Vec<Option<(usize, Vec<u32>)>> = Vec::new();
    let mut params: [Option<u32>; 3] = [None; 3];

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let tokens: Vec<&str> = raw.split_whitespace().collect();
        let Some(&tag) = tokens.first() else {
            continue;
        };
        if tag == "c" {
            continue;
        }
        if tag == "p" {
            if header.is_some() {
                return Err(parse_err(line, "duplicate problem line"));
            }
            if tokens.len() != 4 || tokens[1] != "edge" {
                return Err(parse_err(line, "expected \"p edge <n> <m>\""));
            }
            let n = number(line, tokens[2], "a vertex count")?;
            let m = number(line, tokens[3], "an edge count")?;
            header = Some((n, m));
            weights = vec![None; n];
            lists = vec![None; n];
            continue;
        }
        if matches!(tag, "param" | "r" | "k" | "d") {
            let rest = if tag == "param" { &tokens[1..] } else { &tokens[..] };
            if rest.len() != 2 {
                return Err(parse_err(line, "expected \"param r|k|d <value>\""));
            }
            let slot = match rest[0] {
                "r" => 0,
                "k" => 1,
                "d" => 2,
                other => return Err(parse_err(line, format!("unknown parameter {other:?}"))),
            };
            if params[slot].is_some() {
                return Err(parse_err(line, format!("parameter {} given twice", rest[0])));
            }
            params[slot] = Some(number(line, rest[1], "a non-negative integer")?);
            continue;
        }
        let Some((n, _)) = header else {
            return Err(parse_err(line, format!("{tag:?} line before the \"p edge\" line")));
        };
        match tag {
            "e" => {
                if tokens.len() != 3 {
                    return Err(parse_err(line, "expected \"e <u> <v>\""));
                }
                let u = vertex(line, tokens[1], n)?;
                let v = vertex(line, tokens[2], n)?;
                if u == v {
                    return Err(Error::Semantic(format!("line {line}: self-loop at vertex {}", u + 1)));
                }
                if !edges.insert((u.min(v), u.max(v))) {
                    return Err(Error::Semantic(format!(
                        "line {line}: edge {} {} listed twice",
                        u + 1,
                        v + 1
                    )));
                }
                edge_lines += 1;
            }
            "w" => {
                if tokens.len() != 3 {
                    return Err(parse_err(line, "expected \"w <v> <weight>\""));
                }
                let v = vertex(line, tokens[1], n)?;
                let w = parse_weight(tokens[2]).ok_or_else(|| {
                    parse_err(line, format!("expected a non-negative integer or p/q, found {:?}", tokens[2]))
                })?;
                if weights[v].replace(w).is_some() {
                    return Err(Error::Semantic(format!("line {line}: second weight for vertex {}", v + 1)));
                }
            }
            "l" => {
                if tokens.len() < 2 {
                    return Err(parse_err(line, "expected \"l <v> <colours...>\""));
                }
                let v = vertex(line, tokens[1], n)?;
                let colors = tokens[2..]
                    .iter()
                    .map(|t| number::<u32>(line, t, "a colour"))
                    .collect::<Result<Vec<_>>>()?;
                if lists[v].replace((line, colors)).is_some() {
                    return Err(Error::Semantic(format!("line {line}: second list for vertex {}", v + 1)));
                }
            }
            other => return Err(parse_err(line, format!("unknown line type {other:?}"))),
        }
    }

    let (n, m) = header.ok_or_else(|| parse_err(text.lines().count().max(1), "missing \"p edge <n> <m>\" line"))?;
    if edge_lines != m {
        return Err(Error::Semantic(format!(
            "header announces {m} edges but {edge_lines} were given"
        )));
    }
    let r = params[0].unwrap_or(1);
    let k = params[1].unwrap_or((n / 3 + 1) as u32);
    let d = params[2].unwrap_or(2);
    if r == 0 || r > MAX_COLORS {
        return Err(Error::Semantic(format!("r must be in 1..={MAX_COLORS}, got {r}")));
    }
    let lists = lists
        .into_iter()
        .enumerate()
        .map(|(v, entry)| match entry {
            None => Ok(ColorList::full(r)),
            Some((line, colors)) => {
                if let Some(c) = colors.iter().find(|&&c| c == 0 || c > r) {
                    return Err(Error::Semantic(format!(
                        "line {line}: colour {c} of vertex {} is outside 1..={r}",
                        v + 1
                    )));
                }
                ColorList::from_colors(colors)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let weights = weights.into_iter().map(|w| w.unwrap_or_else(Weight::one)).collect();
    let graph = Graph::from_edges(n, edges)?;
    Instance::new(graph, weights, lists, r, k, d).map_err(|e| match e {
        Error::InvalidArgument(msg) => Error::Semantic(msg),
        other => other,
    })
}

/// Canonical text form: header, parameters, edges in lexicographic order,
/// then weights other than 1 and lists other than `{1..r}`, by vertex.
pub fn serialize_instance(inst: &Instance) -> String {
    let g = &inst.graph;
    let edges = g.edges();
    let mut out = String::new();
    let _ = writeln!(out, "p edge {} {}", g.universe(), edges.len());
    let _ = writeln!(out, "param r {}", inst.r);
    let _ = writeln!(out, "param k {}", inst.k);
    let _ = writeln!(out, "param d {}", inst.d);
    for (u, v) in edges {
        let _ = writeln!(out, "e {} {}", u + 1, v + 1);
    }
    for (v, w) in inst.weights.iter().enumerate() {
        if !w.is_one() {
            let _ = writeln!(out, "w {} {}", v + 1, format_weight(w));
        }
    }
    let full = ColorList::full(inst.r);
    for (v, l) in inst.lists.iter().enumerate() {
        if *l != full {
            let _ = write!(out, "l {}", v + 1);
            for c in l.colors() {
                let _ = write!(out, " {c}");
            }
            out.push('\n');
        }
    }
    out
}

/// Parses lines of the form `<tag> v1 v2 ...` (1-based), skipping blank
/// lines and `c` comments.
fn parse_vertex_lines(text: &str, tag: &str, n: usize) -> Result<Vec<VertexSet>> {
    let mut sets = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let mut tokens = raw.split_whitespace();
        match tokens.next() {
            None | Some("c") => continue,
            Some(t) if t == tag => {
                let mut set = VertexSet::with_capacity(n);
                for t in tokens {
                    set.insert(vertex(line, t, n)?);
                }
                sets.push(set);
            }
            Some(other) => {
                return Err(parse_err(line, format!("expected a {tag:?} line, found {other:?}")));
            }
        }
    }
    Ok(sets)
}

fn write_vertex_line(out: &mut String, tag: &str, s: &VertexSet) {
    out.push_str(tag);
    for v in s.iter() {
        let _ = write!(out, " {}", v + 1);
    }
    out.push('\n');
}

/// Family files hold one `m v1 v2 ...` line per member.
pub fn parse_family(text: &str, n: usize, kind: FamilyKind) -> Result<VertexFamily> {
    Ok(VertexFamily::new(kind, parse_vertex_lines(text, "m", n)?))
}

pub fn serialize_family(fam: &VertexFamily) -> String {
    let mut out = String::new();
    for m in fam.iter() {
        write_vertex_line(&mut out, "m", m);
    }
    out
}

/// Forbidden-set files hold `f v1 v2 ...` lines; their union is the set.
pub fn parse_forbidden(text: &str, n: usize) -> Result<VertexSet> {
    Ok(parse_vertex_lines(text, "f", n)?
        .into_iter()
        .fold(VertexSet::with_capacity(n), |acc, s| acc.union(&s)))
}

pub fn serialize_forbidden(f: &VertexSet) -> String {
    let mut out = String::new();
    write_vertex_line(&mut out, "f", f);
    out
}

//! Deterministic stage-based graph constructions driven by a bit prefix.
//!
//! Each construction consumes the prefix one bit per stage: stage 0 does
//! nothing, and stage `s` (for `s >= 1`) consumes `prefix[s]`. Fresh
//! vertices are the smallest unused naturals in order of addition, so a
//! prefix determines its output byte for byte, and extending the prefix only
//! appends stages (prefix monotonicity).

use std::collections::BTreeSet;

use crate::error::Error;
use crate::graph::{GraphSpec, StageRecord};
use crate::Vertex;

/// Default cap on fresh vertices a single stage may add.
pub const DEFAULT_STAGE_CAP: u64 = 1 << 16;

#[derive(Clone, Copy, Debug)]
pub struct ReductionLimits {
    pub max_stage_vertices: u64,
}

impl Default for ReductionLimits {
    fn default() -> Self {
        ReductionLimits {
            max_stage_vertices: DEFAULT_STAGE_CAP,
        }
    }
}

/// A finite graph fragment built stage by stage, with an implicit tail of
/// isolated vertices after `n_vertices`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StagedGraph {
    pub stages: Vec<StageRecord>,
    pub n_vertices: u64,
    pub edges: BTreeSet<(Vertex, Vertex)>,
    pub unused: BTreeSet<Vertex>,
}

impl StagedGraph {
    fn new() -> Self {
        StagedGraph {
            stages: Vec::new(),
            n_vertices: 0,
            edges: BTreeSet::new(),
            unused: BTreeSet::new(),
        }
    }

    fn push_stage(&mut self, record: StageRecord) {
        self.n_vertices += record.vertices_added.len() as u64;
        for &e in &record.edges_added {
            self.edges.insert(e);
        }
        for &v in &record.marked_unused {
            self.unused.insert(v);
        }
        self.stages.push(record);
    }

    pub fn edge(&self, u: Vertex, v: Vertex) -> bool {
        u != v && self.edges.contains(&if u < v { (u, v) } else { (v, u) })
    }

    /// Vertices not marked unused, in increasing order.
    pub fn used_vertices(&self) -> Vec<Vertex> {
        (0..self.n_vertices)
            .filter(|v| !self.unused.contains(v))
            .collect()
    }

    pub fn to_spec(&self) -> GraphSpec {
        GraphSpec::ExplicitStaged {
            stages: self.stages.clone(),
            n_vertices: self.n_vertices,
            edges: self.edges.clone(),
        }
    }
}

/// Parses a prefix given as a string of `0` and `1` characters.
pub fn parse_prefix(s: &str) -> Result<Vec<bool>, Error> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::InvalidArguments(format!(
                "prefix must consist of 0 and 1, found {other:?}"
            ))),
        })
        .collect()
}

/// Saturating reduction: a 0-bit adds one isolated fresh vertex; a 1-bit
/// adds, for every subset `U` of the current vertices, one fresh vertex
/// joined to exactly `U`. Subsets are processed in increasing order of their
/// characteristic bit mask. One-stages are exponential in the current vertex
/// count, so stages over the cap are refused.
pub fn reduction_h(prefix: &[bool], limits: ReductionLimits) -> Result<StagedGraph, Error> {
    let mut graph = StagedGraph::new();
    for stage in 1..prefix.len() {
        let bit = prefix[stage];
        let record = if !bit {
            let v = graph.n_vertices;
            StageRecord {
                index: stage,
                bit: 0,
                vertices_added: vec![v],
                edges_added: Vec::new(),
                marked_unused: Vec::new(),
            }
        } else {
            let current = graph.n_vertices;
            if current >= 64 || (1u128 << current) > limits.max_stage_vertices as u128 {
                return Err(Error::StageCapExceeded {
                    stage,
                    would_add: if current >= 128 {
                        u128::MAX
                    } else {
                        1u128 << current.min(127)
                    },
                    cap: limits.max_stage_vertices,
                });
            }
            let mut vertices_added = Vec::new();
            let mut edges_added = Vec::new();
            for mask in 0u64..(1 << current) {
                let v = graph.n_vertices + vertices_added.len() as u64;
                vertices_added.push(v);
                for bit_pos in 0..current {
                    if (mask >> bit_pos) & 1 == 1 {
                        edges_added.push((bit_pos, v));
                    }
                }
            }
            StageRecord {
                index: stage,
                bit: 1,
                vertices_added,
                edges_added,
                marked_unused: Vec::new(),
            }
        };
        graph.push_stage(record);
    }
    Ok(graph)
}

/// Half-graph feeder: stage `s` adds vertices `2(s-1)` and `2(s-1)+1`. A
/// 0-bit marks them unused forever; a 1-bit keeps them and joins `(2i, 2j+1)`
/// for all `i < j <= s-1` with both endpoints used. Unused vertices stay
/// isolated permanently.
pub fn reduction_f(prefix: &[bool]) -> StagedGraph {
    let mut graph = StagedGraph::new();
    for stage in 1..prefix.len() {
        let s = (stage - 1) as u64;
        let even = 2 * s;
        let odd = 2 * s + 1;
        let record = if !prefix[stage] {
            StageRecord {
                index: stage,
                bit: 0,
                vertices_added: vec![even, odd],
                edges_added: Vec::new(),
                marked_unused: vec![even, odd],
            }
        } else {
            let mut edges_added = Vec::new();
            for j in 0..=s {
                for i in 0..j {
                    let (a, b) = (2 * i, 2 * j + 1);
                    if graph.unused.contains(&a) || graph.unused.contains(&b) {
                        continue;
                    }
                    if !graph.edges.contains(&(a, b)) && !edges_added.contains(&(a, b)) {
                        edges_added.push((a, b));
                    }
                }
            }
            StageRecord {
                index: stage,
                bit: 1,
                vertices_added: vec![even, odd],
                edges_added,
                marked_unused: Vec::new(),
            }
        };
        graph.push_stage(record);
    }
    graph
}

/// Clique feeder: stage `s` adds a fresh copy of the complete graph on
/// `s - 1` vertices on a 1-bit (a no-op at stage 1) and one fresh isolated
/// vertex on a 0-bit.
pub fn reduction_g(prefix: &[bool]) -> StagedGraph {
    let mut graph = StagedGraph::new();
    for stage in 1..prefix.len() {
        let record = if !prefix[stage] {
            let v = graph.n_vertices;
            StageRecord {
                index: stage,
                bit: 0,
                vertices_added: vec![v],
                edges_added: Vec::new(),
                marked_unused: Vec::new(),
            }
        } else {
            let clique_size = (stage - 1) as u64;
            let first = graph.n_vertices;
            let vertices_added: Vec<Vertex> = (first..first + clique_size).collect();
            let mut edges_added = Vec::new();
            for a in 0..clique_size {
                for b in (a + 1)..clique_size {
                    edges_added.push((first + a, first + b));
                }
            }
            StageRecord {
                index: stage,
                bit: 1,
                vertices_added,
                edges_added,
                marked_unused: Vec::new(),
            }
        };
        graph.push_stage(record);
    }
    graph
}

fn pad_to_common_length(p: &[bool], q: &[bool]) -> (Vec<bool>, Vec<bool>) {
    let len = p.len().max(q.len());
    let mut p = p.to_vec();
    let mut q = q.to_vec();
    p.resize(len, false);
    q.resize(len, false);
    (p, q)
}

/// Disconnected union of the half-graph feeder on `p` and the clique feeder
/// on `q`, interleaved evens/odds.
pub fn combined_fg(p: &[bool], q: &[bool]) -> GraphSpec {
    let (p, q) = pad_to_common_length(p, q);
    GraphSpec::oplus(reduction_f(&p).to_spec(), reduction_g(&q).to_spec())
}

/// Disconnected union of the saturating reduction on `p` and the half-graph
/// feeder on `q`.
pub fn combined_hf(p: &[bool], q: &[bool], limits: ReductionLimits) -> Result<GraphSpec, Error> {
    let (p, q) = pad_to_common_length(p, q);
    Ok(GraphSpec::oplus(
        reduction_h(&p, limits)?.to_spec(),
        reduction_f(&q).to_spec(),
    ))
}

/// True when `small` is a stage-history prefix of `big` and induces the same
/// graph on its own vertex set.
pub fn is_stage_prefix(small: &StagedGraph, big: &StagedGraph) -> bool {
    if small.stages.len() > big.stages.len() {
        return false;
    }
    if big.stages[..small.stages.len()] != small.stages[..] {
        return false;
    }
    for &(u, v) in &big.edges {
        if u < small.n_vertices && v < small.n_vertices && !small.edges.contains(&(u, v)) {
            return false;
        }
    }
    small.edges.iter().all(|e| big.edges.contains(e))
}

//! Infinite graphs on vertex set ℕ as total, decidable edge oracles.
//!
//! A [`GraphSpec`] is a compositional description: primitive families plus
//! the combinators disconnected union (even/odd interleaving), complement and
//! relabeling by a finite-support permutation. Every spec answers any edge
//! query `(u, v)` in bounded time; the answer is symmetric and irreflexive.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::perm::FiniteSupportPermutation;
use crate::Vertex;

/// Shape of the cofinite part of an automorphically trivial graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tail {
    Clique,
    Anticlique,
}

/// Finitely described assignment of clique sizes, one per clique index.
///
/// Restricting to these shapes keeps the edge oracle total and decidable:
/// vertex membership is resolved by prefix sums of the size sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum SizeRule {
    /// Every clique has the same size.
    Constant { size: u64 },
    /// Clique `i` has size `start + i * step`.
    Arithmetic { start: u64, step: u64 },
    /// Explicit finite prefix followed by a repeating cycle.
    EventuallyPeriodic { prefix: Vec<u64>, cycle: Vec<u64> },
}

impl SizeRule {
    pub fn size_of_clique(&self, index: u64) -> u64 {
        match self {
            SizeRule::Constant { size } => *size,
            SizeRule::Arithmetic { start, step } => start + index * step,
            SizeRule::EventuallyPeriodic { prefix, cycle } => {
                if (index as usize) < prefix.len() {
                    prefix[index as usize]
                } else {
                    cycle[(index as usize - prefix.len()) % cycle.len()]
                }
            }
        }
    }

    /// Index of the clique containing `v`.
    pub fn clique_of_vertex(&self, v: Vertex) -> u64 {
        let mut index = 0u64;
        let mut start = 0u64;
        loop {
            let size = self.size_of_clique(index);
            if v < start + size {
                return index;
            }
            start += size;
            index += 1;
        }
    }

    /// True when infinitely many cliques have size strictly greater than 1,
    /// i.e. the union is not automorphically trivial.
    pub fn has_infinitely_many_nontrivial_cliques(&self) -> bool {
        match self {
            SizeRule::Constant { size } => *size > 1,
            SizeRule::Arithmetic { step, start } => *step > 0 || *start > 1,
            SizeRule::EventuallyPeriodic { cycle, .. } => cycle.iter().any(|&s| s > 1),
        }
    }

    fn validate(&self) -> Result<(), Error> {
        let bad = |msg: &str| Err(Error::InvalidSpec(msg.into()));
        match self {
            SizeRule::Constant { size } => {
                if *size == 0 {
                    return bad("clique size must be at least 1");
                }
            }
            SizeRule::Arithmetic { start, .. } => {
                if *start == 0 {
                    return bad("arithmetic size rule must start at 1 or more");
                }
            }
            SizeRule::EventuallyPeriodic { prefix, cycle } => {
                if cycle.is_empty() {
                    return bad("eventually periodic size rule needs a nonempty cycle");
                }
                if prefix.iter().chain(cycle).any(|&s| s == 0) {
                    return bad("clique sizes must be at least 1");
                }
            }
        }
        Ok(())
    }
}

/// One stage of a staged construction: which input bit fired and what it
/// added. Stages never delete vertices or edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRecord {
    pub index: usize,
    pub bit: u8,
    pub vertices_added: Vec<Vertex>,
    pub edges_added: Vec<(Vertex, Vertex)>,
    pub marked_unused: Vec<Vertex>,
}

/// Compositional description of an infinite graph with vertex set ℕ.
///
/// Serializes to JSON with a `family` discriminator; see the repository
/// README for the exact field names of each family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum GraphSpec {
    /// The infinite clique: every pair of distinct vertices is an edge.
    Clique,
    /// The edgeless graph, complement of the clique.
    Anticlique,
    /// The binary-expansion presentation of the countable random graph:
    /// for `u < v`, `(u, v)` is an edge iff bit `u` of `v` is set.
    Rado,
    /// The half-graph: edges `(2i, 2j+1)` for `i <= j`.
    RGraph,
    /// A finite graph on `{0..n_named-1}`; all later vertices are isolated.
    FinitePlusIsolatedTail {
        edges: BTreeSet<(Vertex, Vertex)>,
        n_named: u64,
    },
    /// Disjoint union of cliques with sizes given by a finite rule.
    CliqueUnion { sizes: SizeRule },
    /// Normal form of an automorphically trivial graph: a finite core
    /// `S0 = {0..s0_size-1}` with its own edges, a hub set `s0_prime` joined
    /// to every tail vertex, and a tail that is a clique or an anticlique.
    AutoTrivial {
        s0_size: u64,
        s0_edges: BTreeSet<(Vertex, Vertex)>,
        s0_prime: BTreeSet<Vertex>,
        tail: Tail,
    },
    /// Disconnected union: `left` on the evens, `right` on the odds.
    Oplus {
        left: Box<GraphSpec>,
        right: Box<GraphSpec>,
    },
    Complement { inner: Box<GraphSpec> },
    /// `inner` relabeled by `by`: `(u, v)` is an edge iff
    /// `(by⁻¹(u), by⁻¹(v))` is an edge of `inner`.
    Permuted {
        inner: Box<GraphSpec>,
        by: FiniteSupportPermutation,
    },
    /// Output of a staged construction: the recorded stages, their cumulative
    /// edge set, and an all-later-vertices-isolated tail.
    ExplicitStaged {
        stages: Vec<StageRecord>,
        n_vertices: u64,
        edges: BTreeSet<(Vertex, Vertex)>,
    },
}

fn ordered(u: Vertex, v: Vertex) -> (Vertex, Vertex) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

impl GraphSpec {
    /// Total edge oracle: symmetric, irreflexive, defined on all of ℕ².
    pub fn edge(&self, u: Vertex, v: Vertex) -> bool {
        if u == v {
            return false;
        }
        match self {
            GraphSpec::Clique => true,
            GraphSpec::Anticlique => false,
            GraphSpec::Rado => {
                let (lo, hi) = ordered(u, v);
                lo < 64 && (hi >> lo) & 1 == 1
            }
            GraphSpec::RGraph => {
                let (even, odd) = if u % 2 == 0 { (u, v) } else { (v, u) };
                if even % 2 != 0 || odd % 2 != 1 {
                    return false;
                }
                even / 2 <= odd / 2
            }
            GraphSpec::FinitePlusIsolatedTail { edges, .. } => edges.contains(&ordered(u, v)),
            GraphSpec::CliqueUnion { sizes } => {
                sizes.clique_of_vertex(u) == sizes.clique_of_vertex(v)
            }
            GraphSpec::AutoTrivial {
                s0_size,
                s0_edges,
                s0_prime,
                tail,
            } => {
                let (lo, hi) = ordered(u, v);
                if hi < *s0_size {
                    s0_edges.contains(&(lo, hi))
                } else if lo < *s0_size {
                    s0_prime.contains(&lo)
                } else {
                    *tail == Tail::Clique
                }
            }
            GraphSpec::Oplus { left, right } => {
                if u % 2 != v % 2 {
                    false
                } else if u % 2 == 0 {
                    left.edge(u / 2, v / 2)
                } else {
                    right.edge(u / 2, v / 2)
                }
            }
            GraphSpec::Complement { inner } => !inner.edge(u, v),
            GraphSpec::Permuted { inner, by } => inner.edge(by.invert(u), by.invert(v)),
            GraphSpec::ExplicitStaged { edges, .. } => edges.contains(&ordered(u, v)),
        }
    }

    pub fn oplus(left: GraphSpec, right: GraphSpec) -> GraphSpec {
        GraphSpec::Oplus {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn complement(inner: GraphSpec) -> GraphSpec {
        GraphSpec::Complement {
            inner: Box::new(inner),
        }
    }

    pub fn permuted(inner: GraphSpec, by: FiniteSupportPermutation) -> GraphSpec {
        GraphSpec::Permuted {
            inner: Box::new(inner),
            by,
        }
    }

    /// The standard matching-plus-isolated-vertices core: vertices
    /// `{0..4d-1}`, edges `(2i, 2i+1)` for `i < d`, everything else isolated.
    pub fn m_core(d: u64) -> GraphSpec {
        let edges = (0..d).map(|i| (2 * i, 2 * i + 1)).collect();
        GraphSpec::FinitePlusIsolatedTail {
            edges,
            n_named: 4 * d,
        }
    }

    /// Complement of [`GraphSpec::m_core`].
    pub fn co_m_core(d: u64) -> GraphSpec {
        GraphSpec::complement(GraphSpec::m_core(d))
    }

    /// The standard center core: vertex 0 adjacent to `1..=d` and not to
    /// `d+1..=2d`, everything else isolated.
    pub fn n_core(d: u64) -> GraphSpec {
        let edges = (1..=d).map(|i| (0, i)).collect();
        GraphSpec::FinitePlusIsolatedTail {
            edges,
            n_named: 2 * d + 1,
        }
    }

    /// Structural validation of the spec and all nested specs.
    pub fn validate(&self) -> Result<(), Error> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        match self {
            GraphSpec::Clique | GraphSpec::Anticlique | GraphSpec::Rado | GraphSpec::RGraph => {
                Ok(())
            }
            GraphSpec::FinitePlusIsolatedTail { edges, n_named } => {
                for &(u, v) in edges {
                    if u >= v {
                        return bad(format!("edge ({u},{v}) must be stored with u < v"));
                    }
                    if v >= *n_named {
                        return bad(format!("edge ({u},{v}) leaves the named range 0..{n_named}"));
                    }
                }
                Ok(())
            }
            GraphSpec::CliqueUnion { sizes } => sizes.validate(),
            GraphSpec::AutoTrivial {
                s0_size,
                s0_edges,
                s0_prime,
                ..
            } => {
                for &(u, v) in s0_edges {
                    if u >= v || v >= *s0_size {
                        return bad(format!("core edge ({u},{v}) outside S0 = 0..{s0_size}"));
                    }
                }
                if let Some(&p) = s0_prime.iter().find(|&&p| p >= *s0_size) {
                    return bad(format!("hub vertex {p} outside S0 = 0..{s0_size}"));
                }
                Ok(())
            }
            GraphSpec::Oplus { left, right } => {
                left.validate()?;
                right.validate()
            }
            GraphSpec::Complement { inner } => inner.validate(),
            GraphSpec::Permuted { inner, .. } => inner.validate(),
            GraphSpec::ExplicitStaged {
                stages,
                n_vertices,
                edges,
            } => {
                let mut seen_vertices: BTreeSet<Vertex> = BTreeSet::new();
                let mut seen_edges: BTreeSet<(Vertex, Vertex)> = BTreeSet::new();
                let mut last_index = None;
                for stage in stages {
                    if let Some(prev) = last_index {
                        if stage.index <= prev {
                            return bad(format!(
                                "stage index {} does not increase past {prev}",
                                stage.index
                            ));
                        }
                    }
                    last_index = Some(stage.index);
                    for &v in &stage.vertices_added {
                        if !seen_vertices.insert(v) {
                            return bad(format!("vertex {v} added twice"));
                        }
                    }
                    for &(u, v) in &stage.edges_added {
                        if u >= v {
                            return bad(format!("edge ({u},{v}) must be stored with u < v"));
                        }
                        if !seen_vertices.contains(&u) || !seen_vertices.contains(&v) {
                            return bad(format!("edge ({u},{v}) uses a vertex not yet added"));
                        }
                        if !seen_edges.insert((u, v)) {
                            return bad(format!("edge ({u},{v}) added twice"));
                        }
                    }
                }
                if seen_vertices.len() as u64 != *n_vertices {
                    return bad(format!(
                        "n_vertices is {n_vertices} but stages add {}",
                        seen_vertices.len()
                    ));
                }
                if &seen_edges != edges {
                    return bad("edge set does not match the stage records".into());
                }
                Ok(())
            }
        }
    }

    /// SHA-256 of the canonical JSON encoding, used to tie certificates to
    /// the spec they were computed from.
    pub fn sha256_hex(&self) -> String {
        let json = serde_json::to_string(self).expect("specs always serialize");
        let mut hasher = Sha256::new();
        hasher.update(json.as_bytes());
        hex::encode(hasher.finalize())
    }
}

/// Parses and validates a JSON-encoded spec.
pub fn load_spec(json: &str) -> Result<GraphSpec, Error> {
    let spec: GraphSpec = serde_json::from_str(json)?;
    spec.validate()?;
    Ok(spec)
}

/// A copy of `base` presented through `perm`: `(perm(u), perm(v))` is an edge
/// of the copy iff `(u, v)` is an edge of `base`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentedCopy {
    pub base: GraphSpec,
    pub perm: FiniteSupportPermutation,
}

impl PresentedCopy {
    pub fn new(base: GraphSpec, perm: FiniteSupportPermutation) -> Self {
        PresentedCopy { base, perm }
    }

    /// Edge oracle of the presented copy.
    pub fn edge(&self, u: Vertex, v: Vertex) -> bool {
        self.base.edge(self.perm.invert(u), self.perm.invert(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rgraph_edges_follow_the_half_graph_rule() {
        let g = GraphSpec::RGraph;
        assert!(g.edge(0, 1)); // i = j = 0
        assert!(!g.edge(2, 1)); // i = 1 > j = 0
        assert!(g.edge(0, 3));
        assert!(g.edge(2, 3));
        assert!(!g.edge(0, 2)); // same parity
        assert!(!g.edge(1, 3));
    }

    #[test]
    fn simple_graphs_have_no_loops() {
        assert!(!GraphSpec::Clique.edge(5, 5));
        assert!(GraphSpec::Clique.edge(5, 6));
    }

    #[test]
    fn rado_follows_the_bit_rule() {
        // Independent check: bit 1 of 3 (binary 11) is set.
        assert_eq!((3u64 >> 1) & 1, 1);
        assert!(GraphSpec::Rado.edge(1, 3));
        // Bit 2 of 3 is clear.
        assert!(!GraphSpec::Rado.edge(2, 3));
        // Symmetry.
        assert!(GraphSpec::Rado.edge(3, 1));
    }

    #[test]
    fn presented_copy_applies_the_inverse_relabeling() {
        let m2 = GraphSpec::m_core(2);
        let id = PresentedCopy::new(m2.clone(), FiniteSupportPermutation::identity());
        assert!(id.edge(0, 1));

        let swap = FiniteSupportPermutation::transposition(0, 4).unwrap();
        let copy = PresentedCopy::new(m2, swap);
        assert!(copy.edge(4, 1));
        assert!(!copy.edge(0, 1));
    }

    #[test]
    fn n_core_swaps_shift_the_center_neighborhood() {
        for d in 1..=3u64 {
            let base = GraphSpec::n_core(d);
            for n in 1..=d {
                let h = FiniteSupportPermutation::transposition(n, n + d).unwrap();
                let copy = PresentedCopy::new(base.clone(), h);
                assert!(copy.edge(0, n + d));
                assert!(!copy.edge(0, n));
            }
        }
    }

    #[test]
    fn oplus_interleaves_and_isolates() {
        let g = GraphSpec::oplus(GraphSpec::Clique, GraphSpec::Anticlique);
        // Both even: left-side pair (0, 1) of the clique.
        assert!(g.edge(0, 2));
        // Both odd: right side is edgeless.
        assert!(!g.edge(1, 3));
        // Cross parity is never an edge.
        for x in (0..16).step_by(2) {
            for y in (1..16).step_by(2) {
                assert!(!g.edge(x, y));
            }
        }
    }

    #[test]
    fn complement_of_anticlique_is_complete() {
        let g = GraphSpec::complement(GraphSpec::Anticlique);
        assert!(g.edge(3, 7));
        assert!(!g.edge(7, 7));
    }

    #[test]
    fn double_complement_is_query_equivalent() {
        let g = GraphSpec::RGraph;
        let gg = GraphSpec::complement(GraphSpec::complement(GraphSpec::RGraph));
        for u in 0..32 {
            for v in 0..32 {
                assert_eq!(g.edge(u, v), gg.edge(u, v));
            }
        }
    }

    #[test]
    fn clique_union_membership_by_prefix_sums() {
        let all2 = SizeRule::Constant { size: 2 };
        assert_eq!(all2.clique_of_vertex(0), 0);
        assert_eq!(all2.clique_of_vertex(5), 2);

        let growing = SizeRule::Arithmetic { start: 1, step: 1 };
        // Cliques {0}, {1,2}, {3,4,5}, {6..9}, ...
        assert_eq!(growing.clique_of_vertex(0), 0);
        assert_eq!(growing.clique_of_vertex(2), 1);
        assert_eq!(growing.clique_of_vertex(5), 2);
        assert_eq!(growing.clique_of_vertex(6), 3);

        let g = GraphSpec::CliqueUnion { sizes: growing };
        assert!(g.edge(1, 2));
        assert!(!g.edge(0, 1));
        assert!(g.edge(3, 5));
        assert!(!g.edge(2, 3));
    }

    #[test]
    fn auto_trivial_normal_form_on_a_window() {
        let spec = GraphSpec::AutoTrivial {
            s0_size: 2,
            s0_edges: [(0, 1)].into_iter().collect(),
            s0_prime: [0].into_iter().collect(),
            tail: Tail::Clique,
        };
        let w = 12;
        for t in 2..w {
            // Tail vertices see exactly S0' inside the core.
            assert!(spec.edge(0, t));
            assert!(!spec.edge(1, t));
            // Tail-tail adjacency is constant.
            for t2 in 2..w {
                if t != t2 {
                    assert!(spec.edge(t, t2));
                }
            }
        }
        assert!(spec.edge(0, 1));
    }

    #[test]
    fn validation_catches_malformed_specs() {
        let bad = GraphSpec::FinitePlusIsolatedTail {
            edges: [(3, 1)].into_iter().collect(),
            n_named: 4,
        };
        assert!(bad.validate().is_err());

        let out_of_range = GraphSpec::AutoTrivial {
            s0_size: 2,
            s0_edges: BTreeSet::new(),
            s0_prime: [5].into_iter().collect(),
            tail: Tail::Anticlique,
        };
        assert!(out_of_range.validate().is_err());
    }

    #[test]
    fn symmetry_and_irreflexivity_across_families() {
        let specs = vec![
            GraphSpec::Clique,
            GraphSpec::Anticlique,
            GraphSpec::Rado,
            GraphSpec::RGraph,
            GraphSpec::m_core(2),
            GraphSpec::n_core(2),
            GraphSpec::co_m_core(1),
            GraphSpec::CliqueUnion {
                sizes: SizeRule::EventuallyPeriodic {
                    prefix: vec![1],
                    cycle: vec![2, 3],
                },
            },
            GraphSpec::oplus(GraphSpec::RGraph, GraphSpec::Clique),
        ];
        for spec in specs {
            for u in 0..20 {
                assert!(!spec.edge(u, u));
                for v in 0..20 {
                    assert_eq!(spec.edge(u, v), spec.edge(v, u));
                }
            }
        }
    }
}

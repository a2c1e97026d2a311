//! Brute-force witness searches over windowed classes: shattering tuples,
//! threshold staircases, and neighborhood staircases.
//!
//! Search order is fixed so results are reproducible bit for bit: pairs are
//! enumerated lexicographically over the window, configurations in increasing
//! binary order, permutations in class-enumeration order. The first witness
//! wins. Every witness is self-certifying: re-applying its permutations
//! through the presented-copy oracle reproduces exactly the claimed labels.

use std::collections::BTreeMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::classes::{realize_configuration, window_pairs};
use crate::error::{Error, Meter};
use crate::graph::{GraphSpec, PresentedCopy};
use crate::perm::FiniteSupportPermutation;
use crate::Vertex;

/// Proof that a windowed class realizes every labeling of a pair tuple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShatterWitness {
    pub pairs: Vec<(Vertex, Vertex)>,
    /// One realizer per configuration, keyed by the label string; character
    /// `i` is the label of `pairs[i]`.
    pub realizers: BTreeMap<String, FiniteSupportPermutation>,
}

impl ShatterWitness {
    pub fn validate(&self, base: &GraphSpec, k: u64, window: u64) -> Result<(), String> {
        let d = self.pairs.len();
        if self.realizers.len() != 1usize << d {
            return Err(format!(
                "expected {} realizers, found {}",
                1usize << d,
                self.realizers.len()
            ));
        }
        for (config, perm) in &self.realizers {
            if config.len() != d {
                return Err(format!("configuration {config:?} has wrong length"));
            }
            check_window_support(perm, k, window)?;
            let copy = PresentedCopy::new(base.clone(), perm.clone());
            for (i, &(u, v)) in self.pairs.iter().enumerate() {
                let want = config.as_bytes()[i] == b'1';
                if copy.edge(u, v) != want {
                    return Err(format!(
                        "configuration {config}: pair ({u},{v}) has label {}",
                        copy.edge(u, v) as u8
                    ));
                }
            }
        }
        Ok(())
    }
}

/// A threshold staircase: `t - 1` pairs and `t` hypotheses with
/// `(u_j, v_j)` an edge of the `i`-th copy exactly when `i <= j`
/// (pairs indexed `1..=t-1`, hypotheses `1..=t`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdWitness {
    pub pairs: Vec<(Vertex, Vertex)>,
    pub hypotheses: Vec<FiniteSupportPermutation>,
}

impl ThresholdWitness {
    pub fn validate(&self, base: &GraphSpec, k: u64, window: u64) -> Result<(), String> {
        let t = self.hypotheses.len();
        if t == 0 || self.pairs.len() != t - 1 {
            return Err(format!(
                "{} hypotheses need {} pairs, found {}",
                t,
                t.saturating_sub(1),
                self.pairs.len()
            ));
        }
        for (i0, perm) in self.hypotheses.iter().enumerate() {
            check_window_support(perm, k, window)?;
            let copy = PresentedCopy::new(base.clone(), perm.clone());
            let i = i0 + 1;
            for (j0, &(u, v)) in self.pairs.iter().enumerate() {
                let j = j0 + 1;
                if copy.edge(u, v) != (i <= j) {
                    return Err(format!(
                        "hypothesis {i}: pair {j} = ({u},{v}) must have label {}",
                        (i <= j) as u8
                    ));
                }
            }
        }
        Ok(())
    }
}

/// A neighborhood staircase in the base graph itself: vertices
/// `u_0..u_n, v_1..v_n` with `v_j` adjacent to `u_i` exactly when `j <= i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma56Witness {
    pub u: Vec<Vertex>,
    pub v: Vec<Vertex>,
}

impl Lemma56Witness {
    pub fn validate(&self, base: &GraphSpec) -> Result<(), String> {
        if self.u.len() != self.v.len() + 1 {
            return Err("need one more u than v".into());
        }
        for (i, &ui) in self.u.iter().enumerate() {
            for (j0, &vj) in self.v.iter().enumerate() {
                let j = j0 + 1;
                if base.edge(ui, vj) != (j <= i) {
                    return Err(format!(
                        "pair (u_{i}, v_{j}) = ({ui},{vj}) must have label {}",
                        (j <= i) as u8
                    ));
                }
            }
        }
        Ok(())
    }
}

fn check_window_support(
    perm: &FiniteSupportPermutation,
    k: u64,
    window: u64,
) -> Result<(), String> {
    if perm.support_size() as u64 > k {
        return Err(format!(
            "support size {} exceeds bound {k}",
            perm.support_size()
        ));
    }
    if let Some(&v) = perm.support().iter().find(|&&v| v >= window) {
        return Err(format!("support vertex {v} outside window {window}"));
    }
    Ok(())
}

/// Checks whether the windowed class shatters exactly these pairs.
pub fn shatters(
    base: &GraphSpec,
    k: u64,
    pairs: &[(Vertex, Vertex)],
    window: u64,
    meter: &mut Meter,
) -> Result<Option<ShatterWitness>, Error> {
    let d = pairs.len();
    if d >= 32 {
        return Err(Error::InvalidArguments("more than 31 pairs".into()));
    }
    let mut sorted = pairs.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != d {
        return Err(Error::InvalidArguments("pairs must be distinct".into()));
    }

    let mut realizers = BTreeMap::new();
    for mask in 0u32..(1 << d) {
        let tau: Vec<bool> = (0..d).map(|i| (mask >> i) & 1 == 1).collect();
        match realize_configuration(base, pairs, &tau, k, window, meter)? {
            Some(h) => {
                let config: String = tau.iter().map(|&b| if b { '1' } else { '0' }).collect();
                realizers.insert(config, h);
            }
            None => return Ok(None),
        }
    }
    Ok(Some(ShatterWitness {
        pairs: pairs.to_vec(),
        realizers,
    }))
}

/// First shattered `d`-tuple of window pairs in lexicographic order.
pub fn vc_lower_bound(
    base: &GraphSpec,
    k: u64,
    d: u64,
    window: u64,
    meter: &mut Meter,
) -> Result<Option<ShatterWitness>, Error> {
    if d == 0 {
        return Err(Error::InvalidArguments("d must be at least 1".into()));
    }
    let pairs = window_pairs(window);
    if (d as usize) > pairs.len() {
        return Ok(None);
    }
    for tuple in pairs.iter().copied().combinations(d as usize) {
        meter.charge(1)?;
        if let Some(witness) = shatters(base, k, &tuple, window, meter)? {
            return Ok(Some(witness));
        }
    }
    Ok(None)
}

/// Searches for `t` thresholds in the windowed class.
///
/// For `t = 1` the condition is vacuous: any single hypothesis over zero
/// pairs qualifies, and the identity copy is returned. For larger `t` the
/// search runs over ordered tuples of `t - 1` distinct window pairs in
/// lexicographic order, realizing the staircase configuration of each
/// hypothesis in class order.
pub fn contains_thresholds(
    base: &GraphSpec,
    k: u64,
    t: u64,
    window: u64,
    meter: &mut Meter,
) -> Result<Option<ThresholdWitness>, Error> {
    if t == 0 {
        return Err(Error::InvalidArguments("t must be at least 1".into()));
    }
    if t == 1 {
        return Ok(Some(ThresholdWitness {
            pairs: Vec::new(),
            hypotheses: vec![FiniteSupportPermutation::identity()],
        }));
    }
    let pairs = window_pairs(window);
    let n_slots = (t - 1) as usize;
    if n_slots > pairs.len() {
        return Ok(None);
    }

    // Only pairs realizable with both labels can sit in a staircase.
    let mut flippable = Vec::new();
    for &p in &pairs {
        let one = realize_configuration(base, &[p], &[true], k, window, meter)?;
        let zero = realize_configuration(base, &[p], &[false], k, window, meter)?;
        flippable.push(one.is_some() && zero.is_some());
    }

    let mut indices = vec![0usize; n_slots];
    'outer: loop {
        meter.charge(1)?;
        let distinct = indices.iter().collect::<std::collections::BTreeSet<_>>().len()
            == n_slots;
        let usable = distinct && indices.iter().all(|&i| flippable[i]);
        if usable {
            let tuple: Vec<(Vertex, Vertex)> = indices.iter().map(|&i| pairs[i]).collect();
            let mut hypotheses = Vec::with_capacity(t as usize);
            let mut complete = true;
            for i in 1..=t {
                let tau: Vec<bool> = (1..t).map(|j| i <= j).collect();
                match realize_configuration(base, &tuple, &tau, k, window, meter)? {
                    Some(h) => hypotheses.push(h),
                    None => {
                        complete = false;
                        break;
                    }
                }
            }
            if complete {
                return Ok(Some(ThresholdWitness {
                    pairs: tuple,
                    hypotheses,
                }));
            }
        }

        // Odometer over pair indices, lexicographic.
        let mut slot = n_slots;
        loop {
            if slot == 0 {
                break 'outer;
            }
            slot -= 1;
            indices[slot] += 1;
            if indices[slot] < pairs.len() {
                break;
            }
            indices[slot] = 0;
        }
    }
    Ok(None)
}

/// First neighborhood staircase of depth `n` in the base graph.
///
/// Deterministic order: smallest usable sub-window first, then ascending
/// lexicographic order of the reversed tuple `(u_n, ..., u_0, v_n, ..., v_1)`
/// within it; all entries distinct. On the half-graph at depth 2 this yields
/// `u = (4, 2, 0)`, `v = (3, 1)`.
pub fn lemma56_witness(
    base: &GraphSpec,
    n: u64,
    window: u64,
    meter: &mut Meter,
) -> Result<Option<Lemma56Witness>, Error> {
    if n == 0 {
        return Err(Error::InvalidArguments("n must be at least 1".into()));
    }
    let n = n as usize;
    if (2 * n + 1) as u64 > window {
        return Ok(None);
    }

    // Reversed orientation: u_rev[i] = u_{n-i}, v_rev[j-1] = v_{n+1-j}, so the
    // staircase condition becomes: v_rev[j] adjacent to u_rev[i] iff i < j.
    // The slot for v_rev[j] must lie in the common neighborhood of
    // u_rev[0..j], which is maintained incrementally and prunes hard.
    for sub_window in (2 * n as u64 + 1)..=window {
        let mut search = StaircaseSearch {
            base,
            window: sub_window,
            n,
            u_rev: Vec::with_capacity(n + 1),
            inters: Vec::with_capacity(n),
            v_rev: Vec::with_capacity(n),
        };
        if search.descend_u(meter)? {
            let u: Vec<Vertex> = search.u_rev.iter().rev().copied().collect();
            let v: Vec<Vertex> = search.v_rev.iter().rev().copied().collect();
            return Ok(Some(Lemma56Witness { u, v }));
        }
    }
    Ok(None)
}

struct StaircaseSearch<'a> {
    base: &'a GraphSpec,
    window: u64,
    n: usize,
    u_rev: Vec<Vertex>,
    /// `inters[i]` is the sorted common neighborhood of `u_rev[0..=i]`.
    inters: Vec<Vec<Vertex>>,
    v_rev: Vec<Vertex>,
}

impl StaircaseSearch<'_> {
    fn descend_u(&mut self, meter: &mut Meter) -> Result<bool, Error> {
        let depth = self.u_rev.len();
        if depth == self.n + 1 {
            return self.descend_v(meter);
        }
        for cand in 0..self.window {
            meter.charge(1)?;
            if self.u_rev.contains(&cand) {
                continue;
            }
            // All of v_rev[depth..n] must be common neighbors of
            // u_rev[0..=depth], so the intersection may not drop below the
            // remaining demand. The last u slot carries no such demand.
            if depth < self.n {
                let refined: Vec<Vertex> = match self.inters.last() {
                    None => {
                        meter.charge(self.window / 8 + 1)?;
                        (0..self.window)
                            .filter(|&x| self.base.edge(cand, x))
                            .collect()
                    }
                    Some(prev) => {
                        meter.charge(prev.len() as u64 / 8 + 1)?;
                        prev.iter()
                            .copied()
                            .filter(|&x| self.base.edge(cand, x))
                            .collect()
                    }
                };
                if refined.len() < self.n - depth {
                    continue;
                }
                self.inters.push(refined);
            }
            self.u_rev.push(cand);
            if self.descend_u(meter)? {
                return Ok(true);
            }
            self.u_rev.pop();
            if depth < self.n {
                self.inters.pop();
            }
        }
        Ok(false)
    }

    fn descend_v(&mut self, meter: &mut Meter) -> Result<bool, Error> {
        let j = self.v_rev.len() + 1; // 1-based index of the slot being filled
        if j > self.n {
            return Ok(true);
        }
        // Candidates must be common neighbors of u_rev[0..j]; adjacency to
        // the remaining u's must be absent.
        let candidates = self.inters[j - 1].clone();
        'cand: for cand in candidates {
            meter.charge(1)?;
            if self.u_rev.contains(&cand) || self.v_rev.contains(&cand) {
                continue;
            }
            for i in j..=self.n {
                if self.base.edge(self.u_rev[i], cand) {
                    continue 'cand;
                }
            }
            self.v_rev.push(cand);
            if self.descend_v(meter)? {
                return Ok(true);
            }
            self.v_rev.pop();
        }
        Ok(false)
    }
}

/// Outcome of one half of a collapse cross-check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum ImplicationOutcome {
    /// The premise witness was not found within the window and budget, so
    /// the implication is vacuous here.
    PremiseUnmet { detail: String },
    /// Premise and conclusion witnesses both found.
    BothWitnessed,
    /// Premise witnessed but no conclusion witness within the larger window.
    /// Never a refutation: the statement quantifies over all of ℕ.
    Inconclusive { detail: String },
}

/// Cross-check of the two collapse statements on one instance: a large
/// shattering (resp. threshold count) for support bound `k` should come with
/// a small one for support bound 2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollapseReport {
    pub vc: ImplicationOutcome,
    pub thresholds: ImplicationOutcome,
}

pub fn check_collapse_implication(
    base: &GraphSpec,
    j: u64,
    k: u64,
    w_small: u64,
    w_large: u64,
    meter: &mut Meter,
) -> Result<CollapseReport, Error> {
    if j < 1 || k < 2 {
        return Err(Error::InvalidArguments(
            "collapse check needs j >= 1 and k >= 2".into(),
        ));
    }

    let vc_premise_d = 2 * (k + 1) * k * j;
    let vc = if vc_premise_d >= 32 {
        // 2^d configurations per candidate tuple; beyond any real budget.
        ImplicationOutcome::PremiseUnmet {
            detail: format!(
                "premise needs a {vc_premise_d}-shattering; its configuration space exceeds any feasible budget"
            ),
        }
    } else {
        match absorb_budget(vc_lower_bound(base, k, vc_premise_d, w_small, meter))? {
        SearchOutcome::Found => {
            match absorb_budget(vc_lower_bound(base, 2, j, w_large, meter))? {
                SearchOutcome::Found => ImplicationOutcome::BothWitnessed,
                outcome => ImplicationOutcome::Inconclusive {
                    detail: format!(
                        "shattering of {vc_premise_d} pairs found, but no {j}-shattering for support 2 in window {w_large} ({})",
                        outcome.describe()
                    ),
                },
            }
        }
        outcome => ImplicationOutcome::PremiseUnmet {
            detail: format!(
                "no {vc_premise_d}-shattering for support {k} in window {w_small} ({})",
                outcome.describe()
            ),
        },
    };

    let ld_premise_t = 2 * k * (j + 1).pow(k as u32 + 1) + 1;
    let thresholds = match absorb_budget(contains_thresholds(base, k, ld_premise_t, w_small, meter))?
    {
        SearchOutcome::Found => {
            match absorb_budget(contains_thresholds(base, 2, j + 1, w_large, meter))? {
                SearchOutcome::Found => ImplicationOutcome::BothWitnessed,
                outcome => ImplicationOutcome::Inconclusive {
                    detail: format!(
                        "{ld_premise_t} thresholds found, but not {} for support 2 in window {w_large} ({})",
                        j + 1,
                        outcome.describe()
                    ),
                },
            }
        }
        outcome => ImplicationOutcome::PremiseUnmet {
            detail: format!(
                "no {ld_premise_t} thresholds for support {k} in window {w_small} ({})",
                outcome.describe()
            ),
        },
    };

    Ok(CollapseReport { vc, thresholds })
}

enum SearchOutcome {
    Found,
    NotFound,
    Budget,
}

impl SearchOutcome {
    fn describe(&self) -> &'static str {
        match self {
            SearchOutcome::Found => "found",
            SearchOutcome::NotFound => "exhausted window",
            SearchOutcome::Budget => "budget exceeded",
        }
    }
}

fn absorb_budget<T>(result: Result<Option<T>, Error>) -> Result<SearchOutcome, Error> {
    match result {
        Ok(Some(_)) => Ok(SearchOutcome::Found),
        Ok(None) => Ok(SearchOutcome::NotFound),
        Err(Error::BudgetExceeded { .. }) => Ok(SearchOutcome::Budget),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::SizeRule;

    fn meter() -> Meter {
        Meter::default()
    }

    #[test]
    fn empty_tuple_is_vacuously_shattered() {
        let w = shatters(&GraphSpec::Clique, 2, &[], 8, &mut meter())
            .unwrap()
            .unwrap();
        assert_eq!(w.realizers.len(), 1);
    }

    #[test]
    fn matching_core_shatters_its_matching() {
        let m2 = GraphSpec::m_core(2);
        let w = shatters(&m2, 8, &[(0, 1), (2, 3)], 8, &mut meter())
            .unwrap()
            .unwrap();
        assert_eq!(w.realizers.len(), 4);
        w.validate(&m2, 8, 8).unwrap();
    }

    #[test]
    fn anticlique_shatters_nothing() {
        assert!(shatters(&GraphSpec::Anticlique, 2, &[(0, 1)], 8, &mut meter())
            .unwrap()
            .is_none());
    }

    #[test]
    fn n3_core_first_shattered_triple_is_the_center_star() {
        let n3 = GraphSpec::n_core(3);
        let w = vc_lower_bound(&n3, 6, 3, 7, &mut meter()).unwrap().unwrap();
        assert_eq!(w.pairs, vec![(0, 1), (0, 2), (0, 3)]);
        w.validate(&n3, 6, 7).unwrap();
    }

    #[test]
    fn m2_core_first_shattered_pair_tuple_is_the_matching() {
        let m2 = GraphSpec::m_core(2);
        let w = vc_lower_bound(&m2, 8, 2, 8, &mut meter()).unwrap().unwrap();
        assert_eq!(w.pairs, vec![(0, 1), (2, 3)]);
    }

    #[test]
    fn clique_has_no_shattering_even_for_one_pair() {
        assert!(vc_lower_bound(&GraphSpec::Clique, 2, 1, 8, &mut meter())
            .unwrap()
            .is_none());
    }

    #[test]
    fn rado_shatters_three_pairs_with_transpositions() {
        let w = vc_lower_bound(&GraphSpec::Rado, 2, 3, 32, &mut meter())
            .unwrap()
            .unwrap();
        w.validate(&GraphSpec::Rado, 2, 32).unwrap();
    }

    #[test]
    fn one_threshold_is_vacuous() {
        let w = contains_thresholds(&GraphSpec::Anticlique, 2, 1, 8, &mut meter())
            .unwrap()
            .unwrap();
        assert!(w.pairs.is_empty());
        assert_eq!(w.hypotheses.len(), 1);
        w.validate(&GraphSpec::Anticlique, 2, 8).unwrap();
    }

    #[test]
    fn anticlique_has_no_two_thresholds() {
        assert!(contains_thresholds(&GraphSpec::Anticlique, 2, 2, 8, &mut meter())
            .unwrap()
            .is_none());
    }

    #[test]
    fn half_graph_contains_three_thresholds() {
        let w = contains_thresholds(&GraphSpec::RGraph, 2, 3, 12, &mut meter())
            .unwrap()
            .unwrap();
        w.validate(&GraphSpec::RGraph, 2, 12).unwrap();
    }

    #[test]
    fn half_graph_staircase_matches_the_hand_computed_witness() {
        // Oracle: check all six adjacencies against the half-graph rule.
        let g = GraphSpec::RGraph;
        assert!(g.edge(0, 1) && g.edge(0, 3) && g.edge(2, 3));
        assert!(!g.edge(2, 1) && !g.edge(4, 3) && !g.edge(4, 1));

        let w = lemma56_witness(&g, 2, 8, &mut meter()).unwrap().unwrap();
        assert_eq!(w.u, vec![4, 2, 0]);
        assert_eq!(w.v, vec![3, 1]);
        w.validate(&g).unwrap();
    }

    #[test]
    fn anticlique_has_no_staircase() {
        assert!(lemma56_witness(&GraphSpec::Anticlique, 1, 8, &mut meter())
            .unwrap()
            .is_none());
    }

    #[test]
    fn pair_cliques_have_no_depth_two_staircase() {
        let g = GraphSpec::CliqueUnion {
            sizes: SizeRule::Constant { size: 2 },
        };
        assert!(lemma56_witness(&g, 2, 16, &mut meter()).unwrap().is_none());
    }

    #[test]
    fn witnesses_stay_valid_at_larger_budgets() {
        let m2 = GraphSpec::m_core(2);
        let w = vc_lower_bound(&m2, 8, 2, 8, &mut meter()).unwrap().unwrap();
        w.validate(&m2, 8, 8).unwrap();
        w.validate(&m2, 10, 12).unwrap();
    }

    #[test]
    fn collapse_premise_unmet_on_clique() {
        let r = check_collapse_implication(&GraphSpec::Clique, 1, 3, 12, 12, &mut meter()).unwrap();
        assert!(matches!(r.vc, ImplicationOutcome::PremiseUnmet { .. }));
        assert!(matches!(r.thresholds, ImplicationOutcome::PremiseUnmet { .. }));
    }

    #[test]
    fn collapse_premise_unmet_on_small_clique_union() {
        let g = GraphSpec::CliqueUnion {
            sizes: SizeRule::Constant { size: 3 },
        };
        let mut m = Meter::new(20_000_000);
        let r = check_collapse_implication(&g, 2, 3, 12, 12, &mut m).unwrap();
        assert!(matches!(r.vc, ImplicationOutcome::PremiseUnmet { .. }));
    }

    #[test]
    fn determinism_of_searches() {
        let a = vc_lower_bound(&GraphSpec::Rado, 2, 2, 16, &mut meter()).unwrap();
        let b = vc_lower_bound(&GraphSpec::Rado, 2, 2, 16, &mut meter()).unwrap();
        assert_eq!(a, b);
        let a = lemma56_witness(&GraphSpec::RGraph, 3, 10, &mut meter()).unwrap();
        let b = lemma56_witness(&GraphSpec::RGraph, 3, 10, &mut meter()).unwrap();
        assert_eq!(a, b);
    }
}

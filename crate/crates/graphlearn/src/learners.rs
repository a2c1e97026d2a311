//! Online learning games: a learner predicts edge labels of an unknown copy,
//! round by round, and the transcript counts its mistakes.
//!
//! Two explicit learners are provided. The first plays against copies of a
//! declared automorphically trivial graph: it predicts the tail label and
//! permanently flips a vertex once the mistakes involving it exceed the core
//! size. The second plays against two-vertex relabelings of a disjoint union
//! of cliques with per-vertex counters and re-anchoring rules. A
//! version-space adversary drives adaptive lower-bound probes.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classes::WindowedClass;
use crate::error::Error;
use crate::graph::{GraphSpec, PresentedCopy, Tail};
use crate::perm::FiniteSupportPermutation;
use crate::Vertex;

pub type Pair = (Vertex, Vertex);

fn canonical(pair: Pair) -> Pair {
    if pair.0 <= pair.1 {
        pair
    } else {
        (pair.1, pair.0)
    }
}

/// A deterministic online learner: `predict` must be a pure function of the
/// state, and `feedback` folds the revealed truth into the state.
pub trait OnlineLearner {
    fn predict(&mut self, pair: Pair) -> bool;
    fn feedback(&mut self, pair: Pair, truth: bool);
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Round {
    pub pair: Pair,
    pub prediction: bool,
    pub truth: bool,
}

/// Round-by-round record of a game. No pair appears twice.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameTranscript {
    pub rounds: Vec<Round>,
    pub mistakes: u64,
}

impl GameTranscript {
    fn record(&mut self, pair: Pair, prediction: bool, truth: bool) {
        if prediction != truth {
            self.mistakes += 1;
        }
        self.rounds.push(Round {
            pair,
            prediction,
            truth,
        });
    }

    pub fn recount(&self) -> u64 {
        self.rounds
            .iter()
            .filter(|r| r.prediction != r.truth)
            .count() as u64
    }
}

/// Plays the fixed-target protocol: for each queried pair the learner
/// predicts, the target's true label is revealed, and the learner is fed the
/// truth. Repeated pairs are answered from the transcript without invoking
/// the learner again.
pub fn run_game<L: OnlineLearner>(
    learner: &mut L,
    order: &[Pair],
    target: &PresentedCopy,
    max_rounds: Option<usize>,
) -> GameTranscript {
    let mut transcript = GameTranscript::default();
    let mut seen: BTreeSet<Pair> = BTreeSet::new();
    let limit = max_rounds.unwrap_or(usize::MAX);
    for &raw in order.iter() {
        if transcript.rounds.len() >= limit {
            break;
        }
        let pair = canonical(raw);
        if !seen.insert(pair) {
            continue;
        }
        let prediction = learner.predict(pair);
        let truth = target.edge(pair.0, pair.1);
        learner.feedback(pair, truth);
        transcript.record(pair, prediction, truth);
    }
    transcript
}

/// Declared normal form a tail-default learner plays against.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ATLearnerConfig {
    pub s0_size: u64,
    pub s0_edges: BTreeSet<Pair>,
    pub s0_prime: BTreeSet<Vertex>,
    pub tail: Tail,
}

impl ATLearnerConfig {
    pub fn from_spec(spec: &GraphSpec) -> Result<Self, Error> {
        match spec {
            GraphSpec::AutoTrivial {
                s0_size,
                s0_edges,
                s0_prime,
                tail,
            } => Ok(ATLearnerConfig {
                s0_size: *s0_size,
                s0_edges: s0_edges.clone(),
                s0_prime: s0_prime.clone(),
                tail: *tail,
            }),
            other => Err(Error::InvalidArguments(format!(
                "tail-default learner needs an auto-trivial spec, got {other:?}"
            ))),
        }
    }

    pub fn spec(&self) -> GraphSpec {
        GraphSpec::AutoTrivial {
            s0_size: self.s0_size,
            s0_edges: self.s0_edges.clone(),
            s0_prime: self.s0_prime.clone(),
            tail: self.tail,
        }
    }

    /// The mistake bound claimed for this configuration: core edges plus the
    /// square of the core size.
    pub fn claimed_bound(&self) -> u64 {
        self.s0_edges.len() as u64 + self.s0_size * self.s0_size
    }
}

/// Tail-default learner for copies of an automorphically trivial graph.
///
/// Predicts 1 when the tail is a clique and 0 when it is an anticlique.
/// Every mistake charges both endpoints; once the charge on a vertex
/// strictly exceeds the core size, the default flips permanently for all
/// pairs involving that vertex.
pub struct AtLearner {
    default: bool,
    s0_size: u64,
    wrong: BTreeMap<Vertex, u64>,
    flipped: BTreeSet<Vertex>,
}

pub fn at_learner(config: &ATLearnerConfig) -> AtLearner {
    AtLearner {
        default: config.tail == Tail::Clique,
        s0_size: config.s0_size,
        wrong: BTreeMap::new(),
        flipped: BTreeSet::new(),
    }
}

impl OnlineLearner for AtLearner {
    fn predict(&mut self, pair: Pair) -> bool {
        if self.flipped.contains(&pair.0) || self.flipped.contains(&pair.1) {
            !self.default
        } else {
            self.default
        }
    }

    fn feedback(&mut self, pair: Pair, truth: bool) {
        let prediction = if self.flipped.contains(&pair.0) || self.flipped.contains(&pair.1) {
            !self.default
        } else {
            self.default
        };
        if prediction == truth {
            return;
        }
        for v in [pair.0, pair.1] {
            let count = self.wrong.entry(v).or_insert(0);
            *count += 1;
            if *count > self.s0_size {
                self.flipped.insert(v);
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum CliqueMode {
    /// Predict the neighborhood of this vertex in the base graph.
    CopyNeighborhood(Vertex),
    AllZero,
}

/// Counter learner for two-vertex relabelings of a disjoint union of
/// cliques.
///
/// While every counter of both endpoints is below 2, it predicts membership
/// straight from the base graph. When a counter `c_i` of a vertex reaches 2
/// on a mistaken prediction `i`, the vertex switches rule: after two wrong
/// 0-predictions it copies the neighborhood of the partner that exposed it;
/// after two wrong 1-predictions it predicts all zeros if it never saw a
/// wrong 0, and otherwise copies the neighborhood of its earliest recorded
/// wrong-0 partner.
pub struct CliqueFiso2Learner {
    base: GraphSpec,
    c0: BTreeMap<Vertex, u64>,
    c1: BTreeMap<Vertex, u64>,
    first_wrong0_partner: BTreeMap<Vertex, Vertex>,
    modes: BTreeMap<Vertex, (u64, CliqueMode)>,
    mode_counter: u64,
}

pub fn clique_fiso2_learner(base: &GraphSpec) -> Result<CliqueFiso2Learner, Error> {
    match base {
        GraphSpec::CliqueUnion { .. } => Ok(CliqueFiso2Learner {
            base: base.clone(),
            c0: BTreeMap::new(),
            c1: BTreeMap::new(),
            first_wrong0_partner: BTreeMap::new(),
            modes: BTreeMap::new(),
            mode_counter: 0,
        }),
        other => Err(Error::InvalidArguments(format!(
            "clique learner needs a clique-union spec, got {other:?}"
        ))),
    }
}

impl CliqueFiso2Learner {
    fn predict_pure(&self, pair: Pair) -> bool {
        let (u, v) = pair;
        let mu = self.modes.get(&u);
        let mv = self.modes.get(&v);
        match (mu, mv) {
            (None, None) => self.base.edge(u, v),
            (Some((_, mode)), None) => self.apply_mode(*mode, v),
            (None, Some((_, mode))) => self.apply_mode(*mode, u),
            (Some((su, mu)), Some((sv, mv))) => {
                // Both endpoints saturated: the earlier rule wins.
                if (su, u) <= (sv, v) {
                    self.apply_mode(*mu, v)
                } else {
                    self.apply_mode(*mv, u)
                }
            }
        }
    }

    fn apply_mode(&self, mode: CliqueMode, other: Vertex) -> bool {
        match mode {
            CliqueMode::CopyNeighborhood(w) => self.base.edge(w, other),
            CliqueMode::AllZero => false,
        }
    }
}

impl OnlineLearner for CliqueFiso2Learner {
    fn predict(&mut self, pair: Pair) -> bool {
        self.predict_pure(pair)
    }

    fn feedback(&mut self, pair: Pair, truth: bool) {
        let prediction = self.predict_pure(pair);
        if prediction == truth {
            return;
        }
        let (u, v) = pair;
        if !prediction {
            self.first_wrong0_partner.entry(u).or_insert(v);
            self.first_wrong0_partner.entry(v).or_insert(u);
        }
        for (x, partner) in [(u, v), (v, u)] {
            let counter = if prediction {
                self.c1.entry(x).or_insert(0)
            } else {
                self.c0.entry(x).or_insert(0)
            };
            *counter += 1;
            let saturated = *counter == 2;
            if saturated && !self.modes.contains_key(&x) {
                let mode = if !prediction {
                    CliqueMode::CopyNeighborhood(partner)
                } else {
                    match self.c0.get(&x).copied().unwrap_or(0) {
                        0 => CliqueMode::AllZero,
                        _ => CliqueMode::CopyNeighborhood(self.first_wrong0_partner[&x]),
                    }
                };
                self.mode_counter += 1;
                self.modes.insert(x, (self.mode_counter, mode));
            }
        }
    }
}

/// Predicts a constant label.
pub struct ConstantLearner(pub bool);

impl OnlineLearner for ConstantLearner {
    fn predict(&mut self, _pair: Pair) -> bool {
        self.0
    }
    fn feedback(&mut self, _pair: Pair, _truth: bool) {}
}

/// Predicts via a fixed hypothesis; never errs when the target equals it.
pub struct MemberLearner(pub PresentedCopy);

impl OnlineLearner for MemberLearner {
    fn predict(&mut self, pair: Pair) -> bool {
        self.0.edge(pair.0, pair.1)
    }
    fn feedback(&mut self, _pair: Pair, _truth: bool) {}
}

/// Adaptive opponent over a finite version space.
///
/// Each round it proposes the lexicographically first unrevealed pair whose
/// label split of the surviving hypotheses is most balanced, then reveals
/// the label keeping the larger half alive; an exact tie goes against the
/// learner's prediction. It stops when the version space is a singleton or
/// no pair splits it.
pub struct VersionSpaceAdversary {
    base: GraphSpec,
    alive: Vec<FiniteSupportPermutation>,
    pairs: Vec<Pair>,
    revealed: BTreeSet<Pair>,
}

impl VersionSpaceAdversary {
    pub fn new(class: &WindowedClass) -> Result<Self, Error> {
        let members: Vec<FiniteSupportPermutation> = class.permutations()?.collect();
        Ok(Self::with_members(
            class.base.clone(),
            members,
            class.window,
        ))
    }

    pub fn with_members(
        base: GraphSpec,
        members: Vec<FiniteSupportPermutation>,
        window: u64,
    ) -> Self {
        VersionSpaceAdversary {
            base,
            alive: members,
            pairs: crate::classes::window_pairs(window),
            revealed: BTreeSet::new(),
        }
    }

    pub fn alive(&self) -> usize {
        self.alive.len()
    }

    fn label_of(&self, member: &FiniteSupportPermutation, pair: Pair) -> bool {
        self.base
            .edge(member.invert(pair.0), member.invert(pair.1))
    }

    /// Most balanced splitting pair, or none when the game is over.
    fn select_pair(&self) -> Option<(Pair, usize, usize)> {
        if self.alive.len() <= 1 {
            return None;
        }
        let mut best: Option<(Pair, usize, usize)> = None;
        for &pair in &self.pairs {
            if self.revealed.contains(&pair) {
                continue;
            }
            let ones = self
                .alive
                .iter()
                .filter(|m| self.label_of(m, pair))
                .count();
            let zeros = self.alive.len() - ones;
            if ones == 0 || zeros == 0 {
                continue;
            }
            let balance = ones.min(zeros);
            if best.map_or(true, |(_, o, z)| balance > o.min(z)) {
                best = Some((pair, ones, zeros));
            }
        }
        best
    }

    fn reveal(&mut self, pair: Pair, label: bool) {
        self.revealed.insert(pair);
        self.alive.retain(|m| {
            self.base.edge(m.invert(pair.0), m.invert(pair.1)) == label
        });
    }
}

/// Plays the adaptive protocol: the adversary controls both the pair order
/// and the revealed labels, staying consistent with the surviving version
/// space. The final mistake count lower-bounds the mistakes forcible against
/// this learner on this class.
pub fn run_adaptive_game<L: OnlineLearner>(
    learner: &mut L,
    adversary: &mut VersionSpaceAdversary,
    max_rounds: Option<usize>,
) -> GameTranscript {
    let mut transcript = GameTranscript::default();
    let limit = max_rounds.unwrap_or(usize::MAX);
    while transcript.rounds.len() < limit {
        let Some((pair, ones, zeros)) = adversary.select_pair() else {
            break;
        };
        let prediction = learner.predict(pair);
        let label = match ones.cmp(&zeros) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Less => false,
            std::cmp::Ordering::Equal => !prediction,
        };
        adversary.reveal(pair, label);
        learner.feedback(pair, label);
        transcript.record(pair, prediction, label);
    }
    transcript
}

/// Deterministically seeded shuffles of a pair list, for order sweeps.
pub fn sampled_orders(pairs: &[Pair], count: usize, seed: u64) -> Vec<Vec<Pair>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut order = pairs.to_vec();
            order.shuffle(&mut rng);
            order
        })
        .collect()
}

/// All permutations of a pair list; only sensible for short lists.
pub fn all_orders(pairs: &[Pair]) -> Vec<Vec<Pair>> {
    use itertools::Itertools;
    pairs
        .iter()
        .copied()
        .permutations(pairs.len())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::window_pairs;
    use crate::graph::SizeRule;

    fn at_demo() -> ATLearnerConfig {
        ATLearnerConfig {
            s0_size: 2,
            s0_edges: [(0, 1)].into_iter().collect(),
            s0_prime: [0].into_iter().collect(),
            tail: Tail::Clique,
        }
    }

    #[test]
    fn zero_pairs_means_zero_mistakes() {
        let config = at_demo();
        let mut learner = at_learner(&config);
        let target = PresentedCopy::new(config.spec(), FiniteSupportPermutation::identity());
        let t = run_game(&mut learner, &[], &target, None);
        assert_eq!(t.mistakes, 0);
        assert!(t.rounds.is_empty());
    }

    #[test]
    fn at_learner_defaults_follow_the_tail() {
        let mut clique_cfg = at_demo();
        clique_cfg.tail = Tail::Clique;
        assert!(at_learner(&clique_cfg).predict((100, 200)));

        let mut anticlique_cfg = at_demo();
        anticlique_cfg.tail = Tail::Anticlique;
        assert!(!at_learner(&anticlique_cfg).predict((100, 200)));
    }

    #[test]
    fn at_learner_flips_after_core_size_plus_one_mistakes() {
        let config = at_demo(); // |S0| = 2
        let mut learner = at_learner(&config);
        for w in [10, 11, 12] {
            learner.feedback((5, w), false); // default 1, truth 0: mistake
        }
        assert!(!learner.predict((5, 13)));
        assert!(learner.predict((10, 11)));
    }

    #[test]
    fn at_learner_on_identity_target_respects_the_bound_for_the_demo_core() {
        let config = at_demo();
        let mut learner = at_learner(&config);
        let target = PresentedCopy::new(config.spec(), FiniteSupportPermutation::identity());
        let order = window_pairs(10);
        let t = run_game(&mut learner, &order, &target, None);
        assert!(t.mistakes <= config.claimed_bound(), "{}", t.mistakes);
        assert_eq!(t.mistakes, t.recount());
    }

    fn all2() -> GraphSpec {
        GraphSpec::CliqueUnion {
            sizes: SizeRule::Constant { size: 2 },
        }
    }

    #[test]
    fn clique_learner_fresh_state_predicts_the_base() {
        let base = all2();
        let mut learner = clique_fiso2_learner(&base).unwrap();
        assert!(learner.predict((0, 1)));
        assert!(!learner.predict((0, 2)));
    }

    #[test]
    fn clique_learner_copies_the_exposing_partner_after_two_wrong_zeros() {
        let base = all2();
        let mut learner = clique_fiso2_learner(&base).unwrap();
        // Two wrong 0-predictions on pairs (8, 3) and (8, 5).
        learner.feedback((8, 3), true);
        learner.feedback((8, 5), true);
        // Vertex 8 now copies the neighborhood of 5 (its second partner).
        assert_eq!(learner.predict((8, 4)), base.edge(5, 4));
        assert_eq!(learner.predict((8, 6)), base.edge(5, 6));
    }

    #[test]
    fn clique_learner_mini_sweep_stays_within_six_mistakes() {
        // Exhaustive at a small window: every two-vertex target, every order.
        let bases = [
            all2(),
            GraphSpec::CliqueUnion {
                sizes: SizeRule::Constant { size: 3 },
            },
            GraphSpec::CliqueUnion {
                sizes: SizeRule::EventuallyPeriodic {
                    prefix: vec![],
                    cycle: vec![2, 3],
                },
            },
        ];
        let window = 4;
        let pairs = window_pairs(window);
        let orders = all_orders(&pairs);
        for base in &bases {
            let class = WindowedClass::new(base.clone(), 2, window).unwrap();
            for perm in class.permutations().unwrap() {
                let target = PresentedCopy::new(base.clone(), perm);
                for order in &orders {
                    let mut learner = clique_fiso2_learner(base).unwrap();
                    let t = run_game(&mut learner, order, &target, None);
                    assert!(
                        t.mistakes <= 6,
                        "base={base:?} perm={:?} order={order:?}: {} mistakes",
                        target.perm,
                        t.mistakes
                    );
                }
            }
        }
    }

    #[test]
    fn member_learner_never_errs_on_its_own_hypothesis() {
        let base = all2();
        let perm = FiniteSupportPermutation::transposition(0, 3).unwrap();
        let target = PresentedCopy::new(base, perm);
        let mut learner = MemberLearner(target.clone());
        let t = run_game(&mut learner, &window_pairs(8), &target, None);
        assert_eq!(t.mistakes, 0);
    }

    #[test]
    fn repeated_pairs_are_answered_from_the_transcript() {
        let config = at_demo();
        let mut learner = at_learner(&config);
        let target = PresentedCopy::new(config.spec(), FiniteSupportPermutation::identity());
        let order = vec![(1, 2), (2, 1), (1, 2)];
        let t = run_game(&mut learner, &order, &target, None);
        assert_eq!(t.rounds.len(), 1);
    }

    #[test]
    fn two_member_version_space_forces_one_mistake_on_any_learner() {
        let base = GraphSpec::n_core(1);
        let members = vec![
            FiniteSupportPermutation::identity(),
            FiniteSupportPermutation::transposition(1, 2).unwrap(),
        ];
        for learner_kind in 0..3 {
            let mut adversary =
                VersionSpaceAdversary::with_members(base.clone(), members.clone(), 3);
            let t = match learner_kind {
                0 => run_adaptive_game(&mut ConstantLearner(false), &mut adversary, None),
                1 => run_adaptive_game(&mut ConstantLearner(true), &mut adversary, None),
                _ => {
                    let member = PresentedCopy::new(
                        base.clone(),
                        FiniteSupportPermutation::identity(),
                    );
                    run_adaptive_game(&mut MemberLearner(member), &mut adversary, None)
                }
            };
            assert_eq!(t.mistakes, 1, "learner {learner_kind}");
        }
    }

    #[test]
    fn singleton_version_space_forces_nothing() {
        let base = GraphSpec::m_core(1);
        let members = vec![FiniteSupportPermutation::identity()];
        let mut adversary = VersionSpaceAdversary::with_members(base.clone(), members, 4);
        let member = PresentedCopy::new(base, FiniteSupportPermutation::identity());
        let t = run_adaptive_game(&mut MemberLearner(member), &mut adversary, None);
        assert_eq!(t.mistakes, 0);
        assert!(t.rounds.is_empty());
    }

    #[test]
    fn shattered_matching_forces_two_mistakes_on_constant_zero() {
        let class = WindowedClass::new(GraphSpec::m_core(2), 8, 8).unwrap();
        let mut adversary = VersionSpaceAdversary::new(&class).unwrap();
        let t = run_adaptive_game(&mut ConstantLearner(false), &mut adversary, None);
        assert!(t.mistakes >= 2, "forced only {}", t.mistakes);
    }

    #[test]
    fn sampled_orders_are_reproducible() {
        let pairs = window_pairs(6);
        let a = sampled_orders(&pairs, 5, 17);
        let b = sampled_orders(&pairs, 5, 17);
        assert_eq!(a, b);
        let c = sampled_orders(&pairs, 5, 18);
        assert_ne!(a, c);
    }
}

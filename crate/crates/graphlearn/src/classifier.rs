//! Four-class learnability verdicts backed by re-checkable certificates.
//!
//! The classifier places a spec into one of four classes: online learnable,
//! weakly online but not online, weakly PAC but not weakly online, or
//! absolutely non-learnable. A verdict is either structural (the spec shape
//! itself decides, e.g. a declared automorphically trivial normal form) or
//! budgeted evidence from three witness searches: induced cores, adjacency
//! realizations of all bipartitions of a set, and neighborhood staircases.
//! The searches quantify over a finite window; reports label which side of
//! the quantifier they checked.

use std::collections::BTreeMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::dimensions::{lemma56_witness, Lemma56Witness};
use crate::error::{Error, Meter};
use crate::graph::{GraphSpec, SizeRule};
use crate::Vertex;

/// Finite forbidden-core patterns: a `d`-edge matching with `2d` extra
/// isolated vertices, a center with `d` neighbors and `d` non-neighbors, and
/// the matching's complement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Pattern {
    Md { d: u64 },
    Nd { d: u64 },
    CoMd { d: u64 },
}

impl Pattern {
    pub fn vertex_count(&self) -> u64 {
        match self {
            Pattern::Md { d } | Pattern::CoMd { d } => 4 * d,
            Pattern::Nd { d } => 2 * d + 1,
        }
    }

    /// Adjacency inside the pattern.
    pub fn edge(&self, a: u64, b: u64) -> bool {
        if a == b {
            return false;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        match self {
            Pattern::Md { d } => hi == lo + 1 && lo % 2 == 0 && lo < 2 * d,
            Pattern::Nd { d } => lo == 0 && hi <= *d,
            Pattern::CoMd { d } => !(hi == lo + 1 && lo % 2 == 0 && lo < 2 * d),
        }
    }
}

/// First injective induced-subgraph embedding of the pattern into the base,
/// in lexicographic order of the image tuple, or none within the window.
pub fn find_induced(
    base: &GraphSpec,
    pattern: Pattern,
    window: u64,
    meter: &mut Meter,
) -> Result<Option<Vec<Vertex>>, Error> {
    let count = pattern.vertex_count() as usize;
    if count as u64 > window {
        return Ok(None);
    }
    let mut images: Vec<Vertex> = Vec::with_capacity(count);
    if descend_embedding(base, &pattern, count, window, &mut images, meter)? {
        Ok(Some(images))
    } else {
        Ok(None)
    }
}

fn descend_embedding(
    base: &GraphSpec,
    pattern: &Pattern,
    count: usize,
    window: u64,
    images: &mut Vec<Vertex>,
    meter: &mut Meter,
) -> Result<bool, Error> {
    if images.len() == count {
        return Ok(true);
    }
    let next = images.len() as u64;
    'cand: for cand in 0..window {
        meter.charge(1)?;
        if images.contains(&cand) {
            continue;
        }
        for (prev, &img) in images.iter().enumerate() {
            meter.charge(1)?;
            if base.edge(img, cand) != pattern.edge(prev as u64, next) {
                continue 'cand;
            }
        }
        images.push(cand);
        if descend_embedding(base, pattern, count, window, images, meter)? {
            return Ok(true);
        }
        images.pop();
    }
    Ok(false)
}

/// A set `A` together with, for every bipartition of `A`, a vertex adjacent
/// to exactly the chosen side. Keys are bipartition masks over `a` in order:
/// character `i` is `1` when `a[i]` is on the adjacent side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlmostRandomWitness {
    pub a: Vec<Vertex>,
    pub realizers: BTreeMap<String, Vertex>,
}

impl AlmostRandomWitness {
    pub fn validate(&self, base: &GraphSpec) -> Result<(), String> {
        let n = self.a.len();
        if n >= 32 || self.realizers.len() != 1usize << n {
            return Err(format!(
                "expected {} realizers, found {}",
                1usize << n.min(31),
                self.realizers.len()
            ));
        }
        for (mask, &z) in &self.realizers {
            if mask.len() != n {
                return Err(format!("mask {mask:?} has wrong length"));
            }
            for (i, &ai) in self.a.iter().enumerate() {
                let want = mask.as_bytes()[i] == b'1';
                if base.edge(z, ai) != want {
                    return Err(format!(
                        "realizer {z} of mask {mask} is {}adjacent to {ai}",
                        if want { "not " } else { "" }
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Searches for the lexicographically first `n`-set whose bipartitions are
/// all realized by window vertices.
pub fn almost_random_witness(
    base: &GraphSpec,
    n: u64,
    window: u64,
    meter: &mut Meter,
) -> Result<Option<AlmostRandomWitness>, Error> {
    if n >= 32 {
        return Err(Error::InvalidArguments("n must be below 32".into()));
    }
    if n > window {
        return Ok(None);
    }
    'sets: for a in (0..window).combinations(n as usize) {
        meter.charge(1)?;
        let mut realizers = BTreeMap::new();
        for mask in 0u32..(1 << n) {
            let mut found = None;
            'zs: for z in 0..window {
                meter.charge(1)?;
                for (i, &ai) in a.iter().enumerate() {
                    let want = (mask >> i) & 1 == 1;
                    if base.edge(z, ai) != want {
                        continue 'zs;
                    }
                }
                found = Some(z);
                break;
            }
            match found {
                Some(z) => {
                    let key: String = (0..n)
                        .map(|i| if (mask >> i) & 1 == 1 { '1' } else { '0' })
                        .collect();
                    realizers.insert(key, z);
                }
                None => continue 'sets,
            }
        }
        return Ok(Some(AlmostRandomWitness { a, realizers }));
    }
    Ok(None)
}

/// Outcome of one budgeted search level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum SearchEntry<T> {
    Found { witness: T },
    NoneWithin { window: u64 },
}

impl<T> SearchEntry<T> {
    pub fn is_found(&self) -> bool {
        matches!(self, SearchEntry::Found { .. })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AtStructure {
    Given,
    NotGiven,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    OnlineLearnable,
    WeaklyOnlineNotOnline,
    WeaklyPacNotWeaklyOnline,
    AbsolutelyNonLearnable,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictBasis {
    /// The spec shape itself proves the verdict for the infinite graph.
    Structural,
    /// Structure plus a family-level extension-property guarantee.
    ExactExtensionProperty,
    /// Witness searches within the stated budgets; evidence, not proof.
    BudgetedEvidence,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyBudgets {
    pub d_max: u64,
    pub n_max: u64,
    pub window: u64,
}

impl Default for ClassifyBudgets {
    fn default() -> Self {
        ClassifyBudgets {
            d_max: 3,
            n_max: 3,
            window: 64,
        }
    }
}

/// Serializes level-keyed maps with string keys so they survive nesting
/// inside tag-discriminated enums.
mod level_map {
    use std::collections::BTreeMap;

    use serde::de::Error as DeError;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer, T: Serialize>(
        map: &BTreeMap<u64, T>,
        serializer: S,
    ) -> Result<S::Ok, S::Error> {
        serializer.collect_map(map.iter().map(|(k, v)| (k.to_string(), v)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>, T: Deserialize<'de>>(
        deserializer: D,
    ) -> Result<BTreeMap<u64, T>, D::Error> {
        let raw: BTreeMap<String, T> = BTreeMap::deserialize(deserializer)?;
        raw.into_iter()
            .map(|(k, v)| k.parse::<u64>().map(|k| (k, v)).map_err(DeError::custom))
            .collect()
    }
}

/// Per-graph verdict with every certificate the decision rested on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub spec: GraphSpec,
    pub spec_sha256: String,
    pub budgets: ClassifyBudgets,
    pub at_structure: AtStructure,
    #[serde(with = "level_map")]
    pub md_witnesses: BTreeMap<u64, SearchEntry<Vec<Vertex>>>,
    #[serde(with = "level_map")]
    pub nd_witnesses: BTreeMap<u64, SearchEntry<Vec<Vertex>>>,
    #[serde(with = "level_map")]
    pub co_md_witnesses: BTreeMap<u64, SearchEntry<Vec<Vertex>>>,
    #[serde(with = "level_map")]
    pub almost_random: BTreeMap<u64, SearchEntry<AlmostRandomWitness>>,
    #[serde(with = "level_map")]
    pub lemma56: BTreeMap<u64, SearchEntry<Lemma56Witness>>,
    pub verdict: Verdict,
    pub verdict_basis: VerdictBasis,
    pub verdict_detail: String,
}

/// True when the spec shape alone shows the graph is automorphically
/// trivial: a finite core decides everything and the rest is a uniform tail.
pub fn recognizably_automorphically_trivial(spec: &GraphSpec) -> bool {
    match spec {
        GraphSpec::Clique | GraphSpec::Anticlique => true,
        GraphSpec::AutoTrivial { .. } => true,
        GraphSpec::FinitePlusIsolatedTail { .. } => true,
        GraphSpec::ExplicitStaged { .. } => true,
        GraphSpec::CliqueUnion { sizes } => !sizes.has_infinitely_many_nontrivial_cliques(),
        GraphSpec::Complement { inner } => recognizably_automorphically_trivial(inner),
        GraphSpec::Permuted { inner, .. } => recognizably_automorphically_trivial(inner),
        // A union of two cofinitely isolated graphs is again a finite graph
        // plus isolated tail. Unions involving an infinite tail of edges are
        // left to the evidence path.
        GraphSpec::Oplus { left, right } => {
            is_cofinitely_isolated(left) && is_cofinitely_isolated(right)
        }
        GraphSpec::Rado | GraphSpec::RGraph => false,
    }
}

fn is_cofinitely_isolated(spec: &GraphSpec) -> bool {
    match spec {
        GraphSpec::Anticlique
        | GraphSpec::FinitePlusIsolatedTail { .. }
        | GraphSpec::ExplicitStaged { .. } => true,
        GraphSpec::AutoTrivial { tail, s0_prime, .. } => {
            *tail == crate::graph::Tail::Anticlique && s0_prime.is_empty()
        }
        GraphSpec::CliqueUnion { sizes } => match sizes {
            SizeRule::Constant { size } => *size == 1,
            SizeRule::Arithmetic { start, step } => *start == 1 && *step == 0,
            SizeRule::EventuallyPeriodic { cycle, .. } => cycle.iter().all(|&s| s == 1),
        },
        GraphSpec::Permuted { inner, .. } => is_cofinitely_isolated(inner),
        GraphSpec::Oplus { left, right } => {
            is_cofinitely_isolated(left) && is_cofinitely_isolated(right)
        }
        _ => false,
    }
}

/// True for family specs carrying an extension-property guarantee at every
/// level, which upgrades an all-levels adjacency-realization finding from
/// evidence to an exact verdict.
fn has_extension_property_hook(spec: &GraphSpec) -> bool {
    matches!(spec, GraphSpec::Rado)
}

/// Runs the decision procedure at the given budgets.
///
/// Structurally automorphically trivial specs are decided without searches;
/// staged-construction outputs additionally get the full evidence maps so
/// their fragment structure is visible in the report. Budget exhaustion in
/// any search propagates as an error.
pub fn classify(
    spec: &GraphSpec,
    budgets: ClassifyBudgets,
    meter: &mut Meter,
) -> Result<ClassificationReport, Error> {
    if budgets.d_max == 0 || budgets.n_max == 0 || budgets.window == 0 {
        return Err(Error::InvalidArguments("budgets must be positive".into()));
    }
    spec.validate()?;

    let structural_at = recognizably_automorphically_trivial(spec);
    let mut report = ClassificationReport {
        spec: spec.clone(),
        spec_sha256: spec.sha256_hex(),
        budgets,
        at_structure: if structural_at {
            AtStructure::Given
        } else {
            AtStructure::NotGiven
        },
        md_witnesses: BTreeMap::new(),
        nd_witnesses: BTreeMap::new(),
        co_md_witnesses: BTreeMap::new(),
        almost_random: BTreeMap::new(),
        lemma56: BTreeMap::new(),
        verdict: Verdict::Inconclusive,
        verdict_basis: VerdictBasis::BudgetedEvidence,
        verdict_detail: String::new(),
    };

    let wants_evidence_maps =
        !structural_at || matches!(spec, GraphSpec::ExplicitStaged { .. });

    if wants_evidence_maps {
        for d in 1..=budgets.d_max {
            for (pattern, map) in [
                (Pattern::Md { d }, &mut report.md_witnesses),
                (Pattern::Nd { d }, &mut report.nd_witnesses),
                (Pattern::CoMd { d }, &mut report.co_md_witnesses),
            ] {
                let entry = match find_induced(spec, pattern, budgets.window, meter)? {
                    Some(vertices) => SearchEntry::Found { witness: vertices },
                    None => SearchEntry::NoneWithin {
                        window: budgets.window,
                    },
                };
                map.insert(d, entry);
            }
        }
        for n in 1..=budgets.n_max {
            let entry = match almost_random_witness(spec, n, budgets.window, meter)? {
                Some(witness) => SearchEntry::Found { witness },
                None => SearchEntry::NoneWithin {
                    window: budgets.window,
                },
            };
            report.almost_random.insert(n, entry);
            let entry = match lemma56_witness(spec, n, budgets.window, meter)? {
                Some(witness) => SearchEntry::Found { witness },
                None => SearchEntry::NoneWithin {
                    window: budgets.window,
                },
            };
            report.lemma56.insert(n, entry);
        }
    }

    let (verdict, basis, detail) = decide(
        structural_at,
        spec,
        &report.almost_random,
        &report.lemma56,
        budgets,
    );
    report.verdict = verdict;
    report.verdict_basis = basis;
    report.verdict_detail = detail;
    Ok(report)
}

fn decide(
    structural_at: bool,
    spec: &GraphSpec,
    almost_random: &BTreeMap<u64, SearchEntry<AlmostRandomWitness>>,
    lemma56: &BTreeMap<u64, SearchEntry<Lemma56Witness>>,
    budgets: ClassifyBudgets,
) -> (Verdict, VerdictBasis, String) {
    if structural_at {
        return (
            Verdict::OnlineLearnable,
            VerdictBasis::Structural,
            "spec shape is an automorphically trivial normal form".into(),
        );
    }
    let ar_all = almost_random.values().all(SearchEntry::is_found);
    let l56_failed_at: Vec<u64> = lemma56
        .iter()
        .filter(|(_, e)| !e.is_found())
        .map(|(&n, _)| n)
        .collect();

    if ar_all {
        if has_extension_property_hook(spec) {
            (
                Verdict::AbsolutelyNonLearnable,
                VerdictBasis::ExactExtensionProperty,
                format!(
                    "bipartition realizers at every level up to {}, and the family satisfies the extension property at all levels",
                    budgets.n_max
                ),
            )
        } else {
            (
                Verdict::AbsolutelyNonLearnable,
                VerdictBasis::BudgetedEvidence,
                format!(
                    "bipartition realizers found at every level up to {} within window {}",
                    budgets.n_max, budgets.window
                ),
            )
        }
    } else if !l56_failed_at.is_empty() {
        (
            Verdict::WeaklyOnlineNotOnline,
            VerdictBasis::BudgetedEvidence,
            format!(
                "no neighborhood staircase at depth {:?} within window {}, and the spec shape is not automorphically trivial",
                l56_failed_at, budgets.window
            ),
        )
    } else {
        (
            Verdict::WeaklyPacNotWeaklyOnline,
            VerdictBasis::BudgetedEvidence,
            format!(
                "staircases at every depth up to {} but bipartition realization fails at some level within window {}",
                budgets.n_max, budgets.window
            ),
        )
    }
}

/// Re-checks every certificate embedded in a report against the embedded
/// spec, including the hash binding and the verdict derivation.
pub fn verify_report(report: &ClassificationReport) -> Result<(), Vec<String>> {
    let mut problems = Vec::new();
    if report.spec.validate().is_err() {
        problems.push("embedded spec fails validation".into());
        return Err(problems);
    }
    if report.spec_sha256 != report.spec.sha256_hex() {
        problems.push("spec hash does not match the embedded spec".into());
    }

    let groups: [(fn(u64) -> Pattern, &BTreeMap<u64, SearchEntry<Vec<Vertex>>>); 3] = [
        (|d| Pattern::Md { d }, &report.md_witnesses),
        (|d| Pattern::Nd { d }, &report.nd_witnesses),
        (|d| Pattern::CoMd { d }, &report.co_md_witnesses),
    ];
    for (make_pattern, map) in groups {
        for (&d, entry) in map {
            if let SearchEntry::Found { witness } = entry {
                let pattern = make_pattern(d);
                if let Err(e) = validate_embedding(&report.spec, pattern, witness) {
                    problems.push(format!("{pattern:?}: {e}"));
                }
            }
        }
    }
    for (&n, entry) in &report.almost_random {
        if let SearchEntry::Found { witness } = entry {
            if witness.a.len() as u64 != n {
                problems.push(format!("level-{n} bipartition witness has wrong set size"));
            }
            if let Err(e) = witness.validate(&report.spec) {
                problems.push(format!("level-{n} bipartition witness: {e}"));
            }
        }
    }
    for (&n, entry) in &report.lemma56 {
        if let SearchEntry::Found { witness } = entry {
            if witness.v.len() as u64 != n {
                problems.push(format!("depth-{n} staircase witness has wrong depth"));
            }
            if let Err(e) = witness.validate(&report.spec) {
                problems.push(format!("depth-{n} staircase witness: {e}"));
            }
        }
    }

    let structural_at = recognizably_automorphically_trivial(&report.spec);
    if (report.at_structure == AtStructure::Given) != structural_at {
        problems.push("at_structure flag does not match the spec shape".into());
    }
    let (verdict, basis, _) = decide(
        structural_at,
        &report.spec,
        &report.almost_random,
        &report.lemma56,
        report.budgets,
    );
    if verdict != report.verdict || basis != report.verdict_basis {
        problems.push(format!(
            "verdict {:?}/{:?} does not re-derive from the evidence (expected {:?}/{:?})",
            report.verdict, report.verdict_basis, verdict, basis
        ));
    }

    if problems.is_empty() {
        Ok(())
    } else {
        Err(problems)
    }
}

/// Validates an induced-subgraph embedding.
pub fn validate_embedding(
    base: &GraphSpec,
    pattern: Pattern,
    images: &[Vertex],
) -> Result<(), String> {
    if images.len() as u64 != pattern.vertex_count() {
        return Err(format!(
            "embedding lists {} vertices, pattern has {}",
            images.len(),
            pattern.vertex_count()
        ));
    }
    let mut sorted = images.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != images.len() {
        return Err("embedding is not injective".into());
    }
    for a in 0..images.len() {
        for b in (a + 1)..images.len() {
            let want = pattern.edge(a as u64, b as u64);
            if base.edge(images[a], images[b]) != want {
                return Err(format!(
                    "pattern pair ({a},{b}) maps to ({},{}) with label {}",
                    images[a],
                    images[b],
                    base.edge(images[a], images[b]) as u8
                ));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Tail;

    fn meter() -> Meter {
        Meter::default()
    }

    #[test]
    fn clique_admits_no_matching_core() {
        assert!(
            find_induced(&GraphSpec::Clique, Pattern::Md { d: 1 }, 16, &mut meter())
                .unwrap()
                .is_none()
        );
    }

    #[test]
    fn pair_cliques_admit_a_double_matching_core() {
        // Two clique pairs plus four vertices drawn one per further clique.
        let g = GraphSpec::CliqueUnion {
            sizes: SizeRule::Constant { size: 2 },
        };
        let emb = find_induced(&g, Pattern::Md { d: 2 }, 16, &mut meter())
            .unwrap()
            .unwrap();
        validate_embedding(&g, Pattern::Md { d: 2 }, &emb).unwrap();
    }

    #[test]
    fn rado_admits_center_cores() {
        let emb = find_induced(&GraphSpec::Rado, Pattern::Nd { d: 2 }, 32, &mut meter())
            .unwrap()
            .unwrap();
        validate_embedding(&GraphSpec::Rado, Pattern::Nd { d: 2 }, &emb).unwrap();
    }

    #[test]
    fn half_graph_has_no_double_matching() {
        // Two disjoint edges with no cross edges cannot exist in a half-graph.
        assert!(
            find_induced(&GraphSpec::RGraph, Pattern::Md { d: 2 }, 32, &mut meter())
                .unwrap()
                .is_none()
        );
    }

    #[test]
    fn complement_duality_of_matching_cores() {
        let bases = [
            GraphSpec::CliqueUnion {
                sizes: SizeRule::Constant { size: 2 },
            },
            GraphSpec::Rado,
            GraphSpec::RGraph,
        ];
        for base in bases {
            for d in 1..=2 {
                let md = find_induced(&base, Pattern::Md { d }, 16, &mut meter()).unwrap();
                let comd = find_induced(
                    &GraphSpec::complement(base.clone()),
                    Pattern::CoMd { d },
                    16,
                    &mut meter(),
                )
                .unwrap();
                assert_eq!(md, comd, "base={base:?} d={d}");
            }
        }
    }

    #[test]
    fn empty_set_is_vacuously_almost_random() {
        let w = almost_random_witness(&GraphSpec::Anticlique, 0, 8, &mut meter())
            .unwrap()
            .unwrap();
        assert!(w.a.is_empty());
        assert_eq!(w.realizers.get(""), Some(&0));
    }

    #[test]
    fn rado_realizes_all_bipartitions_of_the_first_pair() {
        let w = almost_random_witness(&GraphSpec::Rado, 2, 16, &mut meter())
            .unwrap()
            .unwrap();
        assert_eq!(w.a, vec![0, 1]);
        w.validate(&GraphSpec::Rado).unwrap();
    }

    #[test]
    fn half_graph_parity_blocks_level_two() {
        assert!(almost_random_witness(&GraphSpec::RGraph, 2, 24, &mut meter())
            .unwrap()
            .is_none());
    }

    #[test]
    fn classify_structural_families() {
        let budgets = ClassifyBudgets::default();
        for spec in [
            GraphSpec::Clique,
            GraphSpec::Anticlique,
            GraphSpec::m_core(2),
            GraphSpec::AutoTrivial {
                s0_size: 2,
                s0_edges: [(0, 1)].into_iter().collect(),
                s0_prime: [0].into_iter().collect(),
                tail: Tail::Anticlique,
            },
        ] {
            let report = classify(&spec, budgets, &mut meter()).unwrap();
            assert_eq!(report.verdict, Verdict::OnlineLearnable, "{spec:?}");
            assert_eq!(report.verdict_basis, VerdictBasis::Structural);
            verify_report(&report).unwrap();
        }
    }

    #[test]
    fn classify_rado_is_absolutely_non_learnable() {
        let report = classify(&GraphSpec::Rado, ClassifyBudgets::default(), &mut meter()).unwrap();
        assert_eq!(report.verdict, Verdict::AbsolutelyNonLearnable);
        assert_eq!(report.verdict_basis, VerdictBasis::ExactExtensionProperty);
        verify_report(&report).unwrap();
    }

    #[test]
    fn classify_growing_cliques_weakly_online_only() {
        let spec = GraphSpec::CliqueUnion {
            sizes: SizeRule::Arithmetic { start: 1, step: 1 },
        };
        let report = classify(&spec, ClassifyBudgets::default(), &mut meter()).unwrap();
        assert_eq!(report.verdict, Verdict::WeaklyOnlineNotOnline);
        verify_report(&report).unwrap();
    }

    #[test]
    fn classify_half_graph_weakly_pac_only() {
        let report =
            classify(&GraphSpec::RGraph, ClassifyBudgets::default(), &mut meter()).unwrap();
        assert_eq!(report.verdict, Verdict::WeaklyPacNotWeaklyOnline);
        verify_report(&report).unwrap();
    }

    #[test]
    fn tampered_report_fails_verification() {
        let mut report =
            classify(&GraphSpec::RGraph, ClassifyBudgets::default(), &mut meter()).unwrap();
        report.verdict = Verdict::OnlineLearnable;
        assert!(verify_report(&report).is_err());
    }

    #[test]
    fn trichotomy_on_the_automorphically_trivial_family() {
        // Declared-normal-form specs admit none of the forbidden cores.
        let mut specs = Vec::new();
        for m in 0..=3u64 {
            let core_pairs: Vec<(u64, u64)> =
                (0..m).flat_map(|a| (a + 1..m).map(move |b| (a, b))).collect();
            for edge_mask in 0..(1u32 << core_pairs.len()) {
                let edges: std::collections::BTreeSet<(u64, u64)> = core_pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| (edge_mask >> i) & 1 == 1)
                    .map(|(_, &p)| p)
                    .collect();
                for prime_mask in 0..(1u32 << m) {
                    let prime: std::collections::BTreeSet<u64> =
                        (0..m).filter(|i| (prime_mask >> i) & 1 == 1).collect();
                    for tail in [Tail::Clique, Tail::Anticlique] {
                        specs.push(GraphSpec::AutoTrivial {
                            s0_size: m,
                            s0_edges: edges.clone(),
                            s0_prime: prime.clone(),
                            tail,
                        });
                    }
                }
            }
        }
        // Drop duplicates arising from the empty core.
        specs.dedup();
        // An automorphically trivial graph may well contain small cores (an
        // edge core plus an isolated tail contains the 1-matching pattern),
        // but each pattern family must die out at some level.
        let d_max = 3u64;
        let makers: [fn(u64) -> Pattern; 3] =
            [|d| Pattern::Md { d }, |d| Pattern::Nd { d }, |d| Pattern::CoMd { d }];
        for spec in specs {
            for make in makers {
                let found_at_every_level = (1..=d_max).all(|d| {
                    find_induced(&spec, make(d), 14, &mut meter())
                        .unwrap()
                        .is_some()
                });
                assert!(
                    !found_at_every_level,
                    "{spec:?} admits {:?} at every level up to {d_max}",
                    make(1)
                );
            }
        }
    }
}

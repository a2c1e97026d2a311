//! Windowed hypothesis classes: copies of a base graph induced by
//! permutations with bounded support inside a vertex window.
//!
//! The class over `(k, window)` contains one copy per permutation with
//! support of size at most `k` contained in `[0, window)`. Enumeration order
//! is support size, then support set (lexicographic), then image word
//! (lexicographic); the identity always comes first. All searches in this
//! crate that return a permutation return the first one in this order.

use itertools::Itertools;

use crate::error::{Error, Meter};
use crate::graph::{GraphSpec, PresentedCopy};
use crate::perm::FiniteSupportPermutation;
use crate::Vertex;

/// Number of derangements of `n` elements.
pub fn derangements(n: u64) -> u128 {
    // D(0) = 1, D(1) = 0, D(n) = (n-1) (D(n-1) + D(n-2)).
    let mut prev = 1u128;
    let mut cur = 0u128;
    match n {
        0 => return 1,
        1 => return 0,
        _ => {}
    }
    for i in 2..=n {
        let next = (i as u128 - 1) * (cur + prev);
        prev = cur;
        cur = next;
    }
    cur
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut result = 1u128;
    for i in 0..k {
        result = result * (n - i) as u128 / (i + 1) as u128;
    }
    result
}

/// Size of the windowed class: `sum_{j=0..=k} C(window, j) * D(j)`.
pub fn class_size(k: u64, window: u64) -> u128 {
    (0..=k.min(window))
        .map(|j| binomial(window, j) * derangements(j))
        .sum()
}

/// All window pairs `(u, v)` with `u < v < window`, lexicographically.
pub fn window_pairs(window: u64) -> Vec<(Vertex, Vertex)> {
    let mut pairs = Vec::new();
    for u in 0..window {
        for v in (u + 1)..window {
            pairs.push((u, v));
        }
    }
    pairs
}

/// Enumerates every finite-support permutation with support contained in
/// `[0, window)` of size at most `k`, in canonical order.
pub fn enumerate_permutations(
    k: u64,
    window: u64,
) -> Result<impl Iterator<Item = FiniteSupportPermutation>, Error> {
    if k > window {
        return Err(Error::InvalidArguments(format!(
            "support bound k={k} exceeds window {window}"
        )));
    }
    let iter = (0..=k as usize).flat_map(move |j| {
        (0..window).combinations(j).flat_map(move |support| {
            let filter_support = support.clone();
            let map_support = support.clone();
            support
                .into_iter()
                .permutations(j)
                .filter(move |word| word.iter().zip(&filter_support).all(|(w, s)| w != s))
                .map(move |word| {
                    FiniteSupportPermutation::from_images(&map_support, &word)
                        .expect("derangement words are valid permutations")
                })
        })
    });
    Ok(iter)
}

/// The class of copies of `base` induced by windowed bounded-support
/// permutations.
#[derive(Clone, Debug)]
pub struct WindowedClass {
    pub base: GraphSpec,
    pub k: u64,
    pub window: u64,
}

impl WindowedClass {
    pub fn new(base: GraphSpec, k: u64, window: u64) -> Result<Self, Error> {
        if k > window {
            return Err(Error::InvalidArguments(format!(
                "support bound k={k} exceeds window {window}"
            )));
        }
        Ok(WindowedClass { base, k, window })
    }

    pub fn permutations(
        &self,
    ) -> Result<impl Iterator<Item = FiniteSupportPermutation>, Error> {
        enumerate_permutations(self.k, self.window)
    }

    pub fn members(&self) -> Result<impl Iterator<Item = PresentedCopy> + '_, Error> {
        Ok(self
            .permutations()?
            .map(move |perm| PresentedCopy::new(self.base.clone(), perm)))
    }

    pub fn size(&self) -> u128 {
        class_size(self.k, self.window)
    }
}

/// Searches the windowed class for a copy inducing exactly the labels `tau`
/// on `pairs`, returning the first such permutation in canonical order.
///
/// The copy induced by `h` labels `(u, v)` with `edge(base, h⁻¹u, h⁻¹v)`, so
/// the labels depend on `h` only through the preimages of the pair vertices.
/// The search therefore runs over injective preimage assignments and, among
/// the assignments with the canonically least support, reconstructs the
/// word-minimal permutation. This returns exactly the first realizer of the
/// full class enumeration without materializing the class.
pub fn realize_configuration(
    base: &GraphSpec,
    pairs: &[(Vertex, Vertex)],
    tau: &[bool],
    k: u64,
    window: u64,
    meter: &mut Meter,
) -> Result<Option<FiniteSupportPermutation>, Error> {
    if tau.len() != pairs.len() {
        return Err(Error::InvalidArguments(format!(
            "{} pairs but {} labels",
            pairs.len(),
            tau.len()
        )));
    }
    if k > window {
        return Err(Error::InvalidArguments(format!(
            "support bound k={k} exceeds window {window}"
        )));
    }
    for &(u, v) in pairs {
        if u >= window || v >= window {
            return Err(Error::InvalidArguments(format!(
                "pair ({u},{v}) outside window {window}"
            )));
        }
    }

    // Distinct pair vertices, sorted: the preimage assignment domain.
    let mut p_verts: Vec<Vertex> = pairs.iter().flat_map(|&(u, v)| [u, v]).collect();
    p_verts.sort_unstable();
    p_verts.dedup();
    let index_of = |v: Vertex| p_verts.binary_search(&v).unwrap();

    // For each assignment depth, the pair labels that become checkable there.
    let mut checks_at: Vec<Vec<(usize, usize, bool)>> = vec![Vec::new(); p_verts.len().max(1)];
    for (pi, &(u, v)) in pairs.iter().enumerate() {
        let (iu, iv) = (index_of(u), index_of(v));
        checks_at[iu.max(iv)].push((iu, iv, tau[pi]));
    }

    let mut search = RealizeSearch {
        base,
        p_verts: &p_verts,
        checks_at: &checks_at,
        k,
        window,
        images: vec![u64::MAX; p_verts.len()],
        used: vec![false; window as usize],
        moved: Vec::new(),
        best: None,
    };
    search.descend(0, meter)?;

    let Some((_, t_sorted, sigmas)) = search.best else {
        return Ok(None);
    };
    Ok(Some(minimal_word_realizer(&p_verts, &t_sorted, &sigmas)))
}

struct RealizeSearch<'a> {
    base: &'a GraphSpec,
    p_verts: &'a [Vertex],
    checks_at: &'a [Vec<(usize, usize, bool)>],
    k: u64,
    window: u64,
    images: Vec<Vertex>,
    used: Vec<bool>,
    /// Union of moved vertices and their images so far; its final size is the
    /// support size of any permutation extending the assignment.
    moved: Vec<Vertex>,
    best: Option<(usize, Vec<Vertex>, Vec<Vec<Vertex>>)>,
}

impl RealizeSearch<'_> {
    fn descend(&mut self, depth: usize, meter: &mut Meter) -> Result<(), Error> {
        if let Some((0, _, _)) = self.best {
            return Ok(()); // identity realizer cannot be beaten
        }
        if depth == self.p_verts.len() {
            let mut t_sorted = self.moved.clone();
            t_sorted.sort_unstable();
            let key = (self.moved.len(), t_sorted);
            match &mut self.best {
                None => self.best = Some((key.0, key.1, vec![self.images.clone()])),
                Some((bs, bt, sigmas)) => {
                    if (key.0, &key.1) < (*bs, bt) {
                        *bs = key.0;
                        *bt = key.1;
                        sigmas.clear();
                        sigmas.push(self.images.clone());
                    } else if (key.0, &key.1) == (*bs, bt) {
                        sigmas.push(self.images.clone());
                    }
                }
            }
            return Ok(());
        }

        let vertex = self.p_verts[depth];
        for candidate in 0..self.window {
            meter.charge(1)?;
            if self.used[candidate as usize] {
                continue;
            }

            // Support accounting: moving `vertex` adds it and its image.
            let moved_before = self.moved.len();
            if candidate != vertex {
                if !self.moved.contains(&vertex) {
                    self.moved.push(vertex);
                }
                if !self.moved.contains(&candidate) {
                    self.moved.push(candidate);
                }
            }
            let support_ok = self.moved.len() as u64 <= self.k
                && self
                    .best
                    .as_ref()
                    .map_or(true, |(bs, _, _)| self.moved.len() <= *bs);

            if support_ok {
                self.images[depth] = candidate;
                self.used[candidate as usize] = true;

                let mut labels_ok = true;
                for &(iu, iv, want) in &self.checks_at[depth] {
                    meter.charge(1)?;
                    if self.base.edge(self.images[iu], self.images[iv]) != want {
                        labels_ok = false;
                        break;
                    }
                }
                if labels_ok {
                    self.descend(depth + 1, meter)?;
                }

                self.used[candidate as usize] = false;
                self.images[depth] = u64::MAX;
            }
            self.moved.truncate(moved_before);
        }
        Ok(())
    }
}

/// Among the support-minimal preimage assignments, reconstructs the realizer
/// with the lexicographically least image word: forced entries send each
/// image back to its source, and the remaining slots are filled greedily.
fn minimal_word_realizer(
    p_verts: &[Vertex],
    t_sorted: &[Vertex],
    sigmas: &[Vec<Vertex>],
) -> FiniteSupportPermutation {
    let mut best: Option<(Vec<Vertex>, FiniteSupportPermutation)> = None;
    for images in sigmas {
        let moved: Vec<(Vertex, Vertex)> = p_verts
            .iter()
            .zip(images)
            .filter(|(p, img)| *p != *img)
            .map(|(&p, &img)| (p, img))
            .collect();

        let mut h_map = std::collections::BTreeMap::new();
        for &(p, img) in &moved {
            h_map.insert(img, p); // h sends the image back to its source
        }
        let mut free_values: Vec<Vertex> = t_sorted
            .iter()
            .copied()
            .filter(|t| !moved.iter().any(|&(p, _)| p == *t))
            .collect();
        for &t in t_sorted {
            if !h_map.contains_key(&t) {
                let slot = free_values
                    .iter()
                    .position(|&v| v != t)
                    .expect("a fixed-point-free completion always exists");
                h_map.insert(t, free_values.remove(slot));
            }
        }

        let word: Vec<Vertex> = h_map.values().copied().collect();
        let perm = FiniteSupportPermutation::from_moves(h_map)
            .expect("completion of an injective assignment is a permutation");
        if best.as_ref().map_or(true, |(bw, _)| word < *bw) {
            best = Some((word, perm));
        }
    }
    best.expect("at least one assignment").1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Meter;

    fn all_perms_brute(window: u64) -> Vec<Vec<Vertex>> {
        (0..window).permutations(window as usize).collect()
    }

    #[test]
    fn k_zero_enumerates_exactly_the_identity() {
        for window in [0u64, 1, 5] {
            let perms: Vec<_> = enumerate_permutations(0, window).unwrap().collect();
            assert_eq!(perms.len(), 1);
            assert!(perms[0].is_identity());
        }
    }

    #[test]
    fn enumeration_counts_match_brute_force() {
        // Oracle: filter all window! bijections by support size.
        for window in 1..=6u64 {
            for k in 0..=4u64.min(window) {
                let brute = all_perms_brute(window)
                    .into_iter()
                    .filter(|word| {
                        word.iter()
                            .enumerate()
                            .filter(|(i, &img)| img != *i as u64)
                            .count() as u64
                            <= k
                    })
                    .count() as u128;
                let enumerated = enumerate_permutations(k, window).unwrap().count() as u128;
                assert_eq!(enumerated, brute, "k={k} window={window}");
                assert_eq!(class_size(k, window), brute, "k={k} window={window}");
            }
        }
    }

    #[test]
    fn small_windows_match_the_closed_forms() {
        // k=2, W=3: identity plus the three transpositions.
        let perms: Vec<_> = enumerate_permutations(2, 3).unwrap().collect();
        assert_eq!(perms.len(), 4);
        assert!(perms[0].is_identity());
        // k=3, W=3: the two 3-cycles join in.
        let perms: Vec<_> = enumerate_permutations(3, 3).unwrap().collect();
        assert_eq!(perms.len(), 6);
    }

    #[test]
    fn enumeration_is_duplicate_free_and_ordered() {
        let perms: Vec<_> = enumerate_permutations(3, 5).unwrap().collect();
        let keys: Vec<_> = perms
            .iter()
            .map(|p| (p.support_size(), p.support(), p.word()))
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(keys.len(), sorted.len());
        assert_eq!(keys, sorted);
    }

    #[test]
    fn rejects_k_larger_than_window() {
        assert!(enumerate_permutations(4, 3).is_err());
    }

    #[test]
    fn realize_identity_when_base_already_matches() {
        let m2 = GraphSpec::m_core(2);
        let mut meter = Meter::default();
        let h = realize_configuration(&m2, &[(0, 1), (2, 3)], &[true, true], 0, 8, &mut meter)
            .unwrap()
            .unwrap();
        assert!(h.is_identity());
    }

    #[test]
    fn realize_mixed_configuration_on_matching_core() {
        let m2 = GraphSpec::m_core(2);
        let mut meter = Meter::default();
        let h = realize_configuration(&m2, &[(0, 1), (2, 3)], &[false, true], 4, 8, &mut meter)
            .unwrap()
            .unwrap();
        // The canonically first realizer moves vertex 0 to the first isolated
        // vertex: the transposition (0 4).
        assert_eq!(h, FiniteSupportPermutation::transposition(0, 4).unwrap());
        // And it really induces the requested labels.
        let copy = PresentedCopy::new(m2, h);
        assert!(!copy.edge(0, 1));
        assert!(copy.edge(2, 3));
    }

    #[test]
    fn anticlique_realizes_no_positive_label() {
        let mut meter = Meter::default();
        for k in [0u64, 2, 4] {
            let got =
                realize_configuration(&GraphSpec::Anticlique, &[(0, 1)], &[true], k, 8, &mut meter)
                    .unwrap();
            assert!(got.is_none());
        }
    }

    #[test]
    fn realizer_agrees_with_class_scan_on_small_classes() {
        // Oracle: scan the enumerated class for the first matching copy.
        let bases = [GraphSpec::m_core(1), GraphSpec::n_core(1), GraphSpec::RGraph];
        let pairs = [(0u64, 1u64), (1, 3)];
        for base in &bases {
            for mask in 0..4u32 {
                let tau = [(mask & 1) != 0, (mask & 2) != 0];
                let scan = enumerate_permutations(3, 5)
                    .unwrap()
                    .find(|h| {
                        let copy = PresentedCopy::new(base.clone(), h.clone());
                        pairs
                            .iter()
                            .zip(&tau)
                            .all(|(&(u, v), &want)| copy.edge(u, v) == want)
                    });
                let mut meter = Meter::default();
                let fast =
                    realize_configuration(base, &pairs, &tau, 3, 5, &mut meter).unwrap();
                assert_eq!(fast, scan, "base={base:?} tau={tau:?}");
            }
        }
    }

    #[test]
    fn realizability_is_monotone_in_k_and_window() {
        let base = GraphSpec::RGraph;
        let pairs = [(0u64, 1), (0, 3)];
        for mask in 0..4u32 {
            let tau = [(mask & 1) != 0, (mask & 2) != 0];
            let mut meter = Meter::default();
            let small = realize_configuration(&base, &pairs, &tau, 2, 6, &mut meter).unwrap();
            if small.is_some() {
                for (k, w) in [(2, 8), (3, 6), (4, 10)] {
                    let bigger =
                        realize_configuration(&base, &pairs, &tau, k, w, &mut meter).unwrap();
                    assert!(bigger.is_some(), "k={k} w={w} tau={tau:?}");
                }
            }
        }
    }
}

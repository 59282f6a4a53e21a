//! Cycle geometry, colored hypergraphs, hamperms and rainbow certificates.
//!
//! Vertices and colors are 1-based everywhere. An edge is stored in
//! canonical form, the strictly increasing list of its vertices.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::sdr::distinct_representatives;

/// Geometry `(n, k, ell)` of an `ell`-overlapping Hamilton cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CycleSpec {
    n: u32,
    k: u32,
    ell: u32,
}

impl CycleSpec {
    pub fn new(n: u32, k: u32, ell: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidSpec(format!(
                "uniformity k = {k} must be at least 2"
            )));
        }
        if ell == 0 || ell >= k {
            return Err(Error::InvalidSpec(format!(
                "overlap must satisfy 1 <= ell < k, got ell = {ell}, k = {k}"
            )));
        }
        if n <= k {
            return Err(Error::InvalidSpec(format!(
                "need n > k, got n = {n}, k = {k}"
            )));
        }
        if !n.is_multiple_of(k - ell) {
            return Err(Error::InvalidSpec(format!(
                "k - ell = {} does not divide n = {n}",
                k - ell
            )));
        }
        Ok(Self { n, k, ell })
    }

    pub fn loose(n: u32, k: u32) -> Result<Self> {
        Self::new(n, k, 1)
    }

    pub fn tight(n: u32, k: u32) -> Result<Self> {
        Self::new(n, k, k.saturating_sub(1))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    /// Block size `k - ell`: the number of new vertices each edge adds.
    pub fn step(&self) -> u32 {
        self.k - self.ell
    }

    /// Number of edges in the cycle, `n / (k - ell)`.
    pub fn m(&self) -> u32 {
        self.n / self.step()
    }

    /// 0-based positions of the `i`-th (0-based) window of a hamperm.
    pub fn window(&self, i: u32) -> impl Iterator<Item = u32> + '_ {
        let start = i * self.step();
        (0..self.k).map(move |j| (start + j) % self.n)
    }
}

/// An edge with a single color. Used when reading and writing files.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ColoredEdge {
    pub vertices: Vec<u32>,
    pub color: u32,
}

/// A k-uniform hypergraph on `[n]` whose edges carry colors from `[r]`.
///
/// In single-color mode every edge carries exactly one color. Multi-color
/// mode records every color an edge received, which is how the directed
/// model looks once orientations are dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredHypergraph {
    n: u32,
    k: u32,
    r: u32,
    multi_color: bool,
    edges: BTreeMap<Vec<u32>, BTreeSet<u32>>,
}

impl ColoredHypergraph {
    pub fn new(n: u32, k: u32, r: u32, multi_color: bool) -> Result<Self> {
        if k == 0 || k > n {
            return invalid(format!("uniformity k = {k} must lie in [1, n = {n}]"));
        }
        if r == 0 {
            return invalid("color count r must be positive");
        }
        Ok(Self {
            n,
            k,
            r,
            multi_color,
            edges: BTreeMap::new(),
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn is_multi_color(&self) -> bool {
        self.multi_color
    }

    /// Number of distinct k-sets present.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of stored (k-set, color) pairs.
    pub fn colored_edge_count(&self) -> usize {
        self.edges.values().map(BTreeSet::len).sum()
    }

    fn check_edge(&self, vertices: &[u32]) -> Result<()> {
        if vertices.len() != self.k as usize {
            return invalid(format!(
                "edge {vertices:?} has {} vertices, expected {}",
                vertices.len(),
                self.k
            ));
        }
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return invalid(format!("edge {vertices:?} is not strictly increasing"));
        }
        if vertices.first().is_some_and(|&v| v < 1) || vertices.last().is_some_and(|&v| v > self.n)
        {
            return invalid(format!("edge {vertices:?} leaves [1, {}]", self.n));
        }
        Ok(())
    }

    /// Adds a colored edge. Vertices may be given in any order.
    ///
    /// In single-color mode a k-set already present is an error; in either
    /// mode a repeated (k-set, color) pair is an error.
    pub fn insert(&mut self, vertices: &[u32], color: u32) -> Result<()> {
        let key = canonical(vertices);
        self.check_edge(&key)?;
        if color < 1 || color > self.r {
            return invalid(format!("color {color} outside [1, {}]", self.r));
        }
        let entry = self.edges.entry(key);
        let colors = match entry {
            std::collections::btree_map::Entry::Occupied(o) => {
                if !self.multi_color {
                    return invalid(format!(
                        "edge {:?} already colored in single-color mode",
                        o.key()
                    ));
                }
                o.into_mut()
            }
            std::collections::btree_map::Entry::Vacant(v) => v.insert(BTreeSet::new()),
        };
        if !colors.insert(color) {
            return invalid(format!("duplicate (edge, color {color}) pair"));
        }
        Ok(())
    }

    /// Sets the color of an edge in single-color mode, replacing any previous one.
    pub fn set_color(&mut self, vertices: &[u32], color: u32) -> Result<()> {
        let key = canonical(vertices);
        self.check_edge(&key)?;
        if color < 1 || color > self.r {
            return invalid(format!("color {color} outside [1, {}]", self.r));
        }
        self.edges.insert(key, BTreeSet::from([color]));
        Ok(())
    }

    pub fn remove(&mut self, vertices: &[u32]) -> bool {
        self.edges.remove(&canonical(vertices)).is_some()
    }

    pub fn contains(&self, vertices: &[u32]) -> bool {
        self.edges.contains_key(&canonical(vertices))
    }

    pub fn colors_of(&self, vertices: &[u32]) -> Option<&BTreeSet<u32>> {
        self.edges.get(&canonical(vertices))
    }

    /// Edges in canonical order together with their colors.
    pub fn edges(&self) -> impl Iterator<Item = (&[u32], &BTreeSet<u32>)> {
        self.edges.iter().map(|(e, c)| (e.as_slice(), c))
    }

    /// Flattened (k-set, color) list in canonical order.
    pub fn colored_edges(&self) -> Vec<ColoredEdge> {
        self.edges
            .iter()
            .flat_map(|(e, cs)| {
                cs.iter().map(move |&c| ColoredEdge {
                    vertices: e.clone(),
                    color: c,
                })
            })
            .collect()
    }

    /// The sub-hypergraph of edges satisfying `keep`.
    pub fn filtered(&self, mut keep: impl FnMut(&[u32]) -> bool) -> Self {
        Self {
            n: self.n,
            k: self.k,
            r: self.r,
            multi_color: self.multi_color,
            edges: self
                .edges
                .iter()
                .filter(|(e, _)| keep(e))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }
}

pub(crate) fn canonical(vertices: &[u32]) -> Vec<u32> {
    let mut key = vertices.to_vec();
    key.sort_unstable();
    key
}

/// A permutation of `[n]` read as a cyclic vertex order for a cycle spec.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hamperm {
    pi: Vec<u32>,
    spec: CycleSpec,
}

impl Hamperm {
    pub fn new(pi: Vec<u32>, spec: CycleSpec) -> Result<Self> {
        if pi.len() != spec.n() as usize {
            return invalid(format!(
                "permutation has length {}, expected n = {}",
                pi.len(),
                spec.n()
            ));
        }
        let mut seen = vec![false; spec.n() as usize + 1];
        for &v in &pi {
            if v < 1 || v > spec.n() || std::mem::replace(&mut seen[v as usize], true) {
                return invalid(format!("{pi:?} is not a permutation of [1, {}]", spec.n()));
            }
        }
        Ok(Self { pi, spec })
    }

    pub fn identity(spec: CycleSpec) -> Self {
        Self {
            pi: (1..=spec.n()).collect(),
            spec,
        }
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.pi
    }

    pub fn spec(&self) -> CycleSpec {
        self.spec
    }

    /// The m induced edges `E(i) = {pi((i-1)(k-ell)+j) : j in [k]}`, indices
    /// taken cyclically, each in canonical form.
    pub fn edges(&self) -> Vec<Vec<u32>> {
        (0..self.spec.m())
            .map(|i| {
                canonical(
                    &self
                        .spec
                        .window(i)
                        .map(|pos| self.pi[pos as usize])
                        .collect::<Vec<_>>(),
                )
            })
            .collect()
    }
}

pub fn edges_of_hamperm(pi: &Hamperm) -> Vec<Vec<u32>> {
    pi.edges()
}

/// A hamperm, its induced edges and one pairwise-distinct color per edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RainbowCertificate {
    pub hamperm: Hamperm,
    pub edges: Vec<Vec<u32>>,
    pub colors: Vec<u32>,
}

/// Why a hamperm is not a rainbow cycle of a hypergraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CycleFailure {
    /// The induced edge with this 1-based index is absent.
    MissingEdge(u32),
    /// All edges exist but no choice of pairwise-distinct colors does.
    NotRainbow,
}

/// Checks whether `pi` induces a rainbow cycle in `h`.
pub fn validate_cycle(
    h: &ColoredHypergraph,
    pi: &Hamperm,
) -> Result<std::result::Result<RainbowCertificate, CycleFailure>> {
    let spec = pi.spec();
    if h.n() != spec.n() || h.k() != spec.k() {
        return invalid(format!(
            "hypergraph (n = {}, k = {}) does not match spec (n = {}, k = {})",
            h.n(),
            h.k(),
            spec.n(),
            spec.k()
        ));
    }
    let edges = pi.edges();
    let mut options: Vec<Vec<u32>> = Vec::with_capacity(edges.len());
    for (i, e) in edges.iter().enumerate() {
        match h.colors_of(e) {
            Some(cs) => options.push(cs.iter().copied().collect()),
            None => return Ok(Err(CycleFailure::MissingEdge(i as u32 + 1))),
        }
    }
    let refs: Vec<&[u32]> = options.iter().map(Vec::as_slice).collect();
    Ok(match distinct_representatives(&refs) {
        Some(colors) => Ok(RainbowCertificate {
            hamperm: pi.clone(),
            edges,
            colors,
        }),
        None => Err(CycleFailure::NotRainbow),
    })
}

/// Re-checks a certificate against `h` from scratch.
pub fn verify_certificate(h: &ColoredHypergraph, cert: &RainbowCertificate) -> bool {
    let spec = cert.hamperm.spec();
    if h.n() != spec.n() || h.k() != spec.k() {
        return false;
    }
    if Hamperm::new(cert.hamperm.as_slice().to_vec(), spec).is_err() {
        return false;
    }
    if cert.edges != cert.hamperm.edges() || cert.colors.len() != cert.edges.len() {
        return false;
    }
    let distinct: BTreeSet<u32> = cert.colors.iter().copied().collect();
    if distinct.len() != cert.colors.len() {
        return false;
    }
    cert.edges
        .iter()
        .zip(&cert.colors)
        .all(|(e, c)| h.colors_of(e).is_some_and(|cs| cs.contains(c)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn complete(n: u32, k: u32, r: u32) -> ColoredHypergraph {
        let mut h = ColoredHypergraph::new(n, k, r, false).unwrap();
        let mut color = 0;
        for e in crate::combinatorics::k_subsets(n, k) {
            color = color % r + 1;
            h.insert(&e, color).unwrap();
        }
        h
    }

    #[test]
    fn spec_rejects_bad_geometry() {
        assert!(matches!(
            CycleSpec::new(7, 3, 1),
            Err(Error::InvalidSpec(_))
        ));
        assert!(matches!(
            CycleSpec::new(3, 3, 2),
            Err(Error::InvalidSpec(_))
        ));
        assert!(matches!(
            CycleSpec::new(6, 3, 3),
            Err(Error::InvalidSpec(_))
        ));
        assert!(matches!(
            CycleSpec::new(6, 3, 0),
            Err(Error::InvalidSpec(_))
        ));
        assert!(matches!(
            CycleSpec::new(6, 1, 0),
            Err(Error::InvalidSpec(_))
        ));
        let s = CycleSpec::new(12, 5, 2).unwrap();
        assert_eq!(s.m(), 4);
        assert_eq!(s.m() * s.step(), s.n());
    }

    #[test]
    fn loose_identity_edges() {
        let s = CycleSpec::new(6, 3, 1).unwrap();
        assert_eq!(
            Hamperm::identity(s).edges(),
            vec![vec![1, 2, 3], vec![3, 4, 5], vec![1, 5, 6]]
        );
    }

    #[test]
    fn tight_four_vertex_edges() {
        let s = CycleSpec::new(4, 3, 2).unwrap();
        assert_eq!(
            edges_of_hamperm(&Hamperm::identity(s)),
            vec![vec![1, 2, 3], vec![2, 3, 4], vec![1, 3, 4], vec![1, 2, 4]]
        );
    }

    #[test]
    fn hamperm_rejects_non_permutations() {
        let s = CycleSpec::new(6, 3, 1).unwrap();
        assert!(Hamperm::new(vec![1, 2, 3, 4, 5, 5], s).is_err());
        assert!(Hamperm::new(vec![1, 2, 3, 4, 5], s).is_err());
        assert!(Hamperm::new(vec![0, 2, 3, 4, 5, 6], s).is_err());
    }

    #[test]
    fn hypergraph_insert_rules() {
        let mut h = ColoredHypergraph::new(5, 3, 4, false).unwrap();
        h.insert(&[3, 1, 2], 1).unwrap();
        assert!(h.contains(&[1, 2, 3]));
        assert!(h.insert(&[1, 2, 3], 2).is_err());
        assert!(h.insert(&[1, 2, 6], 2).is_err());
        assert!(h.insert(&[1, 2, 4], 5).is_err());
        assert!(h.insert(&[1, 1, 4], 1).is_err());
        let mut m = ColoredHypergraph::new(5, 3, 4, true).unwrap();
        m.insert(&[1, 2, 3], 1).unwrap();
        m.insert(&[1, 2, 3], 2).unwrap();
        assert!(m.insert(&[1, 2, 3], 2).is_err());
        assert_eq!(m.edge_count(), 1);
        assert_eq!(m.colored_edge_count(), 2);
    }

    #[test]
    fn complete_distinct_colors_is_certified() {
        let s = CycleSpec::new(6, 3, 1).unwrap();
        let h = complete(6, 3, 20);
        let cert = validate_cycle(&h, &Hamperm::identity(s)).unwrap().unwrap();
        assert!(verify_certificate(&h, &cert));
    }

    #[test]
    fn missing_second_edge() {
        let s = CycleSpec::new(6, 3, 1).unwrap();
        let mut h = complete(6, 3, 20);
        h.remove(&[3, 4, 5]);
        assert_eq!(
            validate_cycle(&h, &Hamperm::identity(s)).unwrap(),
            Err(CycleFailure::MissingEdge(2))
        );
    }

    #[test]
    fn repeated_color_is_not_rainbow() {
        let s = CycleSpec::new(4, 3, 2).unwrap();
        let mut h = ColoredHypergraph::new(4, 3, 3, false).unwrap();
        for (e, c) in [
            ([1, 2, 3], 1),
            ([1, 2, 4], 1),
            ([1, 3, 4], 2),
            ([2, 3, 4], 3),
        ] {
            h.insert(&e, c).unwrap();
        }
        assert_eq!(
            validate_cycle(&h, &Hamperm::identity(s)).unwrap(),
            Err(CycleFailure::NotRainbow)
        );
    }

    #[test]
    fn dimension_mismatch() {
        let s = CycleSpec::new(6, 3, 1).unwrap();
        let h = complete(7, 3, 40);
        assert!(matches!(
            validate_cycle(&h, &Hamperm::identity(s)),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn multi_color_needs_matching() {
        // edge 1 carries {1, 2}, edge 2 carries {1}, edge 3 carries {3}: greedy on edge 1 fails
        let s = CycleSpec::new(6, 3, 1).unwrap();
        let mut h = ColoredHypergraph::new(6, 3, 3, true).unwrap();
        h.insert(&[1, 2, 3], 1).unwrap();
        h.insert(&[1, 2, 3], 2).unwrap();
        h.insert(&[3, 4, 5], 1).unwrap();
        h.insert(&[1, 5, 6], 3).unwrap();
        let cert = validate_cycle(&h, &Hamperm::identity(s)).unwrap().unwrap();
        assert_eq!(cert.colors, vec![2, 1, 3]);
        assert!(verify_certificate(&h, &cert));
    }

    #[test]
    fn tampered_certificates_fail() {
        let s = CycleSpec::new(6, 3, 1).unwrap();
        let h = complete(6, 3, 20);
        let cert = validate_cycle(&h, &Hamperm::identity(s)).unwrap().unwrap();
        let mut same_colors = cert.clone();
        same_colors.colors[1] = same_colors.colors[0];
        assert!(!verify_certificate(&h, &same_colors));
        let mut wrong_edges = cert.clone();
        wrong_edges.edges.swap(0, 1);
        assert!(!verify_certificate(&h, &wrong_edges));
        let mut wrong_color = cert;
        wrong_color.colors[2] = 19;
        assert!(!verify_certificate(&h, &wrong_color));
    }

    fn spec_and_perm() -> impl Strategy<Value = (CycleSpec, Vec<u32>)> {
        (2u32..7)
            .prop_flat_map(|k| (Just(k), 1..k, 1u32..5))
            .prop_filter_map("spec", |(k, ell, mult)| {
                let step = k - ell;
                // consecutive edges meet in exactly ell vertices once n >= k + step
                let n = step * (k / step + 1 + mult);
                CycleSpec::new(n, k, ell).ok()
            })
            .prop_flat_map(|s| {
                (
                    Just(s),
                    Just((1..=s.n()).collect::<Vec<_>>()).prop_shuffle(),
                )
            })
    }

    proptest! {
        #[test]
        fn consecutive_edges_share_ell((spec, pi) in spec_and_perm()) {
            let hp = Hamperm::new(pi, spec).unwrap();
            let edges = hp.edges();
            prop_assert_eq!(edges.len() as u32, spec.m());
            let m = edges.len();
            for i in 0..m {
                let next = &edges[(i + 1) % m];
                let shared = edges[i].iter().filter(|v| next.contains(v)).count() as u32;
                prop_assert_eq!(shared, spec.ell());
            }
            let covered: BTreeSet<u32> = edges.iter().flatten().copied().collect();
            prop_assert_eq!(covered.len() as u32, spec.n());
        }

        #[test]
        fn rotation_by_block_preserves_edge_set((spec, pi) in spec_and_perm(), t in 0u32..8) {
            let shift = ((t * spec.step()) % spec.n()) as usize;
            let mut rotated = pi.clone();
            rotated.rotate_left(shift);
            let a: BTreeSet<Vec<u32>> = Hamperm::new(pi, spec).unwrap().edges().into_iter().collect();
            let b: BTreeSet<Vec<u32>> = Hamperm::new(rotated, spec).unwrap().edges().into_iter().collect();
            prop_assert_eq!(a, b);
        }
    }
}

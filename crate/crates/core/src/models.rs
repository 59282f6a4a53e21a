//! Random models: the colored binomial hypergraph, a monotone coupling of it
//! across edge probabilities, the directed colored model with orientations
//! dropped, and the reduction of a loose instance to a (k+1)-uniform
//! hypergraph whose extra vertex encodes the edge color.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, factorial, k_subsets};
use crate::cycle::{verify_certificate, ColoredHypergraph, CycleSpec, Hamperm, RainbowCertificate};
use crate::error::{invalid, Error, Result};

/// SplitMix64 finalizer. Full avalanche: every input bit flips each output
/// bit with probability about 1/2.
pub fn mix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Folds a sequence of words into one seed: `h = mix64(h ^ w)` starting from
/// `mix64(len)`. Used for (master, point, trial) and (seed, k-set) derivations.
pub fn derive_seed(words: &[u64]) -> u64 {
    words
        .iter()
        .fold(mix64(words.len() as u64), |h, &w| mix64(h ^ w))
}

/// Uniform in [0, 1) from the top 53 bits.
fn unit(h: u64) -> f64 {
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform in [1, r] by multiply-shift.
fn color_from(h: u64, r: u32) -> u32 {
    1 + ((h as u128 * r as u128) >> 64) as u32
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SampleMode {
    /// One Bernoulli draw per k-subset.
    Enumerate,
    /// Binomial edge count, then distinct k-sets by rejection.
    Binomial,
}

const MAX_RETRIES_PER_EDGE: u32 = 100;
/// Above this density binomial mode defers to enumeration.
const BINOMIAL_MAX_DENSITY: f64 = 0.5;

fn check_prob(p: f64, name: &str) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return invalid(format!("{name} = {p} outside [0, 1]"));
    }
    Ok(())
}

/// Samples H^(k)_{n,p,r}: each k-set present with probability `p`, colored
/// uniformly from `[r]`. Deterministic in `(seed, mode)`.
pub fn sample_colored(
    n: u32,
    k: u32,
    p: f64,
    r: u32,
    seed: u64,
    mode: SampleMode,
) -> Result<ColoredHypergraph> {
    check_prob(p, "p")?;
    let mut h = ColoredHypergraph::new(n, k, r, false)?;
    let mut rng = rng_from_seed(seed);
    match mode {
        SampleMode::Enumerate => fill_enumerate(&mut h, p, &mut rng)?,
        SampleMode::Binomial => {
            if p > BINOMIAL_MAX_DENSITY || !fill_binomial(&mut h, p, &mut rng)? {
                h = ColoredHypergraph::new(n, k, r, false)?;
                fill_enumerate(&mut h, p, &mut rng_from_seed(seed))?;
            }
        }
    }
    Ok(h)
}

fn fill_enumerate(h: &mut ColoredHypergraph, p: f64, rng: &mut impl Rng) -> Result<()> {
    let r = h.r();
    for e in k_subsets(h.n(), h.k()) {
        if rng.random::<f64>() < p {
            h.insert(&e, rng.random_range(1..=r))?;
        }
    }
    Ok(())
}

/// Returns false if the retry cap was hit.
fn fill_binomial(h: &mut ColoredHypergraph, p: f64, rng: &mut impl Rng) -> Result<bool> {
    let total = binomial(h.n() as u64, h.k() as u64);
    let count = Binomial::new(total, p)
        .map_err(|e| Error::InvalidInput(e.to_string()))?
        .sample(rng);
    let (n, k, r) = (h.n() as usize, h.k() as usize, h.r());
    for _ in 0..count {
        let mut placed = false;
        for _ in 0..MAX_RETRIES_PER_EDGE {
            let mut e: Vec<u32> = index::sample(rng, n, k)
                .into_iter()
                .map(|v| v as u32 + 1)
                .collect();
            e.sort_unstable();
            if !h.contains(&e) {
                h.insert(&e, rng.random_range(1..=r))?;
                placed = true;
                break;
            }
        }
        if !placed {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Per-edge uniforms and colors fixed by a master seed, so that realizations
/// at increasing `p` are nested with identical colors on shared edges.
///
/// For the canonical k-set `e = (v1 < ... < vk)`, `h = derive_seed([seed, v1, ..., vk])`,
/// `u_e` is the top 53 bits of `h` scaled to [0, 1) and the color is
/// `1 + floor(mix64(h ^ 0xC0105) * r / 2^64)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoupledInstance {
    pub n: u32,
    pub k: u32,
    pub r: u32,
    pub seed: u64,
}

impl CoupledInstance {
    pub fn new(n: u32, k: u32, r: u32, seed: u64) -> Result<Self> {
        ColoredHypergraph::new(n, k, r, false)?;
        Ok(Self { n, k, r, seed })
    }

    pub fn edge_draw(&self, e: &[u32]) -> (f64, u32) {
        let words: Vec<u64> = std::iter::once(self.seed)
            .chain(e.iter().map(|&v| v as u64))
            .collect();
        let h = derive_seed(&words);
        (unit(h), color_from(mix64(h ^ 0xC0105), self.r))
    }

    pub fn realize(&self, p: f64) -> ColoredHypergraph {
        let mut h =
            ColoredHypergraph::new(self.n, self.k, self.r, false).expect("validated in new");
        for e in k_subsets(self.n, self.k) {
            let (u, c) = self.edge_draw(&e);
            if u < p {
                h.insert(&e, c).expect("fresh k-set");
            }
        }
        h
    }
}

pub fn realize(ci: &CoupledInstance, p: f64) -> ColoredHypergraph {
    ci.realize(p)
}

/// The smaller root of `q - 2q^2 = p`, i.e. `(1 - sqrt(1 - 8p)) / 4`,
/// evaluated as `2p / (1 + sqrt(1 - 8p))` to avoid cancellation.
pub fn q_from_p(p: f64) -> Result<f64> {
    if p.is_nan() || p < 0.0 {
        return invalid(format!("p = {p} must be nonnegative"));
    }
    if p > 0.125 {
        return Err(Error::NoRealRoot(p));
    }
    Ok(2.0 * p / (1.0 + (1.0 - 8.0 * p).max(0.0).sqrt()))
}

/// Directed colored model with orientations dropped: each of the k!
/// orderings of every k-set appears with probability `q` and an independent
/// uniform color. The result records, per k-set, the set of colors received.
pub fn sample_directed(n: u32, k: u32, q: f64, r: u32, seed: u64) -> Result<ColoredHypergraph> {
    check_prob(q, "q")?;
    let mut h = ColoredHypergraph::new(n, k, r, true)?;
    let mut rng = rng_from_seed(seed);
    let orderings = factorial(k);
    for e in k_subsets(n, k) {
        for _ in 0..orderings {
            if rng.random::<f64>() < q {
                let c = rng.random_range(1..=r);
                if !h.colors_of(&e).is_some_and(|cs| cs.contains(&c)) {
                    h.insert(&e, c)?;
                }
            }
        }
    }
    Ok(h)
}

/// The (k+1)-uniform auxiliary hypergraph of a loose instance with `r = m`
/// colors. Vertex classes: `X = [1, m]`, `Y = [m+1, n]`, `Z = [n+1, n+m]`.
/// Each base edge with exactly two vertices in X becomes `e + {c(e) + n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaGraph {
    base: ColoredHypergraph,
    m: u32,
    edges: BTreeSet<Vec<u32>>,
}

impl GammaGraph {
    pub fn base(&self) -> &ColoredHypergraph {
        &self.base
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn edges(&self) -> &BTreeSet<Vec<u32>> {
        &self.edges
    }

    pub fn in_x(&self, v: u32) -> bool {
        (1..=self.m).contains(&v)
    }

    pub fn in_y(&self, v: u32) -> bool {
        v > self.m && v <= self.base.n()
    }

    pub fn in_z(&self, v: u32) -> bool {
        v > self.base.n() && v <= self.base.n() + self.m
    }

    /// The graph as a `(k+1)`-uniform colored hypergraph on `n + m` vertices
    /// with each edge keeping its base color (so color = z - n).
    pub fn to_hypergraph(&self) -> ColoredHypergraph {
        let n = self.base.n();
        let mut h = ColoredHypergraph::new(n + self.m, self.base.k() + 1, self.m, false)
            .expect("valid dimensions");
        for e in &self.edges {
            let z = *e.last().expect("nonempty edge");
            h.insert(e, z - n).expect("distinct gamma edges");
        }
        h
    }
}

pub fn build_gamma(h: &ColoredHypergraph) -> Result<GammaGraph> {
    let (n, k) = (h.n(), h.k());
    if k < 2 || n % (k - 1) != 0 {
        return invalid(format!("k - 1 must divide n (n = {n}, k = {k})"));
    }
    let m = n / (k - 1);
    if h.r() != m {
        return invalid(format!("expected r = n/(k-1) = {m} colors, got {}", h.r()));
    }
    if h.is_multi_color() {
        return invalid("reduction needs a single-color hypergraph");
    }
    let mut edges = BTreeSet::new();
    for (e, colors) in h.edges() {
        let in_x = e.iter().filter(|&&v| v <= m).count();
        if in_x == 2 {
            let c = *colors.first().expect("single color");
            let mut g = e.to_vec();
            g.push(c + n);
            edges.insert(g);
        }
    }
    Ok(GammaGraph {
        base: h.clone(),
        m,
        edges,
    })
}

fn invalid_cycle<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidCycle(msg.into()))
}

/// Reads a loose Hamilton cycle of the auxiliary graph back as a rainbow
/// loose Hamilton cycle of the base hypergraph, turning each edge's Z-vertex
/// `z` into the color `z - n`.
///
/// `cycle` lists the m edges in cyclic order; consecutive edges must meet in
/// exactly one vertex, which must lie in X.
pub fn gamma_cycle_to_rainbow(g: &GammaGraph, cycle: &[Vec<u32>]) -> Result<RainbowCertificate> {
    let n = g.base.n();
    let k = g.base.k();
    let m = g.m as usize;
    if m < 3 {
        return invalid_cycle(
            "loose cycles with fewer than 3 edges have no single-vertex intersections",
        );
    }
    if cycle.len() != m {
        return invalid_cycle(format!("expected {m} edges, got {}", cycle.len()));
    }
    let mut edges: Vec<Vec<u32>> = Vec::with_capacity(m);
    for e in cycle {
        let mut e = e.clone();
        e.sort_unstable();
        if !g.edges.contains(&e) {
            return invalid_cycle(format!("{e:?} is not an edge of the auxiliary graph"));
        }
        if e.iter().filter(|&&v| g.in_z(v)).count() != 1 {
            return invalid_cycle(format!("{e:?} must contain exactly one color vertex"));
        }
        edges.push(e);
    }
    let mut joints = Vec::with_capacity(m);
    for i in 0..m {
        let next = &edges[(i + 1) % m];
        let shared: Vec<u32> = edges[i]
            .iter()
            .copied()
            .filter(|v| next.contains(v))
            .collect();
        match shared.as_slice() {
            [v] if g.in_x(*v) => joints.push(*v),
            [v] => {
                return invalid_cycle(format!(
                    "edges {} and {} meet in {v}, outside X",
                    i + 1,
                    (i + 1) % m + 1
                ))
            }
            _ => {
                return invalid_cycle(format!(
                    "edges {} and {} share {} vertices",
                    i + 1,
                    (i + 1) % m + 1,
                    shared.len()
                ))
            }
        }
    }
    let covered: BTreeSet<u32> = edges.iter().flatten().copied().collect();
    if covered.len() as u32 != n + g.m {
        return invalid_cycle("edges do not cover every vertex");
    }
    // edge i runs from joints[i-1] through its Y-vertices to joints[i]
    let mut pi = Vec::with_capacity(n as usize);
    let mut colors = Vec::with_capacity(m);
    for i in 0..m {
        let enter = joints[(i + m - 1) % m];
        let leave = joints[i];
        pi.push(enter);
        pi.extend(
            edges[i]
                .iter()
                .copied()
                .filter(|&v| v != enter && v != leave && v <= n),
        );
        colors.push(edges[i].last().copied().expect("nonempty") - n);
    }
    let spec = CycleSpec::loose(n, k)?;
    let hamperm = Hamperm::new(pi, spec).or_else(|e| invalid_cycle(e.to_string()))?;
    let cert = RainbowCertificate {
        edges: hamperm.edges(),
        hamperm,
        colors,
    };
    if !verify_certificate(&g.base, &cert) {
        return invalid_cycle("mapped cycle is not a rainbow cycle of the base hypergraph");
    }
    Ok(cert)
}

/// The inverse direction: re-attaches color vertices to a rainbow loose
/// cycle whose consecutive edges meet in X.
pub fn rainbow_to_gamma_cycle(g: &GammaGraph, cert: &RainbowCertificate) -> Result<Vec<Vec<u32>>> {
    let spec = cert.hamperm.spec();
    if spec.ell() != 1 || spec.n() != g.base.n() || spec.k() != g.base.k() {
        return invalid_cycle("certificate is not a loose cycle of the base hypergraph");
    }
    let pi = cert.hamperm.as_slice();
    let step = spec.step() as usize;
    for i in 0..cert.edges.len() {
        let joint = pi[(i * step) % pi.len()];
        if !g.in_x(joint) {
            return invalid_cycle(format!("joint vertex {joint} lies outside X"));
        }
    }
    Ok(cert
        .edges
        .iter()
        .zip(&cert.colors)
        .map(|(e, &c)| {
            let mut out = e.clone();
            out.push(c + g.base.n());
            out
        })
        .collect())
}

/// All pairs of (k+1)-edges sharing k vertices, i.e. base k-sets that ended
/// up with two colors.
pub fn detect_color_collisions(edges: &[Vec<u32>]) -> Vec<(Vec<u32>, Vec<u32>)> {
    let mut by_face: BTreeMap<Vec<u32>, Vec<usize>> = BTreeMap::new();
    let mut sorted: Vec<Vec<u32>> = edges.iter().map(|e| crate::cycle::canonical(e)).collect();
    sorted.sort();
    sorted.dedup();
    for (idx, e) in sorted.iter().enumerate() {
        for drop in 0..e.len() {
            let face: Vec<u32> = e
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != drop)
                .map(|(_, &v)| v)
                .collect();
            by_face.entry(face).or_default().push(idx);
        }
    }
    let mut pairs = BTreeSet::new();
    for group in by_face.values() {
        for (a, &i) in group.iter().enumerate() {
            for &j in &group[a + 1..] {
                pairs.insert((i.min(j), i.max(j)));
            }
        }
    }
    pairs
        .into_iter()
        .map(|(i, j)| (sorted[i].clone(), sorted[j].clone()))
        .collect()
}

/// (k+1)-edges `e + {c + n}` for every (k-set, color) pair of a hypergraph.
/// On a multi-color hypergraph this exposes double colorings as collisions.
pub fn color_vertex_edges(h: &ColoredHypergraph) -> Vec<Vec<u32>> {
    h.colored_edges()
        .into_iter()
        .map(|ce| {
            let mut e = ce.vertices;
            e.push(ce.color + h.n());
            e
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycle::validate_cycle;

    #[test]
    fn extreme_probabilities() {
        for mode in [SampleMode::Enumerate, SampleMode::Binomial] {
            assert_eq!(
                sample_colored(7, 3, 0.0, 3, 1, mode).unwrap().edge_count(),
                0
            );
            assert_eq!(
                sample_colored(7, 3, 1.0, 3, 1, mode).unwrap().edge_count(),
                35
            );
        }
        assert!(sample_colored(7, 3, 1.5, 3, 1, SampleMode::Enumerate).is_err());
        assert!(sample_colored(7, 3, -0.1, 3, 1, SampleMode::Binomial).is_err());
    }

    #[test]
    fn sampling_is_deterministic() {
        for mode in [SampleMode::Enumerate, SampleMode::Binomial] {
            let a = sample_colored(9, 3, 0.3, 4, 42, mode).unwrap();
            let b = sample_colored(9, 3, 0.3, 4, 42, mode).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn colors_within_range() {
        let h = sample_colored(9, 3, 0.5, 4, 3, SampleMode::Enumerate).unwrap();
        assert!(h
            .edges()
            .all(|(_, cs)| cs.len() == 1 && cs.iter().all(|&c| (1..=4).contains(&c))));
    }

    #[test]
    fn mean_edge_count_matches_binomial() {
        // C(10,3) = 120 k-sets at p = 0.2: mean 24, sd sqrt(19.2)
        let trials = 10_000;
        for mode in [SampleMode::Enumerate, SampleMode::Binomial] {
            let total: usize = (0..trials)
                .map(|s| sample_colored(10, 3, 0.2, 5, s, mode).unwrap().edge_count())
                .sum();
            let mean = total as f64 / trials as f64;
            let se = (120.0f64 * 0.2 * 0.8).sqrt() / (trials as f64).sqrt();
            assert!((mean - 24.0).abs() < 3.0 * se, "{mode:?}: mean {mean}");
        }
    }

    #[test]
    fn coupled_realizations_nest() {
        let ci = CoupledInstance::new(8, 3, 4, 99).unwrap();
        let a = ci.realize(0.0);
        let b = ci.realize(0.5);
        let c = ci.realize(1.0);
        assert_eq!(a.edge_count(), 0);
        assert_eq!(c.edge_count(), 56);
        for (e, cs) in b.edges() {
            assert_eq!(c.colors_of(e), Some(cs));
        }
    }

    #[test]
    fn q_from_p_roots() {
        assert_eq!(q_from_p(0.0).unwrap(), 0.0);
        assert_eq!(q_from_p(0.125).unwrap(), 0.25);
        let q = q_from_p(0.1).unwrap();
        assert!((q - 0.138_196_601_125_010_5).abs() < 1e-15);
        assert!(((q - 2.0 * q * q) - 0.1).abs() / 0.1 < 1e-12);
        assert_eq!(q_from_p(0.2), Err(Error::NoRealRoot(0.2)));
    }

    #[test]
    fn directed_extremes() {
        assert_eq!(sample_directed(6, 3, 0.0, 3, 5).unwrap().edge_count(), 0);
        let full = sample_directed(6, 3, 1.0, 1, 5).unwrap();
        assert_eq!(full.edge_count(), 20);
        assert!(full.is_multi_color());
        assert!(full.edges().all(|(_, cs)| cs.len() == 1 && cs.contains(&1)));
    }

    #[test]
    fn directed_presence_frequency() {
        // P(fixed 3-set gets at least one color) = 1 - (1-q)^6
        let (q, trials) = (0.05, 10_000u64);
        let target = 1.0 - (1.0f64 - q).powi(6);
        let hits = (0..trials)
            .filter(|&s| sample_directed(5, 3, q, 2, s).unwrap().contains(&[1, 2, 3]))
            .count();
        let freq = hits as f64 / trials as f64;
        let se = (target * (1.0 - target) / trials as f64).sqrt();
        assert!(
            (freq - target).abs() < 3.0 * se,
            "freq {freq} target {target}"
        );
    }

    fn base_6_3() -> ColoredHypergraph {
        let mut h = ColoredHypergraph::new(6, 3, 3, false).unwrap();
        h.insert(&[1, 2, 4], 2).unwrap();
        h.insert(&[2, 3, 5], 1).unwrap();
        h.insert(&[1, 3, 6], 3).unwrap();
        h.insert(&[1, 2, 3], 1).unwrap();
        h.insert(&[1, 4, 5], 2).unwrap();
        h
    }

    #[test]
    fn gamma_edges_follow_filter() {
        let g = build_gamma(&base_6_3()).unwrap();
        assert_eq!(g.m(), 3);
        assert!(g.edges().contains(&vec![1, 2, 4, 8]));
        assert!(!g
            .edges()
            .iter()
            .any(|e| e[..3] == [1, 2, 3] || e[..3] == [1, 4, 5]));
        assert_eq!(g.edges().len(), 3);
        for e in g.edges() {
            assert_eq!(e.iter().filter(|&&v| g.in_x(v)).count(), 2);
            assert_eq!(e.iter().filter(|&&v| g.in_y(v)).count(), 1);
            assert_eq!(e.iter().filter(|&&v| g.in_z(v)).count(), 1);
        }
    }

    #[test]
    fn gamma_rejects_bad_inputs() {
        let h = ColoredHypergraph::new(7, 3, 3, false).unwrap();
        assert!(build_gamma(&h).is_err());
        let h = ColoredHypergraph::new(6, 3, 4, false).unwrap();
        assert!(build_gamma(&h).is_err());
        let h = ColoredHypergraph::new(6, 3, 3, true).unwrap();
        assert!(build_gamma(&h).is_err());
    }

    #[test]
    fn gamma_cycle_maps_back() {
        let h = base_6_3();
        let g = build_gamma(&h).unwrap();
        let cycle = vec![vec![1, 2, 4, 8], vec![2, 3, 5, 7], vec![3, 1, 6, 9]];
        let cert = gamma_cycle_to_rainbow(&g, &cycle).unwrap();
        assert_eq!(
            cert.edges,
            vec![vec![1, 2, 4], vec![2, 3, 5], vec![1, 3, 6]]
        );
        assert_eq!(cert.colors, vec![2, 1, 3]);
        assert!(verify_certificate(&h, &cert));
        let again = validate_cycle(&h, &cert.hamperm).unwrap().unwrap();
        assert_eq!(again, cert);
        let back = rainbow_to_gamma_cycle(&g, &cert).unwrap();
        assert_eq!(gamma_cycle_to_rainbow(&g, &back).unwrap(), cert);
    }

    #[test]
    fn gamma_cycle_with_y_joint_is_rejected() {
        // n = 8, k = 3: m = 4, X = {1..4}, Y = {5..8}, Z = {9..12}
        let mut h = ColoredHypergraph::new(8, 3, 4, false).unwrap();
        for (e, c) in [
            ([1, 2, 5], 1),
            ([3, 4, 5], 2),
            ([2, 3, 6], 3),
            ([1, 4, 7], 4),
            ([2, 3, 5], 2),
        ] {
            h.insert(&e, c).unwrap();
        }
        let g = build_gamma(&h).unwrap();
        // first two edges meet only in the Y-vertex 5
        let y_joint = vec![
            vec![1, 2, 5, 9],
            vec![3, 4, 5, 10],
            vec![2, 3, 6, 11],
            vec![1, 4, 7, 12],
        ];
        let err = gamma_cycle_to_rainbow(&g, &y_joint).unwrap_err();
        assert!(
            matches!(&err, Error::InvalidCycle(msg) if msg.contains("outside X")),
            "{err}"
        );
        // [1,2,5] and [2,3,5] share two vertices
        let double = vec![
            vec![1, 2, 5, 9],
            vec![2, 3, 5, 10],
            vec![3, 4, 5, 10],
            vec![1, 4, 7, 12],
        ];
        assert!(matches!(
            gamma_cycle_to_rainbow(&g, &double),
            Err(Error::InvalidCycle(_))
        ));
        assert!(matches!(
            gamma_cycle_to_rainbow(&g, &y_joint[..3]),
            Err(Error::InvalidCycle(_))
        ));
    }

    #[test]
    fn collisions_detected() {
        let pairs = detect_color_collisions(&[vec![1, 2, 4, 8], vec![1, 2, 4, 9]]);
        assert_eq!(pairs, vec![(vec![1, 2, 4, 8], vec![1, 2, 4, 9])]);
        assert!(detect_color_collisions(&[vec![1, 2, 3, 4], vec![5, 6, 7, 8]]).is_empty());
        assert!(detect_color_collisions(&[vec![1, 2, 3, 4], vec![1, 2, 5, 6]]).is_empty());
    }

    #[test]
    fn collisions_in_directed_samples_match_double_colorings() {
        for seed in 0..50 {
            let h = sample_directed(7, 3, 0.15, 3, seed).unwrap();
            let doubles: usize = h.edges().map(|(_, cs)| cs.len() * (cs.len() - 1) / 2).sum();
            let pairs = detect_color_collisions(&color_vertex_edges(&h));
            let same_base = pairs.iter().filter(|(a, b)| a[..3] == b[..3]).count();
            assert_eq!(same_base, doubles);
        }
    }

    #[test]
    fn collision_frequency_is_small_for_sparse_samples() {
        // M' = 4 random 4-sets on 30 vertices; a pair shares 3 vertices with
        // probability 4 * 26 / (C(30,4) - 1), union bound 6 * that = 0.0228
        let mut rng = rng_from_seed(7);
        let samples = 1000;
        let mut hits = 0;
        for _ in 0..samples {
            let mut edges: BTreeSet<Vec<u32>> = BTreeSet::new();
            while edges.len() < 4 {
                let mut e: Vec<u32> = index::sample(&mut rng, 30, 4)
                    .into_iter()
                    .map(|v| v as u32 + 1)
                    .collect();
                e.sort_unstable();
                edges.insert(e);
            }
            let list: Vec<Vec<u32>> = edges.into_iter().collect();
            if !detect_color_collisions(&list).is_empty() {
                hits += 1;
            }
        }
        let freq = hits as f64 / samples as f64;
        assert!(freq < 0.05, "collision frequency {freq}");
    }
}

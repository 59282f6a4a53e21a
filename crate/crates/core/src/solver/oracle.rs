//! Permutation-enumeration oracles: hamperm counts, E(Y) and E(Y^2).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::combinatorics::{for_each_permutation, vertex_mask};
use crate::cycle::{ColoredHypergraph, CycleSpec};
use crate::error::{invalid, Error, Result};
use crate::sdr::distinct_representatives;

pub const DEFAULT_ENUMERATION_LIMIT: u32 = 9;
pub const DEFAULT_PAIRWISE_LIMIT: u32 = 7;

fn check_limit(n: u32, limit: u32) -> Result<()> {
    if n > limit {
        return Err(Error::TooLarge { n, limit });
    }
    Ok(())
}

/// Induced edge masks of every permutation of `[n]`, `m` per permutation,
/// in lexicographic permutation order.
#[derive(Debug, Clone)]
pub struct HampermTable {
    spec: CycleSpec,
    masks: Vec<u64>,
}

impl HampermTable {
    pub fn new(spec: CycleSpec) -> Result<Self> {
        Self::with_limit(spec, DEFAULT_ENUMERATION_LIMIT)
    }

    pub fn with_limit(spec: CycleSpec, limit: u32) -> Result<Self> {
        check_limit(spec.n(), limit.min(20))?;
        let m = spec.m() as usize;
        let windows: Vec<Vec<usize>> = (0..spec.m())
            .map(|i| spec.window(i).map(|p| p as usize).collect())
            .collect();
        let mut masks = Vec::new();
        for_each_permutation(spec.n(), |pi| {
            for w in &windows {
                masks.push(w.iter().fold(0u64, |acc, &p| acc | 1u64 << (pi[p] - 1)));
            }
        });
        debug_assert_eq!(masks.len() % m, 0);
        Ok(Self { spec, masks })
    }

    pub fn spec(&self) -> CycleSpec {
        self.spec
    }

    pub fn len(&self) -> usize {
        self.masks.len() / self.spec.m() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    /// Edge masks of each permutation.
    pub fn iter(&self) -> impl Iterator<Item = &[u64]> {
        self.masks.chunks_exact(self.spec.m() as usize)
    }

    /// `(X, Y)`: hamperms whose edges all exist, and those that are also
    /// rainbow (admit pairwise-distinct colors).
    pub fn count(&self, h: &ColoredHypergraph) -> Result<(u64, u64)> {
        if h.n() != self.spec.n() || h.k() != self.spec.k() {
            return invalid("hypergraph does not match the table's spec");
        }
        let n = self.spec.n();
        let mut lookup: Vec<Option<Vec<u32>>> = vec![None; 1usize << n];
        for (e, cs) in h.edges() {
            lookup[vertex_mask(e) as usize] = Some(cs.iter().copied().collect());
        }
        let multi = h.is_multi_color();
        let (mut x, mut y) = (0u64, 0u64);
        let mut sets: Vec<&[u32]> = Vec::with_capacity(self.spec.m() as usize);
        'perm: for edges in self.iter() {
            sets.clear();
            for &mask in edges {
                match &lookup[mask as usize] {
                    Some(cs) => sets.push(cs),
                    None => continue 'perm,
                }
            }
            x += 1;
            let rainbow = if multi {
                distinct_representatives(&sets).is_some()
            } else {
                sets.iter()
                    .enumerate()
                    .all(|(i, a)| sets[..i].iter().all(|b| a[0] != b[0]))
            };
            if rainbow {
                y += 1;
            }
        }
        Ok((x, y))
    }
}

/// Brute-force `(X, Y)` over all n! permutations (n up to the default limit).
pub fn count_hamperms(h: &ColoredHypergraph, spec: CycleSpec) -> Result<(u64, u64)> {
    HampermTable::new(spec)?.count(h)
}

/// Number of color tuples in `[r]^t` with pairwise-distinct entries, by
/// walking all `r^t` tuples.
fn injective_colorings_enumerated(t: u32, r: u32) -> u64 {
    if r == 0 {
        return u64::from(t == 0);
    }
    let mut tuple = vec![0u32; t as usize];
    let mut count = 0;
    loop {
        if tuple
            .iter()
            .enumerate()
            .all(|(i, c)| !tuple[..i].contains(c))
        {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == tuple.len() {
                return count;
            }
            tuple[i] += 1;
            if tuple[i] < r {
                break;
            }
            tuple[i] = 0;
            i += 1;
        }
    }
}

fn pow(base: &BigRational, e: u32) -> BigRational {
    num_traits::pow(base.clone(), e as usize)
}

/// E(Y) as the sum over all permutations of `p^t * Pr(t edges rainbow)`,
/// `t` the number of distinct induced edges, with the rainbow probability
/// taken as the number of injective colorings (counted by enumeration)
/// over `r^t`.
pub fn expected_y_bruteforce(spec: CycleSpec, p: &BigRational, r: u32) -> Result<BigRational> {
    let table = HampermTable::with_limit(spec, DEFAULT_PAIRWISE_LIMIT)?;
    let mut per_count: BTreeMap<u32, BigRational> = BTreeMap::new();
    let mut total = BigRational::zero();
    for edges in table.iter() {
        let mut distinct = edges.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        let t = distinct.len() as u32;
        let term = per_count.entry(t).or_insert_with(|| {
            let injective = BigInt::from(injective_colorings_enumerated(t, r));
            pow(p, t) * BigRational::new(injective, BigInt::from(r).pow(t))
        });
        total += &*term;
    }
    Ok(total)
}

/// Number of ordered permutation pairs `(pi, pi')` sharing exactly `b`
/// induced edges, for each `b`.
pub fn pair_overlap_histogram(spec: CycleSpec) -> Result<BTreeMap<u32, u64>> {
    let table = HampermTable::with_limit(spec, DEFAULT_PAIRWISE_LIMIT)?;
    let sorted: Vec<Vec<u64>> = table
        .iter()
        .map(|e| {
            let mut s = e.to_vec();
            s.sort_unstable();
            s
        })
        .collect();
    let mut hist = BTreeMap::new();
    for a in &sorted {
        let mut local = vec![0u64; spec.m() as usize + 1];
        for b in &sorted {
            let (mut i, mut j, mut shared) = (0, 0, 0usize);
            while i < a.len() && j < b.len() {
                match a[i].cmp(&b[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        shared += 1;
                        i += 1;
                        j += 1;
                    }
                }
            }
            local[shared] += 1;
        }
        for (b, c) in local.into_iter().enumerate() {
            if c > 0 {
                *hist.entry(b as u32).or_insert(0) += c;
            }
        }
    }
    Ok(hist)
}

/// E(Y^2) as a sum over ordered permutation pairs of
/// `p^{|E(pi) ∪ E(pi')|} * Pr(both rainbow)`, computed from the pair
/// histogram without the N(b, a) table.
///
/// With `b` shared edges the colorings making both cycles rainbow are
/// counted directly: the shared edges take distinct colors in `(r)_b` ways
/// and each cycle's `m - b` private edges avoid those and each other in
/// `(r - b)_{m-b}` ways, independently for the two cycles.
pub fn second_moment_bruteforce(spec: CycleSpec, p: &BigRational, r: u32) -> Result<BigRational> {
    let m = spec.m();
    let hist = pair_overlap_histogram(spec)?;
    let falling = |x: i64, t: u32| -> BigInt {
        (0..t as i64)
            .map(|i| BigInt::from((x - i).max(0)))
            .product()
    };
    let mut total = BigRational::zero();
    for (&b, &pairs) in &hist {
        let union = 2 * m - b;
        let private = falling(r as i64 - b as i64, m - b);
        let good = falling(r as i64, b) * &private * &private;
        let both = BigRational::new(good, BigInt::from(r).pow(union));
        total += BigRational::from_integer(BigInt::from(pairs)) * pow(p, union) * both;
    }
    Ok(total)
}

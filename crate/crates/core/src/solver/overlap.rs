//! The overlap table N(b, a) and the second moment it determines.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::cycle::CycleSpec;
use crate::error::{invalid, Result};
use crate::exact::{distinct_draws, factorial, falling, integer, pow, Rational};
use crate::solver::oracle::{HampermTable, DEFAULT_ENUMERATION_LIMIT};

/// `N(b, a)`: permutations whose induced cycle shares `b` edges with the
/// identity's cycle, the shared edges forming `a` paths.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverlapProfile {
    pub spec: CycleSpec,
    pub table: BTreeMap<(u32, u32), u64>,
}

impl OverlapProfile {
    pub fn total(&self) -> u64 {
        self.table.values().sum()
    }

    /// `N(b) = sum_a N(b, a)`.
    pub fn by_shared(&self) -> BTreeMap<u32, u64> {
        let mut out = BTreeMap::new();
        for (&(b, _), &count) in &self.table {
            *out.entry(b).or_insert(0) += count;
        }
        out
    }

    pub fn get(&self, b: u32, a: u32) -> u64 {
        self.table.get(&(b, a)).copied().unwrap_or(0)
    }
}

/// Number of paths formed by the shared edges of the reference cycle.
///
/// Shared edges are read in the reference cycle's order; a new path starts
/// after each consecutive pair (wrapping from the last shared edge back to
/// the first) that is vertex-disjoint. Chains meeting across the seam are
/// therefore one path, and a full overlap is a single path.
pub fn count_paths(reference: &[u64], shared: &[bool]) -> u32 {
    let idx: Vec<usize> = shared
        .iter()
        .enumerate()
        .filter(|(_, &s)| s)
        .map(|(i, _)| i)
        .collect();
    if idx.is_empty() {
        return 0;
    }
    let breaks = (0..idx.len())
        .filter(|&j| reference[idx[j]] & reference[idx[(j + 1) % idx.len()]] == 0)
        .count() as u32;
    breaks.max(1)
}

pub fn overlap_profile(spec: CycleSpec) -> Result<OverlapProfile> {
    overlap_profile_with_limit(spec, DEFAULT_ENUMERATION_LIMIT)
}

pub fn overlap_profile_with_limit(spec: CycleSpec, limit: u32) -> Result<OverlapProfile> {
    let table_of_perms = HampermTable::with_limit(spec, limit)?;
    // the first permutation in lexicographic order is the identity
    let reference: Vec<u64> = table_of_perms.iter().next().expect("n >= 1").to_vec();
    let mut table = BTreeMap::new();
    let mut shared = vec![false; reference.len()];
    for edges in table_of_perms.iter() {
        for (i, e) in reference.iter().enumerate() {
            shared[i] = edges.contains(e);
        }
        let b = shared.iter().filter(|&&s| s).count() as u32;
        let a = count_paths(&reference, &shared);
        *table.entry((b, a)).or_insert(0) += 1;
    }
    Ok(OverlapProfile { spec, table })
}

/// Exact `E(Y^2) = n! * sum_b N(b) p^{2m-b} * (r)_m/r^m * (r-b)_{m-b}/r^{m-b}`.
pub fn second_moment_from_profile(
    profile: &OverlapProfile,
    p: &Rational,
    r: u32,
) -> Result<Rational> {
    let spec = profile.spec;
    let m = spec.m() as u64;
    if (r as u64) < m {
        return invalid(format!("r = {r} < m = {m}: no rainbow cycle can exist"));
    }
    if p < &Rational::zero() || p > &integer(1) {
        return invalid("p outside [0, 1]");
    }
    let r = r as u64;
    let first = distinct_draws(r, m);
    let mut sum = Rational::zero();
    for (b, count) in profile.by_shared() {
        let b = b as u64;
        let private = Rational::new(
            falling(r - b, m - b),
            num_bigint::BigInt::from(r).pow((m - b) as u32),
        );
        sum += integer(count) * pow(p, 2 * m - b) * &first * private;
    }
    Ok(integer(factorial(spec.n() as u64)) * sum)
}

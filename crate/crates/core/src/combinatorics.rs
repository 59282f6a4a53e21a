//! Small enumeration helpers shared by samplers and oracles.

/// All k-subsets of `[n]` in lexicographic order, 1-based.
pub fn k_subsets(n: u32, k: u32) -> KSubsets {
    KSubsets {
        n,
        current: if k <= n {
            Some((1..=k).collect())
        } else {
            None
        },
    }
}

pub struct KSubsets {
    n: u32,
    current: Option<Vec<u32>>,
}

impl Iterator for KSubsets {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let out = self.current.take()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        while i > 0 {
            i -= 1;
            if next[i] < self.n - (k - 1 - i) as u32 {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                return Some(out);
            }
        }
        Some(out)
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k) as u128;
    let n = n as u128;
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1)) as u64
}

/// Advances `a` to the next permutation in lexicographic order.
/// Returns false (and leaves `a` sorted ascending) after the last one.
pub fn next_permutation<T: Ord>(a: &mut [T]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        a.reverse();
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// Calls `f` on every permutation of `[1, n]`.
pub fn for_each_permutation(n: u32, mut f: impl FnMut(&[u32])) {
    let mut pi: Vec<u32> = (1..=n).collect();
    loop {
        f(&pi);
        if !next_permutation(&mut pi) {
            break;
        }
    }
}

pub fn factorial(n: u32) -> u64 {
    (1..=n as u64).product()
}

/// Bitmask of a vertex set (1-based vertices, n <= 64).
pub fn vertex_mask(vertices: &[u32]) -> u64 {
    vertices.iter().fold(0u64, |m, &v| m | 1u64 << (v - 1))
}

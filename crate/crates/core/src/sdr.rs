//! Systems of distinct representatives for small edge/color instances.
//!
//! Every cycle edge must be assigned one of the colors it carries, with no
//! color used twice. Greedy assignment is incomplete, so this is bipartite
//! matching by augmenting paths. [`IncrementalMatcher`] supports the
//! push/pop discipline of a backtracking search.

/// Bipartite matcher between a stack of edges and colors `1..=r`.
///
/// Invariant: every pushed edge is matched. `push` fails (leaving the state
/// unchanged) when the new edge cannot be matched, which by Hall's theorem
/// means no superset of the current edge stack has a distinct-color system.
#[derive(Debug, Clone)]
pub struct IncrementalMatcher {
    options: Vec<Vec<u32>>,
    assigned: Vec<u32>,
    owner: Vec<Option<usize>>,
    seen: Vec<u32>,
    stamp: u32,
}

impl IncrementalMatcher {
    pub fn new(r: u32) -> Self {
        Self {
            options: Vec::new(),
            assigned: Vec::new(),
            owner: vec![None; r as usize + 1],
            seen: vec![0; r as usize + 1],
            stamp: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.options.len()
    }

    pub fn is_empty(&self) -> bool {
        self.options.is_empty()
    }

    /// Colors currently chosen for the pushed edges, in push order.
    pub fn assignment(&self) -> &[u32] {
        &self.assigned
    }

    pub fn push(&mut self, colors: &[u32]) -> bool {
        let idx = self.options.len();
        self.options.push(colors.to_vec());
        self.assigned.push(0);
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.seen.iter_mut().for_each(|s| *s = 0);
            self.stamp = 1;
        }
        if self.augment(idx) {
            true
        } else {
            self.options.pop();
            self.assigned.pop();
            false
        }
    }

    pub fn pop(&mut self) {
        if let Some(color) = self.assigned.pop() {
            self.owner[color as usize] = None;
            self.options.pop();
        }
    }

    fn augment(&mut self, edge: usize) -> bool {
        for i in 0..self.options[edge].len() {
            let c = self.options[edge][i] as usize;
            if c >= self.owner.len() || self.seen[c] == self.stamp {
                continue;
            }
            self.seen[c] = self.stamp;
            let free = match self.owner[c] {
                None => true,
                Some(other) => self.augment(other),
            };
            if free {
                self.owner[c] = Some(edge);
                self.assigned[edge] = c as u32;
                return true;
            }
        }
        false
    }
}

/// One color per set, all distinct, or `None` if no such choice exists.
pub fn distinct_representatives(sets: &[&[u32]]) -> Option<Vec<u32>> {
    let r = sets
        .iter()
        .flat_map(|s| s.iter())
        .copied()
        .max()
        .unwrap_or(0);
    let mut matcher = IncrementalMatcher::new(r);
    for s in sets {
        if !matcher.push(s) {
            return None;
        }
    }
    Some(matcher.assignment().to_vec())
}

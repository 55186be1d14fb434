//! Exhaustive enumeration of small graphs up to isomorphism, used by the
//! property suites that sweep every graph on at most 7 or 8 vertices.
//!
//! Graphs on n <= 8 vertices are packed into a `u32` edge bitmask; the
//! canonical form is the minimum bitmask over all vertex relabelings, found
//! by a pruned depth-first search over permutations.

use std::collections::HashSet;

use crate::graph::Graph;

pub const MAX_ENUM_VERTICES: usize = 8;

/// Pair (i, j), i < j, packed in the scan order (0,1),(0,2),(1,2),(0,3),...
/// so that all pairs within {0..k} precede any pair touching k+1.
fn pair_bit(i: usize, j: usize) -> u32 {
    debug_assert!(i < j);
    1 << (j * (j - 1) / 2 + i)
}

#[cfg(test)]
fn mask_of(g: &Graph) -> u32 {
    g.edges()
        .iter()
        .fold(0, |m, &(u, v)| m | pair_bit(u, v))
}

fn graph_of(n: usize, mask: u32) -> Graph {
    let mut edges = Vec::new();
    for j in 0..n {
        for i in 0..j {
            if mask & pair_bit(i, j) != 0 {
                edges.push((i, j));
            }
        }
    }
    Graph::new(n, edges).expect("mask describes a valid graph")
}

/// Minimum edge bitmask over all permutations. The DFS assigns, role by
/// role, which original vertex plays position k. For the prefix pruning to
/// be sound, pairs decided earlier must be more significant, so the search
/// works in a reversed "high" packing and converts back at the end.
fn canonical_mask(n: usize, low_mask: u32) -> u32 {
    if n < 2 {
        return 0;
    }
    let t = n * (n - 1) / 2;
    let hi_bit = |i: usize, j: usize| -> u32 { 1 << (t - 1 - (j * (j - 1) / 2 + i)) };
    let adj: Vec<u32> = (0..n)
        .map(|v| {
            let mut row = 0u32;
            for u in 0..n {
                if u != v {
                    let (i, j) = (u.min(v), u.max(v));
                    if low_mask & pair_bit(i, j) != 0 {
                        row |= 1 << u;
                    }
                }
            }
            row
        })
        .collect();

    struct Dfs<'a> {
        n: usize,
        t: usize,
        adj: &'a [u32],
        perm: Vec<usize>,
        used: u32,
        best: u32,
    }
    impl Dfs<'_> {
        fn hi(&self, i: usize, j: usize) -> u32 {
            1 << (self.t - 1 - (j * (j - 1) / 2 + i))
        }
        /// Bits decided once roles 0..=k are assigned: the top k(k+1)/2.
        fn decided(&self, k: usize) -> u32 {
            let s = (k * (k + 1)) / 2;
            let full = ((1u64 << self.t) - 1) as u32;
            full & !(((1u64 << (self.t - s)) - 1) as u32)
        }
        fn run(&mut self, k: usize, prefix: u32) {
            if k == self.n {
                self.best = self.best.min(prefix);
                return;
            }
            for v in 0..self.n {
                if self.used & (1 << v) != 0 {
                    continue;
                }
                let mut add = 0u32;
                for i in 0..k {
                    if self.adj[v] & (1 << self.perm[i]) != 0 {
                        add |= self.hi(i, k);
                    }
                }
                let new_prefix = prefix | add;
                let decided = self.decided(k);
                if self.best != u32::MAX && (new_prefix & decided) > (self.best & decided) {
                    continue;
                }
                self.perm[k] = v;
                self.used |= 1 << v;
                self.run(k + 1, new_prefix);
                self.used &= !(1 << v);
            }
        }
    }

    let mut dfs = Dfs {
        n,
        t,
        adj: &adj,
        perm: vec![usize::MAX; n],
        used: 0,
        best: u32::MAX,
    };
    dfs.run(0, 0);

    let mut low = 0u32;
    for j in 0..n {
        for i in 0..j {
            if dfs.best & hi_bit(i, j) != 0 {
                low |= pair_bit(i, j);
            }
        }
    }
    low
}

/// All graphs on exactly `n` vertices, one canonical representative per
/// isomorphism class, built by extending the canonical graphs on n-1
/// vertices with every neighbourhood of a new vertex.
pub fn canonical_graphs(n: usize) -> Vec<Graph> {
    assert!(
        n <= MAX_ENUM_VERTICES,
        "canonical enumeration supports n <= {MAX_ENUM_VERTICES}"
    );
    if n == 0 {
        return vec![Graph::new(0, []).expect("empty graph")];
    }
    let mut masks: Vec<u32> = vec![0]; // the 1-vertex graph
    for k in 2..=n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for &parent in &masks {
            for nb in 0u32..(1 << (k - 1)) {
                let mut mask = parent;
                for i in 0..k - 1 {
                    if nb & (1 << i) != 0 {
                        mask |= pair_bit(i, k - 1);
                    }
                }
                let canon = canonical_mask(k, mask);
                if seen.insert(canon) {
                    next.push(canon);
                }
            }
        }
        next.sort_unstable();
        masks = next;
    }
    masks.into_iter().map(|m| graph_of(n, m)).collect()
}

/// Connected canonical graphs on exactly `n` vertices.
pub fn connected_canonical_graphs(n: usize) -> Vec<Graph> {
    canonical_graphs(n)
        .into_iter()
        .filter(|g| g.is_connected())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_oeis() {
        // A000088: graphs on n nodes
        let all = [1usize, 1, 2, 4, 11, 34, 156, 1044];
        for (n, &want) in all.iter().enumerate() {
            assert_eq!(canonical_graphs(n).len(), want, "n={n}");
        }
        // A001349: connected graphs on n nodes
        let conn = [1usize, 1, 1, 2, 6, 21, 112, 853];
        for (n, &want) in conn.iter().enumerate() {
            assert_eq!(connected_canonical_graphs(n).len(), want, "n={n}");
        }
    }

    #[test]
    fn canonical_is_permutation_invariant() {
        // relabeling C5 arbitrarily lands on the same canonical mask
        let c5 = Graph::cycle(5).unwrap();
        let base = canonical_mask(5, mask_of(&c5));
        let relabeled = Graph::new(5, [(2, 4), (4, 1), (1, 3), (3, 0), (0, 2)]).unwrap();
        assert_eq!(canonical_mask(5, mask_of(&relabeled)), base);
    }
}

//! Union-find over `0..n` and conversions between partition encodings.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Disjoint-set forest whose roots are always the least element of their set.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    /// Starts from an existing least-representative array.
    pub fn from_reps(rep: &[usize]) -> UnionFind {
        UnionFind {
            parent: rep.to_vec(),
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            let up = self.parent[self.parent[x]];
            self.parent[x] = up;
            x = up;
        }
        x
    }

    /// Merges the sets of `a` and `b`; returns `false` if already merged.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    /// Least-representative array of the current partition.
    pub fn reps(&mut self) -> Vec<usize> {
        (0..self.parent.len()).map(|x| self.find(x)).collect()
    }
}

/// Canonical least-representative array of the partition given by `labels`.
pub fn reps_from_labels<L: std::hash::Hash + Eq>(labels: impl IntoIterator<Item = L>) -> Vec<usize> {
    let mut first: HashMap<L, usize> = HashMap::new();
    labels
        .into_iter()
        .enumerate()
        .map(|(i, l)| *first.entry(l).or_insert(i))
        .collect()
}

/// Validates a block list as a partition of `0..n` and returns its
/// least-representative array.
pub fn reps_from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Vec<usize>> {
    let mut rep = vec![usize::MAX; n];
    for block in blocks {
        let Some(&min) = block.iter().min() else {
            return Err(Error::NotAPartition {
                size: n,
                reason: "empty block".into(),
            });
        };
        for &x in block {
            if x >= n {
                return Err(Error::NotAPartition {
                    size: n,
                    reason: format!("element {x} out of range"),
                });
            }
            if rep[x] != usize::MAX {
                return Err(Error::NotAPartition {
                    size: n,
                    reason: format!("element {x} occurs twice"),
                });
            }
            rep[x] = min;
        }
    }
    if let Some(x) = rep.iter().position(|&r| r == usize::MAX) {
        return Err(Error::NotAPartition {
            size: n,
            reason: format!("element {x} missing"),
        });
    }
    Ok(rep)
}

/// Blocks sorted by least element, ascending within blocks.
pub fn blocks_from_reps(rep: &[usize]) -> Vec<Vec<usize>> {
    let mut index = vec![usize::MAX; rep.len()];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for (x, &r) in rep.iter().enumerate() {
        if r == x {
            index[x] = blocks.len();
            blocks.push(vec![x]);
        } else {
            blocks[index[r]].push(x);
        }
    }
    blocks
}

/// Maps each element to the index of its block (blocks ordered by least element).
pub fn class_index(rep: &[usize]) -> Vec<usize> {
    let mut index = vec![usize::MAX; rep.len()];
    let mut next = 0;
    for (x, &r) in rep.iter().enumerate() {
        if r == x {
            index[x] = next;
            next += 1;
        }
    }
    rep.iter().map(|&r| index[r]).collect()
}

/// All set partitions of `0..n` as least-representative arrays
/// (restricted growth strings). Exponential; intended for oracles.
pub fn all_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(x: usize, n: usize, rep: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if x == n {
            out.push(rep.clone());
            return;
        }
        let roots: Vec<usize> = (0..x).filter(|&y| rep[y] == y).collect();
        for r in roots {
            rep.push(r);
            go(x + 1, n, rep, out);
            rep.pop();
        }
        rep.push(x);
        go(x + 1, n, rep, out);
        rep.pop();
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::with_capacity(n), &mut out);
    out
}

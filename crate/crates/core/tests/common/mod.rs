//! Brute-force oracles shared by the integration tests. Nothing here calls
//! into the library's own enumeration code.
#![allow(dead_code)]

use std::collections::BTreeSet;

use cbswb::{corpus, FiniteAlgebra};

/// Every set partition of `0..n` as a restricted growth string.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(i: usize, n: usize, cur: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for l in 0..=max {
            cur.push(l);
            go(i + 1, n, cur, max.max(l + 1), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), 0, &mut out);
    out
}

/// All argument tuples of length `k` over `0..n`, in mixed-radix order.
pub fn tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

/// Whether the labelling is compatible with every operation, by direct
/// comparison over all pairs of related argument tuples.
pub fn compatible(alg: &FiniteAlgebra, labels: &[usize]) -> bool {
    let n = alg.size();
    (0..alg.signature().len()).all(|op| {
        let k = alg.arity(op);
        let all = tuples(n, k);
        all.iter().all(|a| {
            all.iter().all(|b| {
                let related = a.iter().zip(b).all(|(x, y)| labels[*x] == labels[*y]);
                !related || labels[alg.apply(op, a)] == labels[alg.apply(op, b)]
            })
        })
    })
}

pub fn blocks_of(labels: &[usize]) -> Vec<Vec<usize>> {
    let k = labels.iter().max().map_or(0, |m| m + 1);
    let mut out = vec![Vec::new(); k];
    for (x, &l) in labels.iter().enumerate() {
        out[l].push(x);
    }
    out.retain(|b| !b.is_empty());
    out.sort();
    out
}

pub fn oracle_con(alg: &FiniteAlgebra) -> BTreeSet<Vec<Vec<usize>>> {
    partitions(alg.size())
        .into_iter()
        .filter(|p| compatible(alg, p))
        .map(|p| blocks_of(&p))
        .collect()
}

pub fn related(blocks: &[Vec<usize>], x: usize, y: usize) -> bool {
    blocks.iter().any(|b| b.contains(&x) && b.contains(&y))
}

pub fn small_corpus() -> Vec<(&'static str, FiniteAlgebra)> {
    corpus::all().into_iter().filter(|(_, a)| a.size() <= 5).collect()
}

/// Brute-force isomorphism test over all bijections.
pub fn isomorphic(a: &FiniteAlgebra, b: &FiniteAlgebra) -> bool {
    if a.size() != b.size() || a.signature() != b.signature() {
        return false;
    }
    let n = a.size();
    permutations(n).into_iter().any(|p| {
        (0..a.signature().len()).all(|op| {
            tuples(n, a.arity(op)).iter().all(|t| {
                let img: Vec<usize> = t.iter().map(|&x| p[x]).collect();
                p[a.apply(op, t)] == b.apply(op, &img)
            })
        })
    })
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// `θ₁ ∩ θ₂ = Δ` and `θ₁ ∘ θ₂ = ∇`, by enumeration of pairs.
pub fn factor_pair_oracle(n: usize, t1: &[Vec<usize>], t2: &[Vec<usize>]) -> bool {
    (0..n).all(|x| {
        (0..n).all(|y| {
            let meet_ok = x == y || !(related(t1, x, y) && related(t2, x, y));
            let compose_ok = (0..n).any(|z| related(t1, x, z) && related(t2, z, y));
            meet_ok && compose_ok
        })
    })
}

//! Congruences of finite algebras in canonical least-representative form.

mod lattice;
mod transport;

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::algebra::{for_each_tuple, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::partition::{blocks_from_reps, class_index, reps_from_blocks, reps_from_labels, UnionFind};

pub use lattice::{all_congruences, CongruenceLattice, FiniteLattice};
pub use transport::{
    pullback, pushforward, quotient_down, quotient_lift, quotient_up, relative_congruences,
    transport, Direction, LiftDirection,
};

/// A congruence of the algebra with fingerprint `parent`.
///
/// `rep[x]` is the least element of the block of `x`. Ordering is canonical:
/// more blocks first, then lexicographic on `rep`, so `Δ` comes first and
/// `∇` last.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Congruence {
    parent: u64,
    rep: Vec<usize>,
}

impl Ord for Congruence {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .block_count()
            .cmp(&self.block_count())
            .then_with(|| self.rep.cmp(&other.rep))
            .then_with(|| self.parent.cmp(&other.parent))
    }
}

impl PartialOrd for Congruence {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for Congruence {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.blocks().serialize(s)
    }
}

impl fmt::Display for Congruence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, b) in self.blocks().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, x) in b.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl Congruence {
    /// Caller guarantees `rep` is canonical and compatible with the parent.
    pub(crate) fn from_reps_unchecked(parent: u64, rep: Vec<usize>) -> Congruence {
        debug_assert!(rep.iter().enumerate().all(|(x, &r)| r <= x && rep[r] == r));
        Congruence { parent, rep }
    }

    pub(crate) fn from_labels_unchecked<L: std::hash::Hash + Eq>(
        parent: u64,
        labels: impl IntoIterator<Item = L>,
    ) -> Congruence {
        Congruence::from_reps_unchecked(parent, reps_from_labels(labels))
    }

    /// `Δ_A`.
    pub fn identity(alg: &FiniteAlgebra) -> Congruence {
        Congruence::from_reps_unchecked(alg.fingerprint(), (0..alg.size()).collect())
    }

    /// `∇_A`.
    pub fn total(alg: &FiniteAlgebra) -> Congruence {
        Congruence::from_reps_unchecked(alg.fingerprint(), vec![0; alg.size()])
    }

    /// Validates a block list as a congruence of `alg`.
    pub fn from_blocks(alg: &FiniteAlgebra, blocks: &[Vec<usize>]) -> Result<Congruence> {
        let rep = reps_from_blocks(alg.size(), blocks)?;
        if let Some(e) = compatibility_failure(alg, &rep) {
            return Err(e);
        }
        Ok(Congruence::from_reps_unchecked(alg.fingerprint(), rep))
    }

    /// Parses the literal form `[[0,2],[1,3]]` and validates it against `alg`.
    pub fn parse(alg: &FiniteAlgebra, text: &str) -> Result<Congruence> {
        let blocks: Vec<Vec<usize>> = serde_json::from_str(text)
            .map_err(|e| Error::InvalidArgument(format!("bad congruence literal `{text}`: {e}")))?;
        Congruence::from_blocks(alg, &blocks)
    }

    pub fn parent(&self) -> u64 {
        self.parent
    }

    pub fn size(&self) -> usize {
        self.rep.len()
    }

    pub fn rep(&self) -> &[usize] {
        &self.rep
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        blocks_from_reps(&self.rep)
    }

    pub fn block_count(&self) -> usize {
        self.rep.iter().enumerate().filter(|(x, &r)| *x == r).count()
    }

    /// Block index of every element, blocks ordered by least element.
    pub fn class_index(&self) -> Vec<usize> {
        class_index(&self.rep)
    }

    pub fn related(&self, x: usize, y: usize) -> bool {
        self.rep[x] == self.rep[y]
    }

    pub fn is_identity(&self) -> bool {
        self.rep.iter().enumerate().all(|(x, &r)| x == r)
    }

    pub fn is_total(&self) -> bool {
        self.rep.iter().all(|&r| r == 0)
    }

    fn same_parent(&self, other: &Congruence) -> Result<()> {
        if self.parent != other.parent || self.rep.len() != other.rep.len() {
            return Err(Error::ParentMismatch);
        }
        Ok(())
    }

    /// `self ⊆ other`.
    pub fn leq(&self, other: &Congruence) -> Result<bool> {
        self.same_parent(other)?;
        Ok(self.not_below_witness(other).is_none())
    }

    /// A pair in `self` but not in `other`, if any.
    pub(crate) fn not_below_witness(&self, other: &Congruence) -> Option<(usize, usize)> {
        (0..self.size())
            .find(|&x| other.rep[x] != other.rep[self.rep[x]])
            .map(|x| (self.rep[x], x))
    }

    /// Block intersection.
    pub fn meet(&self, other: &Congruence) -> Result<Congruence> {
        self.same_parent(other)?;
        Ok(Congruence::from_labels_unchecked(
            self.parent,
            self.rep.iter().zip(&other.rep).map(|(&a, &b)| (a, b)),
        ))
    }

    /// Smallest congruence containing both. The equivalence join of two
    /// congruences is already compatible, so no algebra is needed.
    pub fn join(&self, other: &Congruence) -> Result<Congruence> {
        self.same_parent(other)?;
        let mut uf = UnionFind::from_reps(&self.rep);
        for (x, &r) in other.rep.iter().enumerate() {
            uf.union(x, r);
        }
        Ok(Congruence::from_reps_unchecked(self.parent, uf.reps()))
    }

    /// Relational product `self ∘ other = {(a,c): ∃b. a self b, b other c}`,
    /// with the flag `self ∘ other = other ∘ self`.
    pub fn compose(&self, other: &Congruence) -> Result<(BinaryRelation, bool)> {
        self.same_parent(other)?;
        let n = self.size();
        let mut pairs = vec![false; n * n];
        let other_blocks = other.blocks();
        let other_idx = other.class_index();
        for a in 0..n {
            for b in (0..n).filter(|&b| self.related(a, b)) {
                for &c in &other_blocks[other_idx[b]] {
                    pairs[a * n + c] = true;
                }
            }
        }
        // (θ₁∘θ₂)⁻¹ = θ₂∘θ₁, so permutability is symmetry of the product.
        let permutable = (0..n).all(|a| (0..n).all(|c| pairs[a * n + c] == pairs[c * n + a]));
        Ok((
            BinaryRelation {
                parent: self.parent,
                size: n,
                pairs,
            },
            permutable,
        ))
    }

    /// The same partition viewed as a relation.
    pub fn to_relation(&self) -> BinaryRelation {
        let n = self.size();
        let mut pairs = vec![false; n * n];
        for a in 0..n {
            for c in 0..n {
                pairs[a * n + c] = self.related(a, c);
            }
        }
        BinaryRelation {
            parent: self.parent,
            size: n,
            pairs,
        }
    }
}

/// Meet or join selector for [`lattice_op`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeOp {
    Meet,
    Join,
}

pub fn lattice_op(kind: LatticeOp, a: &Congruence, b: &Congruence) -> Result<Congruence> {
    match kind {
        LatticeOp::Meet => a.meet(b),
        LatticeOp::Join => a.join(b),
    }
}

/// A binary relation on the carrier of an algebra, as a dense bit matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryRelation {
    parent: u64,
    size: usize,
    pairs: Vec<bool>,
}

impl BinaryRelation {
    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.pairs[a * self.size + b]
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.size)
            .flat_map(|a| (0..self.size).map(move |b| (a, b)))
            .filter(|&(a, b)| self.contains(a, b))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.pairs.iter().filter(|&&p| p).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_total(&self) -> bool {
        self.pairs.iter().all(|&p| p)
    }

    /// First pair (lexicographically) not in the relation.
    pub fn first_missing(&self) -> Option<(usize, usize)> {
        self.pairs
            .iter()
            .position(|&p| !p)
            .map(|i| (i / self.size, i % self.size))
    }

    pub fn parent(&self) -> u64 {
        self.parent
    }
}

/// First violation of compatibility for the partition `rep`, if any.
///
/// Changing one argument at a time to its representative suffices: any two
/// related tuples are connected by such single-position steps.
pub(crate) fn compatibility_failure(alg: &FiniteAlgebra, rep: &[usize]) -> Option<Error> {
    let n = alg.size();
    for (op, sym) in alg.signature().ops().iter().enumerate() {
        let k = sym.arity;
        let table = alg.table(op);
        let mut failure = None;
        for_each_tuple(n, k, |args| {
            if failure.is_some() {
                return;
            }
            let base = alg.index_of(args);
            let fx = table[base];
            let mut weight = 1;
            for i in (0..k).rev() {
                let r = rep[args[i]];
                if r != args[i] {
                    let fy = table[base - args[i] * weight + r * weight];
                    if rep[fx] != rep[fy] {
                        failure = Some(Error::NotACongruence {
                            op: sym.name.clone(),
                            x: r,
                            y: args[i],
                            fx: fy,
                            fy: fx,
                        });
                        return;
                    }
                }
                weight *= n;
            }
        });
        if failure.is_some() {
            return failure;
        }
    }
    None
}

/// Whether the block list is compatible with every operation of `alg`.
pub fn is_congruence(alg: &FiniteAlgebra, blocks: &[Vec<usize>]) -> Result<bool> {
    let rep = reps_from_blocks(alg.size(), blocks)?;
    Ok(compatibility_failure(alg, &rep).is_none())
}

/// Smallest congruence containing every pair in `pairs`, by union-find with a
/// worklist of merged pairs pushed through every basic translation.
pub fn generate(alg: &FiniteAlgebra, pairs: &[(usize, usize)]) -> Result<Congruence> {
    let n = alg.size();
    let mut uf = UnionFind::new(n);
    let mut work = Vec::new();
    for &(a, b) in pairs {
        alg.check_element(a)?;
        alg.check_element(b)?;
        if uf.union(a, b) {
            work.push((a, b));
        }
    }
    let mut ctx = Vec::new();
    while let Some((x, y)) = work.pop() {
        for (op, sym) in alg.signature().ops().iter().enumerate() {
            let k = sym.arity;
            if k == 0 {
                continue;
            }
            let table = alg.table(op);
            for pos in 0..k {
                let weight = n.pow((k - 1 - pos) as u32);
                for_each_tuple(n, k - 1, |rest| {
                    ctx.clear();
                    ctx.extend_from_slice(&rest[..pos]);
                    ctx.push(0);
                    ctx.extend_from_slice(&rest[pos..]);
                    let base = alg.index_of(&ctx);
                    let fx = table[base + x * weight];
                    let fy = table[base + y * weight];
                    if uf.union(fx, fy) {
                        work.push((fx, fy));
                    }
                });
            }
        }
    }
    Ok(Congruence::from_reps_unchecked(alg.fingerprint(), uf.reps()))
}

/// `θ(a,b)`, the smallest congruence identifying `a` and `b`.
pub fn principal_congruence(alg: &FiniteAlgebra, a: usize, b: usize) -> Result<Congruence> {
    generate(alg, &[(a, b)])
}

//! Finite algebras over an arbitrary finite signature.
//!
//! The carrier of an algebra of size `n` is always `0..n`. An operation of
//! arity `k` is stored as a flat table of `n^k` entries indexed in mixed
//! radix: the argument tuple `(i_1, .., i_k)` lives at
//! `i_1 * n^(k-1) + .. + i_k`.

mod construct;
mod hom;
mod json;
mod term;

use std::collections::hash_map::DefaultHasher;
use std::collections::HashSet;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use construct::{direct_product, power, quotient_algebra, Product, Quotient};
pub use hom::{homomorphisms, iso_search, Homomorphism, IsoMode};
pub use json::{algebra_to_json, parse_algebra, parse_document, AlgebraDocument};
pub use term::{counterexample, eval_term, satisfies, Sentence, Term};
pub(crate) use term::Compiled;

/// Operation symbol with its arity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OpSymbol {
    pub name: String,
    pub arity: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    ops: Vec<OpSymbol>,
}

impl Signature {
    pub fn new(ops: Vec<OpSymbol>) -> Result<Signature> {
        let mut seen = HashSet::new();
        for op in &ops {
            if !seen.insert(op.name.as_str()) {
                return Err(Error::DuplicateOperation(op.name.clone()));
            }
        }
        Ok(Signature { ops })
    }

    pub fn ops(&self) -> &[OpSymbol] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.ops.iter().position(|o| o.name == name)
    }
}

/// A finite algebra with carrier `0..size`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAlgebra {
    name: String,
    size: usize,
    signature: Signature,
    tables: Vec<Vec<usize>>,
    fingerprint: u64,
}

/// Number of entries of an arity-`k` table over `n` elements, if it fits.
pub(crate) fn table_len(n: usize, arity: usize) -> Option<usize> {
    let mut len: usize = 1;
    for _ in 0..arity {
        len = len.checked_mul(n)?;
    }
    Some(len)
}

impl FiniteAlgebra {
    /// Builds an algebra from `(name, arity, flat table)` triples and
    /// validates every table.
    pub fn new(
        name: impl Into<String>,
        size: usize,
        ops: Vec<(String, usize, Vec<usize>)>,
    ) -> Result<FiniteAlgebra> {
        if size == 0 {
            return Err(Error::Malformed("size must be positive".into()));
        }
        let signature = Signature::new(
            ops.iter()
                .map(|(name, arity, _)| OpSymbol {
                    name: name.clone(),
                    arity: *arity,
                })
                .collect(),
        )?;
        let mut tables = Vec::with_capacity(ops.len());
        for (name, arity, table) in ops {
            let expected = table_len(size, arity).ok_or_else(|| Error::Budget {
                what: format!("table of `{name}`"),
                needed: (size as u128).saturating_pow(arity as u32),
                limit: usize::MAX as u128,
            })?;
            if table.len() != expected {
                return Err(Error::TableLength {
                    op: name,
                    arity,
                    expected,
                    found: table.len(),
                });
            }
            if let Some((index, &value)) = table.iter().enumerate().find(|(_, &v)| v >= size) {
                return Err(Error::EntryOutOfRange {
                    op: name,
                    index,
                    value,
                    size,
                });
            }
            tables.push(table);
        }
        Ok(Self::from_parts(name.into(), size, signature, tables))
    }

    /// Skips validation; callers guarantee the table invariants.
    pub(crate) fn from_parts(
        name: String,
        size: usize,
        signature: Signature,
        tables: Vec<Vec<usize>>,
    ) -> FiniteAlgebra {
        let mut h = DefaultHasher::new();
        size.hash(&mut h);
        signature.hash(&mut h);
        tables.hash(&mut h);
        FiniteAlgebra {
            name,
            size,
            signature,
            tables,
            fingerprint: h.finish(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> FiniteAlgebra {
        self.name = name.into();
        self
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn tables(&self) -> &[Vec<usize>] {
        &self.tables
    }

    pub fn table(&self, op: usize) -> &[usize] {
        &self.tables[op]
    }

    pub fn arity(&self, op: usize) -> usize {
        self.signature.ops[op].arity
    }

    /// Content hash of carrier size, signature and tables. Two algebras with
    /// equal fingerprints share congruences.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn op_index(&self, name: &str) -> Result<usize> {
        self.signature
            .position(name)
            .ok_or_else(|| Error::UnknownOperation(name.to_string()))
    }

    /// Value of the nullary operation `name`, if there is one.
    pub fn constant(&self, name: &str) -> Option<usize> {
        let i = self.signature.position(name)?;
        (self.arity(i) == 0).then(|| self.tables[i][0])
    }

    #[inline]
    pub fn index_of(&self, args: &[usize]) -> usize {
        args.iter().fold(0, |acc, &a| acc * self.size + a)
    }

    #[inline]
    pub fn apply(&self, op: usize, args: &[usize]) -> usize {
        debug_assert_eq!(args.len(), self.arity(op));
        self.tables[op][self.index_of(args)]
    }

    pub fn same_signature(&self, other: &FiniteAlgebra) -> Result<()> {
        if self.signature != other.signature {
            return Err(Error::SignatureMismatch(
                self.name.clone(),
                other.name.clone(),
            ));
        }
        Ok(())
    }

    pub fn check_element(&self, x: usize) -> Result<()> {
        if x >= self.size {
            return Err(Error::ElementOutOfRange {
                element: x,
                size: self.size,
            });
        }
        Ok(())
    }

    /// Returns a copy with a single table entry replaced.
    pub fn with_entry(&self, op: usize, index: usize, value: usize) -> Result<FiniteAlgebra> {
        self.check_element(value)?;
        let mut tables = self.tables.clone();
        *tables
            .get_mut(op)
            .and_then(|t| t.get_mut(index))
            .ok_or_else(|| Error::InvalidArgument(format!("no entry {index} in operation {op}")))? =
            value;
        Ok(Self::from_parts(
            self.name.clone(),
            self.size,
            self.signature.clone(),
            tables,
        ))
    }

    /// The one-element algebra of this signature.
    pub fn trivial_like(&self) -> FiniteAlgebra {
        let tables = self.signature.ops.iter().map(|_| vec![0]).collect();
        Self::from_parts("1".into(), 1, self.signature.clone(), tables)
    }
}

/// Steps `cur` to the next tuple over `0..n` in lexicographic order.
/// Returns `false` after the last tuple (and resets `cur` to all zeros).
#[inline]
pub(crate) fn next_tuple(cur: &mut [usize], n: usize) -> bool {
    for i in (0..cur.len()).rev() {
        cur[i] += 1;
        if cur[i] < n {
            return true;
        }
        cur[i] = 0;
    }
    false
}

/// Calls `f` on every tuple of length `k` over `0..n`, lexicographically.
pub(crate) fn for_each_tuple(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if n == 0 && k > 0 {
        return;
    }
    let mut cur = vec![0; k];
    loop {
        f(&cur);
        if !next_tuple(&mut cur, n) {
            break;
        }
    }
}

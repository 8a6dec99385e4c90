use std::collections::HashSet;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::{principal_congruence, Congruence};
use crate::algebra::FiniteAlgebra;
use crate::budget::Budget;
use crate::error::{Error, Result};

/// A finite bounded lattice on `0..size` with tabulated order and operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteLattice {
    size: usize,
    leq: Vec<bool>,
    meet: Vec<usize>,
    join: Vec<usize>,
    bottom: usize,
    top: usize,
}

impl FiniteLattice {
    /// Builds the lattice of a partial order, failing if some pair lacks a
    /// meet or a join.
    pub fn from_order(size: usize, leq: impl Fn(usize, usize) -> bool) -> Result<FiniteLattice> {
        if size == 0 {
            return Err(Error::NotALattice("empty carrier".into()));
        }
        let mut le = vec![false; size * size];
        for a in 0..size {
            for b in 0..size {
                le[a * size + b] = leq(a, b);
            }
        }
        let at = |a: usize, b: usize| le[a * size + b];
        for a in 0..size {
            if !at(a, a) {
                return Err(Error::NotALattice(format!("order not reflexive at {a}")));
            }
            for b in 0..size {
                if a != b && at(a, b) && at(b, a) {
                    return Err(Error::NotALattice(format!("order not antisymmetric at ({a},{b})")));
                }
                for c in 0..size {
                    if at(a, b) && at(b, c) && !at(a, c) {
                        return Err(Error::NotALattice(format!(
                            "order not transitive at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        let extreme = |bounds: Vec<usize>, greatest: bool| -> Option<usize> {
            bounds.iter().copied().find(|&m| {
                bounds
                    .iter()
                    .all(|&o| if greatest { at(o, m) } else { at(m, o) })
            })
        };
        let mut meet = vec![0; size * size];
        let mut join = vec![0; size * size];
        for a in 0..size {
            for b in 0..size {
                let lower = (0..size).filter(|&c| at(c, a) && at(c, b)).collect();
                let upper = (0..size).filter(|&c| at(a, c) && at(b, c)).collect();
                meet[a * size + b] = extreme(lower, true)
                    .ok_or_else(|| Error::NotALattice(format!("no meet for ({a},{b})")))?;
                join[a * size + b] = extreme(upper, false)
                    .ok_or_else(|| Error::NotALattice(format!("no join for ({a},{b})")))?;
            }
        }
        let bottom = (0..size).find(|&b| (0..size).all(|x| at(b, x)));
        let top = (0..size).find(|&t| (0..size).all(|x| at(x, t)));
        let (Some(bottom), Some(top)) = (bottom, top) else {
            return Err(Error::NotALattice("unbounded".into()));
        };
        Ok(FiniteLattice {
            size,
            leq: le,
            meet,
            join,
            bottom,
            top,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.size + b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.size + b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.size + b]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// First triple `(a,b,c)` with `a ≤ c` and `a∨(b∧c) ≠ (a∨b)∧c`.
    pub fn modularity_failure(&self) -> Option<(usize, usize, usize)> {
        let n = self.size;
        (0..n)
            .flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c))))
            .find(|&(a, b, c)| {
                self.leq(a, c) && self.join(a, self.meet(b, c)) != self.meet(self.join(a, b), c)
            })
    }

    /// First triple with `a∧(b∨c) ≠ (a∧b)∨(a∧c)`.
    pub fn distributivity_failure(&self) -> Option<(usize, usize, usize)> {
        let n = self.size;
        (0..n)
            .flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c))))
            .find(|&(a, b, c)| {
                self.meet(a, self.join(b, c)) != self.join(self.meet(a, b), self.meet(a, c))
            })
    }

    pub fn is_modular(&self) -> bool {
        self.modularity_failure().is_none()
    }

    pub fn is_distributive(&self) -> bool {
        self.distributivity_failure().is_none()
    }

    /// All `b` with `a∧b = 0` and `a∨b = 1`.
    pub fn complements(&self, a: usize) -> Vec<usize> {
        (0..self.size)
            .filter(|&b| self.meet(a, b) == self.bottom && self.join(a, b) == self.top)
            .collect()
    }

    /// The interval `[lo, top]` as a lattice, with the embedding into `self`.
    pub fn upper_interval(&self, lo: usize) -> (FiniteLattice, Vec<usize>) {
        let members: Vec<usize> = (0..self.size).filter(|&x| self.leq(lo, x)).collect();
        let sub = FiniteLattice::from_order(members.len(), |i, j| self.leq(members[i], members[j]))
            .expect("interval of a lattice is a lattice");
        (sub, members)
    }
}

/// `Con(A)` in canonical order, with its lattice structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceLattice {
    elements: Vec<Congruence>,
    lattice: FiniteLattice,
    modular: bool,
    distributive: bool,
}

impl CongruenceLattice {
    pub fn elements(&self) -> &[Congruence] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn is_modular(&self) -> bool {
        self.modular
    }

    pub fn is_distributive(&self) -> bool {
        self.distributive
    }

    pub fn index_of(&self, c: &Congruence) -> Option<usize> {
        self.elements.binary_search(c).ok()
    }

    pub fn get(&self, i: usize) -> &Congruence {
        &self.elements[i]
    }

    pub fn contains(&self, c: &Congruence) -> bool {
        self.index_of(c).is_some()
    }

    /// Elements of the interval `[lo, ∇]`.
    pub fn above(&self, lo: &Congruence) -> Vec<Congruence> {
        self.elements
            .iter()
            .filter(|c| lo.leq(c).unwrap_or(false))
            .cloned()
            .collect()
    }
}

impl Serialize for CongruenceLattice {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.elements.len();
        let order: Vec<Vec<u8>> = (0..n)
            .map(|i| (0..n).map(|j| self.lattice.leq(i, j) as u8).collect())
            .collect();
        let mut st = s.serialize_struct("CongruenceLattice", 5)?;
        st.serialize_field("size", &n)?;
        st.serialize_field("elements", &self.elements)?;
        st.serialize_field("order", &order)?;
        st.serialize_field("modular", &self.modular)?;
        st.serialize_field("distributive", &self.distributive)?;
        st.end()
    }
}

/// `Con(A)` as the join-closure of `Δ` and the principal congruences.
pub fn all_congruences(alg: &FiniteAlgebra, budget: &Budget) -> Result<CongruenceLattice> {
    budget.check_con(alg.size())?;
    let n = alg.size();
    let mut principals: Vec<Congruence> = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let p = principal_congruence(alg, a, b)?;
            if !principals.contains(&p) {
                principals.push(p);
            }
        }
    }
    let mut seen: HashSet<Congruence> = HashSet::new();
    let mut queue = vec![Congruence::identity(alg)];
    seen.insert(queue[0].clone());
    while let Some(c) = queue.pop() {
        for p in &principals {
            let j = c.join(p)?;
            if seen.insert(j.clone()) {
                queue.push(j);
            }
        }
    }
    let mut elements: Vec<Congruence> = seen.into_iter().collect();
    elements.sort();
    let lattice = FiniteLattice::from_order(elements.len(), |i, j| {
        elements[i].not_below_witness(&elements[j]).is_none()
    })?;
    let modular = lattice.is_modular();
    let distributive = lattice.is_distributive();
    Ok(CongruenceLattice {
        elements,
        lattice,
        modular,
        distributive,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::compatibility_failure;
    use crate::corpus;
    use crate::partition::all_partitions;

    fn con(name: &str) -> CongruenceLattice {
        all_congruences(&corpus::get(name), &Budget::default()).unwrap()
    }

    #[test]
    fn z4_is_a_chain() {
        let l = con("z4");
        assert_eq!(l.len(), 3);
        assert_eq!(l.get(1).blocks(), vec![vec![0, 2], vec![1, 3]]);
        assert!(l.is_distributive());
    }

    #[test]
    fn v4_is_m3() {
        let l = con("v4");
        assert_eq!(l.len(), 5);
        assert!(l.is_modular());
        assert!(!l.is_distributive());
    }

    #[test]
    fn trivial_algebra() {
        let one = corpus::get("z2").trivial_like();
        let l = all_congruences(&one, &Budget::default()).unwrap();
        assert_eq!(l.len(), 1);
        assert!(l.get(0).is_identity() && l.get(0).is_total());
    }

    #[test]
    fn oracle_agreement() {
        for name in corpus::names() {
            let a = corpus::get(name);
            if a.size() > 5 {
                continue;
            }
            let mut brute: Vec<Congruence> = all_partitions(a.size())
                .into_iter()
                .filter(|r| compatibility_failure(&a, r).is_none())
                .map(|r| Congruence::from_reps_unchecked(a.fingerprint(), r))
                .collect();
            brute.sort();
            assert_eq!(con(name).elements(), &brute[..], "{name}");
        }
    }

    #[test]
    fn budget_enforced() {
        let a = corpus::get("z4");
        let b = Budget {
            max_con_size: 3,
            ..Budget::default()
        };
        assert!(matches!(all_congruences(&a, &b), Err(Error::Budget { .. })));
    }

    #[test]
    fn lattice_from_order() {
        // pentagon N5: 0 < a < b < 1, 0 < c < 1
        let le = |x: usize, y: usize| {
            let up: [&[usize]; 5] = [&[0, 1, 2, 3, 4], &[1, 2, 4], &[2, 4], &[3, 4], &[4]];
            up[x].contains(&y)
        };
        let l = FiniteLattice::from_order(5, le).unwrap();
        assert!(!l.is_modular());
        assert_eq!(l.complements(3), vec![1, 2]);
        assert!(FiniteLattice::from_order(3, |a, b| a == b || (a == 0 && b > 0)).is_err());
    }
}

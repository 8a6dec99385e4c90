use serde::Serialize;

use crate::algebra::{direct_product, quotient_algebra, FiniteAlgebra, Homomorphism};
use crate::budget::Budget;
use crate::congruence::{all_congruences, Congruence, CongruenceLattice};
use crate::error::{Error, Result};

/// A verified pair of factor congruences.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorPair {
    pub theta: Congruence,
    pub complement: Congruence,
    pub meet_is_delta: bool,
    pub compose_is_nabla: bool,
}

/// Why a pair fails to be a pair of factor congruences.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorRefutation {
    pub condition: String,
    pub witness: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum FactorCheck {
    Pair(FactorPair),
    Refuted(FactorRefutation),
}

impl FactorCheck {
    pub fn is_pair(&self) -> bool {
        matches!(self, FactorCheck::Pair(_))
    }

    pub fn pair(self) -> Option<FactorPair> {
        match self {
            FactorCheck::Pair(p) => Some(p),
            FactorCheck::Refuted(_) => None,
        }
    }
}

/// Checks `θ₁ ∩ θ₂ = Δ` and `θ₁ ∘ θ₂ = ∇`.
///
/// Refutations name the first failing condition with the lexicographically
/// first witness: a pair in the meet, or a pair missing from the product.
pub fn check_factor_pair(t1: &Congruence, t2: &Congruence) -> Result<FactorCheck> {
    let meet = t1.meet(t2)?;
    if let Some((x, y)) = (0..meet.size())
        .find(|&y| meet.rep()[y] != y)
        .map(|y| (meet.rep()[y], y))
    {
        return Ok(FactorCheck::Refuted(FactorRefutation {
            condition: "meet is not the identity".into(),
            witness: (x, y),
        }));
    }
    let (rel, _) = t1.compose(t2)?;
    if let Some(w) = rel.first_missing() {
        let condition = if t1.join(t2)?.is_total() {
            "not permutable"
        } else {
            "join is not the total congruence"
        };
        return Ok(FactorCheck::Refuted(FactorRefutation {
            condition: condition.into(),
            witness: w,
        }));
    }
    Ok(FactorCheck::Pair(FactorPair {
        theta: t1.clone(),
        complement: t2.clone(),
        meet_is_delta: true,
        compose_is_nabla: true,
    }))
}

pub(crate) fn is_factor_pair(t1: &Congruence, t2: &Congruence) -> bool {
    check_factor_pair(t1, t2).is_ok_and(|c| c.is_pair())
}

/// One element of `FC(A)` with all of its factor complements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorEntry {
    pub theta: Congruence,
    pub complements: Vec<Congruence>,
}

/// `FC(A)` in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorCongruences {
    pub entries: Vec<FactorEntry>,
}

impl FactorCongruences {
    pub fn elements(&self) -> Vec<Congruence> {
        self.entries.iter().map(|e| e.theta.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, c: &Congruence) -> bool {
        self.entries.iter().any(|e| &e.theta == c)
    }

    pub fn complements(&self, c: &Congruence) -> &[Congruence] {
        self.entries
            .iter()
            .find(|e| &e.theta == c)
            .map_or(&[], |e| &e.complements)
    }

    pub fn pairs(&self) -> Vec<FactorPair> {
        self.entries
            .iter()
            .flat_map(|e| {
                e.complements.iter().map(move |c| FactorPair {
                    theta: e.theta.clone(),
                    complement: c.clone(),
                    meet_is_delta: true,
                    compose_is_nabla: true,
                })
            })
            .collect()
    }
}

/// `FC(A)` computed from an already enumerated `Con(A)`.
pub fn factor_congruences_of(con: &CongruenceLattice) -> FactorCongruences {
    let els = con.elements();
    let entries = els
        .iter()
        .filter_map(|t| {
            let complements: Vec<Congruence> =
                els.iter().filter(|c| is_factor_pair(t, c)).cloned().collect();
            (!complements.is_empty()).then(|| FactorEntry {
                theta: t.clone(),
                complements,
            })
        })
        .collect();
    FactorCongruences { entries }
}

pub fn factor_congruences(alg: &FiniteAlgebra, budget: &Budget) -> Result<FactorCongruences> {
    Ok(factor_congruences_of(&all_congruences(alg, budget)?))
}

/// The map `a ↦ (a/θ, a/¬θ)` into `A/θ × A/¬θ`, verified to be a bijective
/// homomorphism.
pub fn decomposition_witness(alg: &FiniteAlgebra, pair: &FactorPair) -> Result<Homomorphism> {
    let q1 = quotient_algebra(alg, &pair.theta)?;
    let q2 = quotient_algebra(alg, &pair.complement)?;
    let prod = direct_product(&q1.algebra, &q2.algebra)?;
    let m2 = q2.algebra.size();
    let map = (0..alg.size())
        .map(|a| q1.projection.apply(a) * m2 + q2.projection.apply(a))
        .collect();
    let h = Homomorphism::new(alg, &prod.algebra, map)?;
    if !h.is_isomorphism() {
        return Err(Error::NotAnIsomorphism(format!(
            "decomposition map {:?} is not bijective",
            h.map()
        )));
    }
    Ok(h)
}

/// Why `FC(A)` fails to be a Boolean sublattice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BfcCounterexample {
    NonUniqueComplement {
        theta: Congruence,
        complements: Vec<Congruence>,
    },
    NotClosed {
        op: String,
        a: Congruence,
        b: Congruence,
        result: Congruence,
    },
    NotDistributive {
        a: Congruence,
        b: Congruence,
        c: Congruence,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BfcVerdict {
    pub holds: bool,
    pub counterexample: Option<BfcCounterexample>,
}

/// Whether `FC(A)` is a Boolean sublattice of `Con(A)`.
pub fn bfc_check_of(fc: &FactorCongruences) -> Result<BfcVerdict> {
    let fail = |c| BfcVerdict {
        holds: false,
        counterexample: Some(c),
    };
    for e in &fc.entries {
        if e.complements.len() > 1 {
            return Ok(fail(BfcCounterexample::NonUniqueComplement {
                theta: e.theta.clone(),
                complements: e.complements.clone(),
            }));
        }
    }
    let els = fc.elements();
    for a in &els {
        for b in &els {
            for (op, r) in [("meet", a.meet(b)?), ("join", a.join(b)?)] {
                if !fc.contains(&r) {
                    return Ok(fail(BfcCounterexample::NotClosed {
                        op: op.into(),
                        a: a.clone(),
                        b: b.clone(),
                        result: r,
                    }));
                }
            }
        }
    }
    for a in &els {
        for b in &els {
            for c in &els {
                if a.meet(&b.join(c)?)? != a.meet(b)?.join(&a.meet(c)?)? {
                    return Ok(fail(BfcCounterexample::NotDistributive {
                        a: a.clone(),
                        b: b.clone(),
                        c: c.clone(),
                    }));
                }
            }
        }
    }
    Ok(BfcVerdict {
        holds: true,
        counterexample: None,
    })
}

pub fn bfc_check(alg: &FiniteAlgebra, budget: &Budget) -> Result<BfcVerdict> {
    bfc_check_of(&factor_congruences(alg, budget)?)
}

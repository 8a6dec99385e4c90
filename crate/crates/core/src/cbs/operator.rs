use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::algebra::{iso_search, quotient_algebra, FiniteAlgebra, Homomorphism, IsoMode, Sentence};
use crate::budget::Budget;
use crate::congruence::{all_congruences, relative_congruences, Congruence};
use crate::error::{Error, Result};
use crate::structure::{bfc_check_of, center_congruences, factor_congruences_of};

/// Selects which congruences of each algebra the operator `K` keeps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OperatorKind {
    ConAll,
    FactorC,
    ZCon,
    Relative(Vec<Sentence>),
}

impl OperatorKind {
    pub fn name(&self) -> &'static str {
        match self {
            OperatorKind::ConAll => "con",
            OperatorKind::FactorC => "fc",
            OperatorKind::ZCon => "zcon",
            OperatorKind::Relative(_) => "relative",
        }
    }

    /// Whether `K(A)` consists of factor congruences, each with a factor
    /// complement inside `K(A)`.
    pub fn is_factor_kind(&self) -> bool {
        matches!(self, OperatorKind::FactorC | OperatorKind::ZCon)
    }

    /// Whether `K(A)` is a Boolean sublattice of `Con(A)` on this algebra.
    pub fn is_boolean_on(&self, alg: &FiniteAlgebra, budget: &Budget) -> Result<bool> {
        Ok(match self {
            OperatorKind::ZCon => true,
            OperatorKind::FactorC => {
                let con = all_congruences(alg, budget)?;
                bfc_check_of(&factor_congruences_of(&con))?.holds
            }
            _ => false,
        })
    }
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorKind::Relative(s) => {
                write!(f, "relative(")?;
                for (i, x) in s.iter().enumerate() {
                    if i > 0 {
                        write!(f, "; ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            k => write!(f, "{}", k.name()),
        }
    }
}

impl Serialize for OperatorKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FromStr for OperatorKind {
    type Err = Error;

    /// Accepts `con`, `fc`, `zcon`, or `relative` (with an empty axiom list).
    fn from_str(s: &str) -> Result<OperatorKind> {
        match s {
            "con" | "con-all" | "conall" => Ok(OperatorKind::ConAll),
            "fc" | "factor" => Ok(OperatorKind::FactorC),
            "zcon" | "center" => Ok(OperatorKind::ZCon),
            "relative" | "rel" => Ok(OperatorKind::Relative(Vec::new())),
            _ => Err(Error::InvalidArgument(format!("unknown operator kind `{s}`"))),
        }
    }
}

/// `K(A)` in canonical order.
pub fn operator_eval(alg: &FiniteAlgebra, kind: &OperatorKind, budget: &Budget) -> Result<Vec<Congruence>> {
    match kind {
        OperatorKind::Relative(sentences) => relative_congruences(alg, sentences, budget),
        _ => {
            let con = all_congruences(alg, budget)?;
            Ok(match kind {
                OperatorKind::ConAll => con.elements().to_vec(),
                OperatorKind::FactorC => factor_congruences_of(&con).elements(),
                OperatorKind::ZCon => center_congruences(&con),
                OperatorKind::Relative(_) => unreachable!(),
            })
        }
    }
}

/// Whether `f: A → B` is admissible for `K`: some `σ ∈ K(A)` has `B ≅ A/σ`.
/// Returns the least such `σ`.
pub fn k_morphism_witness(
    f: &Homomorphism,
    kind: &OperatorKind,
    budget: &Budget,
) -> Result<Option<Congruence>> {
    let a = f.source();
    for sigma in operator_eval(a, kind, budget)? {
        let q = quotient_algebra(a, &sigma)?;
        if q.algebra.size() == f.target().size()
            && !iso_search(&q.algebra, f.target(), IsoMode::First, budget)?.is_empty()
        {
            return Ok(Some(sigma));
        }
    }
    Ok(None)
}

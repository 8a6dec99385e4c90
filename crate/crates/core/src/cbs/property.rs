use serde::Serialize;

use super::operator::{operator_eval, OperatorKind};
use super::sequence::{cbs_sequence, sigma_bracket, CbsSequenceState, ComplementChoice, Fhat, DEFAULT_BOUND};
use crate::algebra::{direct_product, iso_search, quotient_algebra, FiniteAlgebra, IsoMode};
use crate::budget::Budget;
use crate::congruence::{quotient_down, Congruence};
use crate::error::{Error, Result};
use crate::structure::{decomposition_witness, is_factor_pair, FactorPair};

fn isomorphic(a: &FiniteAlgebra, b: &FiniteAlgebra, budget: &Budget) -> Result<Option<Vec<usize>>> {
    if a.size() != b.size() {
        return Ok(None);
    }
    Ok(iso_search(a, b, IsoMode::First, budget)?
        .into_iter()
        .next()
        .map(|h| h.map().to_vec()))
}

/// `θ ∈ K(A)` with `A ≅ A/θ`, together with an isomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelfQuotient {
    pub theta: Congruence,
    pub iso: Vec<usize>,
}

/// One instance of the lifting `θ' = θ/σ` with `A ≅ (A/σ)/θ'`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Corresp {
    pub sigma: Congruence,
    pub theta: Congruence,
    pub theta_prime: Congruence,
    pub iso: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyFailure {
    pub theta: Congruence,
    pub sigma: Congruence,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CbsPropertyVerdict {
    pub kind: OperatorKind,
    pub holds: bool,
    pub nontrivial: bool,
    pub self_quotients: Vec<SelfQuotient>,
    pub failures: Vec<PropertyFailure>,
    pub correspondences: Vec<Corresp>,
}

fn self_quotients(alg: &FiniteAlgebra, k: &[Congruence], budget: &Budget) -> Result<Vec<SelfQuotient>> {
    let mut out = Vec::new();
    for theta in k {
        let q = quotient_algebra(alg, theta)?;
        if let Some(iso) = isomorphic(alg, &q.algebra, budget)? {
            out.push(SelfQuotient {
                theta: theta.clone(),
                iso,
            });
        }
    }
    Ok(out)
}

/// Whether every `σ ∈ K(A)` below some `θ ∈ K(A)` with `A ≅ A/θ` also has
/// `A ≅ A/σ`.
pub fn cbs_property_check(alg: &FiniteAlgebra, kind: &OperatorKind, budget: &Budget) -> Result<CbsPropertyVerdict> {
    let k = operator_eval(alg, kind, budget)?;
    let selfq = self_quotients(alg, &k, budget)?;
    let mut failures = Vec::new();
    let mut correspondences = Vec::new();
    for sq in &selfq {
        for sigma in k.iter().filter(|s| s.leq(&sq.theta).unwrap_or(false)) {
            let q = quotient_algebra(alg, sigma)?;
            if isomorphic(alg, &q.algebra, budget)?.is_none() {
                failures.push(PropertyFailure {
                    theta: sq.theta.clone(),
                    sigma: sigma.clone(),
                });
            }
        }
        for sigma in k.iter().filter(|s| s.leq(&sq.theta).unwrap_or(false)) {
            let q = quotient_algebra(alg, sigma)?;
            let theta_prime = quotient_down(alg, sigma, &sq.theta)?;
            let qq = quotient_algebra(&q.algebra, &theta_prime)?;
            correspondences.push(Corresp {
                sigma: sigma.clone(),
                theta: sq.theta.clone(),
                iso: isomorphic(alg, &qq.algebra, budget)?,
                theta_prime,
            });
        }
    }
    Ok(CbsPropertyVerdict {
        kind: kind.clone(),
        holds: failures.is_empty(),
        nontrivial: selfq.iter().any(|s| !s.theta.is_identity()),
        self_quotients: selfq,
        failures,
        correspondences,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartnerResult {
    pub partner: String,
    pub a_is_quotient_of_b: bool,
    pub b_is_quotient_of_a: bool,
    pub isomorphic: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DefinitionVerdict {
    pub holds: bool,
    pub partners: Vec<PartnerResult>,
}

fn is_k_quotient(
    target: &FiniteAlgebra,
    of: &FiniteAlgebra,
    kind: &OperatorKind,
    budget: &Budget,
) -> Result<bool> {
    for theta in operator_eval(of, kind, budget)? {
        if theta.block_count() != target.size() {
            continue;
        }
        if isomorphic(&quotient_algebra(of, &theta)?.algebra, target, budget)?.is_some() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The CBS property in its definition form, tested against the given
/// partners: `A ≅ B/θ_B` and `B ≅ A/θ_A` with `θ`s in `K` imply `A ≅ B`.
/// Partners with a different signature are skipped.
pub fn cbs1_definition_check(
    alg: &FiniteAlgebra,
    partners: &[FiniteAlgebra],
    kind: &OperatorKind,
    budget: &Budget,
) -> Result<DefinitionVerdict> {
    let mut out = Vec::new();
    for b in partners {
        if alg.same_signature(b).is_err() {
            continue;
        }
        let ab = is_k_quotient(alg, b, kind, budget)?;
        let ba = is_k_quotient(b, alg, kind, budget)?;
        let iso = isomorphic(alg, b, budget)?.is_some();
        out.push(PartnerResult {
            partner: b.name().to_string(),
            a_is_quotient_of_b: ab,
            b_is_quotient_of_a: ba,
            isomorphic: iso,
        });
    }
    Ok(DefinitionVerdict {
        holds: out.iter().all(|p| !(p.a_is_quotient_of_b && p.b_is_quotient_of_a) || p.isomorphic),
        partners: out,
    })
}

/// The isomorphisms that assemble `A ≅ A/ζ`-style decompositions from a
/// certified sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoChain {
    /// `A ≅ A/¬χ × A/χ`.
    pub a_splits: bool,
    /// `A/ζ ≅ A/¬χ × A/σ_ζ`.
    pub zeta_quotient_splits: bool,
    /// `A/χ ≅ A/f̂(χ)`.
    pub chi_shift: bool,
    /// `f̂(χ) = σ_ζ`.
    pub fhat_chi_is_sigma_zeta: bool,
}

impl IsoChain {
    pub fn holds(&self) -> bool {
        self.a_splits && self.zeta_quotient_splits && self.chi_shift && self.fhat_chi_is_sigma_zeta
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub zeta: Congruence,
    pub sequence: CbsSequenceState,
    pub sigma_zeta: Congruence,
    pub neg_sigma_zeta: Congruence,
    pub chi: Congruence,
    pub neg_chi: Congruence,
    pub iso_chain: IsoChain,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Attempt {
    pub zeta: Congruence,
    pub complement: Option<Congruence>,
    pub outcome: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CompleteVerdict {
    Certified,
    NotCertified,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CbsCompleteReport {
    pub kind: OperatorKind,
    pub boolean_k: bool,
    pub verdict: CompleteVerdict,
    pub bracket: Vec<Congruence>,
    pub attempts: Vec<Attempt>,
    pub certificate: Option<Certificate>,
}

/// `⊓^K` of `terms`: their meet if it lies in `K`, else the greatest
/// element of `K` below all of them when that is unique.
pub fn k_infimum(k: &[Congruence], terms: &[Congruence]) -> Result<Option<Congruence>> {
    let mut meet = terms.first().cloned().ok_or_else(|| Error::InvalidArgument("empty infimum".into()))?;
    for t in &terms[1..] {
        meet = meet.meet(t)?;
    }
    if k.contains(&meet) {
        return Ok(Some(meet));
    }
    let below: Vec<&Congruence> = k.iter().filter(|c| c.leq(&meet).unwrap_or(false)).collect();
    let maximal: Vec<&Congruence> = below
        .iter()
        .filter(|&&c| below.iter().all(|&d| !c.leq(d).unwrap_or(false) || c == d))
        .copied()
        .collect();
    Ok(match maximal.as_slice() {
        [one] => Some((*one).clone()),
        _ => None,
    })
}

fn iso_chain(
    alg: &FiniteAlgebra,
    fhat: &Fhat,
    zeta: &Congruence,
    sigma_zeta: &Congruence,
    chi: &Congruence,
    neg_chi: &Congruence,
    budget: &Budget,
) -> Result<IsoChain> {
    let a_splits = is_factor_pair(chi, neg_chi)
        && decomposition_witness(
            alg,
            &FactorPair {
                theta: neg_chi.clone(),
                complement: chi.clone(),
                meet_is_delta: true,
                compose_is_nabla: true,
            },
        )
        .is_ok();
    let q_neg_chi = quotient_algebra(alg, neg_chi)?.algebra;
    let q_sz = quotient_algebra(alg, sigma_zeta)?.algebra;
    let prod = direct_product(&q_neg_chi, &q_sz)?.algebra;
    let q_zeta = quotient_algebra(alg, zeta)?.algebra;
    let zeta_quotient_splits = isomorphic(&q_zeta, &prod, budget)?.is_some();
    let f_chi = fhat.apply(chi)?;
    let chi_shift = isomorphic(
        &quotient_algebra(alg, chi)?.algebra,
        &quotient_algebra(alg, &f_chi)?.algebra,
        budget,
    )?
    .is_some();
    Ok(IsoChain {
        a_splits,
        zeta_quotient_splits,
        chi_shift,
        fhat_chi_is_sigma_zeta: f_chi == *sigma_zeta,
    })
}

/// Searches `ζ ∈ ⟨σ⟩_θ` and a CBS-sequence witnessing CBS-completeness.
/// For Boolean `K` only the infimum condition is required.
pub fn cbs_complete_check(
    fhat: &Fhat,
    sigma: &Congruence,
    kind: &OperatorKind,
    budget: &Budget,
) -> Result<CbsCompleteReport> {
    let alg = fhat.algebra();
    let k = operator_eval(alg, kind, budget)?;
    if !k.contains(sigma) {
        return Err(Error::InvalidArgument(format!("sigma {sigma} is not in K(A)")));
    }
    if let Some((x, y)) = sigma.not_below_witness(fhat.theta()) {
        return Err(Error::NotAbove { x, y });
    }
    let boolean_k = kind.is_boolean_on(alg, budget)?;
    let bracket = sigma_bracket(alg, fhat.theta(), sigma, kind, budget)?;
    let mut attempts = Vec::new();
    let nabla = Congruence::total(alg);

    for zeta in &bracket {
        let mut choice = 0;
        loop {
            let seq = match cbs_sequence(fhat, zeta, kind, &ComplementChoice::Index(choice), DEFAULT_BOUND, budget) {
                Ok(s) => s,
                Err(Error::NoComplement(msg)) => {
                    if choice == 0 {
                        attempts.push(Attempt {
                            zeta: zeta.clone(),
                            complement: None,
                            outcome: msg,
                        });
                    }
                    break;
                }
                Err(e) => return Err(e),
            };
            choice += 1;
            let mut attempt = Attempt {
                zeta: zeta.clone(),
                complement: Some(seq.chosen_complement.clone()),
                outcome: String::new(),
            };
            let Some(sigma_zeta) = k_infimum(&k, &seq.d[1..])? else {
                attempt.outcome = "infimum of d_n does not exist in K(A)".into();
                attempts.push(attempt);
                continue;
            };
            let neg_zeta = &seq.neg_odd[0];
            let chi = neg_zeta.meet(&sigma_zeta)?;
            let neg_candidates: Vec<&Congruence> = k
                .iter()
                .filter(|c| is_factor_pair(&sigma_zeta, c))
                .filter(|c| {
                    let neg_chi = c.join(zeta).unwrap_or_else(|_| nabla.clone());
                    boolean_k || (k.contains(&chi) && k.contains(&neg_chi) && is_factor_pair(&chi, &neg_chi))
                })
                .collect();
            let Some(neg_sigma_zeta) = neg_candidates.first().map(|c| (*c).clone()) else {
                attempt.outcome = "no complement of sigma_zeta meeting the factor conditions".into();
                attempts.push(attempt);
                continue;
            };
            let neg_chi = neg_sigma_zeta.join(zeta)?;
            let chain = iso_chain(alg, fhat, zeta, &sigma_zeta, &chi, &neg_chi, budget)?;
            attempt.outcome = if chain.holds() {
                "certified".into()
            } else {
                "isomorphism chain incomplete".into()
            };
            attempts.push(attempt);
            return Ok(CbsCompleteReport {
                kind: kind.clone(),
                boolean_k,
                verdict: CompleteVerdict::Certified,
                bracket: bracket.clone(),
                attempts,
                certificate: Some(Certificate {
                    zeta: zeta.clone(),
                    sequence: seq,
                    sigma_zeta,
                    neg_sigma_zeta,
                    chi,
                    neg_chi,
                    iso_chain: chain,
                }),
            });
        }
    }
    Ok(CbsCompleteReport {
        kind: kind.clone(),
        boolean_k,
        verdict: CompleteVerdict::NotCertified,
        bracket,
        attempts,
        certificate: None,
    })
}

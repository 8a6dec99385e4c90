use serde::Serialize;

use super::operator::{operator_eval, OperatorKind};
use crate::algebra::{iso_search, quotient_algebra, FiniteAlgebra, Homomorphism, IsoMode};
use crate::budget::Budget;
use crate::congruence::{pullback, pushforward, quotient_down, quotient_up, Congruence};
use crate::error::{Error, Result};
use crate::structure::is_factor_pair;

/// Default index bound for sequence computations.
pub const DEFAULT_BOUND: usize = 32;

/// `f̂ = u_θ⁻¹ f_*` for a verified isomorphism `f: A → A/θ`.
#[derive(Debug, Clone)]
pub struct Fhat {
    alg: FiniteAlgebra,
    theta: Congruence,
    f: Homomorphism,
}

impl Fhat {
    pub fn new(alg: &FiniteAlgebra, f: &Homomorphism, theta: &Congruence) -> Result<Fhat> {
        let q = quotient_algebra(alg, theta)?;
        if f.source().fingerprint() != alg.fingerprint() || f.target().fingerprint() != q.algebra.fingerprint() {
            return Err(Error::NotAnIsomorphism("map is not between A and A/theta".into()));
        }
        f.verify()?;
        if !f.is_isomorphism() {
            return Err(Error::NotAnIsomorphism(format!("{:?} is not bijective", f.map())));
        }
        Ok(Fhat {
            alg: alg.clone(),
            theta: theta.clone(),
            f: f.clone(),
        })
    }

    /// Finds some isomorphism `A → A/θ`, if any.
    pub fn search(alg: &FiniteAlgebra, theta: &Congruence, budget: &Budget) -> Result<Option<Fhat>> {
        let q = quotient_algebra(alg, theta)?;
        match iso_search(alg, &q.algebra, IsoMode::First, budget)?.into_iter().next() {
            Some(f) => Ok(Some(Fhat::new(alg, &f, theta)?)),
            None => Ok(None),
        }
    }

    pub fn theta(&self) -> &Congruence {
        &self.theta
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.alg
    }

    pub fn map(&self) -> &Homomorphism {
        &self.f
    }

    /// `f_*(σ)` as a congruence of `A/θ`.
    pub fn push(&self, sigma: &Congruence) -> Result<Congruence> {
        pushforward(&self.f, sigma)
    }

    pub fn apply(&self, sigma: &Congruence) -> Result<Congruence> {
        quotient_up(&self.alg, &self.theta, &self.push(sigma)?)
    }

    /// `f̂⁻¹(ρ)`, extended to arbitrary `ρ` as `f*((ρ∨θ)/θ)`.
    pub fn inverse(&self, rho: &Congruence) -> Result<Congruence> {
        let down = quotient_down(&self.alg, &self.theta, &rho.join(&self.theta)?)?;
        pullback(&self.f, &down)
    }

    /// Checks that `f̂` is an order isomorphism from `elements` onto their
    /// images above `θ`, returning the first offending pair.
    pub fn order_iso_failure(&self, elements: &[Congruence]) -> Result<Option<(Congruence, Congruence)>> {
        let images: Vec<Congruence> = elements.iter().map(|s| self.apply(s)).collect::<Result<_>>()?;
        for (i, a) in elements.iter().enumerate() {
            if !self.theta.leq(&images[i])? || self.inverse(&images[i])? != *a {
                return Ok(Some((a.clone(), a.clone())));
            }
            for (j, b) in elements.iter().enumerate() {
                if a.leq(b)? != images[i].leq(&images[j])? {
                    return Ok(Some((a.clone(), b.clone())));
                }
            }
        }
        Ok(None)
    }
}

pub fn f_hat(alg: &FiniteAlgebra, f: &Homomorphism, theta: &Congruence, sigma: &Congruence) -> Result<Congruence> {
    Fhat::new(alg, f, theta)?.apply(sigma)
}

/// `⟨σ⟩_θ = {ζ ∈ [Δ,θ] ∩ K(A): A/σ ≅ A/ζ}`.
pub fn sigma_bracket(
    alg: &FiniteAlgebra,
    theta: &Congruence,
    sigma: &Congruence,
    kind: &OperatorKind,
    budget: &Budget,
) -> Result<Vec<Congruence>> {
    let qs = quotient_algebra(alg, sigma)?;
    let mut out = Vec::new();
    for zeta in operator_eval(alg, kind, budget)? {
        if !zeta.leq(theta)? || zeta.block_count() != sigma.block_count() {
            continue;
        }
        let qz = quotient_algebra(alg, &zeta)?;
        if !iso_search(&qs.algebra, &qz.algebra, IsoMode::First, budget)?.is_empty() {
            out.push(zeta);
        }
    }
    Ok(out)
}

/// How `¬f̂(ζ)` is picked among its complements in `K(A)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ComplementChoice {
    /// The canonically least factor complement.
    Least,
    /// The `i`-th factor complement in canonical order.
    Index(usize),
}

/// The sequences `σₙ`, `θₙ`, `¬σ_{2n+1}` and `dₙ` for one `ζ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CbsSequenceState {
    pub theta: Congruence,
    pub iso: Vec<usize>,
    pub zeta: Congruence,
    /// `σ₀ … σ_N`.
    pub sigma: Vec<Congruence>,
    /// `θ₁ … θ_N` on `A/θ`; entry `i` is `θ_{i+1}`.
    pub thetas: Vec<Congruence>,
    /// All factor complements of `f̂(ζ)` in `K(A)`.
    pub complement_candidates: Vec<Congruence>,
    pub chosen_complement: Congruence,
    /// Entry `n` is `¬σ_{2n+1}`.
    pub neg_odd: Vec<Congruence>,
    /// Entry `n` is `dₙ = σ_{2n} ∨ ¬σ_{2n+1}`.
    pub d: Vec<Congruence>,
    /// Least `n` with `σ_{n+1} = σₙ` and `θ_{n+1} = θₙ`.
    pub stabilized_at: Option<usize>,
}

impl CbsSequenceState {
    pub fn sigma_at(&self, n: usize) -> Option<&Congruence> {
        self.sigma.get(n)
    }

    pub fn theta_at(&self, n: usize) -> Option<&Congruence> {
        n.checked_sub(1).and_then(|i| self.thetas.get(i))
    }
}

/// Builds the CBS-sequence for `ζ ⊆ θ`, computing indices `0..=bound`.
pub fn cbs_sequence(
    fhat: &Fhat,
    zeta: &Congruence,
    kind: &OperatorKind,
    choice: &ComplementChoice,
    bound: usize,
    budget: &Budget,
) -> Result<CbsSequenceState> {
    let alg = fhat.algebra();
    let theta = fhat.theta();
    if let Some((x, y)) = zeta.not_below_witness(theta) {
        return Err(Error::NotAbove { x, y });
    }
    let bound = bound.max(5);
    let mut sigma = vec![Congruence::identity(alg), zeta.clone()];
    let mut thetas = vec![fhat.push(&sigma[0])?];
    while sigma.len() <= bound {
        let n = sigma.len() - 1;
        sigma.push(quotient_up(alg, theta, &thetas[n - 1])?);
        thetas.push(fhat.push(&sigma[n])?);
    }
    let stabilized_at = (1..bound).find(|&n| sigma[n + 1] == sigma[n] && thetas[n] == thetas[n - 1]);
    if stabilized_at.is_none() {
        return Err(Error::NoStabilization(bound));
    }

    let k = operator_eval(alg, kind, budget)?;
    let fz = fhat.apply(zeta)?;
    let complement_candidates: Vec<Congruence> = k.iter().filter(|c| is_factor_pair(&fz, c)).cloned().collect();
    let idx = match choice {
        ComplementChoice::Least => 0,
        ComplementChoice::Index(i) => *i,
    };
    let chosen = complement_candidates
        .get(idx)
        .cloned()
        .ok_or_else(|| Error::NoComplement(format!("no factor complement of {fz} in K(A) at index {idx}")))?;

    let mut neg_odd = vec![fhat.inverse(&chosen)?];
    while 2 * neg_odd.len() < bound {
        let next = fhat.apply(neg_odd.last().unwrap())?;
        neg_odd.push(next);
    }
    let d = neg_odd
        .iter()
        .enumerate()
        .map(|(n, neg)| sigma[2 * n].join(neg))
        .collect::<Result<Vec<_>>>()?;

    Ok(CbsSequenceState {
        theta: theta.clone(),
        iso: fhat.map().map().to_vec(),
        zeta: zeta.clone(),
        sigma,
        thetas,
        complement_candidates,
        chosen_complement: chosen,
        neg_odd,
        d,
        stabilized_at,
    })
}

/// Checks the structural laws of a computed sequence and returns a
/// description of each failure.
pub fn sequence_law_failures(fhat: &Fhat, s: &CbsSequenceState) -> Result<Vec<String>> {
    let alg = fhat.algebra();
    let nabla = Congruence::total(alg);
    let mut out = Vec::new();
    if !s.sigma[0].is_identity() {
        out.push("sigma_0 is not the identity".into());
    }
    if s.sigma[1] != s.zeta {
        out.push("sigma_1 differs from zeta".into());
    }
    if s.thetas[0] != quotient_down(alg, fhat.theta(), fhat.theta())? {
        out.push("theta_1 differs from theta/theta".into());
    }
    for n in 1..s.sigma.len() - 1 {
        if s.sigma[n + 1] != quotient_up(alg, fhat.theta(), &s.thetas[n - 1])? {
            out.push(format!("sigma_{} is not the lift of theta_{n}", n + 1));
        }
        if n < s.thetas.len() && s.thetas[n] != fhat.push(&s.sigma[n])? {
            out.push(format!("theta_{} is not f_*(sigma_{n})", n + 1));
        }
    }
    for n in 0..s.sigma.len().saturating_sub(2) {
        if fhat.apply(&s.sigma[n])? != s.sigma[n + 2] {
            out.push(format!("f_hat(sigma_{n}) != sigma_{}", n + 2));
        }
    }
    let strict = !s.zeta.is_identity() && s.zeta != *fhat.theta();
    let stop = s.stabilized_at.unwrap_or(s.sigma.len() - 1);
    for n in 0..s.sigma.len() - 1 {
        if !s.sigma[n].leq(&s.sigma[n + 1])? {
            out.push(format!("sigma_{n} not below sigma_{}", n + 1));
        } else if strict && n < stop && s.sigma[n] == s.sigma[n + 1] && !s.sigma[n].is_total() {
            out.push(format!("sigma_{n} = sigma_{} below the stabilization index", n + 1));
        }
    }
    let fz = fhat.apply(&s.zeta)?;
    if s.neg_odd[0] != fhat.inverse(&s.chosen_complement)? || !is_factor_pair(&fz, &s.chosen_complement) {
        out.push("neg sigma_1 is not f_hat^-1 of a complement of f_hat(zeta)".into());
    }
    for n in 0..s.neg_odd.len() {
        if n + 1 < s.neg_odd.len() && s.neg_odd[n + 1] != fhat.apply(&s.neg_odd[n])? {
            out.push(format!("neg sigma_{} != f_hat(neg sigma_{})", 2 * n + 3, 2 * n + 1));
        }
        if s.sigma[2 * n + 1].join(&s.neg_odd[n])? != nabla {
            out.push(format!("sigma_{0} v neg sigma_{0} is not total", 2 * n + 1));
        }
    }
    for m in 0..s.d.len() {
        for n in m + 1..s.d.len() {
            if s.d[m].join(&s.d[n])? != nabla {
                out.push(format!("d_{m} v d_{n} is not total"));
            }
        }
        if m + 1 < s.d.len() && fhat.apply(&s.d[m])? != s.d[m + 1] {
            out.push(format!("f_hat(d_{m}) != d_{}", m + 1));
        }
    }
    Ok(out)
}

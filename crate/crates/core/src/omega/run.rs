use serde::Serialize;

use super::infimum::{countable_infimum, AffineFamily, InfimumCertificate};
use super::pset::PeriodicSet;
use crate::algebra::FiniteAlgebra;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::structure::factor_congruences;

/// `θ_S` on the countable power of a directly indecomposable base: the
/// coordinates in `S` are collapsed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct OmegaCongruence {
    pub set: PeriodicSet,
}

impl OmegaCongruence {
    pub fn new(set: PeriodicSet) -> OmegaCongruence {
        OmegaCongruence { set }
    }

    pub fn identity() -> OmegaCongruence {
        OmegaCongruence::new(PeriodicSet::empty())
    }

    pub fn total() -> OmegaCongruence {
        OmegaCongruence::new(PeriodicSet::naturals())
    }

    pub fn leq(&self, other: &OmegaCongruence) -> bool {
        self.set.is_subset(&other.set)
    }

    pub fn meet(&self, other: &OmegaCongruence) -> OmegaCongruence {
        OmegaCongruence::new(self.set.intersect(&other.set))
    }

    pub fn join(&self, other: &OmegaCongruence) -> OmegaCongruence {
        OmegaCongruence::new(self.set.union(&other.set))
    }

    /// The factor complement `θ_{ℕ∖S}`.
    pub fn complement(&self) -> OmegaCongruence {
        OmegaCongruence::new(self.set.complement())
    }

    /// Two such congruences always permute, so they form a factor pair
    /// exactly when their sets partition ℕ.
    pub fn is_factor_pair(&self, other: &OmegaCongruence) -> bool {
        self.set.is_disjoint(&other.set) && self.set.union(&other.set).is_naturals()
    }
}

/// The shift `B → B/θ_{[0,k)}` moving coordinate `i` to `i + k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ShiftIso {
    pub k: usize,
}

impl ShiftIso {
    pub fn new(k: usize) -> Result<ShiftIso> {
        if k == 0 {
            return Err(Error::InvalidArgument("shift amount must be at least 1".into()));
        }
        Ok(ShiftIso { k })
    }

    /// `θ = θ_{[0,k)}`.
    pub fn theta(&self) -> PeriodicSet {
        PeriodicSet::range(0, self.k)
    }

    /// `f_*(θ_S)` on `B/θ`, indexed by the surviving coordinates `[k,∞)`.
    pub fn push(&self, s: &PeriodicSet) -> PeriodicSet {
        s.shift(self.k)
    }

    /// `f̂(S) = (S + k) ∪ [0,k)`.
    pub fn fhat(&self, s: &PeriodicSet) -> PeriodicSet {
        self.push(s).union(&self.theta())
    }

    /// `f̂⁻¹(S) = (S ∖ [0,k)) − k`, defined on all of `2^ℕ`.
    pub fn fhat_inverse(&self, s: &PeriodicSet) -> PeriodicSet {
        s.unshift(self.k)
    }
}

pub fn shift_fhat(iso: &ShiftIso, s: &PeriodicSet) -> PeriodicSet {
    iso.fhat(s)
}

/// One link of the isomorphism chain, stated on index sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainStep {
    pub name: String,
    pub statement: String,
    pub holds: bool,
}

/// A symbolic CBS-sequence on the countable power together with the
/// certificate for its infimum and decomposition chain.
#[derive(Debug, Clone, Serialize)]
pub struct OmegaRun {
    #[serde(skip)]
    pub base: FiniteAlgebra,
    pub base_name: String,
    pub base_size: usize,
    pub k: usize,
    pub theta: PeriodicSet,
    pub zeta: PeriodicSet,
    /// `σ₀ … σ_N`.
    pub sigma: Vec<PeriodicSet>,
    /// `θ₁ … θ_N`, as sets of coordinates of `B/θ` (which are `≥ k`).
    pub thetas: Vec<PeriodicSet>,
    /// Entry `n` is `¬σ_{2n+1}`.
    pub neg_odd: Vec<PeriodicSet>,
    /// Entry `n` is `dₙ`.
    pub d: Vec<PeriodicSet>,
    pub infimum: InfimumCertificate,
    pub sigma_zeta: PeriodicSet,
    pub neg_sigma_zeta: PeriodicSet,
    pub chi: PeriodicSet,
    pub neg_chi: PeriodicSet,
    pub chain: Vec<ChainStep>,
    pub note: String,
}

impl OmegaRun {
    pub fn certified(&self) -> bool {
        self.chain.iter().all(|s| s.holds)
    }

    pub fn shift(&self) -> ShiftIso {
        ShiftIso { k: self.k }
    }
}

/// Runs the CBS recursion for `B = A^ℕ`, `f` the shift by `k` and `ζ ⊆ [0,k)`.
pub fn omega_cbs_run(base: &FiniteAlgebra, k: usize, zeta: &PeriodicSet, bound: usize, budget: &Budget) -> Result<OmegaRun> {
    let iso = ShiftIso::new(k)?;
    if base.size() < 2 || factor_congruences(base, budget)?.len() != 2 {
        return Err(Error::Decomposable(format!(
            "base algebra `{}` is not directly indecomposable",
            base.name()
        )));
    }
    let theta = iso.theta();
    if !zeta.is_subset(&theta) {
        return Err(Error::InvalidArgument(format!("zeta {} is not inside [0,{k})", zeta.describe())));
    }
    let bound = bound.max(6);
    let mut sigma = vec![PeriodicSet::empty(), zeta.clone()];
    let mut thetas = vec![iso.push(&sigma[0])];
    while sigma.len() <= bound {
        let n = sigma.len() - 1;
        sigma.push(thetas[n - 1].union(&theta));
        thetas.push(iso.push(&sigma[n]));
    }
    let mut neg_odd = vec![iso.fhat_inverse(&iso.fhat(zeta).complement())];
    while 2 * neg_odd.len() < bound {
        let next = iso.fhat(neg_odd.last().unwrap());
        neg_odd.push(next);
    }
    let d: Vec<PeriodicSet> = neg_odd
        .iter()
        .enumerate()
        .map(|(n, neg)| sigma[2 * n].union(neg))
        .collect();

    let family = AffineFamily::shift_union(d[1].clone(), k, theta.clone());
    for (n, dn) in d.iter().enumerate().skip(1) {
        if family.term(n) != *dn {
            return Err(Error::InfimumNotRepresentable(format!("d_{n} does not follow the shift recurrence")));
        }
    }
    let infimum = countable_infimum(&family)?;
    let sigma_zeta = infimum.set.clone();
    let neg_sigma_zeta = sigma_zeta.complement();
    let neg_zeta = &neg_odd[0];
    let chi = neg_zeta.intersect(&sigma_zeta);
    let neg_chi = zeta.union(&neg_sigma_zeta);

    let fchi = iso.fhat(&chi);
    let oc = OmegaCongruence::new;
    let chain = vec![
        ChainStep {
            name: "split".into(),
            statement: "B ≅ B/¬χ × B/χ: χ and ¬χ partition ℕ".into(),
            holds: oc(chi.clone()).is_factor_pair(&oc(neg_chi.clone())),
        },
        ChainStep {
            name: "zeta_quotient".into(),
            statement: "B/ζ ≅ B/¬χ × B/σ_ζ: ℕ∖ζ is the disjoint union of χ and ℕ∖σ_ζ".into(),
            holds: chi.is_disjoint(&neg_sigma_zeta) && chi.union(&neg_sigma_zeta) == zeta.complement(),
        },
        ChainStep {
            name: "shift".into(),
            statement: "B/χ ≅ B/f̂(χ): ℕ∖f̂(χ) = (ℕ∖χ) + k".into(),
            holds: fchi.complement() == chi.complement().shift(k),
        },
        ChainStep {
            name: "image".into(),
            statement: "f̂(χ) = σ_ζ".into(),
            holds: fchi == sigma_zeta,
        },
        ChainStep {
            name: "factor_conditions".into(),
            statement: "(σ_ζ, ¬σ_ζ) and (¬ζ ∩ σ_ζ, ζ ∪ ¬σ_ζ) are factor pairs".into(),
            holds: oc(sigma_zeta.clone()).is_factor_pair(&oc(neg_sigma_zeta.clone()))
                && oc(chi.clone()).is_factor_pair(&oc(neg_chi.clone())),
        },
    ];

    Ok(OmegaRun {
        base_name: base.name().to_string(),
        base_size: base.size(),
        base: base.clone(),
        k,
        theta,
        zeta: zeta.clone(),
        sigma,
        thetas,
        neg_odd,
        d,
        infimum,
        sigma_zeta,
        neg_sigma_zeta,
        chi,
        neg_chi,
        chain,
        note: "factor congruences are represented by eventually periodic index sets only".into(),
    })
}

/// Checks the sequence laws of a symbolic run exactly, returning a
/// description of each failure.
pub fn omega_law_failures(run: &OmegaRun) -> Vec<String> {
    let iso = run.shift();
    let nat = PeriodicSet::naturals();
    let s = &run.sigma;
    let mut out = Vec::new();
    if !s[0].is_empty() {
        out.push("sigma_0 is not empty".into());
    }
    if s[1] != run.zeta {
        out.push("sigma_1 differs from zeta".into());
    }
    if !run.thetas[0].is_empty() {
        out.push("theta_1 is not the identity of B/theta".into());
    }
    for n in 1..s.len() - 1 {
        if s[n + 1] != run.thetas[n - 1].union(&run.theta) {
            out.push(format!("sigma_{} is not the lift of theta_{n}", n + 1));
        }
        if n < run.thetas.len() && run.thetas[n] != iso.push(&s[n]) {
            out.push(format!("theta_{} is not f_*(sigma_{n})", n + 1));
        }
    }
    for n in 0..s.len().saturating_sub(2) {
        if iso.fhat(&s[n]) != s[n + 2] {
            out.push(format!("f_hat(sigma_{n}) != sigma_{}", n + 2));
        }
    }
    let strict = !run.zeta.is_empty() && run.zeta != run.theta;
    for n in 0..s.len() - 1 {
        if !s[n].is_subset(&s[n + 1]) {
            out.push(format!("sigma_{n} not below sigma_{}", n + 1));
        } else if strict && s[n] == s[n + 1] {
            out.push(format!("sigma_{n} = sigma_{}", n + 1));
        }
    }
    if run.neg_odd[0] != iso.fhat_inverse(&iso.fhat(&run.zeta).complement()) {
        out.push("neg sigma_1 is not f_hat^-1 of the complement of f_hat(zeta)".into());
    }
    for n in 0..run.neg_odd.len() {
        if n + 1 < run.neg_odd.len() && run.neg_odd[n + 1] != iso.fhat(&run.neg_odd[n]) {
            out.push(format!("neg sigma_{} != f_hat(neg sigma_{})", 2 * n + 3, 2 * n + 1));
        }
        if s[2 * n + 1].union(&run.neg_odd[n]) != nat {
            out.push(format!("sigma_{0} v neg sigma_{0} is not total", 2 * n + 1));
        }
        if run.d[n] != s[2 * n].union(&run.neg_odd[n]) {
            out.push(format!("d_{n} differs from sigma_{} v neg sigma_{}", 2 * n, 2 * n + 1));
        }
    }
    for m in 0..run.d.len() {
        for n in m + 1..run.d.len() {
            if run.d[m].union(&run.d[n]) != nat {
                out.push(format!("d_{m} v d_{n} is not total"));
            }
        }
        if m + 1 < run.d.len() && iso.fhat(&run.d[m]) != run.d[m + 1] {
            out.push(format!("f_hat(d_{m}) != d_{}", m + 1));
        }
    }
    for (n, dn) in run.d.iter().enumerate().skip(1) {
        if !run.sigma_zeta.is_subset(dn) {
            out.push(format!("sigma_zeta not below d_{n}"));
        }
    }
    out
}

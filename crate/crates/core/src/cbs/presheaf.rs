use serde::Serialize;

use super::operator::{operator_eval, OperatorKind};
use crate::algebra::{iso_search, quotient_algebra, FiniteAlgebra, IsoMode};
use crate::budget::Budget;
use crate::congruence::{all_congruences, pullback, quotient_down, Congruence};
use crate::error::Result;
use crate::structure::{bfc_check_of, FactorCongruences, FactorEntry};
use crate::structure::is_factor_pair;

/// One violated instance of a presheaf condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub sigma: Option<Congruence>,
    pub theta: Option<Congruence>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionResult {
    pub name: String,
    pub checked: usize,
    pub passed: bool,
    pub violations: Vec<Violation>,
}

impl ConditionResult {
    fn new(name: &str) -> ConditionResult {
        ConditionResult {
            name: name.into(),
            checked: 0,
            passed: true,
            violations: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, sigma: Option<&Congruence>, theta: Option<&Congruence>, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.passed = false;
            self.violations.push(Violation {
                sigma: sigma.cloned(),
                theta: theta.cloned(),
                detail: detail(),
            });
        }
    }
}

/// Which optional conditions to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PresheafOptions {
    pub factor: bool,
    pub boolean: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PresheafReport {
    pub kind: OperatorKind,
    pub k_size: usize,
    pub conditions: Vec<ConditionResult>,
    pub notes: Vec<String>,
}

impl PresheafReport {
    pub fn passed(&self) -> bool {
        self.conditions.iter().all(|c| c.passed)
    }

    pub fn condition(&self, name: &str) -> Option<&ConditionResult> {
        self.conditions.iter().find(|c| c.name == name)
    }
}

/// Checks the congruences-operator and presheaf conditions for `K` on `A`
/// and its quotients by members of `K(A)`.
///
/// * `delta_and_quotients`: `Δ ∈ K(A)` and each `A/σ` can be built.
/// * `correspondence`: `θ ∈ K(A)∩[σ,∇]` iff `θ/σ ∈ K(A/σ)`.
/// * `iso_invariance`: automorphisms permute `K(A)` under pullback.
/// * `factor` (optional): `K(A) ⊆ FC(A)`, complements exist in `K(A)`, and
///   `(θ/σ, (¬θ∨σ)/σ)` is a factor pair in `K(A/σ)` for every choice of `¬θ`.
/// * `boolean` (optional): `K(A)` is a Boolean sublattice of `Con(A)`.
pub fn presheaf_check(
    alg: &FiniteAlgebra,
    kind: &OperatorKind,
    opts: PresheafOptions,
    budget: &Budget,
) -> Result<PresheafReport> {
    let k = operator_eval(alg, kind, budget)?;
    let con = all_congruences(alg, budget)?;
    let delta = Congruence::identity(alg);

    let mut c1 = ConditionResult::new("delta_and_quotients");
    c1.record(k.contains(&delta), None, None, || "identity congruence not in K(A)".into());
    let mut quotients = Vec::new();
    for sigma in &k {
        let q = quotient_algebra(alg, sigma);
        c1.record(q.is_ok(), Some(sigma), None, || "quotient not constructible".into());
        if let Ok(q) = q {
            let kq = operator_eval(&q.algebra, kind, budget)?;
            quotients.push((sigma, kq));
        }
    }

    let mut c2 = ConditionResult::new("correspondence");
    for (sigma, kq) in &quotients {
        for theta in con.above(sigma) {
            let lhs = k.contains(&theta);
            let rhs = kq.contains(&quotient_down(alg, sigma, &theta)?);
            c2.record(lhs == rhs, Some(sigma), Some(&theta), || {
                format!("theta in K(A) is {lhs}, theta/sigma in K(A/sigma) is {rhs}")
            });
        }
    }

    let mut c_iso = ConditionResult::new("iso_invariance");
    for f in iso_search(alg, alg, IsoMode::All, budget)? {
        let mut image: Vec<Congruence> = k.iter().map(|t| pullback(&f, t)).collect::<Result<_>>()?;
        image.sort();
        c_iso.record(image == k, None, None, || format!("automorphism {:?} does not preserve K(A)", f.map()));
    }

    let mut conditions = vec![c1, c2, c_iso];
    let mut notes = vec!["iso_invariance is checked on automorphisms only".to_string()];

    if opts.factor {
        let mut c3 = ConditionResult::new("factor");
        for theta in &k {
            let comps: Vec<&Congruence> = k.iter().filter(|c| is_factor_pair(theta, c)).collect();
            c3.record(!comps.is_empty(), None, Some(theta), || "no factor complement inside K(A)".into());
        }
        for (sigma, kq) in &quotients {
            for theta in k.iter().filter(|t| sigma.leq(t).unwrap_or(false)) {
                for neg in k.iter().filter(|c| is_factor_pair(theta, c)) {
                    let a = quotient_down(alg, sigma, theta)?;
                    let b = quotient_down(alg, sigma, &neg.join(sigma)?)?;
                    let ok = is_factor_pair(&a, &b) && kq.contains(&a) && kq.contains(&b);
                    c3.record(ok, Some(sigma), Some(theta), || {
                        format!("(theta/sigma, (neg theta v sigma)/sigma) fails for neg theta = {neg}")
                    });
                }
            }
        }
        conditions.push(c3);
    }

    if opts.boolean {
        let mut c4 = ConditionResult::new("boolean");
        let entries = k
            .iter()
            .map(|t| FactorEntry {
                theta: t.clone(),
                complements: k.iter().filter(|c| is_factor_pair(t, c)).cloned().collect(),
            })
            .filter(|e| !e.complements.is_empty())
            .collect::<Vec<_>>();
        let all_have = entries.len() == k.len();
        let verdict = bfc_check_of(&FactorCongruences { entries })?;
        c4.record(all_have && verdict.holds, None, None, || match verdict.counterexample {
            Some(c) => serde_json::to_string(&c).unwrap_or_default(),
            None => "an element of K(A) has no complement".into(),
        });
        conditions.push(c4);
    }

    if k.len() == 1 {
        notes.push("K(A) is trivial".into());
    }
    Ok(PresheafReport {
        kind: kind.clone(),
        k_size: k.len(),
        conditions,
        notes,
    })
}

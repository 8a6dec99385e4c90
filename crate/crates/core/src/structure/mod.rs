//! Factor congruences, lattice centers and central elements.

mod center;
mod church;
mod factor;

use serde::Serialize;

pub use center::{
    center_of_lattice, center_restricts, is_central, neutrality_failure, CenterEntry,
    CenterReport, IntervalCenter,
};
pub use church::{church_centers, ChurchReport};
pub use factor::{
    bfc_check, bfc_check_of, check_factor_pair, decomposition_witness, factor_congruences,
    factor_congruences_of, BfcCounterexample, BfcVerdict, FactorCheck, FactorCongruences,
    FactorEntry, FactorPair, FactorRefutation,
};
pub(crate) use factor::is_factor_pair;

use crate::algebra::FiniteAlgebra;
use crate::budget::Budget;
use crate::congruence::{all_congruences, Congruence, CongruenceLattice};
use crate::error::Result;

/// `Z(Con(A))` as congruences.
pub fn center_congruences(con: &CongruenceLattice) -> Vec<Congruence> {
    center_of_lattice(con.lattice())
        .central
        .into_iter()
        .map(|i| con.get(i).clone())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComposeCheck {
    pub theta: Congruence,
    pub complement: Congruence,
    pub compose_is_nabla: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZConReport {
    pub center: Vec<Congruence>,
    pub compose_checks: Vec<ComposeCheck>,
    /// Every central `θ` satisfies `θ ∘ ¬θ = ∇`.
    pub condition_holds: bool,
    pub factor_congruences: Vec<Congruence>,
    pub equals_fc: bool,
}

/// Computes `Z(Con(A))` and checks `θ ∘ ¬θ = ∇` for each central `θ`, where
/// `¬θ` is its complement in the center.
pub fn z_con_report(alg: &FiniteAlgebra, budget: &Budget) -> Result<ZConReport> {
    let con = all_congruences(alg, budget)?;
    let l = con.lattice();
    let report = center_of_lattice(l);
    let mut compose_checks = Vec::new();
    for &z in &report.central {
        let c = l
            .complements(z)
            .into_iter()
            .find(|&c| report.central.contains(&c))
            .expect("the center is a Boolean sublattice");
        let (rel, _) = con.get(z).compose(con.get(c))?;
        compose_checks.push(ComposeCheck {
            theta: con.get(z).clone(),
            complement: con.get(c).clone(),
            compose_is_nabla: rel.is_total(),
        });
    }
    let center = center_congruences(&con);
    let fc = factor_congruences_of(&con).elements();
    Ok(ZConReport {
        condition_holds: compose_checks.iter().all(|c| c.compose_is_nabla),
        equals_fc: center == fc,
        center,
        compose_checks,
        factor_congruences: fc,
    })
}

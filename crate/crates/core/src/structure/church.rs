use serde::Serialize;

use super::factor::is_factor_pair;
use crate::algebra::{for_each_tuple, Compiled, FiniteAlgebra, Term};
use crate::budget::Budget;
use crate::congruence::principal_congruence;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChurchReport {
    pub centers: Vec<usize>,
    /// For each center `e`, whether `θ(1,e)` and `θ(e,0)` form a factor pair.
    pub factor_cross_check: Vec<(usize, bool)>,
}

/// Tabulates `t(z,x,y)` on `A`; `vars` names the term's variables in that order.
fn tabulate(alg: &FiniteAlgebra, t: &Term, vars: [&str; 3]) -> Result<Vec<usize>> {
    let names: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
    let c = Compiled::new(alg, t, &names)?;
    let mut out = Vec::with_capacity(alg.size().pow(3));
    for_each_tuple(alg.size(), 3, |env| out.push(c.eval(alg, env)));
    Ok(out)
}

/// Elements `e` satisfying the central-element equations for the
/// if-then-else term `t`, after checking `t(1,x,y) = x` and `t(0,x,y) = y`.
pub fn church_centers(
    alg: &FiniteAlgebra,
    t: &Term,
    vars: [&str; 3],
    zero: usize,
    one: usize,
    budget: &Budget,
) -> Result<ChurchReport> {
    alg.check_element(zero)?;
    alg.check_element(one)?;
    let n = alg.size();
    let max_arity = alg.signature().ops().iter().map(|o| o.arity).max().unwrap_or(0);
    let needed = (n as u128).pow(3) + (n as u128).pow(2 * max_arity as u32 + 1);
    if needed > budget.max_evals as u128 {
        return Err(Error::Budget {
            what: "central element equations".into(),
            needed,
            limit: budget.max_evals as u128,
        });
    }
    let table = tabulate(alg, t, vars)?;
    let tt = |z: usize, x: usize, y: usize| table[(z * n + x) * n + y];
    for x in 0..n {
        for y in 0..n {
            if tt(one, x, y) != x {
                return Err(Error::NotChurch(format!("t(1,{x},{y}) = {} != {x}", tt(one, x, y))));
            }
            if tt(zero, x, y) != y {
                return Err(Error::NotChurch(format!("t(0,{x},{y}) = {} != {y}", tt(zero, x, y))));
            }
        }
    }
    let mut centers = Vec::new();
    for e in 0..n {
        if is_central(alg, &tt, e, zero, one) {
            centers.push(e);
        }
    }
    let mut factor_cross_check = Vec::new();
    for &e in &centers {
        let a = principal_congruence(alg, one, e)?;
        let b = principal_congruence(alg, e, zero)?;
        factor_cross_check.push((e, is_factor_pair(&a, &b)));
    }
    Ok(ChurchReport {
        centers,
        factor_cross_check,
    })
}

fn is_central(
    alg: &FiniteAlgebra,
    tt: &impl Fn(usize, usize, usize) -> usize,
    e: usize,
    zero: usize,
    one: usize,
) -> bool {
    let n = alg.size();
    if tt(e, one, zero) != e {
        return false;
    }
    for x in 0..n {
        if tt(e, x, x) != x {
            return false;
        }
        for y in 0..n {
            for z in 0..n {
                let mid = tt(e, x, z);
                if tt(e, tt(e, x, y), z) != mid || tt(e, x, tt(e, y, z)) != mid {
                    return false;
                }
            }
        }
    }
    for (op, sym) in alg.signature().ops().iter().enumerate() {
        let k = sym.arity;
        let mut ok = true;
        let mut mixed = vec![0; k];
        for_each_tuple(n, 2 * k, |ab| {
            if !ok {
                return;
            }
            let (a, b) = ab.split_at(k);
            for i in 0..k {
                mixed[i] = tt(e, a[i], b[i]);
            }
            ok = tt(e, alg.apply(op, a), alg.apply(op, b)) == alg.apply(op, &mixed);
        });
        if !ok {
            return false;
        }
    }
    true
}

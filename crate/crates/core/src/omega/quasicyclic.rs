use serde::Serialize;

use crate::algebra::{quotient_algebra, FiniteAlgebra, Homomorphism};
use crate::congruence::{principal_congruence, Congruence};
use crate::error::{Error, Result};

/// Largest truncation exponent accepted.
pub const MAX_EXPONENT: u32 = 10;
const MAX_ORDER: usize = 1024;

/// An element `a/pᵏ mod 1` of the quasi-cyclic group, kept reduced
/// (`p ∤ a`, or `(0, 0)`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct QcElement {
    pub num: u64,
    pub exp: u32,
}

/// `Z(p^∞)` with its truncations `Z(p^m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuasiCyclic {
    pub p: u64,
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

impl QuasiCyclic {
    pub fn new(p: u64) -> Result<QuasiCyclic> {
        if !is_prime(p) {
            return Err(Error::InvalidArgument(format!("{p} is not prime")));
        }
        Ok(QuasiCyclic { p })
    }

    pub fn reduce(&self, num: u64, exp: u32) -> QcElement {
        let mut num = num % self.p.pow(exp);
        let mut exp = exp;
        while exp > 0 && num.is_multiple_of(self.p) {
            num /= self.p;
            exp -= 1;
        }
        if num == 0 {
            exp = 0;
        }
        QcElement { num, exp }
    }

    pub fn add(&self, a: QcElement, b: QcElement) -> QcElement {
        let e = a.exp.max(b.exp);
        let lift = |x: QcElement| x.num * self.p.pow(e - x.exp);
        self.reduce(lift(a) + lift(b), e)
    }

    pub fn neg(&self, a: QcElement) -> QcElement {
        self.reduce(self.p.pow(a.exp) - a.num, a.exp)
    }

    /// The element with integer index `i` in `Z(p^m)`, i.e. `i/p^m`.
    pub fn element(&self, m: u32, i: u64) -> QcElement {
        self.reduce(i, m)
    }

    pub fn index(&self, m: u32, x: QcElement) -> u64 {
        x.num * self.p.pow(m - x.exp)
    }

    /// `Z(p^m)` as a finite algebra with `+`, `neg` and `0`, built from the
    /// fraction arithmetic.
    pub fn truncation(&self, m: u32) -> Result<FiniteAlgebra> {
        let order = self.p.pow(m) as usize;
        let el = |i: usize| self.element(m, i as u64);
        let mut add = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                add.push(self.index(m, self.add(el(a), el(b))) as usize);
            }
        }
        let neg = (0..order).map(|a| self.index(m, self.neg(el(a))) as usize).collect();
        FiniteAlgebra::new(
            format!("Z({}^{m})", self.p),
            order,
            vec![("+".into(), 2, add), ("neg".into(), 1, neg), ("0".into(), 0, vec![0])],
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuasiCyclicReport {
    pub p: u64,
    pub n: u32,
    pub m: u32,
    /// Sizes of the distinct congruence classes of `0`, smallest first.
    pub chain: Vec<usize>,
    pub chain_ok: bool,
    pub quotient_iso: bool,
    pub kernel_ok: bool,
    pub pseudo_simple: bool,
    pub conclusion: String,
}

impl QuasiCyclicReport {
    pub fn passed(&self) -> bool {
        self.chain_ok && self.quotient_iso && self.kernel_ok && self.pseudo_simple
    }
}

/// On `Z(p^m)`: the congruences form the chain of subgroups `Z(pʲ)`, and
/// `a ↦ a mod p^{m−n}` induces `Z(p^m)/Z(pⁿ) ≅ Z(p^{m−n})` with kernel
/// exactly `Z(pⁿ)`.
pub fn quasicyclic_suite(p: u64, n: u32, m: u32) -> Result<QuasiCyclicReport> {
    let qc = QuasiCyclic::new(p)?;
    if n >= m {
        return Err(Error::InvalidArgument(format!("need n < m, got n = {n}, m = {m}")));
    }
    if m > MAX_EXPONENT || p.checked_pow(m).is_none_or(|o| o as usize > MAX_ORDER) {
        return Err(Error::Budget {
            what: format!("quasi-cyclic truncation {p}^{m}"),
            needed: (p as u128).saturating_pow(m),
            limit: MAX_ORDER as u128,
        });
    }
    let a = qc.truncation(m)?;
    let order = a.size();

    // Every congruence is a join of principal ones, so a chain of principal
    // congruences is the whole lattice.
    let mut principal: Vec<Congruence> = (0..order)
        .map(|g| principal_congruence(&a, 0, g))
        .collect::<Result<_>>()?;
    principal.sort();
    principal.dedup();
    let chain: Vec<usize> = principal.iter().map(|c| order / c.block_count()).collect();
    let expected: Vec<usize> = (0..=m).map(|j| p.pow(j) as usize).collect();
    let is_chain = principal.windows(2).all(|w| w[0].leq(&w[1]).unwrap_or(false));
    let chain_ok = is_chain && chain == expected;

    let step = p.pow(m - n) as usize;
    let sub_n = principal_congruence(&a, 0, step % order)?;
    let target = qc.truncation(m - n)?;
    let h = Homomorphism::new(&a, &target, (0..order).map(|x| x % step).collect())?;
    let kernel_ok = h.kernel() == sub_n && sub_n.block_count() == step;
    let q = quotient_algebra(&a, &sub_n)?;
    let induced = Homomorphism::new(&q.algebra, &target, q.reps.iter().map(|&r| r % step).collect())?;
    let quotient_iso = induced.is_isomorphism();
    let pseudo_simple = quotient_iso && chain_ok;
    Ok(QuasiCyclicReport {
        p,
        n,
        m,
        chain,
        chain_ok,
        quotient_iso,
        kernel_ok,
        pseudo_simple,
        conclusion: if pseudo_simple {
            format!("Z({p}^{m})/Z({p}^{n}) ≅ Z({p}^{}); every proper quotient of Z({p}^∞) is isomorphic to it, so the CBS property for Con holds without being trivial", m - n)
        } else {
            "pattern not confirmed at this truncation".into()
        },
    })
}

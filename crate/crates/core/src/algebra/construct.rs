use super::{for_each_tuple, table_len, FiniteAlgebra, Homomorphism};
use crate::congruence::{compatibility_failure, Congruence};
use crate::error::{Error, Result};

/// `A × B` together with its projections.
#[derive(Debug, Clone)]
pub struct Product {
    pub algebra: FiniteAlgebra,
    pub pi1: Homomorphism,
    pub pi2: Homomorphism,
}

/// `A/θ` together with the natural projection and the block representatives.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub algebra: FiniteAlgebra,
    pub projection: Homomorphism,
    /// Least element of each block; block `i` is element `i` of the quotient.
    pub reps: Vec<usize>,
}

/// Direct product with pairing `(a,b) ↦ a·|B| + b`.
pub fn direct_product(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<Product> {
    a.same_signature(b)?;
    let (na, nb) = (a.size(), b.size());
    let n = na.checked_mul(nb).ok_or_else(|| Error::Budget {
        what: "product carrier".into(),
        needed: na as u128 * nb as u128,
        limit: usize::MAX as u128,
    })?;
    let mut tables = Vec::with_capacity(a.signature().len());
    for (op, sym) in a.signature().ops().iter().enumerate() {
        let k = sym.arity;
        let len = table_len(n, k).ok_or_else(|| Error::Budget {
            what: format!("product table of `{}`", sym.name),
            needed: (n as u128).saturating_pow(k as u32),
            limit: usize::MAX as u128,
        })?;
        let mut table = Vec::with_capacity(len);
        let (ta, tb) = (a.table(op), b.table(op));
        for_each_tuple(n, k, |args| {
            let (mut ia, mut ib) = (0, 0);
            for &x in args {
                ia = ia * na + x / nb;
                ib = ib * nb + x % nb;
            }
            table.push(ta[ia] * nb + tb[ib]);
        });
        tables.push(table);
    }
    let algebra = FiniteAlgebra::from_parts(
        format!("{}x{}", a.name(), b.name()),
        n,
        a.signature().clone(),
        tables,
    );
    let pi1 = Homomorphism::new_unchecked(&algebra, a, (0..n).map(|x| x / nb).collect());
    let pi2 = Homomorphism::new_unchecked(&algebra, b, (0..n).map(|x| x % nb).collect());
    Ok(Product { algebra, pi1, pi2 })
}

/// `A^m` by iterated products, `A^1 = A`. Coordinate `0` is the most significant.
pub fn power(a: &FiniteAlgebra, m: usize) -> Result<FiniteAlgebra> {
    if m == 0 {
        return Ok(a.trivial_like());
    }
    let mut acc = a.clone();
    for _ in 1..m {
        acc = direct_product(&acc, a)?.algebra;
    }
    Ok(acc.with_name(format!("{}^{}", a.name(), m)))
}

/// Quotient by a congruence; blocks are indexed by ascending least element.
pub fn quotient_algebra(a: &FiniteAlgebra, theta: &Congruence) -> Result<Quotient> {
    if theta.parent() != a.fingerprint() || theta.size() != a.size() {
        return Err(Error::ParentMismatch);
    }
    if let Some(e) = compatibility_failure(a, theta.rep()) {
        return Err(e);
    }
    let idx = theta.class_index();
    let reps: Vec<usize> = (0..a.size()).filter(|&x| theta.rep()[x] == x).collect();
    let m = reps.len();
    let mut tables = Vec::with_capacity(a.signature().len());
    let mut lifted = Vec::new();
    for (op, sym) in a.signature().ops().iter().enumerate() {
        let mut table = Vec::with_capacity(table_len(m, sym.arity).unwrap_or(0));
        for_each_tuple(m, sym.arity, |args| {
            lifted.clear();
            lifted.extend(args.iter().map(|&i| reps[i]));
            table.push(idx[a.apply(op, &lifted)]);
        });
        tables.push(table);
    }
    let algebra = FiniteAlgebra::from_parts(
        format!("{}/{}", a.name(), theta),
        m,
        a.signature().clone(),
        tables,
    );
    let projection = Homomorphism::new_unchecked(a, &algebra, idx);
    Ok(Quotient {
        algebra,
        projection,
        reps,
    })
}

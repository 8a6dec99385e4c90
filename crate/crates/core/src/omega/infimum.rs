use num_integer::Integer;
use serde::Serialize;

use super::pset::PeriodicSet;
use crate::error::{Error, Result};

/// The family `V₁ = first`, `V_{n+1} = ((Vₙ + k) ∪ F) ∩ G`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AffineFamily {
    pub first: PeriodicSet,
    pub k: usize,
    pub union: PeriodicSet,
    pub intersect: PeriodicSet,
}

impl AffineFamily {
    pub fn shift_union(first: PeriodicSet, k: usize, union: PeriodicSet) -> AffineFamily {
        AffineFamily {
            first,
            k,
            union,
            intersect: PeriodicSet::naturals(),
        }
    }

    pub fn shift_intersect(first: PeriodicSet, k: usize, intersect: PeriodicSet) -> AffineFamily {
        AffineFamily {
            first,
            k,
            union: PeriodicSet::empty(),
            intersect,
        }
    }

    /// Whether `x ∈ Vₙ`, for `n ≥ 1`.
    pub fn member(&self, n: usize, x: usize) -> bool {
        assert!(n >= 1, "the family is indexed from 1");
        let mut x = x;
        for _ in 1..n {
            if !self.intersect.contains(x) {
                return false;
            }
            if self.union.contains(x) {
                return true;
            }
            if x < self.k {
                return false;
            }
            x -= self.k;
        }
        self.first.contains(x)
    }

    pub fn term(&self, n: usize) -> PeriodicSet {
        let mut v = self.first.clone();
        for _ in 1..n {
            v = v.shift(self.k).union(&self.union).intersect(&self.intersect);
        }
        v
    }

    /// `n*(x)`: beyond this index membership of `x` no longer changes.
    pub fn stabilization_bound(&self, x: usize) -> usize {
        (x + 1).div_ceil(self.k.max(1)) + 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InfimumCertificate {
    pub set: PeriodicSet,
    /// Coordinates `0..window` were evaluated directly.
    pub window: usize,
    /// Largest family index used in the certification pass.
    pub checked_terms: usize,
}

/// Per-coordinate membership in `⋂ₙ Vₙ`, evaluating `n ≤ n*(x)`.
pub fn infimum_member(fam: &AffineFamily, x: usize) -> bool {
    (1..=fam.stabilization_bound(x)).all(|n| fam.member(n, x))
}

/// `⋂_{n≥1} Vₙ` as an eventually periodic set, with a certificate that the
/// stabilization bound held over the window used to read off the period.
pub fn countable_infimum(fam: &AffineFamily) -> Result<InfimumCertificate> {
    if fam.k == 0 {
        return Err(Error::InfimumNotRepresentable("shift amount must be positive".into()));
    }
    let p = fam.first.period().lcm(&fam.union.period()).lcm(&fam.intersect.period());
    let big_p = p.lcm(&fam.k);
    let t0 = fam.first.threshold().max(fam.union.threshold()).max(fam.intersect.threshold());
    let t = t0 + fam.k + big_p;
    let window = t + 2 * p * fam.k;
    let values: Vec<bool> = (0..window).map(|x| infimum_member(fam, x)).collect();
    for x in t..window - big_p {
        if values[x] != values[x + big_p] {
            return Err(Error::InfimumNotRepresentable(format!(
                "no period {big_p} from {t}: coordinate {x} differs from {}",
                x + big_p
            )));
        }
    }
    let checked_terms = 2 * fam.stabilization_bound(window);
    for (x, &v) in values.iter().enumerate() {
        let nstar = fam.stabilization_bound(x);
        let settled = fam.member(nstar, x);
        for n in 1..=checked_terms {
            let m = fam.member(n, x);
            if (n >= nstar && m != settled) || (v && !m) {
                return Err(Error::InfimumNotRepresentable(format!(
                    "coordinate {x} changes at family index {n} beyond its bound {nstar}"
                )));
            }
        }
    }
    let set = PeriodicSet::from_fn(t, big_p, |x| values[x]);
    Ok(InfimumCertificate {
        set,
        window,
        checked_terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Oracle: materialize each term up to a horizon and intersect.
    fn brute(fam: &AffineFamily, horizon: usize, terms: usize) -> Vec<bool> {
        let mut acc = vec![true; horizon];
        let mut v: Vec<bool> = (0..horizon).map(|x| fam.first.contains(x)).collect();
        for _ in 0..terms {
            for (a, b) in acc.iter_mut().zip(&v) {
                *a &= *b;
            }
            v = (0..horizon)
                .map(|x| fam.intersect.contains(x) && (fam.union.contains(x) || (x >= fam.k && v[x - fam.k])))
                .collect();
        }
        acc
    }

    fn check(fam: &AffineFamily, expected: &PeriodicSet) {
        let c = countable_infimum(fam).unwrap();
        assert_eq!(&c.set, expected);
        let b = brute(fam, 257, 300);
        for (x, &m) in b.iter().enumerate() {
            assert_eq!(c.set.contains(x), m, "coordinate {x}");
        }
    }

    #[test]
    fn shifted_holes() {
        let fam = AffineFamily::shift_union(PeriodicSet::finite(&[2]).complement(), 2, PeriodicSet::range(0, 2));
        assert_eq!(fam.term(3), PeriodicSet::finite(&[6]).complement());
        check(&fam, &PeriodicSet::finite(&[0, 1]).union(&PeriodicSet::odds()));
    }

    #[test]
    fn constant_family() {
        let fam = AffineFamily::shift_union(PeriodicSet::naturals(), 3, PeriodicSet::range(0, 3));
        check(&fam, &PeriodicSet::naturals());
    }

    #[test]
    fn unit_shift() {
        let fam = AffineFamily::shift_union(PeriodicSet::finite(&[1]).complement(), 1, PeriodicSet::finite(&[0]));
        check(&fam, &PeriodicSet::finite(&[0]));
    }

    #[test]
    fn intersect_rule() {
        let fam = AffineFamily::shift_intersect(PeriodicSet::odds(), 3, PeriodicSet::range(0, 40).complement());
        let c = countable_infimum(&fam).unwrap();
        let b = brute(&fam, 257, 300);
        for (x, &m) in b.iter().enumerate() {
            assert_eq!(c.set.contains(x), m, "coordinate {x}");
        }
    }

    #[test]
    fn member_matches_terms() {
        let fam = AffineFamily {
            first: PeriodicSet::residue_class(1, 3, 2),
            k: 2,
            union: PeriodicSet::finite(&[0, 5]),
            intersect: PeriodicSet::range(1, 4).complement(),
        };
        for n in 1..8 {
            let t = fam.term(n);
            for x in 0..60 {
                assert_eq!(fam.member(n, x), t.contains(x));
            }
        }
    }
}

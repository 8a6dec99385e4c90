use serde::Serialize;

use crate::congruence::FiniteLattice;

/// Neutrality verdict for one lattice element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CenterEntry {
    pub element: usize,
    pub neutral: bool,
    /// First `(a, b, z)` for which a permuted distributive identity fails.
    pub failing_triple: Option<(usize, usize, usize)>,
    pub complements: Vec<usize>,
    pub central: bool,
}

/// The Boolean interval above a central element, with relative complements
/// `¬_z x = z ∨ ¬x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntervalCenter {
    pub z: usize,
    pub members: Vec<usize>,
    pub relative_complements: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CenterReport {
    pub central: Vec<usize>,
    pub entries: Vec<CenterEntry>,
    pub intervals: Vec<IntervalCenter>,
}

/// `(x,y,w)D` and `(x,y,w)D*`.
fn distributes(l: &FiniteLattice, x: usize, y: usize, w: usize) -> bool {
    l.meet(x, l.join(y, w)) == l.join(l.meet(x, y), l.meet(x, w))
        && l.join(x, l.meet(y, w)) == l.meet(l.join(x, y), l.join(x, w))
}

/// First `(a,b)` where some permutation of `(a,b,z)` breaks `D` or `D*`.
pub fn neutrality_failure(l: &FiniteLattice, z: usize) -> Option<(usize, usize, usize)> {
    let n = l.size();
    for a in 0..n {
        for b in 0..n {
            let perms = [(a, b, z), (a, z, b), (b, a, z), (b, z, a), (z, a, b), (z, b, a)];
            if perms.iter().any(|&(x, y, w)| !distributes(l, x, y, w)) {
                return Some((a, b, z));
            }
        }
    }
    None
}

pub fn is_central(l: &FiniteLattice, z: usize) -> bool {
    neutrality_failure(l, z).is_none() && !l.complements(z).is_empty()
}

/// `Z(L)`: neutral elements that have a complement.
pub fn center_of_lattice(l: &FiniteLattice) -> CenterReport {
    let entries: Vec<CenterEntry> = (0..l.size())
        .map(|z| {
            let failing_triple = neutrality_failure(l, z);
            let complements = l.complements(z);
            CenterEntry {
                element: z,
                neutral: failing_triple.is_none(),
                central: failing_triple.is_none() && !complements.is_empty(),
                failing_triple,
                complements,
            }
        })
        .collect();
    let central: Vec<usize> = entries.iter().filter(|e| e.central).map(|e| e.element).collect();
    let intervals = central
        .iter()
        .map(|&z| {
            let members: Vec<usize> = central.iter().copied().filter(|&x| l.leq(z, x)).collect();
            let relative_complements = members
                .iter()
                .map(|&x| (x, l.join(z, l.complements(x)[0])))
                .collect();
            IntervalCenter {
                z,
                members,
                relative_complements,
            }
        })
        .collect();
    CenterReport {
        central,
        entries,
        intervals,
    }
}

/// Checks `Z(L) ∩ [z,1] = Z([z,1])` for a central `z`.
pub fn center_restricts(l: &FiniteLattice, z: usize) -> bool {
    let (sub, embed) = l.upper_interval(z);
    let upstairs: Vec<usize> = center_of_lattice(&sub)
        .central
        .into_iter()
        .map(|i| embed[i])
        .collect();
    let restricted: Vec<usize> = center_of_lattice(l)
        .central
        .into_iter()
        .filter(|&x| l.leq(z, x))
        .collect();
    upstairs == restricted
}

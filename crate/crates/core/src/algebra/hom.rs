use super::{for_each_tuple, FiniteAlgebra};
use crate::budget::Budget;
use crate::congruence::Congruence;
use crate::error::{Error, Result};

/// A verified map between algebras of the same signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homomorphism {
    source: FiniteAlgebra,
    target: FiniteAlgebra,
    map: Vec<usize>,
}

/// Checks that `map` preserves every operation of `source`.
fn check(source: &FiniteAlgebra, target: &FiniteAlgebra, map: &[usize]) -> Result<()> {
    source.same_signature(target)?;
    if map.len() != source.size() {
        return Err(Error::InvalidArgument(format!(
            "map has length {}, source has size {}",
            map.len(),
            source.size()
        )));
    }
    for &y in map {
        target.check_element(y)?;
    }
    let mut image = Vec::new();
    for (op, sym) in source.signature().ops().iter().enumerate() {
        let mut bad = None;
        for_each_tuple(source.size(), sym.arity, |args| {
            if bad.is_some() {
                return;
            }
            image.clear();
            image.extend(args.iter().map(|&a| map[a]));
            if map[source.apply(op, args)] != target.apply(op, &image) {
                bad = Some(args.to_vec());
            }
        });
        if let Some(args) = bad {
            return Err(Error::NotAHomomorphism {
                op: sym.name.clone(),
                args,
            });
        }
    }
    Ok(())
}

impl Homomorphism {
    pub fn new(source: &FiniteAlgebra, target: &FiniteAlgebra, map: Vec<usize>) -> Result<Homomorphism> {
        check(source, target, &map)?;
        Ok(Homomorphism::new_unchecked(source, target, map))
    }

    pub(crate) fn new_unchecked(
        source: &FiniteAlgebra,
        target: &FiniteAlgebra,
        map: Vec<usize>,
    ) -> Homomorphism {
        Homomorphism {
            source: source.clone(),
            target: target.clone(),
            map,
        }
    }

    pub fn identity(a: &FiniteAlgebra) -> Homomorphism {
        Homomorphism::new_unchecked(a, a, (0..a.size()).collect())
    }

    /// Re-checks the homomorphism condition.
    pub fn verify(&self) -> Result<()> {
        check(&self.source, &self.target, &self.map)
    }

    pub fn source(&self) -> &FiniteAlgebra {
        &self.source
    }

    pub fn target(&self) -> &FiniteAlgebra {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.size()];
        self.map.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target.size()];
        self.map.iter().for_each(|&y| seen[y] = true);
        seen.into_iter().all(|s| s)
    }

    pub fn is_isomorphism(&self) -> bool {
        self.source.size() == self.target.size() && self.is_injective()
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Homomorphism) -> Result<Homomorphism> {
        if self.target.fingerprint() != next.source.fingerprint() {
            return Err(Error::InvalidArgument(format!(
                "cannot compose: codomain `{}` is not domain `{}`",
                self.target.name(),
                next.source.name()
            )));
        }
        Ok(Homomorphism::new_unchecked(
            &self.source,
            &next.target,
            self.map.iter().map(|&x| next.map[x]).collect(),
        ))
    }

    pub fn inverse(&self) -> Result<Homomorphism> {
        if !self.is_isomorphism() {
            return Err(Error::NotAnIsomorphism(format!(
                "map {:?} from `{}` to `{}` is not bijective",
                self.map,
                self.source.name(),
                self.target.name()
            )));
        }
        let mut inv = vec![0; self.map.len()];
        for (x, &y) in self.map.iter().enumerate() {
            inv[y] = x;
        }
        Ok(Homomorphism::new_unchecked(&self.target, &self.source, inv))
    }

    /// `Ker(f) = {(a,b): f(a) = f(b)}`.
    pub fn kernel(&self) -> Congruence {
        Congruence::from_labels_unchecked(self.source.fingerprint(), self.map.iter().copied())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoMode {
    /// Lexicographically least isomorphism only.
    First,
    /// Every isomorphism, in lexicographic order.
    All,
    /// Checks the given map.
    Verify(Vec<usize>),
}

/// Isomorphism-invariant profile of `x`: for every unary operation and every
/// binary diagonal `x ↦ f(x,x)`, the tail length and cycle length of the
/// orbit of `x`.
fn orbit_profile(a: &FiniteAlgebra, x: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (op, sym) in a.signature().ops().iter().enumerate() {
        let step: Box<dyn Fn(usize) -> usize> = match sym.arity {
            1 => Box::new(move |y| a.apply(op, &[y])),
            2 => Box::new(move |y| a.apply(op, &[y, y])),
            _ => continue,
        };
        let mut first = vec![usize::MAX; a.size()];
        let (mut y, mut t) = (x, 0);
        while first[y] == usize::MAX {
            first[y] = t;
            y = step(y);
            t += 1;
        }
        out.push((first[y], t - first[y]));
    }
    out
}

struct Search<'a> {
    a: &'a FiniteAlgebra,
    b: &'a FiniteAlgebra,
    injective: bool,
    first_only: bool,
    domains: Vec<Vec<usize>>,
    map: Vec<usize>,
    used: Vec<bool>,
    found: Vec<Vec<usize>>,
}

impl Search<'_> {
    /// Checks every tuple over the assigned prefix `0..=d` whose result is
    /// also assigned. Tuples avoiding `d` were checked at earlier depths.
    fn consistent(&self, d: usize) -> bool {
        let mut image = Vec::new();
        for (op, sym) in self.a.signature().ops().iter().enumerate() {
            let mut ok = true;
            for_each_tuple(d + 1, sym.arity, |args| {
                if !ok {
                    return;
                }
                let r = self.a.apply(op, args);
                if r > d || (!args.contains(&d) && r != d) {
                    return;
                }
                image.clear();
                image.extend(args.iter().map(|&x| self.map[x]));
                ok = self.map[r] == self.b.apply(op, &image);
            });
            if !ok {
                return false;
            }
        }
        true
    }

    fn run(&mut self, d: usize) -> bool {
        if d == self.a.size() {
            self.found.push(self.map.clone());
            return self.first_only;
        }
        for i in 0..self.domains[d].len() {
            let y = self.domains[d][i];
            if self.injective && self.used[y] {
                continue;
            }
            self.map[d] = y;
            if self.consistent(d) {
                self.used[y] = true;
                let stop = self.run(d + 1);
                self.used[y] = false;
                if stop {
                    return true;
                }
            }
        }
        false
    }
}

fn search(
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
    injective: bool,
    first_only: bool,
) -> Vec<Vec<usize>> {
    let mut domains: Vec<Vec<usize>> = vec![(0..b.size()).collect(); a.size()];
    for (op, sym) in a.signature().ops().iter().enumerate() {
        if sym.arity == 0 {
            let (ca, cb) = (a.table(op)[0], b.table(op)[0]);
            domains[ca].retain(|&y| y == cb);
        }
    }
    if injective {
        let pb: Vec<_> = (0..b.size()).map(|y| orbit_profile(b, y)).collect();
        for (x, dom) in domains.iter_mut().enumerate() {
            let px = orbit_profile(a, x);
            dom.retain(|&y| pb[y] == px);
        }
    }
    let mut s = Search {
        a,
        b,
        injective,
        first_only,
        domains,
        map: vec![0; a.size()],
        used: vec![false; b.size()],
        found: Vec::new(),
    };
    s.run(0);
    s.found
}

/// Backtracking isomorphism search with constant and orbit pruning.
pub fn iso_search(
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
    mode: IsoMode,
    budget: &Budget,
) -> Result<Vec<Homomorphism>> {
    a.same_signature(b)?;
    budget.check_iso(a.size())?;
    if a.size() != b.size() {
        return Ok(Vec::new());
    }
    let maps = match mode {
        IsoMode::Verify(map) => {
            let h = Homomorphism::new(a, b, map);
            return Ok(match h {
                Ok(h) if h.is_isomorphism() => vec![h],
                Ok(_) | Err(Error::NotAHomomorphism { .. }) => Vec::new(),
                Err(e) => return Err(e),
            });
        }
        IsoMode::First => search(a, b, true, true),
        IsoMode::All => search(a, b, true, false),
    };
    Ok(maps
        .into_iter()
        .map(|m| Homomorphism::new_unchecked(a, b, m))
        .collect())
}

/// Every homomorphism `A → B`, in lexicographic order.
pub fn homomorphisms(a: &FiniteAlgebra, b: &FiniteAlgebra, budget: &Budget) -> Result<Vec<Homomorphism>> {
    a.same_signature(b)?;
    budget.check_iso(a.size())?;
    budget.check_iso(b.size())?;
    Ok(search(a, b, false, false)
        .into_iter()
        .map(|m| Homomorphism::new_unchecked(a, b, m))
        .collect())
}

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::pset::PeriodicSet;
use super::run::OmegaRun;
use crate::algebra::{direct_product, power, quotient_algebra, FiniteAlgebra, Homomorphism};
use crate::budget::Budget;
use crate::congruence::{compatibility_failure, Congruence};
use crate::error::{Error, Result};
use crate::structure::{check_factor_pair, decomposition_witness, FactorPair};

/// Powers up to this size are built as ordinary algebras.
pub const MATERIALIZE_LIMIT: usize = 256;
/// Pairs drawn per relation comparison when the power is not enumerated.
pub const SAMPLES: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TruncationCheck {
    pub name: String,
    pub passed: bool,
    /// Two coordinate vectors separating the compared relations.
    pub witness: Option<(Vec<usize>, Vec<usize>)>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TruncationMode {
    Exhaustive,
    Sampled { seed: u64, samples: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TruncationVerdict {
    pub m: usize,
    pub mode: TruncationMode,
    pub passed: bool,
    pub checks: Vec<TruncationCheck>,
}

type Vector = Vec<usize>;

struct Window<'a> {
    base: &'a FiniteAlgebra,
    m: usize,
    k: usize,
    total: Option<usize>,
    pairs: Vec<(Vector, Vector)>,
}

impl<'a> Window<'a> {
    fn mask(&self, s: &PeriodicSet) -> Vec<bool> {
        (0..self.m).map(|i| s.contains(i)).collect()
    }

    fn zero(&self) -> Vector {
        vec![0; self.m]
    }

    fn unit(&self, i: usize) -> Vector {
        let mut e = self.zero();
        e[i] = 1;
        e
    }

    fn decode(&self, mut x: usize) -> Vector {
        let n = self.base.size();
        let mut v = vec![0; self.m];
        for i in (0..self.m).rev() {
            v[i] = x % n;
            x /= n;
        }
        v
    }

    fn encode(&self, v: &[usize]) -> usize {
        v.iter().fold(0, |acc, &c| acc * self.base.size() + c)
    }

    /// Left shift by `k`, padding with coordinate value 0.
    fn unshift(&self, x: &[usize]) -> Vector {
        (0..self.m).map(|j| if j + self.k < self.m { x[j + self.k] } else { 0 }).collect()
    }

    fn probes(&self) -> Vec<(Vector, Vector)> {
        (0..self.m).map(|i| (self.zero(), self.unit(i))).collect()
    }

    /// Compares the kernels of two labellings: first on the probes
    /// `(0, eᵢ)`, then on every element (or on the sampled pairs).
    fn compare(
        &self,
        name: &str,
        l1: impl Fn(&[usize]) -> Vector,
        l2: impl Fn(&[usize]) -> Vector,
    ) -> TruncationCheck {
        let check = |x: &Vector, y: &Vector| (l1(x) == l1(y)) == (l2(x) == l2(y));
        for (x, y) in self.probes() {
            if !check(&x, &y) {
                return fail(name, x, y, "relations differ on a coordinate probe");
            }
        }
        match self.total {
            Some(t) => {
                let mut first1: HashMap<Vector, usize> = HashMap::new();
                let mut first2: HashMap<Vector, usize> = HashMap::new();
                for a in 0..t {
                    let x = self.decode(a);
                    let r1 = *first1.entry(l1(&x)).or_insert(a);
                    let r2 = *first2.entry(l2(&x)).or_insert(a);
                    if r1 != r2 {
                        return fail(name, self.decode(r1.min(r2)), x, "relations differ");
                    }
                }
            }
            None => {
                for (x, y) in &self.pairs {
                    if !check(x, y) {
                        return fail(name, x.clone(), y.clone(), "relations differ on a sampled pair");
                    }
                }
            }
        }
        pass(name)
    }
}

/// Coordinates outside `mask`; two vectors are `θ_S`-related iff these agree.
fn label(mask: &[bool], x: &[usize]) -> Vector {
    mask.iter().zip(x).map(|(&c, &v)| if c { usize::MAX } else { v }).collect()
}

fn related(mask: &[bool], x: &[usize], y: &[usize]) -> bool {
    mask.iter().zip(x.iter().zip(y)).all(|(&c, (a, b))| c || a == b)
}

fn pass(name: &str) -> TruncationCheck {
    TruncationCheck {
        name: name.into(),
        passed: true,
        witness: None,
        detail: String::new(),
    }
}

fn fail(name: &str, x: Vector, y: Vector, detail: &str) -> TruncationCheck {
    TruncationCheck {
        name: name.into(),
        passed: false,
        witness: Some((x, y)),
        detail: detail.into(),
    }
}

fn fail_plain(name: &str, detail: String) -> TruncationCheck {
    TruncationCheck {
        name: name.into(),
        passed: false,
        witness: None,
        detail,
    }
}

/// Restricts a run to the first `m` coordinates of `A^m` and re-checks its
/// recursion, factor pairs, dual orthogonality and decomposition maps.
pub fn truncate_validate(run: &OmegaRun, m: usize, seed: u64, budget: &Budget) -> Result<TruncationVerdict> {
    let k = run.k;
    if m < 2 * k {
        return Err(Error::InvalidArgument(format!("truncation length {m} is below 2k = {}", 2 * k)));
    }
    let n = run.base.size();
    let size = (n as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    if size > budget.max_evals as u128 {
        return Err(Error::Budget {
            what: format!("truncated power of size {n}^{m}"),
            needed: size,
            limit: budget.max_evals as u128,
        });
    }
    let materialize = size <= MATERIALIZE_LIMIT as u128;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = if materialize {
        Vec::new()
    } else {
        (0..SAMPLES)
            .map(|_| {
                let x: Vector = (0..m).map(|_| rng.gen_range(0..n)).collect();
                let y = x.iter().map(|&c| if rng.gen_bool(0.5) { rng.gen_range(0..n) } else { c }).collect();
                (x, y)
            })
            .collect()
    };
    let w = Window {
        base: &run.base,
        m,
        k,
        total: materialize.then_some(size as usize),
        pairs,
    };
    let mut checks = Vec::new();

    // Recursion on the truncation, with f̂ computed from the left shift.
    let fhat_label = |mask: &[bool], x: &[usize]| label(mask, &w.unshift(x));
    for j in 0..run.sigma.len().saturating_sub(2) {
        let lo = w.mask(&run.sigma[j]);
        let hi = w.mask(&run.sigma[j + 2]);
        checks.push(w.compare(
            &format!("recursion sigma_{}", j + 2),
            |x| label(&hi, x),
            |x| fhat_label(&lo, x),
        ));
    }
    for j in 0..run.neg_odd.len().saturating_sub(1) {
        let lo = w.mask(&run.neg_odd[j]);
        let hi = w.mask(&run.neg_odd[j + 1]);
        checks.push(w.compare(
            &format!("recursion neg sigma_{}", 2 * j + 3),
            |x| label(&hi, x),
            |x| fhat_label(&lo, x),
        ));
    }
    for j in 0..run.d.len() {
        let dm = w.mask(&run.d[j]);
        let a = w.mask(&run.sigma[2 * j]);
        let b = w.mask(&run.neg_odd[j]);
        let joined: Vec<bool> = a.iter().zip(&b).map(|(p, q)| *p || *q).collect();
        checks.push(w.compare(
            &format!("d_{j} is a join"),
            |x| label(&dm, x),
            |x| label(&joined, x),
        ));
    }

    // Dual orthogonality on the window.
    let mut orth = pass("dual orthogonality");
    'outer: for a in 0..run.d.len() {
        for b in a + 1..run.d.len() {
            let (da, db) = (w.mask(&run.d[a]), w.mask(&run.d[b]));
            if let Some(i) = (0..m).find(|&i| !da[i] && !db[i]) {
                orth = fail(&orth.name, w.zero(), w.unit(i), &format!("d_{a} v d_{b} misses coordinate {i}"));
                break 'outer;
            }
        }
    }
    checks.push(orth);

    let pairs_to_check = [
        ("factor pair chi", &run.chi, &run.neg_chi),
        ("factor pair sigma_zeta", &run.sigma_zeta, &run.neg_sigma_zeta),
    ];
    if materialize {
        materialized_checks(run, &w, &pairs_to_check, &mut checks)?;
    } else {
        for (name, s, t) in pairs_to_check {
            checks.push(sampled_factor_pair(&w, name, s, t));
        }
        checks.push(sampled_decompositions(run, &w, &mut rng));
    }

    Ok(TruncationVerdict {
        m,
        mode: if materialize {
            TruncationMode::Exhaustive
        } else {
            TruncationMode::Sampled { seed, samples: SAMPLES }
        },
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

fn restrict(w: &Window, alg: &FiniteAlgebra, s: &PeriodicSet) -> Congruence {
    let mask = w.mask(s);
    let labels = (0..alg.size()).map(|x| {
        let mut v = w.decode(x);
        for (c, &collapsed) in v.iter_mut().zip(&mask) {
            if collapsed {
                *c = 0;
            }
        }
        w.encode(&v)
    });
    Congruence::from_labels_unchecked(alg.fingerprint(), labels)
}

fn materialized_checks(
    run: &OmegaRun,
    w: &Window,
    pairs: &[(&str, &PeriodicSet, &PeriodicSet)],
    checks: &mut Vec<TruncationCheck>,
) -> Result<()> {
    let b = power(&run.base, w.m)?;
    let r = |s: &PeriodicSet| restrict(w, &b, s);
    for s in [&run.chi, &run.neg_chi, &run.sigma_zeta, &run.zeta] {
        if let Some(e) = compatibility_failure(&b, r(s).rep()) {
            checks.push(fail_plain("restricted congruence", e.to_string()));
        }
    }
    for (name, s, t) in pairs {
        let res = check_factor_pair(&r(s), &r(t))?;
        checks.push(if res.is_pair() {
            pass(name)
        } else {
            fail_plain(name, serde_json::to_string(&res).unwrap_or_default())
        });
    }

    // B_m ≅ B_m/¬χ × B_m/χ.
    let split = FactorPair {
        theta: r(&run.neg_chi),
        complement: r(&run.chi),
        meet_is_delta: true,
        compose_is_nabla: true,
    };
    checks.push(match decomposition_witness(&b, &split) {
        Ok(_) => pass("split map"),
        Err(e) => fail_plain("split map", e.to_string()),
    });

    // B_m/ζ → B_m/¬χ × B_m/σ_ζ.
    let qz = quotient_algebra(&b, &r(&run.zeta))?;
    let q1 = quotient_algebra(&b, &r(&run.neg_chi))?;
    let q2 = quotient_algebra(&b, &r(&run.sigma_zeta))?;
    let prod = direct_product(&q1.algebra, &q2.algebra)?;
    let map = qz
        .reps
        .iter()
        .map(|&x| q1.projection.apply(x) * q2.algebra.size() + q2.projection.apply(x))
        .collect();
    checks.push(bijective_hom("zeta quotient map", &qz.algebra, &prod.algebra, map));

    // Truncated shift B_m/(χ ∪ [m−k,m)) → B_m/f̂(χ).
    let chi_cut = run.chi.union(&PeriodicSet::range(w.m - w.k, w.m));
    let f_chi = run.shift().fhat(&run.chi);
    let qa = quotient_algebra(&b, &r(&chi_cut))?;
    let qb = quotient_algebra(&b, &r(&f_chi))?;
    let map = qa
        .reps
        .iter()
        .map(|&x| {
            let v = w.decode(x);
            let shifted: Vector = (0..w.m).map(|j| if j >= w.k { v[j - w.k] } else { 0 }).collect();
            qb.projection.apply(w.encode(&shifted))
        })
        .collect();
    checks.push(bijective_hom("shift map", &qa.algebra, &qb.algebra, map));
    Ok(())
}

fn bijective_hom(name: &str, a: &FiniteAlgebra, b: &FiniteAlgebra, map: Vec<usize>) -> TruncationCheck {
    match Homomorphism::new(a, b, map) {
        Ok(h) if h.is_isomorphism() => pass(name),
        Ok(h) => fail_plain(name, format!("map {:?} is not bijective", h.map())),
        Err(e) => fail_plain(name, e.to_string()),
    }
}

fn sampled_factor_pair(w: &Window, name: &str, s: &PeriodicSet, t: &PeriodicSet) -> TruncationCheck {
    let (ms, mt) = (w.mask(s), w.mask(t));
    for (x, y) in w.probes().into_iter().chain(w.pairs.iter().cloned()) {
        if x != y && related(&ms, &x, &y) && related(&mt, &x, &y) {
            return fail(name, x, y, "pair lies in the meet");
        }
        let mid: Vector = (0..w.m).map(|i| if ms[i] { y[i] } else { x[i] }).collect();
        if !(related(&ms, &x, &mid) && related(&mt, &mid, &y)) {
            return fail(name, x, y, "no connecting element in the composition");
        }
    }
    pass(name)
}

/// Coordinate maps of the decomposition chain, checked on sampled tuples.
fn sampled_decompositions(run: &OmegaRun, w: &Window, rng: &mut ChaCha8Rng) -> TruncationCheck {
    let name = "decomposition maps";
    let m = w.m;
    let inside = |s: &PeriodicSet| -> Vec<usize> { (0..m).filter(|&i| !s.contains(i)).collect() };
    let chi_c = inside(&run.chi);
    let neg_chi_c = inside(&run.neg_chi);
    let zeta_c = inside(&run.zeta);
    let sz_c = inside(&run.sigma_zeta);
    let mut split: Vec<usize> = chi_c.iter().chain(&neg_chi_c).copied().collect();
    split.sort_unstable();
    if split != (0..m).collect::<Vec<_>>() {
        return fail_plain(name, "chi and neg chi do not partition the window".into());
    }
    let mut zq: Vec<usize> = neg_chi_c.iter().chain(&sz_c).copied().collect();
    zq.sort_unstable();
    if zq != zeta_c {
        return fail_plain(name, "zeta quotient coordinates do not split".into());
    }
    let f_chi_c = inside(&run.shift().fhat(&run.chi));
    let shifted: Vec<usize> = chi_c.iter().map(|i| i + w.k).filter(|&j| j < m).collect();
    if shifted != f_chi_c {
        return fail_plain(name, "shift does not carry the chi coordinates onto f_hat(chi)".into());
    }
    let n = w.base.size();
    for op in 0..w.base.signature().len() {
        let arity = w.base.arity(op);
        for _ in 0..SAMPLES / 16 {
            let args: Vec<Vector> = (0..arity).map(|_| (0..m).map(|_| rng.gen_range(0..n)).collect()).collect();
            let apply = |coords: &[usize]| -> Vec<usize> {
                coords
                    .iter()
                    .map(|&i| w.base.apply(op, &args.iter().map(|a| a[i]).collect::<Vec<_>>()))
                    .collect()
            };
            let whole = apply(&(0..m).collect::<Vec<_>>());
            let proj = |coords: &[usize]| -> Vec<usize> { coords.iter().map(|&i| whole[i]).collect() };
            if proj(&chi_c) != apply(&chi_c) || proj(&neg_chi_c) != apply(&neg_chi_c) {
                return fail(name, args.first().cloned().unwrap_or_default(), whole, "projection is not a homomorphism");
            }
        }
    }
    pass(name)
}

//! Release acceptance suite: one line per criterion, nonzero exit on any
//! failure or if the whole run exceeds its time limit.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cbswb::algebra::{counterexample, homomorphisms, iso_search, Homomorphism, IsoMode};
use cbswb::cbs::{
    cbs_property_check, cbs_sequence, presheaf_check, sequence_law_failures, ComplementChoice, Fhat, OperatorKind,
    PresheafOptions, DEFAULT_BOUND,
};
use cbswb::congruence::{all_congruences, pullback, pushforward};
use cbswb::omega::{
    infimum_member, omega_cbs_run, omega_law_failures, quasicyclic_suite, truncate_validate, AffineFamily, OmegaRun,
    PeriodicSet,
};
use cbswb::structure::{bfc_check, decomposition_witness, factor_congruences, check_factor_pair, BfcCounterexample};
use cbswb::{corpus, Budget, Congruence, FiniteAlgebra, Sentence};

use common::{factor_pair_oracle, oracle_con, small_corpus};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const TOTAL_LIMIT: Duration = Duration::from_secs(60);
const WORKED_RUN_LIMIT: Duration = Duration::from_secs(5);

fn b() -> Budget {
    Budget::default()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn con_oracle() -> Outcome {
    let algs = small_corpus();
    ensure(algs.len() >= 10, || format!("only {} algebras with n <= 5", algs.len()))?;
    for (name, a) in &algs {
        let got: BTreeSet<Vec<Vec<usize>>> =
            all_congruences(a, &b()).map_err(|e| e.to_string())?.elements().iter().map(|c| c.blocks()).collect();
        let want = oracle_con(a);
        ensure(got == want, || format!("{name}: {} vs oracle {}", got.len(), want.len()))?;
    }
    Ok(format!("{} algebras agree with partition filtering", algs.len()))
}

fn factor_facts() -> Outcome {
    let z4 = corpus::get("z4");
    let con = all_congruences(&z4, &b()).unwrap();
    ensure(con.len() == 3, || format!("|Con(Z4)| = {}", con.len()))?;
    let fc = factor_congruences(&z4, &b()).unwrap().elements();
    ensure(fc == vec![Congruence::identity(&z4), Congruence::total(&z4)], || "FC(Z4) is not {Δ,∇}".into())?;

    let v4 = corpus::get("v4");
    ensure(all_congruences(&v4, &b()).unwrap().len() == 5, || "|Con(V4)| != 5".into())?;
    ensure(factor_congruences(&v4, &b()).unwrap().len() == 5, || "|FC(V4)| != 5".into())?;
    let bfc = bfc_check(&v4, &b()).unwrap();
    let witness_ok = matches!(
        &bfc.counterexample,
        Some(BfcCounterexample::NonUniqueComplement { complements, .. }) if complements.len() == 2
    );
    ensure(!bfc.holds && witness_ok, || format!("V4 BFC verdict {bfc:?}"))?;

    let c3 = corpus::get("chain3");
    let t1 = Congruence::parse(&c3, "[[0,1],[2]]").unwrap();
    let t2 = Congruence::parse(&c3, "[[0],[1,2]]").unwrap();
    let (rel, perm) = t1.compose(&t2).unwrap();
    ensure(!perm && rel.contains(0, 2) && !rel.contains(2, 0), || "3-chain composition is permutable".into())?;
    ensure(!check_factor_pair(&t1, &t2).unwrap().is_pair(), || "3-chain pair accepted".into())?;

    let l = corpus::get("lattice2x2");
    let fc = factor_congruences(&l, &b()).unwrap();
    ensure(fc.len() == 4 && bfc_check(&l, &b()).unwrap().holds, || "2x2 lattice FC is not Boolean of size 4".into())?;
    for pair in fc.pairs() {
        let h = decomposition_witness(&l, &pair).map_err(|e| e.to_string())?;
        ensure(h.is_isomorphism(), || format!("decomposition of {} fails", pair.theta))?;
        ensure(factor_pair_oracle(4, &pair.theta.blocks(), &pair.complement.blocks()), || "oracle disagrees".into())?;
    }
    Ok("Z4, V4, 3-chain and 2x2 lattice facts reproduced".into())
}

fn transport_laws() -> Outcome {
    let get = |ns: &[&str]| ns.iter().map(|n| corpus::get(n)).collect::<Vec<FiniteAlgebra>>();
    let families = [
        get(&["z2", "z4", "v4", "z6"]),
        get(&["chain2", "chain3", "lattice2x2", "n5", "m3"]),
        get(&["ba2", "ba4"]),
    ];
    let mut triples = 0;
    let mut isos = 0;
    for fam in &families {
        for a in fam {
            let id = Homomorphism::identity(a);
            let con_a = all_congruences(a, &b()).unwrap();
            for t in con_a.elements() {
                ensure(&pullback(&id, t).unwrap() == t, || format!("1* moves {t} on {}", a.name()))?;
            }
            for m in fam {
                let fs = homomorphisms(a, m, &b()).unwrap();
                for c in fam {
                    let gs = homomorphisms(m, c, &b()).unwrap();
                    let con_c = all_congruences(c, &b()).unwrap();
                    for f in fs.iter().take(4) {
                        for g in gs.iter().take(4) {
                            let gf = f.then(g).unwrap();
                            for theta in con_c.elements() {
                                let lhs = pullback(&gf, theta).unwrap();
                                let rhs = pullback(f, &pullback(g, theta).unwrap()).unwrap();
                                ensure(lhs == rhs, || format!("(gf)* != f*g* on {} -> {} -> {}", a.name(), m.name(), c.name()))?;
                                triples += 1;
                            }
                        }
                    }
                }
                for f in iso_search(a, m, IsoMode::All, &b()).unwrap() {
                    let inv = f.inverse().unwrap();
                    for t in con_a.elements() {
                        let pushed = pushforward(&f, t).unwrap();
                        ensure(pushed == pullback(&inv, t).unwrap(), || "f_* != (f⁻¹)*".into())?;
                        ensure(&pullback(&f, &pushed).unwrap() == t, || "f* f_* != id".into())?;
                        for t2 in con_a.elements() {
                            let p1 = t.compose(t2).unwrap().1;
                            let p2 = pushed.compose(&pushforward(&f, t2).unwrap()).unwrap().1;
                            ensure(!p1 || p2, || format!("permutability of {t}, {t2} lost"))?;
                        }
                        isos += 1;
                    }
                }
            }
        }
    }
    ensure(triples >= 200, || format!("only {triples} triples"))?;
    Ok(format!("{triples} (f, g, θ) triples, {isos} isomorphism transports"))
}

fn presheaf_suite() -> Outcome {
    let mut runs = 0;
    for (name, a) in corpus::all() {
        if !all_congruences(&a, &b()).unwrap().is_modular() {
            continue;
        }
        let r = presheaf_check(&a, &OperatorKind::FactorC, PresheafOptions { factor: true, boolean: false }, &b())
            .map_err(|e| e.to_string())?;
        ensure(r.passed(), || format!("{name} FactorC: {:?}", r.conditions.iter().find(|c| !c.passed)))?;
        runs += 1;
    }
    for name in corpus::GROUPS {
        let a = corpus::get(name);
        let comm: Sentence = "(* x y) = (* y x)".replace('*', group_op(&a)).parse().unwrap();
        for kind in [OperatorKind::ConAll, OperatorKind::Relative(vec![comm])] {
            let r = presheaf_check(&a, &kind, PresheafOptions::default(), &b()).map_err(|e| e.to_string())?;
            let c = r.condition("correspondence").ok_or("no correspondence condition")?;
            ensure(c.passed, || format!("{name} {kind}: {:?}", c.violations.first()))?;
            runs += 1;
        }
    }
    Ok(format!("{runs} presheaf checks"))
}

fn group_op(a: &FiniteAlgebra) -> &str {
    &a.signature().ops().iter().find(|o| o.arity == 2).expect("groups have a binary operation").name
}

fn kinds(name: &str) -> Vec<OperatorKind> {
    let mut axioms = corpus::axioms(name);
    if axioms.is_empty() {
        axioms = vec!["x = x".parse().unwrap()];
    }
    vec![OperatorKind::ConAll, OperatorKind::FactorC, OperatorKind::ZCon, OperatorKind::Relative(axioms)]
}

fn sequence_laws() -> Outcome {
    let mut finite = 0;
    for (name, a) in corpus::all() {
        let theta = Congruence::identity(&a);
        let fhat = Fhat::search(&a, &theta, &b()).unwrap().ok_or_else(|| format!("{name}: no A ≅ A/Δ"))?;
        for kind in kinds(name) {
            let mut i = 0;
            while let Ok(s) = cbs_sequence(&fhat, &theta, &kind, &ComplementChoice::Index(i), DEFAULT_BOUND, &b()) {
                let fails = sequence_law_failures(&fhat, &s).map_err(|e| e.to_string())?;
                ensure(fails.is_empty(), || format!("{name} {kind}: {fails:?}"))?;
                finite += 1;
                i += 1;
            }
            ensure(i > 0, || format!("{name} {kind}: no sequence"))?;
        }
    }
    let mut symbolic = 0;
    for base in ["z2", "chain2", "z3"] {
        for k in 1..=3 {
            for mask in 0..(1usize << k) {
                let zeta: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).collect();
                let run = omega_cbs_run(&corpus::get(base), k, &PeriodicSet::finite(&zeta), 32, &b())
                    .map_err(|e| e.to_string())?;
                let fails = omega_law_failures(&run);
                ensure(fails.is_empty(), || format!("{base} k={k} ζ={zeta:?}: {fails:?}"))?;
                symbolic += 1;
            }
        }
    }
    Ok(format!("{finite} finite and {symbolic} symbolic sequences"))
}

fn finite_triviality() -> Outcome {
    let mut checks = 0;
    for (name, a) in corpus::all() {
        for kind in kinds(name) {
            let v = cbs_property_check(&a, &kind, &b()).map_err(|e| e.to_string())?;
            ensure(v.holds && !v.nontrivial, || format!("{name} {kind}: holds={} nontrivial={}", v.holds, v.nontrivial))?;
            checks += 1;
        }
    }
    Ok(format!("{checks} (algebra, kind) pairs trivially CBS"))
}

fn worked_run() -> Result<OmegaRun, String> {
    omega_cbs_run(&corpus::get("z2"), 2, &PeriodicSet::finite(&[0]), 32, &b()).map_err(|e| e.to_string())
}

fn symbolic_cbs() -> Outcome {
    let start = Instant::now();
    let run = worked_run()?;
    for (n, s) in run.sigma.iter().enumerate() {
        ensure(*s == PeriodicSet::range(0, n), || format!("σ_{n} = {}", s.describe()))?;
    }
    for (n, d) in run.d.iter().enumerate() {
        ensure(*d == PeriodicSet::finite(&[2 * n]).complement(), || format!("d_{n} = {}", d.describe()))?;
    }
    let expect = [
        ("σ_ζ", &run.sigma_zeta, PeriodicSet::finite(&[0, 1]).union(&PeriodicSet::odds())),
        ("χ", &run.chi, PeriodicSet::odds()),
        ("¬χ", &run.neg_chi, PeriodicSet::finite(&[0]).union(&PeriodicSet::evens().difference(&PeriodicSet::finite(&[0])))),
    ];
    for (label, got, want) in expect {
        ensure(*got == want, || format!("{label} = {}", got.describe()))?;
    }
    ensure(run.certified(), || "isomorphism chain not certified".into())?;
    for m in [8, 16] {
        let v = truncate_validate(&run, m, 0, &b()).map_err(|e| e.to_string())?;
        ensure(v.passed, || format!("truncation m = {m}: {:?}", v.checks.iter().find(|c| !c.passed)))?;
    }
    let family = AffineFamily::shift_union(run.d[1].clone(), 2, run.theta.clone());
    let direct = intersect_d_terms(2, &[0], 257);
    for (x, &want) in direct.iter().enumerate() {
        ensure(infimum_member(&family, x) == want && run.sigma_zeta.contains(x) == want, || {
            format!("coordinate {x}")
        })?;
    }
    let took = start.elapsed();
    ensure(took < WORKED_RUN_LIMIT, || format!("took {took:?}"))?;
    Ok(format!("worked run exact, truncations 8 and 16 pass, 257 coordinates agree ({} ms)", took.as_millis()))
}

/// `⋂_{n≥1} dₙ` on `0..h`, running the recursion on bit vectors with
/// enough terms that every coordinate below `h` has settled.
fn intersect_d_terms(k: usize, zeta: &[usize], h: usize) -> Vec<bool> {
    let fhat = |s: &[bool]| (0..h).map(|x| x < k || s[x - k]).collect::<Vec<bool>>();
    let mut even = vec![false; h];
    let mut neg: Vec<bool> = (0..h).map(|x| !zeta.contains(&x)).collect();
    let mut acc = vec![true; h];
    for n in 0..=h {
        if n >= 1 {
            for x in 0..h {
                acc[x] &= even[x] || neg[x];
            }
        }
        even = fhat(&even);
        neg = fhat(&neg);
    }
    acc
}

fn quasicyclic() -> Outcome {
    let mut cases = 0;
    for (p, m) in [(2u64, 8u32), (3, 5)] {
        for n in 0..=3 {
            let r = quasicyclic_suite(p, n, m).map_err(|e| e.to_string())?;
            ensure(r.passed() && r.kernel_ok, || format!("p={p} n={n} m={m}: {r:?}"))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} truncations certified"))
}

/// A frozen fingerprint of what the suites compute for an algebra.
fn facts(a: &FiniteAlgebra) -> (Vec<Congruence>, Vec<Congruence>) {
    (
        all_congruences(a, &b()).unwrap().elements().to_vec(),
        factor_congruences(a, &b()).unwrap().elements(),
    )
}

fn table_mutation_detected(name: &str, a: &FiniteAlgebra, mutated: &FiniteAlgebra, frozen: &(Vec<Congruence>, Vec<Congruence>)) -> Option<String> {
    for s in corpus::axioms(name) {
        if let Ok(Some(w)) = counterexample(mutated, &s, b().max_evals) {
            return Some(format!("axiom {s} fails at {w:?}"));
        }
    }
    let (con, fc) = facts(mutated);
    let blocks = |v: &[Congruence]| v.iter().map(|c| c.blocks()).collect::<Vec<_>>();
    if blocks(&con) != blocks(&frozen.0) || blocks(&fc) != blocks(&frozen.1) {
        return Some(format!("Con/FC of {} changed", a.name()));
    }
    None
}

fn mutation_sensitivity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let targets: Vec<(&str, FiniteAlgebra)> = corpus::all().into_iter().filter(|(n, _)| !corpus::axioms(n).is_empty()).collect();
    let frozen: Vec<_> = targets.iter().map(|(_, a)| facts(a)).collect();
    let mut tables = 0;
    while tables < 40 {
        let i = rng.gen_range(0..targets.len());
        let (name, a) = &targets[i];
        let op = rng.gen_range(0..a.signature().len());
        let idx = rng.gen_range(0..a.table(op).len());
        let old = a.table(op)[idx];
        let new = (old + rng.gen_range(1..a.size())) % a.size();
        let mutated = a.with_entry(op, idx, new).unwrap();
        ensure(table_mutation_detected(name, a, &mutated, &frozen[i]).is_some(), || {
            format!("{name}: op {op} entry {idx} {old} -> {new} undetected")
        })?;
        tables += 1;
    }

    let run = worked_run()?;
    let mut sigmas = 0;
    for n in 0..run.sigma.len() {
        for x in [0, 1, 2 * n + 1, 3 * n + 2] {
            let mut bad = run.clone();
            let flip = PeriodicSet::finite(&[x]);
            let s = &bad.sigma[n];
            bad.sigma[n] = s.union(&flip).difference(&s.intersect(&flip));
            let caught = !omega_law_failures(&bad).is_empty()
                || !truncate_validate(&bad, 8, 0, &b()).map(|v| v.passed).unwrap_or(false);
            ensure(caught, || format!("σ_{n} with coordinate {x} flipped undetected"))?;
            sigmas += 1;
        }
    }
    let total = tables + sigmas;
    ensure(total >= 50, || format!("only {total} mutations"))?;
    Ok(format!("{tables} table and {sigmas} sequence mutations, all detected"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("con-oracle equivalence", con_oracle),
        ("factor-structure facts", factor_facts),
        ("transport laws", transport_laws),
        ("presheaf suite", presheaf_suite),
        ("sequence laws", sequence_laws),
        ("finite triviality", finite_triviality),
        ("symbolic CBS run", symbolic_cbs),
        ("quasi-cyclic quotients", quasicyclic),
        ("mutation sensitivity", mutation_sensitivity),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let ms = t.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail} [{ms} ms]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {why} [{ms} ms]", i + 1);
            }
        }
    }
    let total = start.elapsed();
    let in_time = total < TOTAL_LIMIT;
    println!("total: {} ms (limit {} s){}", total.as_millis(), TOTAL_LIMIT.as_secs(), if in_time { "" } else { " EXCEEDED" });
    if failed > 0 || !in_time {
        std::process::exit(1);
    }
}

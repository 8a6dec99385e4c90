mod common;

use std::collections::{BTreeSet, HashMap};

use proptest::prelude::*;

use cbswb::algebra::{direct_product, eval_term, iso_search, quotient_algebra, Homomorphism, IsoMode};
use cbswb::congruence::{all_congruences, principal_congruence, quotient_lift, LatticeOp, LiftDirection};
use cbswb::congruence::{lattice_op, pullback};
use cbswb::{corpus, Budget, Congruence, FiniteAlgebra, Term};

use common::*;

fn b() -> Budget {
    Budget::default()
}

#[test]
fn con_matches_partition_filter() {
    let algs = small_corpus();
    assert!(algs.len() >= 10);
    for (name, a) in algs {
        let got: BTreeSet<Vec<Vec<usize>>> = all_congruences(&a, &b()).unwrap().elements().iter().map(|c| c.blocks()).collect();
        assert_eq!(got, oracle_con(&a), "{name}");
    }
}

#[test]
fn canonical_order_is_by_block_count() {
    for (name, a) in corpus::all() {
        let con = all_congruences(&a, &b()).unwrap();
        let els = con.elements();
        assert!(els[0].is_identity() && els.last().unwrap().is_total(), "{name}");
        assert!(els.windows(2).all(|w| w[0].block_count() >= w[1].block_count() && w[0] < w[1]));
    }
}

#[test]
fn principal_is_least_containing() {
    for (name, a) in small_corpus() {
        let con = all_congruences(&a, &b()).unwrap();
        for x in 0..a.size() {
            for y in 0..a.size() {
                let mut meet = Congruence::total(&a);
                for c in con.elements().iter().filter(|c| c.related(x, y)) {
                    meet = meet.meet(c).unwrap();
                }
                assert_eq!(principal_congruence(&a, x, y).unwrap(), meet, "{name} ({x},{y})");
            }
        }
    }
}

#[test]
fn quotient_projection_has_kernel_theta() {
    for (name, a) in corpus::all() {
        for theta in all_congruences(&a, &b()).unwrap().elements() {
            let q = quotient_algebra(&a, theta).unwrap();
            assert!(q.projection.is_surjective(), "{name}");
            assert_eq!(&q.projection.kernel(), theta, "{name}");
            // re-verify the projection from scratch
            Homomorphism::new(&a, &q.algebra, q.projection.map().to_vec()).unwrap();
        }
    }
}

#[test]
fn product_projections_separate_points() {
    let pairs = [("z2", "z3"), ("chain2", "chain3"), ("z2", "v4"), ("ba2", "ba4")];
    for (x, y) in pairs {
        let (a, c) = (corpus::get(x), corpus::get(y));
        let p = direct_product(&a, &c).unwrap();
        Homomorphism::new(&p.algebra, &a, p.pi1.map().to_vec()).unwrap();
        Homomorphism::new(&p.algebra, &c, p.pi2.map().to_vec()).unwrap();
        let pairs: BTreeSet<(usize, usize)> = (0..p.algebra.size()).map(|e| (p.pi1.apply(e), p.pi2.apply(e))).collect();
        assert_eq!(pairs.len(), p.algebra.size());
    }
}

#[test]
fn iso_search_is_symmetric() {
    let algs = corpus::all();
    for (n1, a) in &algs {
        for (n2, c) in &algs {
            if a.signature() != c.signature() {
                continue;
            }
            let ab = iso_search(a, c, IsoMode::First, &b()).unwrap();
            let ba = iso_search(c, a, IsoMode::First, &b()).unwrap();
            assert_eq!(ab.is_empty(), ba.is_empty(), "{n1} {n2}");
            if let Some(f) = ab.first() {
                let inv = f.inverse().unwrap();
                Homomorphism::new(c, a, inv.map().to_vec()).unwrap();
            }
            if a.size() <= 6 {
                assert_eq!(!ab.is_empty(), isomorphic(a, c), "{n1} {n2}");
            }
        }
    }
}

#[test]
fn correspondence_quotients() {
    for (name, a) in small_corpus() {
        let con = all_congruences(&a, &b()).unwrap();
        for sigma in con.elements() {
            let q = quotient_algebra(&a, sigma).unwrap();
            let pull_along_p: Vec<Congruence> = all_congruences(&q.algebra, &b())
                .unwrap()
                .elements()
                .iter()
                .map(|r| pullback(&q.projection, r).unwrap())
                .collect();
            for theta in con.above(sigma) {
                let down = quotient_lift(LiftDirection::Down, &a, sigma, &theta).unwrap();
                let lifted = quotient_lift(LiftDirection::Up, &a, sigma, &down).unwrap();
                assert_eq!(lifted, theta, "{name}");
                assert_eq!(pullback(&q.projection, &down).unwrap(), theta);
                assert!(pull_along_p.contains(&theta));
                // (A/σ)/(θ/σ) ≅ A/θ
                let qq = quotient_algebra(&q.algebra, &down).unwrap();
                let at = quotient_algebra(&a, &theta).unwrap();
                assert!(!iso_search(&qq.algebra, &at.algebra, IsoMode::First, &b()).unwrap().is_empty());
            }
        }
    }
}

#[test]
fn compose_descends_to_quotients() {
    for (name, a) in small_corpus() {
        let con = all_congruences(&a, &b()).unwrap();
        for sigma in con.elements() {
            let q = quotient_algebra(&a, sigma).unwrap();
            let above = con.above(sigma);
            for t1 in &above {
                for t2 in &above {
                    let (rel, perm) = t1.compose(t2).unwrap();
                    let d1 = quotient_lift(LiftDirection::Down, &a, sigma, t1).unwrap();
                    let d2 = quotient_lift(LiftDirection::Down, &a, sigma, t2).unwrap();
                    let (qrel, _) = d1.compose(&d2).unwrap();
                    for x in 0..a.size() {
                        for y in 0..a.size() {
                            let (px, py) = (q.projection.apply(x), q.projection.apply(y));
                            assert_eq!(rel.contains(x, y), qrel.contains(px, py), "{name}");
                        }
                    }
                    if perm {
                        let j = lattice_op(LatticeOp::Join, t1, t2).unwrap();
                        assert_eq!(rel.pairs(), j.to_relation().pairs(), "{name}");
                    }
                }
            }
        }
    }
}

#[test]
fn chain3_permutability_witness() {
    let c3 = corpus::get("chain3");
    let t1 = Congruence::parse(&c3, "[[0,1],[2]]").unwrap();
    let t2 = Congruence::parse(&c3, "[[0],[1,2]]").unwrap();
    let (rel, perm) = t1.compose(&t2).unwrap();
    assert!(!perm);
    assert!(rel.contains(0, 2) && !rel.contains(2, 0));
}

fn term_strategy(names: Vec<(String, usize)>) -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![Just(Term::var("x")), Just(Term::var("y")), Just(Term::var("z"))];
    leaf.prop_recursive(4, 24, 3, move |inner| {
        let names = names.clone();
        (0..names.len(), prop::collection::vec(inner, 3)).prop_map(move |(i, args)| {
            let (name, arity) = &names[i];
            Term::app(name, args.into_iter().take(*arity).collect())
        })
    })
}

/// Table-driven evaluation written independently of the library evaluator.
fn eval_oracle(a: &FiniteAlgebra, t: &Term, env: &HashMap<String, usize>) -> usize {
    match t {
        Term::Var(v) => env[v],
        Term::App(name, args) => {
            let op = a.op_index(name).unwrap();
            let vals: Vec<usize> = args.iter().map(|s| eval_oracle(a, s, env)).collect();
            let idx = vals.iter().fold(0, |acc, &v| acc * a.size() + v);
            a.table(op)[idx]
        }
    }
}

fn op_names(a: &FiniteAlgebra) -> Vec<(String, usize)> {
    a.signature().ops().iter().filter(|o| o.arity > 0).map(|o| (o.name.clone(), o.arity)).collect()
}

fn algebra_and_term() -> impl Strategy<Value = (usize, Term, [usize; 3])> {
    let usable: Vec<usize> = (0..corpus::all().len()).filter(|&i| !op_names(&corpus::all()[i].1).is_empty()).collect();
    prop::sample::select(usable).prop_flat_map(|i| {
        let a = &corpus::all()[i].1;
        let n = a.size();
        (Just(i), term_strategy(op_names(a)), [0..n, 0..n, 0..n])
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn eval_term_is_compositional((i, t, vals) in algebra_and_term()) {
        let a = &corpus::all()[i].1;
        let env: HashMap<String, usize> = ["x", "y", "z"].iter().zip(vals).map(|(k, v)| (k.to_string(), v)).collect();
        prop_assert_eq!(eval_term(a, &t, &env).unwrap(), eval_oracle(a, &t, &env));
    }
}

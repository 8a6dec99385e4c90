//! Bundled algebras. Each file may also list axioms of its class, which the
//! mutation harness uses to notice corrupted tables.

use crate::algebra::{parse_document, AlgebraDocument, FiniteAlgebra, Sentence};

const FILES: &[(&str, &str)] = &[
    ("z2", include_str!("../corpus/z2.json")),
    ("z3", include_str!("../corpus/z3.json")),
    ("z4", include_str!("../corpus/z4.json")),
    ("z6", include_str!("../corpus/z6.json")),
    ("v4", include_str!("../corpus/v4.json")),
    ("s3", include_str!("../corpus/s3.json")),
    ("chain2", include_str!("../corpus/chain2.json")),
    ("chain3", include_str!("../corpus/chain3.json")),
    ("lattice2x2", include_str!("../corpus/lattice2x2.json")),
    ("chain2xchain3", include_str!("../corpus/chain2xchain3.json")),
    ("n5", include_str!("../corpus/n5.json")),
    ("m3", include_str!("../corpus/m3.json")),
    ("ba2", include_str!("../corpus/ba2.json")),
    ("ba4", include_str!("../corpus/ba4.json")),
    ("slat2", include_str!("../corpus/slat2.json")),
    ("z4ring", include_str!("../corpus/z4ring.json")),
    ("set3", include_str!("../corpus/set3.json")),
];

/// Group-signature members of the corpus (`+`, `neg`, `0`).
pub const ABELIAN_GROUPS: &[&str] = &["z2", "z3", "z4", "z6", "v4"];

/// Every group in the corpus, including the non-abelian `s3`.
pub const GROUPS: &[&str] = &["z2", "z3", "z4", "z6", "v4", "s3"];

pub fn names() -> impl Iterator<Item = &'static str> {
    FILES.iter().map(|(n, _)| *n)
}

pub fn source(name: &str) -> Option<&'static str> {
    FILES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn document(name: &str) -> Option<AlgebraDocument> {
    source(name).map(|s| parse_document(s).expect("bundled corpus file parses"))
}

/// Loads a bundled algebra; panics on an unknown name.
pub fn get(name: &str) -> FiniteAlgebra {
    document(name)
        .unwrap_or_else(|| panic!("no corpus algebra `{name}`"))
        .algebra
}

pub fn axioms(name: &str) -> Vec<Sentence> {
    document(name).map(|d| d.axioms).unwrap_or_default()
}

pub fn all() -> Vec<(&'static str, FiniteAlgebra)> {
    names().map(|n| (n, get(n))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::satisfies;

    #[test]
    fn every_file_satisfies_its_axioms() {
        for name in names() {
            let a = get(name);
            for s in axioms(name) {
                assert!(satisfies(&a, &s, 1_000_000).unwrap(), "{name}: {s}");
            }
        }
    }

    #[test]
    fn sizes() {
        assert_eq!(get("s3").size(), 6);
        assert_eq!(get("slat2").signature().len(), 3);
        assert!(get("set3").signature().is_empty());
    }
}

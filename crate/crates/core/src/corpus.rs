//! Exhaustive poset corpora and the named built-in posets.

use std::collections::BTreeMap;

use crate::coproduct::product_poset;
use crate::error::{Error, Result};
use crate::poset::Poset;
use crate::subset::Subset;

/// All posets on `n` elements, one per isomorphism class, in a deterministic order.
///
/// Naturally labelled posets are grown one element at a time (the new element
/// sits above an arbitrary downset of the old ones) and then deduplicated by
/// canonical form.
pub fn posets_of_size(n: usize) -> Vec<Poset> {
    let mut layer = vec![Poset::empty()];
    for k in 0..n {
        let mut next = Vec::new();
        for p in &layer {
            let downsets = p.dual().enumerate_upsets(usize::MAX).expect("uncapped");
            for below in downsets {
                let grown = Poset::from_relation(k + 1, |a, b| {
                    if b == k {
                        a == k || below.contains(a)
                    } else {
                        a != k && p.leq(a, b)
                    }
                })
                .expect("extension of a poset by a new maximal-position element");
                next.push(grown);
            }
        }
        layer = dedupe(next);
    }
    layer
}

fn dedupe(posets: Vec<Poset>) -> Vec<Poset> {
    let mut seen = BTreeMap::new();
    for p in posets {
        seen.entry(p.canonical_key()).or_insert(p);
    }
    seen.into_values().collect()
}

/// All posets with at most `n` elements up to isomorphism, smallest first.
pub fn posets_up_to(n: usize) -> Vec<Poset> {
    (0..=n).flat_map(posets_of_size).collect()
}

/// All root systems with at most `n` elements up to isomorphism.
pub fn root_systems_up_to(n: usize) -> Vec<Poset> {
    posets_up_to(n).into_iter().filter(Poset::is_root_system).collect()
}

/// The `k`-fold power of the 2-element chain, with tuple labels such as `(0,1)`.
pub fn cube(k: usize) -> Poset {
    let factors = vec![Poset::chain(2); k];
    product_poset(&factors, usize::MAX).expect("uncapped").poset
}

/// Resolves a built-in poset name: `point`, `empty`, `chain-k`, `antichain-k`, `d4`, `cube-k`.
pub fn named(name: &str) -> Result<Poset> {
    let param = |prefix: &str| -> Option<Result<usize>> {
        name.strip_prefix(prefix).map(|rest| {
            rest.parse::<usize>()
                .map_err(|_| Error::invalid(format!("bad size in poset name `{name}`")))
        })
    };
    if let Some(k) = param("chain-") {
        return Ok(Poset::chain(k?));
    }
    if let Some(k) = param("antichain-") {
        return Ok(Poset::antichain(k?));
    }
    if let Some(k) = param("cube-") {
        let k = k?;
        if k > 6 {
            return Err(Error::Resource { cap: "cube", limit: 6 });
        }
        return Ok(cube(k));
    }
    match name {
        "point" => Ok(Poset::chain(1)),
        "empty" => Ok(Poset::empty()),
        "d4" | "diamond" => Ok(cube(2)),
        _ => Err(Error::invalid(format!("unknown poset name `{name}`"))),
    }
}

/// Resolves a built-in algebra name to the poset whose upset algebra it is.
///
/// `twochain`/`threechain`/... name the chain algebras with that many
/// elements; `boolean-k` is the Boolean algebra with `k` atoms; any poset
/// name stands for its upset algebra.
pub fn named_algebra_dual(name: &str) -> Result<Poset> {
    const WORDS: [&str; 7] = ["one", "two", "three", "four", "five", "six", "seven"];
    if let Some(stem) = name.strip_suffix("chain") {
        if let Some(i) = WORDS.iter().position(|w| *w == stem) {
            return Ok(Poset::chain(i));
        }
    }
    if let Some(k) = name.strip_prefix("boolean-") {
        let k = k
            .parse::<usize>()
            .map_err(|_| Error::invalid(format!("bad size in algebra name `{name}`")))?;
        return Ok(Poset::antichain(k));
    }
    named(name)
}

/// Uniform choice of a subset of `0..n`, used by the seeded property runs.
pub fn random_subset(rng: &mut impl rand::Rng, n: usize) -> Subset {
    Subset::from_indices(n, (0..n).filter(|_| rng.gen_bool(0.5)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isomorphism_class_counts() {
        let counts: Vec<usize> = (0..=5).map(|n| posets_of_size(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 16, 63]);
    }

    #[test]
    fn root_system_counts() {
        // Rooted forests read upside down: 1, 1, 2, 4, 9 unlabelled forests.
        let counts: Vec<usize> = (0..=4)
            .map(|n| posets_of_size(n).into_iter().filter(Poset::is_root_system).count())
            .collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 9]);
    }

    #[test]
    fn names_resolve() {
        assert_eq!(named("chain-3").unwrap(), Poset::chain(3));
        assert_eq!(named("d4").unwrap().size(), 4);
        assert_eq!(named("d4").unwrap().label(1), "(0,1)");
        assert_eq!(named("cube-3").unwrap().size(), 8);
        assert!(named("nonsense").is_err());
        assert_eq!(named_algebra_dual("threechain").unwrap(), Poset::chain(2));
        assert_eq!(named_algebra_dual("boolean-2").unwrap(), Poset::antichain(2));
    }
}

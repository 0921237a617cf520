//! The nerve of a poset and its relation to the chain space.
//!
//! Covers the iterated upset `↟`, upsets of basic sets of chains, the
//! lower-segment unravelling, the nerve `(cc(X), ⊇)`, m-open chains of chains
//! and the comparison of the m-open space with `(cc(X), ⊴)`.

use std::collections::HashMap;

use crate::chainspace::{cc, ChainPoset, Variant};
use crate::error::{Error, Result};
use crate::lattice::upset_lattice;
use crate::poset::{Chain, Poset};
use crate::subset::Subset;
use crate::suites::Certificate;
use crate::Limits;

/// Largest family accepted by [`TwoheadUp::eval`]; the recursion visits every subfamily.
pub const TWOHEAD_MAX_FAMILY: usize = 6;

/// Evaluates `↟{A_1, ..., A_n}` with memoization over subfamilies.
pub struct TwoheadUp<'a> {
    poset: &'a Poset,
    memo: HashMap<Vec<Subset>, Subset>,
}

impl<'a> TwoheadUp<'a> {
    pub fn new(poset: &'a Poset) -> Self {
        TwoheadUp { poset, memo: HashMap::new() }
    }

    /// `↟∅ = X` and `↟{A_1..A_n} = ⋃_i ↑(↟{A_j | j ≠ i} ∩ A_i)`.
    pub fn eval(&mut self, family: &[Subset]) -> Result<Subset> {
        if family.len() > TWOHEAD_MAX_FAMILY {
            return Err(Error::Resource { cap: "family", limit: TWOHEAD_MAX_FAMILY });
        }
        for a in family {
            crate::error::check_dim(self.poset.size(), a.universe())?;
        }
        let mut key = family.to_vec();
        key.sort();
        Ok(self.eval_sorted(key))
    }

    fn eval_sorted(&mut self, family: Vec<Subset>) -> Subset {
        if let Some(hit) = self.memo.get(&family) {
            return hit.clone();
        }
        let n = self.poset.size();
        let value = if family.is_empty() {
            Subset::full(n)
        } else {
            let mut out = Subset::empty(n);
            for i in 0..family.len() {
                let mut rest = family.clone();
                let a = rest.remove(i);
                let inner = self.eval_sorted(rest).intersection(&a);
                out.union_with(&self.poset.up_set(&inner).expect("same carrier"));
            }
            out
        };
        self.memo.insert(family, value.clone());
        value
    }
}

/// `⇑(□V ∩ ◇W_1 ∩ … ∩ ◇W_n)` by the union over `I ⊆ {1..n}` of
/// `□(V ∩ ↟{W_i | i ∈ I}) ∩ ⋂_{j ∉ I} ◇W_j`.
pub fn upset_of_basic(space: &ChainPoset, up: &mut TwoheadUp, v: &Subset, ws: &[Subset]) -> Result<Subset> {
    if ws.iter().any(|w| !w.is_subset(v)) {
        return Err(Error::precondition("every W must be contained in V"));
    }
    let n = ws.len();
    if n > TWOHEAD_MAX_FAMILY {
        return Err(Error::Resource { cap: "family", limit: TWOHEAD_MAX_FAMILY });
    }
    let mut out = Subset::empty(space.len());
    for mask in 0u32..(1 << n) {
        let chosen: Vec<Subset> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| ws[i].clone()).collect();
        let mut term = space.box_set(&v.intersection(&up.eval(&chosen)?))?;
        for (j, w) in ws.iter().enumerate() {
            if mask >> j & 1 == 0 {
                term.intersect_with(&space.diamond_set(w)?);
            }
        }
        out.union_with(&term);
    }
    Ok(out)
}

/// The same upset computed directly from the order table.
pub fn upset_of_basic_direct(space: &ChainPoset, v: &Subset, ws: &[Subset]) -> Result<Subset> {
    let mut basic = space.box_set(v)?;
    for w in ws {
        basic.intersect_with(&space.diamond_set(w)?);
    }
    space.up_closure(&basic)
}

/// `x ↦ {x}`, checked to be a bijection onto the maximal chains.
pub fn max_cc_iso(space: &ChainPoset) -> Result<Vec<usize>> {
    let map: Vec<usize> = (0..space.base().size())
        .map(|x| space.index_of(&[x]).ok_or_else(|| Error::invalid("singleton chain missing")))
        .collect::<Result<_>>()?;
    let mut image = map.clone();
    image.sort_unstable();
    if image != space.order().maximal() {
        return Err(Error::invalid("singletons are not exactly the maximal chains"));
    }
    Ok(map)
}

/// All chains ordered by `C1 ⊴′ C2` iff `C1` is a lower segment of `C2`, with the
/// greatest-element map back to `X`.
pub fn unravel(x: &Poset, limits: &Limits) -> Result<(ChainPoset, Vec<usize>)> {
    let chains = x.enumerate_chains(limits.chains)?;
    let space = ChainPoset::from_chains(x.clone(), chains, Variant::Unravel, limits)?;
    let top = space.greatest_map();
    Ok((space, top))
}

/// All chains ordered by reverse inclusion.
pub fn nerve(x: &Poset, limits: &Limits) -> Result<ChainPoset> {
    let chains = x.enumerate_chains(limits.chains)?;
    ChainPoset::from_chains(x.clone(), chains, Variant::Nerve, limits)
}

/// Whether a chain of the nerve is m-open: for each member `C1` and each nonempty
/// `C2 ⊆ C1` some member `C3 ⊆ C1` has the same least element as `C2`.
pub fn is_m_open(nerve: &ChainPoset, members: &[usize]) -> bool {
    let base = nerve.base();
    members.iter().all(|&c1| {
        let outer = nerve.chain(c1);
        // The least elements of nonempty subsets of C1 are exactly the elements of C1.
        let sub_leasts: Vec<usize> = subchain_leasts(base, outer);
        sub_leasts.iter().all(|&x| {
            members.iter().any(|&c3| {
                let inner = nerve.chain(c3);
                inner.mask().is_subset(outer.mask()) && inner.least() == x
            })
        })
    })
}

fn subchain_leasts(base: &Poset, c: &Chain) -> Vec<usize> {
    let k = c.len();
    let mut out: Vec<usize> = (1u64..(1 << k))
        .map(|mask| {
            let sub: Vec<usize> = (0..k).filter(|b| mask >> b & 1 == 1).map(|b| c.elements()[b]).collect();
            Chain::new(base, sub).expect("subset of a chain").least()
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// The m-open chains of the nerve, ordered by reverse inclusion, over the nerve's order as base.
pub fn z_space(x: &Poset, limits: &Limits) -> Result<(ChainPoset, ChainPoset)> {
    let nv = nerve(x, limits)?;
    let chains: Vec<Chain> = nv
        .order()
        .enumerate_chains(limits.chains)?
        .into_iter()
        .filter(|c| is_m_open(&nv, c.elements()))
        .collect();
    let z = ChainPoset::from_chains(nv.order().clone(), chains, Variant::MOpen, limits)?;
    Ok((nv, z))
}

/// Checks that `C ↦ ⇑C` is an order isomorphism `(cc(X), ⊴) → (Z, ⊇)`.
pub fn z_iso_check(x: &Poset, limits: &Limits) -> Result<Certificate> {
    let space = cc(x, limits)?;
    let (_, z) = z_space(x, limits)?;
    let mut cert = Certificate::new("z-iso");
    let mut map = Vec::with_capacity(space.len());
    for i in 0..space.len() {
        // Chains of cc(X) and of the nerve share indices, so ⇑C is directly a chain of the nerve.
        let up = space.order().up_of(i).to_vec();
        match z.index_of(&up) {
            Some(j) => map.push(j),
            None => {
                cert.case(false, || format!("⇑{} is not an m-open chain", space.label(i)));
                map.push(usize::MAX);
            }
        }
    }
    if !cert.passed() {
        return Ok(cert);
    }
    let mut image = map.clone();
    image.sort_unstable();
    image.dedup();
    cert.case(image.len() == z.len() && image.len() == space.len(), || {
        format!("{} chains map onto {} of {} m-open chains", space.len(), image.len(), z.len())
    });
    for a in 0..space.len() {
        for b in 0..space.len() {
            let lhs = space.order().leq(a, b);
            let rhs = z.order().leq(map[a], map[b]);
            cert.case(lhs == rhs, || format!("order mismatch at {} / {}", space.label(a), space.label(b)));
        }
    }
    cert.note(format!("{} ↔ {}", space.len(), z.len()));
    Ok(cert)
}

/// Checks `□U1 → □U2 = □((X ∖ U1) ∪ U2)` in the upset algebra of `(cc(X), ⊴)` for all upsets.
pub fn implication_box_formula_check(x: &Poset, limits: &Limits) -> Result<Certificate> {
    let space = cc(x, limits)?;
    let alg = upset_lattice(space.order(), limits.upsets)?;
    let upsets = x.enumerate_upsets(limits.upsets)?;
    let full = Subset::full(x.size());
    let mut cert = Certificate::new("implication");
    let elem = |s: &Subset| alg.element(s).ok_or_else(|| Error::invalid("box of a set is not a chain upset"));
    for u1 in &upsets {
        for u2 in &upsets {
            let lhs = alg.algebra().imp(elem(&space.box_set(u1)?)?, elem(&space.box_set(u2)?)?);
            let rhs = elem(&space.box_set(&full.difference(u1).union(u2))?)?;
            cert.case(lhs == rhs, || format!("U1={u1:?}, U2={u2:?}"));
        }
    }
    Ok(cert)
}

/// Checks that the upsets of the nerve are exactly the unions of sets `□V`.
pub fn nerve_upset_characterization_check(x: &Poset, limits: &Limits) -> Result<Certificate> {
    let nv = nerve(x, limits)?;
    let space = cc(x, limits)?;
    let mut cert = Certificate::new("upsets");
    let n = x.size();
    if n >= 32 {
        return Err(Error::Resource { cap: "subsets", limit: 31 });
    }
    let mut boxes: Vec<Subset> = (0u64..(1 << n)).map(|m| nv.box_set(&Subset::from_mask(n, m))).collect::<Result<_>>()?;
    boxes.sort();
    boxes.dedup();
    for b in &boxes {
        cert.case(nv.order().is_upset(b), || format!("□ of {b:?} is not a nerve upset"));
    }
    // Close {∅} ∪ boxes under binary unions.
    let mut unions: std::collections::BTreeSet<Subset> = boxes.iter().cloned().collect();
    unions.insert(Subset::empty(nv.len()));
    loop {
        let current: Vec<Subset> = unions.iter().cloned().collect();
        let before = unions.len();
        for a in &current {
            for b in &boxes {
                unions.insert(a.union(b));
            }
        }
        if unions.len() > limits.upsets {
            return Err(Error::Resource { cap: "upsets", limit: limits.upsets });
        }
        if unions.len() == before {
            break;
        }
    }
    let upsets: std::collections::BTreeSet<Subset> = nv.order().enumerate_upsets(limits.upsets)?.into_iter().collect();
    cert.case(upsets == unions, || {
        format!("{} nerve upsets against {} unions of boxes", upsets.len(), unions.len())
    });
    // Every nerve upset is an upset for ⊴ as well, since ⊇ extends ⊴.
    for u in &upsets {
        cert.case(space.order().is_upset(u), || format!("{u:?} is a nerve upset but not a chain-space upset"));
    }
    cert.note(format!("{} upsets", upsets.len()));
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::poset::PMorph;

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn twohead_examples() {
        let d4 = corpus::named("d4").unwrap();
        let mut up = TwoheadUp::new(&d4);
        assert_eq!(up.eval(&[]).unwrap(), Subset::full(4));
        let a = Subset::singleton(4, 1);
        assert_eq!(up.eval(&[a.clone()]).unwrap(), d4.up_set(&a).unwrap());
        let b = Subset::singleton(4, 2);
        assert!(up.eval(&[a, b]).unwrap().is_empty());
        let too_many = vec![Subset::empty(4); 7];
        assert!(matches!(up.eval(&too_many), Err(Error::Resource { .. })));
    }

    #[test]
    fn basic_upset_examples() {
        let d4 = corpus::named("d4").unwrap();
        let space = cc(&d4, &lim()).unwrap();
        let mut up = TwoheadUp::new(&d4);
        let v = Subset::full(4);
        let w = Subset::singleton(4, 0);
        let formula = upset_of_basic(&space, &mut up, &v, &[w.clone()]).unwrap();
        assert_eq!(formula, upset_of_basic_direct(&space, &v, &[w]).unwrap());
        assert_eq!(formula.count(), 11);
        let v = Subset::from_indices(4, [1, 3]);
        assert_eq!(upset_of_basic(&space, &mut up, &v, &[]).unwrap(), space.box_set(&v).unwrap());
        assert!(upset_of_basic(&space, &mut up, &v, &[Subset::singleton(4, 0)]).is_err());
    }

    #[test]
    fn maximal_chains_are_singletons() {
        let d4 = corpus::named("d4").unwrap();
        assert_eq!(max_cc_iso(&cc(&d4, &lim()).unwrap()).unwrap().len(), 4);
        assert_eq!(max_cc_iso(&cc(&Poset::chain(3), &lim()).unwrap()).unwrap().len(), 3);
    }

    #[test]
    fn unravel_two_chain() {
        let (space, m) = unravel(&Poset::chain(2), &lim()).unwrap();
        let (a, b, ab) = (space.index_of(&[0]).unwrap(), space.index_of(&[1]).unwrap(), space.index_of(&[0, 1]).unwrap());
        assert!(space.order().leq(a, ab));
        assert!(!space.order().comparable(b, ab));
        assert!(space.order().is_forest());
        assert!(PMorph::new(space.order(), space.base(), m).unwrap().is_p_morphism());
    }

    #[test]
    fn nerve_examples() {
        let nv = nerve(&Poset::chain(2), &lim()).unwrap();
        let ab = nv.index_of(&[0, 1]).unwrap();
        assert!(nv.order().leq(ab, nv.index_of(&[0]).unwrap()));
        assert!(nv.order().leq(ab, nv.index_of(&[1]).unwrap()));
        assert!(nerve(&Poset::antichain(3), &lim()).unwrap().order().covers().is_empty());
        assert!(!nerve(&corpus::named("d4").unwrap(), &lim()).unwrap().order().is_root_system());
    }

    #[test]
    fn m_open_examples() {
        let nv = nerve(&Poset::chain(2), &lim()).unwrap();
        let (ab, b) = (nv.index_of(&[0, 1]).unwrap(), nv.index_of(&[1]).unwrap());
        assert!(is_m_open(&nv, &[b]));
        assert!(is_m_open(&nv, &[ab, b]));
        assert!(!is_m_open(&nv, &[ab]));
    }

    #[test]
    fn z_space_sizes() {
        assert_eq!(z_space(&Poset::chain(1), &lim()).unwrap().1.len(), 1);
        assert_eq!(z_space(&Poset::chain(2), &lim()).unwrap().1.len(), 3);
        let cert = z_iso_check(&corpus::named("d4").unwrap(), &lim()).unwrap();
        assert!(cert.passed(), "{:?}", cert.failures);
        assert_eq!(cert.notes, vec!["11 ↔ 11".to_string()]);
    }

    #[test]
    fn implication_and_upsets_on_d4() {
        let d4 = corpus::named("d4").unwrap();
        let cert = implication_box_formula_check(&d4, &lim()).unwrap();
        assert!(cert.passed());
        assert!(cert.cases >= 36);
        assert!(nerve_upset_characterization_check(&d4, &lim()).unwrap().passed());
        let point = Poset::chain(1);
        let cert = nerve_upset_characterization_check(&point, &lim()).unwrap();
        assert!(cert.passed());
    }
}

//! Spaces of nonempty chains.
//!
//! `cc(X)` is the set of nonempty chains of `X` ordered by `C1 ⊴ C2` iff `C2`
//! is an upper segment of `C1`. The same chain lists are reused with reverse
//! inclusion (the nerve) and with the lower-segment order (the unravelling).

use std::collections::HashMap;

use crate::error::{check_dim, Error, Result};
use crate::poset::{chain_index, enumerate_p_morphisms, Chain, PMorph, Poset};
use crate::subset::Subset;
use crate::Limits;

/// Which construction produced a chain space; it also fixes the order used.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// All chains, ordered by upper segments.
    Full,
    /// Chains of size at most `n`, ordered by upper segments.
    DepthBounded(usize),
    /// Chains of a product whose projections are upsets, ordered by upper segments.
    Tensor,
    /// All chains, ordered by reverse inclusion.
    Nerve,
    /// Chains of a nerve that are closed under the least-element condition, by reverse inclusion.
    MOpen,
    /// All chains, ordered by lower segments.
    Unravel,
}

impl Variant {
    fn name(&self) -> String {
        match self {
            Variant::Full => "full".into(),
            Variant::DepthBounded(n) => format!("depth-bounded({n})"),
            Variant::Tensor => "tensor".into(),
            Variant::Nerve => "nerve".into(),
            Variant::MOpen => "m-open".into(),
            Variant::Unravel => "unravel".into(),
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.name())
    }
}

/// A list of chains of a base poset together with an order on the list.
#[derive(Clone, Debug)]
pub struct ChainPoset {
    base: Poset,
    chains: Vec<Chain>,
    order: Poset,
    variant: Variant,
    index: HashMap<Vec<usize>, usize>,
}

/// `C1 ⊴ C2`: the least element of `C2` lies in `C1` and `C2 = ↑m(C2) ∩ C1`.
pub fn leq_cc(parent: &Poset, c1: &Chain, c2: &Chain) -> Result<bool> {
    check_dim(parent.size(), c1.mask().universe())?;
    check_dim(parent.size(), c2.mask().universe())?;
    let x = c2.least();
    Ok(c1.mask().contains(x) && &parent.up_of(x).intersection(c1.mask()) == c2.mask())
}

/// `C1 ⊴ C2` read off the definition: `C2 ⊆ C1` and `C2` is an upset of `C1`.
pub fn leq_cc_definitional(parent: &Poset, c1: &Chain, c2: &Chain) -> bool {
    c2.mask().is_subset(c1.mask())
        && c2
            .elements()
            .iter()
            .all(|&y| c1.elements().iter().all(|&x| !parent.leq(y, x) || c2.mask().contains(x)))
}

impl ChainPoset {
    /// Orders a canonical chain list according to `variant`.
    ///
    /// The upper-segment orders require the list to be closed under upper
    /// segments and the lower-segment order under lower segments; the
    /// reverse-inclusion order looks up every nonempty subchain.
    pub fn from_chains(base: Poset, chains: Vec<Chain>, variant: Variant, limits: &Limits) -> Result<Self> {
        if chains.len() > limits.order {
            return Err(Error::Resource { cap: "order", limit: limits.order });
        }
        let index = chain_index(&chains);
        let n = chains.len();
        let lookup = |elements: &[usize]| index.get(elements).copied();
        let mut up = vec![Subset::empty(n); n];
        match variant {
            Variant::Full | Variant::DepthBounded(_) | Variant::Tensor => {
                for (i, c) in chains.iter().enumerate() {
                    for &x in c.elements() {
                        let seg: Vec<usize> = c.elements().iter().copied().filter(|&y| base.leq(x, y)).collect();
                        let j = lookup(&seg)
                            .ok_or_else(|| Error::invalid("chain list is not closed under upper segments"))?;
                        up[i].insert(j);
                    }
                }
            }
            Variant::Nerve | Variant::MOpen => {
                for (i, c) in chains.iter().enumerate() {
                    let k = c.len();
                    if k >= 64 {
                        return Err(Error::Resource { cap: "chain length", limit: 63 });
                    }
                    for mask in 1u64..(1 << k) {
                        let sub: Vec<usize> = (0..k).filter(|b| mask >> b & 1 == 1).map(|b| c.elements()[b]).collect();
                        if let Some(j) = lookup(&sub) {
                            up[i].insert(j);
                        }
                    }
                }
            }
            Variant::Unravel => {
                for (j, c) in chains.iter().enumerate() {
                    for &x in c.elements() {
                        let seg: Vec<usize> = c.elements().iter().copied().filter(|&y| base.leq(y, x)).collect();
                        let i = lookup(&seg)
                            .ok_or_else(|| Error::invalid("chain list is not closed under lower segments"))?;
                        up[i].insert(j);
                    }
                }
            }
        }
        let order = Poset::from_up_sets(up);
        let labels = chains.iter().map(|c| c.render(&base)).collect();
        let order = order.with_labels(labels)?;
        Ok(ChainPoset { base, chains, order, variant, index })
    }

    pub fn base(&self) -> &Poset {
        &self.base
    }

    pub fn chains(&self) -> &[Chain] {
        &self.chains
    }

    pub fn chain(&self, i: usize) -> &Chain {
        &self.chains[i]
    }

    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    /// The order on chain indices.
    pub fn order(&self) -> &Poset {
        &self.order
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// Index of the chain with the given elements (in any order).
    pub fn index_of(&self, elements: &[usize]) -> Option<usize> {
        let mut key = elements.to_vec();
        key.sort_unstable();
        key.dedup();
        self.index.get(&key).copied()
    }

    pub fn index_of_mask(&self, mask: &Subset) -> Option<usize> {
        self.index.get(&mask.to_vec()).copied()
    }

    /// `□A`: the chains contained in `A`.
    pub fn box_set(&self, a: &Subset) -> Result<Subset> {
        check_dim(self.base.size(), a.universe())?;
        Ok(self.select(|c| c.mask().is_subset(a)))
    }

    /// `◇A`: the chains meeting `A`.
    pub fn diamond_set(&self, a: &Subset) -> Result<Subset> {
        check_dim(self.base.size(), a.universe())?;
        Ok(self.select(|c| c.mask().intersects(a)))
    }

    fn select(&self, keep: impl Fn(&Chain) -> bool) -> Subset {
        Subset::from_indices(self.len(), (0..self.len()).filter(|&i| keep(&self.chains[i])))
    }

    /// The preimage of an upset under the least-element map.
    pub fn minv_up(&self, u: &Subset) -> Result<Subset> {
        check_dim(self.base.size(), u.universe())?;
        if !self.base.is_upset(u) {
            return Err(Error::precondition("subset is not an upset"));
        }
        Ok(self.select(|c| u.contains(c.least())))
    }

    /// The preimage of a downset under the least-element map.
    pub fn minv_down(&self, d: &Subset) -> Result<Subset> {
        check_dim(self.base.size(), d.universe())?;
        if !self.base.is_downset(d) {
            return Err(Error::precondition("subset is not a downset"));
        }
        Ok(self.select(|c| d.contains(c.least())))
    }

    /// Upward closure of a set of chains in this space's order.
    pub fn up_closure(&self, s: &Subset) -> Result<Subset> {
        self.order.up_set(s)
    }

    /// Downward closure of a set of chains in this space's order.
    pub fn down_closure(&self, s: &Subset) -> Result<Subset> {
        self.order.down_set(s)
    }

    /// The least-element map as a list of base indices.
    pub fn least_map(&self) -> Vec<usize> {
        self.chains.iter().map(Chain::least).collect()
    }

    pub fn greatest_map(&self) -> Vec<usize> {
        self.chains.iter().map(Chain::greatest).collect()
    }

    /// The subspace of chains accepted by `keep`, reordered under `variant`.
    pub fn filter(&self, keep: impl Fn(&Chain) -> bool, variant: Variant, limits: &Limits) -> Result<Self> {
        let chains = self.chains.iter().filter(|c| keep(c)).cloned().collect();
        Self::from_chains(self.base.clone(), chains, variant, limits)
    }

    /// Node label of chain `i`, `{x1,...,xk}` in the base labels.
    pub fn label(&self, i: usize) -> String {
        self.chains[i].render(&self.base)
    }
}

/// `(cc(X), ⊴)`.
pub fn cc(x: &Poset, limits: &Limits) -> Result<ChainPoset> {
    let chains = x.enumerate_chains(limits.chains)?;
    ChainPoset::from_chains(x.clone(), chains, Variant::Full, limits)
}

/// Chains of size at most `n`, with the induced order.
pub fn cc_n(x: &Poset, n: usize, limits: &Limits) -> Result<ChainPoset> {
    let chains = x.enumerate_chains(limits.chains)?.into_iter().filter(|c| c.len() <= n).collect();
    ChainPoset::from_chains(x.clone(), chains, Variant::DepthBounded(n), limits)
}

/// The action of an order-preserving map `f: X1 → X2` on chains, `C ↦ f[C]`.
pub fn cc_map(src: &ChainPoset, dst: &ChainPoset, f: &[usize]) -> Result<Vec<usize>> {
    let pm = PMorph::new(src.base(), dst.base(), f.to_vec())?;
    if !pm.is_monotone() {
        return Err(Error::precondition("map is not order-preserving"));
    }
    src.chains()
        .iter()
        .map(|c| {
            let image: Vec<usize> = c.elements().iter().map(|&x| f[x]).collect();
            dst.index_of(&image)
                .ok_or_else(|| Error::precondition("image chain is missing from the target space"))
        })
        .collect()
}

/// The map `y ↦ f[↑y]` from a root system into a chain space.
pub fn universal_extension(y: &Poset, space: &ChainPoset, f: &[usize]) -> Result<Vec<usize>> {
    if !y.is_root_system() {
        return Err(Error::precondition("domain is not a root system"));
    }
    let pm = PMorph::new(y, space.base(), f.to_vec())?;
    if !pm.is_monotone() {
        return Err(Error::precondition("map is not order-preserving"));
    }
    (0..y.size())
        .map(|v| {
            let image: Vec<usize> = y.up_of(v).iter().map(|w| f[w]).collect();
            space
                .index_of(&image)
                .ok_or_else(|| Error::precondition("image chain is missing from the target space"))
        })
        .collect()
}

/// All p-morphisms `g: Y → space` with `m ∘ g = f`, by exhaustive search.
pub fn factorizations_through_least(
    y: &Poset,
    space: &ChainPoset,
    f: &[usize],
    cap: usize,
) -> Result<Vec<Vec<usize>>> {
    check_dim(y.size(), f.len())?;
    let least = space.least_map();
    let by_least: Vec<Subset> = (0..space.base().size())
        .map(|x| Subset::from_indices(space.len(), (0..space.len()).filter(|&i| least[i] == x)))
        .collect();
    enumerate_p_morphisms(y, space.order(), |v| by_least[f[v]].clone(), cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn cc_of_two_chain() {
        let s = cc(&Poset::chain(2), &lim()).unwrap();
        assert_eq!(s.len(), 3);
        let both = s.index_of(&[0, 1]).unwrap();
        let top = s.index_of(&[1]).unwrap();
        let bottom = s.index_of(&[0]).unwrap();
        assert!(s.order().leq(both, top));
        assert!(!s.order().comparable(both, bottom));
        assert!(s.order().is_root_system());
    }

    #[test]
    fn cc_of_antichain_is_antichain() {
        let s = cc(&Poset::antichain(3), &lim()).unwrap();
        assert_eq!(s.len(), 3);
        assert!(s.order().covers().is_empty());
    }

    #[test]
    fn diamond_examples() {
        let d4 = corpus::named("d4").unwrap();
        let s = cc(&d4, &lim()).unwrap();
        assert_eq!(s.len(), 11);
        assert!(s.order().is_root_system());
        let top = Subset::singleton(4, 3);
        assert_eq!(s.box_set(&top).unwrap().to_vec(), vec![s.index_of(&[3]).unwrap()]);
        let a = Subset::singleton(4, 1);
        let mut expected: Vec<usize> =
            [vec![1], vec![0, 1], vec![1, 3], vec![0, 1, 3]].iter().map(|c| s.index_of(c).unwrap()).collect();
        expected.sort();
        assert_eq!(s.diamond_set(&a).unwrap().to_vec(), expected);
        assert_eq!(s.box_set(&Subset::full(4)).unwrap().count(), 11);
        assert!(s.diamond_set(&Subset::empty(4)).unwrap().is_empty());
        assert!(s.box_set(&Subset::empty(3)).is_err());
    }

    #[test]
    fn leq_examples_in_d4() {
        let d4 = corpus::named("d4").unwrap();
        let c = |v: Vec<usize>| Chain::new(&d4, v).unwrap();
        assert!(leq_cc(&d4, &c(vec![0, 3]), &c(vec![3])).unwrap());
        assert!(!leq_cc(&d4, &c(vec![0]), &c(vec![3])).unwrap());
        assert!(leq_cc(&d4, &c(vec![0, 1, 3]), &c(vec![0, 1, 3])).unwrap());
        let x = c(vec![0, 3]);
        assert_eq!((x.least(), x.greatest()), (0, 3));
    }

    #[test]
    fn preimages_of_least() {
        let d4 = corpus::named("d4").unwrap();
        let s = cc(&d4, &lim()).unwrap();
        let top = Subset::singleton(4, 3);
        assert_eq!(s.minv_up(&top).unwrap(), s.box_set(&top).unwrap());
        let bot = Subset::singleton(4, 0);
        assert_eq!(s.minv_down(&bot).unwrap(), s.diamond_set(&bot).unwrap());
        assert!(matches!(s.minv_up(&bot), Err(Error::Precondition(_))));
    }

    #[test]
    fn depth_bounded_spaces() {
        let d4 = corpus::named("d4").unwrap();
        assert_eq!(cc_n(&d4, 0, &lim()).unwrap().len(), 0);
        assert_eq!(cc_n(&d4, 1, &lim()).unwrap().order().covers().len(), 0);
        let two = cc_n(&d4, 2, &lim()).unwrap();
        assert_eq!(two.len(), 9);
        let (restricted, _) = cc(&d4, &lim()).unwrap().order().restrict_to_depth(2).unwrap();
        assert!(restricted.isomorphism(two.order()).is_some());
    }

    #[test]
    fn collapse_map() {
        let d4 = corpus::named("d4").unwrap();
        let src = cc(&d4, &lim()).unwrap();
        let dst = cc(&Poset::chain(2), &lim()).unwrap();
        let g = cc_map(&src, &dst, &[0, 1, 1, 1]).unwrap();
        assert_eq!(g[src.index_of(&[0, 1, 3]).unwrap()], dst.index_of(&[0, 1]).unwrap());
        let pm = PMorph::new(src.order(), dst.order(), g).unwrap();
        assert!(pm.is_p_morphism());
        assert!(matches!(cc_map(&src, &dst, &[1, 0, 0, 0]), Err(Error::Precondition(_))));
    }

    #[test]
    fn extension_of_identity_on_two_chain() {
        let two = Poset::chain(2);
        let s = cc(&two, &lim()).unwrap();
        let g = universal_extension(&two, &s, &[0, 1]).unwrap();
        assert_eq!(g, vec![s.index_of(&[0, 1]).unwrap(), s.index_of(&[1]).unwrap()]);
        assert_eq!(factorizations_through_least(&two, &s, &[0, 1], 1000).unwrap(), vec![g]);
        let point = Poset::chain(1);
        assert_eq!(universal_extension(&point, &s, &[1]).unwrap(), vec![s.index_of(&[1]).unwrap()]);
        let d4 = corpus::named("d4").unwrap();
        assert!(matches!(universal_extension(&d4, &s, &[0, 0, 0, 0]), Err(Error::Precondition(_))));
    }
}

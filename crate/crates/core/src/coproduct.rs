//! Products of root systems through admissible chains, and the coproducts of
//! Gödel algebras they dualize.

use std::collections::HashSet;

use crate::chainspace::{ChainPoset, Variant};
use crate::error::{check_dim, Error, Result};
use crate::lattice::{dual_poset, sigma_set, upset_lattice, Flavor, HeytingAlgebra, LatticeHom, UpsetAlgebra};
use crate::poset::{enumerate_p_morphisms, Chain, PMorph, Poset};
use crate::subset::Subset;
use crate::suites::Certificate;
use crate::Limits;

/// A cartesian product of posets with the componentwise order.
///
/// Tuples are indexed in mixed radix with the first factor most significant.
#[derive(Clone, Debug)]
pub struct ProductPoset {
    pub poset: Poset,
    pub tuples: Vec<Vec<usize>>,
}

pub fn product_poset(factors: &[Poset], cap: usize) -> Result<ProductPoset> {
    let mut size: usize = 1;
    for f in factors {
        size = size.checked_mul(f.size()).filter(|&s| s <= cap).ok_or(Error::Resource { cap: "product", limit: cap })?;
    }
    let mut tuples = Vec::with_capacity(size);
    for mut idx in 0..size {
        let mut t = vec![0; factors.len()];
        for (i, f) in factors.iter().enumerate().rev() {
            t[i] = idx % f.size();
            idx /= f.size();
        }
        tuples.push(t);
    }
    let poset = Poset::from_relation(size, |a, b| {
        factors.iter().enumerate().all(|(i, f)| f.leq(tuples[a][i], tuples[b][i]))
    })?;
    let labels = tuples
        .iter()
        .map(|t| {
            let parts: Vec<String> = t.iter().enumerate().map(|(i, &x)| factors[i].label(x)).collect();
            format!("({})", parts.join(","))
        })
        .collect();
    Ok(ProductPoset { poset: poset.with_labels(labels)?, tuples })
}

impl ProductPoset {
    /// Index of a tuple.
    pub fn index_of(&self, tuple: &[usize], factors: &[Poset]) -> usize {
        tuple.iter().zip(factors).fold(0, |acc, (&x, f)| acc * f.size() + x)
    }

    /// `π_i^{-1}[A]` for a subset `A` of factor `i`.
    pub fn preimage(&self, i: usize, a: &Subset) -> Subset {
        Subset::from_indices(self.poset.size(), (0..self.poset.size()).filter(|&t| a.contains(self.tuples[t][i])))
    }
}

/// The chains of a product whose projections are all upsets.
#[derive(Clone, Debug)]
pub struct TensorSpace {
    pub factors: Vec<Poset>,
    pub product: ProductPoset,
    pub chains: Vec<Chain>,
}

fn require_root_systems(factors: &[Poset]) -> Result<()> {
    if factors.iter().all(Poset::is_root_system) {
        Ok(())
    } else {
        Err(Error::precondition("every factor must be a root system"))
    }
}

fn projections_are_upsets(factors: &[Poset], product: &ProductPoset, c: &Chain) -> bool {
    factors.iter().enumerate().all(|(i, f)| {
        let image = Subset::from_indices(f.size(), c.elements().iter().map(|&t| product.tuples[t][i]));
        f.is_upset(&image)
    })
}

/// The tensor by filtering all chains of the product.
pub fn tensor_filtered(factors: &[Poset], limits: &Limits) -> Result<TensorSpace> {
    require_root_systems(factors)?;
    let product = product_poset(factors, limits.chains)?;
    let chains = product
        .poset
        .enumerate_chains(limits.chains)?
        .into_iter()
        .filter(|c| projections_are_upsets(factors, &product, c))
        .collect();
    Ok(TensorSpace { factors: factors.to_vec(), product, chains })
}

/// The tensor by growing admissible chains downward from tuples of maximal elements.
///
/// An admissible chain has the tuple of maxima on top, and each step down moves
/// some coordinates to a lower cover and keeps the others.
pub fn tensor_direct(factors: &[Poset], limits: &Limits) -> Result<TensorSpace> {
    require_root_systems(factors)?;
    let product = product_poset(factors, limits.chains)?;
    let lower: Vec<Vec<Vec<usize>>> = factors
        .iter()
        .map(|f| {
            let mut lc = vec![Vec::new(); f.size()];
            for (a, b) in f.covers() {
                lc[b].push(a);
            }
            lc
        })
        .collect();
    let mut found: Vec<Vec<usize>> = Vec::new();
    let tops: Vec<Vec<usize>> = product
        .tuples
        .iter()
        .filter(|t| t.iter().enumerate().all(|(i, &x)| factors[i].up_of(x).count() == 1))
        .cloned()
        .collect();
    #[allow(clippy::too_many_arguments)]
    fn grow(
        factors: &[Poset],
        product: &ProductPoset,
        lower: &[Vec<Vec<usize>>],
        current: &[usize],
        stack: &mut Vec<usize>,
        found: &mut Vec<Vec<usize>>,
        cap: usize,
    ) -> Result<()> {
        if found.len() >= cap {
            return Err(Error::Resource { cap: "chains", limit: cap });
        }
        let mut c = stack.clone();
        c.sort_unstable();
        found.push(c);
        // Every coordinate either stays or steps to one of its lower covers; not all stay.
        let choices: Vec<Vec<Option<usize>>> = current
            .iter()
            .enumerate()
            .map(|(i, &x)| std::iter::once(None).chain(lower[i][x].iter().map(|&y| Some(y))).collect())
            .collect();
        let mut pick = vec![0usize; choices.len()];
        loop {
            let mut i = 0;
            loop {
                if i == pick.len() {
                    return Ok(());
                }
                pick[i] += 1;
                if pick[i] < choices[i].len() {
                    break;
                }
                pick[i] = 0;
                i += 1;
            }
            let next: Vec<usize> = current
                .iter()
                .enumerate()
                .map(|(i, &x)| choices[i][pick[i]].unwrap_or(x))
                .collect();
            stack.push(product.index_of(&next, factors));
            grow(factors, product, lower, &next, stack, found, cap)?;
            stack.pop();
        }
    }
    for top in tops {
        let mut stack = vec![product.index_of(&top, factors)];
        grow(factors, &product, &lower, &top, &mut stack, &mut found, limits.chains)?;
    }
    found.sort();
    let chains = found.into_iter().map(|c| Chain::new(&product.poset, c)).collect::<Result<_>>()?;
    Ok(TensorSpace { factors: factors.to_vec(), product, chains })
}

/// The tensor of root systems. Small products are filtered exhaustively, larger ones grown directly.
pub fn tensor(factors: &[Poset], limits: &Limits) -> Result<TensorSpace> {
    let size = factors.iter().try_fold(1usize, |acc, f| acc.checked_mul(f.size()));
    match size {
        Some(s) if s <= 16 => tensor_filtered(factors, limits),
        _ => tensor_direct(factors, limits),
    }
}

impl TensorSpace {
    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    /// The tensor as a chain space ordered by upper segments.
    pub fn space(&self, limits: &Limits) -> Result<ChainPoset> {
        ChainPoset::from_chains(self.product.poset.clone(), self.chains.clone(), Variant::Tensor, limits)
    }

    /// The admissible chains of size at most `n`, ordered by upper segments.
    pub fn restricted_space(&self, n: usize, limits: &Limits) -> Result<ChainPoset> {
        let chains = self.chains.iter().filter(|c| c.len() <= n).cloned().collect();
        ChainPoset::from_chains(self.product.poset.clone(), chains, Variant::DepthBounded(n), limits)
    }

    /// Depth of the tensor: the largest number of members of the space lying above one chain.
    ///
    /// Above a chain sit exactly its upper segments, counted here by membership
    /// so that no order table is needed.
    pub fn depth(&self) -> usize {
        let members: HashSet<&[usize]> = self.chains.iter().map(|c| c.elements()).collect();
        let p = &self.product.poset;
        self.chains
            .iter()
            .map(|c| {
                c.elements()
                    .iter()
                    .filter(|&&x| {
                        let seg: Vec<usize> = c.elements().iter().copied().filter(|&y| p.leq(x, y)).collect();
                        members.contains(seg.as_slice())
                    })
                    .count()
            })
            .max()
            .unwrap_or(0)
    }
}

/// The projection `C ↦ π_i(m(C))` of a tensor chain space onto factor `i`.
pub fn tensor_projection(t: &TensorSpace, space: &ChainPoset, i: usize) -> Result<Vec<usize>> {
    if i >= t.factors.len() {
        return Err(Error::Dimension { expected: t.factors.len(), found: i });
    }
    Ok(space.chains().iter().map(|c| t.product.tuples[c.least()][i]).collect())
}

/// Checks the product property of the tensor for one cone `fs: Z → factors`.
///
/// The mediating map `g(z) = {(f_i(w))_i | w ∈ ↑z}` must land in the tensor, be a
/// p-morphism, satisfy `p_i ∘ g = f_i`, and be the only p-morphism doing so.
pub fn verify_product_universal(
    t: &TensorSpace,
    space: &ChainPoset,
    z: &Poset,
    fs: &[Vec<usize>],
    cap: usize,
) -> Result<Certificate> {
    check_dim(t.factors.len(), fs.len())?;
    let mut cert = Certificate::new("product");
    for (i, f) in fs.iter().enumerate() {
        let pm = PMorph::new(z, &t.factors[i], f.clone())?;
        if !pm.is_p_morphism() {
            return Err(Error::precondition(format!("cone map {i} is not a p-morphism")));
        }
    }
    let tuple_at = |w: usize| -> Vec<usize> { fs.iter().map(|f| f[w]).collect() };
    let mut g = Vec::with_capacity(z.size());
    for v in 0..z.size() {
        let image: Vec<usize> = z.up_of(v).iter().map(|w| t.product.index_of(&tuple_at(w), &t.factors)).collect();
        match space.index_of(&image) {
            Some(c) => g.push(c),
            None => {
                cert.case(false, || format!("g({v}) is not an admissible chain"));
                return Ok(cert);
            }
        }
    }
    let gm = PMorph::new(z, space.order(), g.clone())?;
    cert.case(gm.is_p_morphism(), || "mediating map is not a p-morphism".into());
    for i in 0..t.factors.len() {
        let p = tensor_projection(t, space, i)?;
        cert.case((0..z.size()).all(|v| p[g[v]] == fs[i][v]), || format!("projection {i} does not factor"));
    }
    let least_tuple: Vec<usize> = space.least_map();
    let all = enumerate_p_morphisms(
        z,
        space.order(),
        |v| {
            let want = t.product.index_of(&tuple_at(v), &t.factors);
            Subset::from_indices(space.len(), (0..space.len()).filter(|&c| least_tuple[c] == want))
        },
        cap,
    )?;
    cert.case(all == vec![g], || format!("{} mediating p-morphisms instead of one", all.len()));
    Ok(cert)
}

/// A coproduct of Gödel algebras with its injections.
#[derive(Clone, Debug)]
pub struct Coproduct {
    pub tensor: TensorSpace,
    pub space: ChainPoset,
    pub algebra: UpsetAlgebra,
    pub injections: Vec<LatticeHom>,
}

fn build_coproduct(gs: &[HeytingAlgebra], depth: Option<usize>, limits: &Limits) -> Result<Coproduct> {
    if let Some(bad) = gs.iter().position(|g| !g.is_godel()) {
        return Err(Error::precondition(format!("algebra {bad} is not Gödel")));
    }
    let duals: Vec<(Poset, Vec<usize>)> = gs.iter().map(|g| dual_poset(g.lattice())).collect();
    let factors: Vec<Poset> = duals.iter().map(|(p, _)| p.clone()).collect();
    let t = tensor(&factors, limits)?;
    let space = match depth {
        Some(n) => t.restricted_space(n, limits)?,
        None => t.space(limits)?,
    };
    let algebra = upset_lattice(space.order(), limits.upsets)?;
    let injections = gs
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let map = (0..g.size())
                .map(|a| {
                    let pre = t.product.preimage(i, &sigma_set(g.lattice(), &duals[i].1, a));
                    let b = space.box_set(&pre)?;
                    algebra.element(&b).ok_or_else(|| Error::invalid("injection image is not an upset"))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(LatticeHom { map, flavor: Flavor::Heyting })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Coproduct { tensor: t, space, algebra, injections })
}

/// The coproduct of Gödel algebras: upsets of the tensor of their duals.
pub fn coproduct_godel(gs: &[HeytingAlgebra], limits: &Limits) -> Result<Coproduct> {
    build_coproduct(gs, None, limits)
}

/// The coproduct in the depth-`n` variety: upsets of the tensor cut at depth `n`.
pub fn coproduct_gan(gs: &[HeytingAlgebra], n: usize, limits: &Limits) -> Result<Coproduct> {
    for (i, g) in gs.iter().enumerate() {
        if !g.is_godel() || !g.is_in_gan(n, limits.homs.max(1 << 20))? {
            return Err(Error::precondition(format!("algebra {i} is not of depth at most {n}")));
        }
    }
    build_coproduct(gs, Some(n), limits)
}

/// `1 + Σ (d_i − 1)`, the depth of a coproduct of nontrivial algebras of depths `d_i`.
pub fn depth_of_coproduct(ds: &[usize]) -> Result<usize> {
    if ds.contains(&0) {
        return Err(Error::precondition("a factor has depth 0 (trivial algebra)"));
    }
    Ok(1 + ds.iter().map(|d| d - 1).sum::<usize>())
}

/// The formula value and the depth computed from the tensor, for a family of root systems.
pub fn depth_check_factors(factors: &[Poset], limits: &Limits) -> Result<(usize, usize)> {
    require_root_systems(factors)?;
    let ds = factors.iter().map(Poset::depth_of).collect::<Result<Vec<_>>>()?;
    let formula = depth_of_coproduct(&ds)?;
    let computed = tensor(factors, limits)?.depth();
    Ok((formula, computed))
}

/// The formula value and the computed depth of the coproduct of Gödel algebras.
pub fn depth_check(gs: &[HeytingAlgebra], limits: &Limits) -> Result<(usize, usize)> {
    let factors: Vec<Poset> = gs.iter().map(|g| dual_poset(g.lattice()).0).collect();
    depth_check_factors(&factors, limits)
}

/// The chain `C_1 ∪ … ∪ C_n` built from maxima `ws` and an ordered list `zs` of
/// `(factor, element)` pairs: in `C_j` the earlier chosen factors sit at their `z`,
/// factor `i_j` runs through `↑z_{i_j}`, and the rest sit at their `w`.
pub fn witness_chain(factors: &[Poset], ws: &[usize], zs: &[(usize, usize)]) -> Result<Chain> {
    check_dim(factors.len(), ws.len())?;
    for (i, &w) in ws.iter().enumerate() {
        if w >= factors[i].size() || factors[i].up_of(w).count() != 1 {
            return Err(Error::precondition(format!("w_{i} is not maximal")));
        }
    }
    let mut seen = HashSet::new();
    for &(i, z) in zs {
        if i >= factors.len() || z >= factors[i].size() {
            return Err(Error::precondition(format!("z for factor {i} is out of range")));
        }
        if !seen.insert(i) {
            return Err(Error::precondition(format!("factor {i} chosen twice")));
        }
        if !factors[i].leq(z, ws[i]) {
            return Err(Error::precondition(format!("z_{i} is not below w_{i}")));
        }
    }
    let index = |t: &[usize]| t.iter().zip(factors).fold(0, |acc, (&x, f)| acc * f.size() + x);
    let mut current: Vec<usize> = ws.to_vec();
    let mut members = vec![index(&current)];
    for &(i, z) in zs {
        for y in factors[i].up_of(z).iter() {
            current[i] = y;
            members.push(index(&current));
        }
        current[i] = z;
    }
    let product = product_poset(factors, usize::MAX)?;
    Chain::new(&product.poset, members)
}

/// Whether the tensor and its depth-`n` cut are isomorphic posets.
pub fn gan_coincidence(factors: &[Poset], n: usize, limits: &Limits) -> Result<bool> {
    let t = tensor(factors, limits)?;
    let full = t.space(limits)?;
    let cut = t.restricted_space(n, limits)?;
    Ok(full.order().isomorphism(cut.order()).is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::lattice::find_isomorphism;

    fn lim() -> Limits {
        Limits::default()
    }

    fn two() -> Poset {
        Poset::chain(2)
    }

    #[test]
    fn products() {
        let d4 = product_poset(&[two(), two()], 100).unwrap();
        assert!(d4.poset.isomorphism(&corpus::named("d4").unwrap()).is_some());
        let x = corpus::named("d4").unwrap();
        let with_point = product_poset(&[x.clone(), Poset::chain(1)], 100).unwrap();
        assert!(with_point.poset.isomorphism(&x).is_some());
        let six = product_poset(&[two(), Poset::antichain(2)], 100).unwrap();
        assert_eq!(six.poset.size(), 4);
        let six = product_poset(&[Poset::chain(3), Poset::antichain(2)], 100).unwrap();
        assert_eq!((six.poset.size(), six.poset.covers().len()), (6, 4));
        assert_eq!(product_poset(&[], 10).unwrap().poset.size(), 1);
    }

    #[test]
    fn tensor_of_two_chains() {
        let t = tensor(&[two(), two()], &lim()).unwrap();
        let lists: Vec<Vec<usize>> = t.chains.iter().map(|c| c.elements().to_vec()).collect();
        assert_eq!(lists, vec![vec![0, 1, 3], vec![0, 2, 3], vec![0, 3], vec![1, 3], vec![2, 3], vec![3]]);
        assert!(!lists.contains(&vec![0, 1]));
        assert_eq!(t.depth(), 3);
        let space = t.space(&lim()).unwrap();
        assert!(space.order().is_root_system());
        assert_eq!(space.order().depth_of().unwrap(), 3);
        assert_eq!(t.restricted_space(2, &lim()).unwrap().len(), 4);
    }

    #[test]
    fn filtered_and_direct_agree() {
        for a in corpus::root_systems_up_to(3) {
            for b in corpus::root_systems_up_to(3) {
                let f = tensor_filtered(&[a.clone(), b.clone()], &lim()).unwrap();
                let d = tensor_direct(&[a.clone(), b.clone()], &lim()).unwrap();
                assert_eq!(f.chains, d.chains);
            }
        }
    }

    #[test]
    fn degenerate_tensors() {
        let y = Poset::from_covers(3, &[(0, 2), (1, 2)]).unwrap();
        let t = tensor(&[y.clone()], &lim()).unwrap();
        let space = t.space(&lim()).unwrap();
        let least: Vec<usize> = space.least_map();
        let m = PMorph::new(space.order(), &y, least).unwrap();
        assert!(m.is_p_morphism());
        assert!(space.order().isomorphism(&y).is_some());
        assert!(tensor(&[y, Poset::empty()], &lim()).unwrap().is_empty());
        assert_eq!(tensor(&[], &lim()).unwrap().len(), 1);
    }

    #[test]
    fn projections_are_p_morphisms() {
        let t = tensor(&[two(), two()], &lim()).unwrap();
        let space = t.space(&lim()).unwrap();
        let c = space.index_of(&[0, 1, 3]).unwrap();
        assert_eq!(tensor_projection(&t, &space, 0).unwrap()[c], 0);
        for i in 0..2 {
            let p = tensor_projection(&t, &space, i).unwrap();
            assert!(PMorph::new(space.order(), &t.factors[i], p).unwrap().is_p_morphism());
        }
        assert!(tensor_projection(&t, &space, 2).is_err());
    }

    #[test]
    fn mediating_map_for_identities() {
        let t = tensor(&[two(), two()], &lim()).unwrap();
        let space = t.space(&lim()).unwrap();
        let cert = verify_product_universal(&t, &space, &two(), &[vec![0, 1], vec![0, 1]], 10_000).unwrap();
        assert!(cert.passed(), "{:?}", cert.failures);
        let point = Poset::chain(1);
        let cert = verify_product_universal(&t, &space, &point, &[vec![1], vec![1]], 10_000).unwrap();
        assert!(cert.passed());
    }

    #[test]
    fn coproduct_examples() {
        let c3 = upset_lattice(&two(), 100).unwrap().algebra().clone();
        let b2 = upset_lattice(&Poset::chain(1), 100).unwrap().algebra().clone();
        let single = coproduct_godel(&[c3.clone()], &lim()).unwrap();
        assert!(find_isomorphism(single.algebra.lattice(), c3.lattice()).is_some());
        let with_two = coproduct_godel(&[b2, c3.clone()], &lim()).unwrap();
        assert!(find_isomorphism(with_two.algebra.lattice(), c3.lattice()).is_some());
        let both = coproduct_godel(&[c3.clone(), c3.clone()], &lim()).unwrap();
        assert_eq!(both.space.len(), 6);
        assert_eq!(both.algebra.size() as u128, both.space.order().count_upsets_root_system().unwrap());
        for (i, inj) in both.injections.iter().enumerate() {
            assert!(LatticeHom::preserves_heyting(&inj.map, &c3, both.algebra.algebra()), "injection {i}");
        }
    }

    #[test]
    fn depth_formula_examples() {
        assert_eq!(depth_of_coproduct(&[1, 1, 1]).unwrap(), 1);
        assert_eq!(depth_of_coproduct(&[2, 2]).unwrap(), 3);
        assert_eq!(depth_of_coproduct(&[2, 3]).unwrap(), 4);
        assert!(matches!(depth_of_coproduct(&[2, 0]), Err(Error::Precondition(_))));
        assert_eq!(depth_check_factors(&[two(), Poset::chain(3)], &lim()).unwrap(), (4, 4));
    }

    #[test]
    fn witness_examples() {
        let fs = [two(), two()];
        let c = witness_chain(&fs, &[1, 1], &[(0, 0), (1, 0)]).unwrap();
        assert_eq!(c.elements(), &[0, 1, 3]);
        assert_eq!(witness_chain(&fs, &[1, 1], &[]).unwrap().elements(), &[3]);
        assert!(witness_chain(&fs, &[0, 1], &[]).is_err());
        assert!(witness_chain(&fs, &[1, 1], &[(0, 0), (0, 0)]).is_err());
    }

    #[test]
    fn coincidence_examples() {
        assert!(gan_coincidence(&[two(), two()], 3, &lim()).unwrap());
        assert!(!gan_coincidence(&[two(), two()], 2, &lim()).unwrap());
        assert!(gan_coincidence(&[Poset::chain(3)], 3, &lim()).unwrap());
        let c3 = upset_lattice(&two(), 100).unwrap().algebra().clone();
        assert_eq!(coproduct_gan(&[c3.clone(), c3.clone()], 2, &lim()).unwrap().space.len(), 4);
        assert!(coproduct_gan(&[c3.clone(), c3], 1, &lim()).is_err());
    }
}

//! Free Gödel algebras and their bounded-depth analogues, built as upset algebras
//! of chain spaces, plus an exhaustive check of the universal property.

use crate::chainspace::{cc, cc_n, factorizations_through_least, ChainPoset, Variant};
use crate::coproduct::product_poset;
use crate::error::{check_dim, Error, Result};
use crate::lattice::{dual_poset, enumerate_homs, sigma_set, DistLattice, Flavor, HeytingAlgebra, LatticeHom};
use crate::lattice::{upset_lattice, UpsetAlgebra};
use crate::poset::{enumerate_monotone_maps, Poset};
use crate::subset::Subset;
use crate::suites::Certificate;
use crate::Limits;

/// How the free algebra receives its generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Unit {
    /// A lattice embedding of the source lattice.
    Lattice(LatticeHom),
    /// The image of each free generator.
    Generators(Vec<usize>),
}

#[derive(Clone, Debug)]
pub struct FreeAlgebra {
    pub dual: ChainPoset,
    pub algebra: UpsetAlgebra,
    pub unit: Unit,
}

impl FreeAlgebra {
    pub fn size(&self) -> usize {
        self.algebra.size()
    }

    /// The depth bound `n` if the algebra is free in the depth-`n` variety.
    pub fn depth_bound(&self) -> Option<usize> {
        match self.dual.variant() {
            Variant::DepthBounded(n) => Some(n),
            _ => None,
        }
    }
}

fn over_lattice(l: &DistLattice, space: ChainPoset, limits: &Limits) -> Result<FreeAlgebra> {
    let (_, ji) = dual_poset(l);
    let algebra = upset_lattice(space.order(), limits.upsets)?;
    let map = (0..l.size())
        .map(|a| {
            let b = space.box_set(&sigma_set(l, &ji, a))?;
            algebra.element(&b).ok_or_else(|| Error::invalid("box of an upset is not a chain upset"))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FreeAlgebra { dual: space, algebra, unit: Unit::Lattice(LatticeHom { map, flavor: Flavor::Lattice }) })
}

/// The Gödel algebra free over `l`: upsets of `cc(l_*)` with `e(a) = □σ(a)`.
pub fn free_godel_over_lattice(l: &DistLattice, limits: &Limits) -> Result<FreeAlgebra> {
    let (x, _) = dual_poset(l);
    over_lattice(l, cc(&x, limits)?, limits)
}

/// The depth-`n` Gödel algebra free over `l`: upsets of `cc_n(l_*)`.
pub fn free_gan_over_lattice(l: &DistLattice, n: usize, limits: &Limits) -> Result<FreeAlgebra> {
    let (x, _) = dual_poset(l);
    over_lattice(l, cc_n(&x, n, limits)?, limits)
}

/// The dual space of the (depth-bounded) free algebra on `k` generators and, for
/// each generator `s`, the set `□U_s` of chains inside `{a ∈ 2^k | a_s = 1}`.
pub fn free_dual(k: usize, depth: Option<usize>, limits: &Limits) -> Result<(ChainPoset, Vec<Subset>)> {
    if k > limits.generators {
        return Err(Error::Resource { cap: "generators", limit: limits.generators });
    }
    let cube = product_poset(&vec![Poset::chain(2); k], limits.chains)?;
    let space = match depth {
        Some(n) => cc_n(&cube.poset, n, limits)?,
        None => cc(&cube.poset, limits)?,
    };
    let gens = (0..k)
        .map(|s| {
            let u = Subset::from_indices(cube.poset.size(), (0..cube.poset.size()).filter(|&a| cube.tuples[a][s] == 1));
            space.box_set(&u)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((space, gens))
}

fn on_generators(k: usize, depth: Option<usize>, limits: &Limits) -> Result<FreeAlgebra> {
    let (space, gens) = free_dual(k, depth, limits)?;
    let algebra = upset_lattice(space.order(), limits.upsets)?;
    let images = gens
        .iter()
        .map(|g| algebra.element(g).ok_or_else(|| Error::invalid("generator image is not a chain upset")))
        .collect::<Result<Vec<_>>>()?;
    Ok(FreeAlgebra { dual: space, algebra, unit: Unit::Generators(images) })
}

/// The Gödel algebra free on `k` generators.
pub fn free_godel(k: usize, limits: &Limits) -> Result<FreeAlgebra> {
    on_generators(k, None, limits)
}

/// The depth-`n` Gödel algebra free on `k` generators.
pub fn free_gan(k: usize, n: usize, limits: &Limits) -> Result<FreeAlgebra> {
    on_generators(k, Some(n), limits)
}

/// Which search establishes the universal property.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// Enumerate Heyting homomorphisms out of the free algebra.
    Algebraic,
    /// Enumerate p-morphisms into the dual chain space.
    Dual,
    /// Pick the route with the smaller search space.
    Auto,
}

fn check_target(f: &FreeAlgebra, h: &HeytingAlgebra, limits: &Limits) -> Result<()> {
    if !h.is_godel() {
        return Err(Error::precondition("target algebra is not Gödel"));
    }
    if let Some(n) = f.depth_bound() {
        if !h.is_in_gan(n, limits.homs.max(1 << 20))? {
            return Err(Error::precondition(format!("target algebra is not of depth at most {n}")));
        }
    }
    Ok(())
}

/// Checks that every lattice homomorphism `l → h` has exactly one Heyting extension along the unit.
pub fn certify_free(f: &FreeAlgebra, l: &DistLattice, h: &HeytingAlgebra, route: Route, limits: &Limits) -> Result<Certificate> {
    let e = match &f.unit {
        Unit::Lattice(e) => e,
        Unit::Generators(_) => return Err(Error::precondition("free algebra was built over generators")),
    };
    check_dim(l.size(), e.map.len())?;
    check_target(f, h, limits)?;
    let (y, _) = dual_poset(h.lattice());
    let route = match route {
        Route::Auto => {
            let algebraic = (f.dual.len() as f64) * (h.size() as f64).ln();
            let dual = (y.size() as f64) * ((f.dual.len().max(2)) as f64).ln();
            if algebraic <= dual {
                Route::Algebraic
            } else {
                Route::Dual
            }
        }
        r => r,
    };
    let mut cert = Certificate::new("free");
    let counts: Vec<(Vec<usize>, usize)> = match route {
        Route::Algebraic => {
            let src = HeytingAlgebra::from_lattice(l.clone());
            let fs = enumerate_homs(&src, h, Flavor::Lattice, limits.homs)?;
            let gs = enumerate_homs(f.algebra.algebra(), h, Flavor::Heyting, limits.homs)?;
            fs.into_iter()
                .map(|fh| {
                    let n = gs.iter().filter(|g| (0..l.size()).all(|a| g.map[e.map[a]] == fh.map[a])).count();
                    (fh.map, n)
                })
                .collect()
        }
        Route::Dual => {
            let x = f.dual.base();
            let phis = enumerate_monotone_maps(&y, x, limits.homs)?;
            phis.into_iter()
                .map(|phi| {
                    let n = factorizations_through_least(&y, &f.dual, &phi, limits.homs)?.len();
                    Ok((phi, n))
                })
                .collect::<Result<_>>()?
        }
        Route::Auto => unreachable!("resolved above"),
    };
    cert.note(format!("route: {}", if route == Route::Algebraic { "algebraic" } else { "dual" }));
    for (map, n) in counts {
        cert.case(n == 1, || format!("map {map:?} has {n} extensions"));
    }
    cert.note(format!("{} homomorphisms, each with exactly one extension", cert.cases));
    Ok(cert)
}

/// Checks that every assignment of the generators into `h` extends to exactly one Heyting homomorphism.
pub fn certify_free_generators(f: &FreeAlgebra, h: &HeytingAlgebra, limits: &Limits) -> Result<Certificate> {
    let gens = match &f.unit {
        Unit::Generators(g) => g,
        Unit::Lattice(_) => return Err(Error::precondition("free algebra was built over a lattice")),
    };
    check_target(f, h, limits)?;
    let gs = enumerate_homs(f.algebra.algebra(), h, Flavor::Heyting, limits.homs)?;
    let k = gens.len();
    let total = (h.size() as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if total > limits.homs as u128 {
        return Err(Error::Resource { cap: "homs", limit: limits.homs });
    }
    let mut cert = Certificate::new("free-generators");
    let mut values = vec![0usize; k];
    loop {
        let n = gs.iter().filter(|g| (0..k).all(|s| g.map[gens[s]] == values[s])).count();
        cert.case(n == 1, || format!("assignment {values:?} has {n} extensions"));
        let mut i = 0;
        loop {
            if i == k {
                return Ok(cert);
            }
            values[i] += 1;
            if values[i] < h.size() {
                break;
            }
            values[i] = 0;
            i += 1;
        }
    }
}

/// Whether the order dual of the algebra is Heyting too, via its co-implication table.
pub fn is_bi_heyting(h: &HeytingAlgebra) -> bool {
    let l = h.lattice();
    l.co_residuation_holds(&l.coimplication_table())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::find_isomorphism;

    fn lim() -> Limits {
        Limits::default()
    }

    fn upsets_of(p: &Poset) -> UpsetAlgebra {
        upset_lattice(p, 1 << 12).unwrap()
    }

    #[test]
    fn small_generator_counts() {
        let f0 = free_godel(0, &lim()).unwrap();
        assert_eq!((f0.dual.len(), f0.size()), (1, 2));
        let f1 = free_godel(1, &lim()).unwrap();
        assert_eq!((f1.dual.len(), f1.size()), (3, 6));
        let f2 = free_godel(2, &lim()).unwrap();
        assert_eq!(f2.dual.len(), 11);
        assert_eq!(f2.size() as u128, f2.dual.order().count_upsets_root_system().unwrap());
        assert!(matches!(free_godel(4, &lim()), Err(Error::Resource { cap: "generators", .. })));
    }

    #[test]
    fn trivial_and_boolean_sources() {
        let trivial = upsets_of(&Poset::empty());
        let f = free_godel_over_lattice(trivial.lattice(), &lim()).unwrap();
        assert_eq!((f.dual.len(), f.size()), (0, 1));
        let b4 = upsets_of(&Poset::antichain(2));
        let f = free_godel_over_lattice(b4.lattice(), &lim()).unwrap();
        assert_eq!(f.size(), 4);
        assert!(find_isomorphism(f.algebra.lattice(), b4.lattice()).is_some());
    }

    #[test]
    fn bounded_depth_variants() {
        let b4 = upsets_of(&Poset::antichain(2));
        let f = free_gan_over_lattice(b4.lattice(), 1, &lim()).unwrap();
        assert!(f.dual.order().covers().is_empty());
        let a = free_gan(1, 2, &lim()).unwrap();
        let b = free_godel(1, &lim()).unwrap();
        assert!(find_isomorphism(a.algebra.lattice(), b.algebra.lattice()).is_some());
        assert_eq!(free_gan(2, 2, &lim()).unwrap().dual.len(), 9);
        let sizes: Vec<usize> = (0..=4).map(|n| free_gan(2, n, &lim()).unwrap().size()).collect();
        assert!(sizes.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(sizes[3], free_godel(2, &lim()).unwrap().size());
        assert_eq!(sizes[4], sizes[3]);
        for (n, size) in sizes.iter().enumerate() {
            let f = free_gan(2, n, &lim()).unwrap();
            assert_eq!(f.size(), *size);
            match f.algebra.algebra().is_in_gan(n, 1 << 20) {
                Ok(inside) => assert!(inside),
                Err(_) => assert!(f.dual.order().depth_of().unwrap() <= n),
            }
        }
    }

    #[test]
    fn unit_is_an_embedding() {
        let d4 = upsets_of(&crate::corpus::named("d4").unwrap());
        let f = free_godel_over_lattice(d4.lattice(), &lim()).unwrap();
        assert_eq!(f.dual.len(), 11);
        let Unit::Lattice(e) = &f.unit else { panic!("lattice unit") };
        assert!(e.is_injective());
        assert!(LatticeHom::preserves_lattice(&e.map, d4.lattice(), f.algebra.lattice()));
    }

    #[test]
    fn certification_examples() {
        let c3 = upsets_of(&Poset::chain(2));
        let f = free_godel_over_lattice(c3.lattice(), &lim()).unwrap();
        for route in [Route::Algebraic, Route::Dual] {
            let cert = certify_free(&f, c3.lattice(), c3.algebra(), route, &lim()).unwrap();
            assert!(cert.passed());
            assert_eq!(cert.cases, 3);
        }
        let trivial = upsets_of(&Poset::empty());
        let cert = certify_free(&f, c3.lattice(), trivial.algebra(), Route::Auto, &lim()).unwrap();
        assert!(cert.passed());
        assert_eq!(cert.cases, 1);
        let d4 = upsets_of(&crate::corpus::named("d4").unwrap());
        assert!(matches!(
            certify_free(&f, c3.lattice(), d4.algebra(), Route::Auto, &lim()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn free_over_d4_into_six_elements() {
        let d4 = upsets_of(&crate::corpus::named("d4").unwrap());
        let f = free_godel_over_lattice(d4.lattice(), &lim()).unwrap();
        let h = free_godel(1, &lim()).unwrap();
        let cert = certify_free(&f, d4.lattice(), h.algebra.algebra(), Route::Dual, &lim()).unwrap();
        assert!(cert.passed(), "{:?}", cert.failures);
    }

    #[test]
    fn generators_extend_uniquely() {
        let f = free_godel(1, &lim()).unwrap();
        let c3 = upsets_of(&Poset::chain(2));
        let cert = certify_free_generators(&f, c3.algebra(), &lim()).unwrap();
        assert!(cert.passed());
        assert_eq!(cert.cases, 3);
    }

    #[test]
    fn bi_heyting_sanity() {
        for k in 0..=2 {
            assert!(is_bi_heyting(free_godel(k, &lim()).unwrap().algebra.algebra()));
        }
    }
}

use godel_duality::chainspace::{cc, cc_n, leq_cc, leq_cc_definitional};
use godel_duality::coproduct::{depth_of_coproduct, tensor, tensor_direct, tensor_filtered};
use godel_duality::corpus::named;
use godel_duality::lattice::{dual_poset, upset_lattice};
use godel_duality::nerve::{nerve, TwoheadUp};
use godel_duality::poset::PMorph;
use godel_duality::suites::{twohead_oracle, upset_count_oracle};
use godel_duality::{Limits, Poset, Subset};
use proptest::prelude::*;

/// Random posets on up to `max` elements: a relation between `i < j` taken transitively.
fn poset(max: usize) -> impl Strategy<Value = Poset> {
    (0..=max).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n.saturating_sub(1) / 2).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if bits[k] {
                        edges.push((i, j));
                    }
                    k += 1;
                }
            }
            Poset::from_covers(n, &edges).unwrap()
        })
    })
}

/// Random root systems: every element below at most one element with a larger index.
fn root_system(max: usize) -> impl Strategy<Value = Poset> {
    (1..=max).prop_flat_map(|n| {
        proptest::collection::vec(any::<u8>(), n).prop_map(move |picks| {
            let edges: Vec<(usize, usize)> = (0..n)
                .filter_map(|i| {
                    let above = n - i - 1;
                    let p = picks[i] as usize % (above + 1);
                    (p > 0).then(|| (i, i + p))
                })
                .collect();
            Poset::from_covers(n, &edges).unwrap()
        })
    })
}

fn masked(n: usize, m: u64) -> Subset {
    Subset::from_mask(n, m & ((1u64 << n) - 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn order_axioms_and_duality(p in poset(6)) {
        prop_assert!(p.check_axioms().is_ok());
        prop_assert!(p.dual().dual().isomorphism(&p).is_some());
        let lim = Limits::default();
        let alg = upset_lattice(&p, lim.upsets).unwrap();
        prop_assert_eq!(alg.size() as u128, upset_count_oracle(&p));
        prop_assert!(dual_poset(alg.lattice()).0.isomorphism(&p).is_some());
    }

    #[test]
    fn chain_space_is_a_root_system(p in poset(5)) {
        let space = cc(&p, &Limits::default()).unwrap();
        prop_assert!(space.order().is_root_system());
        for (i, c) in space.chains().iter().enumerate() {
            prop_assert_eq!(space.order().depth(i).unwrap(), c.len());
        }
        for a in space.chains() {
            for b in space.chains() {
                prop_assert_eq!(leq_cc(&p, a, b).unwrap(), leq_cc_definitional(&p, a, b));
            }
        }
    }

    #[test]
    fn bounded_chain_space_is_a_cut(p in poset(5), n in 1usize..4) {
        let lim = Limits::default();
        let full = cc(&p, &lim).unwrap();
        let cut = cc_n(&p, n, &lim).unwrap();
        let (restricted, _) = full.order().restrict_to_depth(n).unwrap();
        prop_assert!(restricted.isomorphism(cut.order()).is_some());
    }

    #[test]
    fn nerve_contains_chain_order(p in poset(5)) {
        let lim = Limits::default();
        let space = cc(&p, &lim).unwrap();
        let nv = nerve(&p, &lim).unwrap();
        for i in 0..space.len() {
            for j in 0..space.len() {
                if space.order().leq(i, j) {
                    prop_assert!(nv.order().leq(i, j));
                }
            }
        }
    }

    #[test]
    fn box_and_diamond_complement(p in poset(6), a in any::<u64>()) {
        let space = cc(&p, &Limits::default()).unwrap();
        let n = p.size();
        let a = masked(n, a);
        let all = Subset::full(space.len());
        prop_assert_eq!(all.difference(&space.box_set(&a).unwrap()), space.diamond_set(&a.complement()).unwrap());
    }

    #[test]
    fn twohead_matches_oracle(p in poset(6), fam in proptest::collection::vec(any::<u64>(), 0..4)) {
        let family: Vec<Subset> = fam
            .iter()
            .map(|&m| masked(p.size(), m))
            .collect();
        let mut up = TwoheadUp::new(&p);
        prop_assert_eq!(up.eval(&family).unwrap(), twohead_oracle(&p, &family));
    }

    #[test]
    fn tensor_routes_agree(a in root_system(4), b in root_system(3)) {
        let lim = Limits::default();
        let f = tensor_filtered(&[a.clone(), b.clone()], &lim).unwrap();
        let d = tensor_direct(&[a.clone(), b.clone()], &lim).unwrap();
        prop_assert_eq!(&f.chains, &d.chains);
        let ds = [a.depth_of().unwrap(), b.depth_of().unwrap()];
        prop_assert_eq!(f.depth(), depth_of_coproduct(&ds).unwrap());
    }

    #[test]
    fn upset_count_of_root_systems(p in root_system(7)) {
        prop_assert_eq!(p.count_upsets_root_system().unwrap(), upset_count_oracle(&p));
    }
}

#[test]
fn tensor_chain_counts() {
    let lim = Limits::default();
    let expected = [(2, [2usize, 6, 26]), (3, [3, 31, 903]), (4, [4, 160, 36760])];
    for (c, counts) in expected {
        for (k, want) in counts.iter().enumerate() {
            let factors = vec![Poset::chain(c); k + 1];
            assert_eq!(tensor(&factors, &lim).unwrap().len(), *want, "{c}-chain, {} factors", k + 1);
        }
    }
}

#[test]
fn least_element_map_is_monotone_but_not_a_p_morphism() {
    // The back condition fails at the two-element chain from bottom to top of D4:
    // its ⊴-upset maps to that chain, while the bottom's upset is all of D4.
    let d4 = named("d4").unwrap();
    let space = cc(&d4, &Limits::default()).unwrap();
    let m = PMorph::new(space.order(), &d4, space.least_map()).unwrap();
    assert!(m.is_monotone());
    assert!(!m.is_p_morphism());
    let bottom_top = space.index_of(&[0, 3]).unwrap();
    let image = m.image(space.order().up_of(bottom_top));
    assert_eq!(image.to_vec(), vec![0, 3]);
    assert_eq!(d4.up_of(0).count(), 4);
    let top = space.index_of(&[3]).unwrap();
    assert_eq!(m.image(space.order().up_of(top)), *d4.up_of(3));
}

#[test]
fn three_generator_count_matches_oracle() {
    let (space, _) = godel_duality::freealg::free_dual(3, None, &Limits::default()).unwrap();
    assert_eq!(space.len(), 51);
    let counted = space.order().count_upsets_root_system().unwrap();
    assert_eq!(counted, 137_186_159_382);
    assert_eq!(upset_count_oracle(space.order()), counted);
}

#[test]
fn unravelling_root_systems_gives_forests_over_them() {
    let lim = Limits::default();
    for x in godel_duality::corpus::root_systems_up_to(5) {
        let (space, top) = godel_duality::nerve::unravel(&x, &lim).unwrap();
        assert!(space.order().is_forest(), "{x:?}");
        assert!(PMorph::new(space.order(), &x, top).unwrap().is_p_morphism(), "{x:?}");
    }
}

//! Certificates and the exhaustive verification suites built on them.
//!
//! Every suite compares a construction against either an identity it must
//! satisfy or a brute-force oracle that shares no code with the construction.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chainspace::{cc, ChainPoset};
use crate::coproduct::{depth_check_factors, tensor, verify_product_universal, witness_chain};
use crate::corpus::{posets_up_to, random_subset, root_systems_up_to};
use crate::error::{Error, Result};
use crate::freealg::{certify_free, free_godel_over_lattice, Route};
use crate::lattice::{dual_poset, find_isomorphism, sigma, upset_lattice, DistLattice, LatticeHom};
use crate::nerve::{
    implication_box_formula_check, nerve_upset_characterization_check, upset_of_basic, upset_of_basic_direct,
    z_iso_check, TwoheadUp,
};
use crate::poset::{enumerate_p_morphisms, Poset};
use crate::subset::Subset;
use crate::Limits;

const KEPT_FAILURES: usize = 20;

/// The outcome of a verification run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub name: String,
    pub cases: usize,
    pub failed: usize,
    /// The first few failure descriptions.
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl Certificate {
    pub fn new(name: impl Into<String>) -> Self {
        Certificate { name: name.into(), ..Default::default() }
    }

    /// Records one checked case; the message is only built on failure.
    pub fn case(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < KEPT_FAILURES {
                self.failures.push(describe());
            }
        }
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    /// Folds another certificate's cases and failures into this one.
    pub fn absorb(&mut self, other: Certificate) {
        self.cases += other.cases;
        self.failed += other.failed;
        for f in other.failures {
            if self.failures.len() < KEPT_FAILURES {
                self.failures.push(format!("{}: {f}", other.name));
            }
        }
    }

    /// One-line summary: `name: PASS (n cases)` or `name: FAIL (k of n cases)`.
    pub fn summary(&self) -> String {
        if self.passed() {
            format!("{}: PASS ({} cases)", self.name, self.cases)
        } else {
            format!("{}: FAIL ({} of {} cases)", self.name, self.failed, self.cases)
        }
    }
}

/// Names accepted by [`run_suite`].
pub const SUITES: [&str; 9] =
    ["box-diamond", "twohead", "basic-upsets", "implication", "upsets", "z-iso", "free", "product", "depth"];

/// Runs a named suite over `posets`, or over its default corpus when `posets` is `None`.
pub fn run_suite(name: &str, posets: Option<Vec<Poset>>, seed: u64, limits: &Limits) -> Result<Certificate> {
    let small = |n| posets.clone().unwrap_or_else(|| posets_up_to(n));
    match name {
        "box-diamond" => box_diamond_suite(&small(4), limits),
        "twohead" => twohead_suite(&small(4), 3),
        "basic-upsets" => basic_upsets_suite(&small(4), seed, 500, limits),
        "implication" => each(&small(4), "implication", |p| implication_box_formula_check(p, limits)),
        "upsets" => each(&small(4), "upsets", |p| nerve_upset_characterization_check(p, limits)),
        "z-iso" => each(&small(4), "z-iso", |p| z_iso_check(p, limits)),
        "free" => {
            let sources = posets.clone().unwrap_or_else(|| posets_up_to(3));
            let targets = goedel_targets(6, limits)?;
            free_suite(&sources, &targets, limits)
        }
        "product" => product_suite(&small(3), limits),
        "depth" => depth_suite(seed, 100, limits),
        "roundtrip" => roundtrip_suite(&small(4), seed, limits),
        _ => Err(Error::invalid(format!("unknown suite `{name}`"))),
    }
}

fn each(posets: &[Poset], name: &str, check: impl Fn(&Poset) -> Result<Certificate>) -> Result<Certificate> {
    let mut cert = Certificate::new(name);
    for p in posets {
        cert.absorb(check(p)?);
    }
    cert.note(format!("{} posets", posets.len()));
    Ok(cert)
}

fn all_subsets(n: usize) -> Vec<Subset> {
    (0u64..(1 << n)).map(|m| Subset::from_mask(n, m)).collect()
}

/// Multisets of size `k` drawn from `0..n`, as nondecreasing index lists.
fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in multisets(n, k - 1) {
        let start = rest.last().copied().unwrap_or(0);
        for i in start..n {
            let mut v = rest.clone();
            v.push(i);
            out.push(v);
        }
    }
    out
}

/// Identities of `□` and `◇` on chain spaces, and the preimages of the least-element map.
pub fn box_diamond_suite(posets: &[Poset], limits: &Limits) -> Result<Certificate> {
    let mut cert = Certificate::new("box-diamond");
    let mut unqualified_failures = 0usize;
    let mut unqualified_cases = 0usize;
    for x in posets {
        let space = cc(x, limits)?;
        let n = x.size();
        let subsets = all_subsets(n);
        let boxes: Vec<Subset> = subsets.iter().map(|a| space.box_set(a)).collect::<Result<_>>()?;
        let diamonds: Vec<Subset> = subsets.iter().map(|a| space.diamond_set(a)).collect::<Result<_>>()?;
        let everything = Subset::full(space.len());
        let full = Subset::full(n);
        let idx = |s: &Subset| s.to_vec().iter().map(|i| 1usize << i).sum::<usize>();
        for (ia, a) in subsets.iter().enumerate() {
            let comp = idx(&full.difference(a));
            cert.case(everything.difference(&boxes[ia]) == diamonds[comp], || format!("CC∖□A = ◇(X∖A) for A={a:?}"));
            cert.case(everything.difference(&diamonds[ia]) == boxes[comp], || format!("CC∖◇A = □(X∖A) for A={a:?}"));
            cert.case(space.order().is_upset(&boxes[ia]), || format!("□A not an upset, A={a:?}"));
            cert.case(space.order().is_downset(&diamonds[ia]), || format!("◇A not a downset, A={a:?}"));
            for (ib, b) in subsets.iter().enumerate() {
                let ab = idx(&a.intersection(b));
                let aub = idx(&a.union(b));
                cert.case(boxes[ab] == boxes[ia].intersection(&boxes[ib]), || format!("□(A∩B), A={a:?} B={b:?}"));
                cert.case(diamonds[aub] == diamonds[ia].union(&diamonds[ib]), || format!("◇(A∪B), A={a:?} B={b:?}"));
            }
            // ⇓(□A ∩ ◇B1 ∩ … ∩ ◇Bk) = ⋂ ⇓(□A ∩ ◇Bi), over multisets of B's.
            for k in 1..=3 {
                for bs in multisets(subsets.len(), k) {
                    let mut basic = boxes[ia].clone();
                    let mut meet_of_downs = everything.clone();
                    for &b in &bs {
                        basic.intersect_with(&diamonds[b]);
                        meet_of_downs.intersect_with(&space.down_closure(&boxes[ia].intersection(&diamonds[b]))?);
                    }
                    cert.case(space.down_closure(&basic)? == meet_of_downs, || format!("⇓ of basic set, A={a:?}, B={bs:?}"));
                }
            }
        }
        let upsets: Vec<Subset> = subsets.iter().filter(|s| x.is_upset(s)).cloned().collect();
        let downsets: Vec<Subset> = subsets.iter().filter(|s| x.is_downset(s)).cloned().collect();
        for d in &downsets {
            cert.case(space.order().is_downset(&boxes[idx(d)]), || format!("□D not a downset, D={d:?}"));
            cert.case(space.minv_down(d)? == diamonds[idx(d)], || format!("m⁻¹[D] ≠ ◇D, D={d:?}"));
        }
        for u in &upsets {
            cert.case(space.order().is_upset(&diamonds[idx(u)]), || format!("◇U not an upset, U={u:?}"));
            cert.case(space.minv_up(u)? == boxes[idx(u)], || format!("m⁻¹[U] ≠ □U, U={u:?}"));
        }
        for (ia, a) in subsets.iter().enumerate() {
            for d in &downsets {
                if d.is_subset(a) {
                    let s = boxes[ia].intersection(&diamonds[idx(d)]);
                    cert.case(space.order().is_downset(&s), || format!("□A∩◇D not a downset, A={a:?} D={d:?}"));
                }
                for u in &upsets {
                    let ud = u.intersection(d);
                    let lhs = space.down_closure(&boxes[ia].intersection(&diamonds[idx(&ud)]))?;
                    let rhs = boxes[idx(&a.union(d))].intersection(&diamonds[idx(&ud)]);
                    if ud.is_subset(a) {
                        cert.case(lhs == rhs, || format!("⇓(□A∩◇(U∩D)), A={a:?} U={u:?} D={d:?}"));
                    } else {
                        unqualified_cases += 1;
                        if lhs != rhs {
                            unqualified_failures += 1;
                        }
                    }
                }
            }
        }
    }
    cert.note(format!(
        "without U∩D ⊆ A the ⇓(□A∩◇(U∩D)) identity fails in {unqualified_failures} of {unqualified_cases} cases"
    ));
    Ok(cert)
}

/// `x ∈ ↟{A_1..A_n}` iff some chain inside `↓x` meets every `A_i`, decided by
/// scanning all subsets of `↓x`.
pub fn twohead_oracle(x: &Poset, family: &[Subset]) -> Subset {
    let n = x.size();
    let mut out = Subset::empty(n);
    for top in 0..n {
        let below = x.down_of(top).to_vec();
        let k = below.len();
        let found = (1u64..(1 << k)).any(|mask| {
            let members: Vec<usize> = (0..k).filter(|b| mask >> b & 1 == 1).map(|b| below[b]).collect();
            let is_chain = members.iter().all(|&p| members.iter().all(|&q| x.leq(p, q) || x.leq(q, p)));
            is_chain && family.iter().all(|a| members.iter().any(|&m| a.contains(m)))
        });
        if found {
            out.insert(top);
        }
    }
    out
}

/// Counts the upsets of `p` as antichains: each element is either left out, or kept
/// together with nothing comparable to it.
pub fn upset_count_oracle(p: &Poset) -> u128 {
    fn go(p: &Poset, rest: Subset, memo: &mut HashMap<Subset, u128>) -> u128 {
        let Some(x) = rest.iter().next() else { return 1 };
        if let Some(&v) = memo.get(&rest) {
            return v;
        }
        let mut without = rest.clone();
        without.remove(x);
        let mut with = without.clone();
        with.intersect_with(&p.up_of(x).union(p.down_of(x)).complement());
        let v = go(p, without, memo) + go(p, with, memo);
        memo.insert(rest, v);
        v
    }
    go(p, Subset::full(p.size()), &mut HashMap::new())
}

/// The recursive `↟` against the chain oracle, for all families of up to `max_family` subsets.
pub fn twohead_suite(posets: &[Poset], max_family: usize) -> Result<Certificate> {
    let mut cert = Certificate::new("twohead");
    for x in posets {
        let subsets = all_subsets(x.size());
        let mut up = TwoheadUp::new(x);
        for k in 0..=max_family {
            for fam in multisets(subsets.len(), k) {
                let family: Vec<Subset> = fam.iter().map(|&i| subsets[i].clone()).collect();
                let got = up.eval(&family)?;
                let want = twohead_oracle(x, &family);
                cert.case(got == want, || format!("family {family:?} on {x:?}"));
            }
        }
    }
    Ok(cert)
}

/// The union formula for upsets of basic sets against the order table: exhaustive for up
/// to two `W`s, and `random_cases` seeded draws with three.
pub fn basic_upsets_suite(posets: &[Poset], seed: u64, random_cases: usize, limits: &Limits) -> Result<Certificate> {
    let mut cert = Certificate::new("basic-upsets");
    let mut spaces: Vec<(Poset, ChainPoset)> = Vec::new();
    for x in posets {
        let space = cc(x, limits)?;
        let mut up = TwoheadUp::new(x);
        let subsets = all_subsets(x.size());
        for v in &subsets {
            let inside: Vec<&Subset> = subsets.iter().filter(|w| w.is_subset(v)).collect();
            for k in 0..=2 {
                for ws in multisets(inside.len(), k) {
                    let ws: Vec<Subset> = ws.iter().map(|&i| inside[i].clone()).collect();
                    let formula = upset_of_basic(&space, &mut up, v, &ws)?;
                    let direct = upset_of_basic_direct(&space, v, &ws)?;
                    cert.case(formula == direct, || format!("V={v:?} W={ws:?} on {x:?}"));
                }
            }
        }
        spaces.push((x.clone(), space));
    }
    let nonempty: Vec<&(Poset, ChainPoset)> = spaces.iter().filter(|(x, _)| !x.is_empty()).collect();
    if !nonempty.is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..random_cases {
            let (x, space) = nonempty[rng.gen_range(0..nonempty.len())];
            let n = x.size();
            let v = random_subset(&mut rng, n);
            let ws: Vec<Subset> = (0..3).map(|_| random_subset(&mut rng, n).intersection(&v)).collect();
            let mut up = TwoheadUp::new(x);
            let formula = upset_of_basic(space, &mut up, &v, &ws)?;
            let direct = upset_of_basic_direct(space, &v, &ws)?;
            cert.case(formula == direct, || format!("random V={v:?} W={ws:?} on {x:?}"));
        }
        cert.note(format!("{random_cases} seeded cases with three W's (seed {seed})"));
    }
    Ok(cert)
}

/// Upset algebras of root systems with at most `max_size` upsets: all finite Gödel
/// algebras of that size up to isomorphism.
pub fn goedel_targets(max_size: usize, limits: &Limits) -> Result<Vec<crate::lattice::HeytingAlgebra>> {
    // A root system with k elements has at least k + 1 upsets.
    let mut out = Vec::new();
    for y in root_systems_up_to(max_size.saturating_sub(1)) {
        if y.count_upsets_root_system()? <= max_size as u128 {
            out.push(upset_lattice(&y, limits.upsets)?.algebra().clone());
        }
    }
    Ok(out)
}

/// The universal property of the free algebra over each source lattice, into each target.
pub fn free_suite(
    sources: &[Poset],
    targets: &[crate::lattice::HeytingAlgebra],
    limits: &Limits,
) -> Result<Certificate> {
    let mut cert = Certificate::new("free");
    let mut homs = 0usize;
    for x in sources {
        let l = upset_lattice(x, limits.upsets)?.lattice().clone();
        let f = free_godel_over_lattice(&l, limits)?;
        for h in targets {
            let c = certify_free(&f, &l, h, Route::Auto, limits)?;
            homs += c.cases;
            cert.absorb(c);
        }
    }
    cert.note(format!("{} sources, {} targets, {homs} homomorphisms", sources.len(), targets.len()));
    Ok(cert)
}

/// The product property of the tensor of two 2-chains for every cone from each root system.
pub fn product_suite(posets: &[Poset], limits: &Limits) -> Result<Certificate> {
    let mut cert = Certificate::new("product");
    let factors = [Poset::chain(2), Poset::chain(2)];
    let t = tensor(&factors, limits)?;
    let space = t.space(limits)?;
    for z in posets.iter().filter(|p| p.is_root_system()) {
        let cones = enumerate_p_morphisms(z, &factors[0], |_| Subset::full(2), limits.homs)?;
        for f1 in &cones {
            for f2 in &cones {
                cert.absorb(verify_product_universal(&t, &space, z, &[f1.clone(), f2.clone()], limits.homs)?);
            }
        }
    }
    Ok(cert)
}

/// Random families of root systems: the depth of the tensor against the formula,
/// and a witness chain of that size in the tensor.
pub fn depth_suite(seed: u64, families: usize, limits: &Limits) -> Result<Certificate> {
    let mut cert = Certificate::new("depth");
    let pool: Vec<Poset> = root_systems_up_to(4).into_iter().filter(|p| !p.is_empty()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..families {
        let k = rng.gen_range(1..=3);
        let factors: Vec<Poset> = (0..k).map(|_| pool[rng.gen_range(0..pool.len())].clone()).collect();
        let (formula, computed) = depth_check_factors(&factors, limits)?;
        cert.case(formula == computed, || format!("formula {formula}, computed {computed} for {factors:?}"));
        // Deepest element of each factor, the maximum above it, and a random processing order.
        let mut zs: Vec<(usize, usize)> = Vec::new();
        let mut ws = Vec::new();
        for (i, f) in factors.iter().enumerate() {
            let z = (0..f.size()).max_by_key(|&y| f.up_of(y).count()).expect("nonempty factor");
            ws.push(f.up_of(z).iter().find(|&w| f.up_of(w).count() == 1).expect("maximum above z"));
            if f.up_of(z).count() > 1 {
                zs.push((i, z));
            }
        }
        zs.shuffle(&mut rng);
        let c = witness_chain(&factors, &ws, &zs)?;
        let t = tensor(&factors, limits)?;
        cert.case(t.chains.contains(&c), || format!("witness {c:?} is not in the tensor of {factors:?}"));
        cert.case(c.len() == formula, || format!("witness has size {} instead of {formula}", c.len()));
    }
    cert.note(format!("{families} families (seed {seed})"));
    Ok(cert)
}

/// Relabels a lattice by a permutation, so that round trips do not start from normal form.
pub fn permuted_lattice(l: &DistLattice, perm: &[usize]) -> Result<DistLattice> {
    let n = l.size();
    let mut inv = vec![0; n];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    let table = |op: &dyn Fn(usize, usize) -> usize| -> Vec<Vec<usize>> {
        (0..n).map(|a| (0..n).map(|b| perm[op(inv[a], inv[b])]).collect()).collect()
    };
    DistLattice::from_tables(table(&|a, b| l.meet(a, b)), table(&|a, b| l.join(a, b)))
}

/// Birkhoff round trips: posets through their upset lattices, and lattices through their duals.
pub fn roundtrip_suite(posets: &[Poset], seed: u64, limits: &Limits) -> Result<Certificate> {
    let mut cert = Certificate::new("roundtrip");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for p in posets {
        let alg = upset_lattice(p, limits.upsets)?;
        let (back, _) = dual_poset(alg.lattice());
        cert.case(back.isomorphism(p).is_some(), || format!("dual of upsets of {p:?} is {back:?}"));
        cert.case(alg.algebra().is_godel() == p.is_root_system(), || format!("prelinearity mismatch on {p:?}"));
        cert.case(alg.algebra().residuation_holds(), || format!("residuation fails on upsets of {p:?}"));
        let mut perm: Vec<usize> = (0..alg.size()).collect();
        perm.shuffle(&mut rng);
        let l = permuted_lattice(alg.lattice(), &perm)?;
        let (rep, s) = sigma(&l, limits.upsets)?;
        let bijective = s.is_injective() && s.map.len() == rep.size();
        cert.case(bijective && LatticeHom::preserves_lattice(&s.map, &l, rep.lattice()), || {
            format!("σ is not an isomorphism for the lattice of {p:?}")
        });
        cert.case(find_isomorphism(&l, alg.lattice()).is_some(), || format!("relabelled lattice of {p:?} not recognised"));
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn certificate_bookkeeping() {
        let mut c = Certificate::new("x");
        c.case(true, || unreachable!());
        c.case(false, || "bad".into());
        assert!(!c.passed());
        assert_eq!(c.summary(), "x: FAIL (1 of 2 cases)");
        let mut total = Certificate::new("total");
        total.absorb(c);
        assert_eq!(total.failures, vec!["x: bad".to_string()]);
    }

    #[test]
    fn oracle_examples() {
        let d4 = crate::corpus::named("d4").unwrap();
        let a = Subset::singleton(4, 1);
        let b = Subset::singleton(4, 2);
        assert!(twohead_oracle(&d4, &[a.clone(), b]).is_empty());
        assert_eq!(twohead_oracle(&d4, &[a]).to_vec(), vec![1, 3]);
        assert_eq!(twohead_oracle(&d4, &[]).count(), 4);
    }

    #[test]
    fn upset_counts() {
        assert_eq!(upset_count_oracle(&Poset::empty()), 1);
        assert_eq!(upset_count_oracle(&Poset::antichain(3)), 8);
        assert_eq!(upset_count_oracle(&Poset::chain(3)), 4);
        assert_eq!(upset_count_oracle(&crate::corpus::named("d4").unwrap()), 6);
    }

    #[test]
    fn multiset_counts() {
        assert_eq!(multisets(4, 2).len(), 10);
        assert_eq!(multisets(3, 0).len(), 1);
    }

    #[test]
    fn small_suites_pass() {
        let lim = Limits::default();
        let posets = posets_up_to(2);
        assert!(box_diamond_suite(&posets, &lim).unwrap().passed());
        assert!(twohead_suite(&posets, 2).unwrap().passed());
        assert!(basic_upsets_suite(&posets, 1, 20, &lim).unwrap().passed());
        assert!(roundtrip_suite(&posets, 1, &lim).unwrap().passed());
        assert!(depth_suite(3, 5, &lim).unwrap().passed());
    }
}

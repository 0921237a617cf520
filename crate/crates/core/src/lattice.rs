//! Finite distributive lattices, Heyting algebras and finite Birkhoff duality.
//!
//! Lattices are operation tables over `0..size`. The dual of a lattice is its
//! poset of join-irreducibles with the order reversed, so that an element `a`
//! corresponds to the upset `{j | j ≤ a}`; the dual of a poset is the algebra
//! of its upsets.

use std::collections::HashMap;

use crate::error::{check_dim, Error, Result};
use crate::poset::Poset;
use crate::subset::Subset;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistLattice {
    size: usize,
    meet: Vec<Vec<usize>>,
    join: Vec<Vec<usize>>,
    bot: usize,
    top: usize,
}

impl DistLattice {
    /// Builds a lattice from meet and join tables, checking the lattice laws and distributivity.
    pub fn from_tables(meet: Vec<Vec<usize>>, join: Vec<Vec<usize>>) -> Result<Self> {
        let n = meet.len();
        check_dim(n, join.len())?;
        for row in meet.iter().chain(join.iter()) {
            check_dim(n, row.len())?;
            if row.iter().any(|&v| v >= n) {
                return Err(Error::invalid("operation table entry out of range"));
            }
        }
        if n == 0 {
            return Err(Error::invalid("a bounded lattice has at least one element"));
        }
        let all = || (0..n).flat_map(|a| (0..n).map(move |b| (a, b)));
        if (0..n).any(|a| meet[a][a] != a || join[a][a] != a) {
            return Err(Error::invalid("idempotence violated"));
        }
        if all().any(|(a, b)| meet[a][b] != meet[b][a] || join[a][b] != join[b][a]) {
            return Err(Error::invalid("commutativity violated"));
        }
        if all().any(|(a, b)| meet[a][join[a][b]] != a || join[a][meet[a][b]] != a) {
            return Err(Error::invalid("absorption violated"));
        }
        for (a, b) in all() {
            for c in 0..n {
                if meet[a][meet[b][c]] != meet[meet[a][b]][c] || join[a][join[b][c]] != join[join[a][b]][c] {
                    return Err(Error::invalid("associativity violated"));
                }
                if meet[a][join[b][c]] != join[meet[a][b]][meet[a][c]] {
                    return Err(Error::invalid("distributivity violated"));
                }
            }
        }
        let bot = (0..n).find(|&b| (0..n).all(|a| join[b][a] == a)).expect("finite lattice has a bottom");
        let top = (0..n).find(|&t| (0..n).all(|a| meet[t][a] == a)).expect("finite lattice has a top");
        Ok(DistLattice { size: n, meet, join, bot, top })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn bot(&self) -> usize {
        self.bot
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a][b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a][b]
    }

    pub fn meet_table(&self) -> &[Vec<usize>] {
        &self.meet
    }

    pub fn join_table(&self) -> &[Vec<usize>] {
        &self.join
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.meet[a][b] == a
    }

    /// The lattice order as a poset.
    pub fn order(&self) -> Poset {
        Poset::from_relation(self.size, |a, b| self.leq(a, b)).expect("lattice order is a partial order")
    }

    /// Elements with exactly one lower cover, in increasing index order.
    pub fn join_irreducibles(&self) -> Vec<usize> {
        (0..self.size)
            .filter(|&j| {
                if j == self.bot {
                    return false;
                }
                // j is join-irreducible iff the join of everything strictly below it is strictly below it.
                let below = (0..self.size)
                    .filter(|&a| a != j && self.leq(a, j))
                    .fold(self.bot, |acc, a| self.join[acc][a]);
                below != j
            })
            .collect()
    }

    /// Heyting implication table, `a → b = ⋁{c | c ∧ a ≤ b}`.
    fn implication_table(&self) -> Vec<Vec<usize>> {
        (0..self.size)
            .map(|a| {
                (0..self.size)
                    .map(|b| {
                        (0..self.size)
                            .filter(|&c| self.leq(self.meet[c][a], b))
                            .fold(self.bot, |acc, c| self.join[acc][c])
                    })
                    .collect()
            })
            .collect()
    }

    /// Co-implication table, `a ← b = ⋀{c | a ≤ b ∨ c}`.
    pub fn coimplication_table(&self) -> Vec<Vec<usize>> {
        (0..self.size)
            .map(|a| {
                (0..self.size)
                    .map(|b| {
                        (0..self.size)
                            .filter(|&c| self.leq(a, self.join[b][c]))
                            .fold(self.top, |acc, c| self.meet[acc][c])
                    })
                    .collect()
            })
            .collect()
    }

    /// Whether `a ← b ≤ c` iff `a ≤ b ∨ c` holds for the given table.
    pub fn co_residuation_holds(&self, co: &[Vec<usize>]) -> bool {
        let n = self.size;
        (0..n).all(|a| {
            (0..n).all(|b| (0..n).all(|c| self.leq(co[a][b], c) == self.leq(a, self.join[b][c])))
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeytingAlgebra {
    lattice: DistLattice,
    imp: Vec<Vec<usize>>,
    godel: bool,
}

impl HeytingAlgebra {
    /// The unique Heyting structure of a finite distributive lattice.
    pub fn from_lattice(lattice: DistLattice) -> Self {
        let imp = lattice.implication_table();
        Self::assemble(lattice, imp)
    }

    /// Checks a supplied implication table against residuation.
    pub fn with_implication(lattice: DistLattice, imp: Vec<Vec<usize>>) -> Result<Self> {
        check_dim(lattice.size, imp.len())?;
        for row in &imp {
            check_dim(lattice.size, row.len())?;
        }
        let h = Self::assemble(lattice, imp);
        if !h.residuation_holds() {
            return Err(Error::invalid("residuation violated"));
        }
        Ok(h)
    }

    fn assemble(lattice: DistLattice, imp: Vec<Vec<usize>>) -> Self {
        let n = lattice.size;
        let godel = (0..n).all(|a| (0..n).all(|b| lattice.join[imp[a][b]][imp[b][a]] == lattice.top));
        HeytingAlgebra { lattice, imp, godel }
    }

    pub fn lattice(&self) -> &DistLattice {
        &self.lattice
    }

    pub fn size(&self) -> usize {
        self.lattice.size
    }

    pub fn imp(&self, a: usize, b: usize) -> usize {
        self.imp[a][b]
    }

    pub fn imp_table(&self) -> &[Vec<usize>] {
        &self.imp
    }

    /// Prelinearity `(a → b) ∨ (b → a) = 1` holds.
    pub fn is_godel(&self) -> bool {
        self.godel
    }

    /// `a ∧ b ≤ c` iff `a ≤ b → c` for all triples.
    pub fn residuation_holds(&self) -> bool {
        let l = &self.lattice;
        let n = l.size;
        (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| l.leq(l.meet[a][b], c) == l.leq(a, self.imp[b][c]))))
    }

    /// `bd_n(x_1, ..., x_n)` with `bd_0 = 0` and `bd_k = x_k ∨ (x_k → bd_{k-1})`.
    pub fn bd_value(&self, xs: &[usize]) -> Result<usize> {
        let l = &self.lattice;
        if let Some(&bad) = xs.iter().find(|&&x| x >= l.size) {
            return Err(Error::Dimension { expected: l.size, found: bad });
        }
        Ok(xs.iter().fold(l.bot, |acc, &x| l.join[x][self.imp[x][acc]]))
    }

    /// Whether `bd_n = 1` under every assignment, i.e. membership in the depth-`n` variety.
    pub fn is_in_gan(&self, n: usize, cap: usize) -> Result<bool> {
        if !self.godel {
            return Err(Error::precondition("algebra is not Gödel"));
        }
        let size = self.size();
        let total = (size as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if total > cap as u128 {
            return Err(Error::Resource { cap: "assignments", limit: cap });
        }
        let mut xs = vec![0; n];
        loop {
            if self.bd_value(&xs)? != self.lattice.top {
                return Ok(false);
            }
            let mut i = 0;
            loop {
                if i == n {
                    return Ok(true);
                }
                xs[i] += 1;
                if xs[i] < size {
                    break;
                }
                xs[i] = 0;
                i += 1;
            }
        }
    }
}

/// Which operations a homomorphism must preserve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Flavor {
    /// Bounds, meet and join.
    Lattice,
    /// Bounds, meet, join and implication.
    Heyting,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeHom {
    pub map: Vec<usize>,
    pub flavor: Flavor,
}

impl LatticeHom {
    /// Whether `map` preserves the lattice operations between `src` and `dst`.
    pub fn preserves_lattice(map: &[usize], src: &DistLattice, dst: &DistLattice) -> bool {
        map.len() == src.size
            && map[src.bot] == dst.bot
            && map[src.top] == dst.top
            && (0..src.size).all(|a| {
                (0..src.size).all(|b| {
                    map[src.meet[a][b]] == dst.meet[map[a]][map[b]] && map[src.join[a][b]] == dst.join[map[a]][map[b]]
                })
            })
    }

    pub fn preserves_heyting(map: &[usize], src: &HeytingAlgebra, dst: &HeytingAlgebra) -> bool {
        Self::preserves_lattice(map, &src.lattice, &dst.lattice)
            && (0..src.size()).all(|a| (0..src.size()).all(|b| map[src.imp[a][b]] == dst.imp[map[a]][map[b]]))
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = self.map.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len() == self.map.len()
    }
}

/// The algebra of upsets of a poset, with its elements kept as subsets.
#[derive(Clone, Debug)]
pub struct UpsetAlgebra {
    poset: Poset,
    upsets: Vec<Subset>,
    index: HashMap<Subset, usize>,
    algebra: HeytingAlgebra,
}

impl UpsetAlgebra {
    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    /// The upsets in element order: by cardinality, then lexicographically.
    pub fn upsets(&self) -> &[Subset] {
        &self.upsets
    }

    pub fn algebra(&self) -> &HeytingAlgebra {
        &self.algebra
    }

    pub fn lattice(&self) -> &DistLattice {
        &self.algebra.lattice
    }

    pub fn size(&self) -> usize {
        self.upsets.len()
    }

    /// The element index of an upset, or `None` if the subset is not an upset.
    pub fn element(&self, upset: &Subset) -> Option<usize> {
        self.index.get(upset).copied()
    }

    pub fn upset(&self, element: usize) -> &Subset {
        &self.upsets[element]
    }
}

/// The upset algebra of `p`; more than `cap` upsets is a resource error.
pub fn upset_lattice(p: &Poset, cap: usize) -> Result<UpsetAlgebra> {
    let upsets = p.enumerate_upsets(cap)?;
    let n = upsets.len();
    let index: HashMap<Subset, usize> = upsets.iter().cloned().enumerate().map(|(i, u)| (u, i)).collect();
    let lookup = |s: &Subset| index[s];
    let mut meet = vec![vec![0; n]; n];
    let mut join = vec![vec![0; n]; n];
    let mut imp = vec![vec![0; n]; n];
    let full = Subset::full(p.size());
    for a in 0..n {
        for b in a..n {
            let m = lookup(&upsets[a].intersection(&upsets[b]));
            let j = lookup(&upsets[a].union(&upsets[b]));
            meet[a][b] = m;
            meet[b][a] = m;
            join[a][b] = j;
            join[b][a] = j;
        }
        for b in 0..n {
            // U → V = Y ∖ ↓(U ∖ V)
            let below = p.down_set(&upsets[a].difference(&upsets[b]))?;
            imp[a][b] = lookup(&full.difference(&below));
        }
    }
    let lattice = DistLattice { size: n, meet, join, bot: 0, top: n - 1 };
    let algebra = HeytingAlgebra::assemble(lattice, imp);
    Ok(UpsetAlgebra { poset: p.clone(), upsets, index, algebra })
}

/// The dual of a lattice: its join-irreducibles, with `j ≤ k` in the dual iff `k ≤ j` in the
/// lattice. Returns the poset and, for each dual point, the lattice element it came from.
pub fn dual_poset(l: &DistLattice) -> (Poset, Vec<usize>) {
    let ji = l.join_irreducibles();
    let p = Poset::from_relation(ji.len(), |a, b| l.leq(ji[b], ji[a])).expect("reversed lattice order");
    let labels = ji.iter().map(|j| j.to_string()).collect();
    (p.with_labels(labels).expect("one label per point"), ji)
}

/// The representation `a ↦ {j | j ≤ a}` of `l` into the upsets of its dual.
pub fn sigma(l: &DistLattice, cap: usize) -> Result<(UpsetAlgebra, LatticeHom)> {
    let (dual, ji) = dual_poset(l);
    let alg = upset_lattice(&dual, cap)?;
    let map = (0..l.size)
        .map(|a| {
            let s = Subset::from_indices(ji.len(), (0..ji.len()).filter(|&i| l.leq(ji[i], a)));
            alg.element(&s).expect("σ(a) is an upset")
        })
        .collect();
    Ok((alg, LatticeHom { map, flavor: Flavor::Lattice }))
}

/// The subset `{j | j ≤ a}` of the dual of `l`, without building the upset algebra.
pub fn sigma_set(l: &DistLattice, ji: &[usize], a: usize) -> Subset {
    Subset::from_indices(ji.len(), (0..ji.len()).filter(|&i| l.leq(ji[i], a)))
}

/// All homomorphisms `src → dst` of the given flavor, in lexicographic order of their maps.
///
/// A lattice homomorphism is determined by its values on join-irreducibles; those
/// are assigned in increasing order with monotonicity and pairwise-meet pruning,
/// the map is extended by joins and finally checked in full. More than `cap`
/// search nodes is a resource error.
pub fn enumerate_homs(
    src: &HeytingAlgebra,
    dst: &HeytingAlgebra,
    flavor: Flavor,
    cap: usize,
) -> Result<Vec<LatticeHom>> {
    let sl = &src.lattice;
    let ji = sl.join_irreducibles();
    // Increasing order: a join-irreducible's smaller join-irreducibles come first.
    let mut order: Vec<usize> = (0..ji.len()).collect();
    order.sort_by_key(|&i| (0..sl.size).filter(|&a| sl.leq(a, ji[i])).count());
    let below: Vec<Vec<usize>> = (0..sl.size)
        .map(|a| (0..ji.len()).filter(|&i| sl.leq(ji[i], a)).collect())
        .collect();
    let mut assign = vec![usize::MAX; ji.len()];
    let mut out = Vec::new();
    let mut nodes = 0usize;
    struct Ctx<'a> {
        src: &'a HeytingAlgebra,
        dst: &'a HeytingAlgebra,
        ji: &'a [usize],
        order: &'a [usize],
        below: &'a [Vec<usize>],
        flavor: Flavor,
        cap: usize,
    }
    fn extend(ctx: &Ctx, assign: &[usize], a: usize) -> usize {
        let dl = &ctx.dst.lattice;
        ctx.below[a].iter().fold(dl.bot, |acc, &i| dl.join[acc][assign[i]])
    }
    fn go(ctx: &Ctx, k: usize, assign: &mut Vec<usize>, out: &mut Vec<LatticeHom>, nodes: &mut usize) -> Result<()> {
        let (sl, dl) = (&ctx.src.lattice, &ctx.dst.lattice);
        if k == ctx.order.len() {
            let map: Vec<usize> = (0..sl.size).map(|a| extend(ctx, assign, a)).collect();
            let ok = match ctx.flavor {
                Flavor::Lattice => LatticeHom::preserves_lattice(&map, sl, dl),
                Flavor::Heyting => LatticeHom::preserves_heyting(&map, ctx.src, ctx.dst),
            };
            if ok {
                out.push(LatticeHom { map, flavor: ctx.flavor });
            }
            return Ok(());
        }
        let i = ctx.order[k];
        for v in 0..dl.size {
            *nodes += 1;
            if *nodes > ctx.cap {
                return Err(Error::Resource { cap: "homs", limit: ctx.cap });
            }
            let placed = &ctx.order[..k];
            if placed.iter().any(|&p| sl.leq(ctx.ji[p], ctx.ji[i]) && !dl.leq(assign[p], v)) {
                continue;
            }
            assign[i] = v;
            let meets_ok = placed.iter().all(|&p| {
                let m = sl.meet[ctx.ji[p]][ctx.ji[i]];
                dl.meet[assign[p]][v] == extend(ctx, assign, m)
            });
            if meets_ok {
                go(ctx, k + 1, assign, out, nodes)?;
            }
            assign[i] = usize::MAX;
        }
        Ok(())
    }
    let ctx = Ctx { src, dst, ji: &ji, order: &order, below: &below, flavor, cap };
    go(&ctx, 0, &mut assign, &mut out, &mut nodes)?;
    out.sort();
    Ok(out)
}

/// An isomorphism `a → b` of distributive lattices, found through their duals.
pub fn find_isomorphism(a: &DistLattice, b: &DistLattice) -> Option<Vec<usize>> {
    if a.size != b.size {
        return None;
    }
    let (da, ja) = dual_poset(a);
    let (db, jb) = dual_poset(b);
    let phi = da.isomorphism(&db)?;
    let map: Vec<usize> = (0..a.size)
        .map(|x| {
            (0..ja.len())
                .filter(|&i| a.leq(ja[i], x))
                .fold(b.bot, |acc, i| b.join[acc][jb[phi[i]]])
        })
        .collect();
    LatticeHom::preserves_lattice(&map, a, b).then_some(map)
}

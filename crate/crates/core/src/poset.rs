//! Finite posets: the combinatorial stand-in for finite Priestley and Esakia spaces.
//!
//! Elements are dense indices `0..size`. The order is stored twice, as the
//! principal upset and the principal downset of every element, so that
//! `↑A`, `↓A` and the chain tests used everywhere downstream are bitmask
//! unions and subset checks.

use std::collections::HashMap;
use std::fmt;

use crate::error::{check_dim, Error, Result};
use crate::subset::Subset;

#[derive(Clone, PartialEq, Eq)]
pub struct Poset {
    size: usize,
    up: Vec<Subset>,
    down: Vec<Subset>,
    labels: Option<Vec<String>>,
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Poset")
            .field("size", &self.size)
            .field("covers", &self.covers())
            .finish()
    }
}

impl Poset {
    /// The empty poset, dual of the one-element lattice.
    pub fn empty() -> Self {
        Poset { size: 0, up: Vec::new(), down: Vec::new(), labels: None }
    }

    /// Builds a poset from a `size × size` boolean table, checking the order axioms.
    pub fn from_leq_table(table: &[Vec<bool>]) -> Result<Self> {
        let n = table.len();
        for row in table {
            check_dim(n, row.len())?;
        }
        Self::from_relation(n, |a, b| table[a][b])
    }

    /// Builds a poset from a relation predicate, checking the order axioms.
    pub fn from_relation(size: usize, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let mut up = vec![Subset::empty(size); size];
        let mut down = vec![Subset::empty(size); size];
        for a in 0..size {
            for b in 0..size {
                if leq(a, b) {
                    up[a].insert(b);
                    down[b].insert(a);
                }
            }
        }
        let p = Poset { size, up, down, labels: None };
        p.validate()?;
        Ok(p)
    }

    /// Builds a poset as the reflexive-transitive closure of a cover list `(i, j)`
    /// meaning `i` is covered by `j`.
    pub fn from_covers(size: usize, covers: &[(usize, usize)]) -> Result<Self> {
        let mut up: Vec<Subset> = (0..size).map(|i| Subset::singleton(size, i)).collect();
        for &(i, j) in covers {
            if i >= size || j >= size {
                return Err(Error::invalid(format!("cover ({i},{j}) out of range for size {size}")));
            }
            up[i].insert(j);
        }
        // Warshall closure on rows.
        for k in 0..size {
            let row_k = up[k].clone();
            for row in up.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        for a in 0..size {
            for b in (a + 1)..size {
                if up[a].contains(b) && up[b].contains(a) {
                    return Err(Error::invalid("antisymmetry violated"));
                }
            }
        }
        let mut down = vec![Subset::empty(size); size];
        for (a, row) in up.iter().enumerate() {
            for b in row.iter() {
                down[b].insert(a);
            }
        }
        Ok(Poset { size, up, down, labels: None })
    }

    /// Builds a poset from principal upsets known to define a partial order.
    pub(crate) fn from_up_sets(up: Vec<Subset>) -> Self {
        let size = up.len();
        let mut down = vec![Subset::empty(size); size];
        for (a, row) in up.iter().enumerate() {
            for b in row.iter() {
                down[b].insert(a);
            }
        }
        Poset { size, up, down, labels: None }
    }

    /// Re-checks the order axioms; constructors that skip validation are tested against this.
    pub fn check_axioms(&self) -> Result<()> {
        self.validate()
    }

    fn validate(&self) -> Result<()> {
        for a in 0..self.size {
            if !self.up[a].contains(a) {
                return Err(Error::invalid("reflexivity violated"));
            }
            for b in self.up[a].iter() {
                if b != a && self.up[b].contains(a) {
                    return Err(Error::invalid("antisymmetry violated"));
                }
                if !self.up[b].is_subset(&self.up[a]) {
                    return Err(Error::invalid("transitivity violated"));
                }
            }
        }
        Ok(())
    }

    pub fn chain(k: usize) -> Self {
        Self::from_relation(k, |a, b| a <= b).expect("chain order")
    }

    pub fn antichain(k: usize) -> Self {
        Self::from_relation(k, |a, b| a == b).expect("discrete order")
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        check_dim(self.size, labels.len())?;
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Display name of element `x`: its label if one is set, else the index.
    pub fn label(&self, x: usize) -> String {
        match &self.labels {
            Some(l) => l[x].clone(),
            None => x.to_string(),
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    /// The principal upset `↑x`.
    pub fn up_of(&self, x: usize) -> &Subset {
        &self.up[x]
    }

    /// The principal downset `↓x`.
    pub fn down_of(&self, x: usize) -> &Subset {
        &self.down[x]
    }

    pub fn up_set(&self, a: &Subset) -> Result<Subset> {
        check_dim(self.size, a.universe())?;
        let mut out = Subset::empty(self.size);
        for x in a.iter() {
            out.union_with(&self.up[x]);
        }
        Ok(out)
    }

    pub fn down_set(&self, a: &Subset) -> Result<Subset> {
        check_dim(self.size, a.universe())?;
        let mut out = Subset::empty(self.size);
        for x in a.iter() {
            out.union_with(&self.down[x]);
        }
        Ok(out)
    }

    pub fn is_upset(&self, a: &Subset) -> bool {
        a.universe() == self.size && a.iter().all(|x| self.up[x].is_subset(a))
    }

    pub fn is_downset(&self, a: &Subset) -> bool {
        a.universe() == self.size && a.iter().all(|x| self.down[x].is_subset(a))
    }

    /// Whether the members of `a` are pairwise comparable.
    pub fn is_chain(&self, a: &Subset) -> bool {
        a.iter().all(|x| a.is_subset(&self.up[x].union(&self.down[x])))
    }

    /// True iff every principal upset is a chain.
    pub fn is_root_system(&self) -> bool {
        (0..self.size).all(|x| self.is_chain(&self.up[x]))
    }

    /// True iff every principal downset is a chain (a forest of trees growing upward).
    pub fn is_forest(&self) -> bool {
        (0..self.size).all(|x| self.is_chain(&self.down[x]))
    }

    fn require_root_system(&self) -> Result<()> {
        if self.is_root_system() {
            Ok(())
        } else {
            Err(Error::precondition("poset is not a root system"))
        }
    }

    /// Depth `|↑x|` of an element of a root system.
    pub fn depth(&self, x: usize) -> Result<usize> {
        self.require_root_system()?;
        if x >= self.size {
            return Err(Error::Dimension { expected: self.size, found: x });
        }
        Ok(self.up[x].count())
    }

    /// Maximum depth over all elements; 0 for the empty poset.
    pub fn depth_of(&self) -> Result<usize> {
        self.require_root_system()?;
        Ok(self.up.iter().map(Subset::count).max().unwrap_or(0))
    }

    /// The induced subposet on `{y | d(y) ≤ n}`, with the embedding into `self`.
    pub fn restrict_to_depth(&self, n: usize) -> Result<(Poset, Vec<usize>)> {
        self.require_root_system()?;
        let keep = Subset::from_indices(self.size, (0..self.size).filter(|&x| self.up[x].count() <= n));
        Ok(self.induced(&keep))
    }

    /// The induced subposet on `members`; returns it with the map from new to old indices.
    pub fn induced(&self, members: &Subset) -> (Poset, Vec<usize>) {
        let embed = members.to_vec();
        let n = embed.len();
        let mut up = vec![Subset::empty(n); n];
        let mut down = vec![Subset::empty(n); n];
        for (i, &a) in embed.iter().enumerate() {
            for (j, &b) in embed.iter().enumerate() {
                if self.leq(a, b) {
                    up[i].insert(j);
                    down[j].insert(i);
                }
            }
        }
        let labels = self.labels.as_ref().map(|l| embed.iter().map(|&a| l[a].clone()).collect());
        (Poset { size: n, up, down, labels }, embed)
    }

    /// The order dual.
    pub fn dual(&self) -> Poset {
        Poset {
            size: self.size,
            up: self.down.clone(),
            down: self.up.clone(),
            labels: self.labels.clone(),
        }
    }

    /// A linear extension, stable with respect to index order.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut placed = Subset::empty(self.size);
        let mut out = Vec::with_capacity(self.size);
        while out.len() < self.size {
            let next = (0..self.size)
                .find(|&x| !placed.contains(x) && self.down[x].difference(&placed).count() == 1)
                .expect("finite poset has a minimal unplaced element");
            placed.insert(next);
            out.push(next);
        }
        out
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.size).filter(|&x| self.up[x].count() == 1).collect()
    }

    pub fn minimal(&self) -> Vec<usize> {
        (0..self.size).filter(|&x| self.down[x].count() == 1).collect()
    }

    /// Cover pairs `(a, b)` with `a < b` and nothing strictly between, in lexicographic order.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.size {
            for b in self.up[a].iter() {
                if b == a {
                    continue;
                }
                let between = self.up[a].intersection(&self.down[b]).count();
                if between == 2 {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// All nonempty chains in lexicographic order of their sorted element lists.
    ///
    /// Chains are grown depth-first by appending elements above the current maximum,
    /// taken in linear-extension order; more than `cap` chains is a resource error.
    pub fn enumerate_chains(&self, cap: usize) -> Result<Vec<Chain>> {
        let order = self.linear_extension();
        let mut found: Vec<Vec<usize>> = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        fn grow(
            p: &Poset,
            order: &[usize],
            start: usize,
            stack: &mut Vec<usize>,
            found: &mut Vec<Vec<usize>>,
            cap: usize,
        ) -> Result<()> {
            for (i, &y) in order.iter().enumerate().skip(start) {
                if let Some(&top) = stack.last() {
                    if !p.lt(top, y) {
                        continue;
                    }
                }
                stack.push(y);
                if found.len() >= cap {
                    return Err(Error::Resource { cap: "chains", limit: cap });
                }
                found.push(stack.clone());
                grow(p, order, i + 1, stack, found, cap)?;
                stack.pop();
            }
            Ok(())
        }
        grow(self, &order, 0, &mut stack, &mut found, cap)?;
        let mut chains: Vec<Vec<usize>> = found
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        chains.sort();
        Ok(chains.into_iter().map(|c| Chain::new_unchecked(self, c)).collect())
    }

    /// All upsets, ordered by cardinality and then by sorted element list.
    pub fn enumerate_upsets(&self, cap: usize) -> Result<Vec<Subset>> {
        let mut order = self.linear_extension();
        order.reverse();
        let mut found = Vec::new();
        let mut current = Subset::empty(self.size);
        fn go(
            p: &Poset,
            order: &[usize],
            i: usize,
            current: &mut Subset,
            found: &mut Vec<Subset>,
            cap: usize,
        ) -> Result<()> {
            if i == order.len() {
                if found.len() >= cap {
                    return Err(Error::Resource { cap: "upsets", limit: cap });
                }
                found.push(current.clone());
                return Ok(());
            }
            let x = order[i];
            go(p, order, i + 1, current, found, cap)?;
            let mut strict_up = p.up[x].clone();
            strict_up.remove(x);
            if strict_up.is_subset(current) {
                current.insert(x);
                go(p, order, i + 1, current, found, cap)?;
                current.remove(x);
            }
            Ok(())
        }
        go(self, &order, 0, &mut current, &mut found, cap)?;
        found.sort_by_key(|s| (s.count(), s.to_vec()));
        Ok(found)
    }

    /// Number of upsets of a root system, by the tree recursion
    /// `count(tree) = 1 + Π count(subtrees)` over the components of the forest
    /// obtained by reading the root system top-down.
    pub fn count_upsets_root_system(&self) -> Result<u128> {
        self.require_root_system()?;
        // In a root system each non-maximal element has a unique upper cover.
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); self.size];
        for (a, b) in self.covers() {
            children[b].push(a);
        }
        fn count(x: usize, children: &[Vec<usize>]) -> u128 {
            1 + children[x].iter().map(|&c| count(c, children)).product::<u128>()
        }
        Ok(self.maximal().iter().map(|&m| count(m, &children)).product())
    }

    /// An order isomorphism `self → other`, if one exists.
    pub fn isomorphism(&self, other: &Poset) -> Option<Vec<usize>> {
        if self.size != other.size {
            return None;
        }
        let profile = |p: &Poset, x: usize| (p.up[x].count(), p.down[x].count());
        let mut sp: Vec<_> = (0..self.size).map(|x| profile(self, x)).collect();
        let mut op: Vec<_> = (0..other.size).map(|x| profile(other, x)).collect();
        let src_profiles = sp.clone();
        sp.sort_unstable();
        op.sort_unstable();
        if sp != op {
            return None;
        }
        let order = self.linear_extension();
        let mut map = vec![usize::MAX; self.size];
        let mut used = vec![false; other.size];
        fn go(
            a: &Poset,
            b: &Poset,
            order: &[usize],
            i: usize,
            src_profiles: &[(usize, usize)],
            map: &mut [usize],
            used: &mut [bool],
        ) -> bool {
            if i == order.len() {
                return true;
            }
            let x = order[i];
            for y in 0..b.size {
                if used[y] || (b.up[y].count(), b.down[y].count()) != src_profiles[x] {
                    continue;
                }
                let consistent = order[..i].iter().all(|&w| {
                    let v = map[w];
                    a.leq(w, x) == b.leq(v, y) && a.leq(x, w) == b.leq(y, v)
                });
                if !consistent {
                    continue;
                }
                map[x] = y;
                used[y] = true;
                if go(a, b, order, i + 1, src_profiles, map, used) {
                    return true;
                }
                used[y] = false;
                map[x] = usize::MAX;
            }
            false
        }
        if go(self, other, &order, 0, &src_profiles, &mut map, &mut used) {
            Some(map)
        } else {
            None
        }
    }

    /// A canonical form under relabelling: elements are sorted by their
    /// `(|↓x|, |↑x|)` profile and the least order table over all permutations
    /// inside profile classes is kept. Only for small posets.
    pub fn canonical_key(&self) -> (Vec<(usize, usize)>, Vec<bool>) {
        let n = self.size;
        let profile = |x: usize| (self.down[x].count(), self.up[x].count());
        let mut base: Vec<usize> = (0..n).collect();
        base.sort_by_key(|&x| profile(x));
        let profiles: Vec<_> = base.iter().map(|&x| profile(x)).collect();
        let mut blocks = Vec::new();
        let mut start = 0;
        for i in 1..=n {
            if i == n || profiles[i] != profiles[start] {
                blocks.push((start, i));
                start = i;
            }
        }
        let mut perm = base.clone();
        let mut best: Option<Vec<bool>> = None;
        loop {
            let key: Vec<bool> = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .map(|(i, j)| self.leq(perm[i], perm[j]))
                .collect();
            if best.as_ref().is_none_or(|b| key < *b) {
                best = Some(key);
            }
            // Odometer over the per-block permutations.
            let mut advanced = false;
            for &(lo, hi) in blocks.iter().rev() {
                if next_permutation(&mut perm[lo..hi]) {
                    advanced = true;
                    break;
                }
                perm[lo..hi].sort_unstable();
            }
            if !advanced {
                break;
            }
        }
        (profiles, best.unwrap_or_default())
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// A nonempty totally ordered subset, kept as a sorted index list plus a mask.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Chain {
    elements: Vec<usize>,
    mask: Subset,
    least: usize,
    greatest: usize,
}

impl fmt::Debug for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(&self.elements).finish()
    }
}

impl Chain {
    pub fn new(parent: &Poset, mut elements: Vec<usize>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::invalid("chains are nonempty"));
        }
        elements.sort_unstable();
        elements.dedup();
        if let Some(&bad) = elements.iter().find(|&&x| x >= parent.size()) {
            return Err(Error::Dimension { expected: parent.size(), found: bad });
        }
        let mask = Subset::from_indices(parent.size(), elements.iter().copied());
        if !parent.is_chain(&mask) {
            return Err(Error::invalid("elements are not totally ordered"));
        }
        Ok(Self::new_unchecked(parent, elements))
    }

    pub fn from_subset(parent: &Poset, s: &Subset) -> Result<Self> {
        check_dim(parent.size(), s.universe())?;
        Self::new(parent, s.to_vec())
    }

    pub(crate) fn new_unchecked(parent: &Poset, elements: Vec<usize>) -> Self {
        let mask = Subset::from_indices(parent.size(), elements.iter().copied());
        let least = *elements
            .iter()
            .find(|&&x| mask.is_subset(parent.up_of(x)))
            .expect("chain has a least element");
        let greatest = *elements
            .iter()
            .find(|&&x| mask.is_subset(parent.down_of(x)))
            .expect("chain has a greatest element");
        Chain { elements, mask, least, greatest }
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn mask(&self) -> &Subset {
        &self.mask
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The least element (the map `m`).
    pub fn least(&self) -> usize {
        self.least
    }

    pub fn greatest(&self) -> usize {
        self.greatest
    }

    /// Renders the chain as `{x1,...,xk}` using the parent's labels.
    pub fn render(&self, parent: &Poset) -> String {
        let inner: Vec<String> = self.elements.iter().map(|&x| parent.label(x)).collect();
        format!("{{{}}}", inner.join(","))
    }
}

/// A total map between two posets, borrowed for checking.
#[derive(Clone, Debug)]
pub struct PMorph<'a> {
    pub source: &'a Poset,
    pub target: &'a Poset,
    pub map: Vec<usize>,
}

impl<'a> PMorph<'a> {
    pub fn new(source: &'a Poset, target: &'a Poset, map: Vec<usize>) -> Result<Self> {
        check_dim(source.size(), map.len())?;
        if let Some(&bad) = map.iter().find(|&&y| y >= target.size()) {
            return Err(Error::Dimension { expected: target.size(), found: bad });
        }
        Ok(PMorph { source, target, map })
    }

    pub fn is_monotone(&self) -> bool {
        (0..self.source.size()).all(|x| {
            self.source.up_of(x).iter().all(|y| self.target.leq(self.map[x], self.map[y]))
        })
    }

    /// Image `f[A]` of a subset of the source.
    pub fn image(&self, a: &Subset) -> Subset {
        Subset::from_indices(self.target.size(), a.iter().map(|x| self.map[x]))
    }

    /// Order-preserving and `f[↑x] = ↑f(x)` for every `x`.
    pub fn is_p_morphism(&self) -> bool {
        self.is_monotone()
            && (0..self.source.size())
                .all(|x| &self.image(self.source.up_of(x)) == self.target.up_of(self.map[x]))
    }
}

/// Enumerates the p-morphisms `source → target` whose value at each `x` lies in
/// `allowed(x)`. Elements are assigned top-down so the back condition at `x` is
/// decided as soon as `x` is placed. Visiting more than `cap` search nodes is a
/// resource error.
pub fn enumerate_p_morphisms(
    source: &Poset,
    target: &Poset,
    allowed: impl Fn(usize) -> Subset,
    cap: usize,
) -> Result<Vec<Vec<usize>>> {
    let mut order = source.linear_extension();
    order.reverse();
    let candidates: Vec<Subset> = (0..source.size()).map(&allowed).collect();
    let mut map = vec![usize::MAX; source.size()];
    let mut out = Vec::new();
    let mut nodes = 0usize;
    #[allow(clippy::too_many_arguments)]
    fn go(
        s: &Poset,
        t: &Poset,
        order: &[usize],
        i: usize,
        candidates: &[Subset],
        map: &mut [usize],
        out: &mut Vec<Vec<usize>>,
        nodes: &mut usize,
        cap: usize,
    ) -> Result<()> {
        if i == order.len() {
            out.push(map.to_vec());
            return Ok(());
        }
        let x = order[i];
        for y in candidates[x].iter() {
            *nodes += 1;
            if *nodes > cap {
                return Err(Error::Resource { cap: "homs", limit: cap });
            }
            // Everything strictly above x is already placed.
            let monotone = s.up_of(x).iter().filter(|&w| w != x).all(|w| t.leq(y, map[w]));
            if !monotone {
                continue;
            }
            map[x] = y;
            let mut img = Subset::empty(t.size());
            for w in s.up_of(x).iter() {
                img.insert(map[w]);
            }
            if &img == t.up_of(y) {
                go(s, t, order, i + 1, candidates, map, out, nodes, cap)?;
            }
            map[x] = usize::MAX;
        }
        Ok(())
    }
    go(source, target, &order, 0, &candidates, &mut map, &mut out, &mut nodes, cap)?;
    out.sort();
    Ok(out)
}

/// Enumerates all order-preserving maps `source → target`, in lexicographic order.
pub fn enumerate_monotone_maps(source: &Poset, target: &Poset, cap: usize) -> Result<Vec<Vec<usize>>> {
    let order = source.linear_extension();
    let mut map = vec![usize::MAX; source.size()];
    let mut out = Vec::new();
    let mut nodes = 0usize;
    fn go(
        s: &Poset,
        t: &Poset,
        order: &[usize],
        i: usize,
        map: &mut [usize],
        out: &mut Vec<Vec<usize>>,
        nodes: &mut usize,
        cap: usize,
    ) -> Result<()> {
        if i == order.len() {
            out.push(map.to_vec());
            return Ok(());
        }
        let x = order[i];
        for y in 0..t.size() {
            *nodes += 1;
            if *nodes > cap {
                return Err(Error::Resource { cap: "homs", limit: cap });
            }
            if s.down_of(x).iter().filter(|&w| w != x).all(|w| t.leq(map[w], y)) {
                map[x] = y;
                go(s, t, order, i + 1, map, out, nodes, cap)?;
                map[x] = usize::MAX;
            }
        }
        Ok(())
    }
    go(source, target, &order, 0, &mut map, &mut out, &mut nodes, cap)?;
    out.sort();
    Ok(out)
}

/// Index of each chain's element list, for constant-time lookup.
pub(crate) fn chain_index(chains: &[Chain]) -> HashMap<Vec<usize>, usize> {
    chains.iter().enumerate().map(|(i, c)| (c.elements().to_vec(), i)).collect()
}

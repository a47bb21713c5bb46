//! Explicit finite groups given by a multiplication table.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::{Arc, OnceLock};

use crate::character::CharacterTable;
use crate::error::{Error, Result};

/// Default cap on the size of a permutation closure.
pub const PERMUTATION_CAP: usize = 5000;
/// Default cap on the group order for subgroup enumeration and products.
pub const GROUP_ORDER_CAP: usize = 500;
/// Associativity is checked on all triples up to this order; beyond it
/// Light's test on a generating set is used.
const EXHAUSTIVE_ASSOCIATIVITY: usize = 256;

#[derive(Debug, Clone)]
pub struct FiniteGroup {
    order: usize,
    identity: usize,
    mult: Vec<usize>,
    inv: Vec<usize>,
    generators: Vec<usize>,
    name: Option<String>,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    char_table: OnceLock<Arc<CharacterTable>>,
}

impl FiniteGroup {
    /// Validate a Cayley table and build the group.
    pub fn from_mult_table(table: &[Vec<usize>]) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(not_a_group("empty table", vec![]));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(not_a_group("table is not square", vec![i]));
            }
            if let Some(j) = row.iter().position(|&x| x >= n) {
                return Err(not_a_group("entry out of range", vec![i, j]));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| not_a_group("no two-sided identity", vec![]))?;
        let mut inv = vec![usize::MAX; n];
        for g in 0..n {
            let h = (0..n)
                .find(|&h| table[g][h] == identity && table[h][g] == identity)
                .ok_or_else(|| not_a_group("element without inverse", vec![g]))?;
            inv[g] = h;
        }
        let mult: Vec<usize> = table.iter().flatten().copied().collect();
        let mut group = Self::assemble(n, identity, mult, inv);
        if n <= EXHAUSTIVE_ASSOCIATIVITY {
            for x in 0..n {
                for y in 0..n {
                    let xy = group.mul(x, y);
                    for z in 0..n {
                        if group.mul(xy, z) != group.mul(x, group.mul(y, z)) {
                            return Err(not_a_group("associativity fails", vec![x, y, z]));
                        }
                    }
                }
            }
        } else {
            // Rows must be permutations for Light's test to be meaningful.
            for (i, row) in table.iter().enumerate() {
                let distinct: HashSet<_> = row.iter().collect();
                if distinct.len() != n {
                    return Err(not_a_group("row is not a permutation", vec![i]));
                }
            }
            for &g in &group.generators {
                for x in 0..n {
                    for y in 0..n {
                        if group.mul(group.mul(x, y), g) != group.mul(x, group.mul(y, g)) {
                            return Err(not_a_group("associativity fails", vec![x, y, g]));
                        }
                    }
                }
            }
        }
        group.generators = group.greedy_generators();
        Ok(group)
    }

    /// Closure of permutation generators under composition `(p·q)(x) = p(q(x))`.
    ///
    /// Elements are ordered lexicographically as images lists, so the
    /// identity is always element 0.
    pub fn from_permutations(gens: &[Vec<usize>], cap: usize) -> Result<Self> {
        let degree = gens.first().map_or(0, |g| g.len());
        for (i, g) in gens.iter().enumerate() {
            let mut seen = vec![false; g.len()];
            let ok = g.len() == degree
                && g.iter()
                    .all(|&x| x < degree && !std::mem::replace(&mut seen[x], true));
            if !ok {
                return Err(Error::InvalidInput(format!(
                    "generator {i} is not a permutation of 0..{degree}"
                )));
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        let mut seen: HashSet<Vec<usize>> = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        let mut elems = Vec::new();
        while let Some(p) = queue.pop_front() {
            for g in gens {
                let q: Vec<usize> = (0..degree).map(|x| p[g[x]]).collect();
                if seen.insert(q.clone()) {
                    if seen.len() > cap {
                        return Err(Error::CapExceeded {
                            what: "permutation closure",
                            size: seen.len(),
                            cap,
                        });
                    }
                    queue.push_back(q);
                }
            }
            elems.push(p);
        }
        elems.sort();
        let index: HashMap<&Vec<usize>, usize> =
            elems.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let n = elems.len();
        let mut mult = vec![0; n * n];
        for (i, p) in elems.iter().enumerate() {
            for (j, q) in elems.iter().enumerate() {
                let pq: Vec<usize> = (0..degree).map(|x| p[q[x]]).collect();
                mult[i * n + j] = index[&pq];
            }
        }
        let inv = (0..n)
            .map(|i| {
                (0..n)
                    .find(|&j| mult[i * n + j] == 0)
                    .expect("closure contains inverses")
            })
            .collect();
        let mut group = Self::assemble(n, 0, mult, inv);
        group.generators = group.greedy_generators();
        Ok(group)
    }

    /// Componentwise product; element `(a, b)` has index `a·|G2| + b`.
    pub fn direct_product(g1: &FiniteGroup, g2: &FiniteGroup, cap: usize) -> Result<Self> {
        let (n1, n2) = (g1.order, g2.order);
        let n = n1 * n2;
        if n > cap {
            return Err(Error::CapExceeded {
                what: "direct product order",
                size: n,
                cap,
            });
        }
        let mut mult = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let (a1, a2) = (a / n2, a % n2);
                let (b1, b2) = (b / n2, b % n2);
                mult[a * n + b] = g1.mul(a1, b1) * n2 + g2.mul(a2, b2);
            }
        }
        let inv = (0..n)
            .map(|a| g1.inv(a / n2) * n2 + g2.inv(a % n2))
            .collect();
        let mut group = Self::assemble(n, g1.identity * n2 + g2.identity, mult, inv);
        group.generators = group.greedy_generators();
        group.name = match (&g1.name, &g2.name) {
            (Some(a), Some(b)) => Some(format!("{a}x{b}")),
            _ => None,
        };
        Ok(group)
    }

    fn assemble(order: usize, identity: usize, mult: Vec<usize>, inv: Vec<usize>) -> Self {
        let mut group = FiniteGroup {
            order,
            identity,
            mult,
            inv,
            generators: Vec::new(),
            name: None,
            classes: Vec::new(),
            class_of: Vec::new(),
            char_table: OnceLock::new(),
        };
        group.compute_classes();
        group
    }

    fn compute_classes(&mut self) {
        let n = self.order;
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for g in 0..n {
            if class_of[g] != usize::MAX {
                continue;
            }
            let mut members: Vec<usize> = (0..n).map(|x| self.conj(x, g)).collect();
            members.sort_unstable();
            members.dedup();
            for &m in &members {
                class_of[m] = classes.len();
            }
            classes.push(members);
        }
        self.classes = classes;
        self.class_of = class_of;
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![self.identity];
        for g in 0..self.order {
            if span.binary_search(&g).is_err() {
                gens.push(g);
                span = self.closure(&gens);
            }
        }
        gens
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// `x g x⁻¹`
    #[inline]
    pub fn conj(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(x, g), self.inv(x))
    }

    pub fn mult_table(&self) -> Vec<Vec<usize>> {
        self.mult.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// Conjugacy classes sorted by minimal element.
    pub fn conjugacy_classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, g: usize) -> usize {
        self.class_of[g]
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    /// Sorted member list of the subgroup generated by `gens`.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.order];
        inside[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !inside[y] {
                    inside[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order).filter(|&g| inside[g]).collect()
    }

    /// Irreducible character table, computed once with the default seed.
    pub fn character_table(&self) -> Arc<CharacterTable> {
        self.char_table
            .get_or_init(|| {
                Arc::new(
                    CharacterTable::compute(self, crate::DEFAULT_SEED)
                        .expect("character table computation exhausted its retries"),
                )
            })
            .clone()
    }
}

fn not_a_group(reason: &str, witness: Vec<usize>) -> Error {
    Error::NotAGroup {
        reason: reason.to_string(),
        witness,
    }
}

#[derive(Debug, Clone)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    members: Vec<usize>,
    as_group: OnceLock<Arc<FiniteGroup>>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.parent, &other.parent) && self.members == other.members
    }
}

impl Subgroup {
    /// Subgroup from an explicit member list; closure is verified.
    pub fn new(parent: Arc<FiniteGroup>, mut members: Vec<usize>) -> Result<Self> {
        members.sort_unstable();
        members.dedup();
        let closed = parent.closure(&members);
        if closed != members {
            return Err(Error::InvalidInput("member set is not a subgroup".into()));
        }
        Ok(Self::from_sorted(parent, members))
    }

    pub fn generated(parent: Arc<FiniteGroup>, gens: &[usize]) -> Self {
        let members = parent.closure(gens);
        Self::from_sorted(parent, members)
    }

    pub fn whole(parent: Arc<FiniteGroup>) -> Self {
        let members = (0..parent.order()).collect();
        Self::from_sorted(parent, members)
    }

    pub fn trivial(parent: Arc<FiniteGroup>) -> Self {
        let members = vec![parent.identity()];
        Self::from_sorted(parent, members)
    }

    fn from_sorted(parent: Arc<FiniteGroup>, members: Vec<usize>) -> Self {
        Subgroup {
            parent,
            members,
            as_group: OnceLock::new(),
        }
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn index(&self) -> usize {
        self.parent.order() / self.members.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    /// Position of a parent element in the member list.
    pub fn local_index(&self, g: usize) -> Option<usize> {
        self.members.binary_search(&g).ok()
    }

    pub fn conjugate(&self, x: usize) -> Subgroup {
        let mut members: Vec<usize> = self
            .members
            .iter()
            .map(|&h| self.parent.conj(x, h))
            .collect();
        members.sort_unstable();
        Self::from_sorted(self.parent.clone(), members)
    }

    pub fn is_normal(&self) -> bool {
        self.parent.generators().iter().all(|&x| {
            self.members
                .iter()
                .all(|&h| self.contains(self.parent.conj(x, h)))
        })
    }

    /// `{ x ∈ G : x H x⁻¹ = H }`
    pub fn normalizer(&self) -> Vec<usize> {
        (0..self.parent.order())
            .filter(|&x| {
                self.members
                    .iter()
                    .all(|&h| self.contains(self.parent.conj(x, h)))
            })
            .collect()
    }

    /// The subgroup as a group in its own right; local element `i` is the
    /// parent element `members[i]`.
    pub fn as_group(&self) -> Arc<FiniteGroup> {
        self.as_group
            .get_or_init(|| {
                let k = self.members.len();
                let mut mult = vec![0; k * k];
                for (i, &a) in self.members.iter().enumerate() {
                    for (j, &b) in self.members.iter().enumerate() {
                        mult[i * k + j] = self.local_index(self.parent.mul(a, b)).expect("closed");
                    }
                }
                let inv = self
                    .members
                    .iter()
                    .map(|&a| self.local_index(self.parent.inv(a)).expect("closed"))
                    .collect();
                let identity = self
                    .local_index(self.parent.identity())
                    .expect("contains identity");
                let mut g = FiniteGroup::assemble(k, identity, mult, inv);
                g.generators = g.greedy_generators();
                Arc::new(g)
            })
            .clone()
    }

    /// Re-express `self` (which must lie inside `outer`) as a subgroup of
    /// `outer.as_group()`.
    pub fn within(&self, outer: &Subgroup) -> Result<Subgroup> {
        let local: Option<Vec<usize>> =
            self.members.iter().map(|&h| outer.local_index(h)).collect();
        let local = local.ok_or_else(|| {
            Error::InvalidInput("subgroup is not contained in the outer subgroup".into())
        })?;
        Subgroup::new(outer.as_group(), local)
    }
}

/// Conjugacy-class representative: the lexicographically least conjugate.
fn canonical_conjugate(parent: &FiniteGroup, members: &[usize]) -> Vec<usize> {
    let mut best = members.to_vec();
    for x in 0..parent.order() {
        let mut conj: Vec<usize> = members.iter().map(|&h| parent.conj(x, h)).collect();
        conj.sort_unstable();
        if conj < best {
            best = conj;
        }
    }
    best
}

/// One representative per conjugacy class of subgroups, sorted by order and
/// then by member list.
///
/// Classes are found by closure: start from the cyclic subgroups and extend
/// every class representative by one element from each of its cosets.
pub fn all_subgroups(group: &Arc<FiniteGroup>, cap: usize) -> Result<Vec<Subgroup>> {
    let n = group.order();
    if n > cap {
        return Err(Error::CapExceeded {
            what: "group order for subgroup enumeration",
            size: n,
            cap,
        });
    }
    let mut known: HashSet<Vec<usize>> = HashSet::new();
    let mut queue: VecDeque<Vec<usize>> = VecDeque::new();
    for g in 0..n {
        let canon = canonical_conjugate(group, &group.closure(&[g]));
        if known.insert(canon.clone()) {
            queue.push_back(canon);
        }
    }
    while let Some(h) = queue.pop_front() {
        let mut covered = vec![false; n];
        for &x in &h {
            covered[x] = true;
        }
        for g in 0..n {
            if covered[g] {
                continue;
            }
            for &x in &h {
                covered[group.mul(g, x)] = true;
            }
            let mut gens = h.clone();
            gens.push(g);
            let canon = canonical_conjugate(group, &group.closure(&gens));
            if known.insert(canon.clone()) {
                queue.push_back(canon);
            }
        }
    }
    let mut reps: Vec<Vec<usize>> = known.into_iter().collect();
    reps.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(reps
        .into_iter()
        .map(|m| Subgroup::from_sorted(group.clone(), m))
        .collect())
}

#[derive(Debug, Clone)]
pub struct Transversal {
    pub subgroup: Subgroup,
    pub reps: Vec<usize>,
    coset_of: Vec<usize>,
}

impl Transversal {
    /// Index of the left coset `g_i H` containing `g`.
    pub fn coset_of(&self, g: usize) -> usize {
        self.coset_of[g]
    }

    /// For `g` and coset `i`, the pair `(j, h)` with `g · g_i = g_j · h`.
    pub fn decompose(&self, g: usize, i: usize) -> (usize, usize) {
        let group = self.subgroup.parent();
        let x = group.mul(g, self.reps[i]);
        let j = self.coset_of[x];
        (j, group.mul(group.inv(self.reps[j]), x))
    }
}

/// Left transversal with the identity first, other representatives chosen
/// by a sweep over element indices.
pub fn left_transversal(group: &FiniteGroup, subgroup: &Subgroup) -> Transversal {
    let n = group.order();
    let mut coset_of = vec![usize::MAX; n];
    let mut reps = Vec::new();
    let sweep = std::iter::once(group.identity()).chain((0..n).filter(|&g| g != group.identity()));
    for g in sweep {
        if coset_of[g] != usize::MAX {
            continue;
        }
        for &h in subgroup.members() {
            coset_of[group.mul(g, h)] = reps.len();
        }
        reps.push(g);
    }
    Transversal {
        subgroup: subgroup.clone(),
        reps,
        coset_of,
    }
}

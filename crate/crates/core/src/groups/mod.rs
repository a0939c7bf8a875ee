//! Finite groups realized as Cayley tables.
//!
//! Every group in the engine (permutation groups, quotients, subgroups and
//! twisted central extensions) is normalized to a multiplication table on
//! the indices `0..n` with the identity at index 0. Derived data such as
//! conjugacy classes is computed lazily and cached; a group never changes
//! after construction.

mod builtin;
mod io;

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::util::{p_part, prime_factors};

pub use builtin::{builtin_group, builtin_names};
pub use io::{load_group, GroupSpec};

/// Largest group the engine accepts unless told otherwise.
pub const DEFAULT_ORDER_CAP: usize = 2000;

/// Element index inside a [`FiniteGroup`].
pub type Elem = usize;

/// How a group came to exist.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Origin {
    Permutations {
        degree: usize,
        generators: Vec<Vec<u32>>,
    },
    Cayley,
    TwistedExtension {
        base: String,
        cyclic_order: usize,
    },
    Quotient {
        parent: String,
        kernel_order: usize,
    },
    Subgroup {
        parent: String,
    },
}

/// A conjugacy class, identified by its smallest member.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjClass {
    pub representative: Elem,
    pub members: Vec<Elem>,
    pub size: usize,
}

#[derive(Debug, Clone)]
struct ClassData {
    classes: Vec<ConjClass>,
    class_of: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    labels: Option<Vec<String>>,
    origin: Origin,
    classes: OnceLock<ClassData>,
    elem_orders: OnceLock<Vec<usize>>,
}

/// A subgroup of some ambient group, stored as a sorted set of element
/// indices of that group. The ambient group is passed explicitly to every
/// operation that needs it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subgroup {
    members: Vec<Elem>,
}

impl Subgroup {
    pub fn trivial() -> Self {
        Subgroup { members: vec![0] }
    }

    pub fn whole(g: &FiniteGroup) -> Self {
        Subgroup {
            members: (0..g.order()).collect(),
        }
    }

    /// Builds a subgroup from an explicit member list, checking closure.
    pub fn from_members(g: &FiniteGroup, members: &[Elem]) -> Result<Self> {
        let mut m: Vec<Elem> = members.to_vec();
        m.sort_unstable();
        m.dedup();
        if m.iter().any(|&x| x >= g.order()) {
            return Err(Error::MalformedInput("subgroup member out of range".into()));
        }
        let s = Subgroup { members: m };
        if !s.contains(0) {
            return Err(Error::MalformedInput("subgroup must contain the identity".into()));
        }
        for &a in &s.members {
            if !s.contains(g.inv(a)) {
                return Err(Error::MalformedInput(format!("not closed under inverse at {a}")));
            }
            for &b in &s.members {
                if !s.contains(g.mul(a, b)) {
                    return Err(Error::MalformedInput(format!(
                        "not closed under multiplication at ({a}, {b})"
                    )));
                }
            }
        }
        Ok(s)
    }

    pub(crate) fn from_sorted_unchecked(members: Vec<Elem>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Subgroup { members }
    }

    pub fn members(&self) -> &[Elem] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&x| other.contains(x))
    }
}

/// The cosets of a normal subgroup as a group in their own right.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub group: FiniteGroup,
    /// Element of the parent to coset index.
    pub projection: Vec<usize>,
    /// Smallest parent element of each coset.
    pub representatives: Vec<Elem>,
    pub kernel: Subgroup,
}

impl Quotient {
    /// Full preimage of a subgroup of the quotient.
    pub fn preimage(&self, h: &Subgroup) -> Subgroup {
        let members = (0..self.projection.len())
            .filter(|&g| h.contains(self.projection[g]))
            .collect();
        Subgroup::from_sorted_unchecked(members)
    }

    /// Image of a subgroup of the parent.
    pub fn image(&self, h: &Subgroup) -> Subgroup {
        let mut m: Vec<Elem> = h.members().iter().map(|&g| self.projection[g]).collect();
        m.sort_unstable();
        m.dedup();
        Subgroup::from_sorted_unchecked(m)
    }

    /// The p-part of the coset `gN`, as an element of the quotient.
    pub fn p_part_of_coset(&self, g: Elem, p: u64) -> Elem {
        self.group.p_part_element(self.projection[g], p)
    }
}

/// A subgroup materialized as a standalone group, with its embedding.
#[derive(Debug, Clone)]
pub struct SubgroupView {
    pub group: Arc<FiniteGroup>,
    /// Index in the subgroup to index in the parent.
    pub embed: Vec<Elem>,
    lookup: HashMap<Elem, Elem>,
}

impl SubgroupView {
    /// Index in the subgroup of a parent element, if it belongs to it.
    pub fn local(&self, parent_elem: Elem) -> Option<Elem> {
        self.lookup.get(&parent_elem).copied()
    }

    pub fn as_subgroup(&self) -> Subgroup {
        let mut m = self.embed.clone();
        m.sort_unstable();
        Subgroup::from_sorted_unchecked(m)
    }
}

fn compose(x: &[u32], y: &[u32]) -> Vec<u32> {
    x.iter().map(|&i| y[i as usize]).collect()
}

impl FiniteGroup {
    /// Closure of a set of permutations of `{0..d-1}`, given as image lists.
    ///
    /// The product `xy` applies `x` first. Elements are numbered in
    /// breadth-first order from the identity.
    pub fn from_permutations(name: &str, generators: &[Vec<u32>], cap: usize) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::MalformedInput("empty generator set".into()));
        }
        let degree = generators[0].len();
        for (i, gen) in generators.iter().enumerate() {
            if gen.len() != degree {
                return Err(Error::MalformedPermutation {
                    generator: i,
                    reason: format!("length {} differs from degree {degree}", gen.len()),
                });
            }
            let mut seen = vec![false; degree];
            for &v in gen {
                let v = v as usize;
                if v >= degree || seen[v] {
                    return Err(Error::MalformedPermutation {
                        generator: i,
                        reason: format!("image {v} is out of range or repeated"),
                    });
                }
                seen[v] = true;
            }
        }
        let identity: Vec<u32> = (0..degree as u32).collect();
        let mut index: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut elems = vec![identity.clone()];
        index.insert(identity, 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for gen in generators {
                let y = compose(&elems[i], gen);
                if !index.contains_key(&y) {
                    if elems.len() >= cap {
                        return Err(Error::OrderCapExceeded { cap });
                    }
                    index.insert(y.clone(), elems.len() as u32);
                    queue.push_back(elems.len());
                    elems.push(y);
                }
            }
        }
        let n = elems.len();
        let mut mul = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[a * n + b] = index[&compose(&elems[a], &elems[b])];
            }
        }
        let labels = elems
            .iter()
            .map(|p| {
                let s: Vec<String> = p.iter().map(|v| v.to_string()).collect();
                format!("[{}]", s.join(","))
            })
            .collect();
        let mut g = Self::from_table_unchecked(
            name,
            n,
            mul,
            Origin::Permutations {
                degree,
                generators: generators.to_vec(),
            },
        );
        g.labels = Some(labels);
        Ok(g)
    }

    /// Validates and adopts an explicit multiplication table.
    ///
    /// Index 0 must be the identity and every row and column must be a
    /// permutation. Associativity is checked exhaustively for small tables
    /// and on a seeded sample of triples otherwise.
    pub fn from_cayley(name: &str, table: &[Vec<u32>], cap: usize) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::MalformedInput("empty Cayley table".into()));
        }
        if n > cap {
            return Err(Error::OrderCapExceeded { cap });
        }
        for (r, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidCayleyTable {
                    row: r,
                    col: row.len().min(n),
                    reason: format!("row has length {}, expected {n}", row.len()),
                });
            }
            let mut seen = vec![false; n];
            for (c, &v) in row.iter().enumerate() {
                if v as usize >= n || seen[v as usize] {
                    return Err(Error::InvalidCayleyTable {
                        row: r,
                        col: c,
                        reason: format!("entry {v} is out of range or repeated in row"),
                    });
                }
                seen[v as usize] = true;
            }
        }
        for c in 0..n {
            let mut seen = vec![false; n];
            for r in 0..n {
                let v = table[r][c] as usize;
                if seen[v] {
                    return Err(Error::InvalidCayleyTable {
                        row: r,
                        col: c,
                        reason: format!("entry {v} repeated in column"),
                    });
                }
                seen[v] = true;
            }
        }
        for x in 0..n {
            if table[0][x] as usize != x || table[x][0] as usize != x {
                return Err(Error::InvalidCayleyTable {
                    row: x,
                    col: 0,
                    reason: "index 0 is not a two-sided identity".into(),
                });
            }
        }
        let mul: Vec<u32> = table.iter().flatten().copied().collect();
        let g = Self::from_table_unchecked(name, n, mul, Origin::Cayley);
        if let Some((a, b, c)) = g.associativity_violation(n <= 64) {
            return Err(Error::InvalidCayleyTable {
                row: a,
                col: b,
                reason: format!("associativity fails with third element {c}"),
            });
        }
        Ok(g)
    }

    pub(crate) fn from_table_unchecked(name: &str, n: usize, mul: Vec<u32>, origin: Origin) -> Self {
        let mut inv = vec![0u32; n];
        for x in 0..n {
            for y in 0..n {
                if mul[x * n + y] == 0 {
                    inv[x] = y as u32;
                    break;
                }
            }
        }
        FiniteGroup {
            name: name.to_string(),
            order: n,
            mul,
            inv,
            labels: None,
            origin,
            classes: OnceLock::new(),
            elem_orders: OnceLock::new(),
        }
    }

    /// Returns a violating triple, if any. With `exhaustive` false a fixed
    /// seeded sample of 20 000 triples is tested.
    pub fn associativity_violation(&self, exhaustive: bool) -> Option<(Elem, Elem, Elem)> {
        let n = self.order;
        let assoc = |a, b, c| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c));
        if exhaustive {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if !assoc(a, b, c) {
                            return Some((a, b, c));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            for _ in 0..20_000 {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if !assoc(a, b, c) {
                    return Some((a, b, c));
                }
            }
        }
        None
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: &str) {
        self.name = name.to_string();
    }

    pub fn origin(&self) -> &Origin {
        &self.origin
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, x: Elem) -> String {
        match &self.labels {
            Some(l) => l[x].clone(),
            None => x.to_string(),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a * self.order + b] as Elem
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inv[a] as Elem
    }

    /// `g^-1 x g`.
    #[inline]
    pub fn conj(&self, x: Elem, g: Elem) -> Elem {
        self.mul(self.mul(self.inv(g), x), g)
    }

    /// The full table as rows, e.g. for serialization.
    pub fn cayley_rows(&self) -> Vec<Vec<u32>> {
        self.mul.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    pub fn pow(&self, x: Elem, k: i64) -> Elem {
        let ord = self.element_order(x) as i64;
        let mut e = k.rem_euclid(ord);
        let mut base = x;
        let mut acc = 0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn orders(&self) -> &[usize] {
        self.elem_orders.get_or_init(|| {
            (0..self.order)
                .map(|x| {
                    let mut k = 1;
                    let mut y = x;
                    while y != 0 {
                        y = self.mul(y, x);
                        k += 1;
                    }
                    k
                })
                .collect()
        })
    }

    pub fn element_order(&self, x: Elem) -> usize {
        self.orders()[x]
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> usize {
        self.orders()
            .iter()
            .fold(1usize, |acc, &o| num_integer::lcm(acc, o))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// The p-part `x^k` of `x`, with `k ≡ 1` modulo the p-part of the order
    /// of `x` and `k ≡ 0` modulo its p'-part.
    pub fn p_part_element(&self, x: Elem, p: u64) -> Elem {
        let o = self.element_order(x) as u64;
        let pp = p_part(o, p);
        let r = o / pp;
        if pp == 1 {
            return 0;
        }
        // k = r * (r^{-1} mod pp)
        let rinv = crate::util::mod_inverse(r % pp, pp).expect("coprime");
        self.pow(x, (r * rinv) as i64)
    }

    /// The p'-part of `x`.
    pub fn p_regular_part(&self, x: Elem, p: u64) -> Elem {
        self.mul(x, self.inv(self.p_part_element(x, p)))
    }

    fn class_data(&self) -> &ClassData {
        self.classes.get_or_init(|| {
            let n = self.order;
            let mut class_of = vec![usize::MAX; n];
            let mut classes = Vec::new();
            for x in 0..n {
                if class_of[x] != usize::MAX {
                    continue;
                }
                let id = classes.len();
                let mut members = Vec::new();
                for g in 0..n {
                    let y = self.conj(x, g);
                    if class_of[y] == usize::MAX {
                        class_of[y] = id;
                        members.push(y);
                    }
                }
                members.sort_unstable();
                classes.push(ConjClass {
                    representative: x,
                    size: members.len(),
                    members,
                });
            }
            ClassData { classes, class_of }
        })
    }

    /// Conjugacy classes ordered by their smallest member; the identity class
    /// comes first.
    pub fn conjugacy_classes(&self) -> &[ConjClass] {
        &self.class_data().classes
    }

    pub fn class_of(&self, x: Elem) -> usize {
        self.class_data().class_of[x]
    }

    pub fn num_classes(&self) -> usize {
        self.conjugacy_classes().len()
    }

    /// Class containing the inverses of the members of class `k`.
    pub fn inverse_class(&self, k: usize) -> usize {
        self.class_of(self.inv(self.conjugacy_classes()[k].representative))
    }

    /// Class of `x^e` for `x` in class `k`.
    pub fn power_class(&self, k: usize, e: i64) -> usize {
        self.class_of(self.pow(self.conjugacy_classes()[k].representative, e))
    }

    pub fn centralizer(&self, x: Elem) -> Subgroup {
        Subgroup::from_sorted_unchecked(
            (0..self.order)
                .filter(|&g| self.mul(g, x) == self.mul(x, g))
                .collect(),
        )
    }

    pub fn center(&self) -> Subgroup {
        Subgroup::from_sorted_unchecked(
            (0..self.order)
                .filter(|&z| (0..self.order).all(|g| self.mul(g, z) == self.mul(z, g)))
                .collect(),
        )
    }

    /// Subgroup generated by a set of elements.
    pub fn generate(&self, gens: &[Elem]) -> Subgroup {
        let mut inside = vec![false; self.order];
        inside[0] = true;
        let mut members = vec![0];
        let gens: Vec<Elem> = gens.iter().copied().filter(|&g| g != 0).collect();
        let mut i = 0;
        while i < members.len() {
            let m = members[i];
            for &g in &gens {
                let y = self.mul(m, g);
                if !inside[y] {
                    inside[y] = true;
                    members.push(y);
                }
            }
            i += 1;
        }
        members.sort_unstable();
        Subgroup::from_sorted_unchecked(members)
    }

    /// Subgroup generated by `h` together with extra elements.
    pub fn join(&self, h: &Subgroup, extra: &[Elem]) -> Subgroup {
        let mut gens = h.members().to_vec();
        gens.extend_from_slice(extra);
        self.generate(&gens)
    }

    /// A small generating set, chosen greedily in index order.
    pub fn generators(&self) -> Vec<Elem> {
        let mut gens = Vec::new();
        let mut h = Subgroup::trivial();
        // Prefer elements of large order: they tend to generate quickly.
        let mut order: Vec<Elem> = (1..self.order).collect();
        order.sort_by_key(|&x| (std::cmp::Reverse(self.element_order(x)), x));
        for x in order {
            if h.order() == self.order {
                break;
            }
            if !h.contains(x) {
                gens.push(x);
                h = self.generate(&gens);
            }
        }
        gens
    }

    pub fn derived_subgroup(&self) -> Subgroup {
        let mut comms = HashSet::new();
        for a in 0..self.order {
            for b in 0..self.order {
                let c = self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b));
                comms.insert(c);
            }
        }
        let gens: Vec<Elem> = comms.into_iter().collect();
        self.generate(&gens)
    }

    pub fn conjugate_subgroup(&self, h: &Subgroup, g: Elem) -> Subgroup {
        let mut m: Vec<Elem> = h.members().iter().map(|&x| self.conj(x, g)).collect();
        m.sort_unstable();
        Subgroup::from_sorted_unchecked(m)
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        let gens = self.generators();
        gens.iter()
            .all(|&g| h.members().iter().all(|&x| h.contains(self.conj(x, g))))
    }

    pub fn normalizer(&self, h: &Subgroup) -> Subgroup {
        Subgroup::from_sorted_unchecked(
            (0..self.order)
                .filter(|&g| h.members().iter().all(|&x| h.contains(self.conj(x, g))))
                .collect(),
        )
    }

    pub fn is_abelian_subgroup(&self, h: &Subgroup) -> bool {
        let m = h.members();
        m.iter()
            .all(|&a| m.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Some `g` with `h1^g = h2`, found by brute force.
    pub fn conjugating_element(&self, h1: &Subgroup, h2: &Subgroup) -> Option<Elem> {
        if h1.order() != h2.order() {
            return None;
        }
        (0..self.order).find(|&g| h1.members().iter().all(|&x| h2.contains(self.conj(x, g))))
    }

    pub fn subgroups_conjugate(&self, h1: &Subgroup, h2: &Subgroup) -> bool {
        self.conjugating_element(h1, h2).is_some()
    }

    /// Whether some conjugate of `h1` lies inside `h2`.
    pub fn conjugate_into(&self, h1: &Subgroup, h2: &Subgroup) -> bool {
        if !h2.order().is_multiple_of(h1.order()) {
            return false;
        }
        (0..self.order).any(|g| h1.members().iter().all(|&x| h2.contains(self.conj(x, g))))
    }

    /// Whether `x` is conjugate to some element of `h`.
    pub fn element_conjugate_into(&self, x: Elem, h: &Subgroup) -> bool {
        let k = self.class_of(x);
        h.members().iter().any(|&y| self.class_of(y) == k)
    }

    /// Quotient by a normal subgroup. Cosets are numbered by their smallest
    /// element.
    pub fn quotient(&self, n: &Subgroup) -> Result<Quotient> {
        if !self.is_normal(n) {
            return Err(Error::NotNormal);
        }
        let size = self.order;
        let mut projection = vec![usize::MAX; size];
        let mut representatives = Vec::new();
        for g in 0..size {
            if projection[g] != usize::MAX {
                continue;
            }
            let c = representatives.len();
            representatives.push(g);
            for &x in n.members() {
                projection[self.mul(x, g)] = c;
            }
        }
        let k = representatives.len();
        let mut mul = vec![0u32; k * k];
        for a in 0..k {
            for b in 0..k {
                mul[a * k + b] =
                    projection[self.mul(representatives[a], representatives[b])] as u32;
            }
        }
        let name = format!("{}/N{}", self.name, n.order());
        let mut group = FiniteGroup::from_table_unchecked(
            &name,
            k,
            mul,
            Origin::Quotient {
                parent: self.name.clone(),
                kernel_order: n.order(),
            },
        );
        group.labels = Some(
            representatives
                .iter()
                .map(|&r| format!("{}N", self.label(r)))
                .collect(),
        );
        Ok(Quotient {
            group,
            projection,
            representatives,
            kernel: n.clone(),
        })
    }

    /// Materializes a subgroup as its own group, keeping the parent's
    /// element order.
    pub fn subgroup_view(&self, h: &Subgroup) -> SubgroupView {
        let embed = h.members().to_vec();
        let lookup: HashMap<Elem, Elem> = embed.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let k = embed.len();
        let mut mul = vec![0u32; k * k];
        for a in 0..k {
            for b in 0..k {
                mul[a * k + b] = lookup[&self.mul(embed[a], embed[b])] as u32;
            }
        }
        let mut group = FiniteGroup::from_table_unchecked(
            &format!("{}<{}>", self.name, k),
            k,
            mul,
            Origin::Subgroup {
                parent: self.name.clone(),
            },
        );
        group.labels = Some(embed.iter().map(|&x| self.label(x)).collect());
        SubgroupView {
            group: Arc::new(group),
            embed,
            lookup,
        }
    }

    /// A Sylow p-subgroup, i.e. a subgroup of order `|G|_p`.
    pub fn sylow_subgroup(&self, p: u64) -> Subgroup {
        self.sylow_within(&Subgroup::whole(self), p)
    }

    /// A Sylow p-subgroup of the subgroup `h`.
    ///
    /// Grows a p-subgroup `P` one step at a time: while `P` is not Sylow,
    /// `N_H(P)/P` has order divisible by p, so the first `x` in
    /// `N_H(P) \ P` with `x^p ∈ P` extends `P` to a p-subgroup of order
    /// `p|P|`.
    pub fn sylow_within(&self, h: &Subgroup, p: u64) -> Subgroup {
        let target = p_part(h.order() as u64, p) as usize;
        let mut pg = Subgroup::trivial();
        while pg.order() < target {
            let next = h.members().iter().copied().find(|&x| {
                !pg.contains(x)
                    && pg.contains(self.pow(x, p as i64))
                    && pg.members().iter().all(|&y| pg.contains(self.conj(y, x)))
            });
            let x = next.expect("normalizer quotient has order divisible by p");
            pg = self.join(&pg, &[x]);
        }
        pg
    }

    /// Every subgroup, by iterated joins starting from the cyclic ones.
    /// Intended for small groups only.
    pub fn all_subgroups(&self) -> Vec<Subgroup> {
        let mut seen: HashSet<Subgroup> = HashSet::new();
        let mut cyclic = Vec::new();
        for x in 0..self.order {
            let c = self.generate(&[x]);
            if seen.insert(c.clone()) {
                cyclic.push(c);
            }
        }
        let mut all = cyclic.clone();
        let mut frontier = cyclic.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for s in &frontier {
                for c in &cyclic {
                    if c.is_subset_of(s) {
                        continue;
                    }
                    let j = self.join(s, c.members());
                    if seen.insert(j.clone()) {
                        next.push(j.clone());
                        all.push(j);
                    }
                }
            }
            frontier = next;
        }
        all.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.cmp(b)));
        all
    }

    pub fn is_p_group(&self, p: u64) -> bool {
        p_part(self.order as u64, p) == self.order as u64
    }

    pub fn prime_divisors(&self) -> Vec<u64> {
        prime_factors(self.order as u64)
    }
}

/// `p_part_of_coset`: the p-part of `gN` computed in `G/N`.
pub fn p_part_of_coset(g: &FiniteGroup, n: &Subgroup, x: Elem, p: u64) -> Result<(Quotient, Elem)> {
    let q = g.quotient(n)?;
    let e = q.p_part_of_coset(x, p);
    Ok((q, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> FiniteGroup {
        FiniteGroup::from_permutations("S3", &[vec![1, 2, 0], vec![1, 0, 2]], DEFAULT_ORDER_CAP)
            .unwrap()
    }

    #[test]
    fn permutation_closure_orders() {
        let c2 = FiniteGroup::from_permutations("C2", &[vec![1, 0]], 10).unwrap();
        assert_eq!(c2.order(), 2);
        assert_eq!(s3().order(), 6);
        assert!(matches!(
            FiniteGroup::from_permutations("x", &[], 10),
            Err(Error::MalformedInput(_))
        ));
        assert!(matches!(
            FiniteGroup::from_permutations("x", &[vec![0, 0]], 10),
            Err(Error::MalformedPermutation { .. })
        ));
        assert!(matches!(
            FiniteGroup::from_permutations("S4", &[vec![1, 2, 3, 0], vec![1, 0, 2, 3]], 10),
            Err(Error::OrderCapExceeded { cap: 10 })
        ));
    }

    #[test]
    fn class_sizes() {
        let g = s3();
        let sizes: Vec<usize> = g.conjugacy_classes().iter().map(|c| c.size).collect();
        let mut sorted = sizes.clone();
        sorted.sort();
        assert_eq!(sorted, vec![1, 2, 3]);
        assert_eq!(g.conjugacy_classes()[0].members, vec![0]);
        // classes ordered by smallest member
        let reps: Vec<usize> = g.conjugacy_classes().iter().map(|c| c.representative).collect();
        assert!(reps.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn cayley_validation_reports_position() {
        let bad = vec![vec![0, 1], vec![1, 1]];
        match FiniteGroup::from_cayley("bad", &bad, 100) {
            Err(Error::InvalidCayleyTable { row, .. }) => assert_eq!(row, 1),
            other => panic!("unexpected {other:?}"),
        }
        let not_identity = vec![vec![1, 0], vec![0, 1]];
        assert!(FiniteGroup::from_cayley("bad", &not_identity, 100).is_err());
        let c2 = vec![vec![0, 1], vec![1, 0]];
        assert_eq!(FiniteGroup::from_cayley("C2", &c2, 100).unwrap().order(), 2);
    }

    #[test]
    fn quotient_by_trivial_is_isomorphic_copy() {
        let g = s3();
        let q = g.quotient(&Subgroup::trivial()).unwrap();
        assert_eq!(q.group.order(), 6);
        assert!(q.projection.iter().enumerate().all(|(i, &c)| i == c));
    }

    #[test]
    fn non_normal_quotient_rejected() {
        let g = s3();
        let t = (0..6).find(|&x| g.element_order(x) == 2).unwrap();
        let h = g.generate(&[t]);
        assert_eq!(g.quotient(&h).unwrap_err(), Error::NotNormal);
    }

    #[test]
    fn sylow_of_coprime_is_trivial() {
        let g = s3();
        assert_eq!(g.sylow_subgroup(5).order(), 1);
        assert_eq!(g.sylow_subgroup(3).order(), 3);
    }

    #[test]
    fn p_part_of_element_in_c6() {
        let c6 = FiniteGroup::from_permutations("C6", &[vec![1, 2, 3, 4, 5, 0]], 10).unwrap();
        let x = (0..6).find(|&x| c6.element_order(x) == 6).unwrap();
        let x2 = c6.p_part_element(x, 2);
        assert_eq!(c6.element_order(x2), 2);
        assert_eq!(x2, c6.pow(x, 3));
        let x3 = c6.p_part_element(x, 3);
        assert_eq!(x3, c6.pow(x, 4));
        assert_eq!(c6.mul(x2, x3), x);
    }
}

//! Finite groups as explicit multiplication tables.
//!
//! Every group used here has order at most 64, so all group-theoretic
//! questions (center, commutator subgroup, quotients, homomorphisms) are
//! answered by exhaustive table lookups. Groups defined by generators are
//! closed once at construction time.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use core::f64::consts::PI;

use thiserror::Error;

use crate::linalg::{cis, C64};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("unknown group name `{0}` (expected one of Z2, Z4, Z2xZ2, Z2xZ2_x_Z2xZ2, D2_semidirect_Z4)")]
    UnknownGroupName(String),
    #[error("multiplication table is not a group: {0}")]
    NotAGroup(String),
    #[error("generator closure exceeded {0} elements")]
    TooLarge(usize),
}

/// A finite group given by its multiplication table.
///
/// `mul(a, b)` is the index of the product `ab`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverses: Vec<usize>,
    labels: Vec<String>,
}

impl FiniteGroup {
    /// Validate and wrap a row-major multiplication table.
    pub fn from_table(table: Vec<Vec<usize>>, labels: Vec<String>) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::NotAGroup("empty table".into()));
        }
        if labels.len() != n {
            return Err(GroupError::NotAGroup(format!("{} labels for order {}", labels.len(), n)));
        }
        let mut flat = Vec::with_capacity(n * n);
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::NotAGroup(format!("row {i} has length {}", row.len())));
            }
            flat.extend_from_slice(row);
        }
        if flat.iter().any(|&x| x >= n) {
            return Err(GroupError::NotAGroup("entry out of range".into()));
        }
        // Latin square.
        for i in 0..n {
            let mut row_seen = vec![false; n];
            let mut col_seen = vec![false; n];
            for j in 0..n {
                row_seen[flat[i * n + j]] = true;
                col_seen[flat[j * n + i]] = true;
            }
            if row_seen.iter().chain(col_seen.iter()).any(|s| !s) {
                return Err(GroupError::NotAGroup(format!("row or column {i} is not a permutation")));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| flat[e * n + a] == a && flat[a * n + e] == a))
            .ok_or_else(|| GroupError::NotAGroup("no identity".into()))?;
        for a in 0..n {
            for b in 0..n {
                let ab = flat[a * n + b];
                for c in 0..n {
                    if flat[ab * n + c] != flat[a * n + flat[b * n + c]] {
                        return Err(GroupError::NotAGroup(format!("associativity fails at ({a},{b},{c})")));
                    }
                }
            }
        }
        let mut inverses = vec![0; n];
        for a in 0..n {
            inverses[a] = (0..n)
                .find(|&b| flat[a * n + b] == identity)
                .ok_or_else(|| GroupError::NotAGroup(format!("element {a} has no inverse")))?;
        }
        Ok(FiniteGroup { order: n, table: flat, identity, inverses, labels })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    /// Element index by label.
    pub fn element(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn elements(&self) -> core::ops::Range<usize> {
        0..self.order
    }

    /// Row-major copy of the table.
    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|i| self.table[i * self.order..(i + 1) * self.order].to_vec()).collect()
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Sorted multiset of element orders.
    pub fn order_profile(&self) -> Vec<usize> {
        let mut p: Vec<usize> = self.elements().map(|a| self.element_order(a)).collect();
        p.sort_unstable();
        p
    }

    /// Subgroup generated by `gens`.
    pub fn generate(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        self.elements().filter(|&a| seen[a]).collect()
    }

    /// A small generating set, chosen greedily by descending element order.
    pub fn generators(&self) -> Vec<usize> {
        let mut by_order: Vec<usize> = self.elements().collect();
        by_order.sort_by_key(|&a| (core::cmp::Reverse(self.element_order(a)), a));
        let mut gens = Vec::new();
        let mut span = self.generate(&[]);
        for a in by_order {
            if span.len() == self.order {
                break;
            }
            if !span.contains(&a) {
                gens.push(a);
                span = self.generate(&gens);
            }
        }
        gens
    }

    /// Close a set of generators under a multiplication law. Element `0` is
    /// the identity; labels are shortest words in `names` (BFS order).
    ///
    /// Returns the group together with the concrete elements in index order.
    pub fn generated_by<T: Clone>(
        identity: T,
        gens: &[T],
        names: &[&str],
        mul: impl Fn(&T, &T) -> T,
        same: impl Fn(&T, &T) -> bool,
        max_order: usize,
    ) -> Result<(Self, Vec<T>), GroupError> {
        let mut elems = vec![identity];
        let mut words: Vec<Vec<usize>> = vec![Vec::new()];
        let mut queue = VecDeque::from([0usize]);
        let find = |elems: &Vec<T>, x: &T| elems.iter().position(|e| same(e, x));
        while let Some(i) = queue.pop_front() {
            for (k, g) in gens.iter().enumerate() {
                let y = mul(&elems[i], g);
                if find(&elems, &y).is_none() {
                    if elems.len() >= max_order {
                        return Err(GroupError::TooLarge(max_order));
                    }
                    let mut w = words[i].clone();
                    w.push(k);
                    elems.push(y);
                    words.push(w);
                    queue.push_back(elems.len() - 1);
                }
            }
        }
        let n = elems.len();
        let mut table = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                let p = mul(&elems[a], &elems[b]);
                table[a][b] = find(&elems, &p).ok_or_else(|| GroupError::NotAGroup("closure is not closed".into()))?;
            }
        }
        let labels = words.iter().map(|w| word_label(w, names)).collect();
        Ok((FiniteGroup::from_table(table, labels)?, elems))
    }

    /// Cyclic group `Z_n` with labels `e, a, a^2, …`.
    pub fn cyclic(n: usize, name: &str) -> Self {
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        let labels = (0..n)
            .map(|k| match k {
                0 => "e".to_string(),
                1 => name.to_string(),
                _ => format!("{name}^{k}"),
            })
            .collect();
        FiniteGroup::from_table(table, labels).expect("cyclic table is a group")
    }

    /// Klein four-group with labels `e, x, y, z` (π-rotations about the
    /// three axes; the product of any two non-identity elements is the third).
    pub fn klein() -> Self {
        // Index = 2-bit vector (x-bit, z-bit): e=00, x=01, z=10, y=11, relabelled below.
        let code = [0usize, 1, 3, 2]; // e, x, y, z
        let mut table = vec![vec![0; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                let p = code[a] ^ code[b];
                table[a][b] = code.iter().position(|&c| c == p).unwrap();
            }
        }
        let labels = ["e", "x", "y", "z"].iter().map(|s| s.to_string()).collect();
        FiniteGroup::from_table(table, labels).expect("Klein table is a group")
    }

    /// Direct product with lexicographic element order `(g, h) ↦ g·|H| + h`.
    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Self {
        let (m, n) = (g.order, h.order);
        let mut table = vec![vec![0; m * n]; m * n];
        for (a, row) in table.iter_mut().enumerate() {
            for (b, cell) in row.iter_mut().enumerate() {
                *cell = g.mul(a / n, b / n) * n + h.mul(a % n, b % n);
            }
        }
        let labels = (0..m * n).map(|a| format!("({},{})", g.label(a / n), h.label(a % n))).collect();
        FiniteGroup::from_table(table, labels).expect("direct product is a group")
    }

    /// Semidirect product `N ⋊ H` with `(n₁,h₁)(n₂,h₂) = (n₁·φ_{h₁}(n₂), h₁h₂)`.
    /// `action(h, n)` must be an action of `H` by automorphisms of `N`.
    pub fn semidirect_product(
        normal: &FiniteGroup,
        acting: &FiniteGroup,
        action: impl Fn(usize, usize) -> usize,
    ) -> Result<Self, GroupError> {
        let (m, n) = (normal.order, acting.order);
        let mut table = vec![vec![0; m * n]; m * n];
        for (a, row) in table.iter_mut().enumerate() {
            for (b, cell) in row.iter_mut().enumerate() {
                let (n1, h1) = (a / n, a % n);
                let (n2, h2) = (b / n, b % n);
                *cell = normal.mul(n1, action(h1, n2)) * n + acting.mul(h1, h2);
            }
        }
        let labels = (0..m * n).map(|a| format!("({},{})", normal.label(a / n), acting.label(a % n))).collect();
        FiniteGroup::from_table(table, labels)
    }

    /// Relabel elements, keeping the table.
    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.order);
        self.labels = labels;
        self
    }
}

fn word_label(word: &[usize], names: &[&str]) -> String {
    if word.is_empty() {
        return "e".to_string();
    }
    // Run-length encode repeated letters: [a,a,b] -> "a^2b".
    let mut out = String::new();
    let mut i = 0;
    while i < word.len() {
        let mut j = i;
        while j < word.len() && word[j] == word[i] {
            j += 1;
        }
        out.push_str(names[word[i]]);
        if j - i > 1 {
            out.push_str(&format!("^{}", j - i));
        }
        i = j;
    }
    out
}

/// Names accepted by [`build_named_group`].
pub const GROUP_NAMES: [&str; 5] = ["Z2", "Z4", "Z2xZ2", "Z2xZ2_x_Z2xZ2", "D2_semidirect_Z4"];

/// Construct one of the built-in groups.
pub fn build_named_group(name: &str) -> Result<FiniteGroup, GroupError> {
    match name {
        "Z2" => Ok(FiniteGroup::cyclic(2, "a")),
        "Z4" => Ok(FiniteGroup::cyclic(4, "a")),
        "Z2xZ2" => Ok(FiniteGroup::klein()),
        "Z2xZ2_x_Z2xZ2" => Ok(FiniteGroup::direct_product(&FiniteGroup::klein(), &FiniteGroup::klein())),
        "D2_semidirect_Z4" => d2_semidirect_z4(),
        other => Err(GroupError::UnknownGroupName(other.to_string())),
    }
}

/// `D₂ ⋊ Z₄` closed from the generators `α = (e, h)` and `β = (x, 0)` of the
/// concrete semidirect product in which the generator `h` of `Z₄` swaps the
/// `x` and `z` elements of the Klein group. Labels are words in `α`, `β`.
///
/// The generators satisfy `α⁴ = β² = 1` and `(αβ)² = (βα)²`; the latter is the
/// relation that makes the word closure finite.
pub fn d2_semidirect_z4() -> Result<FiniteGroup, GroupError> {
    let d2 = FiniteGroup::klein();
    let z4 = FiniteGroup::cyclic(4, "h");
    let (x, z) = (d2.element("x").unwrap(), d2.element("z").unwrap());
    let swap = |n: usize| {
        if n == x {
            z
        } else if n == z {
            x
        } else {
            n
        }
    };
    let model = FiniteGroup::semidirect_product(&d2, &z4, |h, n| if h % 2 == 1 { swap(n) } else { n })?;
    let alpha = d2.identity() * 4 + 1;
    let beta = x * 4;
    let (group, _) = FiniteGroup::generated_by(model.identity(), &[alpha, beta], &["α", "β"], |a, b| model.mul(*a, *b), |a, b| a == b, 64)?;
    Ok(group)
}

/// A subgroup, stored as the sorted list of member indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup<'g> {
    pub parent: &'g FiniteGroup,
    pub members: Vec<usize>,
}

impl<'g> Subgroup<'g> {
    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, a: usize) -> bool {
        self.members.binary_search(&a).is_ok()
    }

    /// Closure under products and inverses, and presence of the identity.
    pub fn is_closed(&self) -> bool {
        let g = self.parent;
        self.contains(g.identity())
            && self.members.iter().all(|&a| self.contains(g.inv(a)) && self.members.iter().all(|&b| self.contains(g.mul(a, b))))
    }

    /// The subgroup as a group in its own right (indices relative to `members`).
    pub fn as_group(&self) -> FiniteGroup {
        let g = self.parent;
        let pos = |a: usize| self.members.binary_search(&a).unwrap();
        let table = self.members.iter().map(|&a| self.members.iter().map(|&b| pos(g.mul(a, b))).collect()).collect();
        let labels = self.members.iter().map(|&a| g.label(a).to_string()).collect();
        FiniteGroup::from_table(table, labels).expect("closed subgroup")
    }
}

/// `{a : ab = ba ∀b}`.
pub fn center(g: &FiniteGroup) -> Subgroup<'_> {
    let members = g.elements().filter(|&a| g.elements().all(|b| g.mul(a, b) == g.mul(b, a))).collect();
    Subgroup { parent: g, members }
}

/// The subgroup generated by all commutators `aba⁻¹b⁻¹`.
pub fn derived_subgroup(g: &FiniteGroup) -> Subgroup<'_> {
    let comms: BTreeSet<usize> = g.elements().flat_map(|a| g.elements().map(move |b| (a, b))).map(|(a, b)| g.commutator(a, b)).collect();
    let gens: Vec<usize> = comms.into_iter().collect();
    Subgroup { parent: g, members: g.generate(&gens) }
}

/// `G/[G,G]` with the quotient map `element ↦ coset index`.
#[derive(Debug, Clone)]
pub struct Abelianization {
    pub quotient: FiniteGroup,
    pub map: Vec<usize>,
}

pub fn abelianization(g: &FiniteGroup) -> Abelianization {
    let derived = derived_subgroup(g);
    let mut map = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for a in g.elements() {
        if map[a] != usize::MAX {
            continue;
        }
        let idx = reps.len();
        reps.push(a);
        for &d in &derived.members {
            map[g.mul(a, d)] = idx;
        }
    }
    let k = reps.len();
    let table = (0..k).map(|i| (0..k).map(|j| map[g.mul(reps[i], reps[j])]).collect()).collect();
    let labels = reps.iter().map(|&r| format!("[{}]", g.label(r))).collect();
    let quotient = FiniteGroup::from_table(table, labels).expect("quotient by a normal subgroup is a group");
    Abelianization { quotient, map }
}

/// A one-dimensional unitary representation `χ: G → U(1)`.
///
/// Values are roots of unity `exp(2πi·k/modulus)`; the integer exponents are
/// kept so group-law checks are exact.
#[derive(Debug, Clone, PartialEq)]
pub struct Character {
    pub modulus: usize,
    pub exponents: Vec<usize>,
}

impl Character {
    pub fn trivial(order: usize) -> Self {
        Character { modulus: 1, exponents: vec![0; order] }
    }

    pub fn value(&self, a: usize) -> C64 {
        cis(2.0 * PI * self.exponents[a] as f64 / self.modulus as f64)
    }

    pub fn values(&self) -> Vec<C64> {
        (0..self.exponents.len()).map(|a| self.value(a)).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|&k| k == 0)
    }

    /// Exact homomorphism check on exponents.
    pub fn is_homomorphism(&self, g: &FiniteGroup) -> bool {
        g.elements().all(|a| g.elements().all(|b| self.exponents[g.mul(a, b)] == (self.exponents[a] + self.exponents[b]) % self.modulus))
    }

    /// Pointwise product `(χ·φ)(g) = χ(g)φ(g)`.
    pub fn product(&self, other: &Character) -> Character {
        let m = lcm(self.modulus, other.modulus);
        let exps = self
            .exponents
            .iter()
            .zip(&other.exponents)
            .map(|(&a, &b)| (a * (m / self.modulus) + b * (m / other.modulus)) % m)
            .collect();
        Character { modulus: m, exponents: exps }.reduced()
    }

    /// Same character with the smallest modulus.
    pub fn reduced(mut self) -> Character {
        let mut d = self.modulus;
        for &k in &self.exponents {
            d = gcd(d, k);
        }
        if d > 1 {
            self.modulus /= d;
            for k in &mut self.exponents {
                *k /= d;
            }
        }
        self
    }

    /// Elements on which the character is 1.
    pub fn kernel(&self) -> Vec<usize> {
        (0..self.exponents.len()).filter(|&a| self.exponents[a] == 0).collect()
    }

    /// Compact label: the values as `k/m` exponents, e.g. `χ(0,1,1,0)/2`.
    pub fn label(&self) -> String {
        let inner: Vec<String> = self.exponents.iter().map(|k| k.to_string()).collect();
        format!("χ({})/{}", inner.join(","), self.modulus)
    }
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// All one-dimensional characters, obtained by enumerating the characters of
/// the abelianization and pulling them back through the quotient map. The
/// trivial character is first.
pub fn characters(g: &FiniteGroup) -> Vec<Character> {
    let ab = abelianization(g);
    let q = &ab.quotient;
    let gens = q.generators();
    let orders: Vec<usize> = gens.iter().map(|&a| q.element_order(a)).collect();
    let modulus = orders.iter().fold(1, |m, &o| lcm(m, o));

    // BFS spanning tree over the generators: each element = parent · gen.
    let mut tree: Vec<Option<(usize, usize)>> = vec![None; q.order()];
    let mut seen = vec![false; q.order()];
    seen[q.identity()] = true;
    let mut order_visited = vec![q.identity()];
    let mut queue = VecDeque::from([q.identity()]);
    while let Some(x) = queue.pop_front() {
        for (k, &gen) in gens.iter().enumerate() {
            let y = q.mul(x, gen);
            if !seen[y] {
                seen[y] = true;
                tree[y] = Some((x, k));
                order_visited.push(y);
                queue.push_back(y);
            }
        }
    }

    let mut out = Vec::new();
    let total: usize = orders.iter().product();
    for mut code in 0..total {
        let mut gen_exp = Vec::with_capacity(gens.len());
        for &o in &orders {
            gen_exp.push((code % o) * (modulus / o));
            code /= o;
        }
        let mut exps = vec![0usize; q.order()];
        for &y in order_visited.iter().skip(1) {
            let (p, k) = tree[y].unwrap();
            exps[y] = (exps[p] + gen_exp[k]) % modulus;
        }
        let chi = Character { modulus, exponents: exps };
        if chi.is_homomorphism(q) {
            let lifted = Character { modulus, exponents: ab.map.iter().map(|&c| chi.exponents[c]).collect() };
            out.push(lifted.reduced());
        }
    }
    out.sort_by_key(|c| !c.is_trivial());
    out
}

/// Whether two groups of order ≤ 64 are isomorphic: invariant screening
/// followed by backtracking over images of a generating set.
pub fn is_isomorphic(g: &FiniteGroup, h: &FiniteGroup) -> bool {
    if g.order() != h.order() || g.order_profile() != h.order_profile() {
        return false;
    }
    if g.is_abelian() != h.is_abelian() {
        return false;
    }
    if g.is_abelian() {
        // Finite abelian groups are determined by their element-order statistics.
        return true;
    }
    if center(g).order() != center(h).order() || derived_subgroup(g).order() != derived_subgroup(h).order() {
        return false;
    }
    find_isomorphism(g, h).is_some()
}

/// An explicit isomorphism `g → h` as an image table, if one exists.
pub fn find_isomorphism(g: &FiniteGroup, h: &FiniteGroup) -> Option<Vec<usize>> {
    if g.order() != h.order() {
        return None;
    }
    let gens = g.generators();
    let mut images = Vec::with_capacity(gens.len());
    backtrack(g, h, &gens, &mut images)
}

fn backtrack(g: &FiniteGroup, h: &FiniteGroup, gens: &[usize], images: &mut Vec<usize>) -> Option<Vec<usize>> {
    let k = images.len();
    if k > 0 {
        let map = extend_map(g, h, &gens[..k], images)?;
        if k == gens.len() {
            return Some(map.into_iter().map(|m| m.unwrap()).collect());
        }
    }
    let target_order = g.element_order(gens[k]);
    for cand in h.elements() {
        if h.element_order(cand) != target_order {
            continue;
        }
        images.push(cand);
        if let Some(found) = backtrack(g, h, gens, images) {
            return Some(found);
        }
        images.pop();
    }
    None
}

/// Extend generator images to the generated subgroup; `None` if the result is
/// not a well-defined injective homomorphism there.
fn extend_map(g: &FiniteGroup, h: &FiniteGroup, gens: &[usize], images: &[usize]) -> Option<Vec<Option<usize>>> {
    let mut map: Vec<Option<usize>> = vec![None; g.order()];
    map[g.identity()] = Some(h.identity());
    let mut queue = VecDeque::from([g.identity()]);
    while let Some(x) = queue.pop_front() {
        let hx = map[x].unwrap();
        for (&gen, &img) in gens.iter().zip(images) {
            let y = g.mul(x, gen);
            let hy = h.mul(hx, img);
            match map[y] {
                None => {
                    map[y] = Some(hy);
                    queue.push_back(y);
                }
                Some(existing) if existing != hy => return None,
                _ => {}
            }
        }
    }
    let defined: Vec<usize> = g.elements().filter(|&a| map[a].is_some()).collect();
    let mut used = BTreeMap::new();
    for &a in &defined {
        if used.insert(map[a].unwrap(), a).is_some() {
            return None;
        }
    }
    for &a in &defined {
        for &b in &defined {
            if map[g.mul(a, b)] != Some(h.mul(map[a].unwrap(), map[b].unwrap())) {
                return None;
            }
        }
    }
    Some(map)
}

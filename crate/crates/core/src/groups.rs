//! Finite groups backed by multiplication tables.
//!
//! Products are read left to right: `mul(g, h)` applies `g` first, then `h`.
//! For permutation groups this means `(g·h)(x) = h(g(x))`.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::snf::normalize_cyclic_orders;

/// Largest explicit multiplication table accepted (and exhaustively checked).
pub const MAX_TABLE_ORDER: usize = 512;
/// Largest permutation group built from a specification (|S₆| = 720).
pub const MAX_PERM_ORDER: usize = 720;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("multiplication table is not associative: ({0}·{1})·{2} ≠ {0}·({1}·{2})")]
    NonAssociative(usize, usize, usize),
    #[error("multiplication table has no two-sided identity")]
    NoIdentity,
    #[error("element {0} has no two-sided inverse")]
    NoInverse(usize),
    #[error("element does not belong to this group")]
    ForeignElement,
    #[error("group of order {0} exceeds the supported size")]
    TooLarge(usize),
    #[error("invalid group specification: {0}")]
    InvalidSpec(String),
    #[error("cannot parse group element {0:?}")]
    UnknownElement(String),
}

/// Opaque identity of a group: a hash of its multiplication table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupId(u64);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    group: GroupId,
    index: u32,
}

impl GroupElement {
    pub fn index(&self) -> usize {
        self.index as usize
    }

    pub fn group(&self) -> GroupId {
        self.group
    }
}

/// Group specification, mirroring the JSON `{"kind": ...}` objects.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GroupSpec {
    Symmetric { degree: usize },
    Alternating { degree: usize },
    Cyclic { n: usize },
    Dihedral { n: usize },
    Quaternion,
    Product { factors: Vec<GroupSpec> },
    Table { order: usize, mul: Vec<Vec<usize>> },
}

impl GroupSpec {
    /// Parses short names such as `S3`, `C4`, `D4`, `Q8`, `A4`, `C2xC2`, `1`.
    pub fn parse_short(name: &str) -> Result<GroupSpec, GroupError> {
        let s = name.trim();
        if s.eq_ignore_ascii_case("trivial") || s == "1" {
            return Ok(GroupSpec::Cyclic { n: 1 });
        }
        let parts: Vec<&str> = s.split(['x', 'X', '×']).collect();
        if parts.len() > 1 {
            let factors = parts.iter().map(|p| GroupSpec::parse_short(p)).collect::<Result<_, _>>()?;
            return Ok(GroupSpec::Product { factors });
        }
        let bad = || GroupError::InvalidSpec(format!("unknown group name {name:?}"));
        if s.eq_ignore_ascii_case("Q8") {
            return Ok(GroupSpec::Quaternion);
        }
        let mut chars = s.chars();
        let head = chars.next().ok_or_else(bad)?;
        let rest: String = chars.collect();
        let rest = rest.trim_start_matches(['_', '/']).trim_start_matches(['Z', 'z']);
        let k: usize = rest.parse().map_err(|_| bad())?;
        match head.to_ascii_uppercase() {
            'S' => Ok(GroupSpec::Symmetric { degree: k }),
            'A' => Ok(GroupSpec::Alternating { degree: k }),
            'C' | 'Z' => Ok(GroupSpec::Cyclic { n: k }),
            'D' => Ok(GroupSpec::Dihedral { n: k }),
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    identity: u32,
    inverses: Vec<u32>,
    /// Point images (0-based) when the group is given as permutations.
    perms: Option<Vec<Vec<u8>>>,
    labels: Option<Vec<String>>,
    id: GroupId,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id && self.table == other.table
    }
}

impl Eq for FiniteGroup {}

fn compose(g: &[u8], h: &[u8]) -> Vec<u8> {
    g.iter().map(|&x| h[x as usize]).collect()
}

fn perm_closure(degree: usize, gens: &[Vec<u8>]) -> Result<Vec<Vec<u8>>, GroupError> {
    let id: Vec<u8> = (0..degree as u8).collect();
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    seen.insert(id.clone());
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q = compose(&p, g);
            if seen.insert(q.clone()) {
                if seen.len() > MAX_PERM_ORDER {
                    return Err(GroupError::TooLarge(seen.len()));
                }
                queue.push_back(q);
            }
        }
    }
    let mut all: Vec<Vec<u8>> = seen.into_iter().collect();
    all.sort();
    Ok(all)
}

fn cycle_perm(degree: usize, cycle: &[usize]) -> Vec<u8> {
    let mut p: Vec<u8> = (0..degree as u8).collect();
    for w in 0..cycle.len() {
        p[cycle[w]] = cycle[(w + 1) % cycle.len()] as u8;
    }
    p
}

fn perm_sign(p: &[u8]) -> bool {
    let mut seen = vec![false; p.len()];
    let mut transpositions = 0;
    for s in 0..p.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = p[x] as usize;
            len += 1;
        }
        transpositions += len - 1;
    }
    transpositions % 2 == 0
}

fn table_id(order: usize, table: &[u32]) -> GroupId {
    let mut h = DefaultHasher::new();
    order.hash(&mut h);
    table.hash(&mut h);
    GroupId(h.finish())
}

/// Formats a permutation (0-based images) in 1-based cycle notation, `()` for the identity.
pub fn format_cycles(p: &[u8]) -> String {
    let mut out = String::new();
    let mut seen = vec![false; p.len()];
    for s in 0..p.len() {
        if seen[s] || p[s] as usize == s {
            continue;
        }
        out.push('(');
        let mut x = s;
        let mut first = true;
        while !seen[x] {
            seen[x] = true;
            if !first {
                out.push(' ');
            }
            out.push_str(&(x + 1).to_string());
            first = false;
            x = p[x] as usize;
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

/// Parses 1-based cycle notation; cycles are composed left to right.
pub fn parse_cycles(s: &str, degree: usize) -> Option<Vec<u8>> {
    let t = s.trim();
    let mut p: Vec<u8> = (0..degree as u8).collect();
    if t == "e" || t == "()" || t.is_empty() {
        return Some(p);
    }
    let mut rest = t;
    while !rest.is_empty() {
        let rest_trim = rest.trim_start();
        let body_start = rest_trim.strip_prefix('(')?;
        let close = body_start.find(')')?;
        let body = &body_start[..close];
        let pts: Vec<usize> = body
            .split([' ', ','])
            .filter(|x| !x.is_empty())
            .map(|x| x.parse::<usize>().ok().filter(|v| *v >= 1 && *v <= degree).map(|v| v - 1))
            .collect::<Option<_>>()?;
        let distinct: HashSet<_> = pts.iter().collect();
        if distinct.len() != pts.len() {
            return None;
        }
        p = compose(&p, &cycle_perm(degree, &pts));
        rest = body_start[close + 1..].trim_start();
    }
    Some(p)
}

impl FiniteGroup {
    fn from_perms(perms: Vec<Vec<u8>>) -> Self {
        let order = perms.len();
        let index: HashMap<&Vec<u8>, u32> = perms.iter().enumerate().map(|(i, p)| (p, i as u32)).collect();
        let mut table = vec![0u32; order * order];
        for (i, g) in perms.iter().enumerate() {
            for (j, h) in perms.iter().enumerate() {
                table[i * order + j] = index[&compose(g, h)];
            }
        }
        let mut g = Self::from_checked_table(order, table);
        g.perms = Some(perms);
        g
    }

    fn from_checked_table(order: usize, table: Vec<u32>) -> Self {
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| table[e * order + x] as usize == x && table[x * order + e] as usize == x))
            .expect("checked table has an identity") as u32;
        let inverses = (0..order)
            .map(|x| (0..order).find(|&y| table[x * order + y] == identity).expect("checked table has inverses") as u32)
            .collect();
        let id = table_id(order, &table);
        FiniteGroup { order, table, identity, inverses, perms: None, labels: None, id }
    }

    /// Validates an explicit multiplication table.
    pub fn from_table(mul: &[Vec<usize>]) -> Result<Self, GroupError> {
        let order = mul.len();
        if order == 0 {
            return Err(GroupError::InvalidSpec("empty table".into()));
        }
        if order > MAX_TABLE_ORDER {
            return Err(GroupError::TooLarge(order));
        }
        if mul.iter().any(|r| r.len() != order || r.iter().any(|&x| x >= order)) {
            return Err(GroupError::InvalidSpec("table must be square with entries below the order".into()));
        }
        let at = |a: usize, b: usize| mul[a][b];
        let identity =
            (0..order).find(|&e| (0..order).all(|x| at(e, x) == x && at(x, e) == x)).ok_or(GroupError::NoIdentity)?;
        for x in 0..order {
            if !(0..order).any(|y| at(x, y) == identity && at(y, x) == identity) {
                return Err(GroupError::NoInverse(x));
            }
        }
        for a in 0..order {
            for b in 0..order {
                let ab = at(a, b);
                for c in 0..order {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(GroupError::NonAssociative(a, b, c));
                    }
                }
            }
        }
        let table = mul.iter().flatten().map(|&x| x as u32).collect();
        Ok(Self::from_checked_table(order, table))
    }

    pub fn symmetric(degree: usize) -> Result<Self, GroupError> {
        if degree > 6 {
            return Err(GroupError::TooLarge((1..=degree).product()));
        }
        let d = degree.max(1);
        let mut gens = Vec::new();
        if degree >= 2 {
            gens.push(cycle_perm(d, &[0, 1]));
            gens.push(cycle_perm(d, &(0..d).collect::<Vec<_>>()));
        }
        Ok(Self::from_perms(perm_closure(d, &gens)?))
    }

    pub fn alternating(degree: usize) -> Result<Self, GroupError> {
        let s = Self::symmetric(degree)?;
        let perms: Vec<Vec<u8>> = s.perms.unwrap().into_iter().filter(|p| perm_sign(p)).collect();
        Ok(Self::from_perms(perms))
    }

    pub fn cyclic(n: usize) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::InvalidSpec("cyclic group needs n >= 1".into()));
        }
        if n > MAX_TABLE_ORDER {
            return Err(GroupError::TooLarge(n));
        }
        let table = (0..n * n).map(|k| ((k / n + k % n) % n) as u32).collect();
        Ok(Self::from_checked_table(n, table))
    }

    /// Dihedral group of order `2n`, acting on the vertices of an `n`-gon
    /// (on four points for `n = 2`).
    pub fn dihedral(n: usize) -> Result<Self, GroupError> {
        match n {
            0 => Err(GroupError::InvalidSpec("dihedral group needs n >= 1".into())),
            1 => Ok(Self::from_perms(perm_closure(2, &[cycle_perm(2, &[0, 1])])?)),
            2 => {
                let a = compose(&cycle_perm(4, &[0, 1]), &cycle_perm(4, &[2, 3]));
                let b = compose(&cycle_perm(4, &[0, 2]), &cycle_perm(4, &[1, 3]));
                Ok(Self::from_perms(perm_closure(4, &[a, b])?))
            }
            _ => {
                if n > 255 {
                    return Err(GroupError::TooLarge(2 * n));
                }
                let r = cycle_perm(n, &(0..n).collect::<Vec<_>>());
                let s: Vec<u8> = (0..n).map(|i| ((n - i) % n) as u8).collect();
                Ok(Self::from_perms(perm_closure(n, &[r, s])?))
            }
        }
    }

    /// Quaternion group of order 8, elements labelled `1,-1,i,-i,j,-j,k,-k`.
    pub fn quaternion() -> Self {
        // unit products: index 0..4 = 1,i,j,k; (sign, unit)
        let unit_mul = |a: usize, b: usize| -> (bool, usize) {
            const T: [[(bool, usize); 4]; 4] = [
                [(false, 0), (false, 1), (false, 2), (false, 3)],
                [(false, 1), (true, 0), (false, 3), (true, 2)],
                [(false, 2), (true, 3), (true, 0), (false, 1)],
                [(false, 3), (false, 2), (true, 1), (true, 0)],
            ];
            T[a][b]
        };
        let idx = |neg: bool, u: usize| 2 * u + usize::from(neg);
        let mut table = vec![0u32; 64];
        for x in 0..8 {
            for y in 0..8 {
                let (nx, ux) = (x % 2 == 1, x / 2);
                let (ny, uy) = (y % 2 == 1, y / 2);
                let (nu, u) = unit_mul(ux, uy);
                table[x * 8 + y] = idx(nx ^ ny ^ nu, u) as u32;
            }
        }
        let mut g = Self::from_checked_table(8, table);
        g.labels = Some(["1", "-1", "i", "-i", "j", "-j", "k", "-k"].iter().map(|s| s.to_string()).collect());
        g
    }

    pub fn direct_product(factors: &[FiniteGroup]) -> Result<Self, GroupError> {
        if factors.is_empty() {
            return Self::cyclic(1);
        }
        let order: usize = factors.iter().map(|f| f.order).product();
        if factors.iter().all(|f| f.perms.is_some()) {
            if order > MAX_PERM_ORDER {
                return Err(GroupError::TooLarge(order));
            }
            let degree: usize = factors.iter().map(|f| f.degree()).sum();
            if degree > 255 {
                return Err(GroupError::TooLarge(order));
            }
            let mut gens = Vec::new();
            let mut offset = 0;
            for f in factors {
                for p in f.perms.as_ref().unwrap() {
                    let mut q: Vec<u8> = (0..degree as u8).collect();
                    for (i, &x) in p.iter().enumerate() {
                        q[offset + i] = x + offset as u8;
                    }
                    gens.push(q);
                }
                offset += f.degree();
            }
            return Ok(Self::from_perms(perm_closure(degree, &gens)?));
        }
        if order > MAX_TABLE_ORDER {
            return Err(GroupError::TooLarge(order));
        }
        let split = |mut k: usize| -> Vec<usize> {
            let mut digits = vec![0; factors.len()];
            for (i, f) in factors.iter().enumerate().rev() {
                digits[i] = k % f.order;
                k /= f.order;
            }
            digits
        };
        let join = |digits: &[usize]| digits.iter().zip(factors).fold(0, |acc, (d, f)| acc * f.order + d);
        let mut table = vec![0u32; order * order];
        for a in 0..order {
            let da = split(a);
            for b in 0..order {
                let db = split(b);
                let prod: Vec<usize> = factors.iter().enumerate().map(|(i, f)| f.mul_idx(da[i], db[i])).collect();
                table[a * order + b] = join(&prod) as u32;
            }
        }
        Ok(Self::from_checked_table(order, table))
    }

    pub fn from_spec(spec: &GroupSpec) -> Result<Self, GroupError> {
        match spec {
            GroupSpec::Symmetric { degree } => Self::symmetric(*degree),
            GroupSpec::Alternating { degree } => Self::alternating(*degree),
            GroupSpec::Cyclic { n } => Self::cyclic(*n),
            GroupSpec::Dihedral { n } => Self::dihedral(*n),
            GroupSpec::Quaternion => Ok(Self::quaternion()),
            GroupSpec::Product { factors } => {
                let fs = factors.iter().map(Self::from_spec).collect::<Result<Vec<_>, _>>()?;
                Self::direct_product(&fs)
            }
            GroupSpec::Table { order, mul } => {
                if mul.len() != *order {
                    return Err(GroupError::InvalidSpec(format!("table has {} rows, order is {order}", mul.len())));
                }
                Self::from_table(mul)
            }
        }
    }

    pub fn trivial() -> Self {
        Self::cyclic(1).expect("trivial group")
    }

    pub fn id(&self) -> GroupId {
        self.id
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_permutation_group(&self) -> bool {
        self.perms.is_some()
    }

    fn degree(&self) -> usize {
        self.perms.as_ref().map_or(0, |p| p[0].len())
    }

    pub(crate) fn mul_idx(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    pub fn element(&self, index: usize) -> GroupElement {
        assert!(index < self.order, "element index {index} out of range");
        GroupElement { group: self.id, index: index as u32 }
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order).map(|i| self.element(i))
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement { group: self.id, index: self.identity }
    }

    pub fn owns(&self, g: GroupElement) -> bool {
        g.group == self.id && g.index() < self.order
    }

    pub fn mul(&self, a: GroupElement, b: GroupElement) -> GroupElement {
        debug_assert!(self.owns(a) && self.owns(b));
        self.element(self.mul_idx(a.index(), b.index()))
    }

    pub fn inv(&self, a: GroupElement) -> GroupElement {
        self.element(self.inverses[a.index()] as usize)
    }

    /// Ordered product, left to right; the identity for an empty sequence.
    pub fn product<I: IntoIterator<Item = GroupElement>>(&self, items: I) -> GroupElement {
        items.into_iter().fold(self.identity(), |acc, g| self.mul(acc, g))
    }

    pub fn pow(&self, a: GroupElement, k: usize) -> GroupElement {
        (0..k).fold(self.identity(), |acc, _| self.mul(acc, a))
    }

    /// `h · g · h⁻¹`.
    pub fn conjugate(&self, g: GroupElement, h: GroupElement) -> GroupElement {
        self.mul(self.mul(h, g), self.inv(h))
    }

    pub fn element_order(&self, a: GroupElement) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity() {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn commutes(&self, a: GroupElement, b: GroupElement) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    /// Cycle notation for permutation groups, the label or index otherwise.
    pub fn format_element(&self, g: GroupElement) -> String {
        match (&self.perms, &self.labels) {
            (Some(p), _) => format_cycles(&p[g.index()]),
            (None, Some(l)) => l[g.index()].clone(),
            (None, None) => g.index().to_string(),
        }
    }

    pub fn parse_element(&self, s: &str) -> Result<GroupElement, GroupError> {
        let unknown = || GroupError::UnknownElement(s.to_string());
        if let Some(perms) = &self.perms {
            let p = parse_cycles(s, self.degree()).ok_or_else(unknown)?;
            let i = perms.binary_search(&p).map_err(|_| unknown())?;
            return Ok(self.element(i));
        }
        if let Some(labels) = &self.labels {
            if let Some(i) = labels.iter().position(|l| l == s.trim()) {
                return Ok(self.element(i));
            }
        }
        let i: usize = s.trim().parse().map_err(|_| unknown())?;
        if i >= self.order {
            return Err(unknown());
        }
        Ok(self.element(i))
    }

    pub fn generated_subgroup(&self, gens: &[GroupElement]) -> Result<Subgroup, GroupError> {
        if gens.iter().any(|g| !self.owns(*g)) {
            return Err(GroupError::ForeignElement);
        }
        let mut seen = vec![false; self.order];
        seen[self.identity as usize] = true;
        let mut queue = VecDeque::from([self.identity as usize]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = self.mul_idx(x, g.index());
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        // finite group: closure under multiplication already contains inverses
        let members = (0..self.order).filter(|&i| seen[i]).map(|i| i as u32).collect();
        Ok(Subgroup { group: self.id, members })
    }

    /// Subgroup generated by the union of several subgroups and elements.
    pub fn join<'a, I: IntoIterator<Item = &'a Subgroup>>(&self, subgroups: I) -> Result<Subgroup, GroupError> {
        let mut gens = Vec::new();
        for s in subgroups {
            if s.group != self.id {
                return Err(GroupError::ForeignElement);
            }
            gens.extend(s.elements(self));
        }
        self.generated_subgroup(&gens)
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup { group: self.id, members: (0..self.order as u32).collect() }
    }

    pub fn is_abelian(&self, s: &Subgroup) -> bool {
        let els: Vec<GroupElement> = s.elements(self).collect();
        els.iter().enumerate().all(|(i, &a)| els[i + 1..].iter().all(|&b| self.commutes(a, b)))
    }

    /// A set is a subgroup iff it is nonempty and closed under multiplication (finite case).
    pub fn is_subgroup(&self, elems: &[GroupElement]) -> bool {
        if elems.is_empty() || elems.iter().any(|g| !self.owns(*g)) {
            return false;
        }
        let set: HashSet<usize> = elems.iter().map(|g| g.index()).collect();
        set.iter().all(|&a| set.iter().all(|&b| set.contains(&self.mul_idx(a, b))))
    }

    pub fn subgroup_from_elements(&self, elems: &[GroupElement]) -> Option<Subgroup> {
        if !self.is_subgroup(elems) {
            return None;
        }
        let members: BTreeSet<u32> = elems.iter().map(|g| g.index).collect();
        Some(Subgroup { group: self.id, members: members.into_iter().collect() })
    }

    pub fn conjugacy_classes(&self) -> Vec<Vec<GroupElement>> {
        let mut assigned = vec![false; self.order];
        let mut classes = Vec::new();
        for g in 0..self.order {
            if assigned[g] {
                continue;
            }
            let mut class = BTreeSet::new();
            for h in 0..self.order {
                let c = self.conjugate(self.element(g), self.element(h)).index();
                class.insert(c);
            }
            for &c in &class {
                assigned[c] = true;
            }
            classes.push(class.into_iter().map(|i| self.element(i)).collect());
        }
        classes
    }

    pub fn commutator_subgroup(&self) -> Subgroup {
        let mut gens = Vec::new();
        for a in self.elements() {
            for b in self.elements() {
                let c = self.product([a, b, self.inv(a), self.inv(b)]);
                gens.push(c);
            }
        }
        self.generated_subgroup(&gens).expect("own elements")
    }

    /// Abstract isomorphism type of an abelian subgroup.
    pub fn abelian_invariants(&self, s: &Subgroup) -> Option<FiniteAbelianGroup> {
        if !self.is_abelian(s) {
            return None;
        }
        let n = s.order() as u64;
        let mut primes = Vec::new();
        let mut m = n;
        let mut p = 2;
        while m > 1 {
            if m.is_multiple_of(p) {
                primes.push(p);
                while m.is_multiple_of(p) {
                    m /= p;
                }
            }
            p += 1;
        }
        let orders: Vec<u64> = s.elements(self).map(|g| self.element_order(g) as u64).collect();
        // per prime, exponents of the p-primary cyclic factors (descending)
        let mut per_prime: Vec<(u64, Vec<u32>)> = Vec::new();
        for &p in &primes {
            // #{x : x^(p^j) = e} = p^(Σ min(j, aᵢ)) over the p-primary exponents aᵢ
            let mut s_prev = 0u32;
            let mut ge = Vec::new(); // ge[j-1] = #factors with exponent >= j
            let mut j = 1u32;
            loop {
                let pj = p.pow(j);
                let c = orders.iter().filter(|&&o| pj % o == 0).count() as u64;
                let sj = c.ilog(p);
                let diff = sj - s_prev;
                if diff == 0 {
                    break;
                }
                ge.push(diff);
                s_prev = sj;
                j += 1;
            }
            let k = ge.first().copied().unwrap_or(0) as usize;
            let exps: Vec<u32> = (0..k).map(|t| ge.iter().filter(|&&g| g as usize > t).count() as u32).collect();
            per_prime.push((p, exps));
        }
        let width = per_prime.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
        let mut factors: Vec<u64> =
            (0..width).map(|t| per_prime.iter().map(|(p, e)| e.get(t).map_or(1, |x| p.pow(*x))).product()).collect();
        factors.reverse();
        Some(FiniteAbelianGroup { invariant_factors: factors })
    }

    /// Homomorphisms from `A = ⊕ Z/dᵢ` to this group up to simultaneous conjugation.
    pub fn hom_classes(&self, a: &FiniteAbelianGroup) -> HomClasses {
        let d = &a.invariant_factors;
        let candidates: Vec<Vec<GroupElement>> = d
            .iter()
            .map(|&di| self.elements().filter(|&g| (di as usize).is_multiple_of(self.element_order(g))).collect())
            .collect();
        let mut reps = BTreeSet::new();
        let mut tuple = Vec::with_capacity(d.len());
        self.extend_commuting(&candidates, &mut tuple, &mut |t| {
            reps.insert(self.canonical_tuple(t));
        });
        let representatives: Vec<Vec<GroupElement>> = reps.into_iter().collect();
        HomClasses { count: representatives.len(), representatives }
    }

    fn extend_commuting(
        &self,
        candidates: &[Vec<GroupElement>],
        tuple: &mut Vec<GroupElement>,
        visit: &mut dyn FnMut(&[GroupElement]),
    ) {
        let k = tuple.len();
        if k == candidates.len() {
            visit(tuple);
            return;
        }
        for &g in &candidates[k] {
            if tuple.iter().all(|&h| self.commutes(g, h)) {
                tuple.push(g);
                self.extend_commuting(candidates, tuple, visit);
                tuple.pop();
            }
        }
    }

    /// Lexicographically smallest simultaneous conjugate of a tuple.
    pub fn canonical_tuple(&self, t: &[GroupElement]) -> Vec<GroupElement> {
        self.elements().map(|h| t.iter().map(|&g| self.conjugate(g, h)).collect::<Vec<_>>()).min().unwrap_or_default()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomClasses {
    pub count: usize,
    pub representatives: Vec<Vec<GroupElement>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    group: GroupId,
    members: Vec<u32>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn group(&self) -> GroupId {
        self.group
    }

    pub fn contains(&self, g: GroupElement) -> bool {
        g.group == self.group && self.members.binary_search(&g.index).is_ok()
    }

    pub fn elements<'a>(&'a self, g: &'a FiniteGroup) -> impl Iterator<Item = GroupElement> + 'a {
        self.members.iter().map(move |&i| g.element(i as usize))
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.group == other.group && self.members.iter().all(|m| other.members.binary_search(m).is_ok())
    }
}

/// `Z/d₁ ⊕ … ⊕ Z/d_k` with `d₁ | d₂ | … | d_k`, each `dᵢ ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FiniteAbelianGroup {
    invariant_factors: Vec<u64>,
}

impl FiniteAbelianGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn cyclic(n: u64) -> Self {
        Self::from_cyclic_orders(&[n])
    }

    /// Validates a list of invariant factors.
    pub fn new(invariant_factors: Vec<u64>) -> Result<Self, GroupError> {
        if invariant_factors.iter().any(|&d| d < 2) {
            return Err(GroupError::InvalidSpec("invariant factors must be at least 2".into()));
        }
        if invariant_factors.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(GroupError::InvalidSpec("invariant factors must divide each other".into()));
        }
        Ok(FiniteAbelianGroup { invariant_factors })
    }

    /// Any product of cyclic groups, normalized.
    pub fn from_cyclic_orders(orders: &[u64]) -> Self {
        let o: Vec<i64> = orders.iter().map(|&x| x as i64).collect();
        let invariant_factors = normalize_cyclic_orders(&o).into_iter().map(|x| x as u64).collect();
        FiniteAbelianGroup { invariant_factors }
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    pub fn order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.invariant_factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.invariant_factors.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

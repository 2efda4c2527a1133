//! Finite groups given by explicit multiplication tables.
//!
//! Elements are plain indices `0..order`. Every downstream computation in the
//! crate is exhaustive, so groups are kept small (see [`MAX_ORDER`]).

mod abelian;
mod class;
mod subgroups;

pub use abelian::{build_generalized_dihedral, AbelianGroupType};
pub(crate) use abelian::is_prime;
pub use class::{is_admissible, is_nonsplitting, ConjClass};
pub use subgroups::{generated_subgroup, subgroups, SubgroupTable, MAX_SUBGROUP_ORDER};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Element index.
pub type Elem = usize;

/// Hard cap on group orders; [`ElemSet`] is a fixed 256-bit set.
pub const MAX_ORDER: usize = 256;

/// Bitset of group elements.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ElemSet([u64; 4]);

impl ElemSet {
    pub fn new() -> Self {
        ElemSet([0; 4])
    }

    pub fn singleton(x: Elem) -> Self {
        let mut s = ElemSet::new();
        s.insert(x);
        s
    }

    pub fn insert(&mut self, x: Elem) -> bool {
        let (w, b) = (x / 64, x % 64);
        let fresh = self.0[w] & (1 << b) == 0;
        self.0[w] |= 1 << b;
        fresh
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.0[x / 64] & (1 << (x % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn is_subset(&self, other: &ElemSet) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a & !b == 0)
    }

    pub fn union(&self, other: &ElemSet) -> ElemSet {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(other.0.iter()) {
            *a |= b;
        }
        out
    }

    pub fn intersection(&self, other: &ElemSet) -> ElemSet {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(other.0.iter()) {
            *a &= b;
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..MAX_ORDER).filter(move |&x| self.contains(x))
    }
}

impl FromIterator<Elem> for ElemSet {
    fn from_iter<I: IntoIterator<Item = Elem>>(iter: I) -> Self {
        let mut s = ElemSet::new();
        for x in iter {
            s.insert(x);
        }
        s
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A finite group stored as a full multiplication table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<Elem>,
    identity: Elem,
    inv: Vec<Elem>,
    elem_order: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl FiniteGroup {
    /// Validates a multiplication table and builds the group.
    ///
    /// Associativity is checked exhaustively up to order 64 and on a
    /// deterministic sample of triples above that.
    pub fn from_table(table: Vec<Vec<Elem>>, labels: Option<Vec<String>>) -> Result<Self> {
        let order = table.len();
        if order == 0 {
            return Err(Error::invalid("group must have at least one element"));
        }
        if order > MAX_ORDER {
            return Err(Error::Budget {
                what: "group order",
                needed: order as u128,
                limit: MAX_ORDER as u128,
            });
        }
        if let Some(l) = &labels {
            if l.len() != order {
                return Err(Error::invalid("label count does not match group order"));
            }
        }
        let mut mul = Vec::with_capacity(order * order);
        for row in &table {
            if row.len() != order {
                return Err(Error::invalid("multiplication table is not square"));
            }
            if row.iter().any(|&x| x >= order) {
                return Err(Error::invalid("multiplication table entry out of range"));
            }
            mul.extend_from_slice(row);
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| mul[e * order + x] == x && mul[x * order + e] == x))
            .ok_or_else(|| Error::invalid("no two-sided identity"))?;
        let mut inv = vec![usize::MAX; order];
        for x in 0..order {
            let y = (0..order)
                .find(|&y| mul[x * order + y] == identity)
                .ok_or_else(|| Error::invalid(format!("element {x} has no inverse")))?;
            if mul[y * order + x] != identity {
                return Err(Error::invalid(format!("element {x} has no two-sided inverse")));
            }
            inv[x] = y;
        }
        let m = |a: usize, b: usize| mul[a * order + b];
        let assoc = |a: usize, b: usize, c: usize| m(m(a, b), c) == m(a, m(b, c));
        if order <= 64 {
            for a in 0..order {
                for b in 0..order {
                    for c in 0..order {
                        if !assoc(a, b, c) {
                            return Err(Error::invalid(format!("not associative at ({a},{b},{c})")));
                        }
                    }
                }
            }
        } else {
            // splitmix-style deterministic sampling
            let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
            let mut next = || {
                state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
                let mut z = state;
                z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
                z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
                ((z ^ (z >> 31)) % order as u64) as usize
            };
            for _ in 0..20_000 {
                let (a, b, c) = (next(), next(), next());
                if !assoc(a, b, c) {
                    return Err(Error::invalid(format!("not associative at ({a},{b},{c})")));
                }
            }
        }
        let mut elem_order = vec![0; order];
        for (x, slot) in elem_order.iter_mut().enumerate() {
            let mut k = 1;
            let mut y = x;
            while y != identity {
                y = m(y, x);
                k += 1;
            }
            *slot = k;
        }
        Ok(FiniteGroup { order, mul, identity, inv, elem_order, labels })
    }

    /// Symmetric group on `{1..n}`; product `p*q` means "apply `q`, then `p`".
    pub fn symmetric(n: usize) -> Result<Self> {
        if n == 0 || n > 5 {
            return Err(Error::invalid("symmetric group degree must be in 1..=5"));
        }
        let perms = permutations(n);
        let index = |p: &Vec<usize>| perms.binary_search(p).unwrap();
        let table = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| index(&q.iter().map(|&i| p[i]).collect()))
                    .collect()
            })
            .collect();
        let labels = perms.iter().map(|p| cycle_notation(p)).collect();
        FiniteGroup::from_table(table, Some(labels))
    }

    /// `Z/m_1 x Z/m_2 x ...`, elements in mixed radix (first factor fastest).
    pub fn abelian(moduli: &[usize]) -> Result<Self> {
        if moduli.iter().any(|&m| m == 0) {
            return Err(Error::invalid("cyclic factor of order zero"));
        }
        let order: usize = moduli.iter().product();
        if order > MAX_ORDER {
            return Err(Error::Budget { what: "group order", needed: order as u128, limit: MAX_ORDER as u128 });
        }
        let digits = |mut x: usize| {
            moduli
                .iter()
                .map(|&m| {
                    let d = x % m;
                    x /= m;
                    d
                })
                .collect::<Vec<_>>()
        };
        let encode = |d: &[usize]| d.iter().zip(moduli).rev().fold(0, |acc, (&di, &m)| acc * m + di);
        let table = (0..order)
            .map(|a| {
                let da = digits(a);
                (0..order)
                    .map(|b| {
                        let db = digits(b);
                        let s: Vec<usize> =
                            da.iter().zip(&db).zip(moduli).map(|((x, y), m)| (x + y) % m).collect();
                        encode(&s)
                    })
                    .collect()
            })
            .collect();
        let labels = (0..order)
            .map(|x| format!("({})", digits(x).iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        FiniteGroup::from_table(table, Some(labels))
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        FiniteGroup::abelian(&[n])
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Elem {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inv[a]
    }

    /// `h^{-1} x h`.
    #[inline]
    pub fn conj_by(&self, x: Elem, h: Elem) -> Elem {
        self.mul(self.mul(self.inv[h], x), h)
    }

    pub fn pow(&self, x: Elem, mut e: u64) -> Elem {
        let mut acc = self.identity;
        let mut base = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn product<I: IntoIterator<Item = Elem>>(&self, xs: I) -> Elem {
        xs.into_iter().fold(self.identity, |acc, x| self.mul(acc, x))
    }

    pub fn elem_order(&self, x: Elem) -> usize {
        self.elem_order[x]
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order
    }

    pub fn all(&self) -> ElemSet {
        self.elements().collect()
    }

    pub fn label(&self, x: Elem) -> String {
        match &self.labels {
            Some(l) => l[x].clone(),
            None => x.to_string(),
        }
    }

    /// Closure of `gens` under multiplication (finite, so inverses come for free).
    pub fn closure(&self, gens: &ElemSet) -> ElemSet {
        let gens: Vec<Elem> = gens.iter().collect();
        let mut set = ElemSet::singleton(self.identity);
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in &gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        set
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    fn rec(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == cur.len() {
            out.push(cur.clone());
            return;
        }
        for i in k..cur.len() {
            cur.swap(k, i);
            rec(k + 1, cur, out);
            cur.swap(k, i);
        }
    }
    rec(0, &mut cur, &mut out);
    out.sort();
    out
}

fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut s = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        s.push('(');
        let mut i = start;
        let mut first = true;
        while !seen[i] {
            seen[i] = true;
            if !first {
                s.push(' ');
            }
            s.push_str(&(i + 1).to_string());
            first = false;
            i = p[i];
        }
        s.push(')');
    }
    if s.is_empty() {
        s.push_str("()");
    }
    s
}

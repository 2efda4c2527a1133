//! Small finite fields by lookup tables.
//!
//! Elements of a field built over a base field `K` by a monic irreducible of
//! degree `r` are vectors `(c_0, …, c_{r-1})` over `K`, indexed by
//! `Σ c_i |K|^i`. Base elements therefore keep their indices, and the prime
//! subfield is `{0, …, p-1}`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::groups::is_prime;

use super::poly::Poly;

pub type Fe = u32;

/// Largest field that gets full tables.
pub const MAX_FIELD_SIZE: usize = 2048;

pub struct Field {
    p: u64,
    q: usize,
    /// Moduli of the tower from the prime field up, each over the previous
    /// field and stored low degree first.
    tower: Vec<Vec<Fe>>,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    square: Vec<bool>,
    extensions: Mutex<HashMap<u32, Arc<Field>>>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field").field("p", &self.p).field("q", &self.q).field("tower", &self.tower).finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.tower == other.tower
    }
}

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        if p as usize > MAX_FIELD_SIZE {
            return Err(Error::Budget { what: "field size", needed: p as u128, limit: MAX_FIELD_SIZE as u128 });
        }
        let q = p as usize;
        let add = table(q, |a, b| (a + b) % q);
        let mul = table(q, |a, b| (a * b) % q);
        Ok(Field::from_tables(p, q, Vec::new(), add, mul))
    }

    /// `F_{p^k}` over the smallest lexicographic monic irreducible of degree `k`.
    pub fn new(p: u64, k: u32) -> Result<Field> {
        let base = Field::prime(p)?;
        if k == 0 {
            return Err(Error::invalid("extension degree must be positive"));
        }
        if k == 1 {
            return Ok(base);
        }
        base.extension(k)
    }

    /// `F_q` from `q = p^k`.
    pub fn of_order(q: u64) -> Result<Field> {
        let (p, k) = prime_power(q).ok_or_else(|| Error::invalid(format!("{q} is not a prime power")))?;
        Field::new(p, k)
    }

    /// Degree-`r` extension, modulus chosen as the smallest monic irreducible
    /// with `(c_{r-1}, …, c_0)` compared lexicographically.
    pub fn extension(&self, r: u32) -> Result<Field> {
        if r == 1 {
            return Ok(Field::from_tables(self.p, self.q, self.tower.clone(), self.add.clone(), self.mul.clone()));
        }
        let big = (self.q as u128).pow(r);
        if big > MAX_FIELD_SIZE as u128 {
            return Err(Error::Budget { what: "field size", needed: big, limit: MAX_FIELD_SIZE as u128 });
        }
        let modulus = smallest_irreducible(self, r as usize);
        let (bq, r, big) = (self.q, r as usize, big as usize);
        let digits = |mut x: usize| {
            let mut d = vec![0 as Fe; r];
            for slot in d.iter_mut() {
                *slot = (x % bq) as Fe;
                x /= bq;
            }
            d
        };
        let index = |d: &[Fe]| d.iter().rev().fold(0usize, |acc, &c| acc * bq + c as usize);
        let all: Vec<Vec<Fe>> = (0..big).map(digits).collect();
        let add = table(big, |a, b| {
            let s: Vec<Fe> = all[a].iter().zip(&all[b]).map(|(&x, &y)| self.add(x, y)).collect();
            index(&s)
        });
        let m = Poly::from_coeffs(modulus.clone());
        let mul = table(big, |a, b| {
            let prod = Poly::from_coeffs(all[a].clone()).mul(self, &Poly::from_coeffs(all[b].clone())).rem(self, &m);
            let mut c = prod.coeffs().to_vec();
            c.resize(r, 0);
            index(&c)
        });
        let mut tower = self.tower.clone();
        tower.push(modulus);
        Ok(Field::from_tables(self.p, big, tower, add, mul))
    }

    /// Cached [`Field::extension`].
    pub fn extension_cached(&self, r: u32) -> Result<Arc<Field>> {
        let mut cache = self.extensions.lock().expect("extension cache poisoned");
        if let Some(f) = cache.get(&r) {
            return Ok(f.clone());
        }
        let f = Arc::new(self.extension(r)?);
        cache.insert(r, f.clone());
        Ok(f)
    }

    fn from_tables(p: u64, q: usize, tower: Vec<Vec<Fe>>, add: Vec<u16>, mul: Vec<u16>) -> Field {
        let neg = (0..q).map(|a| (0..q).find(|&b| add[a * q + b] == 0).unwrap() as u16).collect();
        let inv = (0..q).map(|a| if a == 0 { 0 } else { (1..q).find(|&b| mul[a * q + b] == 1).unwrap() as u16 }).collect();
        let mut square = vec![false; q];
        for a in 0..q {
            square[mul[a * q + a] as usize] = true;
        }
        Field { p, q, tower, add, mul, neg, inv, square, extensions: Mutex::new(HashMap::new()) }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn order(&self) -> usize {
        self.q
    }

    /// `k` with `q = p^k`.
    pub fn degree(&self) -> u32 {
        let mut k = 0;
        let mut x = 1;
        while x < self.q {
            x *= self.p as usize;
            k += 1;
        }
        k
    }

    /// Moduli of the tower, low degree first.
    pub fn tower(&self) -> &[Vec<Fe>] {
        &self.tower
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        self.add[a as usize * self.q + b as usize] as Fe
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        self.mul[a as usize * self.q + b as usize] as Fe
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        self.neg[a as usize] as Fe
    }

    /// Panics on zero.
    #[inline]
    pub fn inv(&self, a: Fe) -> Fe {
        assert!(a != 0, "inverse of zero");
        self.inv[a as usize] as Fe
    }

    /// Zero counts as a square.
    #[inline]
    pub fn is_square(&self, a: Fe) -> bool {
        self.square[a as usize]
    }

    /// Quadratic character.
    pub fn chi(&self, a: Fe) -> i64 {
        if a == 0 {
            0
        } else if self.is_square(a) {
            1
        } else {
            -1
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Fe {
        n.rem_euclid(self.p as i64) as Fe
    }

    /// Smallest non-square by index.
    pub fn smallest_nonsquare(&self) -> Fe {
        (1..self.q as Fe).find(|&a| !self.is_square(a)).expect("odd field has a non-square")
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        0..self.q as Fe
    }
}

fn table(q: usize, f: impl Fn(usize, usize) -> usize) -> Vec<u16> {
    let mut t = vec![0u16; q * q];
    for a in 0..q {
        for b in 0..q {
            t[a * q + b] = f(a, b) as u16;
        }
    }
    t
}

pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut k = 0;
    let mut x = q;
    while x % p == 0 {
        x /= p;
        k += 1;
    }
    (x == 1).then_some((p, k))
}

/// Rabin's test: `f` of degree `r` is irreducible iff
/// `gcd(f, x^{q^i} − x) = 1` for `i ≤ r/2`.
pub fn is_irreducible(field: &Field, f: &Poly) -> bool {
    let r = match f.degree() {
        None | Some(0) => return false,
        Some(r) => r,
    };
    let x = Poly::x();
    let mut h = x.clone();
    for _ in 0..r / 2 {
        h = h.pow_mod(field, field.order() as u128, f);
        if f.gcd(field, &h.sub(field, &x)).degree() != Some(0) {
            return false;
        }
    }
    true
}

fn smallest_irreducible(field: &Field, r: usize) -> Vec<Fe> {
    let q = field.order();
    (0..q.pow(r as u32))
        .map(|mut code| {
            let mut c = vec![0 as Fe; r + 1];
            for i in (0..r).rev() {
                c[i] = (code % q) as Fe;
                code /= q;
            }
            c[r] = 1;
            c
        })
        .find(|c| is_irreducible(field, &Poly::from_coeffs(c.clone())))
        .expect("irreducible polynomials exist in every degree")
}

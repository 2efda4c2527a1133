use std::fmt;

use serde::{Deserialize, Serialize};

use super::{ConjClass, FiniteGroup};
use crate::error::{Error, Result};

/// Abelian `ℓ`-group `⊕ Z/ℓ^{e_i}` with `e_1 ≥ e_2 ≥ … > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AbelianGroupType {
    prime: u64,
    exponents: Vec<u32>,
    order: u64,
}

pub(crate) fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

impl AbelianGroupType {
    /// Exponents are sorted into non-increasing order; zeros are dropped.
    pub fn new(prime: u64, exponents: &[u32]) -> Result<Self> {
        if !is_prime(prime) {
            return Err(Error::invalid(format!("{prime} is not prime")));
        }
        let mut exps: Vec<u32> = exponents.iter().copied().filter(|&e| e > 0).collect();
        exps.sort_unstable_by(|a, b| b.cmp(a));
        let total: u32 = exps.iter().sum();
        let order = prime
            .checked_pow(total)
            .ok_or_else(|| Error::invalid("abelian group order overflows u64"))?;
        Ok(AbelianGroupType { prime, exponents: exps, order })
    }

    pub fn trivial(prime: u64) -> Result<Self> {
        AbelianGroupType::new(prime, &[])
    }

    /// Parses invariant factors such as `[3]`, `[9]`, `[3, 3]`; the prime is
    /// inferred and every factor must be a power of it.
    pub fn from_invariant_factors(factors: &[u64]) -> Result<Self> {
        let first = *factors.iter().find(|&&f| f > 1).ok_or_else(|| {
            Error::invalid("cannot infer the prime from trivial invariant factors")
        })?;
        let prime = (2..=first).find(|d| first % d == 0).unwrap();
        let mut exps = Vec::new();
        for &f in factors {
            if f == 0 {
                return Err(Error::invalid("invariant factor 0"));
            }
            let mut x = f;
            let mut e = 0;
            while x % prime == 0 {
                x /= prime;
                e += 1;
            }
            if x != 1 {
                return Err(Error::invalid(format!("factor {f} is not a power of {prime}")));
            }
            exps.push(e);
        }
        AbelianGroupType::new(prime, &exps)
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.exponents.len()
    }

    /// Cyclic factor orders `ℓ^{e_i}`.
    pub fn moduli(&self) -> Vec<u64> {
        self.exponents.iter().map(|&e| self.prime.pow(e)).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.is_empty()
    }
}

impl fmt::Display for AbelianGroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.moduli().iter().map(|m| format!("Z/{m}")).collect();
        write!(f, "{}", parts.join("+"))
    }
}

/// `G = A ⋊ {±1}` with `-1` acting by inversion, and `c` = the involutions
/// `(a, -1)`. Element `(a, s)` has index `a + |A|·[s = -1]`.
pub fn build_generalized_dihedral(a: &AbelianGroupType) -> Result<(FiniteGroup, ConjClass)> {
    if a.prime() == 2 && !a.is_trivial() {
        return Err(Error::invalid("generalized dihedral construction needs |A| odd"));
    }
    let moduli = a.moduli();
    let na = a.order() as usize;
    if 2 * na > super::MAX_ORDER {
        return Err(Error::Budget { what: "group order", needed: 2 * na as u128, limit: super::MAX_ORDER as u128 });
    }
    let digits = |mut x: usize| {
        moduli
            .iter()
            .map(|&m| {
                let d = x % m as usize;
                x /= m as usize;
                d
            })
            .collect::<Vec<_>>()
    };
    let encode = |d: &[usize]| d.iter().zip(&moduli).rev().fold(0usize, |acc, (&di, &m)| acc * m as usize + di);
    let n = 2 * na;
    let split = |x: usize| (x % na, x >= na);
    let table: Vec<Vec<usize>> = (0..n)
        .map(|x| {
            let (ax, neg_x) = split(x);
            let dx = digits(ax);
            (0..n)
                .map(|y| {
                    let (ay, neg_y) = split(y);
                    let dy = digits(ay);
                    let sum: Vec<usize> = dx
                        .iter()
                        .zip(&dy)
                        .zip(&moduli)
                        .map(|((&p, &q), &m)| {
                            let m = m as usize;
                            if neg_x { (p + m - q) % m } else { (p + q) % m }
                        })
                        .collect();
                    encode(&sum) + if neg_x != neg_y { na } else { 0 }
                })
                .collect()
        })
        .collect();
    let labels = (0..n)
        .map(|x| {
            let (ax, neg) = split(x);
            let d: Vec<String> = digits(ax).iter().map(|v| v.to_string()).collect();
            format!("({};{})", d.join(","), if neg { '-' } else { '+' })
        })
        .collect();
    let group = FiniteGroup::from_table(table, Some(labels))?;
    let class = ConjClass::new(&group, (na..n).collect())?;
    Ok((group, class))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force isomorphism search: try every bijection fixing identity.
    fn isomorphic(g: &FiniteGroup, h: &FiniteGroup) -> bool {
        if g.order() != h.order() {
            return false;
        }
        fn rec(g: &FiniteGroup, h: &FiniteGroup, map: &mut Vec<usize>, used: &mut Vec<bool>, k: usize) -> bool {
            let n = g.order();
            if k == n {
                return (0..n).all(|a| (0..n).all(|b| map[g.mul(a, b)] == h.mul(map[a], map[b])));
            }
            for t in 0..n {
                if !used[t] && g.elem_order(k) == h.elem_order(t) {
                    used[t] = true;
                    map[k] = t;
                    if rec(g, h, map, used, k + 1) {
                        return true;
                    }
                    used[t] = false;
                }
            }
            false
        }
        let mut map = vec![0; g.order()];
        let mut used = vec![false; g.order()];
        rec(g, h, &mut map, &mut used, 0)
    }

    #[test]
    fn gdih3_is_s3() {
        let (g, c) = build_generalized_dihedral(&AbelianGroupType::new(3, &[1]).unwrap()).unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(c.len(), 3);
        assert!(isomorphic(&g, &FiniteGroup::symmetric(3).unwrap()));
    }

    #[test]
    fn gdih_trivial_is_z2() {
        let (g, c) = build_generalized_dihedral(&AbelianGroupType::trivial(3).unwrap()).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(c.len(), 1);
        assert!(isomorphic(&g, &FiniteGroup::cyclic(2).unwrap()));
    }

    #[test]
    fn gdih9_involution_count() {
        let (g, c) = build_generalized_dihedral(&AbelianGroupType::new(3, &[2]).unwrap()).unwrap();
        assert_eq!(g.order(), 18);
        let inv = g.elements().filter(|&x| x != g.identity() && g.mul(x, x) == g.identity()).count();
        assert_eq!(inv, 9);
        assert_eq!(c.len(), 9);
    }

    #[test]
    fn rejects_even_prime() {
        assert!(build_generalized_dihedral(&AbelianGroupType::new(2, &[1]).unwrap()).is_err());
    }

    #[test]
    fn invariant_factor_parsing() {
        let a = AbelianGroupType::from_invariant_factors(&[3, 9]).unwrap();
        assert_eq!(a.prime(), 3);
        assert_eq!(a.exponents(), &[2, 1]);
        assert_eq!(a.order(), 27);
        assert!(AbelianGroupType::from_invariant_factors(&[3, 5]).is_err());
        assert!(AbelianGroupType::from_invariant_factors(&[6]).is_err());
        assert!(AbelianGroupType::new(4, &[1]).is_err());
    }
}

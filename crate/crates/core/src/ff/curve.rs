//! Imaginary hyperelliptic curves `y² = F(x)`, `deg F = 2g + 1`, and their
//! Jacobians in Mumford representation.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::AbelianGroupType;

use super::field::{Fe, Field};
use super::poly::Poly;

/// Default cap on polynomial enumeration and Jacobian search work.
pub const DEFAULT_FF_BUDGET: u128 = 10_000_000;

fn check_budget(what: &'static str, needed: u128, limit: u128) -> Result<()> {
    if needed > limit {
        return Err(Error::Budget { what, needed, limit });
    }
    Ok(())
}

/// Number of monic degree-`n` polynomials.
fn monic_count(field: &Field, n: usize) -> u128 {
    (field.order() as u128).checked_pow(n as u32).unwrap_or(u128::MAX)
}

/// All monic squarefree polynomials of degree `n`, ordered by
/// [`Poly::code`].
pub fn enumerate_monic_squarefree(field: &Field, n: usize, budget: u128) -> Result<Vec<Poly>> {
    let total = monic_count(field, n);
    check_budget("monic polynomials", total, budget)?;
    let q = field.order();
    Ok((0..total as u64)
        .into_par_iter()
        .map(|code| Poly::monic_from_code(q, n, code))
        .filter(|f| f.is_squarefree(field))
        .collect())
}

#[derive(Clone, Debug)]
pub struct Curve {
    field: Arc<Field>,
    f: Poly,
    twist: bool,
    rhs: Poly,
    genus: usize,
}

impl Curve {
    /// `y² = f` or, if `twist`, `y² = εf` with `ε` the smallest non-square.
    /// `f` must be monic, squarefree and of odd degree.
    pub fn new(field: Arc<Field>, f: Poly, twist: bool) -> Result<Curve> {
        if field.characteristic() == 2 {
            return Err(Error::invalid("characteristic 2 is not supported"));
        }
        let n = f.degree().ok_or_else(|| Error::invalid("zero polynomial"))?;
        if n % 2 == 0 {
            return Err(Error::invalid(format!("degree {n} is even")));
        }
        if !f.is_monic() || !f.is_squarefree(&field) {
            return Err(Error::invalid(format!("{} is not monic squarefree", f.display())));
        }
        let rhs = if twist { f.scale(&field, field.smallest_nonsquare()) } else { f.clone() };
        Ok(Curve { field, f, twist, rhs, genus: (n - 1) / 2 })
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    /// The monic polynomial `f`.
    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn twist(&self) -> bool {
        self.twist
    }

    /// `F` in `y² = F`.
    pub fn rhs(&self) -> &Poly {
        &self.rhs
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn identity(&self) -> MumfordDivisor {
        MumfordDivisor { u: Poly::one(), v: Poly::zero() }
    }

    /// `u` monic, `deg v < deg u ≤ g`, `u | v² − F`.
    pub fn is_reduced(&self, d: &MumfordDivisor) -> bool {
        self.is_semi_reduced(d) && d.u.deg() <= self.genus as i64
    }

    fn is_semi_reduced(&self, d: &MumfordDivisor) -> bool {
        let k = &*self.field;
        d.u.is_monic() && d.v.deg() < d.u.deg() && d.v.mul(k, &d.v).sub(k, &self.rhs).rem(k, &d.u).is_zero()
    }

    pub fn negate(&self, d: &MumfordDivisor) -> MumfordDivisor {
        MumfordDivisor { u: d.u.clone(), v: d.v.neg(&self.field) }
    }

    /// `k·D` by double-and-add.
    pub fn multiple(&self, d: &MumfordDivisor, mut k: u64) -> MumfordDivisor {
        let mut acc = self.identity();
        let mut base = d.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = compose_reduce(self, &acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = compose_reduce(self, &base, &base);
            }
        }
        acc
    }
}

/// Curves of 𝔖_n: every monic squarefree `f` of odd degree `n`, first as
/// `y² = f` then as its twist.
pub fn curve_sweep(field: &Arc<Field>, n: usize, budget: u128) -> Result<Vec<Curve>> {
    if n % 2 == 0 {
        return Err(Error::invalid(format!("degree {n} is even")));
    }
    if field.characteristic() == 2 {
        return Err(Error::invalid("characteristic 2 is not supported"));
    }
    let polys = enumerate_monic_squarefree(field, n, budget)?;
    Ok(polys
        .into_iter()
        .flat_map(|f| [false, true].map(|t| Curve::new(field.clone(), f.clone(), t).expect("f is squarefree")))
        .collect())
}

/// A divisor class `div(u, v)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MumfordDivisor {
    pub u: Poly,
    pub v: Poly,
}

fn compose_reduce(c: &Curve, a: &MumfordDivisor, b: &MumfordDivisor) -> MumfordDivisor {
    let k = &*c.field;
    let f = &c.rhs;
    // composition
    let (d1, e1, e2) = a.u.xgcd(k, &b.u);
    let (d, c1, c2) = d1.xgcd(k, &a.v.add(k, &b.v));
    let s1 = c1.mul(k, &e1);
    let s2 = c1.mul(k, &e2);
    let s3 = c2;
    let d2 = d.mul(k, &d);
    let mut u = a.u.mul(k, &b.u).div_rem(k, &d2).0;
    let num = s1
        .mul(k, &a.u)
        .mul(k, &b.v)
        .add(k, &s2.mul(k, &b.u).mul(k, &a.v))
        .add(k, &s3.mul(k, &a.v.mul(k, &b.v).add(k, f)));
    let mut v = num.div_rem(k, &d).0.rem(k, &u);
    // reduction
    while u.deg() > c.genus as i64 {
        u = f.sub(k, &v.mul(k, &v)).div_rem(k, &u).0.monic(k);
        v = v.neg(k).rem(k, &u);
    }
    MumfordDivisor { u: u.monic(k), v }
}

/// Cantor composition followed by reduction.
pub fn cantor_compose_reduce(c: &Curve, a: &MumfordDivisor, b: &MumfordDivisor) -> Result<MumfordDivisor> {
    for d in [a, b] {
        if !c.is_reduced(d) {
            return Err(Error::invalid(format!("({}, {}) is not a reduced divisor", d.u.display(), d.v.display())));
        }
    }
    Ok(compose_reduce(c, a, b))
}

/// Every reduced divisor, ordered by `(deg u, u, v)`.
pub fn jacobian_elements(c: &Curve, budget: u128) -> Result<Vec<MumfordDivisor>> {
    let k = &*c.field;
    let q = k.order() as u128;
    let work: u128 = (0..=c.genus as u32).map(|d| q.pow(2 * d)).sum();
    check_budget("Jacobian enumeration", work, budget)?;
    let mut out = Vec::new();
    for d in 0..=c.genus {
        for ucode in 0..(q as u64).pow(d as u32) {
            let u = Poly::monic_from_code(k.order(), d, ucode);
            let target = c.rhs.rem(k, &u);
            for vcode in 0..(q as u64).pow(d as u32) {
                let mut vc: Vec<Fe> = Vec::with_capacity(d);
                let mut x = vcode;
                for _ in 0..d {
                    vc.push((x % q as u64) as Fe);
                    x /= q as u64;
                }
                let v = Poly::from_coeffs(vc);
                if v.mul(k, &v).rem(k, &u) == target {
                    out.push(MumfordDivisor { u: u.clone(), v });
                }
            }
        }
    }
    Ok(out)
}

/// Finite abelian group by invariant factors `d_1 | d_2 | …` (all `> 1`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianGroupStructure {
    pub order: u64,
    pub invariant_factors: Vec<u64>,
    /// Only the order is known (enumeration was over budget).
    pub order_only: bool,
}

fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn valuation(mut n: u64, p: u64) -> u32 {
    let mut e = 0;
    while n > 0 && n % p == 0 {
        n /= p;
        e += 1;
    }
    e
}

impl AbelianGroupStructure {
    /// From the exponents of each `ℓ`-part.
    pub fn from_parts(parts: &[AbelianGroupType]) -> Self {
        let width = parts.iter().map(|a| a.rank()).max().unwrap_or(0);
        let mut factors = vec![1u64; width];
        for a in parts {
            // exponents are non-increasing; align them with the largest factors
            for (i, &e) in a.exponents().iter().enumerate() {
                factors[width - 1 - i] *= a.prime().pow(e);
            }
        }
        let order = factors.iter().product();
        AbelianGroupStructure { order, invariant_factors: factors, order_only: false }
    }

    /// The `ℓ`-part; available for order-only results when `ℓ² ∤ order`.
    pub fn ell_part(&self, ell: u64) -> Result<AbelianGroupType> {
        if self.order_only {
            return match valuation(self.order, ell) {
                0 => AbelianGroupType::trivial(ell),
                1 => AbelianGroupType::new(ell, &[1]),
                _ => Err(Error::Precondition(format!("{ell}-part of an order-{} group is undetermined", self.order))),
            };
        }
        let exps: Vec<u32> = self.invariant_factors.iter().map(|&d| valuation(d, ell)).collect();
        AbelianGroupType::new(ell, &exps)
    }
}

/// `#{P : ℓ^k P = 0}` for `k = 0..=e`, by repeated multiplication by `ℓ`.
fn torsion_counts(c: &Curve, elems: &[MumfordDivisor], ell: u64, e: u32) -> Vec<u64> {
    let id = c.identity();
    let killed_at: Vec<Option<u32>> = elems
        .par_iter()
        .map(|p| {
            let mut x = p.clone();
            for k in 0..=e {
                if x == id {
                    return Some(k);
                }
                x = c.multiple(&x, ell);
            }
            None
        })
        .collect();
    (0..=e).map(|k| killed_at.iter().filter(|x| x.is_some_and(|j| j <= k)).count() as u64).collect()
}

/// Exponents of an `ℓ`-group from `t_k = log_ℓ #G[ℓ^k]`.
fn partition_from_torsion(ell: u64, counts: &[u64]) -> Result<Vec<u32>> {
    let logs: Vec<u32> = counts
        .iter()
        .map(|&n| {
            let v = valuation(n, ell);
            if ell.pow(v) == n {
                Ok(v)
            } else {
                Err(Error::Contract(format!("torsion count {n} is not a power of {ell}")))
            }
        })
        .collect::<Result<_>>()?;
    // r_k = t_k - t_{k-1} = #{i : e_i ≥ k}
    let r: Vec<u32> = logs.windows(2).map(|w| w[1] - w[0]).collect();
    let rank = r.first().copied().unwrap_or(0) as usize;
    Ok((0..rank).map(|i| r.iter().filter(|&&x| x as usize > i).count() as u32).collect())
}

/// Group structure of `Cl⁰`, by enumeration and torsion counting. Falls back
/// to the zeta-function class number (flagged `order_only`) when the
/// enumeration is over budget.
pub fn jacobian_structure(c: &Curve, budget: u128) -> Result<AbelianGroupStructure> {
    let elems = match jacobian_elements(c, budget) {
        Ok(e) => e,
        Err(e) if e.is_budget() => {
            let order = zeta_class_number(c)?;
            return Ok(AbelianGroupStructure { order, invariant_factors: Vec::new(), order_only: true });
        }
        Err(e) => return Err(e),
    };
    let order = elems.len() as u64;
    let parts = factor(order)
        .into_iter()
        .map(|(ell, e)| {
            let counts = torsion_counts(c, &elems, ell, e);
            let exps = partition_from_torsion(ell, &counts)?;
            let part = AbelianGroupType::new(ell, &exps)?;
            if part.order() != ell.pow(e) {
                return Err(Error::Contract(format!("{ell}-part has order {} not {}", part.order(), ell.pow(e))));
            }
            Ok(part)
        })
        .collect::<Result<Vec<_>>>()?;
    let s = AbelianGroupStructure::from_parts(&parts);
    debug_assert_eq!(s.order, order);
    Ok(s)
}

/// `#C(F_{q^r})` for the smooth projective model (one point at infinity).
pub fn point_count(c: &Curve, r: u32) -> Result<u64> {
    let big = c.field.extension_cached(r)?;
    // base elements keep their indices in the extension
    let s: i64 = big.elements().map(|x| big.chi(c.rhs.eval(&big, x))).sum();
    Ok((big.order() as i64 + 1 + s) as u64)
}

/// `h = L(1)` where `L(T) = Σ a_i T^i` is recovered from point counts over
/// `F_{q^r}`, `r ≤ g`, by Newton's identities and `a_{2g-i} = q^{g-i} a_i`.
pub fn zeta_class_number(c: &Curve) -> Result<u64> {
    let g = c.genus;
    if g > 3 {
        return Err(Error::Precondition(format!("genus {g} > 3")));
    }
    let q = c.field.order() as i128;
    let s: Vec<i128> = (1..=g as u32)
        .map(|r| point_count(c, r).map(|n| q.pow(r) + 1 - n as i128))
        .collect::<Result<_>>()?;
    let mut a = vec![0i128; 2 * g + 1];
    a[0] = 1;
    for i in 1..=g {
        let acc: i128 = (1..=i).map(|j| s[j - 1] * a[i - j]).sum();
        if acc % i as i128 != 0 {
            return Err(Error::Contract("Newton identity produced a non-integer".into()));
        }
        a[i] = -acc / i as i128;
    }
    for i in 0..g {
        a[2 * g - i] = q.pow((g - i) as u32) * a[i];
    }
    let h: i128 = a.iter().sum();
    u64::try_from(h).map_err(|_| Error::Contract(format!("class number {h} is not positive")))
}

/// Per-prime element counts predicted by a structure: `#G[ℓ^k]`.
pub fn predicted_torsion(s: &AbelianGroupStructure, ell: u64, k: u32) -> u64 {
    s.invariant_factors.iter().map(|&d| ell.pow(valuation(d, ell).min(k))).product()
}

/// Orders of all elements, as a histogram.
pub fn order_histogram(c: &Curve, elems: &[MumfordDivisor]) -> BTreeMap<u64, u64> {
    let n = elems.len() as u64;
    let divisors: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
    let id = c.identity();
    let mut h = BTreeMap::new();
    for p in elems {
        let ord = *divisors.iter().find(|&&d| c.multiple(p, d) == id).expect("order divides the group order");
        *h.entry(ord).or_insert(0) += 1;
    }
    h
}

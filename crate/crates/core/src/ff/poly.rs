//! Dense univariate polynomials over a table field.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::field::{Fe, Field};

/// Coefficients low degree first, no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Poly {
    c: Vec<Fe>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { c: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly { c: vec![1] }
    }

    pub fn x() -> Poly {
        Poly { c: vec![0, 1] }
    }

    pub fn constant(a: Fe) -> Poly {
        Poly::from_coeffs(vec![a])
    }

    pub fn from_coeffs(mut c: Vec<Fe>) -> Poly {
        while c.last() == Some(&0) {
            c.pop();
        }
        Poly { c }
    }

    /// Monic polynomial of degree `n` whose lower coefficients are the
    /// base-`q` digits of `code` (constant term least significant).
    pub fn monic_from_code(q: usize, n: usize, mut code: u64) -> Poly {
        let mut c = vec![0; n + 1];
        for slot in c.iter_mut().take(n) {
            *slot = (code % q as u64) as Fe;
            code /= q as u64;
        }
        c[n] = 1;
        Poly { c }
    }

    /// Inverse of [`Poly::monic_from_code`] on the lower coefficients.
    pub fn code(&self, q: usize) -> u64 {
        let n = self.c.len().saturating_sub(1);
        self.c[..n].iter().rev().fold(0u64, |acc, &x| acc * q as u64 + x as u64)
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with `deg 0 = -1`.
    pub fn deg(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn lead(&self) -> Fe {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.c.get(i).copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    pub fn add(&self, f: &Field, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::from_coeffs((0..n).map(|i| f.add(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn sub(&self, f: &Field, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::from_coeffs((0..n).map(|i| f.sub(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn neg(&self, f: &Field) -> Poly {
        Poly { c: self.c.iter().map(|&a| f.neg(a)).collect() }
    }

    pub fn scale(&self, f: &Field, a: Fe) -> Poly {
        Poly::from_coeffs(self.c.iter().map(|&x| f.mul(a, x)).collect())
    }

    pub fn mul(&self, f: &Field, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![0; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        Poly::from_coeffs(c)
    }

    /// Panics if `d` is zero.
    pub fn div_rem(&self, f: &Field, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let inv = f.inv(d.lead());
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![0; r.len() - dd];
        for i in (0..q.len()).rev() {
            let coef = f.mul(r[i + dd], inv);
            q[i] = coef;
            if coef != 0 {
                for (j, &b) in d.c.iter().enumerate() {
                    r[i + j] = f.sub(r[i + j], f.mul(coef, b));
                }
            }
        }
        r.truncate(dd);
        (Poly::from_coeffs(q), Poly::from_coeffs(r))
    }

    pub fn rem(&self, f: &Field, d: &Poly) -> Poly {
        self.div_rem(f, d).1
    }

    pub fn monic(&self, f: &Field) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(f, f.inv(self.lead()))
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, f: &Field, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(f, &b);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    /// `(d, s, t)` with `d = s·self + t·o` monic.
    pub fn xgcd(&self, f: &Field, o: &Poly) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(f, &r1);
            let s = s0.sub(f, &q.mul(f, &s1));
            let t = t0.sub(f, &q.mul(f, &t1));
            (r0, r1, s0, s1, t0, t1) = (r1, r, s1, s, t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let k = f.inv(r0.lead());
        (r0.scale(f, k), s0.scale(f, k), t0.scale(f, k))
    }

    pub fn derivative(&self, f: &Field) -> Poly {
        Poly::from_coeffs(self.c.iter().enumerate().skip(1).map(|(i, &a)| f.mul(f.from_int(i as i64), a)).collect())
    }

    pub fn eval(&self, f: &Field, x: Fe) -> Fe {
        self.c.iter().rev().fold(0, |acc, &a| f.add(f.mul(acc, x), a))
    }

    pub fn pow_mod(&self, f: &Field, mut e: u128, m: &Poly) -> Poly {
        let mut base = self.rem(f, m);
        let mut acc = Poly::one().rem(f, m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base).rem(f, m);
            }
            base = base.mul(f, &base).rem(f, m);
            e >>= 1;
        }
        acc
    }

    /// `gcd(f, f')` is constant.
    pub fn is_squarefree(&self, f: &Field) -> bool {
        !self.is_zero() && self.gcd(f, &self.derivative(f)).degree() == Some(0)
    }

    /// `x^3 + 2*x + 1`; coefficients are element indices.
    pub fn display(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, &a) in self.c.iter().enumerate().rev() {
            if a == 0 {
                continue;
            }
            if !s.is_empty() {
                s.push_str(" + ");
            }
            match (i, a) {
                (0, _) => write!(s, "{a}").unwrap(),
                (1, 1) => s.push('x'),
                (1, _) => write!(s, "{a}*x").unwrap(),
                (_, 1) => write!(s, "x^{i}").unwrap(),
                _ => write!(s, "{a}*x^{i}").unwrap(),
            }
        }
        s
    }
}

//! Racks, the cubical rack complex and its homology.
//!
//! The `n`-cubes are `X^n` with face maps
//!
//! ```text
//! d_i^0(x_1,…,x_n) = (x_1,…,x_{i-1}, x_{i+1},…,x_n)
//! d_i^1(x_1,…,x_n) = (x_1^{x_i},…,x_{i-1}^{x_i}, x_{i+1},…,x_n)
//! ```
//!
//! and `∂_n = Σ_i (−1)^i (d_i^0 − d_i^1)`. For a conjugation rack
//! `a^b = b^{-1} a b`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{ConjClass, FiniteGroup};
use crate::linalg::{rank, smith_normal_form, SparseMat};

/// A finite rack on `{0, …, size-1}`; `op[a * size + b] = a^b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rack {
    size: usize,
    op: Vec<usize>,
    orbit_count: usize,
}

impl Rack {
    /// Checks that every `(−)^b` is a bijection and that
    /// `(a^b)^c = (a^c)^(b^c)`.
    pub fn new(size: usize, op: Vec<usize>) -> Result<Self> {
        if op.len() != size * size || op.iter().any(|&x| x >= size) {
            return Err(Error::invalid("rack table has the wrong shape"));
        }
        let at = |a: usize, b: usize| op[a * size + b];
        for b in 0..size {
            let mut seen = vec![false; size];
            for a in 0..size {
                if std::mem::replace(&mut seen[at(a, b)], true) {
                    return Err(Error::invalid(format!("right translation by {b} is not a bijection")));
                }
            }
        }
        for a in 0..size {
            for b in 0..size {
                for c in 0..size {
                    if at(at(a, b), c) != at(at(a, c), at(b, c)) {
                        return Err(Error::invalid(format!("self-distributivity fails at ({a},{b},{c})")));
                    }
                }
            }
        }
        let orbit_count = count_orbits(size, &op);
        Ok(Rack { size, op, orbit_count })
    }

    /// `a^b = a` on `m` points.
    pub fn trivial(m: usize) -> Self {
        let op = (0..m).flat_map(|a| std::iter::repeat_n(a, m)).collect();
        Rack { size: m, op, orbit_count: m }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Orbits of the rack acting on itself.
    pub fn orbit_count(&self) -> usize {
        self.orbit_count
    }

    #[inline]
    pub fn act(&self, a: usize, b: usize) -> usize {
        self.op[a * self.size + b]
    }
}

fn count_orbits(size: usize, op: &[usize]) -> usize {
    let mut parent: Vec<usize> = (0..size).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for a in 0..size {
        for b in 0..size {
            let (x, y) = (find(&mut parent, a), find(&mut parent, op[a * size + b]));
            parent[x.max(y)] = x.min(y);
        }
    }
    (0..size).filter(|&x| find(&mut parent, x) == x).count()
}

/// Conjugation rack on `c` (indexed by position in `c`): `a^b = b^{-1} a b`.
pub fn conjugation_rack(g: &FiniteGroup, c: &ConjClass) -> Rack {
    let els = c.elements();
    let op: Vec<usize> = els
        .iter()
        .flat_map(|&a| els.iter().map(move |&b| c.position(g.conj_by(a, b)).expect("class is conjugation invariant")))
        .collect();
    let size = els.len();
    let orbit_count = count_orbits(size, &op);
    Rack { size, op, orbit_count }
}

/// Face map `d_i^ε` (1-based `i`).
pub fn face_map(rack: &Rack, t: &[usize], i: usize, eps: u8) -> Result<Vec<usize>> {
    if i == 0 || i > t.len() {
        return Err(Error::IndexOutOfRange { index: i, lo: 1, hi: t.len() });
    }
    if eps > 1 {
        return Err(Error::invalid("face map type must be 0 or 1"));
    }
    Ok(face(rack, t, i - 1, eps == 1))
}

fn face(rack: &Rack, t: &[usize], j: usize, twisted: bool) -> Vec<usize> {
    let mut out = Vec::with_capacity(t.len() - 1);
    for (k, &x) in t.iter().enumerate() {
        if k < j {
            out.push(if twisted { rack.act(x, t[j]) } else { x });
        } else if k > j {
            out.push(x);
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignConvention {
    /// `∂ = Σ (−1)^i (d_i^0 − d_i^1)`
    Standard,
    /// `∂ = Σ (−1)^{i+1} (d_i^0 − d_i^1)`
    Shifted,
}

fn encode(m: usize, t: &[usize]) -> usize {
    t.iter().fold(0, |acc, &x| acc * m + x)
}

fn decode(m: usize, n: usize, mut code: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for slot in out.iter_mut().rev() {
        *slot = code % m;
        code /= m;
    }
    out
}

fn basis_size(rack: &Rack, n: usize, budget: u128) -> Result<usize> {
    let size = (rack.size as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if size > budget {
        return Err(Error::Budget { what: "rack chain basis", needed: size, limit: budget });
    }
    Ok(size as usize)
}

/// Default cap on the size of a chain group `X^n`.
pub const DEFAULT_RACK_BUDGET: u128 = 200_000;

/// `∂_n : Z[X^n] → Z[X^{n-1}]` (rows index `X^{n-1}`).
pub fn boundary_matrix(rack: &Rack, n: usize, conv: SignConvention, budget: u128) -> Result<SparseMat> {
    let cols = basis_size(rack, n, budget)?;
    if n == 0 {
        return Ok(SparseMat::zeros(0, cols));
    }
    let rows = basis_size(rack, n - 1, budget)?;
    let m = rack.size;
    let trip: Vec<(usize, usize, i64)> = (0..cols)
        .into_par_iter()
        .flat_map_iter(|code| {
            let t = decode(m, n, code);
            (1..=n).flat_map(move |i| {
                let s = match conv {
                    SignConvention::Standard => if i % 2 == 0 { 1 } else { -1 },
                    SignConvention::Shifted => if i % 2 == 0 { -1 } else { 1 },
                };
                let f0 = encode(m, &face(rack, &t, i - 1, false));
                let f1 = encode(m, &face(rack, &t, i - 1, true));
                [(f0, code, s), (f1, code, -s)]
            })
            .collect::<Vec<_>>()
        })
        .collect();
    Ok(SparseMat::from_int_triplets(rows, cols, trip))
}

/// `dim_Q H_d` of the rack space for `0 ≤ d ≤ d_max`.
pub fn rack_homology_dims(rack: &Rack, d_max: usize, conv: SignConvention, budget: u128) -> Result<Vec<usize>> {
    basis_size(rack, d_max + 1, budget)?;
    let ranks: Vec<usize> = (0..=d_max + 1)
        .into_par_iter()
        .map(|n| boundary_matrix(rack, n, conv, budget).map(|b| rank(&b)))
        .collect::<Result<_>>()?;
    Ok((0..=d_max).map(|d| rack.size.pow(d as u32) - ranks[d] - ranks[d + 1]).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegralHomology {
    pub free_rank: usize,
    /// Torsion coefficients (invariant factors greater than one).
    pub torsion: Vec<String>,
}

/// Integral rack homology via Smith normal form; chain groups are capped at
/// 500 generators.
pub fn rack_homology_integral(rack: &Rack, d_max: usize) -> Result<Vec<IntegralHomology>> {
    let budget = crate::linalg::MAX_SNF_DIM as u128;
    basis_size(rack, d_max + 1, budget)?;
    let forms = (0..=d_max + 1)
        .map(|n| {
            let b = boundary_matrix(rack, n, SignConvention::Standard, budget)?;
            let dense: Vec<Vec<BigInt>> =
                b.to_dense().into_iter().map(|r| r.into_iter().map(|x| x.to_integer()).collect()).collect();
            smith_normal_form(&dense)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((0..=d_max)
        .map(|d| IntegralHomology {
            free_rank: rack.size.pow(d as u32) - forms[d].rank() - forms[d + 1].rank(),
            torsion: forms[d + 1].torsion().iter().map(|t| t.to_string()).collect(),
        })
        .collect())
}

/// A formal sum of `left ⊗ right` basis tensors.
pub type Tensor2 = BTreeMap<(Vec<usize>, Vec<usize>), i64>;
pub type Tensor3 = BTreeMap<(Vec<usize>, Vec<usize>, Vec<usize>), i64>;

fn shuffles(n: usize, p: usize) -> Vec<Vec<usize>> {
    // increasing p-subsets of 0..n: the images σ(1) < … < σ(p)
    fn rec(start: usize, n: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, p, &mut Vec::new(), &mut out);
    out
}

/// Serre-diagonal coproduct
/// `Δ(x) = Σ_{p+q=n, σ∈Sh_{p,q}} sign(σ) d^0_{σ(1)}⋯d^0_{σ(p)}(x) ⊗ d^1_{σ(p+1)}⋯d^1_{σ(n)}(x)`.
pub fn shuffle_coproduct(rack: &Rack, x: &[usize]) -> Tensor2 {
    let n = x.len();
    let mut out = Tensor2::new();
    for p in 0..=n {
        for first in shuffles(n, p) {
            let second: Vec<usize> = (0..n).filter(|i| !first.contains(i)).collect();
            let inversions: usize = first.iter().enumerate().map(|(k, &s)| s - k).sum();
            let sign = if inversions % 2 == 0 { 1 } else { -1 };
            // composites act from the right: largest index first
            let mut left = x.to_vec();
            for &j in first.iter().rev() {
                left = face(rack, &left, j, false);
            }
            let mut right = x.to_vec();
            for &j in second.iter().rev() {
                right = face(rack, &right, j, true);
            }
            *out.entry((left, right)).or_insert(0) += sign;
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

/// `(Δ ⊗ id)Δ(x)` and `(id ⊗ Δ)Δ(x)`.
pub fn iterated_coproducts(rack: &Rack, x: &[usize]) -> (Tensor3, Tensor3) {
    let mut lhs = Tensor3::new();
    let mut rhs = Tensor3::new();
    for ((l, r), c) in shuffle_coproduct(rack, x) {
        for ((a, b), d) in shuffle_coproduct(rack, &l) {
            *lhs.entry((a, b, r.clone())).or_insert(0) += c * d;
        }
        for ((a, b), d) in shuffle_coproduct(rack, &r) {
            *rhs.entry((l.clone(), a, b)).or_insert(0) += c * d;
        }
    }
    lhs.retain(|_, v| *v != 0);
    rhs.retain(|_, v| *v != 0);
    (lhs, rhs)
}

/// Checks coassociativity on every basis tensor of length `≤ n_max`.
pub fn coassociativity_holds(rack: &Rack, n_max: usize) -> bool {
    (0..=n_max).all(|n| {
        (0..rack.size.pow(n as u32)).into_par_iter().all(|code| {
            let (l, r) = iterated_coproducts(rack, &decode(rack.size, n, code));
            l == r
        })
    })
}

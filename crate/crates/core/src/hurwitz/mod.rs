//! Braid orbits on `c^n`, the graded component ring and its stabilization.
//!
//! Orbit tables are built level by level. A length-`n` tuple is a pair
//! `(g, tail)`; the braid generators `σ_2 … σ_{n-1}` act inside the tail, so
//! `c^n / β_n` is the quotient of `c × (c^{n-1}/β_{n-1})` by the single
//! family of relations coming from `σ_1`:
//!
//! ```text
//! (g, [h]·o') ~ (g h g^{-1}, [g]·o')     for g, h ∈ c, o' ∈ c^{n-2}/β_{n-2}
//! ```
//!
//! This touches `|c|^2 · dim R_{n-2}` pairs per level instead of `|c|^n`
//! tuples. [`bfs_partition`] is the direct closure over all tuples and is
//! kept as an independent check.

mod ring;
mod stabilize;

pub use ring::{ComponentRing, OrbitRecord, OrbitTable, DEFAULT_BUDGET};
pub use stabilize::{
    check_fried_volklein, component_count_connected, find_stabilizer_u, scan_u_stability,
    scan_v_stability, DAttempt, SectorRow, StabilizerSearch, StabilizerSpec, UScanReport, UScanRow,
    VScanReport, VScanRow,
};

use crate::error::{Error, Result};
use crate::groups::{ConjClass, Elem, FiniteGroup};

/// Elementary braid move at position `i` (1-based, `1 ≤ i ≤ n-1`).
///
/// `sign = +1`: `(…, g_i, g_{i+1}, …) ↦ (…, g_i g_{i+1} g_i^{-1}, g_i, …)`;
/// `sign = -1` is the inverse move `(…, g_{i+1}, g_{i+1}^{-1} g_i g_{i+1}, …)`.
pub fn braid_move(g: &FiniteGroup, t: &[Elem], i: usize, sign: i8) -> Result<Vec<Elem>> {
    let n = t.len();
    if i == 0 || i >= n {
        return Err(Error::IndexOutOfRange { index: i, lo: 1, hi: n.saturating_sub(1) });
    }
    if sign != 1 && sign != -1 {
        return Err(Error::invalid("braid move sign must be +1 or -1"));
    }
    let mut out = t.to_vec();
    apply_move(g, &mut out, i - 1, sign > 0);
    Ok(out)
}

#[inline]
fn apply_move(g: &FiniteGroup, t: &mut [Elem], j: usize, positive: bool) {
    let (a, b) = (t[j], t[j + 1]);
    if positive {
        t[j] = g.conj_by(b, g.inv(a));
        t[j + 1] = a;
    } else {
        t[j] = b;
        t[j + 1] = g.conj_by(a, b);
    }
}

/// Ordered product `g_1 g_2 ⋯ g_n`.
pub fn global_monodromy(g: &FiniteGroup, t: &[Elem]) -> Elem {
    g.product(t.iter().copied())
}

/// Result of the direct breadth-first closure over all of `c^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BfsPartition {
    pub n: usize,
    /// Orbit id per tuple, indexed by base-`|c|` encoding (first entry most significant).
    pub orbit_of: Vec<u32>,
    /// Smallest encoding in each orbit; orbit ids are ordered by it.
    pub representatives: Vec<u64>,
    pub sizes: Vec<u64>,
}

pub fn encode_tuple(c: &ConjClass, t: &[Elem]) -> Option<u64> {
    let k = c.len() as u64;
    t.iter().try_fold(0u64, |acc, &x| Some(acc * k + c.position(x)? as u64))
}

pub fn decode_tuple(c: &ConjClass, n: usize, mut code: u64) -> Vec<Elem> {
    let k = c.len() as u64;
    let mut out = vec![0; n];
    for slot in out.iter_mut().rev() {
        *slot = c.elements()[(code % k) as usize];
        code /= k;
    }
    out
}

/// Partition of `c^n` into braid orbits by exhaustive BFS.
pub fn bfs_partition(g: &FiniteGroup, c: &ConjClass, n: usize, budget: u128) -> Result<BfsPartition> {
    let total = (c.len() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    let visits = total.saturating_mul(2 * n.saturating_sub(1).max(1) as u128);
    if visits > budget || total > u32::MAX as u128 {
        return Err(Error::Budget { what: "BFS tuple visits", needed: visits, limit: budget });
    }
    let total = total as usize;
    let mut orbit_of = vec![u32::MAX; total];
    let mut representatives = Vec::new();
    let mut sizes = Vec::new();
    let mut stack = Vec::new();
    for start in 0..total {
        if orbit_of[start] != u32::MAX {
            continue;
        }
        let id = representatives.len() as u32;
        representatives.push(start as u64);
        orbit_of[start] = id;
        stack.push(start as u64);
        let mut size = 0u64;
        while let Some(code) = stack.pop() {
            size += 1;
            let t = decode_tuple(c, n, code);
            for j in 0..n.saturating_sub(1) {
                for positive in [true, false] {
                    let mut u = t.clone();
                    apply_move(g, &mut u, j, positive);
                    let e = encode_tuple(c, &u).expect("class is conjugation invariant") as usize;
                    if orbit_of[e] == u32::MAX {
                        orbit_of[e] = id;
                        stack.push(e as u64);
                    }
                }
            }
        }
        sizes.push(size);
    }
    Ok(BfsPartition { n, orbit_of, representatives, sizes })
}

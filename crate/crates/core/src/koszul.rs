//! Discrete modules over the ring of components and their A-module homology,
//! computed by the Koszul complex
//!
//! ```text
//! K_d = k{c}^{⊗d} ⊗ M_{n-d},
//! d(g_1⊗…⊗g_d⊗m) = Σ_i (−1)^i g_1⊗…ĝ_i…⊗g_d ⊗ (g_i)^{g_{i+1}⋯g_d}·m
//! ```
//!
//! with `x^y = y^{-1} x y`.

use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hurwitz::{ComponentRing, StabilizerSpec};
use crate::linalg::{rank, SparseMat};
use crate::rack::{conjugation_rack, Rack};

/// Default cap on `dim K_d` for a single Koszul term.
pub const DEFAULT_KOSZUL_BUDGET: u128 = 50_000;

/// A graded module `M_0, …, M_{n_max}` with actions `act_g: M_{n-1} → M_n`.
#[derive(Clone, Debug)]
pub struct DiscreteModule {
    name: String,
    rack: Rack,
    dims: Vec<usize>,
    /// `act[n][g]` maps `M_{n-1} → M_n`; `act[0]` is empty.
    act: Vec<Vec<SparseMat>>,
}

impl DiscreteModule {
    /// Validates shapes and `act_g ∘ act_{h^g} = act_h ∘ act_g`.
    pub fn new(name: impl Into<String>, rack: Rack, dims: Vec<usize>, act: Vec<Vec<SparseMat>>) -> Result<Self> {
        let k = rack.size();
        if dims.is_empty() || act.len() != dims.len() {
            return Err(Error::invalid("action table must cover every graded piece"));
        }
        for n in 1..dims.len() {
            if act[n].len() != k {
                return Err(Error::invalid(format!("degree {n}: expected {k} action maps")));
            }
            for (g, a) in act[n].iter().enumerate() {
                if a.rows() != dims[n] || a.cols() != dims[n - 1] {
                    return Err(Error::invalid(format!(
                        "act[{n}][{g}] is {}x{}, expected {}x{}",
                        a.rows(),
                        a.cols(),
                        dims[n],
                        dims[n - 1]
                    )));
                }
            }
        }
        let m = DiscreteModule { name: name.into(), rack, dims, act };
        if let Some((n, g, h)) = m.compatibility_violation() {
            return Err(Error::Precondition(format!(
                "action is not braid compatible at degree {n} for the pair ({g},{h})"
            )));
        }
        Ok(m)
    }

    fn compatibility_violation(&self) -> Option<(usize, usize, usize)> {
        let k = self.rack.size();
        (2..self.dims.len()).find_map(|n| {
            (0..k).flat_map(|g| (0..k).map(move |h| (g, h))).find_map(|(g, h)| {
                let lhs = self.act[n][g].mul(&self.act[n - 1][self.rack.act(h, g)]).ok()?;
                let rhs = self.act[n][h].mul(&self.act[n - 1][g]).ok()?;
                (lhs != rhs).then_some((n, g, h))
            })
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn class_size(&self) -> usize {
        self.rack.size()
    }

    pub fn n_max(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dim(&self, n: usize) -> usize {
        self.dims.get(n).copied().unwrap_or(0)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `act_g: M_{n-1} → M_n` (`g` is a position in the class).
    pub fn action(&self, n: usize, g: usize) -> &SparseMat {
        &self.act[n][g]
    }
}

fn orbit_map(rows: usize, cols: usize, image: impl Iterator<Item = Option<usize>>) -> SparseMat {
    let t: Vec<(usize, usize, i64)> =
        image.enumerate().filter_map(|(c, r)| r.map(|r| (r, c, 1))).collect();
    SparseMat::from_int_triplets(rows, cols, t)
}

/// `R` as a module over itself, acting by left concatenation.
pub fn module_from_ring(ring: &ComponentRing) -> Result<DiscreteModule> {
    let rack = conjugation_rack(ring.group(), ring.class());
    let dims: Vec<usize> = (0..=ring.n_max()).map(|n| ring.dim(n)).collect();
    let act = (0..dims.len())
        .map(|n| {
            if n == 0 {
                return Vec::new();
            }
            (0..rack.size())
                .map(|g| {
                    let l = ring.left_map(n, g);
                    orbit_map(dims[n], dims[n - 1], l.iter().map(|&o| Some(o as usize)))
                })
                .collect()
        })
        .collect();
    DiscreteModule::new("R", rack, dims, act)
}

/// The trivial module `k` in grading 0.
pub fn trivial_module(ring: &ComponentRing) -> Result<DiscreteModule> {
    let rack = conjugation_rack(ring.group(), ring.class());
    let n_max = ring.n_max();
    let dims: Vec<usize> = (0..=n_max).map(|n| usize::from(n == 0)).collect();
    let act = (0..=n_max)
        .map(|n| if n == 0 { Vec::new() } else { vec![SparseMat::zeros(dims[n], dims[n - 1]); rack.size()] })
        .collect();
    DiscreteModule::new("k", rack, dims, act)
}

/// Sector module of subgroup `h`: spanned by the orbits whose entries
/// generate exactly `h`, i.e. the subquotient of `R` by orbits generating
/// a strictly larger group. `g ∈ c ∩ h` acts by concatenation, every other
/// `g` by zero. For `h = G` this is the ideal of generating orbits.
pub fn sector_module(ring: &ComponentRing, h: usize) -> Result<DiscreteModule> {
    let table = ring.subgroup_table();
    if h >= table.len() {
        return Err(Error::IndexOutOfRange { index: h, lo: 0, hi: table.len().saturating_sub(1) });
    }
    let rack = conjugation_rack(ring.group(), ring.class());
    let class = ring.class().elements();
    let bases: Vec<Vec<usize>> = (0..=ring.n_max()).map(|n| ring.sector(n, h)).collect();
    let dims: Vec<usize> = bases.iter().map(Vec::len).collect();
    let act = (0..dims.len())
        .map(|n| {
            if n == 0 {
                return Vec::new();
            }
            (0..rack.size())
                .map(|g| {
                    if !table.get(h).contains(class[g]) {
                        return SparseMat::zeros(dims[n], dims[n - 1]);
                    }
                    let l = ring.left_map(n, g);
                    let image = bases[n - 1].iter().map(|&o| bases[n].binary_search(&(l[o] as usize)).ok());
                    orbit_map(dims[n], dims[n - 1], image)
                })
                .collect()
        })
        .collect();
    let order = table.get(h).len();
    DiscreteModule::new(format!("sector(H#{h}, order {order})"), rack, dims, act)
}

/// Mixed-radix index `(g_1,…,g_d, m) ↦ code(g)·dim + m`.
fn term_dim(m: &DiscreteModule, n: usize, d: usize) -> Option<u128> {
    if d > n {
        return Some(0);
    }
    (m.class_size() as u128).checked_pow(d as u32)?.checked_mul(m.dim(n - d) as u128)
}

fn checked_term(m: &DiscreteModule, n: usize, d: usize, budget: u128) -> Result<usize> {
    if n > m.n_max() {
        return Err(Error::IndexOutOfRange { index: n, lo: 0, hi: m.n_max() });
    }
    let size = term_dim(m, n, d).unwrap_or(u128::MAX);
    if size > budget {
        return Err(Error::Budget { what: "Koszul term", needed: size, limit: budget });
    }
    Ok(size as usize)
}

/// `dim K_d` in grading `n`.
pub fn koszul_term_dim(m: &DiscreteModule, n: usize, d: usize) -> u128 {
    term_dim(m, n, d).unwrap_or(u128::MAX)
}

/// `d: K_d → K_{d-1}` in grading `n` (rows index `K_{d-1}`).
pub fn koszul_differential(m: &DiscreteModule, n: usize, d: usize, budget: u128) -> Result<SparseMat> {
    if d == 0 || d > n {
        return Err(Error::IndexOutOfRange { index: d, lo: 1, hi: n });
    }
    let cols = checked_term(m, n, d, budget)?;
    let rows = checked_term(m, n, d - 1, budget)?;
    let k = m.class_size();
    let src = m.dim(n - d);
    let tgt = m.dim(n - d + 1);
    // column lists of each act_g : M_{n-d} → M_{n-d+1}
    let cols_of: Vec<Vec<Vec<(usize, BigRational)>>> = (0..k)
        .map(|g| {
            let mut c = vec![Vec::new(); src];
            for (r, j, v) in m.action(n - d + 1, g).entries() {
                c[*j].push((*r, v.clone()));
            }
            c
        })
        .collect();
    let trip: Vec<(usize, usize, BigRational)> = (0..cols)
        .into_par_iter()
        .flat_map_iter(|col| {
            let (mut code, mi) = (col / src.max(1), col % src.max(1));
            let mut g = vec![0usize; d];
            for slot in g.iter_mut().rev() {
                *slot = code % k;
                code /= k;
            }
            let mut out = Vec::new();
            for i in 0..d {
                let acting = g[i + 1..].iter().fold(g[i], |x, &y| m.rack.act(x, y));
                let rest = g.iter().enumerate().filter(|&(j, _)| j != i).fold(0, |acc, (_, &x)| acc * k + x);
                let sign = if (i + 1) % 2 == 0 { BigRational::one() } else { -BigRational::one() };
                for (r, v) in &cols_of[acting][mi] {
                    out.push((rest * tgt + r, col, &sign * v));
                }
            }
            out
        })
        .collect();
    SparseMat::from_triplets(rows, cols, trip)
}

fn differential_rank(m: &DiscreteModule, n: usize, d: usize, budget: u128) -> Result<usize> {
    if d == 0 || d > n {
        return Ok(0);
    }
    koszul_differential(m, n, d, budget).map(|x| rank(&x))
}

/// `dim H^A_{n,d}(M)`.
pub fn a_homology(m: &DiscreteModule, n: usize, d: usize, budget: u128) -> Result<usize> {
    let dim = checked_term(m, n, d, budget)?;
    if dim == 0 {
        return Ok(0);
    }
    let (a, b) = rayon::join(|| differential_rank(m, n, d, budget), || differential_rank(m, n, d + 1, budget));
    Ok(dim - a? - b?)
}

/// `dim H^A_{n,d}` for `n ≤ n_max`, `d ≤ d_max`; entry `[n][d]`.
pub fn a_homology_table(m: &DiscreteModule, n_max: usize, d_max: usize, budget: u128) -> Result<Vec<Vec<usize>>> {
    if n_max > m.n_max() {
        return Err(Error::IndexOutOfRange { index: n_max, lo: 0, hi: m.n_max() });
    }
    // ranks of every needed differential, each computed once
    let jobs: Vec<(usize, usize)> =
        (0..=n_max).flat_map(|n| (1..=(d_max + 1).min(n)).map(move |d| (n, d))).collect();
    let ranks: Vec<usize> =
        jobs.par_iter().map(|&(n, d)| differential_rank(m, n, d, budget)).collect::<Result<_>>()?;
    let lookup = |n: usize, d: usize| jobs.iter().position(|&x| x == (n, d)).map_or(0, |i| ranks[i]);
    (0..=n_max)
        .map(|n| {
            (0..=d_max)
                .map(|d| {
                    let dim = checked_term(m, n, d, budget)?;
                    Ok(if dim == 0 { 0 } else { dim - lookup(n, d) - lookup(n, d + 1) })
                })
                .collect()
        })
        .collect()
}

/// Checks `d ∘ d = 0` in every grading `n ≤ n_max`.
pub fn differential_squares_to_zero(m: &DiscreteModule, n_max: usize, budget: u128) -> Result<bool> {
    let pairs: Vec<(usize, usize)> = (2..=n_max).flat_map(|n| (2..=n).map(move |d| (n, d))).collect();
    pairs
        .par_iter()
        .map(|&(n, d)| {
            let a = koszul_differential(m, n, d - 1, budget)?;
            let b = koszul_differential(m, n, d, budget)?;
            Ok(a.mul(&b)?.is_zero())
        })
        .try_reduce(|| true, |x, y| Ok(x && y))
}

/// `Σ_d (−1)^d dim K_d = Σ_d (−1)^d dim H^A_{n,d}` in grading `n`.
pub fn euler_characteristic_holds(m: &DiscreteModule, n: usize, budget: u128) -> Result<bool> {
    let table = a_homology_table(m, n, n, budget)?;
    let mut chi_k = 0i128;
    let mut chi_h = 0i128;
    for d in 0..=n {
        let s = if d % 2 == 0 { 1 } else { -1 };
        chi_k += s * checked_term(m, n, d, budget)? as i128;
        chi_h += s * table[n][d] as i128;
    }
    Ok(chi_k == chi_h)
}

/// A degree observed in the window `[0, n_max]`; `None` is `−∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowDegree {
    pub value: Option<usize>,
    /// The group at the top of the window is nonzero, so the true degree
    /// may be larger.
    pub saturated: bool,
}

impl WindowDegree {
    fn from_nonzero(n_max: usize, nonzero: impl Fn(usize) -> bool) -> Self {
        let value = (0..=n_max).rev().find(|&n| nonzero(n));
        WindowDegree { value, saturated: value == Some(n_max) }
    }

    /// `value ≤ bound` with `−∞` below everything.
    pub fn at_most(&self, bound: Option<i64>) -> bool {
        match (self.value, bound) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(v), Some(b)) => (v as i64) <= b,
        }
    }
}

/// `h^A_d(M)` for `d ≤ d_max`, observed up to `n_max`.
pub fn h_degrees(m: &DiscreteModule, d_max: usize, n_max: usize, budget: u128) -> Result<Vec<WindowDegree>> {
    let table = a_homology_table(m, n_max, d_max, budget)?;
    Ok((0..=d_max).map(|d| WindowDegree::from_nonzero(n_max, |n| table[n][d] != 0)).collect())
}

/// Degrees of `H_{*,0}` and `H_{*,1}` of the cofiber of `U·−: M_{n-N} → M_n`,
/// where `U` acts as `Σ_g act_g^N`. Both are indexed by the target grading.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CofiberDegrees {
    pub deg0: WindowDegree,
    pub deg1: WindowDegree,
}

/// The matrix of `U·−: M_{n-N} → M_n` for `n ≥ N`.
pub fn u_action(m: &DiscreteModule, spec: &StabilizerSpec, n: usize) -> Result<SparseMat> {
    let big_n = spec.n_grading;
    if n < big_n || n > m.n_max() {
        return Err(Error::IndexOutOfRange { index: n, lo: big_n, hi: m.n_max() });
    }
    let mut total = SparseMat::zeros(m.dim(n), m.dim(n - big_n));
    for g in 0..m.class_size() {
        let mut power = SparseMat::identity(m.dim(n - big_n));
        for j in n - big_n + 1..=n {
            power = m.action(j, g).mul(&power)?;
        }
        total = total.add(&power)?;
    }
    Ok(total)
}

pub fn cofiber_degrees(m: &DiscreteModule, spec: &StabilizerSpec, n_max: usize) -> Result<CofiberDegrees> {
    if n_max > m.n_max() {
        return Err(Error::IndexOutOfRange { index: n_max, lo: 0, hi: m.n_max() });
    }
    let big_n = spec.n_grading;
    let ranks: Vec<usize> = (0..=n_max)
        .into_par_iter()
        .map(|n| if n < big_n { Ok(0) } else { u_action(m, spec, n).map(|u| rank(&u)) })
        .collect::<Result<_>>()?;
    let src = |n: usize| if n < big_n { 0 } else { m.dim(n - big_n) };
    Ok(CofiberDegrees {
        deg0: WindowDegree::from_nonzero(n_max, |n| m.dim(n) > ranks[n]),
        deg1: WindowDegree::from_nonzero(n_max, |n| src(n) > ranks[n]),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub bound: String,
    pub d: Option<usize>,
    pub lhs: Option<usize>,
    /// `None` is `−∞`.
    pub rhs: Option<i64>,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CofiberSummary {
    pub deg0: Option<usize>,
    pub deg1: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularityReport {
    pub module: String,
    pub n_max: usize,
    pub d_max: usize,
    #[serde(rename = "N_0")]
    pub n0: usize,
    #[serde(rename = "B0")]
    pub b0: usize,
    #[serde(rename = "B1")]
    pub b1: i64,
    #[serde(rename = "B2")]
    pub b2: usize,
    /// `h^A_d` for `d ≤ d_max`; `null` is `−∞`.
    pub h: Vec<Option<usize>>,
    pub bounds_ok: Vec<BoundCheck>,
    pub cofiber: CofiberSummary,
    pub caveats: Vec<String>,
}

impl RegularityReport {
    pub fn all_bounds_hold(&self) -> bool {
        self.bounds_ok.iter().all(|b| b.holds)
    }
}

fn add(a: Option<usize>, b: i64) -> Option<i64> {
    a.map(|x| x as i64 + b)
}

/// Evaluates `h_d ≤ max(h_0, h_1) + B_0(d−1)` for `1 ≤ d ≤ d_max` with
/// `B_0 = N_0 + 2`, and the two cofiber bounds `deg H_{*,0} ≤ h_0 + N_0`,
/// `deg H_{*,1} ≤ max(h_0, h_1) + N_0`. Setting `is_ring` adds
/// `h_d(R) ≤ B_2 + d` with `B_2 = N_0 + 1`.
pub fn regularity_check(
    m: &DiscreteModule,
    spec: &StabilizerSpec,
    d_max: usize,
    n_max: usize,
    is_ring: bool,
    budget: u128,
) -> Result<RegularityReport> {
    let d_top = d_max.max(1);
    let h = h_degrees(m, d_top, n_max, budget)?;
    let cof = cofiber_degrees(m, spec, n_max)?;
    let n0 = spec.n0;
    let b0 = n0 + 2;
    let b2 = n0 + 1;
    let h01 = h[0].value.max(h[1].value);
    let mut bounds = Vec::new();
    for d in 1..=d_max {
        let rhs = add(h01, (b0 * (d - 1)) as i64);
        bounds.push(BoundCheck {
            bound: "h_d <= max(h_0, h_1) + B0*(d-1)".into(),
            d: Some(d),
            lhs: h[d].value,
            rhs,
            holds: h[d].at_most(rhs),
        });
    }
    if is_ring {
        for (d, hd) in h.iter().enumerate().take(d_max.min(2) + 1) {
            let rhs = Some((b2 + d) as i64);
            bounds.push(BoundCheck { bound: "h_d(R) <= B2 + d".into(), d: Some(d), lhs: hd.value, rhs, holds: hd.at_most(rhs) });
        }
    }
    let rhs0 = add(h[0].value, n0 as i64);
    bounds.push(BoundCheck {
        bound: "deg H_{*,0}(M//U) <= h_0 + N_0".into(),
        d: None,
        lhs: cof.deg0.value,
        rhs: rhs0,
        holds: cof.deg0.at_most(rhs0),
    });
    let rhs1 = add(h01, n0 as i64);
    bounds.push(BoundCheck {
        bound: "deg H_{*,1}(M//U) <= max(h_0, h_1) + N_0".into(),
        d: None,
        lhs: cof.deg1.value,
        rhs: rhs1,
        holds: cof.deg1.at_most(rhs1),
    });

    let mut caveats = Vec::new();
    for (d, x) in h.iter().enumerate().take(d_max + 1) {
        if x.saturated {
            caveats.push(format!("H^A_{{{n_max},{d}}} is nonzero: h_{d} may exceed the window"));
        }
    }
    if h[1].saturated && d_max == 0 {
        caveats.push(format!("h_1 is saturated at {n_max}"));
    }
    if cof.deg0.saturated || cof.deg1.saturated {
        caveats.push("cofiber homology is nonzero at the top of the window".into());
    }
    caveats.push(format!("degrees are observed for n <= {n_max}; zero groups are verified only inside the window"));
    caveats.push(format!(
        "B1 = N_0 - 1 = {} is reported but the bound using it needs homology of R-modules, which is not computed",
        n0 as i64 - 1
    ));
    Ok(RegularityReport {
        module: m.name().to_string(),
        n_max,
        d_max,
        n0,
        b0,
        b1: n0 as i64 - 1,
        b2,
        h: h.iter().take(d_max + 1).map(|x| x.value).collect(),
        bounds_ok: bounds,
        cofiber: CofiberSummary { deg0: cof.deg0.value, deg1: cof.deg1.value },
        caveats,
    })
}

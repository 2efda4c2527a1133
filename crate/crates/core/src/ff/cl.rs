//! Surjection counts, the Cohen–Lenstra measure and class-group statistics
//! over 𝔖_n.

use std::collections::HashMap;
use std::fmt::Write;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::AbelianGroupType;

use super::curve::{curve_sweep, jacobian_structure, zeta_class_number, AbelianGroupStructure, Curve};
use super::field::Field;
use super::good_for_ell;

/// Cap on `|A|` for surjection counts and `μ(A)`.
pub const MAX_SURJECTION_ORDER: u64 = 10_000;
const SURJECTION_WORK_LIMIT: u128 = 100_000_000;

type SurjKey = (Vec<u64>, u64, Vec<u32>);

fn memo() -> &'static Mutex<HashMap<SurjKey, u64>> {
    static MEMO: OnceLock<Mutex<HashMap<SurjKey, u64>>> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

/// Surjections `⊕ Z/m_i → B` for an `ℓ`-group `B`, by brute force over the
/// images of the generators. A tuple of images generates `B` iff it spans
/// the Frattini quotient `B/ℓB`, so tuples are grouped by their images
/// there.
pub fn count_surjections_from_cyclic(source_moduli: &[u64], target: &AbelianGroupType) -> Result<u64> {
    let ell = target.prime();
    if target.order() > MAX_SURJECTION_ORDER {
        return Err(Error::Budget {
            what: "surjection target order",
            needed: target.order() as u128,
            limit: MAX_SURJECTION_ORDER as u128,
        });
    }
    let key = (source_moduli.to_vec(), ell, target.exponents().to_vec());
    if let Some(&n) = memo().lock().expect("memo poisoned").get(&key) {
        return Ok(n);
    }
    let moduli = target.moduli();
    let r = moduli.len();
    let elements: Vec<Vec<u64>> = (0..target.order())
        .map(|mut x| {
            moduli
                .iter()
                .map(|&m| {
                    let c = x % m;
                    x /= m;
                    c
                })
                .collect()
        })
        .collect();
    let frattini_count = ell.pow(r as u32);
    // per generator: multiplicity of each Frattini image among admissible images
    let weights: Vec<Vec<u64>> = source_moduli
        .iter()
        .map(|&m| {
            let mut w = vec![0u64; frattini_count as usize];
            for b in &elements {
                if b.iter().zip(&moduli).all(|(&x, &bm)| (x * m) % bm == 0) {
                    let code = b.iter().rev().fold(0u64, |acc, &x| acc * ell + x % ell);
                    w[code as usize] += 1;
                }
            }
            w
        })
        .collect();
    // subspaces of F_ℓ^r number at most about ℓ^{r²/4}
    let work = (ell as u128)
        .saturating_pow((r + r * r / 4) as u32 + 1)
        .saturating_mul(source_moduli.len() as u128);
    if work > SURJECTION_WORK_LIMIT {
        return Err(Error::Budget { what: "surjection enumeration", needed: work, limit: SURJECTION_WORK_LIMIT });
    }
    let vectors: Vec<Vec<u64>> = (0..frattini_count)
        .map(|mut x| {
            (0..r)
                .map(|_| {
                    let c = x % ell;
                    x /= ell;
                    c
                })
                .collect()
        })
        .collect();
    let total = surj_dfs(ell, r, &weights, &vectors, 0, Vec::new(), &mut HashMap::new());
    memo().lock().expect("memo poisoned").insert(key, total);
    Ok(total)
}

/// Weighted count of generator-image tuples whose Frattini images span
/// `F_ℓ^r`. `basis` is in reduced row echelon form, so it names the span
/// and can key the memo.
fn surj_dfs(
    ell: u64,
    r: usize,
    weights: &[Vec<u64>],
    vectors: &[Vec<u64>],
    i: usize,
    basis: Vec<Vec<u64>>,
    memo: &mut HashMap<(usize, Vec<Vec<u64>>), u64>,
) -> u64 {
    if basis.len() == r {
        return weights[i..].iter().map(|w| w.iter().sum::<u64>()).product();
    }
    if i == weights.len() || weights.len() - i < r - basis.len() {
        return 0;
    }
    if let Some(&n) = memo.get(&(i, basis.clone())) {
        return n;
    }
    let mut total = 0;
    for (code, &w) in weights[i].iter().enumerate() {
        if w > 0 {
            let next = insert_rref(ell, &basis, &vectors[code]);
            total += w * surj_dfs(ell, r, weights, vectors, i + 1, next, memo);
        }
    }
    memo.insert((i, basis), total);
    total
}

fn pivot(v: &[u64]) -> Option<usize> {
    v.iter().position(|&x| x != 0)
}

/// Span of `basis ∪ {v}` in reduced row echelon form over `F_ℓ`.
fn insert_rref(ell: u64, basis: &[Vec<u64>], v: &[u64]) -> Vec<Vec<u64>> {
    let axpy = |x: &mut [u64], c: u64, y: &[u64]| {
        for (a, &b) in x.iter_mut().zip(y) {
            *a = (*a + ell - c * b % ell) % ell;
        }
    };
    let mut v = v.to_vec();
    for b in basis {
        let c = v[pivot(b).expect("basis rows are nonzero")];
        if c != 0 {
            axpy(&mut v, c, b);
        }
    }
    let Some(p) = pivot(&v) else {
        return basis.to_vec();
    };
    let inv = (1..ell).find(|&t| t * v[p] % ell == 1).expect("ℓ is prime");
    for x in v.iter_mut() {
        *x = *x * inv % ell;
    }
    let mut out: Vec<Vec<u64>> = basis
        .iter()
        .map(|b| {
            let mut b = b.clone();
            let c = b[p];
            if c != 0 {
                axpy(&mut b, c, &v);
            }
            b
        })
        .collect();
    out.push(v);
    out.sort_by_key(|b| pivot(b));
    out
}

/// `#Surj(A, B)` for `ℓ`-groups with the same `ℓ`.
pub fn count_surjections(source: &AbelianGroupType, target: &AbelianGroupType) -> Result<u64> {
    if source.prime() != target.prime() {
        return Err(Error::PrimeMismatch(source.prime(), target.prime()));
    }
    if source.order() > MAX_SURJECTION_ORDER {
        return Err(Error::Budget {
            what: "surjection source order",
            needed: source.order() as u128,
            limit: MAX_SURJECTION_ORDER as u128,
        });
    }
    count_surjections_from_cyclic(&source.moduli(), target)
}

/// `μ(A) = Π_{i≥1}(1 − ℓ^{-i}) / |Aut A|`, truncated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MuValue {
    pub value: f64,
    /// The truncated value as an exact fraction.
    pub exact: String,
    pub terms: u32,
    /// Bound on `|exact − μ(A)|`.
    pub error_bound: f64,
    pub aut_order: u64,
}

/// Truncates after the first `I` factors with `ℓ^{-I}/(ℓ−1) < tol`; the
/// tail product lies in `[1 − ℓ^{-I}/(ℓ−1), 1]`.
pub fn mu_cohen_lenstra(a: &AbelianGroupType, ell: u64, tol: f64) -> Result<MuValue> {
    if a.prime() != ell {
        return Err(Error::PrimeMismatch(a.prime(), ell));
    }
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let aut = count_surjections(a, a)?;
    let mut terms = 0u32;
    let mut bound = 1.0 / (ell as f64 - 1.0);
    while bound >= tol {
        terms += 1;
        bound /= ell as f64;
    }
    let mut prod = BigRational::one();
    let l = BigInt::from(ell);
    for i in 1..=terms {
        let pw = num_traits::pow(l.clone(), i as usize);
        prod *= BigRational::new(&pw - 1, pw);
    }
    prod /= BigRational::from_integer(BigInt::from(aut));
    Ok(MuValue {
        value: prod.to_f64().unwrap_or(f64::NAN),
        exact: prod.to_string(),
        terms,
        error_bound: bound / aut as f64,
        aut_order: aut,
    })
}

/// Default tolerance for the `μ(A)` reference values.
pub const MU_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveRecord {
    pub f: String,
    pub code: u64,
    pub twist: bool,
    pub class_number: u64,
    pub invariant_factors: Vec<u64>,
    pub ell_part: String,
    pub m_a: u64,
    pub iota: bool,
    /// `None` if the zeta cross-check was skipped.
    pub zeta_agrees: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CLReport {
    pub q: u64,
    pub n: usize,
    #[serde(rename = "A")]
    pub a: String,
    pub ell: u64,
    pub good_for_ell: bool,
    /// Moduli of the field tower over the prime field.
    pub field_modulus: Vec<Vec<u32>>,
    /// The non-square used for twists.
    pub epsilon: u32,
    pub s_n_size: u64,
    pub sum_m_a: u64,
    /// `sum_m_a / s_n_size` as a reduced fraction.
    pub average_exact: String,
    pub average: f64,
    pub density_count: u64,
    pub density_a: f64,
    pub mu_reference: f64,
    pub abs_average_minus_one: f64,
    pub abs_density_minus_mu: f64,
    /// `|average − 1|·√q`.
    pub scaled_average_gap: f64,
    pub zeta_checked: u64,
    pub zeta_mismatches: u64,
    pub order_only_curves: u64,
    pub warnings: Vec<String>,
}

#[derive(Clone, Copy, Debug)]
pub struct ClOptions {
    /// Proceed when `q` is not good for `ℓ`, with a warning.
    pub allow_bad: bool,
    pub cross_check: bool,
    pub budget: u128,
}

impl Default for ClOptions {
    fn default() -> Self {
        ClOptions { allow_bad: false, cross_check: true, budget: super::curve::DEFAULT_FF_BUDGET }
    }
}

fn curve_record(c: &Curve, a: &AbelianGroupType, opts: &ClOptions) -> Result<CurveRecord> {
    let s: AbelianGroupStructure = jacobian_structure(c, opts.budget)?;
    let part = s.ell_part(a.prime())?;
    let m_a = count_surjections(&part, a)?;
    let zeta_agrees = if opts.cross_check { Some(zeta_class_number(c)? == s.order) } else { None };
    Ok(CurveRecord {
        f: c.f().display(),
        code: c.f().code(c.field().order()),
        twist: c.twist(),
        class_number: s.order,
        invariant_factors: s.invariant_factors.clone(),
        ell_part: part.to_string(),
        m_a,
        iota: part == *a,
        zeta_agrees,
    })
}

/// Class-group statistics over 𝔖_n for `F_q`; records are in sweep order.
pub fn cl_statistics(q: u64, n: usize, a: &AbelianGroupType, opts: &ClOptions) -> Result<(CLReport, Vec<CurveRecord>)> {
    let ell = a.prime();
    let good = good_for_ell(q, ell);
    let mut warnings = Vec::new();
    if !good {
        if !opts.allow_bad {
            return Err(Error::Precondition(format!("q = {q} is not good for ell = {ell}")));
        }
        warnings.push(format!("q = {q} is not good for ell = {ell}; output is exploratory"));
    }
    if a.order() > MAX_SURJECTION_ORDER {
        return Err(Error::Budget { what: "|A|", needed: a.order() as u128, limit: MAX_SURJECTION_ORDER as u128 });
    }
    let field = Arc::new(Field::of_order(q)?);
    let curves = curve_sweep(&field, n, opts.budget)?;
    let records: Vec<CurveRecord> = curves.par_iter().map(|c| curve_record(c, a, opts)).collect::<Result<_>>()?;

    let s_n_size = records.len() as u64;
    let sum_m_a: u64 = records.iter().map(|r| r.m_a).sum();
    let density_count = records.iter().filter(|r| r.iota).count() as u64;
    let zeta_checked = records.iter().filter(|r| r.zeta_agrees.is_some()).count() as u64;
    let zeta_mismatches = records.iter().filter(|r| r.zeta_agrees == Some(false)).count() as u64;
    let order_only_curves = records.iter().filter(|r| r.invariant_factors.is_empty() && r.class_number > 1).count() as u64;
    let avg = BigRational::new(BigInt::from(sum_m_a), BigInt::from(s_n_size.max(1)));
    let average = avg.to_f64().unwrap_or(f64::NAN);
    let density_a = density_count as f64 / s_n_size.max(1) as f64;
    let mu = mu_cohen_lenstra(a, ell, MU_TOLERANCE)?.value;
    let report = CLReport {
        q,
        n,
        a: a.to_string(),
        ell,
        good_for_ell: good,
        field_modulus: field.tower().to_vec(),
        epsilon: field.smallest_nonsquare(),
        s_n_size,
        sum_m_a,
        average_exact: avg.to_string(),
        average,
        density_count,
        density_a,
        mu_reference: mu,
        abs_average_minus_one: (average - 1.0).abs(),
        abs_density_minus_mu: (density_a - mu).abs(),
        scaled_average_gap: (average - 1.0).abs() * (q as f64).sqrt(),
        zeta_checked,
        zeta_mismatches,
        order_only_curves,
        warnings,
    };
    Ok((report, records))
}

/// Upper and lower densities `δ±` over a sweep of degrees.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensitySweep {
    pub reports: Vec<CLReport>,
    pub delta_plus: f64,
    pub delta_minus: f64,
}

pub fn density_sweep(q: u64, ns: &[usize], a: &AbelianGroupType, opts: &ClOptions) -> Result<DensitySweep> {
    let reports = ns.iter().map(|&n| cl_statistics(q, n, a, opts).map(|r| r.0)).collect::<Result<Vec<_>>>()?;
    let d = reports.iter().map(|r| r.density_a);
    Ok(DensitySweep {
        delta_plus: d.clone().fold(f64::NEG_INFINITY, f64::max),
        delta_minus: d.fold(f64::INFINITY, f64::min),
        reports,
    })
}

/// Columns `f,twist,class_number,ell_part,m_A,iota`.
pub fn curve_records_csv(records: &[CurveRecord]) -> String {
    let mut s = String::from("f,twist,class_number,ell_part,m_A,iota\n");
    for r in records {
        writeln!(s, "{},{},{},{},{},{}", r.f, u8::from(r.twist), r.class_number, r.ell_part, r.m_a, u8::from(r.iota))
            .unwrap();
    }
    s
}

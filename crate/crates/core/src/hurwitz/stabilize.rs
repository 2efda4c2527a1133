use serde::{Deserialize, Serialize};

use super::ComponentRing;
use crate::error::{Error, Result};
use crate::groups::{is_nonsplitting, Elem};
use crate::linalg::{rank, SparseMat};

/// The stabilizing element `U_D = Σ_{g∈c} [g]^{|g|D}` together with the
/// onsets observed inside the scan window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizerSpec {
    pub d: usize,
    /// Grading `N = |g|·D` of `U`.
    pub n_grading: usize,
    /// `U` as `(orbit id in R_N, coefficient)` pairs.
    pub u: Vec<(usize, u64)>,
    /// Least `N_0` with `U·−: R_{n-N} → R_n` bijective for `N_0 ≤ n ≤ n_max`.
    pub n0: usize,
    /// Least `n` from which every sector map `[g]^N·−` is a bijection
    /// independent of `g`.
    pub sector_onset: usize,
    pub n_max_checked: usize,
    /// Grading `|c|·|g|` of `V = Π_{g∈c} [g]^{|g|}`.
    pub v_grading: usize,
    /// Orbit of `V` in `R_{v_grading}` when that level was built.
    pub v_orbit: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DAttempt {
    pub d: usize,
    pub n_grading: usize,
    pub sector_onset: Option<usize>,
    pub n0: Option<usize>,
    pub accepted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizerSearch {
    pub d_cap: usize,
    pub n_max: usize,
    pub attempts: Vec<DAttempt>,
    pub found: Option<StabilizerSpec>,
}

impl StabilizerSearch {
    pub fn is_conclusive(&self) -> bool {
        self.found.is_some()
    }

    /// The found spec, or an error saying the search was inconclusive (which
    /// is not a claim that no `D` exists).
    pub fn spec(&self) -> Result<&StabilizerSpec> {
        self.found.as_ref().ok_or_else(|| {
            Error::Precondition(format!(
                "no stabilizing D ≤ {} verified within n ≤ {} (inconclusive)",
                self.d_cap, self.n_max
            ))
        })
    }
}

/// `o ↦ [g]^N · o` from `R_{n-N}` to `R_n`, one map per class element.
fn power_maps(ring: &ComponentRing, n_grading: usize, n: usize) -> Vec<Vec<usize>> {
    let src = n - n_grading;
    ring.class()
        .elements()
        .iter()
        .map(|&g| {
            let t = vec![g; n_grading];
            (0..ring.dim(src)).map(|o| ring.left_act(&t, src, o).expect("within n_max")).collect()
        })
        .collect()
}

fn u_matrix(ring: &ComponentRing, maps: &[Vec<usize>], n: usize, n_grading: usize) -> SparseMat {
    let cols = ring.dim(n - n_grading);
    let trip = maps.iter().flat_map(|m| m.iter().enumerate().map(|(o, &t)| (t, o, 1i64)));
    SparseMat::from_int_triplets(ring.dim(n), cols, trip)
}

fn sector_subgroups(ring: &ComponentRing) -> Vec<usize> {
    ring.occurring_subgroups().into_iter().filter(|&h| !ring.class_set_in(h).is_empty()).collect()
}

/// Sector maps at level `n`: bijective and independent of `g ∈ c ∩ H` for
/// every sector.
fn sectors_ok(ring: &ComponentRing, maps: &[Vec<usize>], n: usize, n_grading: usize) -> bool {
    let c = ring.class();
    sector_subgroups(ring).into_iter().all(|h| {
        let src = ring.sector(n - n_grading, h);
        let tgt = ring.sector(n, h);
        if src.len() != tgt.len() {
            return false;
        }
        let members: Vec<usize> = ring.class_set_in(h).iter().map(|g| c.position(g).unwrap()).collect();
        let first: Vec<usize> = src.iter().map(|&o| maps[members[0]][o]).collect();
        let mut image = first.clone();
        image.sort_unstable();
        image.dedup();
        if image != tgt {
            return false;
        }
        members[1..].iter().all(|&k| src.iter().zip(&first).all(|(&o, &t)| maps[k][o] == t))
    })
}

fn onset(ok: &[(usize, bool)]) -> Option<usize> {
    let mut start = None;
    for &(n, good) in ok.iter().rev() {
        if good {
            start = Some(n);
        } else {
            break;
        }
    }
    start
}

/// Searches `D = 1, …, d_cap` for the smallest `D` whose sector maps become
/// bijective and `g`-independent inside the window, and reports the onset
/// `N_0` of bijectivity of `U_D·−` on `R`.
///
/// A `D` is accepted only when both onsets leave at least one full period
/// `N` of verified levels, i.e. `onset + N ≤ n_max`.
pub fn find_stabilizer_u(ring: &ComponentRing, d_cap: usize) -> Result<StabilizerSearch> {
    let (g, c) = (ring.group(), ring.class());
    if !c.is_single_class(g) {
        return Err(Error::Precondition("stabilizer search needs c to be a single conjugacy class".into()));
    }
    if !is_nonsplitting(g, c) {
        return Err(Error::Precondition("(G, c) is not non-splitting".into()));
    }
    let n_max = ring.n_max();
    let ord = c.common_order();
    let mut attempts = Vec::new();
    let mut found = None;
    for d in 1..=d_cap {
        let n_grading = ord * d;
        if n_grading > n_max {
            attempts.push(DAttempt { d, n_grading, sector_onset: None, n0: None, accepted: false });
            break;
        }
        let mut sec = Vec::new();
        let mut glob = Vec::new();
        for n in n_grading..=n_max {
            let maps = power_maps(ring, n_grading, n);
            sec.push((n, sectors_ok(ring, &maps, n, n_grading)));
            let (src, tgt) = (ring.dim(n - n_grading), ring.dim(n));
            let bij = src == tgt && rank(&u_matrix(ring, &maps, n, n_grading)) == tgt;
            glob.push((n, bij));
        }
        let sector_onset = onset(&sec);
        let n0 = onset(&glob);
        let accepted = matches!((sector_onset, n0), (Some(s), Some(z)) if s + n_grading <= n_max && z + n_grading <= n_max);
        attempts.push(DAttempt { d, n_grading, sector_onset, n0, accepted });
        if accepted {
            let u_maps = power_maps(ring, n_grading, n_grading);
            let mut u: Vec<(usize, u64)> = Vec::new();
            for m in &u_maps {
                let o = m[0];
                match u.iter_mut().find(|(x, _)| *x == o) {
                    Some(e) => e.1 += 1,
                    None => u.push((o, 1)),
                }
            }
            u.sort_unstable();
            let v_grading = c.len() * ord;
            let v_orbit = (v_grading <= n_max).then(|| ring.orbit_of(&v_tuple(ring)).unwrap());
            found = Some(StabilizerSpec {
                d,
                n_grading,
                u,
                n0: n0.unwrap(),
                sector_onset: sector_onset.unwrap(),
                n_max_checked: n_max,
                v_grading,
                v_orbit,
            });
            break;
        }
    }
    Ok(StabilizerSearch { d_cap, n_max, attempts, found })
}

fn v_tuple(ring: &ComponentRing) -> Vec<Elem> {
    let c = ring.class();
    c.elements().iter().flat_map(|&g| std::iter::repeat_n(g, c.common_order())).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectorRow {
    pub subgroup: usize,
    pub subgroup_order: usize,
    pub dim_src: usize,
    pub dim_tgt: usize,
    pub rank: usize,
    pub injective: bool,
    pub surjective: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UScanRow {
    /// Target grading; the map is `R_{n-N} → R_n`.
    pub n: usize,
    pub dim_src: usize,
    pub dim_tgt: usize,
    pub rank: usize,
    pub injective: bool,
    pub surjective: bool,
    pub sectors: Vec<SectorRow>,
}

impl UScanRow {
    pub fn bijective(&self) -> bool {
        self.injective && self.surjective
    }

    pub fn sectors_bijective(&self) -> bool {
        self.sectors.iter().all(|s| s.injective && s.surjective)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UScanReport {
    pub n_grading: usize,
    pub n0: usize,
    pub rows: Vec<UScanRow>,
}

impl UScanReport {
    /// Bijective globally and on every sector for all `n0 ≤ n` in the window.
    pub fn stable_from(&self, n0: usize) -> bool {
        self.rows.iter().filter(|r| r.n >= n0).all(|r| r.bijective() && r.sectors_bijective())
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,dim_src,dim_tgt,rank,injective,surjective,sector,sector_order,sector_dim_src,sector_dim_tgt,sector_rank,sector_injective,sector_surjective\n");
        for r in &self.rows {
            s.push_str(&format!("{},{},{},{},{},{},all,,,,,,\n", r.n, r.dim_src, r.dim_tgt, r.rank, r.injective, r.surjective));
            for sec in &r.sectors {
                s.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                    r.n, r.dim_src, r.dim_tgt, r.rank, r.injective, r.surjective, sec.subgroup, sec.subgroup_order,
                    sec.dim_src, sec.dim_tgt, sec.rank, sec.injective, sec.surjective
                ));
            }
        }
        s
    }
}

/// Rank table of `U·−` on `R` and on each sector `S(H)` (the associated
/// graded pieces of the subgroup filtration), for `N ≤ n ≤ n_max`.
pub fn scan_u_stability(ring: &ComponentRing, spec: &StabilizerSpec) -> UScanReport {
    let n_grading = spec.n_grading;
    let c = ring.class();
    let sectors = sector_subgroups(ring);
    let mut rows = Vec::new();
    for n in n_grading..=ring.n_max() {
        let maps = power_maps(ring, n_grading, n);
        let (dim_src, dim_tgt) = (ring.dim(n - n_grading), ring.dim(n));
        let r = rank(&u_matrix(ring, &maps, n, n_grading));
        let sector_rows = sectors
            .iter()
            .map(|&h| {
                let src = ring.sector(n - n_grading, h);
                let tgt = ring.sector(n, h);
                let members: Vec<usize> = ring.class_set_in(h).iter().map(|g| c.position(g).unwrap()).collect();
                let trip = src.iter().enumerate().flat_map(|(j, &o)| {
                    members.iter().filter_map(|&k| tgt.binary_search(&maps[k][o]).ok()).map(move |i| (i, j, 1i64)).collect::<Vec<_>>()
                });
                let m = SparseMat::from_int_triplets(tgt.len(), src.len(), trip);
                let r = rank(&m);
                SectorRow {
                    subgroup: h,
                    subgroup_order: ring.subgroup_table().get(h).len(),
                    dim_src: src.len(),
                    dim_tgt: tgt.len(),
                    rank: r,
                    injective: r == src.len(),
                    surjective: r == tgt.len(),
                }
            })
            .collect();
        rows.push(UScanRow {
            n,
            dim_src,
            dim_tgt,
            rank: r,
            injective: r == dim_src,
            surjective: r == dim_tgt,
            sectors: sector_rows,
        });
    }
    UScanReport { n_grading, n0: spec.n0, rows }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VScanRow {
    /// Source grading; the map is `S_n(G) → S_{n+deg V}(G)`.
    pub n: usize,
    pub dim_src: usize,
    pub dim_tgt: usize,
    pub injective: bool,
    pub surjective: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VScanReport {
    pub v_grading: usize,
    pub rows: Vec<VScanRow>,
}

/// Exploratory: `V·−` on the span of generating orbits, source gradings
/// `1 ≤ n ≤ n_max − deg V`. Nothing is asserted.
pub fn scan_v_stability(ring: &ComponentRing) -> VScanReport {
    let c = ring.class();
    let v_grading = c.len() * c.common_order();
    let whole = ring.subgroup_table().whole();
    let v = v_tuple(ring);
    let mut rows = Vec::new();
    for n in 1..=ring.n_max().saturating_sub(v_grading) {
        if n + v_grading > ring.n_max() {
            break;
        }
        let src = ring.sector(n, whole);
        let tgt = ring.sector(n + v_grading, whole);
        let mut image: Vec<usize> = src.iter().map(|&o| ring.left_act(&v, n, o).unwrap()).collect();
        image.sort_unstable();
        image.dedup();
        rows.push(VScanRow {
            n,
            dim_src: src.len(),
            dim_tgt: tgt.len(),
            injective: image.len() == src.len(),
            surjective: image == tgt,
        });
    }
    VScanReport { v_grading, rows }
}

/// Number of components of the connected Hurwitz space: generating orbits
/// modulo simultaneous conjugation.
pub fn component_count_connected(ring: &ComponentRing, n: usize) -> usize {
    ring.connected_components(n).into_iter().flatten().max().map_or(0, |m| m + 1)
}

/// Every generating orbit at length `n` contains a tuple `(g, g'_2, …, g'_n)`
/// whose tail already generates `G`.
pub fn check_fried_volklein(ring: &ComponentRing, n: usize, g: Elem) -> Result<bool> {
    let k = ring
        .class()
        .position(g)
        .ok_or_else(|| Error::Precondition(format!("element {g} is not in c")))?;
    if n > ring.n_max() {
        return Err(Error::IndexOutOfRange { index: n, lo: 0, hi: ring.n_max() });
    }
    let gen: Vec<usize> = (0..ring.dim(n)).filter(|&o| ring.is_generating(n, o)).collect();
    if gen.is_empty() {
        return Ok(true);
    }
    if n == 0 {
        return Ok(false);
    }
    let mut hit = vec![false; ring.dim(n)];
    for tail in 0..ring.dim(n - 1) {
        if ring.is_generating(n - 1, tail) {
            hit[ring.left_map(n, k)[tail] as usize] = true;
        }
    }
    Ok(gen.iter().all(|&o| hit[o]))
}

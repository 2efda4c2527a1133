use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Sparse rational matrix; entries sorted by `(row, col)`, unique, nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMat {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, BigRational)>,
}

impl SparseMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMat { rows, cols, entries: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        SparseMat::from_int_triplets(n, n, (0..n).map(|i| (i, i, 1)))
    }

    /// Duplicate positions are summed; zero results are dropped.
    pub fn from_triplets<I>(rows: usize, cols: usize, triplets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, BigRational)>,
    {
        let mut acc: HashMap<(usize, usize), BigRational> = HashMap::new();
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(Error::invalid(format!("entry ({r},{c}) outside {rows}x{cols}")));
            }
            *acc.entry((r, c)).or_insert_with(BigRational::zero) += v;
        }
        let mut entries: Vec<_> =
            acc.into_iter().filter(|(_, v)| !v.is_zero()).map(|((r, c), v)| (r, c, v)).collect();
        entries.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        Ok(SparseMat { rows, cols, entries })
    }

    /// Integer triplets; panics on out-of-range indices.
    pub fn from_int_triplets<I>(rows: usize, cols: usize, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, i64)>,
    {
        let mut acc: HashMap<(usize, usize), i64> = HashMap::new();
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "entry ({r},{c}) outside {rows}x{cols}");
            *acc.entry((r, c)).or_insert(0) += v;
        }
        let mut entries: Vec<_> = acc
            .into_iter()
            .filter(|(_, v)| *v != 0)
            .map(|((r, c), v)| (r, c, BigRational::from_integer(BigInt::from(v))))
            .collect();
        entries.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        SparseMat { rows, cols, entries }
    }

    pub fn from_dense_i64(dense: &[Vec<i64>]) -> Self {
        let rows = dense.len();
        let cols = dense.first().map_or(0, |r| r.len());
        SparseMat::from_int_triplets(
            rows,
            cols,
            dense.iter().enumerate().flat_map(|(i, row)| row.iter().enumerate().map(move |(j, &v)| (i, j, v))),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(usize, usize, BigRational)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, r: usize, c: usize) -> BigRational {
        self.entries
            .binary_search_by(|e| (e.0, e.1).cmp(&(r, c)))
            .map(|i| self.entries[i].2.clone())
            .unwrap_or_else(|_| BigRational::zero())
    }

    pub fn transpose(&self) -> SparseMat {
        let mut entries: Vec<_> = self.entries.iter().map(|(r, c, v)| (*c, *r, v.clone())).collect();
        entries.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        SparseMat { rows: self.cols, cols: self.rows, entries }
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &SparseMat) -> Result<SparseMat> {
        if self.cols != other.rows {
            return Err(Error::invalid(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut by_row: Vec<Vec<(usize, &BigRational)>> = vec![Vec::new(); other.rows];
        for (r, c, v) in &other.entries {
            by_row[*r].push((*c, v));
        }
        let triplets = self.entries.iter().flat_map(|(i, k, a)| {
            by_row[*k].iter().map(move |(j, b)| (*i, *j, a * *b))
        });
        SparseMat::from_triplets(self.rows, other.cols, triplets.collect::<Vec<_>>())
    }

    pub fn add(&self, other: &SparseMat) -> Result<SparseMat> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::invalid(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let t = self.entries.iter().chain(&other.entries).map(|(r, c, v)| (*r, *c, v.clone()));
        SparseMat::from_triplets(self.rows, self.cols, t)
    }

    /// Permutes rows and columns: entry `(r, c)` moves to `(row_perm[r], col_perm[c])`.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> SparseMat {
        let t = self.entries.iter().map(|(r, c, v)| (row_perm[*r], col_perm[*c], v.clone()));
        SparseMat::from_triplets(self.rows, self.cols, t).expect("permutation keeps indices in range")
    }

    pub fn to_dense(&self) -> Vec<Vec<BigRational>> {
        let mut d = vec![vec![BigRational::zero(); self.cols]; self.rows];
        for (r, c, v) in &self.entries {
            d[*r][*c] = v.clone();
        }
        d
    }

    /// Rows with denominators cleared, as sorted `(col, value)` lists.
    fn integer_rows(&self) -> Vec<Vec<(usize, BigInt)>> {
        let mut rows: Vec<Vec<(usize, &BigRational)>> = vec![Vec::new(); self.rows];
        for (r, c, v) in &self.entries {
            rows[*r].push((*c, v));
        }
        rows.into_iter()
            .map(|row| {
                let l = row.iter().fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
                row.into_iter()
                    .map(|(c, v)| (c, v.numer() * (&l / v.denom())))
                    .collect()
            })
            .collect()
    }
}

type IntRow = Vec<(usize, BigInt)>;

fn make_primitive(row: &mut IntRow) {
    let g = row.iter().fold(BigInt::zero(), |acc, (_, v)| acc.gcd(v));
    if !g.is_zero() && !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v /= &g;
        }
    }
    if row.first().is_some_and(|(_, v)| v.is_negative()) {
        for (_, v) in row.iter_mut() {
            *v = -&*v;
        }
    }
}

/// `a·x − b·y` for sorted sparse rows.
fn combine(a: &BigInt, x: &IntRow, b: &BigInt, y: &IntRow) -> IntRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push((x[i].0, a * &x[i].1));
            i += 1;
        } else if take_y {
            out.push((y[j].0, -(b * &y[j].1)));
            j += 1;
        } else {
            let v = a * &x[i].1 - b * &y[j].1;
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Exact rank over `Q` by fraction-free elimination.
///
/// Rows are inserted sparsest first into an echelon basis keyed by leading
/// column; each reduction step is `a·r − b·p` followed by removal of the
/// row content, so entries stay integral without fractions.
pub fn rank(m: &SparseMat) -> usize {
    let m = if m.rows > m.cols { m.transpose() } else { m.clone() };
    let mut rows = m.integer_rows();
    rows.retain(|r| !r.is_empty());
    rows.sort_by_key(|r| (r.len(), r[0].0));
    let mut pivots: HashMap<usize, IntRow> = HashMap::new();
    for mut row in rows {
        make_primitive(&mut row);
        while let Some(&(lead, _)) = row.first() {
            match pivots.get(&lead) {
                Some(p) => {
                    let a = &p[0].1;
                    let b = &row[0].1;
                    let g = a.gcd(b);
                    row = combine(&(a / &g), &row, &(b / &g), p);
                    make_primitive(&mut row);
                }
                None => {
                    pivots.insert(lead, row);
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// Rank modulo a prime `p < 2^32`; a test-time cross-check, not a source of truth.
pub fn rank_mod_prime(m: &SparseMat, p: u64) -> usize {
    assert!(p > 2 && p < (1 << 32), "prime must fit in 32 bits");
    let pb = BigInt::from(p);
    let reduce = |v: &BigRational| -> Option<u64> {
        let n = v.numer().mod_floor(&pb).to_u64().unwrap();
        let d = v.denom().mod_floor(&pb).to_u64().unwrap();
        if d == 0 {
            None
        } else {
            Some(n * pow_mod(d, p - 2, p) % p)
        }
    };
    let mut dense = vec![vec![0u64; m.cols]; m.rows];
    for (r, c, v) in &m.entries {
        dense[*r][*c] = reduce(v).expect("denominator divisible by the test prime");
    }
    let mut rank = 0;
    for col in 0..m.cols {
        let Some(piv) = (rank..m.rows).find(|&r| dense[r][col] != 0) else { continue };
        dense.swap(rank, piv);
        let inv = pow_mod(dense[rank][col], p - 2, p);
        for r in 0..m.rows {
            if r != rank && dense[r][col] != 0 {
                let f = dense[r][col] * inv % p;
                for c in col..m.cols {
                    let sub = f * dense[rank][c] % p;
                    dense[r][c] = (dense[r][c] + p - sub) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// `dim ker(d_out) − rank(d_in)` for `C_{k+1} --d_in--> C_k --d_out--> C_{k-1}`.
pub fn homology_dim(d_in: &SparseMat, d_out: &SparseMat) -> Result<usize> {
    if d_in.rows != d_out.cols {
        return Err(Error::Contract(format!(
            "maps are not composable: d_in lands in dimension {}, d_out starts from {}",
            d_in.rows, d_out.cols
        )));
    }
    if !d_out.mul(d_in)?.is_zero() {
        return Err(Error::Contract("d_out ∘ d_in ≠ 0".into()));
    }
    let kernel = d_out.cols - rank(d_out);
    let image = rank(d_in);
    Ok(kernel - image)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    /// Naive Gaussian elimination over `Q` on a dense copy.
    fn naive_rank(m: &SparseMat) -> usize {
        let mut d = m.to_dense();
        let (rows, cols) = (m.rows(), m.cols());
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..rows).find(|&i| !d[i][c].is_zero()) else { continue };
            d.swap(r, p);
            for i in 0..rows {
                if i != r && !d[i][c].is_zero() {
                    let f = &d[i][c] / &d[r][c];
                    for j in 0..cols {
                        let s = &f * &d[r][j];
                        d[i][j] -= s;
                    }
                }
            }
            r += 1;
        }
        r
    }

    fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, lo: i64, hi: i64) -> SparseMat {
        let dense: Vec<Vec<i64>> =
            (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(lo..=hi)).collect()).collect();
        SparseMat::from_dense_i64(&dense)
    }

    #[test]
    fn trivial_ranks() {
        assert_eq!(rank(&SparseMat::zeros(4, 7)), 0);
        assert_eq!(rank(&SparseMat::identity(5)), 5);
        assert_eq!(rank(&SparseMat::zeros(0, 0)), 0);
    }

    #[test]
    fn random_20x20_matches_naive() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..10 {
            let m = random_matrix(&mut rng, 20, 20, -2, 2);
            assert_eq!(rank(&m), naive_rank(&m));
        }
        // low rank products
        for _ in 0..5 {
            let a = random_matrix(&mut rng, 20, 6, -2, 2);
            let b = random_matrix(&mut rng, 6, 20, -2, 2);
            let m = a.mul(&b).unwrap();
            assert_eq!(rank(&m), naive_rank(&m));
            assert!(rank(&m) <= 6);
        }
    }

    #[test]
    fn modular_rank_cross_check() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        let primes = [1_073_741_789u64, 1_000_000_007];
        for _ in 0..5 {
            let a = random_matrix(&mut rng, 15, 9, -3, 3);
            let b = random_matrix(&mut rng, 9, 25, -3, 3);
            let m = a.mul(&b).unwrap();
            let r = rank(&m);
            for p in primes {
                assert_eq!(rank_mod_prime(&m, p), r);
            }
        }
    }

    #[test]
    fn rational_entries() {
        let half = BigRational::new(1.into(), 2.into());
        let m = SparseMat::from_triplets(
            2,
            2,
            vec![
                (0, 0, half.clone()),
                (0, 1, BigRational::one()),
                (1, 0, BigRational::one()),
                (1, 1, BigRational::from_integer(2.into())),
            ],
        )
        .unwrap();
        assert_eq!(rank(&m), 1);
    }

    #[test]
    fn homology_examples() {
        let z3 = SparseMat::zeros(3, 3);
        assert_eq!(homology_dim(&z3, &z3).unwrap(), 3);
        assert_eq!(homology_dim(&SparseMat::zeros(3, 2), &SparseMat::identity(3)).unwrap(), 0);
        let bad = homology_dim(&SparseMat::identity(2), &SparseMat::identity(2));
        assert!(matches!(bad, Err(Error::Contract(_))));
        assert!(homology_dim(&SparseMat::zeros(3, 2), &SparseMat::zeros(1, 4)).is_err());
    }

    #[test]
    fn random_chain_pairs() {
        // d_in lands in the first k coordinates and d_out only reads the
        // remaining ones, so d_out ∘ d_in = 0 by construction.
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        for _ in 0..8 {
            let n = 10;
            let k = rng.gen_range(1..5);
            let mut tin = Vec::new();
            for i in 0..k {
                for j in 0..8 {
                    tin.push((i, j, rng.gen_range(-2..=2)));
                }
            }
            let mut tout = Vec::new();
            for i in 0..6 {
                for j in k..n {
                    tout.push((i, j, rng.gen_range(-2..=2)));
                }
            }
            let d_in = SparseMat::from_int_triplets(n, 8, tin);
            let d_out = SparseMat::from_int_triplets(6, n, tout);
            let expected = (n - naive_rank(&d_out)) - naive_rank(&d_in);
            assert_eq!(homology_dim(&d_in, &d_out).unwrap(), expected);
        }
    }

    proptest! {
        #[test]
        fn rank_equals_transpose_rank(dense in prop::collection::vec(prop::collection::vec(-2i64..=2, 7), 1..9)) {
            let m = SparseMat::from_dense_i64(&dense);
            prop_assert_eq!(rank(&m), rank(&m.transpose()));
        }

        #[test]
        fn rank_invariant_under_permutation(
            dense in prop::collection::vec(prop::collection::vec(-3i64..=3, 6), 6),
            seed in any::<u64>(),
        ) {
            use rand::seq::SliceRandom;
            let m = SparseMat::from_dense_i64(&dense);
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let mut rp: Vec<usize> = (0..6).collect();
            let mut cp: Vec<usize> = (0..6).collect();
            rp.shuffle(&mut rng);
            cp.shuffle(&mut rng);
            prop_assert_eq!(rank(&m), rank(&m.permuted(&rp, &cp)));
        }
    }
}

//! Exact and modular rank of integer matrices.
//!
//! Both solvers insert rows one at a time into an echelon basis keyed by
//! leading column. The exact solver works over `Z` fraction-free, keeping
//! every stored row primitive; the modular solver works in `F_p` for a
//! 62-bit prime `p`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// A sparse integer row: `(column, nonzero value)` sorted by column.
pub type SparseRow = Vec<(usize, BigInt)>;

/// Integer matrix stored by sparse rows.
#[derive(Debug, Clone, Default)]
pub struct SparseMatrix {
    pub ncols: usize,
    pub rows: Vec<SparseRow>,
}

impl SparseMatrix {
    pub fn new(ncols: usize) -> Self {
        SparseMatrix { ncols, rows: Vec::new() }
    }

    pub fn from_dense(rows: &[Vec<BigInt>], ncols: usize) -> Self {
        let rows = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), ncols, "ragged matrix");
                r.iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(c, x)| (c, x.clone()))
                    .collect()
            })
            .collect();
        SparseMatrix { ncols, rows }
    }

    /// Appends a row given as unsorted `(column, value)` pairs; duplicates are summed.
    pub fn push_row(&mut self, mut entries: Vec<(usize, BigInt)>) {
        entries.sort_by_key(|(c, _)| *c);
        let mut row: SparseRow = Vec::with_capacity(entries.len());
        for (c, x) in entries {
            assert!(c < self.ncols, "column out of range");
            match row.last_mut() {
                Some((lc, lx)) if *lc == c => *lx += x,
                _ => row.push((c, x)),
            }
        }
        row.retain(|(_, x)| !x.is_zero());
        if !row.is_empty() {
            self.rows.push(row);
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }
}

/// How ranks are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RankMethod {
    /// Fraction-free elimination over the integers.
    Exact,
    /// Rank modulo two random 62-bit primes; accepted only if they agree,
    /// otherwise the exact solver decides.
    Modular { seed: u64 },
}

impl Default for RankMethod {
    fn default() -> Self {
        RankMethod::Exact
    }
}

/// Rank of a dense integer matrix over `Q`.
pub fn rank_exact(rows: &[Vec<BigInt>], ncols: usize) -> usize {
    rank_exact_sparse(&SparseMatrix::from_dense(rows, ncols))
}

pub fn rank(m: &SparseMatrix, method: RankMethod) -> usize {
    match method {
        RankMethod::Exact => rank_exact_sparse(m),
        RankMethod::Modular { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = random_prime_62(&mut rng);
            let mut q = random_prime_62(&mut rng);
            while q == p {
                q = random_prime_62(&mut rng);
            }
            let (rp, rq) = (rank_mod_p(m, p), rank_mod_p(m, q));
            if rp == rq {
                rp
            } else {
                rank_exact_sparse(m)
            }
        }
    }
}

fn content(row: &[(usize, BigInt)]) -> BigInt {
    let mut g = BigInt::zero();
    for (_, x) in row {
        g = g.gcd(x);
        if g == BigInt::from(1) {
            break;
        }
    }
    g
}

fn make_primitive(row: &mut SparseRow) {
    let mut g = content(row);
    if row.first().is_some_and(|(_, x)| x.is_negative()) {
        g = -g;
    }
    if g != BigInt::from(1) && !g.is_zero() {
        for (_, x) in row.iter_mut() {
            *x = &*x / &g;
        }
    }
}

/// `a * r - b * p` for sparse rows.
fn combine(r: &SparseRow, a: &BigInt, p: &SparseRow, b: &BigInt) -> SparseRow {
    let mut out = Vec::with_capacity(r.len() + p.len());
    let (mut i, mut j) = (0, 0);
    while i < r.len() || j < p.len() {
        let ci = r.get(i).map_or(usize::MAX, |e| e.0);
        let cj = p.get(j).map_or(usize::MAX, |e| e.0);
        let (c, x) = if ci < cj {
            i += 1;
            (ci, a * &r[i - 1].1)
        } else if cj < ci {
            j += 1;
            (cj, -(b * &p[j - 1].1))
        } else {
            i += 1;
            j += 1;
            (ci, a * &r[i - 1].1 - b * &p[j - 1].1)
        };
        if !x.is_zero() {
            out.push((c, x));
        }
    }
    out
}

/// Exact rank over `Q` by fraction-free insertion into an echelon basis.
pub fn rank_exact_sparse(m: &SparseMatrix) -> usize {
    let mut pivots: Vec<Option<SparseRow>> = vec![None; m.ncols];
    let mut rank = 0;
    for row in &m.rows {
        let mut r = row.clone();
        make_primitive(&mut r);
        while let Some((lead, _)) = r.first() {
            let lead = *lead;
            match &pivots[lead] {
                None => {
                    pivots[lead] = Some(r);
                    rank += 1;
                    break;
                }
                Some(p) => {
                    let (rl, pl) = (&r[0].1, &p[0].1);
                    let g = rl.gcd(pl);
                    let (a, b) = (pl / &g, rl / &g);
                    r = combine(&r, &a, p, &b);
                    make_primitive(&mut r);
                }
            }
        }
    }
    rank
}

#[inline]
fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn to_residue(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits in u64")
}

/// Rank of `m` over `F_p`; `p` must be prime.
pub fn rank_mod_p(m: &SparseMatrix, p: u64) -> usize {
    let mut pivots: Vec<Option<Vec<(usize, u64)>>> = vec![None; m.ncols];
    let mut rank = 0;
    let mut dense = vec![0u64; m.ncols];
    for row in &m.rows {
        let Some(&(first, _)) = row.first() else { continue };
        for (c, x) in row {
            dense[*c] = to_residue(x, p);
        }
        for c in first..m.ncols {
            let lead = dense[c];
            if lead == 0 {
                continue;
            }
            match &pivots[c] {
                None => {
                    let inv = inv_mod(lead, p);
                    let stored = (c..m.ncols)
                        .filter(|&k| dense[k] != 0)
                        .map(|k| (k, mul_mod(dense[k], inv, p)))
                        .collect();
                    pivots[c] = Some(stored);
                    rank += 1;
                    break;
                }
                Some(piv) => {
                    for &(k, v) in piv {
                        let t = mul_mod(lead, v, p);
                        dense[k] = if dense[k] >= t { dense[k] - t } else { dense[k] + p - t };
                    }
                }
            }
        }
        dense[first..].fill(0);
    }
    rank
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % small == 0 {
            return n == small;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A uniformly drawn prime in `[2^61, 2^62)`.
pub fn random_prime_62<R: Rng>(rng: &mut R) -> u64 {
    loop {
        let candidate = rng.random_range((1u64 << 61)..(1u64 << 62)) | 1;
        if is_prime_u64(candidate) {
            return candidate;
        }
    }
}

//! Homogeneous polynomials over `Q` and restriction to lattice hyperplanes.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::lattice::WeightVector;

pub type Exponent = Vec<u32>;

/// All exponent vectors of total degree `deg` in `nvars` variables, in
/// lexicographically decreasing order (`x0^deg` first).
pub fn monomials(nvars: usize, deg: u32) -> Vec<Exponent> {
    fn rec(nvars: usize, deg: u32, prefix: &mut Exponent, out: &mut Vec<Exponent>) {
        if prefix.len() + 1 == nvars {
            prefix.push(deg);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=deg).rev() {
            prefix.push(e);
            rec(nvars, deg - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if deg == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(nvars, deg, &mut Vec::with_capacity(nvars), &mut out);
    out
}

/// `C(n + k - 1, k)`: number of monomials of degree `k` in `n` variables.
pub fn monomial_count(nvars: usize, deg: u32) -> usize {
    if nvars == 0 {
        return usize::from(deg == 0);
    }
    binomial(nvars as u64 + deg as u64 - 1, deg as u64) as usize
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// A polynomial in `nvars` variables with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Exponent, BigRational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponent, i64)>,
    {
        let mut p = Polynomial::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, BigRational::from_integer(BigInt::from(c)));
        }
        p
    }

    /// The linear form `sum_i w_i x_i`.
    pub fn linear_form(w: &WeightVector) -> Self {
        let n = w.len();
        Polynomial::from_terms(
            n,
            w.coords().iter().enumerate().map(|(i, &c)| {
                let mut e = vec![0; n];
                e[i] = 1;
                (e, c)
            }),
        )
    }

    pub fn add_term(&mut self, e: Exponent, c: BigRational) {
        assert_eq!(e.len(), self.nvars, "exponent length mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &BigRational)> {
        self.terms.iter()
    }

    /// The degree if all terms share it; `None` for the zero polynomial or
    /// a non-homogeneous one.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Polynomial::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

/// Integer matrix of the substitution `x = sum_j y_j k_j` on degree-`deg`
/// monomials: column `c` holds the coefficients (indexed by
/// `monomials(kernel.len(), deg)`) of the image of `monomials(m, deg)[c]`.
pub fn substitution_matrix(m: usize, deg: u32, kernel: &[WeightVector]) -> Vec<Vec<BigInt>> {
    let r = kernel.len();
    let source = monomials(m, deg);
    let target = monomials(r, deg);
    let mut tables: Vec<HashMap<Exponent, usize>> = Vec::with_capacity(deg as usize + 1);
    for d in 0..=deg {
        tables.push(monomials(r, d).into_iter().enumerate().map(|(i, e)| (e, i)).collect());
    }
    let basis: Vec<Vec<Exponent>> = (0..=deg).map(|d| monomials(r, d)).collect();

    // Image of x_i: a linear form in the y's.
    let images: Vec<Vec<BigInt>> = (0..m)
        .map(|i| kernel.iter().map(|k| BigInt::from(k.coords()[i])).collect())
        .collect();

    let mul = |a: &[BigInt], da: u32, b: &[BigInt], db: u32| -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); basis[(da + db) as usize].len()];
        for (ia, ca) in a.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (ib, cb) in b.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                let e: Exponent = basis[da as usize][ia]
                    .iter()
                    .zip(&basis[db as usize][ib])
                    .map(|(x, y)| x + y)
                    .collect();
                out[tables[(da + db) as usize][&e]] += ca * cb;
            }
        }
        out
    };

    // powers[i][e] = (image of x_i)^e
    let powers: Vec<Vec<Vec<BigInt>>> = images
        .iter()
        .map(|lin| {
            let mut pw = vec![vec![BigInt::one()]];
            for e in 1..=deg {
                let next = mul(&pw[(e - 1) as usize], e - 1, lin, 1);
                pw.push(next);
            }
            pw
        })
        .collect();

    let mut matrix = vec![vec![BigInt::zero(); source.len()]; target.len()];
    for (col, expo) in source.iter().enumerate() {
        let mut acc = vec![BigInt::one()];
        let mut acc_deg = 0;
        for (i, &e) in expo.iter().enumerate() {
            if e == 0 {
                continue;
            }
            acc = mul(&acc, acc_deg, &powers[i][e as usize], e);
            acc_deg += e;
        }
        if target.is_empty() {
            continue;
        }
        for (row, c) in acc.into_iter().enumerate() {
            matrix[row][col] = c;
        }
    }
    matrix
}

/// Substitutes `x = sum_j y_j k_j` into a homogeneous polynomial.
pub fn restrict_to_kernel(p: &Polynomial, kernel: &[WeightVector]) -> Polynomial {
    let mut out = Polynomial::zero(kernel.len());
    let mut by_degree: BTreeMap<u32, Vec<(&Exponent, &BigRational)>> = BTreeMap::new();
    for (e, c) in p.terms() {
        by_degree.entry(e.iter().sum()).or_default().push((e, c));
    }
    for (deg, terms) in by_degree {
        let source: HashMap<Exponent, usize> = monomials(p.nvars(), deg)
            .into_iter()
            .enumerate()
            .map(|(i, e)| (e, i))
            .collect();
        let target = monomials(kernel.len(), deg);
        let matrix = substitution_matrix(p.nvars(), deg, kernel);
        for (row, expo) in target.into_iter().enumerate() {
            let mut coeff = BigRational::zero();
            for (e, c) in &terms {
                let entry = &matrix[row][source[*e]];
                if !entry.is_zero() {
                    coeff += *c * BigRational::from_integer(entry.clone());
                }
            }
            out.add_term(expo, coeff);
        }
    }
    out
}

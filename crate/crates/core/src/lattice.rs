//! Integer weight vectors and their classes modulo sign.
//!
//! Edge labels and quaternionic weights live in `Z^m / ±1`. A
//! [`WeightVector`] is an honest element of `Z^m` (a lift); an
//! [`UnsignedWeight`] is the class `{w, -w}` stored through its canonical
//! representative, the lift whose first nonzero coordinate is positive.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg;
use crate::poly::{self, Polynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("the zero vector is not a valid weight")]
    ZeroWeight,
    #[error("weights of different lengths ({0} and {1})")]
    LengthMismatch(usize, usize),
}

/// A lift of a weight: a vector of `m` integers.
///
/// Arithmetic is checked; coordinates of loaded files are bounded so that the
/// short linear combinations formed by the algorithms never leave `i64`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightVector(Vec<i64>);

impl WeightVector {
    pub fn new(coords: Vec<i64>) -> Self {
        WeightVector(coords)
    }

    pub fn zeros(len: usize) -> Self {
        WeightVector(vec![0; len])
    }

    /// The `i`-th standard basis vector of `Z^len`.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = vec![0; len];
        v[i] = 1;
        WeightVector(v)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn scale(&self, k: i64) -> Self {
        WeightVector(
            self.0
                .iter()
                .map(|&x| x.checked_mul(k).expect("weight arithmetic overflow"))
                .collect(),
        )
    }

    /// `self + k * other`.
    pub fn add_scaled(&self, other: &WeightVector, k: i64) -> Self {
        assert_eq!(self.len(), other.len(), "weight length mismatch");
        WeightVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&x, &y)| {
                    y.checked_mul(k)
                        .and_then(|t| x.checked_add(t))
                        .expect("weight arithmetic overflow")
                })
                .collect(),
        )
    }

    /// Returns `c` with `self == c * base`, if such an integer exists.
    pub fn integer_multiple_of(&self, base: &WeightVector) -> Option<i64> {
        assert_eq!(self.len(), base.len(), "weight length mismatch");
        let pivot = base.0.iter().position(|&b| b != 0)?;
        let (num, den) = (self.0[pivot], base.0[pivot]);
        if num % den != 0 {
            return None;
        }
        let c = num / den;
        (*self == base.scale(c)).then_some(c)
    }

    /// True iff `self` and `other` are linearly dependent over `Q`.
    pub fn is_proportional_to(&self, other: &WeightVector) -> bool {
        assert_eq!(self.len(), other.len(), "weight length mismatch");
        let (a, b) = (&self.0, &other.0);
        for i in 0..a.len() {
            for j in (i + 1)..a.len() {
                let minor = a[i] as i128 * b[j] as i128 - a[j] as i128 * b[i] as i128;
                if minor != 0 {
                    return false;
                }
            }
        }
        true
    }

    pub(crate) fn to_bigint_row(&self) -> Vec<BigInt> {
        self.0.iter().map(|&x| BigInt::from(x)).collect()
    }
}

impl fmt::Debug for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<i64>> for WeightVector {
    fn from(v: Vec<i64>) -> Self {
        WeightVector(v)
    }
}

impl std::ops::Neg for &WeightVector {
    type Output = WeightVector;
    fn neg(self) -> WeightVector {
        self.scale(-1)
    }
}

impl std::ops::Neg for WeightVector {
    type Output = WeightVector;
    fn neg(self) -> WeightVector {
        self.scale(-1)
    }
}

impl std::ops::Add for &WeightVector {
    type Output = WeightVector;
    fn add(self, rhs: &WeightVector) -> WeightVector {
        self.add_scaled(rhs, 1)
    }
}

impl std::ops::Sub for &WeightVector {
    type Output = WeightVector;
    fn sub(self, rhs: &WeightVector) -> WeightVector {
        self.add_scaled(rhs, -1)
    }
}

/// A nonzero weight modulo sign.
///
/// Ordering and equality are those of the canonical representative, so the
/// derived `Ord` is the lexicographic order on canonical reps.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UnsignedWeight {
    rep: WeightVector,
}

impl UnsignedWeight {
    pub fn new(w: WeightVector) -> Result<Self, LatticeError> {
        canonicalize(w)
    }

    /// Canonical representative: first nonzero coordinate positive.
    pub fn rep(&self) -> &WeightVector {
        &self.rep
    }

    pub fn len(&self) -> usize {
        self.rep.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rep.is_empty()
    }

    /// Both lifts, `rep` first.
    pub fn lifts(&self) -> [WeightVector; 2] {
        [self.rep.clone(), -&self.rep]
    }

    /// True iff `w` is one of the two lifts of this class.
    pub fn is_lifted_by(&self, w: &WeightVector) -> bool {
        *w == self.rep || w.scale(-1) == self.rep
    }

    pub fn is_proportional_to(&self, other: &UnsignedWeight) -> bool {
        self.rep.is_proportional_to(&other.rep)
    }
}

impl fmt::Debug for UnsignedWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "±{}", self.rep)
    }
}

impl fmt::Display for UnsignedWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "±{}", self.rep)
    }
}

impl Serialize for UnsignedWeight {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.rep.serialize(s)
    }
}

/// Passes to the class of `w` in `Z^m / ±1`.
pub fn canonicalize(w: WeightVector) -> Result<UnsignedWeight, LatticeError> {
    match w.0.iter().find(|&&x| x != 0) {
        None => Err(LatticeError::ZeroWeight),
        Some(&first) if first < 0 => Ok(UnsignedWeight { rep: -w }),
        Some(_) => Ok(UnsignedWeight { rep: w }),
    }
}

/// Dimension of the rational span of the given weights.
pub fn rank_over_q<'a, I>(ws: I) -> usize
where
    I: IntoIterator<Item = &'a WeightVector>,
{
    let rows: Vec<Vec<BigInt>> = ws.into_iter().map(|w| w.to_bigint_row()).collect();
    match rows.first() {
        None => 0,
        Some(first) => linalg::rank_exact(&rows, first.len()),
    }
}

/// Sign and integer coefficient witnessing `sign * y = x + coefficient * a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Congruence {
    pub sign: i64,
    pub coefficient: i64,
}

/// Solves `s * y = x + c * a` with `s = ±1` and `c` an integer, for fixed
/// lifts `x`, `y`, `a`. The sign `+1` is tried first.
pub fn congruence(x: &WeightVector, y: &WeightVector, a: &WeightVector) -> Option<Congruence> {
    assert!(!a.is_zero(), "congruence modulo the zero weight");
    [1, -1].into_iter().find_map(|sign| {
        let diff = y.scale(sign).add_scaled(x, -1);
        diff.integer_multiple_of(a)
            .map(|coefficient| Congruence { sign, coefficient })
    })
}

/// [`congruence`] on the canonical representatives of three classes.
pub fn unsigned_congruence(
    x: &UnsignedWeight,
    y: &UnsignedWeight,
    a: &UnsignedWeight,
) -> Option<Congruence> {
    congruence(x.rep(), y.rep(), a.rep())
}

/// A `Z`-basis of the integer kernel `{y in Z^m : <a, y> = 0}`.
///
/// Column-style Hermite reduction of the `1 x m` matrix `a`: unimodular
/// column operations bring `a` to `(0, .., g, .., 0)` and the transformed
/// unit vectors off the pivot span the kernel.
pub fn kernel_basis(a: &WeightVector) -> Vec<WeightVector> {
    let m = a.len();
    let mut row: Vec<i64> = a.coords().to_vec();
    let mut cols: Vec<WeightVector> = (0..m).map(|i| WeightVector::unit(m, i)).collect();
    loop {
        let pivot = (0..m)
            .filter(|&j| row[j] != 0)
            .min_by_key(|&j| (row[j].unsigned_abs(), j));
        let Some(p) = pivot else {
            // a == 0: the kernel is everything.
            return cols;
        };
        let mut changed = false;
        for j in 0..m {
            if j == p || row[j] == 0 {
                continue;
            }
            let q = row[j].div_euclid(row[p]);
            row[j] -= q * row[p];
            cols[j] = cols[j].add_scaled(&cols[p], -q);
            changed = true;
        }
        if !changed {
            return (0..m).filter(|&j| j != p).map(|j| cols[j].clone()).collect();
        }
    }
}

/// True iff the homogeneous polynomial `p` lies in the ideal generated by the
/// linear form `a` (equivalently, `p` vanishes on the hyperplane `a = 0`).
pub fn divides_linear(a: &UnsignedWeight, p: &Polynomial) -> bool {
    assert_eq!(a.len(), p.nvars(), "polynomial and weight live in different ranks");
    if p.is_zero() {
        return true;
    }
    let kernel = kernel_basis(a.rep());
    poly::restrict_to_kernel(p, &kernel).is_zero()
}

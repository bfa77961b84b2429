//! Fraction-free integer linear algebra shared by the hull and cone kernels.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

pub(crate) trait Int:
    Clone + Eq + Ord + Hash + Debug + Integer + Signed + Send + Sync + 'static
{
    fn from_big(b: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

impl Int for i128 {
    fn from_big(b: &BigInt) -> Option<Self> {
        b.to_i128()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Int for BigInt {
    fn from_big(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Whether hull-style computations on `dim`-dimensional integer points with
/// entries bounded by `max_abs` stay safely inside `i128`.
///
/// Facet normals are cofactors of a `(dim-1) x dim` difference matrix, bounded
/// by Hadamard; the pencil update multiplies a slack by a normal.
pub(crate) fn fits_i128(max_abs: &BigInt, dim: usize) -> bool {
    let b = max_abs.bits() as f64 + 1.0;
    let d = dim.max(1) as f64;
    let normal_bits = d * (0.5 * d.log2() + 1.0 + b);
    2.0 * normal_bits + d.log2() + b + 4.0 < 124.0
}

pub(crate) fn convert<T: Int>(pts: &[Vec<BigInt>]) -> Vec<Vec<T>> {
    pts.iter()
        .map(|p| p.iter().map(|x| T::from_big(x).expect("bound checked")).collect())
        .collect()
}

pub(crate) fn dot<T: Int>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub(crate) fn sub<T: Int>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

/// Divides `v` (and `extra`, which must share the divisor) by the gcd of `v`.
pub(crate) fn make_primitive<T: Int>(v: &mut [T], extra: Option<&mut T>) {
    let g = v.iter().fold(T::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g.is_one() {
        return;
    }
    for x in v.iter_mut() {
        *x = x.clone() / g.clone();
    }
    if let Some(e) = extra {
        debug_assert!((e.clone() % g.clone()).is_zero());
        *e = e.clone() / g;
    }
}

/// Row echelon basis built incrementally with fraction-free elimination.
#[derive(Debug, Clone)]
pub(crate) struct Echelon<T> {
    rows: Vec<(usize, Vec<T>)>,
}

impl<T: Int> Echelon<T> {
    pub fn new() -> Self {
        Echelon { rows: Vec::new() }
    }

    pub fn reduce(&self, mut v: Vec<T>) -> Vec<T> {
        for (pivot, row) in &self.rows {
            if v[*pivot].is_zero() {
                continue;
            }
            let a = row[*pivot].clone();
            let b = v[*pivot].clone();
            for (x, r) in v.iter_mut().zip(row) {
                *x = a.clone() * x.clone() - b.clone() * r.clone();
            }
            make_primitive(&mut v, None);
        }
        v
    }

    /// Adds `v` if it is independent of the current rows.
    pub fn insert(&mut self, v: Vec<T>) -> bool {
        let v = self.reduce(v);
        match v.iter().position(|x| !x.is_zero()) {
            Some(p) => {
                self.rows.push((p, v));
                true
            }
            None => false,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|(p, _)| *p).collect()
    }
}

pub(crate) fn rank<T: Int>(rows: &[Vec<T>]) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r.clone());
    }
    e.rank()
}

/// Bareiss determinant of a square matrix.
pub(crate) fn det<T: Int>(mut m: Vec<Vec<T>>) -> T {
    let n = m.len();
    if n == 0 {
        return T::one();
    }
    let mut sign = T::one();
    let mut prev = T::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return T::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[i][j].clone() * m[k][k].clone() - m[i][k].clone() * m[k][j].clone();
                m[i][j] = v / prev.clone();
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Normal of the hyperplane spanned by `d-1` vectors in `R^d`, by cofactors.
pub(crate) fn cofactor_normal<T: Int>(vectors: &[Vec<T>]) -> Vec<T> {
    let d = vectors.len() + 1;
    (0..d)
        .map(|j| {
            let minor: Vec<Vec<T>> = vectors
                .iter()
                .map(|v| {
                    v.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != j)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect();
            let m = det(minor);
            if j % 2 == 0 {
                m
            } else {
                -m
            }
        })
        .collect()
}

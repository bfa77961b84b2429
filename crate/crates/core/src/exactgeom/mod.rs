//! Exact rational convex geometry.
//!
//! Everything here works over exact rationals at the API boundary. Internally
//! the hull and cone routines scale inputs to integers and run fraction-free,
//! picking `i128` when a Hadamard-style bound proves it cannot overflow and
//! falling back to `BigInt` otherwise.

mod cone;
mod hull;
pub(crate) mod int;
mod lattice;
mod slice;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use cone::{cone_member, normal_cone, ConeMembership, PolyCone};
pub use hull::{convex_hull, f_vector, minkowski_sum, minkowski_sum_all, Facet, Polytope};
pub use lattice::face_lattice;
pub use slice::{
    default_clip_box, polygon_area, slice_fan, AffinePlane, ClipBox, LabeledCone, LabeledPolygon,
    Point2,
};

/// Exact rational scalar used throughout the crate.
pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("empty point set")]
    Empty,
    #[error("index {0} is not a vertex")]
    NotAVertex(usize),
    #[error("operation requires a full-dimensional polytope (dim {intrinsic} in R^{ambient})")]
    NotFullDimensional { intrinsic: usize, ambient: usize },
    #[error("cone is not pointed or not full-dimensional")]
    DegenerateCone,
    #[error("affine plane is not injective")]
    DegeneratePlane,
}

/// A point or direction with exact rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalVec(pub Vec<Rational>);

impl RationalVec {
    pub fn new(coords: Vec<Rational>) -> Self {
        RationalVec(coords)
    }

    pub fn from_ints<I: IntoIterator<Item = i64>>(coords: I) -> Self {
        RationalVec(coords.into_iter().map(int).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        RationalVec(vec![Rational::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn dot(&self, other: &RationalVec) -> Rational {
        self.0
            .iter()
            .zip(&other.0)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn dot_int(&self, other: &[BigInt]) -> Rational {
        self.0.iter().zip(other).fold(Rational::zero(), |acc, (a, b)| {
            acc + a * Rational::from_integer(b.clone())
        })
    }

    pub fn add(&self, other: &RationalVec) -> RationalVec {
        RationalVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &RationalVec) -> RationalVec {
        RationalVec(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> RationalVec {
        RationalVec(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, s: &Rational) -> RationalVec {
        RationalVec(self.0.iter().map(|a| a * s).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Least common multiple of the coordinate denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.0
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// The positive multiple of `self` with coprime integer entries.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let l = self.denominator_lcm();
        let scaled: Vec<BigInt> = self
            .0
            .iter()
            .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
            .collect();
        primitive(scaled)
    }

    pub fn from_bigints(v: &[BigInt]) -> Self {
        RationalVec(v.iter().cloned().map(Rational::from_integer).collect())
    }
}

impl fmt::Debug for RationalVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<Rational>> for RationalVec {
    fn from(v: Vec<Rational>) -> Self {
        RationalVec(v)
    }
}

/// Shorthand for an integral rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `num / den`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Divides by the gcd of the entries; the zero vector is returned unchanged.
pub fn primitive(v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g.is_one() {
        return v;
    }
    v.into_iter().map(|x| x / &g).collect()
}

pub(crate) fn dot_big(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

/// Exact rank of a set of rational vectors.
pub fn rank(vectors: &[RationalVec]) -> usize {
    let rows: Vec<Vec<BigInt>> = vectors.iter().map(|v| v.primitive_integer()).collect();
    int::rank(&rows)
}

pub(crate) fn sign(r: &Rational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

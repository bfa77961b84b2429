//! The tropicalized conic maps and their Newton polytopes.
//!
//! Columns are the six quadratic monomials in the fixed order of
//! [`TAXA`]: `U0², U1², U2², U0U1, U0U2, U1U2`. A configuration of two (three)
//! points gives a 2×6 (3×6) matrix whose entries, tropicalized, are
//! `X_i + X_j` for the monomial `U_i U_j`. Each Plücker coordinate is then the
//! tropical permanent of a maximal column minor: a max over bijections of
//! sums. Everything is max-plus; min-plus results follow by negating inputs.
//!
//! The two-point coordinate is printed in some sources as
//! `max(2X0 + 2Y1, 2X1 + 2X0)`; the second term is a typo for `2X1 + 2Y0`,
//! which is what the minor of columns `{0, 1}` gives and what is computed here.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactgeom::{
    convex_hull, minkowski_sum_all, normal_cone, GeomError, Polytope, Rational, RationalVec,
};

/// Taxon `t` stands for the monomial `U_a U_b` with `(a, b) = TAXA[t]`.
pub const TAXA: [(usize, usize); 6] = [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)];

pub const TAXON_NAMES: [&str; 6] = ["U0^2", "U1^2", "U2^2", "U0U1", "U0U2", "U1U2"];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TropError {
    #[error("expected {expected} points, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("malformed column subset {0:?}")]
    MalformedSubset(Vec<usize>),
    #[error("Plücker vector has wrong shape: {0}")]
    Shape(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("no unique maximizing term for minor {0:?}")]
    NotGeneric(Vec<usize>),
}

/// The fixed bijection between taxa `0..6` and quadratic monomials.
pub struct TaxaLabeling;

impl TaxaLabeling {
    pub fn monomial(taxon: usize) -> (usize, usize) {
        TAXA[taxon]
    }

    pub fn taxon(a: usize, b: usize) -> usize {
        let key = (a.min(b), a.max(b));
        TAXA.iter().position(|&m| m == key).expect("indices below 3")
    }

    /// Permutation of taxa induced by relabeling coordinates `i ↦ coord_perm[i]`.
    pub fn induced_permutation(coord_perm: [usize; 3]) -> [usize; 6] {
        let mut out = [0; 6];
        for (t, &(a, b)) in TAXA.iter().enumerate() {
            out[t] = Self::taxon(coord_perm[a], coord_perm[b]);
        }
        out
    }
}

/// A point of the tropical projective plane, stored with `X0 = 0`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TropPoint([Rational; 3]);

impl TropPoint {
    pub fn new(coords: [Rational; 3]) -> Self {
        let c0 = coords[0].clone();
        TropPoint(coords.map(|c| c - &c0))
    }

    /// Gauge form `(0, x1, x2)`.
    pub fn gauge(x1: Rational, x2: Rational) -> Self {
        TropPoint([Rational::zero(), x1, x2])
    }

    pub fn from_ints(c: [i64; 3]) -> Self {
        Self::new(c.map(crate::exactgeom::int))
    }

    pub fn coords(&self) -> &[Rational; 3] {
        &self.0
    }

    /// Tropicalized monomial `U_a U_b` evaluated here.
    pub fn monomial_value(&self, taxon: usize) -> Rational {
        let (a, b) = TAXA[taxon];
        &self.0[a] + &self.0[b]
    }

    fn translated(&self, v: &[Rational; 3]) -> TropPoint {
        TropPoint::new([&self.0[0] + &v[0], &self.0[1] + &v[1], &self.0[2] + &v[2]])
    }
}

impl fmt::Debug for TropPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

/// An ordered pair or triple of tropical points.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Config {
    points: Vec<TropPoint>,
    gauged: bool,
}

impl Config {
    pub fn new(points: Vec<TropPoint>) -> Result<Self, TropError> {
        if !(2..=3).contains(&points.len()) {
            return Err(TropError::Arity { expected: 3, found: points.len() });
        }
        let gauged = points.last().is_some_and(|p| p.0.iter().all(Zero::is_zero));
        Ok(Config { points, gauged })
    }

    /// `X = (0, x1, x2), Y = (0, y1, y2), Z = 0`.
    pub fn triple(x1: Rational, x2: Rational, y1: Rational, y2: Rational) -> Self {
        Config {
            points: vec![TropPoint::gauge(x1, x2), TropPoint::gauge(y1, y2), TropPoint::gauge(Rational::zero(), Rational::zero())],
            gauged: true,
        }
    }

    pub fn triple_ints(x1: i64, x2: i64, y1: i64, y2: i64) -> Self {
        use crate::exactgeom::int;
        Self::triple(int(x1), int(x2), int(y1), int(y2))
    }

    /// `X = (0, x1, x2), Y = 0`.
    pub fn pair(x1: Rational, x2: Rational) -> Self {
        Config {
            points: vec![TropPoint::gauge(x1, x2), TropPoint::gauge(Rational::zero(), Rational::zero())],
            gauged: true,
        }
    }

    /// Gauge-fixed configuration whose free coordinates are `w`
    /// (`(X1, X2)` or `(X1, X2, Y1, Y2)`).
    pub fn from_free_coords(w: &RationalVec) -> Result<Self, TropError> {
        let c = w.coords();
        match c.len() {
            2 => Ok(Self::pair(c[0].clone(), c[1].clone())),
            4 => Ok(Self::triple(c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone())),
            n => Err(TropError::Arity { expected: 4, found: n }),
        }
    }

    pub fn points(&self) -> &[TropPoint] {
        &self.points
    }

    pub fn arity(&self) -> usize {
        self.points.len()
    }

    pub fn is_gauged(&self) -> bool {
        self.gauged
    }

    /// Translates every point by minus the last one, so the last sits at the origin.
    pub fn gauge_fixed(&self) -> Config {
        let last = self.points.last().expect("nonempty").0.clone();
        let neg = last.map(|c| -c);
        Config { points: self.points.iter().map(|p| p.translated(&neg)).collect(), gauged: true }
    }

    /// Free coordinates after gauge fixing.
    pub fn free_coords(&self) -> RationalVec {
        let g = self.gauge_fixed();
        let n = g.points.len() - 1;
        RationalVec::new(g.points[..n].iter().flat_map(|p| [p.0[1].clone(), p.0[2].clone()]).collect())
    }

    /// Adds the same vector to all points.
    pub fn translate(&self, v: &[Rational; 3]) -> Config {
        let points: Vec<TropPoint> = self.points.iter().map(|p| p.translated(v)).collect();
        Config::new(points).expect("same arity")
    }

    /// Reorders points (`out[r] = points[perm[r]]`) and relabels coordinates
    /// (new coordinate `coord_perm[i]` takes old coordinate `i`).
    pub fn act(&self, point_perm: &[usize], coord_perm: [usize; 3]) -> Config {
        let points = point_perm
            .iter()
            .map(|&r| {
                let old = &self.points[r].0;
                let mut c = [Rational::zero(), Rational::zero(), Rational::zero()];
                for i in 0..3 {
                    c[coord_perm[i]] = old[i].clone();
                }
                TropPoint::new(c)
            })
            .collect();
        Config::new(points).expect("same arity")
    }
}

/// Sorted `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0..n).combinations(k).collect()
}

/// Exact vector indexed by the `k`-subsets of a taxa set, compared modulo the
/// span of the "contains taxon `i`" indicator vectors.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TropPlucker {
    k: usize,
    taxa: Vec<usize>,
    entries: BTreeMap<Vec<usize>, Rational>,
}

impl TropPlucker {
    pub fn new(
        k: usize,
        taxa: Vec<usize>,
        entries: BTreeMap<Vec<usize>, Rational>,
    ) -> Result<Self, TropError> {
        let expected: Vec<Vec<usize>> = taxa.iter().copied().combinations(k).collect();
        if entries.len() != expected.len() || expected.iter().any(|s| !entries.contains_key(s)) {
            return Err(TropError::Shape(format!(
                "need all {} {}-subsets of {:?}",
                expected.len(),
                k,
                taxa
            )));
        }
        Ok(TropPlucker { k, taxa, entries })
    }

    /// All-zero vector on taxa `0..6`.
    pub fn zero(k: usize) -> Self {
        let entries = subsets(6, k).into_iter().map(|s| (s, Rational::zero())).collect();
        TropPlucker { k, taxa: (0..6).collect(), entries }
    }

    pub fn from_fn(k: usize, taxa: Vec<usize>, f: impl Fn(&[usize]) -> Rational) -> Self {
        let entries = taxa.iter().copied().combinations(k).map(|s| {
            let v = f(&s);
            (s, v)
        });
        TropPlucker { k, entries: entries.collect(), taxa }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn taxa(&self) -> &[usize] {
        &self.taxa
    }

    /// Entry for an index set in any order.
    pub fn get(&self, idx: &[usize]) -> &Rational {
        let mut s = idx.to_vec();
        s.sort_unstable();
        &self.entries[&s]
    }

    pub fn entries(&self) -> &BTreeMap<Vec<usize>, Rational> {
        &self.entries
    }

    pub fn values(&self) -> Vec<Rational> {
        self.entries.values().cloned().collect()
    }

    /// Adds `Σ c_i ℓ_i`, `c` indexed like `taxa`.
    pub fn add_lineality(&self, c: &[Rational]) -> TropPlucker {
        let mut out = self.clone();
        for (s, v) in out.entries.iter_mut() {
            for (pos, t) in self.taxa.iter().enumerate() {
                if s.contains(t) {
                    *v += &c[pos];
                }
            }
        }
        out
    }

    /// Orthogonal projection onto the complement of the lineality space.
    pub fn canonical(&self) -> TropPlucker {
        let n = self.taxa.len();
        let mut gram = vec![vec![Rational::zero(); n]; n];
        let mut rhs = vec![Rational::zero(); n];
        for (s, v) in &self.entries {
            let members: Vec<usize> =
                (0..n).filter(|&i| s.contains(&self.taxa[i])).collect();
            for &i in &members {
                rhs[i] += v;
                for &j in &members {
                    gram[i][j] += Rational::one();
                }
            }
        }
        let c = solve(gram, rhs);
        let neg: Vec<Rational> = c.into_iter().map(|x| -x).collect();
        self.add_lineality(&neg)
    }

    /// Equality modulo lineality.
    pub fn equivalent(&self, other: &TropPlucker) -> bool {
        self.k == other.k && self.taxa == other.taxa && self.canonical() == other.canonical()
    }

    /// Every three-term tropical Plücker relation: for `|S| = k - 2` and four
    /// further indices, the max of the three pairings is attained twice.
    pub fn satisfies_three_term_relations(&self) -> bool {
        self.three_term_violations().is_empty()
    }

    /// `(S, [i, j, k, l])` for each violated relation.
    pub fn three_term_violations(&self) -> Vec<(Vec<usize>, [usize; 4])> {
        let mut bad = Vec::new();
        if self.k < 2 {
            return bad;
        }
        for s in self.taxa.iter().copied().combinations(self.k - 2) {
            let rest: Vec<usize> = self.taxa.iter().copied().filter(|t| !s.contains(t)).collect();
            for q in rest.iter().copied().combinations(4) {
                let e = |a: usize, b: usize| {
                    let mut idx = s.clone();
                    idx.push(a);
                    idx.push(b);
                    self.get(&idx).clone()
                };
                let sums = [
                    e(q[0], q[1]) + e(q[2], q[3]),
                    e(q[0], q[2]) + e(q[1], q[3]),
                    e(q[0], q[3]) + e(q[1], q[2]),
                ];
                let m = sums.iter().max().unwrap();
                if sums.iter().filter(|x| *x == m).count() < 2 {
                    bad.push((s.clone(), [q[0], q[1], q[2], q[3]]));
                }
            }
        }
        bad
    }
}

impl fmt::Debug for TropPlucker {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.entries.iter().map(|(k, v)| (k.iter().join(""), v.to_string())))
            .finish()
    }
}

/// Gaussian elimination for a nonsingular rational system.
fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Vec<Rational> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).expect("nonsingular Gram matrix");
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &a[col][col];
            let pivot_row = a[col].clone();
            for (x, p) in a[r].iter_mut().zip(&pivot_row).skip(col) {
                *x -= &f * p;
            }
            let delta = &f * &b[col];
            b[r] -= delta;
        }
    }
    (0..n).map(|i| &b[i] / &a[i][i]).collect()
}

/// A bijection from points to the columns of a minor: `perm[r]` is the
/// column assigned to point `r`.
pub type Assignment = Vec<usize>;

#[derive(Clone, Debug)]
pub struct TropEval {
    /// Entries before lineality reduction.
    pub raw: TropPlucker,
    /// Orthogonal projection of `raw` off the lineality space.
    pub plucker: TropPlucker,
    /// Maximizing assignments for each minor.
    pub witnesses: BTreeMap<Vec<usize>, Vec<Assignment>>,
    /// True iff every minor has a unique maximizer.
    pub generic: bool,
}

impl TropEval {
    /// Minors whose maximum is attained more than once.
    pub fn ties(&self) -> Vec<Vec<usize>> {
        self.witnesses.iter().filter(|(_, w)| w.len() > 1).map(|(s, _)| s.clone()).collect()
    }
}

fn check_subset(subset: &[usize], k: usize) -> Result<(), TropError> {
    let ok = subset.len() == k
        && subset.iter().all(|&c| c < 6)
        && subset.windows(2).all(|w| w[0] < w[1]);
    if ok {
        Ok(())
    } else {
        Err(TropError::MalformedSubset(subset.to_vec()))
    }
}

/// Tropical permanent of the chosen columns: max over bijections of the sum
/// of tropicalized monomials, with the set of maximizing bijections.
pub fn trop_minor(config: &Config, subset: &[usize]) -> Result<(Rational, Vec<Assignment>), TropError> {
    let k = config.arity();
    check_subset(subset, k)?;
    let mut best: Option<Rational> = None;
    let mut witnesses = Vec::new();
    for perm in subset.iter().copied().permutations(k) {
        let val = config
            .points
            .iter()
            .zip(&perm)
            .fold(Rational::zero(), |acc, (p, &c)| acc + p.monomial_value(c));
        match &best {
            Some(b) if val < *b => {}
            Some(b) if val == *b => witnesses.push(perm),
            _ => {
                best = Some(val);
                witnesses = vec![perm];
            }
        }
    }
    Ok((best.expect("k >= 1"), witnesses))
}

fn trop_map(config: &Config, k: usize) -> Result<TropEval, TropError> {
    if config.arity() != k {
        return Err(TropError::Arity { expected: k, found: config.arity() });
    }
    let mut entries = BTreeMap::new();
    let mut witnesses = BTreeMap::new();
    for s in subsets(6, k) {
        let (v, w) = trop_minor(config, &s)?;
        entries.insert(s.clone(), v);
        witnesses.insert(s, w);
    }
    let raw = TropPlucker { k, taxa: (0..6).collect(), entries };
    let generic = witnesses.values().all(|w: &Vec<Assignment>| w.len() == 1);
    Ok(TropEval { plucker: raw.canonical(), raw, witnesses, generic })
}

/// The fifteen tropical 2×2 minors of a pair of points.
pub fn trop_psi(config: &Config) -> Result<TropEval, TropError> {
    trop_map(config, 2)
}

/// The twenty tropical 3×3 minors of a triple of points.
pub fn trop_phi(config: &Config) -> Result<TropEval, TropError> {
    trop_map(config, 3)
}

/// Exponent of the term `point r ↦ column c` in gauge coordinates.
///
/// Gauge coordinates are `(X1, X2)` for pairs and `(X1, X2, Y1, Y2)` for
/// triples: the last point and every `*0` coordinate are fixed at zero.
pub fn term_exponent(arity: usize, assignment: &[usize]) -> Vec<i64> {
    let mut e = vec![0i64; 2 * (arity - 1)];
    for (r, &c) in assignment.iter().enumerate().take(arity - 1) {
        let (a, b) = TAXA[c];
        for x in [a, b] {
            if x > 0 {
                e[2 * r + x - 1] += 1;
            }
        }
    }
    e
}

/// Newton polytope of one minor in gauge coordinates.
pub fn minor_newton_polytope(arity: usize, subset: &[usize]) -> Result<Polytope, TropError> {
    if !(2..=3).contains(&arity) {
        return Err(TropError::Arity { expected: 3, found: arity });
    }
    check_subset(subset, arity)?;
    let pts: Vec<RationalVec> = subset
        .iter()
        .copied()
        .permutations(arity)
        .map(|p| RationalVec::from_ints(term_exponent(arity, &p)))
        .collect();
    Ok(convex_hull(&pts)?)
}

/// Minkowski sum of all minor Newton polytopes.
pub fn newton_polytope(arity: usize) -> Result<Polytope, TropError> {
    let parts: Vec<Polytope> = subsets(6, arity)
        .iter()
        .map(|s| minor_newton_polytope(arity, s))
        .collect::<Result<_, _>>()?;
    Ok(minkowski_sum_all(&parts)?)
}

/// For a vertex of the Newton polytope, the term of each minor that a generic
/// direction in its normal cone selects. The chosen exponents sum to the vertex.
pub fn vertex_summand_decomposition(
    arity: usize,
    np: &Polytope,
    vertex: usize,
) -> Result<BTreeMap<Vec<usize>, Assignment>, TropError> {
    let w = normal_cone(np, vertex)?.interior_point();
    let mut out = BTreeMap::new();
    let mut total = RationalVec::zeros(np.ambient_dim());
    for s in subsets(6, arity) {
        let mut best: Option<(Rational, Assignment)> = None;
        let mut tie = false;
        for p in s.iter().copied().permutations(arity) {
            let e = RationalVec::from_ints(term_exponent(arity, &p));
            let val = w.dot(&e);
            match &best {
                Some((b, _)) if val < *b => {}
                Some((b, _)) if val == *b => tie = true,
                _ => {
                    best = Some((val, p));
                    tie = false;
                }
            }
        }
        if tie {
            return Err(TropError::NotGeneric(s));
        }
        let (_, p) = best.expect("nonempty");
        total = total.add(&RationalVec::from_ints(term_exponent(arity, &p)));
        out.insert(s, p);
    }
    if total != np.vertices()[vertex] {
        return Err(TropError::Geom(GeomError::NotAVertex(vertex)));
    }
    Ok(out)
}

use std::collections::{BTreeMap, HashSet};
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::int::{self, cofactor_normal, dot, make_primitive, Echelon, Int};
use super::lattice::face_lattice;
use super::{GeomError, Rational, RationalVec};

/// A supporting inequality `normal · x + offset >= 0` with equality exactly on
/// the listed vertices.
///
/// For full-dimensional polytopes the primitive integral normal is unique. For
/// lower-dimensional ones it is chosen with support on the coordinates that
/// parametrize the affine hull.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet {
    pub normal: Vec<BigInt>,
    pub offset: Rational,
    pub vertices: Vec<usize>,
}

impl Facet {
    pub fn slack(&self, x: &RationalVec) -> Rational {
        x.dot_int(&self.normal) + &self.offset
    }
}

#[derive(Debug, Clone)]
pub struct Polytope {
    vertices: Vec<RationalVec>,
    ambient_dim: usize,
    dim: usize,
    facets: Vec<Facet>,
    faces: OnceLock<Vec<Vec<Vec<usize>>>>,
}

impl Polytope {
    /// Vertices in lexicographic order.
    pub fn vertices(&self) -> &[RationalVec] {
        &self.vertices
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Dimension of the affine hull.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim == self.ambient_dim
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Vertex sets of the `k`-faces, `0 <= k < dim`.
    pub fn faces(&self, k: usize) -> &[Vec<usize>] {
        &self.lattice()[k]
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.lattice().iter().map(Vec::len).collect()
    }

    pub fn vertex_index(&self, v: &RationalVec) -> Option<usize> {
        self.vertices.binary_search(v).ok()
    }

    /// Vertices joined to `v` by an edge.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        if self.dim == 0 {
            return Vec::new();
        }
        if self.dim == 1 {
            return (0..self.vertices.len()).filter(|&u| u != v).collect();
        }
        self.lattice()[1]
            .iter()
            .filter(|e| e.contains(&v))
            .map(|e| if e[0] == v { e[1] } else { e[0] })
            .collect()
    }

    /// Number of `k`-faces containing vertex `v`.
    pub fn faces_at(&self, v: usize, k: usize) -> usize {
        self.lattice()[k].iter().filter(|f| f.contains(&v)).count()
    }

    fn lattice(&self) -> &Vec<Vec<Vec<usize>>> {
        self.faces.get_or_init(|| {
            if self.dim == 0 {
                return Vec::new();
            }
            let incid: Vec<Vec<usize>> = self.facets.iter().map(|f| f.vertices.clone()).collect();
            face_lattice(self.vertices.len(), self.dim, &incid)
        })
    }

    /// Closed membership test; only defined for full-dimensional polytopes.
    pub fn contains(&self, x: &RationalVec) -> Result<bool, GeomError> {
        if !self.is_full_dimensional() {
            return Err(GeomError::NotFullDimensional {
                intrinsic: self.dim,
                ambient: self.ambient_dim,
            });
        }
        Ok(self.facets.iter().all(|f| !f.slack(x).is_negative()))
    }

    /// Arithmetic mean of the vertices.
    pub fn vertex_centroid(&self) -> RationalVec {
        let n = Rational::from_integer(BigInt::from(self.vertices.len()));
        let sum = self
            .vertices
            .iter()
            .skip(1)
            .fold(self.vertices[0].clone(), |acc, v| acc.add(v));
        sum.scale(&(Rational::one() / n))
    }
}

/// Counts of faces by dimension `0..dim`.
pub fn f_vector(p: &Polytope) -> Vec<usize> {
    p.f_vector()
}

/// Exact convex hull with its full face lattice.
pub fn convex_hull(points: &[RationalVec]) -> Result<Polytope, GeomError> {
    let first = points.first().ok_or(GeomError::Empty)?;
    let ambient = first.dim();
    if let Some(bad) = points.iter().find(|p| p.dim() != ambient) {
        return Err(GeomError::DimensionMismatch { expected: ambient, found: bad.dim() });
    }
    let unique: Vec<RationalVec> = {
        let mut v = points.to_vec();
        v.sort();
        v.dedup();
        v
    };

    let scale = unique
        .iter()
        .fold(BigInt::one(), |acc, p| num_integer::Integer::lcm(&acc, &p.denominator_lcm()));
    let scaled: Vec<Vec<BigInt>> = unique
        .iter()
        .map(|p| {
            p.0.iter()
                .map(|c| (c * Rational::from_integer(scale.clone())).to_integer())
                .collect()
        })
        .collect();

    let core = hull_core(&scaled);
    let (pivots, dim) = (core.pivots, core.dim);
    let (vertex_ids, raw_facets) = (core.vertex_ids, core.facets);

    // vertex_ids are increasing indices into the sorted `unique`, so the
    // renumbering keeps lexicographic order.
    let mut vertex_ids = vertex_ids;
    vertex_ids.sort_unstable();
    let renumber: BTreeMap<usize, usize> =
        vertex_ids.iter().enumerate().map(|(new, &old)| (old, new)).collect();
    let vertices: Vec<RationalVec> = vertex_ids.iter().map(|&i| unique[i].clone()).collect();

    let scale_q = Rational::from_integer(scale);
    let mut facets: Vec<Facet> = raw_facets
        .into_iter()
        .map(|(n, o, vs)| {
            let mut normal = vec![BigInt::zero(); ambient];
            for (k, &c) in pivots.iter().enumerate() {
                normal[c] = n[k].clone();
            }
            let mut vs: Vec<usize> = vs.iter().map(|v| renumber[v]).collect();
            vs.sort_unstable();
            Facet { normal, offset: Rational::from_integer(o) / &scale_q, vertices: vs }
        })
        .collect();
    facets.sort_by(|a, b| (&a.normal, &a.offset).cmp(&(&b.normal, &b.offset)));

    Ok(Polytope { vertices, ambient_dim: ambient, dim, facets, faces: OnceLock::new() })
}

/// `A ⊕ B = conv{a + b}` over vertex pairs.
pub fn minkowski_sum(a: &Polytope, b: &Polytope) -> Result<Polytope, GeomError> {
    if a.ambient_dim != b.ambient_dim {
        return Err(GeomError::DimensionMismatch { expected: a.ambient_dim, found: b.ambient_dim });
    }
    let pts: Vec<RationalVec> = a
        .vertices
        .iter()
        .flat_map(|x| b.vertices.iter().map(move |y| x.add(y)))
        .collect();
    convex_hull(&pts)
}

/// Minkowski sum of many polytopes.
///
/// Intermediate sums keep only their vertices; the face lattice is built once
/// at the end.
pub fn minkowski_sum_all(parts: &[Polytope]) -> Result<Polytope, GeomError> {
    let (first, rest) = parts.split_first().ok_or(GeomError::Empty)?;
    if let Some(bad) = rest.iter().find(|p| p.ambient_dim != first.ambient_dim) {
        return Err(GeomError::DimensionMismatch { expected: first.ambient_dim, found: bad.ambient_dim });
    }
    let scale = parts.iter().flat_map(|p| &p.vertices).fold(BigInt::one(), |acc, v| {
        num_integer::Integer::lcm(&acc, &v.denominator_lcm())
    });
    let scale_q = Rational::from_integer(scale.clone());
    let to_int = |p: &Polytope| -> Vec<Vec<BigInt>> {
        p.vertices
            .iter()
            .map(|v| v.0.iter().map(|c| (c * &scale_q).to_integer()).collect())
            .collect()
    };
    let mut acc = to_int(first);
    for p in rest {
        let summand = to_int(p);
        let mut sums: Vec<Vec<BigInt>> = acc
            .iter()
            .flat_map(|a| summand.iter().map(move |b| a.iter().zip(b).map(|(x, y)| x + y).collect()))
            .collect();
        sums.sort();
        sums.dedup();
        let core = hull_core(&sums);
        acc = core.vertex_ids.iter().map(|&i| sums[i].clone()).collect();
    }
    let pts: Vec<RationalVec> = acc
        .iter()
        .map(|v| RationalVec(v.iter().map(|x| Rational::from_integer(x.clone()) / &scale_q).collect()))
        .collect();
    convex_hull(&pts)
}

type RawFacet = (Vec<BigInt>, BigInt, Vec<usize>);

struct HullCore {
    pivots: Vec<usize>,
    dim: usize,
    vertex_ids: Vec<usize>,
    facets: Vec<RawFacet>,
}

/// Hull of distinct integer points, computed in coordinates that
/// parametrize their affine hull.
fn hull_core(scaled: &[Vec<BigInt>]) -> HullCore {
    let ambient = scaled[0].len();
    let mut ech: Echelon<BigInt> = Echelon::new();
    for p in &scaled[1..] {
        ech.insert(int::sub(p, &scaled[0]));
        if ech.rank() == ambient {
            break;
        }
    }
    let mut pivots = ech.pivots();
    pivots.sort_unstable();
    let dim = pivots.len();
    let projected: Vec<Vec<BigInt>> = scaled
        .iter()
        .map(|p| pivots.iter().map(|&c| p[c].clone()).collect())
        .collect();

    let (vertex_ids, facets) = match dim {
        0 => (vec![0], Vec::new()),
        1 => segment_hull(&projected),
        _ => {
            let max_abs = projected.iter().flatten().map(|x| x.abs()).max().unwrap_or_default();
            if int::fits_i128(&max_abs, dim) {
                kernel_to_big(full_dim_hull::<i128>(&int::convert(&projected)))
            } else {
                kernel_to_big(full_dim_hull::<BigInt>(&projected))
            }
        }
    };
    HullCore { pivots, dim, vertex_ids, facets }
}

fn segment_hull(pts: &[Vec<BigInt>]) -> (Vec<usize>, Vec<RawFacet>) {
    let lo = (0..pts.len()).min_by(|&a, &b| pts[a][0].cmp(&pts[b][0])).unwrap();
    let hi = (0..pts.len()).max_by(|&a, &b| pts[a][0].cmp(&pts[b][0])).unwrap();
    let facets = vec![
        (vec![BigInt::one()], -pts[lo][0].clone(), vec![lo]),
        (vec![-BigInt::one()], pts[hi][0].clone(), vec![hi]),
    ];
    (vec![lo, hi], facets)
}

fn kernel_to_big<T: Int>(k: (Vec<usize>, Vec<KFacet<T>>)) -> (Vec<usize>, Vec<RawFacet>) {
    let (vs, fs) = k;
    let fs = fs
        .into_iter()
        .map(|f| {
            (
                f.normal.iter().map(Int::to_big).collect(),
                f.offset.to_big(),
                f.verts.ones().collect(),
            )
        })
        .collect();
    (vs, fs)
}

#[derive(Clone, Debug)]
struct KFacet<T> {
    normal: Vec<T>,
    offset: T,
    verts: FixedBitSet,
}

impl<T: Int> KFacet<T> {
    fn slack(&self, p: &[T]) -> T {
        dot(&self.normal, p) + self.offset.clone()
    }
}

/// Beneath-beyond on distinct integer points spanning `R^d`, `d >= 2`.
///
/// New facets through a horizon ridge are found in the pencil of the two
/// facets meeting there, so no linear solves are needed after the initial
/// simplex. Ridges are detected combinatorially: two facets meet in a ridge
/// iff no third facet contains their common vertices.
fn full_dim_hull<T: Int>(pts: &[Vec<T>]) -> (Vec<usize>, Vec<KFacet<T>>) {
    let n = pts.len();
    let d = pts[0].len();

    let order = far_first(pts);
    let mut simplex = vec![order[0]];
    let mut ech: Echelon<T> = Echelon::new();
    for &i in &order[1..] {
        if ech.insert(int::sub(&pts[i], &pts[order[0]])) {
            simplex.push(i);
            if simplex.len() == d + 1 {
                break;
            }
        }
    }
    assert_eq!(simplex.len(), d + 1, "points do not span the space");

    let mut alive = FixedBitSet::with_capacity(n);
    for &i in &simplex {
        alive.insert(i);
    }
    let mut facets: Vec<KFacet<T>> = Vec::with_capacity(d + 1);
    for &skip in &simplex {
        let on: Vec<usize> = simplex.iter().copied().filter(|&i| i != skip).collect();
        let diffs: Vec<Vec<T>> = on[1..].iter().map(|&i| int::sub(&pts[i], &pts[on[0]])).collect();
        let mut normal = cofactor_normal(&diffs);
        let mut offset = -dot(&normal, &pts[on[0]]);
        make_primitive(&mut normal, Some(&mut offset));
        let f = KFacet { normal, offset, verts: FixedBitSet::with_capacity(n) };
        let mut f = if f.slack(&pts[skip]).is_negative() {
            KFacet { normal: f.normal.iter().map(|x| -x.clone()).collect(), offset: -f.offset, verts: f.verts }
        } else {
            f
        };
        for &i in &on {
            f.verts.insert(i);
        }
        facets.push(f);
    }

    let in_simplex: HashSet<usize> = simplex.iter().copied().collect();
    for pi in order.into_iter().filter(|i| !in_simplex.contains(i)) {
        let p = &pts[pi];
        let slacks: Vec<T> = facets.iter().map(|f| f.slack(p)).collect();
        if !slacks.iter().any(Signed::is_negative) {
            continue;
        }
        let visible: Vec<usize> = (0..facets.len()).filter(|&i| slacks[i].is_negative()).collect();
        let hidden: Vec<usize> = (0..facets.len()).filter(|&i| !slacks[i].is_negative()).collect();

        let mut planes: Vec<(Vec<T>, T)> = Vec::new();
        let mut seen: HashSet<(Vec<T>, T)> = HashSet::new();
        for &fi in &visible {
            // Any facet containing a ridge of `fi` shares at least d-1 vertices with it.
            let near: Vec<(usize, FixedBitSet)> = facets
                .iter()
                .enumerate()
                .filter(|&(gi, _)| gi != fi)
                .filter_map(|(gi, g)| {
                    let mut common = facets[fi].verts.clone();
                    common.intersect_with(&g.verts);
                    (common.count_ones(..) + 1 >= d).then_some((gi, common))
                })
                .collect();
            for (gi, common) in &near {
                let gi = *gi;
                if !slacks[gi].is_positive() {
                    continue;
                }
                let is_ridge = near
                    .iter()
                    .all(|(hi, _)| *hi == gi || !common.is_subset(&facets[*hi].verts));
                if !is_ridge {
                    continue;
                }
                let (f, g) = (&facets[fi], &facets[gi]);
                let hf = slacks[fi].clone();
                let hg = slacks[gi].clone();
                let mut normal: Vec<T> = f
                    .normal
                    .iter()
                    .zip(&g.normal)
                    .map(|(a, b)| hg.clone() * a.clone() - hf.clone() * b.clone())
                    .collect();
                let mut offset = hg * f.offset.clone() - hf * g.offset.clone();
                make_primitive(&mut normal, Some(&mut offset));
                if seen.insert((normal.clone(), offset.clone())) {
                    planes.push((normal, offset));
                }
            }
        }

        // Vertices that may stop being extreme: those not on any facet that
        // stays strictly beneath p.
        let mut safe = FixedBitSet::with_capacity(n);
        for &gi in &hidden {
            if slacks[gi].is_positive() {
                safe.union_with(&facets[gi].verts);
            }
        }

        let mut next: Vec<KFacet<T>> = Vec::with_capacity(hidden.len() + planes.len());
        for &gi in &hidden {
            let mut g = facets[gi].clone();
            if slacks[gi].is_zero() {
                g.verts.insert(pi);
            }
            next.push(g);
        }
        for (normal, offset) in planes {
            let mut verts = FixedBitSet::with_capacity(n);
            for v in alive.ones() {
                if (dot(&normal, &pts[v]) + offset.clone()).is_zero() {
                    verts.insert(v);
                }
            }
            verts.insert(pi);
            next.push(KFacet { normal, offset, verts });
        }

        let candidates: Vec<usize> = alive.ones().filter(|&v| !safe.contains(v)).collect();
        for v in candidates {
            let normals: Vec<Vec<T>> = next
                .iter()
                .filter(|f| f.verts.contains(v))
                .map(|f| f.normal.clone())
                .collect();
            if normals.len() < d || int::rank(&normals) < d {
                alive.set(v, false);
                for f in next.iter_mut() {
                    f.verts.set(v, false);
                }
            }
        }
        alive.insert(pi);
        facets = next;
    }

    (alive.ones().collect(), facets)
}

/// Indices by decreasing distance from the centroid, so that most late
/// insertions fall inside the hull already built.
fn far_first<T: Int>(pts: &[Vec<T>]) -> Vec<usize> {
    let n = T::from_big(&BigInt::from(pts.len())).expect("small");
    let d = pts[0].len();
    let total: Vec<T> = (0..d)
        .map(|c| pts.iter().fold(T::zero(), |acc, p| acc + p[c].clone()))
        .collect();
    let mut keyed: Vec<(T, usize)> = pts
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let r: Vec<T> = p.iter().zip(&total).map(|(x, t)| n.clone() * x.clone() - t.clone()).collect();
            (dot(&r, &r), i)
        })
        .collect();
    keyed.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    keyed.into_iter().map(|(_, i)| i).collect()
}

#[cfg(test)]
mod tests {
    use super::super::{int as q, ratio};
    use super::*;

    fn pts(v: &[&[i64]]) -> Vec<RationalVec> {
        v.iter().map(|p| RationalVec::from_ints(p.iter().copied())).collect()
    }

    #[test]
    fn square_drops_interior_point() {
        let mut p = pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        p.push(RationalVec::new(vec![ratio(1, 2), ratio(1, 2)]));
        let h = convex_hull(&p).unwrap();
        assert_eq!(h.vertices().len(), 4);
        assert_eq!(h.f_vector(), vec![4, 4]);
        assert_eq!(h.dim(), 2);
    }

    #[test]
    fn collinear_and_coplanar_points_are_not_vertices() {
        let p = pts(&[&[0, 0], &[2, 0], &[1, 0], &[0, 2], &[1, 1], &[2, 2], &[0, 1], &[2, 1], &[1, 2]]);
        let h = convex_hull(&p).unwrap();
        assert_eq!(h.vertices(), &pts(&[&[0, 0], &[0, 2], &[2, 0], &[2, 2]])[..]);
        for f in h.facets() {
            assert_eq!(f.vertices.len(), 2);
        }
    }

    #[test]
    fn cube_with_face_centers() {
        let mut p = Vec::new();
        for x in 0..3 {
            for y in 0..3 {
                for z in 0..3 {
                    p.push(RationalVec::from_ints([x, y, z]));
                }
            }
        }
        let h = convex_hull(&p).unwrap();
        assert_eq!(h.f_vector(), vec![8, 12, 6]);
        for f in h.facets() {
            assert_eq!(f.normal.iter().filter(|c| !c.is_zero()).count(), 1);
        }
    }

    #[test]
    fn lower_dimensional_hull() {
        // a triangle in the plane z = 1 inside R^3
        let p = pts(&[&[0, 0, 1], &[3, 0, 1], &[0, 3, 1], &[1, 1, 1]]);
        let h = convex_hull(&p).unwrap();
        assert_eq!(h.dim(), 2);
        assert_eq!(h.ambient_dim(), 3);
        assert_eq!(h.f_vector(), vec![3, 3]);
        for f in h.facets() {
            for (i, v) in h.vertices().iter().enumerate() {
                let s = f.slack(v);
                assert!(!s.is_negative());
                assert_eq!(s.is_zero(), f.vertices.contains(&i));
            }
        }
    }

    #[test]
    fn point_and_segment() {
        let h = convex_hull(&pts(&[&[1, 2], &[1, 2]])).unwrap();
        assert_eq!(h.dim(), 0);
        assert!(h.f_vector().is_empty());
        let s = convex_hull(&pts(&[&[0, 0], &[2, 2], &[1, 1]])).unwrap();
        assert_eq!(s.dim(), 1);
        assert_eq!(s.f_vector(), vec![2]);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let e = convex_hull(&pts(&[&[0, 0], &[1, 0, 0]])).unwrap_err();
        assert_eq!(e, GeomError::DimensionMismatch { expected: 2, found: 3 });
        assert_eq!(convex_hull(&[]).unwrap_err(), GeomError::Empty);
    }

    #[test]
    fn rational_offsets_are_exact() {
        let p = vec![
            RationalVec::new(vec![ratio(1, 3), q(0)]),
            RationalVec::new(vec![q(1), q(0)]),
            RationalVec::new(vec![ratio(1, 3), ratio(5, 7)]),
        ];
        let h = convex_hull(&p).unwrap();
        assert_eq!(h.vertices().len(), 3);
        for f in h.facets() {
            for &v in &f.vertices {
                assert!(f.slack(&h.vertices()[v]).is_zero());
            }
        }
    }

    #[test]
    fn segments_sum_to_square() {
        let a = convex_hull(&pts(&[&[0, 0], &[1, 0]])).unwrap();
        let b = convex_hull(&pts(&[&[0, 0], &[0, 1]])).unwrap();
        let s = minkowski_sum(&a, &b).unwrap();
        assert_eq!(s.vertices(), &pts(&[&[0, 0], &[0, 1], &[1, 0], &[1, 1]])[..]);
        assert_eq!(s.f_vector(), vec![4, 4]);
    }

    #[test]
    fn big_coordinates_use_the_bigint_path() {
        let big = 1i64 << 60;
        let p = pts(&[&[0, 0, 0], &[big, 0, 0], &[0, big, 0], &[0, 0, big], &[1, 1, 1]]);
        let h = convex_hull(&p).unwrap();
        assert_eq!(h.f_vector(), vec![4, 6, 4]);
    }
}

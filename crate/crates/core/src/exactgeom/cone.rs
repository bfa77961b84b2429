use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::int::{self, cofactor_normal, make_primitive, Echelon};
use super::lattice::face_lattice_bits;
use super::{dot_big, sign, GeomError, Polytope, RationalVec};

/// A pointed, full-dimensional polyhedral cone `{w : <a, w> >= 0}` kept in
/// both representations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyCone {
    inequalities: Vec<Vec<BigInt>>,
    rays: Vec<Vec<BigInt>>,
    ambient_dim: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConeMembership {
    Interior,
    Boundary,
    Outside,
}

impl PolyCone {
    /// Double description from an inequality system. Redundant rows are dropped.
    pub fn from_inequalities(rows: &[RationalVec]) -> Result<PolyCone, GeomError> {
        let d = check_dims(rows)?;
        let a: Vec<Vec<BigInt>> = rows.iter().map(RationalVec::primitive_integer).collect();
        let rays = double_description(&a, d)?;
        let inequalities = irredundant(&a, &rays, d);
        Ok(PolyCone { inequalities, rays, ambient_dim: d })
    }

    /// Facets of the cone generated by `rays`; non-extreme generators are dropped.
    pub fn from_rays(rays: &[RationalVec]) -> Result<PolyCone, GeomError> {
        let d = check_dims(rays)?;
        let r: Vec<Vec<BigInt>> = rays.iter().map(RationalVec::primitive_integer).collect();
        let facets = double_description(&r, d)?;
        let extreme = irredundant(&r, &facets, d);
        Ok(PolyCone { inequalities: facets, rays: extreme, ambient_dim: d })
    }

    /// Primitive inward facet normals, sorted.
    pub fn inequalities(&self) -> &[Vec<BigInt>] {
        &self.inequalities
    }

    /// Primitive extreme rays, sorted.
    pub fn rays(&self) -> &[Vec<BigInt>] {
        &self.rays
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Sum of the extreme rays; always in the interior.
    pub fn interior_point(&self) -> RationalVec {
        let mut s = vec![BigInt::zero(); self.ambient_dim];
        for r in &self.rays {
            for (a, b) in s.iter_mut().zip(r) {
                *a += b;
            }
        }
        RationalVec::from_bigints(&s)
    }

    /// Number of faces of each dimension `1..=dim-1` (rays first, facets last).
    pub fn face_counts(&self) -> Vec<usize> {
        let d = self.ambient_dim;
        let incid: Vec<FixedBitSet> = self
            .inequalities
            .iter()
            .map(|a| {
                let mut b = FixedBitSet::with_capacity(self.rays.len());
                for (j, r) in self.rays.iter().enumerate() {
                    if dot_big(a, r).is_zero() {
                        b.insert(j);
                    }
                }
                b
            })
            .collect();
        face_lattice_bits(self.rays.len(), d - 1, &incid).iter().map(Vec::len).collect()
    }

    /// f-vector of the vertex figure of a polytope whose normal cone this is:
    /// its `k`-faces correspond to the cone's faces of codimension `k + 1`.
    pub fn vertex_figure_f_vector(&self) -> Vec<usize> {
        let mut f = self.face_counts();
        f.reverse();
        f
    }
}

fn check_dims(v: &[RationalVec]) -> Result<usize, GeomError> {
    let d = v.first().ok_or(GeomError::Empty)?.dim();
    if let Some(bad) = v.iter().find(|x| x.dim() != d) {
        return Err(GeomError::DimensionMismatch { expected: d, found: bad.dim() });
    }
    Ok(d)
}

/// Extreme rays of `{w : a_i · w >= 0}`, requiring a pointed full-dimensional cone.
fn double_description(a: &[Vec<BigInt>], d: usize) -> Result<Vec<Vec<BigInt>>, GeomError> {
    let m = a.len();
    let mut basis = Vec::new();
    let mut ech: Echelon<BigInt> = Echelon::new();
    for (i, row) in a.iter().enumerate() {
        if ech.insert(row.clone()) {
            basis.push(i);
        }
    }
    if basis.len() < d {
        return Err(GeomError::DegenerateCone);
    }

    struct Ray {
        v: Vec<BigInt>,
        zeros: FixedBitSet,
    }
    let mut rays: Vec<Ray> = Vec::new();
    for &j in &basis {
        let others: Vec<Vec<BigInt>> =
            basis.iter().filter(|&&i| i != j).map(|&i| a[i].clone()).collect();
        let mut v = if d == 1 { vec![BigInt::from(1)] } else { cofactor_normal(&others) };
        if dot_big(&a[j], &v).is_negative() {
            v = v.into_iter().map(|x| -x).collect();
        }
        make_primitive(&mut v, None);
        let mut zeros = FixedBitSet::with_capacity(m);
        for &i in &basis {
            if i != j {
                zeros.insert(i);
            }
        }
        rays.push(Ray { v, zeros });
    }

    let in_basis: BTreeSet<usize> = basis.iter().copied().collect();
    for (i, row) in a.iter().enumerate() {
        if in_basis.contains(&i) {
            continue;
        }
        let s: Vec<BigInt> = rays.iter().map(|r| dot_big(row, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| s[k].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| s[k].is_negative()).collect();
        let mut fresh = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let mut common = rays[p].zeros.clone();
                common.intersect_with(&rays[n].zeros);
                if common.count_ones(..) + 2 < d {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(k, r)| k == p || k == n || !common.is_subset(&r.zeros));
                if !adjacent {
                    continue;
                }
                let mut v: Vec<BigInt> = rays[n]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(x, y)| &s[p] * x - &s[n] * y)
                    .collect();
                make_primitive(&mut v, None);
                common.insert(i);
                fresh.push(Ray { v, zeros: common });
            }
        }
        let mut kept: Vec<Ray> = Vec::new();
        for (k, mut r) in rays.into_iter().enumerate() {
            match sign_big(&s[k]) {
                -1 => continue,
                0 => r.zeros.insert(i),
                _ => {}
            }
            kept.push(r);
        }
        kept.extend(fresh);
        rays = kept;
    }

    let out: BTreeSet<Vec<BigInt>> = rays.into_iter().map(|r| r.v).collect();
    let out: Vec<Vec<BigInt>> = out.into_iter().collect();
    if int::rank(&out) < d {
        return Err(GeomError::DegenerateCone);
    }
    Ok(out)
}

/// Rows of `a` that are tight on `d - 1` independent generators.
fn irredundant(a: &[Vec<BigInt>], gens: &[Vec<BigInt>], d: usize) -> Vec<Vec<BigInt>> {
    let unique: BTreeSet<Vec<BigInt>> = a.iter().cloned().collect();
    unique
        .into_iter()
        .filter(|row| {
            let tight: Vec<Vec<BigInt>> =
                gens.iter().filter(|g| dot_big(row, g).is_zero()).cloned().collect();
            int::rank(&tight) + 1 == d
        })
        .collect()
}

fn sign_big(x: &BigInt) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Classifies `w` by the signs of the facet functionals.
pub fn cone_member(c: &PolyCone, w: &RationalVec) -> Result<ConeMembership, GeomError> {
    if w.dim() != c.ambient_dim {
        return Err(GeomError::DimensionMismatch { expected: c.ambient_dim, found: w.dim() });
    }
    let mut tight = false;
    for a in &c.inequalities {
        match sign(&w.dot_int(a)) {
            -1 => return Ok(ConeMembership::Outside),
            0 => tight = true,
            _ => {}
        }
    }
    Ok(if tight { ConeMembership::Boundary } else { ConeMembership::Interior })
}

/// Directions maximized at vertex `v` (max convention): one facet per edge at
/// `v`, extreme rays are the outer facet normals at `v`.
pub fn normal_cone(p: &Polytope, v: usize) -> Result<PolyCone, GeomError> {
    if v >= p.vertices().len() {
        return Err(GeomError::NotAVertex(v));
    }
    if !p.is_full_dimensional() || p.dim() == 0 {
        return Err(GeomError::NotFullDimensional { intrinsic: p.dim(), ambient: p.ambient_dim() });
    }
    let at = &p.vertices()[v];
    let rows: Vec<RationalVec> =
        p.neighbors(v).into_iter().map(|u| at.sub(&p.vertices()[u])).collect();
    PolyCone::from_inequalities(&rows)
}

#[cfg(test)]
mod tests {
    use super::super::convex_hull;
    use super::*;

    fn rv(v: &[i64]) -> RationalVec {
        RationalVec::from_ints(v.iter().copied())
    }

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn orthant_membership() {
        let c = PolyCone::from_inequalities(&[rv(&[1, 0]), rv(&[0, 1])]).unwrap();
        assert_eq!(cone_member(&c, &rv(&[1, 1])).unwrap(), ConeMembership::Interior);
        assert_eq!(cone_member(&c, &rv(&[0, 1])).unwrap(), ConeMembership::Boundary);
        assert_eq!(cone_member(&c, &rv(&[-1, 1])).unwrap(), ConeMembership::Outside);
        assert!(cone_member(&c, &rv(&[1, 1, 1])).is_err());
    }

    #[test]
    fn square_corner_normal_cone_is_orthant() {
        let sq = convex_hull(&[rv(&[0, 0]), rv(&[1, 0]), rv(&[0, 1]), rv(&[1, 1])]).unwrap();
        let v = sq.vertex_index(&rv(&[1, 1])).unwrap();
        let c = normal_cone(&sq, v).unwrap();
        assert_eq!(c.inequalities(), &[bi(&[0, 1]), bi(&[1, 0])]);
        assert_eq!(c.rays(), &[bi(&[0, 1]), bi(&[1, 0])]);
        assert_eq!(normal_cone(&sq, 9).unwrap_err(), GeomError::NotAVertex(9));
    }

    #[test]
    fn redundant_rows_are_removed() {
        let c = PolyCone::from_inequalities(&[rv(&[1, 0, 0]), rv(&[0, 1, 0]), rv(&[0, 0, 1]), rv(&[1, 1, 0]), rv(&[2, 0, 0])])
            .unwrap();
        assert_eq!(c.inequalities().len(), 3);
        assert_eq!(c.rays().len(), 3);
    }

    #[test]
    fn square_pyramid_cone() {
        // cone over a square: rays (±1, ±1, 1)
        let rays = [rv(&[1, 1, 1]), rv(&[1, -1, 1]), rv(&[-1, 1, 1]), rv(&[-1, -1, 1]), rv(&[0, 0, 1])];
        let c = PolyCone::from_rays(&rays).unwrap();
        assert_eq!(c.rays().len(), 4);
        assert_eq!(c.inequalities().len(), 4);
        assert_eq!(c.face_counts(), vec![4, 4]);
        let back = PolyCone::from_inequalities(
            &c.inequalities().iter().map(|a| RationalVec::from_bigints(a)).collect::<Vec<_>>(),
        )
        .unwrap();
        assert_eq!(back.rays(), c.rays());
    }

    #[test]
    fn non_pointed_cone_is_rejected() {
        assert_eq!(
            PolyCone::from_inequalities(&[rv(&[1, 0, 0]), rv(&[0, 1, 0])]).unwrap_err(),
            GeomError::DegenerateCone
        );
    }
}

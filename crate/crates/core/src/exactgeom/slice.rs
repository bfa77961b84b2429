use num_traits::{Signed, Zero};

use super::{int, rank, GeomError, PolyCone, Rational, RationalVec};

pub type Point2 = (Rational, Rational);

/// `(s, t) ↦ origin + s·u + t·v`.
#[derive(Debug, Clone)]
pub struct AffinePlane {
    pub origin: RationalVec,
    pub u: RationalVec,
    pub v: RationalVec,
}

impl AffinePlane {
    pub fn at(&self, s: &Rational, t: &Rational) -> RationalVec {
        self.origin.add(&self.u.scale(s)).add(&self.v.scale(t))
    }

    /// Pulls `a · x >= 0` back to `alpha·s + beta·t + gamma >= 0`.
    fn pull_back(&self, a: &RationalVec) -> [Rational; 3] {
        [a.dot(&self.u), a.dot(&self.v), a.dot(&self.origin)]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClipBox {
    pub min: Point2,
    pub max: Point2,
}

impl ClipBox {
    pub fn new(min: Point2, max: Point2) -> Self {
        ClipBox { min, max }
    }

    pub fn square(lo: i64, hi: i64) -> Self {
        ClipBox { min: (int(lo), int(lo)), max: (int(hi), int(hi)) }
    }

    /// Smallest box containing `pts`, grown by `margin` on every side.
    pub fn around(pts: &[Point2], margin: &Rational) -> Option<Self> {
        let first = pts.first()?;
        let mut lo = first.clone();
        let mut hi = first.clone();
        for (x, y) in pts {
            lo.0 = lo.0.clone().min(x.clone());
            lo.1 = lo.1.clone().min(y.clone());
            hi.0 = hi.0.clone().max(x.clone());
            hi.1 = hi.1.clone().max(y.clone());
        }
        Some(ClipBox { min: (lo.0 - margin, lo.1 - margin), max: (hi.0 + margin, hi.1 + margin) })
    }

    pub fn area(&self) -> Rational {
        (&self.max.0 - &self.min.0) * (&self.max.1 - &self.min.1)
    }

    fn polygon(&self) -> Vec<Point2> {
        vec![
            self.min.clone(),
            (self.max.0.clone(), self.min.1.clone()),
            self.max.clone(),
            (self.min.0.clone(), self.max.1.clone()),
        ]
    }

    fn on_boundary(&self, p: &Point2) -> bool {
        p.0 == self.min.0 || p.0 == self.max.0 || p.1 == self.min.1 || p.1 == self.max.1
    }
}

#[derive(Debug, Clone)]
pub struct LabeledCone<L> {
    pub label: L,
    pub cone: PolyCone,
}

/// A convex polygon, counterclockwise, without repeated or collinear vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledPolygon<L> {
    pub label: L,
    pub vertices: Vec<Point2>,
}

impl<L> LabeledPolygon<L> {
    pub fn area(&self) -> Rational {
        polygon_area(&self.vertices)
    }

    pub fn centroid(&self) -> Point2 {
        let n = int(self.vertices.len() as i64);
        let (sx, sy) = self
            .vertices
            .iter()
            .fold((Rational::zero(), Rational::zero()), |(a, b), (x, y)| (a + x, b + y));
        (sx / &n, sy / n)
    }
}

/// Signed shoelace area (positive for counterclockwise order).
pub fn polygon_area(pts: &[Point2]) -> Rational {
    let n = pts.len();
    let mut acc = Rational::zero();
    for i in 0..n {
        let (x0, y0) = &pts[i];
        let (x1, y1) = &pts[(i + 1) % n];
        acc += x0 * y1 - x1 * y0;
    }
    acc / int(2)
}

/// Intersects every cone with a 2-plane and clips to `clip`.
///
/// Cells of zero area are dropped; the rest come back in input order.
pub fn slice_fan<L: Clone>(
    cones: &[LabeledCone<L>],
    plane: &AffinePlane,
    clip: &ClipBox,
) -> Result<Vec<LabeledPolygon<L>>, GeomError> {
    let n = plane.origin.dim();
    for v in [&plane.u, &plane.v] {
        if v.dim() != n {
            return Err(GeomError::DimensionMismatch { expected: n, found: v.dim() });
        }
    }
    if rank(&[plane.u.clone(), plane.v.clone()]) < 2 {
        return Err(GeomError::DegeneratePlane);
    }
    let mut out = Vec::new();
    for c in cones {
        if c.cone.ambient_dim() != n {
            return Err(GeomError::DimensionMismatch { expected: n, found: c.cone.ambient_dim() });
        }
        let mut poly = clip.polygon();
        for a in c.cone.inequalities() {
            let h = plane.pull_back(&RationalVec::from_bigints(a));
            poly = clip_halfplane(&poly, &h);
            if poly.len() < 3 {
                break;
            }
        }
        let poly = simplify(poly);
        if poly.len() >= 3 && polygon_area(&poly).is_positive() {
            out.push(LabeledPolygon { label: c.label.clone(), vertices: poly });
        }
    }
    Ok(out)
}

/// Box spanning all cell vertices strictly inside the region where the
/// slicing lines meet, plus `margin`.
pub fn default_clip_box<L: Clone>(
    cones: &[LabeledCone<L>],
    plane: &AffinePlane,
    margin: &Rational,
) -> Result<ClipBox, GeomError> {
    let mut lines: Vec<[Rational; 3]> = Vec::new();
    for c in cones {
        for a in c.cone.inequalities() {
            let h = plane.pull_back(&RationalVec::from_bigints(a));
            if !(h[0].is_zero() && h[1].is_zero()) && !lines.contains(&h) {
                lines.push(h);
            }
        }
    }
    let mut meets = Vec::new();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let [a1, b1, c1] = &lines[i];
            let [a2, b2, c2] = &lines[j];
            let det = a1 * b2 - a2 * b1;
            if det.is_zero() {
                continue;
            }
            meets.push(((b1 * c2 - b2 * c1) / &det, (a2 * c1 - a1 * c2) / &det));
        }
    }
    let fallback = ClipBox::new((-margin.clone(), -margin.clone()), (margin.clone(), margin.clone()));
    let Some(outer) = ClipBox::around(&meets, &int(1)) else {
        return Ok(fallback);
    };
    let cells = slice_fan(cones, plane, &outer)?;
    let inner: Vec<Point2> = cells
        .iter()
        .flat_map(|c| c.vertices.iter().cloned())
        .filter(|p| !outer.on_boundary(p))
        .collect();
    Ok(ClipBox::around(&inner, margin).unwrap_or(fallback))
}

fn eval(h: &[Rational; 3], p: &Point2) -> Rational {
    &h[0] * &p.0 + &h[1] * &p.1 + &h[2]
}

fn clip_halfplane(poly: &[Point2], h: &[Rational; 3]) -> Vec<Point2> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let p = &poly[i];
        let q = &poly[(i + 1) % n];
        let fp = eval(h, p);
        let fq = eval(h, q);
        if !fp.is_negative() {
            out.push(p.clone());
        }
        if (fp.is_positive() && fq.is_negative()) || (fp.is_negative() && fq.is_positive()) {
            let t = &fp / (&fp - &fq);
            out.push((&p.0 + (&q.0 - &p.0) * &t, &p.1 + (&q.1 - &p.1) * &t));
        }
    }
    out
}

fn simplify(poly: Vec<Point2>) -> Vec<Point2> {
    let mut pts: Vec<Point2> = Vec::with_capacity(poly.len());
    for p in poly {
        if pts.last() != Some(&p) {
            pts.push(p);
        }
    }
    while pts.len() > 1 && pts.first() == pts.last() {
        pts.pop();
    }
    loop {
        let n = pts.len();
        if n < 3 {
            return pts;
        }
        let drop = (0..n).find(|&i| {
            let a = &pts[(i + n - 1) % n];
            let b = &pts[i];
            let c = &pts[(i + 1) % n];
            ((&b.0 - &a.0) * (&c.1 - &a.1) - (&b.1 - &a.1) * (&c.0 - &a.0)).is_zero()
        });
        match drop {
            Some(i) => {
                pts.remove(i);
            }
            None => return pts,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rv(v: &[i64]) -> RationalVec {
        RationalVec::from_ints(v.iter().copied())
    }

    fn orthants() -> Vec<LabeledCone<usize>> {
        let mut out = Vec::new();
        for (k, (sx, sy)) in [(1, 1), (-1, 1), (-1, -1), (1, -1)].into_iter().enumerate() {
            let cone = PolyCone::from_inequalities(&[rv(&[sx, 0]), rv(&[0, sy])]).unwrap();
            out.push(LabeledCone { label: k, cone });
        }
        out
    }

    #[test]
    fn orthants_give_four_unit_squares() {
        let plane = AffinePlane { origin: rv(&[0, 0]), u: rv(&[1, 0]), v: rv(&[0, 1]) };
        let cells = slice_fan(&orthants(), &plane, &ClipBox::square(-1, 1)).unwrap();
        assert_eq!(cells.len(), 4);
        for c in &cells {
            assert_eq!(c.area(), int(1));
            assert_eq!(c.vertices.len(), 4);
        }
    }

    #[test]
    fn degenerate_plane_is_rejected() {
        let plane = AffinePlane { origin: rv(&[0, 0]), u: rv(&[1, 2]), v: rv(&[2, 4]) };
        assert_eq!(
            slice_fan(&orthants(), &plane, &ClipBox::square(-1, 1)).unwrap_err(),
            GeomError::DegeneratePlane
        );
    }

    #[test]
    fn default_box_for_shifted_orthants() {
        let plane = AffinePlane { origin: rv(&[3, -2]), u: rv(&[1, 0]), v: rv(&[0, 1]) };
        let b = default_clip_box(&orthants(), &plane, &int(5)).unwrap();
        assert_eq!(b, ClipBox::new((int(-8), int(-3)), (int(2), int(7))));
    }
}

//! Cone identification for planes of conics through three points.
//!
//! A tropical Plücker vector on the 3-subsets of six taxa induces a regular
//! subdivision of the hypersimplex `conv{e_i + e_j + e_k}` by lifting each of
//! the twenty points to the height of its coordinate and projecting the upper
//! faces. The sorted cell list of that subdivision is the cone fingerprint:
//! two vectors in the interior of maximal cones share a cone iff their
//! fingerprints agree.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::exactgeom::{
    convex_hull, default_clip_box, int, normal_cone, slice_fan, AffinePlane, ClipBox, GeomError,
    LabeledCone, LabeledPolygon, Point2, PolyCone, Polytope, Rational, RationalVec,
};
use crate::trees::{classify_node_type, topology_from_plucker, NodeType, TreeError, TreeTopology};
use crate::tropical::{
    newton_polytope, subsets, term_exponent, trop_phi, trop_psi, Config, TaxaLabeling, TropError, TropEval,
    TropPlucker,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error(transparent)]
    Trop(#[from] TropError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("expected a vector on the 3-subsets of six taxa")]
    Shape,
    #[error("interior point of the cone at vertex {0} evaluates to a tie")]
    InteriorTie(usize),
    #[error("orbit alignment failed: {0}")]
    Alignment(String),
    #[error("slice plane lies on cone boundaries")]
    DegenerateSlice,
}

/// Regular subdivision of the twenty points `e_S`, `|S| = 3`, indexed by the
/// position of `S` in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RegularSubdivision {
    cells: Vec<Vec<usize>>,
}

impl RegularSubdivision {
    /// Maximal cells, each sorted, in sorted order.
    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    /// Whether every edge of every cell is parallel to some `e_i - e_j`.
    pub fn has_matroid_edges(&self) -> Result<bool, GeomError> {
        let ground = ground_set();
        for cell in &self.cells {
            let pts: Vec<RationalVec> = cell.iter().map(|&i| indicator(&ground[i])).collect();
            let hull = convex_hull(&pts)?;
            if hull.dim() < 1 {
                continue;
            }
            for e in hull.faces(1) {
                let d = hull.vertices()[e[0]].sub(&hull.vertices()[e[1]]);
                let plus = d.coords().iter().filter(|c| **c == int(1)).count();
                let minus = d.coords().iter().filter(|c| **c == int(-1)).count();
                let zero = d.coords().iter().filter(|c| c.is_zero()).count();
                if (plus, minus, zero) != (1, 1, 4) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Cells written as lists of 3-subsets.
    pub fn cells_as_subsets(&self) -> Vec<Vec<Vec<usize>>> {
        let ground = ground_set();
        self.cells.iter().map(|c| c.iter().map(|&i| ground[i].clone()).collect()).collect()
    }
}

/// Sorted cell list identifying a cone of the tropical Grassmannian.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fingerprint(pub Vec<Vec<usize>>);

impl Fingerprint {
    /// Image under the taxa permutation `t ↦ perm[t]`.
    pub fn relabel(&self, perm: &[usize; 6]) -> Fingerprint {
        let map = ground_map(perm);
        let mut cells: Vec<Vec<usize>> = self
            .0
            .iter()
            .map(|c| c.iter().map(|&i| map[i]).sorted().collect())
            .collect();
        cells.sort();
        Fingerprint(cells)
    }

    pub fn cell_count(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Debug for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ground = ground_set();
        let cells = self.0.iter().map(|c| {
            c.iter().map(|&i| ground[i].iter().join("")).join(" ")
        });
        write!(f, "[{}]", cells.map(|c| format!("{{{c}}}")).join(", "))
    }
}

fn ground_set() -> &'static [Vec<usize>] {
    static GROUND: OnceLock<Vec<Vec<usize>>> = OnceLock::new();
    GROUND.get_or_init(|| subsets(6, 3))
}

fn indicator(s: &[usize]) -> RationalVec {
    RationalVec::from_ints((0..6).map(|i| i64::from(s.contains(&i))))
}

fn ground_map(perm: &[usize; 6]) -> [usize; 20] {
    let ground = ground_set();
    let mut out = [0; 20];
    for (i, s) in ground.iter().enumerate() {
        let img: Vec<usize> = s.iter().map(|&t| perm[t]).sorted().collect();
        out[i] = ground.iter().position(|g| *g == img).expect("3-subset");
    }
    out
}

fn all_taxa_perms() -> &'static [[usize; 6]] {
    static PERMS: OnceLock<Vec<[usize; 6]>> = OnceLock::new();
    PERMS.get_or_init(|| {
        (0..6).permutations(6).map(|p| p.try_into().expect("length 6")).collect()
    })
}

fn check_k3(p: &TropPlucker) -> Result<(), ClassifyError> {
    if p.k() != 3 || p.taxa() != [0, 1, 2, 3, 4, 5] {
        return Err(ClassifyError::Shape);
    }
    Ok(())
}

/// Upper faces of the lift `e_S ↦ (e_S, P_S)`.
pub fn matroid_subdivision(p: &TropPlucker) -> Result<RegularSubdivision, ClassifyError> {
    check_k3(p)?;
    let ground = ground_set();
    // Drop the last unit coordinate: it is fixed by the others on the hypersimplex.
    let lifted: Vec<RationalVec> = ground
        .iter()
        .map(|s| {
            let mut c: Vec<Rational> = (0..5).map(|i| int(i64::from(s.contains(&i)))).collect();
            c.push(p.get(s).clone());
            RationalVec::new(c)
        })
        .collect();
    let hull = convex_hull(&lifted)?;
    if !hull.is_full_dimensional() {
        return Ok(RegularSubdivision { cells: vec![(0..20).collect()] });
    }
    let mut cells: Vec<Vec<usize>> = hull
        .facets()
        .iter()
        .filter(|f| f.normal[5].is_negative())
        .map(|f| (0..20).filter(|&i| f.slack(&lifted[i]).is_zero()).collect())
        .collect();
    cells.sort();
    Ok(RegularSubdivision { cells })
}

pub fn cone_fingerprint(p: &TropPlucker) -> Result<Fingerprint, ClassifyError> {
    Ok(Fingerprint(matroid_subdivision(p)?.cells))
}

/// Lexicographically least relabeling over all of S₆.
pub fn canonical_class_mod_s6(f: &Fingerprint) -> Fingerprint {
    all_taxa_perms().iter().map(|perm| f.relabel(perm)).min().expect("nonempty group")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlaneType {
    Eeee,
    EeffA,
    EeffB,
    Effg,
    Eeeg,
    Eefg,
    Fffgg,
    Unrecognized,
}

impl PlaneType {
    pub const ALL: [PlaneType; 8] = [
        PlaneType::Eeee,
        PlaneType::EeffA,
        PlaneType::EeffB,
        PlaneType::Effg,
        PlaneType::Eeeg,
        PlaneType::Eefg,
        PlaneType::Fffgg,
        PlaneType::Unrecognized,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PlaneType::Eeee => "EEEE",
            PlaneType::EeffA => "EEFF(a)",
            PlaneType::EeffB => "EEFF(b)",
            PlaneType::Effg => "EFFG",
            PlaneType::Eeeg => "EEEG",
            PlaneType::Eefg => "EEFG",
            PlaneType::Fffgg => "FFFGG",
            PlaneType::Unrecognized => "Unrecognized",
        }
    }

    pub fn from_name(s: &str) -> Option<PlaneType> {
        PlaneType::ALL.into_iter().find(|t| t.name() == s)
    }
}

impl fmt::Display for PlaneType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One row of the reference table of generic triple types: `Z = 0`,
/// `X = (0, x1, x2)`, `Y = (0, y1, y2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReferenceType {
    pub type_id: usize,
    pub orbit_size: usize,
    pub valency: usize,
    pub x: [i64; 2],
    pub y: [i64; 2],
    pub plane_type: PlaneType,
}

impl ReferenceType {
    pub fn config(&self) -> Config {
        Config::triple_ints(self.x[0], self.x[1], self.y[0], self.y[1])
    }
}

const fn row(
    type_id: usize,
    orbit_size: usize,
    valency: usize,
    x: [i64; 2],
    y: [i64; 2],
    plane_type: PlaneType,
) -> ReferenceType {
    ReferenceType { type_id, orbit_size, valency, x, y, plane_type }
}

pub const REFERENCE_TYPES: [ReferenceType; 17] = [
    row(1, 12, 6, [4, 3], [3, -1], PlaneType::Fffgg),
    row(2, 36, 5, [6, 5], [3, -1], PlaneType::Effg),
    row(3, 36, 5, [4, 5], [2, -1], PlaneType::Fffgg),
    row(4, 36, 4, [6, 7], [2, -1], PlaneType::Effg),
    row(5, 36, 4, [8, 6], [5, 1], PlaneType::Effg),
    row(6, 36, 4, [5, 8], [-1, 5], PlaneType::Eefg),
    row(7, 36, 4, [5, 6], [2, 1], PlaneType::EeffA),
    row(8, 36, 4, [3, 7], [-1, 2], PlaneType::Eefg),
    row(9, 36, 4, [6, 5], [4, 2], PlaneType::EeffA),
    row(10, 36, 4, [5, 6], [3, 1], PlaneType::Effg),
    row(11, 36, 4, [6, 5], [5, 2], PlaneType::Effg),
    row(12, 36, 4, [4, 6], [2, 3], PlaneType::EeffA),
    row(13, 12, 4, [5, 3], [3, -2], PlaneType::Eeeg),
    row(14, 18, 4, [3, 6], [1, 3], PlaneType::EeffB),
    row(15, 18, 4, [3, 6], [2, 3], PlaneType::EeffB),
    row(16, 36, 4, [3, 5], [2, 1], PlaneType::Eefg),
    row(17, 12, 4, [2, 3], [3, 1], PlaneType::Eeeg),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RayKind {
    E,
    F,
    G,
}

/// A coarsest nontrivial matroid subdivision of the hypersimplex.
///
/// `E` rays cut off one vertex `ijk`, `F` rays split along
/// `x_m + x_n = 1`, and `G` rays have three cells around the pairs
/// `ab | cd | ef`, cyclically oriented.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DressianRay {
    pub kind: RayKind,
    pub label: Vec<usize>,
    pub cells: Vec<Vec<usize>>,
}

impl DressianRay {
    /// True iff every cell of `f` lies in a cell of this ray.
    pub fn coarsens(&self, f: &Fingerprint) -> bool {
        f.0.iter().all(|c| self.cells.iter().any(|r| c.iter().all(|i| r.binary_search(i).is_ok())))
    }
}

fn cells_by(pred: impl Fn(&[usize]) -> bool) -> Vec<usize> {
    (0..20).filter(|&i| pred(&ground_set()[i])).collect()
}

fn meet(s: &[usize], t: &[usize]) -> i64 {
    s.iter().filter(|x| t.contains(x)).count() as i64
}

/// The 20 + 15 + 30 rays.
pub fn dressian_rays() -> &'static [DressianRay] {
    static RAYS: OnceLock<Vec<DressianRay>> = OnceLock::new();
    RAYS.get_or_init(|| {
        let mut out = Vec::new();
        for t in subsets(6, 3) {
            let cells = vec![cells_by(|s| meet(s, &t) >= 2), cells_by(|s| meet(s, &t) <= 2)];
            out.push(DressianRay { kind: RayKind::E, label: t, cells });
        }
        for pr in subsets(6, 2) {
            let cells = vec![cells_by(|s| meet(s, &pr) >= 1), cells_by(|s| meet(s, &pr) <= 1)];
            out.push(DressianRay { kind: RayKind::F, label: pr, cells });
        }
        for m in perfect_matchings() {
            for rot in [[0, 1, 2], [0, 2, 1]] {
                let pairs = [m[rot[0]], m[rot[1]], m[rot[2]]];
                let cells = (0..3)
                    .map(|i| {
                        let (a, b) = (pairs[i], pairs[(i + 1) % 3]);
                        cells_by(|s| meet(s, &a) >= 1 && meet(s, &b) <= 1)
                    })
                    .collect();
                let label = pairs.iter().flatten().copied().collect();
                out.push(DressianRay { kind: RayKind::G, label, cells });
            }
        }
        out
    })
}

fn perfect_matchings() -> Vec<[[usize; 2]; 3]> {
    let mut out = Vec::new();
    for b in 1..6 {
        let rest: Vec<usize> = (1..6).filter(|&x| x != b).collect();
        for d in 1..4 {
            let c = rest[0];
            let e: Vec<usize> = rest[1..].iter().copied().filter(|&x| x != rest[d]).collect();
            out.push([[0, b], [c, rest[d]], [e[0], e[1]]]);
        }
    }
    out
}

/// Rays of the cone containing `p`: those whose subdivision `p` refines.
pub fn cone_rays(p: &TropPlucker) -> Result<Vec<&'static DressianRay>, ClassifyError> {
    let f = cone_fingerprint(p)?;
    Ok(dressian_rays().iter().filter(|r| r.coarsens(&f)).collect())
}

/// Names a cone by the kinds of its rays; the two `EEFF` shapes differ in
/// whether the `E` triples are disjoint.
pub fn plane_type_of_rays(rays: &[&DressianRay]) -> PlaneType {
    let count = |k| rays.iter().filter(|r| r.kind == k).count();
    match (count(RayKind::E), count(RayKind::F), count(RayKind::G)) {
        (4, 0, 0) => PlaneType::Eeee,
        (2, 2, 0) => {
            let e: Vec<_> = rays.iter().filter(|r| r.kind == RayKind::E).collect();
            if meet(&e[0].label, &e[1].label) == 0 {
                PlaneType::EeffA
            } else {
                PlaneType::EeffB
            }
        }
        (1, 2, 1) => PlaneType::Effg,
        (3, 0, 1) => PlaneType::Eeeg,
        (2, 1, 1) => PlaneType::Eefg,
        (0, 3, 2) => PlaneType::Fffgg,
        _ => PlaneType::Unrecognized,
    }
}

pub fn classify_plane_type(p: &TropPlucker) -> Result<PlaneType, ClassifyError> {
    Ok(plane_type_of_rays(&cone_rays(p)?))
}

/// A permutation of the points together with one of the coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub point_perm: Vec<usize>,
    pub coord_perm: [usize; 3],
}

impl GroupElement {
    /// All `arity! · 6` elements.
    pub fn all(arity: usize) -> Vec<GroupElement> {
        let mut out = Vec::new();
        for p in (0..arity).permutations(arity) {
            for c in (0..3).permutations(3) {
                out.push(GroupElement { point_perm: p.clone(), coord_perm: [c[0], c[1], c[2]] });
            }
        }
        out
    }

    /// Acts and then moves the last point back to the origin.
    pub fn apply(&self, c: &Config) -> Config {
        c.act(&self.point_perm, self.coord_perm).gauge_fixed()
    }

    pub fn taxa_permutation(&self) -> [usize; 6] {
        TaxaLabeling::induced_permutation(self.coord_perm)
    }
}

fn to_i128(v: &[BigInt]) -> Vec<i128> {
    v.iter().map(|x| x.to_i128().expect("small coordinates")).collect()
}

/// Index of the unique vertex maximizing `<w, .>`, if unique.
fn unique_argmax(vertices: &[Vec<i128>], w: &RationalVec) -> Option<usize> {
    let w = to_i128(&w.primitive_integer());
    let mut best: Option<(i128, usize)> = None;
    let mut tie = false;
    for (i, v) in vertices.iter().enumerate() {
        let s: i128 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
        match best {
            Some((b, _)) if s < b => {}
            Some((b, _)) if s == b => tie = true,
            _ => {
                best = Some((s, i));
                tie = false;
            }
        }
    }
    if tie {
        None
    } else {
        best.map(|(_, i)| i)
    }
}

fn integer_vertices(p: &Polytope) -> Vec<Vec<i128>> {
    p.vertices().iter().map(|v| to_i128(&v.coords().iter().map(|c| c.to_integer()).collect::<Vec<_>>())).collect()
}

/// Everything computed at one vertex of the three-point Newton polytope.
#[derive(Clone, Debug)]
pub struct VertexCone {
    pub vertex: usize,
    pub cone: PolyCone,
    pub interior: Config,
    pub eval: TropEval,
    pub fingerprint: Fingerprint,
    pub class: Fingerprint,
    pub plane_type: PlaneType,
    pub valency: usize,
    pub vertex_figure: Vec<usize>,
    pub orbit: usize,
}

#[derive(Clone, Debug)]
pub struct ConfigTypeRecord {
    pub type_id: usize,
    pub orbit_size: usize,
    pub valency: usize,
    pub representative: Config,
    pub plane_type: PlaneType,
    /// Vertex whose normal cone contains the representative.
    pub vertex: usize,
    pub vertex_figure: Vec<usize>,
    pub members: Vec<usize>,
}

/// The three-point Newton polytope with per-vertex classification and
/// symmetry orbits, aligned to [`REFERENCE_TYPES`].
#[derive(Debug)]
pub struct Atlas {
    polytope: Polytope,
    int_vertices: Vec<Vec<i128>>,
    cones: Vec<VertexCone>,
    types: Vec<ConfigTypeRecord>,
}

impl Atlas {
    pub fn compute() -> Result<Atlas, ClassifyError> {
        let polytope = newton_polytope(3)?;
        let int_vertices = integer_vertices(&polytope);
        let n = polytope.vertices().len();
        let mut valency = vec![0usize; n];
        for e in polytope.faces(1) {
            valency[e[0]] += 1;
            valency[e[1]] += 1;
        }
        let mut cones: Vec<VertexCone> = (0..n)
            .into_par_iter()
            .map(|v| -> Result<VertexCone, ClassifyError> {
                let cone = normal_cone(&polytope, v)?;
                let interior = Config::from_free_coords(&cone.interior_point())?;
                let eval = trop_phi(&interior)?;
                if !eval.generic {
                    return Err(ClassifyError::InteriorTie(v));
                }
                let fingerprint = cone_fingerprint(&eval.raw)?;
                let vertex_figure = cone.vertex_figure_f_vector();
                Ok(VertexCone {
                    vertex: v,
                    cone,
                    interior,
                    eval,
                    class: fingerprint.clone(),
                    fingerprint,
                    plane_type: PlaneType::Unrecognized,
                    valency: valency[v],
                    vertex_figure,
                    orbit: usize::MAX,
                })
            })
            .collect::<Result<_, _>>()?;

        let distinct: BTreeSet<Fingerprint> = cones.iter().map(|c| c.fingerprint.clone()).collect();
        let classes: BTreeMap<Fingerprint, (Fingerprint, PlaneType)> = distinct
            .into_par_iter()
            .map(|f| {
                let class = canonical_class_mod_s6(&f);
                let rays: Vec<_> = dressian_rays().iter().filter(|r| r.coarsens(&f)).collect();
                let ty = plane_type_of_rays(&rays);
                (f, (class, ty))
            })
            .collect();
        for c in cones.iter_mut() {
            let (class, ty) = &classes[&c.fingerprint];
            c.class = class.clone();
            c.plane_type = *ty;
        }

        let group = GroupElement::all(3);
        let images: Vec<Vec<usize>> = cones
            .par_iter()
            .map(|c| {
                group
                    .iter()
                    .map(|g| {
                        unique_argmax(&int_vertices, &g.apply(&c.interior).free_coords())
                            .ok_or(ClassifyError::InteriorTie(c.vertex))
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<_, _>>()?;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (v, imgs) in images.iter().enumerate() {
            for &u in imgs {
                let (a, b) = (find(&mut parent, v), find(&mut parent, u));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut orbits: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..n {
            let r = find(&mut parent, v);
            orbits.entry(r).or_default().push(v);
        }

        let mut types = Vec::new();
        let mut claimed: BTreeSet<usize> = BTreeSet::new();
        for r in &REFERENCE_TYPES {
            let rep = r.config();
            let v = unique_argmax(&int_vertices, &rep.free_coords()).ok_or_else(|| {
                ClassifyError::Alignment(format!("type {} representative is on a boundary", r.type_id))
            })?;
            let root = find(&mut parent, v);
            if !claimed.insert(root) {
                return Err(ClassifyError::Alignment(format!(
                    "type {} falls in an orbit already claimed",
                    r.type_id
                )));
            }
            let members = orbits[&root].clone();
            let e = trop_phi(&rep)?;
            types.push(ConfigTypeRecord {
                type_id: r.type_id,
                orbit_size: members.len(),
                valency: cones[v].valency,
                plane_type: classify_plane_type(&e.raw)?,
                representative: rep,
                vertex: v,
                vertex_figure: cones[v].vertex_figure.clone(),
                members,
            });
        }
        if claimed.len() != orbits.len() {
            return Err(ClassifyError::Alignment(format!(
                "{} orbits but {} reference types",
                orbits.len(),
                claimed.len()
            )));
        }
        for (i, t) in types.iter().enumerate() {
            for &m in &t.members {
                cones[m].orbit = i;
            }
        }
        Ok(Atlas { polytope, int_vertices, cones, types })
    }

    pub fn polytope(&self) -> &Polytope {
        &self.polytope
    }

    pub fn cones(&self) -> &[VertexCone] {
        &self.cones
    }

    /// The 17 types in reference order.
    pub fn types(&self) -> &[ConfigTypeRecord] {
        &self.types
    }

    /// Vertex whose normal cone has `w` in its interior.
    pub fn locate(&self, w: &RationalVec) -> Option<usize> {
        unique_argmax(&self.int_vertices, w)
    }

    /// Type id of a generic triple, `None` on a cone boundary.
    pub fn type_of(&self, c: &Config) -> Option<usize> {
        let v = self.locate(&c.free_coords())?;
        Some(self.types[self.cones[v].orbit].type_id)
    }

    pub fn distinct_fingerprints(&self) -> usize {
        self.cones.iter().map(|c| &c.fingerprint).collect::<BTreeSet<_>>().len()
    }

    pub fn distinct_classes(&self) -> usize {
        self.cones.iter().map(|c| &c.class).collect::<BTreeSet<_>>().len()
    }
}

/// Process-wide atlas, computed on first use.
pub fn shared_atlas() -> Result<&'static Atlas, ClassifyError> {
    static ATLAS: OnceLock<Result<Atlas, ClassifyError>> = OnceLock::new();
    ATLAS.get_or_init(Atlas::compute).as_ref().map_err(Clone::clone)
}

pub fn enumerate_config_types() -> Result<Vec<ConfigTypeRecord>, ClassifyError> {
    Ok(shared_atlas()?.types().to_vec())
}

/// Which pairings attain the max in each three-term Plücker relation.
pub fn relation_signature(p: &TropPlucker) -> Vec<u8> {
    let mut out = Vec::new();
    for s in 0..6usize {
        let rest: Vec<usize> = (0..6).filter(|&t| t != s).collect();
        for q in rest.iter().copied().combinations(4) {
            let e = |a: usize, b: usize| p.get(&[s, a, b]).clone();
            let sums = [
                e(q[0], q[1]) + e(q[2], q[3]),
                e(q[0], q[2]) + e(q[1], q[3]),
                e(q[0], q[3]) + e(q[1], q[2]),
            ];
            let m = sums.iter().max().expect("three").clone();
            out.push(sums.iter().enumerate().fold(0u8, |acc, (i, x)| acc | (u8::from(*x == m) << i)));
        }
    }
    out
}

/// Partition sizes of the 504 cones by fingerprint and by relation signature,
/// and whether the two partitions coincide.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignatureComparison {
    pub fingerprints: usize,
    pub signatures: usize,
    pub joint: usize,
}

impl SignatureComparison {
    pub fn agree(&self) -> bool {
        self.fingerprints == self.joint && self.signatures == self.joint
    }
}

pub fn compare_relation_signatures(atlas: &Atlas) -> SignatureComparison {
    let sigs: Vec<Vec<u8>> = atlas.cones.iter().map(|c| relation_signature(&c.eval.raw)).collect();
    let fps: BTreeSet<&Fingerprint> = atlas.cones.iter().map(|c| &c.fingerprint).collect();
    let distinct_sigs: BTreeSet<&Vec<u8>> = sigs.iter().collect();
    let joint: BTreeSet<(&Fingerprint, &Vec<u8>)> =
        atlas.cones.iter().map(|c| &c.fingerprint).zip(&sigs).collect();
    SignatureComparison { fingerprints: fps.len(), signatures: distinct_sigs.len(), joint: joint.len() }
}

/// Facet normals, in `(X1, X2, Y1, Y2)`, of the cone of triples equivalent
/// to `X = (4, 3)`, `Y = (3, -1)`.
pub const TYPE1_INEQUALITIES: [[i64; 4]; 6] = [
    [1, -1, 0, 0],
    [1, 0, -1, 0],
    [0, 0, 0, -1],
    [-2, 1, 2, 0],
    [-2, 2, 1, 0],
    [-1, 1, 1, 1],
];

#[derive(Clone, Debug)]
pub struct Type1Report {
    pub vertex: usize,
    pub inequalities: Vec<Vec<BigInt>>,
    pub inequalities_match: bool,
    pub rays: usize,
    pub vertex_figure: Vec<usize>,
    /// Vertex figure of each reference type, in reference order.
    pub type_figures: Vec<(usize, Vec<usize>)>,
}

impl Type1Report {
    pub fn has_five_rays(&self) -> bool {
        self.rays == 5
    }

    /// Vertex figure with 8 vertices, 12 edges and 6 facets.
    pub fn type1_is_cube(&self) -> bool {
        self.vertex_figure == [8, 12, 6]
    }

    pub fn types_2_3_are_square_pyramids(&self) -> bool {
        self.type_figures.iter().filter(|(t, _)| (2..=3).contains(t)).all(|(_, f)| f == &[5, 8, 5])
    }

    pub fn others_are_simplices(&self) -> bool {
        self.type_figures.iter().filter(|(t, _)| *t > 3).all(|(_, f)| f == &[4, 6, 4])
    }
}

pub fn type1_cone_check(atlas: &Atlas) -> Result<Type1Report, ClassifyError> {
    let w = Config::triple_ints(4, 3, 3, -1).free_coords();
    let vertex = atlas
        .locate(&w)
        .ok_or_else(|| ClassifyError::Alignment("type 1 representative is on a boundary".into()))?;
    let cone = &atlas.cones[vertex].cone;
    let got: BTreeSet<Vec<BigInt>> = cone.inequalities().iter().cloned().collect();
    let want: BTreeSet<Vec<BigInt>> = TYPE1_INEQUALITIES
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let type_figures = atlas.types.iter().map(|t| (t.type_id, t.vertex_figure.clone())).collect();
    Ok(Type1Report {
        vertex,
        inequalities: cone.inequalities().to_vec(),
        inequalities_match: got == want && cone.inequalities().len() == 6,
        rays: cone.rays().len(),
        vertex_figure: cone.vertex_figure_f_vector(),
        type_figures,
    })
}

#[derive(Clone, Debug)]
pub struct Hilb2Cone {
    pub vertex: usize,
    pub direction: RationalVec,
    pub tree: TreeTopology,
}

/// Node of the cycle: a coarsening of one or more image trees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleNode {
    pub tree: TreeTopology,
    pub node_type: NodeType,
}

#[derive(Clone, Debug)]
pub struct Hilb2Report {
    pub cones: Vec<Hilb2Cone>,
    /// Distinct image trees, sorted.
    pub trees: Vec<TreeTopology>,
    /// Cone indices mapping to each tree.
    pub preimages: Vec<Vec<usize>>,
    pub all_trivalent: bool,
    pub antipodal: bool,
    pub nodes: Vec<CycleNode>,
    /// Per image tree, its Type4 and Type5 coarsenings as node indices.
    pub edges: Vec<Option<(usize, usize)>>,
}

impl Hilb2Report {
    pub fn double_cover(&self) -> bool {
        self.trees.len() == 6 && self.preimages.iter().all(|p| p.len() == 2)
    }

    /// The coarsening graph is a single cycle through six nodes, alternating
    /// between Type4 and Type5 nodes.
    pub fn is_alternating_six_cycle(&self) -> bool {
        let Some(edges) = self.edges.iter().copied().collect::<Option<Vec<_>>>() else {
            return false;
        };
        let n = self.nodes.len();
        if n != 6 || edges.len() != 6 {
            return false;
        }
        let mut deg = vec![0; n];
        for &(a, b) in &edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        if deg.iter().any(|&d| d != 2) {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            if std::mem::replace(&mut seen[x], true) {
                continue;
            }
            for &(a, b) in &edges {
                if a == x {
                    stack.push(b);
                } else if b == x {
                    stack.push(a);
                }
            }
        }
        let fours = self.nodes.iter().filter(|c| c.node_type == NodeType::Type4).count();
        seen.iter().all(|&s| s) && fours == 3
    }
}

fn coarsenings(t: &TreeTopology) -> Vec<TreeTopology> {
    let splits: Vec<_> = t.splits().iter().cloned().collect();
    (1..splits.len())
        .flat_map(|k| splits.iter().cloned().combinations(k))
        .map(|s| TreeTopology::new(t.taxa(), s).expect("subset of compatible splits"))
        .collect()
}

pub fn hilb2_analysis() -> Result<Hilb2Report, ClassifyError> {
    let np = newton_polytope(2)?;
    let mut cones = Vec::new();
    for v in 0..np.vertices().len() {
        let direction = normal_cone(&np, v)?.interior_point();
        let e = trop_psi(&Config::from_free_coords(&direction)?)?;
        if !e.generic {
            return Err(ClassifyError::InteriorTie(v));
        }
        cones.push(Hilb2Cone { vertex: v, direction, tree: topology_from_plucker(&e.plucker)? });
    }
    let all_trivalent = cones.iter().all(|c| c.tree.is_trivalent());
    let mut by_tree: BTreeMap<TreeTopology, Vec<usize>> = BTreeMap::new();
    for (i, c) in cones.iter().enumerate() {
        by_tree.entry(c.tree.clone()).or_default().push(i);
    }
    let centroid2 = np.vertex_centroid().scale(&int(2));
    let antipodal = by_tree.values().all(|idx| {
        idx.len() == 2 && {
            let a = &np.vertices()[cones[idx[0]].vertex];
            let b = &np.vertices()[cones[idx[1]].vertex];
            a.add(b) == centroid2
        }
    });
    let mut nodes: Vec<CycleNode> = Vec::new();
    let mut edges = Vec::new();
    for t in by_tree.keys() {
        let mut ends = [None, None];
        let mut extra = false;
        for c in coarsenings(t) {
            let ty = classify_node_type(&c);
            let slot = match ty {
                NodeType::Type4 => 0,
                NodeType::Type5 => 1,
                _ => continue,
            };
            if ends[slot].is_some() {
                extra = true;
            }
            let idx = match nodes.iter().position(|n| n.tree == c) {
                Some(i) => i,
                None => {
                    nodes.push(CycleNode { tree: c, node_type: ty });
                    nodes.len() - 1
                }
            };
            ends[slot] = Some(idx);
        }
        edges.push(match (ends, extra) {
            ([Some(a), Some(b)], false) => Some((a, b)),
            _ => None,
        });
    }
    let (trees, preimages): (Vec<_>, Vec<_>) = by_tree.into_iter().unzip();
    Ok(Hilb2Report { cones, trees, preimages, all_trivalent, antipodal, nodes, edges })
}

/// Vertex of the three-point Newton polytope whose normal cone contains the
/// triple in its interior; `None` when some minor has a tie.
pub fn selected_vertex(c: &Config) -> Result<Option<Vec<i64>>, ClassifyError> {
    let e = trop_phi(c)?;
    if !e.generic {
        return Ok(None);
    }
    let mut v = vec![0i64; 4];
    for w in e.witnesses.values() {
        for (a, b) in v.iter_mut().zip(term_exponent(3, &w[0])) {
            *a += b;
        }
    }
    Ok(Some(v))
}

fn reference_orbits() -> Result<&'static [BTreeSet<Vec<i64>>], ClassifyError> {
    static ORBITS: OnceLock<Result<Vec<BTreeSet<Vec<i64>>>, ClassifyError>> = OnceLock::new();
    ORBITS
        .get_or_init(|| {
            let group = GroupElement::all(3);
            REFERENCE_TYPES
                .iter()
                .map(|r| {
                    group
                        .iter()
                        .map(|g| {
                            selected_vertex(&g.apply(&r.config()))?
                                .ok_or_else(|| ClassifyError::Alignment(format!("type {} has a tie", r.type_id)))
                        })
                        .collect()
                })
                .collect()
        })
        .as_deref()
        .map_err(Clone::clone)
}

/// Type id of a generic triple from the orbits of the reference vertices,
/// without building the polytope.
pub fn config_type(c: &Config) -> Result<Option<usize>, ClassifyError> {
    let Some(v) = selected_vertex(c)? else {
        return Ok(None);
    };
    let orbits = reference_orbits()?;
    Ok(orbits.iter().position(|o| o.contains(&v)).map(|i| REFERENCE_TYPES[i].type_id))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SliceLabel {
    pub vertex: usize,
    pub type_id: usize,
    pub plane_type: PlaneType,
}

/// Triples `X = (0, 0)`, `Y = y`, `Z = (s, t)`, written with `Z` moved to
/// the origin.
pub fn z_plane(y: &Point2) -> AffinePlane {
    AffinePlane {
        origin: RationalVec::new(vec![int(0), int(0), y.0.clone(), y.1.clone()]),
        u: RationalVec::from_ints([-1, 0, -1, 0]),
        v: RationalVec::from_ints([0, -1, 0, -1]),
    }
}

/// Partition of the `Z`-plane by configuration type. Without `clip` the box
/// covers every bounded cell with margin 5.
pub fn z_slice(
    atlas: &Atlas,
    y: &Point2,
    clip: Option<&ClipBox>,
) -> Result<(ClipBox, Vec<LabeledPolygon<SliceLabel>>), ClassifyError> {
    let plane = z_plane(y);
    let cones: Vec<LabeledCone<SliceLabel>> = atlas
        .cones
        .iter()
        .map(|c| LabeledCone {
            label: SliceLabel {
                vertex: c.vertex,
                type_id: atlas.types[c.orbit].type_id,
                plane_type: c.plane_type,
            },
            cone: c.cone.clone(),
        })
        .collect();
    let clip = match clip {
        Some(b) => b.clone(),
        None => default_clip_box(&cones, &plane, &int(5))?,
    };
    let cells = slice_fan(&cones, &plane, &clip)?;
    for c in &cells {
        let (s, t) = c.centroid();
        if atlas.locate(&plane.at(&s, &t)) != Some(c.label.vertex) {
            return Err(ClassifyError::DegenerateSlice);
        }
    }
    Ok((clip, cells))
}

/// Tropical Plücker vector of a reference type, raw.
pub fn reference_plucker(type_id: usize) -> Option<TropPlucker> {
    let r = REFERENCE_TYPES.iter().find(|r| r.type_id == type_id)?;
    trop_phi(&r.config()).ok().map(|e| e.raw)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_vector_has_one_cell() {
        let s = matroid_subdivision(&TropPlucker::zero(3)).unwrap();
        assert_eq!(s.cells(), &[(0..20).collect::<Vec<_>>()]);
        assert!(s.has_matroid_edges().unwrap());
    }

    #[test]
    fn lineality_does_not_change_subdivision() {
        let p = reference_plucker(1).unwrap();
        let shifted = p.add_lineality(&[int(3), int(-1), int(0), int(7), int(2), int(-5)]);
        assert_eq!(matroid_subdivision(&p).unwrap(), matroid_subdivision(&shifted).unwrap());
        assert_eq!(matroid_subdivision(&p).unwrap(), matroid_subdivision(&p.canonical()).unwrap());
    }

    #[test]
    fn row1_subdivision_is_matroidal_and_covers() {
        let s = matroid_subdivision(&reference_plucker(1).unwrap()).unwrap();
        assert!(s.cells().len() > 1);
        assert!(s.has_matroid_edges().unwrap());
        let covered: BTreeSet<usize> = s.cells().iter().flatten().copied().collect();
        assert_eq!(covered.len(), 20);
    }

    #[test]
    fn same_cone_same_fingerprint() {
        // (5,4,4,-1) satisfies all six type-1 inequalities strictly
        let w = [5i64, 4, 4, -1];
        for r in TYPE1_INEQUALITIES {
            assert!(r.iter().zip(&w).map(|(a, b)| a * b).sum::<i64>() > 0);
        }
        let a = trop_phi(&Config::triple_ints(4, 3, 3, -1)).unwrap();
        let b = trop_phi(&Config::triple_ints(5, 4, 4, -1)).unwrap();
        assert_eq!(cone_fingerprint(&a.raw).unwrap(), cone_fingerprint(&b.raw).unwrap());
    }

    #[test]
    fn rows_1_and_3_share_a_cone() {
        let (p1, p3) = (reference_plucker(1).unwrap(), reference_plucker(3).unwrap());
        let f1 = cone_fingerprint(&p1).unwrap();
        let f3 = cone_fingerprint(&p3).unwrap();
        assert_eq!(f1, f3);
        assert_eq!(relation_signature(&p1), relation_signature(&p3));
        assert_eq!(canonical_class_mod_s6(&f1), canonical_class_mod_s6(&f3));
        let f2 = cone_fingerprint(&reference_plucker(2).unwrap()).unwrap();
        assert_ne!(f1, f2);
    }

    #[test]
    fn classes_of_selected_rows() {
        let class = |t| canonical_class_mod_s6(&cone_fingerprint(&reference_plucker(t).unwrap()).unwrap());
        assert_eq!(class(13), class(17));
        assert_ne!(class(7), class(14));
    }

    #[test]
    fn plane_types_of_representatives() {
        assert_eq!(classify_plane_type(&reference_plucker(1).unwrap()).unwrap(), PlaneType::Fffgg);
        let row6 = trop_phi(&Config::triple_ints(5, 8, -1, 5)).unwrap();
        assert_eq!(classify_plane_type(&row6.raw).unwrap(), PlaneType::Eefg);
    }

    /// Heights `-1` on the listed subsets, `0` elsewhere.
    fn lowered(sets: &[&[usize]]) -> TropPlucker {
        TropPlucker::from_fn(3, (0..6).collect(), |s| int(-i64::from(sets.contains(&s))))
    }

    #[test]
    fn ray_counts_and_heights() {
        let rays = dressian_rays();
        let count = |k| rays.iter().filter(|r| r.kind == k).count();
        assert_eq!((count(RayKind::E), count(RayKind::F), count(RayKind::G)), (20, 15, 30));
        for r in rays {
            let covered: BTreeSet<usize> = r.cells.iter().flatten().copied().collect();
            assert_eq!(covered.len(), 20);
        }
        let e = cone_fingerprint(&lowered(&[&[0, 3, 4]])).unwrap();
        assert_eq!(e.0, rays.iter().find(|r| r.label == [0, 3, 4]).unwrap().cells.iter().cloned().sorted().collect::<Vec<_>>());
        let quad: Vec<Vec<usize>> = subsets(6, 3).into_iter().filter(|s| s.contains(&0) && s.contains(&1)).collect();
        let q: Vec<&[usize]> = quad.iter().map(|v| v.as_slice()).collect();
        let f = cone_fingerprint(&lowered(&q)).unwrap();
        let fr = rays.iter().find(|r| r.kind == RayKind::F && r.label == [0, 1]).unwrap();
        assert_eq!(f.0, fr.cells.iter().cloned().sorted().collect::<Vec<_>>());
    }

    #[test]
    fn four_e_rays_give_eeee() {
        let p = lowered(&[&[0, 1, 2], &[0, 3, 4], &[1, 3, 5], &[2, 4, 5]]);
        assert!(p.satisfies_three_term_relations());
        assert_eq!(cone_fingerprint(&p).unwrap().cell_count(), 5);
        assert_eq!(classify_plane_type(&p).unwrap(), PlaneType::Eeee);
    }

    #[test]
    fn plane_type_names_round_trip() {
        for t in PlaneType::ALL {
            assert_eq!(PlaneType::from_name(t.name()), Some(t));
        }
    }

    #[test]
    fn group_has_36_elements_and_consistent_taxa_action() {
        let g = GroupElement::all(3);
        assert_eq!(g.len(), 36);
        assert_eq!(GroupElement::all(2).len(), 12);
        let c = Config::triple_ints(4, 3, 3, -1);
        let f = cone_fingerprint(&trop_phi(&c).unwrap().raw).unwrap();
        for e in &g {
            let img = trop_phi(&e.apply(&c)).unwrap();
            assert_eq!(cone_fingerprint(&img.raw).unwrap(), f.relabel(&e.taxa_permutation()));
        }
    }

    #[test]
    fn relation_signature_is_lineality_invariant() {
        let p = reference_plucker(5).unwrap();
        let q = p.add_lineality(&[int(1), int(2), int(3), int(4), int(5), int(6)]);
        assert_eq!(relation_signature(&p), relation_signature(&q));
        assert_eq!(relation_signature(&p).len(), 30);
    }

    #[test]
    fn two_point_analysis() {
        let r = hilb2_analysis().unwrap();
        assert_eq!(r.cones.len(), 12);
        assert!(r.all_trivalent);
        assert!(r.double_cover());
        assert!(r.antipodal);
        assert!(r.is_alternating_six_cycle());
    }
}

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};
use thiserror::Error;
use tropconic::classify::*;
use tropconic::exactgeom::{LabeledPolygon, Point2, Rational, RationalVec};
use tropconic::trees::{tree_arrangement, TreeTopology};
use tropconic::tropical::*;
use tropconic::verify::*;

use crate::input::{self, InputError};
use crate::svg;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

fn failed(e: impl std::fmt::Display) -> CliError {
    CliError::Failed(e.to_string())
}

/// Input echo, results, and whether every check in the results held.
pub struct Outcome {
    pub input: Value,
    pub results: Value,
    pub ok: bool,
}

fn rat(r: &Rational) -> Value {
    Value::String(r.to_string())
}

fn rats(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rat).collect())
}

fn key(s: &[usize]) -> String {
    s.iter().map(|i| i.to_string()).collect()
}

fn plucker(p: &TropPlucker) -> Value {
    Value::Object(p.entries().iter().map(|(s, v)| (key(s), rat(v))).collect::<Map<_, _>>())
}

fn tree(t: &TreeTopology) -> Value {
    json!({
        "splits": t.splits().iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        "newick": t.newick(),
        "trivalent": t.is_trivalent(),
    })
}

fn config(c: &Config) -> Value {
    Value::Array(c.points().iter().map(|p| rats(p.coords())).collect())
}

fn cells(f: &Fingerprint) -> Value {
    let ground = subsets(6, 3);
    Value::Array(
        f.0.iter()
            .map(|c| Value::Array(c.iter().map(|&i| Value::String(key(&ground[i]))).collect()))
            .collect(),
    )
}

fn point2(p: &Point2) -> Value {
    json!([rat(&p.0), rat(&p.1)])
}

pub fn eval(points: &str, arity: Option<usize>) -> Result<Outcome, CliError> {
    let c = input::points(points)?;
    if let Some(k) = arity {
        if k != c.arity() {
            return Err(InputError::Arity { expected: if k == 2 { "2" } else { "3" }, found: c.arity() }.into());
        }
    }
    let e = if c.arity() == 2 { trop_psi(&c) } else { trop_phi(&c) }.map_err(failed)?;
    let witnesses: Map<String, Value> = e
        .witnesses
        .iter()
        .map(|(s, w)| (key(s), json!(w)))
        .collect();
    let results = json!({
        "arity": c.arity(),
        "points": config(&c),
        "gaugeCoordinates": rats(c.free_coords().coords()),
        "raw": plucker(&e.raw),
        "reduced": plucker(&e.plucker),
        "generic": e.generic,
        "ties": e.ties().iter().map(|s| key(s)).collect::<Vec<_>>(),
        "witnesses": witnesses,
        "threeTermRelations": e.raw.satisfies_three_term_relations(),
    });
    Ok(Outcome { input: json!({ "points": points, "arity": arity }), results, ok: true })
}

pub fn classify(points: &str) -> Result<Outcome, CliError> {
    let c = input::points(points)?;
    if c.arity() != 3 {
        return Err(InputError::Arity { expected: "3", found: c.arity() }.into());
    }
    let e = trop_phi(&c).map_err(failed)?;
    let fingerprint = cone_fingerprint(&e.raw).map_err(failed)?;
    let class = canonical_class_mod_s6(&fingerprint);
    let rays = cone_rays(&e.raw).map_err(failed)?;
    let plane_type = plane_type_of_rays(&rays);
    let type_id = match config_type(&c).map_err(failed)? {
        Some(t) => json!(t),
        None => json!("Boundary"),
    };
    let arrangement = tree_arrangement(&e.raw).map_err(failed)?;
    let results = json!({
        "points": config(&c),
        "generic": e.generic,
        "ties": e.ties().iter().map(|s| key(s)).collect::<Vec<_>>(),
        "typeId": type_id,
        "planeType": plane_type.name(),
        "rays": rays.iter().map(|r| format!("{:?}{}", r.kind, key(&r.label))).collect::<Vec<_>>(),
        "fingerprint": cells(&fingerprint),
        "class": cells(&class),
        "treeArrangement": arrangement.trees().iter().map(tree).collect::<Vec<_>>(),
        "vertex": selected_vertex(&c).map_err(failed)?,
    });
    Ok(Outcome { input: json!({ "points": points }), results, ok: true })
}

pub fn polytope(arity: usize) -> Result<Outcome, CliError> {
    let np = newton_polytope(arity).map_err(failed)?;
    let f = np.f_vector();
    let expected: &[usize] = if arity == 2 { &[12, 12] } else { &[504, 1056, 684, 132] };
    let mut results = json!({
        "arity": arity,
        "dimension": np.dim(),
        "fVector": f,
        "expectedFVector": expected,
        "vertices": np.vertices().iter().map(|v| rats(v.coords())).collect::<Vec<_>>(),
    });
    let mut ok = f == expected && np.dim() == 2 * (arity - 1);
    if arity == 2 {
        let c2 = np.vertex_centroid().scale(&tropconic::exactgeom::int(2));
        let set: BTreeSet<&RationalVec> = np.vertices().iter().collect();
        let symmetric = np.vertices().iter().all(|v| set.contains(&c2.sub(v)));
        results["centrallySymmetric"] = json!(symmetric);
        ok &= symmetric;
    } else {
        let valency: Vec<usize> = (0..np.vertices().len()).map(|v| np.neighbors(v).len()).collect();
        results["valencies"] = json!(valency);
    }
    Ok(Outcome { input: json!({ "arity": arity }), results, ok })
}

pub fn table1() -> Result<Outcome, CliError> {
    let atlas = shared_atlas().map_err(failed)?;
    let mut ok = true;
    let rows: Vec<Value> = atlas
        .types()
        .iter()
        .zip(&REFERENCE_TYPES)
        .map(|(t, r)| {
            let generic = trop_phi(&t.representative).map(|e| e.generic).unwrap_or(false);
            let row_ok = t.type_id == r.type_id
                && t.orbit_size == r.orbit_size
                && t.valency == r.valency
                && t.plane_type == r.plane_type
                && generic;
            ok &= row_ok;
            json!({
                "typeId": t.type_id,
                "orbitSize": t.orbit_size,
                "valency": t.valency,
                "representative": { "X": r.x, "Y": r.y, "Z": [0, 0] },
                "planeType": t.plane_type.name(),
                "vertex": rats(atlas.polytope().vertices()[t.vertex].coords()),
                "vertexFigure": t.vertex_figure,
                "matchesReference": row_ok,
            })
        })
        .collect();
    let total: usize = atlas.types().iter().map(|t| t.orbit_size).sum();
    let (fps, classes) = (atlas.distinct_fingerprints(), atlas.distinct_classes());
    ok &= total == 504 && fps == 48 && classes == 6;
    let results = json!({
        "rows": rows,
        "totals": { "vertices": total, "distinctCones": fps, "distinctClasses": classes },
        "matchesReference": ok,
    });
    Ok(Outcome { input: json!({}), results, ok })
}

pub fn hilb2() -> Result<Outcome, CliError> {
    let h = hilb2_analysis().map_err(failed)?;
    let cones: Vec<Value> = h
        .cones
        .iter()
        .map(|c| json!({ "vertex": c.vertex, "direction": rats(c.direction.coords()), "tree": tree(&c.tree) }))
        .collect();
    let trees: Vec<Value> = h
        .trees
        .iter()
        .zip(&h.preimages)
        .map(|(t, p)| json!({ "tree": tree(t), "cones": p }))
        .collect();
    let nodes: Vec<Value> = h
        .nodes
        .iter()
        .map(|n| json!({ "tree": tree(&n.tree), "nodeType": n.node_type.to_string() }))
        .collect();
    let checks = json!({
        "allTrivalent": h.all_trivalent,
        "doubleCover": h.double_cover(),
        "antipodal": h.antipodal,
        "alternatingSixCycle": h.is_alternating_six_cycle(),
    });
    let ok = h.all_trivalent && h.double_cover() && h.antipodal && h.is_alternating_six_cycle();
    let results = json!({
        "cones": cones,
        "trees": trees,
        "cycle": { "nodes": nodes, "edges": h.edges },
        "checks": checks,
    });
    Ok(Outcome { input: json!({}), results, ok })
}

fn cross(o: &Point2, a: &Point2, b: &Point2) -> Rational {
    (&a.0 - &o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&b.0 - &o.0)
}

fn share_edge(p: &[Point2], q: &[Point2]) -> bool {
    let edges = |v: &[Point2]| -> Vec<(Point2, Point2)> {
        (0..v.len()).map(|i| (v[i].clone(), v[(i + 1) % v.len()].clone())).collect()
    };
    let zero = Rational::from_integer(0.into());
    for (a, b) in edges(p) {
        let d = (&b.0 - &a.0, &b.1 - &a.1);
        let len = &d.0 * &d.0 + &d.1 * &d.1;
        for (c, e) in edges(q) {
            if cross(&a, &b, &c) != zero || cross(&a, &b, &e) != zero {
                continue;
            }
            let t = |x: &Point2| (&x.0 - &a.0) * &d.0 + (&x.1 - &a.1) * &d.1;
            let (tc, te) = (t(&c), t(&e));
            let lo = tc.clone().min(te.clone()).max(zero.clone());
            let hi = tc.max(te).min(len.clone());
            if lo < hi {
                return true;
            }
        }
    }
    false
}

/// Edges of the cell adjacency graph and whether it is connected.
fn adjacency<L>(cells: &[LabeledPolygon<L>]) -> (Vec<[usize; 2]>, bool) {
    let n = cells.len();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if share_edge(&cells[i].vertices, &cells[j].vertices) {
                edges.push([i, j]);
            }
        }
    }
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0]);
    while let Some(x) = queue.pop_front() {
        if x >= n || std::mem::replace(&mut seen[x], true) {
            continue;
        }
        for e in &edges {
            if e[0] == x {
                queue.push_back(e[1]);
            } else if e[1] == x {
                queue.push_back(e[0]);
            }
        }
    }
    (edges, seen.iter().all(|&s| s))
}

pub fn slice(y: &str, clip: Option<&str>, svg_out: Option<&Path>) -> Result<Outcome, CliError> {
    let yp = input::plane_point(y)?;
    let clip = clip.map(input::clip_box).transpose()?;
    let atlas = shared_atlas().map_err(failed)?;
    let (clip, cells) = match z_slice(atlas, &yp, clip.as_ref()) {
        Err(ClassifyError::DegenerateSlice) => {
            return Err(InputError::Degenerate(format!("Y = {y} puts the whole plane on cone boundaries")).into())
        }
        r => r.map_err(failed)?,
    };
    let area = cells.iter().fold(Rational::from_integer(0.into()), |acc, c| acc + c.area());
    let tiles = area == clip.area();
    let (edges, connected) = adjacency(&cells);
    let planar_bound = cells.len() < 3 || edges.len() <= 3 * cells.len() - 6;
    let kinds: BTreeSet<PlaneType> = cells.iter().map(|c| c.label.plane_type).collect();
    let mut per_type: BTreeMap<usize, usize> = BTreeMap::new();
    for c in &cells {
        *per_type.entry(c.label.type_id).or_default() += 1;
    }
    let cell_json: Vec<Value> = cells
        .iter()
        .map(|c| {
            json!({
                "vertex": c.label.vertex,
                "typeId": c.label.type_id,
                "planeType": c.label.plane_type.name(),
                "vertices": c.vertices.iter().map(point2).collect::<Vec<_>>(),
            })
        })
        .collect();
    if let Some(path) = svg_out {
        let title = format!("Z-plane slice at X = (0,0), Y = ({},{})", yp.0, yp.1);
        std::fs::write(path, svg::render(&clip, &cells, &title))
            .map_err(|e| failed(format!("{}: {e}", path.display())))?;
    }
    let results = json!({
        "y": point2(&yp),
        "box": { "min": point2(&clip.min), "max": point2(&clip.max) },
        "cells": cell_json,
        "planeTypes": kinds.iter().map(|k| k.name()).collect::<Vec<_>>(),
        "cellsPerType": per_type,
        "adjacency": { "edges": edges, "connected": connected, "planarEdgeBound": planar_bound },
        "tilesBox": tiles,
        "svgDecimals": 6,
    });
    let input = json!({
        "y": y,
        "box": { "min": point2(&clip.min), "max": point2(&clip.max) },
        "svg": svg_out.map(|p| p.display().to_string()),
    });
    Ok(Outcome { input, results, ok: tiles && connected && planar_bound })
}

fn ideal_json(r: &IdealReport) -> Value {
    json!({
        "name": r.name,
        "convention": r.convention.name(),
        "allVanish": r.all_vanish(),
        "generators": r.checks.iter().map(|c| json!({
            "index": c.index,
            "generator": c.text,
            "vanishes": c.vanishes(),
            "residualTerms": c.residual_terms,
        })).collect::<Vec<_>>(),
    })
}

pub fn verify(samples: usize, seed: u64) -> Result<Outcome, CliError> {
    let i2 = IdealSpec::i2();
    let i3 = IdealSpec::i3_sample();
    let mut ok = true;
    let (conv, i2_json) = match resolve_convention(&i2).map_err(failed)? {
        Ok(r) => (Some(r.convention), ideal_json(&r)),
        Err(tried) => {
            ok = false;
            (None, Value::Array(tried.iter().map(ideal_json).collect()))
        }
    };
    let i3_report = verify_ideal(&i3, SignConvention::PlainMinor).map_err(failed)?;
    ok &= i3_report.all_vanish();
    let mut detected = 0;
    let mut total = 0;
    for (spec, c) in [(&i2, conv.unwrap_or(SignConvention::PlainMinor)), (&i3, SignConvention::PlainMinor)] {
        for i in 0..spec.generators.len() {
            total += 1;
            if negative_control(spec, i, c).map_err(failed)? {
                detected += 1;
            }
        }
    }
    ok &= detected == total;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut generic, mut failures) = (0, Vec::new());
    for n in 0..samples {
        let pts: Vec<TropPoint> =
            (0..3).map(|_| TropPoint::from_ints([0; 3].map(|_| rng.gen_range(-20..=20)))).collect();
        let c = Config::new(pts).expect("three points");
        let e = trop_phi(&c).map_err(failed)?;
        let pair = Config::new(c.points()[..2].to_vec()).expect("two points");
        let e2 = trop_psi(&pair).map_err(failed)?;
        for (spec, ev) in [(&i3, &e), (&i2, &e2)] {
            if !ev.generic {
                continue;
            }
            generic += 1;
            for (i, g) in spec.generators.iter().enumerate() {
                if !tropical_vanishing(spec, g, &ev.raw).map_err(failed)? {
                    failures.push(json!({ "sample": n, "ideal": spec.name, "generator": i }));
                }
            }
        }
    }
    ok &= failures.is_empty();
    let results = json!({
        "ideals": [i2_json, ideal_json(&i3_report)],
        "resolvedConvention": conv.map(|c| c.name()),
        "negativeControl": { "detected": detected, "total": total },
        "tropicalFuzz": { "samples": samples, "seed": seed, "genericImages": generic, "failures": failures },
    });
    Ok(Outcome { input: json!({ "samples": samples, "seed": seed }), results, ok })
}

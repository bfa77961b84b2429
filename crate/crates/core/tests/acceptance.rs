//! One check per acceptance criterion. Runs without the libtest harness so the
//! pass/fail lines are always printed.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tropconic::classify::*;
use tropconic::exactgeom::*;
use tropconic::trees::{quartet_split, restricted_subvector};
use tropconic::tropical::*;
use tropconic::verify::*;

type Outcome = Result<String, String>;

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c1_twelve_gon() -> Outcome {
    let t = Instant::now();
    let np = newton_polytope(2).map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    let c2 = np.vertex_centroid().scale(&int(2));
    let verts: BTreeSet<&RationalVec> = np.vertices().iter().collect();
    let symmetric = np.vertices().iter().all(|v| verts.contains(&c2.sub(v)));
    let f = np.f_vector();
    ensure(
        f == [12, 12] && symmetric && elapsed < Duration::from_secs(1),
        format!("f-vector {f:?}, centrally symmetric {symmetric}, {elapsed:.2?}"),
    )
}

fn c2_f_vector(atlas: &Atlas) -> Outcome {
    let p = atlas.polytope();
    let f = p.f_vector();
    ensure(p.dim() == 4 && f == [504, 1056, 684, 132], format!("dim {}, f-vector {f:?}", p.dim()))
}

fn c3_orbits(atlas: &Atlas) -> Outcome {
    let types = atlas.types();
    let sizes: Vec<usize> = types.iter().map(|t| t.orbit_size).collect();
    let valencies: Vec<usize> = types.iter().map(|t| t.valency).collect();
    let mut multiset = sizes.clone();
    multiset.sort_unstable();
    let mut want = vec![12, 12, 12, 18, 18];
    want.extend([36; 12]);
    let rows_match = types.iter().zip(&REFERENCE_TYPES).all(|(t, r)| {
        t.type_id == r.type_id && t.orbit_size == r.orbit_size && t.valency == r.valency
    });
    let covered: BTreeSet<usize> = types.iter().flat_map(|t| t.members.iter().copied()).collect();
    let head = valencies[..3] == [6, 5, 5] && valencies[3..].iter().all(|&v| v == 4);
    ensure(
        types.len() == 17 && multiset == want && rows_match && head && covered.len() == 504,
        format!("{} orbits, sizes {sizes:?}, valencies {valencies:?}", types.len()),
    )
}

fn c4_fingerprints(atlas: &Atlas) -> Outcome {
    let fps = atlas.distinct_fingerprints();
    let classes = atlas.distinct_classes();
    let kinds: BTreeSet<PlaneType> = atlas.cones().iter().map(|c| c.plane_type).collect();
    let no_eeee = !kinds.contains(&PlaneType::Eeee) && !kinds.contains(&PlaneType::Unrecognized);
    ensure(
        fps == 48 && classes == 6 && no_eeee,
        format!("{fps} fingerprints, {classes} classes, types {:?}", kinds.iter().map(|k| k.name()).collect::<Vec<_>>()),
    )
}

fn c5_plane_types(atlas: &Atlas) -> Outcome {
    let mut wrong = Vec::new();
    for r in &REFERENCE_TYPES {
        let e = trop_phi(&r.config()).map_err(|e| e.to_string())?;
        let got = classify_plane_type(&e.raw).map_err(|e| e.to_string())?;
        let in_atlas = atlas.types()[r.type_id - 1].plane_type;
        if !e.generic || got != r.plane_type || in_atlas != r.plane_type {
            wrong.push(format!("row {} gave {got}", r.type_id));
        }
    }
    let a: BTreeSet<usize> = [7, 9, 12].into_iter().collect();
    let split_ok = REFERENCE_TYPES
        .iter()
        .filter(|r| matches!(r.plane_type, PlaneType::EeffA | PlaneType::EeffB))
        .all(|r| a.contains(&r.type_id) == (r.plane_type == PlaneType::EeffA));
    ensure(wrong.is_empty() && split_ok, format!("17 rows checked, mismatches {wrong:?}"))
}

fn c6_type1_cone(atlas: &Atlas) -> Outcome {
    let r = type1_cone_check(atlas).map_err(|e| e.to_string())?;
    let clauses = [
        ("six inequalities", r.inequalities_match),
        ("5 rays", r.has_five_rays()),
        ("type 1 cube (8 vertices, 12 edges, 6 facets)", r.type1_is_cube()),
        ("types 2-3 square pyramids", r.types_2_3_are_square_pyramids()),
        ("others simplices", r.others_are_simplices()),
    ];
    let failed: Vec<&str> = clauses.iter().filter(|c| !c.1).map(|c| c.0).collect();
    ensure(
        failed.is_empty(),
        format!(
            "{} rays, type-1 vertex figure {:?}; failed clauses {failed:?}",
            r.rays, r.vertex_figure
        ),
    )
}

fn c7_two_points() -> Outcome {
    let h = hilb2_analysis().map_err(|e| e.to_string())?;
    ensure(
        h.cones.len() == 12 && h.all_trivalent && h.double_cover() && h.antipodal && h.is_alternating_six_cycle(),
        format!(
            "{} cones, {} trees, double cover {}, antipodal {}, alternating 6-cycle {}",
            h.cones.len(),
            h.trees.len(),
            h.double_cover(),
            h.antipodal,
            h.is_alternating_six_cycle()
        ),
    )
}

fn c8_ideals() -> Outcome {
    let i2 = IdealSpec::i2();
    let i3 = IdealSpec::i3_sample();
    let resolved = resolve_convention(&i2).map_err(|e| e.to_string())?;
    let Ok(report) = resolved else {
        return Err("no sign convention makes all I2 generators vanish".into());
    };
    let conv = report.convention;
    let i3_ok = verify_ideal(&i3, SignConvention::PlainMinor).map_err(|e| e.to_string())?.all_vanish();
    let mut controls = 0;
    for (spec, c) in [(&i2, conv), (&i3, SignConvention::PlainMinor)] {
        for i in 0..spec.generators.len() {
            if negative_control(spec, i, c).map_err(|e| e.to_string())? {
                controls += 1;
            }
        }
    }
    let total = i2.generators.len() + i3.generators.len();
    ensure(
        report.checks.len() == 45 && report.all_vanish() && i3_ok && controls == total,
        format!("I2 vanishes under {}, I3 sample vanishes {i3_ok}, corrupted generators detected {controls}/{total}", conv.name()),
    )
}

fn c9_random_images() -> Outcome {
    let i2 = IdealSpec::i2();
    let i3 = IdealSpec::i3_sample();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut failures = Vec::new();
    let (mut generic3, mut generic2) = (0, 0);
    for n in 0..1000 {
        let pts: Vec<TropPoint> =
            (0..3).map(|_| TropPoint::from_ints([0; 3].map(|_| rng.gen_range(-20..=20)))).collect();
        let c = Config::new(pts.clone()).expect("three points");
        let e = trop_phi(&c).map_err(|e| e.to_string())?;
        if !e.raw.satisfies_three_term_relations() {
            failures.push(format!("#{n}: three-term relation"));
        }
        for t in 0..6 {
            let sub = restricted_subvector(&e.raw, t).map_err(|e| e.to_string())?;
            for q in itertools::Itertools::combinations(sub.taxa().iter().copied(), 4) {
                if quartet_split(&sub, q.clone().try_into().expect("four")).is_err() {
                    failures.push(format!("#{n}: four-point at taxon {t}, quartet {q:?}"));
                }
            }
        }
        if e.generic {
            generic3 += 1;
            for (i, g) in i3.generators.iter().enumerate() {
                if !tropical_vanishing(&i3, g, &e.raw).map_err(|e| e.to_string())? {
                    failures.push(format!("#{n}: I3 generator {i}"));
                }
            }
        }
        let pair = Config::new(pts[..2].to_vec()).expect("two points");
        let e2 = trop_psi(&pair).map_err(|e| e.to_string())?;
        if e2.generic {
            generic2 += 1;
            for (i, g) in i2.generators.iter().enumerate() {
                if !tropical_vanishing(&i2, g, &e2.raw).map_err(|e| e.to_string())? {
                    failures.push(format!("#{n}: I2 generator {i}"));
                }
            }
        }
    }
    ensure(
        failures.is_empty(),
        format!(
            "1000 triples ({generic3} generic), {generic2} generic pairs, failures {:?}",
            &failures[..failures.len().min(5)]
        ),
    )
}

fn c10_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut mismatches = Vec::new();
    let mut by_dim = BTreeMap::new();
    for n in 0..210 {
        let d = 2 + n % 3;
        let a = common::random_points(&mut rng, d, 4);
        let b = common::random_points(&mut rng, d, 4);
        *by_dim.entry(d).or_insert(0) += 1;
        if let Some(m) = common::check_instance(&a, &b) {
            mismatches.push(m);
        }
    }
    ensure(mismatches.is_empty(), format!("instances per dimension {by_dim:?}, mismatches {mismatches:?}"))
}

fn c11_slice(atlas: &Atlas) -> Outcome {
    let (clip, cells) =
        z_slice(atlas, &(int(2), int(3)), Some(&ClipBox::square(-6, 10))).map_err(|e| e.to_string())?;
    let kinds: BTreeSet<PlaneType> = cells.iter().map(|c| c.label.plane_type).collect();
    let area = cells.iter().fold(int(0), |acc, c| acc + c.area());
    ensure(
        kinds.len() == 6 && !kinds.contains(&PlaneType::Eeee),
        format!(
            "{} cells, plane types {:?}, covered area {area} of {}",
            cells.len(),
            kinds.iter().map(|k| k.name()).collect::<Vec<_>>(),
            clip.area()
        ),
    )
}

fn main() -> ExitCode {
    let t = Instant::now();
    let atlas = shared_atlas().expect("atlas");
    println!("atlas of the three-point Newton polytope built in {:.1?}", t.elapsed());
    type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);
    let criteria: Vec<Criterion> = vec![
        ("two-point Newton polygon is a symmetric 12-gon", Box::new(c1_twelve_gon)),
        ("three-point Newton polytope f-vector", Box::new(|| c2_f_vector(atlas))),
        ("17 vertex orbits with table sizes and valencies", Box::new(|| c3_orbits(atlas))),
        ("48 fingerprints, 6 classes, no EEEE", Box::new(|| c4_fingerprints(atlas))),
        ("table representatives give the listed plane types", Box::new(|| c5_plane_types(atlas))),
        ("type-1 normal cone and vertex figures", Box::new(|| c6_type1_cone(atlas))),
        ("two-point trees double cover an alternating 6-cycle", Box::new(c7_two_points)),
        ("ideal generators expand to zero", Box::new(c8_ideals)),
        ("random images satisfy the tropical relations", Box::new(c9_random_images)),
        ("hull and Minkowski sums match brute-force oracles", Box::new(c10_oracles)),
        ("slice at Y=(2,3) shows six plane types, no EEEE", Box::new(|| c11_slice(atlas))),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {:>2} {tag}: {name} [{:.1?}] {detail}", i + 1, t.elapsed());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

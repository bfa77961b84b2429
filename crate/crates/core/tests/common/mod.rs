#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::Rng;
use tropconic::exactgeom::{convex_hull, minkowski_sum, rank, Polytope, RationalVec};

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn det3(m: [[i128; 3]; 3]) -> i128 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Generalized cross product of `d - 1` vectors in dimension `d <= 4`.
fn cross(rows: &[[i128; 4]], d: usize) -> [i128; 4] {
    let mut n = [0i128; 4];
    for (j, out) in n.iter_mut().enumerate().take(d) {
        let cols: Vec<usize> = (0..d).filter(|&c| c != j).collect();
        let minor = match d {
            2 => rows[0][cols[0]],
            3 => rows[0][cols[0]] * rows[1][cols[1]] - rows[0][cols[1]] * rows[1][cols[0]],
            _ => det3([0, 1, 2].map(|r| [0, 1, 2].map(|c| rows[r][cols[c]]))),
        };
        *out = if j % 2 == 0 { minor } else { -minor };
    }
    n
}

fn int_rank(rows: &[Vec<i128>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let (a, b) = (m[r][c], m[i][c]);
                let row: Vec<i128> = (0..cols).map(|k| a * m[i][k] - b * m[r][k]).collect();
                let g = row.iter().fold(0, |g, &x| gcd(g, x)).max(1);
                m[i] = row.into_iter().map(|x| x / g).collect();
            }
        }
        r += 1;
    }
    r
}

/// Vertices and facets `(n, c)` with `n·x >= c`, by testing every hyperplane
/// through `d` of the points.
pub struct BruteHull {
    pub vertices: BTreeSet<Vec<i64>>,
    pub facets: BTreeSet<(Vec<i64>, i64)>,
}

pub fn brute_hull(pts: &[Vec<i64>]) -> BruteHull {
    let d = pts[0].len();
    let p: Vec<Vec<i128>> = pts.iter().map(|v| v.iter().map(|&x| x as i128).collect()).collect();
    assert!((2..=4).contains(&d));
    let q: Vec<[i128; 4]> = p
        .iter()
        .map(|v| {
            let mut a = [0i128; 4];
            a[..d].copy_from_slice(v);
            a
        })
        .collect();
    let dot = |n: &[i128; 4], x: &[i128; 4]| (0..4).map(|i| n[i] * x[i]).sum::<i128>();
    let mut facets: BTreeSet<(Vec<i128>, i128)> = BTreeSet::new();
    for combo in itertools::Itertools::combinations(0..q.len(), d) {
        let base = q[combo[0]];
        let diffs: Vec<[i128; 4]> =
            combo[1..].iter().map(|&i| std::array::from_fn(|k| q[i][k] - base[k])).collect();
        let mut n = cross(&diffs, d);
        let g = n.iter().fold(0, |g, &x| gcd(g, x));
        if g == 0 {
            continue;
        }
        n.iter_mut().for_each(|x| *x /= g);
        let c = dot(&n, &base);
        let (mut above, mut below) = (false, false);
        for x in &q {
            let v = dot(&n, x);
            above |= v > c;
            below |= v < c;
            if above && below {
                break;
            }
        }
        if !below {
            facets.insert((n[..d].to_vec(), c));
        } else if !above {
            facets.insert((n[..d].iter().map(|x| -x).collect(), -c));
        }
    }
    let mut vertices = BTreeSet::new();
    for x in &p {
        let tight: Vec<Vec<i128>> = facets
            .iter()
            .filter(|(n, c)| n.iter().zip(x).map(|(a, b)| a * b).sum::<i128>() == *c)
            .map(|(n, _)| n.clone())
            .collect();
        if int_rank(&tight) == d {
            vertices.insert(x.iter().map(|&v| v as i64).collect());
        }
    }
    let facets = facets
        .into_iter()
        .map(|(n, c)| (n.into_iter().map(|x| x as i64).collect(), c as i64))
        .collect();
    BruteHull { vertices, facets }
}

pub fn to_rv(pts: &[Vec<i64>]) -> Vec<RationalVec> {
    pts.iter().map(|p| RationalVec::from_ints(p.iter().copied())).collect()
}

pub fn int_coords(v: &RationalVec) -> Vec<i64> {
    v.coords().iter().map(|c| c.to_integer().to_i64().expect("small")).collect()
}

pub fn hull_vertices(p: &Polytope) -> BTreeSet<Vec<i64>> {
    p.vertices().iter().map(int_coords).collect()
}

pub fn hull_facets(p: &Polytope) -> BTreeSet<(Vec<i64>, i64)> {
    p.facets()
        .iter()
        .map(|f| {
            let n: Vec<i64> = f.normal.iter().map(|x: &BigInt| x.to_i64().expect("small")).collect();
            (n, -f.offset.to_integer().to_i64().expect("integral offset"))
        })
        .collect()
}

pub fn is_full_dim(pts: &[Vec<i64>]) -> bool {
    let d = pts[0].len();
    let diffs: Vec<RationalVec> = pts[1..]
        .iter()
        .map(|p| RationalVec::from_ints(p.iter().zip(&pts[0]).map(|(a, b)| a - b)))
        .collect();
    rank(&diffs) == d
}

/// Full-dimensional integer point set in dimension `d` with at most 8 points.
pub fn random_points<R: Rng>(rng: &mut R, d: usize, range: i64) -> Vec<Vec<i64>> {
    loop {
        let n = rng.gen_range(d + 1..=8);
        let pts: Vec<Vec<i64>> =
            (0..n).map(|_| (0..d).map(|_| rng.gen_range(-range..=range)).collect()).collect();
        let distinct: BTreeSet<_> = pts.iter().collect();
        if distinct.len() == n && is_full_dim(&pts) {
            return pts;
        }
    }
}

/// Mismatch description for one hull / Minkowski instance, or `None`.
pub fn check_instance(a: &[Vec<i64>], b: &[Vec<i64>]) -> Option<String> {
    let ha = convex_hull(&to_rv(a)).ok()?;
    let oracle = brute_hull(a);
    if hull_vertices(&ha) != oracle.vertices {
        return Some(format!("hull vertices differ on {a:?}"));
    }
    if hull_facets(&ha) != oracle.facets {
        return Some(format!("hull facets differ on {a:?}"));
    }
    let hb = convex_hull(&to_rv(b)).ok()?;
    let sum = minkowski_sum(&ha, &hb).ok()?;
    let pairwise: Vec<Vec<i64>> = a
        .iter()
        .flat_map(|x| b.iter().map(move |y| x.iter().zip(y).map(|(p, q)| p + q).collect()))
        .collect();
    let dedup: Vec<Vec<i64>> = pairwise.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
    let oracle = brute_hull(&dedup);
    if hull_vertices(&sum) != oracle.vertices {
        return Some(format!("minkowski vertices differ on {a:?} + {b:?}"));
    }
    if hull_facets(&sum) != oracle.facets {
        return Some(format!("minkowski facets differ on {a:?} + {b:?}"));
    }
    None
}

use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;

/// Proper faces of a `dim`-polytope from its vertex-facet incidences.
///
/// `facets[i]` lists the vertices (out of `n_vertices`) on facet `i`. The
/// result holds, for each `k in 0..dim`, the sorted vertex sets of the
/// `k`-faces. Works for any polytope: facets of a face `F` are exactly the
/// inclusion-maximal nonempty sets `F ∩ G` over facets `G` not containing `F`.
pub fn face_lattice(n_vertices: usize, dim: usize, facets: &[Vec<usize>]) -> Vec<Vec<Vec<usize>>> {
    let sets: Vec<FixedBitSet> = facets
        .iter()
        .map(|f| {
            let mut b = FixedBitSet::with_capacity(n_vertices);
            for &v in f {
                b.insert(v);
            }
            b
        })
        .collect();
    face_lattice_bits(n_vertices, dim, &sets)
        .into_iter()
        .map(|level| level.into_iter().map(|b| b.ones().collect()).collect())
        .collect()
}

pub(crate) fn face_lattice_bits(
    n_vertices: usize,
    dim: usize,
    facets: &[FixedBitSet],
) -> Vec<Vec<FixedBitSet>> {
    if dim == 0 {
        return Vec::new();
    }
    let mut levels: Vec<Vec<FixedBitSet>> = vec![Vec::new(); dim];
    levels[dim - 1] = to_bits(
        n_vertices,
        facets.iter().map(|b| b.ones().collect()).collect(),
    );
    for k in (1..dim).rev() {
        let mut next: BTreeSet<Vec<usize>> = BTreeSet::new();
        for face in &levels[k] {
            let mut cands: Vec<FixedBitSet> = Vec::new();
            for g in facets {
                let mut i = face.clone();
                i.intersect_with(g);
                if i.count_ones(..) == 0 || i == *face {
                    continue;
                }
                if !cands.contains(&i) {
                    cands.push(i);
                }
            }
            for (a, c) in cands.iter().enumerate() {
                let maximal = cands
                    .iter()
                    .enumerate()
                    .all(|(b, o)| a == b || !c.is_subset(o) || c == o);
                if maximal {
                    next.insert(c.ones().collect());
                }
            }
        }
        levels[k - 1] = to_bits(n_vertices, next);
    }
    levels
}

fn to_bits(n: usize, sets: BTreeSet<Vec<usize>>) -> Vec<FixedBitSet> {
    sets.into_iter()
        .map(|v| {
            let mut b = FixedBitSet::with_capacity(n);
            for x in v {
                b.insert(x);
            }
            b
        })
        .collect()
}

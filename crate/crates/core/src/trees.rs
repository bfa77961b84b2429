//! Phylogenetic tree topologies read off tropical Plücker vectors.
//!
//! With the max convention a vector `P` on the 2-subsets of a taxa set is a
//! tree metric (modulo lineality) exactly when, for every quartet, the largest
//! of `P_ij + P_kl`, `P_ik + P_jl`, `P_il + P_jk` is attained at least twice.
//! The remaining, strictly smaller pairing names the quartet's split. For the
//! tree with cherries `{0,1}` and `{2,3}` joined by an edge of length 2 and
//! unit leaf edges, `P_01 = P_23 = 2`, every cross distance is 4, and the
//! pairings are 4, 8, 8: the split is `01|23`.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use thiserror::Error;

use crate::tropical::{TaxaLabeling, TropPlucker};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("block sizes must be at least 2 and blocks must partition the taxa: {0:?} | {1:?}")]
    BadSplit(Vec<usize>, Vec<usize>),
    #[error("splits {0} and {1} are incompatible")]
    Incompatible(Split, Split),
    #[error("too many splits for {taxa} taxa: {splits}")]
    TooManySplits { taxa: usize, splits: usize },
    #[error("four-point condition fails on quartet {0:?}")]
    FourPointViolation([usize; 4]),
    #[error("expected a vector on {expected}, found k = {k} on {taxa} taxa")]
    Shape { expected: &'static str, k: usize, taxa: usize },
    #[error("taxon {0} is not present")]
    MissingTaxon(usize),
}

/// A bipartition of a taxa set; the block holding the smallest taxon is first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Split {
    a: Vec<usize>,
    b: Vec<usize>,
}

impl Split {
    pub fn new(a: &[usize], b: &[usize]) -> Result<Split, TreeError> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        a.sort_unstable();
        b.sort_unstable();
        let disjoint = a.iter().all(|x| b.binary_search(x).is_err());
        let distinct = a.windows(2).all(|w| w[0] != w[1]) && b.windows(2).all(|w| w[0] != w[1]);
        if a.len() < 2 || b.len() < 2 || !disjoint || !distinct {
            return Err(TreeError::BadSplit(a, b));
        }
        if b[0] < a[0] {
            std::mem::swap(&mut a, &mut b);
        }
        Ok(Split { a, b })
    }

    /// The split `block | taxa \ block`.
    pub fn from_block(block: &[usize], taxa: &[usize]) -> Result<Split, TreeError> {
        let rest: Vec<usize> = taxa.iter().copied().filter(|t| !block.contains(t)).collect();
        if block.iter().any(|t| !taxa.contains(t)) {
            return Err(TreeError::BadSplit(block.to_vec(), rest));
        }
        Split::new(block, &rest)
    }

    pub fn blocks(&self) -> (&[usize], &[usize]) {
        (&self.a, &self.b)
    }

    pub fn taxa(&self) -> Vec<usize> {
        self.a.iter().chain(&self.b).copied().sorted().collect()
    }

    /// Whether two splits can sit on the same tree.
    pub fn compatible(&self, other: &Split) -> bool {
        let meets = |x: &[usize], y: &[usize]| x.iter().any(|t| y.contains(t));
        [&self.a, &self.b]
            .iter()
            .any(|x| [&other.a, &other.b].iter().any(|y| !meets(x, y)))
    }

    /// The side not containing `t`.
    pub fn side_without(&self, t: usize) -> &[usize] {
        if self.a.contains(&t) {
            &self.b
        } else {
            &self.a
        }
    }

    /// Removes taxon `t`; `None` if a block becomes a singleton.
    pub fn remove_taxon(&self, t: usize) -> Option<Split> {
        let a: Vec<usize> = self.a.iter().copied().filter(|&x| x != t).collect();
        let b: Vec<usize> = self.b.iter().copied().filter(|&x| x != t).collect();
        Split::new(&a, &b).ok()
    }

    /// Image under the taxa map `t ↦ perm[t]`.
    pub fn relabel(&self, perm: &[usize]) -> Split {
        let a: Vec<usize> = self.a.iter().map(|&t| perm[t]).collect();
        let b: Vec<usize> = self.b.iter().map(|&t| perm[t]).collect();
        Split::new(&a, &b).expect("relabeling is a bijection")
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.a.iter().join(""), self.b.iter().join(""))
    }
}

impl fmt::Debug for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// An unrooted tree shape given by its pairwise compatible splits.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct TreeTopology {
    taxa: Vec<usize>,
    splits: BTreeSet<Split>,
}

impl TreeTopology {
    pub fn new(taxa: &[usize], splits: impl IntoIterator<Item = Split>) -> Result<Self, TreeError> {
        let mut taxa = taxa.to_vec();
        taxa.sort_unstable();
        taxa.dedup();
        let splits: BTreeSet<Split> = splits.into_iter().collect();
        for s in &splits {
            if s.taxa() != taxa {
                return Err(TreeError::BadSplit(s.a.clone(), s.b.clone()));
            }
        }
        for (s, t) in splits.iter().tuple_combinations() {
            if !s.compatible(t) {
                return Err(TreeError::Incompatible(s.clone(), t.clone()));
            }
        }
        if splits.len() + 3 > taxa.len().max(3) {
            return Err(TreeError::TooManySplits { taxa: taxa.len(), splits: splits.len() });
        }
        Ok(TreeTopology { taxa, splits })
    }

    /// The tree with no interior edge.
    pub fn star(taxa: &[usize]) -> Self {
        TreeTopology::new(taxa, []).expect("no splits")
    }

    /// Convenience constructor from one block of each split.
    pub fn from_blocks(taxa: &[usize], blocks: &[&[usize]]) -> Result<Self, TreeError> {
        let splits = blocks
            .iter()
            .map(|b| Split::from_block(b, taxa))
            .collect::<Result<Vec<_>, _>>()?;
        TreeTopology::new(taxa, splits)
    }

    pub fn taxa(&self) -> &[usize] {
        &self.taxa
    }

    pub fn splits(&self) -> &BTreeSet<Split> {
        &self.splits
    }

    pub fn is_trivalent(&self) -> bool {
        self.splits.len() + 3 == self.taxa.len()
    }

    pub fn remove_taxon(&self, t: usize) -> TreeTopology {
        let taxa: Vec<usize> = self.taxa.iter().copied().filter(|&x| x != t).collect();
        let splits = self.splits.iter().filter_map(|s| s.remove_taxon(t));
        TreeTopology::new(&taxa, splits).expect("restriction of compatible splits")
    }

    /// Image under `t ↦ perm[t]`, with `perm` indexed by taxon.
    pub fn relabel(&self, perm: &[usize]) -> TreeTopology {
        let taxa: Vec<usize> = self.taxa.iter().map(|&t| perm[t]).collect();
        TreeTopology::new(&taxa, self.splits.iter().map(|s| s.relabel(perm)))
            .expect("relabeling preserves compatibility")
    }

    /// Newick-style text, rooted at the smallest taxon, without branch lengths.
    pub fn newick(&self) -> String {
        let root = self.taxa[0];
        let clusters: Vec<&[usize]> = self.splits.iter().map(|s| s.side_without(root)).collect();
        fn render(members: &[usize], clusters: &[&[usize]]) -> String {
            let inside: Vec<&[usize]> = clusters
                .iter()
                .copied()
                .filter(|c| c.len() < members.len() && c.iter().all(|t| members.contains(t)))
                .collect();
            let maximal: Vec<&[usize]> = inside
                .iter()
                .copied()
                .filter(|c| {
                    !inside.iter().any(|d| d.len() > c.len() && c.iter().all(|t| d.contains(t)))
                })
                .collect();
            let mut parts: Vec<(usize, String)> = maximal
                .iter()
                .map(|c| (c[0], render(c, &inside)))
                .collect();
            for &t in members {
                if !maximal.iter().any(|c| c.contains(&t)) {
                    parts.push((t, t.to_string()));
                }
            }
            parts.sort();
            format!("({})", parts.into_iter().map(|(_, s)| s).join(","))
        }
        let others: Vec<usize> = self.taxa[1..].to_vec();
        let body = render(&others, &clusters);
        format!("({},{});", root, &body[1..body.len() - 1])
    }
}

impl fmt::Display for TreeTopology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.newick())
    }
}

/// Six five-leaf trees; tree `i` lives on `{0..5} \ {i}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TreeArrangement {
    trees: Vec<TreeTopology>,
}

impl TreeArrangement {
    pub fn new(trees: Vec<TreeTopology>) -> Result<Self, TreeError> {
        if trees.len() != 6 {
            return Err(TreeError::Shape { expected: "six trees", k: 2, taxa: trees.len() });
        }
        for (i, t) in trees.iter().enumerate() {
            let want: Vec<usize> = (0..6).filter(|&x| x != i).collect();
            if t.taxa() != want {
                return Err(TreeError::MissingTaxon(i));
            }
        }
        Ok(TreeArrangement { trees })
    }

    pub fn trees(&self) -> &[TreeTopology] {
        &self.trees
    }

    /// Image under the taxa permutation `t ↦ perm[t]`.
    pub fn relabel(&self, perm: &[usize; 6]) -> TreeArrangement {
        let mut trees = vec![TreeTopology::star(&[]); 6];
        for (i, t) in self.trees.iter().enumerate() {
            trees[perm[i]] = t.relabel(perm);
        }
        TreeArrangement { trees }
    }

    /// Some `perm` with `self.relabel(perm) == other`, trying all of S₆.
    pub fn relabeling_to(&self, other: &TreeArrangement) -> Option<[usize; 6]> {
        (0..6).permutations(6).find_map(|p| {
            let perm: [usize; 6] = p.try_into().expect("length 6");
            (self.relabel(&perm) == *other).then_some(perm)
        })
    }
}

/// Outcome of the four-point test on one quartet.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Quartet {
    Split(Split),
    Degenerate,
}

fn need_k2(p: &TropPlucker) -> Result<(), TreeError> {
    if p.k() != 2 {
        return Err(TreeError::Shape { expected: "2-subsets", k: p.k(), taxa: p.taxa().len() });
    }
    Ok(())
}

pub fn quartet_split(p: &TropPlucker, q: [usize; 4]) -> Result<Quartet, TreeError> {
    need_k2(p)?;
    if let Some(&t) = q.iter().find(|t| !p.taxa().contains(t)) {
        return Err(TreeError::MissingTaxon(t));
    }
    if q.iter().tuple_combinations().any(|(a, b)| a == b) {
        return Err(TreeError::FourPointViolation(q));
    }
    let [i, j, k, l] = q;
    let pairings = [
        ([i, j], [k, l], p.get(&[i, j]) + p.get(&[k, l])),
        ([i, k], [j, l], p.get(&[i, k]) + p.get(&[j, l])),
        ([i, l], [j, k], p.get(&[i, l]) + p.get(&[j, k])),
    ];
    let max = pairings.iter().map(|x| &x.2).max().expect("three pairings");
    let at_max = pairings.iter().filter(|x| x.2 == *max).count();
    match at_max {
        1 => Err(TreeError::FourPointViolation(q)),
        3 => Ok(Quartet::Degenerate),
        _ => {
            let (a, b, _) = pairings.iter().find(|x| x.2 < *max).expect("one below max");
            Ok(Quartet::Split(Split::new(a, b).expect("four distinct taxa")))
        }
    }
}

/// The tree whose splits are exactly those that every crossing quartet
/// resolves strictly.
pub fn topology_from_plucker(p: &TropPlucker) -> Result<TreeTopology, TreeError> {
    need_k2(p)?;
    let taxa = p.taxa().to_vec();
    let n = taxa.len();
    if !(5..=6).contains(&n) {
        return Err(TreeError::Shape { expected: "5 or 6 taxa", k: 2, taxa: n });
    }
    let mut resolved = std::collections::BTreeMap::new();
    for q in taxa.iter().copied().combinations(4) {
        let q: [usize; 4] = q.try_into().expect("length 4");
        resolved.insert(q, quartet_split(p, q)?);
    }
    let rest = &taxa[1..];
    let mut splits = Vec::new();
    for size in 1..n - 2 {
        for extra in rest.iter().copied().combinations(size) {
            let mut block = vec![taxa[0]];
            block.extend(extra);
            let Ok(s) = Split::from_block(&block, &taxa) else { continue };
            let (a, b) = s.blocks();
            let all_agree = a.iter().copied().tuple_combinations().all(|(a1, a2)| {
                b.iter().copied().tuple_combinations().all(|(b1, b2)| {
                    let mut q = [a1, a2, b1, b2];
                    q.sort_unstable();
                    let want = Split::new(&[a1, a2], &[b1, b2]).expect("distinct");
                    resolved[&q] == Quartet::Split(want)
                })
            });
            if all_agree {
                splits.push(s);
            }
        }
    }
    TreeTopology::new(&taxa, splits)
}

/// Entry `{a, b}` is `P_{t,a,b}`.
pub fn restricted_subvector(p: &TropPlucker, t: usize) -> Result<TropPlucker, TreeError> {
    if p.k() != 3 {
        return Err(TreeError::Shape { expected: "3-subsets", k: p.k(), taxa: p.taxa().len() });
    }
    if !p.taxa().contains(&t) {
        return Err(TreeError::MissingTaxon(t));
    }
    let taxa: Vec<usize> = p.taxa().iter().copied().filter(|&x| x != t).collect();
    Ok(TropPlucker::from_fn(2, taxa, |s| p.get(&[t, s[0], s[1]]).clone()))
}

pub fn tree_arrangement(p: &TropPlucker) -> Result<TreeArrangement, TreeError> {
    if p.taxa() != [0, 1, 2, 3, 4, 5] {
        return Err(TreeError::Shape { expected: "taxa 0..5", k: p.k(), taxa: p.taxa().len() });
    }
    let trees = (0..6)
        .map(|t| restricted_subvector(p, t).and_then(|r| topology_from_plucker(&r)))
        .collect::<Result<Vec<_>, _>>()?;
    TreeArrangement::new(trees)
}

/// Shapes of six-leaf trees that occur as vertices of the two-point image.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum NodeType {
    Type1,
    Type2,
    Type3,
    Type4,
    Type5,
    Type6,
    Other,
}

impl NodeType {
    pub fn number(self) -> Option<u8> {
        match self {
            NodeType::Type1 => Some(1),
            NodeType::Type2 => Some(2),
            NodeType::Type3 => Some(3),
            NodeType::Type4 => Some(4),
            NodeType::Type5 => Some(5),
            NodeType::Type6 => Some(6),
            NodeType::Other => None,
        }
    }
}

impl fmt::Display for NodeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.number() {
            Some(n) => write!(f, "Type{n}"),
            None => write!(f, "Other"),
        }
    }
}

/// One representative split system per node type, as one block per split.
const TEMPLATES: [(NodeType, &[&[usize]]); 6] = [
    (NodeType::Type1, &[&[0, 1]]),
    (NodeType::Type2, &[&[0, 5]]),
    (NodeType::Type3, &[&[3, 4]]),
    (NodeType::Type4, &[&[0, 1, 3]]),
    (NodeType::Type5, &[&[0, 4], &[1, 5]]),
    (NodeType::Type6, &[&[0, 5], &[1, 4], &[2, 3]]),
];

pub fn classify_node_type(t: &TreeTopology) -> NodeType {
    let all: Vec<usize> = (0..6).collect();
    if t.taxa() != all {
        return NodeType::Other;
    }
    for (ty, blocks) in TEMPLATES {
        let template = TreeTopology::from_blocks(&all, blocks).expect("valid template");
        for g in (0..3).permutations(3) {
            let perm = TaxaLabeling::induced_permutation([g[0], g[1], g[2]]);
            if template.relabel(&perm) == *t {
                return ty;
            }
        }
    }
    NodeType::Other
}

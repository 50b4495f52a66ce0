//! Partial-cube minors (contraction and restriction), shattering and
//! VC-dimension machinery, ampleness, and membership tests for the classes
//! excluding `Q_3`, `SK_4`, and `C_6` as pc-minors.

use std::collections::{BTreeSet, HashMap, HashSet};

use itertools::Itertools;
use thiserror::Error;

use crate::cells;
use crate::graph::{CubeGraph, GraphError, Label, Region, Sign};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MinorError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("the selected region contains no vertices")]
    EmptyRegion,
    #[error("contracted coordinate {0} is also fixed by the region")]
    ContractedAndFixed(usize),
    #[error("pc-minor search exceeded its budget of {0} minor specs")]
    BudgetExceeded(usize),
}

/// An arbitrary family of subsets of `{0..m}`; its 1-inclusion graph may be
/// disconnected, so it is strictly more general than a [`CubeGraph`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetFamily {
    m: usize,
    members: Vec<Label>,
}

impl SetFamily {
    pub fn new(m: usize, members: impl IntoIterator<Item = Label>) -> SetFamily {
        let mut members: Vec<Label> = members.into_iter().collect();
        members.sort();
        members.dedup();
        SetFamily { m, members }
    }

    pub fn from_graph(g: &CubeGraph) -> SetFamily {
        SetFamily::new(g.m(), g.labels().iter().copied())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Label] {
        &self.members
    }

    /// Whether `x` is shattered: the traces of the members on `x` realize
    /// all `2^|x|` patterns.
    pub fn shattered(&self, x: Label) -> bool {
        let k = x.weight();
        if k > 32 || self.members.len() < 1usize << k {
            return k == 0 && !self.members.is_empty();
        }
        let mut seen: HashSet<u64> = HashSet::with_capacity(1 << k);
        for &s in &self.members {
            seen.insert(s.and(x).bits());
            if seen.len() == 1 << k {
                return true;
            }
        }
        false
    }

    /// Whether `x` is strongly shattered: the 1-inclusion graph contains an
    /// `x`-cube, i.e. some assignment outside `x` has all completions present.
    pub fn strongly_shattered(&self, x: Label) -> bool {
        let k = x.weight();
        if k == 0 {
            return !self.members.is_empty();
        }
        if self.members.len() < 1usize << k {
            return false;
        }
        let mut groups: HashMap<u64, usize> = HashMap::new();
        for &s in &self.members {
            let count = groups.entry(s.bits() & !x.bits()).or_insert(0);
            *count += 1;
            if *count == 1 << k {
                return true;
            }
        }
        false
    }

    /// All shattered sets, grouped by size. The shattered sets form a
    /// simplicial complex, so level `k+1` is generated from level `k`.
    pub fn shattered_complex(&self) -> Vec<Vec<Label>> {
        self.complex_levels(|x| self.shattered(x))
    }

    /// All strongly shattered sets, grouped by size.
    pub fn strongly_shattered_complex(&self) -> Vec<Vec<Label>> {
        self.complex_levels(|x| self.strongly_shattered(x))
    }

    fn complex_levels(&self, pred: impl Fn(Label) -> bool) -> Vec<Vec<Label>> {
        if self.members.is_empty() {
            return Vec::new();
        }
        let mut levels = vec![vec![Label::EMPTY]];
        loop {
            let last = levels.last().unwrap();
            let mut next: BTreeSet<Label> = BTreeSet::new();
            for &x in last {
                let start = x.bits().checked_ilog2().map_or(0, |b| b as usize + 1);
                for j in start..self.m {
                    let cand = x.with(j);
                    if pred(cand) {
                        next.insert(cand);
                    }
                }
            }
            if next.is_empty() {
                return levels;
            }
            levels.push(next.into_iter().collect());
        }
    }

    /// VC-dimension: the size of a largest shattered set.
    pub fn vc_dimension(&self) -> usize {
        self.shattered_complex().len().saturating_sub(1)
    }

    /// Shattered sets with no shattered superset.
    pub fn maximal_shattered_sets(&self) -> Vec<Label> {
        let levels = self.shattered_complex();
        let mut out = Vec::new();
        for (k, level) in levels.iter().enumerate() {
            for &x in level {
                let extendable = levels.get(k + 1).is_some_and(|up| {
                    up.iter().any(|&y| x.is_subset_of(y))
                });
                if !extendable {
                    out.push(x);
                }
            }
        }
        out.sort();
        out
    }
}

/// Size report of the ampleness test: the family is ample iff the shattered
/// and strongly shattered complexes coincide, equivalently iff
/// `|family| = |shattered|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmpleReport {
    pub family_size: usize,
    pub shattered: usize,
    pub strongly_shattered: usize,
    pub ample: bool,
}

/// Tests ampleness and asserts the sandwich inequality
/// `|strongly shattered| ≤ |family| ≤ |shattered|` on the way.
pub fn is_ample(family: &SetFamily) -> AmpleReport {
    let shattered: usize = family.shattered_complex().iter().map(Vec::len).sum();
    let strongly: usize = family.strongly_shattered_complex().iter().map(Vec::len).sum();
    assert!(
        strongly <= family.len() && family.len() <= shattered,
        "sandwich inequality violated: {} ≤ {} ≤ {}",
        strongly,
        family.len(),
        shattered
    );
    AmpleReport {
        family_size: family.len(),
        shattered,
        strongly_shattered: strongly,
        ample: family.len() == shattered,
    }
}

/// Contracts Θ-class `i`: deletes coordinate `i` and merges equal labels.
pub fn contract(g: &CubeGraph, i: usize) -> Result<CubeGraph, MinorError> {
    g.check_coordinate(i)?;
    let labels: Vec<Label> = g.labels().iter().map(|l| l.squeeze(i)).collect();
    let (out, _) = CubeGraph::from_labels(g.m() - 1, labels)?;
    Ok(out)
}

/// Contracts every coordinate in `mask`.
pub fn contract_all(g: &CubeGraph, mask: Label) -> Result<CubeGraph, MinorError> {
    for i in mask.iter() {
        g.check_coordinate(i)?;
    }
    if mask == Label::EMPTY {
        return Ok(g.clone());
    }
    let labels: Vec<Label> = g.labels().iter().map(|l| l.squeeze_all(mask)).collect();
    let (out, _) = CubeGraph::from_labels(g.m() - mask.weight(), labels)?;
    Ok(out)
}

/// Restricts to one halfspace of Θ-class `i`; coordinates are compacted.
pub fn restrict(g: &CubeGraph, i: usize, positive: bool) -> Result<CubeGraph, MinorError> {
    g.check_coordinate(i)?;
    let mut region = Region::all(g.m());
    region.signs[i] = if positive { Sign::Plus } else { Sign::Minus };
    restrict_region(g, &region)
}

/// Restricts to the vertices matching a region; coordinates are compacted.
pub fn restrict_region(g: &CubeGraph, region: &Region) -> Result<CubeGraph, MinorError> {
    let labels = g.region_vertices(region);
    if labels.is_empty() {
        return Err(MinorError::EmptyRegion);
    }
    let (out, _) = CubeGraph::from_labels(g.m(), labels)?;
    Ok(out)
}

/// A pc-minor specification: contract the classes in `contract`, then
/// restrict to `region` on the untouched classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorSpec {
    pub contract: Label,
    pub region: Region,
}

/// Applies a minor spec. Restriction and contraction commute, so the graph
/// is filtered by the region first and the contracted coordinates are then
/// deleted in one pass.
pub fn apply_minor(g: &CubeGraph, spec: &MinorSpec) -> Result<CubeGraph, MinorError> {
    for i in spec.contract.iter() {
        g.check_coordinate(i)?;
        if spec.region.signs.get(i).is_some_and(|s| *s != Sign::Both) {
            return Err(MinorError::ContractedAndFixed(i));
        }
    }
    let labels: Vec<Label> = g
        .region_vertices(&spec.region)
        .into_iter()
        .map(|l| l.squeeze_all(spec.contract))
        .collect();
    if labels.is_empty() {
        return Err(MinorError::EmptyRegion);
    }
    let (out, _) = CubeGraph::from_labels(g.m() - spec.contract.weight(), labels)?;
    Ok(out)
}

/// Canonical form of a partial cube under coordinate permutations and global
/// label XOR: the lexicographically smallest sorted label vector. These are
/// exactly the symmetries of hypercube embeddings, so two graphs are
/// isomorphic as partial cubes iff their canonical forms agree.
pub fn canonical_form(g: &CubeGraph) -> (usize, Vec<Label>) {
    let m = g.m();
    let mut best: Option<Vec<Label>> = None;
    // The minimum always maps some vertex to the empty label, so it is
    // enough to XOR by each vertex label in turn.
    for &base in g.labels() {
        for perm in (0..m).permutations(m) {
            let mut candidate: Vec<Label> =
                g.labels().iter().map(|&l| l.xor(base).permute_from(&perm)).collect();
            candidate.sort();
            if best.as_ref().is_none_or(|b| candidate < *b) {
                best = Some(candidate);
            }
        }
    }
    (m, best.expect("graph is nonempty"))
}

/// Whether two partial cubes are isomorphic under coordinate permutation
/// plus global XOR.
pub fn isomorphic(a: &CubeGraph, b: &CubeGraph) -> bool {
    a.n() == b.n()
        && a.m() == b.m()
        && a.edge_count() == b.edge_count()
        && canonical_form(a) == canonical_form(b)
}

/// Whether the graph has VC-dimension ≤ 2, equivalently excludes `Q_3` as a
/// pc-minor. Checks all coordinate triples, so it is polynomial in `m`.
pub fn is_two_dimensional(g: &CubeGraph) -> bool {
    let family = SetFamily::from_graph(g);
    for triple in (0..g.m()).combinations(3) {
        let x = triple.iter().fold(Label::EMPTY, |acc, &i| acc.with(i));
        if family.shattered(x) {
            return false;
        }
    }
    true
}

/// Membership flags for the pc-minor classes used throughout: `F(Q_3)`
/// (two-dimensional), `F(Q_3, SK_4)` (rank-2 COMs), and `F(Q_3, C_6)`
/// (two-dimensional ample).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Membership {
    pub two_dimensional: bool,
    pub com2: bool,
    pub ample2: bool,
}

/// Computes the membership flags. Within `F(Q_3)` the `SK_4` exclusion is
/// equivalent to having no convex `SK_4` subgraph, and the `C_6` exclusion
/// to ampleness; outside `F(Q_3)` both subclass flags are false.
pub fn membership(g: &CubeGraph) -> Membership {
    let two_dimensional = is_two_dimensional(g);
    if !two_dimensional {
        return Membership { two_dimensional, com2: false, ample2: false };
    }
    let com2 = cells::full_subdivisions(g, 4)
        .iter()
        .all(|h| !h.convex);
    let ample2 = is_ample(&SetFamily::from_graph(g)).ample;
    Membership { two_dimensional, com2, ample2 }
}

/// Brute-force pc-minor containment: enumerates contraction sets and
/// regions and compares canonical forms. `budget` caps the number of minor
/// specs tried.
pub fn contains_pc_minor(
    g: &CubeGraph,
    h: &CubeGraph,
    budget: usize,
) -> Result<bool, MinorError> {
    let target = canonical_form(h);
    let mut tried = 0usize;
    for contract_bits in 0u64..(1 << g.m()) {
        let contract = Label(contract_bits);
        let remaining = g.m() - contract.weight();
        if remaining < h.m() {
            continue;
        }
        let free: Vec<usize> = (0..g.m()).filter(|&i| !contract.contains(i)).collect();
        // Each free coordinate is −, +, or unconstrained.
        for choice in 0u64..3u64.pow(free.len() as u32) {
            tried += 1;
            if tried > budget {
                return Err(MinorError::BudgetExceeded(budget));
            }
            let mut signs = vec![Sign::Both; g.m()];
            let mut c = choice;
            for &i in &free {
                signs[i] = match c % 3 {
                    0 => Sign::Both,
                    1 => Sign::Minus,
                    _ => Sign::Plus,
                };
                c /= 3;
            }
            let spec = MinorSpec { contract, region: Region { signs } };
            let Ok(minor) = apply_minor(g, &spec) else { continue };
            if minor.n() == h.n() && minor.m() == h.m() && canonical_form(&minor) == target {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

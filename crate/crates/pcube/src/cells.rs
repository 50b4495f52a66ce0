//! Convex and isometric cycles, full subdivisions of complete graphs,
//! disks, antipodes, gated-hull classification of isometric cycles, and a
//! wiring-diagram disk generator.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use rand::Rng;
use thiserror::Error;

use crate::graph::{CubeGraph, GraphError, Label};
use crate::minors;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CellsError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("cycle enumeration exceeded its budget of {0} steps")]
    BudgetExceeded(usize),
    #[error("not a full subdivision: {0}")]
    NotFullSubdivision(String),
    #[error("the graph is not a disk")]
    NotADisk,
    #[error("the vertex sequence is not an isometric cycle")]
    NotIsometric,
    #[error("the host graph has VC-dimension greater than 2")]
    HostNotTwoDimensional,
    #[error("cycles shorter than 6 cannot be classified or filled")]
    CycleTooShort(usize),
    #[error("invalid wiring diagram: {0}")]
    InvalidDiagram(String),
}

/// Orders a vertex set as a cycle if its induced subgraph is one.
pub fn cycle_order(set: &[Label]) -> Option<Vec<Label>> {
    if set.len() < 4 {
        return None;
    }
    let verts: BTreeSet<Label> = set.iter().copied().collect();
    if verts.len() != set.len() {
        return None;
    }
    let neighbors = |l: Label| -> Vec<Label> {
        verts.iter().copied().filter(|&o| l.dist(o) == 1).collect()
    };
    if verts.iter().any(|&l| neighbors(l).len() != 2) {
        return None;
    }
    let start = *verts.iter().next().unwrap();
    let mut order = vec![start];
    let mut prev = start;
    let mut cur = neighbors(start)[0];
    while cur != start {
        order.push(cur);
        let next = neighbors(cur).into_iter().find(|&x| x != prev)?;
        prev = cur;
        cur = next;
    }
    if order.len() == verts.len() {
        Some(order)
    } else {
        None
    }
}

/// Whether an ordered vertex sequence is an isometric cycle of the graph:
/// consecutive vertices adjacent and all cycle distances equal to graph
/// distances.
pub fn is_isometric_cycle(g: &CubeGraph, cycle: &[Label]) -> bool {
    let len = cycle.len();
    if len < 4 || !len.is_multiple_of(2) {
        return false;
    }
    let set: HashSet<Label> = cycle.iter().copied().collect();
    if set.len() != len || cycle.iter().any(|&l| !g.contains(l)) {
        return false;
    }
    for i in 0..len {
        for j in (i + 1)..len {
            let along = (j - i).min(len - (j - i));
            if cycle[i].dist(cycle[j]) != along {
                return false;
            }
        }
    }
    true
}

/// All convex cycles, each returned in cyclic vertex order. A convex cycle
/// of length `2d` is the interval of any of its antipodal pairs, so it
/// suffices to scan vertex pairs and keep the intervals that induce cycles.
pub fn convex_cycles(g: &CubeGraph) -> Vec<Vec<Label>> {
    let mut seen: BTreeSet<Vec<Label>> = BTreeSet::new();
    let mut out = Vec::new();
    for u in 0..g.n() {
        for v in (u + 1)..g.n() {
            let (lu, lv) = (g.label(u), g.label(v));
            let d = lu.dist(lv);
            if d < 2 {
                continue;
            }
            let interval = g.interval(lu, lv).expect("vertices are present");
            if interval.len() != 2 * d {
                continue;
            }
            if let Some(order) = cycle_order(&interval) {
                let mut key = order.clone();
                key.sort();
                if seen.insert(key) {
                    out.push(order);
                }
            }
        }
    }
    out.sort_by_key(|c| {
        let mut k = c.clone();
        k.sort();
        k
    });
    out
}

/// All isometric cycles up to `max_len` (default `2m`, the longest an
/// isometric cycle can be), each in cyclic order. Enumerates pairs of
/// internally disjoint geodesics between antipodal candidates, pruning with
/// the distance matrix; `budget` caps the number of search steps.
pub fn isometric_cycles(
    g: &CubeGraph,
    max_len: Option<usize>,
    budget: usize,
) -> Result<Vec<Vec<Label>>, CellsError> {
    let cap = max_len.unwrap_or(2 * g.m()).min(2 * g.m());
    let mut steps = 0usize;
    let mut seen: BTreeSet<Vec<Label>> = BTreeSet::new();
    let mut out = Vec::new();
    for u in 0..g.n() {
        for v in (u + 1)..g.n() {
            let (lu, lv) = (g.label(u), g.label(v));
            let k = lu.dist(lv);
            if k < 2 || 2 * k > cap {
                continue;
            }
            let geodesics = enumerate_geodesics(g, lu, lv, budget, &mut steps)?;
            for a in 0..geodesics.len() {
                for b in (a + 1)..geodesics.len() {
                    steps += 1;
                    if steps > budget {
                        return Err(CellsError::BudgetExceeded(budget));
                    }
                    let p = &geodesics[a];
                    let q = &geodesics[b];
                    if p[1..k].iter().any(|x| q[1..k].contains(x)) {
                        continue;
                    }
                    let mut cycle = p.clone();
                    cycle.extend(q[1..k].iter().rev());
                    if !is_isometric_cycle(g, &cycle) {
                        continue;
                    }
                    let mut key = cycle.clone();
                    key.sort();
                    if seen.insert(key) {
                        out.push(cycle);
                    }
                }
            }
        }
    }
    out.sort_by_key(|c| {
        let mut k = c.clone();
        k.sort();
        k
    });
    Ok(out)
}

fn enumerate_geodesics(
    g: &CubeGraph,
    from: Label,
    to: Label,
    budget: usize,
    steps: &mut usize,
) -> Result<Vec<Vec<Label>>, CellsError> {
    let mut out = Vec::new();
    let mut stack = vec![vec![from]];
    while let Some(path) = stack.pop() {
        *steps += 1;
        if *steps > budget {
            return Err(CellsError::BudgetExceeded(budget));
        }
        let cur = *path.last().unwrap();
        if cur == to {
            out.push(path);
            continue;
        }
        for i in cur.xor(to).iter() {
            let next = cur.flip(i);
            if g.contains(next) {
                let mut ext = path.clone();
                ext.push(next);
                stack.push(ext);
            }
        }
    }
    Ok(out)
}

/// A full subdivision `SK_n` living inside a host graph: `n` original
/// vertices pairwise at distance 2, one subdivision vertex per pair, induced
/// subgraph isomorphic to `SK_n` and isometric in the host.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullSubdivision {
    pub n: usize,
    pub originals: Vec<Label>,
    /// `(i, j, label)` with `i < j` indexing into `originals`.
    pub subs: Vec<(usize, usize, Label)>,
    /// Coordinates on which the subdivision varies.
    pub coords: Label,
    /// Label of the would-be hub vertex adjacent to all originals.
    pub star_label: Label,
    pub convex: bool,
    pub gated: bool,
    pub extends_to_star: bool,
}

impl FullSubdivision {
    pub fn vertices(&self) -> Vec<Label> {
        let mut out = self.originals.clone();
        out.extend(self.subs.iter().map(|&(_, _, l)| l));
        out.sort();
        out
    }

    pub fn sub(&self, i: usize, j: usize) -> Label {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        self.subs
            .iter()
            .find(|&&(a, b, _)| a == i && b == j)
            .map(|&(_, _, l)| l)
            .expect("every original pair has a subdivision vertex")
    }
}

/// Original vertex ids plus the chosen subdivision vertex per pair.
type SubdivisionState = (Vec<usize>, BTreeMap<(usize, usize), usize>);

/// All maximal full subdivisions `SK_n` with `n ≥ n_min`. Candidate original
/// sets are cliques of the distance-2 relation; each pair needs a private
/// common neighbor, and the result must be isometric in the host. Maximality
/// means not included in a larger full subdivision of the host.
pub fn full_subdivisions(g: &CubeGraph, n_min: usize) -> Vec<FullSubdivision> {
    let n_min = n_min.max(3);
    let mut all: Vec<SubdivisionState> = Vec::new();

    // Ordered DFS over original sets; branch over subdivision choices.
    fn grow(
        g: &CubeGraph,
        originals: &mut Vec<usize>,
        subs: &mut BTreeMap<(usize, usize), usize>,
        all: &mut Vec<SubdivisionState>,
        n_min: usize,
    ) {
        if originals.len() >= n_min {
            all.push((originals.clone(), subs.clone()));
        }
        let start = originals.last().map_or(0, |&v| v + 1);
        let n = g.n();
        'next: for x in start..n {
            let lx = g.label(x);
            if originals.iter().any(|&o| g.label(o).dist(lx) != 2) {
                continue;
            }
            if subs.values().any(|&s| g.label(s) == lx) {
                continue;
            }
            // Existing subdivision vertices must stay adjacent to exactly
            // their own two originals.
            if subs.values().any(|&s| g.label(s).dist(lx) == 1) {
                continue;
            }
            // Candidate subdivision vertices for each pair (o, x).
            let mut choices: Vec<Vec<usize>> = Vec::new();
            for &o in originals.iter() {
                let lo = g.label(o);
                let cands: Vec<usize> = (0..n)
                    .filter(|&c| {
                        let lc = g.label(c);
                        lc.dist(lo) == 1
                            && lc.dist(lx) == 1
                            && !originals.contains(&c)
                            && c != x
                            && originals
                                .iter()
                                .all(|&p| p == o || g.label(p).dist(lc) != 1)
                            && !subs.values().any(|&s| s == c || g.label(s).dist(lc) == 1)
                    })
                    .collect();
                if cands.is_empty() {
                    continue 'next;
                }
                choices.push(cands);
            }
            // Multiply out the choices; they are almost always unique.
            let mut assignments = vec![Vec::new()];
            for cands in &choices {
                let mut next = Vec::new();
                for partial in &assignments {
                    for &c in cands {
                        if partial.contains(&c) {
                            continue;
                        }
                        let lc = g.label(c);
                        if partial.iter().any(|&p: &usize| g.label(p).dist(lc) == 1) {
                            continue;
                        }
                        let mut ext = partial.clone();
                        ext.push(c);
                        next.push(ext);
                    }
                }
                assignments = next;
            }
            for assignment in assignments {
                originals.push(x);
                let k = originals.len() - 1;
                for (idx, &c) in assignment.iter().enumerate() {
                    subs.insert((idx, k), c);
                }
                grow(g, originals, subs, all, n_min);
                originals.pop();
                for idx in 0..assignment.len() {
                    subs.remove(&(idx, k));
                }
            }
        }
    }

    let mut originals = Vec::new();
    let mut subs = BTreeMap::new();
    grow(g, &mut originals, &mut subs, &mut all, n_min);

    // Keep isometric candidates only.
    all.retain(|(originals, subs)| {
        let mut verts: Vec<Label> = originals.iter().map(|&o| g.label(o)).collect();
        verts.extend(subs.values().map(|&s| g.label(s)));
        is_isometric_sk(g, originals, subs) && verts.len() == originals.len() + subs.len()
    });

    // Maximality: no other candidate strictly extends the original set while
    // agreeing on the shared subdivision vertices.
    let mut maximal = Vec::new();
    'outer: for (i, (orig_a, subs_a)) in all.iter().enumerate() {
        for (j, (orig_b, subs_b)) in all.iter().enumerate() {
            if i == j || orig_a.len() >= orig_b.len() {
                continue;
            }
            let set_b: Vec<usize> = orig_b.clone();
            if !orig_a.iter().all(|o| set_b.contains(o)) {
                continue;
            }
            let pos_in_b: HashMap<usize, usize> =
                orig_b.iter().enumerate().map(|(k, &v)| (v, k)).collect();
            let agrees = subs_a.iter().all(|(&(ai, aj), &s)| {
                let bi = pos_in_b[&orig_a[ai]];
                let bj = pos_in_b[&orig_a[aj]];
                let key = if bi < bj { (bi, bj) } else { (bj, bi) };
                subs_b.get(&key) == Some(&s)
            });
            if agrees {
                continue 'outer;
            }
        }
        maximal.push((orig_a.clone(), subs_a.clone()));
    }

    let mut out: Vec<FullSubdivision> = maximal
        .into_iter()
        .map(|(originals, subs)| build_subdivision(g, &originals, &subs))
        .collect();
    out.sort_by(|a, b| a.originals.cmp(&b.originals));
    out.dedup_by(|a, b| a.originals == b.originals && a.subs == b.subs);
    out
}

fn is_isometric_sk(
    g: &CubeGraph,
    originals: &[usize],
    subs: &BTreeMap<(usize, usize), usize>,
) -> bool {
    // Distances in SK_n: originals 2 apart; a subdivision vertex is at 1
    // from its own originals, 3 from the others, 2 from subdivision vertices
    // sharing an original, 4 from disjoint ones.
    let lo: Vec<Label> = originals.iter().map(|&o| g.label(o)).collect();
    for (&(i, j), &s) in subs {
        let ls = g.label(s);
        for (k, &l) in lo.iter().enumerate() {
            let want = if k == i || k == j { 1 } else { 3 };
            if ls.dist(l) != want {
                return false;
            }
        }
    }
    for (&(i, j), &s) in subs {
        for (&(k, l), &t) in subs {
            if (i, j) >= (k, l) {
                continue;
            }
            let shared = [i, j].iter().filter(|x| [k, l].contains(x)).count();
            let want = if shared == 1 { 2 } else { 4 };
            if g.label(s).dist(g.label(t)) != want {
                return false;
            }
        }
    }
    true
}

fn build_subdivision(
    g: &CubeGraph,
    originals: &[usize],
    subs: &BTreeMap<(usize, usize), usize>,
) -> FullSubdivision {
    let mut orig_labels: Vec<Label> = originals.iter().map(|&o| g.label(o)).collect();
    let order: Vec<usize> = {
        let mut idx: Vec<usize> = (0..orig_labels.len()).collect();
        idx.sort_by_key(|&k| orig_labels[k]);
        idx
    };
    let pos: HashMap<usize, usize> = order.iter().enumerate().map(|(new, &old)| (old, new)).collect();
    orig_labels.sort();
    let mut sub_list: Vec<(usize, usize, Label)> = subs
        .iter()
        .map(|(&(i, j), &s)| {
            let (a, b) = (pos[&i], pos[&j]);
            let (a, b) = if a < b { (a, b) } else { (b, a) };
            (a, b, g.label(s))
        })
        .collect();
    sub_list.sort();

    let star_label = orig_labels[0].xor(orig_labels[1]).xor(sub_list[0].2);
    debug_assert!(
        sub_list
            .iter()
            .all(|&(i, j, s)| orig_labels[i].xor(orig_labels[j]).xor(s) == star_label),
        "isometric full subdivisions have a consistent hub label"
    );
    let mut coords = Label::EMPTY;
    let mut verts = orig_labels.clone();
    verts.extend(sub_list.iter().map(|&(_, _, l)| l));
    for &v in &verts {
        coords = coords.or(v.xor(verts[0]));
    }
    let convex = g.is_convex(&verts).expect("vertices are present");
    let gated = g.is_gated(&verts).expect("vertices are present");
    FullSubdivision {
        n: orig_labels.len(),
        originals: orig_labels,
        subs: sub_list,
        coords,
        star_label,
        convex,
        gated,
        extends_to_star: g.contains(star_label),
    }
}

/// Relabels the whole host so that the embedding of `H` is standard:
/// original vertices become singletons `{0}..{n−1}` and subdivision vertices
/// the corresponding pairs. Works by basing the embedding at an original
/// vertex, reading off the coordinate roles, and applying one global XOR
/// plus a coordinate permutation.
pub fn standardize(
    g: &CubeGraph,
    h: &FullSubdivision,
) -> Result<(CubeGraph, FullSubdivision), CellsError> {
    if h.n < 4 {
        return Err(CellsError::NotFullSubdivision(format!(
            "standardization needs n ≥ 4, got {}",
            h.n
        )));
    }
    let o0 = h.originals[0];
    // After XOR by o0 the subdivision vertices next to o0 are singletons.
    let mut c = vec![0usize; h.n]; // c[j] = coordinate of sub(0, j)
    for (j, cj) in c.iter_mut().enumerate().skip(1) {
        let s = h.sub(0, j).xor(o0);
        if s.weight() != 1 {
            return Err(CellsError::NotFullSubdivision(
                "subdivision vertex is not adjacent to its original".into(),
            ));
        }
        *cj = s.iter().next().unwrap();
    }
    // Each original o_j is {c_j, x} for a common coordinate x.
    let mut x = None;
    for (j, &orig) in h.originals.iter().enumerate().skip(1) {
        let rest = orig.xor(o0).without(c[j]);
        if rest.weight() != 1 {
            return Err(CellsError::NotFullSubdivision(
                "original vertex is not at distance 2 from the base".into(),
            ));
        }
        let xj = rest.iter().next().unwrap();
        if *x.get_or_insert(xj) != xj {
            return Err(CellsError::NotFullSubdivision(
                "original vertices do not share a common coordinate".into(),
            ));
        }
    }
    let x = x.unwrap();

    let xor = o0.xor(Label::singleton(x));
    // perm[new] = old coordinate: x ↦ 0, c_j ↦ j, others in ascending order.
    let mut perm = vec![x];
    perm.extend((1..h.n).map(|j| c[j]));
    let used: HashSet<usize> = perm.iter().copied().collect();
    perm.extend((0..g.m()).filter(|i| !used.contains(i)));
    if perm.len() != g.m() || used.len() != h.n {
        return Err(CellsError::NotFullSubdivision(
            "subdivision coordinates are not distinct".into(),
        ));
    }

    let relabeled: Vec<Label> =
        g.labels().iter().map(|&l| l.xor(xor).permute_from(&perm)).collect();
    let (out, remap) = CubeGraph::from_labels(g.m(), relabeled).map_err(CellsError::Graph)?;
    debug_assert!(remap.dropped.is_empty());

    let transform = |l: Label| l.xor(xor).permute_from(&perm);
    let originals: Vec<Label> = {
        let mut v: Vec<Label> = h.originals.iter().map(|&l| transform(l)).collect();
        v.sort();
        v
    };
    for (k, &o) in originals.iter().enumerate() {
        if o != Label::singleton(k) {
            return Err(CellsError::NotFullSubdivision(
                "relabeling did not reach the standard pattern".into(),
            ));
        }
    }
    let found = full_subdivisions(&out, h.n)
        .into_iter()
        .find(|cand| cand.originals == originals)
        .ok_or_else(|| {
            CellsError::NotFullSubdivision("relabeled subdivision not found in host".into())
        })?;
    Ok((out, found))
}

/// A disk: the convex hull of an isometric cycle in a two-dimensional
/// partial cube, equivalently the region graph of a pseudoline arrangement.
/// `K_1` and `K_2` are admitted as degenerate disks.
#[derive(Clone, Debug)]
pub struct Disk {
    pub graph: CubeGraph,
    /// The boundary cycle in cyclic order (all vertices for `K_1`, `K_2`).
    pub boundary: Vec<Label>,
}

impl Disk {
    /// A boundary pair `(w, −w)` such that no Θ-class crosses both
    /// `I(w, u)` and `I(v, −w)`; disks always have one.
    pub fn affine_witness(&self, u: Label, v: Label) -> Option<(Label, Label)> {
        let m = self.graph.m();
        if !self.graph.contains(u) || !self.graph.contains(v) {
            return None;
        }
        for &w in &self.boundary {
            let anti = w.complement(m);
            if !self.graph.contains(anti) {
                continue;
            }
            if w.xor(u).and(v.xor(anti)) == Label::EMPTY {
                return Some((w, anti));
            }
        }
        None
    }
}

/// Tests whether the graph is a disk: VC-dimension ≤ 2 and some isometric
/// cycle whose convex hull is the whole graph. Validates that the antipodal
/// vertices are exactly the boundary.
pub fn is_disk(g: &CubeGraph) -> Option<Disk> {
    if g.n() <= 2 {
        return Some(Disk { graph: g.clone(), boundary: g.labels().to_vec() });
    }
    if !minors::is_two_dimensional(g) {
        return None;
    }
    let cycles = isometric_cycles(g, None, 1 << 24).ok()?;
    let boundary = cycles.into_iter().find(|c| {
        c.len() == 2 * g.m() && {
            let (_, hull) = g.convex_hull(c).expect("cycle vertices are present");
            hull.len() == g.n()
        }
    })?;
    let antipodal = antipodal_vertices(g);
    let boundary_set: BTreeSet<Label> = boundary.iter().copied().collect();
    assert_eq!(
        antipodal.iter().copied().collect::<BTreeSet<_>>(),
        boundary_set,
        "a disk's antipodal vertices are exactly its boundary"
    );
    Some(Disk { graph: g.clone(), boundary })
}

/// The antipode `−v` if it exists: the vertex whose label is the full
/// complement within the graph's coordinate span; its presence forces
/// `conv(v, −v)` to be the whole graph.
pub fn antipode(g: &CubeGraph, v: Label) -> Result<Option<Label>, GraphError> {
    if !g.contains(v) {
        return Err(GraphError::UnknownVertex(v));
    }
    let anti = v.complement(g.m());
    Ok(g.contains(anti).then_some(anti))
}

/// All vertices with antipodes.
pub fn antipodal_vertices(g: &CubeGraph) -> Vec<Label> {
    g.labels()
        .iter()
        .copied()
        .filter(|&v| g.contains(v.complement(g.m())))
        .collect()
}

/// Where the gated hull of an isometric cycle lands.
#[derive(Clone, Debug)]
pub enum CycleKind {
    /// The cycle is its own gated hull.
    ConvexCycle,
    /// The gated hull is a `Q_3^-`.
    QThreeMinus,
    /// The gated hull is a maximal full subdivision `SK_n`.
    FullSubdivision(usize),
    /// The cycle is long: its convex hull is a gated disk.
    GatedDisk(Disk),
}

#[derive(Clone, Debug)]
pub struct CycleClassification {
    pub kind: CycleKind,
    /// The gated hull of the cycle in the host.
    pub hull: Vec<Label>,
}

/// Classifies an isometric cycle of a two-dimensional partial cube: a
/// 6-cycle's gated hull is the cycle, a `Q_3^-`, or a maximal full
/// subdivision; a longer cycle's convex hull is a gated disk.
pub fn classify_isometric_cycle(
    g: &CubeGraph,
    cycle: &[Label],
) -> Result<CycleClassification, CellsError> {
    if !minors::is_two_dimensional(g) {
        return Err(CellsError::HostNotTwoDimensional);
    }
    if !is_isometric_cycle(g, cycle) {
        return Err(CellsError::NotIsometric);
    }
    if cycle.len() < 6 {
        return Err(CellsError::CycleTooShort(cycle.len()));
    }
    if cycle.len() == 6 {
        let hull = g.gated_hull(cycle)?;
        let mut sorted = cycle.to_vec();
        sorted.sort();
        if hull == sorted {
            return Ok(CycleClassification { kind: CycleKind::ConvexCycle, hull });
        }
        let (induced, _) = CubeGraph::from_labels(g.m(), hull.iter().copied())?;
        if induced.n() == 7 && induced.m() == 3 {
            return Ok(CycleClassification { kind: CycleKind::QThreeMinus, hull });
        }
        let verts: BTreeSet<Label> = hull.iter().copied().collect();
        let sk = full_subdivisions(g, 4)
            .into_iter()
            .find(|h| h.vertices().iter().all(|l| verts.contains(l)) && h.vertices().len() == verts.len());
        match sk {
            Some(h) => Ok(CycleClassification {
                kind: CycleKind::FullSubdivision(h.n),
                hull,
            }),
            None => unreachable!("gated hull of a 6-cycle is C, Q_3^-, or a full subdivision"),
        }
    } else {
        let (_, hull) = g.convex_hull(cycle)?;
        assert!(
            g.is_gated(&hull)?,
            "the convex hull of a long isometric cycle is gated"
        );
        let (induced, _) = CubeGraph::from_labels(g.m(), hull.iter().copied())?;
        let disk = is_disk(&induced).expect("the hull of a long isometric cycle is a disk");
        let mut hull = hull;
        hull.sort();
        Ok(CycleClassification { kind: CycleKind::GatedDisk(disk), hull })
    }
}

/// A pseudoline arrangement given combinatorially: `lines` wires and a
/// sequence of columns, each listing the 1-based top positions of the swaps
/// performed in that column. A maximal run of consecutive positions means
/// all wires in the run cross in a single point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WiringDiagram {
    pub lines: usize,
    pub columns: Vec<Vec<usize>>,
}

/// A disk produced from a wiring diagram, with the labels of the unbounded
/// regions of the arrangement.
#[derive(Clone, Debug)]
pub struct WiringDisk {
    pub disk: Disk,
    pub unbounded: Vec<Label>,
}

impl WiringDiagram {
    /// A uniformly random simple wiring diagram: single swaps, each pair of
    /// lines crossing exactly once.
    pub fn random(lines: usize, rng: &mut impl Rng) -> WiringDiagram {
        let mut order: Vec<usize> = (0..lines).collect();
        let mut columns = Vec::new();
        loop {
            let candidates: Vec<usize> =
                (0..lines.saturating_sub(1)).filter(|&p| order[p] < order[p + 1]).collect();
            if candidates.is_empty() {
                return WiringDiagram { lines, columns };
            }
            let p = candidates[rng.gen_range(0..candidates.len())];
            order.swap(p, p + 1);
            columns.push(vec![p + 1]);
        }
    }
}

/// Builds the region graph of a wiring diagram by a left-to-right sweep.
/// Regions are labeled by the set of lines above them; the output is
/// validated as a disk of VC-dimension ≤ 2.
pub fn disk_from_wiring(w: &WiringDiagram) -> Result<WiringDisk, CellsError> {
    let l = w.lines;
    let mut order: Vec<usize> = (0..l).collect();
    let mut crossings: HashMap<(usize, usize), usize> = HashMap::new();
    let mut regions: BTreeSet<Label> = BTreeSet::new();
    let mut unbounded: BTreeSet<Label> = BTreeSet::new();

    let slot_labels = |order: &[usize]| -> Vec<Label> {
        let mut out = Vec::with_capacity(l + 1);
        let mut above = Label::EMPTY;
        out.push(above);
        for &line in order {
            above = above.with(line);
            out.push(above);
        }
        out
    };

    let record = |order: &[usize],
                  regions: &mut BTreeSet<Label>,
                  unbounded: &mut BTreeSet<Label>,
                  edge_slice: bool| {
        let slots = slot_labels(order);
        for &s in &slots {
            regions.insert(s);
        }
        unbounded.insert(slots[0]);
        unbounded.insert(slots[l]);
        if edge_slice {
            for &s in &slots {
                unbounded.insert(s);
            }
        }
    };

    record(&order, &mut regions, &mut unbounded, true);
    for (t, column) in w.columns.iter().enumerate() {
        let mut positions: Vec<usize> = column.clone();
        positions.sort_unstable();
        positions.dedup();
        if positions.is_empty() {
            return Err(CellsError::InvalidDiagram(format!("column {} is empty", t + 1)));
        }
        if positions.iter().any(|&p| p == 0 || p >= l) {
            return Err(CellsError::InvalidDiagram(format!(
                "column {} has a swap position out of range 1..{}",
                t + 1,
                l.max(1) - 1
            )));
        }
        // Maximal runs of consecutive positions are concurrent crossings.
        let mut runs: Vec<(usize, usize)> = Vec::new();
        for &p in &positions {
            match runs.last_mut() {
                Some((_, end)) if *end + 1 == p => *end = p,
                _ => runs.push((p, p)),
            }
        }
        for &(a, b) in &runs {
            // Reverse wires at 0-based positions a-1 ..= b.
            let lo = a - 1;
            let hi = b;
            for i in lo..=hi {
                for j in (i + 1)..=hi {
                    let (x, y) = (order[i].min(order[j]), order[i].max(order[j]));
                    *crossings.entry((x, y)).or_insert(0) += 1;
                }
            }
            order[lo..=hi].reverse();
        }
        record(&order, &mut regions, &mut unbounded, t + 1 == w.columns.len());
    }

    for i in 0..l {
        for j in (i + 1)..l {
            let count = crossings.get(&(i, j)).copied().unwrap_or(0);
            if count != 1 {
                return Err(CellsError::InvalidDiagram(format!(
                    "lines {} and {} cross {} times",
                    i + 1,
                    j + 1,
                    count
                )));
            }
        }
    }

    let (graph, remap) = CubeGraph::from_labels(l, regions.iter().copied())?;
    debug_assert!(remap.dropped.is_empty(), "every line borders regions on both sides");
    if !minors::is_two_dimensional(&graph) {
        return Err(CellsError::HostNotTwoDimensional);
    }
    let disk = is_disk(&graph).ok_or(CellsError::NotADisk)?;
    Ok(WiringDisk { disk, unbounded: unbounded.into_iter().collect() })
}

/// Parses the wiring diagram text format: a `lines: L` header, then one
/// line per column listing its swap positions.
pub fn parse_wiring(text: &str) -> Result<WiringDiagram, CellsError> {
    let mut lines_iter = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines_iter
        .next()
        .ok_or_else(|| CellsError::InvalidDiagram("missing `lines:` header".into()))?;
    let count = header
        .trim()
        .strip_prefix("lines:")
        .and_then(|rest| rest.trim().parse::<usize>().ok())
        .ok_or_else(|| CellsError::InvalidDiagram("header must be `lines: L`".into()))?;
    let mut columns = Vec::new();
    for line in lines_iter {
        let positions: Result<Vec<usize>, _> =
            line.split_whitespace().map(str::parse::<usize>).collect();
        let positions = positions
            .map_err(|_| CellsError::InvalidDiagram(format!("bad column `{line}`")))?;
        columns.push(positions);
    }
    Ok(WiringDiagram { lines: count, columns })
}

/// Serializes a wiring diagram in the text format accepted by
/// [`parse_wiring`].
pub fn format_wiring(w: &WiringDiagram) -> String {
    let mut out = format!("lines: {}\n", w.lines);
    for column in &w.columns {
        let text: Vec<String> = column.iter().map(usize::to_string).collect();
        out.push_str(&text.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{recognize, AbstractGraph};
    use crate::minors::isomorphic;

    fn qm(m: usize) -> CubeGraph {
        CubeGraph::from_labels(m, (0..1u64 << m).map(Label)).unwrap().0
    }

    fn sk(n: usize) -> CubeGraph {
        let mut labels: Vec<Label> = (0..n).map(Label::singleton).collect();
        for i in 0..n {
            for j in (i + 1)..n {
                labels.push(Label::singleton(i).with(j));
            }
        }
        CubeGraph::from_labels(n, labels).unwrap().0
    }

    fn sk_star(n: usize) -> CubeGraph {
        let mut labels: Vec<Label> = (0..n).map(Label::singleton).collect();
        for i in 0..n {
            for j in (i + 1)..n {
                labels.push(Label::singleton(i).with(j));
            }
        }
        labels.push(Label::EMPTY);
        CubeGraph::from_labels(n, labels).unwrap().0
    }

    fn cycle(len: usize) -> CubeGraph {
        recognize(&AbstractGraph::cycle(len)).unwrap().graph
    }

    fn q3_minus() -> CubeGraph {
        CubeGraph::from_labels(3, (0..7u64).map(Label)).unwrap().0
    }

    fn path(len: usize) -> CubeGraph {
        let labels: Vec<Label> = (0..=len).map(Label::full).collect();
        CubeGraph::from_labels(len, labels).unwrap().0
    }

    #[test]
    fn convex_cycles_examples() {
        assert_eq!(convex_cycles(&qm(2)).len(), 1);
        let q3 = convex_cycles(&qm(3));
        assert_eq!(q3.len(), 6);
        assert!(q3.iter().all(|c| c.len() == 4));
        for len in [6, 8, 10] {
            let cycles = convex_cycles(&cycle(len));
            assert_eq!(cycles.len(), 1);
            assert_eq!(cycles[0].len(), len);
        }
    }

    #[test]
    fn isometric_cycles_budget() {
        assert!(matches!(
            isometric_cycles(&qm(3), None, 8),
            Err(CellsError::BudgetExceeded(8))
        ));
    }

    #[test]
    fn isometric_cycles_examples() {
        assert!(isometric_cycles(&path(4), None, 1 << 20).unwrap().is_empty());
        let q3m = isometric_cycles(&q3_minus(), None, 1 << 20).unwrap();
        let sixes = q3m.iter().filter(|c| c.len() == 6).count();
        let fours = q3m.iter().filter(|c| c.len() == 4).count();
        assert_eq!((sixes, fours), (1, 3));
        let sk4 = isometric_cycles(&sk(4), None, 1 << 20).unwrap();
        assert_eq!(sk4.iter().filter(|c| c.len() == 6).count(), 4);
    }

    #[test]
    fn full_subdivision_examples() {
        let found = full_subdivisions(&sk(4), 4);
        assert_eq!(found.len(), 1);
        let h = &found[0];
        assert_eq!(h.n, 4);
        assert!(h.convex && h.gated && !h.extends_to_star);

        let found = full_subdivisions(&sk_star(4), 4);
        assert_eq!(found.len(), 1);
        let h = &found[0];
        assert!(h.extends_to_star && !h.convex);

        assert!(full_subdivisions(&q3_minus(), 4).is_empty());
    }

    #[test]
    fn full_subdivisions_in_sk5() {
        // SK_5 contains SK_4s but none is maximal: only SK_5 itself remains.
        let found = full_subdivisions(&sk(5), 4);
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].n, 5);
    }

    #[test]
    fn standardize_examples() {
        let g = sk(4);
        let h = full_subdivisions(&g, 4).remove(0);
        let (std_g, std_h) = standardize(&g, &h).unwrap();
        assert_eq!(std_g.labels(), g.labels());
        assert_eq!(std_h.originals, vec![Label(1), Label(2), Label(4), Label(8)]);

        // A scrambled embedding standardizes back to the same pattern.
        let scrambled: Vec<Label> = g
            .labels()
            .iter()
            .map(|&l| l.xor(Label(0b1010)).permute_from(&[3, 1, 0, 2]))
            .collect();
        let (g2, _) = CubeGraph::from_labels(4, scrambled).unwrap();
        let h2 = full_subdivisions(&g2, 4).remove(0);
        let (std_g2, std_h2) = standardize(&g2, &h2).unwrap();
        assert_eq!(std_h2.originals, vec![Label(1), Label(2), Label(4), Label(8)]);
        assert!(isomorphic(&std_g2, &g));
        assert_eq!(std_g2.labels(), std_g.labels());
    }

    #[test]
    fn standardize_inside_host() {
        let g = sk_star(5);
        let h = full_subdivisions(&g, 4).remove(0);
        let (std_g, std_h) = standardize(&g, &h).unwrap();
        for (k, &o) in std_h.originals.iter().enumerate() {
            assert_eq!(o, Label::singleton(k));
        }
        for &(i, j, s) in &std_h.subs {
            assert_eq!(s, Label::singleton(i).with(j));
        }
        assert_eq!(std_g.n(), g.n());
    }

    #[test]
    fn disk_examples() {
        for len in [4, 6, 8, 10] {
            let d = is_disk(&cycle(len)).unwrap();
            assert_eq!(d.boundary.len(), len);
        }
        assert!(is_disk(&sk(4)).is_none());
        let d = is_disk(&q3_minus()).unwrap();
        assert_eq!(d.boundary.len(), 6);
        // Q_3 is not two-dimensional, so not a disk.
        assert!(is_disk(&qm(3)).is_none());
    }

    #[test]
    fn antipode_examples() {
        let g = cycle(8);
        for &v in g.labels() {
            assert_eq!(antipode(&g, v).unwrap(), Some(v.complement(g.m())));
        }
        let g = q3_minus();
        assert_eq!(antipode(&g, Label::EMPTY).unwrap(), None);
        assert_eq!(antipodal_vertices(&g).len(), 6);
    }

    #[test]
    fn affine_witness_examples() {
        let d = is_disk(&cycle(6)).unwrap();
        let w = d.boundary[0];
        assert_eq!(d.affine_witness(w, w), Some((w, w.complement(3))));

        // Adjacent vertices of C_6, and a full search on Q_3^-.
        let u = d.boundary[0];
        let v = d.boundary[1];
        assert!(d.affine_witness(u, v).is_some());

        let d = is_disk(&q3_minus()).unwrap();
        for &u in d.graph.labels() {
            for &v in d.graph.labels() {
                let (w, anti) = d.affine_witness(u, v).expect("disks are affine");
                assert_eq!(w.xor(u).and(v.xor(anti)), Label::EMPTY);
            }
        }
    }

    #[test]
    fn classify_examples() {
        // The convex 6-cycle of SK_4 has gated hull SK_4.
        let g = sk(4);
        let six: Vec<Label> = vec![
            Label(0b0001),
            Label(0b0011),
            Label(0b0010),
            Label(0b0110),
            Label(0b0100),
            Label(0b0101),
        ];
        let class = classify_isometric_cycle(&g, &six).unwrap();
        assert!(matches!(class.kind, CycleKind::FullSubdivision(4)));
        assert_eq!(class.hull.len(), 10);

        // The isometric 6-cycle of Q_3^- hulls out to Q_3^-.
        let g = q3_minus();
        let six: Vec<Label> = cycle_order(
            &g.labels().iter().copied().filter(|&l| l != Label::EMPTY).collect::<Vec<_>>(),
        )
        .unwrap();
        let class = classify_isometric_cycle(&g, &six).unwrap();
        assert!(matches!(class.kind, CycleKind::QThreeMinus));

        // A standalone C_8 is its own gated disk.
        let g = cycle(8);
        let order: Vec<Label> = cycle_order(g.labels()).unwrap();
        let class = classify_isometric_cycle(&g, &order).unwrap();
        assert!(matches!(class.kind, CycleKind::GatedDisk(_)));
        assert_eq!(class.hull.len(), 8);

        // Q_3 hosts are rejected.
        let g = qm(3);
        let squares = convex_cycles(&g);
        assert!(matches!(
            classify_isometric_cycle(&g, &squares[0]),
            Err(CellsError::HostNotTwoDimensional)
        ));
    }

    #[test]
    fn standardized_hub_neighbors_are_the_originals() {
        // In a standardized embedding, the hub label's neighbors inside the
        // host are exactly the original vertices.
        for g in [sk(4), sk(5), sk_star(4)] {
            let h = full_subdivisions(&g, 4).remove(0);
            let (std_g, std_h) = standardize(&g, &h).unwrap();
            let hub = std_h.star_label;
            assert_eq!(hub, Label::EMPTY);
            let inside: Vec<Label> = (0..std_g.m())
                .map(|i| hub.flip(i))
                .filter(|l| std_g.contains(*l))
                .collect();
            let mut expected = std_h.originals.clone();
            expected.sort();
            let mut inside = inside;
            inside.sort();
            assert_eq!(inside, expected);
        }
    }

    #[test]
    fn wiring_examples() {
        // Zero lines: K_1. One line: K_2.
        let w = WiringDiagram { lines: 0, columns: vec![] };
        assert_eq!(disk_from_wiring(&w).unwrap().disk.graph.n(), 1);
        let w = WiringDiagram { lines: 1, columns: vec![] };
        assert_eq!(disk_from_wiring(&w).unwrap().disk.graph.n(), 2);

        // Three concurrent lines: C_6.
        let w = WiringDiagram { lines: 3, columns: vec![vec![1, 2]] };
        let out = disk_from_wiring(&w).unwrap();
        assert!(isomorphic(&out.disk.graph, &cycle(6)));

        // Three lines in general position: Q_3^-.
        let w = WiringDiagram { lines: 3, columns: vec![vec![1], vec![2], vec![1]] };
        let out = disk_from_wiring(&w).unwrap();
        assert!(isomorphic(&out.disk.graph, &q3_minus()));
        // The bounded region is the center: not unbounded.
        assert_eq!(out.unbounded.len(), 6);
    }

    #[test]
    fn wiring_rejects_double_crossings() {
        let w = WiringDiagram { lines: 2, columns: vec![vec![1], vec![1]] };
        assert!(matches!(disk_from_wiring(&w), Err(CellsError::InvalidDiagram(_))));
        let w = WiringDiagram { lines: 3, columns: vec![vec![1]] };
        assert!(matches!(disk_from_wiring(&w), Err(CellsError::InvalidDiagram(_))));
    }

    #[test]
    fn wiring_format_roundtrip() {
        let w = WiringDiagram { lines: 4, columns: vec![vec![1, 3], vec![2], vec![1], vec![3], vec![2]] };
        let text = format_wiring(&w);
        assert_eq!(parse_wiring(&text).unwrap(), w);
    }

    #[test]
    fn contract_of_disk_is_disk() {
        let w = WiringDiagram { lines: 4, columns: vec![vec![1], vec![2], vec![3], vec![1], vec![2], vec![1]] };
        let d = disk_from_wiring(&w).unwrap().disk;
        for i in 0..d.graph.m() {
            let contracted = crate::minors::contract(&d.graph, i).unwrap();
            assert!(is_disk(&contracted).is_some());
        }
    }
}

//! Isometric covers and isometric expansions, the inverse of Θ-class
//! contraction, together with the test for when an expansion preserves
//! VC-dimension.

use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

use crate::graph::{CubeGraph, GraphError, Label};
use crate::minors::{contract, SetFamily};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExpansionError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("part {0} of the cover is not an isometric subgraph")]
    NotIsometricPart(usize),
    #[error("edge ({0:?}, {1:?}) lies in neither part of the cover")]
    EdgeNotCovered(Label, Label),
    #[error("the two parts of the cover do not intersect")]
    EmptyIntersection,
}

/// An isometric cover `(V1, V0, V2)` of a graph: two isometric subgraphs
/// covering all vertices and edges, with nonempty intersection `V0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsometricCover {
    pub v1: Vec<Label>,
    pub v2: Vec<Label>,
    pub v0: Vec<Label>,
}

/// Validates a cover, naming the violated condition on failure.
pub fn check_cover(
    g: &CubeGraph,
    v1: &[Label],
    v2: &[Label],
) -> Result<IsometricCover, ExpansionError> {
    let set1: BTreeSet<Label> = v1.iter().copied().collect();
    let set2: BTreeSet<Label> = v2.iter().copied().collect();
    for &l in set1.iter().chain(set2.iter()) {
        if !g.contains(l) {
            return Err(GraphError::UnknownVertex(l).into());
        }
    }
    let v0: Vec<Label> = set1.intersection(&set2).copied().collect();
    if v0.is_empty() {
        return Err(ExpansionError::EmptyIntersection);
    }
    for (u, v) in g.edges() {
        let (lu, lv) = (g.label(u), g.label(v));
        let in1 = set1.contains(&lu) && set1.contains(&lv);
        let in2 = set2.contains(&lu) && set2.contains(&lv);
        if !in1 && !in2 {
            return Err(ExpansionError::EdgeNotCovered(lu, lv));
        }
    }
    // Vertex coverage: an uncovered vertex would leave its edges uncovered,
    // except in the one-vertex graph.
    if set1.len() + set2.len() - v0.len() != g.n() {
        let missing = g
            .labels()
            .iter()
            .copied()
            .find(|l| !set1.contains(l) && !set2.contains(l))
            .expect("counts disagree only when a vertex is missing");
        return Err(GraphError::UnknownVertex(missing).into());
    }
    let v1: Vec<Label> = set1.into_iter().collect();
    let v2: Vec<Label> = set2.into_iter().collect();
    if !g.is_isometric_subgraph(&v1)? {
        return Err(ExpansionError::NotIsometricPart(1));
    }
    if !g.is_isometric_subgraph(&v2)? {
        return Err(ExpansionError::NotIsometricPart(2));
    }
    Ok(IsometricCover { v1, v2, v0 })
}

/// The expansion of a graph along a cover: a new coordinate is appended,
/// `V1` keeps it 0, `V2` gets it 1, and `V0` is duplicated on both sides.
/// Contracting the new class recovers the input exactly.
#[derive(Clone, Debug)]
pub struct ExpansionResult {
    pub graph: CubeGraph,
    pub new_class: usize,
    /// `(old, copies)` for every old vertex, in label order.
    pub copies: Vec<(Label, Vec<Label>)>,
}

/// Expands a graph along a validated cover.
pub fn expand(g: &CubeGraph, cover: &IsometricCover) -> Result<ExpansionResult, ExpansionError> {
    let m = g.m();
    let mut labels: Vec<Label> = cover.v1.clone();
    labels.extend(cover.v2.iter().map(|l| l.with(m)));
    let (graph, remap) = CubeGraph::from_labels(m + 1, labels)?;
    debug_assert!(remap.dropped.is_empty(), "expansion keeps every class proper");
    let v1: HashSet<Label> = cover.v1.iter().copied().collect();
    let v2: HashSet<Label> = cover.v2.iter().copied().collect();
    let copies = g
        .labels()
        .iter()
        .map(|&l| {
            let mut c = Vec::with_capacity(2);
            if v1.contains(&l) {
                c.push(l);
            }
            if v2.contains(&l) {
                c.push(l.with(m));
            }
            (l, c)
        })
        .collect();
    Ok(ExpansionResult { graph, new_class: m, copies })
}

/// Whether expanding along the cover keeps the graph in `F(Q_{d+1})`:
/// exactly when the intersection `V0` has VC-dimension ≤ d − 1.
pub fn preserves_dimension(cover: &IsometricCover, m: usize, d: usize) -> bool {
    let family = SetFamily::new(m, cover.v0.iter().copied());
    family.vc_dimension() < d
}

/// Peels a graph down to a single vertex by contracting the top class at
/// each step, recording the covers; re-expanding each cover reproduces the
/// next graph exactly. Step `j` holds the graph on coordinates `0..j` and
/// the cover whose expansion appends coordinate `j`.
pub fn expansion_sequence(g: &CubeGraph) -> Vec<(CubeGraph, IsometricCover)> {
    let mut steps = Vec::new();
    let mut cur = g.clone();
    for j in (0..g.m()).rev() {
        let prev = contract(&cur, j).expect("contracting the top class");
        let v1: Vec<Label> = cur
            .labels()
            .iter()
            .filter(|l| !l.contains(j))
            .map(|&l| l.squeeze(j))
            .collect();
        let v2: Vec<Label> = cur
            .labels()
            .iter()
            .filter(|l| l.contains(j))
            .map(|&l| l.squeeze(j))
            .collect();
        let cover = check_cover(&prev, &v1, &v2)
            .expect("halfspace projections always form an isometric cover");
        steps.push((prev.clone(), cover));
        cur = prev;
    }
    steps.reverse();
    steps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{recognize, AbstractGraph};
    use crate::minors::is_two_dimensional;

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

    fn cycle(len: usize) -> CubeGraph {
        recognize(&AbstractGraph::cycle(len)).unwrap().graph
    }

    #[test]
    fn check_cover_examples() {
        let g = cycle(6);
        let all: Vec<Label> = g.labels().to_vec();
        let cover = check_cover(&g, &all, &all).unwrap();
        assert_eq!(cover.v0.len(), 6);

        // A single edge as both parts leaves the rest uncovered.
        let (u, v) = g.edges()[0];
        let edge = vec![g.label(u), g.label(v)];
        assert!(matches!(
            check_cover(&g, &edge, &edge),
            Err(ExpansionError::EdgeNotCovered(_, _))
                | Err(ExpansionError::Graph(GraphError::UnknownVertex(_)))
        ));

        // Two opposite 4-vertex paths overlapping in two antipodal pairs.
        let order: Vec<Label> = crate::cells::cycle_order(g.labels()).unwrap();
        let v1: Vec<Label> = (0..4).map(|k| order[k]).collect();
        let v2: Vec<Label> = (0..4).map(|k| order[(k + 3) % 6]).collect();
        let cover = check_cover(&g, &v1, &v2).unwrap();
        assert_eq!(cover.v0.len(), 2);
    }

    #[test]
    fn check_cover_rejects_non_isometric_part() {
        let g = cycle(6);
        let order: Vec<Label> = crate::cells::cycle_order(g.labels()).unwrap();
        // Five vertices of the hexagon are a non-isometric path.
        let v1: Vec<Label> = (0..5).map(|k| order[k]).collect();
        let all: Vec<Label> = g.labels().to_vec();
        assert_eq!(
            check_cover(&g, &v1, &all),
            Err(ExpansionError::NotIsometricPart(1))
        );
    }

    #[test]
    fn expand_examples() {
        // K_1 expands to K_2.
        let (k1, _) = CubeGraph::from_labels(0, [Label::EMPTY]).unwrap();
        let cover = check_cover(&k1, &[Label::EMPTY], &[Label::EMPTY]).unwrap();
        let out = expand(&k1, &cover).unwrap();
        assert_eq!(out.graph.n(), 2);

        // The full cover doubles Q_2 into Q_3.
        let g = qm(2);
        let all: Vec<Label> = g.labels().to_vec();
        let cover = check_cover(&g, &all, &all).unwrap();
        let out = expand(&g, &cover).unwrap();
        assert_eq!(out.graph.n(), 8);
        assert_eq!(out.graph.m(), 3);

        // Peripheral expansion of C_6 along one edge glues a square on it.
        let g = cycle(6);
        let order: Vec<Label> = crate::cells::cycle_order(g.labels()).unwrap();
        let all: Vec<Label> = g.labels().to_vec();
        let edge = vec![order[0], order[1]];
        let cover = check_cover(&g, &all, &edge).unwrap();
        let out = expand(&g, &cover).unwrap();
        assert_eq!(out.graph.n(), 8);
        let back = contract(&out.graph, out.new_class).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn expand_contract_round_trip() {
        for g in [qm(2), sk(4), cycle(8)] {
            let all: Vec<Label> = g.labels().to_vec();
            let half: Vec<Label> = g.halfspace(0, false);
            for (v1, v2) in [(all.clone(), all.clone()), (all.clone(), half.clone())] {
                let cover = check_cover(&g, &v1, &v2).unwrap();
                let out = expand(&g, &cover).unwrap();
                assert_eq!(contract(&out.graph, out.new_class).unwrap(), g);
            }
        }
    }

    #[test]
    fn preserves_dimension_examples() {
        // A single-vertex intersection always preserves dimension 2.
        let g = sk(4);
        let all: Vec<Label> = g.labels().to_vec();
        let single = vec![g.label(0)];
        let cover = check_cover(&g, &all, &single).unwrap();
        assert!(preserves_dimension(&cover, g.m(), 2));

        // The full cover of Q_2 shatters two coordinates.
        let g = qm(2);
        let all: Vec<Label> = g.labels().to_vec();
        let cover = check_cover(&g, &all, &all).unwrap();
        assert!(!preserves_dimension(&cover, g.m(), 2));

        // SK_4 expanded along an isometric tree stays two-dimensional.
        let g = sk(4);
        let tree = vec![Label(0b0001), Label(0b0011), Label(0b0010), Label(0b0110)];
        let cover = check_cover(&g, &all_of(&g), &tree).unwrap();
        assert!(preserves_dimension(&cover, g.m(), 2));
        let out = expand(&g, &cover).unwrap();
        assert!(is_two_dimensional(&out.graph));
    }

    fn all_of(g: &CubeGraph) -> Vec<Label> {
        g.labels().to_vec()
    }

    #[test]
    fn preserves_dimension_matches_expanded_membership() {
        // Both directions of the equivalence on a few covers of C_6 and SK_4.
        for g in [cycle(6), sk(4)] {
            let all = all_of(&g);
            let mut covers = vec![(all.clone(), all.clone())];
            for i in 0..g.m() {
                covers.push((all.clone(), g.halfspace(i, true)));
                covers.push((g.halfspace(i, false), all.clone()));
            }
            for (v1, v2) in covers {
                let Ok(cover) = check_cover(&g, &v1, &v2) else { continue };
                let out = expand(&g, &cover).unwrap();
                assert_eq!(
                    preserves_dimension(&cover, g.m(), 2),
                    is_two_dimensional(&out.graph)
                );
            }
        }
    }

    #[test]
    fn expansion_sequence_examples() {
        let g = qm(2);
        let steps = expansion_sequence(&g);
        assert_eq!(steps.len(), 2);
        assert_eq!(steps[0].0.n(), 1);

        for g in [cycle(6), sk(4)] {
            let steps = expansion_sequence(&g);
            assert_eq!(steps.len(), g.m());
            // Replaying the covers reproduces the graph exactly.
            let mut cur = steps[0].0.clone();
            assert_eq!(cur.n(), 1);
            for (graph, cover) in &steps {
                assert_eq!(&cur, graph);
                cur = expand(&cur, cover).unwrap().graph;
            }
            assert_eq!(cur, g);
        }

        // Every intermediate stage of C_6 is an even cycle or a path.
        let steps = expansion_sequence(&cycle(6));
        for (graph, _) in &steps[1..] {
            let max_degree = (0..graph.n()).map(|v| graph.neighbors(v).len()).max().unwrap();
            assert!(max_degree <= 2);
        }
    }

    #[test]
    fn expansion_of_convex_set_stays_convex() {
        // Convex subgraphs map to convex subgraphs under expansion.
        let g = sk(4);
        let all = all_of(&g);
        let half = g.halfspace(0, false);
        let cover = check_cover(&g, &all, &half).unwrap();
        let out = expand(&g, &cover).unwrap();
        let v1: HashSet<Label> = cover.v1.iter().copied().collect();
        let v2: HashSet<Label> = cover.v2.iter().copied().collect();
        for i in 0..g.m() {
            for positive in [false, true] {
                let convex_set = g.halfspace(i, positive);
                let mut image = Vec::new();
                for &l in &convex_set {
                    if v1.contains(&l) {
                        image.push(l);
                    }
                    if v2.contains(&l) {
                        image.push(l.with(out.new_class));
                    }
                }
                assert!(out.graph.is_convex(&image).unwrap());
            }
        }
    }
}

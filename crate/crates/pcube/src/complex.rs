//! The convex-cycle cell complex of a partial cube, carriers and
//! half-carriers of Θ-classes, 2d-amalgam decomposition into gated cells,
//! and Euler-characteristic checks.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde_json::json;
use thiserror::Error;

use crate::cells;
use crate::completion;
use crate::graph::{CubeGraph, GraphError, Label};
use crate::minors;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("the host graph has VC-dimension greater than 2")]
    HostNotTwoDimensional,
    #[error("no admissible gated cell pair found for the amalgam split")]
    NoSplitFound,
}

/// The 2-dimensional cell complex of a partial cube: its vertices, edges,
/// and one 2-cell per convex cycle.
#[derive(Clone, Debug)]
pub struct CellComplex {
    pub vertex_count: usize,
    pub edges: Vec<(usize, usize)>,
    /// Convex cycles as vertex-id sequences in cyclic order.
    pub cells: Vec<Vec<usize>>,
}

impl CellComplex {
    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count as i64 - self.edges.len() as i64 + self.cells.len() as i64
    }

    /// GF(2) rank of the cells as edge vectors; for a connected graph the
    /// convex cycles span the cycle space, so the rank is `|E| − |V| + 1`.
    pub fn cycle_space_rank(&self) -> usize {
        let edge_index: std::collections::HashMap<(usize, usize), usize> = self
            .edges
            .iter()
            .enumerate()
            .map(|(k, &(u, v))| ((u.min(v), u.max(v)), k))
            .collect();
        let words = self.edges.len().div_ceil(64);
        let mut basis: Vec<Vec<u64>> = Vec::new();
        for cell in &self.cells {
            let mut row = vec![0u64; words];
            for i in 0..cell.len() {
                let (u, v) = (cell[i], cell[(i + 1) % cell.len()]);
                let e = edge_index[&(u.min(v), u.max(v))];
                row[e / 64] ^= 1 << (e % 64);
            }
            for b in &basis {
                let lead = b.iter().position(|&w| w != 0).unwrap();
                let bit = b[lead].trailing_zeros() as usize;
                if row[lead] >> bit & 1 == 1 {
                    for (r, w) in row.iter_mut().zip(b.iter()) {
                        *r ^= w;
                    }
                }
            }
            if row.iter().any(|&w| w != 0) {
                basis.push(row);
            }
        }
        basis.len()
    }

    pub fn spans_cycle_space(&self) -> bool {
        let expected = self.edges.len() + 1 - self.vertex_count;
        self.cells.len() >= expected && self.cycle_space_rank() == expected
    }
}

/// Builds the convex-cycle cell complex.
pub fn cell_complex(g: &CubeGraph) -> CellComplex {
    let cells = cells::convex_cycles(g)
        .into_iter()
        .map(|cycle| cycle.iter().map(|&l| g.id(l).unwrap()).collect())
        .collect();
    CellComplex { vertex_count: g.n(), edges: g.edges(), cells }
}

/// The carrier of Θ-class `i`: every cell of the complex crossed by the
/// class, i.e. the endpoints of its edges together with all convex cycles
/// it crosses.
pub fn carrier(g: &CubeGraph, i: usize) -> Result<Vec<Label>, ComplexError> {
    g.check_coordinate(i)?;
    let mut out: BTreeSet<Label> = BTreeSet::new();
    for &l in g.labels() {
        if !l.contains(i) && g.contains(l.flip(i)) {
            out.insert(l);
            out.insert(l.flip(i));
        }
    }
    for cycle in cells::convex_cycles(g) {
        let crossed = cycle
            .iter()
            .any(|&l| !l.contains(i) && cycle.contains(&l.flip(i)));
        if crossed {
            out.extend(cycle);
        }
    }
    Ok(out.into_iter().collect())
}

/// The half-carrier: the carrier restricted to one halfspace.
pub fn half_carrier(g: &CubeGraph, i: usize, positive: bool) -> Result<Vec<Label>, ComplexError> {
    Ok(carrier(g, i)?
        .into_iter()
        .filter(|l| l.contains(i) == positive)
        .collect())
}

/// The extended halfspace: one halfspace together with the half-carrier on
/// the other side.
pub fn extended_halfspace(
    g: &CubeGraph,
    i: usize,
    positive: bool,
) -> Result<Vec<Label>, ComplexError> {
    let mut out: BTreeSet<Label> = g.halfspace(i, positive).into_iter().collect();
    out.extend(half_carrier(g, i, !positive)?);
    Ok(out.into_iter().collect())
}

/// What a leaf of the amalgam tree is.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LeafKind {
    Vertex,
    Edge,
    Cycle(usize),
    FullSubdivision(usize),
}

/// A node of the decomposition tree. Splits record the Θ-class (as a root
/// coordinate) whose carrier produced the parts; cut nodes split at an
/// articulation vertex.
#[derive(Clone, Debug)]
pub enum AmalgamNode {
    Leaf { vertices: Vec<Label>, kind: LeafKind },
    Split { class: usize, left: Box<AmalgamNode>, right: Box<AmalgamNode> },
    Cut { vertex: Label, left: Box<AmalgamNode>, right: Box<AmalgamNode> },
}

#[derive(Clone, Debug)]
pub struct AmalgamTree {
    pub root: AmalgamNode,
    m: usize,
}

impl AmalgamTree {
    pub fn leaves(&self) -> Vec<(&[Label], &LeafKind)> {
        fn walk<'a>(node: &'a AmalgamNode, out: &mut Vec<(&'a [Label], &'a LeafKind)>) {
            match node {
                AmalgamNode::Leaf { vertices, kind } => out.push((vertices, kind)),
                AmalgamNode::Split { left, right, .. }
                | AmalgamNode::Cut { left, right, .. } => {
                    walk(left, out);
                    walk(right, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.root, &mut out);
        out
    }

    /// Union of all leaf vertex sets; equals the host's vertex set.
    pub fn reassemble(&self) -> Vec<Label> {
        let mut out: BTreeSet<Label> = BTreeSet::new();
        for (vertices, _) in self.leaves() {
            out.extend(vertices.iter().copied());
        }
        out.into_iter().collect()
    }

    pub fn to_text(&self) -> String {
        fn walk(node: &AmalgamNode, depth: usize, m: usize, out: &mut String) {
            let pad = "  ".repeat(depth);
            match node {
                AmalgamNode::Leaf { vertices, kind } => {
                    let kind = match kind {
                        LeafKind::Vertex => "vertex".to_string(),
                        LeafKind::Edge => "edge".to_string(),
                        LeafKind::Cycle(len) => format!("cycle C_{len}"),
                        LeafKind::FullSubdivision(n) => format!("full subdivision SK_{n}"),
                    };
                    let labels: Vec<String> =
                        vertices.iter().map(|l| l.bitstring(m)).collect();
                    out.push_str(&format!("{pad}leaf {kind}: {}\n", labels.join(" ")));
                }
                AmalgamNode::Split { class, left, right } => {
                    out.push_str(&format!("{pad}split on class {class}\n"));
                    walk(left, depth + 1, m, out);
                    walk(right, depth + 1, m, out);
                }
                AmalgamNode::Cut { vertex, left, right } => {
                    out.push_str(&format!("{pad}cut at {}\n", vertex.bitstring(m)));
                    walk(left, depth + 1, m, out);
                    walk(right, depth + 1, m, out);
                }
            }
        }
        let mut out = String::new();
        walk(&self.root, 0, self.m, &mut out);
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        fn walk(node: &AmalgamNode, m: usize) -> serde_json::Value {
            match node {
                AmalgamNode::Leaf { vertices, kind } => {
                    let kind = match kind {
                        LeafKind::Vertex => "vertex".to_string(),
                        LeafKind::Edge => "edge".to_string(),
                        LeafKind::Cycle(len) => format!("C_{len}"),
                        LeafKind::FullSubdivision(n) => format!("SK_{n}"),
                    };
                    json!({
                        "leaf": kind,
                        "vertices": vertices.iter().map(|l| l.bitstring(m)).collect::<Vec<_>>(),
                    })
                }
                AmalgamNode::Split { class, left, right } => json!({
                    "split_class": class,
                    "left": walk(left, m),
                    "right": walk(right, m),
                }),
                AmalgamNode::Cut { vertex, left, right } => json!({
                    "cut_vertex": vertex.bitstring(m),
                    "left": walk(left, m),
                    "right": walk(right, m),
                }),
            }
        }
        walk(&self.root, self.m)
    }
}

/// Decomposes a two-dimensional partial cube into gated cells by repeated
/// 2d-amalgam splits: articulation vertices first, then splits along a
/// Θ-class crossing one of two gated cells that share an edge. Leaves are
/// gated cycles or gated full subdivisions (or vertices and edges).
pub fn amalgam_decompose(g: &CubeGraph) -> Result<AmalgamTree, ComplexError> {
    if !minors::is_two_dimensional(g) {
        return Err(ComplexError::HostNotTwoDimensional);
    }
    let root = decompose_part(g, g.labels().to_vec())?;
    let tree = AmalgamTree { root, m: g.m() };
    debug_assert_eq!(tree.reassemble(), g.labels().to_vec());
    Ok(tree)
}

fn decompose_part(root: &CubeGraph, part: Vec<Label>) -> Result<AmalgamNode, ComplexError> {
    if let Some(kind) = leaf_kind(root, &part) {
        return Ok(AmalgamNode::Leaf { vertices: part, kind });
    }
    let (h, remap) = CubeGraph::from_labels(root.m(), part.iter().copied())?;
    // Local labels back to the root universe, replaying the normalization
    // that from_labels applies when it compacts coordinates.
    let drop_mask = remap
        .dropped
        .iter()
        .fold(Label::EMPTY, |acc, &i| acc.with(i));
    let smallest = part.iter().copied().min().unwrap();
    let xor_base = smallest.and(drop_mask);
    let lift_map: HashMap<Label, Label> = part
        .iter()
        .map(|&l| (l.xor(xor_base).squeeze_all(drop_mask), l))
        .collect();
    debug_assert!(h.labels().iter().all(|l| lift_map.contains_key(l)));
    let lift = |l: Label| lift_map[&l];

    // Articulation split first.
    if let Some(v) = articulation_vertex(&h) {
        let (side_a, side_b) = split_at_cut(&h, v);
        let left: Vec<Label> = side_a.into_iter().map(lift).collect();
        let right: Vec<Label> = side_b.into_iter().map(lift).collect();
        return Ok(AmalgamNode::Cut {
            vertex: lift(h.label(v)),
            left: Box::new(decompose_part(root, left)?),
            right: Box::new(decompose_part(root, right)?),
        });
    }

    // Gated cells of the part: gated convex cycles and gated maximal full
    // subdivisions.
    let mut cells_list: Vec<Vec<Label>> = Vec::new();
    for cycle in cells::convex_cycles(&h) {
        if h.is_gated(&cycle)? {
            let mut sorted = cycle;
            sorted.sort();
            cells_list.push(sorted);
        }
    }
    for sub in cells::full_subdivisions(&h, 4) {
        if sub.gated {
            cells_list.push(sub.vertices());
        }
    }
    cells_list.sort();

    // First admissible pair of cells sharing an edge, with a Θ-class
    // crossing the first cell, avoiding the shared edge, and leaving the
    // second cell in one halfspace.
    for c1 in &cells_list {
        for c2 in &cells_list {
            if c1 == c2 {
                continue;
            }
            let shared: Vec<Label> =
                c1.iter().copied().filter(|l| c2.contains(l)).collect();
            if shared.len() != 2 || shared[0].dist(shared[1]) != 1 {
                continue;
            }
            let edge_class = shared[0].xor(shared[1]).iter().next().unwrap();
            let crossing: Vec<usize> = (0..h.m())
                .filter(|&i| {
                    i != edge_class
                        && c1.iter().any(|&l| !l.contains(i) && c1.contains(&l.flip(i)))
                })
                .collect();
            for &i in &crossing {
                let c2_plus = c2.iter().all(|l| l.contains(i));
                let c2_minus = c2.iter().all(|l| !l.contains(i));
                if !c2_plus && !c2_minus {
                    continue;
                }
                // C_2's side is kept whole; the other side is extended by
                // the half-carrier facing it.
                let side = c2_plus;
                let part2: Vec<Label> = h.halfspace(i, side);
                let mut part1: BTreeSet<Label> =
                    h.halfspace(i, !side).into_iter().collect();
                part1.extend(half_carrier(&h, i, side)?);
                if part2.len() == h.n() || part1.len() == h.n() {
                    continue;
                }
                if c2.iter().all(|l| part1.contains(l)) {
                    // The split must separate C_2 from part of C_1.
                    continue;
                }
                debug_assert_eq!(
                    part1.len() + part2.len() - half_carrier(&h, i, side)?.len(),
                    h.n(),
                    "the two parts glue along the half-carrier and cover the part"
                );
                let left: Vec<Label> = part1.into_iter().map(lift).collect();
                let right: Vec<Label> = part2.into_iter().map(lift).collect();
                return Ok(AmalgamNode::Split {
                    class: remap.kept[i],
                    left: Box::new(decompose_part(root, left)?),
                    right: Box::new(decompose_part(root, right)?),
                });
            }
        }
    }
    Err(ComplexError::NoSplitFound)
}

fn leaf_kind(root: &CubeGraph, part: &[Label]) -> Option<LeafKind> {
    match part.len() {
        1 => return Some(LeafKind::Vertex),
        2 => return Some(LeafKind::Edge),
        _ => {}
    }
    if let Some(order) = cells::cycle_order(part) {
        let gated = root.is_gated(&order).unwrap_or(false);
        debug_assert!(gated, "cells of the decomposition are gated in the host");
        return Some(LeafKind::Cycle(part.len()));
    }
    let (h, _) = CubeGraph::from_labels(root.m(), part.iter().copied()).ok()?;
    let subs = cells::full_subdivisions(&h, 4);
    if let Some(sub) = subs.iter().find(|s| s.vertices().len() == part.len()) {
        let gated = root.is_gated(part).unwrap_or(false);
        debug_assert!(gated, "cells of the decomposition are gated in the host");
        return Some(LeafKind::FullSubdivision(sub.n));
    }
    None
}

fn articulation_vertex(g: &CubeGraph) -> Option<usize> {
    let n = g.n();
    if n <= 2 {
        return None;
    }
    (0..n).find(|&v| {
        let start = (v + 1) % n;
        let mut seen = HashSet::from([start]);
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &w in g.neighbors(u) {
                if w != v && seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen.len() != n - 1
    })
}

fn split_at_cut(g: &CubeGraph, v: usize) -> (Vec<Label>, Vec<Label>) {
    // One component of g − v plus v, against the rest plus v.
    let n = g.n();
    let start = g.neighbors(v)[0];
    let mut seen = HashSet::from([start]);
    let mut stack = vec![start];
    while let Some(u) = stack.pop() {
        for &w in g.neighbors(u) {
            if w != v && seen.insert(w) {
                stack.push(w);
            }
        }
    }
    let mut side_a: Vec<Label> = seen.iter().map(|&u| g.label(u)).collect();
    side_a.push(g.label(v));
    let mut side_b: Vec<Label> = (0..n)
        .filter(|&u| u != v && !seen.contains(&u))
        .map(|u| g.label(u))
        .collect();
    side_b.push(g.label(v));
    (side_a, side_b)
}

/// Which cell complex to measure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComplexChoice {
    /// The convex-cycle complex of the graph itself.
    Plain,
    /// The complex of the canonical COM completion; defined for
    /// two-dimensional graphs and always contractible, so `χ = 1`.
    ComCompleted,
}

/// Euler characteristic `|V| − |E| + |cells|` of the chosen complex.
pub fn euler_characteristic(g: &CubeGraph, choice: ComplexChoice) -> Result<i64, ComplexError> {
    let complex = match choice {
        ComplexChoice::Plain => cell_complex(g),
        ComplexChoice::ComCompleted => {
            let report =
                completion::com_completion(g).map_err(|_| ComplexError::HostNotTwoDimensional)?;
            cell_complex(&report.output)
        }
    };
    Ok(complex.euler_characteristic())
}

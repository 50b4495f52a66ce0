//! Label-based partial-cube representation, recognition from abstract
//! graphs, distances, intervals, convexity, gates, and Θ-classes.
//!
//! Vertices are identified by their hypercube address: a [`Label`] is the set
//! of coordinates on whose positive side the vertex lies. A [`CubeGraph`]
//! stores a duplicate-free label set; edges are exactly the label pairs at
//! Hamming distance 1, and construction validates that this induced subgraph
//! of the hypercube is connected and isometric.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

/// Maximum supported universe size (labels are 64-bit masks).
pub const MAX_COORDS: usize = 64;

/// A subset of the coordinate universe `{0..m}`, used both as a hypercube
/// address of a vertex and as a set of Θ-class indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Label(pub u64);

impl Label {
    pub const EMPTY: Label = Label(0);

    pub fn singleton(i: usize) -> Label {
        Label(1 << i)
    }

    pub fn full(m: usize) -> Label {
        if m == 0 {
            Label(0)
        } else {
            Label(u64::MAX >> (64 - m))
        }
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> Label {
        Label(self.0 | 1 << i)
    }

    pub fn without(self, i: usize) -> Label {
        Label(self.0 & !(1 << i))
    }

    pub fn flip(self, i: usize) -> Label {
        Label(self.0 ^ 1 << i)
    }

    pub fn xor(self, other: Label) -> Label {
        Label(self.0 ^ other.0)
    }

    pub fn and(self, other: Label) -> Label {
        Label(self.0 & other.0)
    }

    pub fn or(self, other: Label) -> Label {
        Label(self.0 | other.0)
    }

    pub fn complement(self, m: usize) -> Label {
        Label(!self.0).and(Label::full(m))
    }

    pub fn is_subset_of(self, other: Label) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn weight(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Hamming distance between two labels.
    pub fn dist(self, other: Label) -> usize {
        (self.0 ^ other.0).count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    /// Removes coordinate `i` and shifts all higher coordinates down by one.
    pub fn squeeze(self, i: usize) -> Label {
        let low = self.0 & ((1u64 << i) - 1);
        let high = self.0 >> (i + 1) << i;
        Label(low | high)
    }

    /// Removes every coordinate in `mask`, compacting the survivors in order.
    pub fn squeeze_all(self, mask: Label) -> Label {
        let mut out = 0u64;
        let mut k = 0;
        for i in 0..MAX_COORDS {
            if mask.contains(i) {
                continue;
            }
            if self.contains(i) {
                out |= 1 << k;
            }
            k += 1;
        }
        Label(out)
    }

    /// Bitstring of length `m`; index 0 is the leftmost character.
    pub fn bitstring(self, m: usize) -> String {
        (0..m).map(|i| if self.contains(i) { '1' } else { '0' }).collect()
    }

    pub fn from_bitstring(s: &str) -> Option<Label> {
        if s.len() > MAX_COORDS {
            return None;
        }
        let mut bits = 0u64;
        for (i, c) in s.chars().enumerate() {
            match c {
                '1' => bits |= 1 << i,
                '0' => {}
                _ => return None,
            }
        }
        Some(Label(bits))
    }

    /// Applies a coordinate permutation: bit `i` of the result is bit
    /// `perm[i]` of `self`.
    pub fn permute_from(self, perm: &[usize]) -> Label {
        let mut out = 0u64;
        for (new, &old) in perm.iter().enumerate() {
            if self.contains(old) {
                out |= 1 << new;
            }
        }
        Label(out)
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// Errors raised by graph construction, recognition, and hull computation.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("label set is empty")]
    EmptyLabelSet,
    #[error("label {0:?} exceeds universe width {1}")]
    WidthMismatch(Label, usize),
    #[error("label set induces a disconnected subgraph of the hypercube")]
    NotConnected,
    #[error("graph distance between {0:?} and {1:?} exceeds their Hamming distance")]
    NotIsometric(Label, Label),
    #[error("vertex {0:?} is not in the graph")]
    UnknownVertex(Label),
    #[error("coordinate {0} is not a coordinate of the graph")]
    UnknownCoordinate(usize),
    #[error("graph is not bipartite")]
    NotBipartite,
    #[error("halfspace of edge ({edge_u}, {edge_v}) is not convex: shortest path {path:?} between {x} and {y} leaves it")]
    HalfspaceNotConvex {
        edge_u: usize,
        edge_v: usize,
        x: usize,
        y: usize,
        path: Vec<usize>,
    },
    #[error("gated hull enumeration needs 2^{0} candidates, over budget 2^{1}")]
    TooManyFreeClasses(usize, usize),
}

/// Per-coordinate constraint of a [`Region`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Minus,
    Plus,
    Both,
}

impl Sign {
    pub fn matches(self, bit: bool) -> bool {
        match self {
            Sign::Minus => !bit,
            Sign::Plus => bit,
            Sign::Both => true,
        }
    }

    pub fn opposite(self) -> Sign {
        match self {
            Sign::Minus => Sign::Plus,
            Sign::Plus => Sign::Minus,
            Sign::Both => Sign::Both,
        }
    }
}

/// An intersection of halfspaces: one sign per Θ-class. The vertex set it
/// selects is always convex in the hosting graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub signs: Vec<Sign>,
}

impl Region {
    pub fn all(m: usize) -> Region {
        Region { signs: vec![Sign::Both; m] }
    }

    pub fn matches(&self, label: Label) -> bool {
        self.signs.iter().enumerate().all(|(i, s)| s.matches(label.contains(i)))
    }

    /// Coordinates whose sign is fixed (not `Both`).
    pub fn fixed(&self) -> Label {
        let mut out = Label::EMPTY;
        for (i, s) in self.signs.iter().enumerate() {
            if *s != Sign::Both {
                out = out.with(i);
            }
        }
        out
    }
}

/// Remap produced when unused coordinates are compacted away: `kept[new]` is
/// the original index of the surviving coordinate `new`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoordRemap {
    pub kept: Vec<usize>,
    pub dropped: Vec<usize>,
}

/// One Θ-class of a partial cube: the edges flipping a fixed coordinate, the
/// two complementary convex halfspaces, and their boundaries.
#[derive(Clone, Debug)]
pub struct ThetaClass {
    pub index: usize,
    /// Edges as vertex-id pairs `(u, v)` with `u` on the minus side.
    pub edges: Vec<(usize, usize)>,
    pub minus: Vec<usize>,
    pub plus: Vec<usize>,
    pub boundary_minus: Vec<usize>,
    pub boundary_plus: Vec<usize>,
}

/// A partial cube given by its vertex labels. Edges are label pairs at
/// Hamming distance 1; construction validates connectivity and isometry and
/// compacts unused coordinates, so `m` is always the isometric dimension.
#[derive(Clone)]
pub struct CubeGraph {
    m: usize,
    labels: Vec<Label>,
    index: HashMap<Label, usize>,
    adj: Vec<Vec<usize>>,
}

impl fmt::Debug for CubeGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CubeGraph(m={}, labels={:?})", self.m, self.labels)
    }
}

impl PartialEq for CubeGraph {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.labels == other.labels
    }
}

impl Eq for CubeGraph {}

impl CubeGraph {
    /// Builds a validated partial cube from a label set, compacting unused
    /// coordinates and reporting the remap.
    pub fn from_labels(
        m: usize,
        labels: impl IntoIterator<Item = Label>,
    ) -> Result<(CubeGraph, CoordRemap), GraphError> {
        if m > MAX_COORDS {
            return Err(GraphError::WidthMismatch(Label::EMPTY, m));
        }
        let mut labels: Vec<Label> = labels.into_iter().collect();
        labels.sort();
        labels.dedup();
        if labels.is_empty() {
            return Err(GraphError::EmptyLabelSet);
        }
        let width = Label::full(m);
        for &l in &labels {
            if !l.is_subset_of(width) {
                return Err(GraphError::WidthMismatch(l, m));
            }
        }

        // Compact coordinates on which all labels agree.
        let mut varying = Label::EMPTY;
        for &l in &labels {
            varying = varying.or(l.xor(labels[0]));
        }
        let mut remap = CoordRemap::default();
        for i in 0..m {
            if varying.contains(i) {
                remap.kept.push(i);
            } else {
                remap.dropped.push(i);
            }
        }
        let drop_mask = {
            let mut mask = Label::EMPTY;
            for &i in &remap.dropped {
                mask = mask.with(i);
            }
            mask
        };
        // Normalize so the compacted labels are genuine subsets of the new
        // universe even when the dropped coordinates were constantly 1.
        let base = labels[0].and(drop_mask);
        let mut compacted: Vec<Label> =
            labels.iter().map(|&l| l.xor(base).squeeze_all(drop_mask)).collect();
        compacted.sort();
        let m = remap.kept.len();
        let labels = compacted;

        let index: HashMap<Label, usize> =
            labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let mut adj = vec![Vec::new(); labels.len()];
        for (u, &l) in labels.iter().enumerate() {
            for i in 0..m {
                if let Some(&v) = index.get(&l.flip(i)) {
                    adj[u].push(v);
                }
            }
        }
        let g = CubeGraph { m, labels, index, adj };

        // Connectivity, then isometry: BFS distance must equal Hamming.
        let dist0 = g.bfs(0);
        if dist0.contains(&u32::MAX) {
            return Err(GraphError::NotConnected);
        }
        for u in 0..g.n() {
            let dist = g.bfs(u);
            for (v, &d) in dist.iter().enumerate().skip(u + 1) {
                if d as usize != g.labels[u].dist(g.labels[v]) {
                    return Err(GraphError::NotIsometric(g.labels[u], g.labels[v]));
                }
            }
        }
        Ok((g, remap))
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Isometric dimension (number of Θ-classes).
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> Label {
        self.labels[v]
    }

    pub fn id(&self, label: Label) -> Option<usize> {
        self.index.get(&label).copied()
    }

    pub fn contains(&self, label: Label) -> bool {
        self.index.contains_key(&label)
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// All edges as id pairs `(u, v)` with `u < v`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n() {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    /// BFS distances from `src` over vertex ids (`u32::MAX` = unreachable).
    pub fn bfs(&self, src: usize) -> Vec<u32> {
        bfs(&self.adj, src)
    }

    /// Graph distance; equals the Hamming distance of the labels.
    pub fn distance(&self, u: Label, v: Label) -> Result<usize, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        Ok(u.dist(v))
    }

    /// The interval `I(u, v)`: all vertices on shortest `(u, v)`-paths,
    /// i.e. the labels lying coordinatewise between `u` and `v`.
    pub fn interval(&self, u: Label, v: Label) -> Result<Vec<Label>, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let lo = u.and(v);
        let hi = u.or(v);
        Ok(self
            .labels
            .iter()
            .copied()
            .filter(|&w| lo.is_subset_of(w) && w.is_subset_of(hi))
            .collect())
    }

    fn check_vertex(&self, v: Label) -> Result<(), GraphError> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(GraphError::UnknownVertex(v))
        }
    }

    pub fn check_coordinate(&self, i: usize) -> Result<(), GraphError> {
        if i < self.m {
            Ok(())
        } else {
            Err(GraphError::UnknownCoordinate(i))
        }
    }

    /// The Θ-class of coordinate `i`.
    pub fn theta_class(&self, i: usize) -> Result<ThetaClass, GraphError> {
        self.check_coordinate(i)?;
        let mut edges = Vec::new();
        let mut minus = Vec::new();
        let mut plus = Vec::new();
        let mut boundary_minus = Vec::new();
        let mut boundary_plus = Vec::new();
        for (u, &l) in self.labels.iter().enumerate() {
            if l.contains(i) {
                plus.push(u);
            } else {
                minus.push(u);
                if let Some(&v) = self.index.get(&l.flip(i)) {
                    edges.push((u, v));
                    boundary_minus.push(u);
                    boundary_plus.push(v);
                }
            }
        }
        Ok(ThetaClass { index: i, edges, minus, plus, boundary_minus, boundary_plus })
    }

    /// Vertex labels of the halfspace of coordinate `i` with the given bit.
    pub fn halfspace(&self, i: usize, positive: bool) -> Vec<Label> {
        self.labels.iter().copied().filter(|l| l.contains(i) == positive).collect()
    }

    /// Labels matching a region.
    pub fn region_vertices(&self, region: &Region) -> Vec<Label> {
        self.labels.iter().copied().filter(|&l| region.matches(l)).collect()
    }

    /// Convex hull of a nonempty vertex set: the smallest convex superset,
    /// returned as a region (per Θ-class: `Both` if crossed, otherwise the
    /// side containing `S`) together with its vertex set.
    pub fn convex_hull(&self, set: &[Label]) -> Result<(Region, Vec<Label>), GraphError> {
        if set.is_empty() {
            return Err(GraphError::EmptyLabelSet);
        }
        for &v in set {
            self.check_vertex(v)?;
        }
        let mut signs = Vec::with_capacity(self.m);
        for i in 0..self.m {
            let has_plus = set.iter().any(|l| l.contains(i));
            let has_minus = set.iter().any(|l| !l.contains(i));
            signs.push(match (has_minus, has_plus) {
                (true, true) => Sign::Both,
                (false, true) => Sign::Plus,
                (true, false) => Sign::Minus,
                (false, false) => unreachable!("set is nonempty"),
            });
        }
        let region = Region { signs };
        let vertices = self.region_vertices(&region);
        Ok((region, vertices))
    }

    /// Whether `S` equals its convex hull.
    pub fn is_convex(&self, set: &[Label]) -> Result<bool, GraphError> {
        let (_, hull) = self.convex_hull(set)?;
        let set: HashSet<Label> = set.iter().copied().collect();
        Ok(hull.len() == set.len() && hull.iter().all(|l| set.contains(l)))
    }

    /// Whether the subgraph induced by `S` is isometric in the graph.
    pub fn is_isometric_subgraph(&self, set: &[Label]) -> Result<bool, GraphError> {
        let mut ids = Vec::with_capacity(set.len());
        for &v in set {
            self.check_vertex(v)?;
            ids.push(self.id(v).unwrap());
        }
        ids.sort_unstable();
        ids.dedup();
        let pos: HashMap<usize, usize> = ids.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let sub_adj: Vec<Vec<usize>> = ids
            .iter()
            .map(|&v| {
                self.adj[v].iter().filter_map(|w| pos.get(w).copied()).collect::<Vec<_>>()
            })
            .collect();
        for (k, &u) in ids.iter().enumerate() {
            let dist = bfs(&sub_adj, k);
            for (l, &v) in ids.iter().enumerate().skip(k + 1) {
                if dist[l] as usize != self.labels[u].dist(self.labels[v]) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Gate of `v` in `S`: the unique `x'` in `S` with
    /// `d(v, x') + d(x', y) = d(v, y)` for every `y` in `S`, if it exists.
    pub fn gate(&self, v: Label, set: &[Label]) -> Result<Option<Label>, GraphError> {
        self.check_vertex(v)?;
        if set.is_empty() {
            return Err(GraphError::EmptyLabelSet);
        }
        for &x in set {
            self.check_vertex(x)?;
        }
        Ok(self.gate_unchecked(v, set))
    }

    fn gate_unchecked(&self, v: Label, set: &[Label]) -> Option<Label> {
        set.iter()
            .copied()
            .find(|&x| set.iter().all(|&y| v.dist(x) + x.dist(y) == v.dist(y)))
    }

    /// Whether every vertex of the graph has a gate in `S`.
    pub fn is_gated(&self, set: &[Label]) -> Result<bool, GraphError> {
        if set.is_empty() {
            return Err(GraphError::EmptyLabelSet);
        }
        for &x in set {
            self.check_vertex(x)?;
        }
        Ok(self.labels.iter().all(|&v| self.gate_unchecked(v, set).is_some()))
    }

    /// Smallest gated superset of `S`, computed by enumerating all convex
    /// supersets (per Θ-class not crossing `conv(S)`: keep the side of `S`
    /// or free the class), filtering the gated ones, and intersecting them.
    /// Gated sets are intersection-closed, so the intersection is gated.
    pub fn gated_hull(&self, set: &[Label]) -> Result<Vec<Label>, GraphError> {
        self.gated_hull_with_budget(set, 20)
    }

    /// Same as [`CubeGraph::gated_hull`] with an explicit budget: errors if
    /// more than `2^budget_log2` convex supersets would be enumerated.
    pub fn gated_hull_with_budget(
        &self,
        set: &[Label],
        budget_log2: usize,
    ) -> Result<Vec<Label>, GraphError> {
        let (region, _) = self.convex_hull(set)?;
        let free: Vec<usize> = (0..self.m).filter(|&i| region.signs[i] != Sign::Both).collect();
        if free.len() > budget_log2 {
            return Err(GraphError::TooManyFreeClasses(free.len(), budget_log2));
        }
        let mut hull: Option<HashSet<Label>> = None;
        for pattern in 0u64..(1 << free.len()) {
            let mut signs = region.signs.clone();
            for (k, &i) in free.iter().enumerate() {
                if pattern >> k & 1 == 1 {
                    signs[i] = Sign::Both;
                }
            }
            let candidate = Region { signs };
            let vertices = self.region_vertices(&candidate);
            if !self.is_gated(&vertices)? {
                continue;
            }
            match &mut hull {
                None => hull = Some(vertices.into_iter().collect()),
                Some(h) => h.retain(|l| vertices.contains(l)),
            }
        }
        let mut out: Vec<Label> =
            hull.expect("the whole graph is a gated superset").into_iter().collect();
        out.sort();
        Ok(out)
    }
}

fn bfs(adj: &[Vec<usize>], src: usize) -> Vec<u32> {
    let mut dist = vec![u32::MAX; adj.len()];
    dist[src] = 0;
    let mut queue = VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if dist[v] == u32::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

/// A simple undirected graph on `0..n`, the pre-recognition input.
#[derive(Clone, Debug)]
pub struct AbstractGraph {
    adj: Vec<Vec<usize>>,
}

impl AbstractGraph {
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> AbstractGraph {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u != v && !adj[u].contains(&v) {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        for nbrs in &mut adj {
            nbrs.sort_unstable();
        }
        AbstractGraph { adj }
    }

    pub fn cycle(len: usize) -> AbstractGraph {
        let edges: Vec<(usize, usize)> = (0..len).map(|i| (i, (i + 1) % len)).collect();
        AbstractGraph::from_edges(len, &edges)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n() {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }
}

/// Result of recognizing an abstract graph as a partial cube: the labeled
/// graph plus the label assigned to each original vertex id.
#[derive(Clone, Debug)]
pub struct Recognition {
    pub graph: CubeGraph,
    pub vertex_labels: Vec<Label>,
}

/// Recognizes a connected simple graph as a partial cube.
///
/// Uses the halfspace characterization: the graph is a partial cube iff it
/// is bipartite and for every edge `uv` the sets `W(u,v)` and `W(v,u)` are
/// convex. Θ-classes are the equivalence classes of the halfspace partition;
/// the lowest-id vertex is the basepoint and receives the empty label, and
/// coordinates are numbered in discovery order over the sorted edge list.
pub fn recognize(g: &AbstractGraph) -> Result<Recognition, GraphError> {
    let n = g.n();
    if n == 0 {
        return Err(GraphError::EmptyLabelSet);
    }
    let dist: Vec<Vec<u32>> = (0..n).map(|v| bfs(&g.adj, v)).collect();
    if dist[0].contains(&u32::MAX) {
        return Err(GraphError::NotConnected);
    }
    for (u, v) in g.edges() {
        if dist[0][u] % 2 == dist[0][v] % 2 {
            return Err(GraphError::NotBipartite);
        }
    }

    // Group edges into Θ-classes by their halfspace partition.
    let edges = g.edges();
    let mut class_of_partition: HashMap<Vec<bool>, usize> = HashMap::new();
    let mut class_sides: Vec<Vec<bool>> = Vec::new(); // side[v] = true ⇔ v ∈ W(v side of u)
    let mut edge_class = Vec::with_capacity(edges.len());
    for &(u, v) in &edges {
        // w ∈ W(u,v) ⇔ d(w,u) < d(w,v); no ties in a bipartite graph.
        let side_u: Vec<bool> = (0..n).map(|w| dist[w][u] < dist[w][v]).collect();
        let canon = if side_u[0] { side_u.clone() } else { side_u.iter().map(|b| !b).collect() };
        let next = class_sides.len();
        let class = *class_of_partition.entry(canon.clone()).or_insert(next);
        if class == class_sides.len() {
            class_sides.push(canon);
        }
        edge_class.push(class);
    }
    let m = class_sides.len();
    if m > MAX_COORDS {
        return Err(GraphError::WidthMismatch(Label::EMPTY, m));
    }

    // Convexity of both halfspaces of each class, with a witness on failure.
    for (i, side) in class_sides.iter().enumerate() {
        for polarity in [true, false] {
            let members: Vec<usize> = (0..n).filter(|&v| side[v] == polarity).collect();
            for &x in &members {
                for &y in &members {
                    if x >= y {
                        continue;
                    }
                    for z in 0..n {
                        if side[z] != polarity && dist[x][z] + dist[z][y] == dist[x][y] {
                            let (eu, ev) = edges[edge_class.iter().position(|&c| c == i).unwrap()];
                            let path = shortest_path_via(g, &dist, x, z, y);
                            return Err(GraphError::HalfspaceNotConvex {
                                edge_u: eu,
                                edge_v: ev,
                                x,
                                y,
                                path,
                            });
                        }
                    }
                }
            }
        }
    }

    // Basepoint 0 gets the empty label; bit i is set on the side without it.
    let vertex_labels: Vec<Label> = (0..n)
        .map(|v| {
            let mut l = Label::EMPTY;
            for (i, side) in class_sides.iter().enumerate() {
                if !side[v] {
                    l = l.with(i);
                }
            }
            l
        })
        .collect();
    let (graph, remap) = CubeGraph::from_labels(m, vertex_labels.iter().copied())
        .expect("halfspace convexity guarantees an isometric embedding");
    debug_assert!(remap.dropped.is_empty(), "every discovered class is proper");
    Ok(Recognition { graph, vertex_labels })
}

fn shortest_path_via(
    g: &AbstractGraph,
    dist: &[Vec<u32>],
    x: usize,
    z: usize,
    y: usize,
) -> Vec<usize> {
    let leg = |from: usize, to: usize| -> Vec<usize> {
        let mut path = vec![from];
        let mut cur = from;
        while cur != to {
            let next = g.adj[cur]
                .iter()
                .copied()
                .find(|&w| dist[w][to] + 1 == dist[cur][to])
                .expect("distance matrix is consistent");
            path.push(next);
            cur = next;
        }
        path
    };
    let mut path = leg(x, z);
    path.pop();
    path.extend(leg(z, y));
    path
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Standard labels of `SK_n`: originals are singletons, subdivision
    /// vertices are pairs.
    pub fn sk_labels(n: usize) -> Vec<Label> {
        let mut out: Vec<Label> = (0..n).map(Label::singleton).collect();
        for i in 0..n {
            for j in (i + 1)..n {
                out.push(Label::singleton(i).with(j));
            }
        }
        out
    }

    pub fn sk(n: usize) -> CubeGraph {
        CubeGraph::from_labels(n, sk_labels(n)).unwrap().0
    }

    pub fn sk_star(n: usize) -> CubeGraph {
        let mut labels = sk_labels(n);
        labels.push(Label::EMPTY);
        CubeGraph::from_labels(n, labels).unwrap().0
    }

    pub fn qm(m: usize) -> CubeGraph {
        CubeGraph::from_labels(m, (0..1u64 << m).map(Label)).unwrap().0
    }

    pub fn q3_minus() -> CubeGraph {
        CubeGraph::from_labels(3, (0..7u64).map(Label)).unwrap().0
    }

    pub fn cycle(len: usize) -> CubeGraph {
        recognize(&AbstractGraph::cycle(len)).unwrap().graph
    }

    /// Metric interval computed from scratch by BFS, as an oracle.
    fn interval_oracle(g: &CubeGraph, u: Label, v: Label) -> Vec<Label> {
        let ui = g.id(u).unwrap();
        let vi = g.id(v).unwrap();
        let du = g.bfs(ui);
        let dv = g.bfs(vi);
        (0..g.n())
            .filter(|&w| du[w] + dv[w] == du[vi])
            .map(|w| g.label(w))
            .collect()
    }

    #[test]
    fn from_labels_single_vertex() {
        let (g, _) = CubeGraph::from_labels(0, [Label::EMPTY]).unwrap();
        assert_eq!(g.n(), 1);
        assert_eq!(g.m(), 0);
    }

    #[test]
    fn from_labels_sk4() {
        let g = sk(4);
        assert_eq!(g.n(), 10);
        assert_eq!(g.m(), 4);
        assert_eq!(g.edge_count(), 12);
    }

    #[test]
    fn from_labels_disconnected() {
        let err = CubeGraph::from_labels(2, [Label::EMPTY, Label(0b11)]).unwrap_err();
        assert_eq!(err, GraphError::NotConnected);
    }

    #[test]
    fn from_labels_compacts_unused_coordinates() {
        // Coordinate 1 is constantly 1: it must be dropped and reported.
        let (g, remap) = CubeGraph::from_labels(3, [Label(0b010), Label(0b011), Label(0b110)])
            .unwrap();
        assert_eq!(g.m(), 2);
        assert_eq!(remap.kept, vec![0, 2]);
        assert_eq!(remap.dropped, vec![1]);
        assert!(g.contains(Label::EMPTY));
    }

    #[test]
    fn from_labels_not_isometric() {
        // A 5-vertex path in Q_3: {0,1} and {1,2} are at Hamming distance 2
        // but the only path between them uses 4 edges.
        let labels = [Label(0b000), Label(0b001), Label(0b011), Label(0b110), Label(0b100)];
        let err = CubeGraph::from_labels(3, labels).unwrap_err();
        assert!(matches!(err, GraphError::NotIsometric(_, _)));
    }

    #[test]
    fn recognize_c6() {
        let rec = recognize(&AbstractGraph::cycle(6)).unwrap();
        assert_eq!(rec.graph.m(), 3);
        assert_eq!(rec.graph.n(), 6);
        assert_eq!(rec.vertex_labels[0], Label::EMPTY);
        // Q_3 minus two antipodes: every present label has its complement.
        for &l in rec.graph.labels() {
            assert!(rec.graph.contains(l.complement(3)));
        }
    }

    #[test]
    fn recognize_c5_not_bipartite() {
        assert_eq!(recognize(&AbstractGraph::cycle(5)).unwrap_err(), GraphError::NotBipartite);
    }

    #[test]
    fn recognize_k23_halfspace_witness() {
        let g = AbstractGraph::from_edges(
            5,
            &[(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)],
        );
        match recognize(&g).unwrap_err() {
            GraphError::HalfspaceNotConvex { x, y, path, .. } => {
                // The witness path is a shortest (x, y)-path leaving the halfspace.
                assert_eq!(path.first(), Some(&x));
                assert_eq!(path.last(), Some(&y));
                assert!(path.len() >= 3);
            }
            other => panic!("expected HalfspaceNotConvex, got {other:?}"),
        }
    }

    #[test]
    fn recognize_roundtrip_is_identity_up_to_symmetry() {
        // recognize ∘ from_labels on SK_4 gives the same graph up to
        // coordinate permutation and global XOR: compare sizes and the
        // distance multiset, then check an exact canonical criterion in minors.
        let g = sk(4);
        let edges: Vec<(usize, usize)> = g.edges();
        let rec = recognize(&AbstractGraph::from_edges(g.n(), &edges)).unwrap();
        assert_eq!(rec.graph.n(), g.n());
        assert_eq!(rec.graph.m(), g.m());
        assert_eq!(rec.graph.edge_count(), g.edge_count());
    }

    #[test]
    fn unknown_vertex_errors() {
        let g = cycle(6);
        let missing: Label = (0..8u64).map(Label).find(|l| !g.contains(*l)).unwrap();
        assert!(matches!(
            g.distance(g.label(0), missing),
            Err(GraphError::UnknownVertex(_))
        ));
        assert!(matches!(g.interval(missing, g.label(0)), Err(GraphError::UnknownVertex(_))));
        assert!(matches!(g.gate(missing, &[g.label(0)]), Err(GraphError::UnknownVertex(_))));
    }

    #[test]
    fn interval_examples() {
        let g = cycle(6);
        let v = g.label(0);
        assert_eq!(g.interval(v, v).unwrap(), vec![v]);
        let anti = v.complement(g.m());
        assert_eq!(g.interval(v, anti).unwrap().len(), 6);

        let g = sk(4);
        let got: HashSet<Label> =
            g.interval(Label(0b0001), Label(0b0110)).unwrap().into_iter().collect();
        let expect: HashSet<Label> = interval_oracle(&g, Label(0b0001), Label(0b0110))
            .into_iter()
            .collect();
        assert_eq!(got, expect);
        assert_eq!(got.len(), 6);
    }

    #[test]
    fn interval_matches_metric_oracle_everywhere() {
        for g in [sk(4), sk_star(4), q3_minus(), qm(3), cycle(8)] {
            for &u in g.labels() {
                for &v in g.labels() {
                    let mut got = g.interval(u, v).unwrap();
                    let mut expect = interval_oracle(&g, u, v);
                    got.sort();
                    expect.sort();
                    assert_eq!(got, expect);
                }
            }
        }
    }

    #[test]
    fn convex_hull_examples() {
        let g = cycle(6);
        let v = g.label(0);
        let (_, hull) = g.convex_hull(&[v, v.complement(3)]).unwrap();
        assert_eq!(hull.len(), 6);

        // Isometric 6-cycle inside Q_3^-: hull is all of Q_3^-.
        let g = q3_minus();
        let six: Vec<Label> =
            g.labels().iter().copied().filter(|&l| l != Label::EMPTY).collect();
        assert_eq!(six.len(), 6);
        let (_, hull) = g.convex_hull(&six).unwrap();
        assert_eq!(hull.len(), 7);

        // The same labels inside the full Q_3 hull out to the whole cube.
        let g = qm(3);
        let (_, hull) = g.convex_hull(&six).unwrap();
        assert_eq!(hull.len(), 8);
    }

    #[test]
    fn halfspaces_are_convex() {
        for g in [sk(4), sk_star(4), q3_minus(), cycle(8)] {
            for i in 0..g.m() {
                for positive in [false, true] {
                    assert!(g.is_convex(&g.halfspace(i, positive)).unwrap());
                }
            }
        }
    }

    #[test]
    fn sk4_six_cycle_is_convex_but_not_in_star() {
        let six = vec![
            Label(0b0001),
            Label(0b0011),
            Label(0b0010),
            Label(0b0110),
            Label(0b0100),
            Label(0b0101),
        ];
        assert!(sk(4).is_convex(&six).unwrap());
        // SK_4 inside SK*_4 is not convex: v_∅ lies in I(u_1, u_2).
        let star = sk_star(4);
        assert!(!star.is_convex(&sk_labels(4)).unwrap());
        assert!(star
            .interval(Label(0b0001), Label(0b0010))
            .unwrap()
            .contains(&Label::EMPTY));
    }

    #[test]
    fn gates() {
        // A path a–b–c: gate(a, {b, c}) = b.
        let (g, _) = CubeGraph::from_labels(2, [Label(0b00), Label(0b01), Label(0b11)]).unwrap();
        assert_eq!(
            g.gate(Label(0b00), &[Label(0b01), Label(0b11)]).unwrap(),
            Some(Label(0b01))
        );
        // v ∈ S is its own gate.
        assert_eq!(g.gate(Label(0b01), &[Label(0b01), Label(0b11)]).unwrap(), Some(Label(0b01)));

        // In C_6 two antipodal vertices are not gated.
        let g = cycle(6);
        let v = g.label(0);
        assert!(!g.is_gated(&[v, v.complement(3)]).unwrap());
    }

    #[test]
    fn gate_uniqueness() {
        for g in [sk(4), sk_star(4), q3_minus(), cycle(8)] {
            let set: Vec<Label> = g.halfspace(0, true);
            for &v in g.labels() {
                let gates: Vec<Label> = set
                    .iter()
                    .copied()
                    .filter(|&x| set.iter().all(|&y| v.dist(x) + x.dist(y) == v.dist(y)))
                    .collect();
                assert!(gates.len() <= 1, "gate must be unique when it exists");
            }
        }
    }

    #[test]
    fn gated_hull_examples() {
        // A standalone convex C_6 is gated: hull is the cycle itself.
        let g = cycle(6);
        let all: Vec<Label> = g.labels().to_vec();
        assert_eq!(g.gated_hull(&all).unwrap().len(), 6);

        // The convex 6-cycle of SK_4 has gated hull all of SK_4.
        let g = sk(4);
        let six = vec![
            Label(0b0001),
            Label(0b0011),
            Label(0b0010),
            Label(0b0110),
            Label(0b0100),
            Label(0b0101),
        ];
        assert_eq!(g.gated_hull(&six).unwrap().len(), 10);

        // The isometric 6-cycle of Q_3^- has gated hull Q_3^-.
        let g = q3_minus();
        let six: Vec<Label> =
            g.labels().iter().copied().filter(|&l| l != Label::EMPTY).collect();
        assert_eq!(g.gated_hull(&six).unwrap().len(), 7);
    }

    #[test]
    fn gated_hull_contains_convex_hull_and_is_convex() {
        for g in [sk(4), q3_minus(), sk_star(4)] {
            let set = vec![g.label(0), g.label(g.n() - 1)];
            let (_, conv) = g.convex_hull(&set).unwrap();
            let gated = g.gated_hull(&set).unwrap();
            assert!(conv.iter().all(|l| gated.contains(l)));
            assert!(g.is_convex(&gated).unwrap());
            assert!(g.is_gated(&gated).unwrap());
        }
    }

    #[test]
    fn label_isometry_invariant() {
        for g in [sk(5), sk_star(4), q3_minus(), cycle(10)] {
            for u in 0..g.n() {
                let dist = g.bfs(u);
                for (v, &d) in dist.iter().enumerate() {
                    assert_eq!(d as usize, g.label(u).dist(g.label(v)));
                }
            }
        }
    }
}

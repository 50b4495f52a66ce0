//! Hyperplanes of Θ-classes, the VC-dimension-1 structure of their set
//! families, and the split-tree construction witnessing that every family of
//! VC-dimension ≤ 1 extends to an isometric tree of the hypercube.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use thiserror::Error;

use crate::graph::{CubeGraph, GraphError, Label};
use crate::minors::SetFamily;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HyperplaneError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("the family has VC-dimension greater than 1")]
    NotVCOne,
}

/// The hyperplane of a Θ-class: the boundary labels with the class
/// coordinate deleted, adjacent when the parent edges span a common square.
#[derive(Clone, Debug)]
pub struct Hyperplane {
    pub class: usize,
    pub family: SetFamily,
    /// Index pairs into `family.members()` at Hamming distance 1.
    pub adjacency: Vec<(usize, usize)>,
}

/// Computes the hyperplane of Θ-class `i`. The two boundaries coincide as a
/// set family once coordinate `i` is removed, and the square adjacency is
/// exactly Hamming adjacency of the reduced labels.
pub fn hyperplane(g: &CubeGraph, i: usize) -> Result<Hyperplane, HyperplaneError> {
    let theta = g.theta_class(i)?;
    let members: Vec<Label> =
        theta.boundary_minus.iter().map(|&v| g.label(v).squeeze(i)).collect();
    let family = SetFamily::new(g.m() - 1, members);
    let mut adjacency = Vec::new();
    for (a, &x) in family.members().iter().enumerate() {
        for (b, &y) in family.members().iter().enumerate().skip(a + 1) {
            if x.dist(y) == 1 {
                adjacency.push((a, b));
            }
        }
    }
    Ok(Hyperplane { class: i, family, adjacency })
}

/// Whether every pair of coordinates is compatible on the family: one of
/// the four quadrant intersections is empty. Equivalent to VC-dimension ≤ 1.
pub fn split_compatibility(family: &SetFamily) -> bool {
    let m = family.m();
    for i in 0..m {
        for j in (i + 1)..m {
            let mut quadrants = [false; 4];
            for &s in family.members() {
                let q = (s.contains(i) as usize) << 1 | s.contains(j) as usize;
                quadrants[q] = true;
            }
            if quadrants.iter().all(|&b| b) {
                return false;
            }
        }
    }
    true
}

/// An isometric tree of the hypercube containing the family as induced
/// vertices; the witness that a VC-dimension-1 family is a virtual
/// isometric tree.
#[derive(Clone, Debug)]
pub struct SplitTree {
    pub m: usize,
    pub vertices: Vec<Label>,
    pub edges: Vec<(usize, usize)>,
    /// Tree vertex id of each family member, parallel to the family order.
    pub member_ids: Vec<usize>,
}

impl SplitTree {
    pub fn validate(&self, family: &SetFamily) -> Result<(), String> {
        let n = self.vertices.len();
        if n == 0 {
            return Err("empty tree".into());
        }
        if self.edges.len() + 1 != n {
            return Err("vertex and edge counts do not form a tree".into());
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &self.edges {
            if self.vertices[u].dist(self.vertices[v]) != 1 {
                return Err("tree edge is not a hypercube edge".into());
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let distinct: HashSet<Label> = self.vertices.iter().copied().collect();
        if distinct.len() != n {
            return Err("tree vertices are not distinct".into());
        }
        // Isometry in the hypercube: tree distance equals Hamming distance;
        // connectivity falls out of the same sweep.
        for src in 0..n {
            let mut dist = vec![u32::MAX; n];
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
            for (v, &d) in dist.iter().enumerate() {
                if d == u32::MAX {
                    return Err("tree is not connected".into());
                }
                if d as usize != self.vertices[src].dist(self.vertices[v]) {
                    return Err("tree is not isometric in the hypercube".into());
                }
            }
        }
        if family.len() != self.member_ids.len() {
            return Err("member map has the wrong length".into());
        }
        for (k, &id) in self.member_ids.iter().enumerate() {
            if self.vertices[id] != family.members()[k] {
                return Err("member map does not match labels".into());
            }
        }
        Ok(())
    }
}

/// Builds the split tree of a family of VC-dimension ≤ 1.
///
/// Coordinates inducing the same bipartition of the family are grouped into
/// one split. Orienting every split away from a reference member makes the
/// split sides a laminar family, which yields the tree directly; an edge
/// grouping `k` coordinates is then expanded into a path flipping them in
/// increasing index order.
pub fn buneman_tree(family: &SetFamily) -> Result<SplitTree, HyperplaneError> {
    if family.is_empty() {
        return Err(GraphError::EmptyLabelSet.into());
    }
    if !split_compatibility(family) {
        return Err(HyperplaneError::NotVCOne);
    }
    let members = family.members();
    let root_label = members[0];

    // Group proper coordinates by the member set on the far side of the root.
    let mut splits: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for i in 0..family.m() {
        let far: Vec<usize> = (0..members.len())
            .filter(|&k| members[k].contains(i) != root_label.contains(i))
            .collect();
        if far.is_empty() || far.len() == members.len() {
            continue;
        }
        splits.entry(far).or_default().push(i);
    }
    let splits: Vec<(Vec<usize>, Vec<usize>)> = splits.into_iter().collect();

    // Laminar inclusion order: parent of a split side is its minimal proper
    // superset (or the root when none exists).
    let is_subset = |a: &[usize], b: &[usize]| -> bool {
        let b: HashSet<usize> = b.iter().copied().collect();
        a.iter().all(|x| b.contains(x))
    };
    let mut parent: Vec<Option<usize>> = vec![None; splits.len()];
    for s in 0..splits.len() {
        for t in 0..splits.len() {
            if t == s || splits[t].0.len() <= splits[s].0.len() {
                continue;
            }
            if is_subset(&splits[s].0, &splits[t].0)
                && parent[s].is_none_or(|p| splits[t].0.len() < splits[p].0.len())
            {
                parent[s] = Some(t);
            }
        }
    }

    // One tree node per split plus the root; labels follow the flipped
    // coordinates along the path from the root.
    let mut node_label: Vec<Label> = vec![Label::EMPTY; splits.len()];
    let mut resolved = vec![false; splits.len()];
    fn resolve(
        s: usize,
        splits: &[(Vec<usize>, Vec<usize>)],
        parent: &[Option<usize>],
        node_label: &mut Vec<Label>,
        resolved: &mut Vec<bool>,
        root_label: Label,
    ) -> Label {
        if resolved[s] {
            return node_label[s];
        }
        let base = match parent[s] {
            Some(p) => resolve(p, splits, parent, node_label, resolved, root_label),
            None => root_label,
        };
        let mut label = base;
        for &i in &splits[s].1 {
            label = label.flip(i);
        }
        node_label[s] = label;
        resolved[s] = true;
        label
    }
    for s in 0..splits.len() {
        resolve(s, &splits, &parent, &mut node_label, &mut resolved, root_label);
    }

    let mut vertices: Vec<Label> = vec![root_label];
    let mut index: HashMap<Label, usize> = HashMap::from([(root_label, 0)]);
    let mut intern = |label: Label, vertices: &mut Vec<Label>| -> usize {
        if let Some(&id) = index.get(&label) {
            return id;
        }
        let id = vertices.len();
        vertices.push(label);
        index.insert(label, id);
        id
    };
    let node_id: Vec<usize> =
        (0..splits.len()).map(|s| intern(node_label[s], &mut vertices)).collect();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for s in 0..splits.len() {
        let from = match parent[s] {
            Some(p) => node_id[p],
            None => 0,
        };
        // Expand the grouped coordinates into a path, flipping them in
        // increasing index order.
        let mut coords = splits[s].1.clone();
        coords.sort_unstable();
        let mut cur = from;
        let mut label = vertices[from];
        for (step, &i) in coords.iter().enumerate() {
            label = label.flip(i);
            let target = if step + 1 == coords.len() {
                node_id[s]
            } else {
                intern(label, &mut vertices)
            };
            edges.push((cur, target));
            cur = target;
        }
    }

    let index2: HashMap<Label, usize> =
        vertices.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let member_ids: Vec<usize> = members
        .iter()
        .map(|l| *index2.get(l).expect("every member lands on a tree node"))
        .collect();
    let tree = SplitTree { m: family.m(), vertices, edges, member_ids };
    debug_assert_eq!(tree.validate(family), Ok(()));
    Ok(tree)
}

/// Whether the family is a virtual isometric tree; on success the returned
/// witness has been validated against the family.
pub fn is_virtual_isometric_tree(family: &SetFamily) -> Option<SplitTree> {
    let tree = buneman_tree(family).ok()?;
    tree.validate(family).ok()?;
    Some(tree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{recognize, AbstractGraph};

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
    fn hyperplane_examples() {
        // In Q_m every hyperplane is a Q_{m−1}.
        let g = qm(3);
        let h = hyperplane(&g, 0).unwrap();
        assert_eq!(h.family.len(), 4);
        assert_eq!(h.adjacency.len(), 4);

        // In a long even cycle each hyperplane is two isolated members.
        for len in [6, 8, 10] {
            let g = cycle(len);
            for i in 0..g.m() {
                let h = hyperplane(&g, i).unwrap();
                assert_eq!(h.family.len(), 2);
                assert!(h.adjacency.is_empty());
            }
        }

        // SK_4 has no squares: three isolated members per class.
        let g = sk(4);
        for i in 0..4 {
            let h = hyperplane(&g, i).unwrap();
            assert_eq!(h.family.len(), 3);
            assert!(h.adjacency.is_empty());
        }
    }

    #[test]
    fn split_compatibility_examples() {
        assert!(split_compatibility(&SetFamily::new(3, [Label(0b101)])));
        // A family shattering a pair is incompatible.
        assert!(!split_compatibility(&SetFamily::new(
            2,
            [Label(0b00), Label(0b01), Label(0b10), Label(0b11)]
        )));
        assert!(split_compatibility(&SetFamily::new(
            2,
            [Label(0b00), Label(0b01), Label(0b11)]
        )));
    }

    #[test]
    fn split_compatibility_iff_vc_at_most_one() {
        let g = sk(4);
        for i in 0..4 {
            let fam = hyperplane(&g, i).unwrap().family;
            assert_eq!(split_compatibility(&fam), fam.vc_dimension() <= 1);
        }
        let shattering = SetFamily::new(3, (0..8u64).step_by(2).map(Label));
        assert_eq!(
            split_compatibility(&shattering),
            shattering.vc_dimension() <= 1
        );
    }

    #[test]
    fn buneman_examples() {
        // {∅, {0,1}}: the weight-2 edge expands through {0}.
        let fam = SetFamily::new(2, [Label(0b00), Label(0b11)]);
        let tree = buneman_tree(&fam).unwrap();
        tree.validate(&fam).unwrap();
        let mut labels = tree.vertices.clone();
        labels.sort();
        assert_eq!(labels, vec![Label(0b00), Label(0b01), Label(0b11)]);

        // An isometric path is its own split tree.
        let path: Vec<Label> = (0..=4).map(Label::full).collect();
        let fam = SetFamily::new(4, path.clone());
        let tree = buneman_tree(&fam).unwrap();
        tree.validate(&fam).unwrap();
        assert_eq!(tree.vertices.len(), 5);

        // Three isolated members {0},{1},{2}: a star through ∅.
        let fam = SetFamily::new(3, [Label(0b001), Label(0b010), Label(0b100)]);
        let tree = buneman_tree(&fam).unwrap();
        tree.validate(&fam).unwrap();
        assert_eq!(tree.vertices.len(), 4);
        assert!(tree.vertices.contains(&Label::EMPTY));
        // Every member is a leaf.
        for &id in &tree.member_ids {
            let degree = tree.edges.iter().filter(|&&(u, v)| u == id || v == id).count();
            assert_eq!(degree, 1);
        }
    }

    #[test]
    fn buneman_rejects_high_vc() {
        let fam = SetFamily::new(2, (0..4u64).map(Label));
        assert_eq!(buneman_tree(&fam).unwrap_err(), HyperplaneError::NotVCOne);
        assert!(is_virtual_isometric_tree(&fam).is_none());
    }

    #[test]
    fn hyperplanes_of_sk4_are_virtual_trees() {
        let g = sk(4);
        for i in 0..4 {
            let fam = hyperplane(&g, i).unwrap().family;
            let tree = is_virtual_isometric_tree(&fam).expect("SK_4 hyperplanes have VC 1");
            tree.validate(&fam).unwrap();
        }
    }

    #[test]
    fn hyperplane_commutes_with_contraction() {
        // hyperplane(π_j(G), i) = π_j(hyperplane(G, i)) as set families.
        let g = sk(4);
        for j in 0..g.m() {
            let contracted = crate::minors::contract(&g, j).unwrap();
            for i in 0..g.m() {
                if i == j {
                    continue;
                }
                let shifted = if i > j { i - 1 } else { i };
                let lhs = hyperplane(&contracted, shifted).unwrap().family;
                let original = hyperplane(&g, i).unwrap().family;
                // Deleting coordinate i first means the j index shifts when
                // j > i.
                let j_in_family = if j > i { j - 1 } else { j };
                let rhs = SetFamily::new(
                    original.m() - 1,
                    original.members().iter().map(|l| l.squeeze(j_in_family)),
                );
                assert_eq!(lhs, rhs);
            }
        }
    }
}

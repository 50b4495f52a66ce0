//! Brute-force ground truth: exhaustive enumeration of small partial cubes
//! up to embedding symmetry, and definition-level reimplementations of
//! convexity, gatedness, shattering, and pc-minor containment used as
//! differential-test oracles against the production code.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::io::Write;
use std::path::Path;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::graph::{CubeGraph, Label};
use crate::minors::{canonical_form, SetFamily};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("enumeration of Q_{0} exceeds the budget of {1} subsets")]
    BudgetExceeded(usize, usize),
    #[error("corpus cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// All connected isometric subgraphs of `Q_m` with at most `n_max` vertices,
/// up to coordinate permutation and global XOR, in deterministic order.
#[derive(Clone, Debug)]
pub struct Corpus {
    pub m: usize,
    pub n_max: usize,
    pub graphs: Vec<CubeGraph>,
}

const CACHE_VERSION: &str = "pcube-corpus/1";

impl Corpus {
    /// Enumerates the corpus by scanning all `2^(2^m)` vertex subsets;
    /// `budget` caps the number of subsets scanned.
    pub fn enumerate(m: usize, n_max: usize, budget: usize) -> Result<Corpus, OracleError> {
        assert!(m <= 4, "exhaustive enumeration is supported up to m = 4");
        let total: u64 = 1 << (1 << m);
        if total as usize > budget {
            return Err(OracleError::BudgetExceeded(m, budget));
        }
        let mut canon: BTreeMap<(usize, Vec<Label>), CubeGraph> = BTreeMap::new();
        for mask in 1..total {
            if (mask.count_ones() as usize) > n_max {
                continue;
            }
            let labels: Vec<Label> =
                (0..(1u64 << m)).filter(|&v| mask >> v & 1 == 1).map(Label).collect();
            if !subset_connected(m, &labels) {
                continue;
            }
            let Ok((g, _)) = CubeGraph::from_labels(m, labels) else { continue };
            canon.entry(canonical_form(&g)).or_insert(g);
        }
        Ok(Corpus { m, n_max, graphs: canon.into_values().collect() })
    }

    /// Enumerates without symmetry reduction: every connected isometric
    /// vertex subset of `Q_m` as its own graph. The canonical corpus for
    /// `m = 4` has only a few dozen classes, so sampled-instance tests draw
    /// from this list instead.
    pub fn enumerate_raw(
        m: usize,
        n_max: usize,
        budget: usize,
    ) -> Result<Vec<CubeGraph>, OracleError> {
        assert!(m <= 4, "exhaustive enumeration is supported up to m = 4");
        let total: u64 = 1 << (1 << m);
        if total as usize > budget {
            return Err(OracleError::BudgetExceeded(m, budget));
        }
        let mut out = Vec::new();
        for mask in 1..total {
            if (mask.count_ones() as usize) > n_max {
                continue;
            }
            let labels: Vec<Label> =
                (0..(1u64 << m)).filter(|&v| mask >> v & 1 == 1).map(Label).collect();
            if !subset_connected(m, &labels) {
                continue;
            }
            if let Ok((g, _)) = CubeGraph::from_labels(m, labels) {
                out.push(g);
            }
        }
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    /// Writes the corpus to a versioned, content-hashed cache file.
    pub fn save(&self, path: &Path) -> Result<(), OracleError> {
        let body = self.serialize_body();
        let digest = hex_digest(&body);
        let mut file = std::fs::File::create(path)?;
        writeln!(file, "{CACHE_VERSION} m={} n_max={} sha256={digest}", self.m, self.n_max)?;
        file.write_all(body.as_bytes())?;
        Ok(())
    }

    /// Loads a corpus cache, verifying version and content hash.
    pub fn load(path: &Path) -> Result<Corpus, OracleError> {
        let text = std::fs::read_to_string(path)?;
        let (header, body) = text
            .split_once('\n')
            .ok_or_else(|| OracleError::Cache("missing header".into()))?;
        let mut fields = header.split_whitespace();
        if fields.next() != Some(CACHE_VERSION) {
            return Err(OracleError::Cache("version mismatch".into()));
        }
        let mut m = None;
        let mut n_max = None;
        let mut sha = None;
        for field in fields {
            if let Some(v) = field.strip_prefix("m=") {
                m = v.parse::<usize>().ok();
            } else if let Some(v) = field.strip_prefix("n_max=") {
                n_max = v.parse::<usize>().ok();
            } else if let Some(v) = field.strip_prefix("sha256=") {
                sha = Some(v.to_string());
            }
        }
        let (Some(m), Some(n_max), Some(sha)) = (m, n_max, sha) else {
            return Err(OracleError::Cache("malformed header".into()));
        };
        if hex_digest(body) != sha {
            return Err(OracleError::Cache("content hash mismatch".into()));
        }
        let mut graphs = Vec::new();
        for line in body.lines() {
            let mut labels = Vec::new();
            let mut width = 0;
            for token in line.split_whitespace() {
                width = token.len();
                let label = Label::from_bitstring(token)
                    .ok_or_else(|| OracleError::Cache(format!("bad label `{token}`")))?;
                labels.push(label);
            }
            let (g, _) = CubeGraph::from_labels(width, labels)
                .map_err(|e| OracleError::Cache(e.to_string()))?;
            graphs.push(g);
        }
        Ok(Corpus { m, n_max, graphs })
    }

    fn serialize_body(&self) -> String {
        let mut out = String::new();
        for g in &self.graphs {
            let labels: Vec<String> =
                g.labels().iter().map(|l| l.bitstring(g.m().max(1))).collect();
            out.push_str(&labels.join(" "));
            out.push('\n');
        }
        out
    }
}

fn hex_digest(body: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(body.as_bytes());
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn subset_connected(m: usize, labels: &[Label]) -> bool {
    let present: HashSet<Label> = labels.iter().copied().collect();
    let mut seen = HashSet::from([labels[0]]);
    let mut queue = VecDeque::from([labels[0]]);
    while let Some(l) = queue.pop_front() {
        for i in 0..m {
            let next = l.flip(i);
            if present.contains(&next) && seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    seen.len() == labels.len()
}

/// Convexity straight from the definition: `S` contains every vertex on
/// every shortest path between two of its members, computed by BFS with no
/// label tricks.
pub fn naive_is_convex(g: &CubeGraph, set: &[Label]) -> bool {
    let ids: Vec<usize> = set.iter().map(|&l| g.id(l).expect("vertex present")).collect();
    let in_set: HashSet<usize> = ids.iter().copied().collect();
    let dist: Vec<Vec<u32>> = (0..g.n()).map(|v| g.bfs(v)).collect();
    for &x in &ids {
        for &y in &ids {
            for z in 0..g.n() {
                if !in_set.contains(&z) && dist[x][z] + dist[z][y] == dist[x][y] {
                    return false;
                }
            }
        }
    }
    true
}

/// Gatedness straight from the definition.
pub fn naive_is_gated(g: &CubeGraph, set: &[Label]) -> bool {
    let ids: Vec<usize> = set.iter().map(|&l| g.id(l).expect("vertex present")).collect();
    let dist: Vec<Vec<u32>> = (0..g.n()).map(|v| g.bfs(v)).collect();
    (0..g.n()).all(|x| {
        ids.iter()
            .any(|&gate| ids.iter().all(|&y| dist[x][gate] + dist[gate][y] == dist[x][y]))
    })
}

/// Shattering straight from the definition, with explicit trace sets.
pub fn naive_shattered(family: &SetFamily, x: Label) -> bool {
    let coords: Vec<usize> = x.iter().collect();
    let mut traces: HashSet<Vec<bool>> = HashSet::new();
    for &member in family.members() {
        traces.insert(coords.iter().map(|&i| member.contains(i)).collect());
    }
    traces.len() == 1usize << coords.len()
}

/// pc-minor containment by recursive application of elementary contractions
/// and restrictions, with no pruning beyond the dimension count.
pub fn naive_pc_minor(g: &CubeGraph, h: &CubeGraph) -> bool {
    fn search(g: &CubeGraph, target: &(usize, Vec<Label>), target_n: usize) -> bool {
        if g.m() == target.0 && g.n() == target_n && canonical_form(g) == *target {
            return true;
        }
        if g.m() < target.0 || g.n() < target_n {
            return false;
        }
        for i in 0..g.m() {
            if let Ok(c) = crate::minors::contract(g, i) {
                if search(&c, target, target_n) {
                    return true;
                }
            }
            for positive in [false, true] {
                if let Ok(r) = crate::minors::restrict(g, i, positive) {
                    if r.n() < g.n() && search(&r, target, target_n) {
                        return true;
                    }
                }
            }
        }
        false
    }
    search(g, &canonical_form(h), h.n())
}

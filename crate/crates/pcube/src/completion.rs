//! Completion of two-dimensional partial cubes: the canonical 1-completion
//! to a rank-2 COM (no convex full subdivisions left) and the cycle filling
//! that turns the result into an ample partial cube, all with per-step
//! validation.

use std::collections::BTreeSet;

use serde_json::json;
use thiserror::Error;

use crate::cells::{self, FullSubdivision};
use crate::graph::{CubeGraph, GraphError, Label};
use crate::minors::{self, SetFamily};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompletionError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("the host graph has VC-dimension greater than 2")]
    HostNotTwoDimensional,
    #[error("the full subdivision is contained in a larger one")]
    NotMaximal,
    #[error("the full subdivision is not convex in the host")]
    NotConvex,
    #[error("the cycle is not gated in the host")]
    NotGated,
    #[error("Θ-class {0} does not cross the cycle")]
    ClassNotCrossing(usize),
    #[error("cycle filling needs length at least 6, got {0}")]
    CycleTooShort(usize),
}

/// One completion step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CompletionStep {
    /// Added the hub vertex of a maximal convex full subdivision.
    OneExtension { originals: Vec<Label>, added: Label },
    /// Filled a gated cycle across a Θ-class.
    CycleFill { cycle: Vec<Label>, class: usize, added: Vec<Label> },
}

/// Record of a completion run: the input is an isometric subgraph of the
/// output, and the number of 1-extension steps is bounded by `binom(m, ≤2)`.
#[derive(Clone, Debug)]
pub struct CompletionReport {
    pub input: CubeGraph,
    pub output: CubeGraph,
    pub steps: Vec<CompletionStep>,
    pub one_extensions: usize,
    pub cycle_fills: usize,
    /// Verification flags computed on the output.
    pub input_isometric: bool,
    pub two_dimensional: bool,
    pub com2: bool,
    pub ample2: bool,
    pub ample: bool,
}

impl CompletionReport {
    pub fn verified(&self, target_ample: bool) -> bool {
        self.input_isometric
            && self.two_dimensional
            && self.com2
            && (!target_ample || (self.ample && self.ample2))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let steps: Vec<serde_json::Value> = self
            .steps
            .iter()
            .map(|s| match s {
                CompletionStep::OneExtension { originals, added } => json!({
                    "kind": "one-extension",
                    "originals": originals.iter().map(|l| l.bitstring(self.output.m())).collect::<Vec<_>>(),
                    "added": [added.bitstring(self.output.m())],
                }),
                CompletionStep::CycleFill { cycle, class, added } => json!({
                    "kind": "cycle-fill",
                    "cycle": cycle.iter().map(|l| l.bitstring(self.output.m())).collect::<Vec<_>>(),
                    "class": class,
                    "added": added.iter().map(|l| l.bitstring(self.output.m())).collect::<Vec<_>>(),
                }),
            })
            .collect();
        json!({
            "input_vertices": self.input.n(),
            "output_vertices": self.output.n(),
            "isometric_dimension": self.output.m(),
            "steps": steps,
            "one_extensions": self.one_extensions,
            "cycle_fills": self.cycle_fills,
            "verified": {
                "input_isometric": self.input_isometric,
                "two_dimensional": self.two_dimensional,
                "com2": self.com2,
                "ample": self.ample,
                "ample2": self.ample2,
            },
        })
    }
}

fn convex_subdivision_keys(g: &CubeGraph) -> BTreeSet<Vec<Label>> {
    cells::full_subdivisions(g, 4)
        .into_iter()
        .filter(|h| h.convex)
        .map(|h| h.vertices())
        .collect()
}

fn long_convex_cycle_keys(g: &CubeGraph) -> BTreeSet<Vec<Label>> {
    cells::convex_cycles(g)
        .into_iter()
        .filter(|c| c.len() >= 6)
        .map(|mut c| {
            c.sort();
            c
        })
        .collect()
}

/// Adds the hub vertex of a maximal convex full subdivision: the second
/// common neighbor, besides the subdivision vertex, shared by every pair of
/// originals. The result is validated to be a two-dimensional partial cube
/// containing the input isometrically and introducing no new convex full
/// subdivision and no new long convex cycle.
pub fn one_extension(g: &CubeGraph, h: &FullSubdivision) -> Result<CubeGraph, CompletionError> {
    if !minors::is_two_dimensional(g) {
        return Err(CompletionError::HostNotTwoDimensional);
    }
    let current = cells::full_subdivisions(g, 4);
    let mine = current
        .iter()
        .find(|cand| cand.originals == h.originals && cand.subs == h.subs)
        .ok_or(CompletionError::NotMaximal)?;
    if !mine.convex {
        return Err(CompletionError::NotConvex);
    }
    let added = mine.star_label;
    debug_assert!(!g.contains(added), "a convex subdivision has no hub vertex yet");
    let mut labels: Vec<Label> = g.labels().to_vec();
    labels.push(added);
    let (out, remap) = CubeGraph::from_labels(g.m(), labels)?;
    assert!(remap.dropped.is_empty());
    assert!(minors::is_two_dimensional(&out), "1-extension preserves VC-dimension 2");
    let old_subs = convex_subdivision_keys(g);
    for key in convex_subdivision_keys(&out) {
        assert!(old_subs.contains(&key), "1-extension adds no new convex full subdivision");
    }
    let old_cycles = long_convex_cycle_keys(g);
    for key in long_convex_cycle_keys(&out) {
        assert!(old_cycles.contains(&key), "1-extension adds no new long convex cycle");
    }
    Ok(out)
}

fn completion_flags(input: &CubeGraph, output: &CubeGraph) -> (bool, bool, bool, bool, bool) {
    let input_isometric = input.labels().iter().all(|l| output.contains(*l));
    let flags = minors::membership(output);
    let ample = minors::is_ample(&SetFamily::from_graph(output)).ample;
    (input_isometric, flags.two_dimensional, flags.com2, flags.ample2, ample)
}

fn make_report(
    input: &CubeGraph,
    output: CubeGraph,
    steps: Vec<CompletionStep>,
) -> CompletionReport {
    let (input_isometric, two_dimensional, com2, ample2, ample) =
        completion_flags(input, &output);
    let one_extensions = steps
        .iter()
        .filter(|s| matches!(s, CompletionStep::OneExtension { .. }))
        .count();
    let cycle_fills = steps.len() - one_extensions;
    CompletionReport {
        input: input.clone(),
        output,
        steps,
        one_extensions,
        cycle_fills,
        input_isometric,
        two_dimensional,
        com2,
        ample2,
        ample,
    }
}

fn binom_le_2(m: usize) -> usize {
    1 + m + m * m.saturating_sub(1) / 2
}

/// Canonically completes a two-dimensional partial cube to a rank-2 COM by
/// repeated 1-extension of maximal convex full subdivisions, lowest
/// originals first, until none remains.
pub fn com_completion(g: &CubeGraph) -> Result<CompletionReport, CompletionError> {
    if !minors::is_two_dimensional(g) {
        return Err(CompletionError::HostNotTwoDimensional);
    }
    let mut cur = g.clone();
    let mut steps = Vec::new();
    let bound = binom_le_2(g.m());
    loop {
        let mut candidates: Vec<FullSubdivision> = cells::full_subdivisions(&cur, 4)
            .into_iter()
            .filter(|h| h.convex)
            .collect();
        candidates.sort_by(|a, b| a.originals.cmp(&b.originals));
        let Some(h) = candidates.first() else { break };
        cur = one_extension(&cur, h)?;
        steps.push(CompletionStep::OneExtension {
            originals: h.originals.clone(),
            added: h.star_label,
        });
        assert!(steps.len() <= bound, "1-extension count stays within binom(m, ≤2)");
    }
    let report = make_report(g, cur, steps);
    assert!(report.two_dimensional && report.com2, "output is a rank-2 COM");
    Ok(report)
}

/// One cycle-fill step: given a gated cycle of length `2k ≥ 6` and a
/// Θ-class crossing it, adds the `k − 2` vertices mirroring one side of the
/// cycle across the class. Validates the output: partial cube containing
/// the input isometrically, shrunken cycle gated, VC-dimension 2 preserved,
/// and no new convex full subdivision.
pub fn cycle_fill_step(
    g: &CubeGraph,
    cycle: &[Label],
    class: usize,
) -> Result<(CubeGraph, Vec<Label>, Vec<Label>), CompletionError> {
    let len = cycle.len();
    if len < 6 {
        return Err(CompletionError::CycleTooShort(len));
    }
    g.check_coordinate(class)?;
    if !cells::is_isometric_cycle(g, cycle) {
        return Err(CompletionError::NotGated);
    }
    if !g.is_gated(cycle)? {
        return Err(CompletionError::NotGated);
    }
    // Rotate so the edge (v_{2k}, v_1) is in the class; the opposite edge
    // (v_k, v_{k+1}) then is too.
    let k = len / 2;
    let start = (0..len)
        .find(|&p| {
            let prev = cycle[(p + len - 1) % len];
            cycle[p].xor(prev) == Label::singleton(class)
        })
        .ok_or(CompletionError::ClassNotCrossing(class))?;
    let rotated: Vec<Label> = (0..len).map(|p| cycle[(start + p) % len]).collect();
    debug_assert_eq!(
        rotated[k - 1].xor(rotated[k]),
        Label::singleton(class),
        "a Θ-class crosses an isometric cycle in opposite edges"
    );
    // Mirror v_2..v_{k-1} across the class (1-based; rotated[0] is v_1).
    let added: Vec<Label> = (1..k - 1).map(|i| rotated[i].flip(class)).collect();
    for &l in &added {
        assert!(!g.contains(l), "gatedness keeps the mirrored labels fresh");
    }
    let mut labels = g.labels().to_vec();
    labels.extend(added.iter().copied());
    let (out, remap) = CubeGraph::from_labels(g.m(), labels)?;
    assert!(remap.dropped.is_empty());

    // The shrunken cycle: mirrored side followed by the untouched arc.
    let mut shrunk: Vec<Label> = Vec::with_capacity(len - 2);
    shrunk.push(rotated[len - 1]); // v_2k = v'_1
    shrunk.extend(added.iter().copied());
    shrunk.push(rotated[k]); // v_{k+1} = v'_k
    shrunk.extend(rotated[k + 1..len - 1].iter().copied());
    assert!(cells::is_isometric_cycle(&out, &shrunk));
    assert!(out.is_gated(&shrunk)?, "the shrunken cycle is gated");
    if minors::is_two_dimensional(g) {
        assert!(minors::is_two_dimensional(&out), "filling preserves VC-dimension 2");
    }
    let old_subs = convex_subdivision_keys(g);
    for key in convex_subdivision_keys(&out) {
        assert!(old_subs.contains(&key), "filling adds no new convex full subdivision");
    }
    Ok((out, shrunk, added))
}

/// Completes a two-dimensional partial cube to an ample one: first the
/// canonical COM completion, then cycle filling of every convex cycle of
/// length ≥ 6 (lowest cycle first, lowest crossing class) until only
/// squares remain.
pub fn ample_completion(g: &CubeGraph) -> Result<CompletionReport, CompletionError> {
    let com = com_completion(g)?;
    let mut cur = com.output.clone();
    let mut steps = com.steps;
    let bound = binom_le_2(g.m());
    loop {
        let mut long: Vec<Vec<Label>> = cells::convex_cycles(&cur)
            .into_iter()
            .filter(|c| c.len() >= 6)
            .collect();
        long.sort_by_key(|c| {
            let mut key = c.clone();
            key.sort();
            key
        });
        let Some(cycle) = long.first() else { break };
        let class = cycle[0]
            .xor(cycle[1])
            .iter()
            .next()
            .expect("adjacent cycle vertices differ in one coordinate");
        // Convex long cycles of a rank-2 COM are gated.
        let (next, _, added) = cycle_fill_step(&cur, cycle, class)?;
        steps.push(CompletionStep::CycleFill {
            cycle: cycle.clone(),
            class,
            added,
        });
        cur = next;
        assert!(cur.n() <= bound, "vertex count stays within the Sauer-Shelah bound");
    }
    let report = make_report(g, cur, steps);
    assert!(report.verified(true), "ample completion output verifies");
    Ok(report)
}

//! Reduction procedures that shrink a colored instance by discarding
//! star-shaped color classes together with their central nodes.
//!
//! A star-shaped class is harmless to remove: every member contains the
//! central node, so deleting that node from the ground set erases the whole
//! class and the restricted coloring stays proper. The single-step variant
//! removes one class and one node; the batch variant removes ceil(n/2k) of
//! each per round, which brings n below any fixed threshold in O(log n)
//! rounds.

use crate::coloring::{many_stars_threshold, Coloring, ColoringError, StarReport, Validation};
use crate::combinat::{CoreError, InstanceParams, Vertex};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::ToPrimitive;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DescentError {
    #[error("input coloring is not proper: {s:?} and {t:?} share color {color}")]
    NotProper { s: Vec<u32>, t: Vec<u32>, color: u32 },
    #[error("no star-shaped color class to discard (m = {m})")]
    NoStarClass { m: u32, report: StarReport },
    #[error("batch discard needs {needed} star-shaped classes, found {alpha}")]
    InsufficientStars { needed: u32, alpha: u32, report: StarReport },
    #[error("beta must satisfy 0 < beta < 1")]
    BadBeta,
    #[error("schedule requires k >= 2, got k = {0}")]
    SmallK(u32),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error("malformed trace file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("trace structure invalid: {0}")]
    Structure(String),
}

/// One reduction round: which colors and nodes were removed and how the
/// survivors were renumbered. Renumber maps list (old, new) pairs for every
/// kept id, strictly increasing in both coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentStep {
    pub discarded_colors: Vec<u32>,
    pub discarded_nodes: Vec<u32>,
    pub renumber_node: Vec<(u32, u32)>,
    pub renumber_color: Vec<(u32, u32)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Single,
    Batch,
}

/// Why a reduction run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum StopReason {
    /// n reached the base-case threshold.
    Threshold { limit: u32 },
    /// The next step needed more star-shaped classes than the coloring has.
    StarShortfall { needed: u32, alpha: u32 },
}

/// A full reduction run: the starting (n, m), each step, and the (n, m)
/// sizes after each step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionTrace {
    pub start: (u32, u32),
    pub steps: Vec<DescentStep>,
    pub sizes: Vec<(u32, u32)>,
    pub stop: StopReason,
}

/// Trace plus every intermediate coloring (index 0 is the input, last is the
/// final reduced coloring).
#[derive(Debug, Clone)]
pub struct ReductionRun {
    pub trace: ReductionTrace,
    pub colorings: Vec<Coloring>,
}

fn ensure_proper(c: &Coloring) -> Result<(), DescentError> {
    match c.validate() {
        Validation::Proper => Ok(()),
        Validation::Violation { s, t, color } => Err(DescentError::NotProper { s, t, color }),
    }
}

/// Restrict a coloring to the nodes outside `nodes`, dropping `colors` and
/// renumbering both order-preservingly. Callers must guarantee that no
/// surviving vertex wears a dropped color.
fn apply_discard(
    c: &Coloring,
    nodes: &[u32],
    colors: &[u32],
) -> Result<(Coloring, Vec<(u32, u32)>, Vec<(u32, u32)>), DescentError> {
    let p = c.params();
    let kept_nodes: Vec<u32> = (1..=p.n).filter(|x| !nodes.contains(x)).collect();
    let kept_colors: Vec<u32> = (1..=p.m).filter(|x| !colors.contains(x)).collect();
    let renumber_node: Vec<(u32, u32)> =
        kept_nodes.iter().enumerate().map(|(i, &o)| (o, i as u32 + 1)).collect();
    let renumber_color: Vec<(u32, u32)> =
        kept_colors.iter().enumerate().map(|(i, &o)| (o, i as u32 + 1)).collect();
    let new_params =
        InstanceParams::new(p.n - nodes.len() as u32, p.k, p.m - colors.len() as u32)?;
    let mut new_colors = Vec::with_capacity(new_params.vertex_count() as usize);
    for v in Vertex::enumerate(new_params.n, new_params.k) {
        let old_elems: Vec<u32> = v.elems().iter().map(|&e| kept_nodes[e as usize - 1]).collect();
        let old_color = c.color_of(&Vertex::new(old_elems)?);
        debug_assert!(!colors.contains(&old_color), "discarded color survived restriction");
        let shift = colors.iter().filter(|&&d| d < old_color).count() as u32;
        new_colors.push(old_color - shift);
    }
    let out = Coloring::new(new_params, new_colors)?;
    Ok((out, renumber_node, renumber_color))
}

/// Remove the least star-shaped color and the least central element of its
/// class, then renumber.
pub fn descend_once(c: &Coloring) -> Result<(Coloring, DescentStep), DescentError> {
    ensure_proper(c)?;
    let report = c.star_report();
    let Some(class) = report.classes.iter().find(|cl| cl.star_shaped) else {
        return Err(DescentError::NoStarClass { m: c.params().m, report });
    };
    let ell = class.color;
    let central = class.centrals[0];
    let (out, renumber_node, renumber_color) = apply_discard(c, &[central], &[ell])?;
    debug_assert!(out.validate().is_proper());
    Ok((
        out,
        DescentStep {
            discarded_colors: vec![ell],
            discarded_nodes: vec![central],
            renumber_node,
            renumber_color,
        },
    ))
}

/// Nodes discarded per batch round: ceil(n / 2k).
pub fn batch_discard_count(n: u32, k: u32) -> u32 {
    n.div_ceil(2 * k)
}

/// Remove the d = ceil(n/2k) least star-shaped colors and the set of their
/// least central elements; when shared centrals leave fewer than d nodes,
/// pad with the largest-index remaining nodes so exactly d are removed.
pub fn descend_batch(c: &Coloring) -> Result<(Coloring, DescentStep), DescentError> {
    ensure_proper(c)?;
    let p = c.params();
    let d = batch_discard_count(p.n, p.k) as usize;
    let report = c.star_report();
    let stars = report.star_colors();
    if stars.len() < d {
        return Err(DescentError::InsufficientStars {
            needed: d as u32,
            alpha: report.alpha,
            report,
        });
    }
    let colors: Vec<u32> = stars[..d].to_vec();
    let mut nodes: BTreeSet<u32> = colors.iter().map(|&l| report.class(l).centrals[0]).collect();
    let mut filler = p.n;
    while nodes.len() < d {
        while nodes.contains(&filler) {
            filler -= 1;
        }
        nodes.insert(filler);
    }
    let nodes: Vec<u32> = nodes.into_iter().collect();
    let (out, renumber_node, renumber_color) = apply_discard(c, &nodes, &colors)?;
    debug_assert!(out.validate().is_proper());
    Ok((
        out,
        DescentStep { discarded_colors: colors, discarded_nodes: nodes, renumber_node, renumber_color },
    ))
}

/// The node-count sequence n, n - ceil(n/2k), ..., truncated at (and
/// including) the first value at or below the star-count threshold for beta.
/// Its length is the number of batch rounds plus one.
pub fn schedule(n: u64, k: u32, beta: &BigRational) -> Result<Vec<u64>, DescentError> {
    if k < 2 {
        return Err(DescentError::SmallK(k));
    }
    let zero = BigRational::from(BigInt::from(0));
    let one = BigRational::from(BigInt::from(1));
    if beta <= &zero || beta >= &one {
        return Err(DescentError::BadBeta);
    }
    // cur <= threshold iff cur <= floor(threshold), so one integer floor
    // replaces per-iteration rational comparisons.
    let threshold = many_stars_threshold(k, beta)?;
    let floor = threshold.floor().to_integer().to_u64().unwrap_or(u64::MAX);
    let two_k = 2 * k as u64;
    let mut seq = Vec::with_capacity(8);
    let mut cur = n;
    seq.push(cur);
    while cur > floor {
        cur -= cur.div_ceil(two_k);
        seq.push(cur);
    }
    Ok(seq)
}

/// Apply steps of the chosen mode until n falls to the threshold (at least
/// 2k, below which no disjoint pairs exist) or the coloring runs out of
/// star-shaped classes; the latter is recorded as the stop reason with the
/// partial trace intact.
pub fn reduce_fully(
    c: &Coloring,
    mode: Mode,
    threshold: Option<u32>,
) -> Result<ReductionRun, DescentError> {
    ensure_proper(c)?;
    let limit = threshold.unwrap_or(0).max(2 * c.params().k);
    let mut colorings = vec![c.clone()];
    let mut steps = Vec::new();
    let mut sizes = Vec::new();
    let stop = loop {
        let cur = colorings.last().expect("nonempty");
        if cur.params().n <= limit {
            break StopReason::Threshold { limit };
        }
        let attempt = match mode {
            Mode::Single => descend_once(cur),
            Mode::Batch => descend_batch(cur),
        };
        match attempt {
            Ok((next, step)) => {
                sizes.push((next.params().n, next.params().m));
                steps.push(step);
                colorings.push(next);
            }
            Err(DescentError::NoStarClass { .. }) => {
                break StopReason::StarShortfall { needed: 1, alpha: 0 };
            }
            Err(DescentError::InsufficientStars { needed, alpha, .. }) => {
                break StopReason::StarShortfall { needed, alpha };
            }
            Err(e) => return Err(e),
        }
    };
    let trace =
        ReductionTrace { start: (c.params().n, c.params().m), steps, sizes, stop };
    Ok(ReductionRun { trace, colorings })
}

impl ReductionTrace {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("trace serialization cannot fail")
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self, DescentError> {
        let trace: ReductionTrace = serde_json::from_slice(bytes)?;
        trace.validate_structure()?;
        Ok(trace)
    }

    /// Structural bookkeeping checks: sizes chain exactly with the discard
    /// counts, id lists are strictly ascending and in range, and renumber
    /// maps are precisely the order-preserving bijections onto the survivors.
    pub fn validate_structure(&self) -> Result<(), DescentError> {
        let err = |msg: String| Err(DescentError::Structure(msg));
        if self.sizes.len() != self.steps.len() {
            return err(format!(
                "{} steps but {} size entries",
                self.steps.len(),
                self.sizes.len()
            ));
        }
        let (mut n, mut m) = self.start;
        for (idx, (step, &size)) in self.steps.iter().zip(&self.sizes).enumerate() {
            let check_ids = |ids: &[u32], max: u32, kind: &str| -> Result<(), DescentError> {
                if ids.is_empty() {
                    return Err(DescentError::Structure(format!("step {idx}: no {kind}s discarded")));
                }
                if ids.windows(2).any(|w| w[0] >= w[1]) || ids[0] < 1 || *ids.last().unwrap() > max {
                    return Err(DescentError::Structure(format!(
                        "step {idx}: discarded {kind}s {ids:?} not strictly ascending in 1..={max}"
                    )));
                }
                Ok(())
            };
            check_ids(&step.discarded_colors, m, "color")?;
            check_ids(&step.discarded_nodes, n, "node")?;
            if step.discarded_nodes.len() != step.discarded_colors.len() {
                return err(format!("step {idx}: node and color discard counts differ"));
            }
            let expect_map = |total: u32, dropped: &[u32]| -> Vec<(u32, u32)> {
                (1..=total)
                    .filter(|x| !dropped.contains(x))
                    .enumerate()
                    .map(|(i, o)| (o, i as u32 + 1))
                    .collect()
            };
            if step.renumber_node != expect_map(n, &step.discarded_nodes) {
                return err(format!("step {idx}: node renumber map is not the kept-order bijection"));
            }
            if step.renumber_color != expect_map(m, &step.discarded_colors) {
                return err(format!("step {idx}: color renumber map is not the kept-order bijection"));
            }
            let expected =
                (n - step.discarded_nodes.len() as u32, m - step.discarded_colors.len() as u32);
            if size != expected {
                return err(format!("step {idx}: size {size:?}, bookkeeping says {expected:?}"));
            }
            if expected.1 == 0 {
                return err(format!("step {idx}: all colors discarded"));
            }
            (n, m) = expected;
        }
        Ok(())
    }
}

use std::collections::{BTreeMap, BTreeSet};

use super::{arcs_intersect, dist, Curve, NodeId, Segment};
use crate::{Error, Result};

/// Chains segments into one closed curve, orienting each so that consecutive
/// endpoints share a node id. Every node must have degree exactly two.
///
/// Parameter weights are kept in proportion and normalized to sum one.
pub fn assemble_cycle(segments: Vec<Segment>) -> Result<Curve> {
    if segments.is_empty() {
        return Err(Error::InvalidArgument("no segments to assemble".into()));
    }
    let mut incidence: BTreeMap<NodeId, Vec<usize>> = BTreeMap::new();
    for (i, s) in segments.iter().enumerate() {
        incidence.entry(s.start).or_default().push(i);
        incidence.entry(s.end).or_default().push(i);
    }
    for (node, segs) in &incidence {
        if segs.len() != 2 {
            return Err(Error::DegreeViolation {
                node: node.0,
                degree: segs.len(),
            });
        }
    }
    let total = segments.len();
    let mut used = vec![false; total];
    let mut ordered = Vec::with_capacity(total);
    let start_node = segments[0].start;
    let mut current = 0;
    let mut oriented = segments[0].clone();
    loop {
        used[current] = true;
        let at = oriented.end;
        ordered.push(oriented);
        if at == start_node {
            break;
        }
        let next = incidence[&at].iter().copied().find(|&j| !used[j]);
        let Some(j) = next else { break };
        current = j;
        oriented = if segments[j].start == at {
            segments[j].clone()
        } else {
            segments[j].reversed()
        };
    }
    if ordered.len() != total {
        return Err(Error::Disconnected {
            visited: ordered.len(),
            total,
        });
    }
    Curve::with_normalized_weights(ordered)
}

/// Outcome of a self-intersection test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simplicity {
    pub simple: bool,
    /// Indices of an offending pair of segments.
    pub witness: Option<(usize, usize)>,
    /// True when the curve has formula segments and the answer comes from
    /// dense sampling rather than exact arc intersection.
    pub heuristic: bool,
}

/// Tests whether a closed curve is simple.
///
/// For geodesic cycles the test is exact: non-adjacent arcs must be disjoint
/// and adjacent arcs may meet only at their shared nodes. Curves with formula
/// segments fall back to dense sampling.
pub fn is_simple(curve: &Curve) -> Simplicity {
    if !curve.is_geodesic() {
        return sampled_simplicity(curve);
    }
    let segs = curve.segments();
    let arcs: Vec<_> = segs.iter().map(|s| s.as_arc().unwrap()).collect();
    for i in 0..segs.len() {
        for j in (i + 1)..segs.len() {
            let shared: BTreeSet<NodeId> = [segs[i].start, segs[i].end]
                .into_iter()
                .filter(|n| *n == segs[j].start || *n == segs[j].end)
                .collect();
            let hit = arcs_intersect(arcs[i], arcs[j]);
            let allowed: Vec<Vec<f64>> = shared
                .iter()
                .map(|n| {
                    if *n == segs[i].start {
                        segs[i].start_point().into_coords()
                    } else {
                        segs[i].end_point().into_coords()
                    }
                })
                .collect();
            let bad_overlap = hit.overlaps.iter().any(|o| o.length() > 1e-9);
            let bad_point = hit
                .points
                .iter()
                .any(|p| !allowed.iter().any(|a| dist(a, p.coords()) < 1e-7));
            if bad_overlap || bad_point {
                return Simplicity {
                    simple: false,
                    witness: Some((i, j)),
                    heuristic: false,
                };
            }
        }
    }
    Simplicity {
        simple: true,
        witness: None,
        heuristic: false,
    }
}

const SAMPLES_PER_SEGMENT: usize = 64;

fn sampled_simplicity(curve: &Curve) -> Simplicity {
    let segs = curve.segments();
    let mut pts: Vec<(usize, usize, Vec<f64>)> = Vec::new();
    for (i, s) in segs.iter().enumerate() {
        for k in 0..SAMPLES_PER_SEGMENT {
            let l = k as f64 / SAMPLES_PER_SEGMENT as f64;
            pts.push((i, k, s.position(l)));
        }
    }
    let n = pts.len();
    let spacing = (0..n)
        .map(|k| dist(&pts[k].2, &pts[(k + 1) % n].2))
        .fold(0.0, f64::max);
    for a in 0..n {
        for b in (a + 1)..n {
            // Neighbours along the traversal are expected to be close.
            let gap = (b - a).min(n - (b - a));
            if gap <= 2 {
                continue;
            }
            if dist(&pts[a].2, &pts[b].2) < 0.5 * spacing {
                return Simplicity {
                    simple: false,
                    witness: Some((pts[a].0, pts[b].0)),
                    heuristic: true,
                };
            }
        }
    }
    Simplicity {
        simple: true,
        witness: None,
        heuristic: true,
    }
}

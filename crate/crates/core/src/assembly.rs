//! Approximate design cycles from projective designs.
//!
//! For a projective `⌊t/2⌋`-design `Y ⊂ CP^n`, the union of the fibers over
//! `Y` averages every polynomial of degree `<= t` on `S^{2n+1}` exactly. The
//! fibers are joined into one simple geodesic cycle along a minimal spanning
//! tree: each tree edge cuts a short gap of length `δ̃` out of both fibers it
//! joins and bridges the two gaps with a horizontal lift of the edge and its
//! copy rotated by `e^{iδ̃}`. The cycle has length `2π|Y| + W - δ` and is an
//! `((W + δ)/(2π|Y|), 1/(2π|Y|))`-approximate `t`-design.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::poly::{monomial_basis, MonomialSet};
use crate::projective::{
    cp_distance, fiber_frame, horizontal_lift, verify_projective_design, ProjectiveDesignSet,
};
use crate::sphere::{assemble_cycle, is_simple, Arc, Curve, NodeId, Point, Segment, Simplicity};
use crate::{DesignReport, Error, Result};

/// Phase re-draws attempted when the cycle is not simple.
pub const MAX_RETRIES: usize = 64;

/// Tolerance of the "no third point on an edge" test.
const COLLINEAR_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeEdge {
    pub parent: usize,
    pub child: usize,
    pub weight: f64,
}

/// A spanning tree over the points of `Y`, rooted at index 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpanningTree {
    pub root: usize,
    pub edges: Vec<TreeEdge>,
    /// Children of each node in increasing index order.
    pub children: Vec<Vec<usize>>,
}

impl SpanningTree {
    pub fn len(&self) -> usize {
        self.children.len()
    }

    pub fn is_empty(&self) -> bool {
        self.children.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.children[v].len() + usize::from(v != self.root)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.len()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    fn edge_to(&self, child: usize) -> &TreeEdge {
        self.edges.iter().find(|e| e.child == child).expect("non-root node has a parent edge")
    }
}

/// Kruskal's algorithm on the complete graph under [`cp_distance`], ties
/// broken by `(weight, i, j)`. Chosen edges must not pass through a third
/// point of `Y`.
pub fn build_mst(y: &ProjectiveDesignSet) -> Result<SpanningTree> {
    let n = y.len();
    if n < 2 {
        return Err(Error::InvalidArgument("a spanning tree needs at least two points".into()));
    }
    let pts = y.points();
    let mut dist = vec![vec![0.0; n]; n];
    let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let d = cp_distance(&pts[i], &pts[j]);
            if d <= crate::projective::SAME_POINT_TOL {
                return Err(Error::DuplicatePoints(i, j));
            }
            dist[i][j] = d;
            dist[j][i] = d;
            pairs.push((d, i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut adj = vec![Vec::new(); n];
    let mut chosen = 0;
    for &(d, i, j) in &pairs {
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        if ri == rj {
            continue;
        }
        parent[ri] = rj;
        for k in (0..n).filter(|&k| k != i && k != j) {
            if dist[i][k] + dist[k][j] - d < COLLINEAR_TOL {
                return Err(Error::EdgeThroughPoint { a: i, b: j, third: k });
            }
        }
        adj[i].push((j, d));
        adj[j].push((i, d));
        chosen += 1;
        if chosen == n - 1 {
            break;
        }
    }
    let mut children = vec![Vec::new(); n];
    let mut edges = Vec::with_capacity(n - 1);
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        let mut next: Vec<(usize, f64)> = adj[v].iter().copied().filter(|(w, _)| !seen[*w]).collect();
        next.sort_by_key(|(w, _)| *w);
        for (w, d) in next {
            seen[w] = true;
            children[v].push(w);
            edges.push(TreeEdge {
                parent: v,
                child: w,
                weight: d,
            });
            stack.push(w);
        }
    }
    Ok(SpanningTree {
        root: 0,
        edges,
        children,
    })
}

/// `W` (twice the tree weight), `N` (maximum degree), `M = 2π(|Y|-1)/N` and
/// the per-gap length `δ̃ = δ/(2(|Y|-1))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AssemblyConstants {
    pub w: f64,
    pub n: usize,
    pub m: f64,
    pub delta: f64,
    pub delta_tilde: f64,
}

pub fn tree_constants(tree: &SpanningTree, delta: f64) -> Result<AssemblyConstants> {
    let y = tree.len();
    let n = tree.max_degree();
    let m = TAU * (y - 1) as f64 / n as f64;
    if !(delta > 0.0 && delta < m) {
        return Err(Error::DeltaOutOfRange { delta, max: m });
    }
    Ok(AssemblyConstants {
        w: 2.0 * tree.total_weight(),
        n,
        m,
        delta,
        delta_tilde: delta / (2.0 * (y - 1) as f64),
    })
}

/// An assembled approximate design cycle with its bookkeeping.
#[derive(Clone, Debug)]
pub struct Assembly {
    pub curve: Curve,
    pub constants: AssemblyConstants,
    /// Departure phase of each child slot, per node, in child order.
    pub slot_phases: Vec<Vec<f64>>,
    /// The offsets `δ_j` used for the slots.
    pub offsets: Vec<Vec<f64>>,
    /// Total length of the trimmed fiber arcs.
    pub fiber_length: f64,
    /// Total length of the lift arcs.
    pub lift_length: f64,
    /// Lengths of each lift and its rotated twin, per tree edge.
    pub lift_pairs: Vec<(f64, f64)>,
    pub simplicity: Simplicity,
    pub seed: u64,
    /// Number of phase draws used (1 if the first choice was simple).
    pub attempts: usize,
}

impl Assembly {
    pub fn length(&self) -> f64 {
        self.fiber_length + self.lift_length
    }
}

/// Admissible offsets lie in `[0, 2π/N - δ̃)`; the default is the midpoint.
pub fn default_offsets(tree: &SpanningTree, c: &AssemblyConstants) -> Vec<Vec<f64>> {
    let mid = 0.5 * (TAU / c.n as f64 - c.delta_tilde);
    tree.children.iter().map(|ch| vec![mid; ch.len()]).collect()
}

/// Builds the cycle. Without explicit `offsets` the midpoint offsets are
/// tried first; if the cycle is not simple, offsets are redrawn uniformly
/// from the admissible window with a generator seeded by `seed`.
pub fn assemble_gamma(
    y: &ProjectiveDesignSet,
    tree: &SpanningTree,
    delta: f64,
    offsets: Option<Vec<Vec<f64>>>,
    seed: u64,
) -> Result<Assembly> {
    if tree.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: y.len(),
            found: tree.len(),
        });
    }
    let c = tree_constants(tree, delta)?;
    if let Some(e) = tree.edges.iter().find(|e| e.weight >= FRAC_PI_2 - 1e-12) {
        return Err(Error::EdgeTooLong(e.parent, e.child));
    }
    let window = TAU / c.n as f64 - c.delta_tilde;
    let mut offs = match offsets {
        Some(o) => {
            let ok = o.len() == tree.len()
                && o.iter().zip(&tree.children).all(|(v, ch)| v.len() == ch.len())
                && o.iter().flatten().all(|&x| (0.0..window).contains(&x));
            if !ok {
                return Err(Error::InvalidArgument(format!(
                    "offsets must match the tree's children and lie in [0, {window})"
                )));
            }
            o
        }
        None => default_offsets(tree, &c),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=MAX_RETRIES + 1 {
        let mut a = build_once(y, tree, &c, &offs)?;
        if a.simplicity.simple {
            a.seed = seed;
            a.attempts = attempt;
            return Ok(a);
        }
        offs = tree
            .children
            .iter()
            .map(|ch| ch.iter().map(|_| rng.gen_range(0.0..window)).collect())
            .collect();
    }
    Err(Error::SimplicityFailure(MAX_RETRIES))
}

/// Departure phases of the child slots on one fiber. The root spreads its
/// `n` children over `2π(j-1)/n`; other nodes reserve phase 0 for the
/// arriving lift and use `2πj/(n+1)`.
fn slot_phases(is_root: bool, offsets: &[f64]) -> Vec<f64> {
    let n = offsets.len();
    offsets
        .iter()
        .enumerate()
        .map(|(j, d)| {
            if is_root {
                TAU * j as f64 / n as f64 + d
            } else {
                TAU * (j + 1) as f64 / (n + 1) as f64 + d
            }
        })
        .collect()
}

fn build_once(
    y: &ProjectiveDesignSet,
    tree: &SpanningTree,
    c: &AssemblyConstants,
    offsets: &[Vec<f64>],
) -> Result<Assembly> {
    let nodes = tree.len();
    let dt = c.delta_tilde;
    // Node ids: two per gap, (fiber, gap, side).
    let max_gaps = tree.children.iter().map(|ch| ch.len() + 1).max().unwrap_or(1) as u64;
    let id = |v: usize, gap: usize, side: u64| NodeId((v as u64 * max_gaps + gap as u64) * 2 + side);

    let mut base: Vec<Option<Point>> = vec![None; nodes];
    base[tree.root] = Some(y.points()[tree.root].point());
    let mut phases = vec![Vec::new(); nodes];
    let mut segments = Vec::new();
    let mut lift_pairs = Vec::new();
    let mut lift_length = 0.0;

    // Parents are always visited before their children in edge order.
    let mut order = vec![tree.root];
    order.extend(tree.edges.iter().map(|e| e.child));
    for &v in &order {
        if v != tree.root {
            debug_assert!(base[tree.edge_to(v).parent].is_some());
        }
        let z = base[v].clone().expect("parent processed first");
        let is_root = v == tree.root;
        let ph = slot_phases(is_root, &offsets[v]);
        // Gap list: (phase, gap index); the arrival gap of a non-root is 0.
        let first_child_gap = usize::from(!is_root);
        for (j, &child) in tree.children[v].iter().enumerate() {
            let gap = first_child_gap + j;
            let rot = |p: &Point, a: f64| rotate_phase(p, a);
            let depart = rot(&z, ph[j]);
            let depart_twin = rot(&z, ph[j] + dt);
            let g = horizontal_lift(&depart, &y.points()[child])?;
            let g_twin = horizontal_lift(&depart_twin, &y.points()[child])?;
            let arrival = g.end_point();
            lift_pairs.push((g.length(), g_twin.length()));
            lift_length += g.length() + g_twin.length();
            segments.push(Segment::arc(g.clone(), g.length(), id(v, gap, 0), id(child, 0, 0)));
            segments.push(Segment::arc(g_twin.clone(), g_twin.length(), id(v, gap, 1), id(child, 0, 1)));
            base[child] = Some(arrival);
        }
        let mut gaps: Vec<f64> = Vec::new();
        if !is_root {
            gaps.push(0.0);
        }
        gaps.extend(&ph);
        let (u, w) = frame_at(&z);
        for k in 0..gaps.len() {
            let a = gaps[k] + dt;
            let b = if k + 1 < gaps.len() { gaps[k + 1] } else { gaps[0] + TAU };
            if !(b > a) {
                return Err(Error::InvariantViolation(format!(
                    "removed arcs overlap on fiber {v} (gap {k})"
                )));
            }
            let arc = Arc::new(u.clone(), w.clone(), a, b)?;
            let next = if k + 1 < gaps.len() { k + 1 } else { 0 };
            segments.push(Segment::arc(arc, b - a, id(v, k, 1), id(v, next, 0)));
        }
        phases[v] = ph;
    }
    let fiber_length: f64 = segments
        .iter()
        .filter(|s| s.start.0 / (2 * max_gaps) == s.end.0 / (2 * max_gaps))
        .map(|s| s.as_arc().unwrap().length())
        .sum();
    let curve = assemble_cycle(segments)?;
    let simplicity = is_simple(&curve);
    Ok(Assembly {
        curve,
        constants: *c,
        slot_phases: phases,
        offsets: offsets.to_vec(),
        fiber_length,
        lift_length,
        lift_pairs,
        simplicity,
        seed: 0,
        attempts: 0,
    })
}

/// `p · e^{ia}` in interleaved real coordinates.
fn rotate_phase(p: &Point, a: f64) -> Point {
    let (s, c) = a.sin_cos();
    let x: Vec<f64> = p
        .coords()
        .chunks(2)
        .flat_map(|z| [c * z[0] - s * z[1], s * z[0] + c * z[1]])
        .collect();
    Point::normalized(x).expect("rotation preserves the norm")
}

/// The fiber frame `(z, iz)` of a representative `z`.
fn frame_at(z: &Point) -> (Point, Point) {
    let p = crate::projective::ProjPoint::from_real(z.coords()).expect("unit representative");
    let (rep, irep) = fiber_frame(&p);
    // Express the frame starting at `z` itself rather than the canonical rep.
    let c = z.dot(&rep);
    let s = z.dot(&irep);
    let u = Point::normalized(rep.coords().iter().zip(irep.coords()).map(|(a, b)| c * a + s * b).collect())
        .expect("unit");
    let v = Point::normalized(rep.coords().iter().zip(irep.coords()).map(|(a, b)| -s * a + c * b).collect())
        .expect("unit");
    (u, v)
}

/// `ε = (W + δ)/(2π|Y|)` and `c = 1/(2π|Y|)`.
pub fn a_priori_eps(y_size: usize, w: f64, delta: f64) -> (f64, f64) {
    let c = 1.0 / (TAU * y_size as f64);
    ((w + delta) * c, c)
}

/// An `(ε, c)`-approximate design is `(ε + |c̃ - c| ℓ, c̃)`-approximate.
pub fn rescale_c(eps: f64, c: f64, length: f64, c_new: f64) -> f64 {
    eps + (c_new - c).abs() * length
}

/// `ε + c(|L| + ℓ(γ) - 2ℓ_shared)` for a curve sharing `ℓ_shared` of its
/// length with an `(ε, c)`-approximate union of curves `L`.
pub fn overlap_bound(eps: f64, c: f64, l_total: f64, curve_length: f64, shared: f64) -> f64 {
    eps + c * (l_total + curve_length - 2.0 * shared)
}

/// `max_α |c ∫_γ x^α - avg(x^α)| / sup x^α` over degree `<= t`, a lower bound
/// for the best `ε` at this `c`. The report passes if the maximum is within
/// `claimed + tolerance` (or `tolerance` when nothing is claimed).
pub fn empirical_defect(curve: &Curve, t: usize, c: f64, claimed: Option<f64>, tolerance: f64) -> Result<DesignReport> {
    empirical_defect_union(std::slice::from_ref(curve), t, c, claimed, tolerance)
}

/// [`empirical_defect`] for `c` times the summed line integrals over several
/// curves, e.g. a union of fibers.
pub fn empirical_defect_union(
    curves: &[Curve],
    t: usize,
    c: f64,
    claimed: Option<f64>,
    tolerance: f64,
) -> Result<DesignReport> {
    let dim = curves
        .first()
        .ok_or_else(|| Error::InvalidArgument("no curves".into()))?
        .dim();
    let set = MonomialSet::new(dim, t);
    let mut acc = vec![0.0; set.len()];
    let mut length = 0.0;
    for curve in curves {
        let ints = curve.arclength_integrals(set.len(), |x, out| set.eval_into(x, out))?;
        acc.iter_mut().zip(ints).for_each(|(a, i)| *a += i);
        length += curve.length()?;
    }
    let defects: Vec<f64> = acc
        .iter()
        .zip(set.averages())
        .zip(set.sups())
        .map(|((i, avg), sup)| (c * i - avg).abs() / sup)
        .collect();
    let mut r = DesignReport::from_defects(t, &monomial_basis(dim, t), &defects, claimed.unwrap_or(0.0) + tolerance);
    r.length = Some(length);
    r.c = Some(c);
    r.epsilon_claimed = claimed;
    r.epsilon_empirical = Some(r.max_defect);
    Ok(r)
}

/// The JSON record of an assembled cycle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxReport {
    pub t: usize,
    #[serde(rename = "Y_size")]
    pub y_size: usize,
    #[serde(rename = "W")]
    pub w: f64,
    pub delta: f64,
    pub length: f64,
    pub c: f64,
    pub eps_apriori: f64,
    pub eps_empirical: f64,
    pub simple: bool,
    pub seed: u64,
}

/// Assembles the cycle for `Y` and certifies it at strength `t` with
/// `c = 1/(2π|Y|)`.
pub fn approximate_design(y: &ProjectiveDesignSet, t: usize, delta: f64, seed: u64, tolerance: f64) -> Result<(Assembly, ApproxReport, DesignReport)> {
    let tree = build_mst(y)?;
    let a = assemble_gamma(y, &tree, delta, None, seed)?;
    let (eps, c) = a_priori_eps(y.len(), a.constants.w, delta);
    let cert = empirical_defect(&a.curve, t, c, Some(eps), tolerance)?;
    let report = ApproxReport {
        t,
        y_size: y.len(),
        w: a.constants.w,
        delta,
        length: a.curve.length()?,
        c,
        eps_apriori: eps,
        eps_empirical: cert.max_defect,
        simple: a.simplicity.simple,
        seed,
    };
    Ok((a, report, cert))
}

/// One row of the `δ_t = min(1, W_t)/t` pipeline.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineRow {
    pub t: usize,
    #[serde(rename = "Y_size")]
    pub y_size: usize,
    #[serde(rename = "W")]
    pub w: Option<f64>,
    pub delta: Option<f64>,
    pub length: Option<f64>,
    /// `W_t / (π |Y_t|)`.
    pub eps: Option<f64>,
    /// Measured defect at `c = 1/ℓ`.
    pub eps_empirical: Option<f64>,
    pub valid: bool,
    pub note: Option<String>,
}

/// Runs the assembly for each `(t, Y_t)` with `δ_t = min(1, W_t)/t`. Rows
/// whose `Y_t` fails projective verification at `⌊t/2⌋`, or whose `δ_t` is
/// not admissible, are returned flagged invalid.
pub fn asymptotic_pipeline(entries: &[(usize, ProjectiveDesignSet)], seed: u64, tolerance: f64) -> Vec<PipelineRow> {
    entries
        .iter()
        .map(|(t, y)| {
            let invalid = |note: String| PipelineRow {
                t: *t,
                y_size: y.len(),
                w: None,
                delta: None,
                length: None,
                eps: None,
                eps_empirical: None,
                valid: false,
                note: Some(note),
            };
            if *t == 0 {
                return invalid("t must be positive".into());
            }
            let check = verify_projective_design(y, t / 2, tolerance);
            if !check.pass {
                return invalid(format!("not a projective {}-design (defect {:e})", t / 2, check.max_defect));
            }
            let run = || -> Result<PipelineRow> {
                let tree = build_mst(y)?;
                let w = 2.0 * tree.total_weight();
                let delta = w.min(1.0) / *t as f64;
                let a = assemble_gamma(y, &tree, delta, None, seed)?;
                let length = a.curve.length()?;
                let cert = empirical_defect(&a.curve, *t, 1.0 / length, None, tolerance)?;
                Ok(PipelineRow {
                    t: *t,
                    y_size: y.len(),
                    w: Some(w),
                    delta: Some(delta),
                    length: Some(length),
                    eps: Some(w / (PI * y.len() as f64)),
                    eps_empirical: Some(cert.max_defect),
                    valid: true,
                    note: None,
                })
            };
            run().unwrap_or_else(|e| invalid(e.to_string()))
        })
        .collect()
}

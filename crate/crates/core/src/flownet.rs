//! Planar k-flow networks: validation, st-augmentation of 1-flow networks,
//! the square-to-layout pipeline, and the rotated-grid 2-flow
//! counterexample generator.
//!
//! A k-flow network here carries an explicit upward planar straight-line
//! drawing. The st-augmentation follows the drawing: sinks and sources on
//! the outer face are fanned into the extreme ones, then each interior sink
//! shoots a vertical ray, walks the hit face boundary upward to a local
//! sink and connects to it (symmetrically for sources, by mirroring).

use crate::barlayout::BarLayout;
use crate::geom::{cmp_clockwise_from_north, segments_cross_properly, Point};
use crate::graph::{square_of_digraph, DiGraph, Graph};
use crate::planarity::{trace_faces, Dart};
use crate::stplanar::{tt_bar_layout, StDigraph};
use crate::{Arc, Error, Rational, Result, VertexId};
use std::collections::{BTreeMap, BTreeSet};

/// Upward planar digraph with a per-vertex flow bound and an explicit
/// straight-line drawing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowNetwork {
    digraph: DiGraph,
    coords: BTreeMap<VertexId, Point<Rational>>,
    k: u32,
}

/// Whether every vertex satisfies min(indeg, outdeg) <= k; violators are
/// returned.
pub fn is_k_flow(g: &DiGraph, k: u32) -> (bool, Vec<VertexId>) {
    let mut indeg: BTreeMap<VertexId, usize> = g.vertices().map(|v| (v, 0)).collect();
    let mut outdeg = indeg.clone();
    for (u, v) in g.arcs() {
        *outdeg.get_mut(&u).unwrap() += 1;
        *indeg.get_mut(&v).unwrap() += 1;
    }
    let violating: Vec<VertexId> = g
        .vertices()
        .filter(|v| indeg[v].min(outdeg[v]) > k as usize)
        .collect();
    (violating.is_empty(), violating)
}

impl FlowNetwork {
    pub fn new(
        digraph: DiGraph,
        coords: BTreeMap<VertexId, Point<Rational>>,
        k: u32,
    ) -> Result<Self> {
        for v in digraph.vertices() {
            if !coords.contains_key(&v) {
                return Err(Error::NotUpward(format!("vertex {v} has no coordinates")));
            }
        }
        let pts: Vec<(&VertexId, &Point<Rational>)> = coords.iter().collect();
        for (i, (u, p)) in pts.iter().enumerate() {
            for (w, q) in &pts[i + 1..] {
                if p == q {
                    return Err(Error::NotUpward(format!("vertices {u} and {w} coincide")));
                }
            }
        }
        for (u, v) in digraph.arcs() {
            if coords[&u].y >= coords[&v].y {
                return Err(Error::NotUpward(format!(
                    "arc ({u},{v}) does not increase y"
                )));
            }
        }
        let (ok, violating) = is_k_flow(&digraph, k);
        if !ok {
            return Err(Error::NotKFlow { k, violating });
        }
        // planarity of the drawing: sort segments by lower x bound and scan
        let mut segs: Vec<(Arc, Rational, Rational)> = digraph
            .arcs()
            .map(|(u, v)| {
                let (a, b) = (&coords[&u], &coords[&v]);
                ((u, v), a.x.min(b.x), a.x.max(b.x))
            })
            .collect();
        segs.sort_by(|a, b| a.1.cmp(&b.1));
        for i in 0..segs.len() {
            let ((u1, v1), _, xmax) = segs[i];
            for j in i + 1..segs.len() {
                let ((u2, v2), xmin2, _) = segs[j];
                if xmin2 > xmax {
                    break;
                }
                if u1 == u2 || u1 == v2 || v1 == u2 || v1 == v2 {
                    continue;
                }
                if segments_cross_properly(
                    &coords[&u1],
                    &coords[&v1],
                    &coords[&u2],
                    &coords[&v2],
                ) {
                    return Err(Error::NotUpward(format!(
                        "arcs ({u1},{v1}) and ({u2},{v2}) cross in the drawing"
                    )));
                }
            }
        }
        // no vertex on an arc's interior
        for (u, v) in digraph.arcs() {
            let (a, b) = (&coords[&u], &coords[&v]);
            for (&w, p) in &coords {
                if w == u || w == v {
                    continue;
                }
                use crate::geom::orient;
                if orient(a, b, p) == std::cmp::Ordering::Equal
                    && p.x >= a.x.min(b.x)
                    && p.x <= a.x.max(b.x)
                    && p.y >= a.y.min(b.y)
                    && p.y <= a.y.max(b.y)
                {
                    return Err(Error::NotUpward(format!(
                        "vertex {w} lies on arc ({u},{v})"
                    )));
                }
            }
        }
        Ok(FlowNetwork { digraph, coords, k })
    }

    pub fn digraph(&self) -> &DiGraph {
        &self.digraph
    }

    pub fn coords(&self) -> &BTreeMap<VertexId, Point<Rational>> {
        &self.coords
    }

    pub fn k(&self) -> u32 {
        self.k
    }
}

/// Mutable augmentation state; mirrored around the x-axis to reuse the sink
/// procedure for sources.
struct AugState {
    rot: BTreeMap<VertexId, Vec<VertexId>>,
    arcs: BTreeSet<Arc>,
    added: Vec<Arc>,
    coords: BTreeMap<VertexId, Point<Rational>>,
    /// Original arcs with geometry; the only targets of vertical rays.
    original: Vec<(VertexId, VertexId)>,
    /// One dart on the outer face of each remaining component.
    outer: Vec<Dart>,
    /// Terminal that keeps collecting sinks (t1 before mirroring).
    top: VertexId,
    /// The opposite terminal, kept on the outer face across splits.
    bottom: VertexId,
}

fn sinks_of(arcs: &BTreeSet<Arc>, vertices: &BTreeSet<VertexId>) -> Vec<VertexId> {
    let with_out: BTreeSet<VertexId> = arcs.iter().map(|&(u, _)| u).collect();
    vertices.iter().copied().filter(|v| !with_out.contains(v)).collect()
}

fn components_of(rot: &BTreeMap<VertexId, Vec<VertexId>>) -> Vec<BTreeSet<VertexId>> {
    let mut unseen: BTreeSet<VertexId> = rot.keys().copied().collect();
    let mut comps = Vec::new();
    while let Some(&start) = unseen.iter().next() {
        let mut comp = BTreeSet::from([start]);
        unseen.remove(&start);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &w in &rot[&v] {
                if unseen.remove(&w) {
                    comp.insert(w);
                    stack.push(w);
                }
            }
        }
        comps.push(comp);
    }
    comps
}

/// Outer dart of a component of an angle-sorted rotation system: at the
/// bottom-most vertex the unbounded face follows the first west-half
/// neighbor (or wraps).
fn geometric_outer_dart(
    rot: &BTreeMap<VertexId, Vec<VertexId>>,
    coords: &BTreeMap<VertexId, Point<Rational>>,
    comp: &BTreeSet<VertexId>,
) -> Result<Dart> {
    let v0 = *comp
        .iter()
        .min_by(|&&a, &&b| {
            let (pa, pb) = (&coords[&a], &coords[&b]);
            pa.y.cmp(&pb.y).then(pa.x.cmp(&pb.x)).then(a.cmp(&b))
        })
        .expect("nonempty component");
    let ns = &rot[&v0];
    if ns.is_empty() {
        return Err(Error::NotUpward(format!("isolated vertex {v0}")));
    }
    let zero = Rational::from_integer(0);
    let origin = &coords[&v0];
    let target = *ns
        .iter()
        .find(|&&w| {
            let p = &coords[&w];
            let dx = p.x - origin.x;
            let dy = p.y - origin.y;
            dx < zero || (dx == zero && dy < zero)
        })
        .unwrap_or(&ns[0]);
    Ok((v0, target))
}

impl AugState {
    fn mirror(&mut self) {
        for p in self.coords.values_mut() {
            p.y = -p.y;
        }
        self.arcs = self.arcs.iter().map(|&(u, v)| (v, u)).collect();
        self.added = self.added.iter().map(|&(u, v)| (v, u)).collect();
        self.original = self.original.iter().map(|&(u, v)| (v, u)).collect();
        for ns in self.rot.values_mut() {
            ns.reverse();
        }
        self.outer = self.outer.iter().map(|&(u, v)| (v, u)).collect();
        std::mem::swap(&mut self.top, &mut self.bottom);
    }

    fn vertices(&self) -> BTreeSet<VertexId> {
        self.rot.keys().copied().collect()
    }

    fn insert_arc(&mut self, from: VertexId, to: VertexId, pos_from: usize, pos_to: usize) {
        self.rot.get_mut(&from).unwrap().insert(pos_from, to);
        self.rot.get_mut(&to).unwrap().insert(pos_to, from);
        self.arcs.insert((from, to));
        self.added.push((from, to));
    }

    /// Outer-face walks of all components.
    fn outer_walks(&self) -> Vec<Vec<Dart>> {
        let faces = trace_faces(&self.rot);
        self.outer
            .iter()
            .map(|d| {
                faces
                    .iter()
                    .find(|f| f.contains(d))
                    .expect("tracked outer dart")
                    .clone()
            })
            .collect()
    }

    /// Fans every other outer sink into the top terminal, merging
    /// components as needed.
    fn fan_outer_sinks(&mut self) -> Result<()> {
        let outer_vertices: BTreeSet<VertexId> = self
            .outer_walks()
            .iter()
            .flat_map(|w| w.iter().flat_map(|&(a, b)| [a, b]))
            .collect();
        let vs = self.vertices();
        let top = self.top;
        let targets: Vec<VertexId> = sinks_of(&self.arcs, &vs)
            .into_iter()
            .filter(|&v| v != top && outer_vertices.contains(&v))
            .collect();
        for ti in targets {
            let faces = trace_faces(&self.rot);
            let common = faces.iter().find(|f| {
                f.iter().any(|&(a, _)| a == ti) && f.iter().any(|&(a, _)| a == top)
            });
            match common {
                Some(f) => {
                    let i = f.iter().position(|&(_, b)| b == ti).unwrap();
                    let wi = f[i].0;
                    let j = f.iter().position(|&(_, b)| b == top).unwrap();
                    let wj = f[j].0;
                    let was_outer = self.outer.iter().position(|d| f.contains(d));
                    let pi = self.rot[&ti].iter().position(|&q| q == wi).unwrap() + 1;
                    let pj = self.rot[&top].iter().position(|&q| q == wj).unwrap() + 1;
                    self.insert_arc(ti, top, pi, pj);
                    if let Some(oi) = was_outer {
                        // the outer face split: keep the side holding the
                        // opposite terminal
                        let faces = trace_faces(&self.rot);
                        let keep = faces
                            .iter()
                            .find(|f| {
                                (f.contains(&(ti, top)) || f.contains(&(top, ti)))
                                    && f.iter().any(|&(a, b)| a == self.bottom || b == self.bottom)
                            })
                            .or_else(|| {
                                faces
                                    .iter()
                                    .find(|f| f.contains(&(ti, top)) || f.contains(&(top, ti)))
                            })
                            .expect("chord lies on two faces");
                        self.outer[oi] = keep[0];
                    }
                }
                None => {
                    // different components: join their outer faces
                    let walks = self.outer_walks();
                    let find =
                        |v: VertexId| walks.iter().position(|w| w.iter().any(|&(a, _)| a == v));
                    let ci = find(ti).ok_or_else(|| {
                        Error::InternalInvariant(format!("sink {ti} is not on any outer face"))
                    })?;
                    let cj = find(top).ok_or_else(|| {
                        Error::InternalInvariant("top terminal left the outer face".into())
                    })?;
                    if ci == cj {
                        return Err(Error::InternalInvariant(
                            "no common face within one component".into(),
                        ));
                    }
                    let wi = walks[ci]
                        .iter()
                        .find(|&&(_, b)| b == ti)
                        .expect("sink on walk")
                        .0;
                    let wj = walks[cj]
                        .iter()
                        .find(|&&(_, b)| b == top)
                        .expect("terminal on walk")
                        .0;
                    let pi = self.rot[&ti].iter().position(|&q| q == wi).unwrap() + 1;
                    let pj = self.rot[&top].iter().position(|&q| q == wj).unwrap() + 1;
                    self.insert_arc(ti, top, pi, pj);
                    // merged outer face: keep the terminal component's dart
                    self.outer.remove(ci);
                }
            }
        }
        Ok(())
    }

    /// First original arc hit by the upward ray from `t`, resolved as if
    /// the ray were at x_t + epsilon.
    fn ray_hit(&self, t: VertexId) -> Option<(VertexId, VertexId)> {
        let pt = &self.coords[&t];
        let mut best: Option<(Rational, Rational, (VertexId, VertexId))> = None;
        for &(u, v) in &self.original {
            let (a, b) = (&self.coords[&u], &self.coords[&v]);
            let (xmin, xmax) = (a.x.min(b.x), a.x.max(b.x));
            if !(xmin <= pt.x && pt.x < xmax) {
                continue;
            }
            let slope = (b.y - a.y) / (b.x - a.x);
            let y_at = a.y + slope * (pt.x - a.x);
            if y_at <= pt.y {
                continue;
            }
            let key = (y_at, slope);
            if best.as_ref().map_or(true, |(y, s, _)| key < (*y, *s)) {
                best = Some((key.0, key.1, (u, v)));
            }
        }
        best.map(|(_, _, e)| e)
    }

    /// Cancels interior sinks one at a time until only the top terminal
    /// remains a sink.
    fn cancel_interior_sinks(&mut self) -> Result<()> {
        loop {
            let vs = self.vertices();
            let top = self.top;
            let mut sinks: Vec<VertexId> = sinks_of(&self.arcs, &vs)
                .into_iter()
                .filter(|&v| v != top)
                .collect();
            sinks.sort_by(|&a, &b| {
                let (pa, pb) = (&self.coords[&a], &self.coords[&b]);
                pb.y.cmp(&pa.y).then(pb.x.cmp(&pa.x)).then(b.cmp(&a))
            });
            let Some(&t) = sinks.first() else {
                return Ok(());
            };
            // the face above t sits at the wrap corner of its rotation
            let ns = &self.rot[&t];
            if ns.is_empty() {
                return Err(Error::InternalInvariant(format!("isolated sink {t}")));
            }
            let first = ns[0];
            let faces = trace_faces(&self.rot);
            let fi = faces
                .iter()
                .position(|f| f.contains(&(t, first)))
                .expect("dart has a face");
            let face = &faces[fi];
            // try the paper-faithful geometric walk first
            let target = match self.ray_hit(t) {
                Some((p, q)) => {
                    let up = if self.coords[&p].y < self.coords[&q].y {
                        (p, q)
                    } else {
                        (q, p)
                    };
                    if let Some(di) = face.iter().position(|&d| d == up) {
                        Some(self.walk_to_local_sink(face, di, true))
                    } else if let Some(di) = face.iter().position(|&d| d == (up.1, up.0)) {
                        Some(self.walk_to_local_sink(face, di, false))
                    } else {
                        None
                    }
                }
                None => None,
            };
            let (tp, corner_idx) = match target {
                Some(x) => x,
                None => {
                    // fallback: highest sink-corner of the face above t
                    let mut best: Option<(VertexId, usize)> = None;
                    let len = face.len();
                    for i in 0..len {
                        let v = face[i].1;
                        let next = face[(i + 1) % len];
                        debug_assert_eq!(next.0, v);
                        let incoming_before = self.arcs.contains(&face[i]);
                        let incoming_after = self.arcs.contains(&(next.1, v));
                        if incoming_before && incoming_after {
                            let better = match best {
                                None => true,
                                Some((b, _)) => {
                                    let (pv, pb) = (&self.coords[&v], &self.coords[&b]);
                                    (pv.y, pv.x, v) > (pb.y, pb.x, b)
                                }
                            };
                            if better {
                                best = Some((v, (i + 1) % len));
                            }
                        }
                    }
                    best.ok_or_else(|| {
                        Error::InternalInvariant(format!(
                            "face above sink {t} has no sink corner"
                        ))
                    })?
                }
            };
            if self.coords[&tp].y <= self.coords[&t].y {
                return Err(Error::InternalInvariant(format!(
                    "cancellation target {tp} is not above sink {t}"
                )));
            }
            // the target is a sink or already has two incoming arcs
            let indeg = self.arcs.iter().filter(|&&(_, v)| v == tp).count();
            let outdeg = self.arcs.iter().filter(|&&(u, _)| u == tp).count();
            if outdeg > 0 && indeg < 2 {
                return Err(Error::InternalInvariant(format!(
                    "cancellation target {tp} has outdeg {outdeg} and indeg {indeg}"
                )));
            }
            // insert (t, tp): at t in the top corner (end of the rotation),
            // at tp inside the sink corner found on the face
            let z = faces[fi][corner_idx].1;
            let pos_tp = self.rot[&tp].iter().position(|&q| q == z).unwrap();
            let pos_t = self.rot[&t].len();
            self.insert_arc(t, tp, pos_t, pos_tp);
        }
    }

    /// From the face position `di` (a dart of the hit arc), walk toward the
    /// arc's upper endpoint and on until the first corner whose two edges
    /// both point into it. Returns the vertex and its corner position (the
    /// index of the dart leaving the corner).
    fn walk_to_local_sink(&self, face: &[Dart], di: usize, forward: bool) -> (VertexId, usize) {
        let len = face.len();
        let mut i = di;
        loop {
            // corner after dart i (forward) or before dart i (backward)
            let (corner_v, leave_idx) = if forward {
                (face[i].1, (i + 1) % len)
            } else {
                (face[i].0, i)
            };
            let enter = if forward {
                face[i]
            } else {
                face[(i + len - 1) % len]
            };
            let leave = face[leave_idx];
            let enter_in = self.arcs.contains(&if forward {
                enter
            } else {
                (enter.1, enter.0)
            });
            let leave_in = self.arcs.contains(&(leave.1, leave.0));
            let leave_in = if forward { leave_in } else { self.arcs.contains(&leave) };
            if enter_in && leave_in {
                // both edges point into the corner vertex
                let pos = if forward { leave_idx } else { (i + len - 1) % len };
                let _ = pos;
                return (corner_v, leave_idx);
            }
            i = if forward { (i + 1) % len } else { (i + len - 1) % len };
        }
    }
}

/// Augments a planar 1-flow network into an st-digraph that is still a
/// 1-flow network; the input is a spanning subgraph of the output.
pub fn st_augment_1flow(f: &FlowNetwork) -> Result<(StDigraph, Vec<Arc>)> {
    let (ok, violating) = is_k_flow(f.digraph(), 1);
    if !ok {
        return Err(Error::NotKFlow { k: 1, violating });
    }
    if f.digraph().m() == 0 {
        return Err(Error::NotUpward("flow network has no arcs".into()));
    }
    // angle-sorted rotations from the drawing
    let coords = f.coords().clone();
    let mut rot: BTreeMap<VertexId, Vec<VertexId>> =
        f.digraph().vertices().map(|v| (v, Vec::new())).collect();
    for (v, ns) in rot.iter_mut() {
        let mut around: Vec<VertexId> = f
            .digraph()
            .out_neighbors(*v)
            .into_iter()
            .chain(f.digraph().in_neighbors(*v))
            .collect();
        let origin = coords[v].clone();
        around.sort_by(|&a, &b| {
            let pa = &coords[&a];
            let pb = &coords[&b];
            let da = Point::new(pa.x - origin.x, pa.y - origin.y);
            let db = Point::new(pb.x - origin.x, pb.y - origin.y);
            cmp_clockwise_from_north(&da, &db)
        });
        *ns = around;
    }

    let comps = components_of(&rot);
    let mut outer = Vec::new();
    for comp in &comps {
        outer.push(geometric_outer_dart(&rot, &coords, comp)?);
    }
    // extreme outer terminals of the original drawing
    let faces = trace_faces(&rot);
    let outer_vertices: BTreeSet<VertexId> = outer
        .iter()
        .map(|d| faces.iter().find(|f| f.contains(d)).expect("outer dart"))
        .flat_map(|f| f.iter().flat_map(|&(a, b)| [a, b]))
        .collect();
    let arcs: BTreeSet<Arc> = f.digraph().arcs().collect();
    let vs: BTreeSet<VertexId> = f.digraph().vertices().collect();
    let by_pos = |vset: Vec<VertexId>, want_max: bool| -> Option<VertexId> {
        vset.into_iter().max_by(|&a, &b| {
            let (pa, pb) = (&coords[&a], &coords[&b]);
            let o = pa.y.cmp(&pb.y).then(pa.x.cmp(&pb.x)).then(a.cmp(&b));
            if want_max {
                o
            } else {
                o.reverse()
            }
        })
    };
    let outer_sinks: Vec<VertexId> = sinks_of(&arcs, &vs)
        .into_iter()
        .filter(|v| outer_vertices.contains(v))
        .collect();
    let with_in: BTreeSet<VertexId> = arcs.iter().map(|&(_, v)| v).collect();
    let outer_sources: Vec<VertexId> = vs
        .iter()
        .copied()
        .filter(|v| !with_in.contains(v) && outer_vertices.contains(v))
        .collect();
    let t1 = by_pos(outer_sinks, true)
        .ok_or_else(|| Error::InternalInvariant("no sink on the outer face".into()))?;
    let s1 = by_pos(outer_sources, false)
        .ok_or_else(|| Error::InternalInvariant("no source on the outer face".into()))?;

    let mut state = AugState {
        original: arcs.iter().copied().collect(),
        rot,
        arcs,
        added: Vec::new(),
        coords,
        outer,
        top: t1,
        bottom: s1,
    };
    state.fan_outer_sinks()?;
    state.cancel_interior_sinks()?;
    state.mirror();
    state.fan_outer_sinks()?;
    state.cancel_interior_sinks()?;
    state.mirror();

    let (ok, violating) = {
        let dg = DiGraph::from_arcs(state.arcs.iter().copied())?;
        is_k_flow(&dg, 1)
    };
    if !ok {
        return Err(Error::InternalInvariant(format!(
            "augmentation broke the 1-flow property at {violating:?}"
        )));
    }
    if state.outer.len() != 1 {
        return Err(Error::InternalInvariant(
            "augmentation left the graph disconnected".into(),
        ));
    }
    let d = StDigraph::from_embedding(state.rot, state.arcs, s1, t1, state.outer[0])?;
    Ok((d, state.added))
}

/// The square of a planar 1-flow network together with a bar layout that
/// weakly realizes it at visibility level 1.
pub fn flow_square_to_web1(f: &FlowNetwork) -> Result<(Graph, BarLayout)> {
    let (d, _) = st_augment_1flow(f)?;
    let (layout, _) = tt_bar_layout(&d)?;
    let square = square_of_digraph(f.digraph());
    Ok((square, layout))
}

/// Statistics reported by the grid counterexample generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridStats {
    pub n: usize,
    pub square_edges: usize,
    /// Out-degree in the square over vertices at distance >= 2 from the
    /// upper boundary.
    pub interior_out_degree_histogram: BTreeMap<usize, usize>,
    pub web1_bound: i64,
    pub exceeds_web1_bound: bool,
}

/// Rotated m x m grid, upward oriented, with the cell diagonals present
/// only in alternate rows; a planar 2-flow network whose square eventually
/// exceeds the edge bound of weak bar 1-visibility graphs.
pub fn grid_2flow_counterexample(m: u32) -> Result<(FlowNetwork, GridStats)> {
    if m < 3 {
        return Err(Error::InvalidGraph(format!("grid side {m} is below 3")));
    }
    let id = |a: u32, b: u32| -> VertexId { (a - 1) * m + (b - 1) };
    let mut dg = DiGraph::with_vertices(0..m * m);
    let mut coords = BTreeMap::new();
    for a in 1..=m {
        for b in 1..=m {
            coords.insert(
                id(a, b),
                Point::new(
                    Rational::from_integer(b as i64 - a as i64),
                    Rational::from_integer((a + b) as i64),
                ),
            );
            if a < m {
                dg.insert_arc(id(a, b), id(a + 1, b))?;
            }
            if b < m {
                dg.insert_arc(id(a, b), id(a, b + 1))?;
            }
            if a % 2 == 1 && a < m && b < m {
                dg.insert_arc(id(a, b), id(a + 1, b + 1))?;
            }
        }
    }
    let f = FlowNetwork::new(dg, coords, 2)?;
    let square = square_of_digraph(f.digraph());
    // out-degree of v in the square: neighbors reached by 1- or 2-arc paths
    let mut histogram: BTreeMap<usize, usize> = BTreeMap::new();
    for a in 1..=m - 2 {
        for b in 1..=m - 2 {
            let v = id(a, b);
            let mut reach: BTreeSet<VertexId> = BTreeSet::new();
            for w in f.digraph().out_neighbors(v) {
                reach.insert(w);
                for z in f.digraph().out_neighbors(w) {
                    reach.insert(z);
                }
            }
            reach.remove(&v);
            *histogram.entry(reach.len()).or_insert(0) += 1;
        }
    }
    let n = (m * m) as usize;
    let web1_bound = 6 * n as i64 - 20;
    let stats = GridStats {
        n,
        square_edges: square.m(),
        interior_out_degree_histogram: histogram,
        web1_bound,
        exceeds_web1_bound: (square.m() as i64) > web1_bound,
    };
    Ok((f, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::barlayout::realizes_weakly;

    fn pt(x: i64, y: i64) -> Point<Rational> {
        Point::new(Rational::from_integer(x), Rational::from_integer(y))
    }

    #[test]
    fn flow_bound_examples() {
        let star = DiGraph::from_arcs([(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(is_k_flow(&star, 1).0);
        let two_two = DiGraph::from_arcs([(0, 2), (1, 2), (2, 3), (2, 4)]).unwrap();
        let (ok, bad) = is_k_flow(&two_two, 1);
        assert!(!ok);
        assert_eq!(bad, vec![2]);
        assert!(is_k_flow(&two_two, 2).0);
    }

    #[test]
    fn augment_is_identity_on_st_digraph() {
        // diamond drawn upward
        let dg = DiGraph::from_arcs([(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let coords = BTreeMap::from([
            (0, pt(0, 0)),
            (1, pt(-1, 1)),
            (2, pt(1, 1)),
            (3, pt(0, 2)),
        ]);
        let f = FlowNetwork::new(dg, coords, 1).unwrap();
        let (d, added) = st_augment_1flow(&f).unwrap();
        assert!(added.is_empty());
        assert_eq!(d.s(), 0);
        assert_eq!(d.t(), 3);
        assert_eq!(d.arc_set().len(), 4);
    }

    #[test]
    fn augment_joins_two_disjoint_arcs() {
        let dg = DiGraph::from_arcs([(0, 1), (2, 3)]).unwrap();
        let coords = BTreeMap::from([
            (0, pt(0, 0)),
            (1, pt(0, 2)),
            (2, pt(5, 0)),
            (3, pt(5, 2)),
        ]);
        let f = FlowNetwork::new(dg, coords, 1).unwrap();
        let (d, added) = st_augment_1flow(&f).unwrap();
        assert_eq!(added.len(), 2, "one sink fan and one source fan");
        let dg2 = d.digraph();
        assert!(is_k_flow(&dg2, 1).0);
        for a in f.digraph().arcs() {
            assert!(d.arc_set().contains(&a), "input arc {a:?} preserved");
        }
    }

    #[test]
    fn augment_cancels_interior_sink() {
        // diamond with a pendant sink inside
        let dg = DiGraph::from_arcs([(0, 1), (0, 2), (1, 3), (2, 3), (0, 4)]).unwrap();
        let coords = BTreeMap::from([
            (0, pt(0, 0)),
            (1, pt(-2, 2)),
            (2, pt(2, 2)),
            (3, pt(0, 4)),
            (4, pt(0, 2)),
        ]);
        let f = FlowNetwork::new(dg, coords, 1).unwrap();
        let (d, added) = st_augment_1flow(&f).unwrap();
        assert_eq!(added, vec![(4, 3)], "one ray-shot arc to the apex");
        assert!(is_k_flow(&d.digraph(), 1).0);
        assert_eq!(d.s(), 0);
        assert_eq!(d.t(), 3);
    }

    #[test]
    fn flow_square_on_path() {
        let dg = DiGraph::from_arcs([(0, 1), (1, 2)]).unwrap();
        let coords = BTreeMap::from([(0, pt(0, 0)), (1, pt(0, 1)), (2, pt(0, 2))]);
        let f = FlowNetwork::new(dg, coords, 1).unwrap();
        let (square, layout) = flow_square_to_web1(&f).unwrap();
        assert!(square.has_edge(0, 2));
        assert!(realizes_weakly(&layout, &square, 1).unwrap().0);
    }

    #[test]
    fn flow_square_on_cross_oriented_c4() {
        let dg = DiGraph::from_arcs([(0, 1), (0, 3), (2, 1), (2, 3)]).unwrap();
        let coords = BTreeMap::from([
            (0, pt(0, 0)),
            (1, pt(-1, 2)),
            (2, pt(0, 1)),
            (3, pt(1, 2)),
        ]);
        let f = FlowNetwork::new(dg, coords, 1).unwrap();
        let (square, layout) = flow_square_to_web1(&f).unwrap();
        assert_eq!(square, f.digraph().underlying());
        assert!(realizes_weakly(&layout, &square, 0).unwrap().0);
    }

    #[test]
    fn bar_containment_at_unique_in_arc_vertices() {
        let dg = DiGraph::from_arcs([(0, 1), (1, 2), (1, 3), (3, 4), (2, 4)]).unwrap();
        let coords = BTreeMap::from([
            (0, pt(0, 0)),
            (1, pt(0, 1)),
            (2, pt(-1, 2)),
            (3, pt(1, 2)),
            (4, pt(0, 3)),
        ]);
        let f = FlowNetwork::new(dg, coords, 1).unwrap();
        let (d, _) = st_augment_1flow(&f).unwrap();
        let (layout, _) = tt_bar_layout(&d).unwrap();
        for v in d.vertices() {
            let ins: Vec<VertexId> = d
                .arc_set()
                .iter()
                .filter(|&&(_, w)| w == v)
                .map(|&(u, _)| u)
                .collect();
            if ins.len() == 1 {
                let (bu, bv) = (
                    layout.bar(ins[0]).unwrap(),
                    layout.bar(v).unwrap(),
                );
                assert!(
                    bu.x_left <= bv.x_left && bv.x_right <= bu.x_right,
                    "bar of {v} not inside bar of its only in-neighbor {}",
                    ins[0]
                );
            }
        }
    }

    #[test]
    fn grid_small_cases() {
        assert!(grid_2flow_counterexample(2).is_err());
        let (f, stats) = grid_2flow_counterexample(6).unwrap();
        assert!(is_k_flow(f.digraph(), 2).0);
        assert!(!is_k_flow(f.digraph(), 1).0);
        assert_eq!(
            stats.interior_out_degree_histogram,
            BTreeMap::from([(6, 8), (7, 8)])
        );
        assert!(!stats.exceeds_web1_bound, "m=6 is below the threshold");
    }
}

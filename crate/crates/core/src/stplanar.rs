//! Planar st-digraphs: st-orientation, dual topological numberings, and
//! visibility bar layouts, including the constrained variant that aligns
//! the visibility segments of prescribed arc-disjoint paths.

use crate::barlayout::{Bar, BarLayout};
use crate::graph::{DiGraph, Graph};
use crate::planarity::{is_biconnected, trace_faces, Dart, OuterRef, PlanarEmbedding};
use crate::{edge, Arc, Error, Rational, Result, VertexId};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// Face index. 0 is the left outer region (dual source), 1 the right outer
/// region (dual sink), 2.. the internal faces.
pub type FaceId = usize;

pub const OUTER_LEFT: FaceId = 0;
pub const OUTER_RIGHT: FaceId = 1;

/// Optimal (longest-path) topological numberings of a planar st-digraph and
/// its dual.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Numberings {
    pub vertex_num: BTreeMap<VertexId, u32>,
    pub face_num: BTreeMap<FaceId, u32>,
}

/// Dual of a planar st-digraph: one node per face, one arc per primal arc
/// crossing it from its left face to its right face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualDigraph {
    pub face_count: usize,
    pub arcs: BTreeSet<(FaceId, FaceId)>,
    pub source: FaceId,
    pub sink: FaceId,
}

impl DualDigraph {
    pub fn has_path(&self, from: FaceId, to: FaceId) -> bool {
        if from == to {
            return true;
        }
        let mut seen = BTreeSet::from([from]);
        let mut queue = VecDeque::from([from]);
        while let Some(f) = queue.pop_front() {
            for &(a, b) in self.arcs.range((f, 0)..(f + 1, 0)) {
                debug_assert_eq!(a, f);
                if b == to {
                    return true;
                }
                if seen.insert(b) {
                    queue.push_back(b);
                }
            }
        }
        false
    }
}

/// Embedded planar acyclic digraph with a unique source and sink on the
/// outer face.
#[derive(Debug, Clone)]
pub struct StDigraph {
    rotations: BTreeMap<VertexId, Vec<VertexId>>,
    arcs: BTreeSet<Arc>,
    s: VertexId,
    t: VertexId,
    faces: Vec<Vec<Dart>>,
    dart_face: BTreeMap<Dart, FaceId>,
    vertex_left: BTreeMap<VertexId, FaceId>,
    vertex_right: BTreeMap<VertexId, FaceId>,
    numbers: Numberings,
}

/// Longest-path layering of a DAG given as adjacency over 0..n; `None` when
/// cyclic.
fn longest_path_layers(n: usize, arcs: &BTreeSet<(usize, usize)>) -> Option<Vec<u32>> {
    let mut indeg = vec![0usize; n];
    for &(_, b) in arcs {
        indeg[b] += 1;
    }
    let mut ready: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut level = vec![0u32; n];
    let mut emitted = 0;
    while let Some(v) = ready.pop_front() {
        emitted += 1;
        for &(a, b) in arcs.range((v, 0)..(v + 1, 0)) {
            debug_assert_eq!(a, v);
            level[b] = level[b].max(level[v] + 1);
            indeg[b] -= 1;
            if indeg[b] == 0 {
                ready.push_back(b);
            }
        }
    }
    (emitted == n).then_some(level)
}

impl StDigraph {
    /// Builds and validates an st-digraph from clockwise rotations, an arc
    /// set orienting every rotation edge, the designated source and sink,
    /// and a dart known to lie on the outer face.
    pub fn from_embedding(
        rotations: BTreeMap<VertexId, Vec<VertexId>>,
        arcs: BTreeSet<Arc>,
        s: VertexId,
        t: VertexId,
        outer_dart: Dart,
    ) -> Result<Self> {
        // arcs must orient exactly the rotation edges
        let mut undirected: BTreeSet<(VertexId, VertexId)> = BTreeSet::new();
        for (&v, ns) in &rotations {
            for &u in ns {
                undirected.insert(edge(v, u));
            }
        }
        let oriented: BTreeSet<(VertexId, VertexId)> =
            arcs.iter().map(|&(u, v)| edge(u, v)).collect();
        if undirected != oriented || undirected.len() != arcs.len() {
            return Err(Error::InvalidEmbedding(
                "arc set does not orient the embedding's edges".into(),
            ));
        }
        if arcs.is_empty() {
            return Err(Error::InvalidEmbedding("need at least one arc".into()));
        }

        let dg = DiGraph::from_arcs(arcs.iter().copied())?;
        if !dg.is_acyclic() {
            return Err(Error::InvalidEmbedding("orientation has a cycle".into()));
        }
        if dg.sources() != vec![s] {
            return Err(Error::InvalidEmbedding(format!(
                "sources are {:?}, expected [{s}]",
                dg.sources()
            )));
        }
        if dg.sinks() != vec![t] {
            return Err(Error::InvalidEmbedding(format!(
                "sinks are {:?}, expected [{t}]",
                dg.sinks()
            )));
        }

        // face structure
        let traced = trace_faces(&rotations);
        let outer_idx = traced
            .iter()
            .position(|f| f.contains(&outer_dart))
            .ok_or_else(|| Error::InvalidEmbedding("outer dart not found".into()))?;
        let outer = traced[outer_idx].clone();

        // split the outer walk at the unique occurrences of s and t
        let s_pos: Vec<usize> = outer
            .iter()
            .enumerate()
            .filter_map(|(i, &(a, _))| (a == s).then_some(i))
            .collect();
        let t_pos: Vec<usize> = outer
            .iter()
            .enumerate()
            .filter_map(|(i, &(a, _))| (a == t).then_some(i))
            .collect();
        if s_pos.len() != 1 {
            return Err(Error::NotOnOuterFace(s));
        }
        if t_pos.len() != 1 {
            return Err(Error::NotOnOuterFace(t));
        }
        let k = outer.len();
        let (si, ti) = (s_pos[0], t_pos[0]);
        let mut left_chain = Vec::new();
        let mut i = si;
        while i != ti {
            left_chain.push(outer[i]);
            i = (i + 1) % k;
        }
        let mut right_chain = Vec::new();
        while i != si {
            right_chain.push(outer[i]);
            i = (i + 1) % k;
        }
        for &(u, v) in &left_chain {
            if !arcs.contains(&(u, v)) {
                return Err(Error::InvalidEmbedding(format!(
                    "outer left boundary dart ({u},{v}) runs against its arc"
                )));
            }
        }
        for &(u, v) in &right_chain {
            if !arcs.contains(&(v, u)) {
                return Err(Error::InvalidEmbedding(format!(
                    "outer right boundary dart ({u},{v}) runs along its arc"
                )));
            }
        }

        let mut faces: Vec<Vec<Dart>> = vec![left_chain, right_chain];
        for (i, f) in traced.iter().enumerate() {
            if i != outer_idx {
                faces.push(f.clone());
            }
        }
        let mut dart_face: BTreeMap<Dart, FaceId> = BTreeMap::new();
        for (fi, f) in faces.iter().enumerate() {
            for &d in f {
                dart_face.insert(d, fi);
            }
        }

        // internal faces are two directed paths: direction changes == 2
        for f in &faces[2..] {
            let dirs: Vec<bool> = f.iter().map(|&(u, v)| arcs.contains(&(u, v))).collect();
            let changes = (0..dirs.len())
                .filter(|&i| dirs[i] != dirs[(i + 1) % dirs.len()])
                .count();
            if changes != 2 {
                return Err(Error::InvalidEmbedding(format!(
                    "internal face {f:?} is not two directed paths"
                )));
            }
        }

        // separating faces per vertex; requires in/out blocks consecutive
        let mut vertex_left = BTreeMap::new();
        let mut vertex_right = BTreeMap::new();
        for (&v, ns) in &rotations {
            if v == s || v == t {
                vertex_left.insert(v, OUTER_LEFT);
                vertex_right.insert(v, OUTER_RIGHT);
                continue;
            }
            let incoming: Vec<bool> = ns.iter().map(|&u| arcs.contains(&(u, v))).collect();
            let deg = ns.len();
            let changes = (0..deg)
                .filter(|&i| incoming[i] != incoming[(i + 1) % deg])
                .count();
            if changes != 2 {
                return Err(Error::InvalidEmbedding(format!(
                    "vertex {v} is not bimodal"
                )));
            }
            for i in 0..deg {
                let j = (i + 1) % deg;
                if incoming[i] && !incoming[j] {
                    vertex_left.insert(v, dart_face[&(v, ns[j])]);
                }
                if !incoming[i] && incoming[j] {
                    vertex_right.insert(v, dart_face[&(v, ns[j])]);
                }
            }
        }

        // dual arcs and numberings
        let mut dual_arcs: BTreeSet<(FaceId, FaceId)> = BTreeSet::new();
        for &(u, v) in &arcs {
            dual_arcs.insert((dart_face[&(u, v)], dart_face[&(v, u)]));
        }
        let face_levels = longest_path_layers(faces.len(), &dual_arcs)
            .ok_or_else(|| Error::InvalidEmbedding("dual is cyclic".into()))?;
        let vertex_ids: Vec<VertexId> = rotations.keys().copied().collect();
        let vidx: BTreeMap<VertexId, usize> = vertex_ids
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect();
        let varcs: BTreeSet<(usize, usize)> =
            arcs.iter().map(|&(u, v)| (vidx[&u], vidx[&v])).collect();
        let vlevels = longest_path_layers(vertex_ids.len(), &varcs)
            .ok_or_else(|| Error::InternalInvariant("acyclic digraph failed layering".into()))?;

        let numbers = Numberings {
            vertex_num: vertex_ids
                .iter()
                .map(|&v| (v, vlevels[vidx[&v]]))
                .collect(),
            face_num: (0..faces.len()).map(|f| (f, face_levels[f])).collect(),
        };

        Ok(StDigraph {
            rotations,
            arcs,
            s,
            t,
            faces,
            dart_face,
            vertex_left,
            vertex_right,
            numbers,
        })
    }

    pub fn s(&self) -> VertexId {
        self.s
    }

    pub fn t(&self) -> VertexId {
        self.t
    }

    pub fn rotations(&self) -> &BTreeMap<VertexId, Vec<VertexId>> {
        &self.rotations
    }

    pub fn arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        self.arcs.iter().copied()
    }

    pub fn arc_set(&self) -> &BTreeSet<Arc> {
        &self.arcs
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.rotations.keys().copied()
    }

    pub fn n(&self) -> usize {
        self.rotations.len()
    }

    pub fn digraph(&self) -> DiGraph {
        let mut g = DiGraph::with_vertices(self.vertices());
        for (u, v) in self.arcs() {
            g.insert_arc(u, v).expect("validated");
        }
        g
    }

    pub fn underlying_graph(&self) -> Graph {
        self.digraph().underlying()
    }

    pub fn faces(&self) -> &[Vec<Dart>] {
        &self.faces
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn left_face_of_vertex(&self, v: VertexId) -> FaceId {
        self.vertex_left[&v]
    }

    pub fn right_face_of_vertex(&self, v: VertexId) -> FaceId {
        self.vertex_right[&v]
    }

    pub fn left_face_of_arc(&self, a: Arc) -> FaceId {
        self.dart_face[&a]
    }

    pub fn right_face_of_arc(&self, a: Arc) -> FaceId {
        self.dart_face[&(a.1, a.0)]
    }

    pub fn numberings(&self) -> &Numberings {
        &self.numbers
    }

    /// The dual st-digraph over faces and the optimal numberings of both.
    pub fn dual_with_numberings(&self) -> (DualDigraph, Numberings) {
        let mut dual_arcs = BTreeSet::new();
        for &a in &self.arcs {
            dual_arcs.insert((self.left_face_of_arc(a), self.right_face_of_arc(a)));
        }
        (
            DualDigraph {
                face_count: self.faces.len(),
                arcs: dual_arcs,
                source: OUTER_LEFT,
                sink: OUTER_RIGHT,
            },
            self.numbers.clone(),
        )
    }

    /// Directed reachability in the primal.
    pub fn has_path(&self, from: VertexId, to: VertexId) -> bool {
        if from == to {
            return true;
        }
        let mut seen = BTreeSet::from([from]);
        let mut queue = VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            for &(a, b) in self.arcs.range((v, VertexId::MIN)..=(v, VertexId::MAX)) {
                debug_assert_eq!(a, v);
                if b == to {
                    return true;
                }
                if seen.insert(b) {
                    queue.push_back(b);
                }
            }
        }
        false
    }
}

/// st-ordering of a biconnected graph via DFS chain decomposition: the first
/// ear is a cycle through (s,t) (a virtual edge when absent), later ears are
/// open paths inserted between their endpoints.
pub(crate) fn st_order(g: &Graph, s: VertexId, t: VertexId) -> Result<Vec<VertexId>> {
    let n = g.n();
    if n == 2 {
        return Ok(vec![s, t]);
    }
    let mut adj = g.adjacency();
    if !g.has_edge(s, t) {
        adj.get_mut(&s).unwrap().push(t);
        adj.get_mut(&t).unwrap().push(s);
    }
    // force (s,t) to be the first tree edge
    {
        let ns = adj.get_mut(&s).unwrap();
        let i = ns.iter().position(|&w| w == t).unwrap();
        ns.swap(0, i);
    }

    // iterative DFS: preorder, parent, discovery index
    let mut disc: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut parent: BTreeMap<VertexId, Option<VertexId>> = BTreeMap::new();
    let mut preorder: Vec<VertexId> = Vec::new();
    let mut stack: Vec<(VertexId, usize)> = vec![(s, 0)];
    disc.insert(s, 0);
    parent.insert(s, None);
    preorder.push(s);
    while let Some(&mut (v, ref mut idx)) = stack.last_mut() {
        let ns = &adj[&v];
        if *idx < ns.len() {
            let w = ns[*idx];
            *idx += 1;
            if !disc.contains_key(&w) {
                disc.insert(w, preorder.len());
                parent.insert(w, Some(v));
                preorder.push(w);
                stack.push((w, 0));
            }
        } else {
            stack.pop();
        }
    }
    if preorder.len() != n {
        return Err(Error::Disconnected);
    }

    // chains
    let mut order: Vec<VertexId> = vec![s];
    let mut marked: BTreeSet<VertexId> = BTreeSet::from([s]);
    let mut first_chain = true;
    for &v in &preorder {
        for &w in &adj[&v] {
            // back edge (w -> v): w strictly deeper, not the tree edge
            if disc[&w] <= disc[&v] || parent[&w] == Some(v) {
                continue;
            }
            if !marked.contains(&v) {
                return Err(Error::InternalInvariant(format!(
                    "chain decomposition reached unmarked ancestor {v}"
                )));
            }
            // walk up from w to the first marked vertex
            let mut internal = Vec::new();
            let mut cur = w;
            while !marked.contains(&cur) {
                marked.insert(cur);
                internal.push(cur);
                cur = parent[&cur].ok_or_else(|| {
                    Error::InternalInvariant("chain walked past the root".into())
                })?;
            }
            let stop = cur;
            if internal.is_empty() {
                continue; // chord between marked vertices
            }
            if first_chain {
                // cycle s .. t: internal = [w, .., t], stop == s
                if stop != s || *internal.last().unwrap() != t {
                    return Err(Error::InternalInvariant(
                        "first chain is not the (s,t) cycle".into(),
                    ));
                }
                order.extend(internal.iter().copied());
                first_chain = false;
                continue;
            }
            let pos: BTreeMap<VertexId, usize> =
                order.iter().enumerate().map(|(i, &x)| (x, i)).collect();
            let (pv, pw) = (pos[&v], pos[&stop]);
            if pv < pw {
                // insert after v in path order v -> w -> ... -> stop
                let at = pv + 1;
                for (off, &x) in internal.iter().enumerate() {
                    order.insert(at + off, x);
                }
            } else {
                // insert after stop in reversed order
                let at = pw + 1;
                for (off, &x) in internal.iter().rev().enumerate() {
                    order.insert(at + off, x);
                }
            }
        }
    }
    if order.len() != n {
        return Err(Error::InternalInvariant(
            "chain decomposition did not cover all vertices".into(),
        ));
    }
    // st property with respect to the real edges
    let pos: BTreeMap<VertexId, usize> = order.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    for &v in g.vertex_set() {
        if v == s || v == t {
            continue;
        }
        let ns = g.neighbors(v);
        if !ns.iter().any(|&w| pos[&w] < pos[&v]) || !ns.iter().any(|&w| pos[&w] > pos[&v]) {
            return Err(Error::InternalInvariant(format!(
                "vertex {v} lacks a smaller or larger neighbor in the st-order"
            )));
        }
    }
    Ok(order)
}

/// Orients a biconnected planar embedding into an st-digraph with the given
/// source and sink, both of which must lie on the outer face.
pub fn st_orient(e: &PlanarEmbedding, s: VertexId, t: VertexId) -> Result<StDigraph> {
    let g = e.graph();
    if s == t || !g.vertex_set().contains(&s) || !g.vertex_set().contains(&t) {
        return Err(Error::InvalidGraph(format!("bad terminals {s},{t}")));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if !is_biconnected(&g) {
        let (_, cuts) = crate::planarity::blocks(&g);
        return Err(Error::NotBiconnected(
            cuts.into_iter().next().unwrap_or(s),
        ));
    }
    let outer = e.outer_walk();
    let on_outer = |v: VertexId| outer.iter().any(|&(a, b)| a == v || b == v);
    if !on_outer(s) {
        return Err(Error::NotOnOuterFace(s));
    }
    if !on_outer(t) {
        return Err(Error::NotOnOuterFace(t));
    }
    let order = st_order(&g, s, t)?;
    let pos: BTreeMap<VertexId, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let arcs: BTreeSet<Arc> = g
        .edges()
        .map(|(u, v)| if pos[&u] < pos[&v] { (u, v) } else { (v, u) })
        .collect();
    let outer_dart = match e.outer_refs()[0] {
        OuterRef::Dart(d) => d,
        OuterRef::Isolated(v) => return Err(Error::NotOnOuterFace(v)),
    };
    StDigraph::from_embedding(e.rotations().clone(), arcs, s, t, outer_dart)
}

fn rat(i: i64) -> Rational {
    Rational::from_integer(i)
}

/// Visibility strip of an arc in a doubled-coordinate layout.
pub type Strip = (Rational, Rational);

/// Bar layout of an st-digraph: vertex v becomes a bar at height psi(v)
/// spanning x in [2 chi(left(v)), 2 chi(right(v)) - 1]; every arc gets a
/// positive-width visibility strip.
pub fn tt_bar_layout(d: &StDigraph) -> Result<(BarLayout, BTreeMap<Arc, Strip>)> {
    let nums = d.numberings();
    let mut bars = Vec::new();
    for v in d.vertices() {
        let y = nums.vertex_num[&v] as i64;
        let xl = 2 * nums.face_num[&d.left_face_of_vertex(v)] as i64;
        let xr = 2 * nums.face_num[&d.right_face_of_vertex(v)] as i64 - 1;
        bars.push(Bar::new(v, rat(y), rat(xl), rat(xr)));
    }
    let layout = BarLayout::new(bars)?;
    let mut strips = BTreeMap::new();
    for a in d.arcs() {
        let xl = 2 * nums.face_num[&d.left_face_of_arc(a)] as i64;
        let xr = 2 * nums.face_num[&d.right_face_of_arc(a)] as i64 - 1;
        strips.insert(a, (rat(xl), rat(xr)));
    }
    Ok((layout, strips))
}

/// A family of directed paths given as vertex sequences.
pub type PathFamily = Vec<Vec<VertexId>>;

fn validate_paths(d: &StDigraph, paths: &PathFamily) -> Result<()> {
    let mut used: BTreeMap<Arc, usize> = BTreeMap::new();
    for (pi, p) in paths.iter().enumerate() {
        if p.len() < 2 {
            return Err(Error::InvalidGraph(format!("path {pi} is too short")));
        }
        for w in p.windows(2) {
            let a = (w[0], w[1]);
            if !d.arc_set().contains(&a) {
                return Err(Error::InvalidGraph(format!(
                    "path {pi} uses missing arc {a:?}"
                )));
            }
            if let Some(&other) = used.get(&a) {
                return Err(Error::IntersectingPaths(
                    other,
                    pi,
                    format!("arc {a:?} used twice"),
                ));
            }
            used.insert(a, pi);
        }
    }
    // non-crossing at shared through-vertices
    let through: Vec<BTreeMap<VertexId, (VertexId, VertexId)>> = paths
        .iter()
        .map(|p| {
            p.windows(3)
                .map(|w| (w[1], (w[0], w[2])))
                .collect::<BTreeMap<_, _>>()
        })
        .collect();
    for i in 0..paths.len() {
        for j in i + 1..paths.len() {
            for (&v, &(ai, bi)) in &through[i] {
                if let Some(&(aj, bj)) = through[j].get(&v) {
                    let rot = &d.rotations()[&v];
                    let posn = |x: VertexId| rot.iter().position(|&w| w == x).unwrap();
                    let (p1, p2) = (posn(ai), posn(bi));
                    let (q1, q2) = (posn(aj), posn(bj));
                    // does {q1,q2} separate {p1,p2} on the rotation cycle?
                    let between = |a: usize, b: usize, x: usize| {
                        if a <= b {
                            a < x && x < b
                        } else {
                            x > a || x < b
                        }
                    };
                    let sep = between(p1, p2, q1) != between(p1, p2, q2);
                    if sep {
                        return Err(Error::IntersectingPaths(
                            i,
                            j,
                            format!("paths cross at vertex {v}"),
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Bar layout in which, for each given path, all its arcs' visibility
/// segments share a single x-coordinate. Returns the layout and the common
/// x per path.
///
/// Strategy: intersect the plain layout's strips per path and take the
/// leftmost interior half-integer when every intersection has positive
/// width; otherwise fall back to a joint numbering of faces and paths
/// (nodes = faces and maximal paths; face -> path when the face is left of
/// one of its arcs, path -> face when right) which assigns one x per path.
pub fn aligned_bar_layout(
    d: &StDigraph,
    paths: &PathFamily,
) -> Result<(BarLayout, Vec<Rational>)> {
    validate_paths(d, paths)?;
    let (plain, strips) = tt_bar_layout(d)?;
    if paths.is_empty() {
        return Ok((plain, Vec::new()));
    }

    // cheap branch: per-path strip intersection
    let mut xs = Vec::new();
    let mut cheap_ok = true;
    for p in paths {
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        for w in p.windows(2) {
            let (l, r) = strips[&(w[0], w[1])];
            lo = Some(lo.map_or(l, |x: Rational| x.max(l)));
            hi = Some(hi.map_or(r, |x: Rational| x.min(r)));
        }
        let (lo, hi) = (lo.unwrap(), hi.unwrap());
        if lo < hi {
            xs.push(lo + Rational::new(1, 2));
        } else {
            cheap_ok = false;
            break;
        }
    }
    if cheap_ok {
        return Ok((plain, xs));
    }

    // general branch: joint face/path numbering
    let mut path_of_arc: BTreeMap<Arc, usize> = BTreeMap::new();
    let mut all_paths: Vec<Vec<VertexId>> = paths.clone();
    for (pi, p) in paths.iter().enumerate() {
        for w in p.windows(2) {
            path_of_arc.insert((w[0], w[1]), pi);
        }
    }
    for a in d.arcs() {
        if !path_of_arc.contains_key(&a) {
            path_of_arc.insert(a, all_paths.len());
            all_paths.push(vec![a.0, a.1]);
        }
    }
    let nf = d.face_count();
    let node_count = nf + all_paths.len();
    let mut aux: BTreeSet<(usize, usize)> = BTreeSet::new();
    for a in d.arcs() {
        let p = nf + path_of_arc[&a];
        aux.insert((d.left_face_of_arc(a), p));
        aux.insert((p, d.right_face_of_arc(a)));
    }
    let levels = longest_path_layers(node_count, &aux)
        .ok_or_else(|| Error::InternalInvariant("face/path numbering is cyclic".into()))?;

    let nums = d.numberings();
    let mut bars = Vec::new();
    for v in d.vertices() {
        let y = nums.vertex_num[&v] as i64;
        let xl = 2 * levels[d.left_face_of_vertex(v)] as i64;
        let xr = 2 * levels[d.right_face_of_vertex(v)] as i64 - 1;
        bars.push(Bar::new(v, rat(y), rat(xl), rat(xr)));
    }
    let layout = BarLayout::new(bars)?;
    let xs = (0..paths.len())
        .map(|pi| rat(2 * levels[nf + pi] as i64))
        .collect();
    Ok((layout, xs))
}

/// True when the arc (u,v) is realized by a positive-width sight rectangle
/// whose x-extent contains `x`, crossing no other bar.
pub fn arc_visible_at(layout: &BarLayout, u: VertexId, v: VertexId, x: &Rational) -> bool {
    let (Some(bu), Some(bv)) = (layout.bar(u), layout.bar(v)) else {
        return false;
    };
    if bu.y == bv.y {
        return false;
    }
    let lo = bu.x_left.max(bv.x_left);
    let hi = bu.x_right.min(bv.x_right);
    if *x < lo || *x > hi {
        return false;
    }
    let (ylo, yhi) = if bu.y < bv.y {
        (&bu.y, &bv.y)
    } else {
        (&bv.y, &bu.y)
    };
    let mut left_ok = *x > lo;
    let mut right_ok = *x < hi;
    for b in layout.bars() {
        if b.y <= *ylo || b.y >= *yhi {
            continue;
        }
        if b.x_left < *x && *x < b.x_right {
            return false;
        }
        if b.x_right == *x {
            left_ok = false;
        }
        if b.x_left == *x {
            right_ok = false;
        }
    }
    left_ok || right_ok
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::barlayout::realizes_weakly;
    use crate::planarity::check_planarity;

    /// C4 s(0) - a(1) - t(2) - b(3) embedded with a on the left.
    fn diamond_embedding() -> PlanarEmbedding {
        let rot = BTreeMap::from([
            (0, vec![3, 1]),
            (1, vec![0, 2]),
            (2, vec![1, 3]),
            (3, vec![2, 0]),
        ]);
        PlanarEmbedding::new(rot, vec![OuterRef::Dart((0, 1))]).unwrap()
    }

    #[test]
    fn single_edge_orients_s_to_t() {
        let rot = BTreeMap::from([(0, vec![1]), (1, vec![0])]);
        let e = PlanarEmbedding::new(rot, vec![OuterRef::Dart((0, 1))]).unwrap();
        let d = st_orient(&e, 0, 1).unwrap();
        assert_eq!(d.arcs().collect::<Vec<_>>(), vec![(0, 1)]);
        // dual: single arc, chi = 0, 1
        let (dual, nums) = d.dual_with_numberings();
        assert_eq!(dual.face_count, 2);
        assert_eq!(nums.face_num[&OUTER_LEFT], 0);
        assert_eq!(nums.face_num[&OUTER_RIGHT], 1);
        // two bars with identical x-ranges
        let (layout, _) = tt_bar_layout(&d).unwrap();
        let b0 = layout.bar(0).unwrap();
        let b1 = layout.bar(1).unwrap();
        assert_eq!((b0.x_left, b0.x_right), (b1.x_left, b1.x_right));
        assert!(realizes_weakly(&layout, &d.underlying_graph(), 0).unwrap().0);
    }

    #[test]
    fn diamond_orientation_and_numberings() {
        let e = diamond_embedding();
        let d = st_orient(&e, 0, 2).unwrap();
        let arcs: Vec<Arc> = d.arcs().collect();
        assert_eq!(arcs, vec![(0, 1), (0, 3), (1, 2), (3, 2)]);
        let nums = d.numberings();
        assert_eq!(nums.vertex_num[&0], 0);
        assert_eq!(nums.vertex_num[&1], 1);
        assert_eq!(nums.vertex_num[&3], 1);
        assert_eq!(nums.vertex_num[&2], 2);
        // three dual vertices numbered 0,1,2 left to right
        let (dual, _) = d.dual_with_numberings();
        assert_eq!(dual.face_count, 3);
        assert_eq!(nums.face_num[&OUTER_LEFT], 0);
        assert_eq!(nums.face_num[&2], 1);
        assert_eq!(nums.face_num[&OUTER_RIGHT], 2);
    }

    #[test]
    fn diamond_tt_layout_matches_expected_bars() {
        let e = diamond_embedding();
        let d = st_orient(&e, 0, 2).unwrap();
        let (layout, strips) = tt_bar_layout(&d).unwrap();
        let coords = |v: VertexId| {
            let b = layout.bar(v).unwrap();
            (
                b.y.to_integer(),
                b.x_left.to_integer(),
                b.x_right.to_integer(),
            )
        };
        assert_eq!(coords(0), (0, 0, 3));
        assert_eq!(coords(1), (1, 0, 1));
        assert_eq!(coords(3), (1, 2, 3));
        assert_eq!(coords(2), (2, 0, 3));
        // each strip has positive width and sits in both bars
        for ((u, v), (l, r)) in &strips {
            assert!(l < r);
            for w in [u, v] {
                let b = layout.bar(*w).unwrap();
                assert!(b.x_left <= *l && *r <= b.x_right);
            }
        }
        assert!(realizes_weakly(&layout, &d.underlying_graph(), 0).unwrap().0);
    }

    #[test]
    fn stacked_path_gets_identical_ranges() {
        // a directed path is a valid st-digraph even though it is not
        // biconnected
        let rot = BTreeMap::from([
            (0, vec![1]),
            (1, vec![0, 2]),
            (2, vec![1, 3]),
            (3, vec![2]),
        ]);
        let arcs = BTreeSet::from([(0, 1), (1, 2), (2, 3)]);
        let d = StDigraph::from_embedding(rot, arcs, 0, 3, (0, 1)).unwrap();
        let (layout, _) = tt_bar_layout(&d).unwrap();
        let spans: BTreeSet<(Rational, Rational)> = layout
            .bars()
            .map(|b| (b.x_left, b.x_right))
            .collect();
        assert_eq!(spans.len(), 1);
        assert!(realizes_weakly(&layout, &d.underlying_graph(), 0).unwrap().0);
    }

    #[test]
    fn grid_orients_every_vertex_on_an_st_path() {
        // 3x3 grid, corner to opposite corner
        let mut g = Graph::with_vertices(0..9);
        for r in 0..3u32 {
            for c in 0..3u32 {
                let v = r * 3 + c;
                if c < 2 {
                    g.insert_edge(v, v + 1).unwrap();
                }
                if r < 2 {
                    g.insert_edge(v, v + 3).unwrap();
                }
            }
        }
        let e = check_planarity(&g).embedding().unwrap();
        // corners 0 and 8 both lie on the default outer face of a grid
        let d = st_orient(&e, 0, 8).unwrap();
        assert!(d.digraph().is_acyclic());
        for v in d.vertices() {
            assert!(d.has_path(0, v) && d.has_path(v, 8));
        }
        // psi max equals the longest directed path length of the produced
        // orientation (computed here by exhaustive DFS)
        let nums = d.numberings();
        let max_psi = *nums.vertex_num.values().max().unwrap();
        fn longest_from(d: &StDigraph, v: VertexId) -> u32 {
            d.digraph()
                .out_neighbors(v)
                .iter()
                .map(|&w| 1 + longest_from(d, w))
                .max()
                .unwrap_or(0)
        }
        assert_eq!(max_psi, longest_from(&d, 0));
        // the tt layout realizes the grid at level 0
        let (layout, _) = tt_bar_layout(&d).unwrap();
        assert!(realizes_weakly(&layout, &d.underlying_graph(), 0).unwrap().0);
    }

    #[test]
    fn chi_increases_along_every_arc() {
        let e = diamond_embedding();
        let d = st_orient(&e, 0, 2).unwrap();
        let nums = d.numberings();
        for a in d.arcs() {
            assert!(nums.face_num[&d.left_face_of_arc(a)] < nums.face_num[&d.right_face_of_arc(a)]);
            assert!(nums.vertex_num[&a.0] < nums.vertex_num[&a.1]);
        }
    }

    #[test]
    fn trichotomy_on_diamond() {
        let e = diamond_embedding();
        let d = st_orient(&e, 0, 2).unwrap();
        let (dual, _) = d.dual_with_numberings();
        let vs: Vec<VertexId> = d.vertices().collect();
        for &v in &vs {
            for &w in &vs {
                if v == w {
                    continue;
                }
                let cases = [
                    d.has_path(v, w),
                    d.has_path(w, v),
                    dual.has_path(d.right_face_of_vertex(v), d.left_face_of_vertex(w)),
                    dual.has_path(d.right_face_of_vertex(w), d.left_face_of_vertex(v)),
                ];
                assert_eq!(
                    cases.iter().filter(|&&c| c).count(),
                    1,
                    "trichotomy failed for ({v},{w}): {cases:?}"
                );
            }
        }
    }

    #[test]
    fn aligned_with_empty_family_is_plain() {
        let e = diamond_embedding();
        let d = st_orient(&e, 0, 2).unwrap();
        let (plain, _) = tt_bar_layout(&d).unwrap();
        let (aligned, xs) = aligned_bar_layout(&d, &Vec::new()).unwrap();
        assert_eq!(plain, aligned);
        assert!(xs.is_empty());
    }

    #[test]
    fn aligned_on_diamond_path() {
        let e = diamond_embedding();
        let d = st_orient(&e, 0, 2).unwrap();
        let paths = vec![vec![0, 1, 2]];
        let (layout, xs) = aligned_bar_layout(&d, &paths).unwrap();
        assert_eq!(xs.len(), 1);
        assert!(arc_visible_at(&layout, 0, 1, &xs[0]));
        assert!(arc_visible_at(&layout, 1, 2, &xs[0]));
        assert!(realizes_weakly(&layout, &d.underlying_graph(), 0).unwrap().0);
    }

    #[test]
    fn intersecting_paths_rejected() {
        let e = diamond_embedding();
        let d = st_orient(&e, 0, 2).unwrap();
        // same arc used twice
        let paths = vec![vec![0, 1, 2], vec![0, 1]];
        assert!(matches!(
            aligned_bar_layout(&d, &paths),
            Err(Error::IntersectingPaths(..))
        ));
    }
}

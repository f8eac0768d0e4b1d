//! Rotation-system planar embeddings, planarity testing with Kuratowski
//! certificates, and biconnectivity augmentation inside faces.

use crate::graph::Graph;
use crate::{edge, Edge, Error, Result, VertexId};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// Directed edge side (u, v): the edge {u,v} traversed from u to v.
pub type Dart = (VertexId, VertexId);

/// Reference to a component's outer face.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OuterRef {
    /// Component is a single isolated vertex.
    Isolated(VertexId),
    /// Any dart lying on the component's outer face.
    Dart(Dart),
}

/// Planar embedding given by clockwise rotations plus a designated outer
/// face per connected component.
///
/// Faces are traced with the rule: the dart following (u, v) is (v, w) where
/// w is the neighbor after u in the clockwise rotation at v. Under this rule
/// each face keeps its interior on the left, and the outer face walk runs
/// clockwise around its component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarEmbedding {
    rotations: BTreeMap<VertexId, Vec<VertexId>>,
    outer: Vec<OuterRef>,
}

/// Traces all faces of a rotation system.
pub fn trace_faces(rotations: &BTreeMap<VertexId, Vec<VertexId>>) -> Vec<Vec<Dart>> {
    let mut pos: BTreeMap<Dart, usize> = BTreeMap::new();
    for (&v, ns) in rotations {
        for (i, &u) in ns.iter().enumerate() {
            pos.insert((v, u), i);
        }
    }
    let mut seen: BTreeSet<Dart> = BTreeSet::new();
    let mut faces = Vec::new();
    for (&v, ns) in rotations {
        for &u in ns {
            let start = (v, u);
            if seen.contains(&start) {
                continue;
            }
            let mut walk = Vec::new();
            let mut dart = start;
            loop {
                walk.push(dart);
                seen.insert(dart);
                let (a, b) = dart;
                let rot = &rotations[&b];
                let i = pos[&(b, a)];
                let w = rot[(i + 1) % rot.len()];
                dart = (b, w);
                if dart == start {
                    break;
                }
            }
            faces.push(walk);
        }
    }
    faces
}

fn components(rotations: &BTreeMap<VertexId, Vec<VertexId>>) -> Vec<BTreeSet<VertexId>> {
    let mut unseen: BTreeSet<VertexId> = rotations.keys().copied().collect();
    let mut comps = Vec::new();
    while let Some(&start) = unseen.iter().next() {
        let mut comp = BTreeSet::from([start]);
        unseen.remove(&start);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &w in &rotations[&v] {
                if unseen.remove(&w) {
                    comp.insert(w);
                    queue.push_back(w);
                }
            }
        }
        comps.push(comp);
    }
    comps
}

impl PlanarEmbedding {
    pub fn new(
        rotations: BTreeMap<VertexId, Vec<VertexId>>,
        outer: Vec<OuterRef>,
    ) -> Result<Self> {
        let e = PlanarEmbedding { rotations, outer };
        e.validate()?;
        Ok(e)
    }

    /// Builds an embedding designating the largest face of each component as
    /// its outer face.
    pub fn with_default_outer(rotations: BTreeMap<VertexId, Vec<VertexId>>) -> Result<Self> {
        let faces = trace_faces(&rotations);
        let comps = components(&rotations);
        let mut outer = Vec::new();
        for comp in &comps {
            if comp.len() == 1 && rotations[comp.iter().next().unwrap()].is_empty() {
                outer.push(OuterRef::Isolated(*comp.iter().next().unwrap()));
                continue;
            }
            let best = faces
                .iter()
                .filter(|f| comp.contains(&f[0].0))
                .max_by_key(|f| f.len())
                .ok_or_else(|| Error::InternalInvariant("component without faces".into()))?;
            outer.push(OuterRef::Dart(best[0]));
        }
        PlanarEmbedding::new(rotations, outer)
    }

    fn validate(&self) -> Result<()> {
        for (&v, ns) in &self.rotations {
            let mut set = BTreeSet::new();
            for &u in ns {
                if u == v {
                    return Err(Error::InvalidEmbedding(format!("loop at {v}")));
                }
                if !set.insert(u) {
                    return Err(Error::InvalidEmbedding(format!(
                        "parallel edge ({v},{u}) in rotation"
                    )));
                }
                let back = self
                    .rotations
                    .get(&u)
                    .ok_or_else(|| Error::InvalidEmbedding(format!("unknown vertex {u}")))?;
                if !back.contains(&v) {
                    return Err(Error::InvalidEmbedding(format!(
                        "rotation not symmetric on ({v},{u})"
                    )));
                }
            }
        }
        // Euler per component
        let faces = trace_faces(&self.rotations);
        let comps = components(&self.rotations);
        for comp in &comps {
            let n = comp.len() as i64;
            let m = comp
                .iter()
                .map(|v| self.rotations[v].len() as i64)
                .sum::<i64>()
                / 2;
            let f = if m == 0 {
                1
            } else {
                faces.iter().filter(|fw| comp.contains(&fw[0].0)).count() as i64
            };
            if n - m + f != 2 {
                return Err(Error::InvalidEmbedding(format!(
                    "Euler check failed on a component: n={n} m={m} f={f}"
                )));
            }
        }
        // outer refs: exactly one per component, each valid
        if self.outer.len() != comps.len() {
            return Err(Error::InvalidEmbedding(format!(
                "{} outer faces for {} components",
                self.outer.len(),
                comps.len()
            )));
        }
        let mut covered: BTreeSet<usize> = BTreeSet::new();
        for r in &self.outer {
            let v = match r {
                OuterRef::Isolated(v) => {
                    if !self
                        .rotations
                        .get(v)
                        .map(|ns| ns.is_empty())
                        .unwrap_or(false)
                    {
                        return Err(Error::InvalidEmbedding(format!(
                            "vertex {v} is not isolated"
                        )));
                    }
                    *v
                }
                OuterRef::Dart((u, w)) => {
                    if !self.rotations.get(u).map(|ns| ns.contains(w)).unwrap_or(false) {
                        return Err(Error::InvalidEmbedding(format!(
                            "outer dart ({u},{w}) does not exist"
                        )));
                    }
                    *u
                }
            };
            let ci = comps
                .iter()
                .position(|c| c.contains(&v))
                .ok_or_else(|| Error::InvalidEmbedding(format!("unknown vertex {v}")))?;
            if !covered.insert(ci) {
                return Err(Error::InvalidEmbedding(
                    "two outer faces in one component".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn rotations(&self) -> &BTreeMap<VertexId, Vec<VertexId>> {
        &self.rotations
    }

    pub fn rotation(&self, v: VertexId) -> &[VertexId] {
        &self.rotations[&v]
    }

    pub fn outer_refs(&self) -> &[OuterRef] {
        &self.outer
    }

    pub fn graph(&self) -> Graph {
        let mut g = Graph::with_vertices(self.rotations.keys().copied());
        for (&v, ns) in &self.rotations {
            for &u in ns {
                if v < u {
                    g.insert_edge(v, u).expect("validated rotation");
                }
            }
        }
        g
    }

    pub fn n(&self) -> usize {
        self.rotations.len()
    }

    pub fn m(&self) -> usize {
        self.rotations.values().map(|ns| ns.len()).sum::<usize>() / 2
    }

    pub fn is_connected(&self) -> bool {
        components(&self.rotations).len() <= 1
    }

    pub fn faces(&self) -> Vec<Vec<Dart>> {
        trace_faces(&self.rotations)
    }

    /// Number of faces, counting one face per edgeless component.
    pub fn face_count(&self) -> usize {
        let faces = self.faces();
        let isolated = self
            .rotations
            .values()
            .filter(|ns| ns.is_empty())
            .count();
        faces.len() + isolated
    }

    /// Outer walks, one per component; empty for isolated vertices.
    pub fn outer_walks(&self) -> Vec<Vec<Dart>> {
        let faces = self.faces();
        self.outer
            .iter()
            .map(|r| match r {
                OuterRef::Isolated(_) => Vec::new(),
                OuterRef::Dart(d) => faces
                    .iter()
                    .find(|f| f.contains(d))
                    .expect("validated outer dart")
                    .clone(),
            })
            .collect()
    }

    /// The outer walk of a connected embedding.
    pub fn outer_walk(&self) -> Vec<Dart> {
        self.outer_walks().into_iter().next().unwrap_or_default()
    }

    pub fn is_on_outer_face(&self, v: VertexId) -> bool {
        match self.outer.iter().find(|r| match r {
            OuterRef::Isolated(w) => *w == v,
            _ => false,
        }) {
            Some(_) => true,
            None => self
                .outer_walks()
                .iter()
                .any(|w| w.iter().any(|&(a, b)| a == v || b == v)),
        }
    }
}

/// Outcome of [`check_planarity`].
#[derive(Debug, Clone)]
pub enum PlanarityCheck {
    Planar(PlanarEmbedding),
    /// A subgraph homeomorphic to K5 or K3,3.
    NonPlanar(Graph),
}

impl PlanarityCheck {
    pub fn embedding(self) -> Option<PlanarEmbedding> {
        match self {
            PlanarityCheck::Planar(e) => Some(e),
            PlanarityCheck::NonPlanar(_) => None,
        }
    }

    pub fn is_planar(&self) -> bool {
        matches!(self, PlanarityCheck::Planar(_))
    }
}

/// Cut vertices and biconnected components (as edge lists) of a graph.
pub fn blocks(g: &Graph) -> (Vec<Vec<Edge>>, BTreeSet<VertexId>) {
    let adj = g.adjacency();
    let mut disc: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut low: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut cuts: BTreeSet<VertexId> = BTreeSet::new();
    let mut block_list: Vec<Vec<Edge>> = Vec::new();
    let mut edge_stack: Vec<Edge> = Vec::new();
    let mut timer = 0usize;

    for &root in g.vertex_set() {
        if disc.contains_key(&root) {
            continue;
        }
        // frame: (v, parent, next neighbor index, parent edge skipped)
        let mut stack: Vec<(VertexId, Option<VertexId>, usize, bool)> =
            vec![(root, None, 0, false)];
        disc.insert(root, timer);
        low.insert(root, timer);
        timer += 1;
        let mut root_children = 0usize;
        while let Some(frame) = stack.last_mut() {
            let (v, parent, idx, skipped) = *frame;
            let ns = &adj[&v];
            if idx < ns.len() {
                let w = ns[idx];
                frame.2 = idx + 1;
                if Some(w) == parent && !skipped {
                    frame.3 = true;
                    continue;
                }
                if let Some(&dw) = disc.get(&w) {
                    if dw < disc[&v] {
                        edge_stack.push(edge(v, w));
                        let lv = low.get_mut(&v).unwrap();
                        *lv = (*lv).min(dw);
                    }
                } else {
                    edge_stack.push(edge(v, w));
                    disc.insert(w, timer);
                    low.insert(w, timer);
                    timer += 1;
                    if v == root {
                        root_children += 1;
                    }
                    stack.push((w, Some(v), 0, false));
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _, _)) = stack.last() {
                    let lv = low[&v];
                    let lp = low.get_mut(&p).unwrap();
                    *lp = (*lp).min(lv);
                    if lv >= disc[&p] {
                        // p closes a block
                        let mut blk = Vec::new();
                        let cut = edge(p, v);
                        while let Some(e) = edge_stack.pop() {
                            blk.push(e);
                            if e == cut {
                                break;
                            }
                        }
                        block_list.push(blk);
                        if p != root || root_children > 1 {
                            cuts.insert(p);
                        }
                    }
                }
            }
        }
        // root with exactly one child never marked; residual edges already popped
    }
    (block_list, cuts)
}

pub fn is_biconnected(g: &Graph) -> bool {
    if !g.is_connected() {
        return false;
    }
    blocks(g).1.is_empty()
}

/// Any cycle through the first listed edge; the caller guarantees the block
/// is biconnected with more than one edge.
fn find_cycle(adj: &BTreeMap<VertexId, Vec<VertexId>>) -> Option<Vec<VertexId>> {
    let (&u, ns) = adj.iter().find(|(_, ns)| !ns.is_empty())?;
    let v = ns[0];
    // BFS from u to v avoiding the edge {u,v} itself
    let mut par: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    let mut seen: BTreeSet<VertexId> = BTreeSet::from([u]);
    let mut queue = VecDeque::from([u]);
    while let Some(x) = queue.pop_front() {
        for &w in &adj[&x] {
            if x == u && w == v {
                continue;
            }
            if seen.insert(w) {
                par.insert(w, x);
                queue.push_back(w);
            }
        }
    }
    if !par.contains_key(&v) {
        return None;
    }
    let mut path = vec![v];
    let mut cur = v;
    while cur != u {
        cur = par[&cur];
        path.push(cur);
    }
    Some(path)
}

/// Inserts edge {x,y} into a rotation map at explicit positions: y goes
/// immediately clockwise-after `after_x` in rotation\[x\], and x immediately
/// after `after_y` in rotation\[y\].
fn insert_edge_after(
    rot: &mut BTreeMap<VertexId, Vec<VertexId>>,
    x: VertexId,
    after_x: VertexId,
    y: VertexId,
    after_y: VertexId,
) {
    let rx = rot.get_mut(&x).unwrap();
    let i = rx.iter().position(|&w| w == after_x).expect("anchor at x");
    rx.insert(i + 1, y);
    let ry = rot.get_mut(&y).unwrap();
    let j = ry.iter().position(|&w| w == after_y).expect("anchor at y");
    ry.insert(j + 1, x);
}

/// DMP embedding of one biconnected block. Returns clockwise rotations or
/// `None` when the block is non-planar.
fn embed_block(edges: &[Edge]) -> Option<BTreeMap<VertexId, Vec<VertexId>>> {
    let mut vset: BTreeSet<VertexId> = BTreeSet::new();
    for &(u, v) in edges {
        vset.insert(u);
        vset.insert(v);
    }
    if edges.len() == 1 {
        let (u, v) = edges[0];
        return Some(BTreeMap::from([(u, vec![v]), (v, vec![u])]));
    }
    let mut adj: BTreeMap<VertexId, Vec<VertexId>> =
        vset.iter().map(|&v| (v, Vec::new())).collect();
    for &(u, v) in edges {
        adj.get_mut(&u).unwrap().push(v);
        adj.get_mut(&v).unwrap().push(u);
    }
    let cycle = find_cycle(&adj).expect("biconnected block with >1 edge has a cycle");
    let k = cycle.len();
    let mut rot: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    for i in 0..k {
        let prev = cycle[(i + k - 1) % k];
        let next = cycle[(i + 1) % k];
        rot.insert(cycle[i], vec![prev, next]);
    }
    let mut embedded: BTreeSet<Edge> = (0..k).map(|i| edge(cycle[i], cycle[(i + 1) % k])).collect();
    let all_edges: BTreeSet<Edge> = edges.iter().copied().collect();

    loop {
        if embedded.len() == all_edges.len() {
            return Some(rot);
        }
        let faces = trace_faces(&rot);
        let h_vertices: BTreeSet<VertexId> = rot.keys().copied().collect();
        let face_vertices: Vec<BTreeSet<VertexId>> = faces
            .iter()
            .map(|f| f.iter().map(|&(a, _)| a).collect())
            .collect();

        // bridges: chords between H-vertices, and components of G - V(H)
        // with their attachment edges
        #[derive(Debug)]
        struct Bridge {
            attachments: BTreeSet<VertexId>,
            // interior vertices (empty for a chord)
            interior: BTreeSet<VertexId>,
            chord: Option<Edge>,
        }
        let mut bridges: Vec<Bridge> = Vec::new();
        for &e in all_edges.difference(&embedded) {
            let (u, v) = e;
            if h_vertices.contains(&u) && h_vertices.contains(&v) {
                bridges.push(Bridge {
                    attachments: BTreeSet::from([u, v]),
                    interior: BTreeSet::new(),
                    chord: Some(e),
                });
            }
        }
        let mut unassigned: BTreeSet<VertexId> =
            vset.difference(&h_vertices).copied().collect();
        while let Some(&start) = unassigned.iter().next() {
            unassigned.remove(&start);
            let mut interior = BTreeSet::from([start]);
            let mut attachments = BTreeSet::new();
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &w in &adj[&v] {
                    if h_vertices.contains(&w) {
                        attachments.insert(w);
                    } else if unassigned.remove(&w) {
                        interior.insert(w);
                        queue.push_back(w);
                    }
                }
            }
            bridges.push(Bridge {
                attachments,
                interior,
                chord: None,
            });
        }

        // admissible faces per bridge
        let mut best: Option<(usize, Vec<usize>)> = None; // (bridge idx, faces)
        for (bi, b) in bridges.iter().enumerate() {
            let adm: Vec<usize> = face_vertices
                .iter()
                .enumerate()
                .filter_map(|(fi, fv)| b.attachments.is_subset(fv).then_some(fi))
                .collect();
            if adm.is_empty() {
                return None;
            }
            let better = match &best {
                None => true,
                Some((_, cur)) => adm.len() < cur.len(),
            };
            if better {
                best = Some((bi, adm));
            }
        }
        let (bi, adm) = best.expect("there is an unembedded edge, so a bridge exists");
        let b = &bridges[bi];
        let face = &faces[adm[0]];

        // choose a path through the bridge between two attachments
        let path: Vec<VertexId> = match b.chord {
            Some((u, v)) => vec![u, v],
            None => {
                let mut it = b.attachments.iter();
                let x = *it.next().expect("attachment");
                // BFS from x through interior to another attachment
                let mut par: BTreeMap<VertexId, VertexId> = BTreeMap::new();
                let mut queue: VecDeque<VertexId> = VecDeque::new();
                let mut seen: BTreeSet<VertexId> = BTreeSet::from([x]);
                for &w in &adj[&x] {
                    if b.interior.contains(&w) && seen.insert(w) {
                        par.insert(w, x);
                        queue.push_back(w);
                    }
                }
                let mut found = None;
                'bfs: while let Some(v) = queue.pop_front() {
                    for &w in &adj[&v] {
                        if b.attachments.contains(&w) && w != x {
                            par.insert(w, v);
                            found = Some(w);
                            break 'bfs;
                        }
                        if b.interior.contains(&w) && seen.insert(w) {
                            par.insert(w, v);
                            queue.push_back(w);
                        }
                    }
                }
                let y = found.expect("biconnected: bridge has two attachments");
                let mut path = vec![y];
                let mut cur = y;
                while cur != x {
                    cur = par[&cur];
                    path.push(cur);
                }
                path.reverse();
                path
            }
        };

        // embed `path` into `face`: path[0] and path.last() lie on the face
        let x = path[0];
        let y = *path.last().unwrap();
        let ix = face
            .iter()
            .position(|&(_, b)| b == x)
            .expect("x on admissible face");
        let wx = face[ix].0; // dart (wx -> x)
        let iy = face
            .iter()
            .position(|&(_, b)| b == y)
            .expect("y on admissible face");
        let wy = face[iy].0; // dart (wy -> y)

        // interior path vertices enter the rotation map fresh
        for win in path.windows(2) {
            let (a, bv) = (win[0], win[1]);
            embedded.insert(edge(a, bv));
        }
        for &v in &path[1..path.len() - 1] {
            rot.insert(v, Vec::new());
        }
        if path.len() == 2 {
            insert_edge_after(&mut rot, x, wx, y, wy);
        } else {
            // endpoints anchor at face corners, interior is a chain
            let rx = rot.get_mut(&x).unwrap();
            let i = rx.iter().position(|&w| w == wx).unwrap();
            rx.insert(i + 1, path[1]);
            let ry = rot.get_mut(&y).unwrap();
            let j = ry.iter().position(|&w| w == wy).unwrap();
            ry.insert(j + 1, path[path.len() - 2]);
            for i in 1..path.len() - 1 {
                let v = path[i];
                rot.insert(v, vec![path[i - 1], path[i + 1]]);
            }
        }
    }
}

fn embed_graph(g: &Graph) -> Option<BTreeMap<VertexId, Vec<VertexId>>> {
    let (blks, _) = blocks(g);
    let mut rot: BTreeMap<VertexId, Vec<VertexId>> =
        g.vertices().map(|v| (v, Vec::new())).collect();
    for blk in &blks {
        let br = embed_block(blk)?;
        for (v, ns) in br {
            rot.get_mut(&v).unwrap().extend(ns);
        }
    }
    Some(rot)
}

/// Planarity test producing either an embedding or a Kuratowski witness.
pub fn check_planarity(g: &Graph) -> PlanarityCheck {
    match embed_graph(g) {
        Some(rot) => PlanarityCheck::Planar(
            PlanarEmbedding::with_default_outer(rot).expect("DMP output is a planar map"),
        ),
        None => PlanarityCheck::NonPlanar(kuratowski_witness(g)),
    }
}

pub fn is_planar(g: &Graph) -> bool {
    embed_graph(g).is_some()
}

/// Shrinks a non-planar graph to a deletion-minimal non-planar subgraph,
/// which is a subdivision of K5 or K3,3.
fn kuratowski_witness(g: &Graph) -> Graph {
    let mut h = g.clone();
    let es: Vec<Edge> = h.edges().collect();
    for (u, v) in es {
        h.remove_edge(u, v);
        if is_planar(&h) {
            h.insert_edge(u, v).unwrap();
        }
    }
    // drop isolated vertices
    let keep: BTreeSet<VertexId> = h.edges().flat_map(|(u, v)| [u, v]).collect();
    let mut w = Graph::with_vertices(keep);
    for (u, v) in h.edges() {
        w.insert_edge(u, v).unwrap();
    }
    w
}

/// Which Kuratowski graph a subdivision reduces to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KuratowskiKind {
    K5,
    K33,
}

/// Suppresses degree-2 vertices and recognizes K5 / K3,3.
pub fn classify_kuratowski(g: &Graph) -> Option<KuratowskiKind> {
    let mut adj: BTreeMap<VertexId, BTreeSet<VertexId>> = g
        .adjacency()
        .into_iter()
        .map(|(v, ns)| (v, ns.into_iter().collect()))
        .collect();
    loop {
        let v2 = adj
            .iter()
            .find(|(_, ns)| ns.len() == 2)
            .map(|(&v, ns)| (v, ns.iter().copied().collect::<Vec<_>>()));
        match v2 {
            Some((v, ns)) => {
                let (a, b) = (ns[0], ns[1]);
                if a == b || adj[&a].contains(&b) {
                    return None;
                }
                adj.remove(&v);
                adj.get_mut(&a).unwrap().remove(&v);
                adj.get_mut(&b).unwrap().remove(&v);
                adj.get_mut(&a).unwrap().insert(b);
                adj.get_mut(&b).unwrap().insert(a);
            }
            None => break,
        }
    }
    let n = adj.len();
    let m: usize = adj.values().map(|ns| ns.len()).sum::<usize>() / 2;
    if n == 5 && m == 10 && adj.values().all(|ns| ns.len() == 4) {
        return Some(KuratowskiKind::K5);
    }
    if n == 6 && m == 9 && adj.values().all(|ns| ns.len() == 3) {
        // bipartite check
        let ids: Vec<VertexId> = adj.keys().copied().collect();
        let mut color: BTreeMap<VertexId, bool> = BTreeMap::new();
        let mut queue = VecDeque::from([ids[0]]);
        color.insert(ids[0], false);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[&v] {
                match color.get(&w) {
                    None => {
                        color.insert(w, !color[&v]);
                        queue.push_back(w);
                    }
                    Some(&c) => {
                        if c == color[&v] {
                            return None;
                        }
                    }
                }
            }
        }
        return Some(KuratowskiKind::K33);
    }
    None
}

/// Adds edges inside faces until the embedding is biconnected. Added edges
/// connect two rotation-consecutive neighbors of a cut vertex.
pub fn biconnect_planar_augment(e: &PlanarEmbedding) -> Result<(PlanarEmbedding, Vec<Edge>)> {
    if !e.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut rot = e.rotations().clone();
    let mut outer_dart = match e.outer_refs()[0] {
        OuterRef::Dart(d) => Some(d),
        OuterRef::Isolated(_) => None,
    };
    let mut added: Vec<Edge> = Vec::new();
    loop {
        let g = {
            let mut g = Graph::with_vertices(rot.keys().copied());
            for (&v, ns) in &rot {
                for &u in ns {
                    if v < u {
                        g.insert_edge(v, u)?;
                    }
                }
            }
            g
        };
        let (blks, cuts) = blocks(&g);
        let Some(&v) = cuts.iter().next() else {
            break;
        };
        // block id per edge at v
        let mut block_of: BTreeMap<Edge, usize> = BTreeMap::new();
        for (bi, blk) in blks.iter().enumerate() {
            for &e in blk {
                block_of.insert(e, bi);
            }
        }
        let ns = rot[&v].clone();
        let deg = ns.len();
        let mut pair = None;
        for i in 0..deg {
            let x = ns[i];
            let y = ns[(i + 1) % deg];
            if block_of[&edge(v, x)] != block_of[&edge(v, y)] {
                pair = Some((x, y));
                break;
            }
        }
        let (x, y) = pair.ok_or_else(|| {
            Error::InternalInvariant(format!("cut vertex {v} with single-block rotation"))
        })?;
        debug_assert!(x != y && !g.has_edge(x, y));
        // keep the outer dart clear of the corner being cut off
        if let Some(d) = outer_dart {
            if d == (x, v) || d == (v, y) {
                let faces = trace_faces(&rot);
                let walk = faces
                    .iter()
                    .find(|f| f.contains(&d))
                    .expect("outer dart exists");
                outer_dart = walk
                    .iter()
                    .copied()
                    .find(|&dd| dd != (x, v) && dd != (v, y));
            }
        }
        // locate the corner face to find the anchors at x and y
        let faces = trace_faces(&rot);
        let face = faces
            .iter()
            .find(|f| f.contains(&(x, v)))
            .expect("dart belongs to a face");
        let ix = face.iter().position(|&d| d == (x, v)).unwrap();
        debug_assert_eq!(face[(ix + 1) % face.len()], (v, y));
        let wx = face[(ix + face.len() - 1) % face.len()].0; // dart (wx -> x)
        insert_edge_after(&mut rot, x, wx, y, v);
        added.push(edge(x, y));
    }
    let outer = match outer_dart {
        Some(d) => vec![OuterRef::Dart(d)],
        None => e.outer_refs().to_vec(),
    };
    let out = PlanarEmbedding::new(rot, outer)?;
    Ok((out, added))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn planar_embedding_of(g: &Graph) -> PlanarEmbedding {
        match check_planarity(g) {
            PlanarityCheck::Planar(e) => e,
            PlanarityCheck::NonPlanar(_) => panic!("expected planar"),
        }
    }

    #[test]
    fn k4_embeds_with_four_faces() {
        let e = planar_embedding_of(&Graph::complete(4));
        assert_eq!(e.face_count(), 4);
    }

    #[test]
    fn k5_yields_kuratowski_witness() {
        match check_planarity(&Graph::complete(5)) {
            PlanarityCheck::NonPlanar(w) => {
                assert_eq!(classify_kuratowski(&w), Some(KuratowskiKind::K5));
            }
            PlanarityCheck::Planar(_) => panic!("K5 is not planar"),
        }
    }

    #[test]
    fn k33_yields_kuratowski_witness() {
        match check_planarity(&Graph::complete_bipartite(3, 3)) {
            PlanarityCheck::NonPlanar(w) => {
                assert_eq!(classify_kuratowski(&w), Some(KuratowskiKind::K33));
            }
            PlanarityCheck::Planar(_) => panic!("K33 is not planar"),
        }
    }

    #[test]
    fn k33_minus_edge_is_planar() {
        let mut g = Graph::complete_bipartite(3, 3);
        g.remove_edge(0, 3);
        let e = planar_embedding_of(&g);
        // n - m + f = 2
        assert_eq!(e.n() as i64 - e.m() as i64 + e.face_count() as i64, 2);
    }

    #[test]
    fn k6_witness_is_k5_or_k33() {
        match check_planarity(&Graph::complete(6)) {
            PlanarityCheck::NonPlanar(w) => {
                assert!(classify_kuratowski(&w).is_some());
            }
            PlanarityCheck::Planar(_) => panic!("K6 is not planar"),
        }
    }

    #[test]
    fn biconnect_identity_on_cycle() {
        let e = planar_embedding_of(&Graph::cycle(5));
        let (out, added) = biconnect_planar_augment(&e).unwrap();
        assert!(added.is_empty());
        assert_eq!(out, e);
    }

    #[test]
    fn biconnect_path_adds_one_edge() {
        let g = Graph::from_edges([(0, 1), (1, 2)]).unwrap();
        let e = planar_embedding_of(&g);
        let (out, added) = biconnect_planar_augment(&e).unwrap();
        assert_eq!(added, vec![(0, 2)]);
        assert!(is_biconnected(&out.graph()));
    }

    #[test]
    fn biconnect_star_adds_two_edges() {
        let g = Graph::from_edges([(0, 1), (0, 2), (0, 3)]).unwrap();
        let e = planar_embedding_of(&g);
        let (out, added) = biconnect_planar_augment(&e).unwrap();
        assert_eq!(added.len(), 2);
        assert!(is_biconnected(&out.graph()));
        assert!(check_planarity(&out.graph()).is_planar());
    }

    #[test]
    fn biconnect_rejects_disconnected() {
        let g = Graph::from_edges([(0, 1), (2, 3)]).unwrap();
        let e = planar_embedding_of(&g);
        assert!(matches!(
            biconnect_planar_augment(&e),
            Err(Error::Disconnected)
        ));
    }

    #[test]
    fn blocks_of_two_triangles_sharing_a_vertex() {
        let g = Graph::from_edges([(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]).unwrap();
        let (blks, cuts) = blocks(&g);
        assert_eq!(blks.len(), 2);
        assert_eq!(cuts.into_iter().collect::<Vec<_>>(), vec![2]);
    }

    #[test]
    fn grid_and_wheel_planar() {
        // 3x3 grid
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
        let e = planar_embedding_of(&g);
        assert_eq!(e.n() as i64 - e.m() as i64 + e.face_count() as i64, 2);
        // wheel on 6 spokes
        let mut w = Graph::with_vertices(0..7);
        for i in 1..7u32 {
            w.insert_edge(0, i).unwrap();
            w.insert_edge(i, if i == 6 { 1 } else { i + 1 }).unwrap();
        }
        let e = planar_embedding_of(&w);
        assert_eq!(e.face_count(), 7);
    }
}

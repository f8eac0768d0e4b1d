//! Undirected/directed graph model, digraph squares, and the
//! forest-or-triangle classifier.

use crate::{edge, Arc, Edge, Error, Result, VertexId};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// Simple undirected graph.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    vertices: BTreeSet<VertexId>,
    edges: BTreeSet<Edge>,
}

impl Graph {
    pub fn new() -> Self {
        Graph::default()
    }

    pub fn with_vertices(vs: impl IntoIterator<Item = VertexId>) -> Self {
        Graph {
            vertices: vs.into_iter().collect(),
            edges: BTreeSet::new(),
        }
    }

    /// Builds a graph from an edge list, declaring endpoints implicitly.
    pub fn from_edges(es: impl IntoIterator<Item = (VertexId, VertexId)>) -> Result<Self> {
        let mut g = Graph::new();
        for (u, v) in es {
            g.vertices.insert(u);
            g.vertices.insert(v);
            g.insert_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, v: VertexId) {
        self.vertices.insert(v);
    }

    pub fn insert_edge(&mut self, u: VertexId, v: VertexId) -> Result<()> {
        if u == v {
            return Err(Error::InvalidGraph(format!("loop at vertex {u}")));
        }
        if !self.vertices.contains(&u) || !self.vertices.contains(&v) {
            return Err(Error::InvalidGraph(format!(
                "edge ({u},{v}) references an undeclared vertex"
            )));
        }
        self.edges.insert(edge(u, v));
        Ok(())
    }

    pub fn remove_edge(&mut self, u: VertexId, v: VertexId) {
        self.edges.remove(&edge(u, v));
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.edges.contains(&edge(u, v))
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().copied()
    }

    pub fn vertex_set(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_set(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: VertexId) -> Vec<VertexId> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn adjacency(&self) -> BTreeMap<VertexId, Vec<VertexId>> {
        let mut adj: BTreeMap<VertexId, Vec<VertexId>> =
            self.vertices.iter().map(|&v| (v, Vec::new())).collect();
        for &(u, v) in &self.edges {
            adj.get_mut(&u).unwrap().push(v);
            adj.get_mut(&v).unwrap().push(u);
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let adj = self.adjacency();
        let start = *self.vertices.iter().next().unwrap();
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[&v] {
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen.len() == self.vertices.len()
    }

    /// Complete graph on ids 0..n.
    pub fn complete(n: u32) -> Self {
        let mut g = Graph::with_vertices(0..n);
        for u in 0..n {
            for v in (u + 1)..n {
                g.edges.insert((u, v));
            }
        }
        g
    }

    /// Complete bipartite graph with parts 0..a and a..a+b.
    pub fn complete_bipartite(a: u32, b: u32) -> Self {
        let mut g = Graph::with_vertices(0..a + b);
        for u in 0..a {
            for v in a..a + b {
                g.edges.insert((u, v));
            }
        }
        g
    }

    /// Cycle 0-1-...-(n-1)-0.
    pub fn cycle(n: u32) -> Self {
        let mut g = Graph::with_vertices(0..n);
        for v in 0..n {
            g.edges.insert(edge(v, (v + 1) % n));
        }
        g
    }

    /// The 6-cycle 0..5 with the inscribed triangle {0,2,4}.
    pub fn s3() -> Self {
        let mut g = Graph::cycle(6);
        for &(u, v) in &[(0, 2), (2, 4), (0, 4)] {
            g.edges.insert(edge(u, v));
        }
        g
    }
}

/// Result of [`forest_or_triangle`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForestOrTriangle {
    Forest,
    HasTriangle,
    /// Cyclic but triangle-free (girth >= 4).
    Neither,
}

/// Classifies a graph as a forest, a triangle container, or neither.
pub fn forest_or_triangle(g: &Graph) -> ForestOrTriangle {
    let adj = g.adjacency();
    // triangle: some edge whose endpoints share a neighbor
    let sets: BTreeMap<VertexId, BTreeSet<VertexId>> = adj
        .iter()
        .map(|(&v, ns)| (v, ns.iter().copied().collect()))
        .collect();
    for (u, v) in g.edges() {
        if sets[&u].intersection(&sets[&v]).next().is_some() {
            return ForestOrTriangle::HasTriangle;
        }
    }
    // forest iff acyclic: union-find over edges
    let ids: Vec<VertexId> = g.vertices().collect();
    let index: BTreeMap<VertexId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut parent: Vec<usize> = (0..ids.len()).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (u, v) in g.edges() {
        let (ru, rv) = (find(&mut parent, index[&u]), find(&mut parent, index[&v]));
        if ru == rv {
            return ForestOrTriangle::Neither;
        }
        parent[ru] = rv;
    }
    ForestOrTriangle::Forest
}

/// Simple directed graph.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DiGraph {
    vertices: BTreeSet<VertexId>,
    arcs: BTreeSet<Arc>,
}

impl DiGraph {
    pub fn new() -> Self {
        DiGraph::default()
    }

    pub fn with_vertices(vs: impl IntoIterator<Item = VertexId>) -> Self {
        DiGraph {
            vertices: vs.into_iter().collect(),
            arcs: BTreeSet::new(),
        }
    }

    pub fn from_arcs(arcs: impl IntoIterator<Item = Arc>) -> Result<Self> {
        let mut g = DiGraph::new();
        for (u, v) in arcs {
            g.vertices.insert(u);
            g.vertices.insert(v);
            g.insert_arc(u, v)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, v: VertexId) {
        self.vertices.insert(v);
    }

    pub fn insert_arc(&mut self, u: VertexId, v: VertexId) -> Result<()> {
        if u == v {
            return Err(Error::InvalidGraph(format!("loop at vertex {u}")));
        }
        if !self.vertices.contains(&u) || !self.vertices.contains(&v) {
            return Err(Error::InvalidGraph(format!(
                "arc ({u},{v}) references an undeclared vertex"
            )));
        }
        self.arcs.insert((u, v));
        Ok(())
    }

    pub fn has_arc(&self, u: VertexId, v: VertexId) -> bool {
        self.arcs.contains(&(u, v))
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().copied()
    }

    pub fn vertex_set(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub fn arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        self.arcs.iter().copied()
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn m(&self) -> usize {
        self.arcs.len()
    }

    pub fn out_neighbors(&self, v: VertexId) -> Vec<VertexId> {
        self.arcs
            .range((v, VertexId::MIN)..=(v, VertexId::MAX))
            .map(|&(_, w)| w)
            .collect()
    }

    pub fn in_neighbors(&self, v: VertexId) -> Vec<VertexId> {
        self.arcs
            .iter()
            .filter_map(|&(u, w)| if w == v { Some(u) } else { None })
            .collect()
    }

    pub fn indeg(&self, v: VertexId) -> usize {
        self.in_neighbors(v).len()
    }

    pub fn outdeg(&self, v: VertexId) -> usize {
        self.out_neighbors(v).len()
    }

    pub fn sources(&self) -> Vec<VertexId> {
        let mut indeg: BTreeMap<VertexId, usize> =
            self.vertices.iter().map(|&v| (v, 0)).collect();
        for &(_, v) in &self.arcs {
            *indeg.get_mut(&v).unwrap() += 1;
        }
        indeg
            .into_iter()
            .filter_map(|(v, d)| if d == 0 { Some(v) } else { None })
            .collect()
    }

    pub fn sinks(&self) -> Vec<VertexId> {
        let mut outdeg: BTreeMap<VertexId, usize> =
            self.vertices.iter().map(|&v| (v, 0)).collect();
        for &(u, _) in &self.arcs {
            *outdeg.get_mut(&u).unwrap() += 1;
        }
        outdeg
            .into_iter()
            .filter_map(|(v, d)| if d == 0 { Some(v) } else { None })
            .collect()
    }

    /// Kahn topological sort; `None` when cyclic.
    pub fn topological_order(&self) -> Option<Vec<VertexId>> {
        let mut indeg: BTreeMap<VertexId, usize> =
            self.vertices.iter().map(|&v| (v, 0)).collect();
        let mut out: BTreeMap<VertexId, Vec<VertexId>> =
            self.vertices.iter().map(|&v| (v, Vec::new())).collect();
        for &(u, v) in &self.arcs {
            *indeg.get_mut(&v).unwrap() += 1;
            out.get_mut(&u).unwrap().push(v);
        }
        let mut ready: VecDeque<VertexId> = indeg
            .iter()
            .filter_map(|(&v, &d)| if d == 0 { Some(v) } else { None })
            .collect();
        let mut order = Vec::with_capacity(self.n());
        while let Some(v) = ready.pop_front() {
            order.push(v);
            for &w in &out[&v] {
                let d = indeg.get_mut(&w).unwrap();
                *d -= 1;
                if *d == 0 {
                    ready.push_back(w);
                }
            }
        }
        (order.len() == self.n()).then_some(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    /// Forgets directions.
    pub fn underlying(&self) -> Graph {
        let mut g = Graph::with_vertices(self.vertices());
        for (u, v) in self.arcs() {
            g.edges.insert(edge(u, v));
        }
        g
    }

    /// Longest-path layering from the sources; `None` when cyclic.
    pub fn longest_path_levels(&self) -> Option<BTreeMap<VertexId, u32>> {
        let order = self.topological_order()?;
        let mut level: BTreeMap<VertexId, u32> = order.iter().map(|&v| (v, 0)).collect();
        for &v in &order {
            let lv = level[&v];
            for w in self.out_neighbors(v) {
                let lw = level.get_mut(&w).unwrap();
                *lw = (*lw).max(lv + 1);
            }
        }
        Some(level)
    }
}

/// Undirected square: {u,w} is an edge iff some directed path of length one
/// or two joins them in either direction.
pub fn square_of_digraph(g: &DiGraph) -> Graph {
    let mut sq = Graph::with_vertices(g.vertices());
    for u in g.vertices() {
        for v in g.out_neighbors(u) {
            sq.edges.insert(edge(u, v));
            for w in g.out_neighbors(v) {
                if w != u {
                    sq.edges.insert(edge(u, w));
                }
            }
        }
    }
    sq
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_of_two_path_is_triangle() {
        let g = DiGraph::from_arcs([(0, 1), (1, 2)]).unwrap();
        let sq = square_of_digraph(&g);
        assert_eq!(
            sq.edge_set().iter().copied().collect::<Vec<_>>(),
            vec![(0, 1), (0, 2), (1, 2)]
        );
    }

    #[test]
    fn square_of_cross_oriented_c4_is_c4() {
        // C4 with both edges directed from one bipartition side to the other
        let g = DiGraph::from_arcs([(0, 1), (0, 3), (2, 1), (2, 3)]).unwrap();
        let sq = square_of_digraph(&g);
        assert_eq!(sq, g.underlying());
    }

    #[test]
    fn square_of_out_star_adds_nothing() {
        let g = DiGraph::from_arcs([(0, 1), (0, 2)]).unwrap();
        let sq = square_of_digraph(&g);
        assert_eq!(
            sq.edge_set().iter().copied().collect::<Vec<_>>(),
            vec![(0, 1), (0, 2)]
        );
    }

    #[test]
    fn square_contains_underlying() {
        let g = DiGraph::from_arcs([(0, 1), (1, 2), (2, 5), (1, 4), (3, 4)]).unwrap();
        let sq = square_of_digraph(&g);
        for (u, v) in g.underlying().edges() {
            assert!(sq.has_edge(u, v));
        }
    }

    #[test]
    fn two_path_forces_triangle_in_square() {
        let g = DiGraph::from_arcs([(4, 7), (7, 9), (2, 4)]).unwrap();
        let sq = square_of_digraph(&g);
        assert_eq!(forest_or_triangle(&sq), ForestOrTriangle::HasTriangle);
    }

    #[test]
    fn classify_c4_tree_k33() {
        assert_eq!(forest_or_triangle(&Graph::cycle(4)), ForestOrTriangle::Neither);
        let tree = Graph::from_edges([(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        assert_eq!(forest_or_triangle(&tree), ForestOrTriangle::Forest);
        assert_eq!(
            forest_or_triangle(&Graph::complete_bipartite(3, 3)),
            ForestOrTriangle::Neither
        );
    }

    #[test]
    fn loops_rejected() {
        assert!(Graph::from_edges([(1, 1)]).is_err());
        assert!(DiGraph::from_arcs([(1, 1)]).is_err());
    }
}

//! Bar layouts and the sweep computing strong bar k-visibility graphs.
//!
//! Coordinates are exact rationals throughout; visibility rectangles are
//! required to have positive width, which the sweep guarantees by only
//! looking at open elementary x-intervals between distinct endpoint
//! coordinates.

use crate::graph::Graph;
use crate::{Edge, Error, Rational, Result, VertexId};
use std::collections::BTreeMap;

/// Horizontal bar for one vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bar {
    pub id: VertexId,
    pub y: Rational,
    pub x_left: Rational,
    pub x_right: Rational,
}

impl Bar {
    pub fn new(id: VertexId, y: Rational, x_left: Rational, x_right: Rational) -> Self {
        Bar {
            id,
            y,
            x_left,
            x_right,
        }
    }

    fn spans_open(&self, a: &Rational, b: &Rational) -> bool {
        self.x_left <= *a && *b <= self.x_right
    }
}

/// A set of pairwise disjoint bars, one per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BarLayout {
    bars: BTreeMap<VertexId, Bar>,
}

impl BarLayout {
    pub fn new(bars: impl IntoIterator<Item = Bar>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for b in bars {
            if b.x_left >= b.x_right {
                return Err(Error::InvalidLayout(format!(
                    "bar {} has non-positive length",
                    b.id
                )));
            }
            if map.insert(b.id, b).is_some() {
                return Err(Error::InvalidLayout("duplicate bar id".into()));
            }
        }
        let layout = BarLayout { bars: map };
        layout.check_disjoint()?;
        Ok(layout)
    }

    fn check_disjoint(&self) -> Result<()> {
        let bars: Vec<&Bar> = self.bars.values().collect();
        for (i, a) in bars.iter().enumerate() {
            for b in &bars[i + 1..] {
                if a.y == b.y && a.x_left <= b.x_right && b.x_left <= a.x_right {
                    return Err(Error::InvalidLayout(format!(
                        "bars {} and {} intersect",
                        a.id, b.id
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn bars(&self) -> impl Iterator<Item = &Bar> {
        self.bars.values()
    }

    pub fn bar(&self, v: VertexId) -> Option<&Bar> {
        self.bars.get(&v)
    }

    pub fn len(&self) -> usize {
        self.bars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.bars.keys().copied()
    }

    /// Removes a bar (used to delete dummy vertices after aligned
    /// constructions).
    pub fn remove(&mut self, v: VertexId) -> Option<Bar> {
        self.bars.remove(&v)
    }

    /// Distinct endpoint x-coordinates in increasing order.
    pub fn elementary_xs(&self) -> Vec<Rational> {
        let mut xs: Vec<Rational> = self
            .bars
            .values()
            .flat_map(|b| [b.x_left, b.x_right])
            .collect();
        xs.sort();
        xs.dedup();
        xs
    }
}

/// Strong bar k-visibility graph of a layout.
///
/// Within each open elementary x-interval the active bars are ordered by y;
/// every pair separated by at most k active bars becomes an edge.
pub fn strong_visibility_graph(layout: &BarLayout, k: usize) -> Graph {
    let mut g = Graph::with_vertices(layout.vertex_ids());
    let xs = layout.elementary_xs();
    for w in xs.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let mut active: Vec<(&Rational, VertexId)> = layout
            .bars()
            .filter(|bar| bar.spans_open(a, b))
            .map(|bar| (&bar.y, bar.id))
            .collect();
        active.sort();
        for i in 0..active.len() {
            for j in i + 1..active.len().min(i + k + 2) {
                g.insert_edge(active[i].1, active[j].1)
                    .expect("ids from layout");
            }
        }
    }
    g
}

/// Whether the layout weakly realizes `g` at level k, i.e. every edge of `g`
/// is an edge of the strong bar k-visibility graph. On failure the missing
/// edges are reported.
pub fn realizes_weakly(layout: &BarLayout, g: &Graph, k: usize) -> Result<(bool, Vec<Edge>)> {
    let lv: Vec<VertexId> = layout.vertex_ids().collect();
    let gv: Vec<VertexId> = g.vertices().collect();
    if lv != gv {
        return Err(Error::VertexSetMismatch(format!(
            "layout has {:?}, graph has {:?}",
            lv, gv
        )));
    }
    let strong = strong_visibility_graph(layout, k);
    let missing: Vec<Edge> = g
        .edges()
        .filter(|&(u, v)| !strong.has_edge(u, v))
        .collect();
    Ok((missing.is_empty(), missing))
}

/// Convenience constructor from integer coordinates.
pub fn bar(id: VertexId, y: i64, x_left: i64, x_right: i64) -> Bar {
    Bar::new(
        id,
        Rational::from_integer(y),
        Rational::from_integer(x_left),
        Rational::from_integer(x_right),
    )
}

/// A layout whose strong bar 1-visibility graph contains K3,3 with parts
/// {0,1,2} and {3,4,5}.
pub fn k33_layout() -> BarLayout {
    let half = Rational::new(1, 2);
    let three_half = Rational::new(3, 2);
    BarLayout::new([
        bar(0, 0, 0, 9),
        bar(1, 1, 0, 9),
        bar(2, 2, 0, 9),
        Bar::new(
            3,
            half,
            Rational::from_integer(0),
            Rational::from_integer(1),
        ),
        Bar::new(
            4,
            three_half,
            Rational::from_integer(2),
            Rational::from_integer(3),
        ),
        Bar::new(
            5,
            three_half,
            Rational::from_integer(4),
            Rational::from_integer(5),
        ),
    ])
    .expect("valid fixture")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::forest_or_triangle;

    fn stacked3() -> BarLayout {
        BarLayout::new([bar(1, 0, 0, 10), bar(2, 1, 0, 10), bar(3, 2, 0, 10)]).unwrap()
    }

    #[test]
    fn stacked_bars_at_k0_and_k1() {
        let l = stacked3();
        let g0 = strong_visibility_graph(&l, 0);
        assert_eq!(
            g0.edge_set().iter().copied().collect::<Vec<_>>(),
            vec![(1, 2), (2, 3)]
        );
        let g1 = strong_visibility_graph(&l, 1);
        assert_eq!(
            g1.edge_set().iter().copied().collect::<Vec<_>>(),
            vec![(1, 2), (1, 3), (2, 3)]
        );
    }

    #[test]
    fn single_bar_has_no_edges() {
        let l = BarLayout::new([bar(7, 0, 0, 1)]).unwrap();
        assert_eq!(strong_visibility_graph(&l, 1).m(), 0);
    }

    #[test]
    fn same_y_bars_never_see_each_other() {
        let l = BarLayout::new([bar(1, 0, 0, 1), bar(2, 0, 2, 3)]).unwrap();
        assert_eq!(strong_visibility_graph(&l, 5).m(), 0);
    }

    #[test]
    fn touching_bars_yield_no_zero_width_edge() {
        // bars meet only at x=1; no positive-width rectangle exists
        let l = BarLayout::new([bar(1, 0, 0, 1), bar(2, 1, 1, 2)]).unwrap();
        assert_eq!(strong_visibility_graph(&l, 0).m(), 0);
    }

    #[test]
    fn overlapping_same_y_rejected() {
        assert!(BarLayout::new([bar(1, 0, 0, 2), bar(2, 0, 2, 4)]).is_err());
        assert!(BarLayout::new([bar(1, 0, 0, 2), bar(2, 0, 3, 4)]).is_ok());
    }

    #[test]
    fn weak_realization_examples() {
        let l = stacked3();
        let empty = Graph::with_vertices([1, 2, 3]);
        assert!(realizes_weakly(&l, &empty, 0).unwrap().0);

        let mut tri = Graph::with_vertices([1, 2, 3]);
        tri.insert_edge(1, 2).unwrap();
        tri.insert_edge(2, 3).unwrap();
        tri.insert_edge(1, 3).unwrap();
        let (ok, missing) = realizes_weakly(&l, &tri, 0).unwrap();
        assert!(!ok);
        assert_eq!(missing, vec![(1, 3)]);
        assert!(realizes_weakly(&l, &tri, 1).unwrap().0);
    }

    #[test]
    fn vertex_set_mismatch_is_an_error() {
        let l = stacked3();
        let g = Graph::with_vertices([1, 2]);
        assert!(realizes_weakly(&l, &g, 0).is_err());
    }

    #[test]
    fn k33_fixture_realizes_k33_at_k1() {
        let l = k33_layout();
        let g = Graph::complete_bipartite(3, 3);
        assert!(realizes_weakly(&l, &g, 1).unwrap().0);
        let (ok, _) = realizes_weakly(&l, &g, 0).unwrap();
        assert!(!ok, "K3,3 is not planar, so level 0 cannot realize it");
    }

    #[test]
    fn monotone_in_k() {
        let l = k33_layout();
        let g0 = strong_visibility_graph(&l, 0);
        let g1 = strong_visibility_graph(&l, 1);
        let g2 = strong_visibility_graph(&l, 2);
        for (u, v) in g0.edges() {
            assert!(g1.has_edge(u, v));
        }
        for (u, v) in g1.edges() {
            assert!(g2.has_edge(u, v));
        }
    }

    #[test]
    fn strong_level1_is_forest_or_has_triangle() {
        for l in [stacked3(), k33_layout()] {
            let g = strong_visibility_graph(&l, 1);
            assert_ne!(
                forest_or_triangle(&g),
                crate::graph::ForestOrTriangle::Neither
            );
        }
    }
}

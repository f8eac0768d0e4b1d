//! Quasi-planar polyline drawings built from bar layouts, and the mutual
//! crossing detector used to verify them.
//!
//! The construction realizes every edge of the strong bar 1-visibility
//! graph: edges with a direct visibility become blue 3-segment polylines
//! hugging their rightmost visibility segment; the remaining (red) edges
//! detour through the point of their bypass vertex as 6-segment polylines,
//! shifted left in δ-steps so that curves sharing a bypass vertex nest.
//! Shift arithmetic quickly leaves i64 range, so drawings use big rationals.

use crate::barlayout::BarLayout;
use crate::geom::{segment_intersection_point, segments_meet, Point, SegMeet};
use crate::graph::Graph;
use crate::{edge, Edge, Error, Rational, Result, VertexId};
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::{BTreeMap, BTreeSet};

pub type Big = num_rational::BigRational;

fn big(r: Rational) -> Big {
    Big::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// Classification data for a red edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RedEdge {
    /// The single bar crossed by the rightmost 1-visibility segment.
    pub bypass: VertexId,
    /// The rightmost open elementary interval over which the endpoints are
    /// 1-visible.
    pub interval: (Rational, Rational),
}

/// Blue/red partition of the strong bar 1-visibility edges of a layout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeClassification {
    pub blue: BTreeSet<Edge>,
    pub red: BTreeMap<Edge, RedEdge>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeColor {
    Blue,
    Red { bypass: VertexId },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DrawnEdge {
    pub ends: Edge,
    pub color: EdgeColor,
    pub polyline: Vec<Point<Big>>,
}

/// Vertices as points, edges as colored polylines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolylineDrawing {
    pub points: BTreeMap<VertexId, Point<Big>>,
    pub edges: Vec<DrawnEdge>,
}

#[derive(Default, Clone)]
struct PairInfo {
    last_direct: Option<(Rational, Rational)>,
    last_one: Option<((Rational, Rational), VertexId)>,
}

/// Per visible pair: the rightmost direct interval and the rightmost
/// interval with exactly one blocking bar.
fn visibility_intervals(layout: &BarLayout) -> BTreeMap<Edge, PairInfo> {
    let mut info: BTreeMap<Edge, PairInfo> = BTreeMap::new();
    let xs = layout.elementary_xs();
    for w in xs.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let mut active: Vec<(&Rational, VertexId)> = layout
            .bars()
            .filter(|bar| bar.x_left <= *a && *b <= bar.x_right)
            .map(|bar| (&bar.y, bar.id))
            .collect();
        active.sort();
        for i in 0..active.len() {
            for j in i + 1..active.len().min(i + 3) {
                let e = edge(active[i].1, active[j].1);
                let entry = info.entry(e).or_default();
                if j == i + 1 {
                    entry.last_direct = Some((*a, *b));
                } else {
                    entry.last_one = Some(((*a, *b), active[i + 1].1));
                }
            }
        }
    }
    info
}

/// Partitions the strong bar 1-visibility edges into blue (direct
/// visibility) and red (visibility only through one bar), recording each
/// red edge's bypass vertex and rightmost 1-visibility interval.
pub fn classify_visibility_edges(layout: &BarLayout) -> EdgeClassification {
    let info = visibility_intervals(layout);
    let mut blue = BTreeSet::new();
    let mut red = BTreeMap::new();
    for (e, pi) in info {
        if pi.last_direct.is_some() {
            blue.insert(e);
        } else {
            let (interval, bypass) = pi.last_one.expect("visible pair has an interval");
            red.insert(e, RedEdge { bypass, interval });
        }
    }
    EdgeClassification { blue, red }
}

fn min_positive_gap(mut vals: Vec<Rational>) -> Option<Rational> {
    vals.sort();
    vals.dedup();
    vals.windows(2).map(|w| w[1] - w[0]).min()
}

/// Builds the quasi-planar drawing of a layout's strong bar 1-visibility
/// graph. Vertex v is placed at the left endpoint of its bar.
pub fn layout_to_quasiplanar(layout: &BarLayout) -> Result<PolylineDrawing> {
    let points: BTreeMap<VertexId, Point<Big>> = layout
        .bars()
        .map(|b| (b.id, Point::new(big(b.x_left), big(b.y))))
        .collect();
    let info = visibility_intervals(layout);
    if info.is_empty() {
        return Ok(PolylineDrawing {
            points,
            edges: Vec::new(),
        });
    }

    // gamma: a quarter of the smallest positive coordinate difference
    let x_gap = min_positive_gap(layout.bars().flat_map(|b| [b.x_left, b.x_right]).collect());
    let y_gap = min_positive_gap(layout.bars().map(|b| b.y).collect());
    let gap = match (x_gap, y_gap) {
        (Some(a), Some(b)) => a.min(b),
        (Some(a), None) => a,
        (None, Some(b)) => b,
        (None, None) => unreachable!("bars have two distinct x endpoints"),
    };
    let gamma = big(gap) / Big::from_integer(BigInt::from(4));
    let m_strong = info.len();
    let delta = gamma.clone() / Big::from_integer(BigInt::from((m_strong * m_strong + 1) as i64));

    let classes = classify_visibility_edges(layout);

    // deterministic red order for the collision-breaking shift component
    let reds: Vec<(&Edge, &RedEdge)> = classes.red.iter().collect();
    let tie_unit = delta.clone()
        / Big::from_integer(BigInt::from(2 * (reds.len() as i64) + 4));

    let two_gamma = gamma.clone() + gamma.clone();
    let mut edges = Vec::new();

    // blue: three segments along the rightmost direct visibility
    for &e in &classes.blue {
        let (u, v) = e;
        let (bu, bv) = (layout.bar(u).unwrap(), layout.bar(v).unwrap());
        let (lo, hi) = if bu.y < bv.y { (bu, bv) } else { (bv, bu) };
        let (_, bxr) = info[&e].last_direct.expect("blue edge");
        let mid_x = big(bxr) - two_gamma.clone();
        let poly = vec![
            Point::new(big(lo.x_left), big(lo.y)),
            Point::new(mid_x.clone(), big(lo.y) + gamma.clone()),
            Point::new(mid_x, big(hi.y) - gamma.clone()),
            Point::new(big(hi.x_left), big(hi.y)),
        ];
        edges.push(DrawnEdge {
            ends: e,
            color: EdgeColor::Blue,
            polyline: poly,
        });
    }

    // red: six segments through the bypass vertex point, shifted left
    for (i, &(&e, red)) in reds.iter().enumerate() {
        let (u, w) = e;
        let (bu, bw) = (layout.bar(u).unwrap(), layout.bar(w).unwrap());
        let (lo, hi) = if bu.y < bw.y { (bu, bw) } else { (bw, bu) };
        let bv = layout.bar(red.bypass).unwrap();
        let k = classes
            .red
            .values()
            .filter(|o| o.bypass == red.bypass && o.interval.1 > red.interval.1)
            .count() as i64;
        let shift = delta.clone() * Big::from_integer(BigInt::from(k + 1))
            + tie_unit.clone() * Big::from_integer(BigInt::from(i as i64 + 1));
        let x0 = big(red.interval.1) - two_gamma.clone() - shift.clone();
        let poly = vec![
            Point::new(big(lo.x_left), big(lo.y)),
            Point::new(x0.clone(), big(lo.y) + gamma.clone()),
            Point::new(x0.clone(), big(bv.y) - gamma.clone()),
            Point::new(big(bv.x_left) - shift, big(bv.y)),
            Point::new(x0.clone(), big(bv.y) + gamma.clone()),
            Point::new(x0, big(hi.y) - gamma.clone()),
            Point::new(big(hi.x_left), big(hi.y)),
        ];
        edges.push(DrawnEdge {
            ends: e,
            color: EdgeColor::Red { bypass: red.bypass },
            polyline: poly,
        });
    }

    let drawing = PolylineDrawing { points, edges };
    debug_assert!(drawing.no_polyline_through_third_vertex());
    Ok(drawing)
}

impl PolylineDrawing {
    /// The realized graph (one edge per polyline).
    pub fn graph(&self) -> Graph {
        let mut g = Graph::with_vertices(self.points.keys().copied());
        for e in &self.edges {
            g.insert_edge(e.ends.0, e.ends.1).expect("drawing is consistent");
        }
        g
    }

    /// Checks that no polyline passes through the point of a vertex other
    /// than its endpoints.
    pub fn no_polyline_through_third_vertex(&self) -> bool {
        for de in &self.edges {
            for (&v, p) in &self.points {
                if v == de.ends.0 || v == de.ends.1 {
                    continue;
                }
                for seg in de.polyline.windows(2) {
                    if segments_meet(&seg[0], &seg[1], p, p) != SegMeet::Disjoint {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// All unordered pairs of edges whose curves intersect. Pairs sharing an
/// endpoint are non-crossing by convention; collinear overlaps are
/// degeneracies the caller must re-perturb away.
pub fn crossing_pairs(d: &PolylineDrawing) -> Result<Vec<(usize, usize)>> {
    let mut pairs = Vec::new();
    for i in 0..d.edges.len() {
        for j in i + 1..d.edges.len() {
            let (a, b) = (&d.edges[i], &d.edges[j]);
            let (u1, v1) = a.ends;
            let (u2, v2) = b.ends;
            if u1 == u2 || u1 == v2 || v1 == u2 || v1 == v2 {
                continue;
            }
            let mut hit = false;
            'segs: for sa in a.polyline.windows(2) {
                for sb in b.polyline.windows(2) {
                    match segments_meet(&sa[0], &sa[1], &sb[0], &sb[1]) {
                        SegMeet::Disjoint => {}
                        SegMeet::Point => {
                            hit = true;
                            break 'segs;
                        }
                        SegMeet::Overlap => {
                            return Err(Error::DegenerateOverlap(a.ends, b.ends));
                        }
                    }
                }
            }
            if hit {
                pairs.push((i, j));
            }
        }
    }
    Ok(pairs)
}

fn bron_kerbosch(
    r: usize,
    p: &mut BTreeSet<usize>,
    x: &mut BTreeSet<usize>,
    adj: &[BTreeSet<usize>],
    best: &mut usize,
) {
    if p.is_empty() && x.is_empty() {
        *best = (*best).max(r);
        return;
    }
    if r + p.len() <= *best {
        return;
    }
    let pivot = p
        .iter()
        .chain(x.iter())
        .copied()
        .max_by_key(|&u| adj[u].intersection(p).count());
    let candidates: Vec<usize> = match pivot {
        Some(u) => p.difference(&adj[u]).copied().collect(),
        None => p.iter().copied().collect(),
    };
    for v in candidates {
        let mut p2: BTreeSet<usize> = p.intersection(&adj[v]).copied().collect();
        let mut x2: BTreeSet<usize> = x.intersection(&adj[v]).copied().collect();
        bron_kerbosch(r + 1, &mut p2, &mut x2, adj, best);
        p.remove(&v);
        x.insert(v);
    }
}

/// Size of the largest set of pairwise crossing edges.
pub fn max_mutual_crossing(d: &PolylineDrawing) -> Result<usize> {
    if d.edges.is_empty() {
        return Ok(0);
    }
    let pairs = crossing_pairs(d)?;
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); d.edges.len()];
    for (i, j) in pairs {
        adj[i].insert(j);
        adj[j].insert(i);
    }
    let mut best = 1;
    let mut p: BTreeSet<usize> = (0..d.edges.len()).collect();
    let mut x = BTreeSet::new();
    bron_kerbosch(0, &mut p, &mut x, &adj, &mut best);
    Ok(best)
}

/// All proper intersection points between curves of distinct edges;
/// used to check that contacts stay near bars.
pub fn crossing_points(d: &PolylineDrawing) -> Result<Vec<Point<Big>>> {
    let mut pts = Vec::new();
    for (i, j) in crossing_pairs(d)? {
        let (a, b) = (&d.edges[i], &d.edges[j]);
        for sa in a.polyline.windows(2) {
            for sb in b.polyline.windows(2) {
                if let Some(p) = segment_intersection_point(&sa[0], &sa[1], &sb[0], &sb[1]) {
                    pts.push(p);
                }
            }
        }
    }
    Ok(pts)
}

/// L-infinity distance from a point to a bar (a horizontal segment).
pub fn linf_distance_to_bar(p: &Point<Big>, y: Rational, xl: Rational, xr: Rational) -> Big {
    let dy = {
        let d = p.y.clone() - big(y);
        if d < Big::zero() {
            -d
        } else {
            d
        }
    };
    let dx = if p.x < big(xl) {
        big(xl) - p.x.clone()
    } else if p.x > big(xr) {
        p.x.clone() - big(xr)
    } else {
        Big::zero()
    };
    if dx > dy {
        dx
    } else {
        dy
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::barlayout::{bar, k33_layout, strong_visibility_graph};

    fn stacked3() -> BarLayout {
        BarLayout::new([bar(1, 0, 0, 10), bar(2, 1, 0, 10), bar(3, 2, 0, 10)]).unwrap()
    }

    #[test]
    fn classify_three_stacked_bars() {
        let c = classify_visibility_edges(&stacked3());
        assert_eq!(c.blue, BTreeSet::from([(1, 2), (2, 3)]));
        assert_eq!(c.red.len(), 1);
        let r = &c.red[&(1, 3)];
        assert_eq!(r.bypass, 2);
    }

    #[test]
    fn classify_two_bars() {
        let l = BarLayout::new([bar(1, 0, 0, 4), bar(2, 1, 0, 4)]).unwrap();
        let c = classify_visibility_edges(&l);
        assert_eq!(c.blue, BTreeSet::from([(1, 2)]));
        assert!(c.red.is_empty());
    }

    #[test]
    fn classification_partitions_strong_graph() {
        for l in [stacked3(), k33_layout()] {
            let c = classify_visibility_edges(&l);
            let strong = strong_visibility_graph(&l, 1);
            let mut union: BTreeSet<Edge> = c.blue.clone();
            for e in c.red.keys() {
                assert!(!union.contains(e), "blue and red overlap");
                union.insert(*e);
            }
            assert_eq!(union, strong.edge_set().iter().copied().collect());
        }
    }

    #[test]
    fn stacked_drawing_has_no_crossings() {
        let d = layout_to_quasiplanar(&stacked3()).unwrap();
        assert_eq!(d.edges.len(), 3);
        assert!(crossing_pairs(&d).unwrap().is_empty());
        assert_eq!(max_mutual_crossing(&d).unwrap(), 1);
    }

    #[test]
    fn path_layout_drawing_is_crossing_free() {
        // staircase: strong graph is a path
        let l = BarLayout::new([bar(1, 0, 0, 3), bar(2, 1, 2, 5), bar(3, 2, 4, 7)]).unwrap();
        assert_eq!(
            strong_visibility_graph(&l, 1)
                .edge_set()
                .iter()
                .copied()
                .collect::<Vec<_>>(),
            vec![(1, 2), (2, 3)]
        );
        let d = layout_to_quasiplanar(&l).unwrap();
        assert!(crossing_pairs(&d).unwrap().is_empty());
    }

    fn segment_drawing(segs: &[((i64, i64), (i64, i64))]) -> PolylineDrawing {
        let mut points = BTreeMap::new();
        let mut edges = Vec::new();
        for (i, &(a, b)) in segs.iter().enumerate() {
            let u = (2 * i) as VertexId;
            let v = (2 * i + 1) as VertexId;
            let pa = Point::new(
                Big::from_integer(BigInt::from(a.0)),
                Big::from_integer(BigInt::from(a.1)),
            );
            let pb = Point::new(
                Big::from_integer(BigInt::from(b.0)),
                Big::from_integer(BigInt::from(b.1)),
            );
            points.insert(u, pa.clone());
            points.insert(v, pb.clone());
            edges.push(DrawnEdge {
                ends: (u, v),
                color: EdgeColor::Blue,
                polyline: vec![pa, pb],
            });
        }
        PolylineDrawing { points, edges }
    }

    #[test]
    fn detector_fixtures() {
        // two disjoint edges
        let d = segment_drawing(&[((0, 0), (1, 0)), ((0, 2), (1, 2))]);
        assert_eq!(max_mutual_crossing(&d).unwrap(), 1);
        // X crossing
        let d = segment_drawing(&[((0, 0), (2, 2)), ((0, 2), (2, 0))]);
        assert_eq!(max_mutual_crossing(&d).unwrap(), 2);
        // three mutually crossing segments
        let d = segment_drawing(&[((0, 1), (4, 1)), ((1, 0), (3, 3)), ((1, 3), (3, 0))]);
        assert_eq!(max_mutual_crossing(&d).unwrap(), 3);
    }

    #[test]
    fn collinear_overlap_is_an_error() {
        let d = segment_drawing(&[((0, 0), (4, 0)), ((2, 0), (6, 0))]);
        assert!(matches!(
            max_mutual_crossing(&d),
            Err(Error::DegenerateOverlap(..))
        ));
    }

    #[test]
    fn k33_drawing_is_quasiplanar() {
        let d = layout_to_quasiplanar(&k33_layout()).unwrap();
        assert!(max_mutual_crossing(&d).unwrap() <= 2);
        assert!(d.no_polyline_through_third_vertex());
    }

    #[test]
    fn blue_blue_and_same_bypass_red_pairs_never_cross() {
        for l in [stacked3(), k33_layout()] {
            let d = layout_to_quasiplanar(&l).unwrap();
            for (i, j) in crossing_pairs(&d).unwrap() {
                let (a, b) = (&d.edges[i], &d.edges[j]);
                match (&a.color, &b.color) {
                    (EdgeColor::Blue, EdgeColor::Blue) => {
                        panic!("blue edges {:?} and {:?} cross", a.ends, b.ends)
                    }
                    (EdgeColor::Red { bypass: p }, EdgeColor::Red { bypass: q }) => {
                        assert_ne!(p, q, "same-bypass red edges cross")
                    }
                    _ => {}
                }
            }
        }
    }

    #[test]
    fn crossings_stay_near_bars() {
        let l = k33_layout();
        let d = layout_to_quasiplanar(&l).unwrap();
        let gap = {
            let xg = min_positive_gap(l.bars().flat_map(|b| [b.x_left, b.x_right]).collect());
            let yg = min_positive_gap(l.bars().map(|b| b.y).collect());
            xg.unwrap().min(yg.unwrap())
        };
        let gamma = big(gap) / Big::from_integer(BigInt::from(4));
        for p in crossing_points(&d).unwrap() {
            let near = l
                .bars()
                .any(|b| linf_distance_to_bar(&p, b.y, b.x_left, b.x_right) <= gamma);
            assert!(near, "crossing at {:?} is far from every bar", p);
        }
    }
}

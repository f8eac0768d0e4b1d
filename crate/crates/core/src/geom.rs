//! Exact 2D predicates shared by the drawing-facing modules.
//!
//! Everything is generic over the rational scalar so callers can work in
//! `Rational` (i64-backed) or promote to `BigRational` when coordinate
//! denominators grow.

use num_traits::Signed;
use std::cmp::Ordering;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Point<T> {
    pub x: T,
    pub y: T,
}

impl<T> Point<T> {
    pub fn new(x: T, y: T) -> Self {
        Point { x, y }
    }
}

/// Sign of the cross product (b - a) x (c - a): positive when a,b,c make a
/// left turn in a y-up coordinate system.
pub fn orient<T>(a: &Point<T>, b: &Point<T>, c: &Point<T>) -> Ordering
where
    T: Clone + Signed + Ord,
{
    let lhs = (b.x.clone() - a.x.clone()) * (c.y.clone() - a.y.clone());
    let rhs = (b.y.clone() - a.y.clone()) * (c.x.clone() - a.x.clone());
    lhs.cmp(&rhs)
}

fn in_box<T>(p: &Point<T>, a: &Point<T>, b: &Point<T>) -> bool
where
    T: Clone + Ord,
{
    let (xlo, xhi) = if a.x <= b.x {
        (&a.x, &b.x)
    } else {
        (&b.x, &a.x)
    };
    let (ylo, yhi) = if a.y <= b.y {
        (&a.y, &b.y)
    } else {
        (&b.y, &a.y)
    };
    *xlo <= p.x && p.x <= *xhi && *ylo <= p.y && p.y <= *yhi
}

/// How two closed segments meet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegMeet {
    Disjoint,
    /// A single common point (crossing or touching).
    Point,
    /// Collinear segments sharing more than one point.
    Overlap,
}

/// Classifies the intersection of closed segments ab and cd.
pub fn segments_meet<T>(a: &Point<T>, b: &Point<T>, c: &Point<T>, d: &Point<T>) -> SegMeet
where
    T: Clone + Signed + Ord,
{
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    use Ordering::Equal;
    if o1 == Equal && o2 == Equal {
        // collinear: count common points
        let mut hits = 0;
        for p in [c, d] {
            if in_box(p, a, b) {
                hits += 1;
            }
        }
        for p in [a, b] {
            if in_box(p, c, d) {
                hits += 1;
            }
        }
        // shared single endpoint counts twice (once from each side)
        return match hits {
            0 => SegMeet::Disjoint,
            1 | 2 => {
                // could still be an overlap when one segment lies inside the
                // other; distinguish by checking whether the two common
                // points coincide
                let common: Vec<&Point<T>> = [c, d]
                    .into_iter()
                    .filter(|p| in_box(p, a, b))
                    .chain([a, b].into_iter().filter(|p| in_box(p, c, d)))
                    .collect();
                if common.windows(2).all(|w| w[0] == w[1]) {
                    SegMeet::Point
                } else {
                    SegMeet::Overlap
                }
            }
            _ => {
                let common: Vec<&Point<T>> = [c, d]
                    .into_iter()
                    .filter(|p| in_box(p, a, b))
                    .chain([a, b].into_iter().filter(|p| in_box(p, c, d)))
                    .collect();
                if common.windows(2).all(|w| w[0] == w[1]) {
                    SegMeet::Point
                } else {
                    SegMeet::Overlap
                }
            }
        };
    }
    if o1 != o2 && o3 != o4 && o1 != Equal && o2 != Equal && o3 != Equal && o4 != Equal {
        return SegMeet::Point;
    }
    // improper: an endpoint on the other segment
    if (o1 == Equal && in_box(c, a, b))
        || (o2 == Equal && in_box(d, a, b))
        || (o3 == Equal && in_box(a, c, d))
        || (o4 == Equal && in_box(b, c, d))
    {
        return SegMeet::Point;
    }
    SegMeet::Disjoint
}

/// True when the open interiors of segments ab and cd share a point, or one
/// segment's endpoint lies in the other's interior. Shared endpoints alone
/// do not count.
pub fn segments_cross_properly<T>(a: &Point<T>, b: &Point<T>, c: &Point<T>, d: &Point<T>) -> bool
where
    T: Clone + Signed + Ord,
{
    if segments_meet(a, b, c, d) == SegMeet::Disjoint {
        return false;
    }
    // endpoint sharing is fine as long as that is the only contact
    let shared: Vec<&Point<T>> = [a, b]
        .into_iter()
        .filter(|p| **p == *c || **p == *d)
        .collect();
    match shared.len() {
        0 => true,
        1 => {
            // contact beyond the shared endpoint?
            let s = shared[0];
            let o1 = orient(a, b, c);
            let o2 = orient(a, b, d);
            if o1 == Ordering::Equal && o2 == Ordering::Equal {
                // collinear with shared endpoint: overlap iff more contact
                segments_meet(a, b, c, d) == SegMeet::Overlap
            } else {
                // non-collinear segments sharing an endpoint meet only there
                // unless another endpoint lies on the other segment interior
                let other_ab = if *a == *s { b } else { a };
                let other_cd = if *c == *s { d } else { c };
                (orient(a, b, other_cd) == Ordering::Equal && in_box(other_cd, a, b))
                    || (orient(c, d, other_ab) == Ordering::Equal && in_box(other_ab, c, d))
            }
        }
        _ => segments_meet(a, b, c, d) == SegMeet::Overlap,
    }
}

/// Intersection point of segments ab and cd when they meet in exactly one
/// point and are not collinear; `None` otherwise.
pub fn segment_intersection_point<T>(
    a: &Point<T>,
    b: &Point<T>,
    c: &Point<T>,
    d: &Point<T>,
) -> Option<Point<T>>
where
    T: Clone + Signed + Ord + std::ops::Div<Output = T>,
{
    if segments_meet(a, b, c, d) != SegMeet::Point {
        return None;
    }
    let rx = b.x.clone() - a.x.clone();
    let ry = b.y.clone() - a.y.clone();
    let sx = d.x.clone() - c.x.clone();
    let sy = d.y.clone() - c.y.clone();
    let denom = rx.clone() * sy.clone() - ry.clone() * sx.clone();
    if denom.is_zero() {
        return None; // collinear touch
    }
    let t = ((c.x.clone() - a.x.clone()) * sy - (c.y.clone() - a.y.clone()) * sx) / denom;
    Some(Point::new(
        a.x.clone() + t.clone() * rx,
        a.y.clone() + t * ry,
    ))
}

/// Compares two direction vectors in clockwise order starting from north
/// (0, +1). Directions must be nonzero.
pub fn cmp_clockwise_from_north<T>(u: &Point<T>, v: &Point<T>) -> Ordering
where
    T: Clone + Signed + Ord,
{
    let zero = u.x.clone() - u.x.clone();
    // half 0: east side including north, excluding south; half 1: west side
    let half = |d: &Point<T>| -> u8 {
        if d.x > zero || (d.x == zero && d.y > zero) {
            0
        } else {
            1
        }
    };
    let hu = half(u);
    let hv = half(v);
    if hu != hv {
        return hu.cmp(&hv);
    }
    // same half: u before v clockwise iff cross(u, v) < 0
    let cross = u.x.clone() * v.y.clone() - u.y.clone() * v.x.clone();
    cross.cmp(&zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn p(x: i64, y: i64) -> Point<Rational> {
        Point::new(Rational::from_integer(x), Rational::from_integer(y))
    }

    #[test]
    fn proper_crossing() {
        assert!(segments_cross_properly(
            &p(0, 0),
            &p(2, 2),
            &p(0, 2),
            &p(2, 0)
        ));
    }

    #[test]
    fn shared_endpoint_is_not_a_crossing() {
        assert!(!segments_cross_properly(
            &p(0, 0),
            &p(2, 2),
            &p(0, 0),
            &p(2, 0)
        ));
    }

    #[test]
    fn collinear_overlap_detected() {
        assert_eq!(
            segments_meet(&p(0, 0), &p(4, 0), &p(2, 0), &p(6, 0)),
            SegMeet::Overlap
        );
        assert!(segments_cross_properly(&p(0, 0), &p(4, 0), &p(2, 0), &p(6, 0)));
    }

    #[test]
    fn endpoint_on_interior_counts() {
        assert!(segments_cross_properly(
            &p(0, 0),
            &p(4, 0),
            &p(2, 0),
            &p(2, 3)
        ));
    }

    #[test]
    fn clockwise_order_from_north() {
        let north = p(0, 1);
        let east = p(1, 0);
        let south = p(0, -1);
        let west = p(-1, 0);
        let mut dirs = vec![west.clone(), south.clone(), east.clone(), north.clone()];
        dirs.sort_by(|a, b| cmp_clockwise_from_north(a, b));
        assert_eq!(dirs, vec![north, east, south, west]);
    }
}

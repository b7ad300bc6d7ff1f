//! Exact planar predicates over rationals.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: Q,
    pub y: Q,
}

impl Point {
    pub fn new(x: Q, y: Q) -> Self {
        Point { x, y }
    }

    pub fn int(x: i64, y: i64) -> Self {
        Point::new(q(x), q(y))
    }

    fn sub(&self, o: &Point) -> (Q, Q) {
        (&self.x - &o.x, &self.y - &o.y)
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Point {
    fn cmp(&self, other: &Self) -> Ordering {
        self.x.cmp(&other.x).then_with(|| self.y.cmp(&other.y))
    }
}

/// Twice the signed area of `abc`; positive for a left turn.
pub fn cross(a: &Point, b: &Point, c: &Point) -> Q {
    let (ux, uy) = b.sub(a);
    let (vx, vy) = c.sub(a);
    ux * vy - uy * vx
}

pub fn dist2(a: &Point, b: &Point) -> Q {
    let (dx, dy) = b.sub(a);
    &dx * &dx + &dy * &dy
}

/// `p` lies on the closed segment `ab`.
pub fn on_segment(p: &Point, a: &Point, b: &Point) -> bool {
    cross(a, b, p).is_zero()
        && p.x >= a.x.clone().min(b.x.clone())
        && p.x <= a.x.clone().max(b.x.clone())
        && p.y >= a.y.clone().min(b.y.clone())
        && p.y <= a.y.clone().max(b.y.clone())
}

/// Closed segments `ab` and `cd` share at least one point.
pub fn segments_intersect(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    let d1 = cross(c, d, a).signum();
    let d2 = cross(c, d, b).signum();
    let d3 = cross(a, b, c).signum();
    let d4 = cross(a, b, d).signum();
    if (&d1 * &d2).is_negative() && (&d3 * &d4).is_negative() {
        return true;
    }
    (d1.is_zero() && on_segment(a, c, d))
        || (d2.is_zero() && on_segment(b, c, d))
        || (d3.is_zero() && on_segment(c, a, b))
        || (d4.is_zero() && on_segment(d, a, b))
}

/// Squared distance from `p` to the closed segment `ab`.
pub fn point_segment_dist2(p: &Point, a: &Point, b: &Point) -> Q {
    let (dx, dy) = b.sub(a);
    let len2 = &dx * &dx + &dy * &dy;
    if len2.is_zero() {
        return dist2(p, a);
    }
    let (px, py) = p.sub(a);
    let t = (&px * &dx + &py * &dy) / &len2;
    if t <= Q::zero() {
        dist2(p, a)
    } else if t >= Q::one() {
        dist2(p, b)
    } else {
        let foot = Point::new(&a.x + &t * &dx, &a.y + &t * &dy);
        dist2(p, &foot)
    }
}

pub fn segment_segment_dist2(a: &Point, b: &Point, c: &Point, d: &Point) -> Q {
    if segments_intersect(a, b, c, d) {
        return Q::zero();
    }
    [
        point_segment_dist2(a, c, d),
        point_segment_dist2(b, c, d),
        point_segment_dist2(c, a, b),
        point_segment_dist2(d, a, b),
    ]
    .into_iter()
    .min()
    .expect("four candidates")
}

/// Convex hull, counter-clockwise, without collinear points. Degenerate
/// inputs give one or two points.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= Q::zero() {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= Q::zero() {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Boundary segments of a polygon given as a cyclic point list; one point
/// gives a zero-length segment, two points one segment.
pub fn polygon_edges(poly: &[Point]) -> Vec<(Point, Point)> {
    match poly.len() {
        0 => Vec::new(),
        1 => vec![(poly[0].clone(), poly[0].clone())],
        2 => vec![(poly[0].clone(), poly[1].clone())],
        n => (0..n).map(|i| (poly[i].clone(), poly[(i + 1) % n].clone())).collect(),
    }
}

/// Strictly convex and counter-clockwise, with at least three corners.
pub fn is_strictly_convex(poly: &[Point]) -> bool {
    let n = poly.len();
    n >= 3
        && (0..n).all(|i| cross(&poly[i], &poly[(i + 1) % n], &poly[(i + 2) % n]).is_positive())
}

/// Position of `p` relative to a convex CCW polygon.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Where {
    Inside,
    Boundary,
    Outside,
}

pub fn locate(p: &Point, poly: &[Point]) -> Where {
    if poly.len() < 3 {
        let on = polygon_edges(poly).iter().any(|(a, b)| on_segment(p, a, b));
        return if on { Where::Boundary } else { Where::Outside };
    }
    let mut boundary = false;
    for (a, b) in polygon_edges(poly) {
        let c = cross(&a, &b, p);
        if c.is_negative() {
            return Where::Outside;
        }
        if c.is_zero() {
            boundary = true;
        }
    }
    if boundary {
        Where::Boundary
    } else {
        Where::Inside
    }
}

/// Squared distance from `p` to a (possibly degenerate) convex polygon,
/// zero when inside.
pub fn point_polygon_dist2(p: &Point, poly: &[Point]) -> Q {
    if poly.len() >= 3 && locate(p, poly) != Where::Outside {
        return Q::zero();
    }
    polygon_edges(poly)
        .iter()
        .map(|(a, b)| point_segment_dist2(p, a, b))
        .min()
        .unwrap_or_else(Q::zero)
}

pub fn segment_polygon_dist2(a: &Point, b: &Point, poly: &[Point]) -> Q {
    if poly.len() >= 3 && (locate(a, poly) != Where::Outside || locate(b, poly) != Where::Outside) {
        return Q::zero();
    }
    polygon_edges(poly)
        .iter()
        .map(|(c, d)| segment_segment_dist2(a, b, c, d))
        .min()
        .unwrap_or_else(Q::zero)
}

pub fn polygon_polygon_dist2(p: &[Point], r: &[Point]) -> Q {
    if p.iter().any(|x| r.len() >= 3 && locate(x, r) != Where::Outside)
        || r.iter().any(|x| p.len() >= 3 && locate(x, p) != Where::Outside)
    {
        return Q::zero();
    }
    let mut best: Option<Q> = None;
    for (a, b) in polygon_edges(p) {
        for (c, d) in polygon_edges(r) {
            let x = segment_segment_dist2(&a, &b, &c, &d);
            best = Some(best.map_or(x.clone(), |y| y.min(x)));
        }
    }
    best.unwrap_or_else(Q::zero)
}

/// Parameter interval `[t0, t1] ⊆ [0, 1]` of segment `ab` inside the closed
/// convex CCW polygon, if any.
pub fn clip_segment(a: &Point, b: &Point, poly: &[Point]) -> Option<(Q, Q)> {
    let mut lo = Q::zero();
    let mut hi = Q::one();
    let (dx, dy) = b.sub(a);
    for (p, r) in polygon_edges(poly) {
        // inside iff cross(p, r, a + t d) >= 0, linear in t
        let c0 = cross(&p, &r, a);
        let (ex, ey) = r.sub(&p);
        let slope = &ex * &dy - &ey * &dx;
        if slope.is_zero() {
            if c0.is_negative() {
                return None;
            }
            continue;
        }
        let t = -&c0 / &slope;
        if slope.is_positive() {
            lo = lo.max(t);
        } else {
            hi = hi.min(t);
        }
        if lo > hi {
            return None;
        }
    }
    Some((lo, hi))
}

/// `poly ∩ {y = y0}` as an x-interval, for a convex polygon.
pub fn horizontal_section(poly: &[Point], y0: &Q) -> Option<(Q, Q)> {
    let mut xs: Vec<Q> = Vec::new();
    for (a, b) in polygon_edges(poly) {
        if a.y == b.y {
            if &a.y == y0 {
                xs.push(a.x.clone());
                xs.push(b.x.clone());
            }
            continue;
        }
        let (lo, hi) = if a.y < b.y { (&a, &b) } else { (&b, &a) };
        if &lo.y <= y0 && y0 <= &hi.y {
            let t = (y0 - &lo.y) / (&hi.y - &lo.y);
            xs.push(&lo.x + t * (&hi.x - &lo.x));
        }
    }
    let min = xs.iter().min()?.clone();
    let max = xs.iter().max()?.clone();
    Some((min, max))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq() -> Vec<Point> {
        vec![Point::int(0, 0), Point::int(2, 0), Point::int(2, 2), Point::int(0, 2)]
    }

    #[test]
    fn crossing_diagonals_intersect() {
        assert!(segments_intersect(&Point::int(0, 0), &Point::int(2, 2), &Point::int(0, 2), &Point::int(2, 0)));
        assert!(!segments_intersect(&Point::int(0, 0), &Point::int(1, 0), &Point::int(0, 1), &Point::int(1, 1)));
    }

    #[test]
    fn hull_drops_interior_and_collinear_points() {
        let mut pts = sq();
        pts.push(Point::int(1, 1));
        pts.push(Point::int(1, 0));
        let h = convex_hull(&pts);
        assert_eq!(h.len(), 4);
        assert!(is_strictly_convex(&h));
    }

    #[test]
    fn locate_and_distance() {
        let h = convex_hull(&sq());
        assert_eq!(locate(&Point::int(1, 1), &h), Where::Inside);
        assert_eq!(locate(&Point::int(2, 1), &h), Where::Boundary);
        assert_eq!(locate(&Point::int(3, 1), &h), Where::Outside);
        assert_eq!(point_polygon_dist2(&Point::int(4, 1), &h), q(4));
    }

    #[test]
    fn clipping_a_through_segment() {
        let h = convex_hull(&sq());
        let (lo, hi) = clip_segment(&Point::int(-1, 1), &Point::int(3, 1), &h).unwrap();
        assert_eq!((lo, hi), (ratio(1, 4), ratio(3, 4)));
        assert!(clip_segment(&Point::int(-1, 3), &Point::int(3, 3), &h).is_none());
    }

    #[test]
    fn section_of_a_square() {
        let h = convex_hull(&sq());
        assert_eq!(horizontal_section(&h, &q(1)), Some((q(0), q(2))));
        assert_eq!(horizontal_section(&h, &q(3)), None);
    }
}

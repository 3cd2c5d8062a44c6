//! Exact planar geometry over arbitrary-precision rationals.
//!
//! All coordinates are rationals with big-integer parts and every predicate
//! is decided exactly; no floating point enters any decision. Crossing
//! queries against the anchor segment resolve degeneracies through an
//! implicit infinitesimal offset of the source anchor along the left normal
//! of the segment, so crossing parities are well defined for every curve
//! that stays clear of the anchor points themselves.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

/// Exact scalar used for all coordinates.
pub type Rational = BigRational;

/// Integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// The rational `num/den`. Panics if `den` is zero.
pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("anchor endpoints must be distinct")]
    CoincidentAnchors,
    #[error("curve touches an anchor point")]
    CurveThroughAnchor,
    #[error("bodies do not intersect")]
    NoIntersection,
    #[error("a convex body needs at least one vertex")]
    EmptyBody,
    #[error("consecutive vertices coincide")]
    DuplicateVertex,
    #[error("vertices must be in strictly convex counterclockwise position")]
    ConvexViolation,
    #[error("axis box needs xmin < xmax and ymin < ymax")]
    EmptyBox,
    #[error("a polyline needs at least one point")]
    EmptyPolyline,
}

/// A point (or vector) with exact rational coordinates.
///
/// The derived ordering is lexicographic: by `x`, then by `y`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::new(rat(x), rat(y))
    }

    /// Componentwise difference, `self - other`.
    pub fn sub(&self, other: &Point) -> Point {
        Point::new(&self.x - &other.x, &self.y - &other.y)
    }

    /// Componentwise sum.
    pub fn add(&self, other: &Point) -> Point {
        Point::new(&self.x + &other.x, &self.y + &other.y)
    }

    /// Scalar multiple.
    pub fn scaled(&self, factor: &Rational) -> Point {
        Point::new(&self.x * factor, &self.y * factor)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Counterclockwise quarter turn of a vector.
pub fn rot90(v: &Point) -> Point {
    Point::new(-v.y.clone(), v.x.clone())
}

/// Cross product of two vectors.
pub fn cross(a: &Point, b: &Point) -> Rational {
    &a.x * &b.y - &a.y * &b.x
}

/// Dot product of two vectors.
pub fn dot(a: &Point, b: &Point) -> Rational {
    &a.x * &b.x + &a.y * &b.y
}

/// Sign of an exact quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(value: &Rational) -> Sign {
        if value.is_positive() {
            Sign::Positive
        } else if value.is_negative() {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    pub fn value(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }
}

/// Orientation of `c` relative to the directed line through `a` and `b`:
/// `Positive` is a left turn, `Negative` a right turn, `Zero` collinear.
pub fn orient(a: &Point, b: &Point, c: &Point) -> Sign {
    Sign::of(&cross(&b.sub(a), &c.sub(a)))
}

/// The fixed pair of query points.
///
/// Crossing predicates act as if the source point were displaced by an
/// infinitesimal along the left normal of the segment. The displacement is
/// never materialized; collinear cases are decided by the sign of the
/// first-order term instead. The only unresolved input is a curve through
/// one of the anchor points, which is an error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Anchor {
    s: Point,
    t: Point,
    dir: Point,
}

impl Anchor {
    pub fn new(s: Point, t: Point) -> Result<Anchor, GeomError> {
        if s == t {
            return Err(GeomError::CoincidentAnchors);
        }
        let dir = t.sub(&s);
        Ok(Anchor { s, t, dir })
    }

    pub fn source(&self) -> &Point {
        &self.s
    }

    pub fn target(&self) -> &Point {
        &self.t
    }

    /// Vector from source to target.
    pub fn direction(&self) -> &Point {
        &self.dir
    }

    /// Side of the perturbed anchor line on which `p` lies; never `Zero`.
    ///
    /// For `p` off the line this is the plain orientation. For `p` on the
    /// line the result is the sign of the first-order term of the perturbed
    /// determinant, which vanishes only for `p` equal to the target anchor.
    pub fn orient_perturbed(&self, p: &Point) -> Result<Sign, GeomError> {
        match orient(&self.s, &self.t, p) {
            Sign::Zero => {
                let w = p.sub(&self.s);
                let tie = dot(&self.dir, &w) - dot(&self.dir, &self.dir);
                match Sign::of(&tie) {
                    Sign::Zero => Err(GeomError::CurveThroughAnchor),
                    s => Ok(s),
                }
            }
            s => Ok(s),
        }
    }

    /// Whether segment `ab` properly crosses the perturbed anchor segment.
    ///
    /// `ab` must not contain an anchor point.
    pub fn segment_crossing_parity(&self, a: &Point, b: &Point) -> Result<bool, GeomError> {
        let sa = self.orient_perturbed(a)?;
        let sb = self.orient_perturbed(b)?;
        if sa == sb {
            return Ok(false);
        }
        let o_t = orient(a, b, &self.t);
        let o_s = match orient(a, b, &self.s) {
            // The source lies on the line through ab; the first-order
            // term of the perturbed source decides.
            Sign::Zero => Sign::of(&dot(&b.sub(a), &self.dir)),
            s => s,
        };
        if o_s == Sign::Zero || o_t == Sign::Zero {
            // Only reachable when ab runs through an anchor point.
            return Err(GeomError::CurveThroughAnchor);
        }
        Ok(o_s != o_t)
    }

    /// Crossing parity of a whole polyline: XOR over its segments.
    pub fn polyline_crossing_parity(&self, line: &Polyline) -> Result<bool, GeomError> {
        let mut parity = false;
        for pair in line.points().windows(2) {
            parity ^= self.segment_crossing_parity(&pair[0], &pair[1])?;
        }
        Ok(parity)
    }
}

/// Polygonal curve.
///
/// Construction collapses coincident consecutive points; a curve that
/// collapses to a single point is kept and has crossing parity zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polyline {
    points: Vec<Point>,
}

impl Polyline {
    pub fn new(points: Vec<Point>) -> Result<Polyline, GeomError> {
        let mut collapsed: Vec<Point> = Vec::with_capacity(points.len());
        for p in points {
            if collapsed.last() != Some(&p) {
                collapsed.push(p);
            }
        }
        if collapsed.is_empty() {
            return Err(GeomError::EmptyPolyline);
        }
        Ok(Polyline { points: collapsed })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn first(&self) -> &Point {
        self.points.first().expect("polyline is never empty")
    }

    pub fn last(&self) -> &Point {
        self.points.last().expect("polyline is never empty")
    }

    pub fn reversed(&self) -> Polyline {
        let mut points = self.points.clone();
        points.reverse();
        Polyline { points }
    }
}

/// Closed axis-aligned bounding rectangle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundingBox {
    pub xmin: Rational,
    pub ymin: Rational,
    pub xmax: Rational,
    pub ymax: Rational,
}

impl BoundingBox {
    /// Closed overlap test; shared edges and corners count.
    pub fn overlaps(&self, other: &BoundingBox) -> bool {
        self.xmin <= other.xmax
            && other.xmin <= self.xmax
            && self.ymin <= other.ymax
            && other.ymin <= self.ymax
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.xmin <= p.x && p.x <= self.xmax && self.ymin <= p.y && p.y <= self.ymax
    }
}

/// A compact convex set: one point, a segment, or a strictly convex polygon
/// in counterclockwise order. Bodies are closed; they contain their boundary.
#[derive(Clone, PartialEq, Eq)]
pub struct ConvexBody {
    vertices: Vec<Point>,
    bbox: BoundingBox,
    axis_aligned: bool,
}

impl fmt::Debug for ConvexBody {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.vertices.iter()).finish()
    }
}

impl ConvexBody {
    /// Validates and builds a body from its vertex list.
    ///
    /// One vertex is a point, two distinct vertices a segment, three or
    /// more must form a strictly convex counterclockwise polygon (no three
    /// consecutive vertices collinear, winding number one).
    pub fn new(vertices: Vec<Point>) -> Result<ConvexBody, GeomError> {
        match vertices.len() {
            0 => Err(GeomError::EmptyBody),
            1 => Ok(Self::finish(vertices)),
            2 => {
                if vertices[0] == vertices[1] {
                    Err(GeomError::DuplicateVertex)
                } else {
                    Ok(Self::finish(vertices))
                }
            }
            n => {
                for i in 0..n {
                    if vertices[i] == vertices[(i + 1) % n] {
                        return Err(GeomError::DuplicateVertex);
                    }
                }
                for i in 0..n {
                    let o = orient(&vertices[i], &vertices[(i + 1) % n], &vertices[(i + 2) % n]);
                    if o != Sign::Positive {
                        return Err(GeomError::ConvexViolation);
                    }
                }
                // Strict left turns alone admit polygons winding more than
                // once; edge directions must sweep exactly one full turn.
                let upper: Vec<bool> = (0..n)
                    .map(|i| {
                        let e = vertices[(i + 1) % n].sub(&vertices[i]);
                        e.y.is_positive() || (e.y.is_zero() && e.x.is_positive())
                    })
                    .collect();
                let transitions = (0..n).filter(|&i| upper[i] != upper[(i + 1) % n]).count();
                if transitions != 2 {
                    return Err(GeomError::ConvexViolation);
                }
                Ok(Self::finish(vertices))
            }
        }
    }

    /// Single-point body.
    pub fn point(p: Point) -> ConvexBody {
        Self::finish(vec![p])
    }

    /// Segment body with distinct endpoints.
    pub fn segment(a: Point, b: Point) -> Result<ConvexBody, GeomError> {
        ConvexBody::new(vec![a, b])
    }

    /// Closed axis-aligned rectangle with positive width and height.
    pub fn axis_box(
        xmin: Rational,
        ymin: Rational,
        xmax: Rational,
        ymax: Rational,
    ) -> Result<ConvexBody, GeomError> {
        if xmin >= xmax || ymin >= ymax {
            return Err(GeomError::EmptyBox);
        }
        let vertices = vec![
            Point::new(xmin.clone(), ymin.clone()),
            Point::new(xmax.clone(), ymin),
            Point::new(xmax, ymax.clone()),
            Point::new(xmin, ymax),
        ];
        Ok(Self::finish(vertices))
    }

    fn finish(vertices: Vec<Point>) -> ConvexBody {
        let mut xmin = vertices[0].x.clone();
        let mut xmax = xmin.clone();
        let mut ymin = vertices[0].y.clone();
        let mut ymax = ymin.clone();
        for v in &vertices[1..] {
            if v.x < xmin {
                xmin = v.x.clone();
            }
            if v.x > xmax {
                xmax = v.x.clone();
            }
            if v.y < ymin {
                ymin = v.y.clone();
            }
            if v.y > ymax {
                ymax = v.y.clone();
            }
        }
        let bbox = BoundingBox { xmin, ymin, xmax, ymax };
        let axis_aligned = vertices.len() == 4
            && (0..4).all(|i| {
                let e = vertices[(i + 1) % 4].sub(&vertices[i]);
                e.x.is_zero() || e.y.is_zero()
            });
        ConvexBody { vertices, bbox, axis_aligned }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn bounding_box(&self) -> &BoundingBox {
        &self.bbox
    }

    /// The bounding box, when the body is exactly that rectangle.
    pub fn as_axis_box(&self) -> Option<&BoundingBox> {
        if self.axis_aligned { Some(&self.bbox) } else { None }
    }

    /// Closed containment test.
    pub fn contains(&self, p: &Point) -> bool {
        match self.vertices.len() {
            1 => self.vertices[0] == *p,
            2 => {
                let a = &self.vertices[0];
                let b = &self.vertices[1];
                if orient(a, b, p) != Sign::Zero {
                    return false;
                }
                let e = b.sub(a);
                let w = p.sub(a);
                let along = dot(&w, &e);
                !along.is_negative() && along <= dot(&e, &e)
            }
            n => {
                if !self.bbox.contains(p) {
                    return false;
                }
                (0..n).all(|i| {
                    orient(&self.vertices[i], &self.vertices[(i + 1) % n], p) != Sign::Negative
                })
            }
        }
    }

    /// Directed edges; one edge for a segment, none for a point.
    fn edge_list(&self) -> Vec<(&Point, &Point)> {
        match self.vertices.len() {
            0 | 1 => Vec::new(),
            2 => vec![(&self.vertices[0], &self.vertices[1])],
            n => (0..n)
                .map(|i| (&self.vertices[i], &self.vertices[(i + 1) % n]))
                .collect(),
        }
    }
}

fn projection_range(body: &ConvexBody, axis: &Point) -> (Rational, Rational) {
    let mut lo = dot(&body.vertices()[0], axis);
    let mut hi = lo.clone();
    for v in &body.vertices()[1..] {
        let d = dot(v, axis);
        if d < lo {
            lo = d;
        } else if d > hi {
            hi = d;
        }
    }
    (lo, hi)
}

/// Whether two closed bodies share at least one point.
///
/// Boundary contact counts, including contact at a single vertex. Decided
/// by separating-axis projections onto the edge normals and edge directions
/// of both bodies, which is exact for convex polygons including the
/// degenerate segment and point cases.
pub fn bodies_intersect(k1: &ConvexBody, k2: &ConvexBody) -> bool {
    if !k1.bounding_box().overlaps(k2.bounding_box()) {
        return false;
    }
    if k1.axis_aligned && k2.axis_aligned {
        // Axis-aligned rectangles equal their bounding boxes.
        return true;
    }
    let mut axes: Vec<Point> = Vec::new();
    for body in [k1, k2] {
        for (a, b) in body.edge_list() {
            let d = b.sub(a);
            axes.push(rot90(&d));
            axes.push(d);
        }
    }
    if axes.is_empty() {
        // Two single points; the bounding boxes overlapped, so they match.
        return k1.vertices()[0] == k2.vertices()[0];
    }
    for axis in &axes {
        let (lo1, hi1) = projection_range(k1, axis);
        let (lo2, hi2) = projection_range(k2, axis);
        if hi1 < lo2 || hi2 < lo1 {
            return false;
        }
    }
    true
}

/// Deterministic base point of a body: its lexicographically least vertex,
/// which is also the lexicographically least point of the whole body.
pub fn representative_point(k: &ConvexBody) -> Point {
    k.vertices()
        .iter()
        .min()
        .expect("bodies have at least one vertex")
        .clone()
}

/// Unique intersection point of the open segments `ab` and `cd`, when they
/// properly cross.
fn proper_crossing(a: &Point, b: &Point, c: &Point, d: &Point) -> Option<Point> {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    let strictly_opposite =
        |x: Sign, y: Sign| x != Sign::Zero && y != Sign::Zero && x != y;
    if !(strictly_opposite(o1, o2) && strictly_opposite(o3, o4)) {
        return None;
    }
    let ab = b.sub(a);
    let cd = d.sub(c);
    let t = cross(&c.sub(a), &cd) / cross(&ab, &cd);
    Some(a.add(&ab.scaled(&t)))
}

/// Candidate extreme points of `k1 ∩ k2`: vertices of either body contained
/// in the other plus proper edge crossings. The list is nonempty exactly
/// when the bodies intersect, and it contains every vertex of the
/// intersection polygon.
pub fn intersection_points(k1: &ConvexBody, k2: &ConvexBody) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::new();
    for v in k1.vertices() {
        if k2.contains(v) {
            out.push(v.clone());
        }
    }
    for v in k2.vertices() {
        if k1.contains(v) {
            out.push(v.clone());
        }
    }
    for (a, b) in k1.edge_list() {
        for (c, d) in k2.edge_list() {
            if let Some(p) = proper_crossing(a, b, c, d) {
                out.push(p);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Deterministic point of `k1 ∩ k2`: the lexicographically least vertex of
/// the intersection polygon.
pub fn intersection_witness(k1: &ConvexBody, k2: &ConvexBody) -> Result<Point, GeomError> {
    if let (Some(b1), Some(b2)) = (k1.as_axis_box(), k2.as_axis_box()) {
        if !b1.overlaps(b2) {
            return Err(GeomError::NoIntersection);
        }
        let xmin = b1.xmin.clone().max(b2.xmin.clone());
        let ymin = b1.ymin.clone().max(b2.ymin.clone());
        return Ok(Point::new(xmin, ymin));
    }
    intersection_points(k1, k2)
        .into_iter()
        .min()
        .ok_or(GeomError::NoIntersection)
}

/// Two-edge polyline from the base point of `ku` through a shared witness
/// point to the base point of `kv`. The first edge stays in `ku`, the
/// second in `kv`; coincident consecutive points collapse, so identical or
/// point-touching bodies yield shorter (possibly single-point) curves.
pub fn connector_curve(ku: &ConvexBody, kv: &ConvexBody) -> Result<Polyline, GeomError> {
    let witness = intersection_witness(ku, kv)?;
    Polyline::new(vec![representative_point(ku), witness, representative_point(kv)])
}

/// Strict convex hull of a point set; collinear intermediate points are
/// dropped. Yields a point, segment, or polygon body.
pub fn convex_hull(points: &[Point]) -> Result<ConvexBody, GeomError> {
    let mut pts: Vec<Point> = points.to_vec();
    if pts.is_empty() {
        return Err(GeomError::EmptyBody);
    }
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return ConvexBody::new(pts);
    }
    let mut lower: Vec<Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && orient(&lower[lower.len() - 2], &lower[lower.len() - 1], p) != Sign::Positive
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && orient(&upper[upper.len() - 2], &upper[upper.len() - 1], p) != Sign::Positive
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    ConvexBody::new(lower)
}

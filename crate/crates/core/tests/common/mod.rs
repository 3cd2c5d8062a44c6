//! Shared test support: the explicit-epsilon reference predicates, an
//! explicit shadow forest mirroring what the parity union-find encodes
//! implicitly, and random generators for geometric inputs.
//!
//! Everything here is deliberately independent of the implementation paths
//! it checks: the epsilon oracle works on a materialized perturbed point
//! with plain orientation tests, and the shadow forest stores labeled
//! edges explicitly and walks paths.

#![allow(dead_code)]

use rand::RngExt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use stsep::geom::{
    Anchor, ConvexBody, Point, Polyline, Rational, Sign, convex_hull, frac, intersection_points,
    orient, rat, rot90,
};

/// The perturbed source materialized at a concrete epsilon.
pub fn s_prime(anchor: &Anchor, eps: &Rational) -> Point {
    anchor
        .source()
        .add(&rot90(anchor.direction()).scaled(eps))
}

/// Plain orientation against the segment from the materialized perturbed
/// source to the target.
pub fn orient_eps(anchor: &Anchor, eps: &Rational, p: &Point) -> Sign {
    orient(&s_prime(anchor, eps), anchor.target(), p)
}

fn strictly_opposite(a: Sign, b: Sign) -> bool {
    a != Sign::Zero && b != Sign::Zero && a != b
}

/// Proper-crossing test of segment `ab` against the materialized perturbed
/// anchor segment, using only plain orientation predicates.
pub fn segment_crossing_eps(anchor: &Anchor, eps: &Rational, a: &Point, b: &Point) -> bool {
    let sp = s_prime(anchor, eps);
    let t = anchor.target();
    let o1 = orient(&sp, t, a);
    let o2 = orient(&sp, t, b);
    let o3 = orient(a, b, &sp);
    let o4 = orient(a, b, t);
    strictly_opposite(o1, o2) && strictly_opposite(o3, o4)
}

/// Halves epsilon until three consecutive evaluations agree.
fn stabilize<T: PartialEq + Copy>(mut eval: impl FnMut(&Rational) -> T) -> T {
    let mut eps = frac(1, 1 << 10);
    let mut last = eval(&eps);
    let mut streak = 1;
    for _ in 0..300 {
        eps /= rat(2);
        let cur = eval(&eps);
        if cur == last {
            streak += 1;
            if streak >= 3 {
                return cur;
            }
        } else {
            streak = 1;
            last = cur;
        }
    }
    panic!("explicit-epsilon evaluation did not stabilize");
}

/// Stable explicit-epsilon orientation of `p` against the anchor line.
pub fn stable_orient_eps(anchor: &Anchor, p: &Point) -> Sign {
    stabilize(|eps| orient_eps(anchor, eps, p))
}

/// Stable explicit-epsilon crossing verdict for segment `ab`.
pub fn stable_segment_crossing_eps(anchor: &Anchor, a: &Point, b: &Point) -> bool {
    stabilize(|eps| segment_crossing_eps(anchor, eps, a, b))
}

/// Stable explicit-epsilon crossing parity of a whole polyline.
pub fn stable_polyline_parity_eps(anchor: &Anchor, line: &Polyline) -> bool {
    stabilize(|eps| {
        let mut parity = false;
        for pair in line.points().windows(2) {
            parity ^= segment_crossing_eps(anchor, eps, &pair[0], &pair[1]);
        }
        parity
    })
}

/// Whether the closed segment `ab` contains `q`.
pub fn segment_contains_point(a: &Point, b: &Point, q: &Point) -> bool {
    if orient(a, b, q) != Sign::Zero {
        return false;
    }
    q.x >= a.x.clone().min(b.x.clone())
        && q.x <= a.x.clone().max(b.x.clone())
        && q.y >= a.y.clone().min(b.y.clone())
        && q.y <= a.y.clone().max(b.y.clone())
}

/// Whether no segment of the point chain passes through an anchor; curves
/// through an anchor have undefined crossing parity.
pub fn chain_avoids_anchors(anchor: &Anchor, points: &[Point]) -> bool {
    if points.len() == 1 {
        return points[0] != *anchor.source() && points[0] != *anchor.target();
    }
    points.windows(2).all(|pair| {
        !segment_contains_point(&pair[0], &pair[1], anchor.source())
            && !segment_contains_point(&pair[0], &pair[1], anchor.target())
    })
}

/// Closed segment intersection decided with orientation signs only; used
/// as an independent route for the body intersection test.
pub fn segments_intersect(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if strictly_opposite(o1, o2) && strictly_opposite(o3, o4) {
        return true;
    }
    let on_segment = |p: &Point, q: &Point, r: &Point| -> bool {
        // r collinear with pq; is it between them?
        r.x >= p.x.clone().min(q.x.clone())
            && r.x <= p.x.clone().max(q.x.clone())
            && r.y >= p.y.clone().min(q.y.clone())
            && r.y <= p.y.clone().max(q.y.clone())
    };
    (o1 == Sign::Zero && on_segment(a, b, c))
        || (o2 == Sign::Zero && on_segment(a, b, d))
        || (o3 == Sign::Zero && on_segment(c, d, a))
        || (o4 == Sign::Zero && on_segment(c, d, b))
}

fn edges(body: &ConvexBody) -> Vec<(Point, Point)> {
    let v = body.vertices();
    match v.len() {
        0 | 1 => Vec::new(),
        2 => vec![(v[0].clone(), v[1].clone())],
        n => (0..n).map(|i| (v[i].clone(), v[(i + 1) % n].clone())).collect(),
    }
}

/// Independent intersection test: some vertex of one body lies in the
/// other, or some pair of edges intersects.
pub fn bodies_intersect_oracle(k1: &ConvexBody, k2: &ConvexBody) -> bool {
    if k1.vertices().iter().any(|v| k2.contains(v)) {
        return true;
    }
    if k2.vertices().iter().any(|v| k1.contains(v)) {
        return true;
    }
    for (a, b) in edges(k1) {
        for (c, d) in edges(k2) {
            if segments_intersect(&a, &b, &c, &d) {
                return true;
            }
        }
    }
    false
}

/// Explicit forest with labeled edges: the ground truth for what the
/// parity union-find encodes.
#[derive(Default, Clone)]
pub struct ShadowForest {
    adj: Vec<Vec<(usize, bool)>>,
}

impl ShadowForest {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn add_node(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize, parity: bool) {
        self.adj[u].push((v, parity));
        self.adj[v].push((u, parity));
    }

    /// XOR of edge labels along the tree path from `a` to `b`, or `None`
    /// if they are in different trees.
    pub fn path_parity(&self, a: usize, b: usize) -> Option<bool> {
        if a == b {
            return Some(false);
        }
        let mut seen = vec![false; self.adj.len()];
        let mut stack = vec![(a, false)];
        seen[a] = true;
        while let Some((node, parity)) = stack.pop() {
            for &(next, label) in &self.adj[node] {
                if !seen[next] {
                    let p = parity ^ label;
                    if next == b {
                        return Some(p);
                    }
                    seen[next] = true;
                    stack.push((next, p));
                }
            }
        }
        None
    }

    pub fn connected(&self, a: usize, b: usize) -> bool {
        self.path_parity(a, b).is_some()
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random point with small rational coordinates around `(cx, cy)`.
pub fn random_point_near(rng: &mut ChaCha8Rng, cx: i64, cy: i64, radius: i64) -> Point {
    let den = rng.random_range(1..=4);
    let dx = rng.random_range(-radius * den..=radius * den);
    let dy = rng.random_range(-radius * den..=radius * den);
    Point::new(rat(cx) + frac(dx, den), rat(cy) + frac(dy, den))
}

/// Random full-dimensional convex body near `(cx, cy)` avoiding both
/// anchors.
pub fn random_convex_body(
    rng: &mut ChaCha8Rng,
    anchor: &Anchor,
    cx: i64,
    cy: i64,
    radius: i64,
) -> ConvexBody {
    loop {
        let n = rng.random_range(3..=8);
        let points: Vec<Point> = (0..n)
            .map(|_| random_point_near(rng, cx, cy, radius))
            .collect();
        let Ok(body) = convex_hull(&points) else { continue };
        if body.vertices().len() < 3 {
            continue;
        }
        if body.contains(anchor.source()) || body.contains(anchor.target()) {
            continue;
        }
        return body;
    }
}

/// Random pair of intersecting convex bodies avoiding both anchors.
pub fn random_intersecting_pair(
    rng: &mut ChaCha8Rng,
    anchor: &Anchor,
) -> (ConvexBody, ConvexBody) {
    loop {
        let cx = rng.random_range(-12..=12);
        let cy = rng.random_range(-12..=12);
        let k1 = random_convex_body(rng, anchor, cx, cy, 4);
        let dx = rng.random_range(-2..=2);
        let dy = rng.random_range(-2..=2);
        let k2 = random_convex_body(rng, anchor, cx + dx, cy + dy, 4);
        if stsep::geom::bodies_intersect(&k1, &k2) {
            return (k1, k2);
        }
    }
}

/// Random point of a convex body: a random convex combination of its
/// vertices with exact rational weights.
pub fn random_point_in_body(rng: &mut ChaCha8Rng, body: &ConvexBody) -> Point {
    random_convex_combination(rng, body.vertices())
}

/// Random convex combination of a nonempty point set.
pub fn random_convex_combination(rng: &mut ChaCha8Rng, points: &[Point]) -> Point {
    loop {
        let weights: Vec<i64> = points.iter().map(|_| rng.random_range(0..=8)).collect();
        let total: i64 = weights.iter().sum();
        if total == 0 {
            continue;
        }
        let mut acc = Point::new(rat(0), rat(0));
        for (p, &w) in points.iter().zip(&weights) {
            acc = acc.add(&p.scaled(&frac(w, total)));
        }
        return acc;
    }
}

/// Random polyline from `from` to `to` inside the union of an intersecting
/// pair: a prefix in `k1`, a pivot in the intersection, a suffix in `k2`.
pub fn random_in_union_polyline(
    rng: &mut ChaCha8Rng,
    k1: &ConvexBody,
    k2: &ConvexBody,
    from: &Point,
    to: &Point,
) -> Polyline {
    let shared = intersection_points(k1, k2);
    assert!(!shared.is_empty(), "bodies must intersect");
    let pivot = random_convex_combination(rng, &shared);
    let mut points = vec![from.clone()];
    for _ in 0..rng.random_range(0..=3) {
        points.push(random_point_in_body(rng, k1));
    }
    points.push(pivot);
    for _ in 0..rng.random_range(0..=3) {
        points.push(random_point_in_body(rng, k2));
    }
    points.push(to.clone());
    Polyline::new(points).expect("nonempty polyline")
}

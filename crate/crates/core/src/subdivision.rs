//! Quadtree subdivision of the unit configuration space.
//!
//! The unit box starts undetermined (yellow). Each step removes a largest
//! yellow box from a FIFO queue, splits it into four children, and colors
//! each child with an oracle: green boxes are entirely free, red boxes
//! entirely blocked, yellow boxes undetermined. Green boxes feed a plain
//! union-find tracking free connectivity of the anchors; red boxes feed a
//! [`SeparationIndex`] that watches for the moment the blocked region cuts
//! the anchors apart. The run ends with `PathFound`, `Separated`, or
//! `DepthExhausted` once no subdividable yellow box remains.
//!
//! Live yellow and red boxes form an intersection graph kept as adjacency
//! lists with cross-referenced entries, so removing a subdivided box costs
//! its degree and each child only tests intersection against the removed
//! box's neighborhood. With the largest-first discipline that neighborhood
//! never exceeds 12 boxes. Eight synthetic red boxes surround the unit box
//! so blocking curves can close around the outside.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use thiserror::Error;

use crate::geom::{Anchor, BoundingBox, ConvexBody, Point, Rational, bodies_intersect, dot};
use crate::separation::{InsertError, NullNeighborFinder, SeparationIndex};
use crate::union_find::{UfStats, UnionFind};

/// Largest subdivision depth the integer box arithmetic supports.
pub const MAX_SUPPORTED_DEPTH: u32 = 50;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("anchor points must lie strictly inside the unit box")]
    TerminalOutsideBox,
    #[error("maximum depth {0} exceeds the supported limit {MAX_SUPPORTED_DEPTH}")]
    DepthTooLarge(u32),
    #[error("oracle colored a box containing an anchor red")]
    RedContainsTerminal,
    #[error("oracle produced touching green and red boxes")]
    GreenRedContact,
    #[error("invalid obstacle: {0}")]
    InvalidObstacle(String),
    #[error(transparent)]
    Insert(#[from] InsertError),
}

/// Box classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Color {
    Green,
    Red,
    Yellow,
}

/// Axis-aligned square `[i/2^d, (i+1)/2^d] x [j/2^d, (j+1)/2^d]`, closed.
/// Negative `i`, `j` occur only in the synthetic surrounding ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DyadicBox {
    pub depth: u32,
    pub i: i64,
    pub j: i64,
}

impl DyadicBox {
    pub fn root() -> DyadicBox {
        DyadicBox { depth: 0, i: 0, j: 0 }
    }

    pub fn side(&self) -> Rational {
        Rational::new(BigInt::one(), BigInt::one() << self.depth)
    }

    fn coord(&self, steps: i64) -> Rational {
        Rational::new(BigInt::from(steps), BigInt::one() << self.depth)
    }

    pub fn bounds(&self) -> BoundingBox {
        BoundingBox {
            xmin: self.coord(self.i),
            ymin: self.coord(self.j),
            xmax: self.coord(self.i + 1),
            ymax: self.coord(self.j + 1),
        }
    }

    /// Lossless conversion to a convex body.
    pub fn to_body(&self) -> ConvexBody {
        let b = self.bounds();
        ConvexBody::axis_box(b.xmin, b.ymin, b.xmax, b.ymax).expect("dyadic boxes are proper")
    }

    /// Children in deterministic order: SW, SE, NW, NE.
    pub fn children(&self) -> [DyadicBox; 4] {
        let d = self.depth + 1;
        let i = 2 * self.i;
        let j = 2 * self.j;
        [
            DyadicBox { depth: d, i, j },
            DyadicBox { depth: d, i: i + 1, j },
            DyadicBox { depth: d, i, j: j + 1 },
            DyadicBox { depth: d, i: i + 1, j: j + 1 },
        ]
    }

    /// Closed intersection test in integer arithmetic; corner contact
    /// counts.
    pub fn touches(&self, other: &DyadicBox) -> bool {
        let d = self.depth.max(other.depth);
        let sa = d - self.depth;
        let sb = d - other.depth;
        let (ax0, ax1) = (self.i << sa, (self.i + 1) << sa);
        let (bx0, bx1) = (other.i << sb, (other.i + 1) << sb);
        if ax1 < bx0 || bx1 < ax0 {
            return false;
        }
        let (ay0, ay1) = (self.j << sa, (self.j + 1) << sa);
        let (by0, by1) = (other.j << sb, (other.j + 1) << sb);
        ay1 >= by0 && by1 >= ay0
    }

    pub fn contains_closed(&self, p: &Point) -> bool {
        self.bounds().contains(p)
    }
}

/// Classifies boxes of the configuration space. `classify` must be a pure
/// function of the box and sound: green boxes contain no blocked point,
/// red boxes no free point, and boxes whose closure holds an anchor are
/// never red.
pub trait Oracle {
    fn classify(&self, b: &DyadicBox) -> Color;
}

/// A concrete blocked region.
#[derive(Debug, Clone)]
pub enum Obstacle {
    Disc { center: Point, radius: Rational },
    Annulus { center: Point, inner: Rational, outer: Rational },
    Polygon(ConvexBody),
}

fn dist2(a: &Point, b: &Point) -> Rational {
    let d = a.sub(b);
    dot(&d, &d)
}

fn min_dist2_to_box(c: &Point, b: &BoundingBox) -> Rational {
    let zero = Rational::from_integer(BigInt::from(0));
    let dx = if c.x < b.xmin {
        &b.xmin - &c.x
    } else if c.x > b.xmax {
        &c.x - &b.xmax
    } else {
        zero.clone()
    };
    let dy = if c.y < b.ymin {
        &b.ymin - &c.y
    } else if c.y > b.ymax {
        &c.y - &b.ymax
    } else {
        zero
    };
    &dx * &dx + &dy * &dy
}

fn max_dist2_to_box(c: &Point, b: &BoundingBox) -> Rational {
    let corners = [
        Point::new(b.xmin.clone(), b.ymin.clone()),
        Point::new(b.xmax.clone(), b.ymin.clone()),
        Point::new(b.xmax.clone(), b.ymax.clone()),
        Point::new(b.xmin.clone(), b.ymax.clone()),
    ];
    corners
        .iter()
        .map(|p| dist2(c, p))
        .max()
        .expect("four corners")
}

impl Obstacle {
    pub fn disc(center: Point, radius: Rational) -> Result<Obstacle, EngineError> {
        if !radius.is_positive() {
            return Err(EngineError::InvalidObstacle("disc radius must be positive".into()));
        }
        Ok(Obstacle::Disc { center, radius })
    }

    pub fn annulus(
        center: Point,
        inner: Rational,
        outer: Rational,
    ) -> Result<Obstacle, EngineError> {
        if !inner.is_positive() || inner >= outer {
            return Err(EngineError::InvalidObstacle(
                "annulus needs 0 < inner radius < outer radius".into(),
            ));
        }
        Ok(Obstacle::Annulus { center, inner, outer })
    }

    pub fn polygon(body: ConvexBody) -> Obstacle {
        Obstacle::Polygon(body)
    }

    /// Whether `p` lies in the blocked (closed) region of this obstacle.
    pub fn blocks(&self, p: &Point) -> bool {
        match self {
            Obstacle::Disc { center, radius } => dist2(center, p) <= radius * radius,
            Obstacle::Annulus { center, inner, outer } => {
                let d2 = dist2(center, p);
                d2 >= inner * inner && d2 <= outer * outer
            }
            Obstacle::Polygon(body) => body.contains(p),
        }
    }

    fn classify(&self, bounds: &BoundingBox, body: &ConvexBody) -> Color {
        match self {
            Obstacle::Disc { center, radius } => {
                let r2 = radius * radius;
                if max_dist2_to_box(center, bounds) <= r2 {
                    Color::Red
                } else if min_dist2_to_box(center, bounds) > r2 {
                    Color::Green
                } else {
                    Color::Yellow
                }
            }
            Obstacle::Annulus { center, inner, outer } => {
                let in2 = inner * inner;
                let out2 = outer * outer;
                let min2 = min_dist2_to_box(center, bounds);
                let max2 = max_dist2_to_box(center, bounds);
                if max2 <= out2 && min2 >= in2 {
                    Color::Red
                } else if max2 < in2 || min2 > out2 {
                    Color::Green
                } else {
                    Color::Yellow
                }
            }
            Obstacle::Polygon(poly) => {
                if body.vertices().iter().all(|v| poly.contains(v)) {
                    Color::Red
                } else if !bodies_intersect(body, poly) {
                    Color::Green
                } else {
                    Color::Yellow
                }
            }
        }
    }
}

/// Oracle for a union of obstacles. A box is red when a single obstacle
/// contains it (a conservative rule: a box covered only by the union of
/// several obstacles stays yellow), green when it is disjoint from every
/// obstacle, yellow otherwise. An empty obstacle list makes everything
/// green.
pub struct ObstacleOracle {
    obstacles: Vec<Obstacle>,
}

impl ObstacleOracle {
    pub fn new(obstacles: Vec<Obstacle>) -> ObstacleOracle {
        ObstacleOracle { obstacles }
    }

    pub fn empty() -> ObstacleOracle {
        ObstacleOracle { obstacles: Vec::new() }
    }

    pub fn obstacles(&self) -> &[Obstacle] {
        &self.obstacles
    }

    /// Whether `p` is blocked by any obstacle.
    pub fn blocks(&self, p: &Point) -> bool {
        self.obstacles.iter().any(|o| o.blocks(p))
    }
}

impl Oracle for ObstacleOracle {
    fn classify(&self, b: &DyadicBox) -> Color {
        let bounds = b.bounds();
        let body = b.to_body();
        let mut all_green = true;
        for obstacle in &self.obstacles {
            match obstacle.classify(&bounds, &body) {
                Color::Red => return Color::Red,
                Color::Yellow => all_green = false,
                Color::Green => {}
            }
        }
        if all_green { Color::Green } else { Color::Yellow }
    }
}

const NIL: usize = usize::MAX;

struct AdjEntry {
    other: usize,
    twin: usize,
    prev: usize,
    next: usize,
}

struct GraphNode {
    dyadic: DyadicBox,
    color: Color,
    head: usize,
    alive: bool,
    synthetic: bool,
    red_id: Option<usize>,
    adjacent_greens: Vec<usize>,
}

/// Intersection graph of the live yellow and red boxes.
///
/// Adjacency lists are doubly linked and every entry holds a handle to its
/// reverse entry, so deleting a node unlinks it from all neighbors in time
/// proportional to its degree.
pub struct BoxGraph {
    nodes: Vec<GraphNode>,
    entries: Vec<AdjEntry>,
    free: Vec<usize>,
}

impl BoxGraph {
    fn new() -> BoxGraph {
        BoxGraph { nodes: Vec::new(), entries: Vec::new(), free: Vec::new() }
    }

    fn add_node(&mut self, dyadic: DyadicBox, color: Color, synthetic: bool) -> usize {
        let id = self.nodes.len();
        self.nodes.push(GraphNode {
            dyadic,
            color,
            head: NIL,
            alive: true,
            synthetic,
            red_id: None,
            adjacent_greens: Vec::new(),
        });
        id
    }

    fn alloc_entry(&mut self, entry: AdjEntry) -> usize {
        if let Some(idx) = self.free.pop() {
            self.entries[idx] = entry;
            idx
        } else {
            self.entries.push(entry);
            self.entries.len() - 1
        }
    }

    fn push_entry(&mut self, node: usize, entry: usize) {
        let head = self.nodes[node].head;
        self.entries[entry].prev = NIL;
        self.entries[entry].next = head;
        if head != NIL {
            self.entries[head].prev = entry;
        }
        self.nodes[node].head = entry;
    }

    fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && self.nodes[u].alive && self.nodes[v].alive);
        let e_uv = self.alloc_entry(AdjEntry { other: v, twin: NIL, prev: NIL, next: NIL });
        let e_vu = self.alloc_entry(AdjEntry { other: u, twin: e_uv, prev: NIL, next: NIL });
        self.entries[e_uv].twin = e_vu;
        self.push_entry(u, e_uv);
        self.push_entry(v, e_vu);
    }

    fn neighbors(&self, u: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = self.nodes[u].head;
        while cur != NIL {
            out.push(self.entries[cur].other);
            cur = self.entries[cur].next;
        }
        out
    }

    fn unlink(&mut self, node: usize, entry: usize) {
        let prev = self.entries[entry].prev;
        let next = self.entries[entry].next;
        if prev != NIL {
            self.entries[prev].next = next;
        } else {
            self.nodes[node].head = next;
        }
        if next != NIL {
            self.entries[next].prev = prev;
        }
    }

    fn remove_node(&mut self, u: usize) {
        let mut cur = self.nodes[u].head;
        while cur != NIL {
            let next = self.entries[cur].next;
            let other = self.entries[cur].other;
            let twin = self.entries[cur].twin;
            self.unlink(other, twin);
            self.free.push(twin);
            self.free.push(cur);
            cur = next;
        }
        self.nodes[u].head = NIL;
        self.nodes[u].alive = false;
        self.nodes[u].adjacent_greens = Vec::new();
    }

    fn dyadic(&self, u: usize) -> DyadicBox {
        self.nodes[u].dyadic
    }

    fn color(&self, u: usize) -> Color {
        self.nodes[u].color
    }

    /// Live nodes with their boxes and colors, synthetic ring included.
    pub fn live_boxes(&self) -> Vec<(usize, DyadicBox, Color)> {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| n.alive)
            .map(|(id, n)| (id, n.dyadic, n.color))
            .collect()
    }

    /// Live undirected edges, each reported once with `u < v`.
    pub fn live_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (id, node) in self.nodes.iter().enumerate() {
            if !node.alive {
                continue;
            }
            let mut cur = node.head;
            while cur != NIL {
                let other = self.entries[cur].other;
                if id < other {
                    out.push((id, other));
                }
                cur = self.entries[cur].next;
            }
        }
        out.sort_unstable();
        out
    }
}

/// Engine outcome. `Running` means neither condition has been established.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Running,
    PathFound,
    Separated,
    DepthExhausted,
}

/// Counters reported by [`Engine::stats`]. Box counts exclude the eight
/// synthetic ring boxes; `yellow_boxes` counts the live yellow leaves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunStats {
    pub subdivisions: u64,
    pub green_boxes: usize,
    pub red_boxes: usize,
    pub yellow_boxes: usize,
    pub max_neighbors: usize,
    pub green_uf_ops: u64,
    pub red_uf: UfStats,
}

impl RunStats {
    /// All union-find traffic of the run.
    pub fn union_find_ops(&self) -> u64 {
        self.green_uf_ops + self.red_uf.operations()
    }
}

/// The subdivision engine. See the module docs for the loop invariants.
pub struct Engine {
    anchor: Anchor,
    oracle: Box<dyn Oracle>,
    max_depth: u32,
    graph: BoxGraph,
    queue: VecDeque<usize>,
    greens: Vec<DyadicBox>,
    green_uf: UnionFind,
    s_green: Vec<usize>,
    t_green: Vec<usize>,
    red_index: SeparationIndex,
    outcome: Outcome,
    subdivisions: u64,
    max_neighbors: usize,
    last_popped_depth: u32,
}

const RING_OFFSETS: [(i64, i64); 8] = [
    (-1, -1),
    (0, -1),
    (1, -1),
    (-1, 0),
    (1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
];

impl Engine {
    /// Builds the engine: surrounds the unit box with the eight synthetic
    /// red boxes, classifies the unit box itself, and evaluates both
    /// termination conditions once.
    pub fn new(
        anchor: Anchor,
        oracle: Box<dyn Oracle>,
        max_depth: u32,
    ) -> Result<Engine, EngineError> {
        if max_depth > MAX_SUPPORTED_DEPTH {
            return Err(EngineError::DepthTooLarge(max_depth));
        }
        let zero = Rational::from_integer(BigInt::from(0));
        let one = Rational::from_integer(BigInt::from(1));
        for p in [anchor.source(), anchor.target()] {
            if p.x <= zero || p.x >= one || p.y <= zero || p.y >= one {
                return Err(EngineError::TerminalOutsideBox);
            }
        }

        let mut engine = Engine {
            red_index: SeparationIndex::new(anchor.clone(), Box::new(NullNeighborFinder::new())),
            anchor,
            oracle,
            max_depth,
            graph: BoxGraph::new(),
            queue: VecDeque::new(),
            greens: Vec::new(),
            green_uf: UnionFind::new(),
            s_green: Vec::new(),
            t_green: Vec::new(),
            outcome: Outcome::Running,
            subdivisions: 0,
            max_neighbors: 0,
            last_popped_depth: 0,
        };

        let mut ring_nodes: Vec<usize> = Vec::with_capacity(8);
        for (i, j) in RING_OFFSETS {
            let dyadic = DyadicBox { depth: 0, i, j };
            let node = engine.graph.add_node(dyadic, Color::Red, true);
            let mut red_neighbors = Vec::new();
            for &prev in &ring_nodes {
                if engine.graph.dyadic(prev).touches(&dyadic) {
                    engine.graph.add_edge(node, prev);
                    red_neighbors.push(
                        engine.graph.nodes[prev].red_id.expect("ring boxes are indexed"),
                    );
                }
            }
            let report = engine
                .red_index
                .insert_with_neighbors(dyadic.to_body(), &red_neighbors)?;
            // The ring surrounds both anchors; its cycles never separate.
            debug_assert!(!report.separated_now);
            engine.graph.nodes[node].red_id = Some(report.body_id);
            ring_nodes.push(node);
        }

        let root = DyadicBox::root();
        match engine.oracle.classify(&root) {
            Color::Red => return Err(EngineError::RedContainsTerminal),
            Color::Green => {
                let gid = engine.greens.len();
                engine.greens.push(root);
                engine.green_uf.make();
                engine.s_green.push(gid);
                engine.t_green.push(gid);
                engine.outcome = Outcome::PathFound;
            }
            Color::Yellow => {
                let node = engine.graph.add_node(root, Color::Yellow, false);
                for &ring in &ring_nodes {
                    engine.graph.add_edge(node, ring);
                }
                engine.queue.push_back(node);
            }
        }
        Ok(engine)
    }

    pub fn outcome(&self) -> Outcome {
        self.outcome
    }

    pub fn anchor(&self) -> &Anchor {
        &self.anchor
    }

    pub fn graph(&self) -> &BoxGraph {
        &self.graph
    }

    pub fn stats(&self) -> RunStats {
        RunStats {
            subdivisions: self.subdivisions,
            green_boxes: self.greens.len(),
            red_boxes: self.red_index.len().saturating_sub(8),
            yellow_boxes: self.queue.len(),
            max_neighbors: self.max_neighbors,
            green_uf_ops: self.green_uf.ops(),
            red_uf: self.red_index.uf_stats(),
        }
    }

    /// All red bodies, synthetic ring first.
    pub fn red_bodies(&self) -> Vec<ConvexBody> {
        (0..self.red_index.len()).map(|i| self.red_index.body(i).clone()).collect()
    }

    pub fn green_boxes(&self) -> &[DyadicBox] {
        &self.greens
    }

    pub fn green_bodies(&self) -> Vec<ConvexBody> {
        self.greens.iter().map(|g| g.to_body()).collect()
    }

    fn check_green_connection(&mut self) -> bool {
        for i in 0..self.s_green.len() {
            for j in 0..self.t_green.len() {
                let (a, b) = (self.s_green[i], self.t_green[j]);
                if self.green_uf.same(a, b) {
                    return true;
                }
            }
        }
        false
    }

    /// Subdivides one largest yellow box. Callers must ensure the engine is
    /// running, the queue is nonempty, and the front box is shallower than
    /// the depth limit; `run` does.
    pub fn step(&mut self) -> Result<Outcome, EngineError> {
        if self.outcome != Outcome::Running {
            return Ok(self.outcome);
        }
        let u = self.queue.pop_front().expect("step needs a queued yellow box");
        let u_dyadic = self.graph.dyadic(u);
        debug_assert_eq!(self.graph.color(u), Color::Yellow);
        // FIFO order makes dequeued sides non-increasing, so the popped box
        // is always a largest yellow box.
        debug_assert!(u_dyadic.depth >= self.last_popped_depth);
        self.last_popped_depth = u_dyadic.depth;

        let neighbor_ids = self.graph.neighbors(u);
        assert!(
            neighbor_ids.len() <= 12,
            "largest-first subdivision keeps at most 12 live neighbors, found {}",
            neighbor_ids.len()
        );
        self.max_neighbors = self.max_neighbors.max(neighbor_ids.len());
        let candidate_greens = std::mem::take(&mut self.graph.nodes[u].adjacent_greens);
        self.graph.remove_node(u);
        self.subdivisions += 1;

        let mut sibling_nodes: Vec<usize> = Vec::new();
        let mut sibling_greens: Vec<usize> = Vec::new();
        for child in u_dyadic.children() {
            match self.oracle.classify(&child) {
                Color::Yellow => {
                    let id = self.graph.add_node(child, Color::Yellow, false);
                    for &v in neighbor_ids.iter().chain(sibling_nodes.iter()) {
                        if self.graph.dyadic(v).touches(&child) {
                            self.graph.add_edge(id, v);
                        }
                    }
                    let mut adjacent = Vec::new();
                    for &g in candidate_greens.iter().chain(sibling_greens.iter()) {
                        if self.greens[g].touches(&child) {
                            adjacent.push(g);
                        }
                    }
                    self.graph.nodes[id].adjacent_greens = adjacent;
                    sibling_nodes.push(id);
                    self.queue.push_back(id);
                }
                Color::Red => {
                    if child.contains_closed(self.anchor.source())
                        || child.contains_closed(self.anchor.target())
                    {
                        return Err(EngineError::RedContainsTerminal);
                    }
                    for &g in candidate_greens.iter().chain(sibling_greens.iter()) {
                        if self.greens[g].touches(&child) {
                            return Err(EngineError::GreenRedContact);
                        }
                    }
                    let id = self.graph.add_node(child, Color::Red, false);
                    let mut red_neighbors = Vec::new();
                    for &v in neighbor_ids.iter().chain(sibling_nodes.iter()) {
                        if self.graph.dyadic(v).touches(&child) {
                            self.graph.add_edge(id, v);
                            if let Some(rid) = self.graph.nodes[v].red_id {
                                red_neighbors.push(rid);
                            }
                        }
                    }
                    let report = self
                        .red_index
                        .insert_with_neighbors(child.to_body(), &red_neighbors)?;
                    self.graph.nodes[id].red_id = Some(report.body_id);
                    sibling_nodes.push(id);
                    if report.separated_now {
                        self.outcome = Outcome::Separated;
                        return Ok(self.outcome);
                    }
                }
                Color::Green => {
                    for &v in neighbor_ids.iter().chain(sibling_nodes.iter()) {
                        if self.graph.color(v) == Color::Red
                            && !self.graph.nodes[v].synthetic
                            && self.graph.dyadic(v).touches(&child)
                        {
                            return Err(EngineError::GreenRedContact);
                        }
                    }
                    let gid = self.greens.len();
                    self.greens.push(child);
                    let uf_id = self.green_uf.make();
                    debug_assert_eq!(uf_id, gid);
                    for &g in candidate_greens.iter().chain(sibling_greens.iter()) {
                        if self.greens[g].touches(&child) {
                            self.green_uf.union(gid, g);
                        }
                    }
                    // Register the new green box with every live yellow box
                    // it touches; all of them sit in the old neighborhood.
                    for &v in neighbor_ids.iter().chain(sibling_nodes.iter()) {
                        if self.graph.color(v) == Color::Yellow
                            && self.graph.nodes[v].alive
                            && self.graph.dyadic(v).touches(&child)
                        {
                            self.graph.nodes[v].adjacent_greens.push(gid);
                        }
                    }
                    sibling_greens.push(gid);
                    if child.contains_closed(self.anchor.source()) {
                        self.s_green.push(gid);
                    }
                    if child.contains_closed(self.anchor.target()) {
                        self.t_green.push(gid);
                    }
                    if self.check_green_connection() {
                        self.outcome = Outcome::PathFound;
                        return Ok(self.outcome);
                    }
                }
            }
        }
        Ok(self.outcome)
    }

    /// Runs until a condition holds or no yellow box shallower than the
    /// depth limit remains.
    pub fn run(&mut self) -> Result<Outcome, EngineError> {
        loop {
            if self.outcome != Outcome::Running {
                return Ok(self.outcome);
            }
            match self.queue.front() {
                None => {
                    self.outcome = Outcome::DepthExhausted;
                }
                Some(&front) if self.graph.dyadic(front).depth >= self.max_depth => {
                    self.outcome = Outcome::DepthExhausted;
                }
                _ => {
                    self.step()?;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::frac;

    fn mid_anchor() -> Anchor {
        Anchor::new(
            Point::new(frac(1, 4), frac(1, 2)),
            Point::new(frac(3, 4), frac(1, 2)),
        )
        .unwrap()
    }

    #[test]
    fn dyadic_box_geometry() {
        let root = DyadicBox::root();
        assert_eq!(root.side(), frac(1, 1));
        let kids = root.children();
        assert_eq!(kids[0], DyadicBox { depth: 1, i: 0, j: 0 });
        assert_eq!(kids[1], DyadicBox { depth: 1, i: 1, j: 0 });
        assert_eq!(kids[2], DyadicBox { depth: 1, i: 0, j: 1 });
        assert_eq!(kids[3], DyadicBox { depth: 1, i: 1, j: 1 });
        assert_eq!(kids[3].side(), frac(1, 2));
        let body = kids[3].to_body();
        assert!(body.as_axis_box().is_some());
        assert!(kids[3].contains_closed(&Point::new(frac(1, 2), frac(1, 2))));
        assert!(kids[0].contains_closed(&Point::new(frac(1, 2), frac(1, 2))));
    }

    #[test]
    fn dyadic_touch_is_closed_and_depth_aware() {
        let a = DyadicBox { depth: 1, i: 0, j: 0 }; // [0,1/2]^2
        let b = DyadicBox { depth: 1, i: 1, j: 1 }; // [1/2,1]^2
        let c = DyadicBox { depth: 2, i: 2, j: 2 }; // [1/2,3/4]^2
        let far = DyadicBox { depth: 2, i: 3, j: 0 }; // [3/4,1]x[0,1/4]
        let d = DyadicBox { depth: 1, i: 1, j: 0 }; // [1/2,1]x[0,1/2]
        assert!(a.touches(&b)); // corner contact at (1/2,1/2)
        assert!(a.touches(&c)); // corner contact across depths
        assert!(b.touches(&c)); // containment overlap
        assert!(!a.touches(&far));
        assert!(a.touches(&d)); // edge contact at x=1/2
        assert!(d.touches(&far)); // far sits inside d
    }

    #[test]
    fn disc_oracle_classification() {
        let oracle = ObstacleOracle::new(vec![
            Obstacle::disc(Point::new(frac(1, 2), frac(1, 2)), frac(1, 3)).unwrap(),
        ]);
        // Small box at the disc center is red.
        let center_box = DyadicBox { depth: 3, i: 3, j: 3 };
        assert_eq!(oracle.classify(&center_box), Color::Red);
        // Corner box is disjoint from the disc.
        let corner_box = DyadicBox { depth: 3, i: 0, j: 0 };
        assert_eq!(oracle.classify(&corner_box), Color::Green);
        // The root box straddles the boundary.
        assert_eq!(oracle.classify(&DyadicBox::root()), Color::Yellow);
    }

    #[test]
    fn annulus_oracle_classification() {
        let oracle = ObstacleOracle::new(vec![
            Obstacle::annulus(Point::new(frac(1, 2), frac(1, 2)), frac(1, 8), frac(3, 8))
                .unwrap(),
        ]);
        // A tiny box at the center sits in the free hole.
        let center = DyadicBox { depth: 4, i: 7, j: 7 };
        assert_eq!(oracle.classify(&center), Color::Green);
        // A box straddling the inner boundary is yellow.
        let straddle = DyadicBox { depth: 3, i: 3, j: 3 };
        assert_eq!(oracle.classify(&straddle), Color::Yellow);
        // A box inside the band is red: centered at (1/2 + 1/4, 1/2),
        // radius range [1/8, 3/8] holds distances in [3/16, 5/16]... use a
        // small box to the right of center.
        let band = DyadicBox { depth: 4, i: 11, j: 7 };
        assert_eq!(oracle.classify(&band), Color::Red);
    }

    #[test]
    fn polygon_oracle_classification() {
        let poly = crate::geom::ConvexBody::new(vec![
            Point::new(frac(1, 4), frac(1, 4)),
            Point::new(frac(3, 4), frac(1, 4)),
            Point::new(frac(3, 4), frac(3, 4)),
            Point::new(frac(1, 4), frac(3, 4)),
        ])
        .unwrap();
        let oracle = ObstacleOracle::new(vec![Obstacle::polygon(poly)]);
        // Small box inside the obstacle square.
        assert_eq!(oracle.classify(&DyadicBox { depth: 3, i: 3, j: 3 }), Color::Red);
        // Corner box is disjoint from it.
        assert_eq!(oracle.classify(&DyadicBox { depth: 3, i: 0, j: 0 }), Color::Green);
        // The root straddles the boundary.
        assert_eq!(oracle.classify(&DyadicBox::root()), Color::Yellow);
    }

    #[test]
    fn polygon_obstacle_scene_finds_a_path() {
        let poly = crate::geom::ConvexBody::new(vec![
            Point::new(frac(3, 8), frac(3, 8)),
            Point::new(frac(5, 8), frac(3, 8)),
            Point::new(frac(5, 8), frac(5, 8)),
            Point::new(frac(3, 8), frac(5, 8)),
        ])
        .unwrap();
        let anchor = Anchor::new(
            Point::new(frac(1, 8), frac(1, 2)),
            Point::new(frac(7, 8), frac(1, 2)),
        )
        .unwrap();
        let oracle = ObstacleOracle::new(vec![Obstacle::polygon(poly)]);
        let mut engine = Engine::new(anchor, Box::new(oracle), 8).unwrap();
        assert_eq!(engine.run().unwrap(), Outcome::PathFound);
    }

    #[test]
    fn invalid_obstacles_are_rejected() {
        assert!(Obstacle::disc(Point::from_ints(0, 0), frac(0, 1)).is_err());
        assert!(Obstacle::disc(Point::from_ints(0, 0), frac(-1, 2)).is_err());
        assert!(
            Obstacle::annulus(Point::from_ints(0, 0), frac(1, 2), frac(1, 4)).is_err()
        );
        assert!(
            Obstacle::annulus(Point::from_ints(0, 0), frac(1, 2), frac(1, 2)).is_err()
        );
    }

    #[test]
    fn empty_scene_finds_a_path_immediately() {
        let mut engine =
            Engine::new(mid_anchor(), Box::new(ObstacleOracle::empty()), 6).unwrap();
        assert_eq!(engine.outcome(), Outcome::PathFound);
        assert_eq!(engine.run().unwrap(), Outcome::PathFound);
        assert_eq!(engine.stats().subdivisions, 0);
        assert_eq!(engine.stats().green_boxes, 1);
    }

    #[test]
    fn anchors_must_be_strictly_inside() {
        let bad = Anchor::new(Point::from_ints(0, 0), Point::new(frac(1, 2), frac(1, 2)))
            .unwrap();
        assert_eq!(
            Engine::new(bad, Box::new(ObstacleOracle::empty()), 4).err(),
            Some(EngineError::TerminalOutsideBox)
        );
    }

    #[test]
    fn depth_zero_yellow_root_exhausts() {
        let oracle = ObstacleOracle::new(vec![
            Obstacle::disc(Point::new(frac(1, 2), frac(7, 8)), frac(1, 16)).unwrap(),
        ]);
        let mut engine = Engine::new(mid_anchor(), Box::new(oracle), 0).unwrap();
        assert_eq!(engine.outcome(), Outcome::Running);
        assert_eq!(engine.run().unwrap(), Outcome::DepthExhausted);
        assert_eq!(engine.stats().subdivisions, 0);
        assert_eq!(engine.stats().yellow_boxes, 1);
    }

    #[test]
    fn single_disc_obstacle_finds_a_path() {
        let oracle = ObstacleOracle::new(vec![
            Obstacle::disc(Point::new(frac(1, 2), frac(1, 2)), frac(1, 8)).unwrap(),
        ]);
        let anchor = Anchor::new(
            Point::new(frac(1, 8), frac(1, 2)),
            Point::new(frac(7, 8), frac(1, 2)),
        )
        .unwrap();
        let mut engine = Engine::new(anchor, Box::new(oracle), 8).unwrap();
        assert_eq!(engine.run().unwrap(), Outcome::PathFound);
        assert!(engine.stats().max_neighbors <= 12);
    }

    #[test]
    fn annulus_scene_separates() {
        let oracle = ObstacleOracle::new(vec![
            Obstacle::annulus(Point::new(frac(1, 2), frac(1, 2)), frac(1, 8), frac(3, 8))
                .unwrap(),
        ]);
        let anchor = Anchor::new(
            Point::new(frac(33, 64), frac(31, 64)),
            Point::new(frac(15, 16), frac(15, 16)),
        )
        .unwrap();
        let mut engine = Engine::new(anchor, Box::new(oracle), 10).unwrap();
        assert_eq!(engine.run().unwrap(), Outcome::Separated);
        // Ground truth: the final red set really separates the anchors.
        let separated =
            crate::verify::floodfill_separated(engine.anchor(), &engine.red_bodies()).unwrap();
        assert!(separated);
    }

    #[test]
    fn ring_insertion_never_separates() {
        let engine = Engine::new(
            mid_anchor(),
            Box::new(ObstacleOracle::new(vec![
                Obstacle::disc(Point::new(frac(1, 2), frac(1, 2)), frac(1, 8)).unwrap(),
            ])),
            4,
        )
        .unwrap();
        assert_eq!(engine.outcome(), Outcome::Running);
        // Eight ring boxes are in the red index, none separating.
        assert_eq!(engine.red_bodies().len(), 8);
        let separated =
            crate::verify::floodfill_separated(engine.anchor(), &engine.red_bodies()).unwrap();
        assert!(!separated);
    }

    #[test]
    fn graph_edges_match_bruteforce_on_a_small_run() {
        let oracle = ObstacleOracle::new(vec![
            Obstacle::disc(Point::new(frac(1, 2), frac(1, 2)), frac(1, 4)).unwrap(),
        ]);
        let anchor = Anchor::new(
            Point::new(frac(1, 16), frac(1, 16)),
            Point::new(frac(15, 16), frac(15, 16)),
        )
        .unwrap();
        let mut engine = Engine::new(anchor, Box::new(oracle), 4).unwrap();
        for _ in 0..20 {
            if engine.outcome() != Outcome::Running || engine.queue.is_empty() {
                break;
            }
            engine.step().unwrap();
            let boxes = engine.graph().live_boxes();
            let mut expected = Vec::new();
            for a in 0..boxes.len() {
                for b in a + 1..boxes.len() {
                    if boxes[a].1.touches(&boxes[b].1) {
                        let (x, y) = (boxes[a].0.min(boxes[b].0), boxes[a].0.max(boxes[b].0));
                        expected.push((x, y));
                    }
                }
            }
            expected.sort_unstable();
            assert_eq!(engine.graph().live_edges(), expected);
        }
    }

    #[test]
    fn unsound_oracle_is_detected() {
        // Colors everything red, including boxes holding the anchors.
        struct AllRed;
        impl Oracle for AllRed {
            fn classify(&self, _b: &DyadicBox) -> Color {
                Color::Red
            }
        }
        assert_eq!(
            Engine::new(mid_anchor(), Box::new(AllRed), 4).err(),
            Some(EngineError::RedContainsTerminal)
        );

        // Green/red checkerboard produces touching green and red boxes.
        struct Checker;
        impl Oracle for Checker {
            fn classify(&self, b: &DyadicBox) -> Color {
                if b.depth == 0 {
                    Color::Yellow
                } else if (b.i + b.j) % 2 == 0 {
                    Color::Green
                } else {
                    Color::Red
                }
            }
        }
        let mut engine = Engine::new(mid_anchor(), Box::new(Checker), 3).unwrap();
        let err = engine.run().unwrap_err();
        assert!(matches!(
            err,
            EngineError::GreenRedContact | EngineError::RedContainsTerminal
        ));
    }
}

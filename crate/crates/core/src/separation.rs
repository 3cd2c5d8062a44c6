//! Semi-dynamic separation detection.
//!
//! A [`SeparationIndex`] accepts closed convex bodies one at a time, none
//! containing an anchor point, and reports after every insertion whether
//! the union inserted so far separates the anchors.
//!
//! Internally each body is a node of a parity union-find. For a new body
//! the intersecting predecessors are found (through a pluggable
//! [`NeighborFinder`] or a caller-supplied list) and each incident edge is
//! classified: an edge joining two components is merged with the crossing
//! parity of its connector curve as the label; an edge closing a cycle is
//! tested — if the cycle's crossing parity with the anchor segment is odd,
//! the anchors are separated and the flag sticks forever. Once separated,
//! further insertions are recorded in constant time.

use std::collections::HashMap;

use thiserror::Error;

use crate::geom::{
    Anchor, ConvexBody, GeomError, Point, Rational, bodies_intersect, connector_curve,
    representative_point,
};
use crate::union_find::{NodeId, ParityUnionFind, UfStats};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InsertError {
    #[error("body contains an anchor point")]
    ContainsTerminal,
    #[error("geometry error: {0}")]
    Geometry(#[from] GeomError),
}

/// Lookup of stored bodies intersecting a query body. Implementations must
/// be exact: the returned ids are precisely those whose bodies share at
/// least one point with the query (boundary contact included).
pub trait NeighborFinder {
    fn insert(&mut self, id: usize, body: &ConvexBody);
    fn query(&self, body: &ConvexBody) -> Vec<usize>;
}

/// Exhaustive scan over all stored bodies.
#[derive(Default)]
pub struct NaiveNeighborFinder {
    bodies: Vec<(usize, ConvexBody)>,
}

impl NaiveNeighborFinder {
    pub fn new() -> Self {
        Self::default()
    }
}

impl NeighborFinder for NaiveNeighborFinder {
    fn insert(&mut self, id: usize, body: &ConvexBody) {
        self.bodies.push((id, body.clone()));
    }

    fn query(&self, body: &ConvexBody) -> Vec<usize> {
        self.bodies
            .iter()
            .filter(|(_, stored)| bodies_intersect(stored, body))
            .map(|(id, _)| *id)
            .collect()
    }
}

/// Uniform-grid bucketing on bounding boxes; candidates are confirmed with
/// the exact intersection test. Suited to streams of bounded-size bodies.
pub struct GridNeighborFinder {
    cell: Rational,
    buckets: HashMap<(i64, i64), Vec<usize>>,
    bodies: HashMap<usize, ConvexBody>,
}

impl GridNeighborFinder {
    /// `cell` must be positive.
    pub fn new(cell: Rational) -> Self {
        assert!(
            num_traits::Signed::is_positive(&cell),
            "grid cell size must be positive"
        );
        GridNeighborFinder {
            cell,
            buckets: HashMap::new(),
            bodies: HashMap::new(),
        }
    }

    fn cell_of(&self, v: &Rational) -> i64 {
        use num_traits::ToPrimitive;
        (v / &self.cell)
            .floor()
            .to_integer()
            .to_i64()
            .expect("coordinates fit the grid index range")
    }

    fn cell_range(&self, body: &ConvexBody) -> (i64, i64, i64, i64) {
        let bb = body.bounding_box();
        (
            self.cell_of(&bb.xmin),
            self.cell_of(&bb.xmax),
            self.cell_of(&bb.ymin),
            self.cell_of(&bb.ymax),
        )
    }
}

impl NeighborFinder for GridNeighborFinder {
    fn insert(&mut self, id: usize, body: &ConvexBody) {
        let (x0, x1, y0, y1) = self.cell_range(body);
        for x in x0..=x1 {
            for y in y0..=y1 {
                self.buckets.entry((x, y)).or_default().push(id);
            }
        }
        self.bodies.insert(id, body.clone());
    }

    fn query(&self, body: &ConvexBody) -> Vec<usize> {
        let (x0, x1, y0, y1) = self.cell_range(body);
        let mut candidates: Vec<usize> = Vec::new();
        for x in x0..=x1 {
            for y in y0..=y1 {
                if let Some(ids) = self.buckets.get(&(x, y)) {
                    candidates.extend_from_slice(ids);
                }
            }
        }
        candidates.sort_unstable();
        candidates.dedup();
        candidates.retain(|id| bodies_intersect(&self.bodies[id], body));
        candidates
    }
}

/// Finder for callers that always supply neighbor lists explicitly; it
/// stores nothing and finds nothing.
#[derive(Default)]
pub struct NullNeighborFinder;

impl NullNeighborFinder {
    pub fn new() -> Self {
        NullNeighborFinder
    }
}

impl NeighborFinder for NullNeighborFinder {
    fn insert(&mut self, _id: usize, _body: &ConvexBody) {}

    fn query(&self, _body: &ConvexBody) -> Vec<usize> {
        Vec::new()
    }
}

/// Outcome of one insertion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InsertReport {
    /// Dense id of the inserted body; also its union-find node index.
    pub body_id: usize,
    /// Number of stored bodies intersecting the inserted one.
    pub neighbors: usize,
    pub merge_edges: usize,
    pub cycle_edges: usize,
    /// Whether this insertion was the one that separated the anchors.
    pub separated_now: bool,
    /// The cycle edge that established separation, if this insertion did.
    pub first_separating_edge: Option<(usize, usize)>,
}

/// The semi-dynamic structure: insert bodies, ask whether the family
/// separates the anchors. The separated flag is monotone.
pub struct SeparationIndex {
    anchor: Anchor,
    bodies: Vec<ConvexBody>,
    rep_points: Vec<Point>,
    uf: ParityUnionFind,
    separated: bool,
    first_separation: Option<usize>,
    finder: Box<dyn NeighborFinder>,
    parity_fault: Option<usize>,
}

impl SeparationIndex {
    pub fn new(anchor: Anchor, finder: Box<dyn NeighborFinder>) -> Self {
        SeparationIndex {
            anchor,
            bodies: Vec::new(),
            rep_points: Vec::new(),
            uf: ParityUnionFind::new(),
            separated: false,
            first_separation: None,
            finder,
            parity_fault: None,
        }
    }

    /// Index with the exhaustive neighbor scan.
    pub fn with_naive_finder(anchor: Anchor) -> Self {
        Self::new(anchor, Box::new(NaiveNeighborFinder::new()))
    }

    /// Index with grid bucketing at the given cell size.
    pub fn with_grid_finder(anchor: Anchor, cell: Rational) -> Self {
        Self::new(anchor, Box::new(GridNeighborFinder::new(cell)))
    }

    pub fn anchor(&self) -> &Anchor {
        &self.anchor
    }

    pub fn len(&self) -> usize {
        self.bodies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bodies.is_empty()
    }

    pub fn body(&self, id: usize) -> &ConvexBody {
        &self.bodies[id]
    }

    pub fn rep_point(&self, id: usize) -> &Point {
        &self.rep_points[id]
    }

    /// Sticky separation flag.
    pub fn is_separated(&self) -> bool {
        self.separated
    }

    /// Id of the insertion that established separation, if any.
    pub fn first_separation(&self) -> Option<usize> {
        self.first_separation
    }

    pub fn uf_stats(&self) -> UfStats {
        self.uf.stats()
    }

    /// Crossing parity of the connector curve between two stored bodies.
    pub fn edge_parity(&self, u: usize, v: usize) -> Result<bool, GeomError> {
        let curve = connector_curve(&self.bodies[u], &self.bodies[v])?;
        self.anchor.polyline_crossing_parity(&curve)
    }

    /// Test hook: flip the parity of the first edge processed by the
    /// insertion with this id, corrupting the structure on purpose.
    #[doc(hidden)]
    pub fn inject_parity_fault(&mut self, insertion: usize) {
        self.parity_fault = Some(insertion);
    }

    /// Inserts a body, finding its neighbors through the configured finder.
    pub fn insert(&mut self, body: ConvexBody) -> Result<InsertReport, InsertError> {
        if self.separated {
            return self.record_after_separation(body);
        }
        let neighbors = self.finder.query(&body);
        self.insert_with_neighbors(body, &neighbors)
    }

    /// Inserts a body whose intersecting predecessors the caller already
    /// knows. `neighbors` must list exactly the stored ids whose bodies
    /// intersect `body`; the order determines which edges merge and which
    /// close cycles, but not the final verdict.
    pub fn insert_with_neighbors(
        &mut self,
        body: ConvexBody,
        neighbors: &[usize],
    ) -> Result<InsertReport, InsertError> {
        if body.contains(self.anchor.source()) || body.contains(self.anchor.target()) {
            return Err(InsertError::ContainsTerminal);
        }
        if self.separated {
            return self.record_after_separation(body);
        }

        let id = self.bodies.len();
        let node = self.uf.makeset();
        debug_assert_eq!(node.index(), id);
        self.rep_points.push(representative_point(&body));
        self.bodies.push(body);
        self.finder.insert(id, &self.bodies[id]);

        let mut report = InsertReport {
            body_id: id,
            neighbors: neighbors.len(),
            merge_edges: 0,
            cycle_edges: 0,
            separated_now: false,
            first_separating_edge: None,
        };
        for (edge_no, &v) in neighbors.iter().enumerate() {
            debug_assert!(v < id, "neighbors must be previously inserted bodies");
            let mut parity = self.edge_parity(id, v)?;
            if self.parity_fault == Some(id) && edge_no == 0 {
                parity = !parity;
            }
            let vnode = NodeId::from_index(v);
            let ru = self.uf.findext(node);
            let rv = self.uf.findext(vnode);
            if ru != rv {
                self.uf
                    .unionext(node, vnode, parity)
                    .expect("roots were distinct");
                report.merge_edges += 1;
            } else {
                report.cycle_edges += 1;
                let cycle_parity =
                    self.uf.stored_parity(node) ^ self.uf.stored_parity(vnode) ^ parity;
                if cycle_parity {
                    self.separated = true;
                    self.first_separation = Some(id);
                    report.separated_now = true;
                    report.first_separating_edge = Some((id, v));
                    break;
                }
            }
        }
        Ok(report)
    }

    /// After separation each insertion only records the body.
    fn record_after_separation(&mut self, body: ConvexBody) -> Result<InsertReport, InsertError> {
        if body.contains(self.anchor.source()) || body.contains(self.anchor.target()) {
            return Err(InsertError::ContainsTerminal);
        }
        let id = self.bodies.len();
        self.uf.makeset();
        self.rep_points.push(representative_point(&body));
        self.bodies.push(body);
        Ok(InsertReport {
            body_id: id,
            neighbors: 0,
            merge_edges: 0,
            cycle_edges: 0,
            separated_now: false,
            first_separating_edge: None,
        })
    }
}

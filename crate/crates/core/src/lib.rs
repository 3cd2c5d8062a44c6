//! Incremental separation detection for growing families of convex
//! obstacles in the plane.
//!
//! The core structure ([`SeparationIndex`]) accepts compact convex sets one
//! at a time, none containing either of two fixed anchor points, and
//! reports after each insertion whether the union of the sets inserted so
//! far separates the anchors. Each insertion costs a constant number of
//! union-find operations per intersecting predecessor, on top of whatever
//! neighbor lookup is plugged in.
//!
//! On top of that sits a quadtree subdivision engine
//! ([`subdivision::Engine`]) that classifies boxes of the unit square as
//! free, blocked, or undetermined and keeps subdividing a largest
//! undetermined box until either the free boxes connect the anchors or the
//! blocked boxes separate them.
//!
//! The [`verify`] module holds an independent brute-force connectivity
//! oracle used by the test suite and the `verify` CLI subcommand.

pub mod geom;
pub mod scene;
pub mod separation;
pub mod subdivision;
pub mod svg;
pub mod union_find;
pub mod verify;

pub use geom::{Anchor, ConvexBody, GeomError, Point, Polyline, Rational};
pub use separation::{
    GridNeighborFinder, InsertError, InsertReport, NaiveNeighborFinder, NeighborFinder,
    NullNeighborFinder, SeparationIndex,
};
pub use subdivision::{Color, DyadicBox, Engine, EngineError, Oracle, Outcome};
pub use union_find::{NodeId, ParityUnionFind};

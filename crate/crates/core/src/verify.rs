//! Brute-force connectivity ground truth.
//!
//! Decides separation of the anchors by the closed union of a set of
//! axis-aligned boxes through exhaustive search on a compressed grid,
//! independently of any parity bookkeeping. Also provides a free-path
//! check over green boxes and the deterministic random generators used by
//! tests and the bench subcommand.

use rand::RngExt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::geom::{Anchor, BoundingBox, ConvexBody, Point, Rational, rat};
use crate::union_find::UnionFind;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("only axis-aligned boxes are supported")]
    UnsupportedBody,
    #[error("an anchor point lies inside the box union")]
    TerminalInUnion,
}

/// Compressed-coordinate grid over a family of closed axis-aligned boxes.
///
/// Grid lines are the box edges plus the anchor coordinates plus one line
/// of padding on every side, so every box is a whole union of cells and
/// free space beyond the boxes forms a connected ring of border cells.
///
/// Because the boxes are closed, two free cells that touch only along an
/// edge covered by the union are not connected, and free cells meeting at
/// a covered corner are not connected either (adjacency is edge-wise
/// only).
pub struct CompressedGrid {
    xs: Vec<Rational>,
    ys: Vec<Rational>,
    ncx: usize,
    ncy: usize,
    blocked: Vec<bool>,
    vcov: Vec<bool>,
    hcov: Vec<bool>,
    source: Point,
    target: Point,
}

fn axis_boxes(bodies: &[ConvexBody]) -> Result<Vec<&BoundingBox>, VerifyError> {
    bodies
        .iter()
        .map(|b| b.as_axis_box().ok_or(VerifyError::UnsupportedBody))
        .collect()
}

impl CompressedGrid {
    pub fn build(anchor: &Anchor, bodies: &[ConvexBody]) -> Result<Self, VerifyError> {
        Self::build_refined(anchor, bodies, &[], &[])
    }

    /// Like [`CompressedGrid::build`] with extra grid lines injected; the
    /// verdict must not depend on them.
    pub fn build_refined(
        anchor: &Anchor,
        bodies: &[ConvexBody],
        extra_x: &[Rational],
        extra_y: &[Rational],
    ) -> Result<Self, VerifyError> {
        let boxes = axis_boxes(bodies)?;
        let source = anchor.source().clone();
        let target = anchor.target().clone();
        for b in &boxes {
            if b.contains(&source) || b.contains(&target) {
                return Err(VerifyError::TerminalInUnion);
            }
        }

        let mut xs: Vec<Rational> = vec![source.x.clone(), target.x.clone()];
        let mut ys: Vec<Rational> = vec![source.y.clone(), target.y.clone()];
        for b in &boxes {
            xs.push(b.xmin.clone());
            xs.push(b.xmax.clone());
            ys.push(b.ymin.clone());
            ys.push(b.ymax.clone());
        }
        xs.extend_from_slice(extra_x);
        ys.extend_from_slice(extra_y);
        let pad = |v: &mut Vec<Rational>| {
            let lo = v.iter().min().unwrap() - rat(1);
            let hi = v.iter().max().unwrap() + rat(1);
            v.push(lo);
            v.push(hi);
            v.sort();
            v.dedup();
        };
        pad(&mut xs);
        pad(&mut ys);

        let ncx = xs.len() - 1;
        let ncy = ys.len() - 1;
        let mut grid = CompressedGrid {
            ncx,
            ncy,
            blocked: vec![false; ncx * ncy],
            vcov: vec![false; (ncx + 1) * ncy],
            hcov: vec![false; (ncy + 1) * ncx],
            xs,
            ys,
            source,
            target,
        };
        for b in &boxes {
            grid.rasterize(b);
        }
        Ok(grid)
    }

    fn coord_index(coords: &[Rational], value: &Rational) -> usize {
        coords
            .binary_search(value)
            .expect("grid lines contain every box edge")
    }

    fn rasterize(&mut self, b: &BoundingBox) {
        let i0 = Self::coord_index(&self.xs, &b.xmin);
        let i1 = Self::coord_index(&self.xs, &b.xmax);
        let j0 = Self::coord_index(&self.ys, &b.ymin);
        let j1 = Self::coord_index(&self.ys, &b.ymax);
        for j in j0..j1 {
            for i in i0..i1 {
                self.blocked[j * self.ncx + i] = true;
            }
        }
        for i in i0..=i1 {
            for j in j0..j1 {
                self.vcov[i * self.ncy + j] = true;
            }
        }
        for j in j0..=j1 {
            for i in i0..i1 {
                self.hcov[j * self.ncx + i] = true;
            }
        }
    }

    /// The up-to-four free cells whose closure contains `p`. Anchor
    /// coordinates are grid lines, so `p` sits on a grid vertex.
    fn seed_cells(&self, p: &Point) -> Vec<usize> {
        let ix = Self::coord_index(&self.xs, &p.x);
        let iy = Self::coord_index(&self.ys, &p.y);
        debug_assert!(ix >= 1 && ix < self.xs.len() - 1);
        debug_assert!(iy >= 1 && iy < self.ys.len() - 1);
        let mut seeds = Vec::with_capacity(4);
        for i in [ix - 1, ix] {
            for j in [iy - 1, iy] {
                let cell = j * self.ncx + i;
                debug_assert!(!self.blocked[cell], "anchor cell inside the union");
                seeds.push(cell);
            }
        }
        seeds
    }

    /// True iff every path between the anchors meets the closed union.
    pub fn separated(&self) -> bool {
        let sources = self.seed_cells(&self.source);
        let targets = self.seed_cells(&self.target);
        let mut visited = vec![false; self.ncx * self.ncy];
        let mut queue: std::collections::VecDeque<usize> = std::collections::VecDeque::new();
        for &c in &sources {
            if !visited[c] {
                visited[c] = true;
                queue.push_back(c);
            }
        }
        while let Some(cell) = queue.pop_front() {
            let i = cell % self.ncx;
            let j = cell / self.ncx;
            let push = |c: usize, visited: &mut Vec<bool>, queue: &mut std::collections::VecDeque<usize>| {
                if !visited[c] && !self.blocked[c] {
                    visited[c] = true;
                    queue.push_back(c);
                }
            };
            if i > 0 && !self.vcov[i * self.ncy + j] {
                push(cell - 1, &mut visited, &mut queue);
            }
            if i + 1 < self.ncx && !self.vcov[(i + 1) * self.ncy + j] {
                push(cell + 1, &mut visited, &mut queue);
            }
            if j > 0 && !self.hcov[j * self.ncx + i] {
                push(cell - self.ncx, &mut visited, &mut queue);
            }
            if j + 1 < self.ncy && !self.hcov[(j + 1) * self.ncx + i] {
                push(cell + self.ncx, &mut visited, &mut queue);
            }
        }
        !targets.iter().any(|&c| visited[c])
    }
}

/// Ground-truth separation verdict for a family of closed axis-aligned
/// boxes, none of which may contain an anchor.
pub fn floodfill_separated(anchor: &Anchor, bodies: &[ConvexBody]) -> Result<bool, VerifyError> {
    Ok(CompressedGrid::build(anchor, bodies)?.separated())
}

/// Same verdict computed on a grid refined with extra coordinate lines.
pub fn floodfill_separated_refined(
    anchor: &Anchor,
    bodies: &[ConvexBody],
    extra_x: &[Rational],
    extra_y: &[Rational],
) -> Result<bool, VerifyError> {
    Ok(CompressedGrid::build_refined(anchor, bodies, extra_x, extra_y)?.separated())
}

/// Whether `s` and `t` lie in green boxes connected through the closed
/// green region. Corner contact connects, since the shared corner belongs
/// to both closed boxes.
pub fn green_path_exists(
    green: &[ConvexBody],
    s: &Point,
    t: &Point,
) -> Result<bool, VerifyError> {
    let boxes = axis_boxes(green)?;
    let s_ids: Vec<usize> = boxes
        .iter()
        .enumerate()
        .filter(|(_, b)| b.contains(s))
        .map(|(i, _)| i)
        .collect();
    let t_ids: Vec<usize> = boxes
        .iter()
        .enumerate()
        .filter(|(_, b)| b.contains(t))
        .map(|(i, _)| i)
        .collect();
    if s_ids.is_empty() || t_ids.is_empty() {
        return Ok(false);
    }
    let mut uf = UnionFind::with_len(boxes.len());
    for i in 0..boxes.len() {
        for j in i + 1..boxes.len() {
            if boxes[i].overlaps(boxes[j]) {
                uf.union(i, j);
            }
        }
    }
    for &si in &s_ids {
        for &ti in &t_ids {
            if uf.same(si, ti) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Deterministic stream of random integer-coordinate boxes inside
/// `[-extent, extent]^2`, each avoiding both anchors.
pub fn random_box_stream(
    seed: u64,
    count: usize,
    extent: i64,
    anchor: &Anchor,
) -> Vec<ConvexBody> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let x1 = rng.random_range(-extent..=extent);
        let x2 = rng.random_range(-extent..=extent);
        let y1 = rng.random_range(-extent..=extent);
        let y2 = rng.random_range(-extent..=extent);
        if x1 == x2 || y1 == y2 {
            continue;
        }
        let body = ConvexBody::axis_box(
            rat(x1.min(x2)),
            rat(y1.min(y2)),
            rat(x1.max(x2)),
            rat(y1.max(y2)),
        )
        .expect("sides are positive");
        if body.contains(anchor.source()) || body.contains(anchor.target()) {
            continue;
        }
        out.push(body);
    }
    out
}

/// Deterministic stream of random unit boxes at integer positions inside
/// `[0, extent]^2`, each avoiding both anchors.
pub fn random_unit_boxes(
    seed: u64,
    count: usize,
    extent: i64,
    anchor: &Anchor,
) -> Vec<ConvexBody> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let x = rng.random_range(0..extent);
        let y = rng.random_range(0..extent);
        let body = ConvexBody::axis_box(rat(x), rat(y), rat(x + 1), rat(y + 1))
            .expect("unit sides");
        if body.contains(anchor.source()) || body.contains(anchor.target()) {
            continue;
        }
        out.push(body);
    }
    out
}

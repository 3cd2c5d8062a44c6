//! Union-find with union by rank and full path compression, augmented with
//! a per-node parity bit.
//!
//! Every node stores the parity of a label sum along the implicit forest
//! path from itself to its parent. The invariants are:
//!
//! * a root has itself as parent and parity 0;
//! * a non-root's parity equals the label parity of the forest path from
//!   its current union-find parent down to the node.
//!
//! Compression folds parities as nodes are relinked, so after `findext(u)`
//! the stored parity of `u` is its parity all the way to the root. Edge
//! labels are caller-supplied bits; the structure itself is geometry-free.
//!
//! A plain (unlabeled) [`UnionFind`] with the same balancing lives here
//! too.

use thiserror::Error;

/// Opaque dense handle to a node. Handles are only meaningful for the
/// structure that issued them and are never invalidated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(usize);

impl NodeId {
    pub fn index(self) -> usize {
        self.0
    }

    /// Rebuilds a handle from a dense index. Only valid for indices issued
    /// by the structure the handle is used with.
    pub(crate) fn from_index(i: usize) -> NodeId {
        NodeId(i)
    }
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("nodes are already in the same set")]
pub struct SameSetError;

/// Operation counters, kept cheap enough to update unconditionally.
/// `parent_hops` counts parent-pointer dereferences on the climbing pass of
/// `findext`, the quantity bounded by the inverse-Ackermann analysis.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct UfStats {
    pub makeset_calls: u64,
    pub findext_calls: u64,
    pub unionext_calls: u64,
    pub parent_hops: u64,
}

impl UfStats {
    pub fn operations(&self) -> u64 {
        self.makeset_calls + self.findext_calls + self.unionext_calls
    }
}

/// Parity-labeled union-find.
#[derive(Debug, Clone, Default)]
pub struct ParityUnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
    parity: Vec<bool>,
    stats: UfStats,
    scratch: Vec<usize>,
}

impl ParityUnionFind {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Creates a fresh singleton: its own root, rank 0, parity 0.
    pub fn makeset(&mut self) -> NodeId {
        self.stats.makeset_calls += 1;
        let id = self.parent.len();
        self.parent.push(id);
        self.rank.push(0);
        self.parity.push(false);
        NodeId(id)
    }

    /// Finds the root of `u`, compressing the whole path onto the root and
    /// folding each relinked node's parity into its parity-to-root.
    ///
    /// Iterative two-pass form; the final state matches the recursive
    /// formulation (recurse on the parent, fold the parent's updated
    /// parity, relink).
    pub fn findext(&mut self, u: NodeId) -> NodeId {
        self.stats.findext_calls += 1;
        let mut path = std::mem::take(&mut self.scratch);
        path.clear();
        let mut x = u.0;
        while self.parent[x] != x {
            path.push(x);
            x = self.parent[x];
            self.stats.parent_hops += 1;
        }
        let root = x;
        // Fold from the node nearest the root outward: each node's old
        // parent has already been updated to carry its parity-to-root.
        for &node in path.iter().rev() {
            let p = self.parent[node];
            let fold = self.parity[p];
            self.parity[node] ^= fold;
            self.parent[node] = root;
        }
        self.scratch = path;
        NodeId(root)
    }

    /// Merges the sets of `u` and `v`, which must differ, across an edge
    /// with label parity `edge_parity`. The root demoted by the rank rule
    /// receives parity `parity(u) ^ parity(v) ^ edge_parity`; on a rank tie
    /// the root of `u` is demoted and the surviving rank grows by one.
    pub fn unionext(
        &mut self,
        u: NodeId,
        v: NodeId,
        edge_parity: bool,
    ) -> Result<(), SameSetError> {
        self.stats.unionext_calls += 1;
        let ru = self.findext(u);
        let rv = self.findext(v);
        if ru == rv {
            return Err(SameSetError);
        }
        let b = self.parity[u.0] ^ self.parity[v.0] ^ edge_parity;
        if self.rank[ru.0] > self.rank[rv.0] {
            self.parent[rv.0] = ru.0;
            self.parity[rv.0] = b;
        } else {
            self.parent[ru.0] = rv.0;
            self.parity[ru.0] = b;
            if self.rank[ru.0] == self.rank[rv.0] {
                self.rank[rv.0] += 1;
            }
        }
        Ok(())
    }

    /// Whether `u` and `v` currently share a root. Compresses both paths.
    pub fn same_set(&mut self, u: NodeId, v: NodeId) -> bool {
        self.findext(u) == self.findext(v)
    }

    /// Label parity of the forest path from the root of `u`'s set down to
    /// `u`. Zero for roots.
    pub fn parity_to_root(&mut self, u: NodeId) -> bool {
        self.findext(u);
        self.parity[u.0]
    }

    pub fn stats(&self) -> UfStats {
        self.stats
    }

    // Read-only introspection; none of these compress.

    pub fn parent_of(&self, u: NodeId) -> NodeId {
        NodeId(self.parent[u.0])
    }

    pub fn stored_parity(&self, u: NodeId) -> bool {
        self.parity[u.0]
    }

    pub fn rank_of(&self, u: NodeId) -> u8 {
        self.rank[u.0]
    }

    pub fn is_root(&self, u: NodeId) -> bool {
        self.parent[u.0] == u.0
    }
}

/// Plain union-find with union by rank and path compression.
#[derive(Debug, Clone, Default)]
pub struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
    ops: u64,
}

impl UnionFind {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_len(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
            ops: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn make(&mut self) -> usize {
        self.ops += 1;
        let id = self.parent.len();
        self.parent.push(id);
        self.rank.push(0);
        id
    }

    pub fn find(&mut self, x: usize) -> usize {
        self.ops += 1;
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    /// Returns true if the sets were previously disjoint.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        self.ops += 1;
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return false;
        }
        if self.rank[ra] > self.rank[rb] {
            self.parent[rb] = ra;
        } else {
            self.parent[ra] = rb;
            if self.rank[ra] == self.rank[rb] {
                self.rank[rb] += 1;
            }
        }
        true
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    /// Total operations issued so far.
    pub fn ops(&self) -> u64 {
        self.ops
    }
}

//! Types shared by every heap flavour: item handles, errors, counters and
//! the instrumentation event stream.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Caller-chosen handle for an item. Handles are small dense integers; every
/// heap keeps a table indexed by them that maps an item to the full node
/// currently holding it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ItemId(pub u32);

impl ItemId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ItemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Index of a node slot inside a heap's arena.
pub type NodeId = u32;

pub(crate) const NIL: NodeId = NodeId::MAX;

#[inline]
pub(crate) fn opt(id: NodeId) -> Option<NodeId> {
    (id != NIL).then_some(id)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HeapError {
    #[error("item {0} is already in the heap")]
    DuplicateItem(ItemId),
    #[error("item {0} is not in the heap")]
    UnknownItem(ItemId),
    #[error("new key for item {0} is not smaller than its current key")]
    KeyNotDecreased(ItemId),
    #[error("heap is empty")]
    Empty,
    #[error("cannot meld heaps with different configurations ({0} vs {1})")]
    Incompatible(String, String),
    #[error("invalid variant: {0}")]
    InvalidVariant(String),
    #[error("item {0} is not held by a root")]
    NotARoot(ItemId),
}

/// Monotone operation counters. Melding sums the counters of both heaps.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub ranked_links: u64,
    pub unranked_links: u64,
    pub comparisons: u64,
    pub hollow_destroyed: u64,
    pub nodes_created: u64,
    pub max_rank_seen: u32,
}

impl Stats {
    pub fn links(&self) -> u64 {
        self.ranked_links + self.unranked_links
    }

    pub(crate) fn absorb(&mut self, other: &Stats) {
        self.ranked_links += other.ranked_links;
        self.unranked_links += other.unranked_links;
        self.comparisons += other.comparisons;
        self.hollow_destroyed += other.hollow_destroyed;
        self.nodes_created += other.nodes_created;
        self.max_rank_seen = self.max_rank_seen.max(other.max_rank_seen);
    }

    #[inline]
    pub(crate) fn saw_rank(&mut self, rank: u32) {
        if rank > self.max_rank_seen {
            self.max_rank_seen = rank;
        }
    }
}

/// Structural events emitted by an instrumented heap. Node ids refer to the
/// emitting heap's arena; `Merged` and `Rebuilt` announce renumbering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Event {
    /// A fresh full node was made for `item` (insert or decrease-key).
    Created { node: NodeId, item: ItemId, rank: u32 },
    /// Decrease-key moved the item of `from` into the new node `to`. `from`
    /// is now hollow and `to` is its second parent (two-parent heaps) or the
    /// receiver of some of its children (one-parent heaps).
    Moved { from: NodeId, to: NodeId },
    /// Decrease-key changed the key of `node` without creating a node.
    KeyLowered { node: NodeId },
    /// `loser` became a child of `winner`. On a ranked link the winner's rank
    /// has been incremented.
    Linked { winner: NodeId, loser: NodeId, ranked: bool },
    /// One-parent decrease-key moved `child` from `from` to `to`.
    ChildMoved { child: NodeId, from: NodeId, to: NodeId },
    /// The item of `node` was deleted.
    Hollowed { node: NodeId },
    /// A hollow node with two parents lost `parent` without becoming a root.
    ParentLost { node: NodeId, parent: NodeId },
    /// A hollow root was destroyed.
    Destroyed { node: NodeId },
    /// The emitting heap absorbed another. Its own previous nodes were shifted
    /// by `receiver_offset`, the absorbed heap's by `argument_offset`.
    Merged { receiver_offset: u32, argument_offset: u32 },
    /// All hollow nodes were removed. `remap` lists (old id, new id) for every
    /// surviving node and `arcs` the (parent, child) pairs of the new shape in
    /// new ids. Afterwards every node has rank 0 and no ranked children.
    Rebuilt { remap: Vec<(NodeId, NodeId)>, arcs: Vec<(NodeId, NodeId)> },
}

/// Item table: `ItemId -> NodeId`.
#[derive(Debug, Clone, Default)]
pub(crate) struct ItemTable {
    slots: Vec<NodeId>,
}

impl ItemTable {
    #[inline]
    pub fn get(&self, item: ItemId) -> Option<NodeId> {
        self.slots.get(item.index()).copied().and_then(opt)
    }

    #[inline]
    pub fn set(&mut self, item: ItemId, node: NodeId) {
        let i = item.index();
        if i >= self.slots.len() {
            self.slots.resize(i + 1, NIL);
        }
        self.slots[i] = node;
    }

    #[inline]
    pub fn clear(&mut self, item: ItemId) {
        if let Some(slot) = self.slots.get_mut(item.index()) {
            *slot = NIL;
        }
    }
}

/// φ, the golden ratio.
pub const PHI: f64 = 1.618_033_988_749_895;

/// `floor(log_φ n)`, the largest rank a heap of `n` nodes may contain.
/// Returns 0 for `n <= 1`.
pub fn rank_bound(n: u64) -> u32 {
    if n <= 1 {
        return 0;
    }
    let mut r = ((n as f64).ln() / PHI.ln()).floor() as u32;
    // guard against rounding at exact powers
    while r > 0 && PHI.powi(r as i32) > n as f64 * (1.0 + 1e-12) {
        r -= 1;
    }
    while PHI.powi(r as i32 + 1) <= n as f64 {
        r += 1;
    }
    r
}

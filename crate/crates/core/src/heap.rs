//! The two-parent hollow heap.
//!
//! A heap-ordered dag with exactly one full root. Insert and meld do one
//! unranked link. Decrease-key leaves the old node in place as a hollow node
//! and makes a fresh node, holding the item, its second parent. Deletion is
//! lazy: only deleting the item of the root triggers any restructuring.
//!
//! Nodes live in a per-heap arena and are addressed by [`NodeId`]. Each node
//! stores `child` (first child), `next` (next sibling in its first parent's
//! list) and `ep` (second parent). A node with a second parent is always the
//! last child of that parent, which lets a traversal of the second parent's
//! list recognise its end without a separate terminator.

use crate::common::{opt, Event, HeapError, ItemId, ItemTable, NodeId, Stats, NIL};
use crate::policy::{Family, RankPolicy};
use crate::strategy::{LinkStrategy, RootInfo};

#[derive(Debug, Clone)]
pub(crate) struct Node<K> {
    pub key: K,
    pub rank: u32,
    pub item: Option<ItemId>,
    pub child: NodeId,
    pub next: NodeId,
    pub ep: NodeId,
}

pub struct HollowHeap<K> {
    pub(crate) nodes: Vec<Node<K>>,
    pub(crate) free: Vec<NodeId>,
    pub(crate) items: ItemTable,
    pub(crate) min: NodeId,
    pub(crate) num_nodes: usize,
    pub(crate) num_items: usize,
    pub(crate) stats: Stats,
    pub(crate) policy: RankPolicy,
    scratch: Vec<NodeId>,
    pub(crate) journal: Option<Vec<Event>>,
    strategy: Option<Box<dyn LinkStrategy>>,
}

impl<K> std::fmt::Debug for HollowHeap<K> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HollowHeap")
            .field("policy", &self.policy)
            .field("items", &self.num_items)
            .field("nodes", &self.num_nodes)
            .field("stats", &self.stats)
            .finish()
    }
}

impl<K: Ord + Clone> Default for HollowHeap<K> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Ord + Clone> HollowHeap<K> {
    pub fn new() -> Self {
        HollowHeap {
            nodes: Vec::new(),
            free: Vec::new(),
            items: ItemTable::default(),
            min: NIL,
            num_nodes: 0,
            num_items: 0,
            stats: Stats::default(),
            policy: RankPolicy::LAZY_R2,
            scratch: Vec::new(),
            journal: None,
            strategy: None,
        }
    }

    /// A two-parent heap with a different lazy rank rule.
    pub fn with_policy(policy: RankPolicy) -> Result<Self, HeapError> {
        if policy.family != Family::Lazy {
            return Err(HeapError::InvalidVariant(format!("two-parent heaps need a lazy policy, got {policy}")));
        }
        Ok(HollowHeap { policy, ..Self::new() })
    }

    pub fn policy(&self) -> RankPolicy {
        self.policy
    }

    pub fn len(&self) -> usize {
        self.num_items
    }

    pub fn is_empty(&self) -> bool {
        self.num_items == 0
    }

    /// Number of live nodes, full and hollow.
    pub fn node_count(&self) -> usize {
        self.num_nodes
    }

    pub fn stats(&self) -> &Stats {
        &self.stats
    }

    pub fn contains(&self, item: ItemId) -> bool {
        self.items.get(item).is_some()
    }

    pub fn key_of(&self, item: ItemId) -> Option<&K> {
        self.items.get(item).map(|u| &self.nodes[u as usize].key)
    }

    /// Start or stop recording [`Event`]s.
    pub fn set_instrumented(&mut self, on: bool) {
        self.journal = if on { Some(self.journal.take().unwrap_or_default()) } else { None };
    }

    pub fn take_events(&mut self) -> Vec<Event> {
        self.journal.as_mut().map(std::mem::take).unwrap_or_default()
    }

    pub fn set_link_strategy(&mut self, strategy: Option<Box<dyn LinkStrategy>>) {
        self.strategy = strategy;
    }

    pub fn find_min(&self) -> Option<(ItemId, &K)> {
        let u = opt(self.min)?;
        let node = &self.nodes[u as usize];
        Some((node.item.expect("root is full"), &node.key))
    }

    pub fn insert(&mut self, item: ItemId, key: K) -> Result<(), HeapError> {
        if self.items.get(item).is_some() {
            return Err(HeapError::DuplicateItem(item));
        }
        let u = self.make_node(item, key, 0);
        if let Some(s) = self.strategy.as_mut() {
            s.on_insert(item);
        }
        self.num_items += 1;
        self.min = if self.min == NIL { u } else { self.link(u, self.min, false) };
        Ok(())
    }

    /// Absorb `other`. On equal minimum keys the root of `self` wins.
    pub fn meld(&mut self, mut other: HollowHeap<K>) -> Result<(), HeapError> {
        if self.policy != other.policy {
            return Err(HeapError::Incompatible(self.policy.to_string(), other.policy.to_string()));
        }
        if cfg!(debug_assertions) {
            for node in &other.nodes {
                if let Some(it) = node.item {
                    if other.items.get(it).is_some() && self.items.get(it).is_some() {
                        return Err(HeapError::DuplicateItem(it));
                    }
                }
            }
        }
        self.stats.absorb(&other.stats);
        let other_min = self.adopt(&mut other);
        if other_min != NIL {
            self.min = if self.min == NIL { other_min } else { self.link(other_min, self.min, false) };
        }
        Ok(())
    }

    /// Move the nodes of `other` into this arena, appending the smaller arena
    /// to the larger. Returns `other`'s root under the new numbering.
    fn adopt(&mut self, other: &mut HollowHeap<K>) -> NodeId {
        let (receiver_offset, argument_offset);
        if other.nodes.len() <= self.nodes.len() {
            receiver_offset = 0;
            argument_offset = self.nodes.len() as u32;
            let moved = std::mem::take(&mut other.nodes);
            self.append_shifted(moved, argument_offset, &other.free);
        } else {
            receiver_offset = other.nodes.len() as u32;
            argument_offset = 0;
            let mine = std::mem::replace(&mut self.nodes, std::mem::take(&mut other.nodes));
            let my_free = std::mem::replace(&mut self.free, std::mem::take(&mut other.free));
            self.items = std::mem::take(&mut other.items);
            self.min = shift(self.min, receiver_offset);
            self.append_shifted(mine, receiver_offset, &my_free);
        }
        self.num_nodes += other.num_nodes;
        self.num_items += other.num_items;
        if let Some(j) = self.journal.as_mut() {
            j.push(Event::Merged { receiver_offset, argument_offset });
        }
        let m = shift(other.min, argument_offset);
        other.min = NIL;
        other.num_nodes = 0;
        other.num_items = 0;
        m
    }

    fn append_shifted(&mut self, nodes: Vec<Node<K>>, offset: u32, free: &[NodeId]) {
        let mut free_set = vec![false; nodes.len()];
        for &f in free {
            free_set[f as usize] = true;
            self.free.push(f + offset);
        }
        for (i, mut node) in nodes.into_iter().enumerate() {
            node.child = shift(node.child, offset);
            node.next = shift(node.next, offset);
            node.ep = shift(node.ep, offset);
            if !free_set[i] {
                if let Some(it) = node.item {
                    self.items.set(it, i as u32 + offset);
                }
            }
            self.nodes.push(node);
        }
    }

    pub fn decrease_key(&mut self, item: ItemId, key: K) -> Result<(), HeapError> {
        let u = self.items.get(item).ok_or(HeapError::UnknownItem(item))?;
        if key >= self.nodes[u as usize].key {
            return Err(HeapError::KeyNotDecreased(item));
        }
        if u == self.min {
            self.nodes[u as usize].key = key;
            self.emit(Event::KeyLowered { node: u });
            return Ok(());
        }
        let old_rank = self.nodes[u as usize].rank;
        if let Some(s) = self.strategy.as_mut() {
            s.on_decrease(item, old_rank);
        }
        let v = self.make_node(item, key, self.policy.new_rank(old_rank));
        self.nodes[u as usize].item = None;
        self.nodes[v as usize].child = u;
        self.nodes[u as usize].ep = v;
        self.emit(Event::Moved { from: u, to: v });
        self.min = self.link(v, self.min, false);
        Ok(())
    }

    pub fn delete_min(&mut self) -> Result<(ItemId, K), HeapError> {
        let u = opt(self.min).ok_or(HeapError::Empty)?;
        let node = &self.nodes[u as usize];
        let item = node.item.expect("root is full");
        let key = node.key.clone();
        self.delete(item)?;
        Ok((item, key))
    }

    pub fn delete(&mut self, item: ItemId) -> Result<(), HeapError> {
        let u = self.items.get(item).ok_or(HeapError::UnknownItem(item))?;
        self.nodes[u as usize].item = None;
        self.items.clear(item);
        self.num_items -= 1;
        self.emit(Event::Hollowed { node: u });
        if u != self.min {
            return Ok(());
        }
        self.restructure();
        debug_assert!(self.scratch.iter().all(|&x| x == NIL));
        Ok(())
    }

    /// Destroy every hollow root reachable from the hollow minimum, then link
    /// the surviving full roots into one tree.
    fn restructure(&mut self) {
        let mut max_rank = 0usize;
        let mut pending: Option<Vec<RootInfo>> = self.strategy.as_ref().map(|_| Vec::new());
        let mut h = self.min;
        self.nodes[h as usize].next = NIL;
        while h != NIL {
            let v = h;
            let mut w = self.nodes[v as usize].child;
            h = self.nodes[v as usize].next;
            self.destroy(v);
            while w != NIL {
                let u = w;
                w = self.nodes[u as usize].next;
                let un = &mut self.nodes[u as usize];
                if un.item.is_none() {
                    if un.ep == NIL {
                        un.next = h;
                        h = u;
                    } else {
                        if un.ep == v {
                            w = NIL;
                        } else {
                            un.next = NIL;
                        }
                        un.ep = NIL;
                        self.emit(Event::ParentLost { node: u, parent: v });
                    }
                } else if let (Some(p), Some(item)) = (pending.as_mut(), un.item) {
                    p.push(RootInfo { node: u, item, rank: un.rank });
                } else {
                    self.do_ranked_links(u, &mut max_rank);
                }
            }
        }
        if let Some(mut p) = pending {
            if let Some(s) = self.strategy.as_mut() {
                s.order(&mut p);
            }
            for r in p {
                self.do_ranked_links(r.node, &mut max_rank);
            }
        }
        self.min = self.do_unranked_links(max_rank);
    }

    fn do_ranked_links(&mut self, mut u: NodeId, max_rank: &mut usize) {
        loop {
            let r = self.nodes[u as usize].rank as usize;
            if r >= self.scratch.len() {
                self.scratch.resize(r + 2, NIL);
            }
            let a = self.scratch[r];
            if a == NIL {
                self.scratch[r] = u;
                if r > *max_rank {
                    *max_rank = r;
                }
                return;
            }
            self.scratch[r] = NIL;
            u = self.link(u, a, true);
        }
    }

    fn do_unranked_links(&mut self, max_rank: usize) -> NodeId {
        let mut h = NIL;
        for i in 0..(max_rank + 1).min(self.scratch.len()) {
            let a = self.scratch[i];
            if a != NIL {
                self.scratch[i] = NIL;
                h = if h == NIL { a } else { self.link(h, a, false) };
            }
        }
        h
    }

    /// Link two full roots; the first argument loses ties.
    pub(crate) fn link(&mut self, v: NodeId, w: NodeId, ranked: bool) -> NodeId {
        self.stats.comparisons += 1;
        let (winner, loser) = if self.nodes[v as usize].key >= self.nodes[w as usize].key { (w, v) } else { (v, w) };
        self.add_child(loser, winner);
        if ranked {
            let wn = &mut self.nodes[winner as usize];
            wn.rank += 1;
            let r = wn.rank;
            self.stats.ranked_links += 1;
            self.stats.saw_rank(r);
        } else {
            self.stats.unranked_links += 1;
        }
        self.emit(Event::Linked { winner, loser, ranked });
        winner
    }

    fn add_child(&mut self, v: NodeId, w: NodeId) {
        self.nodes[v as usize].next = self.nodes[w as usize].child;
        self.nodes[w as usize].child = v;
    }

    fn make_node(&mut self, item: ItemId, key: K, rank: u32) -> NodeId {
        let node = Node { key, rank, item: Some(item), child: NIL, next: NIL, ep: NIL };
        let id = match self.free.pop() {
            Some(id) => {
                self.nodes[id as usize] = node;
                id
            }
            None => {
                self.nodes.push(node);
                (self.nodes.len() - 1) as NodeId
            }
        };
        self.items.set(item, id);
        self.num_nodes += 1;
        self.stats.nodes_created += 1;
        self.stats.saw_rank(rank);
        self.emit(Event::Created { node: id, item, rank });
        id
    }

    fn destroy(&mut self, v: NodeId) {
        self.free.push(v);
        self.num_nodes -= 1;
        self.stats.hollow_destroyed += 1;
        self.emit(Event::Destroyed { node: v });
    }

    #[inline]
    pub(crate) fn emit(&mut self, e: Event) {
        if let Some(j) = self.journal.as_mut() {
            j.push(e);
        }
    }

    /// The root, if any.
    pub fn root(&self) -> Option<NodeId> {
        opt(self.min)
    }

    /// Copy of the live part of the structure, for checkers.
    pub fn snapshot(&self) -> DagSnapshot<K> {
        let mut live = vec![true; self.nodes.len()];
        for &f in &self.free {
            live[f as usize] = false;
        }
        DagSnapshot {
            nodes: self
                .nodes
                .iter()
                .zip(live)
                .map(|(n, live)| SnapNode {
                    live,
                    key: n.key.clone(),
                    rank: n.rank,
                    item: n.item,
                    child: opt(n.child),
                    next: opt(n.next),
                    ep: opt(n.ep),
                })
                .collect(),
            root: opt(self.min),
            num_nodes: self.num_nodes,
            num_items: self.num_items,
            item_nodes: self
                .nodes
                .iter()
                .filter_map(|n| n.item)
                .filter_map(|it| self.items.get(it).map(|u| (it, u)))
                .collect(),
            scratch_clean: self.scratch.iter().all(|&x| x == NIL),
        }
    }

    /// Children of `u` in list order, full and hollow.
    pub fn children_of(&self, u: NodeId) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut c = self.nodes[u as usize].child;
        while c != NIL {
            out.push(c);
            let cn = &self.nodes[c as usize];
            if cn.ep == u {
                break;
            }
            c = cn.next;
        }
        out
    }

    pub(crate) fn node(&self, u: NodeId) -> &Node<K> {
        &self.nodes[u as usize]
    }

    pub(crate) fn node_of(&self, item: ItemId) -> Option<NodeId> {
        self.items.get(item)
    }
}

#[inline]
fn shift(id: NodeId, offset: u32) -> NodeId {
    if id == NIL {
        NIL
    } else {
        id + offset
    }
}

/// A plain-data image of a two-parent heap. Slot `i` is node id `i`; slots
/// on the free list have `live == false`.
#[derive(Debug, Clone)]
pub struct DagSnapshot<K> {
    pub nodes: Vec<SnapNode<K>>,
    pub root: Option<NodeId>,
    pub num_nodes: usize,
    pub num_items: usize,
    /// `(item, node)` for every item the heap's table maps.
    pub item_nodes: Vec<(ItemId, NodeId)>,
    pub scratch_clean: bool,
}

#[derive(Debug, Clone)]
pub struct SnapNode<K> {
    pub live: bool,
    pub key: K,
    pub rank: u32,
    pub item: Option<ItemId>,
    pub child: Option<NodeId>,
    pub next: Option<NodeId>,
    pub ep: Option<NodeId>,
}

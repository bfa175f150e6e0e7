//! One-parent hollow heaps, in one-root and multi-root form.
//!
//! Child lists are circular and reached through the last child, so both the
//! front and the back of a list can be extended in O(1). A ranked link makes
//! the loser the first child of the winner, an unranked link the last. With
//! no unranked links (multi-root) the children are in decreasing rank order.
//!
//! In multi-root form the roots form their own circular list through `next`,
//! entered at the minimum node. Hollow roots are allowed between operations.

use crate::common::{opt, Event, HeapError, ItemId, ItemTable, NodeId, Stats, NIL};
use crate::policy::{Family, RankPolicy};
use crate::strategy::{LinkStrategy, RootInfo};

/// Marks a node that was not hollowed by decrease-key.
pub(crate) const NO_DEC: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub(crate) struct ONode<K> {
    pub key: K,
    pub rank: u32,
    pub item: Option<ItemId>,
    /// Last child.
    pub child: NodeId,
    /// Next sibling, or next root in multi-root form.
    pub next: NodeId,
    /// Rank given to the replacement node if this node was hollowed by
    /// decrease-key, else `NO_DEC`.
    pub dec: u32,
    pub is_root: bool,
}

pub struct OneParentHeap<K> {
    pub(crate) nodes: Vec<ONode<K>>,
    pub(crate) free: Vec<NodeId>,
    pub(crate) items: ItemTable,
    pub(crate) min: NodeId,
    pub(crate) num_nodes: usize,
    pub(crate) num_items: usize,
    pub(crate) stats: Stats,
    pub(crate) policy: RankPolicy,
    pub(crate) multi_root: bool,
    pub(crate) in_place_root_decrease: bool,
    /// Set by a contracting rebuild of a multi-root heap: children may then
    /// outnumber the rank.
    pub(crate) has_unranked: bool,
    scratch: Vec<NodeId>,
    pub(crate) journal: Option<Vec<Event>>,
    strategy: Option<Box<dyn LinkStrategy>>,
}

impl<K> std::fmt::Debug for OneParentHeap<K> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OneParentHeap")
            .field("policy", &self.policy)
            .field("multi_root", &self.multi_root)
            .field("items", &self.num_items)
            .field("nodes", &self.num_nodes)
            .field("stats", &self.stats)
            .finish()
    }
}

impl<K: Ord + Clone> OneParentHeap<K> {
    pub fn new(policy: RankPolicy, multi_root: bool) -> Result<Self, HeapError> {
        if policy.family == Family::Lazy {
            return Err(HeapError::InvalidVariant(format!(
                "one-parent heaps need an eager or naive policy, got {policy}"
            )));
        }
        Ok(OneParentHeap {
            nodes: Vec::new(),
            free: Vec::new(),
            items: ItemTable::default(),
            min: NIL,
            num_nodes: 0,
            num_items: 0,
            stats: Stats::default(),
            policy,
            multi_root,
            in_place_root_decrease: true,
            has_unranked: false,
            scratch: Vec::new(),
            journal: None,
            strategy: None,
        })
    }

    pub fn policy(&self) -> RankPolicy {
        self.policy
    }

    pub fn is_multi_root(&self) -> bool {
        self.multi_root
    }

    /// Multi-root only: decrease the key of a root in place instead of
    /// moving its item. On by default.
    pub fn set_in_place_root_decrease(&mut self, on: bool) {
        self.in_place_root_decrease = on;
    }

    pub fn len(&self) -> usize {
        self.num_items
    }

    pub fn is_empty(&self) -> bool {
        self.num_items == 0
    }

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
        Some((node.item.expect("minimum node is full"), &node.key))
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
        self.add_tree(u);
        Ok(())
    }

    /// Add the root `u` of a fresh one-node tree.
    fn add_tree(&mut self, u: NodeId) {
        if self.min == NIL {
            self.nodes[u as usize].next = if self.multi_root { u } else { NIL };
            self.nodes[u as usize].is_root = true;
            self.min = u;
        } else if self.multi_root {
            self.nodes[u as usize].next = u;
            self.splice_roots(u);
            self.update_min(u);
        } else {
            self.nodes[u as usize].is_root = true;
            self.min = self.link(u, self.min, false);
        }
    }

    /// Catenate the circular root list entered at `u` after the minimum.
    fn splice_roots(&mut self, u: NodeId) {
        let m = self.min as usize;
        let a = self.nodes[m].next;
        let b = self.nodes[u as usize].next;
        self.nodes[m].next = b;
        self.nodes[u as usize].next = a;
        self.nodes[u as usize].is_root = true;
    }

    pub(crate) fn update_min(&mut self, u: NodeId) {
        self.stats.comparisons += 1;
        if self.nodes[u as usize].key < self.nodes[self.min as usize].key {
            self.min = u;
        }
    }

    pub fn meld(&mut self, mut other: OneParentHeap<K>) -> Result<(), HeapError> {
        if self.policy != other.policy || self.multi_root != other.multi_root {
            return Err(HeapError::Incompatible(self.describe(), other.describe()));
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
        self.has_unranked |= other.has_unranked;
        let m = self.adopt(&mut other);
        if m == NIL {
            return Ok(());
        }
        if self.min == NIL {
            self.min = m;
        } else if self.multi_root {
            self.splice_roots(m);
            self.update_min(m);
        } else {
            self.min = self.link(m, self.min, false);
        }
        Ok(())
    }

    fn describe(&self) -> String {
        format!("{}:{}", if self.multi_root { "multi_root" } else { "one_root" }, self.policy)
    }

    fn adopt(&mut self, other: &mut OneParentHeap<K>) -> NodeId {
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
        self.emit(Event::Merged { receiver_offset, argument_offset });
        let m = shift(other.min, argument_offset);
        other.min = NIL;
        other.num_nodes = 0;
        other.num_items = 0;
        m
    }

    fn append_shifted(&mut self, nodes: Vec<ONode<K>>, offset: u32, free: &[NodeId]) {
        let mut free_set = vec![false; nodes.len()];
        for &f in free {
            free_set[f as usize] = true;
            self.free.push(f + offset);
        }
        for (i, mut node) in nodes.into_iter().enumerate() {
            node.child = shift(node.child, offset);
            node.next = shift(node.next, offset);
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
        if self.multi_root && self.in_place_root_decrease && self.nodes[u as usize].is_root {
            self.nodes[u as usize].key = key;
            self.emit(Event::KeyLowered { node: u });
            self.update_min(u);
            return Ok(());
        }
        let r = self.nodes[u as usize].rank;
        if let Some(s) = self.strategy.as_mut() {
            s.on_decrease(item, r);
        }
        let k = self.policy.new_rank(r);
        let v = self.make_node(item, key, k);
        let un = &mut self.nodes[u as usize];
        un.item = None;
        un.dec = k;
        self.emit(Event::Moved { from: u, to: v });
        if self.policy.family == Family::Eager {
            self.move_children(u, v, r.saturating_sub(k));
        }
        self.add_tree(v);
        Ok(())
    }

    /// Leave the first `keep` children on `u` and move the rest to `v`.
    fn move_children(&mut self, u: NodeId, v: NodeId, keep: u32) {
        let last = self.nodes[u as usize].child;
        if last == NIL {
            return;
        }
        let first = self.nodes[last as usize].next;
        let (first_moved, kept_last) = if keep == 0 {
            (first, NIL)
        } else {
            let mut c = first;
            for _ in 1..keep {
                if c == last {
                    return;
                }
                c = self.nodes[c as usize].next;
            }
            if c == last {
                return;
            }
            (self.nodes[c as usize].next, c)
        };
        if self.journal.is_some() {
            let mut c = first_moved;
            loop {
                self.emit(Event::ChildMoved { child: c, from: u, to: v });
                if c == last {
                    break;
                }
                c = self.nodes[c as usize].next;
            }
        }
        if kept_last == NIL {
            self.nodes[u as usize].child = NIL;
        } else {
            self.nodes[kept_last as usize].next = first;
            self.nodes[u as usize].child = kept_last;
        }
        self.nodes[last as usize].next = first_moved;
        self.nodes[v as usize].child = last;
    }

    pub fn delete_min(&mut self) -> Result<(ItemId, K), HeapError> {
        let u = opt(self.min).ok_or(HeapError::Empty)?;
        let node = &self.nodes[u as usize];
        let item = node.item.expect("minimum node is full");
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

    fn restructure(&mut self) {
        let mut max_rank = 0usize;
        let mut pending: Option<Vec<RootInfo>> = self.strategy.as_ref().map(|_| Vec::new());
        let mut hollow = Vec::new();
        if self.multi_root {
            let start = self.min;
            let mut x = start;
            loop {
                let nx = self.nodes[x as usize].next;
                self.visit(x, &mut hollow, &mut pending, &mut max_rank);
                if nx == start {
                    break;
                }
                x = nx;
            }
        } else {
            hollow.push(self.min);
        }
        while let Some(v) = hollow.pop() {
            let last = self.nodes[v as usize].child;
            self.destroy(v);
            if last != NIL {
                let mut c = self.nodes[last as usize].next;
                loop {
                    let nc = self.nodes[c as usize].next;
                    self.visit(c, &mut hollow, &mut pending, &mut max_rank);
                    if c == last {
                        break;
                    }
                    c = nc;
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
        self.min = NIL;
        if self.multi_root {
            self.collect_roots(max_rank);
        } else {
            let mut h = NIL;
            for i in 0..(max_rank + 1).min(self.scratch.len()) {
                let a = self.scratch[i];
                if a != NIL {
                    self.scratch[i] = NIL;
                    h = if h == NIL { a } else { self.link(h, a, false) };
                }
            }
            if h != NIL {
                self.nodes[h as usize].next = NIL;
            }
            self.min = h;
        }
    }

    /// A node that has just become a root during restructuring.
    fn visit(
        &mut self,
        x: NodeId,
        hollow: &mut Vec<NodeId>,
        pending: &mut Option<Vec<RootInfo>>,
        max_rank: &mut usize,
    ) {
        let xn = &mut self.nodes[x as usize];
        xn.is_root = true;
        match xn.item {
            None => hollow.push(x),
            Some(item) => match pending.as_mut() {
                Some(p) => p.push(RootInfo { node: x, item, rank: xn.rank }),
                None => self.do_ranked_links(x, max_rank),
            },
        }
    }

    /// Thread the roots parked in the scratch array into a new root list in
    /// ascending rank order and find the minimum.
    fn collect_roots(&mut self, max_rank: usize) {
        let mut first = NIL;
        let mut prev = NIL;
        for i in 0..(max_rank + 1).min(self.scratch.len()) {
            let a = self.scratch[i];
            if a == NIL {
                continue;
            }
            self.scratch[i] = NIL;
            if first == NIL {
                first = a;
                self.min = a;
            } else {
                self.nodes[prev as usize].next = a;
                self.update_min(a);
            }
            prev = a;
        }
        if first != NIL {
            self.nodes[prev as usize].next = first;
        }
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

    /// Link two full roots; the first argument loses ties. A ranked loser
    /// goes to the front of the winner's list, an unranked one to the back.
    pub(crate) fn link(&mut self, v: NodeId, w: NodeId, ranked: bool) -> NodeId {
        self.stats.comparisons += 1;
        let (winner, loser) = if self.nodes[v as usize].key >= self.nodes[w as usize].key { (w, v) } else { (v, w) };
        self.push_child(winner, loser, !ranked);
        self.nodes[loser as usize].is_root = false;
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

    pub(crate) fn push_child(&mut self, w: NodeId, x: NodeId, at_back: bool) {
        let last = self.nodes[w as usize].child;
        if last == NIL {
            self.nodes[x as usize].next = x;
            self.nodes[w as usize].child = x;
        } else {
            self.nodes[x as usize].next = self.nodes[last as usize].next;
            self.nodes[last as usize].next = x;
            if at_back {
                self.nodes[w as usize].child = x;
            }
        }
    }

    fn make_node(&mut self, item: ItemId, key: K, rank: u32) -> NodeId {
        let node = ONode { key, rank, item: Some(item), child: NIL, next: NIL, dec: NO_DEC, is_root: false };
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

    /// Children of `u`, first to last.
    pub fn children_of(&self, u: NodeId) -> Vec<NodeId> {
        let mut out = Vec::new();
        let last = self.nodes[u as usize].child;
        if last == NIL {
            return out;
        }
        let mut c = self.nodes[last as usize].next;
        loop {
            out.push(c);
            if c == last {
                break;
            }
            c = self.nodes[c as usize].next;
        }
        out
    }

    /// Roots in list order starting at the minimum.
    pub fn roots(&self) -> Vec<NodeId> {
        let mut out = Vec::new();
        if self.min == NIL {
            return out;
        }
        if !self.multi_root {
            out.push(self.min);
            return out;
        }
        let mut x = self.min;
        loop {
            out.push(x);
            x = self.nodes[x as usize].next;
            if x == self.min || out.len() > self.nodes.len() {
                break;
            }
        }
        out
    }

    pub fn min_node(&self) -> Option<NodeId> {
        opt(self.min)
    }

    pub(crate) fn node(&self, u: NodeId) -> &ONode<K> {
        &self.nodes[u as usize]
    }

    pub(crate) fn node_of(&self, item: ItemId) -> Option<NodeId> {
        self.items.get(item)
    }

    pub fn snapshot(&self) -> TreeSnapshot<K> {
        let mut live = vec![true; self.nodes.len()];
        for &f in &self.free {
            live[f as usize] = false;
        }
        TreeSnapshot {
            nodes: self
                .nodes
                .iter()
                .enumerate()
                .map(|(i, n)| TreeNode {
                    live: live[i],
                    key: n.key.clone(),
                    rank: n.rank,
                    item: n.item,
                    children: if live[i] { self.children_of(i as NodeId) } else { Vec::new() },
                    decreased_to: (n.dec != NO_DEC).then_some(n.dec),
                })
                .collect(),
            roots: self.roots(),
            min: opt(self.min),
            multi_root: self.multi_root,
            policy: self.policy,
            has_unranked: self.has_unranked,
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
}

#[inline]
fn shift(id: NodeId, offset: u32) -> NodeId {
    if id == NIL {
        NIL
    } else {
        id + offset
    }
}

/// Plain-data image of a one-parent heap.
#[derive(Debug, Clone)]
pub struct TreeSnapshot<K> {
    pub nodes: Vec<TreeNode<K>>,
    pub roots: Vec<NodeId>,
    pub min: Option<NodeId>,
    pub multi_root: bool,
    pub policy: RankPolicy,
    pub has_unranked: bool,
    pub num_nodes: usize,
    pub num_items: usize,
    pub item_nodes: Vec<(ItemId, NodeId)>,
    pub scratch_clean: bool,
}

#[derive(Debug, Clone)]
pub struct TreeNode<K> {
    pub live: bool,
    pub key: K,
    pub rank: u32,
    pub item: Option<ItemId>,
    pub children: Vec<NodeId>,
    /// Rank of the replacement node if hollowed by decrease-key.
    pub decreased_to: Option<u32>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::policy::{Regime, SmallFn};

    fn binomial(l: u32, policy: RankPolicy, multi: bool) -> OneParentHeap<i64> {
        let mut h = OneParentHeap::new(policy, multi).unwrap();
        for i in 0..=(1u32 << l) {
            h.insert(ItemId(i), i as i64 * 10).unwrap();
        }
        h.delete_min().unwrap();
        h
    }

    fn ranks(h: &OneParentHeap<i64>, u: NodeId) -> Vec<u32> {
        h.children_of(u).iter().map(|&c| h.node(c).rank).collect()
    }

    #[test]
    fn ranked_children_in_decreasing_order() {
        for multi in [false, true] {
            let h = binomial(4, RankPolicy::EAGER_R2, multi);
            let root = h.min_node().unwrap();
            assert_eq!(h.roots().len(), 1);
            assert_eq!(ranks(&h, root), vec![3, 2, 1, 0]);
        }
    }

    #[test]
    fn unranked_children_go_last() {
        let mut h = binomial(2, RankPolicy::EAGER_R2, false);
        h.insert(ItemId(100), 1000).unwrap();
        let root = h.min_node().unwrap();
        let kids = h.children_of(root);
        assert_eq!(h.node(*kids.last().unwrap()).key, 1000);
        assert_eq!(ranks(&h, root), vec![1, 0, 0]);
    }

    #[test]
    fn eager_decrease_splits_children() {
        // root rank 6; decrease its rank-5 child
        let mut h = binomial(6, RankPolicy::EAGER_R2, false);
        let root = h.min_node().unwrap();
        let u = h.children_of(root)[0];
        assert_eq!(h.node(u).rank, 5);
        let it = h.node(u).item.unwrap();
        h.decrease_key(it, 1).unwrap();
        let v = h.node_of(it).unwrap();
        assert_eq!(h.node(v).rank, 3);
        assert_eq!(ranks(&h, u), vec![4, 3]);
        // v won the link with the old root, which is now its last child
        assert_eq!(ranks(&h, v), vec![2, 1, 0, 6]);
        assert!(h.node(u).item.is_none());
        assert_eq!(h.node(u).dec, 3);
    }

    #[test]
    fn eager_decrease_moves_unranked_children() {
        let mut h = OneParentHeap::new(RankPolicy::EAGER_R2, false).unwrap();
        for (i, k) in [0, 10, 20].into_iter().enumerate() {
            h.insert(ItemId(i as u32), k).unwrap();
        }
        h.delete_min().unwrap();
        h.insert(ItemId(3), 30).unwrap();
        h.insert(ItemId(4), 40).unwrap();
        // 10 has rank 1, ranked child 20 and unranked children 30, 40
        for (i, k) in [(5, 5), (6, 6), (7, 7)] {
            h.insert(ItemId(i), k).unwrap();
        }
        h.delete_min().unwrap();
        let u = h.node_of(ItemId(1)).unwrap();
        assert!(!h.node(u).is_root);
        let keys =
            |h: &OneParentHeap<i64>, x| -> Vec<i64> { h.children_of(x).iter().map(|&c| h.node(c).key).collect() };
        assert_eq!(keys(&h, u), vec![20, 30, 40]);
        h.decrease_key(ItemId(1), 1).unwrap();
        let v = h.node_of(ItemId(1)).unwrap();
        assert_eq!(h.node(v).rank, 0);
        assert_eq!(keys(&h, u), vec![20]);
        assert_eq!(keys(&h, v), vec![30, 40, 6]);
    }

    #[test]
    fn naive_decrease_moves_nothing() {
        let policy = RankPolicy::new(Family::Naive, Regime::Large(2));
        let mut h = binomial(5, policy, false);
        let root = h.min_node().unwrap();
        let u = h.children_of(root)[0];
        let before = h.children_of(u);
        let it = h.node(u).item.unwrap();
        h.decrease_key(it, -1).unwrap();
        assert_eq!(h.children_of(u), before);
        let v = h.node_of(it).unwrap();
        // only the old root, linked below v
        assert_eq!(h.children_of(v), vec![root]);
        assert_eq!(h.node(v).rank, 2);
    }

    #[test]
    fn naive_zero_equals_eager_zero() {
        let eager = RankPolicy::new(Family::Eager, Regime::Small(SmallFn::Identity));
        let naive = RankPolicy::new(Family::Naive, Regime::Small(SmallFn::Identity));
        let mut a = binomial(5, eager, false);
        let mut b = binomial(5, naive, false);
        for step in 0..40u32 {
            let ra = a.min_node().unwrap();
            let rb = b.min_node().unwrap();
            for (h, r) in [(&mut a, ra), (&mut b, rb)] {
                let kids: Vec<ItemId> = h.children_of(r).iter().filter_map(|&c| h.node(c).item).take(3).collect();
                for it in kids {
                    let k = *h.key_of(it).unwrap();
                    h.decrease_key(it, k - 1).unwrap();
                }
                h.insert(ItemId(1000 + step), 1_000_000 + step as i64).unwrap();
                h.delete_min().unwrap();
            }
            assert_eq!(a.stats(), b.stats());
        }
    }

    #[test]
    fn multi_root_decrease_and_delete() {
        let mut h = binomial(3, RankPolicy::EAGER_R2, true);
        let root = h.min_node().unwrap();
        let u = h.children_of(root)[0];
        let it = h.node(u).item.unwrap();
        h.decrease_key(it, -5).unwrap();
        assert_eq!(h.roots().len(), 2);
        assert_eq!(h.find_min(), Some((it, &-5)));
        // in-place decrease of a root
        let n = h.node_count();
        let other = h.node(root).item.unwrap();
        h.decrease_key(other, -7).unwrap();
        assert_eq!(h.node_count(), n);
        assert_eq!(h.find_min(), Some((other, &-7)));
        h.delete_min().unwrap();
        let rs: Vec<u32> = h.roots().iter().map(|&r| h.node(r).rank).collect();
        let mut sorted = rs.clone();
        sorted.dedup();
        assert_eq!(rs.len(), sorted.len());
    }

    #[test]
    fn multi_root_non_min_delete_in_place() {
        let mut h = binomial(3, RankPolicy::EAGER_R2, true);
        let before = *h.stats();
        h.delete(ItemId(3)).unwrap();
        assert_eq!(*h.stats(), before);
        assert_eq!(h.len(), 7);
    }

    #[test]
    fn melds() {
        for multi in [false, true] {
            let mut a = OneParentHeap::new(RankPolicy::EAGER_R2, multi).unwrap();
            let mut b = OneParentHeap::new(RankPolicy::EAGER_R2, multi).unwrap();
            for i in 0..5u32 {
                a.insert(ItemId(i), i as i64 * 2).unwrap();
                b.insert(ItemId(10 + i), i as i64 * 2 + 1).unwrap();
            }
            b.delete_min().unwrap();
            a.meld(b).unwrap();
            let mut out = Vec::new();
            while let Ok((_, k)) = a.delete_min() {
                out.push(k);
            }
            assert_eq!(out, vec![0, 2, 3, 4, 5, 6, 7, 8, 9]);
        }
        let a = OneParentHeap::<i64>::new(RankPolicy::EAGER_R2, true).unwrap();
        let mut b = OneParentHeap::<i64>::new(RankPolicy::EAGER_R2, false).unwrap();
        assert!(matches!(b.meld(a), Err(HeapError::Incompatible(..))));
    }

    #[test]
    fn rejects_lazy_policy() {
        assert!(OneParentHeap::<i64>::new(RankPolicy::LAZY_R2, false).is_err());
    }
}

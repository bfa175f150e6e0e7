//! Virtual parents, rebuilt from a heap's event stream.
//!
//! Virtual parents exist only for the analysis of two-parent heaps. A node
//! gets one when, as a root without one, it loses a ranked link. It loses it
//! when the virtual parent is destroyed. When decrease-key moves an item
//! from `u` to a new node `v`, every virtual child of `u` whose rank is
//! below `v.rank` becomes a virtual child of `v`. For one-parent heaps the
//! same rules, with explicit child moves, reproduce the ranked children.
//!
//! The shadow also tracks real parent sets and the clones of every item, so
//! that parent-count and clone-path properties can be checked from the log.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ops::Index;

use crate::common::{rank_bound, Event, ItemId, NodeId};
use crate::verify::check::{fib_bound, Violation, ViolationKind};

#[derive(Debug, Clone, Default)]
struct SNode {
    owner: Option<ItemId>,
    full: bool,
    rank: u32,
    dec_to: Option<u32>,
    vparent: Option<NodeId>,
    vchildren: BTreeSet<NodeId>,
    parents: Vec<NodeId>,
    children: Vec<NodeId>,
}

/// Replayed nodes indexed by id. Heap arenas are dense, so a vector beats
/// a hash map here.
#[derive(Debug, Clone, Default)]
struct NodeMap {
    slots: Vec<Option<SNode>>,
    len: usize,
}

impl NodeMap {
    fn len(&self) -> usize {
        self.len
    }

    fn contains_key(&self, id: &NodeId) -> bool {
        self.get(id).is_some()
    }

    fn get(&self, id: &NodeId) -> Option<&SNode> {
        self.slots.get(*id as usize).and_then(Option::as_ref)
    }

    fn get_mut(&mut self, id: &NodeId) -> Option<&mut SNode> {
        self.slots.get_mut(*id as usize).and_then(Option::as_mut)
    }

    fn insert(&mut self, id: NodeId, n: SNode) -> Option<SNode> {
        let i = id as usize;
        if self.slots.len() <= i {
            self.slots.resize_with(i + 1, || None);
        }
        let old = self.slots[i].replace(n);
        if old.is_none() {
            self.len += 1;
        }
        old
    }

    fn remove(&mut self, id: &NodeId) -> Option<SNode> {
        let old = self.slots.get_mut(*id as usize).and_then(Option::take);
        if old.is_some() {
            self.len -= 1;
        }
        old
    }

    /// Live nodes in ascending id order.
    fn iter(&self) -> impl Iterator<Item = (NodeId, &SNode)> + '_ {
        self.slots.iter().enumerate().filter_map(|(i, n)| n.as_ref().map(|n| (i as NodeId, n)))
    }

    fn drain(self) -> impl Iterator<Item = (NodeId, SNode)> {
        self.slots.into_iter().enumerate().filter_map(|(i, n)| n.map(|n| (i as NodeId, n)))
    }
}

impl Index<&NodeId> for NodeMap {
    type Output = SNode;

    fn index(&self, id: &NodeId) -> &SNode {
        self.get(id).expect("live shadow node")
    }
}

#[derive(Debug, Clone)]
pub struct Shadow {
    nodes: NodeMap,
    /// Clone paths, oldest first. A reinserted item starts a new path.
    paths: BTreeMap<u64, (ItemId, Vec<NodeId>)>,
    path_of: HashMap<NodeId, u64>,
    next_path: u64,
    track_clones: bool,
    log_violations: Vec<Violation>,
}

impl Shadow {
    /// `two_parent` enables the clone-path checks, which only hold there.
    pub fn new(two_parent: bool) -> Self {
        Shadow {
            nodes: NodeMap::default(),
            paths: BTreeMap::new(),
            path_of: HashMap::new(),
            next_path: 0,
            track_clones: two_parent,
            log_violations: Vec::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Violations detected while replaying events (parent gains, clone
    /// destruction order). Drained by the call.
    pub fn take_log_violations(&mut self) -> Vec<Violation> {
        std::mem::take(&mut self.log_violations)
    }

    pub fn apply_all(&mut self, events: impl IntoIterator<Item = Event>) {
        for e in events {
            self.apply(e, None);
        }
    }

    /// Replay the events of a meld. `incoming` is the shadow of the absorbed
    /// heap, merged in at its `Merged` event.
    pub fn apply_meld(&mut self, events: impl IntoIterator<Item = Event>, incoming: Shadow) {
        let mut incoming = Some(incoming);
        for e in events {
            let merged = matches!(e, Event::Merged { .. });
            self.apply(e, if merged { incoming.take() } else { None });
        }
    }

    fn flag(&mut self, kind: ViolationKind, node: NodeId, detail: impl Into<String>) {
        self.log_violations.push(Violation::new(kind, Some(node), detail));
    }

    fn apply(&mut self, e: Event, incoming: Option<Shadow>) {
        match e {
            Event::Created { node, item, rank } => {
                if self.nodes.contains_key(&node) {
                    self.flag(ViolationKind::Accounting, node, "created over a live node");
                }
                self.nodes.insert(node, SNode { owner: Some(item), full: true, rank, ..SNode::default() });
                self.path_of.insert(node, self.next_path);
                self.paths.insert(self.next_path, (item, vec![node]));
                self.next_path += 1;
            }
            Event::Moved { from, to } => {
                let k = self.nodes[&to].rank;
                let track = self.track_clones;
                let Some(u) = self.nodes.get_mut(&from) else { return };
                u.full = false;
                u.dec_to = Some(k);
                let moving: Vec<NodeId> = u.vchildren.iter().copied().collect();
                let two_parents = u.parents.len() > 1;
                let p_to = self.path_of[&to];
                let p_from = self.path_of[&from];
                self.paths.remove(&p_to);
                self.paths.get_mut(&p_from).unwrap().1.push(to);
                self.path_of.insert(to, p_from);
                if track {
                    if two_parents {
                        self.flag(ViolationKind::ParentCount, from, "full node had two parents");
                    }
                    self.add_arc(to, from);
                }
                for c in moving {
                    if self.nodes[&c].rank < k {
                        self.set_vparent(c, Some(to));
                    }
                }
            }
            Event::KeyLowered { .. } => {}
            Event::Linked { winner, loser, ranked } => {
                let l = &self.nodes[&loser];
                let (full, rooted, had_vparent) = (l.full, l.parents.is_empty(), l.vparent.is_some());
                if !full {
                    self.flag(ViolationKind::HollowGainedParent, loser, "hollow node lost a link");
                }
                if !rooted {
                    self.flag(ViolationKind::ParentCount, loser, "non-root lost a link");
                }
                self.add_arc(winner, loser);
                if ranked {
                    self.nodes.get_mut(&winner).unwrap().rank += 1;
                    if !had_vparent {
                        self.set_vparent(loser, Some(winner));
                    }
                }
            }
            Event::ChildMoved { child, from, to } => {
                self.remove_arc(from, child);
                self.add_arc(to, child);
                if self.nodes[&child].vparent == Some(from) {
                    self.set_vparent(child, Some(to));
                }
            }
            Event::Hollowed { node } => {
                if let Some(n) = self.nodes.get_mut(&node) {
                    n.full = false;
                }
            }
            Event::ParentLost { node, parent } => {
                let n = &self.nodes[&node];
                if n.full || n.parents.len() != 1 || n.parents.contains(&parent) {
                    self.flag(ViolationKind::ParentCount, node, "parent loss without a remaining parent");
                }
            }
            Event::Destroyed { node } => self.destroy(node),
            Event::Merged { receiver_offset, argument_offset } => {
                self.shift(receiver_offset);
                if let Some(mut other) = incoming {
                    other.shift(argument_offset);
                    for (id, n) in other.nodes.drain() {
                        self.nodes.insert(id, n);
                    }
                    let base = self.next_path;
                    for (p, path) in other.paths {
                        self.paths.insert(base + p, path);
                    }
                    for (n, p) in other.path_of {
                        self.path_of.insert(n, base + p);
                    }
                    self.next_path = base + other.next_path;
                    self.log_violations.extend(other.log_violations);
                }
            }
            Event::Rebuilt { remap, arcs } => {
                let mut nodes = NodeMap::default();
                self.paths.clear();
                self.path_of.clear();
                for (old, new) in remap {
                    let n = self.nodes.remove(&old).unwrap_or_default();
                    if let Some(it) = n.owner {
                        self.path_of.insert(new, self.next_path);
                        self.paths.insert(self.next_path, (it, vec![new]));
                        self.next_path += 1;
                    }
                    nodes.insert(new, SNode { owner: n.owner, full: n.full, ..SNode::default() });
                }
                self.nodes = nodes;
                for (p, c) in arcs {
                    self.add_arc(p, c);
                }
            }
        }
    }

    fn add_arc(&mut self, parent: NodeId, child: NodeId) {
        self.nodes.get_mut(&parent).unwrap().children.push(child);
        self.nodes.get_mut(&child).unwrap().parents.push(parent);
    }

    fn remove_arc(&mut self, parent: NodeId, child: NodeId) {
        if let Some(p) = self.nodes.get_mut(&parent) {
            p.children.retain(|&c| c != child);
        }
        if let Some(c) = self.nodes.get_mut(&child) {
            c.parents.retain(|&p| p != parent);
        }
    }

    fn set_vparent(&mut self, node: NodeId, vp: Option<NodeId>) {
        let old = self.nodes.get_mut(&node).unwrap().vparent.take();
        if let Some(o) = old {
            if let Some(on) = self.nodes.get_mut(&o) {
                on.vchildren.remove(&node);
            }
        }
        if let Some(p) = vp {
            self.nodes.get_mut(&p).unwrap().vchildren.insert(node);
            self.nodes.get_mut(&node).unwrap().vparent = Some(p);
        }
    }

    fn destroy(&mut self, v: NodeId) {
        let Some(n) = self.nodes.remove(&v) else {
            self.flag(ViolationKind::Accounting, v, "destroyed an unknown node");
            return;
        };
        if n.full {
            self.flag(ViolationKind::Accounting, v, "destroyed a full node");
        }
        if !n.parents.is_empty() {
            self.flag(ViolationKind::Root, v, "destroyed a node that still has a parent");
        }
        for c in n.children {
            if let Some(cn) = self.nodes.get_mut(&c) {
                cn.parents.retain(|&p| p != v);
            }
        }
        for c in n.vchildren {
            if let Some(cn) = self.nodes.get_mut(&c) {
                cn.vparent = None;
            }
        }
        if let Some(vp) = n.vparent {
            if let Some(p) = self.nodes.get_mut(&vp) {
                p.vchildren.remove(&v);
            }
        }
        if let Some(p) = self.path_of.remove(&v) {
            let (it, path) = self.paths.get_mut(&p).expect("path exists");
            if self.track_clones && path.last() != Some(&v) {
                let it = *it;
                self.log_violations.push(Violation::new(
                    ViolationKind::ClonePath,
                    Some(v),
                    format!("clone of {it} destroyed while a later clone is alive"),
                ));
            }
            path.retain(|&x| x != v);
            if path.is_empty() {
                self.paths.remove(&p);
            }
        }
    }

    fn shift(&mut self, off: u32) {
        if off == 0 {
            return;
        }
        let s = |x: NodeId| x + off;
        let mut nodes = NodeMap::default();
        for (id, mut n) in std::mem::take(&mut self.nodes).drain() {
            n.vparent = n.vparent.map(s);
            n.vchildren = n.vchildren.iter().map(|&x| s(x)).collect();
            n.parents.iter_mut().for_each(|x| *x = s(*x));
            n.children.iter_mut().for_each(|x| *x = s(*x));
            nodes.insert(s(id), n);
        }
        self.nodes = nodes;
        for (_, path) in self.paths.values_mut() {
            path.iter_mut().for_each(|x| *x = s(*x));
        }
        self.path_of = std::mem::take(&mut self.path_of).into_iter().map(|(n, p)| (s(n), p)).collect();
    }

    /// Rank invariant on virtual children, and that no root has a virtual
    /// parent. `ranks[u]` is the heap's current rank of node `u`, `None`
    /// for free slots, so the replay can be compared with the structure.
    pub fn check_rank_invariant(&self, ranks: &[Option<u32>]) -> Vec<Violation> {
        let mut out = Vec::new();
        let live = ranks.iter().flatten().count();
        if live != self.nodes.len() {
            out.push(Violation::new(
                ViolationKind::Accounting,
                None,
                format!("shadow has {} nodes, heap has {live}", self.nodes.len()),
            ));
        }
        let mut got = Vec::new();
        for (id, n) in self.nodes.iter() {
            let heap_rank = ranks.get(id as usize).copied().flatten();
            if heap_rank != Some(n.rank) {
                out.push(Violation::new(
                    ViolationKind::Rank,
                    Some(id),
                    format!("replayed rank {} differs from heap rank {heap_rank:?}", n.rank),
                ));
            }
            let lo = match n.dec_to {
                Some(k) => k.min(n.rank),
                None => 0,
            };
            got.clear();
            got.extend(n.vchildren.iter().map(|c| self.nodes[c].rank));
            got.sort_unstable();
            if !got.iter().copied().eq(lo..n.rank) {
                let want: Vec<u32> = (lo..n.rank).collect();
                out.push(Violation::new(
                    ViolationKind::Rank,
                    Some(id),
                    format!("rank {} node has virtual children of ranks {got:?}, expected {want:?}", n.rank),
                ));
            }
            if n.parents.is_empty() && n.vparent.is_some() {
                out.push(Violation::new(ViolationKind::VirtualRoot, Some(id), "root has a virtual parent"));
            }
        }
        out
    }

    /// Each node of rank r has at least `F_{r+3} - 1` virtual descendants,
    /// and every rank is at most `log_φ N`.
    pub fn check_size_bound(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut size = vec![0u64; self.nodes.slots.len()];
        let mut order: Vec<NodeId> = self.nodes.iter().filter(|(_, n)| n.vparent.is_none()).map(|(i, _)| i).collect();
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            order.extend(self.nodes[&v].vchildren.iter().copied());
            i += 1;
        }
        for &v in order.iter().rev() {
            size[v as usize] = 1 + self.nodes[&v].vchildren.iter().map(|&c| size[c as usize]).sum::<u64>();
        }
        let cap = rank_bound(self.nodes.len() as u64);
        for (v, n) in self.nodes.iter() {
            let size = size[v as usize];
            if size < fib_bound(n.rank) {
                out.push(Violation::new(
                    ViolationKind::Fibonacci,
                    Some(v),
                    format!("rank {} with {size} virtual descendants, need {}", n.rank, fib_bound(n.rank)),
                ));
            }
            if n.rank > cap {
                out.push(Violation::new(
                    ViolationKind::RankBound,
                    Some(v),
                    format!("rank {} exceeds log_phi N = {cap}", n.rank),
                ));
            }
        }
        out
    }

    /// The clones of each item form a path from newest to oldest, and all
    /// but the newest are hollow.
    pub fn check_clone_path(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if !self.track_clones {
            return out;
        }
        for (it, path) in self.paths.values() {
            for (i, &c) in path.iter().enumerate() {
                let newest = i + 1 == path.len();
                if !newest && self.nodes[&c].full {
                    out.push(Violation::new(
                        ViolationKind::ClonePath,
                        Some(c),
                        format!("older clone of {it} is still full"),
                    ));
                }
                if i > 0 && !self.nodes[&c].children.contains(&path[i - 1]) {
                    out.push(Violation::new(
                        ViolationKind::ClonePath,
                        Some(c),
                        format!("clone of {it} is not a parent of the previous clone"),
                    ));
                }
            }
        }
        out
    }

    /// Parent counts: at most one for full nodes, two for hollow ones.
    pub fn check_parent_counts(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (id, n) in self.nodes.iter() {
            let max = if n.full { 1 } else { 2 };
            if n.parents.len() > max {
                out.push(Violation::new(
                    ViolationKind::ParentCount,
                    Some(id),
                    format!("{} parents on a {} node", n.parents.len(), if n.full { "full" } else { "hollow" }),
                ));
            }
        }
        out
    }

    /// Clones of the live incarnation of `item`, oldest first.
    pub fn clones_of(&self, item: ItemId) -> &[NodeId] {
        self.paths
            .values()
            .find(|(it, p)| *it == item && p.last().is_some_and(|n| self.nodes[n].full))
            .map(|(_, p)| p.as_slice())
            .unwrap_or(&[])
    }

    /// Ranks of the virtual children of `node`, ascending.
    pub fn virtual_child_ranks(&self, node: NodeId) -> Vec<u32> {
        let mut r: Vec<u32> =
            self.nodes.get(&node).map(|n| n.vchildren.iter().map(|c| self.nodes[c].rank).collect()).unwrap_or_default();
        r.sort_unstable();
        r
    }
}

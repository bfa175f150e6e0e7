//! Rebuilding: removing every hollow node once they outnumber the items.
//!
//! Two methods are provided. Disassembly turns every full node into a
//! one-node heap of rank 0 and melds them back together, which costs one
//! comparison per node. Contraction keeps the tree shape: for two-parent
//! heaps every second parent is dropped first, then each full node is hung
//! below its nearest full proper ancestor. It makes no comparisons; all
//! children are unranked afterwards.
//!
//! Both methods compact the arena and announce the renumbering with
//! [`Event::Rebuilt`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::common::{Event, HeapError, ItemTable, NodeId, NIL};
use crate::heap::{HollowHeap, Node};
use crate::variants::{ONode, OneParentHeap, VariantHeap, NO_DEC};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RebuildMethod {
    #[default]
    Disassemble,
    Contract,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RebuildTrigger {
    AnyOp,
    #[default]
    DeleteOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RebuildConfig {
    pub c: f64,
    pub method: RebuildMethod,
    pub trigger: RebuildTrigger,
}

impl Default for RebuildConfig {
    fn default() -> Self {
        RebuildConfig { c: 2.0, method: RebuildMethod::Disassemble, trigger: RebuildTrigger::DeleteOnly }
    }
}

impl RebuildConfig {
    pub fn new(c: f64, method: RebuildMethod, trigger: RebuildTrigger) -> Result<Self, HeapError> {
        if c.is_nan() || c <= 1.0 || c.is_infinite() {
            return Err(HeapError::InvalidVariant(format!("rebuild threshold must exceed 1, got {c}")));
        }
        Ok(RebuildConfig { c, method, trigger })
    }

    /// `N > c n`.
    pub fn due(&self, nodes: usize, items: usize) -> bool {
        nodes as f64 > self.c * items as f64
    }
}

impl fmt::Display for RebuildMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RebuildMethod::Disassemble => "disassemble",
            RebuildMethod::Contract => "contract",
        })
    }
}

impl FromStr for RebuildMethod {
    type Err = HeapError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "disassemble" => Ok(RebuildMethod::Disassemble),
            "contract" => Ok(RebuildMethod::Contract),
            _ => Err(HeapError::InvalidVariant(format!("unknown rebuild method `{s}`"))),
        }
    }
}

impl fmt::Display for RebuildTrigger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RebuildTrigger::AnyOp => "any-op",
            RebuildTrigger::DeleteOnly => "delete-only",
        })
    }
}

impl FromStr for RebuildTrigger {
    type Err = HeapError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "any-op" => Ok(RebuildTrigger::AnyOp),
            "delete-only" => Ok(RebuildTrigger::DeleteOnly),
            _ => Err(HeapError::InvalidVariant(format!("unknown rebuild trigger `{s}`"))),
        }
    }
}

/// What one rebuild did.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RebuildReport {
    pub destroyed: usize,
    pub links: u64,
    pub comparisons: u64,
}

impl<K: Ord + Clone> HollowHeap<K> {
    pub fn maybe_rebuild(&mut self, cfg: &RebuildConfig) -> Option<RebuildReport> {
        cfg.due(self.num_nodes, self.num_items).then(|| self.rebuild(cfg.method))
    }

    pub fn rebuild(&mut self, method: RebuildMethod) -> RebuildReport {
        let before = self.stats;
        let destroyed = self.num_nodes - self.num_items;
        match method {
            RebuildMethod::Disassemble => self.disassemble(),
            RebuildMethod::Contract => self.contract(),
        }
        self.stats.hollow_destroyed += destroyed as u64;
        RebuildReport {
            destroyed,
            links: self.stats.links() - before.links(),
            comparisons: self.stats.comparisons - before.comparisons,
        }
    }

    fn install(
        &mut self,
        nodes: Vec<Node<K>>,
        remap: Vec<(NodeId, NodeId)>,
        arcs: Vec<(NodeId, NodeId)>,
        root: NodeId,
    ) {
        let mut items = ItemTable::default();
        for (i, n) in nodes.iter().enumerate() {
            items.set(n.item.expect("rebuilt nodes are full"), i as NodeId);
        }
        self.num_nodes = nodes.len();
        self.nodes = nodes;
        self.free.clear();
        self.items = items;
        self.min = root;
        self.emit(Event::Rebuilt { remap, arcs });
    }

    fn live(&self) -> Vec<bool> {
        let mut live = vec![true; self.nodes.len()];
        for &f in &self.free {
            live[f as usize] = false;
        }
        live
    }

    fn disassemble(&mut self) {
        let live = self.live();
        let mut nodes = Vec::with_capacity(self.num_items);
        let mut remap = Vec::with_capacity(self.num_items);
        for (i, n) in self.nodes.iter().enumerate() {
            if live[i] && n.item.is_some() {
                remap.push((i as NodeId, nodes.len() as NodeId));
                nodes.push(Node { key: n.key.clone(), rank: 0, item: n.item, child: NIL, next: NIL, ep: NIL });
            }
        }
        let n = nodes.len();
        self.install(nodes, remap, Vec::new(), if n == 0 { NIL } else { 0 });
        let mut h = 0;
        for u in 1..n as NodeId {
            h = self.link(u, h, false);
        }
        self.min = if n == 0 { NIL } else { h };
    }

    fn contract(&mut self) {
        let mut nodes: Vec<Node<K>> = Vec::with_capacity(self.num_items);
        let mut remap = Vec::with_capacity(self.num_items);
        let mut kids: Vec<Vec<NodeId>> = Vec::with_capacity(self.num_items);
        let mut stack = Vec::new();
        if self.min != NIL {
            stack.push((self.min, NIL));
        }
        let mut list = Vec::new();
        while let Some((v, anc)) = stack.pop() {
            let vn = &self.nodes[v as usize];
            let here = if vn.item.is_some() {
                let id = nodes.len() as NodeId;
                nodes.push(Node { key: vn.key.clone(), rank: 0, item: vn.item, child: NIL, next: NIL, ep: NIL });
                kids.push(Vec::new());
                remap.push((v, id));
                if anc != NIL {
                    kids[anc as usize].push(id);
                }
                id
            } else {
                anc
            };
            // children whose first parent is v; a child with ep == v is
            // reached through its first parent instead
            list.clear();
            let mut c = vn.child;
            while c != NIL {
                let cn = &self.nodes[c as usize];
                if cn.ep == v {
                    break;
                }
                list.push(c);
                c = cn.next;
            }
            stack.extend(list.iter().rev().map(|&c| (c, here)));
        }
        for (p, ch) in kids.iter().enumerate() {
            if let Some(&first) = ch.first() {
                nodes[p].child = first;
                for w in ch.windows(2) {
                    nodes[w[0] as usize].next = w[1];
                }
            }
        }
        let root = if nodes.is_empty() { NIL } else { 0 };
        self.install(nodes, remap, arcs_of(&kids), root);
    }
}

impl<K: Ord + Clone> OneParentHeap<K> {
    pub fn maybe_rebuild(&mut self, cfg: &RebuildConfig) -> Option<RebuildReport> {
        cfg.due(self.num_nodes, self.num_items).then(|| self.rebuild(cfg.method))
    }

    pub fn rebuild(&mut self, method: RebuildMethod) -> RebuildReport {
        let before = self.stats;
        let destroyed = self.num_nodes - self.num_items;
        match method {
            RebuildMethod::Disassemble => self.disassemble(),
            RebuildMethod::Contract => self.contract(),
        }
        self.stats.hollow_destroyed += destroyed as u64;
        RebuildReport {
            destroyed,
            links: self.stats.links() - before.links(),
            comparisons: self.stats.comparisons - before.comparisons,
        }
    }

    fn fresh(n: &ONode<K>) -> ONode<K> {
        ONode { key: n.key.clone(), rank: 0, item: n.item, child: NIL, next: NIL, dec: NO_DEC, is_root: false }
    }

    fn install(&mut self, nodes: Vec<ONode<K>>, remap: Vec<(NodeId, NodeId)>, arcs: Vec<(NodeId, NodeId)>) {
        let mut items = ItemTable::default();
        for (i, n) in nodes.iter().enumerate() {
            items.set(n.item.expect("rebuilt nodes are full"), i as NodeId);
        }
        self.num_nodes = nodes.len();
        self.nodes = nodes;
        self.free.clear();
        self.items = items;
        self.emit(Event::Rebuilt { remap, arcs });
    }

    fn disassemble(&mut self) {
        let mut live = vec![true; self.nodes.len()];
        for &f in &self.free {
            live[f as usize] = false;
        }
        let mut nodes = Vec::with_capacity(self.num_items);
        let mut remap = Vec::with_capacity(self.num_items);
        for (i, n) in self.nodes.iter().enumerate() {
            if live[i] && n.item.is_some() {
                remap.push((i as NodeId, nodes.len() as NodeId));
                nodes.push(Self::fresh(n));
            }
        }
        let n = nodes.len() as NodeId;
        self.install(nodes, remap, Vec::new());
        self.min = NIL;
        if n == 0 {
            return;
        }
        self.min = 0;
        self.nodes[0].is_root = true;
        if self.multi_root {
            // one-node heaps melded by catenation
            self.nodes[0].next = 0;
            for u in 1..n {
                let m = self.min as usize;
                self.nodes[u as usize].next = self.nodes[m].next;
                self.nodes[m].next = u;
                self.nodes[u as usize].is_root = true;
                self.update_min(u);
            }
        } else {
            for u in 1..n {
                self.nodes[u as usize].is_root = true;
                self.min = self.link(u, self.min, false);
            }
        }
    }

    fn contract(&mut self) {
        let old_min = self.min;
        let mut nodes: Vec<ONode<K>> = Vec::with_capacity(self.num_items);
        let mut remap = Vec::with_capacity(self.num_items);
        let mut kids: Vec<Vec<NodeId>> = Vec::with_capacity(self.num_items);
        let mut roots = Vec::new();
        let mut stack: Vec<(NodeId, NodeId)> = self.roots().into_iter().rev().map(|r| (r, NIL)).collect();
        let mut new_min = NIL;
        while let Some((v, anc)) = stack.pop() {
            let here = if self.nodes[v as usize].item.is_some() {
                let id = nodes.len() as NodeId;
                nodes.push(Self::fresh(&self.nodes[v as usize]));
                kids.push(Vec::new());
                remap.push((v, id));
                if v == old_min {
                    new_min = id;
                }
                if anc == NIL {
                    roots.push(id);
                } else {
                    kids[anc as usize].push(id);
                }
                id
            } else {
                anc
            };
            let ch = self.children_of(v);
            stack.extend(ch.into_iter().rev().map(|c| (c, here)));
        }
        for (p, ch) in kids.iter().enumerate() {
            if let Some(&last) = ch.last() {
                nodes[p].child = last;
                for (i, &c) in ch.iter().enumerate() {
                    nodes[c as usize].next = ch[(i + 1) % ch.len()];
                }
            }
        }
        for (i, &r) in roots.iter().enumerate() {
            let rn = &mut nodes[r as usize];
            rn.is_root = true;
            rn.next = if self.multi_root { roots[(i + 1) % roots.len()] } else { NIL };
        }
        if self.multi_root && !roots.is_empty() && nodes.iter().any(|n| n.child != NIL) {
            self.has_unranked = true;
        }
        self.install(nodes, remap, arcs_of(&kids));
        self.min = new_min;
    }
}

fn arcs_of(kids: &[Vec<NodeId>]) -> Vec<(NodeId, NodeId)> {
    kids.iter().enumerate().flat_map(|(p, ch)| ch.iter().map(move |&c| (p as NodeId, c))).collect()
}

impl<K: Ord + Clone> VariantHeap<K> {
    pub fn maybe_rebuild(&mut self, cfg: &RebuildConfig) -> Option<RebuildReport> {
        match self {
            VariantHeap::TwoParent(h) => h.maybe_rebuild(cfg),
            VariantHeap::OneParent(h) => h.maybe_rebuild(cfg),
        }
    }

    pub fn rebuild(&mut self, method: RebuildMethod) -> RebuildReport {
        match self {
            VariantHeap::TwoParent(h) => h.rebuild(method),
            VariantHeap::OneParent(h) => h.rebuild(method),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::common::ItemId;
    use crate::variants::VariantConfig;

    fn hollowed(cfg: VariantConfig) -> VariantHeap<i64> {
        let mut h = VariantHeap::new(cfg).unwrap();
        for i in 0..64u32 {
            h.insert(ItemId(i), (i as i64 * 37) % 64 * 10).unwrap();
        }
        h.delete_min().unwrap();
        for i in (1..64u32).step_by(3) {
            let k = *h.key_of(ItemId(i)).unwrap();
            h.decrease_key(ItemId(i), k - 5).unwrap();
        }
        for i in (2..64u32).step_by(4) {
            h.delete(ItemId(i)).unwrap();
        }
        h
    }

    fn drain(mut h: VariantHeap<i64>) -> Vec<i64> {
        let mut out = Vec::new();
        while let Ok((_, k)) = h.delete_min() {
            out.push(k);
        }
        out
    }

    #[test]
    fn threshold() {
        let cfg = RebuildConfig::default();
        assert!(!cfg.due(10, 8));
        assert!(!cfg.due(16, 8));
        assert!(cfg.due(17, 8));
        assert!(RebuildConfig::new(1.0, RebuildMethod::Contract, RebuildTrigger::AnyOp).is_err());
        assert!(RebuildConfig::new(1.5, RebuildMethod::Contract, RebuildTrigger::AnyOp).is_ok());
    }

    #[test]
    fn both_methods_preserve_contents() {
        for cfg in VariantConfig::STANDARD {
            let expected = drain(hollowed(cfg));
            for method in [RebuildMethod::Disassemble, RebuildMethod::Contract] {
                let mut h = hollowed(cfg);
                let min = h.find_min().map(|(_, k)| *k);
                let n = h.len();
                let before = h.node_count();
                let rep = h.rebuild(method);
                assert_eq!(rep.destroyed, before - n, "{cfg} {method}");
                assert_eq!(h.node_count(), n);
                assert_eq!(h.find_min().map(|(_, k)| *k), min, "{cfg} {method}");
                if method == RebuildMethod::Contract {
                    assert_eq!(rep.comparisons, 0);
                }
                assert_eq!(drain(h), expected, "{cfg} {method}");
            }
        }
    }

    #[test]
    fn disassemble_counts() {
        // 5 full and 7 hollow nodes
        let mut h = HollowHeap::new();
        for i in 0..12u32 {
            h.insert(ItemId(i), i as i64).unwrap();
        }
        for i in 5..12u32 {
            h.delete(ItemId(i)).unwrap();
        }
        assert_eq!((h.node_count(), h.len()), (12, 5));
        let rep = h.rebuild(RebuildMethod::Disassemble);
        assert_eq!(rep.destroyed, 7);
        assert_eq!(rep.links, 4);
        assert!(h.snapshot().nodes.iter().all(|n| n.rank == 0));
    }

    #[test]
    fn contract_skips_hollow_chains() {
        // 0 -> 1 -> 2 -> 3 with 1 and 2 hollow
        let mut h = HollowHeap::new();
        for i in (0..4u32).rev() {
            h.insert(ItemId(i), i as i64).unwrap();
        }
        h.insert(ItemId(9), -1).unwrap();
        h.delete_min().unwrap();
        h.delete(ItemId(1)).unwrap();
        h.delete(ItemId(2)).unwrap();
        h.rebuild(RebuildMethod::Contract);
        let root = h.root().unwrap();
        let kids: Vec<i64> = h.children_of(root).iter().map(|&c| h.node(c).key).collect();
        assert_eq!(h.node(root).key, 0);
        assert_eq!(kids, vec![3]);
    }

    #[test]
    fn empty_rebuild() {
        for cfg in VariantConfig::STANDARD {
            let mut h: VariantHeap<i64> = VariantHeap::new(cfg).unwrap();
            for m in [RebuildMethod::Disassemble, RebuildMethod::Contract] {
                assert_eq!(h.rebuild(m).destroyed, 0);
                assert!(h.find_min().is_none());
            }
        }
    }

    #[test]
    fn names() {
        for m in [RebuildMethod::Disassemble, RebuildMethod::Contract] {
            assert_eq!(m.to_string().parse::<RebuildMethod>().unwrap(), m);
        }
        for t in [RebuildTrigger::AnyOp, RebuildTrigger::DeleteOnly] {
            assert_eq!(t.to_string().parse::<RebuildTrigger>().unwrap(), t);
        }
    }
}

//! Structural checks over heap snapshots. Violations are returned as data.

use std::collections::VecDeque;
use std::fmt;

use serde::Serialize;

use crate::common::{rank_bound, NodeId};
use crate::heap::DagSnapshot;
use crate::policy::Family;
use crate::variants::{Snapshot, TreeSnapshot, VariantHeap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    HeapOrder,
    Root,
    ParentCount,
    EpPosition,
    Cycle,
    Accounting,
    ItemLink,
    Rank,
    Fibonacci,
    RankBound,
    ClonePath,
    VirtualRoot,
    HollowGainedParent,
    Scratch,
    RootRanks,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub node: Option<NodeId>,
    pub detail: String,
}

impl Violation {
    pub(crate) fn new(kind: ViolationKind, node: Option<NodeId>, detail: impl Into<String>) -> Self {
        Violation { kind, node, detail: detail.into() }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node {
            Some(n) => write!(f, "{:?} at node {n}: {}", self.kind, self.detail),
            None => write!(f, "{:?}: {}", self.kind, self.detail),
        }
    }
}

/// `F_{r+3} - 1`, saturating.
pub fn fib_bound(r: u32) -> u64 {
    let (mut a, mut b) = (0u64, 1u64);
    for _ in 0..r + 3 {
        let c = a.saturating_add(b);
        a = b;
        b = c;
    }
    a.saturating_sub(1)
}

/// All structural checks applicable to the heap's structure.
pub fn check_structure<K: Ord + fmt::Debug + Clone>(h: &VariantHeap<K>) -> Vec<Violation> {
    match h.snapshot() {
        Snapshot::Dag(s) => check_dag(&s),
        Snapshot::Tree(s) => check_tree(&s),
    }
}

/// Two-parent heap: heap order, a single full root, parent counts, second
/// parents at list ends, acyclicity, node and item accounting.
pub fn check_dag<K: Ord + fmt::Debug>(s: &DagSnapshot<K>) -> Vec<Violation> {
    use ViolationKind::*;
    let mut out = Vec::new();
    if !s.scratch_clean {
        out.push(Violation::new(Scratch, None, "scratch array not empty"));
    }
    let live = s.nodes.iter().filter(|n| n.live).count();
    if live != s.num_nodes {
        out.push(Violation::new(Accounting, None, format!("{live} live slots, N = {}", s.num_nodes)));
    }
    check_items(&s.item_nodes, |u| s.nodes.get(u as usize).map(|n| (n.live, n.item)), &mut out);
    let Some(root) = s.root else {
        if s.num_items != 0 || s.num_nodes != 0 {
            out.push(Violation::new(Root, None, "no root but heap is not empty"));
        }
        return out;
    };
    let Some(rn) = s.nodes.get(root as usize).filter(|n| n.live) else {
        out.push(Violation::new(Root, Some(root), "root is not a live node"));
        return out;
    };
    if rn.item.is_none() {
        out.push(Violation::new(Root, Some(root), "root is hollow"));
    }
    if rn.ep.is_some() {
        out.push(Violation::new(Root, Some(root), "root has a second parent"));
    }

    let n = s.nodes.len();
    let mut parents = vec![0u32; n];
    let mut seen_from_ep = vec![false; n];
    let mut reached = vec![false; n];
    let mut arcs = Arcs { to: Vec::with_capacity(n), span: vec![(0, 0); n] };
    let mut queue = VecDeque::from([root]);
    reached[root as usize] = true;
    let budget = n * 2 + 2;
    while let Some(v) = queue.pop_front() {
        let vn = &s.nodes[v as usize];
        let mut c = vn.child;
        let mut steps = 0;
        let first = arcs.to.len() as u32;
        while let Some(u) = c {
            steps += 1;
            if steps > budget || u as usize >= n || !s.nodes[u as usize].live {
                out.push(Violation::new(Cycle, Some(v), "child list does not terminate at a live node"));
                break;
            }
            let un = &s.nodes[u as usize];
            parents[u as usize] += 1;
            arcs.to.push(u);
            if vn.key > un.key {
                out.push(Violation::new(
                    HeapOrder,
                    Some(u),
                    format!("parent {v} key {:?} > child key {:?}", vn.key, un.key),
                ));
            }
            if !reached[u as usize] {
                reached[u as usize] = true;
                queue.push_back(u);
            }
            if un.ep == Some(v) {
                seen_from_ep[u as usize] = true;
                break;
            }
            c = un.next;
        }
        arcs.span[v as usize] = (first, arcs.to.len() as u32);
    }
    for (i, node) in s.nodes.iter().enumerate() {
        if !node.live {
            continue;
        }
        let id = i as NodeId;
        if !reached[i] {
            let what = if node.item.is_some() { "full" } else { "hollow" };
            out.push(Violation::new(Root, Some(id), format!("unreachable {what} node (extra root)")));
            continue;
        }
        if let Some(ep) = node.ep {
            if node.item.is_some() {
                out.push(Violation::new(ParentCount, Some(id), "full node has a second parent"));
            }
            if !seen_from_ep[i] {
                out.push(Violation::new(EpPosition, Some(id), format!("not the last child of its second parent {ep}")));
            }
        }
        let max = if node.item.is_some() { 1 } else { 2 };
        let expected = if id == root {
            0
        } else if node.ep.is_some() && seen_from_ep[i] {
            2
        } else {
            1
        };
        if parents[i] > max || parents[i] != expected {
            out.push(Violation::new(
                ParentCount,
                Some(id),
                format!("{} parents ({})", parents[i], if max == 1 { "full" } else { "hollow" }),
            ));
        }
    }
    if let Some(v) = find_cycle(&arcs, root) {
        out.push(Violation::new(Cycle, Some(v), "cycle through node"));
    }
    out
}

fn check_items(
    item_nodes: &[(crate::common::ItemId, NodeId)],
    lookup: impl Fn(NodeId) -> Option<(bool, Option<crate::common::ItemId>)>,
    out: &mut Vec<Violation>,
) {
    for &(it, u) in item_nodes {
        match lookup(u) {
            Some((true, Some(held))) if held == it => {}
            _ => out.push(Violation::new(
                ViolationKind::ItemLink,
                Some(u),
                format!("item {it} maps to a node that does not hold it"),
            )),
        }
    }
}

/// Child arcs by parent: `to[span[v].0..span[v].1]`.
struct Arcs {
    to: Vec<NodeId>,
    span: Vec<(u32, u32)>,
}

impl Arcs {
    fn of(&self, v: usize) -> &[NodeId] {
        let (a, b) = self.span[v];
        &self.to[a as usize..b as usize]
    }
}

/// Kahn's algorithm over the reachable arcs.
fn find_cycle(arcs: &Arcs, root: NodeId) -> Option<NodeId> {
    let n = arcs.span.len();
    let mut indeg = vec![0u32; n];
    let mut involved = vec![false; n];
    involved[root as usize] = true;
    for v in 0..n {
        for &u in arcs.of(v) {
            indeg[u as usize] += 1;
            involved[u as usize] = true;
            involved[v] = true;
        }
    }
    let mut stack: Vec<usize> = (0..n).filter(|&i| involved[i] && indeg[i] == 0).collect();
    let mut done = 0;
    while let Some(v) = stack.pop() {
        done += 1;
        for &u in arcs.of(v) {
            indeg[u as usize] -= 1;
            if indeg[u as usize] == 0 {
                stack.push(u as usize);
            }
        }
    }
    let total = involved.iter().filter(|&&b| b).count();
    (done < total).then(|| (0..n).find(|&i| involved[i] && indeg[i] > 0).unwrap() as NodeId)
}

/// Expected ranks of the ranked children of a node, in list order.
fn expected_ranks(rank: u32, decreased_to: Option<u32>) -> std::ops::Range<u32> {
    match decreased_to {
        Some(k) => k.min(rank)..rank,
        None => 0..rank,
    }
}

/// One-parent heap: heap order, root structure, single parents, accounting,
/// and the rank invariant (eager policies only).
pub fn check_tree<K: Ord + fmt::Debug>(s: &TreeSnapshot<K>) -> Vec<Violation> {
    use ViolationKind::*;
    let mut out = Vec::new();
    if !s.scratch_clean {
        out.push(Violation::new(Scratch, None, "scratch array not empty"));
    }
    let live = s.nodes.iter().filter(|n| n.live).count();
    if live != s.num_nodes {
        out.push(Violation::new(Accounting, None, format!("{live} live slots, N = {}", s.num_nodes)));
    }
    check_items(&s.item_nodes, |u| s.nodes.get(u as usize).map(|n| (n.live, n.item)), &mut out);
    let Some(min) = s.min else {
        if s.num_items != 0 || s.num_nodes != 0 {
            out.push(Violation::new(Root, None, "no minimum node but heap is not empty"));
        }
        return out;
    };
    if s.nodes.get(min as usize).is_none_or(|n| !n.live || n.item.is_none()) {
        out.push(Violation::new(Root, Some(min), "minimum node is not a live full node"));
        return out;
    }
    if !s.multi_root && s.roots != [min] {
        out.push(Violation::new(Root, Some(min), format!("{} roots in a one-root heap", s.roots.len())));
    }
    let n = s.nodes.len();
    let mut parents = vec![0u32; n];
    let mut reached = vec![false; n];
    let mut queue = VecDeque::new();
    for &r in &s.roots {
        if r as usize >= n || !s.nodes[r as usize].live {
            out.push(Violation::new(Root, Some(r), "root list names a dead node"));
            continue;
        }
        if reached[r as usize] {
            out.push(Violation::new(Cycle, Some(r), "root listed twice"));
            continue;
        }
        reached[r as usize] = true;
        queue.push_back(r);
        if !s.multi_root && s.nodes[r as usize].item.is_none() {
            out.push(Violation::new(Root, Some(r), "hollow root"));
        }
        if s.nodes[min as usize].key > s.nodes[r as usize].key {
            out.push(Violation::new(HeapOrder, Some(r), "root key below the minimum node's key"));
        }
    }
    if !s.roots.contains(&min) {
        out.push(Violation::new(Root, Some(min), "minimum node is not a root"));
    }
    while let Some(v) = queue.pop_front() {
        let vn = &s.nodes[v as usize];
        for &u in &vn.children {
            if u as usize >= n || !s.nodes[u as usize].live {
                out.push(Violation::new(Accounting, Some(v), "child is not a live node"));
                continue;
            }
            parents[u as usize] += 1;
            let un = &s.nodes[u as usize];
            if vn.key > un.key {
                out.push(Violation::new(
                    HeapOrder,
                    Some(u),
                    format!("parent {v} key {:?} > child key {:?}", vn.key, un.key),
                ));
            }
            if reached[u as usize] {
                out.push(Violation::new(ParentCount, Some(u), "node reached twice"));
            } else {
                reached[u as usize] = true;
                queue.push_back(u);
            }
        }
    }
    for (i, node) in s.nodes.iter().enumerate() {
        if node.live && !reached[i] {
            out.push(Violation::new(Root, Some(i as NodeId), "node not reachable from the roots"));
        }
    }
    if s.policy.family == Family::Eager {
        for (i, node) in s.nodes.iter().enumerate() {
            if !node.live {
                continue;
            }
            let want: Vec<u32> = expected_ranks(node.rank, node.decreased_to).rev().collect();
            let got: Vec<u32> = node.children.iter().map(|&c| s.nodes[c as usize].rank).collect();
            let ok = if s.multi_root && !s.has_unranked {
                got == want
            } else {
                got.len() >= want.len() && got[..want.len()] == want[..]
            };
            if !ok {
                out.push(Violation::new(
                    Rank,
                    Some(i as NodeId),
                    format!("rank {} node has children ranks {got:?}, expected {want:?} first", node.rank),
                ));
            }
        }
    }
    out
}

/// Multi-root heaps right after deleting the minimum: distinct root ranks
/// and at most `log_φ N + 1` roots.
pub fn check_roots_after_delete_min<K>(s: &TreeSnapshot<K>) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut ranks: Vec<u32> = s.roots.iter().map(|&r| s.nodes[r as usize].rank).collect();
    ranks.sort_unstable();
    if ranks.windows(2).any(|w| w[0] == w[1]) {
        out.push(Violation::new(ViolationKind::RootRanks, None, format!("root ranks {ranks:?}")));
    }
    let cap = rank_bound(s.num_nodes as u64) as usize + 1;
    if s.roots.len() > cap {
        out.push(Violation::new(
            ViolationKind::RootRanks,
            None,
            format!("{} roots, at most {cap} allowed", s.roots.len()),
        ));
    }
    out
}

/// One-parent size bound: each node of rank r has at least `F_{r+3} - 1`
/// descendants, and no rank exceeds `log_φ N`.
pub fn check_tree_size_bound<K>(s: &TreeSnapshot<K>) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = s.nodes.len();
    let mut size = vec![0u64; n];
    // children are visited before parents in reverse BFS order
    let mut order = Vec::with_capacity(n);
    order.extend(s.roots.iter().copied());
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        order.extend(s.nodes[v as usize].children.iter().copied());
        i += 1;
    }
    for &v in order.iter().rev() {
        let node = &s.nodes[v as usize];
        size[v as usize] = 1 + node.children.iter().map(|&c| size[c as usize]).sum::<u64>();
    }
    let cap = rank_bound(s.num_nodes as u64);
    for &v in &order {
        let node = &s.nodes[v as usize];
        if size[v as usize] < fib_bound(node.rank) {
            out.push(Violation::new(
                ViolationKind::Fibonacci,
                Some(v),
                format!("rank {} with {} descendants, need {}", node.rank, size[v as usize], fib_bound(node.rank)),
            ));
        }
        if node.rank > cap {
            out.push(Violation::new(
                ViolationKind::RankBound,
                Some(v),
                format!("rank {} exceeds log_phi N = {cap}", node.rank),
            ));
        }
    }
    out
}

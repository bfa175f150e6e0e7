//! Link-order hooks.
//!
//! During a delete that removes the minimum, every full root left after the
//! hollow roots are destroyed is fed to the rank-indexed linking array. By
//! default roots are fed in the order they are discovered. An adversary may
//! install a [`LinkStrategy`] that reorders them, which decides which ranked
//! links happen when more than one is possible.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::common::{HeapError, ItemId, NodeId};

/// A full root waiting to be linked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RootInfo {
    pub node: NodeId,
    pub item: ItemId,
    pub rank: u32,
}

pub trait LinkStrategy: Send + fmt::Debug {
    fn on_insert(&mut self, _item: ItemId) {}
    fn on_decrease(&mut self, _item: ItemId, _old_rank: u32) {}
    /// Reorder `roots` in place. Called once per delete of the minimum.
    fn order(&mut self, roots: &mut Vec<RootInfo>);
}

/// Named strategies selectable from the command line and workload metadata.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LinkOrder {
    #[default]
    Arrival,
    DeferDecreased,
    DeferFresh,
    Chains,
}

impl LinkOrder {
    pub fn build(self) -> Option<Box<dyn LinkStrategy>> {
        match self {
            LinkOrder::Arrival => None,
            LinkOrder::DeferDecreased => Some(Box::new(DeferDecreased::default())),
            LinkOrder::DeferFresh => Some(Box::new(DeferFresh::default())),
            LinkOrder::Chains => Some(Box::new(Chains::default())),
        }
    }
}

impl fmt::Display for LinkOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LinkOrder::Arrival => "arrival",
            LinkOrder::DeferDecreased => "defer-decreased",
            LinkOrder::DeferFresh => "defer-fresh",
            LinkOrder::Chains => "chains",
        })
    }
}

impl FromStr for LinkOrder {
    type Err = HeapError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "arrival" => Ok(LinkOrder::Arrival),
            "defer-decreased" => Ok(LinkOrder::DeferDecreased),
            "defer-fresh" => Ok(LinkOrder::DeferFresh),
            "chains" => Ok(LinkOrder::Chains),
            _ => Err(HeapError::InvalidVariant(format!("unknown link order `{s}`"))),
        }
    }
}

/// Links every other root before any root holding an item that was ever
/// moved by decrease-key.
#[derive(Debug, Default)]
pub struct DeferDecreased {
    decreased: HashSet<ItemId>,
}

impl LinkStrategy for DeferDecreased {
    fn on_decrease(&mut self, item: ItemId, _old_rank: u32) {
        self.decreased.insert(item);
    }

    fn order(&mut self, roots: &mut Vec<RootInfo>) {
        let (mut first, later): (Vec<_>, Vec<_>) = roots.drain(..).partition(|r| !self.decreased.contains(&r.item));
        first.extend(later);
        *roots = first;
    }
}

/// Links roots inserted since the previous minimum deletion after all
/// others, in insertion order.
#[derive(Debug, Default)]
pub struct DeferFresh {
    fresh: HashMap<ItemId, usize>,
}

impl LinkStrategy for DeferFresh {
    fn on_insert(&mut self, item: ItemId) {
        let n = self.fresh.len();
        self.fresh.insert(item, n);
    }

    fn order(&mut self, roots: &mut Vec<RootInfo>) {
        let (mut first, mut later): (Vec<_>, Vec<_>) = roots.drain(..).partition(|r| !self.fresh.contains_key(&r.item));
        later.sort_by_key(|r| self.fresh[&r.item]);
        first.extend(later);
        *roots = first;
        self.fresh.clear();
    }
}

/// Builds one binomial-shaped tree per decrease-key since the previous
/// minimum deletion. The node created by a decrease on a node of rank `r` is
/// fed first and is then followed by just enough other roots to carry it to
/// rank `r + 1`. Heads are processed in decreasing order of target rank.
/// Roots present before the last round of inserts are used before freshly
/// inserted ones; whatever is left is fed last.
#[derive(Debug, Default)]
pub struct Chains {
    targets: HashMap<ItemId, u32>,
    fresh: Vec<ItemId>,
}

impl Chains {
    fn take_tree(pool: &mut Vec<RootInfo>, rank: u32, out: &mut Vec<RootInfo>) -> bool {
        if let Some(pos) = pool.iter().position(|r| r.rank == rank) {
            out.push(pool.remove(pos));
            return true;
        }
        if rank == 0 {
            return false;
        }
        let mark = out.len();
        if Self::take_tree(pool, rank - 1, out) && Self::take_tree(pool, rank - 1, out) {
            return true;
        }
        pool.extend(out.drain(mark..));
        false
    }
}

impl LinkStrategy for Chains {
    fn on_insert(&mut self, item: ItemId) {
        self.fresh.push(item);
    }

    fn on_decrease(&mut self, item: ItemId, old_rank: u32) {
        // repeated decreases keep the target of the first one
        let t = self.targets.entry(item).or_insert(0);
        *t = (*t).max(old_rank + 1);
    }

    fn order(&mut self, roots: &mut Vec<RootInfo>) {
        let fresh_pos: HashMap<ItemId, usize> = self.fresh.iter().enumerate().map(|(i, &it)| (it, i)).collect();
        let mut heads: Vec<(u32, RootInfo)> = Vec::new();
        let mut old = Vec::new();
        let mut fresh = Vec::new();
        for r in roots.drain(..) {
            if let Some(&t) = self.targets.get(&r.item) {
                heads.push((t, r));
            } else if let Some(&p) = fresh_pos.get(&r.item) {
                fresh.push((p, r));
            } else {
                old.push(r);
            }
        }
        heads.sort_by_key(|h| std::cmp::Reverse(h.0));
        fresh.sort_by_key(|&(p, _)| p);
        let mut pool = old;
        pool.extend(fresh.into_iter().map(|(_, r)| r));

        let mut out = Vec::with_capacity(pool.len() + heads.len());
        for (target, head) in heads {
            out.push(head);
            let mut rank = head.rank;
            while rank < target && Self::take_tree(&mut pool, rank, &mut out) {
                rank += 1;
            }
        }
        out.extend(pool);
        *roots = out;
        self.targets.clear();
        self.fresh.clear();
    }
}

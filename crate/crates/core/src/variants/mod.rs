//! All heap structures behind one interface.
//!
//! A [`VariantConfig`] names a structure (`two_parent`, `one_root`,
//! `multi_root`) and a rank policy, written `mode:family:regime`, e.g.
//! `two_parent:lazy:large2` or `one_root:eager:small-r`.

mod one_parent;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::common::{Event, HeapError, ItemId, NodeId, Stats};
use crate::heap::{DagSnapshot, HollowHeap};
use crate::policy::{Family, RankPolicy, Regime, SmallFn};
use crate::strategy::LinkStrategy;

pub(crate) use one_parent::{ONode, NO_DEC};
pub use one_parent::{OneParentHeap, TreeNode, TreeSnapshot};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    TwoParent,
    OneRoot,
    MultiRoot,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::TwoParent => "two_parent",
            Mode::OneRoot => "one_root",
            Mode::MultiRoot => "multi_root",
        })
    }
}

impl FromStr for Mode {
    type Err = HeapError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "two_parent" => Ok(Mode::TwoParent),
            "one_root" => Ok(Mode::OneRoot),
            "multi_root" => Ok(Mode::MultiRoot),
            _ => Err(HeapError::InvalidVariant(format!("unknown mode `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VariantConfig {
    pub mode: Mode,
    pub policy: RankPolicy,
}

impl VariantConfig {
    pub const TWO_PARENT: VariantConfig = VariantConfig { mode: Mode::TwoParent, policy: RankPolicy::LAZY_R2 };
    pub const ONE_ROOT: VariantConfig = VariantConfig { mode: Mode::OneRoot, policy: RankPolicy::EAGER_R2 };
    pub const MULTI_ROOT: VariantConfig = VariantConfig { mode: Mode::MultiRoot, policy: RankPolicy::EAGER_R2 };
    pub const LAZY_R1: VariantConfig =
        VariantConfig { mode: Mode::TwoParent, policy: RankPolicy::new(Family::Lazy, Regime::Large(1)) };
    pub const EAGER_0: VariantConfig =
        VariantConfig { mode: Mode::OneRoot, policy: RankPolicy::new(Family::Eager, Regime::Small(SmallFn::Identity)) };

    /// The five structures compared throughout the test suite.
    pub const STANDARD: [VariantConfig; 5] =
        [Self::TWO_PARENT, Self::ONE_ROOT, Self::MULTI_ROOT, Self::LAZY_R1, Self::EAGER_0];

    pub fn new(mode: Mode, policy: RankPolicy) -> Result<Self, HeapError> {
        let ok = match mode {
            Mode::TwoParent => policy.family == Family::Lazy,
            Mode::OneRoot | Mode::MultiRoot => policy.family != Family::Lazy,
        };
        if !ok {
            return Err(HeapError::InvalidVariant(format!("{mode} does not support the {} family", policy.family)));
        }
        Ok(VariantConfig { mode, policy })
    }
}

impl fmt::Display for VariantConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.mode, self.policy)
    }
}

impl FromStr for VariantConfig {
    type Err = HeapError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [mode] => match *mode {
                "two_parent" => Ok(Self::TWO_PARENT),
                "one_root" => Ok(Self::ONE_ROOT),
                "multi_root" => Ok(Self::MULTI_ROOT),
                _ => Err(HeapError::InvalidVariant(format!("unknown variant `{s}`"))),
            },
            [mode, family, regime] => {
                VariantConfig::new(mode.parse()?, RankPolicy::new(family.parse()?, regime.parse()?))
            }
            _ => Err(HeapError::InvalidVariant(format!("variant `{s}` is not of the form mode:family:regime"))),
        }
    }
}

impl Serialize for VariantConfig {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for VariantConfig {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A heap of any configured structure.
#[derive(Debug)]
pub enum VariantHeap<K> {
    TwoParent(HollowHeap<K>),
    OneParent(OneParentHeap<K>),
}

/// Structure-specific snapshot.
#[derive(Debug, Clone)]
pub enum Snapshot<K> {
    Dag(DagSnapshot<K>),
    Tree(TreeSnapshot<K>),
}

/// Structure-independent view used by workload generators: every live node
/// with its children in list order.
#[derive(Debug, Clone)]
pub struct HeapView<K> {
    pub nodes: Vec<Option<ViewNode<K>>>,
    pub roots: Vec<NodeId>,
    pub min: Option<NodeId>,
}

#[derive(Debug, Clone)]
pub struct ViewNode<K> {
    pub key: K,
    pub rank: u32,
    pub item: Option<ItemId>,
    pub children: Vec<NodeId>,
}

impl<K> HeapView<K> {
    pub fn node(&self, u: NodeId) -> &ViewNode<K> {
        self.nodes[u as usize].as_ref().expect("live node")
    }

    /// Full children of `u`.
    pub fn full_children(&self, u: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.node(u).children.iter().copied().filter(|&c| self.node(c).item.is_some())
    }
}

macro_rules! both {
    ($self:expr, $h:ident => $e:expr) => {
        match $self {
            VariantHeap::TwoParent($h) => $e,
            VariantHeap::OneParent($h) => $e,
        }
    };
}

impl<K: Ord + Clone> VariantHeap<K> {
    pub fn new(cfg: VariantConfig) -> Result<Self, HeapError> {
        let cfg = VariantConfig::new(cfg.mode, cfg.policy)?;
        Ok(match cfg.mode {
            Mode::TwoParent => VariantHeap::TwoParent(HollowHeap::with_policy(cfg.policy)?),
            Mode::OneRoot => VariantHeap::OneParent(OneParentHeap::new(cfg.policy, false)?),
            Mode::MultiRoot => VariantHeap::OneParent(OneParentHeap::new(cfg.policy, true)?),
        })
    }

    pub fn config(&self) -> VariantConfig {
        match self {
            VariantHeap::TwoParent(h) => VariantConfig { mode: Mode::TwoParent, policy: h.policy() },
            VariantHeap::OneParent(h) => VariantConfig {
                mode: if h.is_multi_root() { Mode::MultiRoot } else { Mode::OneRoot },
                policy: h.policy(),
            },
        }
    }

    pub fn insert(&mut self, item: ItemId, key: K) -> Result<(), HeapError> {
        both!(self, h => h.insert(item, key))
    }

    pub fn find_min(&self) -> Option<(ItemId, &K)> {
        both!(self, h => h.find_min())
    }

    pub fn delete_min(&mut self) -> Result<(ItemId, K), HeapError> {
        both!(self, h => h.delete_min())
    }

    pub fn decrease_key(&mut self, item: ItemId, key: K) -> Result<(), HeapError> {
        both!(self, h => h.decrease_key(item, key))
    }

    pub fn delete(&mut self, item: ItemId) -> Result<(), HeapError> {
        both!(self, h => h.delete(item))
    }

    pub fn meld(&mut self, other: VariantHeap<K>) -> Result<(), HeapError> {
        match (self, other) {
            (VariantHeap::TwoParent(a), VariantHeap::TwoParent(b)) => a.meld(b),
            (VariantHeap::OneParent(a), VariantHeap::OneParent(b)) => a.meld(b),
            (a, b) => Err(HeapError::Incompatible(a.config().to_string(), b.config().to_string())),
        }
    }

    pub fn len(&self) -> usize {
        both!(self, h => h.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn node_count(&self) -> usize {
        both!(self, h => h.node_count())
    }

    pub fn stats(&self) -> &Stats {
        both!(self, h => h.stats())
    }

    pub fn contains(&self, item: ItemId) -> bool {
        both!(self, h => h.contains(item))
    }

    pub fn key_of(&self, item: ItemId) -> Option<&K> {
        both!(self, h => h.key_of(item))
    }

    pub fn set_instrumented(&mut self, on: bool) {
        both!(self, h => h.set_instrumented(on))
    }

    pub fn take_events(&mut self) -> Vec<Event> {
        both!(self, h => h.take_events())
    }

    pub fn set_link_strategy(&mut self, strategy: Option<Box<dyn LinkStrategy>>) {
        both!(self, h => h.set_link_strategy(strategy))
    }

    /// Multi-root only; ignored by the other structures.
    pub fn set_in_place_root_decrease(&mut self, on: bool) {
        if let VariantHeap::OneParent(h) = self {
            h.set_in_place_root_decrease(on);
        }
    }

    /// Rank of the node holding `item`.
    pub fn rank_of(&self, item: ItemId) -> Option<u32> {
        match self {
            VariantHeap::TwoParent(h) => h.node_of(item).map(|u| h.node(u).rank),
            VariantHeap::OneParent(h) => h.node_of(item).map(|u| h.node(u).rank),
        }
    }

    pub fn snapshot(&self) -> Snapshot<K> {
        match self {
            VariantHeap::TwoParent(h) => Snapshot::Dag(h.snapshot()),
            VariantHeap::OneParent(h) => Snapshot::Tree(h.snapshot()),
        }
    }

    pub fn view(&self) -> HeapView<K> {
        match self {
            VariantHeap::TwoParent(h) => {
                let snap = h.snapshot();
                let nodes = snap
                    .nodes
                    .iter()
                    .enumerate()
                    .map(|(i, n)| {
                        n.live.then(|| ViewNode {
                            key: n.key.clone(),
                            rank: n.rank,
                            item: n.item,
                            children: h.children_of(i as NodeId),
                        })
                    })
                    .collect();
                HeapView { nodes, roots: snap.root.into_iter().collect(), min: snap.root }
            }
            VariantHeap::OneParent(h) => {
                let snap = h.snapshot();
                let nodes = snap
                    .nodes
                    .into_iter()
                    .map(|n| {
                        n.live.then_some(ViewNode { key: n.key, rank: n.rank, item: n.item, children: n.children })
                    })
                    .collect();
                HeapView { nodes, roots: snap.roots, min: snap.min }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_names() {
        for cfg in VariantConfig::STANDARD {
            assert_eq!(cfg.to_string().parse::<VariantConfig>().unwrap(), cfg);
        }
        assert_eq!("two_parent".parse::<VariantConfig>().unwrap(), VariantConfig::TWO_PARENT);
        assert_eq!(VariantConfig::EAGER_0.to_string(), "one_root:eager:small-r");
        assert!("two_parent:eager:large2".parse::<VariantConfig>().is_err());
        assert!("one_root:lazy:large2".parse::<VariantConfig>().is_err());
        assert!("multi_root:naive:large0".parse::<VariantConfig>().is_ok());
        assert!("bogus:lazy:large2".parse::<VariantConfig>().is_err());
        assert!("two_parent:lazy".parse::<VariantConfig>().is_err());
    }

    #[test]
    fn every_standard_variant_sorts() {
        let keys = [14i64, 11, 5, 9, 0, 8, 10, 3, 6, 12, 13, 4];
        for cfg in VariantConfig::STANDARD {
            let mut h = VariantHeap::new(cfg).unwrap();
            for (i, &k) in keys.iter().enumerate() {
                h.insert(ItemId(i as u32), k).unwrap();
            }
            h.decrease_key(ItemId(0), -1).unwrap();
            let mut out = Vec::new();
            while let Ok((_, k)) = h.delete_min() {
                out.push(k);
            }
            assert_eq!(out, vec![-1, 0, 3, 4, 5, 6, 8, 9, 10, 11, 12, 13], "{cfg}");
            assert_eq!(h.node_count(), 0, "{cfg}");
        }
    }

    #[test]
    fn cross_structure_meld_is_rejected() {
        let mut a: VariantHeap<i64> = VariantHeap::new(VariantConfig::TWO_PARENT).unwrap();
        let b = VariantHeap::new(VariantConfig::ONE_ROOT).unwrap();
        assert!(matches!(a.meld(b), Err(HeapError::Incompatible(..))));
    }

    #[test]
    fn view_lists_children() {
        for cfg in VariantConfig::STANDARD {
            let mut h = VariantHeap::new(cfg).unwrap();
            for i in 0..=8u32 {
                h.insert(ItemId(i), i as i64).unwrap();
            }
            h.delete_min().unwrap();
            let v = h.view();
            let root = v.min.unwrap();
            assert_eq!(v.node(root).rank, 3, "{cfg}");
            let mut ranks: Vec<u32> = v.full_children(root).map(|c| v.node(c).rank).collect();
            ranks.sort();
            assert_eq!(ranks, vec![0, 1, 2], "{cfg}");
        }
    }
}

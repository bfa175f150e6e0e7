//! Hollow heaps: a priority queue with lazy deletion and decrease-key by
//! node replacement.
//!
//! [`HollowHeap`] is the two-parent structure. [`VariantHeap`] adds the
//! one-parent structures and the decrease-key rank policies behind a common
//! interface. The `verify` module holds an oracle and structural checkers,
//! `workload` the operation scripts and generators, and `bench` the
//! benchmark driver used by the `hollow-bench` binary.

pub mod bench;
pub mod common;
pub mod heap;
pub mod policy;
pub mod rebuild;
pub mod strategy;
pub mod variants;
pub mod verify;
pub mod workload;

pub use common::{rank_bound, Event, HeapError, ItemId, NodeId, Stats, PHI};
pub use heap::HollowHeap;
pub use policy::{Family, RankPolicy, Regime, SmallFn};
pub use rebuild::{RebuildConfig, RebuildMethod, RebuildTrigger};
pub use strategy::{LinkOrder, LinkStrategy, RootInfo};
pub use variants::{HeapView, Mode, OneParentHeap, Snapshot, VariantConfig, VariantHeap};

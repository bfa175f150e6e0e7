//! Seeded random scripts.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Builder, HeapId, Op, Workload};
use crate::common::ItemId;

/// Relative weights of each op kind. Weights need not sum to one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mix {
    pub insert: f64,
    pub decrease: f64,
    pub delete_min: f64,
    pub delete: f64,
    pub find_min: f64,
    pub meld: f64,
}

impl Mix {
    pub const INSERTS_ONLY: Mix =
        Mix { insert: 1.0, decrease: 0.0, delete_min: 0.0, delete: 0.0, find_min: 0.0, meld: 0.0 };

    fn total(&self) -> f64 {
        self.insert + self.decrease + self.delete_min + self.delete + self.find_min + self.meld
    }
}

impl Default for Mix {
    fn default() -> Self {
        Mix { insert: 0.40, decrease: 0.40, delete_min: 0.19, delete: 0.0, find_min: 0.0, meld: 0.01 }
    }
}

impl fmt::Display for Mix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "insert={},decrease={},deletemin={},delete={},findmin={},meld={}",
            self.insert, self.decrease, self.delete_min, self.delete, self.find_min, self.meld
        )
    }
}

impl FromStr for Mix {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut m = Mix { insert: 0.0, decrease: 0.0, delete_min: 0.0, delete: 0.0, find_min: 0.0, meld: 0.0 };
        for part in s.split(',').filter(|p| !p.trim().is_empty()) {
            let (k, v) = part.split_once('=').ok_or_else(|| format!("expected kind=weight, got `{part}`"))?;
            let v: f64 = v.trim().parse().map_err(|_| format!("bad weight `{v}`"))?;
            if !(v >= 0.0 && v.is_finite()) {
                return Err(format!("weight for `{k}` must be non-negative"));
            }
            let slot = match k.trim() {
                "insert" => &mut m.insert,
                "decrease" => &mut m.decrease,
                "deletemin" => &mut m.delete_min,
                "delete" => &mut m.delete,
                "findmin" => &mut m.find_min,
                "meld" => &mut m.meld,
                other => return Err(format!("unknown op kind `{other}`")),
            };
            *slot = v;
        }
        if m.insert <= 0.0 {
            return Err("mix needs a positive insert weight".into());
        }
        Ok(m)
    }
}

/// Low bits of every key hold the item id, so live keys are distinct and
/// a script's deletemin results do not depend on tie-breaking.
const ID_BITS: u32 = 24;
const INSERT_RANGE: i64 = 1 << 30;
const DECREASE_STEP: i64 = 1 << 12;

fn key_of(base: i64, item: ItemId) -> i64 {
    (base << ID_BITS) | item.0 as i64
}

#[derive(Default)]
struct Live {
    keys: HashMap<ItemId, (usize, i64)>,
    by_key: [BTreeSet<(i64, ItemId)>; 2],
    list: Vec<ItemId>,
    pos: HashMap<ItemId, usize>,
}

impl Live {
    fn add(&mut self, h: usize, item: ItemId, key: i64) {
        self.keys.insert(item, (h, key));
        self.by_key[h].insert((key, item));
        self.pos.insert(item, self.list.len());
        self.list.push(item);
    }

    fn remove(&mut self, item: ItemId) {
        let (h, key) = self.keys.remove(&item).expect("live item");
        self.by_key[h].remove(&(key, item));
        let i = self.pos.remove(&item).expect("listed");
        self.list.swap_remove(i);
        if let Some(&moved) = self.list.get(i) {
            self.pos.insert(moved, i);
        }
    }
}

/// `m` ops drawn from `mix` after two `makeheap` lines. Inserts go to the
/// main heap `a`, or with probability 1/4 to the side heap `b` when melds
/// are enabled; a meld folds `b` into `a` and recreates `b`, which is two
/// ops.
pub fn gen_random(m: usize, seed: u64, mix: Mix) -> Workload {
    assert!(m < 1 << ID_BITS, "too many ops for the key encoding");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = Builder::default();
    let heaps: [HeapId; 2] = [b.heap("a"), b.heap("b")];
    b.push(Op::MakeHeap { heap: heaps[0] });
    if mix.meld > 0.0 {
        b.push(Op::MakeHeap { heap: heaps[1] });
    }
    let first = b.len();
    let mut live = Live::default();
    let total = mix.total();
    while b.len() - first < m {
        let mut x = rng.random::<f64>() * total;
        let mut pick = |w: f64| {
            let hit = x < w;
            x -= w;
            hit
        };
        let empty = live.list.is_empty();
        if pick(mix.insert) || empty {
            let item = b.fresh_item();
            let h = usize::from(mix.meld > 0.0 && rng.random_range(0..4) == 0);
            let key = key_of(rng.random_range(0..INSERT_RANGE), item);
            live.add(h, item, key);
            b.push(Op::Insert { heap: heaps[h], item, key });
        } else if pick(mix.decrease) {
            let item = live.list[rng.random_range(0..live.list.len())];
            let (h, old) = live.keys[&item];
            let base = (old >> ID_BITS) - rng.random_range(1..=DECREASE_STEP);
            let key = key_of(base, item);
            live.remove(item);
            live.add(h, item, key);
            b.push(Op::Decrease { heap: heaps[h], item, key });
        } else if pick(mix.delete_min) {
            let h = if live.by_key[0].is_empty() { 1 } else { 0 };
            let &(_, item) = live.by_key[h].first().expect("non-empty");
            live.remove(item);
            b.push(Op::DeleteMin { heap: heaps[h] });
        } else if pick(mix.delete) {
            let item = live.list[rng.random_range(0..live.list.len())];
            let h = live.keys[&item].0;
            live.remove(item);
            b.push(Op::Delete { heap: heaps[h], item });
        } else if pick(mix.find_min) {
            let h = if live.by_key[0].is_empty() { 1 } else { 0 };
            b.push(Op::FindMin { heap: heaps[h] });
        } else {
            let moved: Vec<(i64, ItemId)> = std::mem::take(&mut live.by_key[1]).into_iter().collect();
            for (k, it) in moved {
                live.keys.insert(it, (0, k));
                live.by_key[0].insert((k, it));
            }
            b.push(Op::Meld { a: heaps[0], b: heaps[1], into: heaps[0] });
            b.push(Op::MakeHeap { heap: heaps[1] });
        }
    }
    let meta = b.meta_mut();
    meta.generator = "random".into();
    meta.params.insert("m".into(), m.to_string());
    meta.params.insert("seed".into(), seed.to_string());
    meta.params.insert("mix".into(), mix.to_string());
    b.finish()
}

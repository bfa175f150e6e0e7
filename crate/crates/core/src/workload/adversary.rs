//! Costly op sequences for the inefficient rank rules, plus the binomial
//! tree builder they start from.
//!
//! Each generator drives a heap of its target variant while it writes the
//! script, so that it can pick items by their current position (children
//! of the root, descendants of a given node). Replaying the script on the
//! target reproduces the same structures, since the heaps are
//! deterministic.

use std::collections::HashSet;

use super::{Builder, HeapId, Op, Span, Workload};
use crate::common::{ItemId, NodeId};
use crate::policy::{Family, RankPolicy, Regime, SmallFn};
use crate::strategy::LinkOrder;
use crate::variants::{HeapView, Mode, VariantConfig, VariantHeap};

/// Spacing between keys that must stay far apart.
const WIDE: i64 = 1 << 20;
/// Start of the range for keys inserted "above everything".
const HIGH: i64 = 1 << 44;

struct Sim {
    b: Builder,
    h: HeapId,
    heap: VariantHeap<i64>,
    next_high: i64,
    rounds: Vec<Span>,
    round_start: usize,
}

impl Sim {
    fn new(cfg: VariantConfig, order: LinkOrder, generator: &str) -> Sim {
        let mut b = Builder::default();
        let h = b.heap("h");
        b.push(Op::MakeHeap { heap: h });
        let mut heap = VariantHeap::new(cfg).expect("generator targets a valid variant");
        heap.set_link_strategy(order.build());
        let meta = b.meta_mut();
        meta.generator = generator.into();
        meta.target = Some(cfg);
        meta.link_order = order;
        Sim { b, h, heap, next_high: HIGH, rounds: Vec::new(), round_start: 0 }
    }

    fn insert(&mut self, key: i64) -> ItemId {
        let item = self.b.fresh_item();
        self.heap.insert(item, key).expect("fresh item");
        self.b.push(Op::Insert { heap: self.h, item, key });
        item
    }

    /// Insert with a key above every key used so far.
    fn insert_high(&mut self) -> ItemId {
        let k = self.next_high;
        self.next_high += WIDE;
        self.insert(k)
    }

    fn decrease(&mut self, item: ItemId, key: i64) {
        self.heap.decrease_key(item, key).expect("generator decreases are valid");
        self.b.push(Op::Decrease { heap: self.h, item, key });
    }

    fn decrease_by_one(&mut self, item: ItemId) {
        let k = self.key(item) - 1;
        self.decrease(item, k);
    }

    fn delete_min(&mut self) -> (ItemId, i64) {
        let r = self.heap.delete_min().expect("non-empty");
        self.b.push(Op::DeleteMin { heap: self.h });
        r
    }

    fn key(&self, item: ItemId) -> i64 {
        *self.heap.key_of(item).expect("live item")
    }

    fn min_key(&self) -> i64 {
        *self.heap.find_min().expect("non-empty").1
    }

    fn view(&self) -> HeapView<i64> {
        self.heap.view()
    }

    fn end_prologue(&mut self) {
        let n = self.b.len();
        self.b.meta_mut().prologue = Span { start: 0, end: n };
        self.round_start = n;
    }

    fn end_round(&mut self) {
        let n = self.b.len();
        self.rounds.push(Span { start: self.round_start, end: n });
        self.round_start = n;
    }

    fn param(&mut self, k: &str, v: impl ToString) {
        self.b.meta_mut().params.insert(k.into(), v.to_string());
    }

    fn predict(&mut self, k: &str, v: f64) {
        self.b.meta_mut().predicted.insert(k.into(), v);
    }

    fn finish(mut self) -> Workload {
        self.b.meta_mut().rounds = std::mem::take(&mut self.rounds);
        self.b.finish()
    }
}

fn node_of(view: &HeapView<i64>, item: ItemId) -> NodeId {
    view.nodes.iter().position(|n| n.as_ref().is_some_and(|n| n.item == Some(item))).expect("item has a node") as NodeId
}

fn min_node(view: &HeapView<i64>) -> NodeId {
    view.min.expect("non-empty heap")
}

/// Full descendants of `u` (excluding `u`), children before parents.
fn full_descendants_bottom_up(view: &HeapView<i64>, u: NodeId) -> Vec<NodeId> {
    let mut out = Vec::new();
    let mut stack: Vec<(NodeId, bool)> = view.full_children(u).map(|c| (c, false)).collect();
    while let Some((v, done)) = stack.pop() {
        if done {
            out.push(v);
        } else {
            stack.push((v, true));
            stack.extend(view.full_children(v).map(|c| (c, false)));
        }
    }
    out
}

fn binomial_prologue(sim: &mut Sim, l: u32) {
    for i in 0..=(1u64 << l) {
        sim.insert(i as i64 * WIDE);
    }
    sim.delete_min();
}

/// `2^l + 1` inserts in increasing key order and one deletemin. Every
/// variant that links equal ranks greedily ends with one binomial tree of
/// rank `l`.
pub fn gen_binomial(l: u32) -> Workload {
    assert!(l <= 24, "l too large");
    let mut sim = Sim::new(VariantConfig::TWO_PARENT, LinkOrder::Arrival, "binomial");
    sim.param("l", l);
    binomial_prologue(&mut sim, l);
    sim.end_prologue();
    sim.predict("root_rank", l as f64);
    sim.predict("nodes", (1u64 << l) as f64);
    sim.finish()
}

/// Nodes linked by the deletemin of one round against eager with
/// `k = r - f(r)`: the new nodes, the insert, and the children every hollow
/// node keeps.
pub fn eager_round_prediction(l: u32, f: SmallFn) -> u64 {
    1 + l as u64 + (0..l).map(|j| f.eval(j).min(j) as u64).sum::<u64>()
}

/// Binomial prologue, then `rounds` rounds of: one decrease on every child
/// of the root, one insert, one deletemin. Target: one-root eager with
/// `k = r - f(r)`.
pub fn gen_eager_small_adversary(l: u32, rounds: usize, f: SmallFn) -> Workload {
    assert!(l <= 20 && (rounds as i64) < WIDE);
    let cfg = VariantConfig::new(Mode::OneRoot, RankPolicy::new(Family::Eager, Regime::Small(f)))
        .expect("eager is one-parent");
    let mut sim = Sim::new(cfg, LinkOrder::Arrival, "eager-small");
    sim.param("l", l);
    sim.param("rounds", rounds);
    sim.param("f", Regime::Small(f));
    sim.next_high = ((1i64 << l) + 1) * WIDE;
    binomial_prologue(&mut sim, l);
    sim.end_prologue();
    for _ in 0..rounds {
        let view = sim.view();
        let kids: Vec<ItemId> = view.full_children(min_node(&view)).map(|c| view.node(c).item.unwrap()).collect();
        for it in kids {
            sim.decrease_by_one(it);
        }
        sim.insert_high();
        sim.delete_min();
        sim.end_round();
    }
    sim.predict("nodes_linked_per_round", eager_round_prediction(l, f) as f64);
    sim.predict("lower_bound_per_round", (l / 2) as f64 * f.eval(l / 2) as f64);
    sim.finish()
}

/// Binomial prologue, then rounds of: one decrease on each child of the
/// root holding a never-decreased item, `l + 1` inserts one of which is the
/// new minimum, one deletemin. Nodes created by decrease-key are linked
/// last, so the inserted nodes and the grandchildren of the deleted root
/// rebuild the binomial tree. Target: one-root naive with the given rank
/// rule.
pub fn gen_naive_adversary(l: u32, rounds: usize, regime: Regime) -> Workload {
    assert!(l <= 20 && (rounds as i64) < WIDE);
    let cfg = VariantConfig::new(Mode::OneRoot, RankPolicy::new(Family::Naive, regime)).expect("naive is one-parent");
    let mut sim = Sim::new(cfg, LinkOrder::DeferDecreased, "naive");
    sim.param("l", l);
    sim.param("rounds", rounds);
    sim.param("k", regime);
    sim.next_high = ((1i64 << l) + 1) * WIDE;
    binomial_prologue(&mut sim, l);
    sim.end_prologue();
    let mut decreased = HashSet::new();
    for _ in 0..rounds {
        let view = sim.view();
        let root = min_node(&view);
        let root_key = view.node(root).key;
        let kids: Vec<ItemId> = view
            .full_children(root)
            .map(|c| view.node(c).item.unwrap())
            .filter(|it| !decreased.contains(it))
            .take(l as usize)
            .collect();
        for it in kids {
            sim.decrease_by_one(it);
            decreased.insert(it);
        }
        sim.insert(root_key + 1);
        for _ in 0..l {
            sim.insert_high();
        }
        sim.delete_min();
        sim.end_round();
    }
    let b = 1 + l as u64 + (l as u64 * l.saturating_sub(1) as u64) / 2;
    sim.predict("binomial_nodes_linked_per_round", b as f64);
    sim.predict("lower_bound_per_round", ((l / 2) * (l / 2)) as f64);
    sim.finish()
}

/// Build a tree whose root has one full child of each rank `0..l` and no
/// other full nodes, then repeat (insert, deletemin) `reps` times; each
/// repetition links `l` times. `j = 0` targets lazy with `k = r`, by the
/// ladder that grows the root rank by one per step. `j = 1` targets lazy
/// with `k = r - 1`, by the ladder that repairs one missing rank per step.
/// `reps` defaults to `l^2` and `l^3`.
pub fn gen_tl_adversary(j: u32, l: u32, reps: Option<usize>) -> Workload {
    assert!(j <= 1, "only j = 0 and j = 1 have a construction");
    let policy = RankPolicy::new(Family::Lazy, Regime::Large(j));
    let cfg = VariantConfig::new(Mode::TwoParent, policy).expect("lazy is two-parent");
    let order = if j == 0 { LinkOrder::Arrival } else { LinkOrder::DeferFresh };
    let mut sim = Sim::new(cfg, order, "tl");
    let reps = reps.unwrap_or(if j == 0 { (l * l) as usize } else { (l * l * l) as usize });
    sim.param("j", j);
    sim.param("l", l);
    sim.param("reps", reps);
    if j == 0 {
        const GAP: i64 = 1 << 32;
        let mut z = sim.insert(0);
        for _ in 0..l {
            let zk = sim.key(z);
            sim.insert(zk - 2 * GAP);
            let view = sim.view();
            let old = node_of(&view, z);
            let kids: Vec<ItemId> = view.full_children(old).map(|c| view.node(c).item.unwrap()).collect();
            for it in kids {
                sim.decrease_by_one(it);
            }
            z = sim.insert(zk - GAP);
            sim.delete_min();
        }
    } else {
        sim.insert(0);
        for s in 0..l {
            sim.insert_high();
            for i in (1..=s).rev() {
                let y = sim.min_key() + 1;
                sim.insert(y);
                sim.delete_min();
                let view = sim.view();
                let root = min_node(&view);
                let x = view.full_children(root).find(|&c| view.node(c).rank == i).unwrap_or_else(|| {
                    let r: Vec<u32> = view.full_children(root).map(|c| view.node(c).rank).collect();
                    panic!("s={s} i={i} root rank {} kids {r:?}", view.node(root).rank)
                });
                for d in full_descendants_bottom_up(&view, x) {
                    let it = view.node(d).item.unwrap();
                    sim.decrease_by_one(it);
                }
            }
        }
    }
    sim.end_prologue();
    for _ in 0..reps {
        let k = sim.min_key() + 1;
        sim.insert(k);
        sim.delete_min();
        sim.end_round();
    }
    sim.predict("links_per_rep", l as f64);
    sim.predict("cost_exponent", if j == 0 { 1.5 } else { 4.0 / 3.0 });
    sim.finish()
}

/// Decreases the item to successively smaller keys until the node holding
/// it has rank 0, ending at `target`.
fn decrease_to_rank_zero(sim: &mut Sim, policy: RankPolicy, item: ItemId, target: i64) -> usize {
    let mut r = sim.heap.rank_of(item).expect("live item");
    let mut steps = 1;
    let mut rr = policy.new_rank(r);
    while rr > 0 {
        rr = policy.new_rank(rr);
        steps += 1;
    }
    for s in 1..=steps {
        sim.decrease(item, target + (steps - s) as i64);
        r = sim.heap.rank_of(item).unwrap();
    }
    debug_assert_eq!(r, 0);
    steps
}

/// Per-round work (links plus destroyed nodes) of the repeated sequence
/// against lazy with `k = 0`.
pub fn rl_round_prediction(l: u32) -> u64 {
    let l = l as u64;
    l * (l + 1) / 2 + 3 * l + 2
}

/// Builds the trees `Q_0 .. Q_l`, deletes the minimum to get `R_l`, then
/// repeats `rounds` times: decrease the items in the roots of the
/// subtrees `S_0 .. S_{l-1}` until each is held by a rank-0 node, insert
/// one item, delete the minimum. Target: lazy with `k = r - f(r)`, linking
/// with the chain order.
pub fn gen_rl_adversary(l: u32, rounds: usize, f: SmallFn) -> Workload {
    assert!(l <= 20);
    let policy = RankPolicy::new(Family::Lazy, Regime::Small(f));
    let cfg = VariantConfig::new(Mode::TwoParent, policy).expect("lazy is two-parent");
    let mut sim = Sim::new(cfg, LinkOrder::Chains, "rl");
    sim.param("l", l);
    sim.param("rounds", rounds);
    sim.param("f", Regime::Small(f));
    // keys of successive decreases of one item stay inside one step
    const STEP: i64 = 128;

    // Q_0: a root with one child
    sim.insert(0);
    let mut s_items = vec![sim.insert_high()];
    for j in 0..l as usize {
        let view = sim.view();
        let root = min_node(&view);
        let rk = view.node(root).key;
        let b = view.full_children(root).map(|c| view.node(c).key).min().unwrap();
        for (i, &it) in s_items.iter().enumerate() {
            // in the last step the future root goes just above the new
            // root, leaving a wide range for the rounds
            let target = if i == j && j + 1 == l as usize { rk + 2 } else { b - STEP * (i as i64 + 1) };
            decrease_to_rank_zero(&mut sim, policy, it, target);
        }
        let pool: u64 = (0..=j as u32).map(|i| (1u64 << (i + 1)) - 1).sum();
        for _ in 0..pool {
            sim.insert_high();
        }
        let s0 = sim.insert_high();
        sim.insert(rk + 1);
        sim.delete_min();
        s_items.insert(0, s0);
    }
    let (gone, _) = sim.delete_min();
    debug_assert!(!s_items.contains(&gone));
    sim.end_prologue();

    let mut decreases = 0usize;
    for _ in 0..rounds {
        let view = sim.view();
        let root = min_node(&view);
        let a = view.node(root).key;
        let b = view.full_children(root).map(|c| view.node(c).key).min().unwrap();
        // y_{l-1} goes just above the root and becomes the next root; the
        // others go just below every child, so the open range shrinks by a
        // constant per round
        for (i, &it) in s_items[..l as usize].iter().enumerate() {
            let target = if i + 1 == l as usize { a + 1 } else { b - STEP * (i as i64 + 1) };
            decreases += decrease_to_rank_zero(&mut sim, policy, it, target);
        }
        let z = sim.insert(b - 1);
        let (gone, _) = sim.delete_min();
        assert_eq!(Some(gone), s_items.pop(), "the root of the copy of S_l is the minimum");
        s_items.insert(0, z);
        sim.end_round();
    }
    sim.predict("work_per_round", rl_round_prediction(l) as f64);
    let lf = l as f64;
    let fs = f.eval(lf.sqrt() as u32).max(1) as f64;
    sim.predict("decreases_per_round_max", lf * lf / fs + lf.powf(1.5));
    if rounds > 0 {
        sim.predict("decreases_per_round", decreases as f64 / rounds as f64);
    }
    sim.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::workload::OpKind;

    fn replay(w: &Workload, cfg: VariantConfig) -> VariantHeap<i64> {
        let mut h = VariantHeap::new(cfg).unwrap();
        h.set_link_strategy(w.meta.link_order.build());
        for op in &w.ops {
            match *op {
                Op::MakeHeap { .. } => {}
                Op::Insert { item, key, .. } => h.insert(item, key).unwrap(),
                Op::Decrease { item, key, .. } => h.decrease_key(item, key).unwrap(),
                Op::DeleteMin { .. } => {
                    h.delete_min().unwrap();
                }
                _ => unreachable!(),
            }
        }
        h
    }

    fn full_ranks(view: &HeapView<i64>, u: NodeId) -> Vec<u32> {
        let mut r: Vec<u32> = view.full_children(u).map(|c| view.node(c).rank).collect();
        r.sort_unstable();
        r
    }

    #[test]
    fn binomial_sizes() {
        let w = gen_binomial(0);
        assert_eq!((w.count(OpKind::Insert), w.count(OpKind::DeleteMin)), (2, 1));
        let w = gen_binomial(3);
        assert_eq!((w.count(OpKind::Insert), w.count(OpKind::DeleteMin)), (9, 1));
        let h = replay(&w, VariantConfig::TWO_PARENT);
        let v = h.view();
        let root = v.min.unwrap();
        assert_eq!(v.node(root).rank, 3);
        assert_eq!(full_ranks(&v, root), vec![0, 1, 2]);
    }

    #[test]
    fn eager_prediction_values() {
        assert_eq!(eager_round_prediction(12, SmallFn::Identity), 79);
        let w = gen_eager_small_adversary(12, 4, SmallFn::Identity);
        assert_eq!(w.meta.predicted["nodes_linked_per_round"], 79.0);
        assert_eq!(w.meta.predicted["lower_bound_per_round"], 36.0);
        // one round is l decreases, an insert and a deletemin
        assert!(w.meta.rounds.iter().all(|r| r.end - r.start == 14));
    }

    #[test]
    fn eager_rounds_keep_the_binomial_tree() {
        let w = gen_eager_small_adversary(6, 10, SmallFn::Identity);
        let h = replay(&w, w.meta.target.unwrap());
        let v = h.view();
        let root = v.min.unwrap();
        assert_eq!(v.node(root).rank, 6);
        assert_eq!(full_ranks(&v, root), (0..6).collect::<Vec<_>>());
        assert_eq!(h.len(), 64);
    }

    #[test]
    fn naive_zero_matches_eager_zero_on_the_eager_script() {
        let w = gen_eager_small_adversary(8, 20, SmallFn::Identity);
        let naive: VariantConfig = "one_root:naive:small-r".parse().unwrap();
        let a = replay(&w, VariantConfig::EAGER_0);
        let b = replay(&w, naive);
        assert_eq!(a.stats(), b.stats());
    }

    #[test]
    fn naive_rounds_restore_binomial_core() {
        let w = gen_naive_adversary(6, 8, Regime::Small(SmallFn::Identity));
        let h = replay(&w, w.meta.target.unwrap());
        let v = h.view();
        let root = v.min.unwrap();
        let ranks = full_ranks(&v, root);
        // the binomial children plus extra trees of decreased items
        for r in 0..6 {
            assert!(ranks.contains(&r));
        }
        assert_eq!(w.meta.rounds[0].end - w.meta.rounds[0].start, 6 + 7 + 1);
    }

    fn assert_tl_shape(h: &VariantHeap<i64>, l: u32) {
        let v = h.view();
        let root = v.min.unwrap();
        assert_eq!(full_ranks(&v, root), (0..l).collect::<Vec<_>>());
        let full = v.nodes.iter().flatten().filter(|n| n.item.is_some()).count();
        assert_eq!(full as u32, l + 1, "only the root and its children are full");
    }

    #[test]
    fn tl_j0_builds_the_tree() {
        for l in [1, 2, 5, 9] {
            let w = gen_tl_adversary(0, l, Some(0));
            let h = replay(&w, w.meta.target.unwrap());
            assert_tl_shape(&h, l);
            assert_eq!(h.view().node(h.view().min.unwrap()).rank, l);
        }
        let w = gen_tl_adversary(0, 8, None);
        assert_eq!(w.meta.rounds.len(), 64);
        let h = replay(&w, w.meta.target.unwrap());
        assert_tl_shape(&h, 8);
    }

    #[test]
    fn tl_j1_builds_the_tree() {
        for l in [1, 2, 3, 6] {
            let w = gen_tl_adversary(1, l, Some(3));
            let h = replay(&w, w.meta.target.unwrap());
            assert_tl_shape(&h, l);
        }
    }

    #[test]
    fn rl_rounds_reproduce_the_shape() {
        let l = 5;
        let w = gen_rl_adversary(l, 6, SmallFn::Identity);
        let h = replay(&w, w.meta.target.unwrap());
        let v = h.view();
        let root = v.min.unwrap();
        assert_eq!(v.node(root).rank, l);
        // B_0..B_{l-1} plus S_{l-1}; the smaller S_i hang off it as a chain
        // because leftover roots are linked in ascending rank
        let mut want: Vec<u32> = (0..l).chain([l - 1]).collect();
        want.sort_unstable();
        assert_eq!(full_ranks(&v, root), want);
        // S_i holds 2^i full nodes of its own plus the full nodes below its
        // hollow child S_{i-1}
        let mut full = vec![1usize];
        for i in 1..=l as usize {
            full.push((1 << i) + full[i - 1] - 1);
        }
        assert_eq!(h.len(), full.iter().sum::<usize>());
        assert_eq!(w.meta.predicted["decreases_per_round"], l as f64);
    }

    #[test]
    fn rl_general_f_reaches_rank_zero() {
        let w = gen_rl_adversary(6, 4, SmallFn::Log2);
        let _ = replay(&w, w.meta.target.unwrap());
        assert!(w.meta.predicted["decreases_per_round"] >= 6.0);
    }

    #[test]
    fn scripts_are_deterministic() {
        assert_eq!(gen_rl_adversary(4, 3, SmallFn::Identity), gen_rl_adversary(4, 3, SmallFn::Identity));
        assert_eq!(gen_tl_adversary(1, 4, Some(2)).to_text(), gen_tl_adversary(1, 4, Some(2)).to_text());
    }
}

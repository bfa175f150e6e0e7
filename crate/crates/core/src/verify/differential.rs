//! Running scripts against heaps and the oracle.
//!
//! [`execute`] runs one workload on one structure, with optional rebuilding
//! and instrumented checks, and collects counters. [`differential_run`]
//! does that for several structures and compares every `findmin` and
//! `deletemin` key with the oracle's.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::common::{rank_bound, HeapError, Stats, PHI};
use crate::rebuild::{RebuildConfig, RebuildMethod, RebuildTrigger};
use crate::strategy::LinkOrder;
use crate::variants::{Mode, Snapshot, VariantConfig, VariantHeap};
use crate::verify::check::{check_dag, check_structure, check_tree, Violation};
use crate::verify::oracle::OracleHeap;
use crate::verify::shadow::Shadow;
use crate::workload::{HeapId, Op, OpKind, Workload};

/// Above this many ops the default stride drops from 1 to 100.
pub const FULL_CHECK_LIMIT: usize = 10_000;

/// How often instrumented checks run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Verify {
    #[default]
    Off,
    /// Every `n`-th op.
    Stride(usize),
    /// After every op.
    Full,
}

impl Verify {
    /// Every op for short scripts, every 100th above [`FULL_CHECK_LIMIT`].
    pub fn auto(m: usize) -> Verify {
        if m <= FULL_CHECK_LIMIT {
            Verify::Full
        } else {
            Verify::Stride(100)
        }
    }

    fn stride(self) -> Option<usize> {
        match self {
            Verify::Off => None,
            Verify::Stride(n) => Some(n.max(1)),
            Verify::Full => Some(1),
        }
    }
}

impl fmt::Display for Verify {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verify::Off => f.write_str("off"),
            Verify::Stride(n) => write!(f, "stride {n}"),
            Verify::Full => f.write_str("full"),
        }
    }
}

impl FromStr for Verify {
    type Err = String;

    /// `off`, `full`, `stride N`, `stride=N` or a bare `N`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s {
            "off" => return Ok(Verify::Off),
            "full" => return Ok(Verify::Full),
            _ => {}
        }
        let n = s.strip_prefix("stride").map(|r| r.trim_start_matches(['=', ' '])).unwrap_or(s);
        match n.parse::<usize>() {
            Ok(n) if n > 0 => Ok(Verify::Stride(n)),
            _ => Err(format!("expected off, full or stride N, got `{s}`")),
        }
    }
}

/// Settings for one execution.
#[derive(Debug, Clone, Copy)]
pub struct ExecConfig {
    pub variant: VariantConfig,
    pub verify: Verify,
    pub rebuild: Option<RebuildConfig>,
    /// Multi-root only.
    pub in_place_root_decrease: bool,
    /// `None` uses the order recorded in the workload.
    pub link_order: Option<LinkOrder>,
}

impl ExecConfig {
    pub fn new(variant: VariantConfig) -> Self {
        ExecConfig { variant, verify: Verify::Off, rebuild: None, in_place_root_decrease: false, link_order: None }
    }

    pub fn verify(mut self, v: Verify) -> Self {
        self.verify = v;
        self
    }

    pub fn rebuild(mut self, r: Option<RebuildConfig>) -> Self {
        self.rebuild = r;
        self
    }

    pub fn in_place_root_decrease(mut self, on: bool) -> Self {
        self.in_place_root_decrease = on;
        self
    }

    pub fn link_order(mut self, o: LinkOrder) -> Self {
        self.link_order = Some(o);
        self
    }
}

/// Key returned by a `findmin` or `deletemin`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Answer {
    pub op: usize,
    pub key: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OpViolation {
    pub op: usize,
    #[serde(flatten)]
    pub violation: Violation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OpError {
    pub op: usize,
    pub error: String,
}

impl fmt::Display for OpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "op {}: {}", self.op, self.error)
    }
}

impl std::error::Error for OpError {}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct RebuildSummary {
    pub count: u64,
    pub destroyed: u64,
    pub links: u64,
    pub comparisons: u64,
    /// Rebuilds after which `N != n`.
    pub not_compact: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RankExcess {
    pub op: usize,
    pub rank: u32,
    pub nodes: usize,
}

/// Counters and findings of one execution.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Execution {
    pub variant: String,
    pub ops: usize,
    pub op_counts: BTreeMap<OpKind, u64>,
    /// Summed over every heap the script created.
    pub stats: Stats,
    pub max_rank: u32,
    pub max_nodes: usize,
    pub max_items: usize,
    /// Largest `N / max(n, 1)` right after a delete, rebuilds included.
    pub max_nodes_per_item_after_delete: f64,
    /// Deletes after which `N > 3n`.
    pub deletes_over_3n: u64,
    /// `sum log_phi N` over deletes, `N` taken just before the delete.
    pub delete_log_sum: f64,
    /// Times the maximum rank grew past `log_phi N`.
    pub rank_excess: Vec<RankExcess>,
    /// Whether the policy promises the size and rank bounds; when it does
    /// not, `rank_excess` is informational and the size check is skipped.
    pub bounds_expected: bool,
    pub rebuilds: RebuildSummary,
    pub checks_run: u64,
    pub violations: Vec<OpViolation>,
    /// Stats accumulated within each round of the workload's metadata.
    pub rounds: Vec<Stats>,
    #[serde(skip)]
    pub answers: Vec<Answer>,
    pub error: Option<OpError>,
    pub wall_ms: f64,
}

impl Execution {
    pub fn ok(&self) -> bool {
        self.error.is_none() && self.violations.is_empty() && (self.rank_excess.is_empty() || !self.bounds_expected)
    }

    pub fn count(&self, k: OpKind) -> u64 {
        self.op_counts.get(&k).copied().unwrap_or(0)
    }

    /// Links plus hollow nodes destroyed.
    pub fn work(&self) -> u64 {
        self.stats.links() + self.stats.hollow_destroyed
    }
}

/// `log_phi n`, 0 for `n <= 1`.
pub fn log_phi(n: usize) -> f64 {
    if n <= 1 {
        0.0
    } else {
        (n as f64).ln() / PHI.ln()
    }
}

fn stats_sum(a: &Stats, b: &Stats) -> Stats {
    Stats {
        ranked_links: a.ranked_links + b.ranked_links,
        unranked_links: a.unranked_links + b.unranked_links,
        comparisons: a.comparisons + b.comparisons,
        hollow_destroyed: a.hollow_destroyed + b.hollow_destroyed,
        nodes_created: a.nodes_created + b.nodes_created,
        max_rank_seen: a.max_rank_seen.max(b.max_rank_seen),
    }
}

fn stats_delta(end: &Stats, start: &Stats) -> Stats {
    Stats {
        ranked_links: end.ranked_links - start.ranked_links,
        unranked_links: end.unranked_links - start.unranked_links,
        comparisons: end.comparisons - start.comparisons,
        hollow_destroyed: end.hollow_destroyed - start.hollow_destroyed,
        nodes_created: end.nodes_created - start.nodes_created,
        max_rank_seen: end.max_rank_seen,
    }
}

/// Rank of every arena slot, `None` for free ones.
pub fn live_ranks<K>(snap: &Snapshot<K>) -> Vec<Option<u32>> {
    match snap {
        Snapshot::Dag(s) => s.nodes.iter().map(|n| n.live.then_some(n.rank)).collect(),
        Snapshot::Tree(s) => s.nodes.iter().map(|n| n.live.then_some(n.rank)).collect(),
    }
}

fn structure_of<K: Ord + fmt::Debug>(snap: &Snapshot<K>) -> Vec<Violation> {
    match snap {
        Snapshot::Dag(s) => check_dag(s),
        Snapshot::Tree(s) => check_tree(s),
    }
}

struct Slot {
    heap: VariantHeap<i64>,
    shadow: Option<Shadow>,
    rank_seen: u32,
}

struct Runner<'a> {
    cfg: ExecConfig,
    order: LinkOrder,
    instrumented: bool,
    slots: Vec<Option<Slot>>,
    retired: Stats,
    out: &'a mut Execution,
}

impl Runner<'_> {
    fn slot(&mut self, h: HeapId) -> Result<&mut Slot, String> {
        self.slots.get_mut(h as usize).and_then(Option::as_mut).ok_or_else(|| format!("heap {h} does not exist"))
    }

    fn take(&mut self, h: HeapId) -> Result<Slot, String> {
        self.slots.get_mut(h as usize).and_then(Option::take).ok_or_else(|| format!("heap {h} does not exist"))
    }

    fn put(&mut self, h: HeapId, s: Slot) {
        let i = h as usize;
        if self.slots.len() <= i {
            self.slots.resize_with(i + 1, || None);
        }
        if let Some(old) = self.slots[i].replace(s) {
            self.retired = stats_sum(&self.retired, old.heap.stats());
        }
    }

    fn fresh(&self) -> Result<Slot, String> {
        let mut heap = VariantHeap::new(self.cfg.variant).map_err(|e| e.to_string())?;
        heap.set_link_strategy(self.order.build());
        heap.set_in_place_root_decrease(self.cfg.in_place_root_decrease);
        heap.set_instrumented(self.instrumented);
        let shadow = self.instrumented.then(|| Shadow::new(self.cfg.variant.mode == Mode::TwoParent));
        Ok(Slot { heap, shadow, rank_seen: 0 })
    }

    fn total_stats(&self) -> Stats {
        self.slots.iter().flatten().fold(self.retired, |acc, s| stats_sum(&acc, s.heap.stats()))
    }

    fn step(&mut self, i: usize, op: Op, check: bool) -> Result<(), String> {
        let e = |r: Result<(), HeapError>| r.map_err(|e| e.to_string());
        let touched = match op {
            Op::MakeHeap { heap } => {
                let s = self.fresh()?;
                self.put(heap, s);
                heap
            }
            Op::Insert { heap, item, key } => {
                e(self.slot(heap)?.heap.insert(item, key))?;
                heap
            }
            Op::Decrease { heap, item, key } => {
                e(self.slot(heap)?.heap.decrease_key(item, key))?;
                heap
            }
            Op::FindMin { heap } => {
                let key = self.slot(heap)?.heap.find_min().map(|(_, &k)| k);
                self.out.answers.push(Answer { op: i, key });
                heap
            }
            Op::Delete { heap, .. } | Op::DeleteMin { heap } => {
                let s = self.slot(heap)?;
                let before = s.heap.node_count();
                match op {
                    Op::Delete { item, .. } => e(s.heap.delete(item))?,
                    _ => {
                        let (_, k) = s.heap.delete_min().map_err(|e| e.to_string())?;
                        self.out.answers.push(Answer { op: i, key: Some(k) });
                    }
                }
                self.out.delete_log_sum += log_phi(before);
                heap
            }
            Op::Meld { a, b, into } => {
                if a == b {
                    return Err(format!("cannot meld heap {a} with itself"));
                }
                let mut sa = self.take(a)?;
                let mut sb = self.take(b)?;
                if let Some(sh) = sb.shadow.as_mut() {
                    sh.apply_all(sb.heap.take_events());
                }
                if let Some(sh) = sa.shadow.as_mut() {
                    sh.apply_all(sa.heap.take_events());
                }
                e(sa.heap.meld(sb.heap))?;
                if let (Some(sh), Some(incoming)) = (sa.shadow.as_mut(), sb.shadow) {
                    sh.apply_meld(sa.heap.take_events(), incoming);
                }
                sa.rank_seen = sa.rank_seen.max(sb.rank_seen);
                self.put(into, sa);
                into
            }
        };
        let is_delete = matches!(op.kind(), OpKind::Delete | OpKind::DeleteMin);
        if let Some(rc) = self.cfg.rebuild {
            if is_delete || rc.trigger == RebuildTrigger::AnyOp {
                self.maybe_rebuild(i, touched, &rc)?;
            }
        }
        let s = self.slot(touched)?;
        if let Some(sh) = s.shadow.as_mut() {
            sh.apply_all(s.heap.take_events());
        }
        let (nodes, items) = (s.heap.node_count(), s.heap.len());
        let max_rank = s.heap.stats().max_rank_seen;
        let mut excess = None;
        if max_rank > s.rank_seen {
            s.rank_seen = max_rank;
            if max_rank > rank_bound(nodes as u64) {
                excess = Some(RankExcess { op: i, rank: max_rank, nodes });
            }
        }
        let found = if check { Self::checks(s) } else { Vec::new() };
        if check {
            self.out.checks_run += 1;
        }
        self.out.violations.extend(found.into_iter().map(|v| OpViolation { op: i, violation: v }));
        self.out.rank_excess.extend(excess);
        self.out.max_rank = self.out.max_rank.max(max_rank);
        self.out.max_nodes = self.out.max_nodes.max(nodes);
        self.out.max_items = self.out.max_items.max(items);
        if is_delete {
            let ratio = nodes as f64 / items.max(1) as f64;
            self.out.max_nodes_per_item_after_delete = self.out.max_nodes_per_item_after_delete.max(ratio);
            if nodes > 3 * items {
                self.out.deletes_over_3n += 1;
            }
        }
        Ok(())
    }

    fn maybe_rebuild(&mut self, i: usize, h: HeapId, rc: &RebuildConfig) -> Result<(), String> {
        let s = self.slot(h)?;
        let Some(rep) = s.heap.maybe_rebuild(rc) else {
            return Ok(());
        };
        let compact = s.heap.node_count() == s.heap.len();
        let mut found = check_structure(&s.heap);
        if let Some(sh) = s.shadow.as_mut() {
            sh.apply_all(s.heap.take_events());
        }
        if s.shadow.is_some() {
            found.extend(Self::checks(s));
        }
        let r = &mut self.out.rebuilds;
        r.count += 1;
        r.destroyed += rep.destroyed as u64;
        r.links += rep.links;
        r.comparisons += rep.comparisons;
        if !compact {
            r.not_compact += 1;
        }
        self.out.violations.extend(found.into_iter().map(|v| OpViolation { op: i, violation: v }));
        Ok(())
    }

    fn checks(s: &mut Slot) -> Vec<Violation> {
        let snap = s.heap.snapshot();
        let mut out = structure_of(&snap);
        let bounds = s.heap.config().policy.keeps_fibonacci_bound();
        if let Some(sh) = s.shadow.as_mut() {
            out.extend(sh.take_log_violations());
            out.extend(sh.check_rank_invariant(&live_ranks(&snap)));
            if bounds {
                out.extend(sh.check_size_bound());
            }
            out.extend(sh.check_clone_path());
            out.extend(sh.check_parent_counts());
        }
        out
    }
}

/// Runs `w` on one structure. Stops at the first op the heap rejects and
/// records it in [`Execution::error`].
pub fn execute(w: &Workload, cfg: ExecConfig) -> Execution {
    let start = Instant::now();
    let mut out = Execution {
        variant: cfg.variant.to_string(),
        ops: w.len(),
        bounds_expected: cfg.variant.policy.keeps_fibonacci_bound(),
        ..Execution::default()
    };
    let stride = cfg.verify.stride();
    let mut runner = Runner {
        cfg,
        order: cfg.link_order.unwrap_or(w.meta.link_order),
        instrumented: stride.is_some(),
        slots: Vec::new(),
        retired: Stats::default(),
        out: &mut out,
    };
    let rounds = &w.meta.rounds;
    let mut round_start: Vec<Option<Stats>> = vec![None; rounds.len()];
    let mut round_stats = vec![Stats::default(); rounds.len()];
    let starts: HashMap<usize, Vec<usize>> = rounds.iter().enumerate().fold(HashMap::new(), |mut m, (k, r)| {
        m.entry(r.start).or_default().push(k);
        m
    });
    let ends: HashMap<usize, Vec<usize>> = rounds.iter().enumerate().fold(HashMap::new(), |mut m, (k, r)| {
        m.entry(r.end).or_default().push(k);
        m
    });
    for (i, &op) in w.ops.iter().enumerate() {
        if let Some(ks) = starts.get(&i) {
            let t = runner.total_stats();
            ks.iter().for_each(|&k| round_start[k] = Some(t));
        }
        *runner.out.op_counts.entry(op.kind()).or_default() += 1;
        let check = stride.is_some_and(|s| (i + 1) % s == 0 || i + 1 == w.len());
        if let Err(error) = runner.step(i, op, check) {
            runner.out.error = Some(OpError { op: i, error });
            break;
        }
        if let Some(ks) = ends.get(&(i + 1)) {
            let t = runner.total_stats();
            for &k in ks {
                if let Some(s0) = round_start[k] {
                    round_stats[k] = stats_delta(&t, &s0);
                }
            }
        }
    }
    let total = runner.total_stats();
    out.stats = total;
    out.rounds = round_stats;
    out.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    out
}

/// Runs `w` on the oracle: the reference answers, or the first op that
/// violates a precondition.
pub fn oracle_answers(w: &Workload) -> Result<Vec<Answer>, OpError> {
    let mut heaps: Vec<Option<OracleHeap<i64>>> = Vec::new();
    let mut out = Vec::new();
    for (i, &op) in w.ops.iter().enumerate() {
        let err = |error: String| OpError { op: i, error };
        let missing = |h: HeapId| err(format!("heap {h} does not exist"));
        let get = |heaps: &mut Vec<Option<OracleHeap<i64>>>, h: HeapId| -> Result<OracleHeap<i64>, OpError> {
            heaps.get_mut(h as usize).and_then(Option::take).ok_or_else(|| missing(h))
        };
        let put = |heaps: &mut Vec<Option<OracleHeap<i64>>>, h: HeapId, o: OracleHeap<i64>| {
            if heaps.len() <= h as usize {
                heaps.resize_with(h as usize + 1, || None);
            }
            heaps[h as usize] = Some(o);
        };
        let he = |r: Result<(), HeapError>| r.map_err(|e| err(e.to_string()));
        match op {
            Op::MakeHeap { heap } => put(&mut heaps, heap, OracleHeap::new()),
            Op::Meld { a, b, into } => {
                if a == b {
                    return Err(err(format!("cannot meld heap {a} with itself")));
                }
                let mut x = get(&mut heaps, a)?;
                let y = get(&mut heaps, b)?;
                he(x.meld(y))?;
                put(&mut heaps, into, x);
            }
            _ => {
                let h = match op {
                    Op::Insert { heap, .. }
                    | Op::Decrease { heap, .. }
                    | Op::Delete { heap, .. }
                    | Op::DeleteMin { heap }
                    | Op::FindMin { heap } => heap,
                    _ => unreachable!(),
                };
                let o = heaps.get_mut(h as usize).and_then(Option::as_mut).ok_or_else(|| missing(h))?;
                match op {
                    Op::Insert { item, key, .. } => he(o.insert(item, key))?,
                    Op::Decrease { item, key, .. } => he(o.decrease_key(item, key))?,
                    Op::Delete { item, .. } => he(o.delete(item))?,
                    Op::DeleteMin { .. } => {
                        let (_, k) = o.delete_min().map_err(|e| err(e.to_string()))?;
                        out.push(Answer { op: i, key: Some(k) });
                    }
                    Op::FindMin { .. } => out.push(Answer { op: i, key: o.find_min().map(|(_, &k)| k) }),
                    _ => unreachable!(),
                }
            }
        }
    }
    Ok(out)
}

/// First disagreement between a structure and the oracle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Divergence {
    pub variant: String,
    pub op: usize,
    pub expected: Option<i64>,
    pub got: Option<i64>,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Report {
    pub generator: String,
    pub ops: usize,
    pub answers: usize,
    pub invalid: Option<OpError>,
    pub variants: Vec<Execution>,
    pub divergence: Option<Divergence>,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.invalid.is_none() && self.divergence.is_none() && self.variants.iter().all(Execution::ok)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Compares a structure's answers with the oracle's.
pub fn first_divergence(expected: &[Answer], e: &Execution) -> Option<Divergence> {
    let variant = e.variant.clone();
    for (k, (x, y)) in expected.iter().zip(&e.answers).enumerate() {
        if x != y {
            return Some(Divergence {
                variant,
                op: x.op.min(y.op),
                expected: x.key,
                got: y.key,
                detail: format!("answer {k}: oracle {:?} at op {}, heap {:?} at op {}", x.key, x.op, y.key, y.op),
            });
        }
    }
    if expected.len() != e.answers.len() {
        let k = expected.len().min(e.answers.len());
        let op = expected.get(k).or(e.answers.get(k)).map_or(e.ops, |a| a.op);
        let why = e.error.as_ref().map_or(String::new(), |er| format!(", heap stopped: {er}"));
        return Some(Divergence {
            variant,
            op,
            expected: expected.get(k).and_then(|a| a.key),
            got: e.answers.get(k).and_then(|a| a.key),
            detail: format!("oracle gave {} answers, heap {}{why}", expected.len(), e.answers.len()),
        });
    }
    None
}

/// Runs `w` on the oracle and on every configuration, in parallel when
/// `parallel` is set, and reports the first divergence.
pub fn differential_run(w: &Workload, configs: &[ExecConfig], parallel: bool) -> Report {
    let mut report = Report { generator: w.meta.generator.clone(), ops: w.len(), ..Report::default() };
    let expected = match oracle_answers(w) {
        Ok(a) => a,
        Err(e) => {
            report.invalid = Some(e);
            return report;
        }
    };
    report.answers = expected.len();
    report.variants = if parallel {
        std::thread::scope(|sc| {
            let hs: Vec<_> = configs.iter().map(|&c| sc.spawn(move || execute(w, c))).collect();
            hs.into_iter().map(|h| h.join().expect("variant thread")).collect()
        })
    } else {
        configs.iter().map(|&c| execute(w, c)).collect()
    };
    report.divergence = report.variants.iter().find_map(|e| first_divergence(&expected, e));
    report
}

/// Rebuild settings with the contraction method, for tests that check it
/// makes no comparisons.
pub fn contract_rebuild(c: f64) -> RebuildConfig {
    RebuildConfig { c, method: RebuildMethod::Contract, trigger: RebuildTrigger::DeleteOnly }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::workload::{gen_binomial, gen_random, Mix};

    const TWELVE: &str = "\
makeheap h
insert h a 14
insert h b 11
insert h c 5
insert h d 9
insert h e 0
insert h f 8
insert h g 10
insert h i 3
insert h j 6
insert h k 12
insert h l 13
insert h m 4
findmin h
deletemin h
findmin h
";

    #[test]
    fn verify_parsing() {
        assert_eq!("off".parse::<Verify>().unwrap(), Verify::Off);
        assert_eq!("full".parse::<Verify>().unwrap(), Verify::Full);
        assert_eq!("stride 7".parse::<Verify>().unwrap(), Verify::Stride(7));
        assert_eq!("stride=7".parse::<Verify>().unwrap(), Verify::Stride(7));
        assert_eq!("3".parse::<Verify>().unwrap(), Verify::Stride(3));
        assert!("stride 0".parse::<Verify>().is_err());
        assert_eq!(Verify::auto(10_000), Verify::Full);
        assert_eq!(Verify::auto(10_001), Verify::Stride(100));
    }

    #[test]
    fn small_script_answers() {
        let w = Workload::parse(TWELVE).unwrap();
        let a = oracle_answers(&w).unwrap();
        let keys: Vec<_> = a.iter().map(|x| x.key).collect();
        assert_eq!(keys, vec![Some(0), Some(0), Some(3)]);
        let cfgs: Vec<_> = VariantConfig::STANDARD.iter().map(|&v| ExecConfig::new(v).verify(Verify::Full)).collect();
        let r = differential_run(&w, &cfgs, false);
        assert!(r.ok(), "{}", r.to_json());
        assert_eq!(r.variants[0].stats.unranked_links, 11);
    }

    #[test]
    fn invalid_scripts_are_reported() {
        let w = Workload::parse("makeheap h\ninsert h a 5\ndecrease h a 7\n").unwrap();
        assert_eq!(oracle_answers(&w).unwrap_err().op, 2);
        let w = Workload::parse("insert h a 5\n").unwrap();
        assert!(oracle_answers(&w).unwrap_err().error.contains("does not exist"));
        let e = execute(&w, ExecConfig::new(VariantConfig::TWO_PARENT));
        assert_eq!(e.error.unwrap().op, 0);
    }

    #[test]
    fn random_runs_agree_with_checks() {
        let w = gen_random(3000, 5, Mix { delete: 0.05, find_min: 0.05, ..Mix::default() });
        let cfgs: Vec<_> = VariantConfig::STANDARD.iter().map(|&v| ExecConfig::new(v).verify(Verify::Full)).collect();
        let r = differential_run(&w, &cfgs, true);
        assert!(r.ok(), "{:?} {:?}", r.divergence, r.variants.iter().map(|e| e.violations.first()).collect::<Vec<_>>());
        assert!(r.variants.iter().all(|e| e.checks_run == 3002 || e.checks_run == 3001));
    }

    #[test]
    fn divergence_is_located() {
        let w = Workload::parse(TWELVE).unwrap();
        let mut e = execute(&w, ExecConfig::new(VariantConfig::TWO_PARENT));
        let expected = oracle_answers(&w).unwrap();
        assert!(first_divergence(&expected, &e).is_none());
        e.answers[2].key = Some(4);
        let d = first_divergence(&expected, &e).unwrap();
        assert_eq!((d.op, d.expected, d.got), (15, Some(3), Some(4)));
        e.answers.pop();
        assert!(first_divergence(&expected, &e).unwrap().detail.contains("2"));
    }

    #[test]
    fn rebuilding_keeps_nodes_near_items() {
        let w = gen_random(4000, 9, Mix::default());
        for m in [RebuildMethod::Disassemble, RebuildMethod::Contract] {
            let rc = RebuildConfig { c: 2.0, method: m, trigger: RebuildTrigger::DeleteOnly };
            for v in VariantConfig::STANDARD {
                let cfg = ExecConfig::new(v).rebuild(Some(rc)).in_place_root_decrease(true).verify(Verify::Stride(10));
                let e = execute(&w, cfg);
                assert!(e.ok(), "{v} {m}: {:?}", e.violations.first());
                assert_eq!(e.deletes_over_3n, 0, "{v} {m}");
                assert_eq!(e.rebuilds.not_compact, 0);
                if m == RebuildMethod::Contract {
                    assert_eq!(e.rebuilds.comparisons, 0);
                }
            }
        }
    }

    #[test]
    fn rounds_are_measured() {
        let w = crate::workload::gen_eager_small_adversary(6, 3, crate::policy::SmallFn::Identity);
        let e = execute(&w, ExecConfig::new(w.meta.target.unwrap()));
        assert!(e.ok());
        assert_eq!(e.rounds.len(), 3);
        assert!(e.rounds.iter().all(|s| s.links() > 0));
        let b = execute(&gen_binomial(4), ExecConfig::new(VariantConfig::TWO_PARENT).verify(Verify::Full));
        assert_eq!(b.max_rank, 4);
        assert!(b.ok());
    }
}

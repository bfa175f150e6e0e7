//! The benchmark report, as JSON or CSV.
//!
//! JSON keys: `workload` (`generator`, `params`, `ops`, `predicted`),
//! `verify`, `rebuild`, `answers`, `invalid`, `divergence` and `variants`,
//! one [`VariantRow`] per structure. CSV has one line per structure with
//! the columns of [`CSV_HEADER`]; every number in it is also in the JSON.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::common::Stats;
use crate::rebuild::RebuildConfig;
use crate::verify::differential::{Divergence, Execution, OpError, OpViolation, RebuildSummary, Report};
use crate::workload::{Op, OpKind, Workload};

/// Violations listed per structure; the rest are only counted.
pub const MAX_LISTED: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WorkloadSummary {
    pub generator: String,
    pub params: BTreeMap<String, String>,
    pub ops: usize,
    pub predicted: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariantRow {
    pub variant: String,
    pub ok: bool,
    pub op_counts: BTreeMap<OpKind, u64>,
    pub stats: Stats,
    pub links: u64,
    pub max_rank: u32,
    pub max_nodes: usize,
    pub max_items: usize,
    pub max_nodes_per_item_after_delete: f64,
    pub rebuilds: RebuildSummary,
    pub rounds: usize,
    /// Mean links plus destroyed nodes per round.
    pub mean_round_work: Option<f64>,
    pub checks_run: u64,
    pub violation_count: usize,
    pub violations: Vec<OpViolation>,
    pub rank_excess_count: usize,
    pub error: Option<OpError>,
    pub wall_ms: f64,
}

impl From<&Execution> for VariantRow {
    fn from(e: &Execution) -> Self {
        let mean_round_work = (!e.rounds.is_empty()).then(|| {
            e.rounds.iter().map(|s| (s.links() + s.hollow_destroyed) as f64).sum::<f64>() / e.rounds.len() as f64
        });
        VariantRow {
            variant: e.variant.clone(),
            ok: e.ok(),
            op_counts: OpKind::ALL.iter().map(|&k| (k, e.count(k))).collect(),
            stats: e.stats,
            links: e.stats.links(),
            max_rank: e.max_rank,
            max_nodes: e.max_nodes,
            max_items: e.max_items,
            max_nodes_per_item_after_delete: e.max_nodes_per_item_after_delete,
            rebuilds: e.rebuilds,
            rounds: e.rounds.len(),
            mean_round_work,
            checks_run: e.checks_run,
            violation_count: e.violations.len(),
            violations: e.violations.iter().take(MAX_LISTED).cloned().collect(),
            rank_excess_count: if e.bounds_expected { e.rank_excess.len() } else { 0 },
            error: e.error.clone(),
            wall_ms: e.wall_ms,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub workload: WorkloadSummary,
    pub verify: String,
    pub rebuild: Option<RebuildConfig>,
    pub answers: usize,
    pub invalid: Option<OpError>,
    pub divergence: Option<Divergence>,
    pub variants: Vec<VariantRow>,
}

impl RunReport {
    pub fn new(w: &Workload, verify: String, rebuild: Option<RebuildConfig>, r: &Report) -> Self {
        RunReport {
            workload: WorkloadSummary {
                generator: w.meta.generator.clone(),
                params: w.meta.params.clone(),
                ops: w.len(),
                predicted: w.meta.predicted.clone(),
            },
            verify,
            rebuild,
            answers: r.answers,
            invalid: r.invalid.clone(),
            divergence: r.divergence.clone(),
            variants: r.variants.iter().map(VariantRow::from).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(CSV_HEADER);
        s.push('\n');
        for v in &self.variants {
            let c = |k: OpKind| v.op_counts.get(&k).copied().unwrap_or(0);
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{:.3}",
                v.variant,
                v.ok,
                self.workload.ops,
                c(OpKind::MakeHeap),
                c(OpKind::Insert),
                c(OpKind::Decrease),
                c(OpKind::Delete),
                c(OpKind::DeleteMin),
                c(OpKind::Meld),
                c(OpKind::FindMin),
                v.stats.ranked_links,
                v.stats.unranked_links,
                v.stats.comparisons,
                v.stats.hollow_destroyed,
                v.stats.nodes_created,
                v.max_rank,
                v.max_nodes,
                v.max_items,
                v.rebuilds.count,
                v.rebuilds.comparisons,
                v.rounds,
                v.mean_round_work.map_or(String::new(), |x| x.to_string()),
                v.violation_count,
                v.rank_excess_count,
                v.wall_ms,
            );
        }
        s
    }
}

pub const CSV_HEADER: &str = "variant,ok,ops,makeheap,insert,decrease,delete,deletemin,meld,findmin,\
ranked_links,unranked_links,comparisons,hollow_destroyed,nodes_created,max_rank,max_nodes,max_items,\
rebuilds,rebuild_comparisons,rounds,mean_round_work,violations,rank_excess,wall_ms";

/// One line per `findmin`: its key, or `empty`.
pub fn findmin_lines(w: &Workload, e: &Execution) -> String {
    let mut s = String::new();
    for a in &e.answers {
        if matches!(w.ops.get(a.op), Some(Op::FindMin { .. })) {
            match a.key {
                Some(k) => {
                    let _ = writeln!(s, "{k}");
                }
                None => s.push_str("empty\n"),
            }
        }
    }
    s
}

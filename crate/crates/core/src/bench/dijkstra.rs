//! Single-source shortest paths on any heap structure, and a linear-scan
//! reference.

use serde::Serialize;

use crate::common::{HeapError, ItemId, Stats};
use crate::rebuild::RebuildConfig;
use crate::variants::{VariantConfig, VariantHeap};

use super::dimacs::Graph;

/// Distance of an unreachable vertex.
pub const INF: u64 = u64::MAX;

/// Heap operations issued by one run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct OpBudget {
    pub inserts: u64,
    pub delete_mins: u64,
    pub decreases: u64,
}

impl OpBudget {
    /// At most one insert and one deletemin per vertex and one decrease
    /// per arc.
    pub fn within(&self, n: usize, m: usize) -> bool {
        self.inserts <= n as u64 && self.delete_mins <= n as u64 && self.decreases <= m as u64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DijkstraRun {
    #[serde(skip)]
    pub dist: Vec<u64>,
    pub ops: OpBudget,
    /// Heap counters; for the reference only `comparisons` is set.
    pub stats: Stats,
    pub reached: usize,
}

/// Distances from `source` using a heap of the given structure.
///
/// Panics if the run exceeds its operation budget.
pub fn dijkstra(
    g: &Graph,
    source: usize,
    variant: VariantConfig,
    rebuild: Option<RebuildConfig>,
) -> Result<DijkstraRun, HeapError> {
    assert!(source < g.vertices(), "source out of range");
    let n = g.vertices();
    let mut heap: VariantHeap<u64> = VariantHeap::new(variant)?;
    heap.set_in_place_root_decrease(rebuild.is_some());
    let mut dist = vec![INF; n];
    let mut done = vec![false; n];
    let mut ops = OpBudget::default();
    dist[source] = 0;
    heap.insert(ItemId(source as u32), 0)?;
    ops.inserts += 1;
    while let Ok((it, d)) = heap.delete_min() {
        ops.delete_mins += 1;
        if let Some(rc) = &rebuild {
            heap.maybe_rebuild(rc);
        }
        let u = it.index();
        done[u] = true;
        for (v, w) in g.out(u) {
            let nd = d.saturating_add(w);
            if done[v] || nd >= dist[v] {
                continue;
            }
            let item = ItemId(v as u32);
            if dist[v] == INF {
                heap.insert(item, nd)?;
                ops.inserts += 1;
            } else {
                heap.decrease_key(item, nd)?;
                ops.decreases += 1;
            }
            dist[v] = nd;
        }
    }
    assert!(ops.within(n, g.arcs()), "operation budget exceeded: {ops:?}");
    let reached = dist.iter().filter(|&&d| d != INF).count();
    Ok(DijkstraRun { dist, ops, stats: *heap.stats(), reached })
}

/// Dijkstra with extract-min by scanning every open vertex. Counts the
/// comparisons the scans make.
pub fn reference_dijkstra(g: &Graph, source: usize) -> DijkstraRun {
    assert!(source < g.vertices(), "source out of range");
    let n = g.vertices();
    let mut dist = vec![INF; n];
    let mut done = vec![false; n];
    let mut open: Vec<usize> = vec![source];
    let mut ops = OpBudget { inserts: 1, ..OpBudget::default() };
    let mut comparisons = 0u64;
    dist[source] = 0;
    while !open.is_empty() {
        let mut best = 0;
        for i in 1..open.len() {
            comparisons += 1;
            if dist[open[i]] < dist[open[best]] {
                best = i;
            }
        }
        let u = open.swap_remove(best);
        ops.delete_mins += 1;
        done[u] = true;
        for (v, w) in g.out(u) {
            let nd = dist[u].saturating_add(w);
            if done[v] || nd >= dist[v] {
                continue;
            }
            if dist[v] == INF {
                open.push(v);
                ops.inserts += 1;
            } else {
                ops.decreases += 1;
            }
            dist[v] = nd;
        }
    }
    let reached = dist.iter().filter(|&&d| d != INF).count();
    DijkstraRun { dist, ops, stats: Stats { comparisons, ..Stats::default() }, reached }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::random_graph;

    #[test]
    fn path_graph() {
        let g = Graph::parse("p sp 4 2\na 1 2 4\na 2 3 5\n").unwrap();
        let r = dijkstra(&g, 0, VariantConfig::TWO_PARENT, None).unwrap();
        assert_eq!(r.dist, vec![0, 4, 9, INF]);
        assert_eq!(r.reached, 3);
        assert_eq!(reference_dijkstra(&g, 0).dist, r.dist);
    }

    #[test]
    fn decreases_happen_and_match_reference() {
        let g = random_graph(400, 4000, 1000, 11);
        let want = reference_dijkstra(&g, 0);
        for v in VariantConfig::STANDARD {
            let r = dijkstra(&g, 0, v, None).unwrap();
            assert_eq!(r.dist, want.dist, "{v}");
            assert!(r.ops.decreases > 0);
            // ties can settle vertices in another order, so only the
            // vertex counts are fixed
            assert_eq!((r.ops.inserts, r.ops.delete_mins), (want.ops.inserts, want.ops.delete_mins));
        }
        let rc = RebuildConfig::default();
        let r = dijkstra(&g, 0, VariantConfig::MULTI_ROOT, Some(rc)).unwrap();
        assert_eq!(r.dist, want.dist);
    }
}

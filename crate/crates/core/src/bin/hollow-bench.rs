//! `hollow-bench`: run workloads and shortest paths against heap structures.
//!
//! Exit codes: 0 ok, 1 usage or input error, 2 verification failure,
//! 3 divergence from the oracle or the reference distances.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hollow_heap::bench::{dijkstra, findmin_lines, random_graph, reference_dijkstra, Graph, OpBudget, RunReport, INF};
use hollow_heap::verify::differential::{execute, Report};
use hollow_heap::verify::{differential_run, ExecConfig, Verify};
use hollow_heap::workload::{generate, Workload};
use hollow_heap::{LinkOrder, RebuildConfig, RebuildMethod, RebuildTrigger, Stats, VariantConfig};

const USAGE: u8 = 1;
const VERIFY_FAILED: u8 = 2;
const DIVERGED: u8 = 3;

#[derive(Parser)]
#[command(name = "hollow-bench", version, about = "Benchmark and verify hollow heap variants")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a workload on one or more structures and compare with the oracle.
    Run(RunArgs),
    /// Write a generated workload.
    Gen(GenArgs),
    /// Single-source shortest paths on a DIMACS or random graph.
    Dijkstra(DijkstraArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Source {
    /// Workload file.
    #[arg(long, conflicts_with = "gen", required_unless_present = "gen")]
    workload: Option<PathBuf>,
    /// Generator: binomial, eager, naive, tl, rl or random.
    #[arg(long)]
    gen: Option<String>,
    /// Generator parameters, `k=v[,k=v...]`; may repeat.
    #[arg(long, requires = "gen")]
    params: Vec<String>,
    /// Seed for the random generator.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct RebuildArgs {
    /// Rebuild when N > c n.
    #[arg(long = "rebuild-c")]
    c: Option<f64>,
    #[arg(long = "rebuild-method", default_value = "disassemble")]
    method: String,
    #[arg(long = "rebuild-trigger", default_value = "delete-only")]
    trigger: String,
}

impl RebuildArgs {
    fn config(&self) -> Result<Option<RebuildConfig>> {
        let Some(c) = self.c else { return Ok(None) };
        let method: RebuildMethod = self.method.parse()?;
        let trigger: RebuildTrigger = self.trigger.parse()?;
        Ok(Some(RebuildConfig::new(c, method, trigger)?))
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    source: Source,
    /// `mode:family:regime` or a mode name; may repeat or be comma separated.
    /// Defaults to the workload's target, else two_parent.
    #[arg(long, value_delimiter = ',')]
    variant: Vec<String>,
    /// off, full or `stride N`; defaults to full up to 10^4 ops, else stride 100.
    #[arg(long, num_args = 1..=2)]
    verify: Vec<String>,
    #[command(flatten)]
    rebuild: RebuildArgs,
    /// In-place key decrease at roots (multi-root only).
    #[arg(long)]
    in_place_root_decrease: bool,
    /// Link order hook; defaults to the workload's.
    #[arg(long)]
    link_order: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    out: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Write one line per findmin here (`-` for stdout).
    #[arg(long)]
    results: Option<PathBuf>,
    /// Run the structures on separate threads.
    #[arg(long)]
    parallel_variants: bool,
    /// Skip the oracle comparison.
    #[arg(long)]
    no_oracle: bool,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    source: Source,
    /// Output file; the metadata goes next to it as `<file>.meta.json`.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct DijkstraArgs {
    /// DIMACS `.gr` file.
    #[arg(long, conflicts_with = "random")]
    graph: Option<PathBuf>,
    /// Random graph `n,m`.
    #[arg(long, required_unless_present = "graph")]
    random: Option<String>,
    #[arg(long, default_value_t = 1000)]
    max_weight: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Source vertex, numbered from 1.
    #[arg(long, default_value_t = 1)]
    source: usize,
    #[arg(long, value_delimiter = ',', default_value = "two_parent")]
    variant: Vec<String>,
    #[command(flatten)]
    rebuild: RebuildArgs,
    /// Skip the linear-scan reference.
    #[arg(long)]
    no_reference: bool,
    /// Write `vertex distance` lines here (`-` for stdout).
    #[arg(long)]
    distances: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    out: Format,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let r = match cli.cmd {
        Cmd::Run(a) => run(a),
        Cmd::Gen(a) => gen(a),
        Cmd::Dijkstra(a) => shortest_paths(a),
    };
    match r {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(USAGE)
        }
    }
}

fn parse_params(raw: &[String]) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for part in raw.iter().flat_map(|s| s.split(',')).filter(|p| !p.trim().is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| anyhow!("expected k=v, got `{part}`"))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    // `mix` carries its own commas: `mix=insert=0.5;deletemin=0.5`
    if let Some(m) = out.get_mut("mix") {
        *m = m.replace(';', ",");
    }
    Ok(out)
}

fn load(src: &Source) -> Result<Workload> {
    if let Some(path) = &src.workload {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut w = Workload::parse(&text).with_context(|| format!("parsing {}", path.display()))?;
        let mut meta = path.clone().into_os_string();
        meta.push(".meta.json");
        if let Ok(json) = fs::read_to_string(&meta) {
            w.meta = serde_json::from_str(&json).with_context(|| format!("parsing {}", Path::new(&meta).display()))?;
        }
        return Ok(w);
    }
    let name = src.gen.as_deref().expect("clap requires a source");
    generate(name, &parse_params(&src.params)?, src.seed).map_err(|e| anyhow!(e))
}

fn write_to(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
        }
        Some(p) if p == Path::new("-") => {
            std::io::stdout().write_all(text.as_bytes())?;
        }
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
    }
    Ok(())
}

fn variants(names: &[String], w: Option<&Workload>) -> Result<Vec<VariantConfig>> {
    if names.is_empty() {
        return Ok(vec![w.and_then(|w| w.meta.target).unwrap_or(VariantConfig::TWO_PARENT)]);
    }
    names.iter().map(|v| v.trim().parse::<VariantConfig>().map_err(|e| anyhow!(e))).collect()
}

fn run(a: RunArgs) -> Result<u8> {
    let w = load(&a.source)?;
    let verify = match a.verify.as_slice() {
        [] => Verify::auto(w.len()),
        parts => parts.join(" ").parse().map_err(|e: String| anyhow!(e))?,
    };
    let rebuild = a.rebuild.config()?;
    let link_order: Option<LinkOrder> = a.link_order.as_deref().map(str::parse).transpose()?;
    let cfgs: Vec<ExecConfig> = variants(&a.variant, Some(&w))?
        .into_iter()
        .map(|v| {
            let mut c =
                ExecConfig::new(v).verify(verify).rebuild(rebuild).in_place_root_decrease(a.in_place_root_decrease);
            c.link_order = link_order;
            c
        })
        .collect();
    let report = if a.no_oracle {
        Report {
            generator: w.meta.generator.clone(),
            ops: w.len(),
            variants: cfgs.iter().map(|&c| execute(&w, c)).collect(),
            ..Report::default()
        }
    } else {
        differential_run(&w, &cfgs, a.parallel_variants)
    };
    if let (Some(path), Some(first)) = (&a.results, report.variants.first()) {
        write_to(Some(path), &findmin_lines(&w, first))?;
    }
    let out = RunReport::new(&w, verify.to_string(), rebuild, &report);
    let text = match a.out {
        Format::Json => out.to_json(),
        Format::Csv => out.to_csv(),
    };
    write_to(a.report.as_deref(), &text)?;
    if let Some(e) = &report.invalid {
        eprintln!("error: invalid workload: {e}");
        return Ok(USAGE);
    }
    if let Some(d) = &report.divergence {
        eprintln!("divergence on {} at op {}: {}", d.variant, d.op, d.detail);
        return Ok(DIVERGED);
    }
    for e in &report.variants {
        if let Some(err) = &e.error {
            eprintln!("{}: heap rejected {err}", e.variant);
            return Ok(USAGE);
        }
        if !e.ok() {
            eprintln!("{}: {} violations", e.variant, e.violations.len() + e.rank_excess.len());
            for v in e.violations.iter().take(5) {
                eprintln!("  op {}: {}", v.op, v.violation);
            }
            return Ok(VERIFY_FAILED);
        }
    }
    Ok(0)
}

fn gen(a: GenArgs) -> Result<u8> {
    let w = load(&a.source)?;
    match &a.output {
        Some(p) => {
            fs::write(p, w.to_text()).with_context(|| format!("writing {}", p.display()))?;
            let mut meta = p.clone().into_os_string();
            meta.push(".meta.json");
            fs::write(&meta, w.meta_json() + "\n")?;
        }
        None => write_to(None, &w.to_text())?,
    }
    Ok(0)
}

#[derive(Serialize)]
struct GraphSummary {
    vertices: usize,
    arcs: usize,
    source: usize,
    reached: usize,
}

#[derive(Serialize)]
struct PathRow {
    variant: String,
    ops: OpBudget,
    stats: Stats,
    matches_reference: Option<bool>,
    wall_ms: f64,
}

#[derive(Serialize)]
struct PathReport {
    graph: GraphSummary,
    reference: Option<PathRow>,
    variants: Vec<PathRow>,
}

fn shortest_paths(a: DijkstraArgs) -> Result<u8> {
    let g = match &a.graph {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Graph::parse(&text).with_context(|| format!("parsing {}", p.display()))?
        }
        None => {
            let spec = a.random.as_deref().expect("clap requires a graph");
            let (n, m) = spec
                .split_once(',')
                .and_then(|(n, m)| Some((n.trim().parse::<usize>().ok()?, m.trim().parse::<usize>().ok()?)))
                .ok_or_else(|| anyhow!("expected --random n,m, got `{spec}`"))?;
            if n < 2 {
                bail!("a random graph needs at least 2 vertices");
            }
            random_graph(n, m, a.max_weight.max(1), a.seed)
        }
    };
    if a.source == 0 || a.source > g.vertices() {
        bail!("source {} out of range 1..={}", a.source, g.vertices());
    }
    let s = a.source - 1;
    let rebuild = a.rebuild.config()?;
    let reference = (!a.no_reference).then(|| {
        let t = Instant::now();
        let r = reference_dijkstra(&g, s);
        (r, t.elapsed().as_secs_f64() * 1e3)
    });
    let mut rows = Vec::new();
    let mut first_dist = None;
    let mut mismatch = false;
    for v in variants(&a.variant, None)? {
        let t = Instant::now();
        let r = dijkstra(&g, s, v, rebuild)?;
        let wall_ms = t.elapsed().as_secs_f64() * 1e3;
        let matches = reference.as_ref().map(|(x, _)| x.dist == r.dist);
        mismatch |= matches == Some(false);
        rows.push(PathRow { variant: v.to_string(), ops: r.ops, stats: r.stats, matches_reference: matches, wall_ms });
        first_dist.get_or_insert(r.dist);
    }
    let dist = first_dist.expect("at least one variant");
    if let Some(p) = &a.distances {
        let mut text = String::with_capacity(dist.len() * 8);
        for (i, d) in dist.iter().enumerate() {
            if *d == INF {
                text.push_str(&format!("{} inf\n", i + 1));
            } else {
                text.push_str(&format!("{} {d}\n", i + 1));
            }
        }
        write_to(Some(p), &text)?;
    }
    let report = PathReport {
        graph: GraphSummary {
            vertices: g.vertices(),
            arcs: g.arcs(),
            source: a.source,
            reached: dist.iter().filter(|&&d| d != INF).count(),
        },
        reference: reference.map(|(r, wall_ms)| PathRow {
            variant: "linear-scan".into(),
            ops: r.ops,
            stats: r.stats,
            matches_reference: None,
            wall_ms,
        }),
        variants: rows,
    };
    let text = match a.out {
        Format::Json => serde_json::to_string_pretty(&report)? + "\n",
        Format::Csv => {
            let mut s = String::from(
                "variant,vertices,arcs,inserts,delete_mins,decreases,ranked_links,unranked_links,comparisons,hollow_destroyed,matches_reference,wall_ms\n",
            );
            for r in report.reference.iter().chain(&report.variants) {
                s.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{},{},{:.3}\n",
                    r.variant,
                    report.graph.vertices,
                    report.graph.arcs,
                    r.ops.inserts,
                    r.ops.delete_mins,
                    r.ops.decreases,
                    r.stats.ranked_links,
                    r.stats.unranked_links,
                    r.stats.comparisons,
                    r.stats.hollow_destroyed,
                    r.matches_reference.map_or(String::new(), |b| b.to_string()),
                    r.wall_ms
                ));
            }
            s
        }
    };
    write_to(None, &text)?;
    if mismatch {
        eprintln!("distances differ from the reference");
        return Ok(DIVERGED);
    }
    Ok(0)
}

//! Command-line front end: generate graphs, run the pipelines, verify them
//! against the sequential oracles, and sweep round/space scaling.
//!
//! Exit codes: 0 ok, 1 usage, 2 verification mismatch, 3 sampling abort,
//! 4 I/O.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;

use clap::error::ErrorKind as ClapErrorKind;
use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use conn2::conn2::{biconnectivity, bridges};
use conn2::dfs::leaf_sampling_dfs;
use conn2::forest::compute_depths;
use conn2::graph::{diameter_exact, generate, parse_edge_list, Graph, GraphKind};
use conn2::mpc::{configure, MachineConfig, RoundLedger};
use conn2::oracles::{
    brute_lca, brute_rmq, hopcroft_tarjan_blocks, partitions_equal, sequential_dfs,
    tarjan_bridges,
};
use conn2::rmq::{rmq_batch, rmq_preprocess};
use conn2::sf::{spanning_forest, strategy, strategy_names};
use conn2::tree::{build_doubling, compress, lca_batch};
use conn2::{Error, Result, Vertex};

#[derive(Parser)]
#[command(name = "conn2", about = "connectivity pipelines on a round-charged machine model")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a generated edge list.
    Gen {
        /// generator spec KIND:N, e.g. path:100 or gnm200:100
        #[arg(long = "gen")]
        spec: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an algorithm and write its output plus a metrics record.
    Run(Job),
    /// Run an algorithm and its oracle; exit 2 with a counterexample on mismatch.
    Verify(Job),
    /// Sweep a doubling schedule of sizes and emit (n, D, rounds, peak_space) rows.
    Bench(Job),
}

#[derive(Args)]
struct Job {
    /// bridges | biconn | dfs | lca | rmq | components
    #[arg(long)]
    algo: String,
    /// generator spec KIND:N (alternative to --input)
    #[arg(long = "gen")]
    spec: Option<String>,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 0.5)]
    delta: f64,
    #[arg(long, default_value_t = 0.0)]
    gamma: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    metrics: Option<PathBuf>,
    /// spanning forest strategy
    #[arg(long, default_value = "bfs_layered")]
    method: String,
}

struct JobCtx {
    config: MachineConfig,
    s: usize,
    seed: u64,
    method: String,
}

/// One runnable algorithm behind the common dispatch table.
trait Algorithm: Sync {
    fn name(&self) -> &'static str;
    fn run(&self, g: &Graph, ctx: &JobCtx, out: &mut dyn Write) -> Result<RoundLedger>;
    /// `None` means the oracle agrees; `Some` carries a counterexample line.
    fn verify(&self, g: &Graph, ctx: &JobCtx) -> Result<Option<String>>;
}

struct BridgesAlgo;
struct BiconnAlgo;
struct DfsAlgo;
struct LcaAlgo;
struct RmqAlgo;
struct ComponentsAlgo;

const ALGORITHMS: &[&dyn Algorithm] = &[
    &BridgesAlgo,
    &BiconnAlgo,
    &DfsAlgo,
    &LcaAlgo,
    &RmqAlgo,
    &ComponentsAlgo,
];

impl Algorithm for BridgesAlgo {
    fn name(&self) -> &'static str {
        "bridges"
    }

    fn run(&self, g: &Graph, ctx: &JobCtx, out: &mut dyn Write) -> Result<RoundLedger> {
        let mut ledger = RoundLedger::default();
        for (u, v) in bridges(g, ctx.s, &ctx.method, ctx.seed, &mut ledger)? {
            writeln!(out, "{u} {v}")?;
        }
        Ok(ledger)
    }

    fn verify(&self, g: &Graph, ctx: &JobCtx) -> Result<Option<String>> {
        let mut ledger = RoundLedger::default();
        let got: std::collections::BTreeSet<_> = bridges(g, ctx.s, &ctx.method, ctx.seed, &mut ledger)?
            .into_iter()
            .collect();
        let want = tarjan_bridges(g);
        if got == want {
            return Ok(None);
        }
        let diff = got
            .symmetric_difference(&want)
            .next()
            .copied()
            .expect("nonequal sets differ somewhere");
        Ok(Some(format!(
            "bridge mismatch at edge {} {}: got {}, oracle {}",
            diff.0,
            diff.1,
            got.contains(&diff),
            want.contains(&diff)
        )))
    }
}

impl Algorithm for BiconnAlgo {
    fn name(&self) -> &'static str {
        "biconn"
    }

    fn run(&self, g: &Graph, ctx: &JobCtx, out: &mut dyn Write) -> Result<RoundLedger> {
        let mut ledger = RoundLedger::default();
        let res = biconnectivity(g, ctx.s, &ctx.method, ctx.seed, &mut ledger)?;
        res.coloring.write(out)?;
        for v in &res.cut_vertices {
            writeln!(out, "cut {v}")?;
        }
        Ok(ledger)
    }

    fn verify(&self, g: &Graph, ctx: &JobCtx) -> Result<Option<String>> {
        let mut ledger = RoundLedger::default();
        let res = biconnectivity(g, ctx.s, &ctx.method, ctx.seed, &mut ledger)?;
        let blocks = hopcroft_tarjan_blocks(g);
        if partitions_equal(&res.coloring, &blocks) {
            return Ok(None);
        }
        Ok(Some(format!(
            "block partition mismatch: {} color classes vs {} oracle blocks",
            res.coloring.blocks().len(),
            blocks.len()
        )))
    }
}

/// Spanning tree of a connected input, rooted for the tree algorithms.
fn rooted_tree(g: &Graph, method: &str, ledger: &mut RoundLedger) -> Result<conn2::forest::ParentMap> {
    let (p, _) = spanning_forest(g, method, ledger);
    p.single_root()?;
    Ok(p)
}

impl Algorithm for DfsAlgo {
    fn name(&self) -> &'static str {
        "dfs"
    }

    fn run(&self, g: &Graph, ctx: &JobCtx, out: &mut dyn Write) -> Result<RoundLedger> {
        let mut ledger = RoundLedger::default();
        let p = rooted_tree(g, &ctx.method, &mut ledger)?;
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
        let seq = leaf_sampling_dfs(&p, ctx.s, &mut rng, &mut ledger)?;
        for v in &seq.entries {
            writeln!(out, "{v}")?;
        }
        Ok(ledger)
    }

    fn verify(&self, g: &Graph, ctx: &JobCtx) -> Result<Option<String>> {
        let mut ledger = RoundLedger::default();
        let p = rooted_tree(g, &ctx.method, &mut ledger)?;
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
        let got = leaf_sampling_dfs(&p, ctx.s, &mut rng, &mut ledger)?;
        let want = sequential_dfs(&p)?;
        for (i, (a, b)) in got.entries.iter().zip(&want.entries).enumerate() {
            if a != b {
                return Ok(Some(format!("sequence diverges at index {i}: got {a}, oracle {b}")));
            }
        }
        if got.entries.len() != want.entries.len() {
            return Ok(Some(format!(
                "sequence length {} != oracle length {}",
                got.entries.len(),
                want.entries.len()
            )));
        }
        Ok(None)
    }
}

/// Seeded query workload: distinct vertex pairs for lca, valid wide ranges
/// for rmq. Queries derive from the seed only, so reruns are byte-identical.
fn lca_workload(n: usize, seed: u64) -> Vec<(Vertex, Vertex)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xa5a5_a5a5);
    let mut qs = Vec::new();
    while qs.len() < 1000.min(2 * n) {
        let u = rng.gen_range(1..=n) as Vertex;
        let v = rng.gen_range(1..=n) as Vertex;
        if u != v {
            qs.push((u, v));
        }
    }
    qs
}

impl Algorithm for LcaAlgo {
    fn name(&self) -> &'static str {
        "lca"
    }

    fn run(&self, g: &Graph, ctx: &JobCtx, out: &mut dyn Write) -> Result<RoundLedger> {
        let mut ledger = RoundLedger::default();
        let p = rooted_tree(g, &ctx.method, &mut ledger)?;
        let dep = compute_depths(&p, &mut ledger);
        let ct = compress(&p, &dep, &mut ledger);
        let table = build_doubling(&ct, &mut ledger);
        let qs = lca_workload(g.n, ctx.seed);
        let answers = lca_batch(&p, &dep, &ct, &table, &qs, &mut ledger)?;
        for (u, v) in qs {
            writeln!(out, "{u} {v} {}", answers[&(u, v)].lca)?;
        }
        Ok(ledger)
    }

    fn verify(&self, g: &Graph, ctx: &JobCtx) -> Result<Option<String>> {
        let mut ledger = RoundLedger::default();
        let p = rooted_tree(g, &ctx.method, &mut ledger)?;
        let dep = compute_depths(&p, &mut ledger);
        let ct = compress(&p, &dep, &mut ledger);
        let table = build_doubling(&ct, &mut ledger);
        let qs = lca_workload(g.n, ctx.seed);
        let answers = lca_batch(&p, &dep, &ct, &table, &qs, &mut ledger)?;
        for (u, v) in qs {
            let want = brute_lca(&p, u, v);
            if answers[&(u, v)].lca != want {
                return Ok(Some(format!(
                    "lca({u}, {v}) = {}, oracle {want}",
                    answers[&(u, v)].lca
                )));
            }
        }
        Ok(None)
    }
}

/// Array workload for rmq: vertex depths on the spanning tree, queried over
/// seeded wide ranges.
fn rmq_workload(
    g: &Graph,
    ctx: &JobCtx,
    ledger: &mut RoundLedger,
) -> Result<(Vec<i64>, Vec<(usize, usize)>)> {
    let p = rooted_tree(g, &ctx.method, ledger)?;
    let dep = compute_depths(&p, ledger);
    let a: Vec<i64> = (1..=g.n).map(|v| dep.depth_of(v as Vertex) as i64).collect();
    let t = if g.n <= 1 { 1 } else { (usize::BITS - (g.n - 1).leading_zeros()) as usize };
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed ^ 0x5a5a_5a5a);
    let mut qs = Vec::new();
    for _ in 0..200 {
        if g.n < t + 2 {
            break;
        }
        let l = rng.gen_range(1..=g.n - t - 1);
        let r = rng.gen_range(l + t..=g.n);
        qs.push((l, r));
    }
    Ok((a, qs))
}

impl Algorithm for RmqAlgo {
    fn name(&self) -> &'static str {
        "rmq"
    }

    fn run(&self, g: &Graph, ctx: &JobCtx, out: &mut dyn Write) -> Result<RoundLedger> {
        let mut ledger = RoundLedger::default();
        let (a, qs) = rmq_workload(g, ctx, &mut ledger)?;
        let idx = rmq_preprocess(&a, &mut ledger)?;
        let answers = rmq_batch(&idx, &qs, &mut ledger)?;
        for ((l, r), m) in qs.into_iter().zip(answers) {
            writeln!(out, "{l} {r} {m}")?;
        }
        Ok(ledger)
    }

    fn verify(&self, g: &Graph, ctx: &JobCtx) -> Result<Option<String>> {
        let mut ledger = RoundLedger::default();
        let (a, qs) = rmq_workload(g, ctx, &mut ledger)?;
        let idx = rmq_preprocess(&a, &mut ledger)?;
        let answers = rmq_batch(&idx, &qs, &mut ledger)?;
        for ((l, r), m) in qs.into_iter().zip(answers) {
            let want = brute_rmq(&a, l, r);
            if m != want {
                return Ok(Some(format!("rmq({l}, {r}) = {m}, oracle {want}")));
            }
        }
        Ok(None)
    }
}

impl Algorithm for ComponentsAlgo {
    fn name(&self) -> &'static str {
        "components"
    }

    fn run(&self, g: &Graph, ctx: &JobCtx, out: &mut dyn Write) -> Result<RoundLedger> {
        let mut ledger = RoundLedger::default();
        let (_, labels) = spanning_forest(g, &ctx.method, &mut ledger);
        for v in 1..=g.n {
            writeln!(out, "{v} {}", labels.label_of(v as Vertex))?;
        }
        Ok(ledger)
    }

    fn verify(&self, g: &Graph, ctx: &JobCtx) -> Result<Option<String>> {
        let mut ledger = RoundLedger::default();
        let (_, labels) = spanning_forest(g, &ctx.method, &mut ledger);
        // oracle: BFS labeling over the adjacency lists
        let adj = g.adjacency();
        let mut truth = vec![0 as Vertex; g.n + 1];
        for start in 1..=g.n {
            if truth[start] != 0 {
                continue;
            }
            let mut queue = std::collections::VecDeque::from([start]);
            truth[start] = start as Vertex;
            while let Some(v) = queue.pop_front() {
                for &w in &adj[v] {
                    if truth[w as usize] == 0 {
                        truth[w as usize] = start as Vertex;
                        queue.push_back(w as usize);
                    }
                }
            }
        }
        for u in 1..=g.n {
            for v in u + 1..=g.n {
                let same_got = labels.label_of(u as Vertex) == labels.label_of(v as Vertex);
                let same_want = truth[u] == truth[v];
                if same_got != same_want {
                    return Ok(Some(format!(
                        "vertices {u} and {v}: same component {same_got}, oracle {same_want}"
                    )));
                }
            }
        }
        Ok(None)
    }
}

fn algorithm(name: &str) -> Result<&'static dyn Algorithm> {
    ALGORITHMS
        .iter()
        .copied()
        .find(|a| a.name() == name)
        .ok_or_else(|| Error::UnknownKind(format!("algorithm '{name}'")))
}

fn parse_spec(spec: &str) -> Result<(GraphKind, usize)> {
    let (kind, n) = spec
        .split_once(':')
        .ok_or_else(|| Error::UnknownKind(format!("generator spec '{spec}', expected KIND:N")))?;
    let n: usize = n
        .parse()
        .map_err(|_| Error::UnknownKind(format!("generator size '{n}'")))?;
    Ok((kind.parse()?, n))
}

fn load_graph(job: &Job) -> Result<Graph> {
    match (&job.spec, &job.input) {
        (Some(spec), None) => {
            let (kind, n) = parse_spec(spec)?;
            generate(kind, n, job.seed)
        }
        (None, Some(path)) => {
            let file = File::open(path)?;
            parse_edge_list(BufReader::new(file))
        }
        _ => Err(Error::BadConfig(
            "exactly one of --gen and --input is required".into(),
        )),
    }
}

fn sink(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn write_metrics(job: &Job, ctx: &JobCtx, ledger: &mut RoundLedger) -> Result<()> {
    // audit the peak round's volume spread evenly over the machines
    let per_machine = ledger.peak_space.div_ceil(ctx.config.machine_count);
    let loads = vec![per_machine; ctx.config.machine_count as usize];
    ledger.audit_load(&ctx.config, &loads);
    if let Some(path) = &job.metrics {
        let report = ledger.report();
        let mut f = BufWriter::new(File::create(path)?);
        serde_json::to_writer_pretty(&mut f, &report).map_err(std::io::Error::from)?;
        writeln!(f)?;
    }
    Ok(())
}

fn job_context(job: &Job) -> Result<JobCtx> {
    strategy(&job.method).ok_or_else(|| {
        Error::BadConfig(format!(
            "unknown method '{}', available: {}",
            job.method,
            strategy_names().join(", ")
        ))
    })?;
    Ok(JobCtx {
        config: configure(1, 0.5, 0.0)?, // replaced once the graph is known
        s: 0,
        seed: job.seed,
        method: job.method.clone(),
    })
}

fn run_job(job: &Job, verify: bool) -> Result<i32> {
    let algo = algorithm(&job.algo)?;
    let mut ctx = job_context(job)?;
    let g = load_graph(job)?;
    ctx.config = configure(g.words().max(1), job.delta, job.gamma)?;
    ctx.s = ctx.config.local_capacity as usize;
    if verify {
        match algo.verify(&g, &ctx)? {
            None => {
                println!("verify {}: ok", algo.name());
                Ok(0)
            }
            Some(counterexample) => {
                eprintln!("verify {}: {counterexample}", algo.name());
                Ok(2)
            }
        }
    } else {
        let mut out = sink(&job.out)?;
        let mut ledger = algo.run(&g, &ctx, &mut out)?;
        out.flush()?;
        drop(out);
        write_metrics(job, &ctx, &mut ledger)?;
        Ok(0)
    }
}

fn run_bench(job: &Job) -> Result<i32> {
    let algo = algorithm(&job.algo)?;
    let kind: GraphKind = match &job.spec {
        Some(spec) => spec.split(':').next().unwrap().parse()?,
        None => GraphKind::Path,
    };
    let mut ctx = job_context(job)?;
    let mut out = sink(&job.out)?;
    writeln!(out, "n diameter rounds peak_space")?;
    for k in 4..=14u32 {
        let n = 1usize << k;
        let g = generate(kind, n, job.seed)?;
        ctx.config = configure(g.words().max(1), job.delta, job.gamma)?;
        ctx.s = ctx.config.local_capacity as usize;
        let d = diameter_exact(&g);
        let ledger = algo.run(&g, &ctx, &mut std::io::sink())?;
        writeln!(out, "{n} {d} {} {}", ledger.rounds_charged, ledger.peak_space)?;
    }
    out.flush()?;
    Ok(0)
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.cmd {
        Cmd::Gen { spec, seed, out } => {
            let (kind, n) = parse_spec(&spec)?;
            let g = generate(kind, n, seed)?;
            let mut w = sink(&out)?;
            g.write_edge_list(&mut w)?;
            w.flush()?;
            Ok(0)
        }
        Cmd::Run(job) => run_job(&job, false),
        Cmd::Verify(job) => run_job(&job, true),
        Cmd::Bench(job) => run_bench(&job),
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::SamplingFail { .. } => 3,
        Error::Io(_) | Error::Parse { .. } => 4,
        _ => 1,
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ClapErrorKind::DisplayHelp | ClapErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match dispatch(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(exit_code(&e));
        }
    }
}

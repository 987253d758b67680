use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use graphfactor::census::{read_catalog, run_census, verify_catalog, write_catalog, CensusOptions};
use graphfactor::graph6::parse_edge_list;
use graphfactor::search::{dedup_pairs, factor_search, is_factorizable, SearchConfig, SearchMode};
use graphfactor::spectral::{
    eigen_sym, format_significant, lambda_max, perron, spectrum_is_symmetric, DEFAULT_SEED, DEFAULT_TOL,
};
use graphfactor::{
    adjacency, construct, decode_graph6, encode_graph6, screen, validate_factorization, Construction, Factorization,
    Graph, Verdict,
};

#[derive(Parser)]
#[command(name = "graphfactor", version, about = "Factor graphs as products of adjacency matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide factorizability and list witnesses.
    Factor {
        #[command(flatten)]
        input: GraphInput,
        /// Enumerate every witness instead of stopping at the first.
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = 100_000_000)]
        node_limit: u64,
        #[arg(long)]
        include_trivial: bool,
        #[arg(long)]
        json: bool,
    },
    /// Run the necessary-condition screen.
    Check {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        json: bool,
    },
    /// Spectrum, spectral radius and Perron vector.
    Spectral {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Build one of the explicit factorization families.
    Construct {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, conflicts_with = "graph6")]
        n: Option<usize>,
        #[arg(long)]
        graph6: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Exhaustive run over all graphs of one order, written as JSON Lines.
    Census {
        #[arg(long)]
        order: usize,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads (default: all logical cores).
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = 100_000_000)]
        node_limit: u64,
        /// Record theorem violations instead of aborting.
        #[arg(long)]
        keep_going: bool,
        /// Permit order 8 (12346 classes, long running).
        #[arg(long)]
        allow_order_8: bool,
    },
    /// Recompute every assertion over a catalog.
    Verify {
        #[arg(long)]
        catalog: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct GraphInput {
    #[arg(long, required_unless_present = "edges", conflicts_with = "edges")]
    graph6: Option<String>,
    /// Edge list file, one `u v` pair per line.
    #[arg(long)]
    edges: Option<PathBuf>,
    /// Vertex count for --edges (default: largest vertex + 1).
    #[arg(long, requires = "edges")]
    order: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Cycle,
    Double,
    Counterexample,
}

impl GraphInput {
    fn load(&self) -> anyhow::Result<Graph> {
        if let Some(s) = &self.graph6 {
            return decode_graph6(s).with_context(|| format!("decoding graph6 {s:?}"));
        }
        let path = self.edges.as_ref().expect("clap enforces one input");
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        parse_edge_list(&text, self.order).with_context(|| format!("parsing {}", path.display()))
    }
}

fn g6(g: &Graph) -> String {
    encode_graph6(g).unwrap_or_else(|_| "-".into())
}

fn describe(g: &Graph) -> String {
    let mut sizes: Vec<usize> = g.components().iter().map(Vec::len).collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    format!("{} (n={}, m={}, components {:?})", g6(g), g.order(), g.edge_count(), sizes)
}

fn print_matrix(name: &str, g: &Graph) {
    println!("{name} =");
    for i in 0..g.order() {
        let row: Vec<&str> = (0..g.order()).map(|j| if g.has_edge(i, j) { "1" } else { "0" }).collect();
        println!("  {}", row.join(" "));
    }
}

fn factor(
    input: &GraphInput,
    all: bool,
    node_limit: u64,
    include_trivial: bool,
    as_json: bool,
) -> anyhow::Result<ExitCode> {
    let g = input.load()?;
    if node_limit == 0 {
        bail!("--node-limit must be positive");
    }
    let cfg = SearchConfig {
        mode: if all { SearchMode::All } else { SearchMode::First },
        node_limit,
        include_trivial,
        ..Default::default()
    };
    let report = screen(&g);
    let (verdict, witnesses, stats) = if all && !report.is_ruled_out() {
        let (ws, stats) = factor_search(&g, &cfg)?;
        let verdict = match (ws.is_empty(), stats.exhausted) {
            (false, _) => Verdict::Yes,
            (true, true) => Verdict::No,
            (true, false) => Verdict::Unknown,
        };
        (verdict, ws, Some(stats))
    } else {
        let d = is_factorizable(&g, &cfg);
        (d.verdict, d.witness.into_iter().collect::<Vec<Factorization>>(), d.stats)
    };
    let pairs = dedup_pairs(&witnesses)?;

    if as_json {
        let out = json!({
            "graph6": g6(&g),
            "verdict": verdict,
            "screen": report,
            "stats": stats,
            "witnesses": witnesses.iter().map(Factorization::to_record).collect::<Vec<_>>(),
            "pairs": pairs.iter().map(|p| json!({
                "h_graph6": g6(&p.first.to_graph()),
                "k_graph6": g6(&p.second.to_graph()),
            })).collect::<Vec<_>>(),
        });
        println!("{}", serde_json::to_string_pretty(&out)?);
        return Ok(ExitCode::SUCCESS);
    }

    println!("graph: {}", describe(&g));
    println!("screen: {}", serde_json::to_value(report.verdict)?.as_str().unwrap_or("?"));
    for r in report.rules.iter().filter(|r| r.status == graphfactor::RuleStatus::RuledOut) {
        println!("  {} ruled out: {}", r.rule_id, r.detail);
    }
    println!("verdict: {}", serde_json::to_value(verdict)?.as_str().unwrap_or("?"));
    if let Some(s) = &stats {
        let prunes: Vec<String> = s.prunes_by_rule.iter().map(|(k, v)| format!("{k}={v}")).collect();
        println!("search: {} nodes, exhausted {}, prunes {}", s.nodes_expanded, s.exhausted, prunes.join(" "));
    }
    println!("witnesses: {}", witnesses.len());
    if !pairs.is_empty() {
        println!("factor pairs (up to isomorphism):");
        for p in &pairs {
            println!("  {{ {} , {} }}", describe(&p.first.to_graph()), describe(&p.second.to_graph()));
        }
    }
    if let Some(w) = witnesses.first() {
        println!("first witness, in the fixed labeling:");
        print_matrix("A", w.g());
        print_matrix("B", w.h());
        print_matrix("C", w.k());
    }
    Ok(ExitCode::SUCCESS)
}

fn check(input: &GraphInput, as_json: bool) -> anyhow::Result<ExitCode> {
    let g = input.load()?;
    let report = screen(&g);
    if as_json {
        println!("{}", serde_json::to_string_pretty(&report)?);
        return Ok(ExitCode::SUCCESS);
    }
    println!("graph: {}", describe(&g));
    for r in &report.rules {
        let status = serde_json::to_value(r.status)?;
        println!("{} {:<12} {}  [{}]", r.rule_id, status.as_str().unwrap_or("?"), r.detail, r.paper_ref);
    }
    println!("verdict: {}", serde_json::to_value(report.verdict)?.as_str().unwrap_or("?"));
    if report.trivial {
        println!("edgeless: factorizable as 0 = 0 * 0");
    }
    Ok(ExitCode::SUCCESS)
}

fn spectral(input: &GraphInput, tol: f64, as_json: bool) -> anyhow::Result<ExitCode> {
    let g = input.load()?;
    let spectrum = eigen_sym(&adjacency(&g), tol)?;
    let perron = if g.is_connected() { Some(perron(&g, tol)?) } else { None };
    let bipartite = g.is_bipartite();
    let symmetric = spectrum_is_symmetric(&spectrum);
    if as_json {
        let out = json!({
            "graph6": g6(&g),
            "spectrum": spectrum.values,
            "lambda_max": spectrum.max(),
            "perron_vector": perron.as_ref().map(|p| p.vector.clone()),
            "bipartite": bipartite,
            "spectrum_symmetric": symmetric,
        });
        println!("{}", serde_json::to_string_pretty(&out)?);
        return Ok(ExitCode::SUCCESS);
    }
    let fmt = |x: f64| format_significant(if x.abs() < tol { 0.0 } else { x }, 10);
    println!("graph: {}", describe(&g));
    println!("spectrum: {}", spectrum.values.iter().map(|&x| fmt(x)).collect::<Vec<_>>().join(" "));
    println!("lambda_max: {}", fmt(spectrum.max()));
    match &perron {
        Some(p) => println!("perron vector: {}", p.vector.iter().map(|&x| fmt(x)).collect::<Vec<_>>().join(" ")),
        None => println!("perron vector: none (disconnected)"),
    }
    println!("bipartite: {bipartite} (spectrum symmetric: {symmetric})");
    Ok(ExitCode::SUCCESS)
}

fn construct_cmd(kind: Kind, n: Option<usize>, graph6: Option<&str>, as_json: bool) -> anyhow::Result<ExitCode> {
    let construction = match kind {
        Kind::Cycle | Kind::Counterexample => {
            let Some(n) = n else { bail!("--kind cycle/counterexample needs --n") };
            if matches!(kind, Kind::Cycle) {
                Construction::CycleProduct(n)
            } else {
                Construction::DisconnectedCounterexample(n)
            }
        }
        Kind::Double => {
            let Some(s) = graph6 else { bail!("--kind double needs --graph6") };
            Construction::DoubledGraph(decode_graph6(s)?)
        }
    };
    let f = construct(&construction)?;
    let violations = validate_factorization(&f, DEFAULT_TOL);
    let (lg, lh, lk) = (lambda_max(f.g(), DEFAULT_TOL), lambda_max(f.h(), DEFAULT_TOL), lambda_max(f.k(), DEFAULT_TOL));
    if as_json {
        let out = json!({
            "witness": f.to_record(),
            "violations": violations,
            "lambda_max_g": lg,
            "lambda_max_h": lh,
            "lambda_max_k": lk,
            "lambda_max_product": lh * lk,
        });
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        println!("G: {}", describe(f.g()));
        println!("H: {}", describe(f.h()));
        println!("K: {}", describe(f.k()));
        print_matrix("A", f.g());
        print_matrix("B", f.h());
        print_matrix("C", f.k());
        let fmt = |x: f64| format_significant(x, 10);
        println!("lambda_max(G) = {}", fmt(lg));
        println!("lambda_max(H) * lambda_max(K) = {} * {} = {}", fmt(lh), fmt(lk), fmt(lh * lk));
        println!("validation: {} violations", violations.items.len());
    }
    Ok(if violations.is_empty() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

#[allow(clippy::too_many_arguments)]
fn census(
    order: usize,
    out: &Path,
    jobs: Option<usize>,
    seed: u64,
    tol: f64,
    node_limit: u64,
    keep_going: bool,
    allow_order_8: bool,
) -> anyhow::Result<ExitCode> {
    if allow_order_8 && order == 8 {
        eprintln!("warning: order 8 has 12346 classes and may run for many hours");
    }
    let mut search = SearchConfig::all();
    search.node_limit = node_limit;
    if allow_order_8 {
        search.order_cap = search.order_cap.max(8);
    }
    let opts = CensusOptions { search, tol, seed, jobs, keep_going, allow_order_8 };
    let start = Instant::now();
    let run = run_census(order, &opts)?;
    write_catalog(&run.records, out)?;
    let count = |v: Verdict| run.records.iter().filter(|r| r.verdict == v).count();
    println!(
        "order {order}: {} classes, {} yes, {} no, {} unknown in {:.1}s",
        run.records.len(),
        count(Verdict::Yes),
        count(Verdict::No),
        count(Verdict::Unknown),
        start.elapsed().as_secs_f64()
    );
    println!("catalog written to {}", out.display());
    print!("{}", run.report.render_text());
    Ok(if run.report.is_clean() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn verify(catalog: &Path, seed: u64, tol: f64, as_json: bool) -> anyhow::Result<ExitCode> {
    let records = read_catalog(catalog)?;
    let report = verify_catalog(&records, tol, seed);
    if as_json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print!("{}", report.render_text());
    }
    Ok(if report.is_clean() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Factor { input, all, node_limit, include_trivial, json } => {
            factor(&input, all, node_limit, include_trivial, json)
        }
        Command::Check { input, json } => check(&input, json),
        Command::Spectral { input, tol, json } => spectral(&input, tol, json),
        Command::Construct { kind, n, graph6, json } => construct_cmd(kind, n, graph6.as_deref(), json),
        Command::Census { order, out, jobs, seed, tol, node_limit, keep_going, allow_order_8 } => {
            census(order, &out, jobs, seed, tol, node_limit, keep_going, allow_order_8)
        }
        Command::Verify { catalog, seed, tol, json } => verify(&catalog, seed, tol, json),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

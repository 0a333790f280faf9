//! `loa`: play, train, compare, export-lnn and serve.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 usage error.

use std::fmt::Write as _;
use std::io::{self, BufRead, Write};
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use loa_core::agent::{assert_facts, AgentKind, RunMetrics};
use loa_core::game::{generate_layout, optimal_steps, Layout, DEFAULT_MAX_STEPS};
use loa_core::lnn::InferenceConfig;
use loa_core::parser::{Fact, FactSet};
use loa_core::rulebook::{Rulebook, BUILTIN_NAMES};
use loa_server::{CreateRequest, LayoutChoice, ServerConfig, Session, GAME_ID};

#[derive(Debug, Parser)]
#[command(name = "loa", version, about = "Logic-network agent for the coin-collector text game")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Play interactively; type commands, `quit` to leave.
    Play(PlayArgs),
    /// Train one agent and write per-episode metrics as JSON lines.
    Train(TrainArgs),
    /// Run several agents on the same layouts and print a table.
    Compare(CompareArgs),
    /// Compile a rulebook, assert facts, infer and write the network.
    ExportLnn(ExportArgs),
    /// Start the HTTP service.
    Serve(ServeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AgentName {
    Loa,
    Random,
    Tabq,
}

impl AgentName {
    fn as_str(self) -> &'static str {
        match self {
            AgentName::Loa => "loa",
            AgentName::Random => "random",
            AgentName::Tabq => "tabq",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Debug, Args)]
struct GameArgs {
    #[arg(long, default_value = GAME_ID, value_parser = [GAME_ID])]
    game: String,
    #[arg(long, default_value = "avoid_revisit", value_parser = BUILTIN_NAMES)]
    rulebook: String,
    /// Layout JSON file, or `fix_a` for the built-in three-room fixture.
    #[arg(long, conflicts_with = "chain_length")]
    layout: Option<String>,
    /// Generate a layout with this many moves from start to coin.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    chain_length: Option<u64>,
    #[arg(long, default_value_t = 0, requires = "chain_length")]
    branches: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_STEPS as u64, value_parser = clap::value_parser!(u64).range(1..))]
    max_steps: u64,
}

#[derive(Debug, Args)]
struct PlayArgs {
    #[command(flatten)]
    game: GameArgs,
}

#[derive(Debug, Args)]
struct TrainArgs {
    #[command(flatten)]
    game: GameArgs,
    #[arg(long, value_enum, default_value_t = AgentName::Loa)]
    agent: AgentName,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    episodes: u64,
    /// Metrics file; printed to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write every transition of every episode as JSON lines.
    #[arg(long)]
    log: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[command(flatten)]
    game: GameArgs,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "loa,random,tabq")]
    agents: Vec<AgentName>,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    episodes: u64,
    /// Number of generated layouts (seeds `seed`, `seed + 1`, ...); needs --chain-length.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    layouts: u64,
    /// Directory for per-agent metrics files.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ExportArgs {
    #[arg(long, default_value = "avoid_revisit", value_parser = BUILTIN_NAMES)]
    rulebook: String,
    /// Comma-separated fact labels, e.g. `found(north),visited(south)`.
    #[arg(long, default_value = "")]
    facts: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ServeArgs {
    #[arg(long, default_value_t = loa_server::DEFAULT_PORT)]
    port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    host: IpAddr,
    /// Directory with the built web UI.
    #[arg(long)]
    ui_dir: Option<PathBuf>,
    /// Directory scanned for `*.jsonl` run metrics.
    #[arg(long)]
    runs_dir: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Runtime(String),
}

type Outcome = Result<(), Failure>;

fn runtime(e: impl std::fmt::Display) -> Failure {
    Failure::Runtime(e.to_string())
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn read_layout_file(path: &Path) -> Result<Layout, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| runtime(format!("{}: {e}", path.display())))?;
    Layout::from_json(&text).map_err(|e| runtime(format!("{}: {e}", path.display())))
}

fn layout_at(args: &GameArgs, seed: u64) -> Result<Layout, Failure> {
    match (&args.layout, args.chain_length) {
        (_, Some(chain)) => generate_layout(chain as usize, args.branches, seed).map_err(usage),
        (Some(name), None) if name == "fix_a" => Ok(Layout::fix_a()),
        (Some(path), None) => read_layout_file(Path::new(path)),
        (None, None) => Ok(Layout::fix_a()),
    }
}

fn agent_kind(name: AgentName, rulebook: &str) -> Result<AgentKind, Failure> {
    AgentKind::parse(name.as_str(), rulebook).map_err(usage)
}

fn write_output(path: Option<&PathBuf>, text: &str) -> Outcome {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| runtime(format!("{}: {e}", p.display()))),
        None => io::stdout().write_all(text.as_bytes()).map_err(runtime),
    }
}

fn play(args: PlayArgs) -> Outcome {
    let layout = layout_at(&args.game, args.game.seed)?;
    let req = CreateRequest {
        game: args.game.game.clone(),
        rulebook: args.game.rulebook.clone(),
        layout: Some(LayoutChoice::Inline(layout.to_file())),
        max_steps: Some(args.game.max_steps as usize),
        ..CreateRequest::default()
    };
    let mut session = Session::create("cli".into(), &req).map_err(|e| runtime(e.message))?;
    let stdin = io::stdin();
    let mut out = io::stdout().lock();
    let mut payload = session.payload().clone();
    print_turn(&mut out, &payload).map_err(runtime)?;
    for line in stdin.lock().lines() {
        let line = line.map_err(runtime)?;
        let command = line.trim();
        if command.is_empty() {
            write!(out, "> ").and_then(|_| out.flush()).map_err(runtime)?;
            continue;
        }
        if command.eq_ignore_ascii_case("quit") {
            break;
        }
        payload = session.step(command).map_err(|e| runtime(e.message))?;
        print_turn(&mut out, &payload).map_err(runtime)?;
        if payload.done {
            writeln!(out, "Game over. Final score: {}", payload.score).map_err(runtime)?;
            break;
        }
    }
    Ok(())
}

fn print_turn(out: &mut impl Write, p: &loa_server::StepPayload) -> io::Result<()> {
    writeln!(out, "{}", p.observation)?;
    writeln!(out, "reward: {}  score: {}", p.reward, p.score)?;
    let chosen: Vec<&str> = p.recommendations.iter().filter(|r| r.recommended).map(|r| r.action.as_str()).collect();
    if chosen.is_empty() {
        writeln!(out, "recommended: (none)")?;
    } else {
        writeln!(out, "recommended: {}", chosen.join(", "))?;
    }
    for r in &p.recommendations {
        let mark = if r.recommended { " *" } else { "" };
        writeln!(out, "  {:<10} [{:.2}, {:.2}]{mark}", r.action, r.lower, r.upper)?;
    }
    if !p.done {
        write!(out, "> ")?;
    }
    out.flush()
}

fn summary_line(m: &RunMetrics, optimal: usize) -> String {
    let (first, last) = m.quintile_medians();
    format!(
        "agent={} seed={} episodes={} optimal_steps={} median_steps_first_quintile={} median_steps_last_quintile={} solve_rate={:.3}",
        m.agent_name,
        m.seed,
        m.episodes.len(),
        optimal,
        first,
        last,
        m.solve_rate()
    )
}

fn train(args: TrainArgs) -> Outcome {
    let kind = agent_kind(args.agent, &args.game.rulebook)?;
    let layout = Arc::new(layout_at(&args.game, args.game.seed)?);
    let optimal = optimal_steps(&layout).map_err(runtime)?;
    let (metrics, logs) = loa_core::agent::train_run(
        &layout,
        &kind,
        args.episodes as usize,
        args.game.seed,
        args.game.max_steps as usize,
    )
    .map_err(runtime)?;
    write_output(args.out.as_ref(), &metrics.to_jsonl())?;
    if let Some(path) = &args.log {
        let text: String = logs.iter().map(|l| l.to_jsonl()).collect();
        write_output(Some(path), &text)?;
    }
    let line = summary_line(&metrics, optimal);
    if args.out.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
    Ok(())
}

struct Row {
    name: String,
    median: f64,
    first: f64,
    last: f64,
    solve_rate: f64,
}

fn file_stem(agent_name: &str) -> String {
    agent_name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '-' })
        .collect::<String>()
        .trim_matches('-')
        .to_string()
}

fn compare(args: CompareArgs) -> Outcome {
    if args.layouts > 1 && args.game.chain_length.is_none() {
        return Err(usage("--layouts above 1 needs --chain-length"));
    }
    let layouts: Vec<Arc<Layout>> =
        (0..args.layouts).map(|k| layout_at(&args.game, args.game.seed + k).map(Arc::new)).collect::<Result<_, _>>()?;
    if let Some(dir) = &args.out {
        std::fs::create_dir_all(dir).map_err(|e| runtime(format!("{}: {e}", dir.display())))?;
    }
    let mut rows = Vec::new();
    for name in &args.agents {
        let kind = agent_kind(*name, &args.game.rulebook)?;
        let mut pooled = RunMetrics { agent_name: kind.name(), seed: args.game.seed, episodes: Vec::new() };
        let mut firsts = Vec::new();
        let mut lasts = Vec::new();
        for (k, layout) in layouts.iter().enumerate() {
            let seed = args.game.seed + k as u64;
            let (m, _) =
                loa_core::agent::train_run(layout, &kind, args.episodes as usize, seed, args.game.max_steps as usize)
                    .map_err(runtime)?;
            let n = m.episodes.len();
            let q = (n / 5).max(1);
            firsts.extend(m.episodes[..q].iter().map(|e| e.steps as f64));
            lasts.extend(m.episodes[n - q..].iter().map(|e| e.steps as f64));
            let offset = pooled.episodes.len();
            pooled.episodes.extend(m.episodes.into_iter().map(|mut e| {
                e.episode += offset;
                e
            }));
        }
        if let Some(dir) = &args.out {
            write_output(Some(&dir.join(format!("{}.jsonl", file_stem(&pooled.agent_name)))), &pooled.to_jsonl())?;
        }
        rows.push(Row {
            median: pooled.median_steps_all(),
            first: median(firsts),
            last: median(lasts),
            solve_rate: pooled.solve_rate(),
            name: pooled.agent_name,
        });
    }
    rows.sort_by(|a, b| a.median.total_cmp(&b.median).then_with(|| a.name.cmp(&b.name)));
    print!("{}", render_table(&rows));
    Ok(())
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    match n {
        0 => f64::NAN,
        _ if n % 2 == 1 => xs[n / 2],
        _ => (xs[n / 2 - 1] + xs[n / 2]) / 2.0,
    }
}

fn render_table(rows: &[Row]) -> String {
    let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(5).max(5);
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<width$}  {:>12}  {:>14}  {:>13}  {:>10}",
        "agent", "median_steps", "first_quintile", "last_quintile", "solve_rate"
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{:<width$}  {:>12.1}  {:>14.1}  {:>13.1}  {:>10.3}",
            r.name, r.median, r.first, r.last, r.solve_rate
        );
    }
    s
}

fn parse_facts(text: &str) -> Result<FactSet, Failure> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| Fact::parse(s).ok_or_else(|| usage(format!("unknown fact `{s}`"))))
        .collect()
}

fn export_lnn(args: ExportArgs) -> Outcome {
    let facts = parse_facts(&args.facts)?;
    let rulebook = Rulebook::builtin(&args.rulebook).map_err(usage)?;
    let mut graph = rulebook.compile().map_err(runtime)?;
    assert_facts(&mut graph, &facts).map_err(runtime)?;
    graph.infer_fixpoint(&InferenceConfig::default());
    let snapshot = graph.export_snapshot();
    let text = match args.format {
        Format::Json => snapshot.to_json() + "\n",
        Format::Dot => snapshot.to_dot(),
    };
    write_output(args.out.as_ref(), &text)
}

fn serve(args: ServeArgs) -> Outcome {
    let config = ServerConfig { ui_dir: args.ui_dir, runs_dir: args.runs_dir, ..ServerConfig::default() };
    let addr = SocketAddr::new(args.host, args.port);
    let rt = tokio::runtime::Builder::new_multi_thread().enable_all().build().map_err(runtime)?;
    rt.block_on(async {
        let listener = tokio::net::TcpListener::bind(addr).await.map_err(|e| runtime(format!("{addr}: {e}")))?;
        eprintln!("listening on http://{addr}");
        loa_server::serve_on(config, listener).await.map_err(runtime)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Play(a) => play(a),
        Command::Train(a) => train(a),
        Command::Compare(a) => compare(a),
        Command::ExportLnn(a) => export_lnn(a),
        Command::Serve(a) => serve(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

//! `shuttlemap` — command-line front end for the mapping service.
//!
//! Every subcommand except `serve` and `bench report` talks to a running
//! service (`--server URL` or `SHUTTLEMAP_SERVER`); without one, an
//! ephemeral in-process server is started on a loopback port for the
//! duration of the command.
//!
//! Exit codes: 0 success, 2 configuration error, 3 circuit failure(s).

use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use shuttlemap_client::{ClientError, ShuttlemapClient};
use shuttlemap_core::api::{
    BenchGenRequest, BenchRunRequest, CircuitPayload, MapRequest, PolicySpec, SimRequest,
};
use shuttlemap_core::config::{FileConfig, TopologySection};
use shuttlemap_core::report::{render, BenchReport, ReportFormat};
use shuttlemap_service::AppState;

#[derive(Parser)]
#[command(name = "shuttlemap", version, about = "Shuttle-aware qubit mapping for multi-trap trapped-ion machines")]
struct Cli {
    /// Service URL; when absent an in-process server is used.
    #[arg(long, global = true, env = "SHUTTLEMAP_SERVER")]
    server: Option<String>,

    /// TOML config file with topology/fidelity/policy defaults.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Edge-weight policy: greedy, step, linear, exp, penalized.
    #[arg(long, global = true)]
    policy: Option<String>,

    /// Step policy block count.
    #[arg(long, global = true, value_name = "N")]
    step_blocks: Option<u32>,

    /// Linear policy slope.
    #[arg(long, global = true, value_name = "A")]
    a_linear: Option<f64>,

    /// Exponential policy base.
    #[arg(long, global = true, value_name = "A")]
    a_exp: Option<f64>,

    /// Number of traps in the linear array.
    #[arg(long, global = true)]
    traps: Option<u32>,

    /// Maximum ions per trap.
    #[arg(long, global = true)]
    capacity: Option<u32>,

    /// Ions loaded per trap at placement time.
    #[arg(long, global = true)]
    load: Option<u32>,

    /// Suite/generator seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output format: table-text, csv, json.
    #[arg(long, global = true)]
    format: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the HTTP service.
    Serve {
        #[arg(long, default_value = "127.0.0.1:7200")]
        bind: SocketAddr,
    },
    /// Map one circuit: edge weights and initial placement.
    Map(MapArgs),
    /// Map and simulate one circuit.
    Sim(SimArgs),
    /// Benchmark suite operations.
    #[command(subcommand)]
    Bench(BenchCommand),
}

#[derive(Args)]
struct MapArgs {
    /// Circuit file.
    #[arg(long, value_name = "FILE")]
    circuit: PathBuf,

    /// Circuit format: ms-text (default) or qasm2.
    #[arg(long, value_name = "FMT")]
    circuit_format: Option<String>,

    /// Write the response JSON here instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimArgs {
    #[arg(long, value_name = "FILE")]
    circuit: PathBuf,

    #[arg(long, value_name = "FMT")]
    circuit_format: Option<String>,

    /// Lookahead window for mover selection.
    #[arg(long)]
    lookahead: Option<usize>,

    /// Write the shuttle events as JSON lines.
    #[arg(long, value_name = "FILE")]
    trace_out: Option<PathBuf>,

    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum BenchCommand {
    /// Generate a circuit suite and its manifest.
    Gen {
        /// Suite kind: random120 or table1.
        #[arg(long, default_value = "random120")]
        suite: String,

        /// Number of circuits (random suites only).
        #[arg(long)]
        count: Option<u32>,

        /// Output directory.
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
    /// Run a policy comparison over a suite directory.
    Run {
        /// Suite directory (ms-text circuits, optional manifest.json).
        #[arg(long, value_name = "DIR")]
        suite: PathBuf,

        /// Comma-separated candidate policies.
        #[arg(long, value_delimiter = ',')]
        policies: Option<Vec<String>>,

        /// Baseline policy.
        #[arg(long)]
        baseline: Option<String>,

        /// Lookahead window for mover selection.
        #[arg(long)]
        lookahead: Option<usize>,

        /// Record measured compile times (report loses byte-reproducibility).
        #[arg(long)]
        timings: bool,

        /// Write the canonical JSON report here.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Render a stored JSON report.
    Report {
        #[arg(long, value_name = "FILE")]
        report: PathBuf,

        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

enum CliError {
    /// Bad flags, config, or environment: exit 2.
    Config(String),
    /// Circuit-level failure (parse, placement, simulation): exit 3.
    Circuit(String),
}

impl CliError {
    fn config(e: impl std::fmt::Display) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<ClientError> for CliError {
    fn from(e: ClientError) -> Self {
        match &e {
            // 422 marks a circuit the pipeline could not handle; 400 marks
            // bad request parameters
            ClientError::Api { status, .. } if *status == 422 => CliError::Circuit(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let runtime = match tokio::runtime::Runtime::new() {
        Ok(rt) => rt,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match runtime.block_on(run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Circuit(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

async fn run(cli: Cli) -> Result<(), CliError> {
    let file_config = match &cli.config {
        Some(path) => FileConfig::load(path).map_err(CliError::config)?,
        None => FileConfig::default(),
    };

    match &cli.command {
        Command::Serve { bind } => {
            tracing_subscriber::fmt()
                .with_env_filter(
                    tracing_subscriber::EnvFilter::try_from_default_env()
                        .unwrap_or_else(|_| "info".into()),
                )
                .init();
            shuttlemap_service::serve(AppState::new(file_config), *bind)
                .await
                .map_err(CliError::config)
        }
        Command::Map(args) => {
            let (client, _guard) = connect(&cli, &file_config).await?;
            cmd_map(&cli, &file_config, &client, args).await
        }
        Command::Sim(args) => {
            let (client, _guard) = connect(&cli, &file_config).await?;
            cmd_sim(&cli, &file_config, &client, args).await
        }
        Command::Bench(bench) => match bench {
            BenchCommand::Gen { suite, count, out } => {
                let (client, _guard) = connect(&cli, &file_config).await?;
                cmd_bench_gen(&cli, &client, suite, *count, out).await
            }
            BenchCommand::Run { suite, policies, baseline, lookahead, timings, out } => {
                let (client, _guard) = connect(&cli, &file_config).await?;
                cmd_bench_run(
                    &cli,
                    &file_config,
                    &client,
                    suite,
                    policies.as_deref(),
                    baseline.as_deref(),
                    *lookahead,
                    *timings,
                    out.as_deref(),
                )
                .await
            }
            BenchCommand::Report { report, out } => cmd_bench_report(&cli, report, out.as_deref()),
        },
    }
}

/// Connect to `--server`, or start an in-process server on a loopback port.
async fn connect(
    cli: &Cli,
    file_config: &FileConfig,
) -> Result<(ShuttlemapClient, Option<tokio::task::JoinHandle<()>>), CliError> {
    if let Some(url) = &cli.server {
        return Ok((ShuttlemapClient::new(url.clone()), None));
    }
    let state = AppState::new(file_config.clone());
    let (addr, handle) = shuttlemap_service::spawn(state, "127.0.0.1:0".parse().unwrap())
        .await
        .map_err(CliError::config)?;
    Ok((ShuttlemapClient::new(format!("http://{addr}")), Some(handle)))
}

fn circuit_payload(path: &Path, format: Option<&str>) -> Result<CircuitPayload, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let name = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("circuit")
        .to_string();
    Ok(CircuitPayload { text, format: format.map(str::to_string), name: Some(name) })
}

/// Effective policy spec: CLI flags over config-file values.
fn policy_spec(cli: &Cli, file_config: &FileConfig) -> Result<Option<PolicySpec>, CliError> {
    let section = &file_config.policy;
    let kind = match (&cli.policy, &section.default) {
        (Some(k), _) => k.clone(),
        (None, Some(k)) => k.clone(),
        (None, None) if cli.step_blocks.is_none() && cli.a_linear.is_none() && cli.a_exp.is_none()
            && section.step_blocks.is_none() && section.a_linear.is_none() && section.a_exp.is_none() =>
        {
            return Ok(None); // let the server apply its default
        }
        (None, None) => "penalized".to_string(),
    };
    Ok(Some(PolicySpec {
        kind,
        step_blocks: cli.step_blocks.or(section.step_blocks),
        a_linear: cli.a_linear.or(section.a_linear),
        a_exp: cli.a_exp.or(section.a_exp),
    }))
}

fn topology_section(cli: &Cli, file_config: &FileConfig) -> Option<TopologySection> {
    let base = file_config.topology;
    let merged = TopologySection {
        traps: cli.traps.or(base.traps),
        capacity: cli.capacity.or(base.capacity),
        load: cli.load.or(base.load),
    };
    (merged != TopologySection::default()).then_some(merged)
}

fn write_or_print(out: Option<&Path>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

async fn cmd_map(
    cli: &Cli,
    file_config: &FileConfig,
    client: &ShuttlemapClient,
    args: &MapArgs,
) -> Result<(), CliError> {
    let request = MapRequest {
        circuit: circuit_payload(&args.circuit, args.circuit_format.as_deref())?,
        policy: policy_spec(cli, file_config)?,
        topology: topology_section(cli, file_config),
    };
    let response = client.map(&request).await?;
    match cli.format.as_deref() {
        None | Some("json") => {
            let mut text = serde_json::to_string_pretty(&response).map_err(CliError::config)?;
            text.push('\n');
            write_or_print(args.out.as_deref(), &text)
        }
        Some("table") | Some("table-text") => {
            let mut text = format!(
                "{}: Q={} G={} D={} S={}  policy={}\n",
                response.name,
                response.stats.q,
                response.stats.g,
                response.stats.d,
                response.stats.s,
                response.policy
            );
            for (t, chain) in response.mapping.iter().enumerate() {
                text.push_str(&format!("  T{t}: {chain:?}\n"));
            }
            text.push_str("  top edges:\n");
            for w in response.weights.iter().take(10) {
                text.push_str(&format!("    ({}, {}) = {}\n", w.a, w.b, w.weight));
            }
            write_or_print(args.out.as_deref(), &text)
        }
        Some(other) => Err(CliError::Config(format!("unknown format '{other}' for map"))),
    }
}

async fn cmd_sim(
    cli: &Cli,
    file_config: &FileConfig,
    client: &ShuttlemapClient,
    args: &SimArgs,
) -> Result<(), CliError> {
    let request = SimRequest {
        circuit: circuit_payload(&args.circuit, args.circuit_format.as_deref())?,
        policy: policy_spec(cli, file_config)?,
        topology: topology_section(cli, file_config),
        fidelity: Some(file_config.fidelity),
        lookahead: args.lookahead.or(Some(file_config.sim.lookahead)),
        include_trace: true,
    };
    let mut response = client.sim(&request).await?;

    if let Some(path) = &args.trace_out {
        let lines: String = response
            .result
            .trace
            .events
            .iter()
            .map(|e| format!("{}\n", serde_json::to_string(e).expect("event serializes")))
            .collect();
        std::fs::write(path, lines)
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))?;
    }
    if args.trace_out.is_some() {
        // events already on disk; keep the stdout payload compact
        response.result.trace.events.clear();
    }

    let mut text = serde_json::to_string_pretty(&response).map_err(CliError::config)?;
    text.push('\n');
    write_or_print(args.out.as_deref(), &text)
}

async fn cmd_bench_gen(
    cli: &Cli,
    client: &ShuttlemapClient,
    suite: &str,
    count: Option<u32>,
    out: &Path,
) -> Result<(), CliError> {
    let request = BenchGenRequest {
        suite: suite.to_string(),
        seed: cli.seed.unwrap_or(42),
        count,
    };
    let response = client.bench_gen(&request).await?;

    std::fs::create_dir_all(out)
        .map_err(|e| CliError::Config(format!("cannot create {}: {e}", out.display())))?;
    std::fs::write(out.join("manifest.json"), response.manifest.to_json_pretty())
        .map_err(CliError::config)?;
    for circuit in &response.circuits {
        std::fs::write(out.join(format!("{}.ms", circuit.name)), &circuit.text)
            .map_err(CliError::config)?;
    }
    println!(
        "wrote {} circuits and manifest.json to {}",
        response.circuits.len(),
        out.display()
    );
    Ok(())
}

/// Load a suite directory: manifest order when present, otherwise sorted
/// `*.ms` files.
fn load_suite(dir: &Path) -> Result<(String, Vec<CircuitPayload>), CliError> {
    let manifest_path = dir.join("manifest.json");
    let mut names: Vec<String> = if manifest_path.exists() {
        let text = std::fs::read_to_string(&manifest_path).map_err(CliError::config)?;
        let manifest: shuttlemap_core::benchgen::SuiteManifest =
            serde_json::from_str(&text).map_err(CliError::config)?;
        manifest.circuits.iter().map(|c| c.name.clone()).collect()
    } else {
        let mut names = Vec::new();
        let entries = std::fs::read_dir(dir)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", dir.display())))?;
        for entry in entries {
            let path = entry.map_err(CliError::config)?.path();
            if path.extension().is_some_and(|e| e == "ms") {
                if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
                    names.push(stem.to_string());
                }
            }
        }
        names.sort();
        names
    };
    if names.is_empty() {
        return Err(CliError::Config(format!("no circuits found in {}", dir.display())));
    }
    names.dedup();

    let mut payloads = Vec::with_capacity(names.len());
    for name in &names {
        let path = dir.join(format!("{name}.ms"));
        payloads.push(circuit_payload(&path, None)?);
    }
    let label = dir
        .file_name()
        .and_then(|s| s.to_str())
        .unwrap_or("suite")
        .to_string();
    Ok((label, payloads))
}

#[allow(clippy::too_many_arguments)]
async fn cmd_bench_run(
    cli: &Cli,
    file_config: &FileConfig,
    client: &ShuttlemapClient,
    suite: &Path,
    policies: Option<&[String]>,
    baseline: Option<&str>,
    lookahead: Option<usize>,
    timings: bool,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let (label, circuits) = load_suite(suite)?;

    let policy_specs: Vec<PolicySpec> = match policies {
        Some(names) => names.iter().map(|n| spec_with_params(cli, file_config, n)).collect(),
        None => file_config
            .bench_policies()
            .map_err(CliError::config)?
            .iter()
            .map(PolicySpec::from)
            .collect(),
    };
    let baseline_spec = match baseline {
        Some(name) => spec_with_params(cli, file_config, name),
        None => PolicySpec::from(&file_config.bench_baseline().map_err(CliError::config)?),
    };

    let request = BenchRunRequest {
        suite: Some(label),
        circuits,
        policies: Some(policy_specs),
        baseline: Some(baseline_spec),
        topology: Some(topology_section(cli, file_config).unwrap_or(file_config.topology)),
        fidelity: Some(file_config.fidelity),
        lookahead: lookahead.or(Some(file_config.sim.lookahead)),
        include_timings: timings,
    };
    let report = client.bench_run(&request).await?;

    if let Some(path) = out {
        std::fs::write(path, report.to_json_pretty())
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))?;
        println!("{}", render(&report, ReportFormat::TableText));
    } else {
        let format = parse_format(cli.format.as_deref())?;
        print!("{}", render(&report, format));
    }

    if report.failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Circuit(format!(
            "{} circuit failure(s); see report",
            report.failures.len()
        )))
    }
}

fn spec_with_params(cli: &Cli, file_config: &FileConfig, kind: &str) -> PolicySpec {
    let section = &file_config.policy;
    PolicySpec {
        kind: kind.to_string(),
        step_blocks: cli.step_blocks.or(section.step_blocks),
        a_linear: cli.a_linear.or(section.a_linear),
        a_exp: cli.a_exp.or(section.a_exp),
    }
}

fn parse_format(format: Option<&str>) -> Result<ReportFormat, CliError> {
    match format {
        None => Ok(ReportFormat::TableText),
        Some(f) => f.parse().map_err(CliError::config),
    }
}

fn cmd_bench_report(cli: &Cli, report: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let text = std::fs::read_to_string(report)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", report.display())))?;
    let report = BenchReport::from_json(&text).map_err(CliError::config)?;
    let format = parse_format(cli.format.as_deref())?;
    write_or_print(out, &render(&report, format))
}

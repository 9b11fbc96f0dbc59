//! The `ghz-game` command line.
//!
//! Subcommands: `exercise1` (joint unsatisfiability), `exercise2`
//! (testability and ambiguity), `oracle` (optimal classical strategy),
//! `play` (run trials locally or against serve processes), and
//! `serve device|agent|referee` (the distributed roles). Every report is
//! available as text or JSON via `--report`.

use crate::game::{question_for, GuardId, RobberId};
use crate::harness::agent::{AgentConfig, AgentServer, AgentStrategy};
use crate::harness::device::{DeviceConfig, DeviceServer};
use crate::harness::stats::Stats;
use crate::harness::{
    run_session, Endpoints, GuardPolicy, HarnessError, Mode, Role, SessionConfig, StrategyKind,
};
use crate::oracle::{
    ambiguity_cover, candidate_statements, classical_game_value, max_satisfiable,
    product_argument, testable_statements, ClassicalValue, MaxSatisfiable, ProductArgument,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::path::PathBuf;
use std::time::Duration;

#[derive(Parser)]
#[command(
    name = "ghz-game",
    version,
    about = "Three-suspect parity game: exact quantum simulation, exhaustive classical analysis, \
             and a distributed no-communication harness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Prove the four statements jointly unsatisfiable, two independent ways
    Exercise1(ReportArgs),
    /// Show that three questions test exactly one statement, and which ones a suspect must guess between
    Exercise2(ReportArgs),
    /// Find the optimal classical strategy by enumeration (value 3/4)
    Oracle(ReportArgs),
    /// Run seeded trials, locally or as the referee of a distributed session
    Play(PlayArgs),
    /// Run one role of the distributed session
    #[command(subcommand)]
    Serve(ServeRole),
}

#[derive(Args)]
struct ReportArgs {
    /// Report format
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    report: ReportFormat,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Args)]
struct PlayArgs {
    /// Session RNG seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of trials
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    /// Guard to test every trial: 1..4, or "uniform" to draw per trial
    #[arg(long, default_value = "uniform")]
    guard: GuardPolicy,
    /// quantum | classical:best | classical:<6 letters R/G>
    #[arg(long, default_value = "quantum")]
    strategy: StrategyKind,
    /// local | distributed
    #[arg(long, default_value = "local")]
    mode: Mode,
    /// Endpoint as ROLE=HOST:PORT (roles: device, agent-a, agent-b, agent-c); repeatable.
    /// Unset roles fall back to GHZ_GAME_ENDPOINT_* environment variables.
    #[arg(long = "endpoint", value_name = "ROLE=HOST:PORT")]
    endpoints: Vec<String>,
    /// Append transcripts to this file, one JSON object per line
    #[arg(long)]
    log: Option<PathBuf>,
    /// Report format
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    report: ReportFormat,
    /// Session id carried in HELLO messages (default: seed as hex)
    #[arg(long)]
    session: Option<String>,
    /// Peer timeout in milliseconds
    #[arg(long, default_value_t = 5000)]
    timeout_ms: u64,
}

#[derive(Subcommand)]
enum ServeRole {
    /// Hold the shared register; serve MEASUREs from the three agents
    Device(DeviceArgs),
    /// Answer questions for one suspect
    Agent(AgentArgs),
    /// Drive the interrogation against running agents (same as play --mode distributed)
    Referee(RefereeArgs),
}

#[derive(Args)]
struct DeviceArgs {
    /// Seed for the per-trial measurement streams
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Endpoint as ROLE=HOST:PORT; the device role names the listen address
    #[arg(long = "endpoint", value_name = "ROLE=HOST:PORT")]
    endpoints: Vec<String>,
    /// Append a wire capture to this file, one JSON record per line
    #[arg(long)]
    log: Option<PathBuf>,
    /// Session id carried in HELLO messages
    #[arg(long, default_value = "session")]
    session: String,
    /// Handshake timeout in milliseconds
    #[arg(long, default_value_t = 5000)]
    timeout_ms: u64,
}

#[derive(Args)]
struct AgentArgs {
    /// Which suspect this process plays: A, B, or C
    #[arg(long)]
    suspect: RobberId,
    /// quantum | classical:best | classical:<6 letters R/G>
    #[arg(long, default_value = "quantum")]
    strategy: StrategyKind,
    /// Endpoints as ROLE=HOST:PORT; this agent's role names its listen
    /// address, and the device role must be reachable
    #[arg(long = "endpoint", value_name = "ROLE=HOST:PORT")]
    endpoints: Vec<String>,
    /// Append a wire capture to this file, one JSON record per line
    #[arg(long)]
    log: Option<PathBuf>,
    /// Session id carried in HELLO messages
    #[arg(long, default_value = "session")]
    session: String,
    /// OUTCOME timeout in milliseconds
    #[arg(long, default_value_t = 5000)]
    timeout_ms: u64,
}

#[derive(Args)]
struct RefereeArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    /// Guard to test every trial: 1..4, or "uniform"
    #[arg(long, default_value = "uniform")]
    guard: GuardPolicy,
    /// Endpoints as ROLE=HOST:PORT for device, agent-a, agent-b, agent-c
    #[arg(long = "endpoint", value_name = "ROLE=HOST:PORT")]
    endpoints: Vec<String>,
    /// Append transcripts to this file, one JSON object per line
    #[arg(long)]
    log: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    report: ReportFormat,
    #[arg(long)]
    session: Option<String>,
    #[arg(long, default_value_t = 5000)]
    timeout_ms: u64,
}

/// Entry point used by the binary; returns the process exit code.
pub fn run() -> i32 {
    run_from(std::env::args_os())
}

/// Parses `argv` and dispatches. Exit codes: 0 success, 1 runtime failure,
/// 2 usage error.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if let HarnessError::Session { partial, .. } = &e {
                eprintln!(
                    "partial statistics: {} completed, {} aborted, {} passes",
                    partial.completed, partial.aborted, partial.passes
                );
            }
            1
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), HarnessError> {
    match cli.command {
        Command::Exercise1(args) => exercise1(args.report),
        Command::Exercise2(args) => exercise2(args.report),
        Command::Oracle(args) => oracle_report(args.report),
        Command::Play(args) => play(args),
        Command::Serve(role) => serve(role),
    }
}

fn merged_endpoints(flags: &[String]) -> Result<Endpoints, HarnessError> {
    let mut endpoints = Endpoints::new();
    for flag in flags {
        endpoints.parse_flag(flag)?;
    }
    endpoints.fill_from_env(|key| std::env::var(key).ok());
    Ok(endpoints)
}

// ---------------------------------------------------------------- exercise1

#[derive(Serialize)]
struct Exercise1Report {
    statements: Vec<StatementReport>,
    product_argument: ProductArgument,
    enumeration: MaxSatisfiable,
}

#[derive(Serialize)]
struct StatementReport {
    guard: GuardId,
    seen: Vec<String>,
    required_parity: i8,
}

fn exercise1(format: ReportFormat) -> Result<(), HarnessError> {
    let statements: Vec<StatementReport> = GuardId::ALL
        .into_iter()
        .map(|guard| StatementReport {
            guard,
            seen: RobberId::ALL
                .into_iter()
                .map(|r| format!("{r}:{}", question_for(guard, r)))
                .collect(),
            required_parity: crate::game::required_parity(guard),
        })
        .collect();
    let report = Exercise1Report {
        statements,
        product_argument: product_argument(),
        enumeration: max_satisfiable(),
    };

    match format {
        ReportFormat::Json => println!("{}", serde_json::to_string_pretty(&report)?),
        ReportFormat::Text => {
            println!("The four statements as sign constraints (red = +1, green = -1):");
            for s in &report.statements {
                println!(
                    "  guard {} saw {}  -> product must be {:+}",
                    s.guard,
                    s.seen.join(" "),
                    s.required_parity
                );
            }
            let p = &report.product_argument;
            println!();
            println!("Product argument:");
            println!("  the twelve sides seen contain each of the 6 sides exactly twice");
            println!("  product of all twelve signs: {:+} (a product of squares)", p.joint_product);
            println!("  product the statements require: {:+}", p.required_product);
            println!(
                "  contradiction: {} -> at least one guard is mistaken or lying",
                p.contradiction
            );
            let e = &report.enumeration;
            println!();
            println!("Enumeration over all 64 colorings:");
            println!("  colorings satisfying all four statements: {}", e.satisfying_all_four);
            println!("  max simultaneously satisfiable = {}", e.max_satisfied);
            for w in &e.witnesses {
                println!("  witness for {}: {} (front/back)", w.subset, w.coloring);
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- exercise2

#[derive(Serialize)]
struct Exercise2Report {
    testability: Vec<TestabilityRow>,
    candidates: Vec<CandidateRow>,
    ambiguity_cover: Vec<CoverRow>,
}

#[derive(Serialize)]
struct TestabilityRow {
    guard: GuardId,
    questions: Vec<String>,
    testable: crate::oracle::GuardSet,
}

#[derive(Serialize)]
struct CandidateRow {
    robber: RobberId,
    side: String,
    guards: [GuardId; 2],
}

#[derive(Serialize)]
struct CoverRow {
    guard: GuardId,
    cover: crate::oracle::GuardSet,
}

fn exercise2(format: ReportFormat) -> Result<(), HarnessError> {
    let report = Exercise2Report {
        testability: GuardId::ALL
            .into_iter()
            .map(|guard| TestabilityRow {
                guard,
                questions: RobberId::ALL
                    .into_iter()
                    .map(|r| format!("{r}:{}", question_for(guard, r)))
                    .collect(),
                testable: testable_statements(guard),
            })
            .collect(),
        candidates: RobberId::ALL
            .into_iter()
            .flat_map(|robber| {
                crate::game::SideView::BOTH.into_iter().map(move |side| CandidateRow {
                    robber,
                    side: side.to_string(),
                    guards: candidate_statements(robber, side),
                })
            })
            .collect(),
        ambiguity_cover: GuardId::ALL
            .into_iter()
            .map(|guard| CoverRow {
                guard,
                cover: ambiguity_cover(guard),
            })
            .collect(),
    };

    match format {
        ReportFormat::Json => println!("{}", serde_json::to_string_pretty(&report)?),
        ReportFormat::Text => {
            println!("Three questions pin down exactly one testable statement:");
            for row in &report.testability {
                println!(
                    "  testing guard {} asks {}  -> testable statements: {}",
                    row.guard,
                    row.questions.join(" "),
                    row.testable
                );
            }
            println!();
            println!("What a suspect can tell from his own question (side -> candidate statements):");
            for row in &report.candidates {
                println!("  ({}, {:<5}) -> {{{},{}}}", row.robber, row.side, row.guards[0], row.guards[1]);
            }
            println!();
            println!("Candidates across the three suspects, per tested guard:");
            for row in &report.ambiguity_cover {
                println!(
                    "  guard {} -> {}  (the suspects would have to satisfy every statement)",
                    row.guard, row.cover
                );
            }
            println!();
            println!(
                "All four statements cannot hold at once, so no pre-agreed answers \
                 can cover every case."
            );
        }
    }
    Ok(())
}

// -------------------------------------------------------------------- oracle

#[derive(Serialize)]
struct OracleReport {
    value: ClassicalValue,
    strategies_enumerated: usize,
}

fn oracle_report(format: ReportFormat) -> Result<(), HarnessError> {
    let report = OracleReport {
        value: classical_game_value(),
        strategies_enumerated: crate::oracle::DeterministicStrategy::COUNT,
    };
    match format {
        ReportFormat::Json => println!("{}", serde_json::to_string_pretty(&report)?),
        ReportFormat::Text => {
            let v = &report.value;
            let (num, den) = v.as_fraction();
            println!(
                "Enumerated {} deterministic strategies against a uniform guard choice.",
                report.strategies_enumerated
            );
            println!("optimal classical value = {num}/{den} ({})", v.as_f64());
            println!(
                "witness strategy: {} (answers in side order A-front, A-back, B-front, \
                 B-back, C-front, C-back)",
                v.witness
            );
            println!("  passes guards {}, fails guard 4", v.witness_passes);
            println!("no deterministic strategy passes all four tests (the statements are inconsistent)");
            println!(
                "shared randomness cannot help: the pass probability of a mixture is a convex \
                 combination of deterministic values, so the maximum over the 64 vertices bounds it"
            );
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------- play

#[derive(Serialize)]
struct PlayReport<'a> {
    mode: String,
    strategy: String,
    guard_policy: String,
    stats: &'a Stats,
    pass_rate: f64,
    pass_rate_bounds_95: (f64, f64),
}

fn play(args: PlayArgs) -> Result<(), HarnessError> {
    let config = SessionConfig {
        seed: args.seed,
        trials: args.trials,
        guard_policy: args.guard,
        strategy: args.strategy,
        mode: args.mode,
        endpoints: merged_endpoints(&args.endpoints)?,
        log_path: args.log,
        timeout: Duration::from_millis(args.timeout_ms),
        session: args.session,
    };
    let result = run_session(&config)?;
    print_stats(
        &result.stats,
        config.mode,
        config.strategy,
        config.guard_policy,
        args.report,
    )
}

fn print_stats(
    stats: &Stats,
    mode: Mode,
    strategy: StrategyKind,
    guard_policy: GuardPolicy,
    format: ReportFormat,
) -> Result<(), HarnessError> {
    match format {
        ReportFormat::Json => {
            let report = PlayReport {
                mode: mode.to_string(),
                strategy: strategy.to_string(),
                guard_policy: guard_policy.to_string(),
                stats,
                pass_rate: stats.pass_rate(),
                pass_rate_bounds_95: stats.pass_rate_bounds(0.95),
            };
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        ReportFormat::Text => {
            println!(
                "session: seed={} strategy={} guard={} mode={}",
                stats.seed, strategy, guard_policy, mode
            );
            println!(
                "trials: requested={} completed={} aborted={}",
                stats.requested, stats.completed, stats.aborted
            );
            let (lo, hi) = stats.pass_rate_bounds(0.95);
            println!(
                "passes: {}  pass rate: {:.6}  95% exact binomial bounds: [{:.6}, {:.6}]",
                stats.passes,
                stats.pass_rate(),
                lo,
                hi
            );
            println!("per guard:");
            for guard in GuardId::ALL {
                let tally = &stats.per_guard[guard.index()];
                println!(
                    "  guard {}: {}/{} passed ({:.4})",
                    guard,
                    tally.passes,
                    tally.trials,
                    stats.guard_pass_rate(guard)
                );
            }
            println!("red-answer frequency by suspect (overall, then conditioned on the tested guard):");
            for suspect in RobberId::ALL {
                let by_guard: Vec<String> = GuardId::ALL
                    .into_iter()
                    .map(|g| format!("g{}={:.4}", g, stats.red_frequency_given(suspect, g)))
                    .collect();
                println!(
                    "  suspect {}: {:.4}  {}",
                    suspect,
                    stats.red_frequency(suspect),
                    by_guard.join(" ")
                );
            }
        }
    }
    Ok(())
}

// --------------------------------------------------------------------- serve

fn serve(role: ServeRole) -> Result<(), HarnessError> {
    match role {
        ServeRole::Device(args) => serve_device(args),
        ServeRole::Agent(args) => serve_agent(args),
        ServeRole::Referee(args) => serve_referee(args),
    }
}

fn serve_device(args: DeviceArgs) -> Result<(), HarnessError> {
    let endpoints = merged_endpoints(&args.endpoints)?;
    let listen = endpoints.get(Role::Device).unwrap_or("127.0.0.1:0").to_string();
    let server = DeviceServer::bind(DeviceConfig {
        listen,
        seed: args.seed,
        session: args.session,
        capture_path: args.log,
        timeout: Duration::from_millis(args.timeout_ms),
    })?;
    println!("listening device {}", server.local_addr()?);
    let summary = server.run()?;
    println!(
        "device: served {} agents, {} trials completed, {} measurements, {} duplicates rejected",
        summary.agents_served,
        summary.trials_completed,
        summary.measures,
        summary.duplicates_rejected
    );
    Ok(())
}

fn serve_agent(args: AgentArgs) -> Result<(), HarnessError> {
    let endpoints = merged_endpoints(&args.endpoints)?;
    let role = Role::Agent(args.suspect);
    let listen = endpoints.get(role).unwrap_or("127.0.0.1:0").to_string();
    let device = endpoints.require(Role::Device)?.to_string();
    let strategy = match args.strategy {
        StrategyKind::Quantum => AgentStrategy::Quantum,
        StrategyKind::ClassicalBest => AgentStrategy::Classical(classical_game_value().witness),
        StrategyKind::Classical(s) => AgentStrategy::Classical(s),
    };
    let server = AgentServer::bind(AgentConfig {
        suspect: args.suspect,
        listen,
        device,
        session: args.session,
        strategy,
        capture_path: args.log,
        timeout: Duration::from_millis(args.timeout_ms),
    })?;
    println!("listening {role} {}", server.local_addr()?);
    let summary = server.run()?;
    println!(
        "{role}: answered {} questions, rejected {}, aborted {}",
        summary.answered, summary.rejected, summary.aborted
    );
    Ok(())
}

fn serve_referee(args: RefereeArgs) -> Result<(), HarnessError> {
    let config = SessionConfig {
        seed: args.seed,
        trials: args.trials,
        guard_policy: args.guard,
        strategy: StrategyKind::Quantum,
        mode: Mode::Distributed,
        endpoints: merged_endpoints(&args.endpoints)?,
        log_path: args.log,
        timeout: Duration::from_millis(args.timeout_ms),
        session: args.session,
    };
    let result = run_session(&config)?;
    print_stats(
        &result.stats,
        Mode::Distributed,
        StrategyKind::Quantum,
        config.guard_policy,
        args.report,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn endpoint_env_round_trip() {
        // The env names advertised in help match what merged_endpoints reads.
        assert_eq!(
            crate::harness::endpoint_env_var(Role::Device),
            "GHZ_GAME_ENDPOINT_DEVICE"
        );
    }
}

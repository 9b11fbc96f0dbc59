//! Orchestration: seeded trial runs, the four-process wire protocol, and
//! statistics.
//!
//! A session runs in one of two modes. In local mode the whole game is
//! single-threaded: one process prepares the register, asks the questions,
//! and verifies the answers. In distributed mode four OS processes cooperate
//! over loopback sockets — a referee, a device holding the shared register,
//! and three agents. The referee talks to each agent on a dedicated
//! connection, agents talk only to the device, and nothing ever forwards one
//! agent's traffic to another, so the transport graph itself rules out
//! player-to-player communication. A traffic auditor replays the captured
//! streams to confirm it.
//!
//! Randomness comes from a seedable, splittable generator (ChaCha8): every
//! trial draws from its own stream, derived from `(seed, trial index)`, so
//! results are reproducible even when message arrival order is not.

pub mod agent;
pub mod audit;
pub mod cli;
pub mod device;
pub mod local;
pub mod referee;
pub mod register;
pub mod rng;
pub mod stats;
pub mod transcript;
pub mod wire;

use crate::game::GuardId;
use crate::oracle::DeterministicStrategy;
use rand::Rng;
use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Duration;
use thiserror::Error;

pub use local::{run_local_game, run_session, run_trials, SessionResult};
pub use register::SharedRegister;
pub use stats::Stats;
pub use transcript::{SuspectRecord, Transcript};
pub use wire::Role;

/// Environment variable prefix mirrored by the `--endpoint` flags.
pub const ENDPOINT_ENV_PREFIX: &str = "GHZ_GAME_ENDPOINT_";

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization: {0}")]
    Json(#[from] serde_json::Error),
    #[error("wire protocol: {0}")]
    Wire(#[from] wire::WireError),
    #[error("protocol violation: {0}")]
    Protocol(String),
    #[error("session failed after {} completed trials: {detail}", partial.completed)]
    Session { detail: String, partial: Box<Stats> },
}

/// How the referee picks the guard whose statement a trial tests.
///
/// Nothing in the game fixes this choice, so it is explicit and
/// configurable; `Uniform` is the default referee.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GuardPolicy {
    Fixed(GuardId),
    Uniform,
}

impl GuardPolicy {
    pub fn draw(self, rng: &mut impl Rng) -> GuardId {
        match self {
            GuardPolicy::Fixed(guard) => guard,
            GuardPolicy::Uniform => GuardId::ALL[rng.random_range(0..GuardId::ALL.len())],
        }
    }
}

impl fmt::Display for GuardPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GuardPolicy::Fixed(guard) => write!(f, "{guard}"),
            GuardPolicy::Uniform => write!(f, "uniform"),
        }
    }
}

impl FromStr for GuardPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("uniform") {
            return Ok(GuardPolicy::Uniform);
        }
        s.parse::<u8>()
            .ok()
            .and_then(GuardId::from_number)
            .map(GuardPolicy::Fixed)
            .ok_or_else(|| format!("guard must be 1..4 or \"uniform\", got {s:?}"))
    }
}

/// Which strategy the suspects play.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyKind {
    Quantum,
    /// The optimal deterministic strategy found by enumeration.
    ClassicalBest,
    /// An explicit deterministic strategy.
    Classical(DeterministicStrategy),
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrategyKind::Quantum => write!(f, "quantum"),
            StrategyKind::ClassicalBest => write!(f, "classical:best"),
            StrategyKind::Classical(s) => write!(f, "classical:{s}"),
        }
    }
}

impl FromStr for StrategyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("quantum") {
            return Ok(StrategyKind::Quantum);
        }
        if let Some(spec) = s.strip_prefix("classical:") {
            if spec.eq_ignore_ascii_case("best") {
                return Ok(StrategyKind::ClassicalBest);
            }
            return spec.parse().map(StrategyKind::Classical);
        }
        Err(format!(
            "strategy must be quantum, classical:best, or classical:<6 letters R/G>, got {s:?}"
        ))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Local,
    Distributed,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Local => write!(f, "local"),
            Mode::Distributed => write!(f, "distributed"),
        }
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "local" => Ok(Mode::Local),
            "distributed" => Ok(Mode::Distributed),
            _ => Err(format!("mode must be local or distributed, got {s:?}")),
        }
    }
}

/// Transport endpoints per role, as `host:port` strings.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Endpoints {
    map: BTreeMap<Role, String>,
}

impl Endpoints {
    pub fn new() -> Self {
        Endpoints::default()
    }

    pub fn insert(&mut self, role: Role, addr: impl Into<String>) {
        self.map.insert(role, addr.into());
    }

    pub fn get(&self, role: Role) -> Option<&str> {
        self.map.get(&role).map(String::as_str)
    }

    pub fn require(&self, role: Role) -> Result<&str, HarnessError> {
        self.get(role).ok_or_else(|| {
            HarnessError::Config(format!(
                "missing endpoint for {role}; pass --endpoint {role}=HOST:PORT or set {}",
                endpoint_env_var(role)
            ))
        })
    }

    /// Parses a `role=host:port` flag value.
    pub fn parse_flag(&mut self, flag: &str) -> Result<(), HarnessError> {
        let (role, addr) = flag.split_once('=').ok_or_else(|| {
            HarnessError::Config(format!("endpoint must look like ROLE=HOST:PORT, got {flag:?}"))
        })?;
        let role: Role = role.parse().map_err(HarnessError::Config)?;
        if addr.is_empty() {
            return Err(HarnessError::Config(format!("empty address for role {role}")));
        }
        self.insert(role, addr);
        Ok(())
    }

    /// Fills any role not set by flags from the mirrored environment
    /// variables (`GHZ_GAME_ENDPOINT_DEVICE`, `GHZ_GAME_ENDPOINT_AGENT_A`, ...).
    pub fn fill_from_env(&mut self, lookup: impl Fn(&str) -> Option<String>) {
        for role in Role::ALL {
            if self.get(role).is_none() {
                if let Some(addr) = lookup(&endpoint_env_var(role)) {
                    if !addr.is_empty() {
                        self.insert(role, addr);
                    }
                }
            }
        }
    }

    pub fn values(&self) -> impl Iterator<Item = (&Role, &String)> {
        self.map.iter()
    }
}

/// The environment variable mirroring `--endpoint <role>=...`.
pub fn endpoint_env_var(role: Role) -> String {
    format!(
        "{ENDPOINT_ENV_PREFIX}{}",
        role.to_string().to_ascii_uppercase().replace('-', "_")
    )
}

/// Everything a session needs: seed, length, policies, mode, and transport.
#[derive(Debug, Clone)]
pub struct SessionConfig {
    pub seed: u64,
    pub trials: u64,
    pub guard_policy: GuardPolicy,
    pub strategy: StrategyKind,
    pub mode: Mode,
    pub endpoints: Endpoints,
    /// Append-only transcript log, one JSON object per line.
    pub log_path: Option<PathBuf>,
    pub timeout: Duration,
    pub session: Option<String>,
}

impl SessionConfig {
    pub fn local(seed: u64, trials: u64, guard_policy: GuardPolicy, strategy: StrategyKind) -> Self {
        SessionConfig {
            seed,
            trials,
            guard_policy,
            strategy,
            mode: Mode::Local,
            endpoints: Endpoints::new(),
            log_path: None,
            timeout: Duration::from_millis(5000),
            session: None,
        }
    }

    pub fn session_id(&self) -> String {
        self.session
            .clone()
            .unwrap_or_else(|| format!("{:016x}", self.seed))
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.trials == 0 {
            return Err(HarnessError::Config("trials must be at least 1".into()));
        }
        if self.mode == Mode::Distributed {
            if self.strategy != StrategyKind::Quantum {
                return Err(HarnessError::Config(
                    "distributed mode drives quantum agents; classical strategies are \
                     configured on the agent processes themselves"
                        .into(),
                ));
            }
            let mut seen: BTreeMap<String, Role> = BTreeMap::new();
            for (role, addr) in self.endpoints.values() {
                if let Some(other) = seen.insert(addr.clone(), *role) {
                    return Err(HarnessError::Config(format!(
                        "endpoints must be distinct in distributed mode: {role} and {other} \
                         both use {addr}"
                    )));
                }
            }
        }
        Ok(())
    }
}

//! The device process: sole holder of the shared register.
//!
//! The device is the only nonlocal element of the distributed session. It
//! accepts one connection per agent plus one from the referee, lazily
//! prepares a fresh GHZ register per trial (randomness from the
//! `(seed, trial)` stream), applies measurements in arrival order, and
//! replies each OUTCOME only to the agent that asked. Duplicate measurements
//! for a (trial, suspect) are rejected with `DUP`; a suspect in a MEASURE
//! that does not match the connection's HELLO role is rejected with `ROLE`.
//!
//! A VERDICT from the referee retires the trial's register; the process ends
//! when every registered peer has closed its stream.

use crate::game::RobberId;
use crate::harness::audit::CaptureLog;
use crate::harness::register::SharedRegister;
use crate::harness::rng::trial_rng;
use crate::harness::wire::{Connection, ErrorCode, Role, WireMessage};
use crate::harness::HarnessError;
use crate::qsim::MeasBasis;
use crate::strategy::{qubit_for, DeviceError, MeasurementDevice};
use rand_chacha::ChaCha8Rng;
use std::collections::{HashMap, HashSet};
use std::io;
use std::net::{SocketAddr, TcpListener};
use std::path::PathBuf;
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::Duration;

#[derive(Debug, Clone)]
pub struct DeviceConfig {
    /// Address to listen on, e.g. `127.0.0.1:0`.
    pub listen: String,
    pub seed: u64,
    pub session: String,
    /// Wire capture, one JSON record per line.
    pub capture_path: Option<PathBuf>,
    /// Handshake read timeout.
    pub timeout: Duration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DeviceSummary {
    pub agents_served: usize,
    pub trials_completed: u64,
    pub measures: u64,
    pub duplicates_rejected: u64,
}

/// Per-session register table shared by the connection handlers.
struct RegisterTable {
    seed: u64,
    slots: HashMap<u64, SharedRegister<ChaCha8Rng>>,
    /// Trials fully measured or retired by a VERDICT; anything arriving for
    /// them is a duplicate, never grounds for a fresh register.
    ended: HashSet<u64>,
    summary: DeviceSummary,
}

impl RegisterTable {
    fn new(seed: u64) -> Self {
        RegisterTable {
            seed,
            slots: HashMap::new(),
            ended: HashSet::new(),
            summary: DeviceSummary::default(),
        }
    }

    fn measure(
        &mut self,
        trial: u64,
        suspect: RobberId,
        basis: MeasBasis,
    ) -> Result<i8, DeviceError> {
        if self.ended.contains(&trial) {
            self.summary.duplicates_rejected += 1;
            return Err(DeviceError::Duplicate {
                qubit: qubit_for(suspect),
            });
        }
        let seed = self.seed;
        let register = self
            .slots
            .entry(trial)
            .or_insert_with(|| SharedRegister::ghz(trial_rng(seed, trial)));
        match register.measure(qubit_for(suspect), basis) {
            Ok(outcome) => {
                self.summary.measures += 1;
                if register.is_complete() {
                    self.slots.remove(&trial);
                    self.ended.insert(trial);
                    self.summary.trials_completed += 1;
                }
                Ok(outcome.sign())
            }
            Err(e) => {
                if matches!(e, DeviceError::Duplicate { .. }) {
                    self.summary.duplicates_rejected += 1;
                }
                Err(e)
            }
        }
    }

    fn end_trial(&mut self, trial: u64) {
        self.slots.remove(&trial);
        self.ended.insert(trial);
    }
}

pub struct DeviceServer {
    listener: TcpListener,
    config: DeviceConfig,
}

impl DeviceServer {
    pub fn bind(config: DeviceConfig) -> Result<Self, HarnessError> {
        let listener = TcpListener::bind(&config.listen)?;
        Ok(DeviceServer { listener, config })
    }

    pub fn local_addr(&self) -> io::Result<SocketAddr> {
        self.listener.local_addr()
    }

    /// Serves one session: registers three agents and a referee, then runs
    /// until all of them hang up.
    pub fn run(self) -> Result<DeviceSummary, HarnessError> {
        let capture = self
            .config
            .capture_path
            .as_deref()
            .map(CaptureLog::create)
            .transpose()?;
        let table = Arc::new(Mutex::new(RegisterTable::new(self.config.seed)));
        let mut agent_seen = [false; 3];
        let mut referee_seen = false;
        let mut handlers: Vec<thread::JoinHandle<()>> = Vec::new();

        while !(agent_seen.iter().all(|&s| s) && referee_seen) {
            let (stream, _) = self.listener.accept()?;
            let mut conn = Connection::new(stream, capture.clone())?;
            conn.set_read_timeout(Some(self.config.timeout))?;

            let hello = match conn.recv() {
                Ok(Some(WireMessage::Hello { role, .. })) => role,
                Ok(Some(_)) | Ok(None) => {
                    let _ = conn.send(&WireMessage::Error {
                        code: ErrorCode::Protocol,
                        detail: "expected HELLO first".into(),
                    });
                    continue;
                }
                Err(_) => continue,
            };

            match hello {
                Role::Agent(suspect) if !agent_seen[suspect.index()] => {
                    agent_seen[suspect.index()] = true;
                    conn.set_peer_label(Role::Agent(suspect).to_string());
                    conn.send(&WireMessage::Hello {
                        role: Role::Device,
                        session: self.config.session.clone(),
                    })?;
                    conn.set_read_timeout(None)?;
                    let table = Arc::clone(&table);
                    handlers.push(thread::spawn(move || {
                        serve_agent(conn, suspect, table);
                    }));
                }
                Role::Referee if !referee_seen => {
                    referee_seen = true;
                    conn.set_peer_label(Role::Referee.to_string());
                    conn.send(&WireMessage::Hello {
                        role: Role::Device,
                        session: self.config.session.clone(),
                    })?;
                    conn.set_read_timeout(None)?;
                    let table = Arc::clone(&table);
                    handlers.push(thread::spawn(move || {
                        serve_referee(conn, table);
                    }));
                }
                role => {
                    let _ = conn.send(&WireMessage::Error {
                        code: ErrorCode::Role,
                        detail: format!("role {role} is not available"),
                    });
                }
            }
        }

        for handler in handlers {
            let _ = handler.join();
        }
        let mut summary = table.lock().expect("register table lock").summary;
        summary.agents_served = 3;
        Ok(summary)
    }
}

fn serve_agent(mut conn: Connection, suspect: RobberId, table: Arc<Mutex<RegisterTable>>) {
    loop {
        match conn.recv() {
            Ok(Some(WireMessage::Measure {
                trial,
                suspect: claimed,
                basis,
            })) => {
                if claimed != suspect {
                    let _ = conn.send(&WireMessage::Error {
                        code: ErrorCode::Role,
                        detail: format!("connection registered as agent {suspect}, not {claimed}"),
                    });
                    continue;
                }
                let result = table
                    .lock()
                    .expect("register table lock")
                    .measure(trial, suspect, basis);
                let reply = match result {
                    Ok(sign) => WireMessage::Outcome {
                        trial,
                        suspect,
                        sign,
                    },
                    Err(DeviceError::Duplicate { qubit }) => WireMessage::Error {
                        code: ErrorCode::Dup,
                        detail: format!("trial {trial}: qubit {qubit} was already measured"),
                    },
                    Err(e) => WireMessage::Error {
                        code: ErrorCode::Protocol,
                        detail: e.to_string(),
                    },
                };
                if conn.send(&reply).is_err() {
                    break;
                }
            }
            Ok(Some(_)) => {
                let _ = conn.send(&WireMessage::Error {
                    code: ErrorCode::Protocol,
                    detail: "device accepts only MEASURE from agents".into(),
                });
            }
            Ok(None) => break,
            Err(_) => break,
        }
    }
}

fn serve_referee(mut conn: Connection, table: Arc<Mutex<RegisterTable>>) {
    loop {
        match conn.recv() {
            Ok(Some(WireMessage::Verdict { trial, .. })) => {
                table.lock().expect("register table lock").end_trial(trial);
            }
            Ok(Some(_)) => {
                let _ = conn.send(&WireMessage::Error {
                    code: ErrorCode::Protocol,
                    detail: "device accepts only VERDICT from the referee".into(),
                });
            }
            Ok(None) => break,
            Err(_) => break,
        }
    }
}

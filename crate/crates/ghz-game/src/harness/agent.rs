//! An agent process: one suspect in a sealed room.
//!
//! The agent owns two connections and nothing else: an outbound line to the
//! device (MEASURE → OUTCOME) and an inbound line from the referee
//! (ASK → ANSWER). It retains no cross-trial state beyond the transports and
//! the id of the last trial it answered, which it keeps only to reject a
//! second question for the same trial.

use crate::game::RobberId;
use crate::harness::audit::CaptureLog;
use crate::harness::wire::{connect_with_retry, Connection, ErrorCode, Role, WireMessage};
use crate::harness::HarnessError;
use crate::oracle::DeterministicStrategy;
use crate::qsim::{MeasBasis, MeasOutcome, QubitId};
use crate::strategy::{qubit_for, AgentHandle, DeviceError, MeasurementDevice, StrategyError};
use std::io;
use std::net::{SocketAddr, TcpListener};
use std::path::PathBuf;
use std::time::Duration;

/// How this agent answers: by measuring its qubit, or from a fixed table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AgentStrategy {
    Quantum,
    Classical(DeterministicStrategy),
}

#[derive(Debug, Clone)]
pub struct AgentConfig {
    pub suspect: RobberId,
    /// Address to listen on for the referee.
    pub listen: String,
    /// Device endpoint to dial.
    pub device: String,
    pub session: String,
    pub strategy: AgentStrategy,
    pub capture_path: Option<PathBuf>,
    /// Read timeout while waiting for an OUTCOME or a handshake.
    pub timeout: Duration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AgentSummary {
    pub answered: u64,
    pub rejected: u64,
    pub aborted: u64,
}

/// The device as seen through the wire, scoped to one trial.
struct WireDevice<'a> {
    conn: &'a mut Connection,
    trial: u64,
    suspect: RobberId,
}

impl MeasurementDevice for WireDevice<'_> {
    fn measure(&mut self, qubit: QubitId, basis: MeasBasis) -> Result<MeasOutcome, DeviceError> {
        debug_assert_eq!(qubit, qubit_for(self.suspect));
        self.conn
            .send(&WireMessage::Measure {
                trial: self.trial,
                suspect: self.suspect,
                basis,
            })
            .map_err(|e| DeviceError::Transport(e.to_string()))?;
        match self.conn.recv() {
            Ok(Some(WireMessage::Outcome { trial, suspect, sign }))
                if trial == self.trial && suspect == self.suspect =>
            {
                MeasOutcome::from_sign(sign)
                    .ok_or_else(|| DeviceError::Rejected(format!("outcome sign {sign} is not ±1")))
            }
            Ok(Some(WireMessage::Error { code, detail })) => Err(match code {
                ErrorCode::Dup => DeviceError::Duplicate { qubit },
                _ => DeviceError::Rejected(format!("{code:?}: {detail}")),
            }),
            Ok(Some(other)) => Err(DeviceError::Rejected(format!(
                "unexpected device reply: {other:?}"
            ))),
            Ok(None) => Err(DeviceError::Transport("device closed the stream".into())),
            Err(crate::harness::wire::WireError::Timeout) => Err(DeviceError::Timeout(format!(
                "no OUTCOME for trial {} within the deadline",
                self.trial
            ))),
            Err(e) => Err(DeviceError::Transport(e.to_string())),
        }
    }
}

pub struct AgentServer {
    listener: TcpListener,
    config: AgentConfig,
}

impl AgentServer {
    pub fn bind(config: AgentConfig) -> Result<Self, HarnessError> {
        let listener = TcpListener::bind(&config.listen)?;
        Ok(AgentServer { listener, config })
    }

    pub fn local_addr(&self) -> io::Result<SocketAddr> {
        self.listener.local_addr()
    }

    /// Serves one session: dials the device, waits for the referee, then
    /// answers one question per trial until the referee hangs up.
    pub fn run(self) -> Result<AgentSummary, HarnessError> {
        let config = self.config;
        let capture = config
            .capture_path
            .as_deref()
            .map(CaptureLog::create)
            .transpose()?;
        let suspect = config.suspect;

        // Device connection first: the gadget must be in the pocket before
        // the interrogation starts. The configured timeout bounds the dial
        // window.
        let retry_delay = Duration::from_millis(100);
        let attempts = (config.timeout.as_millis() / retry_delay.as_millis()).max(1) as u32;
        let mut device = connect_with_retry(&config.device, attempts, retry_delay, capture.clone())?;
        device.set_peer_label(Role::Device.to_string());
        device.set_read_timeout(Some(config.timeout))?;
        device.send(&WireMessage::Hello {
            role: Role::Agent(suspect),
            session: config.session.clone(),
        })?;
        match device.recv()? {
            Some(WireMessage::Hello { role: Role::Device, .. }) => {}
            other => {
                return Err(HarnessError::Protocol(format!(
                    "device handshake failed: {other:?}"
                )))
            }
        }

        let (stream, _) = self.listener.accept()?;
        let mut referee = Connection::new(stream, capture.clone())?;
        referee.set_read_timeout(Some(config.timeout))?;
        match referee.recv()? {
            Some(WireMessage::Hello { role: Role::Referee, .. }) => {
                referee.set_peer_label(Role::Referee.to_string());
            }
            other => {
                let _ = referee.send(&WireMessage::Error {
                    code: ErrorCode::Role,
                    detail: "expected a referee HELLO".into(),
                });
                return Err(HarnessError::Protocol(format!(
                    "referee handshake failed: {other:?}"
                )));
            }
        }
        referee.send(&WireMessage::Hello {
            role: Role::Agent(suspect),
            session: config.session.clone(),
        })?;
        // The referee drives pacing from here on.
        referee.set_read_timeout(None)?;

        let mut summary = AgentSummary::default();
        let mut last_answered: Option<u64> = None;
        loop {
            match referee.recv() {
                Ok(Some(WireMessage::Ask { trial, suspect: asked, side })) => {
                    if asked != suspect {
                        summary.rejected += 1;
                        let _ = referee.send(&WireMessage::Error {
                            code: ErrorCode::Role,
                            detail: format!("this room holds {suspect}, not {asked}"),
                        });
                        continue;
                    }
                    if last_answered == Some(trial) {
                        summary.rejected += 1;
                        let _ = referee.send(&WireMessage::Error {
                            code: ErrorCode::Dup,
                            detail: format!("trial {trial} was already asked"),
                        });
                        continue;
                    }
                    let answer = match config.strategy {
                        AgentStrategy::Classical(strategy) => Ok(strategy.answer(suspect, side)),
                        AgentStrategy::Quantum => {
                            let mut handle = AgentHandle::new(suspect);
                            let mut gadget = WireDevice {
                                conn: &mut device,
                                trial,
                                suspect,
                            };
                            handle.quantum_answer(side, &mut gadget)
                        }
                    };
                    match answer {
                        Ok(color) => {
                            last_answered = Some(trial);
                            summary.answered += 1;
                            referee.send(&WireMessage::Answer {
                                trial,
                                suspect,
                                color,
                            })?;
                        }
                        Err(e) => {
                            summary.aborted += 1;
                            let code = match &e {
                                StrategyError::Device(DeviceError::Timeout(_)) => ErrorCode::Timeout,
                                StrategyError::Device(DeviceError::Duplicate { .. }) => ErrorCode::Dup,
                                _ => ErrorCode::Protocol,
                            };
                            let _ = referee.send(&WireMessage::Error {
                                code,
                                detail: e.to_string(),
                            });
                        }
                    }
                }
                Ok(Some(other)) => {
                    let _ = referee.send(&WireMessage::Error {
                        code: ErrorCode::Protocol,
                        detail: format!("agents accept only ASK, got {other:?}"),
                    });
                }
                Ok(None) => break,
                Err(e) => return Err(e.into()),
            }
        }
        Ok(summary)
    }
}

//! The referee process: asks the questions, collects the answers, rules.
//!
//! One dedicated connection per agent, one to the device. Per trial the
//! referee draws the guard, sends each agent only its own ASK (in a freshly
//! shuffled order), reads back the ANSWERs, verifies, and sends the VERDICT
//! to the device to retire the trial. Nothing an agent sends is ever
//! forwarded to another agent.
//!
//! An agent that times out or reports an error aborts the trial: the trial
//! is excluded from pass-rate denominators and counted separately, so a slow
//! agent can only shrink the sample, never hide a failure.

use crate::game::{question_for, verify, AnswerSet, Color, RobberId};
use crate::harness::rng::trial_rng;
use crate::harness::stats::Stats;
use crate::harness::transcript::{SuspectRecord, Transcript, TranscriptLog};
use crate::harness::wire::{connect_with_retry, Connection, Role, WireError, WireMessage};
use crate::harness::{HarnessError, SessionConfig, SessionResult};
use rand::seq::SliceRandom;
use std::time::{Duration, SystemTime, UNIX_EPOCH};

fn now_micros() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_micros() as u64)
        .unwrap_or(0)
}

enum AnswerOutcome {
    Answered(Color),
    /// The trial cannot complete (timeout or an agent-reported error).
    Aborted(String),
}

/// Reads `suspect`'s answer for `trial`, skipping leftovers from aborted
/// earlier trials.
fn recv_answer(
    conn: &mut Connection,
    trial: u64,
    suspect: RobberId,
) -> Result<AnswerOutcome, HarnessError> {
    loop {
        match conn.recv() {
            Ok(Some(WireMessage::Answer { trial: t, suspect: s, color })) => {
                if t == trial && s == suspect {
                    return Ok(AnswerOutcome::Answered(color));
                }
                if t < trial {
                    continue; // stale answer from an aborted trial
                }
                return Err(HarnessError::Protocol(format!(
                    "agent {suspect} answered trial {t} while trial {trial} was open"
                )));
            }
            Ok(Some(WireMessage::Error { code, detail })) => {
                return Ok(AnswerOutcome::Aborted(format!(
                    "agent {suspect} reported {code:?}: {detail}"
                )));
            }
            Ok(Some(other)) => {
                return Ok(AnswerOutcome::Aborted(format!(
                    "agent {suspect} sent unexpected traffic: {other:?}"
                )));
            }
            Ok(None) => {
                return Err(HarnessError::Protocol(format!(
                    "agent {suspect} closed the stream mid-session"
                )));
            }
            Err(WireError::Timeout) => {
                return Ok(AnswerOutcome::Aborted(format!(
                    "agent {suspect} did not answer trial {trial} in time"
                )));
            }
            Err(e) => return Err(e.into()),
        }
    }
}

/// Runs a distributed session against already-listening agent and device
/// processes. Transport failures return a session error carrying the partial
/// statistics collected so far.
pub fn referee_run(config: &SessionConfig) -> Result<SessionResult, HarnessError> {
    config.validate()?;
    let session = config.session_id();
    // The configured timeout bounds the whole dial window.
    let retry_delay = Duration::from_millis(100);
    let attempts = (config.timeout.as_millis() / retry_delay.as_millis()).max(1) as u32;

    // Device first (to retire trials), then one line per agent.
    let mut device = match config.endpoints.get(Role::Device) {
        Some(addr) => {
            let mut conn = connect_with_retry(addr, attempts, retry_delay, None)?;
            conn.set_peer_label(Role::Device.to_string());
            conn.set_read_timeout(Some(config.timeout))?;
            conn.send(&WireMessage::Hello {
                role: Role::Referee,
                session: session.clone(),
            })?;
            match conn.recv()? {
                Some(WireMessage::Hello { role: Role::Device, .. }) => {}
                other => {
                    return Err(HarnessError::Protocol(format!(
                        "device handshake failed: {other:?}"
                    )))
                }
            }
            Some(conn)
        }
        None => None,
    };

    let mut agents: Vec<Connection> = Vec::with_capacity(3);
    for suspect in RobberId::ALL {
        let addr = config.endpoints.require(Role::Agent(suspect))?;
        let mut conn = connect_with_retry(addr, attempts, retry_delay, None)?;
        conn.set_peer_label(Role::Agent(suspect).to_string());
        conn.set_read_timeout(Some(config.timeout))?;
        conn.send(&WireMessage::Hello {
            role: Role::Referee,
            session: session.clone(),
        })?;
        match conn.recv()? {
            Some(WireMessage::Hello { role: Role::Agent(s), .. }) if s == suspect => {}
            other => {
                return Err(HarnessError::Protocol(format!(
                    "agent {suspect} handshake failed: {other:?}"
                )))
            }
        }
        agents.push(conn);
    }

    let mut log = config
        .log_path
        .as_deref()
        .map(TranscriptLog::create)
        .transpose()?;
    let mut stats = Stats::new(config.seed, config.trials);
    let mut transcripts = Vec::with_capacity(config.trials as usize);

    // Wraps a hard failure with the statistics gathered so far.
    macro_rules! fail_session {
        ($stats:expr, $err:expr) => {{
            let err = $err;
            return Err(HarnessError::Session {
                detail: err.to_string(),
                partial: Box::new($stats.clone()),
            });
        }};
    }

    for trial in 0..config.trials {
        let mut rng = trial_rng(config.seed, trial);
        let guard = config.guard_policy.draw(&mut rng);
        let mut order = RobberId::ALL;
        order.shuffle(&mut rng);

        for &suspect in &order {
            let ask = WireMessage::Ask {
                trial,
                suspect,
                side: question_for(guard, suspect),
            };
            if let Err(e) = agents[suspect.index()].send(&ask) {
                fail_session!(stats, e);
            }
        }

        let mut records: [Option<SuspectRecord>; 3] = [None, None, None];
        let mut abort: Option<String> = None;
        for (seq, &suspect) in order.iter().enumerate() {
            match recv_answer(&mut agents[suspect.index()], trial, suspect) {
                Ok(AnswerOutcome::Answered(color)) => {
                    records[suspect.index()] = Some(SuspectRecord {
                        suspect,
                        question: question_for(guard, suspect),
                        basis: None,
                        outcome: None,
                        answer: color,
                        seq: seq as u32,
                        at_micros: Some(now_micros()),
                    });
                }
                Ok(AnswerOutcome::Aborted(reason)) => {
                    abort = Some(reason);
                    break;
                }
                Err(e) => fail_session!(stats, e),
            }
        }

        if let Some(reason) = abort {
            eprintln!("trial {trial} aborted: {reason}");
            stats.record_aborted();
            continue;
        }

        let suspects = records.map(|r| r.expect("all three answered"));
        let answers = AnswerSet::new(suspects[0].answer, suspects[1].answer, suspects[2].answer);
        let verdict = verify(guard, &answers);
        let transcript = Transcript {
            trial,
            guard,
            suspects,
            verdict,
            seed: config.seed,
        };
        stats.record(&transcript);
        if let Some(log) = log.as_mut() {
            if let Err(e) = log.append(&transcript) {
                fail_session!(stats, e);
            }
        }
        transcripts.push(transcript);

        if let Some(device) = device.as_mut() {
            if let Err(e) = device.send(&WireMessage::Verdict {
                trial,
                guard,
                consistent: verdict,
            }) {
                fail_session!(stats, e);
            }
        }
    }

    if let Some(log) = log.as_mut() {
        log.flush()?;
    }
    // Dropping the connections ends the session for every peer.
    Ok(SessionResult { stats, transcripts })
}

//! Wire-traffic capture and the information-flow auditor.
//!
//! Every distributed process can append its sent and received messages to a
//! capture file (one JSON record per line). After a session the auditor
//! replays those captures and checks the property the transport graph is
//! supposed to enforce: the byte stream delivered to any agent is a function
//! of nothing but its own ASKs, its own OUTCOMEs, and the session handshake.
//! It also cross-checks verdict soundness against the transcript log and
//! groups trials by the order in which the device saw the three MEASUREs,
//! confirming empirically that arrival order does not matter.

use crate::game::RobberId;
use crate::harness::transcript::Transcript;
use crate::harness::wire::{ErrorCode, WireMessage};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::sync::{Arc, Mutex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    In,
    Out,
}

/// One captured message, in arrival/departure order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaptureRecord {
    pub seq: u64,
    pub dir: Direction,
    pub peer: String,
    pub msg: WireMessage,
}

struct CaptureInner {
    seq: u64,
    out: BufWriter<File>,
}

/// Shared, append-only capture writer. Clones share one sequence counter, so
/// a multi-threaded process gets a single totally-ordered capture.
#[derive(Clone)]
pub struct CaptureLog {
    inner: Arc<Mutex<CaptureInner>>,
}

impl CaptureLog {
    pub fn create(path: &Path) -> io::Result<Self> {
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(CaptureLog {
            inner: Arc::new(Mutex::new(CaptureInner {
                seq: 0,
                out: BufWriter::new(file),
            })),
        })
    }

    /// Appends one record, flushing the line so captures survive an abrupt
    /// process exit. Capture failures are reported but never break the
    /// protocol flow.
    pub fn record(&self, dir: Direction, peer: &str, msg: &WireMessage) {
        let mut inner = self.inner.lock().expect("capture lock");
        let record = CaptureRecord {
            seq: inner.seq,
            dir,
            peer: peer.to_string(),
            msg: msg.clone(),
        };
        inner.seq += 1;
        let result = serde_json::to_writer(&mut inner.out, &record)
            .map_err(io::Error::from)
            .and_then(|()| inner.out.write_all(b"\n"))
            .and_then(|()| inner.out.flush());
        if let Err(e) = result {
            eprintln!("capture write failed: {e}");
        }
    }
}

pub fn read_capture(path: &Path) -> io::Result<Vec<CaptureRecord>> {
    let reader = BufReader::new(File::open(path)?);
    let mut records = Vec::new();
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: CaptureRecord = serde_json::from_str(&line)
            .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
        records.push(record);
    }
    Ok(records)
}

/// What one agent's capture shows about the traffic it received and sent.
#[derive(Debug, Clone, Serialize)]
pub struct AgentAudit {
    pub suspect: RobberId,
    pub inbound_messages: u64,
    pub asks_received: u64,
    pub outcomes_received: u64,
    pub violations: Vec<String>,
}

/// Checks that an agent's inbound stream holds nothing but the handshake and
/// its own ASK/OUTCOME traffic, and that its own MEASUREs are well-formed.
pub fn audit_agent_capture(suspect: RobberId, records: &[CaptureRecord]) -> AgentAudit {
    let mut audit = AgentAudit {
        suspect,
        inbound_messages: 0,
        asks_received: 0,
        outcomes_received: 0,
        violations: Vec::new(),
    };
    let mut ask_trials = BTreeSet::new();
    let mut outcome_trials = BTreeSet::new();
    let mut measure_trials = BTreeSet::new();

    for record in records {
        match record.dir {
            Direction::In => {
                audit.inbound_messages += 1;
                match &record.msg {
                    WireMessage::Hello { .. } => {}
                    WireMessage::Ask { trial, suspect: s, .. } => {
                        audit.asks_received += 1;
                        if *s != suspect {
                            audit.violations.push(format!(
                                "seq {}: agent {suspect} received an ASK addressed to {s}",
                                record.seq
                            ));
                        }
                        if !ask_trials.insert(*trial) {
                            audit.violations.push(format!(
                                "seq {}: duplicate ASK for trial {trial}",
                                record.seq
                            ));
                        }
                    }
                    WireMessage::Outcome { trial, suspect: s, sign } => {
                        audit.outcomes_received += 1;
                        if *s != suspect {
                            audit.violations.push(format!(
                                "seq {}: agent {suspect} received an OUTCOME for {s}",
                                record.seq
                            ));
                        }
                        if !outcome_trials.insert(*trial) {
                            audit.violations.push(format!(
                                "seq {}: duplicate OUTCOME for trial {trial}",
                                record.seq
                            ));
                        }
                        if !matches!(sign, 1 | -1) {
                            audit
                                .violations
                                .push(format!("seq {}: OUTCOME sign {sign} is not ±1", record.seq));
                        }
                    }
                    other => {
                        audit.violations.push(format!(
                            "seq {}: agent {suspect} received non-agent traffic: {other:?}",
                            record.seq
                        ));
                    }
                }
            }
            Direction::Out => {
                if let WireMessage::Measure { trial, suspect: s, .. } = &record.msg {
                    if *s != suspect {
                        audit.violations.push(format!(
                            "seq {}: agent {suspect} sent a MEASURE claiming to be {s}",
                            record.seq
                        ));
                    }
                    if !measure_trials.insert(*trial) {
                        audit.violations.push(format!(
                            "seq {}: agent {suspect} sent two MEASUREs for trial {trial}",
                            record.seq
                        ));
                    }
                }
            }
        }
    }
    audit
}

/// What the device capture shows: measurement multiplicity and per-trial
/// arrival order.
#[derive(Debug, Clone, Serialize)]
pub struct DeviceAudit {
    pub measures_seen: u64,
    pub duplicates_rejected: u64,
    /// Arrival order of the suspects' measurements per trial, e.g. "BAC".
    pub arrival_orders: BTreeMap<u64, String>,
    pub violations: Vec<String>,
}

pub fn audit_device_capture(records: &[CaptureRecord]) -> DeviceAudit {
    let mut audit = DeviceAudit {
        measures_seen: 0,
        duplicates_rejected: 0,
        arrival_orders: BTreeMap::new(),
        violations: Vec::new(),
    };
    let mut seen: BTreeMap<u64, BTreeSet<RobberId>> = BTreeMap::new();
    let mut pending_dup = 0u64;

    for record in records {
        match (&record.dir, &record.msg) {
            (Direction::In, WireMessage::Measure { trial, suspect, .. }) => {
                audit.measures_seen += 1;
                let trial_seen = seen.entry(*trial).or_default();
                if trial_seen.insert(*suspect) {
                    audit
                        .arrival_orders
                        .entry(*trial)
                        .or_default()
                        .push_str(&suspect.to_string());
                } else {
                    pending_dup += 1;
                }
            }
            (Direction::Out, WireMessage::Error { code: ErrorCode::Dup, .. }) => {
                audit.duplicates_rejected += 1;
            }
            _ => {}
        }
    }
    if pending_dup != audit.duplicates_rejected {
        audit.violations.push(format!(
            "device saw {pending_dup} duplicate MEASUREs but rejected {}",
            audit.duplicates_rejected
        ));
    }
    audit
}

/// Pass statistics for one measurement arrival order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderGroup {
    pub order: String,
    pub trials: u64,
    pub passes: u64,
}

/// The combined audit of a distributed session.
#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub agents: Vec<AgentAudit>,
    pub device: Option<DeviceAudit>,
    pub transcripts_checked: u64,
    pub verdict_mismatches: u64,
    /// Trials grouped by device arrival order (needs both a device capture
    /// and transcripts).
    pub order_groups: Vec<OrderGroup>,
}

impl AuditReport {
    pub fn is_clean(&self) -> bool {
        self.verdict_mismatches == 0
            && self.agents.iter().all(|a| a.violations.is_empty())
            && self.device.as_ref().is_none_or(|d| d.violations.is_empty())
    }

    pub fn violations(&self) -> Vec<String> {
        let mut all = Vec::new();
        for agent in &self.agents {
            all.extend(agent.violations.iter().cloned());
        }
        if let Some(device) = &self.device {
            all.extend(device.violations.iter().cloned());
        }
        if self.verdict_mismatches > 0 {
            all.push(format!(
                "{} transcript verdicts disagree with recomputation",
                self.verdict_mismatches
            ));
        }
        all
    }
}

/// Audits a whole session from its artifacts.
pub fn audit_session(
    agent_captures: &BTreeMap<RobberId, Vec<CaptureRecord>>,
    device_capture: Option<&[CaptureRecord]>,
    transcripts: &[Transcript],
) -> AuditReport {
    let agents = agent_captures
        .iter()
        .map(|(suspect, records)| audit_agent_capture(*suspect, records))
        .collect();
    let device = device_capture.map(audit_device_capture);

    let verdict_mismatches = transcripts.iter().filter(|t| !t.is_sound()).count() as u64;

    let mut order_groups: BTreeMap<String, OrderGroup> = BTreeMap::new();
    if let Some(device) = &device {
        for t in transcripts {
            if let Some(order) = device.arrival_orders.get(&t.trial) {
                let group = order_groups
                    .entry(order.clone())
                    .or_insert_with(|| OrderGroup {
                        order: order.clone(),
                        trials: 0,
                        passes: 0,
                    });
                group.trials += 1;
                if t.verdict {
                    group.passes += 1;
                }
            }
        }
    }

    AuditReport {
        agents,
        device,
        transcripts_checked: transcripts.len() as u64,
        verdict_mismatches,
        order_groups: order_groups.into_values().collect(),
    }
}

//! The referee/device/agent wire protocol.
//!
//! Newline-delimited JSON, UTF-8, one message per line, with a `type` tag
//! naming the variant. Unknown fields are ignored. Every connection opens
//! with a HELLO from the dialing side, answered by a HELLO from the
//! listener; a VERDICT terminates a trial; a session ends when the stream
//! closes.
//!
//! The message set is deliberately narrow: an agent ever receives only its
//! own ASK and its own OUTCOME (plus the handshake), which is what makes the
//! no-communication discipline checkable from captured traffic.

use crate::game::{Color, GuardId, RobberId, SideView};
use crate::harness::audit::{CaptureLog, Direction};
use crate::qsim::MeasBasis;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::io::{self, Read, Write};
use std::net::TcpStream;
use std::str::FromStr;
use std::time::Duration;
use thiserror::Error;

/// A process role in the distributed session.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    Referee,
    Device,
    Agent(RobberId),
}

impl Role {
    pub const ALL: [Role; 5] = [
        Role::Referee,
        Role::Device,
        Role::Agent(RobberId::A),
        Role::Agent(RobberId::B),
        Role::Agent(RobberId::C),
    ];
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Referee => write!(f, "referee"),
            Role::Device => write!(f, "device"),
            Role::Agent(RobberId::A) => write!(f, "agent-a"),
            Role::Agent(RobberId::B) => write!(f, "agent-b"),
            Role::Agent(RobberId::C) => write!(f, "agent-c"),
        }
    }
}

impl FromStr for Role {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "referee" => Ok(Role::Referee),
            "device" => Ok(Role::Device),
            "agent-a" => Ok(Role::Agent(RobberId::A)),
            "agent-b" => Ok(Role::Agent(RobberId::B)),
            "agent-c" => Ok(Role::Agent(RobberId::C)),
            _ => Err(format!(
                "role must be referee, device, agent-a, agent-b, or agent-c, got {s:?}"
            )),
        }
    }
}

impl Serialize for Role {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Role {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Machine-readable error codes carried by ERROR messages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ErrorCode {
    /// Second measurement or question for the same (trial, suspect).
    Dup,
    /// Sender or subject does not match the connection's HELLO role.
    Role,
    /// Peer did not answer in time.
    Timeout,
    /// Anything else that breaks the protocol.
    Protocol,
}

/// One protocol message, tagged by `type`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum WireMessage {
    #[serde(rename = "HELLO")]
    Hello { role: Role, session: String },
    #[serde(rename = "ASK")]
    Ask {
        trial: u64,
        suspect: RobberId,
        side: SideView,
    },
    #[serde(rename = "MEASURE")]
    Measure {
        trial: u64,
        suspect: RobberId,
        basis: MeasBasis,
    },
    #[serde(rename = "OUTCOME")]
    Outcome {
        trial: u64,
        suspect: RobberId,
        sign: i8,
    },
    #[serde(rename = "ANSWER")]
    Answer {
        trial: u64,
        suspect: RobberId,
        color: Color,
    },
    #[serde(rename = "VERDICT")]
    Verdict {
        trial: u64,
        guard: GuardId,
        consistent: bool,
    },
    #[serde(rename = "ERROR")]
    Error { code: ErrorCode, detail: String },
}

#[derive(Debug, Error)]
pub enum WireError {
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("malformed message: {0}")]
    Json(#[from] serde_json::Error),
    #[error("read timed out")]
    Timeout,
}

/// A framed NDJSON connection with timeout-safe reads.
///
/// Bytes read before a timeout stay buffered, so a late line is still parsed
/// whole on the next call instead of being torn.
pub struct Connection {
    stream: TcpStream,
    buf: Vec<u8>,
    peer: String,
    capture: Option<CaptureLog>,
}

impl Connection {
    pub fn new(stream: TcpStream, capture: Option<CaptureLog>) -> io::Result<Self> {
        stream.set_nodelay(true)?;
        let peer = stream
            .peer_addr()
            .map(|a| a.to_string())
            .unwrap_or_else(|_| "unknown".to_string());
        Ok(Connection {
            stream,
            buf: Vec::new(),
            peer,
            capture,
        })
    }

    pub fn connect(addr: &str, capture: Option<CaptureLog>) -> io::Result<Self> {
        Connection::new(TcpStream::connect(addr)?, capture)
    }

    /// Label used for this peer in capture records; set it once the HELLO
    /// names the role.
    pub fn set_peer_label(&mut self, label: impl Into<String>) {
        self.peer = label.into();
    }

    pub fn peer_label(&self) -> &str {
        &self.peer
    }

    pub fn set_read_timeout(&self, timeout: Option<Duration>) -> io::Result<()> {
        self.stream.set_read_timeout(timeout)
    }

    pub fn send(&mut self, msg: &WireMessage) -> Result<(), WireError> {
        let mut line = serde_json::to_vec(msg)?;
        line.push(b'\n');
        self.stream.write_all(&line)?;
        if let Some(capture) = &self.capture {
            capture.record(Direction::Out, &self.peer, msg);
        }
        Ok(())
    }

    /// Receives the next message. `Ok(None)` means the peer closed the
    /// stream; `Err(WireError::Timeout)` means the read timeout elapsed
    /// (already-read bytes remain buffered).
    pub fn recv(&mut self) -> Result<Option<WireMessage>, WireError> {
        loop {
            if let Some(pos) = self.buf.iter().position(|&b| b == b'\n') {
                let line: Vec<u8> = self.buf.drain(..=pos).collect();
                let line = &line[..line.len() - 1];
                if line.iter().all(|b| b.is_ascii_whitespace()) {
                    continue;
                }
                let msg: WireMessage = serde_json::from_slice(line)?;
                if let Some(capture) = &self.capture {
                    capture.record(Direction::In, &self.peer, &msg);
                }
                return Ok(Some(msg));
            }
            let mut chunk = [0u8; 4096];
            match self.stream.read(&mut chunk) {
                Ok(0) => return Ok(None),
                Ok(n) => self.buf.extend_from_slice(&chunk[..n]),
                Err(e) if matches!(e.kind(), io::ErrorKind::WouldBlock | io::ErrorKind::TimedOut) => {
                    return Err(WireError::Timeout)
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
}

/// Dials `addr`, retrying while the listener comes up.
pub fn connect_with_retry(
    addr: &str,
    attempts: u32,
    delay: Duration,
    capture: Option<CaptureLog>,
) -> io::Result<Connection> {
    let mut last_err = None;
    for _ in 0..attempts.max(1) {
        match TcpStream::connect(addr) {
            Ok(stream) => return Connection::new(stream, capture),
            Err(e) => {
                last_err = Some(e);
                std::thread::sleep(delay);
            }
        }
    }
    Err(last_err.unwrap_or_else(|| io::Error::other("no connection attempts made")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn message_field_names_are_stable() {
        let cases = [
            (
                WireMessage::Hello {
                    role: Role::Agent(RobberId::B),
                    session: "s1".into(),
                },
                r#"{"type":"HELLO","role":"agent-b","session":"s1"}"#,
            ),
            (
                WireMessage::Ask {
                    trial: 3,
                    suspect: RobberId::A,
                    side: SideView::Back,
                },
                r#"{"type":"ASK","trial":3,"suspect":"A","side":"Back"}"#,
            ),
            (
                WireMessage::Measure {
                    trial: 3,
                    suspect: RobberId::A,
                    basis: MeasBasis::X,
                },
                r#"{"type":"MEASURE","trial":3,"suspect":"A","basis":"X"}"#,
            ),
            (
                WireMessage::Outcome {
                    trial: 3,
                    suspect: RobberId::A,
                    sign: -1,
                },
                r#"{"type":"OUTCOME","trial":3,"suspect":"A","sign":-1}"#,
            ),
            (
                WireMessage::Answer {
                    trial: 3,
                    suspect: RobberId::A,
                    color: Color::Green,
                },
                r#"{"type":"ANSWER","trial":3,"suspect":"A","color":"Green"}"#,
            ),
            (
                WireMessage::Verdict {
                    trial: 3,
                    guard: GuardId::G2,
                    consistent: true,
                },
                r#"{"type":"VERDICT","trial":3,"guard":2,"consistent":true}"#,
            ),
            (
                WireMessage::Error {
                    code: ErrorCode::Dup,
                    detail: "second MEASURE".into(),
                },
                r#"{"type":"ERROR","code":"DUP","detail":"second MEASURE"}"#,
            ),
        ];
        for (msg, expected) in cases {
            assert_eq!(serde_json::to_string(&msg).unwrap(), expected);
            let back: WireMessage = serde_json::from_str(expected).unwrap();
            assert_eq!(back, msg);
        }
    }

    #[test]
    fn unknown_fields_are_ignored() {
        let line = r#"{"type":"ASK","trial":1,"suspect":"C","side":"Front","hint":"ignore me"}"#;
        let msg: WireMessage = serde_json::from_str(line).unwrap();
        assert_eq!(
            msg,
            WireMessage::Ask {
                trial: 1,
                suspect: RobberId::C,
                side: SideView::Front,
            }
        );
    }

    #[test]
    fn role_strings_round_trip() {
        for role in Role::ALL {
            let s = role.to_string();
            assert_eq!(s.parse::<Role>().unwrap(), role);
        }
        assert!("burglar".parse::<Role>().is_err());
    }

    #[test]
    fn connection_frames_lines() {
        use std::net::TcpListener;

        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = listener.local_addr().unwrap();
        let handle = std::thread::spawn(move || {
            let (stream, _) = listener.accept().unwrap();
            let mut conn = Connection::new(stream, None).unwrap();
            let mut got = Vec::new();
            while let Some(msg) = conn.recv().unwrap() {
                got.push(msg);
            }
            got
        });

        let mut conn = Connection::connect(&addr.to_string(), None).unwrap();
        let messages = [
            WireMessage::Hello {
                role: Role::Referee,
                session: "x".into(),
            },
            WireMessage::Verdict {
                trial: 0,
                guard: GuardId::G1,
                consistent: true,
            },
        ];
        for msg in &messages {
            conn.send(msg).unwrap();
        }
        drop(conn);
        assert_eq!(handle.join().unwrap(), messages);
    }
}

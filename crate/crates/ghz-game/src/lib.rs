//! Three suspects, four guards, one question each.
//!
//! This crate simulates a cooperative parity game in which a referee tests
//! one of four parity statements by asking each of three separated players a
//! single private question. Exhaustive search shows that no classical
//! no-communication strategy can satisfy the referee every time, while three
//! qubits prepared in the GHZ state `(|↑↑↑⟩ − |↓↓↓⟩)/√2` and measured in the
//! X or Y basis succeed with probability 1.
//!
//! The crate is organized around five modules:
//!
//! - [`qsim`] — exact three-qubit state-vector simulation: GHZ preparation,
//!   single-qubit projective measurement in the X/Y basis, Born-rule
//!   probabilities, and post-measurement collapse.
//! - [`game`] — the rules: which side of each robber each guard saw, the
//!   parity each guard asserts, and the verdict predicate.
//! - [`oracle`] — exhaustive classical analysis: joint unsatisfiability of
//!   the four statements, testability of a single statement, and the optimal
//!   deterministic strategy (game value 3/4).
//! - [`strategy`] — the quantum strategy: question → basis → answer mapping
//!   and single-use measurement handles.
//! - [`harness`] — orchestration: seeded local trial runs, a four-process
//!   wire protocol that structurally prevents player-to-player
//!   communication, statistics, a traffic auditor, and the CLI.
//!
//! Start with the runnable examples (`cargo run --example <name>`); each one
//! demonstrates a single capability end to end. The `ghz-game` binary
//! exposes the same functionality as subcommands.

pub mod game;
pub mod harness;
pub mod oracle;
pub mod qsim;
pub mod strategy;

pub use game::{AnswerSet, Color, GuardId, RobberId, SideView};
pub use qsim::{BasisTriple, MeasBasis, MeasOutcome, QubitId, StateVector};

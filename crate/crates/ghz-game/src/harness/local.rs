//! Single-process sessions.
//!
//! A local trial plays the whole game in one thread: draw the guard, shuffle
//! the order in which the suspects answer (the guarantee does not depend on
//! it), measure through the shared register, and verify. Everything is
//! derived from the per-trial random stream, so a config reruns to identical
//! transcripts.

use crate::game::{question_for, verify, GuardId, RobberId};
use crate::harness::register::SharedRegister;
use crate::harness::rng::trial_rng;
use crate::harness::stats::Stats;
use crate::harness::transcript::{SuspectRecord, Transcript, TranscriptLog};
use crate::harness::{HarnessError, Mode, SessionConfig, StrategyKind};
use crate::oracle::{classical_game_value, DeterministicStrategy};
use crate::strategy::{basis_for_question, AgentHandle};
use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

/// A finished session: the aggregate counters and every completed trial.
#[derive(Debug, Clone)]
pub struct SessionResult {
    pub stats: Stats,
    pub transcripts: Vec<Transcript>,
}

fn shuffled_order(rng: &mut ChaCha8Rng) -> [RobberId; 3] {
    let mut order = RobberId::ALL;
    order.shuffle(rng);
    order
}

/// Plays one quantum game in-process: prepares the GHZ register, asks the
/// three questions for `guard`, answers via the gadget strategy, and records
/// the verdict. The verdict is always true.
pub fn run_local_game(trial: u64, seed: u64, guard: GuardId, rng: &mut ChaCha8Rng) -> Transcript {
    let order = shuffled_order(rng);
    let mut register = SharedRegister::ghz(&mut *rng);
    let mut records: [Option<SuspectRecord>; 3] = [None, None, None];
    for (seq, &suspect) in order.iter().enumerate() {
        let side = question_for(guard, suspect);
        let mut handle = AgentHandle::new(suspect);
        let answer = handle
            .quantum_answer(side, &mut register)
            .expect("fresh handle and register");
        records[suspect.index()] = Some(SuspectRecord {
            suspect,
            question: side,
            basis: Some(basis_for_question(side)),
            // The outcome sign equals the answer sign: +1 is spoken as red.
            outcome: Some(answer.sign()),
            answer,
            seq: seq as u32,
            at_micros: None,
        });
    }
    let suspects = records.map(|r| r.expect("every suspect answered"));
    let verdict = verify(
        guard,
        &crate::game::AnswerSet::new(suspects[0].answer, suspects[1].answer, suspects[2].answer),
    );
    Transcript {
        trial,
        guard,
        suspects,
        verdict,
        seed,
    }
}

/// Plays one game with a deterministic classical strategy.
fn run_classical_game(
    trial: u64,
    seed: u64,
    guard: GuardId,
    strategy: DeterministicStrategy,
    rng: &mut ChaCha8Rng,
) -> Transcript {
    let order = shuffled_order(rng);
    let mut records: [Option<SuspectRecord>; 3] = [None, None, None];
    for (seq, &suspect) in order.iter().enumerate() {
        let side = question_for(guard, suspect);
        let answer = strategy.answer(suspect, side);
        records[suspect.index()] = Some(SuspectRecord {
            suspect,
            question: side,
            basis: None,
            outcome: None,
            answer,
            seq: seq as u32,
            at_micros: None,
        });
    }
    let suspects = records.map(|r| r.expect("every suspect answered"));
    let verdict = verify(guard, &strategy.answers_for(guard));
    Transcript {
        trial,
        guard,
        suspects,
        verdict,
        seed,
    }
}

/// Runs a full session and returns the statistics. Distributed configs are
/// delegated to the referee.
pub fn run_trials(config: &SessionConfig) -> Result<Stats, HarnessError> {
    run_session(config).map(|result| result.stats)
}

/// Runs a full session, keeping the per-trial transcripts.
pub fn run_session(config: &SessionConfig) -> Result<SessionResult, HarnessError> {
    config.validate()?;
    match config.mode {
        Mode::Local => run_local_session(config),
        Mode::Distributed => crate::harness::referee::referee_run(config),
    }
}

fn run_local_session(config: &SessionConfig) -> Result<SessionResult, HarnessError> {
    let mut log = config
        .log_path
        .as_deref()
        .map(TranscriptLog::create)
        .transpose()?;
    let fixed_strategy = match config.strategy {
        StrategyKind::Quantum => None,
        StrategyKind::ClassicalBest => Some(classical_game_value().witness),
        StrategyKind::Classical(s) => Some(s),
    };

    let mut stats = Stats::new(config.seed, config.trials);
    let mut transcripts = Vec::with_capacity(config.trials as usize);
    for trial in 0..config.trials {
        let mut rng = trial_rng(config.seed, trial);
        let guard = config.guard_policy.draw(&mut rng);
        let transcript = match fixed_strategy {
            None => run_local_game(trial, config.seed, guard, &mut rng),
            Some(strategy) => run_classical_game(trial, config.seed, guard, strategy, &mut rng),
        };
        debug_assert!(transcript.is_sound());
        stats.record(&transcript);
        if let Some(log) = log.as_mut() {
            log.append(&transcript)?;
        }
        transcripts.push(transcript);
    }
    if let Some(log) = log.as_mut() {
        log.flush()?;
    }
    Ok(SessionResult { stats, transcripts })
}

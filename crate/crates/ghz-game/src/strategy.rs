//! The suspects' quantum strategy.
//!
//! Each suspect carries a gadget with two buttons wired to one qubit of the
//! shared register. A question about the front of the suit maps to the lock
//! button and a Y-basis measurement; a question about the back maps to the
//! unlock button and an X-basis measurement. Outcome `+1` is answered "red",
//! `−1` "green". The handle enforces the one-question-per-game rule: it can
//! trigger exactly one measurement.
//!
//! Note the gadget's fiction assigns buttons inconsistently in different
//! tellings; the side → basis map used here (front → Y, back → X) is the one
//! that makes the strategy work, and the button labels follow it.

use crate::game::{Color, RobberId, SideView};
use crate::qsim::{MeasBasis, MeasOutcome, QubitId};
use thiserror::Error;

/// A gadget button.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Button {
    Lock,
    Unlock,
}

/// The button a suspect presses for a question: front → lock, back → unlock.
pub fn side_to_button(side: SideView) -> Button {
    match side {
        SideView::Front => Button::Lock,
        SideView::Back => Button::Unlock,
    }
}

/// The measurement a button triggers: lock → Y, unlock → X.
pub fn button_to_basis(button: Button) -> MeasBasis {
    match button {
        Button::Lock => MeasBasis::Y,
        Button::Unlock => MeasBasis::X,
    }
}

/// The basis measured for a question: front → Y, back → X.
pub fn basis_for_question(side: SideView) -> MeasBasis {
    button_to_basis(side_to_button(side))
}

/// The spoken answer for a measurement outcome: `+1` → red, `−1` → green.
pub fn color_for_outcome(outcome: MeasOutcome) -> Color {
    match outcome {
        MeasOutcome::Plus => Color::Red,
        MeasOutcome::Minus => Color::Green,
    }
}

/// The qubit of the shared register carried by a suspect.
pub fn qubit_for(suspect: RobberId) -> QubitId {
    match suspect {
        RobberId::A => QubitId::A,
        RobberId::B => QubitId::B,
        RobberId::C => QubitId::C,
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DeviceError {
    #[error("qubit {qubit} was already measured this game")]
    Duplicate { qubit: QubitId },
    #[error("measurement rejected: {0}")]
    Rejected(String),
    #[error("timed out: {0}")]
    Timeout(String),
    #[error("device unreachable: {0}")]
    Transport(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StrategyError {
    #[error("suspect {suspect}'s handle was already used this game")]
    HandleUsed { suspect: RobberId },
    #[error(transparent)]
    Device(#[from] DeviceError),
}

/// Anything that can measure one qubit of the shared register: the
/// in-process register in local mode, or a wire client talking to the device
/// process in distributed mode.
pub trait MeasurementDevice {
    fn measure(&mut self, qubit: QubitId, basis: MeasBasis) -> Result<MeasOutcome, DeviceError>;
}

/// A suspect's single-use right to measure their own qubit.
///
/// One handle exists per suspect per game, and a handle can measure only its
/// own qubit, exactly once. Handles are single-owner; answer computation is
/// pure given the outcome.
#[derive(Debug)]
pub struct AgentHandle {
    suspect: RobberId,
    used: bool,
}

impl AgentHandle {
    pub fn new(suspect: RobberId) -> Self {
        AgentHandle {
            suspect,
            used: false,
        }
    }

    pub fn suspect(&self) -> RobberId {
        self.suspect
    }

    pub fn is_used(&self) -> bool {
        self.used
    }

    /// Answers a question by pressing the gadget: measures this suspect's
    /// qubit in [`basis_for_question`] and speaks [`color_for_outcome`].
    /// Pressing consumes the handle's single-use right; a second call is a
    /// protocol violation.
    pub fn quantum_answer<D: MeasurementDevice>(
        &mut self,
        side: SideView,
        device: &mut D,
    ) -> Result<Color, StrategyError> {
        if self.used {
            return Err(StrategyError::HandleUsed {
                suspect: self.suspect,
            });
        }
        self.used = true;
        let outcome = device.measure(qubit_for(self.suspect), basis_for_question(side))?;
        Ok(color_for_outcome(outcome))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{question_for, verify, AnswerSet, GuardId};
    use crate::qsim::StateVector;
    use std::collections::VecDeque;

    /// Test device over an in-process register with scripted uniform draws.
    struct ScriptedDevice {
        state: StateVector,
        draws: VecDeque<f64>,
        measured: [bool; 3],
    }

    impl ScriptedDevice {
        fn ghz(draws: &[f64]) -> Self {
            ScriptedDevice {
                state: StateVector::ghz(),
                draws: draws.iter().copied().collect(),
                measured: [false; 3],
            }
        }
    }

    impl MeasurementDevice for ScriptedDevice {
        fn measure(&mut self, qubit: QubitId, basis: MeasBasis) -> Result<MeasOutcome, DeviceError> {
            if self.measured[qubit.index()] {
                return Err(DeviceError::Duplicate { qubit });
            }
            self.measured[qubit.index()] = true;
            let u = self.draws.pop_front().expect("scripted draw available");
            let (outcome, post) = self
                .state
                .measure_qubit(qubit, basis, u)
                .map_err(|e| DeviceError::Rejected(e.to_string()))?;
            self.state = post;
            Ok(outcome)
        }
    }

    #[test]
    fn question_to_basis_mapping() {
        assert_eq!(basis_for_question(SideView::Front), MeasBasis::Y);
        assert_eq!(basis_for_question(SideView::Back), MeasBasis::X);
        assert_eq!(side_to_button(SideView::Front), Button::Lock);
        assert_eq!(side_to_button(SideView::Back), Button::Unlock);
    }

    #[test]
    fn outcome_to_color_mapping() {
        assert_eq!(color_for_outcome(MeasOutcome::Plus), Color::Red);
        assert_eq!(color_for_outcome(MeasOutcome::Minus), Color::Green);
        // Round trip through the sign encoding is the identity.
        for outcome in MeasOutcome::BOTH {
            assert_eq!(color_for_outcome(outcome).sign(), outcome.sign());
        }
    }

    #[test]
    fn worked_example_guard_one() {
        // Testing guard 1 asks A:Back, B:Front, C:Front. With draws that
        // select +1 for A and B, all three answers come out red and the
        // register walks through the projection chain.
        let mut device = ScriptedDevice::ghz(&[0.2, 0.3, 0.9]);
        let guard = GuardId::G1;

        let mut answers = Vec::new();
        for suspect in RobberId::ALL {
            let mut handle = AgentHandle::new(suspect);
            let side = question_for(guard, suspect);
            answers.push(handle.quantum_answer(side, &mut device).unwrap());
        }
        assert_eq!(answers, vec![Color::Red, Color::Red, Color::Red]);
        assert!(verify(guard, &AnswerSet::new(answers[0], answers[1], answers[2])));
    }

    #[test]
    fn handle_is_single_use() {
        let mut device = ScriptedDevice::ghz(&[0.2, 0.2]);
        let mut handle = AgentHandle::new(RobberId::A);
        handle.quantum_answer(SideView::Back, &mut device).unwrap();
        let err = handle.quantum_answer(SideView::Back, &mut device).unwrap_err();
        assert_eq!(err, StrategyError::HandleUsed { suspect: RobberId::A });
    }

    #[test]
    fn device_rejects_duplicate_measurement() {
        let mut device = ScriptedDevice::ghz(&[0.2, 0.2]);
        let mut first = AgentHandle::new(RobberId::B);
        first.quantum_answer(SideView::Front, &mut device).unwrap();
        // A fresh handle cannot re-measure an already-consumed qubit either.
        let mut second = AgentHandle::new(RobberId::B);
        let err = second.quantum_answer(SideView::Front, &mut device).unwrap_err();
        assert_eq!(
            err,
            StrategyError::Device(DeviceError::Duplicate { qubit: QubitId::B })
        );
    }

    #[test]
    fn guarantee_holds_for_every_guard_and_order() {
        // Exhaustive over guards, measurement orders, and the 8 draw sign
        // patterns that can influence outcomes.
        let orders: [[usize; 3]; 6] = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        for guard in GuardId::ALL {
            for order in orders {
                for pattern in 0..8u8 {
                    let draws: Vec<f64> = (0..3)
                        .map(|i| if pattern >> i & 1 == 0 { 0.25 } else { 0.75 })
                        .collect();
                    let mut device = ScriptedDevice::ghz(&draws);
                    let mut answers = [Color::Red; 3];
                    for &slot in &order {
                        let suspect = RobberId::ALL[slot];
                        let mut handle = AgentHandle::new(suspect);
                        let side = question_for(guard, suspect);
                        answers[slot] = handle.quantum_answer(side, &mut device).unwrap();
                    }
                    let set = AnswerSet::new(answers[0], answers[1], answers[2]);
                    assert!(
                        verify(guard, &set),
                        "guard {guard}, order {order:?}, pattern {pattern:03b}"
                    );
                }
            }
        }
    }
}

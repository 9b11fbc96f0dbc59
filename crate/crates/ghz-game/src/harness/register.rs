//! The shared three-qubit register behind a measurement capability.
//!
//! This is the one nonlocal element of the whole setup: measuring one qubit
//! collapses the joint state the other measurements see. The register owns
//! the session randomness (the simulation core takes explicit draws), and it
//! enforces the at-most-one-measurement-per-qubit rule that the wire
//! protocol promises per trial.

use crate::qsim::{MeasBasis, MeasOutcome, QubitId, StateVector};
use crate::strategy::{DeviceError, MeasurementDevice};
use rand::Rng;

#[derive(Debug)]
pub struct SharedRegister<R> {
    state: StateVector,
    rng: R,
    measured: [bool; 3],
}

impl<R: Rng> SharedRegister<R> {
    /// A fresh register in the GHZ state.
    pub fn ghz(rng: R) -> Self {
        SharedRegister {
            state: StateVector::ghz(),
            rng,
            measured: [false; 3],
        }
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn is_measured(&self, qubit: QubitId) -> bool {
        self.measured[qubit.index()]
    }

    /// True once all three qubits have been measured.
    pub fn is_complete(&self) -> bool {
        self.measured.iter().all(|&m| m)
    }
}

impl<R: Rng> MeasurementDevice for SharedRegister<R> {
    fn measure(&mut self, qubit: QubitId, basis: MeasBasis) -> Result<MeasOutcome, DeviceError> {
        if self.measured[qubit.index()] {
            return Err(DeviceError::Duplicate { qubit });
        }
        let u: f64 = self.rng.random();
        let (outcome, post) = self
            .state
            .measure_qubit(qubit, basis, u)
            .map_err(|e| DeviceError::Rejected(e.to_string()))?;
        self.measured[qubit.index()] = true;
        self.state = post;
        Ok(outcome)
    }
}

//! Exact state-vector simulation of a three-qubit register.
//!
//! The register is fixed at three qubits (dimension 8); there is no general
//! n-qubit engine because the game needs exactly three spin-half systems.
//! Amplitudes are indexed by the basis label `(s_A, s_B, s_C)` with
//! `index = 4·bit(s_A) + 2·bit(s_B) + bit(s_C)`, `bit(up) = 0`,
//! `bit(down) = 1`.
//!
//! Measurements are projective, in the X basis `{|→⟩, |←⟩}` or the Y basis
//! `{|⊗⟩, |⊙⟩}` with the phase convention `|⊗⟩ = (|↑⟩ + i|↓⟩)/√2` (adjoints
//! conjugate the `i`). Renormalization divides by the computed norm of the
//! projected state, which is correct for any outcome probability.
//!
//! The module holds no randomness: measurement takes an externally supplied
//! uniform draw in `[0, 1)`, so determinism and seed policy stay with the
//! caller.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use thiserror::Error;

/// Tolerance for amplitude-level checks (normalization, global-phase equality).
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Tolerance for comparing probability distributions entrywise.
pub const DISTRIBUTION_TOLERANCE: f64 = 1e-9;

const DIM: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QsimError {
    #[error("state vector is not normalized: squared norm = {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },
    #[error("amplitude at index {index} is not finite")]
    NonFiniteAmplitude { index: usize },
    #[error("uniform draw {value} lies outside [0, 1)")]
    DrawOutOfRange { value: f64 },
}

/// One of the three qubits of the shared register, named after the suspect
/// who carries it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum QubitId {
    A,
    B,
    C,
}

impl QubitId {
    pub const ALL: [QubitId; 3] = [QubitId::A, QubitId::B, QubitId::C];

    pub fn index(self) -> usize {
        match self {
            QubitId::A => 0,
            QubitId::B => 1,
            QubitId::C => 2,
        }
    }

    /// Bit weight of this qubit in the amplitude index (A is the high bit).
    fn weight(self) -> usize {
        4 >> self.index()
    }
}

impl fmt::Display for QubitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QubitId::A => write!(f, "A"),
            QubitId::B => write!(f, "B"),
            QubitId::C => write!(f, "C"),
        }
    }
}

/// Measurement basis: X is `{|→⟩, |←⟩}`, Y is `{|⊗⟩, |⊙⟩}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MeasBasis {
    X,
    Y,
}

impl fmt::Display for MeasBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasBasis::X => write!(f, "X"),
            MeasBasis::Y => write!(f, "Y"),
        }
    }
}

/// Measurement outcome sign. `Plus` is `|→⟩` in the X basis and `|⊗⟩` in the
/// Y basis; `Minus` is `|←⟩` / `|⊙⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MeasOutcome {
    Plus,
    Minus,
}

impl MeasOutcome {
    pub const BOTH: [MeasOutcome; 2] = [MeasOutcome::Plus, MeasOutcome::Minus];

    pub fn sign(self) -> i8 {
        match self {
            MeasOutcome::Plus => 1,
            MeasOutcome::Minus => -1,
        }
    }

    pub fn from_sign(sign: i8) -> Option<Self> {
        match sign {
            1 => Some(MeasOutcome::Plus),
            -1 => Some(MeasOutcome::Minus),
            _ => None,
        }
    }

    fn index(self) -> usize {
        match self {
            MeasOutcome::Plus => 0,
            MeasOutcome::Minus => 1,
        }
    }
}

impl fmt::Display for MeasOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasOutcome::Plus => write!(f, "+1"),
            MeasOutcome::Minus => write!(f, "-1"),
        }
    }
}

/// A unit vector on a single qubit (two amplitudes).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitVector {
    amps: [Complex64; 2],
}

impl QubitVector {
    pub fn new(amps: [Complex64; 2]) -> Result<Self, QsimError> {
        for (index, a) in amps.iter().enumerate() {
            if !(a.re.is_finite() && a.im.is_finite()) {
                return Err(QsimError::NonFiniteAmplitude { index });
            }
        }
        let norm_sqr = amps[0].norm_sqr() + amps[1].norm_sqr();
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(QsimError::NotNormalized { norm_sqr });
        }
        Ok(QubitVector { amps })
    }

    pub fn amp(self, bit: usize) -> Complex64 {
        self.amps[bit]
    }
}

/// The two basis vectors of a measurement basis, `[plus, minus]`.
///
/// X yields `(1, 1)/√2` and `(1, −1)/√2`; Y yields `(1, i)/√2` and
/// `(1, −i)/√2`. The first element corresponds to the `+1` outcome.
pub fn basis_vectors(basis: MeasBasis) -> [QubitVector; 2] {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let hi = Complex64::new(0.0, FRAC_1_SQRT_2);
    match basis {
        MeasBasis::X => [
            QubitVector { amps: [h, h] },
            QubitVector { amps: [h, -h] },
        ],
        MeasBasis::Y => [
            QubitVector { amps: [h, hi] },
            QubitVector { amps: [h, -hi] },
        ],
    }
}

/// The single basis vector selected by `(basis, outcome)`.
pub fn basis_vector(basis: MeasBasis, outcome: MeasOutcome) -> QubitVector {
    basis_vectors(basis)[outcome.index()]
}

/// A measurement basis for each of the three qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisTriple {
    bases: [MeasBasis; 3],
}

impl BasisTriple {
    pub fn new(a: MeasBasis, b: MeasBasis, c: MeasBasis) -> Self {
        BasisTriple { bases: [a, b, c] }
    }

    pub fn get(self, qubit: QubitId) -> MeasBasis {
        self.bases[qubit.index()]
    }
}

impl fmt::Display for BasisTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.bases[0], self.bases[1], self.bases[2])
    }
}

/// The state of the three-qubit register: 8 complex amplitudes, unit norm.
///
/// Values are immutable after construction; every operation is a pure
/// function of its inputs, so sharing across threads needs no
/// synchronization. Sequencing of dependent measurements is the caller's
/// responsibility.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector {
    amps: [Complex64; DIM],
}

impl StateVector {
    /// The GHZ state `(|↑↑↑⟩ − |↓↓↓⟩)/√2`.
    pub fn ghz() -> Self {
        let mut amps = [Complex64::ZERO; DIM];
        amps[0] = Complex64::new(FRAC_1_SQRT_2, 0.0);
        amps[7] = Complex64::new(-FRAC_1_SQRT_2, 0.0);
        StateVector { amps }
    }

    /// Builds a state from explicit amplitudes, rejecting non-finite entries
    /// and vectors whose squared norm is not 1 within [`NORM_TOLERANCE`].
    pub fn from_amplitudes(amps: [Complex64; DIM]) -> Result<Self, QsimError> {
        for (index, a) in amps.iter().enumerate() {
            if !(a.re.is_finite() && a.im.is_finite()) {
                return Err(QsimError::NonFiniteAmplitude { index });
            }
        }
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(QsimError::NotNormalized { norm_sqr });
        }
        Ok(StateVector { amps })
    }

    /// The product state `a ⊗ b ⊗ c` of three single-qubit unit vectors.
    pub fn product(a: QubitVector, b: QubitVector, c: QubitVector) -> Self {
        let mut amps = [Complex64::ZERO; DIM];
        for (i, amp) in amps.iter_mut().enumerate() {
            *amp = a.amp(i >> 2) * b.amp((i >> 1) & 1) * c.amp(i & 1);
        }
        let state = StateVector { amps };
        debug_assert!((state.norm_sqr() - 1.0).abs() <= NORM_TOLERANCE);
        state
    }

    pub fn amplitudes(&self) -> &[Complex64; DIM] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Projects onto `(basis, outcome)` of `qubit` without renormalizing.
    /// Returns the projected amplitudes and their squared norm (the Born
    /// probability of the outcome).
    fn project(
        &self,
        qubit: QubitId,
        basis: MeasBasis,
        outcome: MeasOutcome,
    ) -> ([Complex64; DIM], f64) {
        let v = basis_vector(basis, outcome);
        let w = qubit.weight();
        let mut out = [Complex64::ZERO; DIM];
        let mut prob = 0.0;
        for rest in 0..DIM {
            if rest & w != 0 {
                continue;
            }
            // Component of the state along |v⟩ for this configuration of the
            // other two qubits; the adjoint conjugates the amplitudes.
            let component =
                v.amp(0).conj() * self.amps[rest] + v.amp(1).conj() * self.amps[rest | w];
            prob += component.norm_sqr();
            out[rest] = v.amp(0) * component;
            out[rest | w] = v.amp(1) * component;
        }
        (out, prob)
    }

    /// Born-rule probability of observing `outcome` when measuring `qubit`
    /// in `basis`. The two outcomes of any `(qubit, basis)` pair sum to 1
    /// within [`NORM_TOLERANCE`].
    pub fn outcome_probability(
        &self,
        qubit: QubitId,
        basis: MeasBasis,
        outcome: MeasOutcome,
    ) -> f64 {
        let (_, prob) = self.project(qubit, basis, outcome);
        prob.clamp(0.0, 1.0)
    }

    /// Measures `qubit` in `basis`, deciding the outcome with the uniform
    /// draw `u ∈ [0, 1)`: the result is `+1` iff `u` is below the `+1`
    /// outcome probability. Returns the outcome and the projected,
    /// renormalized post-measurement state.
    ///
    /// Repeating the measurement on the post-state yields the same outcome
    /// with probability 1 and leaves the state fixed up to global phase.
    pub fn measure_qubit(
        &self,
        qubit: QubitId,
        basis: MeasBasis,
        u: f64,
    ) -> Result<(MeasOutcome, StateVector), QsimError> {
        if !(0.0..1.0).contains(&u) {
            return Err(QsimError::DrawOutOfRange { value: u });
        }
        let p_plus = self.outcome_probability(qubit, basis, MeasOutcome::Plus);
        let outcome = if u < p_plus {
            MeasOutcome::Plus
        } else {
            MeasOutcome::Minus
        };
        // The selected branch always has positive probability: u < p_plus
        // forces p_plus > 0, and u >= p_plus forces p_minus >= 1 - u > 0.
        let (mut amps, prob) = self.project(qubit, basis, outcome);
        let scale = 1.0 / prob.sqrt();
        for a in &mut amps {
            *a *= scale;
        }
        Ok((outcome, StateVector { amps }))
    }

    /// Joint outcome distribution of measuring all three qubits in the given
    /// bases, computed by sequential collapse in the order A, B, C. The
    /// result is independent of that internal order; see
    /// [`StateVector::joint_distribution_ordered`] to check any other order.
    pub fn joint_distribution(&self, bases: BasisTriple) -> JointDistribution {
        self.joint_distribution_ordered(bases, QubitId::ALL)
    }

    /// Joint outcome distribution computed by sequential collapse in an
    /// explicit qubit order. All 6 orders agree entrywise within
    /// [`DISTRIBUTION_TOLERANCE`].
    pub fn joint_distribution_ordered(
        &self,
        bases: BasisTriple,
        order: [QubitId; 3],
    ) -> JointDistribution {
        let mut probs = [0.0f64; DIM];
        for (cell, prob_slot) in probs.iter_mut().enumerate() {
            let outcomes = outcome_triple(cell);
            let mut state = *self;
            let mut prob = 1.0;
            for qubit in order {
                let o = outcomes[qubit.index()];
                let (amps, p) = state.project(qubit, bases.get(qubit), o);
                if p == 0.0 {
                    prob = 0.0;
                    break;
                }
                prob *= p;
                let scale = 1.0 / p.sqrt();
                let mut amps = amps;
                for a in &mut amps {
                    *a *= scale;
                }
                state = StateVector { amps };
            }
            *prob_slot = prob;
        }
        JointDistribution { probs }
    }

    /// True iff there is a unit-modulus scalar `c` with `‖self − c·other‖ ≤ tol`.
    pub fn equal_up_to_global_phase(&self, other: &StateVector, tol: f64) -> bool {
        let overlap: Complex64 = self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum();
        // The minimizing unit scalar is conj(⟨a|b⟩)/|⟨a|b⟩|. Summing the
        // residual directly keeps full precision near zero, where the
        // closed form 2 − 2|⟨a|b⟩| would cancel catastrophically.
        let c = if overlap.norm() == 0.0 {
            Complex64::ONE
        } else {
            overlap.conj() / overlap.norm()
        };
        let dist_sqr: f64 = self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| (a - c * b).norm_sqr())
            .sum();
        dist_sqr.sqrt() <= tol
    }
}

/// Joint probability over the 8 outcome triples `(o_A, o_B, o_C)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointDistribution {
    probs: [f64; DIM],
}

fn outcome_triple(cell: usize) -> [MeasOutcome; 3] {
    let pick = |bit: usize| {
        if bit == 0 {
            MeasOutcome::Plus
        } else {
            MeasOutcome::Minus
        }
    };
    [pick(cell >> 2 & 1), pick(cell >> 1 & 1), pick(cell & 1)]
}

fn cell_index(outcomes: [MeasOutcome; 3]) -> usize {
    4 * outcomes[0].index() + 2 * outcomes[1].index() + outcomes[2].index()
}

impl JointDistribution {
    pub fn probability(&self, outcomes: [MeasOutcome; 3]) -> f64 {
        self.probs[cell_index(outcomes)]
    }

    pub fn entries(&self) -> impl Iterator<Item = ([MeasOutcome; 3], f64)> + '_ {
        self.probs
            .iter()
            .enumerate()
            .map(|(cell, &p)| (outcome_triple(cell), p))
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Probability mass on triples whose outcome signs multiply to `sign`.
    pub fn sign_product_mass(&self, sign: i8) -> f64 {
        self.entries()
            .filter(|(outcomes, _)| {
                outcomes.iter().map(|o| o.sign() as i32).product::<i32>() == sign as i32
            })
            .map(|(_, p)| p)
            .sum()
    }

    /// Marginal distribution `[P(+1), P(−1)]` of one qubit's outcome.
    pub fn marginal(&self, qubit: QubitId) -> [f64; 2] {
        let mut m = [0.0; 2];
        for (outcomes, p) in self.entries() {
            m[outcomes[qubit.index()].index()] += p;
        }
        m
    }

    pub fn max_abs_diff(&self, other: &JointDistribution) -> f64 {
        self.probs
            .iter()
            .zip(other.probs.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

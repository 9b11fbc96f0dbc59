//! Exhaustive classical analysis of the four statements.
//!
//! The search space is the 64 colorings of the six robber sides. Enumeration
//! shows that no coloring satisfies all four guards and that any three can be
//! satisfied; the multiplicative product argument proves the same
//! impossibility independently. Because a deterministic answering strategy
//! (a color for each suspect and question) is the same data as a coloring,
//! the optimal classical game value follows from the same enumeration: 3/4.
//!
//! Randomized strategies cannot do better: a mixture's pass probability is a
//! convex combination of its deterministic components' values, so the
//! maximum over the 64 vertices bounds every mixture. Only deterministic
//! strategies are enumerated here.

use crate::game::{
    question_for, required_parity, verify, AnswerSet, Color, GuardId, RobberId, SideView,
};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// A set of guards, backed by a 4-bit mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct GuardSet(u8);

impl GuardSet {
    pub const EMPTY: GuardSet = GuardSet(0);
    pub const ALL: GuardSet = GuardSet(0b1111);

    pub fn insert(&mut self, guard: GuardId) {
        self.0 |= 1 << guard.index();
    }

    pub fn contains(self, guard: GuardId) -> bool {
        self.0 >> guard.index() & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = GuardId> {
        GuardId::ALL.into_iter().filter(move |g| self.contains(*g))
    }

    /// The set of all guards except `guard`.
    pub fn excluding(guard: GuardId) -> Self {
        GuardSet(Self::ALL.0 & !(1 << guard.index()))
    }
}

impl FromIterator<GuardId> for GuardSet {
    fn from_iter<I: IntoIterator<Item = GuardId>>(iter: I) -> Self {
        let mut set = GuardSet::EMPTY;
        for g in iter {
            set.insert(g);
        }
        set
    }
}

impl fmt::Display for GuardSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, g) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for GuardSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter().map(|g| g.number()))
    }
}

impl<'de> Deserialize<'de> for GuardSet {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let numbers = Vec::<u8>::deserialize(deserializer)?;
        let mut set = GuardSet::EMPTY;
        for n in numbers {
            let guard = GuardId::from_number(n)
                .ok_or_else(|| serde::de::Error::custom(format!("guard number out of range: {n}")))?;
            set.insert(guard);
        }
        Ok(set)
    }
}

/// An assignment of a color to each of the six robber sides.
///
/// Backed by a 6-bit mask in the canonical side order A-front, A-back,
/// B-front, B-back, C-front, C-back (bit `2·robber + side`, front = 0); a set
/// bit means green. [`enumerate_colorings`] walks the masks 0 through 63 in
/// increasing order, so coloring 0 is all red.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Coloring(u8);

const SIDE_COUNT: usize = 6;

fn side_bit(robber: RobberId, side: SideView) -> u8 {
    (2 * robber.index() + side.index()) as u8
}

impl Coloring {
    pub const COUNT: usize = 1 << SIDE_COUNT;

    pub fn from_mask(mask: u8) -> Option<Self> {
        (mask < Self::COUNT as u8).then_some(Coloring(mask))
    }

    pub fn mask(self) -> u8 {
        self.0
    }

    pub fn from_fn(mut f: impl FnMut(RobberId, SideView) -> Color) -> Self {
        let mut mask = 0u8;
        for robber in RobberId::ALL {
            for side in SideView::BOTH {
                if f(robber, side) == Color::Green {
                    mask |= 1 << side_bit(robber, side);
                }
            }
        }
        Coloring(mask)
    }

    pub fn color(self, robber: RobberId, side: SideView) -> Color {
        if self.0 >> side_bit(robber, side) & 1 == 1 {
            Color::Green
        } else {
            Color::Red
        }
    }

    pub fn sign(self, robber: RobberId, side: SideView) -> i8 {
        self.color(robber, side).sign()
    }
}

impl fmt::Display for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, robber) in RobberId::ALL.into_iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(
                f,
                "{robber}:{}/{}",
                self.color(robber, SideView::Front),
                self.color(robber, SideView::Back)
            )?;
        }
        Ok(())
    }
}

impl Serialize for Coloring {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// All 64 colorings in canonical (mask-increasing) order.
pub fn enumerate_colorings() -> impl Iterator<Item = Coloring> {
    (0..Coloring::COUNT as u8).map(Coloring)
}

/// The guards whose statements hold under `coloring`: guard `g` is included
/// iff the product of the coloring's signs over the sides `g` saw equals
/// `required_parity(g)`.
pub fn satisfied_guards(coloring: Coloring) -> GuardSet {
    GuardId::ALL
        .into_iter()
        .filter(|&guard| {
            let product: i32 = RobberId::ALL
                .into_iter()
                .map(|robber| coloring.sign(robber, question_for(guard, robber)) as i32)
                .product();
            product == required_parity(guard) as i32
        })
        .collect()
}

/// A witness coloring satisfying exactly one 3-guard subset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SubsetWitness {
    pub excluded: GuardId,
    pub subset: GuardSet,
    pub coloring: Coloring,
}

/// Result of enumerating all 64 colorings against the four statements.
#[derive(Debug, Clone, Serialize)]
pub struct MaxSatisfiable {
    /// Largest number of statements any coloring satisfies (3).
    pub max_satisfied: usize,
    /// Number of colorings satisfying all four statements (0).
    pub satisfying_all_four: usize,
    /// For each 3-subset of guards, a coloring satisfying exactly it.
    pub witnesses: [SubsetWitness; 4],
}

/// Enumerates all colorings: no coloring satisfies all four statements, the
/// maximum simultaneously satisfiable is 3, and every 3-subset has a witness
/// satisfying exactly it.
pub fn max_satisfiable() -> MaxSatisfiable {
    let mut max_satisfied = 0;
    let mut satisfying_all_four = 0;
    let mut witnesses: [Option<SubsetWitness>; 4] = [None; 4];

    for coloring in enumerate_colorings() {
        let satisfied = satisfied_guards(coloring);
        max_satisfied = max_satisfied.max(satisfied.len());
        if satisfied == GuardSet::ALL {
            satisfying_all_four += 1;
        }
        for excluded in GuardId::ALL {
            let subset = GuardSet::excluding(excluded);
            if satisfied == subset && witnesses[excluded.index()].is_none() {
                witnesses[excluded.index()] = Some(SubsetWitness {
                    excluded,
                    subset,
                    coloring,
                });
            }
        }
    }

    MaxSatisfiable {
        max_satisfied,
        satisfying_all_four,
        witnesses: witnesses.map(|w| w.expect("every 3-subset has a witness")),
    }
}

/// The multiplicative impossibility proof, recorded step by step.
#[derive(Debug, Clone, Serialize)]
pub struct ProductArgument {
    /// The 12 sides the guards saw, one triple per guard.
    pub factors: Vec<Factor>,
    /// How often each of the 6 sides occurs among the 12 factors (always 2).
    pub side_multiplicities: Vec<SideMultiplicity>,
    /// The product of the 12 side signs. Each side appears an even number of
    /// times, so the product is a product of squares: +1 for any coloring.
    pub joint_product: i8,
    /// The product the four statements jointly require: (+1)³ · (−1) = −1.
    pub required_product: i8,
    /// True iff the two products disagree, i.e. the statements are jointly
    /// unsatisfiable.
    pub contradiction: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Factor {
    pub guard: GuardId,
    pub robber: RobberId,
    pub side: SideView,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SideMultiplicity {
    pub robber: RobberId,
    pub side: SideView,
    pub count: usize,
}

/// Builds the product argument from the view table.
pub fn product_argument() -> ProductArgument {
    let factors: Vec<Factor> = GuardId::ALL
        .into_iter()
        .flat_map(|guard| {
            RobberId::ALL.into_iter().map(move |robber| Factor {
                guard,
                robber,
                side: question_for(guard, robber),
            })
        })
        .collect();

    let side_multiplicities: Vec<SideMultiplicity> = RobberId::ALL
        .into_iter()
        .flat_map(|robber| {
            let factors = &factors;
            SideView::BOTH.into_iter().map(move |side| SideMultiplicity {
                robber,
                side,
                count: factors
                    .iter()
                    .filter(|f| f.robber == robber && f.side == side)
                    .count(),
            })
        })
        .collect();

    // Every multiplicity is even, so the joint product is a product of
    // squares regardless of the coloring.
    assert!(side_multiplicities.iter().all(|m| m.count % 2 == 0));
    let joint_product = 1;

    let required_product: i8 = GuardId::ALL
        .into_iter()
        .map(|g| required_parity(g) as i32)
        .product::<i32>() as i8;

    ProductArgument {
        factors,
        side_multiplicities,
        joint_product,
        required_product,
        contradiction: joint_product != required_product,
    }
}

/// The exactly-two guards whose row of the view table contains
/// `(robber, side)` — the two statements a suspect asked about `side` could
/// be tested against.
pub fn candidate_statements(robber: RobberId, side: SideView) -> [GuardId; 2] {
    let mut candidates = GuardId::ALL
        .into_iter()
        .filter(|&g| question_for(g, robber) == side);
    let first = candidates.next().expect("double coverage");
    let second = candidates.next().expect("double coverage");
    assert!(candidates.next().is_none(), "double coverage");
    [first, second]
}

/// The union, over the three suspects, of the candidate statements implied
/// by the questions asked when the referee tests `guard`. Always all four:
/// collectively the suspects would be trying to satisfy every statement.
pub fn ambiguity_cover(guard: GuardId) -> GuardSet {
    RobberId::ALL
        .into_iter()
        .flat_map(|robber| candidate_statements(robber, question_for(guard, robber)))
        .collect()
}

/// The statements whose three sides are all among the questions asked when
/// the referee tests `guard`. Always exactly `{guard}`: three questions pin
/// down three sides, and no other statement concerns only those.
pub fn testable_statements(guard: GuardId) -> GuardSet {
    GuardId::ALL
        .into_iter()
        .filter(|&h| RobberId::ALL.into_iter().all(|r| question_for(h, r) == question_for(guard, r)))
        .collect()
}

/// A deterministic answering strategy: each suspect fixes a color for each
/// question in advance.
///
/// Same 6-bit encoding and canonical order as [`Coloring`]; answering a
/// question with a color is the same data as coloring that side. The string
/// form is six letters `R`/`G` in the canonical side order, e.g. `RRGGRR`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DeterministicStrategy(u8);

impl DeterministicStrategy {
    pub const COUNT: usize = Coloring::COUNT;

    pub fn from_mask(mask: u8) -> Option<Self> {
        (mask < Self::COUNT as u8).then_some(DeterministicStrategy(mask))
    }

    /// The color `suspect` answers when asked about `side`.
    pub fn answer(self, suspect: RobberId, side: SideView) -> Color {
        Coloring(self.0).color(suspect, side)
    }

    /// The answers produced when the referee tests `guard`.
    pub fn answers_for(self, guard: GuardId) -> AnswerSet {
        AnswerSet::new(
            self.answer(RobberId::A, question_for(guard, RobberId::A)),
            self.answer(RobberId::B, question_for(guard, RobberId::B)),
            self.answer(RobberId::C, question_for(guard, RobberId::C)),
        )
    }

    /// The guards whose tests this strategy passes.
    pub fn passing_guards(self) -> GuardSet {
        GuardId::ALL
            .into_iter()
            .filter(|&g| verify(g, &self.answers_for(g)))
            .collect()
    }

    /// The coloring this strategy is equivalent to: suspect `r` answers side
    /// `s` with color `c` iff side `(r, s)` is colored `c`.
    pub fn to_coloring(self) -> Coloring {
        Coloring(self.0)
    }

    pub fn from_coloring(coloring: Coloring) -> Self {
        DeterministicStrategy(coloring.mask())
    }
}

pub fn enumerate_strategies() -> impl Iterator<Item = DeterministicStrategy> {
    (0..DeterministicStrategy::COUNT as u8).map(DeterministicStrategy)
}

impl fmt::Display for DeterministicStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for robber in RobberId::ALL {
            for side in SideView::BOTH {
                let c = match self.answer(robber, side) {
                    Color::Red => 'R',
                    Color::Green => 'G',
                };
                write!(f, "{c}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for DeterministicStrategy {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl FromStr for DeterministicStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let chars: Vec<char> = s.chars().collect();
        if chars.len() != SIDE_COUNT {
            return Err(format!(
                "strategy spec must be {SIDE_COUNT} letters R/G (side order A-front, A-back, \
                 B-front, B-back, C-front, C-back), got {s:?}"
            ));
        }
        let mut mask = 0u8;
        for (i, c) in chars.iter().enumerate() {
            match c.to_ascii_uppercase() {
                'R' => {}
                'G' => mask |= 1 << i,
                _ => return Err(format!("strategy spec letter {i} must be R or G, got {c:?}")),
            }
        }
        Ok(DeterministicStrategy(mask))
    }
}

/// The optimal deterministic strategy and its exact game value.
#[derive(Debug, Clone, Serialize)]
pub struct ClassicalValue {
    /// Guard tests passed by the best strategy (3).
    pub best_passed: u32,
    /// Guard tests in total (4).
    pub total_tests: u32,
    /// First strategy in canonical order attaining the maximum.
    pub witness: DeterministicStrategy,
    /// The guards that strategy passes.
    pub witness_passes: GuardSet,
}

impl ClassicalValue {
    /// The value as an exact fraction `(passed, total)` = (3, 4).
    pub fn as_fraction(&self) -> (u32, u32) {
        (self.best_passed, self.total_tests)
    }

    pub fn as_f64(&self) -> f64 {
        f64::from(self.best_passed) / f64::from(self.total_tests)
    }
}

/// Enumerates all 64 deterministic strategies against a uniformly chosen
/// guard. The maximum fraction of the four tests passed is exactly 3/4.
///
/// Along the way this asserts the strategy–coloring equivalence: a strategy
/// passes guard `g` iff its coloring satisfies `g`'s statement.
pub fn classical_game_value() -> ClassicalValue {
    let mut best: Option<(u32, DeterministicStrategy, GuardSet)> = None;
    for strategy in enumerate_strategies() {
        let passes = strategy.passing_guards();
        assert_eq!(
            passes,
            satisfied_guards(strategy.to_coloring()),
            "strategy space must mirror the coloring space"
        );
        let count = passes.len() as u32;
        if best.as_ref().is_none_or(|(b, _, _)| count > *b) {
            best = Some((count, strategy, passes));
        }
    }
    let (best_passed, witness, witness_passes) = best.expect("strategies are non-empty");
    ClassicalValue {
        best_passed,
        total_tests: GuardId::ALL.len() as u32,
        witness,
        witness_passes,
    }
}

//! The rules of the interrogation.
//!
//! Four guards each saw one side (front or back) of each of three robbers.
//! Guards 1–3 assert that an odd number of the sides they saw were red
//! (equivalently: an even number were green); guard 4 asserts the opposite
//! parity. With red encoded as `+1` and green as `−1`, every statement is a
//! constraint on the product of three signs, so the referee's verdict is a
//! single multiplication.

use serde::{Deserialize, Serialize};
use std::fmt;

/// A suit color. Sign encoding: `Red ↔ +1`, `Green ↔ −1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Color {
    Red,
    Green,
}

impl Color {
    pub fn sign(self) -> i8 {
        match self {
            Color::Red => 1,
            Color::Green => -1,
        }
    }

    pub fn from_sign(sign: i8) -> Option<Self> {
        match sign {
            1 => Some(Color::Red),
            -1 => Some(Color::Green),
            _ => None,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Color::Red => write!(f, "Red"),
            Color::Green => write!(f, "Green"),
        }
    }
}

/// Which side of a robber a guard saw, and hence which side a suspect is
/// asked about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SideView {
    Front,
    Back,
}

impl SideView {
    pub const BOTH: [SideView; 2] = [SideView::Front, SideView::Back];

    pub fn index(self) -> usize {
        match self {
            SideView::Front => 0,
            SideView::Back => 1,
        }
    }
}

impl fmt::Display for SideView {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SideView::Front => write!(f, "Front"),
            SideView::Back => write!(f, "Back"),
        }
    }
}

/// One of the three robbers (equivalently, suspects).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RobberId {
    A,
    B,
    C,
}

impl RobberId {
    pub const ALL: [RobberId; 3] = [RobberId::A, RobberId::B, RobberId::C];

    pub fn index(self) -> usize {
        match self {
            RobberId::A => 0,
            RobberId::B => 1,
            RobberId::C => 2,
        }
    }

    pub fn from_index(index: usize) -> Option<Self> {
        Self::ALL.get(index).copied()
    }
}

impl fmt::Display for RobberId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RobberId::A => write!(f, "A"),
            RobberId::B => write!(f, "B"),
            RobberId::C => write!(f, "C"),
        }
    }
}

impl std::str::FromStr for RobberId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "A" => Ok(RobberId::A),
            "B" => Ok(RobberId::B),
            "C" => Ok(RobberId::C),
            _ => Err(format!("suspect must be A, B, or C, got {s:?}")),
        }
    }
}

/// One of the four guards. Serialized as its number, 1 through 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GuardId {
    G1,
    G2,
    G3,
    G4,
}

impl GuardId {
    pub const ALL: [GuardId; 4] = [GuardId::G1, GuardId::G2, GuardId::G3, GuardId::G4];

    pub fn number(self) -> u8 {
        match self {
            GuardId::G1 => 1,
            GuardId::G2 => 2,
            GuardId::G3 => 3,
            GuardId::G4 => 4,
        }
    }

    pub fn index(self) -> usize {
        (self.number() - 1) as usize
    }

    pub fn from_number(number: u8) -> Option<Self> {
        match number {
            1 => Some(GuardId::G1),
            2 => Some(GuardId::G2),
            3 => Some(GuardId::G3),
            4 => Some(GuardId::G4),
            _ => None,
        }
    }
}

impl fmt::Display for GuardId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

impl Serialize for GuardId {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_u8(self.number())
    }
}

impl<'de> Deserialize<'de> for GuardId {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let number = u8::deserialize(deserializer)?;
        GuardId::from_number(number)
            .ok_or_else(|| serde::de::Error::custom(format!("guard number out of range: {number}")))
    }
}

/// The view table: which side of each robber each guard saw.
///
/// ```text
///           Robber A   Robber B   Robber C
/// Guard 1     Back       Front      Front
/// Guard 2     Front      Back       Front
/// Guard 3     Front      Front      Back
/// Guard 4     Back       Back       Back
/// ```
const VIEW_TABLE: [[SideView; 3]; 4] = {
    use SideView::{Back, Front};
    [
        [Back, Front, Front],
        [Front, Back, Front],
        [Front, Front, Back],
        [Back, Back, Back],
    ]
};

/// The full view table, indexed `[guard][robber]`.
pub fn view_table() -> &'static [[SideView; 3]; 4] {
    &VIEW_TABLE
}

/// The side a suspect is asked about when the referee tests `guard`: exactly
/// the side that guard saw of the corresponding robber.
pub fn question_for(guard: GuardId, robber: RobberId) -> SideView {
    VIEW_TABLE[guard.index()][robber.index()]
}

/// The sign of the product of the three seen sides' color signs asserted by
/// `guard`: `+1` (even number green) for guards 1–3, `−1` (odd number green)
/// for guard 4.
pub fn required_parity(guard: GuardId) -> i8 {
    match guard {
        GuardId::G1 | GuardId::G2 | GuardId::G3 => 1,
        GuardId::G4 => -1,
    }
}

/// A guard's statement: the sides seen and the parity asserted about them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Statement {
    pub guard: GuardId,
    pub seen: [SideView; 3],
    pub parity: i8,
}

pub fn statement(guard: GuardId) -> Statement {
    Statement {
        guard,
        seen: VIEW_TABLE[guard.index()],
        parity: required_parity(guard),
    }
}

/// One color answer from each suspect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnswerSet {
    colors: [Color; 3],
}

impl AnswerSet {
    pub fn new(a: Color, b: Color, c: Color) -> Self {
        AnswerSet { colors: [a, b, c] }
    }

    pub fn get(&self, robber: RobberId) -> Color {
        self.colors[robber.index()]
    }

    pub fn sign_product(&self) -> i8 {
        self.colors.iter().map(|c| c.sign() as i32).product::<i32>() as i8
    }
}

/// True iff the answers confirm `guard`'s statement: the product of the
/// three answer signs equals [`required_parity`]. Depends only on the
/// multiset of signs, so the order in which suspects answered is irrelevant.
pub fn verify(guard: GuardId, answers: &AnswerSet) -> bool {
    answers.sign_product() == required_parity(guard)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn view_table_entries() {
        assert_eq!(question_for(GuardId::G1, RobberId::A), SideView::Back);
        assert_eq!(question_for(GuardId::G4, RobberId::C), SideView::Back);
        assert_eq!(question_for(GuardId::G2, RobberId::A), SideView::Front);
        assert_eq!(question_for(GuardId::G1, RobberId::B), SideView::Front);
        assert_eq!(question_for(GuardId::G3, RobberId::C), SideView::Back);
        assert_eq!(question_for(GuardId::G4, RobberId::A), SideView::Back);
    }

    #[test]
    fn every_side_seen_exactly_twice() {
        for robber in RobberId::ALL {
            for side in SideView::BOTH {
                let count = GuardId::ALL
                    .iter()
                    .filter(|&&g| question_for(g, robber) == side)
                    .count();
                assert_eq!(count, 2, "({robber}, {side}) should appear exactly twice");
            }
        }
    }

    #[test]
    fn first_three_rows_are_robber_permutations_of_each_other() {
        // Swapping two robbers maps each of guards 1-3's rows to another.
        let rows: Vec<[SideView; 3]> = [GuardId::G1, GuardId::G2, GuardId::G3]
            .iter()
            .map(|g| VIEW_TABLE[g.index()])
            .collect();
        let swaps = [[1, 0, 2], [0, 2, 1], [2, 1, 0]];
        for row in &rows {
            for swap in &swaps {
                let permuted = [row[swap[0]], row[swap[1]], row[swap[2]]];
                if permuted != *row {
                    assert!(rows.contains(&permuted));
                }
            }
        }
    }

    #[test]
    fn parities() {
        assert_eq!(required_parity(GuardId::G1), 1);
        assert_eq!(required_parity(GuardId::G3), 1);
        assert_eq!(required_parity(GuardId::G4), -1);
    }

    #[test]
    fn odd_red_equals_even_green() {
        // "An odd number of the three were red" and "an even number were
        // green" are the same constraint: sign product +1.
        for bits in 0..8u8 {
            let colors: Vec<Color> = (0..3)
                .map(|i| if bits >> i & 1 == 0 { Color::Red } else { Color::Green })
                .collect();
            let reds = colors.iter().filter(|c| **c == Color::Red).count();
            let greens = 3 - reds;
            let product: i32 = colors.iter().map(|c| c.sign() as i32).product();
            assert_eq!(product == 1, reds % 2 == 1);
            assert_eq!(product == 1, greens % 2 == 0);
        }
    }

    #[test]
    fn verify_examples() {
        let all_red = AnswerSet::new(Color::Red, Color::Red, Color::Red);
        assert!(verify(GuardId::G1, &all_red));
        assert!(!verify(GuardId::G4, &all_red));

        let one_green = AnswerSet::new(Color::Green, Color::Red, Color::Red);
        assert!(verify(GuardId::G4, &one_green));
    }

    #[test]
    fn verify_ignores_answer_order() {
        // Verification depends only on the multiset of signs.
        let sets = [
            AnswerSet::new(Color::Green, Color::Red, Color::Red),
            AnswerSet::new(Color::Red, Color::Green, Color::Red),
            AnswerSet::new(Color::Red, Color::Red, Color::Green),
        ];
        for guard in GuardId::ALL {
            let verdicts: Vec<bool> = sets.iter().map(|s| verify(guard, s)).collect();
            assert!(verdicts.windows(2).all(|w| w[0] == w[1]));
        }
    }

    #[test]
    fn guard_id_serializes_as_number() {
        let json = serde_json::to_string(&GuardId::G3).unwrap();
        assert_eq!(json, "3");
        let back: GuardId = serde_json::from_str("4").unwrap();
        assert_eq!(back, GuardId::G4);
        assert!(serde_json::from_str::<GuardId>("5").is_err());
    }
}

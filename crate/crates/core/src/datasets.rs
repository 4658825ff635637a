//! Small reference elections bundled with the crate.
//!
//! * `food_election`: 20 voters ranking five foods, first two preferences only.
//! * `food_election2`: the same with voters 1-3 ranking Chocolate and
//!   Strawberries equal first.
//! * `food_election3`: `food_election` without voters 12-15.
//! * `faculty`: 10 voters fully ranking five job candidates.
//! * `faculty2`: `faculty` with equal preferences on voters 1, 4, 9 and 10.

use crate::ballot::{parse_ballots_str, BallotMatrix, ParseOptions};

pub const FOOD_ELECTION: &str = include_str!("../fixtures/food_election.csv");
pub const FOOD_ELECTION2: &str = include_str!("../fixtures/food_election2.csv");
pub const FOOD_ELECTION3: &str = include_str!("../fixtures/food_election3.csv");
pub const FACULTY: &str = include_str!("../fixtures/faculty.csv");
pub const FACULTY2: &str = include_str!("../fixtures/faculty2.csv");

fn load(text: &str) -> BallotMatrix {
    parse_ballots_str(text, &ParseOptions::default()).expect("bundled dataset parses")
}

pub fn food_election() -> BallotMatrix {
    load(FOOD_ELECTION)
}

pub fn food_election2() -> BallotMatrix {
    load(FOOD_ELECTION2)
}

pub fn food_election3() -> BallotMatrix {
    load(FOOD_ELECTION3)
}

pub fn faculty() -> BallotMatrix {
    load(FACULTY)
}

pub fn faculty2() -> BallotMatrix {
    load(FACULTY2)
}

/// Looks a bundled dataset up by name.
pub fn by_name(name: &str) -> Option<BallotMatrix> {
    Some(match name {
        "food_election" => food_election(),
        "food_election2" => food_election2(),
        "food_election3" => food_election3(),
        "faculty" => faculty(),
        "faculty2" => faculty2(),
        _ => return None,
    })
}

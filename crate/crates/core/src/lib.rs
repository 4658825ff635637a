//! Vote counting: plurality, approval, score, two-round runoff, Condorcet
//! and single transferable vote, with markdown and JSON reports.

pub mod ballot;
pub mod baseline;
pub mod cli;
pub mod config;
pub mod datasets;
pub mod draw;
pub mod error;
pub mod plots;
pub mod preferential;
pub mod report;
pub mod stv;
pub mod tiebreak;

use serde::Serialize;

pub use ballot::{
    parse_ballots, parse_ballots_str, read_ballots, BallotKind, BallotMatrix, ParseOptions,
    ValidationMode, ValidationReport,
};
pub use baseline::{count_approval, count_plurality, count_score, ScoreOptions, TallyResult};
pub use config::{ElectionConfig, ReservedSeats};
pub use error::{Error, Result};
pub use preferential::{condorcet, count_two_round, pairwise_matrix, CondorcetResult, TwoRoundResult};
pub use stv::{count_stv, QuotaPolicy, StvOptions, StvResult};
pub use tiebreak::{TiePolicy, TieTag};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Plurality,
    Approval,
    Score,
    #[serde(rename = "tworound")]
    TwoRound,
    Condorcet,
    Stv,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Plurality,
        Method::Approval,
        Method::Score,
        Method::TwoRound,
        Method::Condorcet,
        Method::Stv,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Plurality => "plurality",
            Method::Approval => "approval",
            Method::Score => "score",
            Method::TwoRound => "tworound",
            Method::Condorcet => "condorcet",
            Method::Stv => "stv",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown method '{s}'")))
    }
}

/// The result of any counting method.
#[derive(Clone, Debug, PartialEq)]
pub enum ElectionResult {
    Tally(TallyResult),
    TwoRound(TwoRoundResult),
    Condorcet(CondorcetResult),
    Stv(StvResult),
}

impl ElectionResult {
    pub fn method(&self) -> Method {
        match self {
            ElectionResult::Tally(r) => r.method,
            ElectionResult::TwoRound(_) => Method::TwoRound,
            ElectionResult::Condorcet(_) => Method::Condorcet,
            ElectionResult::Stv(_) => Method::Stv,
        }
    }

    pub fn candidates(&self) -> &[String] {
        match self {
            ElectionResult::Tally(r) => &r.candidates,
            ElectionResult::TwoRound(r) => &r.candidates,
            ElectionResult::Condorcet(r) => &r.matrix.candidates,
            ElectionResult::Stv(r) => &r.candidates,
        }
    }

    /// Winners in order. Empty for a Condorcet count with no winner.
    pub fn elected(&self) -> Vec<usize> {
        match self {
            ElectionResult::Tally(r) => r.elected.clone(),
            ElectionResult::TwoRound(r) => vec![r.elected],
            ElectionResult::Condorcet(r) => r.winner.into_iter().collect(),
            ElectionResult::Stv(r) => r.elected.clone(),
        }
    }

    pub fn validation(&self) -> &ValidationReport {
        match self {
            ElectionResult::Tally(r) => &r.validation,
            ElectionResult::TwoRound(r) => &r.validation,
            ElectionResult::Condorcet(r) => &r.matrix.validation,
            ElectionResult::Stv(r) => &r.validation,
        }
    }
}

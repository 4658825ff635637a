use serde::Serialize;

use crate::baseline::ScoreOptions;
use crate::draw::DEFAULT_SEED;
use crate::error::{Error, Result};
use crate::stv::{QuotaPolicy, StvOptions};
use crate::tiebreak::TiePolicy;

/// A minimum number of seats that must go to members of a marked group.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReservedSeats {
    pub count: usize,
    pub members: Vec<String>,
}

/// Method-independent election parameters.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ElectionConfig {
    pub seats: usize,
    pub epsilon: f64,
    pub quota_policy: QuotaPolicy,
    pub ties: TiePolicy,
    pub equal_ranking: bool,
    pub reserved: Option<ReservedSeats>,
    pub seed: u64,
    pub larger_wins: bool,
    pub fill_score: Option<f64>,
    pub complete_ranking: bool,
}

impl Default for ElectionConfig {
    fn default() -> Self {
        ElectionConfig {
            seats: 1,
            epsilon: 0.001,
            quota_policy: QuotaPolicy::Adaptive,
            ties: TiePolicy::Forwards,
            equal_ranking: false,
            reserved: None,
            seed: DEFAULT_SEED,
            larger_wins: false,
            fill_score: None,
            complete_ranking: false,
        }
    }
}

impl ElectionConfig {
    pub fn stv_options(&self) -> StvOptions {
        StvOptions {
            seats: self.seats,
            epsilon: self.epsilon,
            quota_policy: self.quota_policy,
            equal_ranking: self.equal_ranking,
            ties: self.ties,
            reserved: self.reserved.clone(),
            seed: self.seed,
            complete_ranking: self.complete_ranking,
            positional_ties: false,
        }
    }

    pub fn score_options(&self) -> ScoreOptions {
        ScoreOptions {
            fill: self.fill_score,
            ..ScoreOptions::new(self.larger_wins)
        }
    }
}

/// Checks `seats` against the number of candidates. A single-candidate
/// single-seat election is allowed; otherwise at least one candidate must lose.
pub fn check_seats(seats: usize, num_candidates: usize) -> Result<()> {
    if seats == 0 {
        return Err(Error::Config("the number of seats must be at least 1".into()));
    }
    if seats > num_candidates || (seats == num_candidates && num_candidates > 1) {
        return Err(Error::Config(format!(
            "{seats} seats need more than {num_candidates} candidates"
        )));
    }
    Ok(())
}

/// Resolves a reserved-seat spec to a per-candidate marked flag.
pub fn check_reserved(
    reserved: &ReservedSeats,
    seats: usize,
    candidates: &[String],
) -> Result<Vec<bool>> {
    if reserved.count == 0 || reserved.count > seats {
        return Err(Error::Config(format!(
            "reserved seats must be between 1 and {seats}, got {}",
            reserved.count
        )));
    }
    let mut marked = vec![false; candidates.len()];
    let mut unknown = Vec::new();
    for name in &reserved.members {
        match candidates.iter().position(|c| c == name.trim()) {
            Some(j) => marked[j] = true,
            None => unknown.push(name.clone()),
        }
    }
    if !unknown.is_empty() {
        return Err(Error::UnknownCandidates(unknown));
    }
    let group = marked.iter().filter(|&&m| m).count();
    if group < reserved.count {
        return Err(Error::Config(format!(
            "{} reserved seats but only {group} eligible candidates",
            reserved.count
        )));
    }
    Ok(marked)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seat_bounds() {
        assert!(check_seats(0, 5).is_err());
        assert!(check_seats(5, 5).is_err());
        assert!(check_seats(9, 5).is_err());
        assert!(check_seats(4, 5).is_ok());
        assert!(check_seats(1, 1).is_ok());
    }

    #[test]
    fn reserved_checks() {
        let names: Vec<String> = ["A", "B", "C"].iter().map(|s| s.to_string()).collect();
        let spec = |count, members: &[&str]| ReservedSeats {
            count,
            members: members.iter().map(|s| s.to_string()).collect(),
        };
        assert_eq!(
            check_reserved(&spec(1, &["B"]), 2, &names).unwrap(),
            vec![false, true, false]
        );
        assert!(check_reserved(&spec(0, &["B"]), 2, &names).is_err());
        assert!(check_reserved(&spec(3, &["A", "B", "C"]), 2, &names).is_err());
        assert!(check_reserved(&spec(2, &["B"]), 2, &names).is_err());
        assert!(matches!(
            check_reserved(&spec(1, &["Z"]), 2, &names),
            Err(Error::UnknownCandidates(_))
        ));
    }
}

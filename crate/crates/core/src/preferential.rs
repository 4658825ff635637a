//! Two-round runoff and Condorcet counts over ranked ballots.

use serde::Serialize;

use crate::ballot::{
    remove_candidates, validate_ballots, BallotKind, BallotMatrix, ValidationMode, ValidationReport,
};
use crate::draw::{seeded_rng, select_best, TieDraw};
use crate::error::{Error, Result};

/// Whether a ballot prefers `a` to `b`: `a` is ranked and `b` is either
/// unranked or ranked lower.
pub(crate) fn prefers(row: &[Option<f64>], a: usize, b: usize) -> bool {
    match (row[a], row[b]) {
        (Some(ra), Some(rb)) => ra < rb,
        (Some(_), None) => true,
        _ => false,
    }
}

fn require_ranked(ballots: &BallotMatrix) -> Result<()> {
    if ballots.kind() == BallotKind::Ranked {
        Ok(())
    } else {
        Err(Error::Unsupported("this method needs ranked ballots".into()))
    }
}

/// Second round of a two-round count.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Runoff {
    pub finalists: [usize; 2],
    /// Per candidate; zero for everyone but the finalists.
    pub totals: Vec<u64>,
    pub percent: Vec<f64>,
    /// Valid ballots ranking neither finalist.
    pub exhausted: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TwoRoundResult {
    pub candidates: Vec<String>,
    pub first_totals: Vec<u64>,
    pub first_percent: Vec<f64>,
    /// `None` when a candidate won a majority in the first round.
    pub runoff: Option<Runoff>,
    pub elected: usize,
    pub validation: ValidationReport,
    pub draws: Vec<TieDraw>,
}

/// Counts first preferences; without a strict majority the two leaders meet
/// in a runoff where each ballot goes to whichever finalist it ranks higher.
pub fn count_two_round(ballots: &BallotMatrix, seed: u64) -> Result<TwoRoundResult> {
    require_ranked(ballots)?;
    let m = ballots.num_candidates();
    if m < 2 {
        return Err(Error::Config("two-round runoff needs at least 2 candidates".into()));
    }
    let validation = validate_ballots(ballots, ValidationMode::StrictRanked);
    if validation.valid_count == 0 {
        return Err(Error::NoValidBallots);
    }
    let valid: Vec<&Vec<Option<f64>>> = validation
        .valid_rows(ballots.num_ballots())
        .into_iter()
        .map(|i| &ballots.rows()[i])
        .collect();
    let n = valid.len() as u64;

    let mut first_totals = vec![0u64; m];
    for row in &valid {
        if let Some(j) = row.iter().position(|&e| e == Some(1.0)) {
            first_totals[j] += 1;
        }
    }
    let first_percent = percentages(&first_totals);
    let mut draws = Vec::new();

    if let Some(winner) = (0..m).find(|&j| 2 * first_totals[j] > n) {
        return Ok(TwoRoundResult {
            candidates: ballots.candidates().to_vec(),
            first_totals,
            first_percent,
            runoff: None,
            elected: winner,
            validation,
            draws,
        });
    }

    let mut rng = seeded_rng(seed);
    let as_f64: Vec<f64> = first_totals.iter().map(|&t| t as f64).collect();
    let (finalists, draw) = select_best(&as_f64, 2, true, |_| true, &mut rng);
    draws.extend(draw);
    let (a, b) = (finalists[0], finalists[1]);

    let mut totals = vec![0u64; m];
    let mut exhausted = 0;
    for row in &valid {
        if prefers(row, a, b) {
            totals[a] += 1;
        } else if prefers(row, b, a) {
            totals[b] += 1;
        } else {
            exhausted += 1;
        }
    }
    let runoff_f64: Vec<f64> = totals.iter().map(|&t| t as f64).collect();
    let (winner, draw) = select_best(&runoff_f64, 1, true, |j| j == a || j == b, &mut rng);
    draws.extend(draw);

    Ok(TwoRoundResult {
        candidates: ballots.candidates().to_vec(),
        first_totals,
        first_percent,
        runoff: Some(Runoff {
            finalists: [a, b],
            percent: percentages(&totals),
            totals,
            exhausted,
        }),
        elected: winner[0],
        validation,
        draws,
    })
}

fn percentages(totals: &[u64]) -> Vec<f64> {
    let sum: u64 = totals.iter().sum();
    totals
        .iter()
        .map(|&t| if sum == 0 { 0.0 } else { 100.0 * t as f64 / sum as f64 })
        .collect()
}

/// Head-to-head results between every pair of candidates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairwiseMatrix {
    pub candidates: Vec<String>,
    /// `preferences[i][j]`: valid ballots preferring `i` to `j`.
    pub preferences: Vec<Vec<u64>>,
    /// `wins[i][j]` is 1 when more ballots prefer `i` to `j` than the reverse.
    pub wins: Vec<Vec<u8>>,
    pub totals: Vec<usize>,
    /// Beats every other candidate.
    pub winner: Option<usize>,
    /// Loses to every other candidate.
    pub loser: Option<usize>,
    pub validation: ValidationReport,
}

pub fn pairwise_matrix(ballots: &BallotMatrix) -> Result<PairwiseMatrix> {
    require_ranked(ballots)?;
    let m = ballots.num_candidates();
    let validation = validate_ballots(ballots, ValidationMode::StrictRanked);
    let mut preferences = vec![vec![0u64; m]; m];
    for i in validation.valid_rows(ballots.num_ballots()) {
        let row = &ballots.rows()[i];
        for (a, counts) in preferences.iter_mut().enumerate() {
            for (b, count) in counts.iter_mut().enumerate() {
                if a != b && prefers(row, a, b) {
                    *count += 1;
                }
            }
        }
    }
    let wins: Vec<Vec<u8>> = (0..m)
        .map(|a| (0..m).map(|b| u8::from(preferences[a][b] > preferences[b][a])).collect())
        .collect();
    let totals: Vec<usize> = wins
        .iter()
        .map(|row| row.iter().map(|&w| usize::from(w)).sum())
        .collect();
    let winner = (0..m).find(|&a| totals[a] == m - 1);
    let loser = (0..m).find(|&b| (0..m).all(|a| a == b || wins[a][b] == 1));
    Ok(PairwiseMatrix {
        candidates: ballots.candidates().to_vec(),
        preferences,
        wins,
        totals,
        winner,
        loser,
        validation,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CondorcetResult {
    /// Matrix over all candidates.
    pub matrix: PairwiseMatrix,
    /// Winner of the full matrix, or of the runoff when enabled.
    pub winner: Option<usize>,
    pub loser: Option<usize>,
    /// Candidate subsets examined by successive runoff rounds.
    pub runoff_rounds: Vec<Vec<usize>>,
}

/// Finds the Condorcet winner and loser. With `runoff`, a missing winner
/// sends the candidates with the most pairwise wins to another round among
/// themselves (the runner-up tier joins when the top is unique), until a
/// winner appears or the field stops shrinking.
pub fn condorcet(ballots: &BallotMatrix, runoff: bool) -> Result<CondorcetResult> {
    let matrix = pairwise_matrix(ballots)?;
    let mut result = CondorcetResult {
        winner: matrix.winner,
        loser: matrix.loser,
        matrix,
        runoff_rounds: Vec::new(),
    };
    if result.winner.is_some() || !runoff {
        return Ok(result);
    }

    let valid = ballots.select_rows(&result.matrix.validation.valid_rows(ballots.num_ballots()));
    let mut field: Vec<usize> = (0..ballots.num_candidates()).collect();
    let mut totals = result.matrix.totals.clone();
    for _ in 0..ballots.num_candidates() {
        let next = runoff_field(&field, &totals);
        if next.len() == field.len() {
            break;
        }
        field = next;
        result.runoff_rounds.push(field.clone());
        let dropped: Vec<&str> = (0..ballots.num_candidates())
            .filter(|j| !field.contains(j))
            .map(|j| ballots.candidates()[j].as_str())
            .collect();
        let sub = pairwise_matrix(&remove_candidates(&valid, &dropped)?)?;
        if let Some(w) = sub.winner {
            result.winner = Some(field[w]);
            break;
        }
        totals = sub.totals;
    }
    Ok(result)
}

/// `field[k]` has `totals[k]` pairwise wins; keeps the top tier, plus the
/// second tier when the top tier is a single candidate.
fn runoff_field(field: &[usize], totals: &[usize]) -> Vec<usize> {
    let mut levels: Vec<usize> = totals.to_vec();
    levels.sort_unstable_by(|a, b| b.cmp(a));
    levels.dedup();
    let top = levels[0];
    let mut keep: Vec<usize> = (0..field.len()).filter(|&k| totals[k] == top).collect();
    if keep.len() == 1 && levels.len() > 1 {
        keep = (0..field.len()).filter(|&k| totals[k] >= levels[1]).collect();
    }
    keep.into_iter().map(|k| field[k]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets;

    #[test]
    fn food3_two_round() {
        let r = count_two_round(&datasets::food_election3(), 0).unwrap();
        assert_eq!(r.first_totals, vec![4, 2, 8, 1, 1]);
        assert_eq!(r.first_percent[0], 25.0);
        assert_eq!(r.first_percent[3], 6.25);
        let runoff = r.runoff.as_ref().unwrap();
        assert_eq!(runoff.totals, vec![6, 0, 8, 0, 0]);
        assert_eq!(runoff.exhausted, 2);
        assert!((runoff.percent[2] - 57.142857).abs() < 1e-5);
        assert_eq!(r.candidates[r.elected], "Chocolate");
        assert!(r.draws.is_empty());
    }

    #[test]
    fn majority_wins_outright() {
        let r = count_two_round(&datasets::food_election(), 0).unwrap();
        assert!(r.runoff.is_none());
        assert_eq!(r.candidates[r.elected], "Chocolate");
    }

    #[test]
    fn two_candidates_runoff_matches_first_round() {
        let b = BallotMatrix::from_ranks(&["A", "B"], &[vec![1, 2], vec![2, 1], vec![0, 1], vec![1, 0]]).unwrap();
        let r = count_two_round(&b, 9).unwrap();
        let runoff = r.runoff.unwrap();
        assert_eq!(runoff.totals, r.first_totals);
        assert_eq!(runoff.exhausted, 0);
        assert_eq!(r.draws.len(), 1);
    }

    #[test]
    fn one_candidate_is_config_error() {
        let b = BallotMatrix::from_ranks(&["A"], &[vec![1]]).unwrap();
        assert!(matches!(count_two_round(&b, 0), Err(Error::Config(_))));
    }

    #[test]
    fn food_pairwise() {
        let p = pairwise_matrix(&datasets::food_election()).unwrap();
        assert_eq!(p.totals, vec![2, 0, 4, 3, 1]);
        assert_eq!(p.winner, Some(2));
        assert_eq!(p.loser, Some(1));
        assert_eq!(p.wins[2], vec![1, 1, 0, 1, 1]);
    }

    #[test]
    fn faculty_pairwise() {
        let p = pairwise_matrix(&datasets::faculty()).unwrap();
        assert_eq!(p.totals, vec![0, 3, 2, 3, 1]);
        assert_eq!(p.winner, None);
        assert_eq!(p.loser, Some(0));
    }

    #[test]
    fn single_ballot_pairwise() {
        let b = BallotMatrix::from_ranks(&["A", "B"], &[vec![1, 2]]).unwrap();
        let p = pairwise_matrix(&b).unwrap();
        assert_eq!(p.wins, vec![vec![0, 1], vec![0, 0]]);
        assert_eq!((p.winner, p.loser), (Some(0), Some(1)));
    }

    #[test]
    fn condorcet_examples() {
        let food = condorcet(&datasets::food_election(), false).unwrap();
        assert_eq!((food.winner, food.loser), (Some(2), Some(1)));
        let faculty = condorcet(&datasets::faculty(), false).unwrap();
        assert_eq!((faculty.winner, faculty.loser), (None, Some(0)));
    }

    #[test]
    fn symmetric_cycle_has_no_runoff_winner() {
        let b = BallotMatrix::from_ranks(
            &["A", "B", "C"],
            &[vec![1, 2, 3], vec![3, 1, 2], vec![2, 3, 1]],
        )
        .unwrap();
        let r = condorcet(&b, true).unwrap();
        assert_eq!(r.matrix.totals, vec![1, 1, 1]);
        assert_eq!(r.winner, None);
        assert!(r.runoff_rounds.is_empty());
    }

    #[test]
    fn faculty_runoff_between_top_two() {
        // Gauss and Nightingale both have 3 wins; Nightingale beats Gauss 6-4.
        let r = condorcet(&datasets::faculty(), true).unwrap();
        assert_eq!(r.runoff_rounds, vec![vec![1, 3]]);
        assert_eq!(r.winner, Some(3));
    }
}

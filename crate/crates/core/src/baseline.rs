//! Plurality, approval and score counts.

use serde::Serialize;

use crate::ballot::{validate_ballots, BallotKind, BallotMatrix, ValidationMode, ValidationReport};
use crate::config::check_seats;
use crate::draw::{seeded_rng, select_best, sorted_by_total, TieDraw};
use crate::error::{Error, Result};
use crate::Method;

/// Outcome of a plurality, approval or score count.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TallyResult {
    pub method: Method,
    pub candidates: Vec<String>,
    pub seats: usize,
    /// Per-candidate totals over valid ballots, in ballot-paper order.
    pub totals: Vec<f64>,
    /// Winners, best first.
    pub elected: Vec<usize>,
    /// Best total first; equal totals in ballot-paper order.
    pub display_order: Vec<usize>,
    pub larger_wins: bool,
    pub validation: ValidationReport,
    /// Present when a tie at the seat cut was settled by a seeded draw.
    pub draw: Option<TieDraw>,
}

impl TallyResult {
    pub fn total_mass(&self) -> f64 {
        self.totals.iter().sum()
    }
}

/// Each ballot marks exactly one candidate; the `seats` candidates with the
/// most marks win.
pub fn count_plurality(ballots: &BallotMatrix, seats: usize, seed: u64) -> Result<TallyResult> {
    count_marks(ballots, seats, seed, Method::Plurality, ValidationMode::IndicatorSingle)
}

/// Each ballot marks any number of candidates; the `seats` candidates with
/// the most marks win.
pub fn count_approval(ballots: &BallotMatrix, seats: usize, seed: u64) -> Result<TallyResult> {
    count_marks(ballots, seats, seed, Method::Approval, ValidationMode::IndicatorMulti)
}

fn count_marks(
    ballots: &BallotMatrix,
    seats: usize,
    seed: u64,
    method: Method,
    mode: ValidationMode,
) -> Result<TallyResult> {
    if ballots.kind() != BallotKind::Indicator {
        return Err(Error::Unsupported(format!(
            "{} counting needs 0/1 indicator ballots",
            method.name()
        )));
    }
    check_seats(seats, ballots.num_candidates())?;
    let validation = validate_ballots(ballots, mode);
    let totals = column_totals(ballots, &validation, 0.0);
    finish(ballots, seats, seed, method, true, totals, validation, |t| t > 0.0)
}

/// Options for [`count_score`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScoreOptions {
    pub larger_wins: bool,
    /// Score given to a candidate the voter left blank. Required when
    /// smaller scores win; defaults to 0 otherwise.
    pub fill: Option<f64>,
    /// Lowest valid score.
    pub min: f64,
    /// Highest valid score; defaults to `fill` when smaller scores win and
    /// to unbounded otherwise.
    pub max: Option<f64>,
}

impl ScoreOptions {
    pub fn new(larger_wins: bool) -> Self {
        ScoreOptions {
            larger_wins,
            fill: None,
            min: 0.0,
            max: None,
        }
    }

    pub fn with_fill(mut self, fill: f64) -> Self {
        self.fill = Some(fill);
        self
    }

    fn resolve(&self) -> Result<(f64, f64, f64)> {
        let fill = match (self.fill, self.larger_wins) {
            (Some(f), _) => f,
            (None, true) => 0.0,
            (None, false) => {
                return Err(Error::Config(
                    "a fill score is required when smaller scores win".into(),
                ))
            }
        };
        let max = self
            .max
            .unwrap_or(if self.larger_wins { f64::INFINITY } else { fill });
        if !(self.min..=max).contains(&fill) {
            return Err(Error::Config(format!(
                "fill score {fill} is outside the score range [{}, {max}]",
                self.min
            )));
        }
        Ok((fill, self.min, max))
    }
}

/// Sums scores per candidate, filling blanks with the fill score. The
/// `seats` candidates with the lowest totals win, or the highest when
/// `larger_wins` is set.
pub fn count_score(
    ballots: &BallotMatrix,
    seats: usize,
    options: &ScoreOptions,
    seed: u64,
) -> Result<TallyResult> {
    if ballots.kind() == BallotKind::Indicator {
        return Err(Error::Unsupported("score counting needs score ballots".into()));
    }
    check_seats(seats, ballots.num_candidates())?;
    let (fill, min, max) = options.resolve()?;
    let validation = validate_ballots(ballots, ValidationMode::Score { min, max });
    let totals = column_totals(ballots, &validation, fill);
    finish(
        ballots,
        seats,
        seed,
        Method::Score,
        options.larger_wins,
        totals,
        validation,
        |_| true,
    )
}

fn column_totals(ballots: &BallotMatrix, validation: &ValidationReport, fill: f64) -> Vec<f64> {
    let mut totals = vec![0.0; ballots.num_candidates()];
    for i in validation.valid_rows(ballots.num_ballots()) {
        for (total, entry) in totals.iter_mut().zip(&ballots.rows()[i]) {
            *total += entry.unwrap_or(fill);
        }
    }
    totals
}

#[allow(clippy::too_many_arguments)]
fn finish(
    ballots: &BallotMatrix,
    seats: usize,
    seed: u64,
    method: Method,
    larger_wins: bool,
    totals: Vec<f64>,
    validation: ValidationReport,
    eligible: impl Fn(f64) -> bool,
) -> Result<TallyResult> {
    if validation.valid_count == 0 {
        return Err(Error::NoValidBallots);
    }
    let mut rng = seeded_rng(seed);
    let (elected, draw) = select_best(&totals, seats, larger_wins, |j| eligible(totals[j]), &mut rng);
    Ok(TallyResult {
        method,
        candidates: ballots.candidates().to_vec(),
        seats,
        display_order: sorted_by_total(&totals, larger_wins),
        totals,
        elected,
        larger_wins,
        validation,
        draw,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ballot::threshold_indicator;
    use crate::datasets;

    fn names(r: &TallyResult, idx: &[usize]) -> Vec<String> {
        idx.iter().map(|&j| r.candidates[j].clone()).collect()
    }

    fn indicator(names: &[&str], rows: &[Vec<u8>]) -> BallotMatrix {
        BallotMatrix::new(
            names.iter().map(|s| s.to_string()).collect(),
            rows.iter()
                .map(|r| r.iter().map(|&x| Some(f64::from(x))).collect())
                .collect(),
            BallotKind::Indicator,
        )
        .unwrap()
    }

    #[test]
    fn food_plurality() {
        let b = threshold_indicator(&datasets::food_election(), &[1]).unwrap();
        let r = count_plurality(&b, 1, 0).unwrap();
        assert_eq!(r.totals, vec![4.0, 2.0, 12.0, 1.0, 1.0]);
        assert_eq!(names(&r, &r.elected), vec!["Chocolate"]);
        assert_eq!(
            names(&r, &r.display_order),
            vec!["Chocolate", "Oranges", "Pears", "Strawberries", "Sweets"]
        );
        assert_eq!(r.total_mass(), 20.0);
    }

    #[test]
    fn single_candidate_wins() {
        let b = indicator(&["Solo"], &[vec![1], vec![1]]);
        assert_eq!(count_plurality(&b, 1, 0).unwrap().elected, vec![0]);
    }

    #[test]
    fn plurality_tie_is_seeded() {
        let rows: Vec<Vec<u8>> = (0..6).map(|i| if i % 2 == 0 { vec![1, 0] } else { vec![0, 1] }).collect();
        let b = indicator(&["A", "B"], &rows);
        let first = count_plurality(&b, 1, 42).unwrap();
        assert!(first.draw.is_some());
        for _ in 0..3 {
            assert_eq!(count_plurality(&b, 1, 42).unwrap().elected, first.elected);
        }
    }

    #[test]
    fn multi_mark_ballot_is_invalid_for_plurality() {
        let b = indicator(&["A", "B"], &[vec![1, 1], vec![1, 0]]);
        let r = count_plurality(&b, 1, 0).unwrap();
        assert_eq!(r.validation.invalid_count, 1);
        assert_eq!(r.totals, vec![1.0, 0.0]);
    }

    #[test]
    fn seat_errors() {
        let b = threshold_indicator(&datasets::food_election(), &[1]).unwrap();
        assert!(matches!(count_plurality(&b, 0, 0), Err(Error::Config(_))));
        assert!(matches!(count_plurality(&b, 5, 0), Err(Error::Config(_))));
    }

    #[test]
    fn food_approval() {
        let b = threshold_indicator(&datasets::food_election(), &[1, 2]).unwrap();
        let r = count_approval(&b, 2, 0).unwrap();
        assert_eq!(r.total_mass(), 34.0);
        assert_eq!(names(&r, &r.elected), vec!["Chocolate", "Strawberries"]);
        assert_eq!(
            names(&r, &r.display_order),
            vec!["Chocolate", "Strawberries", "Oranges", "Sweets", "Pears"]
        );
    }

    #[test]
    fn approve_everyone_draws_among_all() {
        let b = indicator(&["A", "B", "C"], &[vec![1, 1, 1], vec![1, 1, 1]]);
        let r = count_approval(&b, 2, 3).unwrap();
        assert_eq!(r.totals, vec![2.0; 3]);
        assert_eq!(r.draw.as_ref().unwrap().tied, vec![0, 1, 2]);
        assert_eq!(r.elected.len(), 2);
    }

    #[test]
    fn one_approval_one_winner() {
        let b = indicator(&["A", "B"], &[vec![0, 1]]);
        assert_eq!(count_approval(&b, 1, 0).unwrap().elected, vec![1]);
    }

    #[test]
    fn food_score() {
        let food = datasets::food_election().with_kind(BallotKind::Score).unwrap();
        let r = count_score(&food, 2, &ScoreOptions::new(false).with_fill(6.0), 0).unwrap();
        assert_eq!(r.totals, vec![92.0, 110.0, 60.0, 83.0, 99.0]);
        assert_eq!(r.total_mass(), 444.0);
        assert_eq!(names(&r, &r.elected), vec!["Chocolate", "Strawberries"]);
    }

    #[test]
    fn missing_column_gets_fill() {
        let b = BallotMatrix::new(
            vec!["A".into(), "B".into()],
            vec![vec![Some(1.0), None]; 20],
            BallotKind::Score,
        )
        .unwrap();
        let r = count_score(&b, 1, &ScoreOptions::new(false).with_fill(6.0), 0).unwrap();
        assert_eq!(r.totals[1], 120.0);
    }

    #[test]
    fn fill_outside_range_is_config_error() {
        let food = datasets::food_election().with_kind(BallotKind::Score).unwrap();
        let mut opts = ScoreOptions::new(false).with_fill(6.0);
        opts.max = Some(5.0);
        assert!(matches!(count_score(&food, 2, &opts, 0), Err(Error::Config(_))));
        assert!(matches!(
            count_score(&food, 2, &ScoreOptions::new(false), 0),
            Err(Error::Config(_))
        ));
    }
}

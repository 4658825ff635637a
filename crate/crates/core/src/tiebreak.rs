//! Tie-breaking for the STV count.
//!
//! A tie is first attacked with the vote history (forwards from the first
//! count or backwards from the latest), then with the ordered ranking built
//! from preference counts on the original ballots, and finally with a seeded
//! draw. The tag returned with each decision records how far the cascade
//! had to go.

use std::fmt;

use rand::seq::SliceRandom;
use serde::{Serialize, Serializer};

use crate::ballot::BallotMatrix;
use crate::draw::{same_total, seeded_rng};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TiePolicy {
    /// Decide on the earliest count where the tied candidates differ.
    #[default]
    Forwards,
    /// Decide on the latest count where the tied candidates differ.
    Backwards,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TieDirection {
    Election,
    Elimination,
}

/// How a tie was settled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TieTag {
    F,
    B,
    Fo,
    Bo,
    Fos,
    Bos,
    /// Ballot-paper position (legacy rule).
    Positional,
}

impl TieTag {
    pub fn as_str(self) -> &'static str {
        match self {
            TieTag::F => "f",
            TieTag::B => "b",
            TieTag::Fo => "fo",
            TieTag::Bo => "bo",
            TieTag::Fos => "fos",
            TieTag::Bos => "bos",
            TieTag::Positional => "p",
        }
    }

    fn new(policy: TiePolicy, ordered: bool, sampled: bool) -> TieTag {
        match (policy, ordered, sampled) {
            (TiePolicy::Forwards, false, _) => TieTag::F,
            (TiePolicy::Backwards, false, _) => TieTag::B,
            (TiePolicy::Forwards, true, false) => TieTag::Fo,
            (TiePolicy::Backwards, true, false) => TieTag::Bo,
            (TiePolicy::Forwards, true, true) => TieTag::Fos,
            (TiePolicy::Backwards, true, true) => TieTag::Bos,
        }
    }
}

impl fmt::Display for TieTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for TieTag {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// Counts of each preference level: `counts[j][p]` is the number of ballots
/// giving candidate `j` preference `p + 1`. Ranks outside `1..=M` are ignored.
pub fn preference_counts(ballots: &BallotMatrix) -> Vec<Vec<u64>> {
    let m = ballots.num_candidates();
    let mut counts = vec![vec![0u64; m]; m];
    for row in ballots.rows() {
        for (j, entry) in row.iter().enumerate() {
            if let Some(r) = *entry {
                if r.fract() == 0.0 && r >= 1.0 && r <= m as f64 {
                    counts[j][r as usize - 1] += 1;
                }
            }
        }
    }
    counts
}

/// Elimination order built from preference counts: rank 1 is eliminated
/// first. `sampled[j]` is set when a draw was needed to place `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderedRanking {
    pub rank: Vec<usize>,
    pub sampled: Vec<bool>,
}

/// Orders candidates by first preferences, then second preferences and so
/// on (fewest first). Candidates with identical preference counts are
/// ordered by a draw seeded with `seed`.
pub fn ordered_ranking(ballots: &BallotMatrix, seed: u64) -> OrderedRanking {
    let counts = preference_counts(ballots);
    let m = counts.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| counts[a].cmp(&counts[b]));

    let mut rng = seeded_rng(seed);
    let mut rank = vec![0; m];
    let mut sampled = vec![false; m];
    let mut start = 0;
    while start < m {
        let mut end = start + 1;
        while end < m && counts[order[end]] == counts[order[start]] {
            end += 1;
        }
        let group = &mut order[start..end];
        if group.len() > 1 {
            group.shuffle(&mut rng);
            for &j in group.iter() {
                sampled[j] = true;
            }
        }
        for (offset, &j) in group.iter().enumerate() {
            rank[j] = start + offset + 1;
        }
        start = end;
    }
    OrderedRanking { rank, sampled }
}

/// Everything needed to settle one tie.
#[derive(Clone, Debug)]
pub struct TieContext<'a> {
    pub tied: Vec<usize>,
    /// Totals for every count so far, oldest first; `None` for candidates
    /// no longer hopeful at that count.
    pub history: &'a [Vec<Option<f64>>],
    /// Ballots as cast (after any correction), for the ordered ranking.
    pub original_ballots: &'a BallotMatrix,
    pub direction: TieDirection,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TieOutcome {
    pub chosen: usize,
    pub tag: TieTag,
}

/// Settles a tie with the history / ordered / draw cascade.
pub fn break_tie(ctx: &TieContext<'_>, policy: TiePolicy) -> TieOutcome {
    assert!(ctx.tied.len() >= 2, "a tie needs at least two candidates");
    let survivors = history_survivors(ctx, policy);
    if let [only] = survivors[..] {
        return TieOutcome {
            chosen: only,
            tag: TieTag::new(policy, false, false),
        };
    }

    let ordering = ordered_ranking(ctx.original_ballots, ctx.seed);
    let counts = preference_counts(ctx.original_ballots);
    let pick = |a: &&usize, b: &&usize| ordering.rank[**a].cmp(&ordering.rank[**b]);
    let chosen = *match ctx.direction {
        TieDirection::Elimination => survivors.iter().min_by(pick),
        TieDirection::Election => survivors.iter().max_by(pick),
    }
    .expect("survivors are non-empty");
    let sampled = survivors
        .iter()
        .any(|&j| j != chosen && counts[j] == counts[chosen]);
    TieOutcome {
        chosen,
        tag: TieTag::new(policy, true, sampled),
    }
}

/// Candidates left after filtering on the vote history. Each count that
/// separates the current survivors keeps only the extremal ones.
pub fn history_survivors(ctx: &TieContext<'_>, policy: TiePolicy) -> Vec<usize> {
    let mut survivors = ctx.tied.clone();
    let counts: Box<dyn Iterator<Item = &Vec<Option<f64>>>> = match policy {
        TiePolicy::Forwards => Box::new(ctx.history.iter()),
        TiePolicy::Backwards => Box::new(ctx.history.iter().rev()),
    };
    for totals in counts {
        if survivors.len() == 1 {
            break;
        }
        let values: Option<Vec<f64>> = survivors.iter().map(|&j| totals[j]).collect();
        let Some(values) = values else { continue };
        let extreme = match ctx.direction {
            TieDirection::Election => values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            TieDirection::Elimination => values.iter().copied().fold(f64::INFINITY, f64::min),
        };
        if values.iter().all(|&v| same_total(v, values[0])) {
            continue;
        }
        survivors = survivors
            .iter()
            .zip(&values)
            .filter(|(_, &v)| same_total(v, extreme))
            .map(|(&j, _)| j)
            .collect();
    }
    survivors
}

/// Legacy rule: the last-named candidate is elected, the first-named
/// eliminated.
pub fn positional_tie(tied: &[usize], direction: TieDirection) -> TieOutcome {
    let chosen = match direction {
        TieDirection::Election => *tied.iter().max().expect("non-empty tie"),
        TieDirection::Elimination => *tied.iter().min().expect("non-empty tie"),
    };
    TieOutcome {
        chosen,
        tag: TieTag::Positional,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets;

    #[test]
    fn faculty_preference_counts() {
        let counts = preference_counts(&datasets::faculty());
        assert_eq!(counts[1], vec![1, 7, 0, 2, 0]);
        assert_eq!(counts[4], vec![1, 1, 4, 1, 3]);
        let food = preference_counts(&datasets::food_election());
        assert_eq!(food[2][0], 12);
    }

    #[test]
    fn single_ballot_counts() {
        let b = BallotMatrix::from_ranks(&["A", "B"], &[vec![1, 2]]).unwrap();
        assert_eq!(preference_counts(&b), vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn faculty_ordered_ranking() {
        let r = ordered_ranking(&datasets::faculty(), 0);
        assert_eq!(r.rank, vec![1, 3, 4, 5, 2]);
        assert_eq!(r.sampled, vec![false; 5]);
    }

    #[test]
    fn clones_are_sampled() {
        let b = BallotMatrix::from_ranks(&["A", "B", "C"], &[vec![1, 2, 3], vec![1, 3, 2]]).unwrap();
        let r = ordered_ranking(&b, 11);
        assert_eq!(r.rank[0], 3);
        assert_eq!(r.sampled, vec![false, true, true]);
        let mut pair = vec![r.rank[1], r.rank[2]];
        pair.sort_unstable();
        assert_eq!(pair, vec![1, 2]);
        assert_eq!(ordered_ranking(&b, 11), r);
    }

    #[test]
    fn one_candidate_ranking() {
        let b = BallotMatrix::from_ranks(&["A"], &[vec![1]]).unwrap();
        let r = ordered_ranking(&b, 0);
        assert_eq!((r.rank, r.sampled), (vec![1], vec![false]));
    }

    fn faculty_history() -> Vec<Vec<Option<f64>>> {
        // Single-seat faculty count, counts 1 to 4.
        vec![
            vec![Some(0.0), Some(1.0), Some(3.0), Some(5.0), Some(1.0)],
            vec![None, Some(1.0), Some(3.0), Some(5.0), Some(1.0)],
            vec![None, Some(2.0), Some(3.0), Some(5.0), None],
            vec![None, None, Some(5.0), Some(5.0), None],
        ]
    }

    #[test]
    fn ordered_stage_eliminates_poisson() {
        let faculty = datasets::faculty();
        let history = faculty_history();
        let ctx = TieContext {
            tied: vec![1, 4],
            history: &history[..2],
            original_ballots: &faculty,
            direction: TieDirection::Elimination,
            seed: 0,
        };
        assert_eq!(
            break_tie(&ctx, TiePolicy::Forwards),
            TieOutcome { chosen: 4, tag: TieTag::Fo }
        );
        assert_eq!(break_tie(&ctx, TiePolicy::Backwards).tag, TieTag::Bo);
    }

    #[test]
    fn history_eliminates_laplace_both_ways() {
        let faculty = datasets::faculty();
        let history = faculty_history();
        let ctx = TieContext {
            tied: vec![2, 3],
            history: &history,
            original_ballots: &faculty,
            direction: TieDirection::Elimination,
            seed: 0,
        };
        assert_eq!(
            break_tie(&ctx, TiePolicy::Forwards),
            TieOutcome { chosen: 2, tag: TieTag::F }
        );
        assert_eq!(
            break_tie(&ctx, TiePolicy::Backwards),
            TieOutcome { chosen: 2, tag: TieTag::B }
        );
        let elect = TieContext {
            direction: TieDirection::Election,
            ..ctx
        };
        assert_eq!(break_tie(&elect, TiePolicy::Forwards).chosen, 3);
    }

    #[test]
    fn full_clones_fall_through_to_sampling() {
        let b = BallotMatrix::from_ranks(&["A", "B"], &[vec![1, 2], vec![2, 1]]).unwrap();
        let history = vec![vec![Some(1.0), Some(1.0)]];
        let ctx = TieContext {
            tied: vec![0, 1],
            history: &history,
            original_ballots: &b,
            direction: TieDirection::Elimination,
            seed: 5,
        };
        let out = break_tie(&ctx, TiePolicy::Backwards);
        assert_eq!(out.tag, TieTag::Bos);
        assert_eq!(break_tie(&ctx, TiePolicy::Backwards), out);
    }

    #[test]
    fn positional_rule() {
        assert_eq!(positional_tie(&[1, 3], TieDirection::Election).chosen, 3);
        assert_eq!(positional_tie(&[1, 3], TieDirection::Elimination).chosen, 1);
    }
}

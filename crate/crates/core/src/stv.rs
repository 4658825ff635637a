//! Single Transferable Vote.
//!
//! Each ballot carries a weight, initially 1, that sits with its current
//! first preference(s). A count either elects the leading hopeful, if it
//! reaches the quota, or eliminates the trailing one. An elected
//! candidate's ballots keep only the surplus fraction `(v - Q) / v` of
//! their weight; an eliminated candidate's ballots move on at full weight.
//! Either way the candidate is struck from every ballot and later
//! preferences move up a place.
//!
//! With equal preferences a ballot's weight is split evenly over all of its
//! joint first preferences, and on election only the elected candidate's
//! share is reduced.

use serde::Serialize;

use crate::ballot::{
    correct_ranking, validate_ballots, BallotKind, BallotMatrix, ValidationMode, ValidationReport,
};
use crate::config::{check_reserved, check_seats, ReservedSeats};
use crate::draw::{same_total, DEFAULT_SEED};
use crate::error::{Error, Result};
use crate::tiebreak::{
    break_tie, ordered_ranking, positional_tie, TieContext, TieDirection, TieOutcome, TiePolicy,
    TieTag,
};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum QuotaPolicy {
    /// Recomputed every count from the votes still in play.
    #[default]
    Adaptive,
    /// Fixed at the first-count value.
    Constant,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StvOptions {
    pub seats: usize,
    pub epsilon: f64,
    pub quota_policy: QuotaPolicy,
    pub equal_ranking: bool,
    pub ties: TiePolicy,
    pub reserved: Option<ReservedSeats>,
    pub seed: u64,
    pub complete_ranking: bool,
    /// Settle every tie by ballot-paper position instead of the cascade.
    pub positional_ties: bool,
}

impl StvOptions {
    pub fn new(seats: usize) -> Self {
        StvOptions {
            seats,
            epsilon: 0.001,
            quota_policy: QuotaPolicy::Adaptive,
            equal_ranking: false,
            ties: TiePolicy::Forwards,
            reserved: None,
            seed: DEFAULT_SEED,
            complete_ranking: false,
            positional_ties: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EventKind {
    Elected,
    Eliminated,
}

/// What happened at the end of a count.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountEvent {
    pub kind: EventKind,
    pub candidate: usize,
    pub tie: Option<TieTag>,
    /// Elected without reaching the quota because only as many hopefuls
    /// remained as seats.
    pub below_quota: bool,
    /// `v - Q` for an election above quota, otherwise 0.
    pub surplus: f64,
}

/// One row of the audit trail.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountRecord {
    pub count: usize,
    pub quota: f64,
    /// Votes per candidate at this count; `None` once elected or eliminated.
    pub totals: Vec<Option<f64>>,
    /// Change from the previous count; `None` at count 1 and for candidates
    /// retired before the previous count. The candidate retired at the
    /// previous count shows minus its surplus (elected) or minus its votes
    /// (eliminated).
    pub transfers: Vec<Option<f64>>,
    pub event: CountEvent,
    /// Vote mass that could not be passed on after this count's event.
    pub exhausted: f64,
    /// Ballot weights at the start of the count.
    #[serde(skip)]
    pub weights: Vec<f64>,
}

impl CountRecord {
    pub fn total_votes(&self) -> f64 {
        self.totals.iter().flatten().sum()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StvResult {
    pub candidates: Vec<String>,
    pub seats: usize,
    pub equal_ranking: bool,
    /// Members of the reserved-seat group.
    pub marked: Vec<bool>,
    pub reserved_seats: usize,
    pub elected: Vec<usize>,
    pub eliminated: Vec<usize>,
    pub counts: Vec<CountRecord>,
    /// Elected in order, then the rest from strongest to weakest.
    pub ranking: Vec<usize>,
    pub validation: ValidationReport,
    /// Valid ballots as counted, after any rank correction.
    #[serde(skip)]
    pub data: BallotMatrix,
}

impl StvResult {
    pub fn tie_breaks(&self) -> impl Iterator<Item = (usize, TieTag)> + '_ {
        self.counts
            .iter()
            .filter_map(|c| c.event.tie.map(|t| (c.count, t)))
    }
}

/// Quota for the current count.
pub fn compute_quota(
    current_total: f64,
    remaining_seats: usize,
    epsilon: f64,
    policy: QuotaPolicy,
    initial_quota: f64,
) -> f64 {
    match policy {
        QuotaPolicy::Adaptive => current_total / (remaining_seats as f64 + 1.0) + epsilon,
        QuotaPolicy::Constant => initial_quota,
    }
}

/// Weighted first preferences `u` (ballot by candidate) and their column
/// sums. `ranks` holds the working ranks, 0 for unranked.
pub fn weighted_first_prefs(
    ranks: &[Vec<u32>],
    weights: &[f64],
    equal_ranking: bool,
) -> (Vec<Vec<f64>>, Vec<f64>) {
    let m = ranks.first().map_or(0, Vec::len);
    let mut totals = vec![0.0; m];
    let u = ranks
        .iter()
        .zip(weights)
        .map(|(row, &w)| {
            let firsts = row.iter().filter(|&&r| r == 1).count();
            let share = if equal_ranking && firsts > 0 {
                w / firsts as f64
            } else {
                w
            };
            row.iter()
                .map(|&r| if r == 1 { share } else { 0.0 })
                .collect::<Vec<f64>>()
        })
        .collect::<Vec<_>>();
    for row in &u {
        for (t, x) in totals.iter_mut().zip(row) {
            *t += x;
        }
    }
    (u, totals)
}

/// Reweights the ballots whose first preference includes the elected
/// candidate `k`, keeping the fraction `surplus_fraction` of `k`'s share.
pub fn transfer_surplus(
    ranks: &[Vec<u32>],
    u: &[Vec<f64>],
    weights: &mut [f64],
    k: usize,
    surplus_fraction: f64,
    equal_ranking: bool,
) {
    for (r, row) in ranks.iter().enumerate() {
        if row[k] != 1 {
            continue;
        }
        weights[r] = if equal_ranking {
            let held: f64 = u[r].iter().sum();
            held - u[r][k] + u[r][k] * surplus_fraction
        } else {
            u[r][k] * surplus_fraction
        };
    }
}

/// Strikes candidate `k` from every ballot: ranks behind `k` move up one
/// place and `k`'s column is cleared.
pub fn retire_candidate(ranks: &mut [Vec<u32>], k: usize) {
    for row in ranks.iter_mut() {
        let rk = row[k];
        if rk == 0 {
            continue;
        }
        for r in row.iter_mut() {
            if *r > rk {
                *r -= 1;
            }
        }
        row[k] = 0;
    }
}

/// Elected candidates in order, then hopefuls by final total, then
/// eliminated candidates from last eliminated to first.
pub fn complete_ranking(result: &StvResult) -> Vec<usize> {
    result.ranking.clone()
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    Hopeful,
    Elected,
    Eliminated,
}

/// Runs a full STV count.
pub fn count_stv(ballots: &BallotMatrix, opts: &StvOptions) -> Result<StvResult> {
    if ballots.kind() != BallotKind::Ranked {
        return Err(Error::Unsupported("STV needs ranked ballots".into()));
    }
    let m = ballots.num_candidates();
    check_seats(opts.seats, m)?;
    if !(opts.epsilon > 0.0 && opts.epsilon.is_finite()) {
        return Err(Error::Config(format!(
            "epsilon must be positive, got {}",
            opts.epsilon
        )));
    }
    let (marked, reserved_seats) = match &opts.reserved {
        Some(spec) => (check_reserved(spec, opts.seats, ballots.candidates())?, spec.count),
        None => (vec![false; m], 0),
    };

    let mode = if opts.equal_ranking {
        ValidationMode::EqualRanked
    } else {
        ValidationMode::StrictRanked
    };
    let validation = validate_ballots(ballots, mode);
    if validation.valid_count == 0 {
        return Err(Error::NoValidBallots);
    }
    let mut data = ballots.select_rows(&validation.valid_rows(ballots.num_ballots()));
    if opts.equal_ranking {
        let rows = data
            .rows()
            .iter()
            .map(|row| correct_ranking(row))
            .collect::<Result<Vec<_>>>()?;
        data = BallotMatrix::new(data.candidates().to_vec(), rows, BallotKind::Ranked)?;
    }
    let mut ranks: Vec<Vec<u32>> = data
        .rows()
        .iter()
        .map(|row| row.iter().map(|e| e.map_or(0, |r| r as u32)).collect())
        .collect();

    let n = ranks.len();
    let initial_quota = n as f64 / (opts.seats as f64 + 1.0) + opts.epsilon;
    let mut status = vec![Status::Hopeful; m];
    let mut weights = vec![1.0; n];
    let mut remaining = opts.seats;
    let mut elected: Vec<usize> = Vec::new();
    let mut eliminated = Vec::new();
    let mut history: Vec<Vec<Option<f64>>> = Vec::new();
    let mut counts: Vec<CountRecord> = Vec::new();

    while remaining > 0 && status.contains(&Status::Hopeful) {
        let start_weights = weights.clone();
        let (u, v) = weighted_first_prefs(&ranks, &weights, opts.equal_ranking);
        let total: f64 = v.iter().sum();
        let quota = compute_quota(total, remaining, opts.epsilon, opts.quota_policy, initial_quota);
        let totals: Vec<Option<f64>> = (0..m)
            .map(|j| (status[j] == Status::Hopeful).then_some(v[j]))
            .collect();
        history.push(totals.clone());

        let hopefuls: Vec<usize> = (0..m).filter(|&j| status[j] == Status::Hopeful).collect();
        let unmarked_elected = elected.iter().filter(|&&j| !marked[j]).count();
        let unmarked_full = reserved_seats > 0 && unmarked_elected >= opts.seats - reserved_seats;
        let electable: Vec<usize> = hopefuls
            .iter()
            .copied()
            .filter(|&j| !unmarked_full || marked[j])
            .collect();
        let lead = electable.iter().map(|&j| v[j]).fold(f64::NEG_INFINITY, f64::max);

        let decide = |pool: &[usize], direction: TieDirection| -> (usize, Option<TieTag>) {
            let extreme = match direction {
                TieDirection::Election => pool.iter().map(|&j| v[j]).fold(f64::NEG_INFINITY, f64::max),
                TieDirection::Elimination => pool.iter().map(|&j| v[j]).fold(f64::INFINITY, f64::min),
            };
            let tied: Vec<usize> = pool
                .iter()
                .copied()
                .filter(|&j| same_total(v[j], extreme))
                .collect();
            if tied.len() == 1 {
                return (tied[0], None);
            }
            let TieOutcome { chosen, tag } = if opts.positional_ties {
                positional_tie(&tied, direction)
            } else {
                let ctx = TieContext {
                    tied,
                    history: &history,
                    original_ballots: &data,
                    direction,
                    seed: opts.seed,
                };
                break_tie(&ctx, opts.ties)
            };
            (chosen, Some(tag))
        };

        let event = if !electable.is_empty() && lead >= quota {
            let (k, tie) = decide(&electable, TieDirection::Election);
            CountEvent {
                kind: EventKind::Elected,
                candidate: k,
                tie,
                below_quota: false,
                surplus: v[k] - quota,
            }
        } else if !electable.is_empty() && hopefuls.len() <= remaining {
            let (k, tie) = decide(&electable, TieDirection::Election);
            CountEvent {
                kind: EventKind::Elected,
                candidate: k,
                tie,
                below_quota: true,
                surplus: 0.0,
            }
        } else {
            let marked_in_play = (0..m)
                .filter(|&j| marked[j] && status[j] != Status::Eliminated)
                .count();
            let unmarked_hopefuls: Vec<usize> =
                hopefuls.iter().copied().filter(|&j| !marked[j]).collect();
            let protect_group = reserved_seats > 0
                && (marked_in_play <= reserved_seats || unmarked_full)
                && !unmarked_hopefuls.is_empty();
            let pool = if protect_group { &unmarked_hopefuls } else { &hopefuls };
            let (k, tie) = decide(pool, TieDirection::Elimination);
            CountEvent {
                kind: EventKind::Eliminated,
                candidate: k,
                tie,
                below_quota: false,
                surplus: 0.0,
            }
        };

        let k = event.candidate;
        let carried: Vec<usize> = (0..n).filter(|&r| ranks[r][k] == 1).collect();
        match event.kind {
            EventKind::Elected => {
                let fraction = if v[k] > 0.0 { event.surplus / v[k] } else { 0.0 };
                transfer_surplus(&ranks, &u, &mut weights, k, fraction, opts.equal_ranking);
                status[k] = Status::Elected;
                elected.push(k);
                remaining -= 1;
            }
            EventKind::Eliminated => {
                status[k] = Status::Eliminated;
                eliminated.push(k);
            }
        }
        retire_candidate(&mut ranks, k);
        let exhausted = carried
            .iter()
            .filter(|&&r| !ranks[r].contains(&1))
            .map(|&r| weights[r])
            .sum();

        let transfers = match counts.last() {
            None => vec![None; m],
            Some(prev) => (0..m)
                .map(|j| {
                    if let Some(now) = totals[j] {
                        prev.totals[j].map(|before| now - before)
                    } else if j == prev.event.candidate {
                        Some(match prev.event.kind {
                            EventKind::Elected => -prev.event.surplus,
                            EventKind::Eliminated => -prev.totals[j].unwrap_or(0.0),
                        })
                    } else {
                        None
                    }
                })
                .collect(),
        };
        counts.push(CountRecord {
            count: counts.len() + 1,
            quota,
            totals,
            transfers,
            event,
            exhausted,
            weights: start_weights,
        });
    }

    let mut ranking = elected.clone();
    let last_totals = &counts.last().expect("at least one count").totals;
    let mut rest: Vec<usize> = (0..m).filter(|&j| status[j] == Status::Hopeful).collect();
    if !rest.is_empty() {
        let order = ordered_ranking(&data, opts.seed);
        rest.sort_by(|&a, &b| {
            let (va, vb) = (last_totals[a].unwrap_or(0.0), last_totals[b].unwrap_or(0.0));
            vb.total_cmp(&va).then(order.rank[b].cmp(&order.rank[a]))
        });
    }
    ranking.extend(rest);
    ranking.extend(eliminated.iter().rev());

    Ok(StvResult {
        candidates: ballots.candidates().to_vec(),
        seats: opts.seats,
        equal_ranking: opts.equal_ranking,
        marked,
        reserved_seats,
        elected,
        eliminated,
        counts,
        ranking,
        validation,
        data,
    })
}

//! Seeded random draws and tolerant total comparisons.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Seed used when the caller does not pick one.
pub const DEFAULT_SEED: u64 = 0;

/// Relative tolerance for treating two vote totals as tied.
pub const TIE_TOLERANCE: f64 = 1e-9;

pub(crate) fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) fn same_total(a: f64, b: f64) -> bool {
    (a - b).abs() <= TIE_TOLERANCE * a.abs().max(b.abs()).max(1.0)
}

/// A random draw that settled a tie: `chosen` were picked from `tied`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TieDraw {
    pub tied: Vec<usize>,
    pub chosen: Vec<usize>,
}

/// Orders candidates by `totals` (best first) and takes the first `seats`.
/// A tie straddling the cut is settled by a uniform draw from `rng`.
/// Candidates for which `eligible` is false are never selected.
pub(crate) fn select_best(
    totals: &[f64],
    seats: usize,
    larger_is_better: bool,
    eligible: impl Fn(usize) -> bool,
    rng: &mut ChaCha8Rng,
) -> (Vec<usize>, Option<TieDraw>) {
    let order = sorted_by_total(totals, larger_is_better);
    let pool: Vec<usize> = order.into_iter().filter(|&j| eligible(j)).collect();
    if pool.len() <= seats {
        return (pool, None);
    }
    let cut = totals[pool[seats - 1]];
    let (mut selected, tied): (Vec<usize>, Vec<usize>) = {
        let ahead: Vec<usize> = pool
            .iter()
            .copied()
            .filter(|&j| !same_total(totals[j], cut) && better(totals[j], cut, larger_is_better))
            .collect();
        let tied = pool
            .iter()
            .copied()
            .filter(|&j| same_total(totals[j], cut))
            .collect();
        (ahead, tied)
    };
    let need = seats - selected.len();
    if tied.len() == need {
        selected.extend(tied);
        return (selected, None);
    }
    let mut shuffled = tied.clone();
    shuffled.shuffle(rng);
    shuffled.truncate(need);
    // keep the drawn winners in ballot-paper order
    shuffled.sort_unstable();
    selected.extend(&shuffled);
    (
        selected,
        Some(TieDraw {
            tied,
            chosen: shuffled,
        }),
    )
}

fn better(a: f64, b: f64, larger_is_better: bool) -> bool {
    if larger_is_better {
        a > b
    } else {
        a < b
    }
}

/// Candidate indices sorted best first; equal totals keep ballot-paper order.
pub(crate) fn sorted_by_total(totals: &[f64], larger_is_better: bool) -> Vec<usize> {
    let mut order: Vec<usize> = (0..totals.len()).collect();
    order.sort_by(|&a, &b| {
        let ord = totals[a].total_cmp(&totals[b]);
        if larger_is_better {
            ord.reverse()
        } else {
            ord
        }
    });
    order
}

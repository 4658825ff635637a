use serde_json::{json, Map, Value};

use crate::ballot::ValidationReport;
use crate::config::ElectionConfig;
use crate::stv::StvResult;
use crate::ElectionResult;

/// Full-precision JSON document for a result. Key order is fixed, so the
/// same result always serializes to the same bytes.
pub fn render_json(result: &ElectionResult, config: &ElectionConfig) -> String {
    let mut doc = to_value(result, config);
    if let Value::Object(map) = &mut doc {
        map.retain(|_, v| !v.is_null());
    }
    serde_json::to_string_pretty(&doc).expect("report values are serializable") + "\n"
}

pub fn to_value(result: &ElectionResult, config: &ElectionConfig) -> Value {
    let candidates = result.candidates();
    let named = |values: &mut dyn Iterator<Item = Value>| -> Value {
        Value::Object(candidates.iter().cloned().zip(values).collect::<Map<_, _>>())
    };
    let name_list = |idx: &[usize]| -> Value {
        idx.iter().map(|&j| Value::from(candidates[j].clone())).collect()
    };

    let mut counts = Vec::new();
    let mut totals = Value::Null;
    let mut ranking = Value::Null;
    let mut pairwise = Value::Null;
    let mut runoff = Value::Null;
    let mut tiebreaks = Vec::new();

    match result {
        ElectionResult::Tally(r) => {
            totals = named(&mut r.totals.iter().map(|&t| json!(t)));
            if let Some(d) = &r.draw {
                tiebreaks.push(json!({"tag": "draw", "tied": name_list(&d.tied), "chosen": name_list(&d.chosen)}));
            }
        }
        ElectionResult::TwoRound(r) => {
            totals = named(&mut r.first_totals.iter().map(|&t| json!(t)));
            if let Some(ro) = &r.runoff {
                runoff = json!({
                    "finalists": name_list(&ro.finalists),
                    "totals": named(&mut ro.totals.iter().map(|&t| json!(t))),
                    "percent": named(&mut ro.percent.iter().map(|&p| json!(p))),
                    "exhausted": ro.exhausted,
                });
            }
            for d in &r.draws {
                tiebreaks.push(json!({"tag": "draw", "tied": name_list(&d.tied), "chosen": name_list(&d.chosen)}));
            }
        }
        ElectionResult::Condorcet(r) => {
            let m = &r.matrix;
            totals = named(&mut m.totals.iter().map(|&t| json!(t)));
            pairwise = json!({
                "wins": m.wins,
                "preferences": m.preferences,
                "winner": r.winner.map(|w| candidates[w].clone()),
                "loser": r.loser.map(|l| candidates[l].clone()),
                "runoff_rounds": r.runoff_rounds.iter().map(|f| name_list(f)).collect::<Vec<_>>(),
            });
        }
        ElectionResult::Stv(r) => {
            counts = stv_counts(r);
            if let Some(last) = r.counts.last() {
                totals = named(&mut last.totals.iter().map(|t| json!(t)));
            }
            if config.complete_ranking {
                ranking = name_list(&r.ranking);
            }
            tiebreaks = r
                .tie_breaks()
                .map(|(count, tag)| json!({"count": count, "tag": tag}))
                .collect();
        }
    }

    json!({
        "method": result.method(),
        "candidates": candidates,
        "config": config,
        "validation": validation(result.validation()),
        "counts": counts,
        "totals": totals,
        "elected": name_list(&result.elected()),
        "ranking": ranking,
        "pairwise": pairwise,
        "runoff": runoff,
        "tiebreaks": tiebreaks,
    })
}

fn validation(v: &ValidationReport) -> Value {
    json!({
        "valid": v.valid_count,
        "invalid": v.invalid_count,
        "invalid_rows": v.invalid_rows.iter()
            .map(|(i, reason)| json!({"row": i + 1, "reason": reason}))
            .collect::<Vec<_>>(),
        "corrected_rows": v.corrected_rows.iter().map(|i| i + 1).collect::<Vec<_>>(),
    })
}

fn stv_counts(r: &StvResult) -> Vec<Value> {
    let by_name = |values: &[Option<f64>]| -> Value {
        Value::Object(
            r.candidates
                .iter()
                .zip(values)
                .filter_map(|(name, v)| v.map(|v| (name.clone(), json!(v))))
                .collect(),
        )
    };
    r.counts
        .iter()
        .map(|c| {
            json!({
                "count": c.count,
                "quota": c.quota,
                "totals": by_name(&c.totals),
                "transfers": by_name(&c.transfers),
                "event": {
                    "kind": c.event.kind,
                    "candidate": r.candidates[c.event.candidate],
                    "tie": c.event.tie,
                    "below_quota": c.event.below_quota,
                    "surplus": c.event.surplus,
                },
                "exhausted": c.exhausted,
            })
        })
        .collect()
}

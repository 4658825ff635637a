use std::fmt::Write;

use super::format::{fixed, number, percent};
use super::table::{Align, Table};
use super::ReportOptions;
use crate::baseline::TallyResult;
use crate::ballot::ValidationReport;
use crate::preferential::{CondorcetResult, TwoRoundResult};
use crate::stv::{EventKind, StvResult};
use crate::{ElectionResult, Method};

pub fn render_markdown(result: &ElectionResult, opts: &ReportOptions) -> String {
    match result {
        ElectionResult::Tally(r) => tally(r, opts),
        ElectionResult::TwoRound(r) => two_round(r),
        ElectionResult::Condorcet(r) => condorcet(r),
        ElectionResult::Stv(r) => stv(r, opts),
    }
}

fn banner(out: &mut String, title: &str) {
    let _ = writeln!(out, "{title}\n{}", "=".repeat(title.chars().count()));
}

fn header(out: &mut String, title: &str, v: &ValidationReport, candidates: usize, seats: usize) {
    banner(out, title);
    let values = [v.valid_count, v.invalid_count, candidates, seats].map(|x| x.to_string());
    let w = values.iter().map(String::len).max().unwrap_or(1);
    let labels = [
        "Number of valid votes:",
        "Number of invalid votes:",
        "Number of candidates:",
        "Number of seats:",
    ];
    for (label, value) in labels.iter().zip(&values) {
        let _ = writeln!(out, "{label:<25}{value:>w$}");
    }
}

fn names(candidates: &[String], idx: &[usize]) -> String {
    idx.iter()
        .map(|&j| candidates[j].as_str())
        .collect::<Vec<_>>()
        .join(", ")
}

fn notes(out: &mut String, v: &ValidationReport) {
    if !v.invalid_rows.is_empty() {
        let rows: Vec<String> = v
            .invalid_rows
            .iter()
            .map(|(i, reason)| format!("{} ({reason})", i + 1))
            .collect();
        let _ = writeln!(out, "Invalid ballots: {}", rows.join(", "));
    }
    if !v.corrected_rows.is_empty() {
        let rows: Vec<String> = v.corrected_rows.iter().map(|i| (i + 1).to_string()).collect();
        let _ = writeln!(out, "Corrected ballots: {}", rows.join(", "));
    }
}

fn mark(on: bool) -> String {
    if on { "x" } else { "" }.to_string()
}

fn tally(r: &TallyResult, opts: &ReportOptions) -> String {
    let title = match r.method {
        Method::Plurality => "Results of Plurality voting",
        Method::Approval => "Results of Approval voting",
        _ => "Results of Score voting",
    };
    let mut out = String::new();
    header(&mut out, title, &r.validation, r.candidates.len(), r.seats);
    out.push('\n');

    let integral = r.totals.iter().all(|t| t.fract() == 0.0);
    let show = |x: f64| if integral { number(x, opts.digits) } else { fixed(x, opts.digits) };
    let mut t = Table::new()
        .column("", Align::Left)
        .column("Candidate", Align::Left)
        .column("Total", Align::Right)
        .column("Elected", Align::Center);
    for (pos, &j) in r.display_order.iter().enumerate() {
        t.row(vec![
            (pos + 1).to_string(),
            r.candidates[j].clone(),
            show(r.totals[j]),
            mark(r.elected.contains(&j)),
        ]);
    }
    t.row(vec!["Sum".into(), String::new(), show(r.total_mass()), String::new()]);
    out.push_str(&t.render());
    let _ = writeln!(out, "\nElected: {}", names(&r.candidates, &r.elected));
    if let Some(draw) = &r.draw {
        let _ = writeln!(
            out,
            "Tie settled by random draw among: {}",
            names(&r.candidates, &draw.tied)
        );
    }
    notes(&mut out, &r.validation);
    out
}

fn two_round(r: &TwoRoundResult) -> String {
    let mut out = String::new();
    header(&mut out, "Results of two-round-runoff voting", &r.validation, r.candidates.len(), 1);
    out.push('\n');

    let mut t = Table::new()
        .column("", Align::Left)
        .column("Candidate", Align::Left)
        .column("Total", Align::Right)
        .column("Percent", Align::Right);
    if r.runoff.is_some() {
        t = t.column("ROTotal", Align::Right).column("ROPercent", Align::Right);
    }
    t = t.column("Elected", Align::Center);
    for (j, name) in r.candidates.iter().enumerate() {
        let mut row = vec![
            (j + 1).to_string(),
            name.clone(),
            r.first_totals[j].to_string(),
            percent(r.first_percent[j]),
        ];
        if let Some(ro) = &r.runoff {
            row.push(ro.totals[j].to_string());
            row.push(percent(ro.percent[j]));
        }
        row.push(mark(r.elected == j));
        t.row(row);
    }
    let first_sum: u64 = r.first_totals.iter().sum();
    let hundred = |sum: u64| percent(if sum > 0 { 100.0 } else { 0.0 });
    let mut sum_row = vec!["Sum".into(), String::new(), first_sum.to_string(), hundred(first_sum)];
    if let Some(ro) = &r.runoff {
        let ro_sum: u64 = ro.totals.iter().sum();
        sum_row.push(ro_sum.to_string());
        sum_row.push(hundred(ro_sum));
    }
    sum_row.push(String::new());
    t.row(sum_row);
    out.push_str(&t.render());
    let _ = writeln!(out, "\nElected: {}", r.candidates[r.elected]);
    for draw in &r.draws {
        let _ = writeln!(
            out,
            "Tie settled by random draw among: {}",
            names(&r.candidates, &draw.tied)
        );
    }
    notes(&mut out, &r.validation);
    out
}

fn condorcet(r: &CondorcetResult) -> String {
    let m = &r.matrix;
    let mut out = String::new();
    header(
        &mut out,
        "Results of Condorcet voting",
        &m.validation,
        m.candidates.len(),
        usize::from(r.winner.is_some()),
    );
    out.push('\n');

    let mut t = Table::new().column("", Align::Left);
    for name in &m.candidates {
        t = t.column(name.clone(), Align::Right);
    }
    t = t.column("Total", Align::Right);
    if r.winner.is_some() {
        t = t.column("Winner", Align::Center);
    }
    if r.loser.is_some() {
        t = t.column("Loser", Align::Center);
    }
    for (i, name) in m.candidates.iter().enumerate() {
        let mut row = vec![name.clone()];
        row.extend(m.wins[i].iter().map(u8::to_string));
        row.push(m.totals[i].to_string());
        if let Some(w) = r.winner {
            row.push(mark(w == i));
        }
        if let Some(l) = r.loser {
            row.push(mark(l == i));
        }
        t.row(row);
    }
    out.push_str(&t.render());
    out.push('\n');
    for (k, field) in r.runoff_rounds.iter().enumerate() {
        let _ = writeln!(out, "Runoff round {}: {}", k + 1, names(&m.candidates, field));
    }
    match r.winner {
        Some(w) => {
            let _ = writeln!(out, "Condorcet winner: {}", m.candidates[w]);
        }
        None => out.push_str(
            "There is no condorcet winner (no candidate won over all other candidates).\n",
        ),
    }
    match r.loser {
        Some(l) => {
            let _ = writeln!(out, "Condorcet loser: {}", m.candidates[l]);
        }
        None => out.push_str("There is no condorcet loser (no candidate lost to all other candidates).\n"),
    }
    notes(&mut out, &m.validation);
    out
}

fn stv(r: &StvResult, opts: &ReportOptions) -> String {
    let mut out = String::new();
    let title = if r.equal_ranking {
        "Results of Single transferable vote with equal preferences"
    } else {
        "Results of Single transferable vote"
    };
    header(&mut out, title, &r.validation, r.candidates.len(), r.seats);
    if r.reserved_seats > 0 {
        let group = r.marked.iter().filter(|&&m| m).count();
        let _ = writeln!(out, "{:<28}{:>8}", "Number of reserved seats:", r.reserved_seats);
        let _ = writeln!(out, "{:<28}{:>8}", "Eligible for reserved seats:", group);
    }
    out.push('\n');

    let d = opts.digits;
    let mut t = Table::new().column("", Align::Left);
    for rec in &r.counts {
        if rec.count > 1 {
            t = t.column(format!("{}-trans", rec.count), Align::Right);
        }
        t = t.column(rec.count.to_string(), Align::Right);
    }
    // Per count: (transfer cells or None at count 1, count cells).
    let transfer_cells: Vec<Vec<String>> = r
        .counts
        .iter()
        .map(|rec| {
            let present: Vec<f64> = rec.transfers.iter().flatten().copied().collect();
            let integral = present.iter().all(|x| x.fract() == 0.0);
            rec.transfers
                .iter()
                .map(|x| match x {
                    Some(x) if integral => number(*x, d),
                    Some(x) => fixed(*x, d),
                    None => String::new(),
                })
                .collect()
        })
        .collect();

    let mut add_row = |label: String, trans: &dyn Fn(usize) -> String, count: &dyn Fn(usize) -> String| {
        let mut row = vec![label];
        for (c, rec) in r.counts.iter().enumerate() {
            if rec.count > 1 {
                row.push(trans(c));
            }
            row.push(count(c));
        }
        t.row(row);
    };
    add_row("Quota".into(), &|_| String::new(), &|c| fixed(r.counts[c].quota, d));
    for (j, name) in r.candidates.iter().enumerate() {
        let label = if r.marked[j] { format!("{name}*") } else { name.clone() };
        add_row(
            label,
            &|c| transfer_cells[c][j].clone(),
            &|c| r.counts[c].totals[j].map_or(String::new(), |v| fixed(v, d)),
        );
    }
    if r.tie_breaks().next().is_some() {
        add_row("Tie-breaks".into(), &|_| String::new(), &|c| {
            r.counts[c].event.tie.map_or(String::new(), |tag| tag.to_string())
        });
    }
    for (label, kind) in [("Elected", EventKind::Elected), ("Eliminated", EventKind::Eliminated)] {
        add_row(label.into(), &|_| String::new(), &|c| {
            let e = &r.counts[c].event;
            if e.kind == kind {
                r.candidates[e.candidate].clone()
            } else {
                String::new()
            }
        });
    }
    out.push_str(&t.render());

    if opts.complete_ranking {
        out.push('\n');
        banner(&mut out, "Complete Ranking");
        out.push('\n');
        let mut t = Table::new()
            .column("Rank", Align::Right)
            .column("Candidate", Align::Left)
            .column("Elected", Align::Center);
        for (pos, &j) in r.ranking.iter().enumerate() {
            t.row(vec![
                (pos + 1).to_string(),
                r.candidates[j].clone(),
                mark(r.elected.contains(&j)),
            ]);
        }
        out.push_str(&t.render());
    }

    let _ = writeln!(out, "\nElected: {}", names(&r.candidates, &r.elected));
    let below: Vec<usize> = r
        .counts
        .iter()
        .filter(|c| c.event.kind == EventKind::Elected && c.event.below_quota)
        .map(|c| c.event.candidate)
        .collect();
    if !below.is_empty() {
        let _ = writeln!(out, "Elected without reaching the quota: {}", names(&r.candidates, &below));
    }
    notes(&mut out, &r.validation);
    out
}

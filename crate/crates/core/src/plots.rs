//! Plot datasets: vote evolution over STV counts, preference counts, and
//! first/second preference combinations. Each is written as CSV together
//! with a simple SVG rendering.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::ballot::{validate_ballots, BallotKind, BallotMatrix, ValidationMode};
use crate::error::{Error, Result};
use crate::stv::StvResult;
use crate::tiebreak::preference_counts;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlotKind {
    CountEvolution,
    AllPreferences,
    JointFirstSecondCounts,
    JointFirstSecondProportions,
}

impl PlotKind {
    pub fn file_stem(self) -> &'static str {
        match self {
            PlotKind::CountEvolution => "count_evolution",
            PlotKind::AllPreferences => "all_preferences",
            PlotKind::JointFirstSecondCounts => "joint_first_second_counts",
            PlotKind::JointFirstSecondProportions => "joint_first_second_proportions",
        }
    }
}

/// A labelled table of numbers; `None` cells are written empty.
#[derive(Clone, Debug, PartialEq)]
pub struct PlotDataset {
    pub kind: PlotKind,
    pub row_header: String,
    pub row_labels: Vec<String>,
    pub columns: Vec<String>,
    pub values: Vec<Vec<Option<f64>>>,
}

/// One row per count: each candidate's total (empty once retired) and the quota.
pub fn count_evolution(result: &StvResult) -> PlotDataset {
    let mut columns = result.candidates.clone();
    columns.push("quota".into());
    PlotDataset {
        kind: PlotKind::CountEvolution,
        row_header: "count".into(),
        row_labels: result.counts.iter().map(|c| c.count.to_string()).collect(),
        columns,
        values: result
            .counts
            .iter()
            .map(|c| {
                let mut row = c.totals.clone();
                row.push(Some(c.quota));
                row
            })
            .collect(),
    }
}

/// Entry (candidate, k) counts the ballots ranking the candidate k-th.
pub fn all_preferences(ballots: &BallotMatrix) -> Result<PlotDataset> {
    let valid = strict_valid(ballots)?;
    let counts = preference_counts(&valid);
    Ok(PlotDataset {
        kind: PlotKind::AllPreferences,
        row_header: "candidate".into(),
        row_labels: valid.candidates().to_vec(),
        columns: (1..=valid.num_candidates()).map(|k| k.to_string()).collect(),
        values: counts
            .iter()
            .map(|row| row.iter().map(|&x| Some(x as f64)).collect())
            .collect(),
    })
}

/// Entry (a, b) counts the ballots with first preference a and second b.
pub fn joint_first_second_counts(ballots: &BallotMatrix) -> Result<PlotDataset> {
    let valid = strict_valid(ballots)?;
    let m = valid.num_candidates();
    let mut joint = vec![vec![0.0; m]; m];
    for row in valid.rows() {
        let first = row.iter().position(|&e| e == Some(1.0));
        let second = row.iter().position(|&e| e == Some(2.0));
        if let (Some(a), Some(b)) = (first, second) {
            joint[a][b] += 1.0;
        }
    }
    Ok(PlotDataset {
        kind: PlotKind::JointFirstSecondCounts,
        row_header: "first".into(),
        row_labels: valid.candidates().to_vec(),
        columns: valid.candidates().to_vec(),
        values: joint
            .into_iter()
            .map(|row| row.into_iter().map(Some).collect())
            .collect(),
    })
}

/// Joint counts divided by each row candidate's first-preference count.
pub fn joint_first_second_proportions(ballots: &BallotMatrix) -> Result<PlotDataset> {
    let valid = strict_valid(ballots)?;
    let mut firsts = vec![0.0; valid.num_candidates()];
    for row in valid.rows() {
        if let Some(a) = row.iter().position(|&e| e == Some(1.0)) {
            firsts[a] += 1.0;
        }
    }
    let mut data = joint_first_second_counts(&valid)?;
    data.kind = PlotKind::JointFirstSecondProportions;
    for (row, &n) in data.values.iter_mut().zip(&firsts) {
        for x in row.iter_mut().flatten() {
            *x = if n > 0.0 { *x / n } else { 0.0 };
        }
    }
    Ok(data)
}

fn strict_valid(ballots: &BallotMatrix) -> Result<BallotMatrix> {
    if ballots.kind() != BallotKind::Ranked {
        return Err(Error::Unsupported("plots need ranked ballots".into()));
    }
    let has_equal = ballots.rows().iter().any(|row| {
        let mut ranks: Vec<f64> = row.iter().flatten().copied().collect();
        ranks.sort_by(f64::total_cmp);
        ranks.windows(2).any(|w| w[0] == w[1])
    });
    if has_equal {
        return Err(Error::Unsupported(
            "plots are not available for ballots with equal preferences".into(),
        ));
    }
    let report = validate_ballots(ballots, ValidationMode::StrictRanked);
    Ok(ballots.select_rows(&report.valid_rows(ballots.num_ballots())))
}

/// Every dataset that applies: the count evolution when an STV result is
/// given, and the three preference datasets.
pub fn datasets(ballots: &BallotMatrix, stv: Option<&StvResult>) -> Result<Vec<PlotDataset>> {
    let mut out = Vec::new();
    if let Some(r) = stv {
        if r.equal_ranking {
            return Err(Error::Unsupported(
                "plots are not available for ballots with equal preferences".into(),
            ));
        }
        out.push(count_evolution(r));
    }
    out.push(all_preferences(ballots)?);
    out.push(joint_first_second_counts(ballots)?);
    out.push(joint_first_second_proportions(ballots)?);
    Ok(out)
}

/// Writes each dataset as `<stem>.csv` and `<stem>.svg` under `dir`,
/// creating it if needed. Returns the written paths.
pub fn emit_plots(
    ballots: &BallotMatrix,
    stv: Option<&StvResult>,
    dir: impl AsRef<Path>,
) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    let sets = datasets(ballots, stv)?;
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for set in &sets {
        let csv_path = dir.join(format!("{}.csv", set.kind.file_stem()));
        write_csv(set, &csv_path)?;
        written.push(csv_path);
        let svg_path = dir.join(format!("{}.svg", set.kind.file_stem()));
        let svg = match set.kind {
            PlotKind::CountEvolution => line_svg(set),
            _ => heatmap_svg(set),
        };
        fs::write(&svg_path, svg)?;
        written.push(svg_path);
    }
    Ok(written)
}

fn write_csv(set: &PlotDataset, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header = vec![set.row_header.clone()];
    header.extend(set.columns.iter().cloned());
    w.write_record(&header)?;
    for (label, row) in set.row_labels.iter().zip(&set.values) {
        let mut record = vec![label.clone()];
        record.extend(row.iter().map(|v| v.map_or(String::new(), |x| x.to_string())));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

const PALETTE: [&str; 8] = [
    "#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// One polyline per column over the rows; the last column is dashed.
fn line_svg(set: &PlotDataset) -> String {
    let (w, h, margin) = (640.0, 400.0, 50.0);
    let n = set.row_labels.len().max(2) as f64;
    let top = set
        .values
        .iter()
        .flatten()
        .flatten()
        .fold(1.0_f64, |a, &b| a.max(b));
    let x = |i: usize| margin + (w - 2.0 * margin) * i as f64 / (n - 1.0);
    let y = |v: f64| h - margin - (h - 2.0 * margin) * v / top;

    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" font-family=\"sans-serif\" font-size=\"11\">\n"
    );
    let _ = writeln!(
        svg,
        "<line x1=\"{margin}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n<line x1=\"{margin}\" y1=\"{margin}\" x2=\"{margin}\" y2=\"{b}\" stroke=\"black\"/>",
        b = h - margin,
        r = w - margin
    );
    for (i, label) in set.row_labels.iter().enumerate() {
        let _ = writeln!(
            svg,
            "<text x=\"{:.1}\" y=\"{}\" text-anchor=\"middle\">{}</text>",
            x(i),
            h - margin + 15.0,
            escape(label)
        );
    }
    let last = set.columns.len().saturating_sub(1);
    for (j, name) in set.columns.iter().enumerate() {
        let colour = if j == last { "black" } else { PALETTE[j % PALETTE.len()] };
        let points: Vec<String> = set
            .values
            .iter()
            .enumerate()
            .filter_map(|(i, row)| row[j].map(|v| format!("{:.1},{:.1}", x(i), y(v))))
            .collect();
        let dash = if j == last { " stroke-dasharray=\"4 3\"" } else { "" };
        let _ = writeln!(
            svg,
            "<polyline fill=\"none\" stroke=\"{colour}\" stroke-width=\"2\"{dash} points=\"{}\"/>",
            points.join(" ")
        );
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" fill=\"{colour}\">{}</text>",
            w - margin + 5.0,
            margin + 14.0 * j as f64,
            escape(name)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// Grid of cells shaded by value, with the value printed in each cell.
fn heatmap_svg(set: &PlotDataset) -> String {
    let (cell, left, top_margin) = (60.0, 110.0, 40.0);
    let cols = set.columns.len() as f64;
    let rows = set.row_labels.len() as f64;
    let top = set
        .values
        .iter()
        .flatten()
        .flatten()
        .fold(0.0_f64, |a, &b| a.max(b));
    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" font-family=\"sans-serif\" font-size=\"11\">\n",
        left + cell * cols + 10.0,
        top_margin + cell * rows + 10.0
    );
    for (j, name) in set.columns.iter().enumerate() {
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>",
            left + cell * (j as f64 + 0.5),
            top_margin - 8.0,
            escape(name)
        );
    }
    for (i, (label, row)) in set.row_labels.iter().zip(&set.values).enumerate() {
        let y0 = top_margin + cell * i as f64;
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>",
            left - 6.0,
            y0 + cell / 2.0 + 4.0,
            escape(label)
        );
        for (j, v) in row.iter().enumerate() {
            let v = v.unwrap_or(0.0);
            let shade = if top > 0.0 { 255.0 - 200.0 * v / top } else { 255.0 };
            let shade = shade.round() as u8;
            let x0 = left + cell * j as f64;
            let _ = writeln!(
                svg,
                "<rect x=\"{x0}\" y=\"{y0}\" width=\"{cell}\" height=\"{cell}\" fill=\"rgb({shade},{shade},255)\" stroke=\"white\"/>"
            );
            let text = if v.fract() == 0.0 { format!("{v}") } else { format!("{v:.2}") };
            let _ = writeln!(
                svg,
                "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{text}</text>",
                x0 + cell / 2.0,
                y0 + cell / 2.0 + 4.0
            );
        }
    }
    svg.push_str("</svg>\n");
    svg
}

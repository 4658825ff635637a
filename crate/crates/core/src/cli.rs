//! The `tally` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};

use crate::ballot::{read_ballots, threshold_indicator, BallotKind, BallotMatrix, ParseOptions};
use crate::baseline::{count_approval, count_plurality, count_score};
use crate::config::{ElectionConfig, ReservedSeats};
use crate::error::{Error, Result};
use crate::plots::emit_plots;
use crate::preferential::{condorcet, count_two_round};
use crate::report::{render_json, render_markdown, ReportOptions};
use crate::stv::{count_stv, QuotaPolicy};
use crate::tiebreak::TiePolicy;
use crate::{ElectionResult, Method};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Plurality,
    Approval,
    Score,
    Tworound,
    Condorcet,
    Stv,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Plurality => Method::Plurality,
            MethodArg::Approval => Method::Approval,
            MethodArg::Score => Method::Score,
            MethodArg::Tworound => Method::TwoRound,
            MethodArg::Condorcet => Method::Condorcet,
            MethodArg::Stv => Method::Stv,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TiesArg {
    F,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Markdown,
    Json,
}

/// Count an election from a delimited ballot file.
///
/// The first line of the file names the candidates. Each further line is a
/// ballot: ranks for stv, tworound and condorcet; 0/1 marks for plurality
/// and approval (or ranks together with --ranks-as-approval); scores for
/// score. Empty fields and NA mean no preference.
#[derive(Debug, Parser)]
#[command(name = "tally", version)]
struct Args {
    /// Counting method.
    #[arg(value_enum)]
    method: MethodArg,
    /// Ballot file.
    file: PathBuf,
    /// Field separator; "tab" or "\t" for tabs.
    #[arg(long, default_value = ",")]
    sep: String,
    /// Number of seats [default: 2 for stv, 1 otherwise].
    #[arg(long)]
    seats: Option<usize>,
    /// Amount added to the quota (stv).
    #[arg(long)]
    eps: Option<f64>,
    /// Keep the first-count quota throughout (stv).
    #[arg(long)]
    constant_quota: bool,
    /// Allow equal preferences (stv).
    #[arg(long)]
    equal_ranking: bool,
    /// Tie-breaking direction over previous counts (stv).
    #[arg(long, value_enum)]
    ties: Option<TiesArg>,
    /// Seats reserved for the group given by --reserve-group (stv).
    #[arg(long)]
    reserve_seats: Option<usize>,
    /// Comma-separated candidates eligible for reserved seats (stv).
    #[arg(long, value_delimiter = ',')]
    reserve_group: Option<Vec<String>>,
    /// Seed for random tie-breaking.
    #[arg(long)]
    seed: Option<u64>,
    /// Decimal places in the report.
    #[arg(long, default_value_t = 3)]
    digits: usize,
    /// Higher scores are better (score).
    #[arg(long)]
    larger_wins: bool,
    /// Score for candidates left blank (score).
    #[arg(long)]
    fill_score: Option<f64>,
    /// Read ranked ballots and count these ranks as marks (plurality, approval).
    #[arg(long, value_delimiter = ',')]
    ranks_as_approval: Option<Vec<u32>>,
    /// Repeat the count among the leaders when there is no winner (condorcet).
    #[arg(long)]
    runoff: bool,
    /// Add a ranking of all candidates to the report (stv).
    #[arg(long)]
    complete_ranking: bool,
    /// Report format.
    #[arg(long, value_enum, default_value = "markdown")]
    format: Format,
    /// Write plot data and SVGs into this directory.
    #[arg(long)]
    plots: Option<PathBuf>,
}

impl Args {
    fn check_flags(&self) -> Result<()> {
        let method = Method::from(self.method);
        let only = |set: bool, flag: &str, allowed: &[Method]| -> Result<()> {
            if set && !allowed.contains(&method) {
                let names: Vec<&str> = allowed.iter().map(|m| m.name()).collect();
                return Err(Error::Config(format!(
                    "--{flag} applies only to {}",
                    names.join(", ")
                )));
            }
            Ok(())
        };
        use Method::*;
        only(self.seats.is_some(), "seats", &[Plurality, Approval, Score, Stv])?;
        only(self.eps.is_some(), "eps", &[Stv])?;
        only(self.constant_quota, "constant-quota", &[Stv])?;
        only(self.equal_ranking, "equal-ranking", &[Stv])?;
        only(self.ties.is_some(), "ties", &[Stv])?;
        only(self.reserve_seats.is_some(), "reserve-seats", &[Stv])?;
        only(self.reserve_group.is_some(), "reserve-group", &[Stv])?;
        only(self.complete_ranking, "complete-ranking", &[Stv])?;
        only(self.larger_wins, "larger-wins", &[Score])?;
        only(self.fill_score.is_some(), "fill-score", &[Score])?;
        only(self.ranks_as_approval.is_some(), "ranks-as-approval", &[Plurality, Approval])?;
        only(self.runoff, "runoff", &[Condorcet])?;
        only(self.plots.is_some(), "plots", &[Plurality, Approval, TwoRound, Condorcet, Stv])?;
        if self.reserve_seats.is_some() != self.reserve_group.is_some() {
            return Err(Error::Config(
                "--reserve-seats and --reserve-group must be given together".into(),
            ));
        }
        Ok(())
    }

    fn config(&self) -> ElectionConfig {
        let defaults = ElectionConfig::default();
        let method = Method::from(self.method);
        ElectionConfig {
            seats: self
                .seats
                .unwrap_or(if method == Method::Stv { 2 } else { 1 }),
            epsilon: self.eps.unwrap_or(defaults.epsilon),
            quota_policy: if self.constant_quota {
                QuotaPolicy::Constant
            } else {
                QuotaPolicy::Adaptive
            },
            ties: match self.ties {
                Some(TiesArg::B) => TiePolicy::Backwards,
                _ => TiePolicy::Forwards,
            },
            equal_ranking: self.equal_ranking,
            reserved: self.reserve_seats.map(|count| ReservedSeats {
                count,
                members: self.reserve_group.clone().unwrap_or_default(),
            }),
            seed: self.seed.unwrap_or(defaults.seed),
            larger_wins: self.larger_wins,
            fill_score: self.fill_score,
            complete_ranking: self.complete_ranking,
        }
    }

    fn separator(&self) -> Result<char> {
        match self.sep.as_str() {
            "tab" | "\\t" => Ok('\t'),
            s if s.chars().count() == 1 => Ok(s.chars().next().unwrap_or(',')),
            s => Err(Error::Config(format!("separator must be one character, got '{s}'"))),
        }
    }
}

fn read(args: &Args, kind: BallotKind, missing: &[&str]) -> Result<BallotMatrix> {
    let options = ParseOptions {
        separator: args.separator()?,
        missing_tokens: missing.iter().map(|s| s.to_string()).collect(),
        kind,
    };
    read_ballots(&args.file, &options)
}

/// Reads 0/1 marks; blanks count as 0.
fn read_marks(args: &Args) -> Result<BallotMatrix> {
    let raw = read(args, BallotKind::Score, &["", "NA"])?;
    let rows = raw
        .rows()
        .iter()
        .map(|row| row.iter().map(|e| Some(e.unwrap_or(0.0))).collect())
        .collect();
    BallotMatrix::new(raw.candidates().to_vec(), rows, BallotKind::Indicator).map_err(|e| {
        Error::Config(format!("{e}; use --ranks-as-approval for ranked ballots"))
    })
}

/// Counts according to `args`, returning the rendered report.
fn execute(args: &Args) -> Result<String> {
    args.check_flags()?;
    let config = args.config();
    let ranked_default = ParseOptions::default().missing_tokens;
    let ranked_missing: Vec<&str> = ranked_default.iter().map(String::as_str).collect();

    let mut ranked: Option<BallotMatrix> = None;
    let result = match args.method {
        MethodArg::Plurality | MethodArg::Approval => {
            let marks = match &args.ranks_as_approval {
                Some(ranks) => {
                    let b = read(args, BallotKind::Ranked, &ranked_missing)?;
                    let marks = threshold_indicator(&b, ranks)?;
                    ranked = Some(b);
                    marks
                }
                None => read_marks(args)?,
            };
            let r = if args.method == MethodArg::Plurality {
                count_plurality(&marks, config.seats, config.seed)?
            } else {
                count_approval(&marks, config.seats, config.seed)?
            };
            ElectionResult::Tally(r)
        }
        MethodArg::Score => {
            let b = read(args, BallotKind::Score, &["", "NA"])?;
            ElectionResult::Tally(count_score(&b, config.seats, &config.score_options(), config.seed)?)
        }
        MethodArg::Tworound => {
            let b = read(args, BallotKind::Ranked, &ranked_missing)?;
            let r = count_two_round(&b, config.seed)?;
            ranked = Some(b);
            ElectionResult::TwoRound(r)
        }
        MethodArg::Condorcet => {
            let b = read(args, BallotKind::Ranked, &ranked_missing)?;
            let r = condorcet(&b, args.runoff)?;
            ranked = Some(b);
            ElectionResult::Condorcet(r)
        }
        MethodArg::Stv => {
            let b = read(args, BallotKind::Ranked, &ranked_missing)?;
            let r = count_stv(&b, &config.stv_options())?;
            ranked = Some(b);
            ElectionResult::Stv(r)
        }
    };

    if let Some(dir) = &args.plots {
        let ballots = ranked
            .as_ref()
            .ok_or_else(|| Error::Unsupported("plots need ranked ballots".into()))?;
        let stv = match &result {
            ElectionResult::Stv(r) => Some(r),
            _ => None,
        };
        emit_plots(ballots, stv, dir)?;
    }

    Ok(match args.format {
        Format::Markdown => render_markdown(
            &result,
            &ReportOptions {
                digits: args.digits,
                complete_ranking: args.complete_ranking,
            },
        ),
        Format::Json => render_json(&result, &config),
    })
}

/// Runs the command line with `argv` (including the program name), writing
/// the report to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(args) => args,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{}", text.ansi());
            }
            return code;
        }
    };
    match execute(&args) {
        Ok(report) => {
            if out.write_all(report.as_bytes()).is_err() {
                return 1;
            }
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

/// [`run`] against the process's standard streams.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

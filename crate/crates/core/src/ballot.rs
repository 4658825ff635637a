//! Ballot matrices: parsing, validation and the preprocessing transforms
//! shared by every counting method.
//!
//! A ballot file is delimiter-separated text whose header row names the
//! candidates. Each following row is one ballot holding a rank, a score or
//! a 0/1 mark per candidate. Column order is ballot-paper order and is kept
//! by every transform here.

use std::collections::HashSet;
use std::fmt;
use std::io::{Read, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

/// What the numbers in a [`BallotMatrix`] mean.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BallotKind {
    Ranked,
    Indicator,
    Score,
}

/// N ballots by M candidates. `None` is a missing entry (no preference).
#[derive(Clone, Debug, PartialEq)]
pub struct BallotMatrix {
    candidates: Vec<String>,
    rows: Vec<Vec<Option<f64>>>,
    kind: BallotKind,
}

impl BallotMatrix {
    pub fn new(
        candidates: Vec<String>,
        rows: Vec<Vec<Option<f64>>>,
        kind: BallotKind,
    ) -> Result<Self> {
        check_candidates(&candidates)?;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != candidates.len() {
                return Err(Error::RaggedRow {
                    row: i + 1,
                    expected: candidates.len(),
                    found: row.len(),
                });
            }
            if row.iter().flatten().any(|x| !x.is_finite()) {
                return Err(Error::Matrix(format!("row {} has a non-finite entry", i + 1)));
            }
        }
        let matrix = BallotMatrix {
            candidates,
            rows,
            kind,
        };
        matrix.check_kind(kind)?;
        Ok(matrix)
    }

    /// Convenience constructor for ranked data written as integers with 0
    /// meaning "not ranked".
    pub fn from_ranks<S: AsRef<str>>(candidates: &[S], rows: &[Vec<u32>]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| (x > 0).then_some(f64::from(x))).collect())
            .collect();
        BallotMatrix::new(
            candidates.iter().map(|c| c.as_ref().to_owned()).collect(),
            rows,
            BallotKind::Ranked,
        )
    }

    pub fn candidates(&self) -> &[String] {
        &self.candidates
    }

    pub fn rows(&self) -> &[Vec<Option<f64>>] {
        &self.rows
    }

    pub fn kind(&self) -> BallotKind {
        self.kind
    }

    pub fn num_candidates(&self) -> usize {
        self.candidates.len()
    }

    pub fn num_ballots(&self) -> usize {
        self.rows.len()
    }

    pub fn candidate_index(&self, name: &str) -> Option<usize> {
        self.candidates.iter().position(|c| c == name.trim())
    }

    /// Reinterprets the matrix as another kind, checking that the entries fit.
    pub fn with_kind(mut self, kind: BallotKind) -> Result<Self> {
        self.check_kind(kind)?;
        self.kind = kind;
        Ok(self)
    }

    /// Keeps only the listed rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> BallotMatrix {
        BallotMatrix {
            candidates: self.candidates.clone(),
            rows: rows.iter().map(|&i| self.rows[i].clone()).collect(),
            kind: self.kind,
        }
    }

    fn check_kind(&self, kind: BallotKind) -> Result<()> {
        if kind == BallotKind::Indicator {
            for (i, row) in self.rows.iter().enumerate() {
                if row.iter().flatten().any(|&x| x != 0.0 && x != 1.0) {
                    return Err(Error::Matrix(format!(
                        "row {} has an indicator entry other than 0 or 1",
                        i + 1
                    )));
                }
            }
        }
        Ok(())
    }

    /// Writes the canonical delimited form: missing entries as empty fields,
    /// numbers in shortest form.
    pub fn write_delimited<W: Write>(&self, writer: W, separator: char) -> Result<()> {
        let mut out = csv::WriterBuilder::new()
            .delimiter(separator_byte(separator)?)
            .from_writer(writer);
        out.write_record(&self.candidates)?;
        for row in &self.rows {
            out.write_record(row.iter().map(|e| match e {
                Some(x) => format!("{x}"),
                None => String::new(),
            }))?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_delimited_string(&self, separator: char) -> Result<String> {
        let mut buf = Vec::new();
        self.write_delimited(&mut buf, separator)?;
        Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
    }
}

fn check_candidates(candidates: &[String]) -> Result<()> {
    if candidates.is_empty() {
        return Err(Error::Header("no candidates".into()));
    }
    let mut seen = HashSet::new();
    for name in candidates {
        if name.is_empty() {
            return Err(Error::Header("empty candidate name".into()));
        }
        if !seen.insert(name.as_str()) {
            return Err(Error::Header(format!("duplicate candidate name {name:?}")));
        }
    }
    Ok(())
}

fn separator_byte(separator: char) -> Result<u8> {
    if separator.is_ascii() {
        Ok(separator as u8)
    } else {
        Err(Error::Config(format!("separator {separator:?} is not ASCII")))
    }
}

/// Options for [`parse_ballots`].
#[derive(Clone, Debug)]
pub struct ParseOptions {
    pub separator: char,
    /// Field values (after trimming) that mean "no preference".
    pub missing_tokens: Vec<String>,
    pub kind: BallotKind,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            separator: ',',
            missing_tokens: vec![String::new(), "NA".into(), "0".into()],
            kind: BallotKind::Ranked,
        }
    }
}

/// Parses a delimited ballot file. Row and column numbers in errors are
/// 1-based and count ballots, not lines (the header is not row 1).
pub fn parse_ballots<R: Read>(source: R, options: &ParseOptions) -> Result<BallotMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(separator_byte(options.separator)?)
        .has_headers(false)
        .flexible(true)
        .from_reader(source);
    let mut records = reader.records();
    let header = match records.next() {
        Some(record) => record?,
        None => return Err(Error::EmptyInput),
    };
    let candidates: Vec<String> = header.iter().map(|h| h.trim().to_owned()).collect();
    check_candidates(&candidates)?;

    let mut rows = Vec::new();
    for (i, record) in records.enumerate() {
        let record = record?;
        let row_no = i + 1;
        if record.len() != candidates.len() {
            return Err(Error::RaggedRow {
                row: row_no,
                expected: candidates.len(),
                found: record.len(),
            });
        }
        let row = record
            .iter()
            .enumerate()
            .map(|(j, field)| {
                let field = field.trim();
                if options.missing_tokens.iter().any(|t| t == field) {
                    return Ok(None);
                }
                match field.parse::<f64>() {
                    Ok(x) if x.is_finite() => Ok(Some(x)),
                    _ => Err(Error::BadField {
                        row: row_no,
                        column: j + 1,
                        field: field.to_owned(),
                    }),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::NoBallots);
    }
    BallotMatrix::new(candidates, rows, options.kind)
}

pub fn parse_ballots_str(text: &str, options: &ParseOptions) -> Result<BallotMatrix> {
    parse_ballots(text.as_bytes(), options)
}

pub fn read_ballots(path: impl AsRef<Path>, options: &ParseOptions) -> Result<BallotMatrix> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| Error::File {
        path: path.display().to_string(),
        source,
    })?;
    parse_ballots(std::io::BufReader::new(file), options)
}

/// Which rule a ballot must satisfy to be counted.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ValidationMode {
    /// Ranks exactly 1, 2, ..., k with no repeats.
    StrictRanked,
    /// Any positive ranks; ties and gaps are corrected before counting.
    EqualRanked,
    /// 0/1 marks with exactly one candidate marked.
    IndicatorSingle,
    /// 0/1 marks with at least one candidate marked.
    IndicatorMulti,
    /// Every present score within `[min, max]`.
    Score { min: f64, max: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InvalidReason {
    BlankBallot,
    NonPositiveRank,
    NonIntegerRank,
    RepeatedRank,
    NonConsecutiveRanks,
    NotIndicator,
    MarkCount,
    ScoreOutOfRange,
}

impl fmt::Display for InvalidReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InvalidReason::BlankBallot => "blank ballot",
            InvalidReason::NonPositiveRank => "non-positive rank",
            InvalidReason::NonIntegerRank => "non-integer rank",
            InvalidReason::RepeatedRank => "repeated rank",
            InvalidReason::NonConsecutiveRanks => "non-consecutive ranks",
            InvalidReason::NotIndicator => "entry is not 0 or 1",
            InvalidReason::MarkCount => "wrong number of marks",
            InvalidReason::ScoreOutOfRange => "score out of range",
        })
    }
}

/// Outcome of [`validate_ballots`]. Row indices are 0-based.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub valid_count: usize,
    pub invalid_count: usize,
    pub invalid_rows: Vec<(usize, InvalidReason)>,
    /// Rows changed by rank correction (equal-ranking mode only).
    pub corrected_rows: Vec<usize>,
}

impl ValidationReport {
    /// Indices of the valid rows, ascending.
    pub fn valid_rows(&self, num_ballots: usize) -> Vec<usize> {
        let mut invalid = self.invalid_rows.iter().map(|(i, _)| *i).peekable();
        (0..num_ballots)
            .filter(|i| {
                if invalid.peek() == Some(i) {
                    invalid.next();
                    false
                } else {
                    true
                }
            })
            .collect()
    }
}

pub fn validate_ballots(ballots: &BallotMatrix, mode: ValidationMode) -> ValidationReport {
    let mut report = ValidationReport::default();
    for (i, row) in ballots.rows().iter().enumerate() {
        match check_row(row, mode) {
            Ok(()) => {
                report.valid_count += 1;
                if mode == ValidationMode::EqualRanked
                    && correct_ranking(row).is_ok_and(|fixed| &fixed != row)
                {
                    report.corrected_rows.push(i);
                }
            }
            Err(reason) => {
                report.invalid_count += 1;
                report.invalid_rows.push((i, reason));
            }
        }
    }
    report
}

fn check_row(row: &[Option<f64>], mode: ValidationMode) -> std::result::Result<(), InvalidReason> {
    let present: Vec<f64> = row.iter().flatten().copied().collect();
    if present.is_empty() {
        return Err(InvalidReason::BlankBallot);
    }
    match mode {
        ValidationMode::StrictRanked => {
            if present.iter().any(|&x| x <= 0.0) {
                return Err(InvalidReason::NonPositiveRank);
            }
            if present.iter().any(|&x| x.fract() != 0.0) {
                return Err(InvalidReason::NonIntegerRank);
            }
            let mut ranks: Vec<u64> = present.iter().map(|&x| x as u64).collect();
            ranks.sort_unstable();
            if ranks.windows(2).any(|w| w[0] == w[1]) {
                return Err(InvalidReason::RepeatedRank);
            }
            if ranks.iter().zip(1u64..).any(|(&r, expected)| r != expected) {
                return Err(InvalidReason::NonConsecutiveRanks);
            }
            Ok(())
        }
        ValidationMode::EqualRanked => {
            if present.iter().any(|&x| x <= 0.0) {
                Err(InvalidReason::NonPositiveRank)
            } else {
                Ok(())
            }
        }
        ValidationMode::IndicatorSingle | ValidationMode::IndicatorMulti => {
            if present.iter().any(|&x| x != 0.0 && x != 1.0) {
                return Err(InvalidReason::NotIndicator);
            }
            let marks = present.iter().filter(|&&x| x == 1.0).count();
            match (mode, marks) {
                (_, 0) => Err(InvalidReason::BlankBallot),
                (ValidationMode::IndicatorSingle, 1) => Ok(()),
                (ValidationMode::IndicatorSingle, _) => Err(InvalidReason::MarkCount),
                _ => Ok(()),
            }
        }
        ValidationMode::Score { min, max } => {
            if present.iter().all(|&x| (min..=max).contains(&x)) {
                Ok(())
            } else {
                Err(InvalidReason::ScoreOutOfRange)
            }
        }
    }
}

/// Recodes positive ranks to competition ranks: each entry becomes one plus
/// the number of entries strictly ahead of it. `1, 1, 2, 3, 3, 3` becomes
/// `1, 1, 3, 4, 4, 4`.
pub fn correct_ranking(row: &[Option<f64>]) -> Result<Vec<Option<f64>>> {
    if let Some(&bad) = row.iter().flatten().find(|&&x| !(x > 0.0 && x.is_finite())) {
        return Err(Error::NonPositiveRank(bad));
    }
    let mut present: Vec<f64> = row.iter().flatten().copied().collect();
    present.sort_by(f64::total_cmp);
    Ok(row
        .iter()
        .map(|entry| {
            entry.map(|r| {
                let ahead = present.partition_point(|&x| x < r);
                (ahead + 1) as f64
            })
        })
        .collect())
}

/// Drops the named candidates and re-ranks every ballot over the rest.
pub fn remove_candidates<S: AsRef<str>>(ballots: &BallotMatrix, names: &[S]) -> Result<BallotMatrix> {
    if ballots.kind() != BallotKind::Ranked {
        return Err(Error::Unsupported(
            "candidates can only be removed from ranked ballots".into(),
        ));
    }
    let mut drop = vec![false; ballots.num_candidates()];
    let mut unknown = Vec::new();
    for name in names {
        match ballots.candidate_index(name.as_ref()) {
            Some(j) => drop[j] = true,
            None => unknown.push(name.as_ref().to_owned()),
        }
    }
    if !unknown.is_empty() {
        return Err(Error::UnknownCandidates(unknown));
    }
    if drop.iter().all(|&d| d) {
        return Err(Error::NoCandidatesRemain);
    }
    let keep: Vec<usize> = (0..drop.len()).filter(|&j| !drop[j]).collect();
    let candidates = keep.iter().map(|&j| ballots.candidates[j].clone()).collect();
    let rows = ballots
        .rows()
        .iter()
        .map(|row| {
            let kept: Vec<Option<f64>> = keep.iter().map(|&j| row[j]).collect();
            correct_ranking(&kept)
        })
        .collect::<Result<Vec<_>>>()?;
    BallotMatrix::new(candidates, rows, BallotKind::Ranked)
}

/// Turns ranked ballots into 0/1 marks: 1 where the rank is in `ranks`.
pub fn threshold_indicator(ballots: &BallotMatrix, ranks: &[u32]) -> Result<BallotMatrix> {
    if ranks.is_empty() {
        return Err(Error::Config("empty rank set".into()));
    }
    if ballots.kind() != BallotKind::Ranked {
        return Err(Error::Unsupported("thresholding needs ranked ballots".into()));
    }
    let rows = ballots
        .rows()
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| {
                    let hit = e.is_some_and(|x| ranks.iter().any(|&r| f64::from(r) == x));
                    Some(if hit { 1.0 } else { 0.0 })
                })
                .collect()
        })
        .collect();
    BallotMatrix::new(ballots.candidates.clone(), rows, BallotKind::Indicator)
}

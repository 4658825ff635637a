//! Markdown and JSON reports.

pub mod format;
mod json;
mod markdown;
pub mod table;

pub use json::{render_json, to_value};
pub use markdown::render_markdown;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReportOptions {
    /// Decimal places for vote totals.
    pub digits: usize,
    pub complete_ranking: bool,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            digits: 3,
            complete_ranking: false,
        }
    }
}

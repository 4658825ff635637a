//! Pipe tables in the layout used by R's knitr::kable.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Align {
    Left,
    Right,
    Center,
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    columns: Vec<(String, Align)>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn column(mut self, header: impl Into<String>, align: Align) -> Self {
        self.columns.push((header.into(), align));
        self
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn render(&self) -> String {
        let widths: Vec<usize> = self
            .columns
            .iter()
            .enumerate()
            .map(|(j, (header, align))| {
                let content = self
                    .rows
                    .iter()
                    .map(|r| width(&r[j]))
                    .chain([width(header)])
                    .max()
                    .unwrap_or(0);
                content + if *align == Align::Center { 2 } else { 1 }
            })
            .collect();
        let mut out = String::new();
        let headers: Vec<&str> = self.columns.iter().map(|(h, _)| h.as_str()).collect();
        self.line(&mut out, &headers, &widths);
        out.push('|');
        for ((_, align), &w) in self.columns.iter().zip(&widths) {
            let rule = match align {
                Align::Left => format!(":{}", "-".repeat(w - 1)),
                Align::Right => format!("{}:", "-".repeat(w - 1)),
                Align::Center => format!(":{}:", "-".repeat(w - 2)),
            };
            out.push_str(&rule);
            out.push('|');
        }
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<&str> = row.iter().map(String::as_str).collect();
            self.line(&mut out, &cells, &widths);
        }
        out
    }

    fn line(&self, out: &mut String, cells: &[&str], widths: &[usize]) {
        out.push('|');
        for ((cell, (_, align)), &w) in cells.iter().zip(&self.columns).zip(widths) {
            let pad = w - width(cell);
            let left = match align {
                Align::Left => 0,
                Align::Right => pad,
                Align::Center => pad / 2,
            };
            out.push_str(&" ".repeat(left));
            out.push_str(cell);
            out.push_str(&" ".repeat(pad - left));
            out.push('|');
        }
        out.push('\n');
    }
}

fn width(s: &str) -> usize {
    s.chars().count()
}

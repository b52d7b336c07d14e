//! Rendering of result tables.

use std::str::FromStr;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    /// Summary lines followed by a markdown table.
    #[default]
    Text,
    Csv,
    Json,
    MarkdownTable,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(Format::Text),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "markdown-table" | "markdown" | "md" => Ok(Format::MarkdownTable),
            other => Err(format!("unknown format {other:?} (expected text, csv, json or markdown-table)")),
        }
    }
}

impl Format {
    /// Guess from an output file extension.
    pub fn from_path(path: &str) -> Option<Format> {
        let ext = path.rsplit_once('.')?.1;
        match ext {
            "csv" => Some(Format::Csv),
            "json" => Some(Format::Json),
            "md" => Some(Format::MarkdownTable),
            _ => None,
        }
    }
}

/// Results of one command.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    /// False when a checked invariant was violated.
    pub ok: bool,
    pub summary: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Structured payload, emitted in JSON only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
    /// Whether the text rendering includes the table.
    #[serde(skip)]
    pub text_table: bool,
}

impl Report {
    pub fn new(command: &str, columns: &[&str]) -> Self {
        Report {
            command: command.to_string(),
            ok: true,
            summary: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            detail: None,
            text_table: true,
        }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.summary.push(line.into());
    }

    /// Records a failed check.
    pub fn fail(&mut self, line: impl Into<String>) {
        self.ok = false;
        self.summary.push(format!("violation: {}", line.into()));
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => {
                let mut out = String::new();
                for s in &self.summary {
                    out.push_str(s);
                    out.push('\n');
                }
                if self.text_table && !self.rows.is_empty() {
                    if !out.is_empty() {
                        out.push('\n');
                    }
                    out.push_str(&self.markdown());
                }
                out
            }
            Format::Csv => self.csv(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
                s.push('\n');
                s
            }
            Format::MarkdownTable => self.markdown(),
        }
    }

    fn csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
    }

    fn markdown(&self) -> String {
        let widths: Vec<usize> = (0..self.columns.len())
            .map(|c| self.rows.iter().map(|r| r[c].chars().count()).chain([self.columns[c].chars().count(), 3]).max().unwrap())
            .collect();
        let line = |cells: &[String]| {
            let parts: Vec<String> =
                cells.iter().zip(&widths).map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count()))).collect();
            format!("| {} |\n", parts.join(" | "))
        };
        let mut out = line(&self.columns);
        let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
        out.push_str(&format!("| {} |\n", rule.join(" | ")));
        for r in &self.rows {
            out.push_str(&line(r));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_csv_is_header_only() {
        let r = Report::new("sn-stability", &["family", "n", "k", "dim", "map_iso"]);
        assert_eq!(r.render(Format::Csv), "family,n,k,dim,map_iso\n");
    }

    #[test]
    fn markdown_alignment() {
        let mut r = Report::new("x", &["n", "dim"]);
        r.row(vec!["10".into(), "1".into()]);
        assert_eq!(r.render(Format::MarkdownTable), "| n   | dim |\n| --- | --- |\n| 10  | 1   |\n");
    }

    #[test]
    fn formats_parse() {
        assert_eq!("markdown-table".parse::<Format>().unwrap(), Format::MarkdownTable);
        assert!("xml".parse::<Format>().is_err());
        assert_eq!(Format::from_path("out/cert.json"), Some(Format::Json));
        assert_eq!(Format::from_path("out"), None);
    }
}

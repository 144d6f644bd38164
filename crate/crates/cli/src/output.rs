use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use chrono::{DateTime, SecondsFormat, Utc};
use clap::ValueEnum;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Csv,
    Json,
}

/// A row type that can be written as CSV, JSON or an aligned text table.
pub trait Record: Serialize {
    fn csv_header() -> Vec<&'static str>;
    fn csv_row(&self) -> Vec<String>;

    fn human_header() -> Vec<&'static str> {
        Self::csv_header()
    }

    fn human_row(&self) -> Vec<String> {
        self.csv_row()
    }
}

/// One result of `solve`, `critical`, or the like.
#[derive(Clone, Debug, PartialEq, Serialize, serde::Deserialize)]
pub struct RunRecord {
    pub command: String,
    #[serde(rename = "N")]
    pub heating: f64,
    pub a2: f64,
    pub n: usize,
    #[serde(rename = "Ra")]
    pub ra: f64,
    pub a2_star: Option<f64>,
    #[serde(rename = "oracle_Ra")]
    pub oracle_ra: Option<f64>,
    pub oracle_a2_star: Option<f64>,
}

impl Record for RunRecord {
    fn csv_header() -> Vec<&'static str> {
        vec![
            "command",
            "N",
            "a2",
            "n",
            "Ra",
            "a2_star",
            "oracle_Ra",
            "oracle_a2_star",
        ]
    }

    fn csv_row(&self) -> Vec<String> {
        vec![
            self.command.clone(),
            fmt_param(self.heating),
            // a2 is an input unless it is the located minimiser
            if self.a2_star.is_some() {
                fmt_num(self.a2)
            } else {
                fmt_param(self.a2)
            },
            self.n.to_string(),
            fmt_num(self.ra),
            fmt_opt(self.a2_star),
            fmt_opt(self.oracle_ra),
            fmt_opt(self.oracle_a2_star),
        ]
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Meta {
    pub command: &'static str,
    pub version: &'static str,
    pub started: String,
    pub finished: String,
}

#[derive(Serialize)]
struct Envelope<'a, R> {
    meta: &'a Meta,
    rows: &'a [R],
}

/// Rows of one command plus free-form notes shown only in human output.
pub struct Report<R> {
    pub rows: Vec<R>,
    pub notes: Vec<String>,
}

impl<R> Report<R> {
    pub fn new(rows: Vec<R>) -> Self {
        Report {
            rows,
            notes: Vec::new(),
        }
    }
}

/// Current time, or the instant in `SOURCE_DATE_EPOCH` when it is set.
pub fn timestamp() -> String {
    let pinned = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok())
        .and_then(|secs| DateTime::<Utc>::from_timestamp(secs, 0));
    pinned
        .unwrap_or_else(Utc::now)
        .to_rfc3339_opts(SecondsFormat::Secs, true)
}

/// Ten significant digits, fixed notation for moderate magnitudes.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..10).contains(&exp) {
        format!("{:.*}", (9 - exp).max(0) as usize, x)
    } else {
        format!("{:.9e}", x)
    }
}

/// User-supplied parameters, echoed in shortest round-trip form.
pub fn fmt_param(x: f64) -> String {
    x.to_string()
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

pub fn open_sink(out: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn write_report<R: Record>(
    sink: &mut dyn Write,
    format: Format,
    meta: &Meta,
    report: &Report<R>,
) -> io::Result<()> {
    match format {
        Format::Human => write_human(sink, report),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *sink);
            w.write_record(R::csv_header())?;
            for row in &report.rows {
                w.write_record(row.csv_row())?;
            }
            w.flush()
        }
        Format::Json => {
            let envelope = Envelope {
                meta,
                rows: &report.rows,
            };
            serde_json::to_writer_pretty(&mut *sink, &envelope)?;
            writeln!(sink)
        }
    }?;
    sink.flush()
}

fn write_human<R: Record>(sink: &mut dyn Write, report: &Report<R>) -> io::Result<()> {
    let header = R::human_header();
    let cells: Vec<Vec<String>> = report.rows.iter().map(R::human_row).collect();
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    // numbers right-aligned, text left-aligned
    let numeric: Vec<bool> = (0..header.len())
        .map(|j| {
            cells
                .iter()
                .all(|row| row[j].is_empty() || row[j] == "-" || row[j].parse::<f64>().is_ok())
        })
        .collect();
    let line = |items: Vec<&str>| {
        items
            .iter()
            .zip(widths.iter().zip(&numeric))
            .map(|(c, (w, num))| {
                if *num {
                    format!("{c:>w$}")
                } else {
                    format!("{c:<w$}")
                }
            })
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    writeln!(sink, "{}", line(header.clone()))?;
    for row in &cells {
        writeln!(sink, "{}", line(row.iter().map(String::as_str).collect()))?;
    }
    for note in &report.notes {
        writeln!(sink, "{note}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ten_significant_digits() {
        assert_eq!(fmt_num(1749.9757312345), "1749.975731");
        assert_eq!(fmt_num(-0.023987654321), "-0.02398765432");
        assert_eq!(fmt_num(12.0), "12.00000000");
        assert_eq!(fmt_num(3.0e-7), "3.000000000e-7");
        assert_eq!(fmt_num(0.0), "0");
    }

    #[test]
    fn run_record_round_trip() {
        let rec = RunRecord {
            command: "critical".into(),
            heating: 4.0,
            a2: 9.9,
            n: 12,
            ra: 1658.123456789,
            a2_star: Some(9.9),
            oracle_ra: None,
            oracle_a2_star: None,
        };
        let text = serde_json::to_string(&rec).unwrap();
        let back: RunRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(back, rec);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
        assert!(text.contains("\"oracle_Ra\":null"));
    }
}

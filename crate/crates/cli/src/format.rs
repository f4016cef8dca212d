//! Deterministic rendering of reports as Markdown, CSV or JSON.

use std::fmt::Write as _;

use crate::report::{Expected, Relation, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    #[value(name = "md")]
    Markdown,
    Csv,
    Json,
}

/// Round to 12 significant digits, then print the shortest string that reads
/// back to the rounded value. Very small or large magnitudes use exponent form.
pub fn format_number(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    let magnitude = rounded.abs();
    if !(1e-4..1e12).contains(&magnitude) {
        format!("{rounded:e}")
    } else {
        format!("{rounded}")
    }
}

pub fn format_expected(expected: &Option<Expected>) -> String {
    let Some(e) = expected else {
        return String::new();
    };
    let n = format_number;
    let value = match e.relation {
        Relation::Equal { value } => n(value),
        Relation::RelativeEqual { value } => format!("{} (rel)", n(value)),
        Relation::AtMost { value } => format!("<= {}", n(value)),
        Relation::AtLeast { value } => format!(">= {}", n(value)),
        Relation::Within { lo, hi } => format!("[{}, {}]", n(lo), n(hi)),
    };
    format!("{value} [{}]", e.provenance.as_str())
}

fn markdown(r: &Report) -> String {
    let mut out = String::new();
    let s = &r.scenario;
    writeln!(out, "## {} ({})", s.name, s.kind).unwrap();
    writeln!(out).unwrap();
    writeln!(out, "seed: {}", s.seed).unwrap();
    writeln!(out).unwrap();
    writeln!(out, "| label | expected | computed | residual | tolerance | pass |").unwrap();
    writeln!(out, "|---|---|---|---|---|---|").unwrap();
    for row in &r.rows {
        writeln!(
            out,
            "| {} | {} | {} | {} | {} | {} |",
            row.label.replace('|', "\\|"),
            format_expected(&row.expected),
            format_number(row.computed),
            format_number(row.residual),
            format_number(row.tolerance),
            if row.pass { "pass" } else { "FAIL" }
        )
        .unwrap();
    }
    writeln!(out).unwrap();
    writeln!(out, "passed: {}, failed: {}", r.summary.passed, r.summary.failed).unwrap();
    out
}

fn csv(r: &Report) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["label", "expected", "computed", "residual", "pass"])
        .unwrap();
    for row in &r.rows {
        w.write_record([
            row.label.clone(),
            format_expected(&row.expected),
            format_number(row.computed),
            format_number(row.residual),
            row.pass.to_string(),
        ])
        .unwrap();
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("UTF-8 input")
}

pub fn emit_report(r: &Report, format: Format) -> String {
    match format {
        Format::Markdown => markdown(r),
        Format::Csv => csv(r),
        Format::Json => serde_json::to_string_pretty(r).expect("reports serialize") + "\n",
    }
}

/// Render several reports, already ordered. JSON batches become one array.
pub fn emit_batch(reports: &[Report], format: Format) -> String {
    match (format, reports) {
        (_, [single]) => emit_report(single, format),
        (Format::Json, _) => serde_json::to_string_pretty(reports).expect("reports serialize") + "\n",
        _ => reports
            .iter()
            .map(|r| emit_report(r, format))
            .collect::<Vec<_>>()
            .join("\n"),
    }
}

//! Text and single-line JSON rendering of [`RunReport`]s.

use std::fmt::Write as _;

use serde::Serialize;

use crate::analysis::RunReport;

const HEADERS: [&str; 7] = [
    "CPU",
    "Timer Precision",
    "Samples",
    "Unique",
    "MFV",
    "Entropy (bits)",
    "Avg Time (seconds)",
];

/// Renders reports as an aligned table: MFV to 5 decimals, entropy to 2 with
/// thousands separators, then a floor verdict per row and any warnings.
pub fn render_table(reports: &[RunReport]) -> String {
    let rows: Vec<[String; 8]> = reports
        .iter()
        .map(|r| {
            [
                r.cpu_label.clone(),
                r.timer.precision_label().to_owned(),
                r.sample_count.to_string(),
                r.unique_values.to_string(),
                format!("{:.5}%", r.mfv_percent),
                group_thousands(r.total_bits, 2),
                format!("{:.2}", r.avg_run_seconds),
                format!(
                    "{} ({} bits)",
                    if r.meets_floor {
                        "meets floor"
                    } else {
                        "BELOW FLOOR"
                    },
                    group_thousands(r.floor_bits, 0)
                ),
            ]
        })
        .collect();

    let mut widths: Vec<usize> = HEADERS.iter().map(|h| h.len()).collect();
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row.iter()) {
            *w = (*w).max(cell.chars().count());
        }
    }

    let mut out = String::new();
    let header: Vec<String> = HEADERS
        .iter()
        .zip(&widths)
        .map(|(h, w)| format!("{h:<w$}"))
        .collect();
    let _ = writeln!(out, "{}", header.join("  ").trim_end());
    for (row, report) in rows.iter().zip(reports) {
        let mut cells: Vec<String> = Vec::with_capacity(row.len());
        for (i, cell) in row.iter().enumerate() {
            match widths.get(i) {
                // Label and timer left-aligned, numbers right-aligned.
                Some(&w) if i < 2 => cells.push(format!("{cell:<w$}")),
                Some(&w) => cells.push(format!("{cell:>w$}")),
                None => cells.push(cell.clone()),
            }
        }
        let _ = writeln!(out, "{}", cells.join("  ").trim_end());
        for warning in &report.warnings {
            let _ = writeln!(out, "  warning: {warning}");
        }
    }
    out
}

#[derive(Serialize)]
struct JsonRecord<'a> {
    label: &'a str,
    timer: &'static str,
    mfv_percent: f64,
    entropy_bits: f64,
    avg_seconds: f64,
    unique_values: u64,
    meets_floor: bool,
}

/// One JSON object on a single line, without a trailing newline.
pub fn render_json_line(report: &RunReport) -> String {
    let record = JsonRecord {
        label: &report.cpu_label,
        timer: report.timer.short_name(),
        mfv_percent: report.mfv_percent,
        entropy_bits: report.total_bits,
        avg_seconds: report.avg_run_seconds,
        unique_values: report.unique_values,
        meets_floor: report.meets_floor,
    };
    serde_json::to_string(&record).expect("report record serializes")
}

/// `1606.3449` with 2 decimals becomes `1,606.34`.
pub fn group_thousands(value: f64, decimals: usize) -> String {
    let formatted = format!("{:.*}", decimals, value.abs());
    let (int_part, frac_part) = match formatted.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (formatted.as_str(), None),
    };
    let mut grouped = String::with_capacity(formatted.len() + int_part.len() / 3);
    for (i, ch) in int_part.chars().enumerate() {
        if i > 0 && (int_part.len() - i) % 3 == 0 {
            grouped.push(',');
        }
        grouped.push(ch);
    }
    if let Some(frac) = frac_part {
        grouped.push('.');
        grouped.push_str(frac);
    }
    if value.is_sign_negative() && value != 0.0 {
        grouped.insert(0, '-');
    }
    grouped
}

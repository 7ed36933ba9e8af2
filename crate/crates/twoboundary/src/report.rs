//! Deterministic rendering of experiment results.
//!
//! Three formats: `csv` for machine consumption (newline `\n`, `.` decimal
//! separator, no locale dependence), `table` for reading, and `ascii` for a
//! quick terminal heatmap of a density profile. Grid frequencies and series
//! values are printed with 12 significant digits; small quantity/value
//! reports use the shortest round-trip representation.

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Table,
    Ascii,
}

impl Format {
    pub fn name(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Table => "table",
            Format::Ascii => "ascii",
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum RenderError {
    #[error("format `{format}` cannot render {data}")]
    FormatMismatch {
        format: &'static str,
        data: &'static str,
    },
}

/// Rendered text plus any diagnostics that belong on the error stream.
#[derive(Debug, Clone, PartialEq)]
pub struct Rendered {
    pub text: String,
    pub warnings: Vec<String>,
}

/// A density grid over `(time step, position)`, either sampled (with counts)
/// or exact (frequencies only).
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileReport {
    pub width: usize,
    pub horizon: usize,
    /// Flat `(horizon + 1) * width` counts for sampled profiles.
    pub counts: Option<Vec<u64>>,
    /// Flat `(horizon + 1) * width` per-row frequencies.
    pub frequencies: Vec<f64>,
    pub accepted: Option<u64>,
    pub tries: Option<u64>,
    pub total_weight: Option<f64>,
}

impl ProfileReport {
    fn is_empty(&self) -> bool {
        match (self.accepted, self.total_weight) {
            (Some(accepted), _) => accepted == 0,
            (None, Some(weight)) => weight == 0.0,
            (None, None) => self.frequencies.iter().all(|&f| f == 0.0),
        }
    }

    fn frequency(&self, t: usize, x: usize) -> f64 {
        self.frequencies[t * self.width + x]
    }
}

/// A generic column-oriented report with pre-formatted cells.
#[derive(Debug, Clone, PartialEq)]
pub struct RowsReport {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Report {
    Profile(ProfileReport),
    Rows(RowsReport),
}

/// Formats a value with 12 significant digits.
pub fn significant(value: f64) -> String {
    format!("{value:.11e}")
}

/// Shortest representation that round-trips, e.g. `2.0`.
pub fn roundtrip(value: f64) -> String {
    format!("{value:?}")
}

/// Renders a report in the requested format.
pub fn render(report: &Report, format: Format) -> Result<Rendered, RenderError> {
    match (report, format) {
        (Report::Profile(profile), Format::Csv) => Ok(profile_csv(profile)),
        (Report::Profile(profile), Format::Table) => Ok(profile_table(profile)),
        (Report::Profile(profile), Format::Ascii) => Ok(profile_ascii(profile)),
        (Report::Rows(rows), Format::Csv) => Ok(rows_csv(rows)),
        (Report::Rows(rows), Format::Table) => Ok(rows_table(rows)),
        (Report::Rows(_), Format::Ascii) => Err(RenderError::FormatMismatch {
            format: "ascii",
            data: "scalar results (ascii is for density profiles)",
        }),
    }
}

fn empty_profile_warning(profile: &ProfileReport) -> String {
    if profile.counts.is_some() {
        "no paths were accepted; emitting header only".to_string()
    } else {
        "boundary pair is infeasible (total weight 0); emitting header only".to_string()
    }
}

fn profile_csv(profile: &ProfileReport) -> Rendered {
    let mut text = String::new();
    let mut warnings = Vec::new();
    let with_counts = profile.counts.is_some();
    text.push_str(if with_counts {
        "t,x,count,frequency\n"
    } else {
        "t,x,frequency\n"
    });
    if profile.is_empty() {
        warnings.push(empty_profile_warning(profile));
        return Rendered { text, warnings };
    }
    for t in 0..=profile.horizon {
        for x in 0..profile.width {
            match &profile.counts {
                Some(counts) => {
                    let count = counts[t * profile.width + x];
                    text.push_str(&format!(
                        "{t},{x},{count},{}\n",
                        significant(profile.frequency(t, x))
                    ));
                }
                None => {
                    text.push_str(&format!(
                        "{t},{x},{}\n",
                        significant(profile.frequency(t, x))
                    ));
                }
            }
        }
    }
    Rendered { text, warnings }
}

fn profile_table(profile: &ProfileReport) -> Rendered {
    let with_counts = profile.counts.is_some();
    let mut columns: Vec<String> = vec!["t".into(), "x".into()];
    if with_counts {
        columns.push("count".into());
    }
    columns.push("frequency".into());
    let mut rows = Vec::new();
    if !profile.is_empty() {
        for t in 0..=profile.horizon {
            for x in 0..profile.width {
                let mut row = vec![t.to_string(), x.to_string()];
                if let Some(counts) = &profile.counts {
                    row.push(counts[t * profile.width + x].to_string());
                }
                row.push(significant(profile.frequency(t, x)));
                rows.push(row);
            }
        }
    }
    let mut rendered = rows_table(&RowsReport { columns, rows });
    if profile.is_empty() {
        rendered.warnings.push(empty_profile_warning(profile));
    }
    let mut footer = String::new();
    if let (Some(accepted), Some(tries)) = (profile.accepted, profile.tries) {
        footer.push_str(&format!(
            "# accepted {accepted} of {tries} tries (rate {})\n",
            roundtrip(accepted as f64 / tries as f64)
        ));
    }
    if let Some(weight) = profile.total_weight {
        footer.push_str(&format!("# total weight {}\n", roundtrip(weight)));
    }
    rendered.text.push_str(&footer);
    rendered
}

const DENSITY_RAMP: [char; 10] = [' ', '.', ':', '-', '=', '+', '*', '#', '%', '@'];

fn profile_ascii(profile: &ProfileReport) -> Rendered {
    let mut warnings = Vec::new();
    if profile.is_empty() {
        warnings.push(empty_profile_warning(profile));
    }
    let peak = profile.frequencies.iter().copied().fold(0.0_f64, f64::max);
    let t_label_width = profile.horizon.to_string().len().max(1);
    let mut text = String::new();
    text.push_str(&format!(
        "{:>width$} | x = 0..{}\n",
        "t",
        profile.width - 1,
        width = t_label_width
    ));
    for t in 0..=profile.horizon {
        let mut line = format!("{t:>t_label_width$} |");
        for x in 0..profile.width {
            let f = profile.frequency(t, x);
            let glyph = if f <= 0.0 || peak <= 0.0 {
                DENSITY_RAMP[0]
            } else {
                // Nine visible levels above blank.
                let level = 1 + ((f / peak) * 8.0).round() as usize;
                DENSITY_RAMP[level.min(9)]
            };
            line.push(glyph);
        }
        line.push('\n');
        text.push_str(&line);
    }
    text.push_str(&format!(
        "{:>width$} | density ramp: `{}`\n",
        "",
        DENSITY_RAMP.iter().collect::<String>(),
        width = t_label_width
    ));
    Rendered { text, warnings }
}

fn rows_csv(rows: &RowsReport) -> Rendered {
    let mut text = rows.columns.join(",");
    text.push('\n');
    for row in &rows.rows {
        text.push_str(&row.join(","));
        text.push('\n');
    }
    Rendered {
        text,
        warnings: Vec::new(),
    }
}

fn rows_table(rows: &RowsReport) -> Rendered {
    let mut widths: Vec<usize> = rows.columns.iter().map(String::len).collect();
    for row in &rows.rows {
        for (cell, width) in row.iter().zip(widths.iter_mut()) {
            *width = (*width).max(cell.len());
        }
    }
    let mut text = String::new();
    let format_row = |cells: &[String], widths: &[usize]| -> String {
        let mut line = String::new();
        for (i, (cell, width)) in cells.iter().zip(widths).enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            line.push_str(&format!("{cell:>width$}"));
        }
        line.push('\n');
        line
    };
    text.push_str(&format_row(&rows.columns, &widths));
    for row in &rows.rows {
        text.push_str(&format_row(row, &widths));
    }
    Rendered {
        text,
        warnings: Vec::new(),
    }
}

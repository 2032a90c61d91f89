//! CSV and JSON rendering. Floats are written in shortest round-trip form.

use serde::Serialize;

use crate::args::Format;
use crate::config::RunConfig;
use crate::CliError;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Summary {
    pub rows: usize,
    /// Rows whose check failed; absent for plain tables.
    pub failures: Option<usize>,
    pub all_pass: Option<bool>,
}

impl Summary {
    pub fn table(rows: usize) -> Self {
        Summary {
            rows,
            failures: None,
            all_pass: None,
        }
    }

    pub fn checks(rows: usize, failures: usize) -> Self {
        Summary {
            rows,
            failures: Some(failures),
            all_pass: Some(failures == 0),
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self.failures {
            Some(n) if n > 0 => 1,
            _ => 0,
        }
    }
}

#[derive(Serialize)]
struct Report<'a, R> {
    config: &'a RunConfig,
    rows: &'a [R],
    summary: Summary,
}

pub struct Rendered {
    pub text: String,
    pub summary: Summary,
}

/// CSV uses `csv_rows`; JSON wraps `json_rows` as {config, rows, summary}.
pub fn render<C: Serialize, J: Serialize>(
    cfg: &RunConfig,
    csv_rows: &[C],
    json_rows: &[J],
    summary: Summary,
) -> Result<Rendered, CliError> {
    let text = match cfg.format_kind {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in csv_rows {
                w.serialize(row).map_err(|e| CliError::io(format!("csv output: {e}")))?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::io(format!("csv output: {e}")))?;
            String::from_utf8(bytes).expect("csv writer emits UTF-8")
        }
        Format::Json => {
            let report = Report {
                config: cfg,
                rows: json_rows,
                summary,
            };
            let mut s = serde_json::to_string_pretty(&report)
                .map_err(|e| CliError::io(format!("json output: {e}")))?;
            s.push('\n');
            s
        }
    };
    Ok(Rendered { text, summary })
}

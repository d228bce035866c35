use clap::ValueEnum;
use serde_json::Value;

use crate::error::{CliError, EXIT_VERDICT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// A finished command: its report in each supported format and whether its
/// verdict was positive.
pub struct Outcome {
    pub json: Value,
    pub text: String,
    pub csv: Option<String>,
    pub verdict_ok: bool,
}

impl Outcome {
    pub fn new(json: Value, text: String) -> Self {
        Outcome {
            json,
            text,
            csv: None,
            verdict_ok: true,
        }
    }

    pub fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }

    pub fn with_verdict(mut self, ok: bool) -> Self {
        self.verdict_ok = ok;
        self
    }

    pub fn exit_code(&self) -> i32 {
        if self.verdict_ok {
            0
        } else {
            EXIT_VERDICT
        }
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        let mut out = match format {
            Format::Json => serde_json::to_string_pretty(&self.json).expect("plain data"),
            Format::Text => self.text.trim_end().to_string(),
            Format::Csv => self
                .csv
                .clone()
                .ok_or_else(|| CliError::Usage("this command has no CSV output; use --format json or text".into()))?
                .trim_end()
                .to_string(),
        };
        out.push('\n');
        Ok(out)
    }
}

/// Joins CSV fields, quoting any that need it.
pub fn csv_line<I, S>(fields: I) -> String
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    fields
        .into_iter()
        .map(|f| {
            let f = f.as_ref();
            if f.contains([',', '"', '\n']) {
                format!("\"{}\"", f.replace('"', "\"\""))
            } else {
                f.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join(",")
}

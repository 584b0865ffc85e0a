use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde_json::{json, Value};

use crate::args::Format;

/// Usage or input error; exit code 2.
#[derive(Debug)]
pub struct CliError {
    pub code: String,
    pub message: String,
}

impl CliError {
    pub fn new(code: &str, message: impl Into<String>) -> Self {
        CliError {
            code: code.to_string(),
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        CliError::new("USAGE", message)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.message.starts_with(&self.code) {
            f.write_str(&self.message)
        } else {
            write!(f, "{}: {}", self.code, self.message)
        }
    }
}

macro_rules! impl_from_coded {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError { code: e.code().to_string(), message: e.to_string() }
            }
        }
    )*};
}

impl_from_coded!(
    acmoduli::brackets::BracketError,
    acmoduli::transforms::TransformError,
    acmoduli::varieties::VarietyError,
    acmoduli::varieties::SampleError,
    acmoduli::varieties::BatteryError,
    acmoduli::polygons::PolygonError
);

impl From<acmoduli::polysets::PolySetError> for CliError {
    fn from(e: acmoduli::polysets::PolySetError) -> Self {
        CliError::new("WRONG_KIND", e.to_string())
    }
}

impl From<acmoduli::polyalg::PolyError> for CliError {
    fn from(e: acmoduli::polyalg::PolyError) -> Self {
        CliError::new("PARSE", e.to_string())
    }
}

impl From<acmoduli::continuant::ContinuantError> for CliError {
    fn from(e: acmoduli::continuant::ContinuantError) -> Self {
        CliError::new("INVALID_RANGE", e.to_string())
    }
}

/// Result of one subcommand. Failures turn the exit code to 1.
#[derive(Debug)]
pub struct Report {
    pub command: &'static str,
    pub params: Value,
    pub results: Vec<Value>,
    pub failures: Vec<Value>,
    pub text: String,
}

impl Report {
    pub fn new(command: &'static str, params: Value) -> Self {
        Report {
            command,
            params,
            results: Vec::new(),
            failures: Vec::new(),
            text: String::new(),
        }
    }

    pub fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    pub fn result(&mut self, v: Value) {
        self.results.push(v);
    }

    pub fn failure(&mut self, v: Value) {
        self.failures.push(v);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Json => {
                let doc = json!({
                    "command": self.command,
                    "params": self.params,
                    "results": self.results,
                    "failures": self.failures,
                });
                let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
                s.push('\n');
                s
            }
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.failures.is_empty() {
            0
        } else {
            1
        }
    }
}

pub fn emit(content: &str, path: Option<&Path>) -> io::Result<()> {
    match path {
        Some(p) => fs::write(p, content),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(content.as_bytes())?;
            out.flush()
        }
    }
}

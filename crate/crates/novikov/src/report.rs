//! JSON report envelope shared by all commands.
//!
//! Reports are reproducibility artifacts: they carry the tool version, the
//! full configuration echo (including every seed), and the results. Given
//! the same configuration and inputs the emitted bytes are identical across
//! runs, which is why wall-clock timings go to stderr and never into the
//! report body.

use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

/// Complete report: envelope + command-specific results.
#[derive(Clone, Debug, Serialize)]
pub struct Report<C: Serialize, T: Serialize> {
    /// Tool name, fixed.
    pub tool: &'static str,
    /// Crate version the report was produced with.
    pub version: &'static str,
    /// Subcommand that ran.
    pub command: &'static str,
    /// Echo of the effective configuration, seeds included.
    pub config: C,
    /// Command-specific results.
    pub results: T,
}

impl<C: Serialize, T: Serialize> Report<C, T> {
    pub fn new(command: &'static str, config: C, results: T) -> Self {
        Report {
            tool: "novikov",
            version: env!("CARGO_PKG_VERSION"),
            command,
            config,
            results,
        }
    }

    /// Renders the report as pretty JSON with a trailing newline. Field
    /// order is the struct order, so equal reports render to equal bytes.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report types serialize");
        s.push('\n');
        s
    }

    /// Writes the report to `output`, or to stdout when `output` is `None`.
    pub fn emit(&self, output: Option<&Path>) -> Result<()> {
        let body = self.to_json();
        match output {
            Some(path) => std::fs::write(path, body).map_err(|source| Error::Io {
                path: path.display().to_string(),
                source,
            }),
            None => {
                print!("{body}");
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize, Clone)]
    struct Cfg {
        seed: u64,
    }

    #[test]
    fn identical_inputs_render_identical_bytes() {
        let a = Report::new("compute", Cfg { seed: 7 }, vec![0usize, 1]);
        let b = Report::new("compute", Cfg { seed: 7 }, vec![0usize, 1]);
        assert_eq!(a.to_json(), b.to_json());
        assert!(a.to_json().ends_with('\n'));
    }

    #[test]
    fn envelope_carries_tool_and_version() {
        let r = Report::new("check", Cfg { seed: 0 }, 1u32);
        let json = r.to_json();
        assert!(json.contains("\"tool\": \"novikov\""));
        assert!(json.contains("\"version\""));
        assert!(json.contains("\"command\": \"check\""));
    }
}

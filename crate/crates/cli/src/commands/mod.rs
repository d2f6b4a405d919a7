//! One module per subcommand. Each turns a validated config into a table
//! plus warnings, logged events and tolerance failures.

pub mod compensation;
pub mod doublewell;
pub mod evolve;
pub mod oscillate;
pub mod spectrum;
pub mod thermo;

use std::path::PathBuf;

use crate::output::Table;

/// Command-line overrides shared by every subcommand.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Flags {
    pub tolerance: Option<f64>,
    pub seed_positions: Option<Vec<f64>>,
    pub input: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Outcome {
    pub table: Table,
    pub warnings: Vec<String>,
    pub events: Vec<String>,
    /// Numeric checks that exceeded their tolerance; any entry makes the
    /// process exit with code 1.
    pub failures: Vec<String>,
}

impl Outcome {
    pub fn new(table: Table) -> Self {
        Self {
            table,
            ..Self::default()
        }
    }

    pub fn warn(&mut self, msg: String) {
        self.table.meta("warning", msg.clone());
        self.warnings.push(msg);
    }

    pub fn event(&mut self, msg: String) {
        self.table.meta("event", msg.clone());
        self.events.push(msg);
    }

    pub fn fail(&mut self, msg: String) {
        self.table.meta("tolerance_failure", msg.clone());
        self.failures.push(msg);
    }
}

/// Column suffix for a `λ` value.
pub fn lambda_tag(lambda: f64) -> String {
    format!("lambda_{}", crate::output::format_float(lambda))
}

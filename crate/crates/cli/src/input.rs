use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use synthminer_core::eventlog::{parse_csv, parse_xes};
use synthminer_core::net::pnml::{parse_pnml, PnmlError};
use synthminer_core::net::{LabeledNet, WorkflowNet};
use synthminer_core::EventLog;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LogFormat {
    Xes,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct LogArgs {
    /// Event log (.xes or .csv).
    pub log: PathBuf,
    /// Overrides detection by file extension.
    #[arg(long, value_enum)]
    pub format: Option<LogFormat>,
    #[arg(long, default_value = "case")]
    pub case_column: String,
    #[arg(long, default_value = "activity")]
    pub activity_column: String,
    /// Column used to order events within a case; file order when absent.
    #[arg(long)]
    pub order_column: Option<String>,
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::Failed(format!("{}: {e}", path.display())))
}

impl LogArgs {
    fn format(&self) -> Result<LogFormat, CliError> {
        if let Some(f) = self.format {
            return Ok(f);
        }
        match self.log.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
            Some("xes") => Ok(LogFormat::Xes),
            Some("csv") => Ok(LogFormat::Csv),
            _ => Err(CliError::Failed(format!(
                "{}: cannot tell the log format from the extension, pass --format",
                self.log.display()
            ))),
        }
    }

    pub fn load(&self) -> Result<EventLog, CliError> {
        let bytes = read(&self.log)?;
        let parsed = match self.format()? {
            LogFormat::Xes => parse_xes(&bytes),
            LogFormat::Csv => {
                parse_csv(&bytes, &self.case_column, &self.activity_column, self.order_column.as_deref())
            }
        };
        parsed.map_err(|e| CliError::Failed(format!("{}: {e}", self.log.display())))
    }
}

pub fn load_net(path: &Path) -> Result<LabeledNet, CliError> {
    parse_pnml(&read(path)?).map_err(|e| CliError::Failed(format!("{}: {e}", path.display())))
}

pub fn load_workflow_net(path: &Path) -> Result<WorkflowNet, CliError> {
    let net = load_net(path)?;
    WorkflowNet::from_net(net)
        .map_err(|e| CliError::Failed(format!("{}: {}", path.display(), PnmlError::Structure(e))))
}

pub fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Failed(format!("{}: {e}", path.display())))
}

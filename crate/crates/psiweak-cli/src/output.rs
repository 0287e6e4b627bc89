//! Atomic run-output writing: every file lands via a temp-file rename, so
//! a failed run never leaves a partially written output behind.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::CliError;

pub struct OutputDir {
    dir: PathBuf,
}

#[derive(Serialize)]
struct Metadata<'a> {
    command: &'a str,
    /// Verbatim echo of the parsed configuration; re-parsing it yields an
    /// equal config.
    config: &'a ExperimentConfig,
    threads: usize,
    quantile_convention: &'static str,
    estimator_law_space: &'static str,
    package_version: &'static str,
}

impl OutputDir {
    pub fn create(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir)
            .map_err(|e| CliError::Config(format!("cannot create output dir: {e}")))?;
        Ok(OutputDir {
            dir: dir.to_path_buf(),
        })
    }

    fn write_atomic(&self, name: &str, content: &str) -> Result<(), CliError> {
        let tmp = self.dir.join(format!(".{name}.tmp"));
        let target = self.dir.join(name);
        fs::write(&tmp, content)
            .map_err(|e| CliError::Config(format!("cannot write {name}: {e}")))?;
        fs::rename(&tmp, &target)
            .map_err(|e| CliError::Config(format!("cannot finalize {name}: {e}")))?;
        Ok(())
    }

    /// Write `metadata.json`, `records.csv` and `summary.csv` in one shot,
    /// after the run has fully succeeded.
    pub fn write_run(
        &self,
        config: &ExperimentConfig,
        threads: usize,
        records_csv: &str,
        summary_csv: &str,
    ) -> Result<(), CliError> {
        let meta = Metadata {
            command: config.command.as_str(),
            config,
            threads,
            quantile_convention: "lower",
            estimator_law_space: "real line, bounded metric",
            package_version: env!("CARGO_PKG_VERSION"),
        };
        let meta = serde_json::to_string_pretty(&meta)
            .map_err(|e| CliError::Config(format!("metadata serialization: {e}")))?;
        self.write_atomic("metadata.json", &format!("{meta}\n"))?;
        self.write_atomic("records.csv", records_csv)?;
        self.write_atomic("summary.csv", summary_csv)?;
        Ok(())
    }
}

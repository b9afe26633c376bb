//! JSON record of a run, written next to its outputs.

use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::config::RunConfig;
use crate::CliError;

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    version: &'a str,
    config: &'a RunConfig,
    threads: usize,
    parallel: bool,
    inputs: &'a [String],
    outputs: &'a [String],
    /// The only field that differs between otherwise identical runs.
    created_unix: u64,
}

/// Collects output files of one command, then writes `manifest_<command>.json`.
pub struct Run<'a> {
    pub command: &'static str,
    pub config: &'a RunConfig,
    pub threads: usize,
    pub inputs: Vec<String>,
    outputs: Vec<String>,
}

impl<'a> Run<'a> {
    pub fn new(command: &'static str, config: &'a RunConfig, threads: usize) -> Result<Self, CliError> {
        std::fs::create_dir_all(&config.output_dir).map_err(|e| {
            CliError::Config(format!("output_dir {}: {e}", config.output_dir.display()))
        })?;
        Ok(Self {
            command,
            config,
            threads,
            inputs: Vec::new(),
            outputs: Vec::new(),
        })
    }

    pub fn manifest_name(&self) -> String {
        format!("manifest_{}.json", self.command)
    }

    /// Path of output `name`, recorded for the manifest.
    pub fn output(&mut self, name: &str) -> PathBuf {
        if !self.outputs.iter().any(|o| o == name) {
            self.outputs.push(name.to_string());
        }
        self.config.output_dir.join(name)
    }

    pub fn create(&mut self, name: &str) -> Result<std::io::BufWriter<std::fs::File>, CliError> {
        let p = self.output(name);
        let f = std::fs::File::create(&p)
            .map_err(|e| CliError::Config(format!("cannot create {}: {e}", p.display())))?;
        Ok(std::io::BufWriter::new(f))
    }

    pub fn finish(self) -> Result<PathBuf, CliError> {
        let created_unix = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let m = Manifest {
            command: self.command,
            version: env!("CARGO_PKG_VERSION"),
            config: self.config,
            threads: self.threads,
            parallel: cfg!(feature = "parallel"),
            inputs: &self.inputs,
            outputs: &self.outputs,
            created_unix,
        };
        let path = self.config.output_dir.join(self.manifest_name());
        let text = serde_json::to_string_pretty(&m).expect("manifest serializes");
        std::fs::write(&path, text + "\n")?;
        Ok(path)
    }
}

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

pub const MANIFEST_SCHEMA: &str = "avoidance.manifest/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    /// A counterexample or falsification was found.
    Fail,
}

#[derive(Debug, Serialize)]
struct OutputDigest {
    path: String,
    sha256: String,
}

#[derive(Debug, Serialize)]
struct RunManifest<'a> {
    schema: &'static str,
    command: &'a [String],
    version: &'static str,
    seeds: &'a [u64],
    jobs: Option<usize>,
    elapsed_ms: u128,
    outcome: Outcome,
    outputs: &'a [OutputDigest],
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: String,
    result: &'a T,
}

/// Per-invocation state: output routing, seeds used and digests of everything written.
pub struct Session {
    argv: Vec<String>,
    json: Option<Option<PathBuf>>,
    seed: Option<u64>,
    jobs: Option<usize>,
    seeds: Vec<u64>,
    outputs: Vec<OutputDigest>,
    stdout: Sha256,
    started: Instant,
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Session {
    pub fn new(argv: Vec<String>, json: Option<Option<PathBuf>>, seed: Option<u64>, jobs: Option<usize>) -> Session {
        Session {
            argv,
            json,
            seed,
            jobs,
            seeds: Vec::new(),
            outputs: Vec::new(),
            stdout: Sha256::new(),
            started: Instant::now(),
        }
    }

    /// The global `--seed`, which every randomized command requires.
    pub fn seed(&mut self, what: &str) -> Result<u64> {
        let seed = self
            .seed
            .with_context(|| format!("{what} is randomized and requires an explicit --seed"))?;
        if !self.seeds.contains(&seed) {
            self.seeds.push(seed);
        }
        Ok(seed)
    }

    pub fn print(&mut self, text: &str) -> Result<()> {
        let mut out = std::io::stdout().lock();
        out.write_all(text.as_bytes())?;
        out.flush()?;
        self.stdout.update(text.as_bytes());
        Ok(())
    }

    pub fn write_file(&mut self, path: &Path, bytes: &[u8]) -> Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        }
        std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))?;
        self.outputs.push(OutputDigest {
            path: path.display().to_string(),
            sha256: digest(bytes),
        });
        Ok(())
    }

    /// Emits the result: text on stdout, or the versioned JSON envelope on
    /// stdout or in the `--json` file.
    pub fn emit<T: Serialize>(&mut self, schema: &str, value: &T, text: impl FnOnce() -> String) -> Result<()> {
        let envelope = Envelope {
            schema: format!("avoidance.{schema}/1"),
            result: value,
        };
        match self.json.clone() {
            None => self.print(&text()),
            Some(None) => {
                let body = serde_json::to_string_pretty(&envelope)? + "\n";
                self.print(&body)
            }
            Some(Some(path)) => {
                let body = serde_json::to_string_pretty(&envelope)? + "\n";
                self.write_file(&path, body.as_bytes())?;
                self.print(&text())
            }
        }
    }

    pub fn finish(mut self, outcome: Outcome, manifest: Option<&Path>) -> Result<()> {
        let stdout = std::mem::take(&mut self.stdout);
        self.outputs.push(OutputDigest {
            path: "<stdout>".into(),
            sha256: hex::encode(stdout.finalize()),
        });
        let m = RunManifest {
            schema: MANIFEST_SCHEMA,
            command: &self.argv,
            version: env!("CARGO_PKG_VERSION"),
            seeds: &self.seeds,
            jobs: self.jobs,
            elapsed_ms: self.started.elapsed().as_millis(),
            outcome,
            outputs: &self.outputs,
        };
        let body = serde_json::to_string_pretty(&m)? + "\n";
        match manifest {
            Some(path) => std::fs::write(path, body).with_context(|| format!("writing {}", path.display())),
            None => {
                eprint!("{body}");
                Ok(())
            }
        }
    }
}

//! Output files and the run manifest.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::{RunConfig, Tolerances};

/// Collects the files written by one run.
pub struct Outputs {
    pub dir: PathBuf,
    pub files: Vec<PathBuf>,
}

impl Outputs {
    pub fn new(dir: &Path) -> std::io::Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(Outputs {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    fn path(&mut self, name: &str) -> PathBuf {
        let p = self.dir.join(name);
        self.files.push(p.clone());
        p
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> lifshitz_core::Result<()> {
        let p = self.path(name);
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        std::fs::write(p, text)?;
        Ok(())
    }

    pub fn text(&mut self, name: &str, body: &str) -> lifshitz_core::Result<()> {
        std::fs::write(self.path(name), body)?;
        Ok(())
    }

    /// Writes a fresh CSV (an existing file is replaced).
    pub fn csv(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> lifshitz_core::Result<()> {
        let p = self.path(name);
        if p.exists() {
            std::fs::remove_file(&p)?;
        }
        lifshitz_core::report::append_csv(&p, header, rows)
    }
}

#[derive(Debug, Serialize)]
pub struct OutputRecord {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub artifact: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    /// SHA-256 of `config`.
    pub config_hash: String,
    /// Resolved configuration in file form; `--config` on it reproduces the run.
    pub config: String,
    pub threads: usize,
    pub started_unix: u64,
    pub finished_unix: u64,
    pub tolerances: Tolerances,
    pub outputs: Vec<OutputRecord>,
}

pub fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Writes `config.toml` and `manifest.json` next to the outputs.
pub fn write_manifest(cfg: &RunConfig, outputs: &mut Outputs, started: u64) -> std::io::Result<PathBuf> {
    let config = cfg.to_toml();
    let cfg_path = outputs.dir.join("config.toml");
    std::fs::write(&cfg_path, &config)?;
    outputs.files.push(cfg_path);
    let mut records = Vec::new();
    for f in &outputs.files {
        records.push(OutputRecord {
            path: f.file_name().unwrap().to_string_lossy().into_owned(),
            sha256: sha256_hex(&std::fs::read(f)?),
        });
    }
    let manifest = RunManifest {
        artifact: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command: cfg.params.name(),
        config_hash: sha256_hex(config.as_bytes()),
        config,
        threads: cfg.threads,
        started_unix: started,
        finished_unix: unix_now(),
        tolerances: cfg.tolerances.clone(),
        outputs: records,
    };
    let path = outputs.dir.join("manifest.json");
    std::fs::write(&path, serde_json::to_string_pretty(&manifest).unwrap() + "\n")?;
    Ok(path)
}

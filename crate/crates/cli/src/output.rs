use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::CliError;

/// Floats in CSV output: 17 significant digits.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub struct OutputDir {
    path: PathBuf,
    files: Vec<String>,
}

impl OutputDir {
    pub fn create(path: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(path).map_err(|e| CliError::io(path, e))?;
        Ok(Self {
            path: path.to_path_buf(),
            files: Vec::new(),
        })
    }

    /// Writes `name` via a temporary sibling and a rename.
    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<(), CliError> {
        let target = self.path.join(name);
        let tmp = self.path.join(format!(".{name}.tmp"));
        let write = || -> std::io::Result<()> {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(bytes)?;
            f.sync_all()?;
            fs::rename(&tmp, &target)
        };
        write().map_err(|e| CliError::io(&target, e))?;
        self.files.push(name.to_string());
        Ok(())
    }

    pub fn write_csv(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
        let mut text = header.join(",");
        text.push('\n');
        for row in rows {
            text.push_str(&row.join(","));
            text.push('\n');
        }
        self.write(name, text.as_bytes())
    }

    pub fn write_json(&mut self, name: &str, value: &impl Serialize) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(value).expect("report serializes");
        text.push('\n');
        self.write(name, text.as_bytes())
    }

    pub fn files(&self) -> &[String] {
        &self.files
    }
}

/// Wall-clock bookkeeping for the manifest.
#[derive(Default)]
pub struct Stages {
    entries: Vec<(String, f64)>,
}

impl Stages {
    pub fn time<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.entries.push((name.to_string(), start.elapsed().as_secs_f64()));
        out
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.entries
                .iter()
                .map(|(name, secs)| json!({ "stage": name, "seconds": secs }))
                .collect(),
        )
    }
}

pub struct ManifestInfo<'a> {
    pub command: &'a str,
    pub config: Value,
    pub grid: Value,
    pub time: Value,
    pub seed: u64,
}

pub fn write_manifest(out: &mut OutputDir, info: ManifestInfo<'_>, stages: &Stages) -> Result<(), CliError> {
    let manifest = json!({
        "command_line": std::env::args().collect::<Vec<_>>(),
        "command": info.command,
        "config": info.config,
        "grid": info.grid,
        "time": info.time,
        "seeds": { "seed": info.seed },
        "version": env!("CARGO_PKG_VERSION"),
        "stages": stages.to_json(),
        "outputs": out.files(),
    });
    out.write_json("manifest.json", &manifest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(num(0.1), "1.0000000000000001e-1");
        assert_eq!(num(0.0), "0.0000000000000000e0");
        assert_eq!(num(-2.5), "-2.5000000000000000e0");
        let v = std::f64::consts::PI;
        assert_eq!(num(v).parse::<f64>().unwrap(), v);
    }
}

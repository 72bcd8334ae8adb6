//! Writing results, CSV tables and run manifests.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::failure::Failure;

/// Sidecar written next to every output file.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command_line: String,
    pub input_hash: String,
    pub seed: u64,
    pub tool_version: String,
    pub timestamp: String,
}

/// Everything needed to describe the run that produced an output.
pub struct RunContext {
    pub command_line: String,
    pub input_hash: String,
    pub seed: u64,
}

impl RunContext {
    pub fn new(input: &[u8], seed: u64) -> Self {
        let command_line = std::env::args()
            .map(|a| {
                if a.is_empty() || a.contains(char::is_whitespace) {
                    format!("{a:?}")
                } else {
                    a
                }
            })
            .collect::<Vec<_>>()
            .join(" ");
        Self {
            command_line,
            input_hash: sha256_hex(input),
            seed,
        }
    }

    fn manifest(&self) -> RunManifest {
        RunManifest {
            command_line: self.command_line.clone(),
            input_hash: self.input_hash.clone(),
            seed: self.seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true),
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

fn write_manifest(out: &Path, ctx: &RunContext) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(&ctx.manifest())?;
    fs::write(manifest_path(out), text + "\n")?;
    Ok(())
}

/// Prints `value` as JSON on stdout, or writes it to `out` with a manifest.
pub fn emit<V: Serialize>(value: &V, out: Option<&Path>, ctx: &RunContext) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match out {
        Some(path) => {
            fs::write(path, text)?;
            write_manifest(path, ctx)
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

/// Writes a CSV table with a manifest.
pub fn write_csv<R: AsRef<[u8]>>(
    path: &Path,
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<R>>,
    ctx: &RunContext,
) -> Result<(), Failure> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    write_manifest(path, ctx)
}

/// Shortest round-trip form; non-finite values as `NaN`, `inf`, `-inf`.
pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:?}")
    }
}

/// `1.0+0.0i`
pub fn fmt_complex(re: f64, im: f64) -> String {
    let sign = if im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", fmt_f64(re), sign, fmt_f64(im.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_format() {
        assert_eq!(fmt_complex(1.0, 0.0), "1.0+0.0i");
        assert_eq!(fmt_complex(-0.5, -2.0), "-0.5-2.0i");
        assert_eq!(fmt_complex(1e-20, 3.0), "1e-20+3.0i");
    }

    #[test]
    fn manifest_sidecar_name() {
        assert_eq!(
            manifest_path(Path::new("out/record.json")),
            PathBuf::from("out/record.json.manifest.json")
        );
    }
}

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Csv,
    Structured,
}

/// Something a command produced, renderable in every output format.
pub trait Render {
    fn command(&self) -> &'static str;
    fn human(&self) -> String;
    fn csv(&self) -> Result<String>;
    fn structured(&self) -> Value;
}

/// 17 significant digits, enough to round-trip any double.
pub fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

/// Shortest round-trip form, switching to exponent notation for very small
/// or very large magnitudes.
pub fn num(x: f64) -> String {
    let m = x.abs();
    if m != 0.0 && !(1e-4..1e16).contains(&m) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

pub fn opt_sci(x: Option<f64>) -> String {
    x.map(sci).unwrap_or_default()
}

pub fn csv_string<F>(header: &[&str], fill: F) -> Result<String>
where
    F: FnOnce(&mut csv::Writer<Vec<u8>>) -> Result<()>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    fill(&mut w)?;
    let bytes = w.into_inner().context("flushing csv")?;
    Ok(String::from_utf8(bytes)?)
}

pub fn render(item: &dyn Render, format: Format) -> Result<String> {
    Ok(match format {
        Format::Human => item.human(),
        Format::Csv => item.csv()?,
        Format::Structured => {
            let record = json!({
                "tool": env!("CARGO_PKG_NAME"),
                "version": env!("CARGO_PKG_VERSION"),
                "command": item.command(),
                "result": item.structured(),
            });
            let mut s = serde_json::to_string_pretty(&record)?;
            s.push('\n');
            s
        }
    })
}

/// Writes to stdout, or to `path` via a sibling temp file and a rename so
/// that readers never see a half-written report.
pub fn emit(text: &str, path: Option<&Path>) -> Result<()> {
    let Some(path) = path else {
        io::stdout().write_all(text.as_bytes())?;
        return Ok(());
    };
    let tmp = temp_sibling(path);
    let written = fs::File::create(&tmp)
        .and_then(|mut f| {
            f.write_all(text.as_bytes())?;
            f.sync_all()
        })
        .and_then(|_| fs::rename(&tmp, path));
    if let Err(e) = written {
        let _ = fs::remove_file(&tmp);
        return Err(e).with_context(|| format!("writing {}", path.display()));
    }
    Ok(())
}

fn temp_sibling(path: &Path) -> PathBuf {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "report".into());
    path.with_file_name(format!(".{name}.{}.tmp", std::process::id()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sci_round_trips() {
        for x in [0.1, 1.0 / 3.0, std::f64::consts::PI, 1e-300, -2.5e17] {
            assert_eq!(sci(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(sci(0.5), "5.0000000000000000e-1");
    }
}

use crate::Failure;
use anyhow::Context;
use std::io::Write;
use std::path::Path;

pub fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .context("writing output")?,
    }
    Ok(())
}

pub fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output serializes");
    s.push('\n');
    s
}

/// Float in the round-trip layout used by every CSV output.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

//! Output formatting shared by all commands.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::config::RunConfig;
use crate::error::CliError;

/// 17 significant digits, stable across runs.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// `#`-prefixed metadata block: command, resolved config, seed.
pub fn header_block(command: &str, cfg: &RunConfig, extra: &[(&str, String)]) -> String {
    let mut s = String::new();
    writeln!(s, "# aqt {command}").unwrap();
    writeln!(s, "# config: {}", cfg.to_json()).unwrap();
    match cfg.seed() {
        Some(seed) => writeln!(s, "# seed: {seed}").unwrap(),
        None => writeln!(s, "# seed: none").unwrap(),
    }
    for (k, v) in extra {
        writeln!(s, "# {k}: {v}").unwrap();
    }
    s
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}

/// Pretty JSON with a trailing newline.
pub fn to_json_text<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("summary serializes");
    s.push('\n');
    s
}

/// `header` followed by a CSV table with the given column names.
pub fn csv_document<I>(header: &str, columns: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::Writer::from_writer(header.as_bytes().to_vec());
    w.write_record(columns).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
}

/// Records of a CSV document with `#` comment lines; the first row is the header.
pub fn parse_csv(text: &str) -> Vec<Vec<String>> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes())
        .records()
        .filter_map(Result::ok)
        .map(|r| r.iter().map(str::to_string).collect())
        .collect()
}

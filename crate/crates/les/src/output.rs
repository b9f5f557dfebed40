//! CSV output. Every file starts with one comment line naming its schema
//! and the manifest that produced it, followed by a mandatory header row.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};

use crate::manifest::MANIFEST_FILE;

pub type CsvWriter = csv::Writer<File>;

pub fn create_csv(path: &Path, schema: &str, header: &[String]) -> Result<CsvWriter> {
    let mut file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    writeln!(file, "# schema={schema} manifest={MANIFEST_FILE}")?;
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(file);
    w.write_record(header)?;
    Ok(w)
}

/// Shortest representation that parses back to the same value.
pub fn num(v: f64) -> String {
    format!("{v}")
}

pub struct CsvTable {
    pub schema: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }
}

pub fn read_csv(path: &Path) -> Result<CsvTable> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut first = String::new();
    BufReader::new(&file).read_line(&mut first)?;
    let schema = first
        .strip_prefix('#')
        .and_then(|rest| rest.split_whitespace().find_map(|kv| kv.strip_prefix("schema=")))
        .map(str::to_string)
        .unwrap_or_default();
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_path(path)?;
    let header = r.headers()?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        rows.push(rec?.iter().map(str::to_string).collect());
    }
    if rows.is_empty() {
        bail!("{} has no data rows", path.display());
    }
    Ok(CsvTable { schema, header, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn write_then_read() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        let mut w = create_csv(&path, "demo/v1", &["a".into(), "b".into()]).unwrap();
        w.write_record([num(0.1), num(f64::INFINITY)]).unwrap();
        w.flush().unwrap();
        drop(w);
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, "# schema=demo/v1 manifest=manifest.json\na,b\n0.1,inf\n");
        let t = read_csv(&path).unwrap();
        assert_eq!(t.schema, "demo/v1");
        assert_eq!(t.header, ["a", "b"]);
        assert_eq!(t.rows[0][1].parse::<f64>().unwrap(), f64::INFINITY);
    }
}

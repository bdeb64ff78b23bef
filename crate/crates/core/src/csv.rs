//! Comma-separated output with a `# key: value` header block, and the
//! matching reader for numeric tables.

use std::io::Write;

use crate::error::{Error, Result};

/// Shortest round-trip rendering, so equal values always print equally.
pub fn num(x: f64) -> String {
    format!("{x:e}")
}

pub struct CsvWriter<W: Write> {
    out: Option<csv::Writer<W>>,
    columns: usize,
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Io(std::io::Error::new(std::io::ErrorKind::Other, format!("{other:?}"))),
    }
}

fn unwrap_writer<W: Write>(w: csv::Writer<W>) -> Result<W> {
    w.into_inner().map_err(|e| Error::Io(std::io::Error::new(std::io::ErrorKind::Other, e.to_string())))
}

impl<W: Write> CsvWriter<W> {
    pub fn new(mut out: W, meta: &[(String, String)], columns: &[&str]) -> Result<Self> {
        for (k, v) in meta {
            writeln!(out, "# {k}: {v}")?;
        }
        let mut w = Self { out: None, columns: 0 };
        w.start(out, columns)?;
        Ok(w)
    }

    fn start(&mut self, out: W, columns: &[&str]) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(columns).map_err(csv_err)?;
        self.out = Some(w);
        self.columns = columns.len();
        Ok(())
    }

    /// Cells holding commas or quotes are quoted.
    pub fn row<S: AsRef<[u8]>>(&mut self, cells: &[S]) -> Result<()> {
        if cells.len() != self.columns {
            return Err(Error::Shape { expected: self.columns, got: cells.len() });
        }
        self.out.as_mut().expect("writer present").write_record(cells).map_err(csv_err)
    }

    /// Starts a second table in the same stream, separated by a blank line.
    pub fn section(&mut self, title: &str, columns: &[&str]) -> Result<()> {
        let mut raw = unwrap_writer(self.out.take().expect("writer present"))?;
        writeln!(raw)?;
        writeln!(raw, "# section: {title}")?;
        self.start(raw, columns)
    }

    pub fn into_inner(mut self) -> Result<W> {
        unwrap_writer(self.out.take().expect("writer present"))
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

/// Reads the first table of a stream written by [`CsvWriter`]. Leading
/// `# key: value` lines are kept as metadata; the table ends at the first
/// blank line after its header. Every cell must be a number.
pub fn read_table(text: &str) -> Result<Table> {
    let mut table = Table::default();
    let lines: Vec<&str> = text.lines().collect();
    let mut first = None;
    for (i, raw) in lines.iter().enumerate() {
        let s = raw.trim();
        if s.is_empty() {
            continue;
        }
        match s.strip_prefix('#') {
            Some(rest) => {
                if let Some((k, v)) = rest.split_once(':') {
                    table.meta.push((k.trim().to_string(), v.trim().to_string()));
                }
            }
            None => {
                first = Some(i);
                break;
            }
        }
    }
    let first = first.ok_or_else(|| Error::Parse { line: lines.len().max(1), msg: "no column header found".into() })?;
    let last = lines[first..].iter().position(|l| l.trim().is_empty()).map_or(lines.len(), |p| first + p);
    let block = lines[first..last].join("\n");
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(block.as_bytes());
    let at = |e: &csv::Error| first + e.position().map_or(1, |p| p.line() as usize);
    let headers = rdr.headers().map_err(|e| Error::Parse { line: at(&e), msg: e.to_string() })?;
    table.columns = headers.iter().map(str::to_string).collect();
    if table.columns.iter().any(|c| c.is_empty()) {
        return Err(Error::Parse { line: first + 1, msg: "empty column name".into() });
    }
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Parse { line: at(&e), msg: e.to_string() })?;
        let line = first + rec.position().map_or(1, |p| p.line() as usize);
        let row = rec
            .iter()
            .map(|c| c.parse::<f64>().map_err(|_| Error::Parse { line, msg: format!("not a number: '{c}'") }))
            .collect::<Result<Vec<f64>>>()?;
        table.rows.push(row);
    }
    Ok(table)
}

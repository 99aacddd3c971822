//! CSV and JSON emission.
//!
//! CSV cells use scientific notation with 12 significant digits. Metadata goes
//! to a `<output>.meta.json` sidecar when writing to a file, or to a leading
//! `# {...}` comment line on standard output. JSON objects have sorted keys.

use std::io::Write;

use serde_json::{json, Value};

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => format_number(*v),
            Cell::Text(s) if s.contains([',', '"', '\n']) => {
                format!("\"{}\"", s.replace('"', "\"\""))
            }
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) if v.is_finite() => json!(v),
            Cell::Num(_) => Value::Null,
            Cell::Text(s) if s.is_empty() => Value::Null,
            Cell::Text(s) => json!(s),
        }
    }
}

pub fn format_number(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else {
        format!("{v:.11e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_csv(&self, out: &mut dyn Write) -> std::io::Result<()> {
        writeln!(out, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "columns": self.columns,
            "rows": self.rows.iter().map(|r| r.iter().map(Cell::json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

/// What a command produces.
pub enum Report {
    Table(Table),
    /// JSON-only payload, merged with the metadata object.
    Document(Value),
}

pub fn emit(
    report: &Report,
    metadata: &Value,
    format: crate::Format,
    path: Option<&std::path::Path>,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let mut buf = Vec::new();
    let json_body = |extra: Value| {
        let mut doc = json!({ "metadata": metadata });
        if let (Value::Object(d), Value::Object(e)) = (&mut doc, extra) {
            d.extend(e);
        }
        doc
    };
    match (report, format) {
        (Report::Table(t), crate::Format::Csv) => {
            if path.is_none() {
                writeln!(buf, "# {}", serde_json::to_string(metadata)?)?;
            }
            t.write_csv(&mut buf)?;
        }
        (Report::Table(t), crate::Format::Json) => {
            serde_json::to_writer_pretty(&mut buf, &json_body(t.to_json()))?;
            buf.push(b'\n');
        }
        (Report::Document(v), _) => {
            serde_json::to_writer_pretty(&mut buf, &json_body(v.clone()))?;
            buf.push(b'\n');
        }
    }
    match path {
        Some(p) => {
            std::fs::write(p, &buf).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            let is_csv = matches!((report, format), (Report::Table(_), crate::Format::Csv));
            if is_csv {
                let mut side = p.as_os_str().to_owned();
                side.push(".meta.json");
                let mut text = serde_json::to_string_pretty(metadata)?;
                text.push('\n');
                std::fs::write(&side, text)
                    .map_err(|e| CliError::Io(format!("{}: {e}", side.to_string_lossy())))?;
            }
        }
        None => stdout.write_all(&buf)?,
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_number(1.0), "1.00000000000e0");
        assert_eq!(format_number(-0.000123456789012345), "-1.23456789012e-4");
        assert_eq!(format_number(f64::NAN), "nan");
    }

    #[test]
    fn csv_quotes_text() {
        let mut t = Table::new(vec!["a", "b"]);
        t.push(vec![Cell::Num(2.0), Cell::Text("x, y".into())]);
        let mut out = Vec::new();
        t.write_csv(&mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "a,b\n2.00000000000e0,\"x, y\"\n"
        );
    }
}

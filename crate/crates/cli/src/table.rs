//! Homogeneous result tables and their csv, json and human renderings.

use std::io::{self, Write};

use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
    Empty,
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(i64::from(v))
    }
}

impl From<i32> for Cell {
    fn from(v: i32) -> Self {
        Cell::Int(i64::from(v))
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Human,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    /// Panics if the row width differs from the header; rows are built by
    /// this crate, so a mismatch is a programming error.
    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch");
        self.rows.push(row);
    }

    pub fn columns(&self) -> &[&'static str] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn emit(&self, format: Format, out: &mut dyn Write) -> io::Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(out),
            Format::Human => self.write_human(out),
        }
    }

    fn write_csv(&self, out: &mut dyn Write) -> io::Result<()> {
        writeln!(out, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(csv_field).collect();
            writeln!(out, "{}", fields.join(","))?;
        }
        Ok(())
    }

    fn write_json(&self, out: &mut dyn Write) -> io::Result<()> {
        let array: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let object: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(name, cell)| (name.to_string(), json_value(cell)))
                    .collect();
                Value::Object(object)
            })
            .collect();
        serde_json::to_writer_pretty(&mut *out, &Value::Array(array))?;
        writeln!(out)
    }

    fn write_human(&self, out: &mut dyn Write) -> io::Result<()> {
        let rendered: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|row| row.iter().map(human_field).collect())
            .collect();
        let widths: Vec<usize> = self
            .columns
            .iter()
            .enumerate()
            .map(|(i, name)| {
                rendered
                    .iter()
                    .map(|r| r[i].chars().count())
                    .chain(std::iter::once(name.len()))
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |cells: Vec<&str>| -> String {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect();
            padded.join("  ").trim_end().to_string()
        };
        writeln!(out, "{}", line(self.columns.to_vec()))?;
        for row in &rendered {
            writeln!(out, "{}", line(row.iter().map(String::as_str).collect()))?;
        }
        Ok(())
    }
}

/// 17 significant digits, enough to round-trip any f64.
pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

fn csv_field(cell: &Cell) -> String {
    match cell {
        Cell::Int(v) => v.to_string(),
        Cell::Float(v) => format_float(*v),
        Cell::Bool(v) => v.to_string(),
        Cell::Empty => String::new(),
        Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Cell::Text(s) => s.clone(),
    }
}

fn json_value(cell: &Cell) -> Value {
    match cell {
        Cell::Int(v) => Value::from(*v),
        // serde_json writes the shortest string that parses back to the same bits
        Cell::Float(v) => Number::from_f64(*v).map_or(Value::Null, Value::Number),
        Cell::Bool(v) => Value::Bool(*v),
        Cell::Text(s) => Value::String(s.clone()),
        Cell::Empty => Value::Null,
    }
}

fn human_field(cell: &Cell) -> String {
    match cell {
        // 12 significant digits: level energies differ far below the 6th
        Cell::Float(v) => {
            let a = v.abs();
            if a == 0.0 {
                "0".to_string()
            } else if (1e-3..1e9).contains(&a) {
                let decimals = (11 - a.log10().floor() as i32).max(0) as usize;
                format!("{v:.decimals$}")
            } else {
                format!("{v:.11e}")
            }
        }
        Cell::Empty => "-".to_string(),
        other => csv_field(other),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn render(t: &Table, f: Format) -> String {
        let mut buf = Vec::new();
        t.emit(f, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn empty_table_is_header_only() {
        let t = Table::new(&["Z", "value_MHz"]);
        assert_eq!(render(&t, Format::Csv), "Z,value_MHz\n");
        assert_eq!(render(&t, Format::Json).trim(), "[]");
    }

    #[test]
    fn csv_quotes_and_blanks() {
        let mut t = Table::new(&["a", "b", "c"]);
        t.push(vec!["x,y".into(), Cell::Empty, "say \"hi\"".into()]);
        assert_eq!(
            render(&t, Format::Csv).lines().nth(1).unwrap(),
            "\"x,y\",,\"say \"\"hi\"\"\""
        );
    }

    #[test]
    fn floats_roundtrip() {
        for v in [
            0.1,
            1046.566123456789,
            -6.02e-23,
            f64::MIN_POSITIVE,
            1.0 / 3.0,
        ] {
            assert_eq!(
                format_float(v).parse::<f64>().unwrap().to_bits(),
                v.to_bits()
            );
        }
    }

    #[test]
    fn human_is_aligned() {
        let mut t = Table::new(&["name", "v"]);
        t.push(vec!["long-name".into(), 1.5.into()]);
        t.push(vec!["s".into(), Cell::Empty]);
        let text = render(&t, Format::Human);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "     name              v");
        assert_eq!(lines[1], "long-name  1.50000000000");
        assert_eq!(lines[2], "        s              -");
    }
}

//! Flat JSON records and CSV tables with `#` header comments.

use serde_json::{Map, Number, Value};

/// An ordered JSON object of scalars. Non-finite numbers are written as
/// `null` and their keys listed under `nonfinite`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record(Map<String, Value>);

impl Record {
    pub fn new() -> Self {
        Record(Map::new())
    }

    pub fn num(mut self, key: &str, x: f64) -> Self {
        match Number::from_f64(x) {
            Some(n) => {
                self.0.insert(key.into(), Value::Number(n));
            }
            None => {
                self.0.insert(key.into(), Value::Null);
                let list = self.0.entry("nonfinite").or_insert_with(|| Value::Array(Vec::new()));
                if let Value::Array(v) = list {
                    v.push(Value::String(key.into()));
                }
            }
        }
        self
    }

    pub fn opt(self, key: &str, x: Option<f64>) -> Self {
        match x {
            Some(x) => self.num(key, x),
            None => self.null(key),
        }
    }

    pub fn int(mut self, key: &str, n: u64) -> Self {
        self.0.insert(key.into(), Value::from(n));
        self
    }

    pub fn text(mut self, key: &str, s: &str) -> Self {
        self.0.insert(key.into(), Value::String(s.into()));
        self
    }

    pub fn flag(mut self, key: &str, b: bool) -> Self {
        self.0.insert(key.into(), Value::Bool(b));
        self
    }

    pub fn null(mut self, key: &str) -> Self {
        self.0.insert(key.into(), Value::Null);
        self
    }

    pub fn records(mut self, key: &str, rows: Vec<Record>) -> Self {
        self.0.insert(key.into(), Value::Array(rows.into_iter().map(Record::into_value).collect()));
        self
    }

    pub fn texts(mut self, key: &str, items: impl IntoIterator<Item = String>) -> Self {
        self.0.insert(key.into(), Value::Array(items.into_iter().map(Value::String).collect()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.0.get(key)
    }

    pub fn get_f64(&self, key: &str) -> Option<f64> {
        self.0.get(key).and_then(Value::as_f64)
    }

    pub fn into_value(self) -> Value {
        Value::Object(self.0)
    }

    /// Scalar fields as `key = value` lines, for CSV headers.
    pub fn summary_lines(&self) -> Vec<String> {
        self.0.iter().filter(|(_, v)| !v.is_array() && !v.is_object()).map(|(k, v)| format!("{k} = {v}")).collect()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.0).expect("maps of scalars always serialize");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            // 17 significant digits round-trip every f64
            Cell::Num(x) if x.is_finite() => format!("{x:.16e}"),
            Cell::Num(_) | Cell::Empty => String::new(),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.into())
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(x: Option<T>) -> Self {
        x.map_or(Cell::Empty, Into::into)
    }
}

/// Rows of cells under named columns. Every column carries a description
/// that is written as a header comment.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    title: String,
    notes: Vec<String>,
    columns: Vec<(String, String)>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(title: impl Into<String>) -> Self {
        Table { title: title.into(), notes: Vec::new(), columns: Vec::new(), rows: Vec::new() }
    }

    pub fn note(mut self, line: impl Into<String>) -> Self {
        self.notes.push(line.into());
        self
    }

    pub fn notes(mut self, lines: impl IntoIterator<Item = String>) -> Self {
        self.notes.extend(lines);
        self
    }

    pub fn column(mut self, name: impl Into<String>, about: impl Into<String>) -> Self {
        self.columns.push((name.into(), about.into()));
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width does not match the header");
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column_names(&self) -> impl Iterator<Item = &str> {
        self.columns.iter().map(|(n, _)| n.as_str())
    }

    /// Numeric values of one column; empty and text cells are skipped.
    pub fn values(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|(n, _)| n == name)?;
        Some(
            self.rows
                .iter()
                .filter_map(|r| match r[j] {
                    Cell::Num(x) => Some(x),
                    Cell::Int(n) => Some(n as f64),
                    _ => None,
                })
                .collect(),
        )
    }

    pub fn to_csv(&self) -> String {
        let mut head = format!("# {}\n", self.title);
        for n in &self.notes {
            head.push_str(&format!("# {n}\n"));
        }
        for (name, about) in &self.columns {
            head.push_str(&format!("# {name}: {about}\n"));
        }
        let mut w = csv::Writer::from_writer(head.into_bytes());
        w.write_record(self.columns.iter().map(|(n, _)| n.as_str())).expect("writing to memory");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).expect("writing to memory");
        }
        String::from_utf8(w.into_inner().expect("flushing to memory")).expect("csv output is UTF-8")
    }
}

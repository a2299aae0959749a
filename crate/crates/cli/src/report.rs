//! Report records and their JSON / CSV serialization.
//!
//! Floats are written with 17 significant digits in both formats, so the two
//! carry identical values and round-trip exactly.

use std::fmt::Write as _;
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Indeterminate,
    Fail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Indeterminate => "indeterminate",
        }
    }

    pub fn exit_code(self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Indeterminate => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    F(f64),
    I(i128),
    B(bool),
    S(String),
    Null,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::F(v)
    }
}
impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::B(v)
    }
}
impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::S(v.to_string())
    }
}
impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::S(v)
    }
}
impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Null, Cell::F)
    }
}
macro_rules! int_cell {
    ($($t:ty),*) => { $( impl From<$t> for Cell { fn from(v: $t) -> Self { Cell::I(v as i128) } } )* };
}
int_cell!(u32, u64, u128, usize, i64);

pub fn fmt17(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

fn num17(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(fmt17(x).parse::<Number>().expect("formatted float is a JSON number"))
    } else {
        Value::Null
    }
}

impl Cell {
    fn json(&self) -> Value {
        match self {
            Cell::F(x) => num17(*x),
            Cell::I(i) => Value::Number(i.to_string().parse().expect("integer")),
            Cell::B(b) => Value::Bool(*b),
            Cell::S(s) => Value::String(s.clone()),
            Cell::Null => Value::Null,
        }
    }

    fn csv(&self) -> String {
        match self {
            Cell::F(x) => fmt17(*x),
            Cell::I(i) => i.to_string(),
            Cell::B(b) => b.to_string(),
            Cell::S(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::S(s) => s.clone(),
            Cell::Null => String::new(),
        }
    }
}

/// Rewrites every non-integer number in `v` with 17 significant digits.
pub fn normalize(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => num17(n.as_f64().unwrap_or(f64::NAN)),
        Value::Array(a) => Value::Array(a.into_iter().map(normalize).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, normalize(v))).collect()),
        other => other,
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Vec<(String, Cell)>,
    pub status: Status,
    /// Failed checks, with the values behind them.
    pub diagnostics: Vec<String>,
    pub started_ms: u128,
}

pub fn now_ms() -> u128 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_millis())
}

impl Report {
    pub fn new(command: &str, columns: Vec<&'static str>) -> Self {
        Report {
            command: command.to_string(),
            inputs: Map::new(),
            columns,
            rows: Vec::new(),
            summary: Vec::new(),
            status: Status::Pass,
            diagnostics: Vec::new(),
            started_ms: now_ms(),
        }
    }

    pub fn input(&mut self, key: &str, v: impl Into<Value>) {
        self.inputs.insert(key.to_string(), normalize(v.into()));
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn summary(&mut self, key: impl Into<String>, v: impl Into<Cell>) {
        self.summary.push((key.into(), v.into()));
    }

    /// Records a failed check and lowers the status to at most `s`.
    pub fn flag(&mut self, s: Status, msg: impl Into<String>) {
        self.status = self.status.max(s);
        self.diagnostics.push(msg.into());
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Object(self.columns.iter().zip(r).map(|(c, v)| (c.to_string(), v.json())).collect()))
            .collect();
        let summary: Map<String, Value> = self.summary.iter().map(|(k, v)| (k.clone(), v.json())).collect();
        let mut outputs = Map::new();
        outputs.insert("columns".into(), self.columns.iter().map(|c| Value::from(*c)).collect());
        outputs.insert("rows".into(), Value::Array(rows));
        outputs.insert("summary".into(), Value::Object(summary));
        let mut stamps = Map::new();
        stamps.insert("started_unix_ms".into(), Value::Number(self.started_ms.to_string().parse().unwrap()));
        stamps.insert("finished_unix_ms".into(), Value::Number(now_ms().to_string().parse().unwrap()));
        let mut top = Map::new();
        top.insert("command".into(), self.command.clone().into());
        top.insert("version".into(), xi_ineq_version().into());
        top.insert("status".into(), self.status.as_str().into());
        top.insert("inputs".into(), Value::Object(self.inputs.clone()));
        top.insert("outputs".into(), Value::Object(outputs));
        top.insert("diagnostics".into(), self.diagnostics.iter().map(|d| Value::from(d.as_str())).collect());
        top.insert("timestamps".into(), Value::Object(stamps));
        let mut s = serde_json::to_string_pretty(&Value::Object(top)).expect("report serializes");
        s.push('\n');
        s
    }

    /// Header plus one line per row.
    pub fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for r in &self.rows {
            let line: Vec<String> = r.iter().map(Cell::csv).collect();
            let _ = writeln!(s, "{}", line.join(","));
        }
        s
    }
}

pub fn xi_ineq_version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}

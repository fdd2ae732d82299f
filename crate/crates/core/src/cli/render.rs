use serde_json::{json, Map, Value};

use crate::prime_sums::{SumMode, SumValue};
use crate::real::{format_fixed, Interval};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Output of one verb in all three formats.
#[derive(Debug, Clone)]
pub struct Report {
    pub text: String,
    pub json: Value,
    /// Header row first. Empty means "flatten `json`".
    pub rows: Vec<Vec<String>>,
    /// False when a verification verb found its inequality violated.
    pub verified: bool,
}

impl Report {
    pub fn new(text: String, json: Value) -> Self {
        Report { text, json, rows: Vec::new(), verified: true }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => {
                let mut s = self.text.clone();
                if !s.ends_with('\n') {
                    s.push('\n');
                }
                s
            }
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("JSON values serialize");
                s.push('\n');
                s
            }
            Format::Csv => {
                let rows = if self.rows.is_empty() { flatten_rows(&self.json) } else { self.rows.clone() };
                let mut w = csv::Writer::from_writer(Vec::new());
                for r in &rows {
                    w.write_record(r).expect("writing to memory");
                }
                String::from_utf8(w.into_inner().expect("flush to memory")).expect("CSV is UTF-8")
            }
        }
    }
}

/// One header row and one value row, keys dotted by nesting.
fn flatten_rows(v: &Value) -> Vec<Vec<String>> {
    let mut flat = Vec::new();
    flatten("", v, &mut flat);
    let (keys, vals) = flat.into_iter().unzip();
    vec![keys, vals]
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, v)| flatten(&key(k), v, out)),
        Value::Array(items) if items.iter().all(|i| !i.is_object()) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            out.push((prefix.to_string(), parts.join(";")));
        }
        Value::Array(items) => items.iter().enumerate().for_each(|(i, v)| flatten(&key(&i.to_string()), v, out)),
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn mode_name(mode: SumMode) -> &'static str {
    match mode {
        SumMode::Exact => "exact",
        SumMode::Float => "float",
    }
}

pub fn radius_text(v: &SumValue) -> String {
    match v.mode() {
        SumMode::Exact if v.exact_value().is_some() => "0".into(),
        _ => format!("{:.3e}", v.error_radius_f64()),
    }
}

pub fn sum_json(v: &SumValue, digits: usize) -> Value {
    json!({
        "mode": mode_name(v.mode()),
        "value": v.to_decimal(digits),
        "error_radius": radius_text(v),
    })
}

/// `1.234567 (exact)` or `1.234567 (+/- 1.2e-30)`.
pub fn sum_text(v: &SumValue, digits: usize) -> String {
    match v.exact_value() {
        Some(_) => format!("{} (exact)", v.to_decimal(digits)),
        None => format!("{} (+/- {})", v.to_decimal(digits), radius_text(v)),
    }
}

pub fn interval_json(x: &Interval, digits: usize) -> Value {
    json!({"lo": format_fixed(x.lo(), digits), "hi": format_fixed(x.hi(), digits)})
}

pub fn interval_text(x: &Interval, digits: usize) -> String {
    format!("[{}, {}]", format_fixed(x.lo(), digits), format_fixed(x.hi(), digits))
}

/// Aligned `name = value` lines.
pub fn table_text(lines: &[(&str, String)]) -> String {
    let width = lines.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    let mut s = String::new();
    for (k, v) in lines {
        let pad = width - k.chars().count();
        s.push_str(&format!("{k}{} = {v}\n", " ".repeat(pad)));
    }
    s
}

/// Column-aligned grid, first row as header.
pub fn grid_text(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut s = String::new();
    for (i, r) in rows.iter().enumerate() {
        let cells: Vec<String> = r.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
        s.push_str(cells.join("  ").trim_end());
        s.push('\n');
        if i == 0 {
            let total = widths.iter().sum::<usize>() + 2 * cols.saturating_sub(1);
            s.push_str(&"-".repeat(total));
            s.push('\n');
        }
    }
    s
}

pub fn object(pairs: Vec<(&str, Value)>) -> Value {
    Value::Object(pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect::<Map<_, _>>())
}

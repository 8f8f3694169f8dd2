//! Deterministic writers. Every float prints as {:.16e}, which round-trips
//! exactly through parsing and makes repeated runs byte-identical.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

/// Fixed-width scientific form used in both CSV and JSON output.
pub fn f64s(x: f64) -> String {
    format!("{x:.16e}")
}

/// Buffered writer to the given file, or to stdout.
pub fn make_writer(out: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

/// Incremental JSON object with insertion-ordered fields.
pub struct JsonObject {
    fields: Vec<(String, String)>,
}

impl JsonObject {
    pub fn new() -> Self {
        Self { fields: Vec::new() }
    }

    fn push(mut self, key: &str, raw: String) -> Self {
        self.fields.push((key.to_string(), raw));
        self
    }

    pub fn num(self, key: &str, v: f64) -> Self {
        self.push(key, f64s(v))
    }

    pub fn int(self, key: &str, v: i64) -> Self {
        self.push(key, v.to_string())
    }

    pub fn bool(self, key: &str, v: bool) -> Self {
        self.push(key, v.to_string())
    }

    pub fn opt_num(self, key: &str, v: Option<f64>) -> Self {
        let raw = v.map_or_else(|| "null".to_string(), f64s);
        self.push(key, raw)
    }

    /// Pre-rendered JSON (arrays, nested objects).
    pub fn raw(self, key: &str, v: String) -> Self {
        self.push(key, v)
    }

    pub fn render(&self) -> String {
        let mut out = String::from("{\n");
        for (i, (k, v)) in self.fields.iter().enumerate() {
            out.push_str("  \"");
            out.push_str(k);
            out.push_str("\": ");
            // Indent nested structures to keep the output readable.
            out.push_str(&v.replace('\n', "\n  "));
            out.push_str(if i + 1 < self.fields.len() { ",\n" } else { "\n" });
        }
        out.push('}');
        out
    }
}

/// JSON array of numbers, one element per line.
pub fn json_nums(values: impl IntoIterator<Item = f64>) -> String {
    json_rows(values.into_iter().map(f64s))
}

/// JSON array of [re, im] pairs, one pair per line.
pub fn json_pairs(values: impl IntoIterator<Item = (f64, f64)>) -> String {
    json_rows(
        values
            .into_iter()
            .map(|(re, im)| format!("[{}, {}]", f64s(re), f64s(im))),
    )
}

/// JSON array of pre-rendered elements, one per line.
pub fn json_rows(items: impl IntoIterator<Item = String>) -> String {
    let items: Vec<String> = items.into_iter().collect();
    if items.is_empty() {
        return "[]".to_string();
    }
    format!("[\n  {}\n]", items.join(",\n  "))
}

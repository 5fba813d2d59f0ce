//! Machine-readable emission of computed curves.
//!
//! Curves are emitted as CSV with `#`-prefixed header comment lines carrying
//! convention metadata (ensemble, route, seed, ...), or as JSON.  Numeric
//! values are printed with 12 significant digits so identical inputs produce
//! byte-identical files suitable for golden-file diffing.

use crate::error::RmtError;
use std::io::Write as _;
use std::path::Path;

/// Format a float with 12 significant digits (scientific notation).
pub fn format_value(x: f64) -> String {
    format!("{x:.11e}")
}

/// A CSV table: metadata comment lines, a column header, and numeric rows.
#[derive(Debug, Clone, Default)]
pub struct CsvTable {
    pub comments: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn new<S: Into<String>>(columns: Vec<S>) -> Self {
        Self {
            comments: Vec::new(),
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    /// Add a `# key = value` metadata line.
    pub fn comment(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        self.comments.push(format!("{key} = {value}"));
        self
    }

    pub fn push_row(&mut self, row: Vec<f64>) -> Result<(), RmtError> {
        if row.len() != self.columns.len() {
            return Err(RmtError::InvalidParameter(format!(
                "row has {} fields, table has {} columns",
                row.len(),
                self.columns.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    /// Render the table as CSV text.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            out.push_str("# ");
            out.push_str(c);
            out.push('\n');
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(|&x| format_value(x)).collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    pub fn write_to(&self, w: &mut dyn std::io::Write) -> Result<(), RmtError> {
        w.write_all(self.render().as_bytes())?;
        Ok(())
    }

    pub fn write_file(&self, path: &Path) -> Result<(), RmtError> {
        let mut f = std::fs::File::create(path)?;
        self.write_to(&mut f)?;
        f.flush()?;
        Ok(())
    }

    /// Render the table as a JSON object `{meta: {...}, columns: [...], rows: [[...]]}`.
    pub fn render_json(&self) -> String {
        let meta: serde_json::Map<String, serde_json::Value> = self
            .comments
            .iter()
            .filter_map(|c| {
                c.split_once(" = ")
                    .map(|(k, v)| (k.to_string(), serde_json::Value::String(v.to_string())))
            })
            .collect();
        let obj = serde_json::json!({
            "meta": meta,
            "columns": self.columns,
            "rows": self.rows,
        });
        serde_json::to_string_pretty(&obj).expect("serializable by construction")
    }
}

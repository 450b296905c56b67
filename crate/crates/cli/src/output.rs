//! JSON and CSV emission with an optional metadata header.

use std::time::{SystemTime, UNIX_EPOCH};

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy)]
pub struct Emitter {
    pub meta: bool,
}

impl Emitter {
    fn meta_value(&self) -> Value {
        let now = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        json!({
            "tool": env!("CARGO_BIN_NAME"),
            "version": env!("CARGO_PKG_VERSION"),
            "generated_unix": now,
        })
    }

    /// `{"meta": ..., "data": ...}`, or `{"data": ...}` without metadata.
    pub fn json(&self, data: &impl Serialize) -> String {
        let data = serde_json::to_value(data).expect("serializable output");
        let body = if self.meta { json!({ "meta": self.meta_value(), "data": data }) } else { json!({ "data": data }) };
        let mut out = serde_json::to_string_pretty(&body).expect("json");
        out.push('\n');
        out
    }

    /// Header row, data rows and trailing `#` comment lines.
    pub fn csv(&self, header: &[&str], rows: &[Vec<String>], notes: &[String]) -> String {
        let mut out = String::new();
        if self.meta {
            let m = self.meta_value();
            out.push_str(&format!(
                "# {} {} generated_unix={}\n",
                m["tool"].as_str().unwrap_or(""),
                m["version"].as_str().unwrap_or(""),
                m["generated_unix"]
            ));
        }
        out.push_str(&header.join(","));
        out.push('\n');
        for row in rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        for note in notes {
            out.push_str(&format!("# {note}\n"));
        }
        out
    }
}

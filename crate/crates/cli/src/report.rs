use serde_json::{json, Map, Value};

use crate::args::Format;

/// Machine-readable outcome of one command.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub outputs: Value,
    pub pass: bool,
    pub tolerance: f64,
    pub wall_ms: f64,
    /// Preferred CSV body; without it the outputs are flattened to `key,value` rows.
    pub table: Option<String>,
}

impl Report {
    pub fn new(command: &str, inputs: Value, outputs: Value, pass: bool, tolerance: f64) -> Self {
        Self {
            command: command.to_string(),
            inputs,
            outputs,
            pass,
            tolerance,
            wall_ms: 0.0,
            table: None,
        }
    }

    pub fn with_table(mut self, table: String) -> Self {
        self.table = Some(table);
        self
    }

    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "pass": self.pass,
            "tolerance": self.tolerance,
            "wall_ms": self.wall_ms,
        })
    }

    pub fn render(&self, format: Format) -> Result<String, String> {
        match format {
            Format::Json => serde_json::to_string_pretty(&self.to_json()).map_err(|e| e.to_string()),
            Format::Csv => match &self.table {
                Some(t) => Ok(t.clone()),
                None => self.flat_csv(),
            },
        }
    }

    fn flat_csv(&self) -> Result<String, String> {
        let mut rows = Vec::new();
        flatten("", &self.outputs, &mut rows);
        rows.push(("pass".into(), self.pass.to_string()));
        rows.push(("tolerance".into(), format!("{:e}", self.tolerance)));
        rows.push(("wall_ms".into(), format!("{}", self.wall_ms)));
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["key", "value"]).map_err(|e| e.to_string())?;
        for (k, v) in rows {
            w.write_record([k, v]).map_err(|e| e.to_string())?;
        }
        let bytes = w.into_inner().map_err(|e| e.to_string())?;
        String::from_utf8(bytes).map_err(|e| e.to_string())
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                flatten(&key(k), x, out);
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), x, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

pub fn complex(re: f64, im: f64) -> Value {
    let mut m = Map::new();
    m.insert("re".into(), json!(re));
    m.insert("im".into(), json!(im));
    Value::Object(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_flattens_nested_outputs() {
        let r = Report::new("x", json!({}), json!({"a": {"b": [1.5, 2]}, "s": "t"}), true, 1e-10);
        let csv = r.render(Format::Csv).unwrap();
        assert!(csv.contains("a.b.0,1.5"));
        assert!(csv.contains("a.b.1,2"));
        assert!(csv.contains("s,t"));
        assert!(csv.contains("pass,true"));
    }

    #[test]
    fn json_has_the_report_keys() {
        let r = Report::new("x", json!({"n": 2}), json!({}), false, 1e-3);
        let v = r.to_json();
        for k in ["command", "inputs", "outputs", "pass", "tolerance", "wall_ms"] {
            assert!(v.get(k).is_some());
        }
    }
}

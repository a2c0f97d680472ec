//! Config-file handling: a schema-versioned JSON object whose fields
//! default any flag the command line leaves unset.

use loewner_lab::{Error, Result};
use serde_json::Value;

pub const CONFIG_VERSION: i64 = 1;

/// Load and validate a config file. Returns an empty object when no path
/// is given.
pub fn load(path: Option<&str>) -> Result<Value> {
    let Some(path) = path else {
        return Ok(Value::Object(Default::default()));
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("config {path}: {e}")))?;
    let v: Value = serde_json::from_str(&text)
        .map_err(|e| Error::invalid(format!("config {path}: {e}")))?;
    match v.get("version").and_then(Value::as_i64) {
        Some(CONFIG_VERSION) => {}
        Some(other) => {
            return Err(Error::SchemaMismatch(format!(
                "config version {other}, expected {CONFIG_VERSION}"
            )))
        }
        None => {
            return Err(Error::SchemaMismatch("config must carry \"version\": 1".into()))
        }
    }
    Ok(v)
}

pub fn str_field(cfg: &Value, key: &str) -> Option<String> {
    cfg.get(key).and_then(Value::as_str).map(str::to_string)
}

pub fn f64_field(cfg: &Value, key: &str) -> Option<f64> {
    cfg.get(key).and_then(Value::as_f64)
}

pub fn u64_field(cfg: &Value, key: &str) -> Option<u64> {
    cfg.get(key).and_then(Value::as_u64)
}

/// Comma-separated list or JSON array of numbers.
pub fn f64_list(cfg: &Value, key: &str) -> Option<Vec<f64>> {
    cfg.get(key).and_then(|v| match v {
        Value::Array(items) => items.iter().map(Value::as_f64).collect(),
        Value::String(s) => parse_f64_list(s).ok(),
        _ => None,
    })
}

pub fn parse_f64_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|e| Error::invalid(format!("bad number '{x}': {e}")))
        })
        .collect()
}

/// The file must exist when referenced.
pub fn require_file(path: &str) -> Result<()> {
    if std::path::Path::new(path).is_file() {
        Ok(())
    } else {
        Err(Error::invalid(format!("referenced file does not exist: {path}")))
    }
}

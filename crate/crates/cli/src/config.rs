use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use crate::CliError;

/// Layers flags over a TOML config: top-level keys, then the `[<command>]` table,
/// then every flag given on the command line. Unknown keys are rejected.
pub fn resolve<T: Serialize + DeserializeOwned + Default>(cli: &T, file: Option<&Path>, command: &str) -> Result<T, CliError> {
    let Some(path) = file else {
        return Ok(serde_json::from_value(serde_json::to_value(cli).expect("args serialize")).expect("args roundtrip"));
    };
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let table: toml::Table = text.parse().map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let file_value = serde_json::to_value(table).map_err(|e| CliError::Config(e.to_string()))?;
    let known = match serde_json::to_value(T::default()).expect("defaults serialize") {
        Value::Object(m) => m,
        _ => unreachable!("argument structs serialize to objects"),
    };
    let mut merged = serde_json::Map::new();
    let mut absorb = |obj: &serde_json::Map<String, Value>, allow_sections: bool| -> Result<(), CliError> {
        for (k, v) in obj {
            let key = k.replace('-', "_");
            if known.contains_key(&key) {
                merged.insert(key, v.clone());
            } else if !(allow_sections && v.is_object()) {
                return Err(CliError::Config(format!("unknown config key '{k}' for command {command}")));
            }
        }
        Ok(())
    };
    let Value::Object(top) = file_value else { unreachable!("toml tables are objects") };
    absorb(&top, true)?;
    if let Some(Value::Object(section)) = top.get(command) {
        absorb(section, false)?;
    }
    if let Value::Object(flags) = serde_json::to_value(cli).expect("args serialize") {
        for (k, v) in flags {
            if !v.is_null() {
                merged.insert(k, v);
            }
        }
    }
    serde_json::from_value(Value::Object(merged)).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

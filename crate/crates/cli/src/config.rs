//! Config files: TOML, or JSON (including an artifact written by an earlier run).

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use crate::args::Overlay;
use crate::output::CliError;

fn read_value(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    let v: Value = if is_json {
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
    } else {
        let t: toml::Table = toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        serde_json::to_value(t).map_err(|e| CliError::Config(e.to_string()))?
    };
    // An artifact carries its inputs under "config".
    Ok(match v {
        Value::Object(mut o) if o.contains_key("config") && o.contains_key("rows") => o.remove("config").unwrap_or_default(),
        v => v,
    })
}

/// Overlays the config file at `path` (if any) onto `flags`. Unknown keys are rejected.
pub fn apply<T>(flags: &mut T, path: Option<&Path>) -> Result<(), CliError>
where
    T: Overlay + Serialize + DeserializeOwned + Default,
{
    let Some(path) = path else { return Ok(()) };
    let v = read_value(path)?;
    let Value::Object(map) = &v else {
        return Err(CliError::Config(format!("{}: expected a table of settings", path.display())));
    };
    let known = serde_json::to_value(T::default()).map_err(|e| CliError::Config(e.to_string()))?;
    if let Value::Object(known) = known {
        if let Some(k) = map.keys().find(|k| !known.contains_key(*k)) {
            return Err(CliError::Config(format!("{}: unknown key {k:?}", path.display())));
        }
    }
    let file: T = serde_json::from_value(v).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    flags.overlay(file);
    Ok(())
}

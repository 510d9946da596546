//! Flat `key=value` config files. One assignment per line; `#` starts a
//! comment; keys are the long flag names. Command-line flags override
//! anything loaded here.

use crate::UsageError;
use std::collections::HashMap;
use std::path::Path;

const KNOWN_KEYS: &[&str] = &[
    "d", "alpha", "delta", "big-delta", "m", "s", "eps", "n", "k", "x", "trials", "seed", "out",
];

pub fn load(path: &Path) -> Result<HashMap<String, String>, UsageError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
    let mut map = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(UsageError(format!(
                "config {} line {}: expected key=value, got {raw:?}",
                path.display(),
                lineno + 1
            )));
        };
        let key = key.trim().to_string();
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(UsageError(format!(
                "config {} line {}: unknown key {key:?}",
                path.display(),
                lineno + 1
            )));
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

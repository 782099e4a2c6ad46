//! Flat `key=value` configuration files.
//!
//! Lines are `key=value` pairs; blank lines and `#` comments are skipped.
//! When a key repeats, the last occurrence wins. Command-line flags always
//! override file values.

use std::collections::BTreeMap;

use qlpsim_core::WorldConfig;

use crate::HarnessError;

/// Parses a `key=value` file into a map.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, HarnessError> {
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            HarnessError::Data(format!(
                "config line {}: expected key=value, found {line:?}",
                idx + 1
            ))
        })?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

/// Typed lookup with optional fallback to a default.
pub fn lookup<T: std::str::FromStr>(
    map: &BTreeMap<String, String>,
    key: &str,
) -> Result<Option<T>, HarnessError> {
    match map.get(key) {
        None => Ok(None),
        Some(value) => value.parse().map(Some).map_err(|_| {
            HarnessError::Data(format!("config key {key}: cannot parse value {value:?}"))
        }),
    }
}

const WORLD_KEYS: [&str; 5] = ["r_min", "r_max", "step_sigma", "sample_period_s", "seed"];

/// Builds a world configuration from a `key=value` file, starting from the
/// defaults. Unknown keys are rejected since the file describes nothing
/// else.
pub fn world_from_config(text: &str) -> Result<WorldConfig, HarnessError> {
    let map = parse_config(text)?;
    for key in map.keys() {
        if !WORLD_KEYS.contains(&key.as_str()) {
            return Err(HarnessError::Data(format!(
                "unknown world-config key {key:?} (expected one of {WORLD_KEYS:?})"
            )));
        }
    }
    let defaults = WorldConfig::default();
    Ok(WorldConfig::new(
        lookup(&map, "r_min")?.unwrap_or(defaults.r_min),
        lookup(&map, "r_max")?.unwrap_or(defaults.r_max),
        lookup(&map, "step_sigma")?.unwrap_or(defaults.step_sigma),
        lookup(&map, "sample_period_s")?.unwrap_or(defaults.sample_period_s),
        lookup(&map, "seed")?.unwrap_or(defaults.seed),
    )?)
}

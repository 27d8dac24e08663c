//! Flag/config-file resolution and output metadata.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::CliError;

/// Seed override read when `--seed` is not given on the command line.
pub const SEED_ENV: &str = "TRANSSHIP_SEED";

/// A subcommand's arguments. Every field is optional so that a config file
/// can supply it; `resolve` fills defaults and checks required values.
pub trait Options: Serialize + DeserializeOwned {
    const NAME: &'static str;
    /// Whether the command takes a `seed`.
    const SEEDED: bool = false;

    fn resolve(&mut self) -> Result<(), CliError>;
}

/// Drops unset flags so they do not shadow config values. `false` counts
/// as unset: switches can be turned on from the command line only.
fn given(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(map) => map
            .into_iter()
            .filter(|(_, v)| !matches!(v, Value::Null | Value::Bool(false)))
            .collect(),
        _ => Map::new(),
    }
}

fn read_config(path: &Path) -> Result<Map<String, Value>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    match serde_json::from_str(&text) {
        Ok(Value::Object(map)) => Ok(map),
        Ok(_) => Err(CliError::Usage(format!(
            "config {}: expected a JSON object",
            path.display()
        ))),
        Err(e) => Err(CliError::Usage(format!("config {}: {e}", path.display()))),
    }
}

/// Merges config file < seed environment variable < flags, then resolves.
pub fn merge<T: Options>(flags: T, config: Option<&Path>, env_seed: Option<String>) -> Result<T, CliError> {
    let flags = given(serde_json::to_value(&flags).expect("options serialize"));
    let mut merged = match config {
        Some(p) => read_config(p)?,
        None => Map::new(),
    };
    if T::SEEDED && !flags.contains_key("seed") {
        if let Some(s) = env_seed {
            let seed: u64 = s
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("{SEED_ENV}={s:?} is not an unsigned integer")))?;
            merged.insert("seed".into(), seed.into());
        }
    }
    merged.extend(flags);
    let mut opts: T = serde_json::from_value(Value::Object(merged))
        .map_err(|e| CliError::Usage(format!("{} options: {e}", T::NAME)))?;
    opts.resolve()?;
    Ok(opts)
}

/// Tool, version, command and the resolved options.
pub fn metadata<T: Options>(opts: &T) -> Value {
    json!({
        "tool": "transship",
        "version": env!("CARGO_PKG_VERSION"),
        "command": T::NAME,
        "config": opts,
    })
}

/// The metadata as comment lines for text formats.
pub fn preamble(meta: &Value) -> Vec<String> {
    vec![
        format!("transship {}", meta["version"].as_str().unwrap_or("")),
        format!("command: {}", meta["command"].as_str().unwrap_or("")),
        format!("config: {}", meta["config"]),
    ]
}

/// Fails with a usage error naming the flag when a required value is absent.
pub fn required<T: Copy>(v: Option<T>, flag: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("missing required flag --{flag}")))
}

//! Config-file layering.
//!
//! A TOML file supplies flag values. Top-level keys and keys under a table
//! named after the subcommand both become `--key value` arguments placed
//! ahead of the command-line flags, so flags given on the command line win.

use std::ffi::OsString;
use std::path::Path;

use crate::error::CliError;

/// Global flags that take a value.
const VALUE_GLOBALS: &[&str] = &["--config", "--out", "--seed", "--threads"];

/// Keys that are positional arguments or the config path itself.
const NOT_FLAGS: &[&str] = &["config", "function", "which"];

/// Finds `--config FILE` or `--config=FILE` in raw arguments.
pub fn find_config(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--" {
            break;
        }
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(v) = s.strip_prefix("--config=") {
            return Some(v.into());
        }
    }
    None
}

/// Index of the subcommand token in `args` (excluding the program name).
fn subcommand_index(args: &[OsString]) -> Option<usize> {
    let mut i = 0;
    while i < args.len() {
        let s = args[i].to_string_lossy();
        if !s.starts_with('-') {
            return Some(i);
        }
        if VALUE_GLOBALS.contains(&s.as_ref()) {
            i += 1;
        }
        i += 1;
    }
    None
}

fn value_to_arg(v: &toml::Value) -> Result<Option<String>, CliError> {
    Ok(match v {
        toml::Value::String(s) => Some(s.clone()),
        toml::Value::Integer(i) => Some(i.to_string()),
        toml::Value::Float(f) => Some(f.to_string()),
        toml::Value::Boolean(_) => None,
        toml::Value::Array(items) => {
            let parts = items
                .iter()
                .map(|x| {
                    value_to_arg(x)?.ok_or_else(|| {
                        CliError::Usage("config arrays must hold numbers or strings".into())
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            Some(parts.join(","))
        }
        _ => return Err(CliError::Usage(format!("unsupported config value {v}"))),
    })
}

fn push_flags(table: &toml::Table, out: &mut Vec<OsString>) -> Result<(), CliError> {
    for (key, value) in table {
        if NOT_FLAGS.contains(&key.as_str()) || value.is_table() {
            continue;
        }
        let flag = format!("--{}", key.replace('_', "-"));
        match (value, value_to_arg(value)?) {
            (toml::Value::Boolean(true), _) => out.push(flag.into()),
            (toml::Value::Boolean(false), _) => {}
            (_, Some(v)) => {
                out.push(flag.into());
                out.push(v.into());
            }
            (_, None) => {}
        }
    }
    Ok(())
}

/// Rewrites `args` (without the program name) as
/// `<subcommand> <flags from file> <original arguments>`.
pub fn layer(args: Vec<OsString>, path: &Path) -> Result<Vec<OsString>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("reading config {}: {e}", path.display())))?;
    let table: toml::Table = text
        .parse()
        .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
    let Some(idx) = subcommand_index(&args) else {
        return Ok(args);
    };
    let sub = args[idx].to_string_lossy().into_owned();
    let mut out = vec![args[idx].clone()];
    push_flags(&table, &mut out)?;
    if let Some(toml::Value::Table(t)) = table.get(&sub) {
        push_flags(t, &mut out)?;
    }
    out.extend(
        args.into_iter()
            .enumerate()
            .filter(|(i, _)| *i != idx)
            .map(|(_, a)| a),
    );
    Ok(out)
}

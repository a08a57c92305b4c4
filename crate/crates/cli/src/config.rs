use std::collections::HashSet;
use std::ffi::OsString;
use std::path::Path;

use clap::CommandFactory;

use crate::args::Cli;

/// Flags that exclude each other; a config value is dropped when the command
/// line already sets any flag of its set.
const EXCLUSIVE: &[&[&str]] = &[&["eta", "grid"]];

/// Inserts `--key value` pairs from the config file right after the
/// subcommand name, so that flags given on the command line come later and win.
pub fn expand_args(raw: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let Some(path) = config_path(&raw) else {
        return Ok(raw);
    };
    let text = std::fs::read_to_string(&path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let pairs = parse_config(&text)?;

    let root = Cli::command();
    let Some((pos, sub)) = raw
        .iter()
        .enumerate()
        .skip(1)
        .find_map(|(i, a)| root.find_subcommand(a.to_str()?).map(|s| (i, s.clone())))
    else {
        return Ok(raw);
    };
    let longs = |c: &clap::Command| -> HashSet<String> {
        c.get_arguments().filter_map(|a| a.get_long().map(str::to_string)).collect()
    };
    let own = longs(&sub);
    let known: HashSet<String> = root.get_subcommands().flat_map(longs).chain(longs(&root)).collect();
    let given: HashSet<String> = raw
        .iter()
        .filter_map(|a| a.to_str()?.strip_prefix("--").map(|s| s.split('=').next().unwrap_or(s).to_string()))
        .collect();

    let mut injected = Vec::new();
    for (key, value) in pairs {
        if !known.contains(&key) {
            return Err(format!("unknown config key {key:?}"));
        }
        if key == "config" || !(own.contains(&key) || longs(&root).contains(&key)) {
            continue;
        }
        let excluded = EXCLUSIVE
            .iter()
            .any(|set| set.contains(&key.as_str()) && set.iter().any(|k| *k != key && given.contains(*k)));
        if !excluded {
            injected.push(OsString::from(format!("--{key}")));
            injected.push(OsString::from(value));
        }
    }
    let mut out = raw;
    out.splice(pos + 1..pos + 1, injected);
    Ok(out)
}

fn config_path(raw: &[OsString]) -> Option<std::path::PathBuf> {
    let mut it = raw.iter().skip(1);
    while let Some(a) = it.next() {
        let a = a.to_str()?;
        if a == "--config" {
            return it.next().map(|p| Path::new(p).to_path_buf());
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(Path::new(p).to_path_buf());
        }
    }
    None
}

/// `key = value` lines; `#` starts a comment; keys use `-` or `_` freely.
fn parse_config(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key=value", n + 1))?;
        out.push((k.trim().replace('_', "-"), v.trim().to_string()));
    }
    Ok(out)
}

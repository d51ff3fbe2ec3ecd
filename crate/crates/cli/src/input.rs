use std::io::Read;
use std::path::Path;

use anyhow::{bail, Context, Result};

use stripswap::reduction::GadgetInstance;
use stripswap::{parse_permutation, Permutation, Schedule};

/// `-` reads stdin, an existing file is read, anything else is the text itself.
pub fn read_input(arg: &str) -> Result<String> {
    if arg == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text).context("reading stdin")?;
        return Ok(text);
    }
    let path = Path::new(arg);
    if path.is_file() {
        return std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()));
    }
    Ok(arg.to_string())
}

/// Whitespace-separated values, or a JSON array of values.
pub fn load_permutation(text: &str) -> Result<Permutation> {
    let text = text.trim();
    if text.starts_with('[') {
        let values: Vec<u64> = serde_json::from_str(text).context("parsing permutation JSON")?;
        return Permutation::try_from(values).context("invalid permutation");
    }
    parse_permutation(text).with_context(|| format!("invalid permutation {text:?}"))
}

pub fn load_instance(text: &str) -> Result<GadgetInstance> {
    serde_json::from_str(text).context("parsing instance JSON")
}

pub fn load_schedule(text: &str) -> Result<Schedule> {
    serde_json::from_str(text).context("parsing schedule JSON")
}

pub enum Target {
    Permutation(Permutation),
    Instance(GadgetInstance),
    Schedule(Schedule),
}

impl Target {
    pub fn detect(text: &str) -> Result<Self> {
        let trimmed = text.trim();
        if !trimmed.starts_with('{') {
            return load_permutation(trimmed).map(Target::Permutation);
        }
        let value: serde_json::Value = serde_json::from_str(trimmed).context("parsing JSON")?;
        if value.get("tokens").is_some() {
            Ok(Target::Instance(load_instance(trimmed)?))
        } else if value.get("moves").is_some() {
            Ok(Target::Schedule(load_schedule(trimmed)?))
        } else {
            bail!("JSON input is neither an instance nor a schedule")
        }
    }
}

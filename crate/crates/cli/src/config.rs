//! Run configuration: command-line flags layered over an optional TOML file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use pm_core::analysis::{Canonical, ExploreOptions};
use pm_core::population::{Mode, RunOptions};
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config file {path}: {message}")]
    File { path: PathBuf, message: String },
    #[error("field `{field}`: {message}")]
    Field { field: &'static str, message: String },
    #[error("missing `{0}` (give it as a flag or in the config file)")]
    Missing(&'static str),
}

fn field(field: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError::Field { field, message: message.into() }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    #[default]
    Quiescent,
    Interleaved,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Quiescent => Mode::Quiescent,
            ModeArg::Interleaved => Mode::Interleaved,
        }
    }
}

/// Flags shared by every subcommand. Each may also come from `--config`.
#[derive(Clone, Debug, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Flags {
    /// `mult`, `pow2`, `logp`, `ids`, `toggle`, `or`, `tm:FILE` or `table:FILE`.
    #[arg(long)]
    pub protocol: Option<String>,
    /// Explicit input string, one symbol per agent.
    #[arg(long)]
    pub input: Option<String>,
    /// Symbol counts, e.g. `a=2,b=3,c=6`.
    #[arg(long)]
    pub counts: Option<String>,
    /// Population size(s): `16`, `8,16,32` or `2..4`. Inputs are drawn per seed.
    #[arg(long)]
    pub n: Option<String>,
    /// Seeds: `7`, `1..10` (inclusive) or `1,4,9`.
    #[arg(long)]
    pub seeds: Option<String>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    #[arg(long)]
    pub max_events: Option<u64>,
    #[arg(long)]
    pub step_budget: Option<u64>,
    /// Quiet effective encounters before a run counts as converged (default 20n²).
    #[arg(long)]
    pub window: Option<u64>,
    #[arg(long)]
    pub cell_cap: Option<usize>,
    #[arg(long)]
    pub config_cap: Option<usize>,
    /// Explore populations up to relabeling.
    #[arg(long)]
    pub multiset: Option<bool>,
    /// Q-property checks stop at this r.
    #[arg(long)]
    pub r_cap: Option<u64>,
    /// Records go here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub dot: Option<PathBuf>,
    /// Per-event trace, one record per line (single seed only).
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Worker threads; 0 picks the machine's parallelism.
    #[arg(long)]
    pub jobs: Option<usize>,
}

impl Flags {
    /// Fills unset flags from `other`.
    pub fn or(self, other: Flags) -> Flags {
        Flags {
            protocol: self.protocol.or(other.protocol),
            input: self.input.or(other.input),
            counts: self.counts.or(other.counts),
            n: self.n.or(other.n),
            seeds: self.seeds.or(other.seeds),
            mode: self.mode.or(other.mode),
            max_events: self.max_events.or(other.max_events),
            step_budget: self.step_budget.or(other.step_budget),
            window: self.window.or(other.window),
            cell_cap: self.cell_cap.or(other.cell_cap),
            config_cap: self.config_cap.or(other.config_cap),
            multiset: self.multiset.or(other.multiset),
            r_cap: self.r_cap.or(other.r_cap),
            out: self.out.or(other.out),
            dot: self.dot.or(other.dot),
            trace: self.trace.or(other.trace),
            jobs: self.jobs.or(other.jobs),
        }
    }

    pub fn from_toml(text: &str, path: &Path) -> Result<Flags, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::File {
            path: path.to_owned(),
            message: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Flags, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::File {
            path: path.to_owned(),
            message: e.to_string(),
        })?;
        Self::from_toml(&text, path)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InputSpec {
    Explicit(String),
    /// Drawn per `(n, seed)`.
    Random(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub protocol: String,
    pub input: InputSpec,
    pub seeds: Vec<u64>,
    pub mode: Mode,
    pub max_events: u64,
    pub step_budget: u64,
    pub window: Option<u64>,
    pub cell_cap: usize,
    pub config_cap: usize,
    pub canonical: Canonical,
    pub r_cap: u64,
    pub out: Option<PathBuf>,
    pub dot: Option<PathBuf>,
    pub trace: Option<PathBuf>,
    pub jobs: usize,
}

impl RunConfig {
    pub fn new(protocol: &str, input: InputSpec) -> Self {
        let run = RunOptions::default();
        let ex = ExploreOptions::default();
        RunConfig {
            protocol: protocol.into(),
            input,
            seeds: vec![0],
            mode: run.mode,
            max_events: run.max_events,
            step_budget: run.step_budget,
            window: None,
            cell_cap: ex.cell_cap,
            config_cap: ex.config_cap,
            canonical: Canonical::Multiset,
            r_cap: 4,
            out: None,
            dot: None,
            trace: None,
            jobs: 0,
        }
    }

    pub fn from_flags(f: Flags) -> Result<Self, ConfigError> {
        let protocol = f.protocol.ok_or(ConfigError::Missing("protocol"))?;
        let input = match (f.input, f.counts, f.n) {
            (Some(s), None, None) => InputSpec::Explicit(s),
            (None, Some(c), None) => InputSpec::Explicit(expand_counts(&c)?),
            (None, None, Some(n)) => InputSpec::Random(parse_sizes(&n)?),
            (None, None, None) => return Err(ConfigError::Missing("input, counts or n")),
            _ => return Err(field("input", "give exactly one of input, counts, n")),
        };
        if let InputSpec::Explicit(s) = &input {
            if s.chars().count() < 2 {
                return Err(field("input", "a population needs at least two agents"));
            }
        }
        let mut c = RunConfig::new(&protocol, input);
        if let Some(s) = f.seeds {
            c.seeds = parse_seeds(&s)?;
        }
        if let Some(m) = f.mode {
            c.mode = m.into();
        }
        c.max_events = f.max_events.unwrap_or(c.max_events);
        c.step_budget = f.step_budget.unwrap_or(c.step_budget);
        c.window = f.window;
        c.cell_cap = f.cell_cap.unwrap_or(c.cell_cap);
        c.config_cap = f.config_cap.unwrap_or(c.config_cap);
        if f.multiset == Some(false) {
            c.canonical = Canonical::Indexed;
        }
        c.r_cap = f.r_cap.unwrap_or(c.r_cap);
        c.out = f.out;
        c.dot = f.dot;
        c.trace = f.trace;
        c.jobs = f.jobs.unwrap_or(0);
        if c.trace.is_some() && c.seeds.len() != 1 {
            return Err(field("trace", "tracing needs exactly one seed"));
        }
        Ok(c)
    }

    pub fn run_options(&self, seed: u64) -> RunOptions {
        RunOptions {
            seed,
            max_events: self.max_events,
            mode: self.mode,
            step_budget: self.step_budget,
            window: self.window,
            record_trace: self.trace.is_some(),
        }
    }

    pub fn explore_options(&self) -> ExploreOptions {
        ExploreOptions {
            cell_cap: self.cell_cap,
            config_cap: self.config_cap,
            step_budget: self.step_budget,
            canonical: self.canonical,
        }
    }
}

/// `a=2,b=3` becomes `aabbb`; symbols in sorted order.
pub fn expand_counts(text: &str) -> Result<String, ConfigError> {
    let mut counts: BTreeMap<char, usize> = BTreeMap::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (sym, k) = part
            .split_once('=')
            .ok_or_else(|| field("counts", format!("`{part}` is not SYMBOL=COUNT")))?;
        let mut cs = sym.trim().chars();
        let sym = match (cs.next(), cs.next()) {
            (Some(c), None) => c,
            _ => return Err(field("counts", format!("`{sym}` is not a single symbol"))),
        };
        let k: usize = k.trim().parse().map_err(|_| field("counts", format!("bad count `{k}`")))?;
        if counts.insert(sym, k).is_some() {
            return Err(field("counts", format!("symbol `{sym}` given twice")));
        }
    }
    let s: String = counts.iter().flat_map(|(&c, &k)| std::iter::repeat(c).take(k)).collect();
    if s.chars().count() < 2 {
        return Err(field("counts", "counts must total at least 2"));
    }
    Ok(s)
}

fn parse_list(text: &str, name: &'static str) -> Result<Vec<u64>, ConfigError> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let num = |t: &str| t.trim().parse::<u64>().map_err(|_| field(name, format!("bad number `{t}`")));
        match part.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (num(a)?, num(b)?);
                if a > b {
                    return Err(field(name, format!("empty range `{part}`")));
                }
                out.extend(a..=b);
            }
            None => out.push(num(part)?),
        }
    }
    if out.is_empty() {
        return Err(field(name, "empty list"));
    }
    Ok(out)
}

/// `1..10` is inclusive; lists and ranges may be mixed: `1..3,8`.
pub fn parse_seeds(text: &str) -> Result<Vec<u64>, ConfigError> {
    parse_list(text, "seeds")
}

pub fn parse_sizes(text: &str) -> Result<Vec<usize>, ConfigError> {
    let sizes = parse_list(text, "n")?;
    if let Some(&bad) = sizes.iter().find(|&&n| n < 2) {
        return Err(field("n", format!("population size {bad} is below 2")));
    }
    Ok(sizes.into_iter().map(|n| n as usize).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_expand_sorted() {
        assert_eq!(expand_counts("c=2,a=1,b=3").unwrap(), "abbbcc");
        assert_eq!(expand_counts("b=0,a=2").unwrap(), "aa");
        assert!(expand_counts("a=1").is_err());
        assert!(expand_counts("a=1,a=2").is_err());
        assert!(expand_counts("ab=1").is_err());
    }

    #[test]
    fn seed_ranges_are_inclusive() {
        assert_eq!(parse_seeds("1..10").unwrap(), (1..=10).collect::<Vec<_>>());
        assert_eq!(parse_seeds("3").unwrap(), vec![3]);
        assert_eq!(parse_seeds("1..2,9").unwrap(), vec![1, 2, 9]);
        assert!(parse_seeds("5..1").is_err());
        assert!(parse_sizes("1,4").is_err());
    }

    #[test]
    fn flags_override_file() {
        let file = Flags::from_toml(
            "protocol = \"mult\"\ncounts = \"a=1,b=1,c=1\"\nseeds = \"1..3\"\nmax_events = 50\n",
            Path::new("x.toml"),
        )
        .unwrap();
        let flags = Flags {
            seeds: Some("7".into()),
            ..Flags::default()
        };
        let c = RunConfig::from_flags(flags.or(file)).unwrap();
        assert_eq!(c.protocol, "mult");
        assert_eq!(c.seeds, vec![7]);
        assert_eq!(c.max_events, 50);
        assert_eq!(c.input, InputSpec::Explicit("abc".into()));
    }

    #[test]
    fn file_errors_name_the_line() {
        let err = Flags::from_toml("protocol = \"mult\"\nbogus = 3\n", Path::new("x.toml")).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 2") && msg.contains("bogus"), "{msg}");
    }
}

//! Option resolution: command-line flags, then a `key = value` file, then
//! defaults.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};

use crate::closedform::Strategy;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

/// Options shared by every subcommand. All optional, so that the config
/// file can fill what the command line leaves out.
#[derive(Clone, Debug, Default, Args)]
pub struct Options {
    /// Family id: f1..f163, g1..g163, legendre, newton, edwards (or f/g with --n)
    #[arg(long, global = true)]
    pub family: Option<String>,
    #[arg(long, global = true)]
    pub n: Option<u64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub a: Option<i64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub beta: Option<i64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub c: Option<i64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub d: Option<i64>,
    #[arg(long, global = true)]
    pub k: Option<i64>,
    /// A single odd prime
    #[arg(long, global = true)]
    pub p: Option<u64>,
    /// Upper end of a prime range
    #[arg(long, global = true)]
    pub pmax: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub method: Option<Strategy>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Sign-rule table to use instead of the shipped one
    #[arg(long, global = true)]
    pub conventions: Option<PathBuf>,
    /// File of `key = value` lines supplying defaults for these options
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

/// Options after merging, with defaults applied where nothing was given.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub family: Option<String>,
    pub n: Option<u64>,
    pub a: i64,
    pub beta: i64,
    pub c: i64,
    pub d: i64,
    pub k: i64,
    pub p: Option<u64>,
    pub pmax: u64,
    pub pmax_ceiling: u64,
    pub method: Strategy,
    pub format: Format,
    pub seed: u64,
    pub jobs: usize,
    pub conventions: Option<PathBuf>,
}

const KEYS: [&str; 15] = [
    "family", "n", "a", "beta", "c", "d", "k", "p", "pmax", "pmax_ceiling", "method", "format", "seed", "jobs",
    "conventions",
];

pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| format!("{}:{}: expected key = value", path.display(), i + 1))?;
        let k = k.trim().replace('-', "_");
        if !KEYS.contains(&k.as_str()) {
            return Err(format!("{}:{}: unknown key `{k}`", path.display(), i + 1));
        }
        out.insert(k, v.trim().to_string());
    }
    Ok(out)
}

fn from_file<T: FromStr>(file: &BTreeMap<String, String>, key: &str) -> Result<Option<T>, String> {
    match file.get(key) {
        None => Ok(None),
        Some(v) => v.parse().map(Some).map_err(|_| format!("config: bad value `{v}` for `{key}`")),
    }
}

fn enum_from_file<T: ValueEnum>(file: &BTreeMap<String, String>, key: &str) -> Result<Option<T>, String> {
    match file.get(key) {
        None => Ok(None),
        Some(v) => T::from_str(v, true).map(Some).map_err(|_| format!("config: bad value `{v}` for `{key}`")),
    }
}

pub fn resolve(opts: &Options) -> Result<Resolved, String> {
    let file = match &opts.config {
        Some(path) => read_config_file(path)?,
        None => BTreeMap::new(),
    };
    let jobs_default = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let r = Resolved {
        family: opts.family.clone().or(from_file(&file, "family")?),
        n: opts.n.or(from_file(&file, "n")?),
        a: opts.a.or(from_file(&file, "a")?).unwrap_or(1),
        beta: opts.beta.or(from_file(&file, "beta")?).unwrap_or(2),
        c: opts.c.or(from_file(&file, "c")?).unwrap_or(1),
        d: opts.d.or(from_file(&file, "d")?).unwrap_or(2),
        k: opts.k.or(from_file(&file, "k")?).unwrap_or(1),
        p: opts.p.or(from_file(&file, "p")?),
        pmax: opts.pmax.or(from_file(&file, "pmax")?).unwrap_or(1000),
        pmax_ceiling: from_file(&file, "pmax_ceiling")?.unwrap_or(10_000),
        method: opts.method.or(enum_from_file(&file, "method")?).unwrap_or_default(),
        format: opts.format.or(enum_from_file(&file, "format")?).unwrap_or_default(),
        seed: opts.seed.or(from_file(&file, "seed")?).unwrap_or(1),
        jobs: opts.jobs.or(from_file(&file, "jobs")?).unwrap_or(jobs_default),
        conventions: opts.conventions.clone().or(from_file(&file, "conventions")?),
    };
    if r.pmax < 3 {
        return Err("--pmax must be at least 3".into());
    }
    if r.jobs == 0 {
        return Err("--jobs must be at least 1".into());
    }
    Ok(r)
}

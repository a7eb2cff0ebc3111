//! The `fmzv` command line.
//!
//! Exit status: 0 on success, 1 when any counted identity check fails, 2 on
//! usage or parameter errors.

mod render;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bernoulli::bernoulli_table;
use crate::cache::{BernoulliCache, CACHE_DIR_ENV};
use crate::error::Result;
use crate::evaluator::{eval_over_primes, map_primes, Quantity};
use crate::identities::{sum_lhs, sum_rhs, verify_suite, PrimeData, Suite, SuiteConfig};
use crate::modarith::{Prime, PrimeWindow};
use crate::words::{enumerate_index_set, nonstar_expansion, star_expansion, stuffle, Index};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    /// Non-star value as a combination of star values
    Star,
    /// Star value as a combination of non-star values
    Nonstar,
}

#[derive(Debug, Parser)]
#[command(name = "fmzv", version)]
#[command(about = "Finite multiple zeta(-star) values modulo primes and exact checks of their sum formulas")]
pub struct CliConfig {
    /// Output format
    #[arg(long, global = true, value_enum, default_value = "plain")]
    pub format: Format,

    /// Directory for cached Bernoulli tables
    #[arg(long, global = true, env = CACHE_DIR_ENV)]
    pub cache_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one word at every prime of a window
    Eval {
        /// Index as comma-separated parts, e.g. 2,1,1
        #[arg(long)]
        word: Index,
        #[arg(long)]
        star: bool,
        /// Prime window LO..HI
        #[arg(long)]
        primes: PrimeWindow,
        #[arg(long, default_value_t = 1, value_parser = parse_jobs)]
        jobs: usize,
    },

    /// Harmonic (quasi-shuffle) product of two words
    Stuffle {
        #[arg(long)]
        left: Index,
        #[arg(long)]
        right: Index,
    },

    /// Convert between star and non-star values
    Expand {
        #[arg(long)]
        word: Index,
        #[arg(long, value_enum)]
        direction: Direction,
    },

    /// Bernoulli numbers B_0..B_max modulo a prime (B_1 = +1/2)
    Bernoulli {
        #[arg(long, value_parser = parse_prime)]
        prime: Prime,
        #[arg(long)]
        max: u32,
    },

    /// Index-set sum against its closed form at every prime of a window
    Sum {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        i: u32,
        #[arg(long)]
        star: bool,
        #[arg(long)]
        primes: PrimeWindow,
        #[arg(long, default_value_t = 1, value_parser = parse_jobs)]
        jobs: usize,
    },

    /// Run identity suites over a prime window
    Verify {
        /// Comma-separated suite names, or `all`
        #[arg(long, value_parser = parse_suites)]
        suite: SuiteList,
        #[arg(long, default_value_t = 8)]
        weight_max: u32,
        #[arg(long)]
        primes: PrimeWindow,
        #[arg(long, default_value_t = 1, value_parser = parse_jobs)]
        jobs: usize,
        /// Random pairs for the insert-merge and stuffle suites
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
}

#[derive(Clone, Debug)]
pub struct SuiteList(pub Vec<Suite>);

fn parse_suites(s: &str) -> std::result::Result<SuiteList, String> {
    Suite::parse_list(s).map(SuiteList)
}

fn parse_jobs(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("worker count must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

fn parse_prime(s: &str) -> std::result::Result<Prime, String> {
    let v = s.parse::<u64>().map_err(|e| e.to_string())?;
    Prime::new(v).map_err(|e| e.to_string())
}

/// One prime of a `sum` sweep. `rhs` is absent when `k > p - 2`; `pass` is
/// absent below the `p >= k + 3` threshold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SumRow {
    pub p: u32,
    pub k: u32,
    pub n: u32,
    pub i: u32,
    pub star: bool,
    pub lhs: String,
    pub rhs: Option<String>,
    pub pass: Option<bool>,
}

fn sum_rows(k: u32, n: u32, i: u32, star: bool, window: PrimeWindow, jobs: usize) -> Result<Vec<SumRow>> {
    enumerate_index_set(k, n, i)?;
    let primes = window.primes()?;
    map_primes(&primes, jobs, |p| {
        let data = PrimeData::new(p, k);
        let lhs = sum_lhs(&data, k, n, i, star)?;
        let rhs = if k + 2 <= p.get() {
            Some(sum_rhs(&data, k, n, i, star)?)
        } else {
            None
        };
        let pass = match rhs {
            Some(rhs) if k + 3 <= p.get() => Some(lhs == rhs),
            _ => None,
        };
        Ok(SumRow {
            p: p.get(),
            k,
            n,
            i,
            star,
            lhs: lhs.to_string(),
            rhs: rhs.map(|r| r.to_string()),
            pass,
        })
    })
}

/// Parses `argv` (program name first) and runs the command, writing results
/// to `out` and diagnostics to `err`. Returns the process exit status.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match CliConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                EXIT_USAGE
            } else {
                let _ = out.write_all(text.as_bytes());
                EXIT_OK
            };
        }
    };
    match execute(&config, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn execute(config: &CliConfig, out: &mut dyn Write) -> Result<i32> {
    let format = config.format;
    match &config.command {
        Command::Eval {
            word,
            star,
            primes,
            jobs,
        } => {
            let sample = eval_over_primes(&Quantity::Word(word.clone()), *star, *primes, *jobs)?;
            render::sample(out, format, &sample)?;
            Ok(EXIT_OK)
        }
        Command::Stuffle { left, right } => {
            render::combo(out, format, &stuffle(left, right))?;
            Ok(EXIT_OK)
        }
        Command::Expand { word, direction } => {
            let c = match direction {
                Direction::Star => star_expansion(word),
                Direction::Nonstar => nonstar_expansion(word),
            };
            render::combo(out, format, &c)?;
            Ok(EXIT_OK)
        }
        Command::Bernoulli { prime, max } => {
            let table = match &config.cache_dir {
                Some(dir) => BernoulliCache::new(dir).load_or_compute(*prime, *max)?,
                None => bernoulli_table(*prime, *max)?,
            };
            render::bernoulli(out, format, &table)?;
            Ok(EXIT_OK)
        }
        Command::Sum {
            k,
            n,
            i,
            star,
            primes,
            jobs,
        } => {
            let rows = sum_rows(*k, *n, *i, *star, *primes, *jobs)?;
            render::sum(out, format, *primes, &rows)?;
            let failed = rows.iter().any(|r| r.pass == Some(false));
            Ok(if failed { EXIT_CHECK_FAILED } else { EXIT_OK })
        }
        Command::Verify {
            suite,
            weight_max,
            primes,
            jobs,
            samples,
            seed,
        } => {
            let suite_config = SuiteConfig {
                suites: suite.0.clone(),
                weight_max: *weight_max,
                window: *primes,
                workers: *jobs,
                samples: *samples,
                seed: *seed,
                cache_dir: config.cache_dir.clone(),
            };
            let report = verify_suite(&suite_config)?;
            render::report(out, format, &report)?;
            Ok(if report.all_passed() {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            })
        }
    }
}

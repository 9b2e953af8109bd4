use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use graphdim::arith::{parse_rational, Rational};
use num_traits::ToPrimitive;

#[derive(Debug, Parser)]
#[command(name = "graphdim", version, about = "A full-dimensional graph meeting each translate of a function family at most once")]
pub struct Cli {
    /// Family JSON file: {"functions": [{"coeffs": ["p/q", ...]}, ...]}. Defaults to {0}.
    #[arg(long, global = true)]
    pub family: Option<PathBuf>,

    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// F(x) truncated after N digits: exact value | 12-place decimal | digits.
    Eval {
        #[arg(long, value_parser = parse_fraction)]
        x: Rational,
        #[arg(long, value_parser = parse_count)]
        bits: u64,
    },
    /// Digits `from..=to` of F(x).
    Digits {
        #[arg(long, value_parser = parse_fraction)]
        x: Rational,
        #[arg(long, value_parser = parse_count, default_value = "1")]
        from: u64,
        #[arg(long, value_parser = parse_count)]
        to: u64,
    },
    /// Classify digit positions or count copy positions, one JSON line each.
    Partition {
        #[arg(long, value_parser = parse_count)]
        classify: Vec<u64>,
        /// |T ∩ [1,N]|.
        #[arg(long = "count-T", value_parser = parse_count)]
        count_t: Vec<u64>,
    },
    /// Verification campaigns; exit 1 if any case fails.
    Check {
        #[command(subcommand)]
        kind: CheckKind,
    },
    /// Occupied dyadic cells per level, as CSV.
    ///
    /// Box counting stands in for Hausdorff dimension: the box dimension bounds it
    /// from above, so slopes drifting towards 2 are consistent evidence only.
    Boxcount {
        /// `a..b` or `a..=b`, both inclusive.
        #[arg(long, value_parser = parse_levels, default_value = "4..12")]
        levels: RangeInclusive<u32>,
        #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
        mode: Mode,
        /// Samples per level in random mode (upper limit with --saturate).
        #[arg(long, value_parser = parse_count, default_value = "1e5")]
        samples: u64,
        /// Random mode only: double the sample count from 1024 until cells grow by < 0.1%.
        #[arg(long)]
        saturate: bool,
    },
    /// Fraction of the column of one level-N cell whose graph points land in the cell.
    Projection {
        #[arg(long = "N", value_parser = parse_count)]
        level: u64,
        #[arg(long, value_parser = parse_count)]
        col: u64,
        #[arg(long, value_parser = parse_count)]
        row: u64,
        /// Defaults to exhaustive for constant families, random otherwise.
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[arg(long, value_parser = parse_count, default_value = "1e5")]
        samples: u64,
    },
    /// CSV of (x, F_N(x)) for random 30-bit dyadic x, sorted by x.
    Export {
        #[arg(long, value_parser = parse_count, default_value = "1000")]
        points: u64,
        /// Digits of F kept per point.
        #[arg(long, value_parser = parse_count, default_value = "32")]
        bits: u64,
    },
    /// SVG scatter plot of an `export` CSV.
    Plot {
        input: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum CheckKind {
    /// Interval membership of {2^{s-1} A} and {2^{s-1} B}.
    Reading {
        #[arg(long, value_parser = parse_count, default_value = "1e4")]
        trials: u64,
    },
    /// Separation of F - f_i at the first differing digit of random pairs.
    Injective {
        #[command(flatten)]
        opts: InjectiveOpts,
    },
}

#[derive(Debug, Args)]
pub struct InjectiveOpts {
    #[arg(long, value_parser = parse_count, default_value = "1e4")]
    pub trials: u64,
    /// Random digits per point.
    #[arg(long, value_parser = parse_count, default_value = "24")]
    pub bits: u64,
    /// Pair each x with x having this digit flipped.
    #[arg(long, value_parser = parse_count)]
    pub flip_digit: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exhaustive,
    Random,
}

fn parse_fraction(text: &str) -> Result<Rational, String> {
    parse_rational(text).map_err(|e| e.to_string())
}

/// Nonnegative integer given as a fraction string (`12`, `24/2`) or as `me` notation (`1e6`).
fn parse_count(text: &str) -> Result<u64, String> {
    if let Some((m, e)) = text.split_once(['e', 'E']) {
        let m: u64 = m.parse().map_err(|_| format!("bad mantissa in {text:?}"))?;
        let e: u32 = e.parse().map_err(|_| format!("bad exponent in {text:?}"))?;
        return 10u64
            .checked_pow(e)
            .and_then(|p| p.checked_mul(m))
            .ok_or_else(|| format!("{text} does not fit in 64 bits"));
    }
    let r = parse_fraction(text)?;
    if !r.is_integer() {
        return Err(format!("{text} is not an integer"));
    }
    r.to_integer()
        .to_u64()
        .ok_or_else(|| format!("{text} is not a nonnegative 64-bit integer"))
}

fn parse_levels(text: &str) -> Result<RangeInclusive<u32>, String> {
    let level = |s: &str| -> Result<u32, String> {
        let n = parse_count(s)?;
        u32::try_from(n)
            .ok()
            .filter(|n| (1..=63).contains(n))
            .ok_or_else(|| format!("level {n} outside 1..=63"))
    };
    let (a, b) = match text.split_once("..") {
        Some((a, b)) => (level(a)?, level(b.strip_prefix('=').unwrap_or(b))?),
        None => (level(text)?, level(text)?),
    };
    if a > b {
        return Err(format!("empty level range {text}"));
    }
    Ok(a..=b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(parse_count("1e6"), Ok(1_000_000));
        assert_eq!(parse_count("24/2"), Ok(12));
        assert_eq!(parse_count("7"), Ok(7));
        assert!(parse_count("1/2").is_err());
        assert!(parse_count("-3").is_err());
        assert!(parse_count("1e30").is_err());
    }

    #[test]
    fn levels() {
        assert_eq!(parse_levels("4..12"), Ok(4..=12));
        assert_eq!(parse_levels("4..=12"), Ok(4..=12));
        assert_eq!(parse_levels("9"), Ok(9..=9));
        assert!(parse_levels("12..4").is_err());
        assert!(parse_levels("0..3").is_err());
    }
}

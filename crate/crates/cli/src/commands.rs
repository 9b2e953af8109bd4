use std::io::Write;

use anyhow::{bail, Context, Result};
use graphdim::arith::{to_decimal, Dyadic, Rational};
use graphdim::construction::{eval_f, y_digits};
use graphdim::dimension::{
    box_count, box_count_saturating, projection_check, BoxCountReport, GridCell, Sampler,
};
use graphdim::partition::{classify, count_t};
use graphdim::rng::{random_dyadic, trial_rng};
use graphdim::verification::{injectivity_campaign, reading_campaign, InjectivityConfig, ReadingConfig};
use graphdim::{Family, FunctionFamily};
use serde_json::json;

use crate::args::{CheckKind, Cli, Command, Mode};
use crate::{plot, Status};

/// Random digits per exported `x`.
pub const EXPORT_BITS: u64 = 30;

const EXPORT_HEADER: &str = "x_num,x_den,y_mantissa,y_scale,x_decimal,y_decimal";

/// First sample size tried by `boxcount --saturate`.
const SATURATE_INITIAL: u64 = 1024;

fn load_family(cli: &Cli) -> Result<Family> {
    match &cli.family {
        None => Ok(FunctionFamily::zero()),
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
            FunctionFamily::parse(&text).with_context(|| format!("family file {}", path.display()))
        }
    }
}

fn digit_string(digits: &[u8]) -> String {
    digits.iter().map(|d| char::from(b'0' + d)).collect()
}

pub fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<Status> {
    match &cli.command {
        Command::Eval { x, bits } => {
            let family = load_family(cli)?;
            let value = eval_f(x, *bits, &family)?.value;
            let digits = if *bits == 0 { Vec::new() } else { y_digits(x, 1, *bits, &family)? };
            writeln!(
                out,
                "{} | {} | {}",
                value,
                to_decimal(&value.to_rational(), 12),
                digit_string(&digits)
            )?;
        }
        Command::Digits { x, from, to } => {
            let family = load_family(cli)?;
            writeln!(out, "{}", digit_string(&y_digits(x, *from, *to, &family)?))?;
        }
        Command::Partition { classify: ns, count_t: counts } => {
            if ns.is_empty() && counts.is_empty() {
                bail!("partition needs --classify n or --count-T N");
            }
            for &n in ns {
                if n == 0 {
                    bail!("positions start at 1");
                }
                let mut line = serde_json::to_value(classify(n))?;
                line["n"] = json!(n);
                writeln!(out, "{line}")?;
            }
            for &n in counts {
                writeln!(out, "{}", json!({ "N": n, "count_T": count_t(n) }))?;
            }
        }
        Command::Check { kind } => {
            let report = match kind {
                CheckKind::Reading { trials } => reading_campaign(&ReadingConfig {
                    trials: *trials,
                    seed: cli.seed,
                    ..ReadingConfig::default()
                }),
                CheckKind::Injective { opts } => {
                    let family = load_family(cli)?;
                    if opts.bits == 0 || opts.flip_digit.is_some_and(|d| d == 0 || d > opts.bits) {
                        bail!("need bits >= 1 and 1 <= flip-digit <= bits");
                    }
                    injectivity_campaign(
                        &InjectivityConfig {
                            trials: opts.trials,
                            seed: cli.seed,
                            bits: opts.bits,
                            flip_digit: opts.flip_digit,
                        },
                        &family,
                    )
                }
            };
            writeln!(out, "{}", report.to_json())?;
            if !report.all_passed() {
                return Ok(Status::ChecksFailed);
            }
        }
        Command::Boxcount {
            levels,
            mode,
            samples,
            saturate,
        } => {
            let family = load_family(cli)?;
            if *saturate && *mode != Mode::Random {
                bail!("--saturate needs --mode random");
            }
            let records = levels
                .clone()
                .map(|level| match mode {
                    Mode::Exhaustive => box_count(level, Sampler::Exhaustive, &family),
                    Mode::Random if *saturate => {
                        box_count_saturating(level, cli.seed, SATURATE_INITIAL.min(*samples), *samples, &family)
                    }
                    Mode::Random => box_count(
                        level,
                        Sampler::Random {
                            samples: *samples,
                            seed: cli.seed,
                        },
                        &family,
                    ),
                })
                .collect::<graphdim::Result<Vec<_>>>()?;
            let report = BoxCountReport::new(records);
            write!(out, "{}", report.to_csv())?;
            eprintln!("note: box counting stands in for Hausdorff dimension; the box dimension is an upper bound for it");
            if let Some(slope) = report.slope {
                eprintln!("least-squares slope of log2(cells) against N: {slope:.6}");
            }
        }
        Command::Projection {
            level,
            col,
            row,
            mode,
            samples,
        } => {
            let family = load_family(cli)?;
            let level = u32::try_from(*level)
                .ok()
                .filter(|n| (1..=63).contains(n))
                .context("--N must be in 1..=63")?;
            if *col >> level != 0 || *row >> level != 0 {
                bail!("--col and --row must be below 2^{level}");
            }
            let exhaustive = match mode {
                Some(m) => *m == Mode::Exhaustive,
                None => family.is_constant(),
            };
            let sampler = if exhaustive {
                Sampler::Exhaustive
            } else {
                Sampler::Random {
                    samples: *samples,
                    seed: cli.seed,
                }
            };
            let cell = GridCell {
                level,
                column: *col,
                row: *row,
            };
            let verdict = projection_check(cell, sampler, &family)?;
            writeln!(out, "{}", serde_json::to_string(&verdict)?)?;
            if !verdict.pass {
                return Ok(Status::ChecksFailed);
            }
        }
        Command::Export { points, bits } => {
            if *points == 0 {
                bail!("--points must be at least 1");
            }
            let family = load_family(cli)?;
            write_export(out, *points, *bits, cli.seed, &family)?;
        }
        Command::Plot { input } => {
            let text = std::fs::read_to_string(input).with_context(|| format!("cannot read {}", input.display()))?;
            let points = plot::read_points(&text)?;
            out.write_all(plot::render(&points).as_bytes())?;
        }
    }
    Ok(Status::Ok)
}

fn write_export(out: &mut dyn Write, points: u64, bits: u64, seed: u64, family: &Family) -> Result<()> {
    let mut xs: Vec<Rational> = (0..points)
        .map(|t| random_dyadic(&mut trial_rng(seed, t), EXPORT_BITS))
        .collect();
    xs.sort();
    writeln!(out, "{EXPORT_HEADER}")?;
    for x in &xs {
        let y: Dyadic = eval_f(x, bits, family)?.value;
        writeln!(
            out,
            "{},{},{},{},{},{}",
            x.numer(),
            x.denom(),
            y.mantissa(),
            y.scale(),
            to_decimal(x, 12),
            to_decimal(&y.to_rational(), 12)
        )?;
    }
    Ok(())
}

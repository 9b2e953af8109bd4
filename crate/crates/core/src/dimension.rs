//! Box counting on the graph of `F` and the projection bound on dyadic squares.
//!
//! Box counting is the numerical stand-in for Hausdorff dimension here: the
//! box-counting dimension bounds the Hausdorff dimension from above, and a graph of
//! Hausdorff dimension 2 forces the occupied-cell exponent towards 2.
//!
//! For a constant family the cell of `(x, F(x))` at level `N` depends only on the digits
//! of `x` at positions `1..=N` and `n^2` for copy positions `n <= N`. Enumerating those
//! digits counts the occupied cells exactly.

use num_bigint::{BigInt, BigUint};
use num_traits::Float;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{bit, digit_window, dyadic_rational, Dyadic, Rational};
use crate::construction::{check_domain, y_digit};
use crate::error::{Error, Result};
use crate::partition::{count_t, is_copy};
use crate::rng::{random_biguint, trial_rng};
use crate::Family;

/// Largest number of free digits an exhaustive enumeration will take on.
pub const EXHAUSTIVE_LIMIT: usize = 26;

/// Extra random digits drawn below the deepest relevant position when sampling.
const SAMPLE_GUARD_BITS: u64 = 64;

/// Dyadic square `[col 2^{-N}, (col+1) 2^{-N}) x [row 2^{-N}, (row+1) 2^{-N})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GridCell {
    pub level: u32,
    pub column: u64,
    pub row: u64,
}

fn check_level(level: u32) {
    assert!((1..=63).contains(&level), "grid level must be in 1..=63");
}

/// Cell containing `(x, F(x) mod 1)`. The row comes from the exact first `level`
/// digits of `F(x)`, which the truncation never disturbs.
pub fn occupy(x: &Rational, level: u32, family: &Family) -> Result<GridCell> {
    check_level(level);
    check_domain(x)?;
    let column = digit_window(x, 1, level);
    let mut row = 0u64;
    for n in 1..=u64::from(level) {
        row = (row << 1) | u64::from(y_digit(n, x, family)?);
    }
    Ok(GridCell { level, column, row })
}

/// Digit positions of `x` that fix the level-`N` cell for a constant family:
/// `1..=N` followed by `n^2 > N` for copy positions `n <= N`, ascending.
pub fn relevant_positions(level: u32) -> Vec<u64> {
    let n = u64::from(level);
    let mut positions: Vec<u64> = (1..=n).collect();
    positions.extend((1..=n).filter(|&k| is_copy(k)).map(|k| k * k).filter(|&sq| sq > n));
    positions
}

/// Positions on which every graph point of one level-`N` cell agrees:
/// `[1,N] ∪ {n^2 : n in T ∩ [1,N]}`, ascending.
pub fn constrained_positions(level: u32) -> Vec<u64> {
    let n = u64::from(level);
    let mut positions: Vec<u64> = (1..=n)
        .chain((1..=n).filter(|&k| is_copy(k)).map(|k| k * k))
        .collect();
    positions.sort_unstable();
    positions.dedup();
    positions
}

/// How box-counting or projection points are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampler {
    /// Every assignment of the relevant digits (constant families only).
    Exhaustive,
    /// `samples` independent uniform points, trial `t` drawn from stream `t` of `seed`.
    Random { samples: u64, seed: u64 },
}

impl Sampler {
    pub fn mode_name(&self) -> &'static str {
        match self {
            Sampler::Exhaustive => "exhaustive",
            Sampler::Random { .. } => "random",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelRecord {
    pub level: u32,
    pub mode: &'static str,
    pub samples: u64,
    pub cells: u64,
}

impl LevelRecord {
    /// `log2(cells) / N`.
    pub fn ratio(&self) -> f64 {
        (self.cells as f64).log2() / f64::from(self.level)
    }
}

fn count_distinct(mut cells: Vec<GridCell>) -> u64 {
    cells.par_sort_unstable();
    cells.dedup();
    cells.len() as u64
}

fn check_exhaustive(family: &Family, free: usize) -> Result<()> {
    if !family.is_constant() {
        return Err(Error::ExhaustiveUnsupported);
    }
    if free > EXHAUSTIVE_LIMIT {
        return Err(Error::ResourceLimit {
            needed: free,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    Ok(())
}

/// `x` with digit `positions[b]` set iff bit `b` of `mask` is set, plus `base`.
fn assemble(base: &[u64], positions: &[u64], mask: u64) -> Rational {
    let chosen = positions
        .iter()
        .enumerate()
        .filter(|(b, _)| mask >> b & 1 == 1)
        .map(|(_, &p)| p);
    Dyadic::from_positions(base.iter().copied().chain(chosen)).to_rational()
}

fn column_positions(level: u32, column: u64) -> Vec<u64> {
    (1..=u64::from(level))
        .filter(|&k| column >> (u64::from(level) - k) & 1 == 1)
        .collect()
}

/// Uniform point in the column `[col 2^{-N}, (col+1) 2^{-N})` carrying `depth` random
/// digits below position `N`.
fn random_in_column(level: u32, column: u64, depth: u64, rng: &mut crate::rng::TrialRng) -> Rational {
    let tail = random_biguint(rng, depth);
    let numer = (BigUint::from(column) << depth) + tail;
    dyadic_rational(BigInt::from(numer), u64::from(level) + depth)
}

fn sample_depth(level: u32) -> u64 {
    let n = u64::from(level);
    n * n + SAMPLE_GUARD_BITS
}

fn random_point(level: u32, seed: u64, t: u64) -> Rational {
    let mut rng = trial_rng(seed, t);
    let depth = sample_depth(level);
    let bits = random_biguint(&mut rng, depth);
    dyadic_rational(BigInt::from(bits), depth)
}

fn random_cells(level: u32, seed: u64, range: std::ops::Range<u64>, family: &Family) -> Result<Vec<GridCell>> {
    range
        .into_par_iter()
        .map(|t| occupy(&random_point(level, seed, t), level, family))
        .collect()
}

/// Number of distinct level-`N` cells met by the sampled graph points.
pub fn box_count(level: u32, sampler: Sampler, family: &Family) -> Result<LevelRecord> {
    check_level(level);
    match sampler {
        Sampler::Exhaustive => {
            let positions = relevant_positions(level);
            check_exhaustive(family, positions.len())?;
            let total = 1u64 << positions.len();
            let cells = (0..total)
                .into_par_iter()
                .map(|mask| occupy(&assemble(&[], &positions, mask), level, family))
                .collect::<Result<Vec<_>>>()?;
            Ok(LevelRecord {
                level,
                mode: sampler.mode_name(),
                samples: total,
                cells: count_distinct(cells),
            })
        }
        Sampler::Random { samples, seed } => {
            let cells = random_cells(level, seed, 0..samples, family)?;
            Ok(LevelRecord {
                level,
                mode: sampler.mode_name(),
                samples,
                cells: count_distinct(cells),
            })
        }
    }
}

/// Random box count that doubles the sample size, starting at `initial`, until the
/// cell count grows by less than 0.1% or `max_samples` is reached.
///
/// The first `k` samples are the same for every run with this seed, so the result is
/// deterministic.
pub fn box_count_saturating(
    level: u32,
    seed: u64,
    initial: u64,
    max_samples: u64,
    family: &Family,
) -> Result<LevelRecord> {
    check_level(level);
    let mut cells = random_cells(level, seed, 0..initial.max(1), family)?;
    cells.par_sort_unstable();
    cells.dedup();
    let mut used = initial.max(1);
    while used < max_samples {
        let next = (used * 2).min(max_samples);
        let before = cells.len();
        cells.extend(random_cells(level, seed, used..next, family)?);
        cells.par_sort_unstable();
        cells.dedup();
        used = next;
        if ((cells.len() - before) as f64) < 0.001 * before as f64 {
            break;
        }
    }
    Ok(LevelRecord {
        level,
        mode: "random",
        samples: used,
        cells: cells.len() as u64,
    })
}

/// Least-squares line through `(x, y)` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit<T> {
    pub slope: T,
    pub intercept: T,
}

pub fn least_squares<T: Float>(points: &[(T, T)]) -> Result<LineFit<T>> {
    if points.len() < 2 {
        return Err(Error::InsufficientData { levels: points.len() });
    }
    let n = T::from(points.len()).expect("count fits the scalar");
    let mean_x = points.iter().fold(T::zero(), |acc, p| acc + p.0) / n;
    let mean_y = points.iter().fold(T::zero(), |acc, p| acc + p.1) / n;
    let (sxy, sxx) = points.iter().fold((T::zero(), T::zero()), |(sxy, sxx), &(x, y)| {
        let dx = x - mean_x;
        (sxy + dx * (y - mean_y), sxx + dx * dx)
    });
    if sxx == T::zero() {
        return Err(Error::InsufficientData { levels: 1 });
    }
    let slope = sxy / sxx;
    Ok(LineFit {
        slope,
        intercept: mean_y - slope * mean_x,
    })
}

/// Slope of `log2(cells)` against `N`.
pub fn slope_fit<T: Float>(records: &[LevelRecord]) -> Result<T> {
    let points: Vec<(T, T)> = records
        .iter()
        .map(|r| {
            let x = T::from(r.level).expect("level fits the scalar");
            let y = T::from(r.cells).expect("count fits the scalar").log2();
            (x, y)
        })
        .collect();
    least_squares(&points).map(|fit| fit.slope)
}

/// Per-level records plus the fitted slope.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxCountReport {
    pub records: Vec<LevelRecord>,
    pub slope: Option<f64>,
}

impl BoxCountReport {
    pub fn new(records: Vec<LevelRecord>) -> Self {
        let slope = slope_fit::<f64>(&records).ok();
        BoxCountReport { records, slope }
    }

    /// CSV with columns `N,mode,samples,cells,log2cells_over_N`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,mode,samples,cells,log2cells_over_N\n");
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{:.6}\n",
                r.level,
                r.mode,
                r.samples,
                r.cells,
                r.ratio()
            ));
        }
        out
    }
}

pub fn box_count_levels(levels: std::ops::RangeInclusive<u32>, sampler: Sampler, family: &Family) -> Result<BoxCountReport> {
    let records = levels
        .map(|level| box_count(level, sampler, family))
        .collect::<Result<Vec<_>>>()?;
    Ok(BoxCountReport::new(records))
}

/// `M(N) - ceil(sqrt N)`, floored at 0: the projection of one level-`N` cell's graph
/// piece covers at most `2^{-exponent}` of the cell's column.
pub fn projection_bound_exponent(level: u32) -> u64 {
    let n = u64::from(level);
    count_t(n).saturating_sub(n.isqrt() + u64::from(n.isqrt() * n.isqrt() != n))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProjectionVerdict {
    pub cell: GridCell,
    pub mode: &'static str,
    pub samples: u64,
    pub hits: u64,
    pub bound_exponent: u64,
    /// `hits / samples <= 2^{-bound_exponent}`.
    pub within_bound: bool,
    /// Every hitting point shares its digits at the constrained positions.
    pub digits_agree: bool,
    pub occupied: bool,
    pub pass: bool,
}

impl ProjectionVerdict {
    pub fn fraction(&self) -> f64 {
        if self.samples == 0 {
            0.0
        } else {
            self.hits as f64 / self.samples as f64
        }
    }
}

/// Samples `x` in the column of `cell` and measures how many graph points land in it.
///
/// In exhaustive mode the relevant digits below the column are enumerated, so `hits /
/// samples` is the exact measure of the projection within the column.
pub fn projection_check(cell: GridCell, sampler: Sampler, family: &Family) -> Result<ProjectionVerdict> {
    let level = cell.level;
    check_level(level);
    assert!(cell.column < 1u64 << level && cell.row < 1u64 << level, "cell outside the grid");
    let constrained = constrained_positions(level);
    let digits_of = |x: &Rational| -> Vec<u8> { constrained.iter().map(|&k| bit(x, k)).collect() };

    let hitting: Vec<Rational> = match sampler {
        Sampler::Exhaustive => {
            let below: Vec<u64> = relevant_positions(level)
                .into_iter()
                .filter(|&p| p > u64::from(level))
                .collect();
            check_exhaustive(family, below.len())?;
            let base = column_positions(level, cell.column);
            let hits = (0..1u64 << below.len())
                .into_par_iter()
                .map(|mask| {
                    let x = assemble(&base, &below, mask);
                    Ok((occupy(&x, level, family)? == cell).then_some(x))
                })
                .collect::<Result<Vec<_>>>()?;
            hits.into_iter().flatten().collect()
        }
        Sampler::Random { samples, seed } => {
            let depth = sample_depth(level);
            let hits = (0..samples)
                .into_par_iter()
                .map(|t| {
                    let mut rng = trial_rng(seed, t);
                    let x = random_in_column(level, cell.column, depth, &mut rng);
                    Ok((occupy(&x, level, family)? == cell).then_some(x))
                })
                .collect::<Result<Vec<_>>>()?;
            hits.into_iter().flatten().collect()
        }
    };
    let samples = match sampler {
        Sampler::Exhaustive => {
            let below = relevant_positions(level).len() - level as usize;
            1u64 << below
        }
        Sampler::Random { samples, .. } => samples,
    };

    let hits = hitting.len() as u64;
    let bound_exponent = projection_bound_exponent(level);
    let within_bound = BigUint::from(hits) << bound_exponent <= BigUint::from(samples);
    let digits_agree = match hitting.split_first() {
        None => true,
        Some((first, rest)) => {
            let reference = digits_of(first);
            rest.iter().all(|x| digits_of(x) == reference)
        }
    };
    Ok(ProjectionVerdict {
        cell,
        mode: sampler.mode_name(),
        samples,
        hits,
        bound_exponent,
        within_bound,
        digits_agree,
        occupied: hits > 0,
        pass: hits == 0 || (within_bound && digits_agree),
    })
}

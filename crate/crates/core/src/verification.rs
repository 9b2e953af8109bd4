//! Executable checks of the two digit-reading facts behind injectivity.
//!
//! Reading: for `U` avoiding `{s, s+1, s+2}`,
//! `{2^{s-1} (g_s(a) + sum_U 2^{-i} - a)}` lies in `[0,1/8] ∪ [3/4,1)` (the A-side) and
//! the same expression with `g_s(2^{-s} + a)` lies in `[1/4,5/8]` (the B-side).
//!
//! Injectivity: if `x` and `y` first differ at digit `j`, the point with `x_j = 0` puts
//! `{2^{s-1}(F - f_i)}` on the A-side and the other point on the B-side, `s = s_ij`.
//! The two sides are `1/8` apart, which absorbs the truncation error.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::One;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{bit, frac, pow2_inv, Rational};
use crate::construction::{check_domain, g, scaled_residue};
use crate::error::{Error, Result};
use crate::partition::s_of;
use crate::rng::{random_dyadic, trial_rng};
use crate::Family;

/// Extra digits evaluated past `s_ij` in the injectivity check.
pub const INJECTIVITY_MARGIN: u64 = 8;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `v ∈ [0,1/8] ∪ [3/4,1)`, endpoints closed as stated.
pub fn on_a_side(v: &Rational) -> bool {
    *v <= q(1, 8) || *v >= q(3, 4)
}

/// `v ∈ [1/4,5/8]`.
pub fn on_b_side(v: &Rational) -> bool {
    *v >= q(1, 4) && *v <= q(5, 8)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntervalVerdict {
    #[serde(serialize_with = "crate::report::display")]
    pub value: Rational,
    pub side: Side,
    pub pass: bool,
}

impl IntervalVerdict {
    fn new(value: Rational, side: Side) -> Self {
        let pass = match side {
            Side::A => on_a_side(&value),
            Side::B => on_b_side(&value),
        };
        IntervalVerdict { value, side, pass }
    }
}

/// Inputs of one reading check. `u` never meets `{s, s+1, s+2}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReadingCase {
    s: u64,
    u: BTreeSet<u64>,
    a: Rational,
}

impl ReadingCase {
    pub fn new(s: u64, u: BTreeSet<u64>, a: Rational) -> Result<Self> {
        assert!(s >= 1, "s must be positive");
        if let Some(&element) = u.iter().find(|&&k| (s..=s + 2).contains(&k)) {
            return Err(Error::HypothesisViolation { s, element });
        }
        assert!(u.iter().all(|&k| k >= 1), "U holds positive integers");
        Ok(ReadingCase { s, u, a })
    }

    pub fn s(&self) -> u64 {
        self.s
    }

    pub fn u(&self) -> &BTreeSet<u64> {
        &self.u
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }
}

impl std::fmt::Display for ReadingCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "s={} U={:?} a={}", self.s, self.u, self.a)
    }
}

/// Computes `A` and `B` exactly and reports `{2^{s-1} A}` and `{2^{s-1} B}`.
pub fn check_reading(case: &ReadingCase) -> (IntervalVerdict, IntervalVerdict) {
    let s = case.s;
    let u_sum: Rational = case.u.iter().map(|&k| pow2_inv(k)).sum();
    let a = &case.a;
    let big_a = g(s, a).to_rational() + &u_sum - a;
    let big_b = g(s, &(pow2_inv(s) + a)).to_rational() + &u_sum - a;
    let scale = Rational::from_integer(BigInt::one() << (s - 1));
    (
        IntervalVerdict::new(frac(&(&scale * big_a)), Side::A),
        IntervalVerdict::new(frac(&(&scale * big_b)), Side::B),
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub trial: u64,
    pub detail: String,
}

/// Outcome counts of a randomized campaign. `first_failure` is the failing trial with
/// the smallest index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CampaignReport {
    pub cases: u64,
    pub passes: u64,
    pub failures: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<Failure>,
}

impl CampaignReport {
    fn empty() -> Self {
        CampaignReport {
            cases: 0,
            passes: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn single(trial: u64, outcome: std::result::Result<(), String>) -> Self {
        match outcome {
            Ok(()) => CampaignReport {
                cases: 1,
                passes: 1,
                ..CampaignReport::empty()
            },
            Err(detail) => CampaignReport {
                cases: 1,
                failures: 1,
                first_failure: Some(Failure { trial, detail }),
                ..CampaignReport::empty()
            },
        }
    }

    fn merge(self, other: Self) -> Self {
        let first_failure = match (self.first_failure, other.first_failure) {
            (Some(a), Some(b)) => Some(if a.trial <= b.trial { a } else { b }),
            (a, b) => a.or(b),
        };
        CampaignReport {
            cases: self.cases + other.cases,
            passes: self.passes + other.passes,
            failures: self.failures + other.failures,
            first_failure,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failures == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Runs `trial` for indices `0..trials` in parallel and merges the outcomes.
pub fn run_campaign<F>(trials: u64, trial: F) -> CampaignReport
where
    F: Fn(u64) -> std::result::Result<(), String> + Sync,
{
    (0..trials)
        .into_par_iter()
        .map(|t| CampaignReport::single(t, trial(t)))
        .reduce(CampaignReport::empty, CampaignReport::merge)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReadingConfig {
    pub trials: u64,
    pub seed: u64,
    pub max_s: u64,
    pub max_u: u64,
}

impl Default for ReadingConfig {
    fn default() -> Self {
        ReadingConfig {
            trials: 10_000,
            seed: 42,
            max_s: 64,
            max_u: 32,
        }
    }
}

/// Draws the `trial`-th case of a reading campaign.
///
/// `s` is uniform in `1..=max_s`; each allowed position in `[1, s+2+max_u]` joins `U`
/// with probability 1/2; `a` is a random `2 max_s`-bit dyadic shifted by an integer in
/// `-3..=3`, plus `c / (3 * 2^e)` half of the time so non-dyadic values appear.
pub fn sample_reading_case(config: &ReadingConfig, trial: u64) -> ReadingCase {
    let mut rng = trial_rng(config.seed, trial);
    let s = rng.random_range(1..=config.max_s.max(1));
    let u: BTreeSet<u64> = (1..=s + 2 + config.max_u)
        .filter(|k| !(s..=s + 2).contains(k))
        .filter(|_| rng.random_bool(0.5))
        .collect();
    let mut a = random_dyadic(&mut rng, 2 * config.max_s.max(1));
    a += Rational::from_integer(BigInt::from(rng.random_range(-3i64..=3)));
    if rng.random_bool(0.5) {
        let c = rng.random_range(1i64..=5);
        let e = rng.random_range(0..=config.max_s);
        a += Rational::new(BigInt::from(c), BigInt::from(3) << e);
    }
    ReadingCase::new(s, u, a).expect("sampler avoids the reserved triple")
}

pub fn reading_campaign(config: &ReadingConfig) -> CampaignReport {
    run_campaign(config.trials, |t| {
        let case = sample_reading_case(config, t);
        match check_reading(&case) {
            (va, vb) if va.pass && vb.pass => Ok(()),
            (va, vb) => Err(format!("{case}: A-side {} B-side {}", va.value, vb.value)),
        }
    })
}

/// Result of separating `F - f_i` at two distinct points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InjectivityVerdict {
    /// First digit where the points differ.
    pub j: u64,
    pub s: u64,
    /// Digits of `F` evaluated.
    pub precision: u64,
    /// Truncated `{2^{s-1}(F - f_i)}` at the point whose digit `j` is 0.
    #[serde(serialize_with = "crate::report::display")]
    pub zero_point_value: Rational,
    #[serde(serialize_with = "crate::report::display")]
    pub one_point_value: Rational,
    pub zero_point_on_a_side: bool,
    pub one_point_on_b_side: bool,
    /// Both values sit on their sides even after widening by the truncation radius,
    /// and the widened sides are disjoint, so `F(x) - f_i(x) != F(y) - f_i(y)`.
    pub separated: bool,
}

/// First digit position where `x` and `y` differ. Terminates for distinct rationals.
pub fn first_difference(x: &Rational, y: &Rational) -> u64 {
    (1u64..)
        .find(|&k| bit(x, k) != bit(y, k))
        .expect("distinct points differ at some digit")
}

pub fn check_injectivity_pair(x: &Rational, y: &Rational, i: usize, family: &Family) -> Result<InjectivityVerdict> {
    check_domain(x)?;
    check_domain(y)?;
    family.get(i)?;
    if x == y {
        return Err(Error::DegenerateInput);
    }
    let j = first_difference(x, y);
    let s = s_of(i as u64, j);
    let precision = s + INJECTIVITY_MARGIN;
    let (zero_pt, one_pt) = if bit(x, j) == 0 { (x, y) } else { (y, x) };
    let zero_point_value = scaled_residue(zero_pt, i, s, precision, family)?;
    let one_point_value = scaled_residue(one_pt, i, s, precision, family)?;

    // The true values lie in [v, v + r).
    let r = pow2_inv(precision - s + 1);
    let a_lo_wrap = q(3, 4) - &r;
    let zero_point_on_a_side = zero_point_value <= q(1, 8) || zero_point_value >= a_lo_wrap;
    let one_point_on_b_side = one_point_value >= q(1, 4) - &r && one_point_value <= q(5, 8);
    let widened_disjoint = q(1, 8) + &r < q(1, 4) - &r && q(5, 8) + &r < q(3, 4) - &r;

    Ok(InjectivityVerdict {
        j,
        s,
        precision,
        zero_point_value,
        one_point_value,
        zero_point_on_a_side,
        one_point_on_b_side,
        separated: zero_point_on_a_side && one_point_on_b_side && widened_disjoint,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InjectivityConfig {
    pub trials: u64,
    pub seed: u64,
    /// Random digits per point.
    pub bits: u64,
    /// When set, `y` is `x` with this digit flipped instead of an independent draw.
    pub flip_digit: Option<u64>,
}

impl Default for InjectivityConfig {
    fn default() -> Self {
        InjectivityConfig {
            trials: 10_000,
            seed: 42,
            bits: 24,
            flip_digit: None,
        }
    }
}

/// Draws the `trial`-th pair `(x, y, i)`.
pub fn sample_injectivity_pair(config: &InjectivityConfig, family: &Family, trial: u64) -> (Rational, Rational, usize) {
    let mut rng = trial_rng(config.seed, trial);
    let bits = config.bits.max(1);
    let x = random_dyadic(&mut rng, bits);
    let y = match config.flip_digit {
        Some(k) => {
            let unit = pow2_inv(k);
            if bit(&x, k) == 1 {
                &x - unit
            } else {
                &x + unit
            }
        }
        None => loop {
            let y = random_dyadic(&mut rng, bits);
            if y != x {
                break y;
            }
        },
    };
    let i = rng.random_range(1..=family.len());
    (x, y, i)
}

pub fn injectivity_campaign(config: &InjectivityConfig, family: &Family) -> CampaignReport {
    run_campaign(config.trials, |t| {
        let (x, y, i) = sample_injectivity_pair(config, family, t);
        match check_injectivity_pair(&x, &y, i, family) {
            Ok(v) if v.separated => Ok(()),
            Ok(v) => Err(format!(
                "x={x} y={y} i={i} j={} zero-point {} one-point {}",
                v.j, v.zero_point_value, v.one_point_value
            )),
            Err(e) => Err(format!("x={x} y={y} i={i}: {e}")),
        }
    })
}

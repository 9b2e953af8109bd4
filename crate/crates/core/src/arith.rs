//! Exact rational and dyadic arithmetic with binary digit extraction.
//!
//! Every number in `[0,1)` is expanded as `x = sum x_k 2^{-k}` with infinitely many
//! zero digits, so dyadic rationals terminate (`0.1000...` rather than `0.0111...`).
//! Numbers outside `[0,1)` are read through their fractional part.

use std::borrow::Cow;
use std::fmt;
use std::ops::{Add, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact fraction of arbitrary-precision integers, always in lowest terms.
pub type Rational = num_rational::BigRational;

/// `{r} = r - floor(r)`, always in `[0,1)`.
pub fn frac(r: &Rational) -> Rational {
    r - r.floor()
}

/// `{r}`, borrowing `r` when it already lies in `[0,1)`.
fn unit_part(r: &Rational) -> Cow<'_, Rational> {
    if in_unit_interval(r) {
        Cow::Borrowed(r)
    } else {
        Cow::Owned(frac(r))
    }
}

/// `2^{-k}` as a rational.
pub fn pow2_inv(k: u64) -> Rational {
    Rational::new_raw(BigInt::one(), BigInt::one() << k)
}

/// `numer / 2^scale` in lowest terms. Skips the gcd, which dominates for wide values.
pub fn dyadic_rational(numer: BigInt, scale: u64) -> Rational {
    if numer.is_zero() {
        return Rational::zero();
    }
    let tz = numer.trailing_zeros().unwrap_or(0).min(scale);
    Rational::new_raw(numer >> tz, BigInt::one() << (scale - tz))
}

/// Returns `true` if `r` lies in `[0,1)`.
pub fn in_unit_interval(r: &Rational) -> bool {
    !r.is_negative() && r.numer() < r.denom()
}

fn power_of_two_exponent(q: &BigUint) -> Option<u64> {
    let tz = q.trailing_zeros()?;
    (q.bits() == tz + 1).then_some(tz)
}

/// Digits `k, k+1, ..., k+width-1` of `{r}` packed into an integer, digit `k` most
/// significant. Equals `floor(2^{k+width-1} {r}) mod 2^width`.
///
/// Cost is logarithmic in `k`, so positions in the billions are fine.
pub fn digit_window(r: &Rational, k: u64, width: u32) -> u64 {
    assert!(k >= 1, "digit positions start at 1");
    assert!((1..=63).contains(&width), "window width must be in 1..=63");
    let f = unit_part(r);
    if f.is_zero() {
        return 0;
    }
    let p = f.numer().magnitude();
    let q = f.denom().magnitude();

    if let Some(e) = power_of_two_exponent(q) {
        // {r} = p / 2^e: digit at position n is bit (e - n) of p.
        let mut w = 0u64;
        for t in 0..u64::from(width) {
            let pos = k + t;
            let d = pos <= e && p.bit(e - pos);
            w = (w << 1) | u64::from(d);
        }
        return w;
    }

    // 2^{k-1} {r} = integer + rem/q, hence the window is floor(2^width rem / q).
    let two = BigUint::from(2u8);
    let rem = (p * two.modpow(&BigUint::from(k - 1), q)) % q;
    ((rem << width) / q)
        .to_u64()
        .expect("window value fits in width bits")
}

/// `{2^shift r}` without materialising `2^shift`.
pub fn scaled_frac(r: &Rational, shift: u64) -> Rational {
    let f = unit_part(r);
    if f.is_zero() {
        return Rational::zero();
    }
    let p = f.numer().magnitude();
    let q = f.denom().magnitude();
    if let Some(e) = power_of_two_exponent(q) {
        if shift >= e {
            return Rational::zero();
        }
        let keep = e - shift;
        let mask = (BigUint::one() << keep) - 1u8;
        return dyadic_rational(BigInt::from(p & mask), keep);
    }
    let rem = (p * BigUint::from(2u8).modpow(&BigUint::from(shift), q)) % q;
    Rational::new(BigInt::from(rem), BigInt::from(q.clone()))
}

/// The `k`-th binary digit of `{r}` (positions start at 1).
pub fn bit(r: &Rational, k: u64) -> u8 {
    digit_window(r, k, 1) as u8
}

/// Digits `from..=to` of `{r}`.
pub fn bits_window(r: &Rational, from: u64, to: u64) -> Result<BitString> {
    if from == 0 || from > to {
        return Err(Error::InvalidRange { from, to });
    }
    let bits = (from..=to).map(|k| bit(r, k)).collect();
    Ok(BitString { bits, offset: from })
}

/// Parses `[+-]digits[/digits]`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let digits_only = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    let unsigned = num.strip_prefix(['+', '-']).unwrap_or(num);
    if !digits_only(unsigned) {
        return Err(Error::parse(
            format!("{text:?}"),
            "expected an optionally signed integer numerator",
        ));
    }
    let numer = BigInt::from_str(num.trim_start_matches('+'))
        .map_err(|e| Error::parse(format!("{text:?}"), e.to_string()))?;
    let denom = match den {
        None => BigInt::one(),
        Some(d) if digits_only(d) => BigInt::from_str(d).expect("validated digits"),
        Some(_) => {
            return Err(Error::parse(
                format!("{text:?}"),
                "expected unsigned digits after '/'",
            ))
        }
    };
    if denom.is_zero() {
        return Err(Error::parse(format!("{text:?}"), "zero denominator"));
    }
    Ok(Rational::new(numer, denom))
}

/// Decimal expansion rounded half away from zero to `places` digits.
pub fn to_decimal(r: &Rational, places: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10u8), places);
    let scaled = r.abs() * Rational::from_integer(scale.clone());
    let rounded = (scaled + Rational::new(BigInt::one(), BigInt::from(2u8))).floor();
    let n = rounded.to_integer();
    let (int_part, frac_part) = n.div_rem(&scale);
    let sign = if r.is_negative() && !n.is_zero() { "-" } else { "" };
    if places == 0 {
        return format!("{sign}{int_part}");
    }
    format!("{sign}{int_part}.{:0>places$}", frac_part.to_string())
}

/// A finite run of binary digits starting at position `offset`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitString {
    pub bits: Vec<u8>,
    pub offset: u64,
}

impl BitString {
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// `sum bits[i] 2^{-(offset+i)}` with `i` counted from 0.
    pub fn to_dyadic(&self) -> Dyadic {
        let last = self.offset + self.bits.len() as u64 - 1;
        let mut m = BigUint::zero();
        for (i, &b) in self.bits.iter().enumerate() {
            if b != 0 {
                m.set_bit(last - (self.offset + i as u64), true);
            }
        }
        Dyadic::new(BigInt::from(m), last)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            f.write_str(if *b == 0 { "0" } else { "1" })?;
        }
        Ok(())
    }
}

/// `mantissa * 2^{-scale}`, kept canonical: the mantissa is odd, or zero with scale 0,
/// or the scale is already 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    scale: u64,
}

impl Dyadic {
    pub fn new(mantissa: BigInt, scale: u64) -> Self {
        if mantissa.is_zero() {
            return Dyadic::zero();
        }
        let tz = mantissa.trailing_zeros().unwrap_or(0).min(scale);
        Dyadic {
            mantissa: mantissa >> tz,
            scale: scale - tz,
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mantissa: BigInt::zero(),
            scale: 0,
        }
    }

    /// `2^{-k}`.
    pub fn unit(k: u64) -> Self {
        Dyadic::new(BigInt::one(), k)
    }

    /// Dyadic whose binary digits are 1 exactly at the given positions (all >= 1).
    pub fn from_positions<I: IntoIterator<Item = u64>>(positions: I) -> Self {
        let positions: Vec<u64> = positions.into_iter().collect();
        let Some(&scale) = positions.iter().max() else {
            return Dyadic::zero();
        };
        let mut m = BigUint::zero();
        for p in positions {
            assert!(p >= 1, "digit positions start at 1");
            m.set_bit(scale - p, true);
        }
        Dyadic::new(BigInt::from(m), scale)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn scale(&self) -> u64 {
        self.scale
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn to_rational(&self) -> Rational {
        dyadic_rational(self.mantissa.clone(), self.scale)
    }

    /// `None` unless the denominator of `r` is a power of two.
    pub fn from_rational(r: &Rational) -> Option<Self> {
        let e = power_of_two_exponent(r.denom().magnitude())?;
        Some(Dyadic::new(r.numer().clone(), e))
    }

    fn aligned(&self, scale: u64) -> BigInt {
        &self.mantissa << (scale - self.scale)
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;

    fn add(self, rhs: &Dyadic) -> Dyadic {
        let scale = self.scale.max(rhs.scale);
        Dyadic::new(self.aligned(scale) + rhs.aligned(scale), scale)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;

    fn sub(self, rhs: &Dyadic) -> Dyadic {
        let scale = self.scale.max(rhs.scale);
        Dyadic::new(self.aligned(scale) - rhs.aligned(scale), scale)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let scale = self.scale.max(other.scale);
        self.aligned(scale).cmp(&other.aligned(scale))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.mantissa, self.scale)
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    /// Parses the `m/2^k` form written by `Display`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::parse(format!("{s:?}"), "expected m/2^k");
        let (m, k) = s.trim().split_once("/2^").ok_or_else(bad)?;
        let mantissa = BigInt::from_str(m).map_err(|_| bad())?;
        let scale = k.parse::<u64>().map_err(|_| bad())?;
        Ok(Dyadic::new(mantissa, scale))
    }
}

/// Nearest double, for cross-checks and plotting only.
pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

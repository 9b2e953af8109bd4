//! The function `F` and its building blocks.
//!
//! `F(x) = sum_{n in T} x_{n^2} 2^{-n} + sum_{i,j} h_ij(x)` where
//! `h_ij(x) = g_{s_ij}(f_i(x) + x_j 2^{-s_ij})` and `g_s` reads digits `s, s+1`.
//! Every summand occupies its own digit positions, so the `n`-th digit of `F(x)` can
//! be read off directly ([`y_digit`]) and truncating after `N` digits leaves a tail
//! in `[0, 2^{-N})`.
//!
//! Only `f_1, ..., f_m` of a finite family contribute; triples of pairs with `i > m`
//! hold zeros.

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde::Serialize;

use crate::arith::{bit, digit_window, dyadic_rational, frac, in_unit_interval, scaled_frac, Dyadic, Rational};
use crate::error::{Error, Result};
use crate::partition::{classify, s_of, s_of_index, unpair, Class};
use crate::Family;

/// `value <= F(x) < value + 2^{-tail_exponent}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TruncatedValue {
    #[serde(serialize_with = "crate::report::display")]
    pub value: Dyadic,
    pub tail_exponent: u64,
}

impl TruncatedValue {
    pub fn upper(&self) -> Rational {
        self.value.to_rational() + crate::arith::pow2_inv(self.tail_exponent)
    }
}

pub(crate) fn check_domain(x: &Rational) -> Result<()> {
    if in_unit_interval(x) {
        Ok(())
    } else {
        Err(Error::Domain { value: x.to_string() })
    }
}

/// `g_s(a) = a_s 2^{-s} + a_{s+1} 2^{-s-1}`, digits taken from `{a}`.
pub fn g(s: u64, a: &Rational) -> Dyadic {
    Dyadic::new(BigInt::from(digit_window(a, s, 2)), s + 1)
}

/// Digits `(s_ij, s_ij+1)` of `h_ij(x)` as a two-bit integer.
///
/// Adding `2^{-s}` to `{f}` adds 2 to `floor(2^{s+1} {f})`; wrapping past 1 only
/// removes a multiple of 4, so the digit pair is `(window + 2 x_j) mod 4`.
fn h_pair(i: u64, j: u64, x: &Rational, family: &Family) -> Result<u64> {
    let s = s_of(i, j);
    let f = family.eval(i as usize, x)?;
    Ok((digit_window(&f, s, 2) + 2 * u64::from(bit(x, j))) & 3)
}

/// `h_ij(x)`; nonzero only at digits `s_ij` and `s_ij + 1`.
pub fn h(i: u64, j: u64, x: &Rational, family: &Family) -> Result<Dyadic> {
    let w = h_pair(i, j, x, family)?;
    Ok(Dyadic::new(BigInt::from(w), s_of(i, j) + 1))
}

/// The `n`-th binary digit of `F(x)`.
pub fn y_digit(n: u64, x: &Rational, family: &Family) -> Result<u8> {
    check_domain(x)?;
    Ok(match classify(n) {
        Class::Copy => {
            let sq = n.checked_mul(n).expect("digit position squared overflows u64");
            bit(x, sq)
        }
        Class::Triple { i, j, position } => {
            if position == 2 || i > family.len() as u64 {
                0
            } else {
                let w = h_pair(i, j, x, family)?;
                if position == 0 {
                    (w >> 1) as u8
                } else {
                    (w & 1) as u8
                }
            }
        }
    })
}

/// Digits `from..=to` of `F(x)`.
pub fn y_digits(x: &Rational, from: u64, to: u64, family: &Family) -> Result<Vec<u8>> {
    if from == 0 || from > to {
        return Err(Error::InvalidRange { from, to });
    }
    (from..=to).map(|n| y_digit(n, x, family)).collect()
}

/// `F(x)` truncated after digit `n`.
pub fn eval_f(x: &Rational, n: u64, family: &Family) -> Result<TruncatedValue> {
    check_domain(x)?;
    let mut m = BigUint::zero();
    for k in 1..=n {
        if y_digit(k, x, family)? == 1 {
            m.set_bit(n - k, true);
        }
    }
    Ok(TruncatedValue {
        value: Dyadic::new(BigInt::from(m), n),
        tail_exponent: n,
    })
}

/// Second route to the truncated value: the copy series and the `h_ij` terms summed
/// separately, with triples enumerated by pair index rather than by classifying
/// positions. Must agree with [`eval_f`].
pub fn eval_f_by_terms(x: &Rational, n: u64, family: &Family) -> Result<Dyadic> {
    check_domain(x)?;
    let mut reserved = std::collections::HashSet::new();
    let mut h_sum = Dyadic::zero();
    let mut k = 1u64;
    while s_of_index(k) <= n {
        let s = s_of_index(k);
        reserved.extend([s, s + 1, s + 2]);
        let (i, j) = unpair(k);
        if i <= family.len() as u64 {
            let term = h(i, j, x, family)?;
            // keep only digits at positions <= n
            let kept = if s + 1 > n {
                let w = digit_window(&term.to_rational(), s, 1);
                Dyadic::new(BigInt::from(w), s)
            } else {
                term
            };
            h_sum = &h_sum + &kept;
        }
        k += 1;
    }
    let mut copy_sum = Dyadic::zero();
    for pos in (1..=n).filter(|p| !reserved.contains(p)) {
        if bit(x, pos * pos) == 1 {
            copy_sum = &copy_sum + &Dyadic::unit(pos);
        }
    }
    Ok(&copy_sum + &h_sum)
}

/// `F_n(x) - f_i(x)` together with the width `2^{-n}` of its tail bracket.
pub fn f_minus_f(x: &Rational, i: usize, n: u64, family: &Family) -> Result<(Rational, Rational)> {
    let fi = family.eval(i, x)?;
    let fx = eval_f(x, n, family)?;
    Ok((fx.value.to_rational() - fi, crate::arith::pow2_inv(n)))
}

/// `{2^{s-1} (F_n(x) - f_i(x))}` for `n >= s`, reading only digits `s..=n` of `F`.
///
/// Digits before `s` contribute integers after scaling, so positions as large as
/// `s_ij` for big pair indices stay cheap.
pub fn scaled_residue(x: &Rational, i: usize, s: u64, n: u64, family: &Family) -> Result<Rational> {
    assert!(s >= 1 && n >= s, "need 1 <= s <= n");
    let fi = family.eval(i, x)?;
    let mut w = BigUint::zero();
    for k in s..=n {
        w <<= 1u8;
        if y_digit(k, x, family)? == 1 {
            w += 1u8;
        }
    }
    let head = dyadic_rational(BigInt::from(w), n - s + 1);
    Ok(frac(&(head - scaled_frac(&fi, s - 1))))
}

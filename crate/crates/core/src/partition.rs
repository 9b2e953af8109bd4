//! The fixed partition of the positive integers into copy positions `T` and reserved
//! triples `S_ij = {s_ij, s_ij+1, s_ij+2}`.
//!
//! Pairs are indexed by the Cantor diagonal `pi(i,j) = (i+j-1)(i+j-2)/2 + i` and the
//! k-th triple starts at `(k+1)^3`. Consecutive cubes differ by at least 7, so the
//! triples never touch, and at most `3 N^{1/3}` integers in `[1,N]` fall outside `T`.

use serde::Serialize;

/// What a digit position is used for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum Class {
    /// `n` is in `T`: digit `n` of `F(x)` copies digit `n^2` of `x`.
    Copy,
    /// `n = s_ij + position`.
    Triple { i: u64, j: u64, position: u8 },
}

/// Cantor pairing, a bijection from ordered pairs of positive integers onto the positive integers.
pub fn pair_index(i: u64, j: u64) -> u64 {
    assert!(i >= 1 && j >= 1, "pair indices start at 1");
    let d = i + j - 1;
    d * (d - 1) / 2 + i
}

/// Inverse of [`pair_index`].
pub fn unpair(k: u64) -> (u64, u64) {
    assert!(k >= 1, "pair indices start at 1");
    // smallest d with d(d+1)/2 >= k
    let mut d = ((((8 * k as u128 + 1) as f64).sqrt() - 1.0) / 2.0).floor() as u64;
    while d * (d + 1) / 2 < k {
        d += 1;
    }
    while d > 1 && (d - 1) * d / 2 >= k {
        d -= 1;
    }
    let i = k - d * (d - 1) / 2;
    (i, d + 1 - i)
}

/// First element of the triple reserved for `(i, j)`.
pub fn s_of(i: u64, j: u64) -> u64 {
    s_of_index(pair_index(i, j))
}

/// First element of the `k`-th triple, `(k+1)^3`.
pub fn s_of_index(k: u64) -> u64 {
    (k + 1)
        .checked_pow(3)
        .expect("triple position overflows u64")
}

/// Largest `c` with `c^3 <= n`.
pub fn icbrt(n: u64) -> u64 {
    let mut c = (n as f64).cbrt().round() as u64;
    while c.checked_pow(3).is_none_or(|v| v > n) {
        c -= 1;
    }
    while (c + 1).checked_pow(3).is_some_and(|v| v <= n) {
        c += 1;
    }
    c
}

/// Classifies `n >= 1` as a copy position or a triple member.
pub fn classify(n: u64) -> Class {
    assert!(n >= 1, "positions start at 1");
    let c = icbrt(n);
    let offset = n - c * c * c;
    if c >= 2 && offset <= 2 {
        let (i, j) = unpair(c - 1);
        Class::Triple {
            i,
            j,
            position: offset as u8,
        }
    } else {
        Class::Copy
    }
}

pub fn is_copy(n: u64) -> bool {
    classify(n) == Class::Copy
}

/// `M(N) = |[1,N] ∩ T|`.
pub fn count_t(n: u64) -> u64 {
    let mut reserved = 0;
    let mut c = 2u64;
    while let Some(start) = c.checked_pow(3).filter(|&s| s <= n) {
        reserved += (n - start + 1).min(3);
        c += 1;
    }
    n - reserved
}

/// Copy positions in `[1, n]`, ascending.
pub fn copy_positions(n: u64) -> impl Iterator<Item = u64> {
    (1..=n).filter(|&k| is_copy(k))
}

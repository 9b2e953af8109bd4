//! Box counts for the zero family against independent oracles: brute-force
//! enumeration of every digit pattern at small levels, and the closed-form count
//! `2^{N + |{n in T ∩ [1,N] : n^2 > N}|}` with `T` rebuilt from the cube placement.

use std::collections::BTreeSet;

use graphdim::arith::Rational;
use graphdim::construction::eval_f_by_terms;
use graphdim::dimension::{box_count, relevant_positions, slope_fit, LevelRecord, Sampler};
use graphdim::FunctionFamily;
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

fn reserved(n: u64) -> bool {
    (2u64..).take_while(|c| c * c * c <= n).any(|c| n - c * c * c <= 2)
}

fn free_digits(level: u64) -> u64 {
    (1..=level).filter(|&k| !reserved(k) && k * k > level).count() as u64
}

fn formula_cells(level: u64) -> u64 {
    1 << (level + free_digits(level))
}

#[test]
fn brute_force_small_levels() {
    let zero = FunctionFamily::zero();
    for level in 1..=4u64 {
        let depth = level * level;
        let mut cells = BTreeSet::new();
        for m in 0u64..1 << depth {
            let x = Rational::new(BigInt::from(m), BigInt::one() << depth);
            let column = m >> (depth - level);
            let y = eval_f_by_terms(&x, level, &zero).unwrap().to_rational();
            let row = (y * Rational::from_integer(BigInt::one() << level)).to_integer();
            cells.insert((column, row.to_u64().unwrap()));
        }
        let counted = box_count(level as u32, Sampler::Exhaustive, &zero).unwrap();
        assert_eq!(counted.cells, cells.len() as u64, "level {level}");
        assert_eq!(counted.cells, formula_cells(level), "level {level}");
    }
}

#[test]
fn formula_matches_enumeration_through_level_ten() {
    let zero = FunctionFamily::zero();
    for level in 1..=10u32 {
        let rec = box_count(level, Sampler::Exhaustive, &zero).unwrap();
        assert_eq!(rec.cells, formula_cells(u64::from(level)), "level {level}");
        assert_eq!(rec.samples, rec.cells);
    }
    assert_eq!(formula_cells(9), 1 << 13);
    assert_eq!(formula_cells(12), 1 << 18);
}

#[test]
fn random_sampling_recovers_exhaustive_counts() {
    // 2^{B+5} draws leave about 2^B e^{-32} cells unseen in expectation.
    let zero = FunctionFamily::zero();
    for level in 1..=10u32 {
        let free = relevant_positions(level).len() as u32;
        let exact = box_count(level, Sampler::Exhaustive, &zero).unwrap();
        let sampled = box_count(
            level,
            Sampler::Random {
                samples: 1 << (free + 5),
                seed: 2024,
            },
            &zero,
        )
        .unwrap();
        assert_eq!(sampled.cells, exact.cells, "level {level}");
    }
}

#[test]
fn random_counts_never_exceed_exhaustive() {
    let fam = FunctionFamily::from_coeff_strs(&[&["7/9"], &["-1/5"]]).unwrap();
    for level in [3u32, 6, 8] {
        let exact = box_count(level, Sampler::Exhaustive, &fam).unwrap();
        let sampled = box_count(level, Sampler::Random { samples: 4096, seed: 11 }, &fam).unwrap();
        assert!(sampled.cells <= exact.cells);
    }
}

#[test]
fn fitted_slope_over_levels_six_to_twelve() {
    // log2 cells = N + free(N) = 10, 12, 13, 13, 14, 16, 18 for N = 6..12,
    // so the least-squares slope is 33/28.
    let records: Vec<LevelRecord> = (6..=12u64)
        .map(|level| LevelRecord {
            level: level as u32,
            mode: "exhaustive",
            samples: formula_cells(level),
            cells: formula_cells(level),
        })
        .collect();
    let slope = slope_fit::<f64>(&records).unwrap();
    assert!((slope - 33.0 / 28.0).abs() < 1e-12, "{slope}");
}

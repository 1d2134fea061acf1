use multidraw_core::gf2::{
    full_rank_hits, full_rank_probability, kept_rows, BitMatrix, BitVector, Eliminator, SolveStatus,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Matrices in these oracles are small enough to hold each row in a u8.

fn matrix_from_rows(cols: usize, rows: &[u8]) -> BitMatrix {
    let rows: Vec<BitVector> = rows
        .iter()
        .map(|&r| BitVector::from_bools(&(0..cols).map(|j| r >> j & 1 == 1).collect::<Vec<_>>()))
        .collect();
    BitMatrix::from_rows(cols, &rows)
}

fn brute_rank(cols: usize, rows: &[u8]) -> usize {
    // span size is 2^rank
    let mut span = std::collections::HashSet::new();
    for mask in 0u32..1 << rows.len() {
        let v = rows
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .fold(0u8, |acc, (_, &r)| acc ^ r);
        span.insert(v);
    }
    let _ = cols;
    span.len().trailing_zeros() as usize
}

fn brute_solutions(cols: usize, rows: &[u8], y: u8) -> Vec<u8> {
    (0u8..1 << cols)
        .filter(|&x| {
            rows.iter()
                .enumerate()
                .all(|(i, &r)| ((r & x).count_ones() & 1) as u8 == y >> i & 1)
        })
        .collect()
}

fn to_u8(v: &BitVector) -> u8 {
    (0..v.len()).fold(0, |acc, j| acc | (v.get(j) as u8) << j)
}

fn y_vec(len: usize, y: u8) -> BitVector {
    BitVector::from_bools(&(0..len).map(|i| y >> i & 1 == 1).collect::<Vec<_>>())
}

fn check_against_oracle(rows_n: usize, cols: usize, rows: &[u8]) {
    let a = matrix_from_rows(cols, rows);
    let rank = a.rank();
    assert_eq!(rank, brute_rank(cols, rows), "rank of {rows:?}");
    assert!(rank <= rows_n.min(cols));
    for y in 0u8..1 << rows_n {
        let sols = brute_solutions(cols, rows, y);
        let report = a.solve(&y_vec(rows_n, y));
        match sols.len() {
            0 => {
                assert_eq!(report.status, SolveStatus::Inconsistent);
                assert!(report.witness.is_none());
            }
            1 => {
                assert_eq!(report.status, SolveStatus::Unique);
                assert_eq!(to_u8(&report.witness.unwrap()), sols[0]);
            }
            _ => {
                assert_eq!(report.status, SolveStatus::Multiple);
                assert!(sols.contains(&to_u8(&report.witness.unwrap())));
            }
        }
    }
}

#[test]
fn every_matrix_up_to_3x3_matches_enumeration() {
    for rows_n in 0..=3 {
        for cols in 1..=3 {
            let count = 1usize << (rows_n * cols);
            for code in 0..count {
                let rows: Vec<u8> = (0..rows_n)
                    .map(|i| (code >> (i * cols) & ((1 << cols) - 1)) as u8)
                    .collect();
                check_against_oracle(rows_n, cols, &rows);
            }
        }
    }
}

#[test]
fn random_4x4_and_4x3_match_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    for _ in 0..1000 {
        let rows: Vec<u8> = (0..4).map(|_| rng.gen_range(0..16)).collect();
        check_against_oracle(4, 4, &rows);
        let rows: Vec<u8> = (0..4).map(|_| rng.gen_range(0..8)).collect();
        check_against_oracle(4, 3, &rows);
    }
}

#[test]
fn three_by_three_product_example() {
    let a: BitMatrix = matrix_from_rows(3, &[0b011, 0b110, 0b101]);
    let x: BitVector = "111".parse().unwrap();
    assert!(a.mul_vec(&x).is_zero());
}

#[test]
fn random_density_is_near_half() {
    let a = BitMatrix::random(256, 256, &mut ChaCha8Rng::seed_from_u64(9));
    let ones: usize = (0..256).map(|r| a.row(r).count_ones()).sum();
    let density = ones as f64 / 65536.0;
    assert!((0.47..=0.53).contains(&density), "{density}");
}

#[test]
fn empty_and_seeded_matrices() {
    let a = BitMatrix::random(0, 5, &mut ChaCha8Rng::seed_from_u64(1));
    assert_eq!((a.rows(), a.cols()), (0, 5));
    let b = BitMatrix::random(64, 64, &mut ChaCha8Rng::seed_from_u64(42));
    let c = BitMatrix::random(64, 64, &mut ChaCha8Rng::seed_from_u64(42));
    assert_eq!(b, c);
}

#[test]
fn exact_product_matches_monte_carlo() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let trials = 4000;
    for b in [20usize, 100] {
        for delta in [0.0, 0.1, 0.5] {
            let exact = full_rank_probability(b, kept_rows(b, delta));
            let hits = full_rank_hits(b, delta, trials, &mut rng);
            let est = hits as f64 / trials as f64;
            let se = (exact * (1.0 - exact) / trials as f64).sqrt();
            let tol = 4.0 * se.max(1.0 / trials as f64);
            assert!((est - exact).abs() <= tol, "B={b} delta={delta}: {est} vs {exact}");
        }
    }
}

#[test]
fn half_rows_product_is_one() {
    // 1 - prod_{i=101}^{200}(1 - 2^-i) < 2^-99
    let p = full_rank_probability(200, kept_rows(200, 0.5));
    assert!(1.0 - p < 2f64.powi(-99) + f64::EPSILON);
}

fn arb_matrix(max: usize) -> impl Strategy<Value = BitMatrix> {
    (0..=max, 1..=max, any::<u64>())
        .prop_map(|(r, c, seed)| BitMatrix::random(r, c, &mut ChaCha8Rng::seed_from_u64(seed)))
}

proptest! {
    #[test]
    fn rank_bounded_by_shape(a in arb_matrix(70)) {
        prop_assert!(a.rank() <= a.rows().min(a.cols()));
    }

    #[test]
    fn rank_does_not_mutate(a in arb_matrix(40)) {
        let copy = a.clone();
        let _ = a.rank();
        let _ = a.solve(&BitVector::zeros(a.rows()));
        prop_assert_eq!(a, copy);
    }

    #[test]
    fn subset_rank_never_grows(a in arb_matrix(40), picks in proptest::collection::vec(any::<usize>(), 0..50)) {
        let idx: Vec<usize> = if a.rows() == 0 { vec![] } else { picks.iter().map(|i| i % a.rows()).collect() };
        prop_assert!(a.select_rows(&idx).rank() <= a.rank());
    }

    #[test]
    fn unique_solution_reproduces_rhs(a in arb_matrix(30), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = BitVector::random(a.cols(), &mut rng);
        let y = if rng.gen() { a.mul_vec(&x) } else { BitVector::random(a.rows(), &mut rng) };
        let r = a.solve(&y);
        match r.status {
            SolveStatus::Unique => {
                prop_assert_eq!(a.rank(), a.cols());
                prop_assert_eq!(a.mul_vec(r.witness.as_ref().unwrap()), y);
            }
            SolveStatus::Multiple => {
                prop_assert!(a.rank() < a.cols());
                prop_assert_eq!(a.mul_vec(r.witness.as_ref().unwrap()), y);
            }
            SolveStatus::Inconsistent => prop_assert!(r.witness.is_none()),
        }
    }

    #[test]
    fn padding_bits_stay_zero(len in 0usize..200, seed in any::<u64>()) {
        let v = BitVector::random(len, &mut ChaCha8Rng::seed_from_u64(seed));
        let rem = len % 64;
        if rem != 0 {
            prop_assert_eq!(v.words().last().unwrap() >> rem, 0);
        }
        prop_assert_eq!(v.words().len(), len.div_ceil(64));
        let w = BitVector::from_words(len, vec![u64::MAX; len.div_ceil(64)]);
        prop_assert_eq!(w.count_ones(), len);
    }

    #[test]
    fn eliminator_rank_matches_batch(a in arb_matrix(50)) {
        let mut e = Eliminator::new(a.cols());
        for r in 0..a.rows() {
            e.absorb(a.row_words(r), false);
        }
        prop_assert_eq!(e.rank(), a.rank());
        prop_assert!(e.is_consistent());
    }
}

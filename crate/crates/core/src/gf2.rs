//! Dense linear algebra over GF(2).
//!
//! Vectors and matrix rows are packed into `u64` words, least significant bit
//! first. Bits past the logical length are kept at zero, so derived equality,
//! ordering and hashing only ever see addressable bits.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::Rng;

const WORD_BITS: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

#[inline]
fn tail_mask(bits: usize) -> u64 {
    match bits % WORD_BITS {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

fn random_words<R: Rng + ?Sized>(words: &mut [u64], bits: usize, rng: &mut R) {
    for w in words.iter_mut() {
        *w = rng.gen();
    }
    if let Some(last) = words.last_mut() {
        *last &= tail_mask(bits);
    }
}

/// Error returned when parsing a bit string that contains something other
/// than `0`, `1` or whitespace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParseBitsError {
    pub position: usize,
}

impl fmt::Display for ParseBitsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid bit character at position {}", self.position)
    }
}

impl core::error::Error for ParseBitsError {}

/// A fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// Builds a vector from packed words, clearing anything past `len`.
    pub fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        words.resize(words_for(len), 0);
        if let Some(last) = words.last_mut() {
            *last &= tail_mask(len);
        }
        Self { len, words }
    }

    /// Uniformly random vector: every bit is an independent fair coin.
    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        let mut v = Self::zeros(len);
        random_words(&mut v.words, len, rng);
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// # Panics
    ///
    /// Panics if `index >= len`.
    #[inline]
    pub fn get(&self, index: usize) -> bool {
        assert!(
            index < self.len,
            "bit index {index} out of range for length {}",
            self.len
        );
        (self.words[index / WORD_BITS] >> (index % WORD_BITS)) & 1 == 1
    }

    /// # Panics
    ///
    /// Panics if `index >= len`.
    #[inline]
    pub fn set(&mut self, index: usize, value: bool) {
        assert!(
            index < self.len,
            "bit index {index} out of range for length {}",
            self.len
        );
        let mask = 1u64 << (index % WORD_BITS);
        let w = &mut self.words[index / WORD_BITS];
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// # Panics
    ///
    /// Panics on length mismatch.
    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Copies `len` bits starting at `start`.
    pub fn slice(&self, start: usize, len: usize) -> BitVector {
        assert!(start + len <= self.len, "slice out of range");
        let mut out = BitVector::zeros(len);
        for i in 0..len {
            if self.get(start + i) {
                out.set(i, true);
            }
        }
        out
    }

    /// Concatenates vectors in order.
    pub fn concat<'a, I: IntoIterator<Item = &'a BitVector>>(parts: I) -> BitVector {
        let parts: Vec<&BitVector> = parts.into_iter().collect();
        let total = parts.iter().map(|p| p.len).sum();
        let mut out = BitVector::zeros(total);
        let mut at = 0;
        for p in parts {
            for i in 0..p.len {
                if p.get(i) {
                    out.set(at + i, true);
                }
            }
            at += p.len;
        }
        out
    }
}

impl FromStr for BitVector {
    type Err = ParseBitsError;

    /// Parses strings such as `"0110"` or `"0 1 1 0"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut bits = Vec::new();
        for (position, c) in s.chars().enumerate() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                c if c.is_whitespace() => {}
                _ => return Err(ParseBitsError { position }),
            }
        }
        Ok(BitVector::from_bools(&bits))
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// A dense row-major matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Matrix with i.i.d. Bernoulli(1/2) entries. The same generator state
    /// always produces the same matrix.
    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        let mut m = Self::zeros(rows, cols);
        if m.stride > 0 {
            for chunk in m.data.chunks_exact_mut(m.stride) {
                random_words(chunk, cols, rng);
            }
        }
        m
    }

    /// # Panics
    ///
    /// Panics if the rows do not all have length `cols`.
    pub fn from_rows(cols: usize, rows: &[BitVector]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "row {i} has {} bits, expected {cols}", r.len());
            m.row_words_mut(i).copy_from_slice(r.words());
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        assert!(row < self.rows && col < self.cols, "entry ({row}, {col}) out of range");
        (self.data[row * self.stride + col / WORD_BITS] >> (col % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        assert!(row < self.rows && col < self.cols, "entry ({row}, {col}) out of range");
        let mask = 1u64 << (col % WORD_BITS);
        let w = &mut self.data[row * self.stride + col / WORD_BITS];
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn row_words(&self, row: usize) -> &[u64] {
        &self.data[row * self.stride..(row + 1) * self.stride]
    }

    #[inline]
    fn row_words_mut(&mut self, row: usize) -> &mut [u64] {
        &mut self.data[row * self.stride..(row + 1) * self.stride]
    }

    pub fn row(&self, row: usize) -> BitVector {
        assert!(row < self.rows, "row {row} out of range");
        BitVector::from_words(self.cols, self.row_words(row).to_vec())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// Computes `A x` over GF(2).
    ///
    /// # Panics
    ///
    /// Panics if `x.len() != self.cols()`.
    pub fn mul_vec(&self, x: &BitVector) -> BitVector {
        assert_eq!(
            x.len(),
            self.cols,
            "dimension mismatch: {}x{} matrix times length-{} vector",
            self.rows,
            self.cols,
            x.len()
        );
        let mut out = BitVector::zeros(self.rows);
        for r in 0..self.rows {
            let parity = self
                .row_words(r)
                .iter()
                .zip(x.words())
                .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
                & 1;
            if parity == 1 {
                out.set(r, true);
            }
        }
        out
    }

    /// Row-space dimension, by elimination on a private copy.
    pub fn rank(&self) -> usize {
        let stride = self.stride;
        let mut work = self.data.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let w = col / WORD_BITS;
            let bit = 1u64 << (col % WORD_BITS);
            let Some(pivot) = (rank..self.rows).find(|&r| work[r * stride + w] & bit != 0) else {
                continue;
            };
            if pivot != rank {
                for k in 0..stride {
                    work.swap(pivot * stride + k, rank * stride + k);
                }
            }
            for r in rank + 1..self.rows {
                if work[r * stride + w] & bit != 0 {
                    for k in w..stride {
                        let v = work[rank * stride + k];
                        work[r * stride + k] ^= v;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Solves `A x = y`, reporting whether the solution is unique, one of
    /// many, or absent.
    ///
    /// # Panics
    ///
    /// Panics if `y.len() != self.rows()`.
    pub fn solve(&self, y: &BitVector) -> SolveReport {
        assert_eq!(
            y.len(),
            self.rows,
            "dimension mismatch: {} rows but right-hand side of length {}",
            self.rows,
            y.len()
        );
        let mut elim = Eliminator::new(self.cols);
        for r in 0..self.rows {
            elim.absorb(self.row_words(r), y.get(r));
        }
        elim.solve()
    }

    /// Gathers the listed rows, in order. Duplicates are allowed.
    ///
    /// # Panics
    ///
    /// Panics if any index is out of range.
    pub fn select_rows(&self, indices: &[usize]) -> BitMatrix {
        let mut out = BitMatrix::zeros(indices.len(), self.cols);
        for (i, &src) in indices.iter().enumerate() {
            assert!(src < self.rows, "row index {src} out of range for {} rows", self.rows);
            let (s, d) = (src * self.stride, i * self.stride);
            out.data[d..d + self.stride].copy_from_slice(&self.data[s..s + self.stride]);
        }
        out
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {}", self.row(r))?;
        }
        write!(f, "]")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Unique,
    Multiple,
    Inconsistent,
}

/// Outcome of solving a linear system. `witness` is present for
/// [`SolveStatus::Unique`] and [`SolveStatus::Multiple`]; in the latter case
/// it is the solution with every free variable set to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub witness: Option<BitVector>,
}

/// What happened to a row fed into an [`Eliminator`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Absorbed {
    /// The row raised the rank.
    Independent,
    /// The row was a combination of earlier rows with matching right-hand side.
    Redundant,
    /// The row reduced to `0 = 1`.
    Contradiction,
}

/// Incremental Gaussian elimination: rows are absorbed one at a time and the
/// current rank and consistency can be queried at any point.
///
/// Each stored basis row has its lowest set bit at its pivot column and no
/// bits below it. Cloning is cheap enough to branch a search on a shared
/// prefix of equations.
#[derive(Clone, Debug)]
pub struct Eliminator {
    cols: usize,
    stride: usize,
    basis: Vec<u64>,
    rhs: Vec<bool>,
    pivots: Vec<usize>,
    // basis slot per column, usize::MAX when the column has no pivot
    slot_of_col: Vec<usize>,
    inconsistent: bool,
    scratch: Vec<u64>,
}

impl Eliminator {
    pub fn new(cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            cols,
            stride,
            basis: Vec::new(),
            rhs: Vec::new(),
            pivots: Vec::new(),
            slot_of_col: vec![usize::MAX; cols],
            inconsistent: false,
            scratch: vec![0; stride],
        }
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    #[inline]
    pub fn is_consistent(&self) -> bool {
        !self.inconsistent
    }

    /// Absorbs the equation `row · x = rhs`. `row` must hold exactly the
    /// packed words of a `cols`-bit row.
    pub fn absorb(&mut self, row: &[u64], rhs: bool) -> Absorbed {
        assert_eq!(row.len(), self.stride, "row has wrong word count");
        let stride = self.stride;
        let mut work = core::mem::take(&mut self.scratch);
        work.copy_from_slice(row);
        let mut rhs = rhs;
        let mut w = 0;
        let outcome = loop {
            while w < stride && work[w] == 0 {
                w += 1;
            }
            if w == stride {
                break if rhs {
                    self.inconsistent = true;
                    Absorbed::Contradiction
                } else {
                    Absorbed::Redundant
                };
            }
            let col = w * WORD_BITS + work[w].trailing_zeros() as usize;
            let slot = self.slot_of_col[col];
            if slot == usize::MAX {
                self.slot_of_col[col] = self.pivots.len();
                self.pivots.push(col);
                self.rhs.push(rhs);
                self.basis.extend_from_slice(&work);
                break Absorbed::Independent;
            }
            let base = &self.basis[slot * stride..(slot + 1) * stride];
            for k in w..stride {
                work[k] ^= base[k];
            }
            rhs ^= self.rhs[slot];
        };
        self.scratch = work;
        outcome
    }

    /// Back-substitutes the absorbed system. Free variables are set to zero.
    pub fn solve(&self) -> SolveReport {
        if self.inconsistent {
            return SolveReport {
                status: SolveStatus::Inconsistent,
                witness: None,
            };
        }
        let stride = self.stride;
        let mut x = vec![0u64; stride];
        let mut order: Vec<usize> = (0..self.pivots.len()).collect();
        order.sort_unstable_by(|&a, &b| self.pivots[b].cmp(&self.pivots[a]));
        for slot in order {
            let col = self.pivots[slot];
            let row = &self.basis[slot * stride..(slot + 1) * stride];
            let parity = row.iter().zip(&x).fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones()) & 1;
            if (parity == 1) != self.rhs[slot] {
                x[col / WORD_BITS] |= 1u64 << (col % WORD_BITS);
            }
        }
        let status = if self.rank() == self.cols {
            SolveStatus::Unique
        } else {
            SolveStatus::Multiple
        };
        SolveReport {
            status,
            witness: Some(BitVector::from_words(self.cols, x)),
        }
    }
}

/// Exact probability that `rows` i.i.d. uniform vectors in GF(2)^`cols` are
/// linearly independent: the product of `1 - 2^{-i}` for
/// `i = cols - rows + 1 ..= cols`.
pub fn full_rank_probability(cols: usize, rows: usize) -> f64 {
    if rows > cols {
        return 0.0;
    }
    (cols - rows + 1..=cols).fold(1.0, |acc, i| acc * (1.0 - libm::exp2(-(i as f64))))
}

/// The limit of [`full_rank_probability`] for square matrices,
/// `prod_{i >= 1} (1 - 2^{-i}) = 0.288788...`.
pub fn square_full_rank_limit() -> f64 {
    // 2^{-64} is below f64 resolution relative to the partial product
    full_rank_probability(64, 64)
}

/// Number of rows kept when a fraction `delta` of `cols` is discarded,
/// `floor((1 - delta) * cols)`.
pub fn kept_rows(cols: usize, delta: f64) -> usize {
    libm::floor((1.0 - delta) * cols as f64 + 1e-9) as usize
}

/// Monte Carlo estimate of the probability that a fresh random
/// `floor((1 - delta) B) x B` matrix has full row rank.
///
/// # Panics
///
/// Panics if `trials == 0`, `delta` is outside `[0, 1)`, or the kept row
/// count is zero.
pub fn fullrank_probability_trial<R: Rng + ?Sized>(cols: usize, delta: f64, trials: usize, rng: &mut R) -> f64 {
    full_rank_hits(cols, delta, trials, rng) as f64 / trials as f64
}

/// Number of full-rank draws among `trials`; the counting core of
/// [`fullrank_probability_trial`].
pub fn full_rank_hits<R: Rng + ?Sized>(cols: usize, delta: f64, trials: usize, rng: &mut R) -> usize {
    assert!(trials >= 1, "at least one trial is required");
    assert!((0.0..1.0).contains(&delta), "delta must lie in [0, 1)");
    let rows = kept_rows(cols, delta);
    assert!(rows >= 1, "(1 - delta) * B must keep at least one row");
    (0..trials)
        .filter(|_| BitMatrix::random(rows, cols, rng).rank() == rows)
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn m(rows: &[&str]) -> BitMatrix {
        let rows: Vec<BitVector> = rows.iter().map(|r| r.parse().unwrap()).collect();
        BitMatrix::from_rows(rows[0].len(), &rows)
    }

    fn v(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    #[test]
    fn random_empty_and_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let e = BitMatrix::random(0, 5, &mut rng);
        assert_eq!((e.rows(), e.cols()), (0, 5));
        let a = BitMatrix::random(64, 64, &mut ChaCha8Rng::seed_from_u64(42));
        let b = BitMatrix::random(64, 64, &mut ChaCha8Rng::seed_from_u64(42));
        assert_eq!(a, b);
    }

    #[test]
    fn random_density_concentrates() {
        // 65536 fair bits: sd of the mean is 1/512, so [0.47, 0.53] is > 15 sd wide.
        let a = BitMatrix::random(256, 256, &mut ChaCha8Rng::seed_from_u64(7));
        let ones: usize = (0..256).map(|r| a.row(r).count_ones()).sum();
        let density = ones as f64 / 65536.0;
        assert!((0.47..=0.53).contains(&density), "density {density}");
    }

    #[test]
    fn random_keeps_padding_clear() {
        let a = BitMatrix::random(3, 70, &mut ChaCha8Rng::seed_from_u64(3));
        for r in 0..3 {
            assert_eq!(a.row_words(r)[1] >> 6, 0);
        }
    }

    #[test]
    fn mul_identity_zero_and_hand_example() {
        let x = v("1011");
        assert_eq!(BitMatrix::identity(4).mul_vec(&x), x);
        let a = BitMatrix::random(5, 4, &mut ChaCha8Rng::seed_from_u64(9));
        assert!(a.mul_vec(&BitVector::zeros(4)).is_zero());
        // rows 110, 011, 101 each contain two ones, so each parity against 111 is 0
        assert_eq!(m(&["110", "011", "101"]).mul_vec(&v("111")), v("000"));
    }

    #[test]
    #[should_panic(expected = "dimension mismatch")]
    fn mul_dimension_mismatch_panics() {
        BitMatrix::identity(3).mul_vec(&v("10"));
    }

    #[test]
    fn rank_basics() {
        assert_eq!(BitMatrix::zeros(5, 5).rank(), 0);
        assert_eq!(BitMatrix::identity(7).rank(), 7);
        assert_eq!(m(&["110", "011", "101"]).rank(), 2);
        let a = m(&["101", "011"]);
        let before = a.clone();
        let _ = a.rank();
        assert_eq!(a, before);
    }

    #[test]
    fn solve_basics() {
        let r = BitMatrix::identity(3).solve(&v("101"));
        assert_eq!(r.status, SolveStatus::Unique);
        assert_eq!(r.witness, Some(v("101")));
        let r = BitMatrix::zeros(3, 3).solve(&v("000"));
        assert_eq!(r.status, SolveStatus::Multiple);
        assert!(r.witness.is_some());
        let r = BitMatrix::zeros(3, 3).solve(&v("010"));
        assert_eq!(r.status, SolveStatus::Inconsistent);
        assert_eq!(r.witness, None);
    }

    #[test]
    #[should_panic(expected = "dimension mismatch")]
    fn solve_dimension_mismatch_panics() {
        BitMatrix::identity(3).solve(&v("10"));
    }

    #[test]
    fn select_rows_semantics() {
        let a = m(&["100", "010", "001"]);
        assert_eq!(a.select_rows(&[0, 1, 2]), a);
        let e = a.select_rows(&[]);
        assert_eq!((e.rows(), e.cols()), (0, 3));
        assert_eq!(a.select_rows(&[2, 0]), m(&["001", "100"]));
    }

    #[test]
    #[should_panic(expected = "out of range")]
    fn select_rows_out_of_range_panics() {
        BitMatrix::identity(3).select_rows(&[3]);
    }

    #[test]
    fn eliminator_tracks_rank_and_contradiction() {
        let mut e = Eliminator::new(3);
        assert_eq!(e.absorb(v("110").words(), true), Absorbed::Independent);
        assert_eq!(e.absorb(v("011").words(), false), Absorbed::Independent);
        assert_eq!(e.absorb(v("101").words(), true), Absorbed::Redundant);
        assert_eq!(e.rank(), 2);
        assert!(e.is_consistent());
        assert_eq!(e.absorb(v("101").words(), false), Absorbed::Contradiction);
        assert!(!e.is_consistent());
        assert_eq!(e.solve().status, SolveStatus::Inconsistent);
    }

    #[test]
    fn wide_rows_cross_word_boundaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = BitMatrix::random(150, 130, &mut rng);
        let x = BitVector::random(130, &mut rng);
        let y = a.mul_vec(&x);
        let r = a.solve(&y);
        assert_eq!(r.status, SolveStatus::Unique);
        assert_eq!(r.witness.unwrap(), x);
    }

    #[test]
    fn exact_full_rank_products() {
        assert!((full_rank_probability(1, 1) - 0.5).abs() < 1e-15);
        assert!((square_full_rank_limit() - 0.288_788_095_086_602).abs() < 1e-12);
        assert!((full_rank_probability(200, 200) - 0.28879).abs() < 1e-5);
        assert!(1.0 - full_rank_probability(200, 100) <= f64::EPSILON);
        assert_eq!(full_rank_probability(3, 4), 0.0);
        assert_eq!(kept_rows(200, 0.1), 180);
        assert_eq!(kept_rows(200, 0.0), 200);
    }

    #[test]
    fn single_column_full_rank_is_a_coin() {
        let p = fullrank_probability_trial(1, 0.0, 20_000, &mut ChaCha8Rng::seed_from_u64(5));
        // sd = 0.5 / sqrt(20000) ~ 0.0035
        assert!((p - 0.5).abs() < 0.02, "{p}");
    }

    #[test]
    fn display_round_trips_text() {
        assert_eq!(v("0 1 1 0").to_string(), "0110");
        assert!("01x".parse::<BitVector>().is_err());
    }
}

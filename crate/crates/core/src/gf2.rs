//! Dense linear algebra over GF(2).
//!
//! Vectors are bit-packed into 64-bit words. Bit `i` of a vector is column `i`
//! of a matrix, with column 0 leftmost when printed. Bits beyond `len` in the
//! last word are always zero.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{BitAnd, BitXor};

/// Largest rank for which [`enumerate_codewords`] and friends will run.
pub const ENUMERATION_RANK_LIMIT: usize = 30;

const WORD_BITS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gf2Error {
    LengthMismatch { expected: usize, found: usize },
    EmptyProduct,
    RankTooLarge { rank: usize, limit: usize },
    IndexOutOfRange { index: usize, len: usize },
}

impl fmt::Display for Gf2Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gf2Error::LengthMismatch { expected, found } => {
                write!(f, "bit length mismatch: expected {expected}, found {found}")
            }
            Gf2Error::EmptyProduct => write!(f, "componentwise product of an empty list"),
            Gf2Error::RankTooLarge { rank, limit } => {
                write!(f, "rank {rank} exceeds the enumeration limit {limit}")
            }
            Gf2Error::IndexOutOfRange { index, len } => {
                write!(f, "index {index} out of range for length {len}")
            }
        }
    }
}

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// Fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self { len, words: vec![0; words_for(len)] }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self { len, words: vec![u64::MAX; words_for(len)] };
        v.clear_tail();
        v
    }

    /// Builds a vector from the low `len` bits of `bits` (bit `i` of the word is entry `i`).
    pub fn from_word(len: usize, bits: u64) -> Self {
        assert!(len <= WORD_BITS, "from_word supports at most 64 bits");
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = bits;
            v.clear_tail();
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Vector with ones exactly at `positions`.
    pub fn from_support(len: usize, positions: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &p in positions {
            v.set(p, true);
        }
        v
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
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
    pub fn get(&self, index: usize) -> bool {
        assert!(index < self.len, "bit index {index} out of range {}", self.len);
        (self.words[index / WORD_BITS] >> (index % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, index: usize, value: bool) {
        assert!(index < self.len, "bit index {index} out of range {}", self.len);
        let mask = 1u64 << (index % WORD_BITS);
        if value {
            self.words[index / WORD_BITS] |= mask;
        } else {
            self.words[index / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, index: usize) {
        assert!(index < self.len, "bit index {index} out of range {}", self.len);
        self.words[index / WORD_BITS] ^= 1u64 << (index % WORD_BITS);
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn complement(&self) -> Self {
        let mut out = Self { len: self.len, words: self.words.iter().map(|w| !w).collect() };
        out.clear_tail();
        out
    }

    fn check_len(&self, other: &Self) -> Result<(), Gf2Error> {
        if self.len != other.len {
            return Err(Gf2Error::LengthMismatch { expected: self.len, found: other.len });
        }
        Ok(())
    }

    /// In-place XOR. Panics on length mismatch.
    pub fn xor_assign(&mut self, other: &Self) {
        assert_eq!(self.len, other.len, "xor of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// In-place AND. Panics on length mismatch.
    pub fn and_assign(&mut self, other: &Self) {
        assert_eq!(self.len, other.len, "and of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    /// Parity of the componentwise product.
    pub fn dot(&self, other: &Self) -> bool {
        assert_eq!(self.len, other.len, "dot of vectors with different lengths");
        let ones: u32 = self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum();
        ones & 1 == 1
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Indices of set bits, ascending.
    pub fn ones_iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut word = w;
            core::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let tz = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(wi * WORD_BITS + tz)
            })
        })
    }

    pub fn first_one(&self) -> Option<usize> {
        self.ones_iter().next()
    }

    /// Copy with entry `index` removed.
    pub fn without(&self, index: usize) -> Self {
        assert!(index < self.len);
        let mut out = Self::zeros(self.len - 1);
        for (dst, src) in (0..self.len).filter(|&i| i != index).enumerate() {
            if self.get(src) {
                out.set(dst, true);
            }
        }
        out
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector(")?;
        fmt::Display::fmt(self, f)?;
        write!(f, ")")
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

impl BitXor for &BitVector {
    type Output = BitVector;
    fn bitxor(self, rhs: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.xor_assign(rhs);
        out
    }
}

impl BitAnd for &BitVector {
    type Output = BitVector;
    fn bitand(self, rhs: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.and_assign(rhs);
        out
    }
}

pub fn hamming_weight(v: &BitVector) -> usize {
    v.weight()
}

/// Entrywise AND of a nonempty list of equal-length vectors.
pub fn componentwise_product(vs: &[BitVector]) -> Result<BitVector, Gf2Error> {
    let (first, rest) = vs.split_first().ok_or(Gf2Error::EmptyProduct)?;
    let mut out = first.clone();
    for v in rest {
        first.check_len(v)?;
        out.and_assign(v);
    }
    Ok(out)
}

/// Rectangular matrix over GF(2), stored as rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVector>,
}

impl BitMatrix {
    /// Matrix with no rows over `cols` columns.
    pub fn empty(cols: usize) -> Self {
        Self { cols, rows: Vec::new() }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { cols, rows: vec![BitVector::zeros(cols); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n).map(|i| BitVector::from_support(n, &[i])).collect();
        Self { cols: n, rows }
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Result<Self, Gf2Error> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Gf2Error::LengthMismatch { expected: cols, found: bad.len() });
        }
        Ok(Self { cols, rows })
    }

    #[inline]
    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn col_count(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn push_row(&mut self, row: BitVector) -> Result<(), Gf2Error> {
        if row.len() != self.cols {
            return Err(Gf2Error::LengthMismatch { expected: self.cols, found: row.len() });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn transpose(&self) -> Self {
        let mut rows = vec![BitVector::zeros(self.rows.len()); self.cols];
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.ones_iter() {
                rows[c].set(r, true);
            }
        }
        Self { cols: self.rows.len(), rows }
    }

    /// `self · otherᵀ`: entry (i, j) is the parity of row i of `self` against row j of `other`.
    pub fn mul_transpose(&self, other: &BitMatrix) -> Result<BitMatrix, Gf2Error> {
        if self.cols != other.cols {
            return Err(Gf2Error::LengthMismatch { expected: self.cols, found: other.cols });
        }
        let rows = self
            .rows
            .iter()
            .map(|a| BitVector::from_bools(&other.rows.iter().map(|b| a.dot(b)).collect::<Vec<_>>()))
            .collect();
        Ok(Self { cols: other.rows.len(), rows })
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVector::is_zero)
    }

    pub fn without_row(&self, index: usize) -> Result<Self, Gf2Error> {
        if index >= self.rows.len() {
            return Err(Gf2Error::IndexOutOfRange { index, len: self.rows.len() });
        }
        let mut rows = self.rows.clone();
        rows.remove(index);
        Ok(Self { cols: self.cols, rows })
    }

    pub fn without_column(&self, index: usize) -> Result<Self, Gf2Error> {
        if index >= self.cols {
            return Err(Gf2Error::IndexOutOfRange { index, len: self.cols });
        }
        Ok(Self { cols: self.cols - 1, rows: self.rows.iter().map(|r| r.without(index)).collect() })
    }

    /// Rows whose entry in column `c` is set.
    pub fn rows_supported_on(&self, c: usize) -> Vec<usize> {
        (0..self.rows.len()).filter(|&r| self.rows[r].get(c)).collect()
    }

    /// Rows permuted by `order`: row `i` of the result is row `order[i]` of `self`.
    pub fn permute_rows(&self, order: &[usize]) -> Self {
        Self { cols: self.cols, rows: order.iter().map(|&i| self.rows[i].clone()).collect() }
    }

    pub fn rank(&self) -> usize {
        row_reduce(self).rank
    }

    /// Whether `v` lies in the row space.
    pub fn rowspan_contains(&self, v: &BitVector) -> bool {
        row_reduce(self).reduce_vector(v).is_zero()
    }

    pub fn same_rowspan(&self, other: &BitMatrix) -> bool {
        if self.cols != other.cols {
            return false;
        }
        let a = row_reduce(self);
        let b = row_reduce(other);
        a.rank == b.rank && a.reduced.rows == b.reduced.rows
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows.len(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {r}")?;
        }
        write!(f, "]")
    }
}

/// Reduced row-echelon form of a matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowEchelon {
    /// The `rank` nonzero rows in RREF, pivot columns ascending.
    pub reduced: BitMatrix,
    pub rank: usize,
    pub pivot_columns: Vec<usize>,
}

impl RowEchelon {
    /// Reduces `v` against the echelon basis; the result is zero iff `v` is in the span.
    pub fn reduce_vector(&self, v: &BitVector) -> BitVector {
        let mut out = v.clone();
        for (row, &p) in self.reduced.rows.iter().zip(&self.pivot_columns) {
            if out.get(p) {
                out.xor_assign(row);
            }
        }
        out
    }
}

pub fn row_reduce(m: &BitMatrix) -> RowEchelon {
    let mut rows: Vec<BitVector> = m.rows.clone();
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..m.cols {
        if next == rows.len() {
            break;
        }
        let Some(found) = (next..rows.len()).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(next, found);
        let pivot_row = rows[next].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != next && row.get(col) {
                row.xor_assign(&pivot_row);
            }
        }
        pivots.push(col);
        next += 1;
    }
    rows.truncate(next);
    RowEchelon { reduced: BitMatrix { cols: m.cols, rows }, rank: next, pivot_columns: pivots }
}

/// Every element of the row space, each exactly once, in Gray-code order.
#[derive(Debug, Clone)]
pub struct Codewords {
    basis: Vec<BitVector>,
    current: BitVector,
    index: u64,
    total: u64,
}

impl Iterator for Codewords {
    type Item = BitVector;

    fn next(&mut self) -> Option<BitVector> {
        if self.index >= self.total {
            return None;
        }
        let out = self.current.clone();
        self.index += 1;
        if self.index < self.total {
            let flip = self.index.trailing_zeros() as usize;
            self.current.xor_assign(&self.basis[flip]);
        }
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.total - self.index) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for Codewords {}

pub fn enumerate_codewords(m: &BitMatrix) -> Result<Codewords, Gf2Error> {
    let echelon = row_reduce(m);
    if echelon.rank > ENUMERATION_RANK_LIMIT {
        return Err(Gf2Error::RankTooLarge { rank: echelon.rank, limit: ENUMERATION_RANK_LIMIT });
    }
    Ok(Codewords {
        total: 1u64 << echelon.rank,
        basis: echelon.reduced.rows,
        current: BitVector::zeros(m.cols),
        index: 0,
    })
}

/// Histogram of Hamming weights over a row space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightDistribution {
    length: usize,
    counts: BTreeMap<usize, u64>,
}

impl WeightDistribution {
    pub fn from_counts(length: usize, counts: BTreeMap<usize, u64>) -> Self {
        Self { length, counts }
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn count(&self, weight: usize) -> u64 {
        self.counts.get(&weight).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// `(weight, count)` pairs with nonzero count, ascending weight.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.counts.iter().map(|(&w, &c)| (w, c))
    }

    pub fn min_nonzero_weight(&self) -> Option<usize> {
        self.counts.keys().copied().find(|&w| w > 0)
    }

    pub fn as_map(&self) -> &BTreeMap<usize, u64> {
        &self.counts
    }
}

pub fn weight_distribution(m: &BitMatrix) -> Result<WeightDistribution, Gf2Error> {
    let mut counts = BTreeMap::new();
    for word in enumerate_codewords(m)? {
        *counts.entry(word.weight()).or_insert(0u64) += 1;
    }
    Ok(WeightDistribution { length: m.cols, counts })
}

//! Reed-Muller codes, shortening, and the shortened quantum Reed-Muller CSS family.
//!
//! Canonical form: rows are the Boolean monomials of degree `0..=r` in ascending
//! degree, lexicographic in variable index within a degree. Column `j` is the
//! evaluation point whose variable `x_i` equals the complement of bit `m - i` of
//! `j`, so column 0 is the all-ones point, the last column is the origin, and
//! `x_1` is the slowest-alternating variable. `reed_muller(1, 4)` therefore
//! reproduces the usual printed 5x16 generator matrix exactly.

use alloc::vec::Vec;
use core::fmt;

use crate::gf2::{self, BitMatrix, BitVector, Gf2Error};

pub const MAX_RM_ORDER_M: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CodeError {
    OrderTooLarge { r: u32, m: u32 },
    LengthOutOfRange { m: u32 },
    NoDual { r: u32, m: u32 },
    NotShortenable,
    /// Shortening removed every X check; the result is a classical code.
    EmptyXPart { r: u32, m: u32 },
    LogicalCount { expected: usize, found: usize },
    CssCommutation,
    Gf2(Gf2Error),
}

impl fmt::Display for CodeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodeError::OrderTooLarge { r, m } => write!(f, "order r={r} exceeds m={m}"),
            CodeError::LengthOutOfRange { m } => {
                write!(f, "m={m} outside the supported range 1..={MAX_RM_ORDER_M}")
            }
            CodeError::NoDual { r, m } => write!(f, "RM({r},{m}) has no Reed-Muller dual (m-r-1 < 0)"),
            CodeError::NotShortenable => {
                write!(f, "no column is supported by exactly one generator row")
            }
            CodeError::EmptyXPart { r, m } => {
                write!(f, "shortened QRM({r},{m}) has no X checks (classical code)")
            }
            CodeError::LogicalCount { expected, found } => {
                write!(f, "expected {expected} logical qubit(s), code has {found}")
            }
            CodeError::CssCommutation => write!(f, "X and Z checks do not commute"),
            CodeError::Gf2(e) => write!(f, "{e}"),
        }
    }
}

impl From<Gf2Error> for CodeError {
    fn from(e: Gf2Error) -> Self {
        CodeError::Gf2(e)
    }
}

/// A binary linear code given by a generator matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    generator: BitMatrix,
    n: usize,
    k: usize,
    d: Option<usize>,
}

impl LinearCode {
    pub fn new(generator: BitMatrix) -> Self {
        let n = generator.col_count();
        let k = generator.rank();
        Self { generator, n, k, d: None }
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Minimum distance if known without enumeration.
    pub fn known_distance(&self) -> Option<usize> {
        self.d
    }

    /// Known distance, or an exhaustive search over the row space.
    pub fn distance(&self) -> Result<usize, CodeError> {
        match self.d {
            Some(d) => Ok(d),
            None => minimum_distance(self),
        }
    }
}

fn binomial(n: u32, k: u32) -> usize {
    (0..k).fold(1usize, |acc, i| acc * (n - i) as usize / (i + 1) as usize)
}

/// All `size`-subsets of `0..n` in lexicographic order.
pub(crate) fn subsets(n: usize, size: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current: Option<Vec<usize>> = if size <= n { Some((0..size).collect()) } else { None };
    core::iter::from_fn(move || {
        let out = current.clone()?;
        let cur = current.as_mut().unwrap();
        let mut i = size;
        loop {
            if i == 0 {
                current = None;
                break;
            }
            i -= 1;
            if cur[i] < n - size + i {
                cur[i] += 1;
                for j in i + 1..size {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    })
}

fn variable_row(i: u32, m: u32) -> BitVector {
    let n = 1usize << m;
    let mut v = BitVector::zeros(n);
    let bit = m - 1 - i;
    for j in 0..n {
        if (j >> bit) & 1 == 0 {
            v.set(j, true);
        }
    }
    v
}

pub fn reed_muller(r: u32, m: u32) -> Result<LinearCode, CodeError> {
    if m == 0 || m > MAX_RM_ORDER_M {
        return Err(CodeError::LengthOutOfRange { m });
    }
    if r > m {
        return Err(CodeError::OrderTooLarge { r, m });
    }
    let n = 1usize << m;
    let vars: Vec<BitVector> = (0..m).map(|i| variable_row(i, m)).collect();
    let mut rows = Vec::new();
    for degree in 0..=r as usize {
        for monomial in subsets(m as usize, degree) {
            let row = if monomial.is_empty() {
                BitVector::ones(n)
            } else {
                let factors: Vec<BitVector> = monomial.iter().map(|&i| vars[i].clone()).collect();
                gf2::componentwise_product(&factors)?
            };
            rows.push(row);
        }
    }
    let k: usize = (0..=r).map(|i| binomial(m, i)).sum();
    let generator = BitMatrix::from_rows(n, rows)?;
    debug_assert_eq!(generator.row_count(), k);
    Ok(LinearCode { generator, n, k, d: Some(1usize << (m - r)) })
}

/// Order of the dual Reed-Muller code, after checking orthogonality of the generators.
pub fn dual_parameters(r: u32, m: u32) -> Result<(u32, u32), CodeError> {
    if r >= m {
        return Err(CodeError::NoDual { r, m });
    }
    let dual_r = m - r - 1;
    let primal = reed_muller(r, m)?;
    let dual = reed_muller(dual_r, m)?;
    if !primal.generator.mul_transpose(&dual.generator)?.is_zero() {
        return Err(CodeError::CssCommutation);
    }
    Ok((dual_r, m))
}

/// Punctures the last column supported by exactly one generator row and expurgates that row.
///
/// For a Reed-Muller code in canonical form this removes the all-ones row and
/// the origin column, leaving the even subcode of the punctured code.
pub fn shorten(code: &LinearCode) -> Result<LinearCode, CodeError> {
    let g = &code.generator;
    let column = (0..g.col_count())
        .rev()
        .find(|&c| g.rows_supported_on(c).len() == 1)
        .ok_or(CodeError::NotShortenable)?;
    let row = g.rows_supported_on(column)[0];
    let shortened = g.without_row(row)?.without_column(column)?;
    // A full-rank generator stays full rank: the dropped row was the only one touching `column`.
    let k = if code.k == g.row_count() { code.k - 1 } else { shortened.rank() };
    Ok(LinearCode { n: shortened.col_count(), k, d: None, generator: shortened })
}

pub fn minimum_distance(code: &LinearCode) -> Result<usize, CodeError> {
    let wd = gf2::weight_distribution(&code.generator)?;
    Ok(wd.min_nonzero_weight().unwrap_or(0))
}

/// A CSS code with X checks `hx` and Z checks `hz`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CssCode {
    hx: BitMatrix,
    hz: BitMatrix,
    n: usize,
    k_logical: usize,
    logical_x: Option<BitVector>,
    logical_z: Option<BitVector>,
}

impl CssCode {
    pub fn new(hx: BitMatrix, hz: BitMatrix) -> Result<Self, CodeError> {
        let (rank_x, rank_z) = (hx.rank(), hz.rank());
        Self::with_ranks(hx, hz, rank_x, rank_z)
    }

    fn with_ranks(hx: BitMatrix, hz: BitMatrix, rank_x: usize, rank_z: usize) -> Result<Self, CodeError> {
        if hx.col_count() != hz.col_count() {
            return Err(Gf2Error::LengthMismatch { expected: hx.col_count(), found: hz.col_count() }.into());
        }
        if !hx.mul_transpose(&hz)?.is_zero() {
            return Err(CodeError::CssCommutation);
        }
        let n = hx.col_count();
        let k_logical = n - rank_x - rank_z;
        Ok(Self { hx, hz, n, k_logical, logical_x: None, logical_z: None })
    }

    /// Attaches logical X and Z representatives for a one-qubit code.
    pub fn with_logicals(mut self, x: BitVector, z: BitVector) -> Self {
        self.logical_x = Some(x);
        self.logical_z = Some(z);
        self
    }

    pub fn hx(&self) -> &BitMatrix {
        &self.hx
    }

    pub fn hz(&self) -> &BitMatrix {
        &self.hz
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k_logical(&self) -> usize {
        self.k_logical
    }

    pub fn logical_x(&self) -> Option<&BitVector> {
        self.logical_x.as_ref()
    }

    pub fn logical_z(&self) -> Option<&BitVector> {
        self.logical_z.as_ref()
    }
}

/// Quantum Reed-Muller code QRM(r, m), optionally shortened.
///
/// The shortened codes are `[[2^m - 1, 1]]` with logical X and Z both the
/// all-ones vector.
pub fn qrm(r: u32, m: u32, shortened: bool) -> Result<CssCode, CodeError> {
    if r >= m {
        return Err(CodeError::NoDual { r, m });
    }
    let dual_r = m - r - 1;
    let primal = reed_muller(r, m)?;
    let dual = reed_muller(dual_r, m)?;
    if !shortened {
        return CssCode::new(primal.generator, dual.generator);
    }
    let x = shorten(&primal)?;
    if x.generator.row_count() == 0 {
        return Err(CodeError::EmptyXPart { r, m });
    }
    let z = shorten(&dual)?;
    let code = CssCode::with_ranks(x.generator, z.generator, x.k, z.k)?;
    if code.k_logical != 1 {
        return Err(CodeError::LogicalCount { expected: 1, found: code.k_logical });
    }
    let n = code.n;
    Ok(code.with_logicals(BitVector::ones(n), BitVector::ones(n)))
}

/// Shortened QRM(1, k+2), the code used to distill `Z_k` magic states.
pub fn distillation_code(k: u32) -> Result<CssCode, CodeError> {
    qrm(1, k + 2, true)
}

//! Transversal `Z_k = Z(π/2^k)` certification via Ward's divisibility test.
//!
//! A one-qubit CSS code whose X-check row space is `2^(k+1)`-divisible
//! implements `(Z_k)^a` transversally with `a = n mod 2^(k+1)`. Divisibility is
//! certified from weights of componentwise products of distinct check rows.

use alloc::vec::Vec;
use core::fmt;

use crate::codes::{subsets, CssCode};
use crate::gf2::{self, BitMatrix, BitVector, Gf2Error};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransversalityError {
    NotInvertible { a: u64, modulus: u64 },
    LogicalCount(usize),
    EmptyRows,
    KTooLarge(u32),
    Gf2(Gf2Error),
}

impl fmt::Display for TransversalityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransversalityError::NotInvertible { a, modulus } => {
                write!(f, "{a} has no inverse modulo {modulus}")
            }
            TransversalityError::LogicalCount(k) => {
                write!(f, "certification needs a one-qubit code, got {k} logical qubits")
            }
            TransversalityError::EmptyRows => write!(f, "no check rows to test"),
            TransversalityError::KTooLarge(k) => write!(f, "k = {k} is too large (max 60)"),
            TransversalityError::Gf2(e) => write!(f, "{e}"),
        }
    }
}

impl From<Gf2Error> for TransversalityError {
    fn from(e: Gf2Error) -> Self {
        TransversalityError::Gf2(e)
    }
}

/// First row subset whose product weight breaks the divisibility condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WardWitness {
    pub j: usize,
    pub rows: Vec<usize>,
    pub weight: usize,
    pub modulus: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WardOutcome {
    Pass,
    Fail(WardWitness),
}

impl WardOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, WardOutcome::Pass)
    }

    pub fn witness(&self) -> Option<&WardWitness> {
        match self {
            WardOutcome::Pass => None,
            WardOutcome::Fail(w) => Some(w),
        }
    }
}

/// Ward's test for `2^(k+1)`-divisibility of the row space of `rows`.
///
/// Checks `2^(k+2-j) | wt(v_{i1} ⋯ v_{ij})` for every set of `j` distinct rows,
/// `1 <= j <= k+1`. Larger `j` would need modulus `2^0`, which always holds.
/// Subsets are visited by increasing `j`, lexicographically within a size, so
/// the reported witness is deterministic.
pub fn ward_test(rows: &BitMatrix, k: u32) -> Result<WardOutcome, TransversalityError> {
    if rows.row_count() == 0 {
        return Err(TransversalityError::EmptyRows);
    }
    if k > 60 {
        return Err(TransversalityError::KTooLarge(k));
    }
    let max_j = (k as usize + 1).min(rows.row_count());
    for j in 1..=max_j {
        let modulus = 1u64 << (k as usize + 2 - j);
        for subset in subsets(rows.row_count(), j) {
            let factors: Vec<BitVector> = subset.iter().map(|&i| rows.row(i).clone()).collect();
            let weight = gf2::componentwise_product(&factors)?.weight();
            if weight as u64 % modulus != 0 {
                return Ok(WardOutcome::Fail(WardWitness { j, rows: subset, weight, modulus }));
            }
        }
    }
    Ok(WardOutcome::Pass)
}

/// Whether every codeword in the row space has weight divisible by `divisor`, by enumeration.
pub fn divisibility_direct(rows: &BitMatrix, divisor: u64) -> Result<bool, TransversalityError> {
    assert!(divisor > 0, "divisor must be positive");
    let wd = gf2::weight_distribution(rows)?;
    let divisible = wd.iter().all(|(w, _)| w as u64 % divisor == 0);
    Ok(divisible)
}

/// Inverse of `a` modulo `modulus`, in `1..modulus`.
pub fn extended_euclid_inverse(a: u64, modulus: u64) -> Result<u64, TransversalityError> {
    let err = TransversalityError::NotInvertible { a, modulus };
    if modulus == 0 {
        return Err(err);
    }
    if modulus == 1 {
        return Err(err);
    }
    let (mut old_r, mut r) = (i128::from(a % modulus), i128::from(modulus));
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return Err(err);
    }
    Ok(old_s.rem_euclid(i128::from(modulus)) as u64)
}

/// Outcome of certifying a transversal `Z_k` power for a one-qubit CSS code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransversalityCertificate {
    pub k: u32,
    /// Phase power: transversal `Z_k` acts as `(Z_k)^a` on the logical qubit.
    pub a: u64,
    /// Inverse of `a` modulo `2^(k+1)`; repeating the transversal gate `x` times yields `Z_k`.
    pub x: Option<u64>,
    pub passed: bool,
    pub witness: Option<WardWitness>,
}

pub fn certify_zk(code: &CssCode, k: u32) -> Result<TransversalityCertificate, TransversalityError> {
    if code.k_logical() != 1 {
        return Err(TransversalityError::LogicalCount(code.k_logical()));
    }
    let outcome = ward_test(code.hx(), k)?;
    let modulus = 1u64 << (k + 1);
    let a = code.n() as u64 % modulus;
    let x = if a % 2 == 1 { Some(extended_euclid_inverse(a, modulus)?) } else { None };
    Ok(TransversalityCertificate {
        k,
        a,
        x,
        passed: outcome.passed(),
        witness: outcome.witness().cloned(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::qrm;
    use proptest::prelude::*;

    fn short_rm_rows(m: u32) -> BitMatrix {
        qrm(1, m, true).unwrap().hx().clone()
    }

    #[test]
    fn ward_on_fifteen_qubit_code() {
        let rows = short_rm_rows(4);
        assert_eq!(ward_test(&rows, 2).unwrap(), WardOutcome::Pass);
        let fail = ward_test(&rows, 3).unwrap();
        let w = fail.witness().unwrap();
        assert_eq!((w.j, w.rows.as_slice(), w.weight, w.modulus), (1, &[0][..], 8, 16));
    }

    #[test]
    fn ward_single_all_ones_row() {
        for k in 0..6u32 {
            let len = 1usize << (k + 1);
            let rows = BitMatrix::from_rows(len, alloc::vec![BitVector::ones(len)]).unwrap();
            assert!(ward_test(&rows, k).unwrap().passed());
        }
        assert_eq!(ward_test(&BitMatrix::empty(4), 1), Err(TransversalityError::EmptyRows));
    }

    #[test]
    fn direct_divisibility() {
        assert!(divisibility_direct(&short_rm_rows(4), 8).unwrap());
        assert!(divisibility_direct(&short_rm_rows(5), 16).unwrap());
        assert!(!divisibility_direct(&short_rm_rows(4), 16).unwrap());
    }

    #[test]
    fn inverses() {
        assert_eq!(extended_euclid_inverse(1, 8).unwrap(), 1);
        assert_eq!(extended_euclid_inverse(7, 8).unwrap(), 7);
        assert_eq!(extended_euclid_inverse(15, 16).unwrap(), 15);
        assert_eq!(extended_euclid_inverse(3, 16).unwrap(), 11);
        assert_eq!(
            extended_euclid_inverse(6, 16),
            Err(TransversalityError::NotInvertible { a: 6, modulus: 16 })
        );
    }

    #[test]
    fn certificates() {
        let c = certify_zk(&qrm(1, 4, true).unwrap(), 2).unwrap();
        assert!(c.passed);
        assert_eq!((c.a, c.x), (7, Some(7)));
        let c = certify_zk(&qrm(1, 5, true).unwrap(), 3).unwrap();
        assert!(c.passed);
        assert_eq!((c.a, c.x), (15, Some(15)));
        let c = certify_zk(&qrm(1, 4, true).unwrap(), 3).unwrap();
        assert!(!c.passed);
        assert_eq!(c.witness.unwrap().j, 1);
        let full = qrm(1, 4, false).unwrap();
        assert_eq!(certify_zk(&full, 2), Err(TransversalityError::LogicalCount(0)));
    }

    #[test]
    fn family_passes_and_agrees_with_enumeration() {
        for k in 2..=10u32 {
            let code = qrm(1, k + 2, true).unwrap();
            let cert = certify_zk(&code, k).unwrap();
            assert!(cert.passed, "k = {k}");
            assert_eq!(cert.a, (1u64 << (k + 1)) - 1);
            let a = cert.a;
            assert_eq!(a * cert.x.unwrap() % (1 << (k + 1)), 1);
            assert!(divisibility_direct(code.hx(), 1 << (k + 1)).unwrap());
            assert!(!ward_test(code.hx(), k + 1).unwrap().passed());
            assert!(!divisibility_direct(code.hx(), 1 << (k + 2)).unwrap());
        }
    }

    fn repeat_columns(m: &BitMatrix, rep: u32) -> BitMatrix {
        let times = 1usize << rep;
        let cols = m.col_count() * times;
        let rows = m
            .rows()
            .iter()
            .map(|r| BitVector::from_bools(&r.iter().flat_map(|b| core::iter::repeat(b).take(times)).collect::<Vec<_>>()))
            .collect();
        BitMatrix::from_rows(cols, rows).unwrap()
    }

    proptest! {
        #[test]
        fn ward_matches_enumeration(
            rows in proptest::collection::vec(proptest::collection::vec(any::<bool>(), 1..24), 1..6),
            k in 0u32..4,
            rep in 0u32..4,
        ) {
            let cols = rows[0].len();
            let rows: Vec<BitVector> = rows.iter().map(|r| {
                let mut r = r.clone();
                r.resize(cols, false);
                BitVector::from_bools(&r)
            }).collect();
            let base = BitMatrix::from_rows(cols, rows).unwrap();
            // repeating every column 2^rep times scales all weights, so divisible cases occur
            let m = repeat_columns(&base, rep);
            let ward = ward_test(&m, k).unwrap().passed();
            prop_assert_eq!(ward, divisibility_direct(&m, 1 << (k + 1)).unwrap());
            let mut order: Vec<usize> = (0..m.row_count()).collect();
            order.reverse();
            prop_assert_eq!(ward, ward_test(&m.permute_rows(&order), k).unwrap().passed());
        }
    }
}

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;

use super::circuit::{CircuitError, CliffordCircuit};
use super::frame::{propagate_with_faults, Fault, PauliFrame};
use super::templates::Readout;
use crate::codes::distillation_code;
use crate::gf2::{weight_distribution, BitMatrix, BitVector, WeightDistribution};
use crate::poly::{Polynomial, RationalFunction};

/// Default bound on exhaustively enumerated error sites (`2^25` patterns).
pub const DEFAULT_EXHAUSTIVE_LIMIT: usize = 25;
/// Hard bound; tallies are indexed by a `u64` pattern counter.
pub const MAX_EXHAUSTIVE_LIMIT: usize = 31;
/// Syndromes are packed into one machine word.
pub const MAX_CHECKS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EnumerationError {
    TooManySites { sites: usize, limit: usize },
    TooManyChecks(usize),
    ReadoutSize { expected: usize, found: usize },
    KOutOfRange(u32),
    BadRange { start: u64, end: u64, total: u64 },
    Circuit(CircuitError),
}

impl fmt::Display for EnumerationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnumerationError::TooManySites { sites, limit } => {
                write!(f, "{sites} error sites exceed the exhaustive limit of {limit}")
            }
            EnumerationError::TooManyChecks(c) => write!(f, "{c} checks exceed the limit of {MAX_CHECKS}"),
            EnumerationError::ReadoutSize { expected, found } => {
                write!(f, "readout covers {found} measurements, circuit has {expected}")
            }
            EnumerationError::KOutOfRange(k) => write!(f, "k = {k} outside 2..=12"),
            EnumerationError::BadRange { start, end, total } => {
                write!(f, "pattern range {start}..{end} outside 0..{total}")
            }
            EnumerationError::Circuit(e) => write!(f, "{e}"),
        }
    }
}

impl From<CircuitError> for EnumerationError {
    fn from(e: CircuitError) -> Self {
        EnumerationError::Circuit(e)
    }
}

/// Acceptance probability and output error conditioned on acceptance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProtocolPolynomials {
    pub acceptance: RationalFunction,
    pub output_error: RationalFunction,
    pub n_inputs: usize,
}

/// The effect of one error site: syndrome bits and whether it flips the output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct SiteEffect {
    syndrome: u64,
    logical: bool,
}

/// Per-site effects, computed once by frame propagation.
///
/// Enumeration relies on propagation being linear, so the effect of a pattern
/// is the XOR of its single-site effects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SiteTable {
    effects: Vec<SiteEffect>,
}

impl SiteTable {
    pub fn new(circuit: &CliffordCircuit, sites: &[Fault], readout: &Readout) -> Result<Self, EnumerationError> {
        if readout.checks.row_count() > MAX_CHECKS {
            return Err(EnumerationError::TooManyChecks(readout.checks.row_count()));
        }
        let m = circuit.measurement_count();
        if readout.logical.len() != m || readout.checks.col_count() != m {
            let found = if readout.logical.len() != m { readout.logical.len() } else { readout.checks.col_count() };
            return Err(EnumerationError::ReadoutSize { expected: m, found });
        }
        let ident = PauliFrame::identity(circuit.qubit_count());
        let baseline = propagate_with_faults(circuit, &ident, &[])?;
        let mut effects = Vec::with_capacity(sites.len());
        for site in sites {
            let p = propagate_with_faults(circuit, &ident, core::slice::from_ref(site))?;
            let mut flips = p.measurement_flips;
            flips.xor_assign(&baseline.measurement_flips);
            let syndrome = syndrome_word(&readout.checks, &flips);
            let out = &p.output_frame;
            let out_flip = out.z_mask.get(readout.output) || out.x_mask.get(readout.output);
            effects.push(SiteEffect { syndrome, logical: readout.logical.dot(&flips) ^ out_flip });
        }
        Ok(Self { effects })
    }

    pub fn site_count(&self) -> usize {
        self.effects.len()
    }

    pub fn pattern_count(&self) -> u64 {
        1u64 << self.effects.len()
    }

    /// Accepted and accepted-without-logical-error counts, by pattern weight,
    /// for the patterns with Gray-code ranks in `start..end`.
    pub fn tally_range(&self, start: u64, end: u64) -> Result<Tally, EnumerationError> {
        let total = self.pattern_count();
        if start > end || end > total {
            return Err(EnumerationError::BadRange { start, end, total });
        }
        let n = self.effects.len();
        let mut tally = Tally::zero(n);
        if start == end {
            return Ok(tally);
        }
        let mut pattern = start ^ (start >> 1);
        let mut state = SiteEffect { syndrome: 0, logical: false };
        for (i, e) in self.effects.iter().enumerate() {
            if pattern >> i & 1 == 1 {
                state.syndrome ^= e.syndrome;
                state.logical ^= e.logical;
            }
        }
        let mut rank = start;
        loop {
            if state.syndrome == 0 {
                let w = pattern.count_ones() as usize;
                tally.accepted[w] += 1;
                if !state.logical {
                    tally.harmless[w] += 1;
                }
            }
            rank += 1;
            if rank == end {
                break;
            }
            let bit = rank.trailing_zeros() as usize;
            pattern ^= 1 << bit;
            let e = self.effects[bit];
            state.syndrome ^= e.syndrome;
            state.logical ^= e.logical;
        }
        Ok(tally)
    }

    /// Splits the pattern space into `parts` contiguous ranges of near-equal size.
    pub fn partition(&self, parts: usize) -> Vec<(u64, u64)> {
        let total = self.pattern_count();
        let parts = (parts.max(1) as u64).min(total);
        (0..parts).map(|i| (total * i / parts, total * (i + 1) / parts)).collect()
    }
}

fn syndrome_word(checks: &BitMatrix, flips: &BitVector) -> u64 {
    checks
        .rows()
        .iter()
        .enumerate()
        .fold(0u64, |acc, (i, r)| acc | (u64::from(r.dot(flips)) << i))
}

/// Pattern counts by weight; partial tallies over disjoint ranges add up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tally {
    pub accepted: Vec<u64>,
    pub harmless: Vec<u64>,
}

impl Tally {
    pub fn zero(sites: usize) -> Self {
        Self { accepted: alloc::vec![0; sites + 1], harmless: alloc::vec![0; sites + 1] }
    }

    pub fn merge(&mut self, other: &Tally) {
        assert_eq!(self.accepted.len(), other.accepted.len(), "tallies over different site counts");
        for (a, b) in self.accepted.iter_mut().zip(&other.accepted) {
            *a += b;
        }
        for (a, b) in self.harmless.iter_mut().zip(&other.harmless) {
            *a += b;
        }
    }

    pub fn sites(&self) -> usize {
        self.accepted.len() - 1
    }

    /// `Σ_w c_w ε^w (1-ε)^(n-w)` as exact polynomials.
    pub fn into_polynomials(&self) -> ProtocolPolynomials {
        let n = self.sites();
        let weighted = |counts: &[u64]| {
            counts.iter().enumerate().filter(|(_, c)| **c > 0).fold(Polynomial::zero(), |acc, (w, &c)| {
                let term = &Polynomial::monomial(BigInt::from(c), w) * &Polynomial::binomial_power(1, -1, n - w, None);
                &acc + &term
            })
        };
        let a = weighted(&self.accepted);
        let h = weighted(&self.harmless);
        let output_error = RationalFunction::new(&a - &h, a.clone()).expect("error-free pattern is accepted");
        ProtocolPolynomials { acceptance: RationalFunction::from_polynomial(a), output_error, n_inputs: n }
    }
}

/// Exact protocol polynomials by exhaustive enumeration of independent Z
/// errors, each with probability `ε`, at `sites`.
pub fn enumerate_protocol(
    circuit: &CliffordCircuit,
    sites: &[Fault],
    readout: &Readout,
    limit: usize,
) -> Result<ProtocolPolynomials, EnumerationError> {
    let limit = limit.min(MAX_EXHAUSTIVE_LIMIT);
    if sites.len() > limit {
        return Err(EnumerationError::TooManySites { sites: sites.len(), limit });
    }
    let table = SiteTable::new(circuit, sites, readout)?;
    Ok(table.tally_range(0, table.pattern_count())?.into_polynomials())
}

fn dual_sum(wd: &WeightDistribution) -> Polynomial {
    wd.iter().fold(Polynomial::zero(), |acc, (w, c)| {
        &acc + &Polynomial::binomial_power(1, -2, w, None).scale(&BigInt::from(c))
    })
}

/// Protocol polynomials from weight distributions of the check space.
///
/// A Z-error pattern is accepted iff it is orthogonal to every X check, which
/// has probability `2^-r Σ_c (1-2ε)^wt(c)` over the `2^r` check-space words;
/// it is harmless iff it is also orthogonal to the all-ones logical.
pub fn macwilliams_fastpath(k: u32) -> Result<ProtocolPolynomials, EnumerationError> {
    if !(2..=12).contains(&k) {
        return Err(EnumerationError::KOutOfRange(k));
    }
    let code = distillation_code(k).map_err(|_| EnumerationError::KOutOfRange(k))?;
    let n = code.n();
    let checks = code.hx();
    let mut extended = checks.clone();
    extended.push_row(BitVector::ones(n)).expect("row length n");
    let s_c = dual_sum(&weight_distribution(checks).expect("rank within enumeration limit"));
    let s_d = dual_sum(&weight_distribution(&extended).expect("rank within enumeration limit"));
    let two = BigInt::from(2);
    let acceptance = RationalFunction::new(s_c.clone(), Polynomial::constant(BigInt::from(1u64) << checks.rank()))
        .expect("nonzero constant");
    let num = &s_c.scale(&two) - &s_d;
    let output_error = RationalFunction::new(num, s_c.scale(&two)).expect("sum has constant term 2^r");
    Ok(ProtocolPolynomials { acceptance, output_error, n_inputs: n })
}

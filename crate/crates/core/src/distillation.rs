//! Analytic models of magic-state distillation.
//!
//! The `Z_k` protocol runs the shortened QRM(1, k+2) code: `2^(k+2) - 1` noisy
//! `Z_k|+⟩` inputs yield one output. With `x = 1 - 2ε`, `N = 2^(k+2) - 1` and
//! `h = 2^(k+1)`:
//!
//! ```text
//! ε_out(ε)  = (1 - x^(h-1) [2εN + x^h]) / (2 [1 + N x^h])
//! accept(ε) = (1 + N x^h) / 2^(k+2)
//! ```
//!
//! Exact forms are [`RationalFunction`]s in ε. Float evaluation switches to a
//! truncated Taylor series for small ε, where the closed form cancels
//! catastrophically.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use crate::poly::{Polynomial, RationalFunction};

pub const MIN_CISC_K: u32 = 2;
pub const MAX_CISC_K: u32 = 12;
pub const DEFAULT_BISECTION_TOL: f64 = 1e-12;

/// Number of series terms used for small-ε evaluation.
const SERIES_TERMS: usize = 40;
/// Series is used while `ε · 2^(k+2)` stays below this.
const SERIES_CUTOFF: f64 = 0.05;
const MAX_LEVELS: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub enum DistillationError {
    KOutOfRange(u32),
    NoSignChange,
    AboveThreshold { eps: f64, threshold: f64 },
    InvalidTarget(f64),
    InvalidErrorRate(f64),
    InvalidTolerance(f64),
    AnchorViolated(&'static str),
    Unreachable { target: f64, reached: f64 },
}

impl fmt::Display for DistillationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistillationError::KOutOfRange(k) => {
                write!(f, "k = {k} outside supported range {MIN_CISC_K}..={MAX_CISC_K}")
            }
            DistillationError::NoSignChange => write!(f, "no fixed point found in (0, 1/2)"),
            DistillationError::AboveThreshold { eps, threshold } => {
                write!(f, "input error {eps:e} is not below the distillation threshold {threshold:e}")
            }
            DistillationError::InvalidTarget(t) => write!(f, "target error {t:e} must be positive"),
            DistillationError::InvalidErrorRate(e) => write!(f, "error rate {e:e} must lie in (0, 1)"),
            DistillationError::InvalidTolerance(t) => write!(f, "tolerance {t:e} must be positive"),
            DistillationError::AnchorViolated(what) => write!(f, "step model anchor violated: {what}"),
            DistillationError::Unreachable { target, reached } => {
                write!(f, "target {target:e} unreachable, stalled at {reached:e}")
            }
        }
    }
}

fn check_k(k: u32) -> Result<(), DistillationError> {
    if (MIN_CISC_K..=MAX_CISC_K).contains(&k) {
        Ok(())
    } else {
        Err(DistillationError::KOutOfRange(k))
    }
}

fn code_size(k: u32) -> usize {
    (1usize << (k + 2)) - 1
}

fn half_size(k: u32) -> usize {
    1usize << (k + 1)
}

/// Numerator and denominator of `ε_out`, optionally truncated.
fn output_error_parts(k: u32, max_degree: Option<usize>) -> (Polynomial, Polynomial) {
    let n = code_size(k);
    let h = half_size(k);
    let big_n = BigInt::from(n);
    // 1 - 2εN (1-2ε)^(h-1) - (1-2ε)^(2h-1)
    let a = Polynomial::binomial_power(1, -2, h - 1, max_degree.map(|d| d.saturating_sub(1)));
    let two_n_eps = Polynomial::monomial(BigInt::from(2) * &big_n, 1);
    let b = Polynomial::binomial_power(1, -2, 2 * h - 1, max_degree);
    let mut num = &(&Polynomial::one() - &(&two_n_eps * &a)) - &b;
    // 2 + 2N (1-2ε)^h
    let c = Polynomial::binomial_power(1, -2, h, max_degree);
    let mut den = &Polynomial::constant(BigInt::from(2)) + &c.scale(&(BigInt::from(2) * &big_n));
    if let Some(d) = max_degree {
        num = num.truncate(d);
        den = den.truncate(d);
    }
    (num, den)
}

/// Exact output error of one round of the `Z_k` protocol.
pub fn cisc_output_error(k: u32) -> Result<RationalFunction, DistillationError> {
    check_k(k)?;
    let (num, den) = output_error_parts(k, None);
    Ok(RationalFunction::new(num, den).expect("denominator has constant term 2 + 2N"))
}

/// Exact acceptance probability of one round of the `Z_k` protocol.
pub fn cisc_acceptance(k: u32) -> Result<RationalFunction, DistillationError> {
    check_k(k)?;
    let n = code_size(k);
    let num = &Polynomial::one() + &Polynomial::binomial_power(1, -2, half_size(k), None).scale(&BigInt::from(n));
    let den = Polynomial::constant(BigInt::from(n + 1));
    Ok(RationalFunction::new(num, den).expect("constant denominator"))
}

/// The leading `ε³` coefficient `(1 - 3·2^(k+1) + 2^(2k+3)) / 3`.
pub fn leading_coefficient_formula(k: u32) -> BigInt {
    let one = BigInt::one();
    (&one - BigInt::from(3) * (&one << (k + 1)) + (&one << (2 * k + 3))) / BigInt::from(3)
}

/// Fast floating-point evaluators for the `Z_k` protocol.
#[derive(Debug, Clone, PartialEq)]
pub struct CiscProtocol {
    k: u32,
    series: Vec<f64>,
}

impl CiscProtocol {
    pub fn new(k: u32) -> Result<Self, DistillationError> {
        check_k(k)?;
        let (num, den) = output_error_parts(k, Some(SERIES_TERMS));
        let truncated = RationalFunction::new(num, den).expect("nonzero denominator");
        let series = truncated
            .series(SERIES_TERMS)
            .expect("denominator constant term is nonzero")
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect();
        Ok(Self { k, series })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Input states consumed per round.
    pub fn inputs_per_round(&self) -> usize {
        code_size(self.k)
    }

    fn uses_series(&self, eps: f64) -> bool {
        eps * (1u64 << (self.k + 2)) as f64 <= SERIES_CUTOFF
    }

    /// `x^m` for `x = 1 - 2ε`, computed from `log1p` to keep precision near ε = 0.
    fn x_pow(eps: f64, m: usize) -> f64 {
        if eps == 0.5 {
            return if m == 0 { 1.0 } else { 0.0 };
        }
        libm::exp(m as f64 * libm::log1p(-2.0 * eps))
    }

    pub fn output_error_at(&self, eps: f64) -> f64 {
        if eps <= 0.0 {
            return 0.0;
        }
        if self.uses_series(eps) {
            return self.series.iter().rev().fold(0.0, |acc, c| acc * eps + c);
        }
        self.output_error_direct(eps)
    }

    /// Closed form evaluated directly, grouped as `(1 - x^(2h-1)) - N x^(h-1) (2ε)`.
    pub fn output_error_direct(&self, eps: f64) -> f64 {
        let n = code_size(self.k) as f64;
        let h = half_size(self.k);
        let one_minus = if eps == 0.5 { 1.0 } else { -libm::expm1((2 * h - 1) as f64 * libm::log1p(-2.0 * eps)) };
        let num = one_minus - n * Self::x_pow(eps, h - 1) * 2.0 * eps;
        let den = 2.0 * (1.0 + n * Self::x_pow(eps, h));
        num / den
    }

    pub fn acceptance_at(&self, eps: f64) -> f64 {
        let n = code_size(self.k) as f64;
        (1.0 + n * Self::x_pow(eps, half_size(self.k))) / (n + 1.0)
    }

    /// Expected repetitions of one round until acceptance, `1 / accept(ε)`.
    pub fn expected_repetitions(&self, eps: f64) -> f64 {
        1.0 / self.acceptance_at(eps)
    }

    pub fn threshold(&self, tol: f64) -> Result<f64, DistillationError> {
        fixed_point_threshold(|e| self.output_error_at(e), 0.5, tol)
    }
}

/// Smallest fixed point of `f(ε) = ε` in `(0, upper)`, with `f(ε) < ε` just above zero.
///
/// Scans a geometric grid for the first sign change of `f(ε) - ε`, then bisects
/// until the bracket is narrower than `tol`.
pub fn fixed_point_threshold(f: impl Fn(f64) -> f64, upper: f64, tol: f64) -> Result<f64, DistillationError> {
    if !(tol > 0.0) {
        return Err(DistillationError::InvalidTolerance(tol));
    }
    let g = |e: f64| f(e) - e;
    let mut lo = 1e-12;
    if !(g(lo) < 0.0) {
        return Err(DistillationError::NoSignChange);
    }
    let mut hi = None;
    let mut e = lo;
    while e < upper {
        let next = (e * 1.05).min(upper * (1.0 - 1e-9));
        if next <= e {
            break;
        }
        if g(next) >= 0.0 {
            hi = Some(next);
            break;
        }
        lo = next;
        e = next;
    }
    let mut hi = hi.ok_or(DistillationError::NoSignChange)?;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Distillation threshold of the `Z_k` protocol.
pub fn threshold(k: u32, tol: f64) -> Result<f64, DistillationError> {
    CiscProtocol::new(k)?.threshold(tol)
}

/// How the number of distillation levels is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LevelRule {
    /// Smallest ℓ whose ℓ-fold composition of `ε_out` reaches the target.
    Composition,
    /// `⌈log ε' / log ε_out(ε)⌉`.
    PaperFormula,
}

impl LevelRule {
    pub fn as_str(self) -> &'static str {
        match self {
            LevelRule::Composition => "composition",
            LevelRule::PaperFormula => "paper_formula",
        }
    }
}

/// Per-level record of a distillation tower.
#[derive(Debug, Clone, PartialEq)]
pub struct DistillationSchedule {
    pub k: u32,
    pub base_error: f64,
    pub levels: usize,
    /// `ε_1, ..., ε_ℓ`, the output error after each level (by composition).
    pub per_level_errors: Vec<f64>,
    /// `E[t(ε_{i-1})]` for each level `i`.
    pub per_level_repetitions: Vec<f64>,
    pub rule: LevelRule,
}

fn check_rates(eps: f64, target: f64) -> Result<(), DistillationError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(DistillationError::InvalidErrorRate(eps));
    }
    if !(target > 0.0) {
        return Err(DistillationError::InvalidTarget(target));
    }
    Ok(())
}

/// Compose `step` from `eps` until the value is `<= target`, returning all visited errors.
fn compose_until(step: impl Fn(f64) -> f64, eps: f64, target: f64) -> Result<Vec<f64>, DistillationError> {
    let mut errors = Vec::new();
    let mut current = eps;
    while current > target {
        let next = step(current);
        if !(next < current) || errors.len() >= MAX_LEVELS {
            return Err(DistillationError::Unreachable { target, reached: current });
        }
        errors.push(next);
        current = next;
    }
    Ok(errors)
}

pub fn levels_required(k: u32, eps: f64, target: f64, rule: LevelRule) -> Result<DistillationSchedule, DistillationError> {
    levels_required_with(&CiscProtocol::new(k)?, eps, target, rule, DEFAULT_BISECTION_TOL)
}

pub fn levels_required_with(
    protocol: &CiscProtocol,
    eps: f64,
    target: f64,
    rule: LevelRule,
    tol: f64,
) -> Result<DistillationSchedule, DistillationError> {
    check_rates(eps, target)?;
    let mut schedule = DistillationSchedule {
        k: protocol.k(),
        base_error: eps,
        levels: 0,
        per_level_errors: Vec::new(),
        per_level_repetitions: Vec::new(),
        rule,
    };
    if target >= eps {
        return Ok(schedule);
    }
    let th = protocol.threshold(tol)?;
    if eps >= th {
        return Err(DistillationError::AboveThreshold { eps, threshold: th });
    }
    let levels = match rule {
        LevelRule::Composition => compose_until(|e| protocol.output_error_at(e), eps, target)?.len(),
        LevelRule::PaperFormula => {
            let ratio = libm::log(target) / libm::log(protocol.output_error_at(eps));
            libm::ceil(ratio).max(1.0) as usize
        }
    };
    let mut current = eps;
    for _ in 0..levels {
        schedule.per_level_repetitions.push(protocol.expected_repetitions(current));
        current = protocol.output_error_at(current);
        schedule.per_level_errors.push(current);
    }
    schedule.levels = levels;
    Ok(schedule)
}

/// T count of Selinger's Z-rotation synthesis, `⌈11 + 4 log2(1/ε_qc)⌉`.
pub fn selinger_t_count(eps_qc: f64) -> Result<u64, DistillationError> {
    if !(eps_qc > 0.0 && eps_qc < 1.0) {
        return Err(DistillationError::InvalidErrorRate(eps_qc));
    }
    Ok(libm::ceil(11.0 + 4.0 * libm::log2(1.0 / eps_qc)) as u64)
}

/// Asymptotic distillation exponent `log_3(2^(k+2) - 1)`.
pub fn asymptotic_beta(k: u32) -> f64 {
    libm::log(code_size(k) as f64) / libm::log(3.0)
}

/// Coefficients of the MEK 10-to-2 step functions, ascending powers of ε.
#[derive(Debug, Clone, PartialEq)]
pub struct MekParameters {
    pub acceptance: Vec<f64>,
    pub output_error: Vec<f64>,
    pub source: String,
}

impl MekParameters {
    /// Stand-in step functions (`6ε²` error, `1 - 8ε` acceptance). Not taken from the
    /// MEK protocol itself; replace with real coefficients before quoting results.
    pub fn placeholder() -> Self {
        Self {
            acceptance: alloc::vec![1.0, -8.0],
            output_error: alloc::vec![0.0, 0.0, 6.0],
            source: String::from(PLACEHOLDER_SOURCE),
        }
    }

    pub fn is_placeholder(&self) -> bool {
        self.source == PLACEHOLDER_SOURCE
    }
}

pub const PLACEHOLDER_SOURCE: &str = "NON-AUTHORITATIVE placeholder";

#[derive(Debug, Clone, PartialEq)]
enum StepKind {
    Cisc(CiscProtocol),
    Polynomial { output_error: Vec<f64>, acceptance: Vec<f64> },
}

fn horner(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
}

/// One round of a distillation protocol as consumed by resource counts.
#[derive(Debug, Clone, PartialEq)]
pub struct DistillationStepModel {
    pub label: String,
    pub inputs_per_round: usize,
    pub outputs_per_round: usize,
    /// False for placeholder parameters.
    pub authoritative: bool,
    kind: StepKind,
}

impl DistillationStepModel {
    /// The `Z_k` protocol on shortened QRM(1, k+2).
    pub fn cisc(k: u32) -> Result<Self, DistillationError> {
        let protocol = CiscProtocol::new(k)?;
        Ok(Self {
            label: alloc::format!("qrm{}", protocol.inputs_per_round()),
            inputs_per_round: protocol.inputs_per_round(),
            outputs_per_round: 1,
            authoritative: true,
            kind: StepKind::Cisc(protocol),
        })
    }

    /// 15-to-1 T-state distillation.
    pub fn qrm15() -> Self {
        Self::cisc(2).expect("k = 2 is in range")
    }

    pub fn output_error_at(&self, eps: f64) -> f64 {
        match &self.kind {
            StepKind::Cisc(p) => p.output_error_at(eps),
            StepKind::Polynomial { output_error, .. } => horner(output_error, eps),
        }
    }

    pub fn acceptance_at(&self, eps: f64) -> f64 {
        match &self.kind {
            StepKind::Cisc(p) => p.acceptance_at(eps),
            StepKind::Polynomial { acceptance, .. } => horner(acceptance, eps),
        }
    }

    /// The underlying `Z_k` protocol, if this is one.
    pub fn cisc_protocol(&self) -> Option<&CiscProtocol> {
        match &self.kind {
            StepKind::Cisc(p) => Some(p),
            StepKind::Polynomial { .. } => None,
        }
    }

    /// Lowest power of ε with a nonzero output-error coefficient.
    pub fn output_error_order(&self) -> Option<usize> {
        match &self.kind {
            StepKind::Cisc(_) => Some(3),
            StepKind::Polynomial { output_error, .. } => output_error.iter().position(|&c| c != 0.0),
        }
    }

    /// Fixed point of the output-error map, limited to where acceptance stays positive.
    pub fn threshold(&self, tol: f64) -> Result<f64, DistillationError> {
        match &self.kind {
            StepKind::Cisc(p) => p.threshold(tol),
            StepKind::Polynomial { acceptance, output_error } => {
                // acceptance must stay positive; its first root caps the usable range
                let acceptance_root = if horner(acceptance, 0.5) <= 0.0 {
                    fixed_point_threshold(|e| e - horner(acceptance, e), 0.5, tol)?
                } else {
                    0.5
                };
                match fixed_point_threshold(|e| horner(output_error, e), 0.5, tol) {
                    Ok(t) => Ok(t.min(acceptance_root)),
                    Err(DistillationError::NoSignChange) => Ok(acceptance_root),
                    Err(e) => Err(e),
                }
            }
        }
    }
}

/// The MEK 10-to-2 protocol with externally supplied step functions.
pub fn mek_model(params: &MekParameters) -> Result<DistillationStepModel, DistillationError> {
    let a0 = params.acceptance.first().copied().unwrap_or(0.0);
    if a0 != 1.0 {
        return Err(DistillationError::AnchorViolated("acceptance(0) must equal 1"));
    }
    let e0 = params.output_error.first().copied().unwrap_or(0.0);
    if e0 != 0.0 {
        return Err(DistillationError::AnchorViolated("output_error(0) must equal 0"));
    }
    if params.output_error.iter().all(|&c| c == 0.0) {
        return Err(DistillationError::AnchorViolated("output_error must not vanish identically"));
    }
    let authoritative = !params.is_placeholder();
    let mut label = String::from("mek10to2");
    if !authoritative {
        label.push_str(" [NON-AUTHORITATIVE]");
    }
    Ok(DistillationStepModel {
        label,
        inputs_per_round: 10,
        outputs_per_round: 2,
        authoritative,
        kind: StepKind::Polynomial { output_error: params.output_error.clone(), acceptance: params.acceptance.clone() },
    })
}

//! Expected resource-state counts for synthesizing `Z_k` to a target error,
//! either by compiling into Clifford+T with distilled T states (RISC) or by
//! distilling `Z_k|+⟩` states directly and teleporting them (CISC).

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::distillation::{
    levels_required_with, selinger_t_count, CiscProtocol, DistillationError, DistillationStepModel, LevelRule,
    DEFAULT_BISECTION_TOL, MAX_CISC_K, MIN_CISC_K,
};

/// Recursion depth guard for distillation chains.
const MAX_CHAIN_LEVELS: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub enum ResourceError {
    Budget(BudgetError),
    Distillation(DistillationError),
    KTooSmall(u32),
    EmptyGrid,
}

impl fmt::Display for ResourceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResourceError::Budget(e) => write!(f, "{e}"),
            ResourceError::Distillation(e) => write!(f, "{e}"),
            ResourceError::KTooSmall(k) => write!(f, "CISC counts need k >= 2, got {k}"),
            ResourceError::EmptyGrid => write!(f, "sweep grid is empty"),
        }
    }
}

impl From<DistillationError> for ResourceError {
    fn from(e: DistillationError) -> Self {
        ResourceError::Distillation(e)
    }
}

impl From<BudgetError> for ResourceError {
    fn from(e: BudgetError) -> Self {
        ResourceError::Budget(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BudgetError {
    OutOfRange { name: &'static str, value: f64 },
    CompilingSplit { c_qc: f64, c_t: f64 },
    CorrectionSplit { c1: f64, c2: f64 },
}

impl fmt::Display for BudgetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BudgetError::OutOfRange { name, value } => write!(f, "{name} = {value} is not in (0, 1)"),
            BudgetError::CompilingSplit { c_qc, c_t } => write!(f, "C_qc + C_T = {} exceeds 1", c_qc + c_t),
            BudgetError::CorrectionSplit { c1, c2 } => write!(f, "C_1 + C_2 = {} exceeds 1", c1 + c2),
        }
    }
}

/// Splits of the target error.
///
/// `c_qc` goes to compiling and `c_t` to the T states (RISC); `c1` goes to the
/// distilled `Z_k` states and `c2` to the `Z_(k-1)` corrections (CISC).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorBudget {
    c_qc: f64,
    c_t: f64,
    c1: f64,
    c2: f64,
}

impl ErrorBudget {
    pub fn new(c_qc: f64, c_t: f64, c1: f64, c2: f64) -> Result<Self, BudgetError> {
        for (name, value) in [("C_qc", c_qc), ("C_T", c_t), ("C_1", c1), ("C_2", c2)] {
            if !(value > 0.0 && value < 1.0) {
                return Err(BudgetError::OutOfRange { name, value });
            }
        }
        if c_qc + c_t > 1.0 {
            return Err(BudgetError::CompilingSplit { c_qc, c_t });
        }
        if c1 + c2 > 1.0 {
            return Err(BudgetError::CorrectionSplit { c1, c2 });
        }
        Ok(Self { c_qc, c_t, c1, c2 })
    }

    pub fn c_qc(&self) -> f64 {
        self.c_qc
    }

    pub fn c_t(&self) -> f64 {
        self.c_t
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }
}

impl Default for ErrorBudget {
    fn default() -> Self {
        Self { c_qc: 0.5, c_t: 0.5, c1: 0.5, c2: 0.5 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Architecture {
    Risc,
    Cisc,
}

impl Architecture {
    pub fn as_str(self) -> &'static str {
        match self {
            Architecture::Risc => "RISC",
            Architecture::Cisc => "CISC",
        }
    }
}

/// How repeat-until-success factors enter the counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CountMode {
    /// A single factor `E[t(ε)]` at the bare error rate, and the closed base
    /// `n(2, ℓ) = E[t(ε)]·15^ℓ`.
    Paper,
    /// `E[t]` evaluated at the input error of each level, `n(k, 0) = 1`.
    Exact,
}

impl CountMode {
    pub fn as_str(self) -> &'static str {
        match self {
            CountMode::Paper => "paper",
            CountMode::Exact => "exact",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResourceEstimate {
    pub architecture: Architecture,
    /// Rotation index; RISC counts do not depend on it.
    pub k: Option<u32>,
    pub eps: f64,
    pub eps_target: f64,
    pub levels: usize,
    pub expected_states: f64,
    pub distiller_label: String,
    pub level_rule: LevelRule,
    pub count_mode: CountMode,
    /// T gates in the compiled circuit (RISC only).
    pub t_count: Option<u64>,
}

/// Levels and expected bare states per output of a chain of identical rounds.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainCost {
    pub levels: usize,
    pub errors: Vec<f64>,
    pub cost: f64,
}

fn check_eps(eps: f64, target: f64) -> Result<(), DistillationError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(DistillationError::InvalidErrorRate(eps));
    }
    if !(target > 0.0) {
        return Err(DistillationError::InvalidTarget(target));
    }
    Ok(())
}

/// Error after each round, until `target` is reached.
fn compose(model: &DistillationStepModel, eps: f64, target: f64) -> Result<Vec<f64>, DistillationError> {
    let mut errors = alloc::vec![eps];
    let mut current = eps;
    while current > target {
        let next = model.output_error_at(current);
        if !(next < current) || errors.len() > MAX_CHAIN_LEVELS {
            return Err(DistillationError::Unreachable { target, reached: current });
        }
        errors.push(next);
        current = next;
    }
    Ok(errors)
}

/// Cheapest chain of `model` rounds bringing `eps` down to `target`.
///
/// Each round consumes `inputs/outputs` states per output and is repeated
/// `1/a(ε_i)` times on average, so `cost(ℓ) = (in/out)·cost(ℓ-1)/a(ε_(ℓ-1))`
/// with `cost(0) = 1`. In paper mode a QRM chain is charged
/// `E[t(ε)]·n^ℓ` instead.
pub fn distillation_chain(
    model: &DistillationStepModel,
    eps: f64,
    target: f64,
    mode: CountMode,
) -> Result<ChainCost, DistillationError> {
    check_eps(eps, target)?;
    if target >= eps {
        return Ok(ChainCost { levels: 0, errors: alloc::vec![eps], cost: 1.0 });
    }
    let th = model.threshold(DEFAULT_BISECTION_TOL)?;
    if eps >= th {
        return Err(DistillationError::AboveThreshold { eps, threshold: th });
    }
    let errors = compose(model, eps, target)?;
    let levels = errors.len() - 1;
    let ratio = model.inputs_per_round as f64 / model.outputs_per_round as f64;
    let cost = match (mode, model.cisc_protocol()) {
        (CountMode::Paper, Some(p)) => p.expected_repetitions(eps) * libm::pow(ratio, levels as f64),
        _ => errors[..levels].iter().fold(1.0, |acc, &e| acc * ratio / model.acceptance_at(e)),
    };
    Ok(ChainCost { levels, errors, cost })
}

/// Chain of a MEK-style step model; always uses the per-level recursion.
pub fn mek_chain(target: f64, eps: f64, model: &DistillationStepModel) -> Result<ChainCost, DistillationError> {
    distillation_chain(model, eps, target, CountMode::Exact)
}

/// RISC cost: compile `Z_k` into `n_T` T gates and distill each T state to
/// `C_T ε'/n_T`.
pub fn risc_count(
    eps_target: f64,
    eps: f64,
    budget: &ErrorBudget,
    distiller: &DistillationStepModel,
    mode: CountMode,
) -> Result<ResourceEstimate, ResourceError> {
    check_eps(eps, eps_target)?;
    let n_t = selinger_t_count(budget.c_qc * eps_target)?;
    let per_state = budget.c_t * eps_target / n_t as f64;
    let chain = distillation_chain(distiller, eps, per_state, mode)?;
    Ok(ResourceEstimate {
        architecture: Architecture::Risc,
        k: None,
        eps,
        eps_target,
        levels: chain.levels,
        expected_states: n_t as f64 * chain.cost,
        distiller_label: distiller.label.clone(),
        level_rule: LevelRule::Composition,
        count_mode: mode,
        t_count: Some(n_t),
    })
}

fn check_cisc_k(k: u32) -> Result<(), ResourceError> {
    if k < MIN_CISC_K {
        return Err(ResourceError::KTooSmall(k));
    }
    if k > MAX_CISC_K {
        return Err(DistillationError::KOutOfRange(k).into());
    }
    Ok(())
}

/// The `Z_j` protocols for `2 <= j <= k`, built once and reused across counts.
#[derive(Debug, Clone)]
pub struct CiscFamily {
    protocols: Vec<CiscProtocol>,
}

impl CiscFamily {
    pub fn new(max_k: u32) -> Result<Self, ResourceError> {
        check_cisc_k(max_k)?;
        let protocols = (MIN_CISC_K..=max_k).map(CiscProtocol::new).collect::<Result<_, _>>()?;
        Ok(Self { protocols })
    }

    pub fn max_k(&self) -> u32 {
        MIN_CISC_K + self.protocols.len() as u32 - 1
    }

    pub fn protocol(&self, k: u32) -> Result<&CiscProtocol, ResourceError> {
        check_cisc_k(k)?;
        self.protocols
            .get((k - MIN_CISC_K) as usize)
            .ok_or(ResourceError::Distillation(DistillationError::KOutOfRange(k)))
    }

    /// See [`cisc_count`].
    pub fn count(&self, k: u32, levels: usize, eps: f64, mode: CountMode) -> Result<f64, ResourceError> {
        self.protocol(k)?;
        if !(0.0..1.0).contains(&eps) {
            return Err(DistillationError::InvalidErrorRate(eps).into());
        }
        // table[j - 2][l] = n(j, l)
        let mut table: Vec<Vec<f64>> = Vec::with_capacity(k as usize - 1);
        for j in MIN_CISC_K..=k {
            let protocol = self.protocol(j)?;
            let n = protocol.inputs_per_round() as f64;
            let mut repetitions = Vec::with_capacity(levels);
            let mut current = eps;
            for _ in 0..levels {
                repetitions.push(match mode {
                    CountMode::Paper => protocol.expected_repetitions(eps),
                    CountMode::Exact => protocol.expected_repetitions(current),
                });
                current = protocol.output_error_at(current);
            }
            let lower = |l: usize| if j == MIN_CISC_K { 0.0 } else { table[(j - 3) as usize][l] };
            let mut row = Vec::with_capacity(levels + 1);
            if j == MIN_CISC_K && mode == CountMode::Paper {
                let e = protocol.expected_repetitions(eps);
                row.extend((0..=levels).map(|l| e * libm::pow(n, l as f64)));
            } else {
                row.push(1.0);
                for l in 1..=levels {
                    let value = n * (row[l - 1] + 0.5 * lower(l - 1)) * repetitions[l - 1] + 0.5 * lower(l);
                    row.push(value);
                }
            }
            table.push(row);
        }
        Ok(table[(k - MIN_CISC_K) as usize][levels])
    }

    /// See [`cisc_for_target`].
    pub fn for_target(
        &self,
        k: u32,
        eps: f64,
        eps_target: f64,
        budget: &ErrorBudget,
        mode: CountMode,
        rule: LevelRule,
    ) -> Result<ResourceEstimate, ResourceError> {
        let protocol = self.protocol(k)?;
        check_eps(eps, eps_target)?;
        let (levels, expected_states) = if eps_target >= eps {
            (0, teleport_only_count(k))
        } else {
            let tol = DEFAULT_BISECTION_TOL;
            let mut levels = levels_required_with(protocol, eps, budget.c1 * eps_target, rule, tol)?.levels;
            if k > MIN_CISC_K {
                let lower = self.protocol(k - 1)?;
                levels = levels.max(levels_required_with(lower, eps, budget.c2 * eps_target, rule, tol)?.levels);
            }
            (levels, self.count(k, levels, eps, mode)?)
        };
        Ok(ResourceEstimate {
            architecture: Architecture::Cisc,
            k: Some(k),
            eps,
            eps_target,
            levels,
            expected_states,
            distiller_label: alloc::format!("qrm{}", protocol.inputs_per_round()),
            level_rule: rule,
            count_mode: mode,
            t_count: None,
        })
    }
}

/// Expected bare `Z_j|+⟩` states for one `Z_k` gate from states distilled `ℓ` times.
///
/// `n(k,ℓ) = (2^(k+2)-1)[n(k,ℓ-1) + ½n(k-1,ℓ-1)]·E[t] + ½n(k-1,ℓ)`, with
/// `n(1,·) = 0` because `Z_1 = S` is a stabilizer gate and `n(k,0) = 1`.
/// Paper mode keeps `E[t(ε)]` fixed and uses `n(2,ℓ) = E[t(ε)]·15^ℓ`; exact mode
/// evaluates `E[t]` at the error of the states entering each level.
pub fn cisc_count(k: u32, levels: usize, eps: f64, mode: CountMode) -> Result<f64, ResourceError> {
    CiscFamily::new(k)?.count(k, levels, eps, mode)
}

/// Cost of teleporting a bare `Z_k|+⟩` with bare corrections: `T(k) = 1 + ½T(k-1)`, `T(1) = 0`.
pub fn teleport_only_count(k: u32) -> f64 {
    (2..=k).fold(0.0, |acc, _| 1.0 + 0.5 * acc)
}

/// CISC cost of one `Z_k` at error `ε_target`.
///
/// The `Z_k` states get budget `C_1 ε'` and the `Z_(k-1)` corrections `C_2 ε'`;
/// both are distilled to the same number of levels, the larger of the two
/// requirements. A target at or above `ε` needs no distillation.
pub fn cisc_for_target(
    k: u32,
    eps: f64,
    eps_target: f64,
    budget: &ErrorBudget,
    mode: CountMode,
    rule: LevelRule,
) -> Result<ResourceEstimate, ResourceError> {
    CiscFamily::new(k)?.for_target(k, eps, eps_target, budget, mode, rule)
}

/// RISC and CISC estimates over a grid of `k` and targets.
///
/// RISC rows are repeated per `k` (with `k` set) for each distiller, so a
/// plot can pair them with the CISC curve of the same `k`.
pub fn sweep(
    k_list: &[u32],
    eps: f64,
    targets: &[f64],
    budget: &ErrorBudget,
    distillers: &[DistillationStepModel],
    mode: CountMode,
) -> Result<Vec<ResourceEstimate>, ResourceError> {
    if k_list.is_empty() || targets.is_empty() {
        return Err(ResourceError::EmptyGrid);
    }
    let family = CiscFamily::new(k_list.iter().copied().max().unwrap_or(MIN_CISC_K).max(MIN_CISC_K))?;
    let mut rows = Vec::new();
    let mut risc: Vec<Vec<ResourceEstimate>> = Vec::with_capacity(distillers.len());
    for d in distillers {
        risc.push(targets.iter().map(|&t| risc_count(t, eps, budget, d, mode)).collect::<Result<_, _>>()?);
    }
    for &k in k_list {
        for &t in targets {
            rows.push(family.for_target(k, eps, t, budget, mode, LevelRule::Composition)?);
        }
        for per_distiller in &risc {
            rows.extend(per_distiller.iter().map(|r| ResourceEstimate { k: Some(k), ..r.clone() }));
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distillation::{mek_model, MekParameters};

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(a.abs())
    }

    #[test]
    fn budget_invariants() {
        assert!(ErrorBudget::new(0.5, 0.5, 0.5, 0.5).is_ok());
        assert_eq!(ErrorBudget::default(), ErrorBudget::new(0.5, 0.5, 0.5, 0.5).unwrap());
        assert!(matches!(ErrorBudget::new(0.6, 0.5, 0.5, 0.5), Err(BudgetError::CompilingSplit { .. })));
        assert!(matches!(ErrorBudget::new(0.5, 0.5, 0.7, 0.5), Err(BudgetError::CorrectionSplit { .. })));
        assert!(matches!(ErrorBudget::new(0.0, 0.5, 0.5, 0.5), Err(BudgetError::OutOfRange { name: "C_qc", .. })));
    }

    #[test]
    fn zero_error_limit_is_integral() {
        assert_eq!(cisc_count(3, 1, 0.0, CountMode::Paper).unwrap(), 54.0);
        assert_eq!(cisc_count(3, 1, 0.0, CountMode::Exact).unwrap(), 54.0);
        assert_eq!(cisc_count(2, 2, 0.0, CountMode::Exact).unwrap(), 225.0);
        assert_eq!(cisc_count(4, 0, 0.0, CountMode::Exact).unwrap(), 1.0);
        // n(4,1) = 63·(1 + ½) + ½·54
        assert_eq!(cisc_count(4, 1, 0.0, CountMode::Paper).unwrap(), 63.0 * 1.5 + 27.0);
        assert_eq!(cisc_count(1, 1, 0.0, CountMode::Paper), Err(ResourceError::KTooSmall(1)));
    }

    #[test]
    fn paper_base_formula() {
        let eps = 1e-4;
        let e = CiscProtocol::new(2).unwrap().expected_repetitions(eps);
        for l in 0..=4 {
            let n = cisc_count(2, l, eps, CountMode::Paper).unwrap();
            assert!(close(n, e * 15f64.powi(l as i32), 1e-15));
        }
    }

    #[test]
    fn teleport_only() {
        assert_eq!(teleport_only_count(1), 0.0);
        assert_eq!(teleport_only_count(2), 1.0);
        assert_eq!(teleport_only_count(3), 1.5);
        assert_eq!(teleport_only_count(4), 1.75);
    }

    #[test]
    fn cisc_targets() {
        let b = ErrorBudget::default();
        let r = cisc_for_target(3, 1e-4, 1e-8, &b, CountMode::Paper, LevelRule::Composition).unwrap();
        assert_eq!(r.levels, 1);
        let r = cisc_for_target(2, 1e-4, 1e-10, &b, CountMode::Paper, LevelRule::Composition).unwrap();
        assert_eq!(r.levels, 1);
        assert!(close(r.expected_states, 15.0225, 1e-4), "{}", r.expected_states);
        let r = cisc_for_target(4, 1e-4, 1e-3, &b, CountMode::Exact, LevelRule::Composition).unwrap();
        assert_eq!((r.levels, r.expected_states), (0, 1.75));
        assert!(cisc_for_target(3, 0.2, 1e-8, &b, CountMode::Exact, LevelRule::Composition).is_err());
    }

    #[test]
    fn risc_anchor() {
        let b = ErrorBudget::default();
        let qrm15 = DistillationStepModel::qrm15();
        let r = risc_count(1e-10, 1e-4, &b, &qrm15, CountMode::Paper).unwrap();
        assert_eq!(r.t_count, Some(148));
        assert_eq!(r.levels, 2);
        let e = CiscProtocol::new(2).unwrap().expected_repetitions(1e-4);
        assert!(close(r.expected_states, 148.0 * 225.0 * e, 1e-12));
        let r = risc_count(1e-1, 1e-4, &b, &qrm15, CountMode::Exact).unwrap();
        assert_eq!(r.levels, 0);
        assert_eq!(r.expected_states, r.t_count.unwrap() as f64);
    }

    #[test]
    fn mek_chain_recursion() {
        let model = mek_model(&MekParameters::placeholder()).unwrap();
        let c = mek_chain(1e-3, 1e-4, &model).unwrap();
        assert_eq!((c.levels, c.cost), (0, 1.0));
        let eps = 1e-4;
        let c = mek_chain(1e-9, eps, &model).unwrap();
        assert_eq!(c.levels, 2);
        let e1 = model.output_error_at(eps);
        let expect = 25.0 / (model.acceptance_at(eps) * model.acceptance_at(e1));
        assert!(close(c.cost, expect, 1e-14));
        let c = mek_chain(1e-5, 1e-9, &model);
        assert!(c.is_ok());
    }

    #[test]
    fn sweep_shape_and_monotonicity() {
        let targets: Vec<f64> = (5..=30).map(|p| 10f64.powi(-p)).collect();
        let rows = sweep(&[3, 4], 1e-4, &targets, &ErrorBudget::default(), &[DistillationStepModel::qrm15()], CountMode::Paper)
            .unwrap();
        assert_eq!(rows.len(), 2 * 2 * targets.len());
        let risc3: Vec<f64> = rows
            .iter()
            .filter(|r| r.architecture == Architecture::Risc && r.k == Some(3))
            .map(|r| r.expected_states)
            .collect();
        let risc4: Vec<f64> = rows
            .iter()
            .filter(|r| r.architecture == Architecture::Risc && r.k == Some(4))
            .map(|r| r.expected_states)
            .collect();
        assert_eq!(risc3, risc4);
        assert!(risc3.windows(2).all(|w| w[1] >= w[0]));
        let cisc: Vec<f64> = rows
            .iter()
            .filter(|r| r.architecture == Architecture::Cisc && r.k == Some(3))
            .map(|r| r.expected_states)
            .collect();
        assert!(cisc.windows(2).all(|w| w[1] >= w[0]));
        assert!(sweep(&[], 1e-4, &targets, &ErrorBudget::default(), &[], CountMode::Paper).is_err());
    }
}

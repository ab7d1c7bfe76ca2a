use alloc::vec::Vec;
use core::fmt;

use super::circuit::{CliffordCircuit, Op};
use super::encoder::{synthesize_encoder, Encoder};
use super::frame::Fault;
use crate::codes::{distillation_code, CssCode};
use crate::gf2::{BitMatrix, BitVector};

/// Largest `k` whose distillation circuit can be built (code length `2^(k+2) - 1`).
pub const MAX_TEMPLATE_K: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TemplateError {
    KOutOfRange(u32),
}

impl fmt::Display for TemplateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TemplateError::KOutOfRange(k) => write!(f, "k = {k} outside template range 2..={MAX_TEMPLATE_K}"),
        }
    }
}

/// Gate teleportation of `Z_k` through a `Z_k|+⟩` resource.
///
/// Wire 0 holds the data, wire 1 the magic state. After the CNOT from data to
/// magic wire and a Z measurement of the magic wire, outcome 1 leaves
/// `Z_k^†` on the data and is fixed by `Z_(k-1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZkTeleport {
    pub k: u32,
    pub circuit: CliffordCircuit,
    pub data: usize,
    pub magic: usize,
    /// Index of the conditional correction inside `circuit`.
    pub correction_index: usize,
}

impl ZkTeleport {
    /// Correction applied for a measurement outcome.
    pub fn correction_for(&self, outcome: bool) -> Option<&Op> {
        outcome.then(|| &self.circuit.ops()[self.correction_index])
    }

    /// The concrete circuit executed for a measurement outcome.
    pub fn branch(&self, outcome: bool) -> CliffordCircuit {
        let ops = self
            .circuit
            .ops()
            .iter()
            .enumerate()
            .filter(|(i, _)| outcome || *i != self.correction_index)
            .map(|(_, op)| op.clone())
            .collect();
        CliffordCircuit::from_ops(2, ops).expect("branch of a valid template")
    }

    /// Each outcome is equally likely, so the correction is needed half the time.
    pub fn correction_probability(&self) -> f64 {
        0.5
    }
}

/// The correction gate `Z_(k-1)` on `qubit`; `Z_1` is the Clifford `S`.
pub fn correction_gate(k: u32, qubit: usize) -> Op {
    match k {
        2 => Op::S(qubit),
        _ => Op::InjectZk { qubit, k: k - 1, adaptive_correction: true },
    }
}

pub fn build_zk_teleport(k: u32) -> Result<ZkTeleport, TemplateError> {
    if k < 2 {
        return Err(TemplateError::KOutOfRange(k));
    }
    let (data, magic) = (0, 1);
    let ops = alloc::vec![
        Op::PrepPlus(magic),
        Op::InjectZk { qubit: magic, k, adaptive_correction: false },
        Op::Cnot { control: data, targets: alloc::vec![magic] },
        Op::MeasureZ(magic),
        correction_gate(k, data),
    ];
    let circuit = CliffordCircuit::from_ops(2, ops).expect("fixed template is valid");
    Ok(ZkTeleport { k, circuit, data, magic, correction_index: 4 })
}

/// One distillation round for `Z_k^†|+⟩` states.
///
/// Qubits `0..n` form the shortened QRM(1, k+2) block, qubit `n` is the output.
/// The output and the encoder input share a Bell pair, the block receives a
/// transversal `Z_k` from `n` injected states and is read out with X
/// measurements. The run is accepted when every X check has even parity; the
/// parity over all qubits is the logical readout that fixes the output. With
/// `Z_k^†` inputs the same circuit outputs `Z_k|+⟩`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistillationCircuit {
    pub k: u32,
    pub code: CssCode,
    pub encoder: Encoder,
    pub circuit: CliffordCircuit,
    pub output: usize,
    /// Op index of each injection, one per code qubit.
    pub injection_ops: Vec<usize>,
    /// Parity checks over measurement outcomes that must all be even.
    pub checks: BitMatrix,
    /// Measurement parity that decides the output correction.
    pub logical_readout: BitVector,
}

impl DistillationCircuit {
    pub fn code_length(&self) -> usize {
        self.code.n()
    }

    /// A Z error just after each injected gate: the dephasing input-error model.
    pub fn error_sites(&self) -> Vec<Fault> {
        self.injection_ops
            .iter()
            .enumerate()
            .map(|(q, &op)| Fault::z_after(op, q))
            .collect()
    }

    pub fn readout(&self) -> Readout {
        Readout { checks: self.checks.clone(), logical: self.logical_readout.clone(), output: self.output }
    }
}

/// How measurement flips and the output frame are turned into accept/error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Readout {
    pub checks: BitMatrix,
    pub logical: BitVector,
    pub output: usize,
}

pub fn build_distillation_circuit(k: u32) -> Result<DistillationCircuit, TemplateError> {
    if !(2..=MAX_TEMPLATE_K).contains(&k) {
        return Err(TemplateError::KOutOfRange(k));
    }
    let code = distillation_code(k).expect("family code exists for template k");
    let encoder = synthesize_encoder(&code).expect("family code has one logical qubit");
    let n = code.n();
    let output = n;
    let mut c = CliffordCircuit::new(n + 1);
    c.push(Op::PrepPlus(output));
    c.push(Op::PrepZero(encoder.input));
    c.extend(encoder.circuit.ops().iter().filter(|op| matches!(op, Op::PrepZero(_) | Op::PrepPlus(_))).cloned());
    c.push(Op::Cnot { control: output, targets: alloc::vec![encoder.input] });
    c.extend(encoder.unitary_ops().cloned());
    let mut injection_ops = Vec::with_capacity(n);
    for q in 0..n {
        injection_ops.push(c.len());
        c.push(Op::InjectZk { qubit: q, k, adaptive_correction: false });
    }
    for q in 0..n {
        c.push(Op::MeasureX(q));
    }
    c.validate().expect("template is valid");
    Ok(DistillationCircuit {
        k,
        checks: code.hx().clone(),
        logical_readout: BitVector::ones(n),
        code,
        encoder,
        circuit: c,
        output,
        injection_ops,
    })
}

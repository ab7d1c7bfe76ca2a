use alloc::vec::Vec;
use core::fmt;

use super::circuit::{CircuitError, CliffordCircuit, Op};
use super::frame::{conjugate, PauliFrame};
use crate::codes::CssCode;
use crate::gf2::{row_reduce, BitMatrix, BitVector};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EncoderError {
    LogicalCount(usize),
    NoLogicalX,
    Circuit(CircuitError),
}

impl fmt::Display for EncoderError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EncoderError::LogicalCount(k) => write!(f, "encoder needs a one-qubit code, got {k} logical qubits"),
            EncoderError::NoLogicalX => write!(f, "no logical X operator found"),
            EncoderError::Circuit(e) => write!(f, "{e}"),
        }
    }
}

impl From<CircuitError> for EncoderError {
    fn from(e: CircuitError) -> Self {
        EncoderError::Circuit(e)
    }
}

/// Encoding circuit for a one-qubit CSS code.
///
/// Wire `input` carries the logical state; every other wire is prepared by the
/// circuit itself (`|+⟩` on the pivot columns of the reduced X checks, `|0⟩`
/// elsewhere).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Encoder {
    pub circuit: CliffordCircuit,
    pub input: usize,
    pub plus_wires: Vec<usize>,
    pub zero_wires: Vec<usize>,
}

impl Encoder {
    /// The gate part, without preparations.
    pub fn unitary_ops(&self) -> impl Iterator<Item = &Op> {
        self.circuit.ops().iter().filter(|op| matches!(op, Op::Cnot { .. }))
    }
}

fn kernel_basis(m: &BitMatrix) -> Vec<BitVector> {
    let ech = row_reduce(m);
    let n = m.col_count();
    let mut basis = Vec::new();
    for free in (0..n).filter(|c| !ech.pivot_columns.contains(c)) {
        let mut v = BitVector::zeros(n);
        v.set(free, true);
        for (row, &p) in ech.reduced.rows().iter().zip(&ech.pivot_columns) {
            if row.get(free) {
                v.set(p, true);
            }
        }
        basis.push(v);
    }
    basis
}

fn logical_x_of(code: &CssCode) -> Result<BitVector, EncoderError> {
    if let Some(x) = code.logical_x() {
        return Ok(x.clone());
    }
    kernel_basis(code.hz())
        .into_iter()
        .find(|v| !code.hx().rowspan_contains(v))
        .ok_or(EncoderError::NoLogicalX)
}

/// Standard-form encoder built from the reduced X checks.
///
/// The logical X representative is reduced so it vanishes on every pivot; its
/// first remaining qubit becomes the input wire, which fans out over the
/// representative. Each pivot wire then copies `X` onto its check row.
pub fn synthesize_encoder(code: &CssCode) -> Result<Encoder, EncoderError> {
    if code.k_logical() != 1 {
        return Err(EncoderError::LogicalCount(code.k_logical()));
    }
    let n = code.n();
    let ech = row_reduce(code.hx());
    let lx = ech.reduce_vector(&logical_x_of(code)?);
    let input = lx.first_one().ok_or(EncoderError::NoLogicalX)?;
    let plus_wires = ech.pivot_columns.clone();
    let zero_wires: Vec<usize> = (0..n).filter(|q| *q != input && !plus_wires.contains(q)).collect();

    let mut ops = Vec::new();
    ops.extend(zero_wires.iter().map(|&q| Op::PrepZero(q)));
    ops.extend(plus_wires.iter().map(|&q| Op::PrepPlus(q)));
    let fan: Vec<usize> = lx.ones_iter().filter(|&q| q != input).collect();
    if !fan.is_empty() {
        ops.push(Op::Cnot { control: input, targets: fan });
    }
    for (row, &p) in ech.reduced.rows().iter().zip(&ech.pivot_columns) {
        let targets: Vec<usize> = row.ones_iter().filter(|&q| q != p).collect();
        if !targets.is_empty() {
            ops.push(Op::Cnot { control: p, targets });
        }
    }
    let circuit = CliffordCircuit::from_ops(n, ops)?;
    Ok(Encoder { circuit, input, plus_wires, zero_wires })
}

/// Conjugation check of an encoder against its code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncoderCheck {
    pub x_stabilizers_match: bool,
    pub z_stabilizers_match: bool,
    pub logical_x_ok: bool,
    pub logical_z_ok: bool,
}

impl EncoderCheck {
    pub fn passed(&self) -> bool {
        self.x_stabilizers_match && self.z_stabilizers_match && self.logical_x_ok && self.logical_z_ok
    }
}

/// Images of `X` on the `|+⟩` wires must span the X checks, images of `Z` on
/// the `|0⟩` wires the Z checks; the input wire's `X` and `Z` must map to the
/// logical operators modulo the respective checks.
pub fn verify_encoder(code: &CssCode, encoder: &Encoder) -> Result<EncoderCheck, EncoderError> {
    let n = code.n();
    let image = |p: PauliFrame| conjugate(&encoder.circuit, &p);
    let pure = |f: &PauliFrame, want_x: bool| if want_x { f.z_mask.is_zero() } else { f.x_mask.is_zero() };

    let mut xs = BitMatrix::empty(n);
    let mut pure_ok = true;
    for &q in &encoder.plus_wires {
        let f = image(PauliFrame::single_x(n, q))?;
        pure_ok &= pure(&f, true);
        xs.push_row(f.x_mask).expect("row length n");
    }
    let mut zs = BitMatrix::empty(n);
    for &q in &encoder.zero_wires {
        let f = image(PauliFrame::single_z(n, q))?;
        pure_ok &= pure(&f, false);
        zs.push_row(f.z_mask).expect("row length n");
    }
    let x_stabilizers_match = pure_ok && xs.same_rowspan(code.hx()) && xs.rank() == xs.row_count();
    let z_stabilizers_match = pure_ok && zs.same_rowspan(code.hz()) && zs.rank() == zs.row_count();

    let lx = logical_x_of(code)?;
    let fx = image(PauliFrame::single_x(n, encoder.input))?;
    let mut diff = fx.x_mask.clone();
    diff.xor_assign(&lx);
    let logical_x_ok = fx.z_mask.is_zero() && (diff.is_zero() || code.hx().rowspan_contains(&diff));

    let fz = image(PauliFrame::single_z(n, encoder.input))?;
    let logical_z_ok = fz.x_mask.is_zero()
        && match code.logical_z() {
            Some(lz) => {
                let mut d = fz.z_mask.clone();
                d.xor_assign(lz);
                d.is_zero() || code.hz().rowspan_contains(&d)
            }
            None => {
                // any Z logical: commutes with the X checks, anticommutes with logical X
                code.hx().rows().iter().all(|r| !r.dot(&fz.z_mask)) && fz.z_mask.dot(&lx)
            }
        };
    Ok(EncoderCheck { x_stabilizers_match, z_stabilizers_match, logical_x_ok, logical_z_ok })
}

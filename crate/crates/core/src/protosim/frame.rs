use alloc::vec::Vec;

use super::circuit::{CircuitError, CliffordCircuit, Op};
use crate::gf2::BitVector;

/// X and Z error masks over a qubit register, phases dropped.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliFrame {
    pub x_mask: BitVector,
    pub z_mask: BitVector,
}

impl PauliFrame {
    pub fn identity(qubits: usize) -> Self {
        Self { x_mask: BitVector::zeros(qubits), z_mask: BitVector::zeros(qubits) }
    }

    pub fn new(x_mask: BitVector, z_mask: BitVector) -> Self {
        assert_eq!(x_mask.len(), z_mask.len(), "frame masks differ in length");
        Self { x_mask, z_mask }
    }

    pub fn single_x(qubits: usize, q: usize) -> Self {
        let mut f = Self::identity(qubits);
        f.x_mask.set(q, true);
        f
    }

    pub fn single_z(qubits: usize, q: usize) -> Self {
        let mut f = Self::identity(qubits);
        f.z_mask.set(q, true);
        f
    }

    pub fn qubit_count(&self) -> usize {
        self.x_mask.len()
    }

    pub fn is_identity(&self) -> bool {
        self.x_mask.is_zero() && self.z_mask.is_zero()
    }

    pub fn xor_assign(&mut self, other: &PauliFrame) {
        self.x_mask.xor_assign(&other.x_mask);
        self.z_mask.xor_assign(&other.z_mask);
    }
}

/// Result of pushing a frame through a circuit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Propagation {
    /// One bit per measurement, in circuit order: set when the outcome is
    /// inverted relative to the error-free run.
    pub measurement_flips: BitVector,
    pub output_frame: PauliFrame,
}

/// A Pauli error inserted just after op `after_op` (or before the first op when `None`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fault {
    pub after_op: Option<usize>,
    pub qubit: usize,
    pub x: bool,
    pub z: bool,
}

impl Fault {
    pub fn z_after(op: usize, qubit: usize) -> Self {
        Self { after_op: Some(op), qubit, x: false, z: true }
    }
}

fn apply(frame: &mut PauliFrame, op_index: usize, op: &Op, erase_on_prep: bool) -> Result<Option<bool>, CircuitError> {
    let PauliFrame { x_mask: x, z_mask: z } = frame;
    match op {
        Op::PrepZero(q) | Op::PrepPlus(q) => {
            if erase_on_prep {
                x.set(*q, false);
                z.set(*q, false);
            }
        }
        Op::Cnot { control, targets } => {
            for &t in targets {
                if x.get(*control) {
                    x.flip(t);
                }
                if z.get(t) {
                    z.flip(*control);
                }
            }
        }
        Op::H(q) => {
            let (xb, zb) = (x.get(*q), z.get(*q));
            x.set(*q, zb);
            z.set(*q, xb);
        }
        Op::S(q) | Op::SDagger(q) => {
            if x.get(*q) {
                z.flip(*q);
            }
        }
        Op::X(_) | Op::Z(_) => {}
        Op::MeasureX(q) => return Ok(Some(z.get(*q))),
        Op::MeasureZ(q) => return Ok(Some(x.get(*q))),
        Op::InjectZk { qubit, k, .. } => {
            if x.get(*qubit) {
                match k {
                    0 => {}
                    1 => z.flip(*qubit),
                    _ => return Err(CircuitError::NonCliffordPropagation { op: op_index, qubit: *qubit }),
                }
            }
        }
    }
    Ok(None)
}

/// Propagates `initial` (an error present before the first op) through the circuit.
pub fn propagate_frame(circuit: &CliffordCircuit, initial: &PauliFrame) -> Result<Propagation, CircuitError> {
    propagate_with_faults(circuit, initial, &[])
}

/// Propagation with additional faults inserted mid-circuit.
///
/// Preparations erase any error already on the prepared qubit. `Z_k` gates
/// with `k >= 2` commute with Z errors; an X error reaching one is rejected.
pub fn propagate_with_faults(
    circuit: &CliffordCircuit,
    initial: &PauliFrame,
    faults: &[Fault],
) -> Result<Propagation, CircuitError> {
    let n = circuit.qubit_count();
    if initial.qubit_count() != n {
        return Err(CircuitError::FrameSize { expected: n, found: initial.qubit_count() });
    }
    let mut frame = initial.clone();
    let inject = |frame: &mut PauliFrame, at: Option<usize>| -> Result<(), CircuitError> {
        for f in faults.iter().filter(|f| f.after_op == at) {
            if f.qubit >= n {
                return Err(CircuitError::QubitOutOfRange { op: at.unwrap_or(0), qubit: f.qubit, qubit_count: n });
            }
            if f.x {
                frame.x_mask.flip(f.qubit);
            }
            if f.z {
                frame.z_mask.flip(f.qubit);
            }
        }
        Ok(())
    };
    inject(&mut frame, None)?;
    let mut flips = Vec::with_capacity(circuit.measurement_count());
    for (i, op) in circuit.ops().iter().enumerate() {
        if let Some(flip) = apply(&mut frame, i, op, true)? {
            flips.push(flip);
        }
        inject(&mut frame, Some(i))?;
    }
    Ok(Propagation { measurement_flips: BitVector::from_bools(&flips), output_frame: frame })
}

/// Heisenberg image `U P U†` of a Pauli under the unitary part of the circuit.
///
/// Preparations and measurements are skipped, so the circuit is read as the
/// unitary that follows the initial product state.
pub fn conjugate(circuit: &CliffordCircuit, pauli: &PauliFrame) -> Result<PauliFrame, CircuitError> {
    if pauli.qubit_count() != circuit.qubit_count() {
        return Err(CircuitError::FrameSize { expected: circuit.qubit_count(), found: pauli.qubit_count() });
    }
    let mut frame = pauli.clone();
    for (i, op) in circuit.ops().iter().enumerate() {
        if op.is_measurement() {
            continue;
        }
        apply(&mut frame, i, op, false)?;
    }
    Ok(frame)
}

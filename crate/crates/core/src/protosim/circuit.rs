use alloc::vec::Vec;
use core::fmt;

/// One instruction of the stabilizer-circuit IR.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Op {
    PrepZero(usize),
    PrepPlus(usize),
    /// One control, any number of targets.
    Cnot { control: usize, targets: Vec<usize> },
    H(usize),
    S(usize),
    SDagger(usize),
    X(usize),
    Z(usize),
    MeasureX(usize),
    MeasureZ(usize),
    /// `Z_k = Z(π/2^k)` on `qubit`, realised by teleporting a `Z_k|+⟩` state.
    /// With `adaptive_correction` set the gate is the classically controlled
    /// fix-up of a preceding teleportation.
    InjectZk { qubit: usize, k: u32, adaptive_correction: bool },
}

impl Op {
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Op::Cnot { control, targets } => {
                let mut q = alloc::vec![*control];
                q.extend(targets);
                q
            }
            Op::PrepZero(q)
            | Op::PrepPlus(q)
            | Op::H(q)
            | Op::S(q)
            | Op::SDagger(q)
            | Op::X(q)
            | Op::Z(q)
            | Op::MeasureX(q)
            | Op::MeasureZ(q) => alloc::vec![*q],
            Op::InjectZk { qubit, .. } => alloc::vec![*qubit],
        }
    }

    pub fn is_measurement(&self) -> bool {
        matches!(self, Op::MeasureX(_) | Op::MeasureZ(_))
    }

    /// Whether the op is a stabilizer operation. `Z_1 = S` and `Z_0 = Z` are.
    pub fn is_clifford(&self) -> bool {
        match self {
            Op::InjectZk { k, .. } => *k <= 1,
            _ => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CircuitError {
    QubitOutOfRange { op: usize, qubit: usize, qubit_count: usize },
    DuplicateQubit { op: usize, qubit: usize },
    EmptyTargets { op: usize },
    UseAfterMeasurement { op: usize, qubit: usize },
    /// An X component reached a non-Clifford `Z_k` gate.
    NonCliffordPropagation { op: usize, qubit: usize },
    FrameSize { expected: usize, found: usize },
}

impl fmt::Display for CircuitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CircuitError::QubitOutOfRange { op, qubit, qubit_count } => {
                write!(f, "op {op}: qubit {qubit} out of range ({qubit_count} qubits)")
            }
            CircuitError::DuplicateQubit { op, qubit } => write!(f, "op {op}: qubit {qubit} repeated"),
            CircuitError::EmptyTargets { op } => write!(f, "op {op}: CNOT without targets"),
            CircuitError::UseAfterMeasurement { op, qubit } => {
                write!(f, "op {op}: qubit {qubit} used after measurement without re-preparation")
            }
            CircuitError::NonCliffordPropagation { op, qubit } => {
                write!(f, "op {op}: X error on qubit {qubit} meets a non-Clifford Z_k gate")
            }
            CircuitError::FrameSize { expected, found } => {
                write!(f, "frame covers {found} qubits, circuit has {expected}")
            }
        }
    }
}

/// Gate-list circuit over a fixed register.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CliffordCircuit {
    qubit_count: usize,
    ops: Vec<Op>,
}

impl CliffordCircuit {
    pub fn new(qubit_count: usize) -> Self {
        Self { qubit_count, ops: Vec::new() }
    }

    /// Builds and validates a circuit.
    pub fn from_ops(qubit_count: usize, ops: Vec<Op>) -> Result<Self, CircuitError> {
        let c = Self { qubit_count, ops };
        c.validate()?;
        Ok(c)
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn ops(&self) -> &[Op] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn push(&mut self, op: Op) {
        self.ops.push(op);
    }

    pub fn extend(&mut self, ops: impl IntoIterator<Item = Op>) {
        self.ops.extend(ops);
    }

    pub fn measurement_count(&self) -> usize {
        self.ops.iter().filter(|op| op.is_measurement()).count()
    }

    /// Qubit indices in range, CNOT targets distinct from each other and the
    /// control, and no gate on a measured qubit before it is prepared again.
    pub fn validate(&self) -> Result<(), CircuitError> {
        let mut measured = alloc::vec![false; self.qubit_count];
        for (i, op) in self.ops.iter().enumerate() {
            let qubits = op.qubits();
            if let Op::Cnot { targets, .. } = op {
                if targets.is_empty() {
                    return Err(CircuitError::EmptyTargets { op: i });
                }
            }
            for (j, &q) in qubits.iter().enumerate() {
                if q >= self.qubit_count {
                    return Err(CircuitError::QubitOutOfRange { op: i, qubit: q, qubit_count: self.qubit_count });
                }
                if qubits[..j].contains(&q) {
                    return Err(CircuitError::DuplicateQubit { op: i, qubit: q });
                }
            }
            match op {
                Op::PrepZero(q) | Op::PrepPlus(q) => measured[*q] = false,
                _ => {
                    for &q in &qubits {
                        if measured[q] {
                            return Err(CircuitError::UseAfterMeasurement { op: i, qubit: q });
                        }
                    }
                    if let Op::MeasureX(q) | Op::MeasureZ(q) = op {
                        measured[*q] = true;
                    }
                }
            }
        }
        Ok(())
    }

    /// Count of `InjectZk` ops that are not adaptive corrections.
    pub fn injection_count(&self) -> usize {
        self.ops
            .iter()
            .filter(|op| matches!(op, Op::InjectZk { adaptive_correction: false, .. }))
            .count()
    }
}

//! Stabilizer-circuit IR, Pauli-frame propagation, encoder synthesis,
//! teleportation and distillation templates, and exact error enumeration.

mod circuit;
mod encoder;
mod enumerate;
mod frame;
mod templates;

pub use circuit::{CircuitError, CliffordCircuit, Op};
pub use encoder::{synthesize_encoder, verify_encoder, Encoder, EncoderCheck, EncoderError};
pub use enumerate::{
    enumerate_protocol, macwilliams_fastpath, EnumerationError, ProtocolPolynomials, SiteTable, Tally,
    DEFAULT_EXHAUSTIVE_LIMIT, MAX_CHECKS, MAX_EXHAUSTIVE_LIMIT,
};
pub use frame::{conjugate, propagate_frame, propagate_with_faults, Fault, PauliFrame, Propagation};
pub use templates::{
    build_distillation_circuit, build_zk_teleport, correction_gate, DistillationCircuit, Readout, TemplateError,
    ZkTeleport, MAX_TEMPLATE_K,
};

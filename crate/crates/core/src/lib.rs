//! Exact tools for `Z(π/2^k)` magic-state distillation: GF(2) linear algebra,
//! Reed-Muller and quantum Reed-Muller codes, transversality certification,
//! distillation polynomials and thresholds, a stabilizer-circuit oracle, and
//! resource-state counting for RISC and CISC instruction sets.
//!
//! The crate is `no_std` with `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod codes;
pub mod distillation;
pub mod gf2;
pub mod poly;
pub mod protosim;
pub mod resources;
pub mod transversality;

pub use codes::{distillation_code, qrm, reed_muller, CodeError, CssCode, LinearCode};
pub use distillation::{cisc_acceptance, cisc_output_error, threshold, CiscProtocol, DistillationError};
pub use gf2::{BitMatrix, BitVector};
pub use poly::{Polynomial, RationalFunction};
pub use transversality::{certify_zk, ward_test, TransversalityCertificate};

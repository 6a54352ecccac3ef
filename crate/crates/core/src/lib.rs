//! Exact simulation of quantum secret sharing schemes built on classical
//! linear codes, where a subset `A` of the players only measures locally and
//! broadcasts classical outcomes, and the complement `B` recovers the secret.
//!
//! * [`gf`]: arithmetic in GF(p^m) and the field trace.
//! * [`linalg`]: matrices over GF(q), rank and linear solving.
//! * [`code`]: generator matrices, distances and the assisting-subset scan.
//! * [`qsim`]: qudit state vectors, Fourier and `Z^z` operators, measurement.
//! * [`protocol`]: the end-to-end scheme and its verification.
//! * [`schema`]: the JSON code specification format.

pub mod catalog;
pub mod code;
pub mod error;
pub mod gf;
pub mod linalg;
pub mod protocol;
pub mod qsim;
pub mod schema;

pub use code::{Budget, LinearCode, PlayerSet, SubsetReport};
pub use error::{Error, Result};
pub use gf::{Field, FieldElement, FieldParams};
pub use linalg::{encode_word, GFMatrix, GFVector};
pub use protocol::{
    compute_correction, run_protocol, verify_all, verify_theorem1, DecodeIsometry, LoccDecoder,
    ProtocolTranscript,
};
pub use qsim::{encode_secret, fidelity, Secret, StateVector};

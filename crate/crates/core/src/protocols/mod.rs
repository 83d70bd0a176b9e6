//! Simulations of the Arthur-Merlin evaluation protocol and its parts:
//! hashing-based set-size estimation, permanent verification and the full
//! three-round exchange.

mod ama;
mod hash;
mod verify;

pub use ama::{
    ama_simulate, direct_bit, skeleton_system, split_lengths, AmaConfig, Certificate, CheatVariant, Coin, Message,
    ProtocolTranscript, ProverMode, ProverStrategy, Sender,
};
pub use hash::{gs_estimate, phi, phi_bruteforce, phi_witness, psi, GsReport, GsVerdict, HashMatrix};
pub use verify::{permanent_verify, ChainVerdict};

//! Desk-scale workbench for algebraic complexity experiments.
//!
//! The crate is organised around a straight-line program IR ([`circuit`]) and
//! exact polynomial arithmetic ([`algebra`]). On top of those sit:
//!
//! - [`families`]: permanent, Hamiltonian-cycle polynomial, Boolean
//!   interpolation, exponential Boolean sums and projections;
//! - [`universal`]: the universal parameterised polynomial `U_s`, its
//!   truncated coefficient map and the embedding of concrete circuits;
//! - [`systems`]: circuit-encoded polynomial systems, brute-force solving
//!   over `F_p` and prime-density probes;
//! - [`forge`]: search for lexicographically first hard 0/1 coefficient
//!   vectors and sign conditions;
//! - [`protocols`]: hashing-based set-size estimation, permanent
//!   verification by downward self-reducibility and the end-to-end
//!   evaluation protocol;
//! - [`cli`]: the command-line surface used by the `polyforge` binary.

pub mod algebra;
pub mod circuit;
pub mod cli;
pub mod error;
pub mod families;
pub mod forge;
pub mod primes;
pub mod protocols;
pub mod ring;
pub mod systems;
pub mod universal;

pub use error::{Error, Result};

/// Resource limits shared by the expensive operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Budgets {
    /// Maximum number of monomials held by one polynomial during expansion.
    pub monomials: usize,
    /// Maximum number of point evaluations for exhaustive searches.
    pub evaluations: u64,
    /// Maximum number of circuits produced by an enumeration.
    pub circuits: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            monomials: 1_000_000,
            evaluations: 100_000_000,
            circuits: 10_000_000,
        }
    }
}

/// Serializes a value through its `Display` form, for big integers in JSON.
pub(crate) fn ser_display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

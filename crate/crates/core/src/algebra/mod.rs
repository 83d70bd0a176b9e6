//! Exact sparse polynomials over the integers and prime fields, circuit
//! expansion and randomized identity testing.

mod pit;
pub mod poly;

pub use pit::{pit_equal, PitVerdict};
pub use poly::{pretty, Coeffs, Monomial, SparsePoly};

use crate::circuit::{evaluate_in, Circuit};
use crate::error::Result;
use crate::ring::{Polys, TruncatedPolys};

/// Expands `c` into a polynomial. Inputs `x1..xn` become variables `0..n` and
/// parameter slots follow them. With `cap`, monomials of total degree above
/// the cap are dropped after every gate.
pub fn expand(c: &Circuit, domain: Coeffs, cap: Option<u32>, budget: usize) -> Result<SparsePoly> {
    let nvars = c.num_vars() + c.num_params();
    let vars: Vec<SparsePoly> = (0..c.num_vars()).map(|i| SparsePoly::var(nvars, domain, i)).collect();
    let params: Vec<SparsePoly> = (0..c.num_params())
        .map(|i| SparsePoly::var(nvars, domain, c.num_vars() + i))
        .collect();
    match cap {
        Some(cap) => evaluate_in(
            &TruncatedPolys {
                domain,
                nvars,
                cap,
                budget,
            },
            c,
            &vars,
            &params,
        ),
        None => evaluate_in(&Polys { domain, nvars, budget }, c, &vars, &params),
    }
}

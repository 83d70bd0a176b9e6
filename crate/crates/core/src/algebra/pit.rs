use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::circuit::{degree_bound, evaluate_in, Circuit};
use crate::error::{Error, Result};
use crate::ring::Zp;

/// Outcome of a randomized identity test over `F_p`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum PitVerdict {
    /// No disagreement found. If the polynomials differ, this happens with
    /// probability at most `error_bound = (d/p)^trials`.
    Equal { trials: u32, degree_bound: u64, error_bound: f64 },
    /// `witness` lists input values followed by parameter values.
    Different { witness: Vec<u64>, left: u64, right: u64 },
}

impl PitVerdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, PitVerdict::Equal { .. })
    }
}

/// Compares the polynomials computed by `c1` and `c2` modulo `p` at `trials`
/// uniformly random points (parameters are treated as extra variables).
///
/// Refuses when `p` does not exceed the degree bound `d` of either circuit,
/// since a single trial would then carry no guarantee.
pub fn pit_equal(c1: &Circuit, c2: &Circuit, p: u64, trials: u32, seed: u64) -> Result<PitVerdict> {
    if c1.num_vars() != c2.num_vars() || c1.num_params() != c2.num_params() {
        return Err(Error::DimensionMismatch(format!(
            "circuits over ({}, {}) and ({}, {}) inputs/params",
            c1.num_vars(),
            c1.num_params(),
            c2.num_vars(),
            c2.num_params()
        )));
    }
    let field = Zp::new(p)?;
    let d = degree_bound(c1).max(degree_bound(c2));
    if p <= d {
        return Err(Error::Precondition(format!(
            "identity test needs p > degree bound {d}, got p = {p}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let vars: Vec<u64> = (0..c1.num_vars()).map(|_| rng.gen_range(0..p)).collect();
        let params: Vec<u64> = (0..c1.num_params()).map(|_| rng.gen_range(0..p)).collect();
        let left = evaluate_in(&field, c1, &vars, &params)?;
        let right = evaluate_in(&field, c2, &vars, &params)?;
        if left != right {
            let mut witness = vars;
            witness.extend(params);
            return Ok(PitVerdict::Different { witness, left, right });
        }
    }
    Ok(PitVerdict::Equal {
        trials,
        degree_bound: d,
        error_bound: (d as f64 / p as f64).powi(trials as i32),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::parse_circuit;

    #[test]
    fn square_identity() {
        let a = parse_circuit("g1 = in 1\ng2 = const 1\ng3 = add g1 g2\ng4 = mul g3 g3\nout g4").unwrap();
        let b = parse_circuit(
            "g1 = in 1\ng2 = mul g1 g1\ng3 = const 2\ng4 = mul g3 g1\ng5 = add g2 g4\ng6 = const 1\ng7 = add g5 g6\nout g7",
        )
        .unwrap();
        assert!(pit_equal(&a, &b, 101, 20, 7).unwrap().is_equal());
        assert!(pit_equal(&a, &a, 101, 20, 7).unwrap().is_equal());
    }

    #[test]
    fn refuses_small_moduli() {
        let a = parse_circuit("g1 = in 1\ng2 = mul g1 g1\ng3 = mul g2 g2\nout g3").unwrap();
        assert!(matches!(pit_equal(&a, &a, 3, 5, 0), Err(Error::Precondition(_))));
    }

    #[test]
    fn detects_difference() {
        let a = parse_circuit("g1 = in 1\ng2 = mul g1 g1\nout g2").unwrap();
        let b = parse_circuit("g1 = in 1\nout g1").unwrap();
        let PitVerdict::Different { witness, left, right } = pit_equal(&a, &b, 101, 20, 1).unwrap() else {
            panic!("expected a witness");
        };
        assert_eq!(left, witness[0] * witness[0] % 101);
        assert_eq!(right, witness[0]);
    }
}
